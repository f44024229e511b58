//! Text and JSON renderings of every report type, with points shown by
//! their carrier labels.
//!
//! Both renderings are produced from the same values, so verdicts and numbers
//! agree between formats. JSON objects have sorted keys.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::arith::{format_scalar, is_exact};
use crate::comparison::{ComparisonFn, ComparisonReport};
use crate::contraction::{CaseTable, CertificateReport, InterpolativeSpec};
use crate::fixpoint::{ConvergenceReport, EnvelopeCheck, FixedPointCheck, IterationTrace, UniquenessCheck};
use crate::spaces::{AxiomReport, PartialSbSpace, Point};
use crate::topology::{Connectedness, CoverFamily, FiniteTopology, OpenBall, SeparationReport};

/// A rendered report. `verdict` is `None` for pure queries, which always
/// succeed.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub verdict: Option<bool>,
}

impl Rendered {
    fn query(json: Value, text: String) -> Self {
        Rendered { json, text, verdict: None }
    }

    fn check(json: Value, text: String, passed: bool) -> Self {
        Rendered { json, text, verdict: Some(passed) }
    }

    pub fn passed(&self) -> bool {
        self.verdict.unwrap_or(true)
    }
}

/// Integral values as JSON integers, everything else as floats.
pub fn num(x: f64) -> Value {
    if is_exact(x) {
        json!(x as i64)
    } else {
        json!(x)
    }
}

fn labels(space: &PartialSbSpace, points: &[Point]) -> Vec<String> {
    points.iter().map(|&p| space.label(p)).collect()
}

fn set_text(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn tuple_text(items: &[String]) -> String {
    format!("({})", items.join(", "))
}

fn verdict_word(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn space_name(space: &PartialSbSpace) -> String {
    space.name().unwrap_or("<file>").to_string()
}

pub fn axioms(space: &PartialSbSpace, report: &AxiomReport) -> Rendered {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom.to_string(),
                "witness": labels(space, &v.witness),
                "lhs": num(v.lhs),
                "rhs": num(v.rhs),
            })
        })
        .collect();
    let json = json!({
        "space": space_name(space),
        "axiom_set": report.set.name(),
        "checked_count": report.checked_count,
        "passed": report.passed,
        "violations": violations,
    });
    let mut text = format!(
        "{}: {} axioms over {} checks: {} ({} violations)\n",
        space_name(space),
        report.set,
        report.checked_count,
        verdict_word(report.passed),
        report.violations.len()
    );
    for v in &report.violations {
        let _ = writeln!(
            text,
            "  {} at {}: lhs {} vs rhs {}",
            v.axiom,
            tuple_text(&labels(space, &v.witness)),
            format_scalar(v.lhs),
            format_scalar(v.rhs)
        );
    }
    Rendered::check(json, text, report.passed)
}

pub fn ball(space: &PartialSbSpace, ball: &OpenBall, truncated: bool) -> Rendered {
    let members: Vec<Point> = ball.members.iter().copied().collect();
    let members = labels(space, &members);
    let json = json!({
        "center": space.label(ball.center),
        "radius": num(ball.radius),
        "members": members,
        "sampled": truncated,
    });
    let mut text = format!(
        "D({}; {}) = {}\n",
        space.label(ball.center),
        format_scalar(ball.radius),
        set_text(&members)
    );
    if truncated {
        text.push_str("  (members among sampled candidates)\n");
    }
    Rendered::query(json, text)
}

pub fn topology(topology: &FiniteTopology, axioms_hold: bool) -> Rendered {
    let opens = topology.open_set_labels();
    let json = json!({
        "points": topology.labels(),
        "open_sets": opens,
        "count": opens.len(),
        "topology_axioms_hold": axioms_hold,
    });
    let rendered: Vec<String> = opens.iter().map(|s| set_text(s)).collect();
    let text = format!(
        "{} open sets: {{{}}}\ntopology axioms: {}\n",
        opens.len(),
        rendered.join(", "),
        if axioms_hold { "hold" } else { "VIOLATED" }
    );
    Rendered::query(json, text)
}

pub fn separation(topology: &FiniteTopology, report: &SeparationReport) -> Rendered {
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "property": format!("{:?}", w.property),
                "pair": [topology.label_of(w.pair.0), topology.label_of(w.pair.1)],
                "open_sets_searched": w.open_sets_searched,
            })
        })
        .collect();
    let json = json!({ "t0": report.t0, "t1": report.t1, "t2": report.t2, "failures": witnesses });
    let mut text = format!("T0: {}\nT1: {}\nT2: {}\n", report.t0, report.t1, report.t2);
    for w in &report.witnesses {
        let _ = writeln!(
            text,
            "  {:?} fails for ({}, {}) after {} open sets",
            w.property,
            topology.label_of(w.pair.0),
            topology.label_of(w.pair.1),
            w.open_sets_searched
        );
    }
    Rendered::query(json, text)
}

pub fn connected(topology: &FiniteTopology, c: &Connectedness) -> Rendered {
    let split = c.separation.as_ref().map(|(u, v)| {
        let u: Vec<String> = u.iter().map(|&p| topology.label_of(p)).collect();
        let v: Vec<String> = v.iter().map(|&p| topology.label_of(p)).collect();
        (u, v)
    });
    let json = json!({
        "connected": c.connected,
        "separation": split.as_ref().map(|(u, v)| json!([u, v])),
    });
    let mut text = format!("connected: {}\n", c.connected);
    if let Some((u, v)) = &split {
        let _ = writeln!(text, "  separation: {} | {}", set_text(u), set_text(v));
    }
    Rendered::query(json, text)
}

pub fn cover_witness(space: &PartialSbSpace, family: &CoverFamily, subfamily: &[i64], witness: Option<Point>) -> Rendered {
    let json = json!({
        "center": space.label(family.center),
        "radius_rule": family.rule.to_string(),
        "subfamily": subfamily,
        "witness": witness.map(|w| space.label(w)),
    });
    let balls: Vec<String> = subfamily
        .iter()
        .map(|&n| format!("D({}; {})", space.label(family.center), format_scalar(family.rule.radius(n))))
        .collect();
    let text = match witness {
        Some(w) => format!("{} lies in none of {}\n", space.label(w), balls.join(", ")),
        None => format!("no uncovered point found for {}\n", balls.join(", ")),
    };
    Rendered::query(json, text)
}

pub fn comparison(f: &ComparisonFn, report: &ComparisonReport) -> Rendered {
    let results: Vec<Value> = report
        .results
        .iter()
        .map(|r| json!({ "property": r.property, "passed": r.passed, "witness": r.witness.map(num) }))
        .collect();
    let json = json!({
        "function": report.function,
        "kind": f.kind.name(),
        "passed": report.passed(),
        "properties": results,
    });
    let mut text = format!("{}: {}\n", f, verdict_word(report.passed()));
    for r in &report.results {
        let _ = write!(text, "  {:<14} {}", r.property.name(), verdict_word(r.passed));
        if let Some(w) = r.witness {
            let _ = write!(text, " at {}", format_scalar(w));
        }
        text.push('\n');
    }
    Rendered::check(json, text, report.passed())
}

fn spec_json(spec: &InterpolativeSpec) -> Value {
    json!({
        "p": num(spec.p), "q": num(spec.q), "r": num(spec.r), "s": num(spec.s),
        "map": spec.map.name(),
        "comparison": spec.comparison.name(),
        "kind": spec.kind().name(),
    })
}

pub fn certificate(space: &PartialSbSpace, spec: &InterpolativeSpec, report: &CertificateReport) -> Rendered {
    let fixed: Vec<Point> = report.excluded_fixed_points.iter().copied().collect();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({ "triple": labels(space, &f.triple), "lhs": num(f.lhs), "rhs": num(f.rhs) }))
        .collect();
    let json = json!({
        "space": space_name(space),
        "spec": spec_json(spec),
        "triples_checked": report.triples_checked,
        "triples_skipped": report.triples_skipped,
        "excluded_fixed_points": labels(space, &fixed),
        "min_margin": report.min_margin.map(num),
        "failures": failures,
        "passed": report.passed,
    });
    let mut text = format!(
        "{} contraction on {} ({}, p/q/r/s = {}): {}\n  triples checked: {}, skipped: {}\n  excluded fixed points: {}\n",
        spec.kind().name(),
        space_name(space),
        spec.comparison.name(),
        spec.exponents().iter().map(|&e| format_scalar(e)).collect::<Vec<_>>().join("/"),
        verdict_word(report.passed),
        report.triples_checked,
        report.triples_skipped,
        set_text(&labels(space, &fixed)),
    );
    if let Some(m) = report.min_margin {
        let _ = writeln!(text, "  min margin: {}", format_scalar(m));
    }
    for f in &report.failures {
        let _ = writeln!(
            text,
            "  failure at {}: lhs {} > rhs {}",
            tuple_text(&labels(space, &f.triple)),
            format_scalar(f.lhs),
            format_scalar(f.rhs)
        );
    }
    Rendered::check(json, text, report.passed)
}

pub fn case_table(space: &PartialSbSpace, table: &CaseTable) -> Rendered {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "subcase": r.label,
                "condition": r.condition,
                "lhs": num(r.lhs),
                "lhs_constant": r.lhs_constant,
                "rhs_min": num(r.rhs_min),
                "argmin": labels(space, &r.argmin),
                "paper_bound": r.paper_bound.map(num),
                "discrepancy": r.discrepancy,
                "holds": r.holds,
                "triples": r.triples,
            })
        })
        .collect();
    let passed = table.all_hold();
    let json = json!({
        "kind": table.kind.name(),
        "special_point": space.label(table.special),
        "rows": rows,
        "all_hold": passed,
    });
    let text = format!("{}all subcases hold: {}\n", table.render(), passed);
    Rendered::check(json, text, passed)
}

/// Everything the `fixpoint` command reports about one trace.
#[derive(Debug, Clone)]
pub struct FixpointSummary<'a> {
    pub trace: &'a IterationTrace,
    pub limit_check: Option<FixedPointCheck>,
    pub convergence: Option<ConvergenceReport>,
    pub envelope: Option<EnvelopeCheck>,
    pub uniqueness: Option<UniquenessCheck>,
}

pub fn fixpoint(space: &PartialSbSpace, s: &FixpointSummary<'_>) -> Rendered {
    let t = s.trace;
    let gaps: Vec<Value> = t.gaps.iter().map(|&g| num(g)).collect();
    let selfd: Vec<Value> = t.self_distances.iter().map(|&g| num(g)).collect();
    let mut json = json!({
        "orbit": labels(space, &t.orbit),
        "gaps": gaps,
        "self_distances": selfd,
        "converged": t.converged,
        "steps": t.steps(),
        "limit": t.limit.map(|p| space.label(p)),
        "limit_gap": t.limit_gap.map(num),
    });
    let mut text = format!(
        "orbit: {}\ngaps: {}\nconverged: {} after {} steps",
        labels(space, &t.orbit).join(" -> "),
        t.gaps.iter().map(|&g| format_scalar(g)).collect::<Vec<_>>().join(", "),
        t.converged,
        t.steps()
    );
    if let Some(l) = t.limit {
        let _ = write!(text, ", limit {}", space.label(l));
    }
    text.push('\n');
    let mut passed = t.converged;
    if let Some(c) = &s.limit_check {
        json["limit_check"] = json!({
            "is_fixed": c.is_fixed,
            "self_distance_zero": c.self_distance_zero,
            "self_distance": num(c.self_distance),
        });
        let _ = writeln!(
            text,
            "fixed: {}, self-distance {} (zero: {})",
            c.is_fixed,
            format_scalar(c.self_distance),
            c.self_distance_zero
        );
        passed &= c.is_fixed && c.self_distance_zero;
    }
    if let Some(c) = &s.convergence {
        json["convergence"] = json!({
            "gap_monotone_nonincreasing": c.gap_monotone_nonincreasing,
            "gap_limit": num(c.gap_limit),
            "cauchy_pairs_checked": c.cauchy_pairs_checked,
            "max_pair_deviation": num(c.max_pair_deviation),
            "self_distance_at_limit": num(c.self_distance_at_limit),
        });
        let _ = writeln!(
            text,
            "gaps nonincreasing: {}, tail pairs: {}, max pair deviation: {}",
            c.gap_monotone_nonincreasing,
            c.cauchy_pairs_checked,
            format_scalar(c.max_pair_deviation)
        );
        passed &= c.gap_monotone_nonincreasing;
    }
    if let Some(e) = &s.envelope {
        json["envelope"] = json!({ "holds": e.holds, "first_violation": e.first_violation });
        let _ = write!(text, "envelope: {}", e.holds);
        if let Some(k) = e.first_violation {
            let _ = write!(text, " (first violation at k={k})");
        }
        text.push('\n');
        passed &= e.holds;
    }
    if let Some(u) = &s.uniqueness {
        json["uniqueness"] = json!({ "unique": u.unique, "counterexample": u.counterexample.map(|p| space.label(p)) });
        let _ = write!(text, "unique among sample: {}", u.unique);
        if let Some(p) = u.counterexample {
            let _ = write!(text, " (also fixed: {})", space.label(p));
        }
        text.push('\n');
        passed &= u.unique;
    }
    json["passed"] = json!(passed);
    Rendered::check(json, text, passed)
}
