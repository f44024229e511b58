//! One-shot reproduction of every worked example, one item per check.
//!
//! Items are deterministic for a fixed seed: no timing, no unordered maps.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{format_scalar, strictly_less};
use crate::comparison::{
    check_boyd_wong_properties, check_matkowski_properties, ComparisonFn, ComparisonKind, Property,
    DEFAULT_GRID, DEFAULT_ITER_BUDGET,
};
use crate::contraction::{certify, reproduce_case_table, InterpolativeSpec, SelfMap, TripleSource};
use crate::error::{Error, Result};
use crate::fixpoint::{
    gaps_nonincreasing, matkowski_envelope_check, picard_iterate, uniqueness_check, verify_fixed_point,
    DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};
use crate::spaces::random::random_valid;
use crate::spaces::{
    builtin_space, check_axioms, AxiomSet, PartialSbSpace, Point, TripleMetric, TupleSource, DEFAULT_UPPER_BOUND,
};
use crate::topology::{
    generate_topology, is_connected, open_ball, separation_report, verify_topology_axioms, CoverFamily, CoverSearch,
    RadiusRule,
};

pub const AXIOM_SAMPLES: usize = 10_000;
pub const BALL_CANDIDATES: usize = 200;
pub const RANDOM_SPACES: usize = 200;
pub const CERTIFY_GRID: usize = 50;
pub const FIXPOINT_SAMPLES: usize = 200;
pub const COVER_INDICES: std::ops::RangeInclusive<i64> = 3..=20;
const EXPECTED_LHS: [f64; 15] =
    [0.0, 243.0, 486.0, 486.0, 243.0, 243.0, 486.0, 243.0, 243.0, 486.0, 243.0, 486.0, 486.0, 486.0, 243.0];

#[derive(Debug, Clone, Default)]
pub struct ReproOptions {
    pub seed: u64,
    /// Replacements for builtin spaces, keyed by builtin name.
    pub overrides: BTreeMap<String, PartialSbSpace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproItem {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// One line per sub-check, prefixed `ok` or `FAIL`.
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub items: Vec<ReproItem>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, id: u8) -> Option<&ReproItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .items
            .iter()
            .map(|i| json!({ "id": i.id, "name": i.name, "passed": i.passed, "details": i.details }))
            .collect();
        json!({ "items": items, "passed": self.passed() })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            out.push_str(&format!("{:>2}  {:<28} {}\n", i.id, i.name, if i.passed { "PASS" } else { "FAIL" }));
            for d in &i.details {
                out.push_str(&format!("      {d}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

/// Collects sub-check lines for one item.
struct Item {
    id: u8,
    name: &'static str,
    passed: bool,
    details: Vec<String>,
}

impl Item {
    fn new(id: u8, name: &'static str) -> Self {
        Item { id, name, passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: impl Into<String>) {
        self.passed &= ok;
        self.details.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, line.into()));
    }

    /// Records an error as a failed sub-check.
    fn guard<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, format!("{what}: {e}"));
                None
            }
        }
    }

    fn finish(self) -> ReproItem {
        ReproItem { id: self.id, name: self.name, passed: self.passed, details: self.details }
    }
}

fn space(opts: &ReproOptions, name: &str) -> Result<PartialSbSpace> {
    match opts.overrides.get(name) {
        Some(s) => Ok(s.clone()),
        None => builtin_space(name),
    }
}

fn set_of(space: &PartialSbSpace, points: impl IntoIterator<Item = Point>) -> Vec<String> {
    let set: BTreeSet<Point> = points.into_iter().collect();
    set.into_iter().map(|p| space.label(p)).collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn axiom_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(1, "axiom suite");
    for name in ["two_point_a", "two_point_b"] {
        let Some(s) = item.guard(name, space(opts, name)) else { continue };
        if let Some(r) = item.guard(name, check_axioms(&s, AxiomSet::PartialSb, TupleSource::Exhaustive)) {
            item.check(r.passed, format!("{name}: exhaustive, {} violations", r.violations.len()));
        }
    }
    for name in ["quintic_ray", "quintic_gap"] {
        let Some(s) = item.guard(name, space(opts, name)) else { continue };
        let s = s.with_upper_bound(DEFAULT_UPPER_BOUND);
        let source = TupleSource::Sampled { count: AXIOM_SAMPLES, seed: opts.seed };
        if let Some(r) = item.guard(name, check_axioms(&s, AxiomSet::PartialSb, source)) {
            item.check(
                r.passed,
                format!("{name}: {AXIOM_SAMPLES} sampled quadruples, {} violations", r.violations.len()),
            );
        }
    }
    if let Some(base) = item.guard("two_point_b", space(opts, "two_point_b")) {
        if let Some((caught, total)) = item.guard("mutations", mutation_sweep(&base)) {
            item.check(caught == total, format!("two_point_b: {caught}/{total} single-entry mutations (-5) caught with exact witnesses"));
        }
    }
    item.finish()
}

/// Lowers each table entry by 5 in turn; counts mutants with at least one
/// violation whose witness re-evaluates to the reported numbers.
fn mutation_sweep(base: &PartialSbSpace) -> Result<(usize, usize)> {
    let TripleMetric::Tabulated(table) = base.metric() else {
        return Err(Error::InvalidArgument("mutation needs a tabulated space".into()));
    };
    let mut caught = 0;
    let entries: Vec<_> = table.entries().collect();
    for &((i, j, k), v) in &entries {
        let mut t = table.clone();
        t.set(i, j, k, v - 5.0);
        let mutant = PartialSbSpace::new(base.carrier().clone(), TripleMetric::Tabulated(t), base.coefficient())?;
        let report = check_axioms(&mutant, AxiomSet::PartialSb, TupleSource::Exhaustive)?;
        let exact = !report.violations.is_empty()
            && report
                .violations
                .iter()
                .all(|v| v.axiom.violation(&mutant, &v.witness) == Some((v.lhs, v.rhs)));
        if exact {
            caught += 1;
        }
    }
    Ok((caught, entries.len()))
}

fn ball_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(2, "ball suite");
    let cases: [(&str, &str, f64, &[&str]); 7] = [
        ("quintic_ray", "1", 3.0, &["1"]),
        ("two_point_a", "1", 0.1, &["1", "2"]),
        ("two_point_a", "1", 1.0, &["1", "2"]),
        ("two_point_a", "1", 100.0, &["1", "2"]),
        ("two_point_a", "2", 1.0, &["2"]),
        ("two_point_b", "1", 0.5, &["1"]),
        ("two_point_b", "2", 3.0, &["2"]),
    ];
    for (name, center, radius, expected) in cases {
        let Some(s) = item.guard(name, space(opts, name)) else { continue };
        let mut candidates = s.grid(BALL_CANDIDATES);
        candidates.extend(s.sample(BALL_CANDIDATES, opts.seed));
        let result = s.parse_point(center).and_then(|c| open_ball(&s, c, radius, &candidates));
        if let Some(ball) = item.guard(name, result) {
            let got = set_of(&s, ball.members.iter().copied());
            let want: Vec<String> = expected.iter().map(|e| e.to_string()).collect();
            item.check(
                got == want,
                format!("{name}: D({center};{}) = {} (expected {})", format_scalar(radius), braces(&got), braces(&want)),
            );
        }
    }
    item.finish()
}

fn topology_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(3, "topology suite");
    let expectations: [(&str, Option<Vec<Vec<&str>>>, (bool, bool, bool), Option<bool>); 2] = [
        ("two_point_a", Some(vec![vec![], vec!["2"], vec!["1", "2"]]), (true, false, false), Some(true)),
        ("two_point_b", None, (true, true, true), Some(false)),
    ];
    for (name, opens, sep, connected) in expectations {
        let Some(s) = item.guard(name, space(opts, name)) else { continue };
        let Some(top) = item.guard(name, generate_topology(&s)) else { continue };
        let got = top.open_set_labels();
        let expected: Vec<Vec<String>> = match opens {
            Some(o) => o.iter().map(|set| set.iter().map(|x| x.to_string()).collect()).collect(),
            // Discrete: the full power set.
            None => {
                let n = top.points().len();
                let mut all: Vec<Vec<String>> = (0u64..1 << n)
                    .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| top.labels()[i].clone()).collect())
                    .collect();
                all.sort_by_key(|set: &Vec<String>| {
                    (set.len(), set.iter().map(|l| top.labels().iter().position(|x| x == l)).collect::<Vec<_>>())
                });
                all
            }
        };
        let shown: Vec<String> = got.iter().map(|s| braces(s)).collect();
        item.check(got == expected, format!("{name}: open sets {}", braces(&shown)));
        item.check(verify_topology_axioms(&top), format!("{name}: topology axioms hold"));
        let r = separation_report(&top);
        item.check(
            (r.t0, r.t1, r.t2) == sep,
            format!("{name}: (T0,T1,T2) = ({},{},{}), expected ({},{},{})", r.t0, r.t1, r.t2, sep.0, sep.1, sep.2),
        );
        let c = is_connected(&top);
        let mut line = format!("{name}: connected = {}", c.connected);
        let mut ok = Some(c.connected) == connected;
        if let Some((u, v)) = &c.separation {
            let (u, v) = (set_of(&s, u.iter().copied()), set_of(&s, v.iter().copied()));
            line.push_str(&format!(" via {} | {}", braces(&u), braces(&v)));
            if name == "two_point_b" {
                ok &= u == ["1"] && v == ["2"];
            }
        }
        item.check(ok, line);
    }
    item.finish()
}

fn t0_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(4, "T0 universality");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut generated = 0;
    let mut t0 = 0;
    let mut counterexample = None;
    for _ in 0..RANDOM_SPACES {
        let Some(s) = random_valid(3, 20, 1.0, 10_000, &mut rng) else { break };
        generated += 1;
        match generate_topology(&s) {
            Ok(top) if separation_report(&top).t0 => t0 += 1,
            _ => {
                counterexample.get_or_insert(s);
            }
        }
    }
    item.check(generated == RANDOM_SPACES, format!("{generated}/{RANDOM_SPACES} valid random 3-point spaces generated"));
    item.check(t0 == generated && counterexample.is_none(), format!("{t0}/{generated} induced topologies are T0"));
    item.finish()
}

fn cover_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(5, "cover witness");
    let Some(ray) = item.guard("quintic_ray", space(opts, "quintic_ray")) else { return item.finish() };
    let indices: Vec<i64> = COVER_INDICES.collect();
    let family = CoverFamily::new(Point::Scalar(1.0), RadiusRule::INDEX, indices.clone());
    let Some(search) = item.guard("cover search", CoverSearch::new(&ray, &family, DEFAULT_UPPER_BOUND)) else {
        return item.finish();
    };
    let center = family.center;
    let base = ray.dist(center, center, center);
    let mut subsets = 0usize;
    let mut confirmed = 0usize;
    let mut witnesses = BTreeSet::new();
    let mut first_miss = None;
    let mut sub = Vec::with_capacity(indices.len());
    for mask in 1u32..1 << indices.len() {
        sub.clear();
        sub.extend(indices.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &n)| n));
        subsets += 1;
        match search.witness(&sub) {
            Ok(Some(w)) => {
                // Independent membership test: ℘(1,1,w) < n + ℘(1,1,1) must fail for every n.
                let outside = sub.iter().all(|&n| !strictly_less(ray.dist(center, center, w), n as f64 + base));
                if outside {
                    confirmed += 1;
                    witnesses.insert(w);
                } else {
                    first_miss.get_or_insert(sub.clone());
                }
            }
            _ => {
                first_miss.get_or_insert(sub.clone());
            }
        }
    }
    let mut line = format!(
        "{confirmed}/{subsets} finite subfamilies of {{D(1;n): n=3..20}} have a confirmed uncovered point; witnesses used: {}",
        braces(&set_of(&ray, witnesses))
    );
    if let Some(m) = first_miss {
        line.push_str(&format!("; first failure at {m:?}"));
    }
    item.check(confirmed == subsets, line);
    item.finish()
}

fn comparison_item() -> ReproItem {
    let mut item = Item::new(6, "comparison suite");
    let tau = ComparisonFn::paper_tau();
    if let Some(r) = item.guard("paper_tau", check_boyd_wong_properties(&tau, &DEFAULT_GRID)) {
        item.check(r.passed(), "paper_tau satisfies the Boyd-Wong properties on the default grid");
    }
    let half = ComparisonFn::half();
    if let Some(r) = item.guard("half", check_matkowski_properties(&half, &DEFAULT_GRID, DEFAULT_ITER_BUDGET)) {
        item.check(r.passed(), "half satisfies the Matkowski properties on the default grid");
    }
    let id_bw = ComparisonFn::identity(ComparisonKind::BoydWong);
    if let Some(r) = item.guard("identity", check_boyd_wong_properties(&id_bw, &DEFAULT_GRID)) {
        let p = r.get(Property::BelowIdentity).unwrap();
        item.check(
            !r.passed() && !p.passed && p.witness.is_some(),
            format!("identity fails below-identity at {}", p.witness.map_or("-".into(), format_scalar)),
        );
    }
    let id_m = ComparisonFn::identity(ComparisonKind::Matkowski);
    if let Some(r) = item.guard("identity", check_matkowski_properties(&id_m, &DEFAULT_GRID, DEFAULT_ITER_BUDGET)) {
        let p = r.get(Property::IterateDecay).unwrap();
        item.check(
            !r.passed() && !p.passed && p.witness.is_some(),
            format!("identity fails iterate-decay at {}", p.witness.map_or("-".into(), format_scalar)),
        );
    }
    item.finish()
}

fn contraction_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(7, "contraction certification");
    let Some(gap) = item.guard("quintic_gap", space(opts, "quintic_gap")) else { return item.finish() };
    let gap = gap.with_upper_bound(DEFAULT_UPPER_BOUND);
    let points = gap.grid(CERTIFY_GRID);
    for kind in [ComparisonKind::BoydWong, ComparisonKind::Matkowski] {
        let spec = InterpolativeSpec::paper(kind);
        if let Some(r) = item.guard(kind.name(), certify(&gap, &spec, &TripleSource::Points(points.clone()))) {
            let fixed = set_of(&gap, r.excluded_fixed_points.iter().copied());
            item.check(
                r.passed && r.failures.is_empty() && fixed == ["0"],
                format!(
                    "{} / {}: {} triples, {} failures, excluded fixed points {}",
                    kind.name(),
                    spec.comparison.name(),
                    r.triples_checked,
                    r.failures.len(),
                    braces(&fixed)
                ),
            );
        }
    }
    let spec = InterpolativeSpec::paper(ComparisonKind::BoydWong);
    if let Some(t) = item.guard("case table", reproduce_case_table(&gap, &spec, CERTIFY_GRID)) {
        let lhs = t.lhs_column();
        let shown: Vec<String> = lhs.iter().map(|&x| format_scalar(x)).collect();
        item.check(lhs == EXPECTED_LHS, format!("case table lhs column {}", braces(&shown)));
        item.check(
            t.all_hold(),
            format!("lhs <= computed rhs minimum in {}/15 subcases", t.rows.iter().filter(|r| r.holds).count()),
        );
        let differing: Vec<&str> = t.rows.iter().filter(|r| r.discrepancy).map(|r| r.label).collect();
        item.details.push(format!(
            "note reference rhs bounds differ by more than 1% in {} subcases: {}",
            differing.len(),
            differing.join(" ")
        ));
    }
    item.finish()
}

fn fixpoint_item(opts: &ReproOptions) -> ReproItem {
    let mut item = Item::new(8, "fixed-point suite");
    let Some(gap) = item.guard("quintic_gap", space(opts, "quintic_gap")) else { return item.finish() };
    let gap = gap.with_upper_bound(DEFAULT_UPPER_BOUND);
    let map = SelfMap::PaperS;
    let half = ComparisonFn::half();
    let zero = Point::Scalar(0.0);
    for a0 in [7.0, 4.0, 64.0, 3.0] {
        let trace = picard_iterate(&gap, &map, Point::Scalar(a0), DEFAULT_TOLERANCE, DEFAULT_MAX_ITER);
        let Some(t) = item.guard("picard", trace) else { continue };
        let envelope = matkowski_envelope_check(&t, &half).map(|e| e.holds).unwrap_or(false);
        let gaps: Vec<String> = t.gaps.iter().map(|&g| format_scalar(g)).collect();
        item.check(
            t.converged && t.limit == Some(zero) && t.steps() <= 3 && gaps_nonincreasing(&t.gaps) && envelope,
            format!(
                "a0={}: orbit {} gaps [{}], envelope {}",
                format_scalar(a0),
                t.orbit.iter().map(|&p| gap.label(p)).collect::<Vec<_>>().join("->"),
                gaps.join(","),
                envelope
            ),
        );
    }
    if let Some(c) = item.guard("verify 0", verify_fixed_point(&gap, &map, zero, DEFAULT_TOLERANCE)) {
        item.check(
            c.is_fixed && c.self_distance_zero && c.self_distance == 0.0,
            format!("0 is fixed: {}, self-distance {}", c.is_fixed, format_scalar(c.self_distance)),
        );
    }
    let mut sample = gap.grid(CERTIFY_GRID);
    sample.extend(gap.sample(FIXPOINT_SAMPLES, opts.seed));
    sample.sort();
    sample.dedup();
    if let Some(u) = item.guard("uniqueness", uniqueness_check(&gap, &map, &sample, zero, DEFAULT_TOLERANCE)) {
        item.check(u.unique, format!("0 is the only fixed point among {} sampled points", sample.len()));
    }
    item.finish()
}

fn items(opts: &ReproOptions) -> Vec<ReproItem> {
    vec![
        axiom_item(opts),
        ball_item(opts),
        topology_item(opts),
        t0_item(opts),
        cover_item(opts),
        comparison_item(),
        contraction_item(opts),
        fixpoint_item(opts),
    ]
}

/// Runs items 1-8, then item 9: a second run must serialize identically.
pub fn run_repro(opts: &ReproOptions) -> ReproReport {
    let first = items(opts);
    let again = items(opts);
    let encode = |v: &[ReproItem]| serde_json::to_string(&ReproReport { items: v.to_vec() }.to_json()).unwrap();
    let mut det = Item::new(9, "determinism");
    det.check(encode(&first) == encode(&again), "second run reproduces items 1-8 byte for byte");
    let mut all = first;
    all.push(det.finish());
    ReproReport { items: all }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_items_pass() {
        let opts = ReproOptions::default();
        for item in [ball_item(&opts), topology_item(&opts), comparison_item(), fixpoint_item(&opts)] {
            assert!(item.passed, "{item:?}");
        }
    }

    #[test]
    fn mutated_override_fails_axiom_item() {
        let mut b = builtin_space("two_point_b").unwrap();
        if let TripleMetric::Tabulated(t) = b.metric() {
            let mut t = t.clone();
            t.set(0, 0, 1, 3.0);
            b = PartialSbSpace::new(b.carrier().clone(), TripleMetric::Tabulated(t), 1.0).unwrap();
        }
        let opts = ReproOptions { seed: 0, overrides: [("two_point_b".to_string(), b)].into() };
        let item = axiom_item(&opts);
        assert!(!item.passed);
        assert!(item.details.iter().any(|d| d.starts_with("FAIL two_point_b: exhaustive")));
    }
}
