use std::fmt;

use serde::Serialize;

use super::{PartialSbSpace, Point};
use crate::arith::{approx_eq, at_most};
use crate::error::{Error, Result};
use crate::sampling::TupleSampler;

/// Points drawn from region carriers before sampled tuples are formed.
pub const SAMPLE_POOL: usize = 128;

/// Which family of generalized metric axioms to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomSet {
    /// S-metric: zero exactly on the diagonal, plain triangle inequality.
    SMetric,
    /// Partial S-metric: four axioms, triangle with self-distance correction.
    PartialSMetric,
    /// S_b-metric: zero on the diagonal, symmetry, scaled triangle.
    SbMetric,
    /// Partial S_b-metric.
    PartialSb,
}

impl AxiomSet {
    pub const ALL: [AxiomSet; 4] =
        [AxiomSet::SMetric, AxiomSet::PartialSMetric, AxiomSet::SbMetric, AxiomSet::PartialSb];

    pub fn axiom_count(self) -> u8 {
        match self {
            AxiomSet::SMetric => 2,
            AxiomSet::SbMetric => 3,
            AxiomSet::PartialSMetric | AxiomSet::PartialSb => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSet::SMetric => "s-metric",
            AxiomSet::PartialSMetric => "partial-s-metric",
            AxiomSet::SbMetric => "sb-metric",
            AxiomSet::PartialSb => "partial-sb",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        AxiomSet::ALL.into_iter().find(|s| s.name() == text)
    }

    fn rule(self, number: u8) -> Rule {
        use AxiomSet::*;
        match (self, number) {
            (SMetric, 1) | (SbMetric, 1) => Rule::ZeroIdentity,
            (SMetric, 2) => Rule::Triangle { scaled: false, subtract_self: false },
            (PartialSMetric, 1) | (PartialSb, 1) => Rule::SelfIdentity,
            (PartialSMetric, 2) | (PartialSb, 2) => Rule::SelfMinimal,
            (PartialSMetric, 3) | (PartialSb, 3) | (SbMetric, 2) => Rule::Symmetry,
            (PartialSMetric, 4) => Rule::Triangle { scaled: false, subtract_self: true },
            (SbMetric, 3) => Rule::Triangle { scaled: true, subtract_self: false },
            (PartialSb, 4) => Rule::Triangle { scaled: true, subtract_self: true },
            _ => unreachable!("axiom {number} is not part of {}", self.name()),
        }
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One checked condition. `Codomain` is the requirement that the distance
/// maps into `[0, ∞)`; the others are numbered as in their definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Codomain,
    Listed { set: AxiomSet, number: u8 },
}

impl Axiom {
    pub fn arity(self) -> usize {
        self.rule().arity()
    }

    fn rule(self) -> Rule {
        match self {
            Axiom::Codomain => Rule::Codomain,
            Axiom::Listed { set, number } => set.rule(number),
        }
    }

    /// Evaluates the axiom on `witness`, returning `(lhs, rhs)` when it is
    /// violated.
    pub fn violation(self, space: &PartialSbSpace, witness: &[Point]) -> Option<(f64, f64)> {
        self.rule().violation(space, witness)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Codomain => f.write_str("codomain"),
            Axiom::Listed { set, number } => write!(f, "{set}/{number}"),
        }
    }
}

impl Serialize for Axiom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    Codomain,
    /// `℘(p,q,r) = 0` iff `p = q = r`.
    ZeroIdentity,
    /// `p = q = r` iff `℘(p,q,r) = ℘(p,p,p) = ℘(q,q,q) = ℘(r,r,r)`.
    SelfIdentity,
    /// `℘(p,p,p) <= ℘(p,q,r)`.
    SelfMinimal,
    /// `℘(p,p,q) = ℘(q,q,p)`.
    Symmetry,
    /// `℘(p,q,r) <= k(℘(p,p,s) + ℘(q,q,s) + ℘(r,r,s)) - [℘(s,s,s)]`.
    Triangle { scaled: bool, subtract_self: bool },
}

impl Rule {
    fn arity(self) -> usize {
        match self {
            Rule::Symmetry => 2,
            Rule::Triangle { .. } => 4,
            _ => 3,
        }
    }

    fn violation(self, space: &PartialSbSpace, w: &[Point]) -> Option<(f64, f64)> {
        let d = |a, b, c| space.dist(a, b, c);
        match self {
            Rule::Codomain => {
                let v = d(w[0], w[1], w[2]);
                (!(v.is_finite() && v >= 0.0)).then_some((v, 0.0))
            }
            Rule::ZeroIdentity => {
                let v = d(w[0], w[1], w[2]);
                let diagonal = w[0] == w[1] && w[1] == w[2];
                (diagonal != approx_eq(v, 0.0)).then_some((v, 0.0))
            }
            Rule::SelfIdentity => {
                let (p, q, r) = (w[0], w[1], w[2]);
                let v = d(p, q, r);
                let (sp, sq, sr) = (d(p, p, p), d(q, q, q), d(r, r, r));
                let all_equal = approx_eq(v, sp) && approx_eq(sp, sq) && approx_eq(sq, sr);
                let diagonal = p == q && q == r;
                // Both directions of the "iff".
                (diagonal != all_equal).then_some((v, sp))
            }
            Rule::SelfMinimal => {
                let (s, v) = (d(w[0], w[0], w[0]), d(w[0], w[1], w[2]));
                (!at_most(s, v)).then_some((s, v))
            }
            Rule::Symmetry => {
                let (a, b) = (d(w[0], w[0], w[1]), d(w[1], w[1], w[0]));
                (!approx_eq(a, b)).then_some((a, b))
            }
            Rule::Triangle { scaled, subtract_self } => {
                let (p, q, r, s) = (w[0], w[1], w[2], w[3]);
                let lhs = d(p, q, r);
                let k = if scaled { space.coefficient() } else { 1.0 };
                let mut rhs = k * (d(p, p, s) + d(q, q, s) + d(r, r, s));
                if subtract_self {
                    rhs -= d(s, s, s);
                }
                (!at_most(lhs, rhs)).then_some((lhs, rhs))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleSource {
    /// Every tuple of a finite carrier.
    Exhaustive,
    /// `count` random quadruples; each axiom reads the prefix it needs.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub set: AxiomSet,
    pub checked_count: usize,
    /// Sorted by axiom then witness, without duplicates.
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl AxiomReport {
    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

/// Checks every axiom of `set` (plus the codomain condition) over the tuples
/// produced by `source`.
pub fn check_axioms(space: &PartialSbSpace, set: AxiomSet, source: TupleSource) -> Result<AxiomReport> {
    let axioms: Vec<Axiom> = std::iter::once(Axiom::Codomain)
        .chain((1..=set.axiom_count()).map(|number| Axiom::Listed { set, number }))
        .collect();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let mut visit = |axiom: Axiom, tuple: &[Point]| {
        checked += 1;
        if let Some((lhs, rhs)) = axiom.violation(space, tuple) {
            violations.push(Violation { axiom, witness: tuple.to_vec(), lhs, rhs });
        }
    };

    match source {
        TupleSource::Exhaustive => {
            let points = space.carrier().finite_points().ok_or(Error::InfeasibleExhaustive)?;
            for &axiom in &axioms {
                for_each_tuple(points, axiom.arity(), |t| visit(axiom, t));
            }
        }
        TupleSource::Sampled { count, seed } => {
            let pool = space.sample(SAMPLE_POOL, seed);
            let mut sampler = TupleSampler::new(&pool, space.isolated_points(), seed);
            for _ in 0..count {
                let quad = sampler.tuple(4);
                for &axiom in &axioms {
                    visit(axiom, &quad[..axiom.arity()]);
                }
            }
        }
    }

    violations.sort_by(|a, b| (a.axiom, &a.witness).cmp(&(b.axiom, &b.witness)));
    violations.dedup_by(|a, b| a.axiom == b.axiom && a.witness == b.witness);
    Ok(AxiomReport { set, checked_count: checked, passed: violations.is_empty(), violations })
}

/// Calls `f` on every `arity`-tuple over `points` in lexicographic order.
pub(crate) fn for_each_tuple(points: &[Point], arity: usize, mut f: impl FnMut(&[Point])) {
    let n = points.len();
    if n == 0 {
        return;
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<Point> = vec![points[0]; arity];
    loop {
        for (slot, &i) in tuple.iter_mut().zip(&idx) {
            *slot = points[i];
        }
        f(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}
