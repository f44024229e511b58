//! Interpolative Boyd-Wong and Matkowski contraction inequalities.
//!
//! For a self-map `S` and exponents `p, q, r, s` the inequality reads
//!
//! ```text
//! ℘(Sa, Sb, Sc) <= φ( ℘(a,b,c)^p · ℘(a,a,Sa)^q · ℘(b,b,Sb)^r · ℘(c,c,Sc)^s
//!                     · [(℘(Sa,Sa,b) + ℘(Sb,Sb,c)) / 2t]^(1-p-q-r-s) )
//! ```
//!
//! for all `a, b, c` outside `Fix(S)`, where `φ` is a Boyd-Wong or Matkowski
//! comparison function.

mod case_table;

pub use case_table::{reproduce_case_table, CaseRow, CaseTable, PAPER_RHS_BOUNDS};

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::at_most;
use crate::comparison::{ComparisonFn, ComparisonKind};
use crate::error::{Error, Result};
use crate::sampling::TupleSampler;
use crate::spaces::{describe_point, PartialSbSpace, Point, SAMPLE_POOL};

/// A self-map of a carrier.
#[derive(Debug, Clone, PartialEq)]
pub enum SelfMap {
    /// `0` on `{0, 3}`, `3` everywhere else.
    PaperS,
    Identity,
    Constant(Point),
    /// Explicit images; points without an entry are outside the map's domain.
    Tabulated(BTreeMap<Point, Point>),
}

impl SelfMap {
    /// `S(x)`, checked against the carrier.
    pub fn apply(&self, space: &PartialSbSpace, x: Point) -> Result<Point> {
        space.check_point(x)?;
        let image = match self {
            SelfMap::PaperS => match x {
                Point::Scalar(v) if v == 0.0 || v == 3.0 => Point::Scalar(0.0),
                Point::Scalar(_) => Point::Scalar(3.0),
                Point::Label(_) => {
                    return Err(Error::InvalidArgument("paper_S needs a scalar carrier".into()))
                }
            },
            SelfMap::Identity => x,
            SelfMap::Constant(c) => *c,
            SelfMap::Tabulated(t) => *t
                .get(&x)
                .ok_or_else(|| Error::InvalidArgument(format!("map is undefined at {}", space.label(x))))?,
        };
        if space.contains(image) {
            Ok(image)
        } else {
            Err(Error::MapLeavesCarrier { from: space.label(x) })
        }
    }

    pub fn name(&self) -> String {
        match self {
            SelfMap::PaperS => "paper_S".into(),
            SelfMap::Identity => "identity".into(),
            SelfMap::Constant(c) => format!("constant:{}", describe_point(*c)),
            SelfMap::Tabulated(t) => format!("tabulated[{}]", t.len()),
        }
    }
}

/// Exponents, self-map and comparison function of an interpolative
/// contraction. The comparison function's kind selects the inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolativeSpec {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub comparison: ComparisonFn,
    pub map: SelfMap,
}

impl InterpolativeSpec {
    pub fn new(exponents: [f64; 4], comparison: ComparisonFn, map: SelfMap) -> Result<Self> {
        let [p, q, r, s] = exponents;
        let spec = InterpolativeSpec { p, q, r, s, comparison, map };
        spec.validate()?;
        Ok(spec)
    }

    /// `p = q = r = s = 1/5` with `paper_S`, under `paper_tau` (Boyd-Wong) or
    /// `half` (Matkowski).
    pub fn paper(kind: ComparisonKind) -> Self {
        let comparison = match kind {
            ComparisonKind::BoydWong => ComparisonFn::paper_tau(),
            ComparisonKind::Matkowski => ComparisonFn::half(),
        };
        InterpolativeSpec { p: 0.2, q: 0.2, r: 0.2, s: 0.2, comparison, map: SelfMap::PaperS }
    }

    pub fn kind(&self) -> ComparisonKind {
        self.comparison.kind
    }

    pub fn exponents(&self) -> [f64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    /// Weight of the averaged bracket, `1 - p - q - r - s`.
    pub fn remainder(&self) -> f64 {
        1.0 - self.p - self.q - self.r - self.s
    }

    pub fn validate(&self) -> Result<()> {
        for (name, e) in ["p", "q", "r", "s"].iter().zip(self.exponents()) {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidExponents(format!("{name} = {e} is not in (0, 1)")));
            }
        }
        let sum: f64 = self.exponents().iter().sum();
        if sum >= 1.0 {
            return Err(Error::InvalidExponents(format!("p + q + r + s = {sum} is not below 1")));
        }
        Ok(())
    }
}

fn power(base: f64, e: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        base.powf(e)
    }
}

/// Right-hand side of the inequality at `(a, b, c)`.
pub fn rhs_value(space: &PartialSbSpace, spec: &InterpolativeSpec, a: Point, b: Point, c: Point) -> Result<f64> {
    let (sa, sb, sc) = (spec.map.apply(space, a)?, spec.map.apply(space, b)?, spec.map.apply(space, c)?);
    let d = |x, y, z| space.dist(x, y, z);
    let t = space.coefficient();
    let bracket = (d(sa, sa, b) + d(sb, sb, c)) / (2.0 * t);
    let inner = power(d(a, b, c), spec.p)
        * power(d(a, a, sa), spec.q)
        * power(d(b, b, sb), spec.r)
        * power(d(c, c, sc), spec.s)
        * power(bracket, spec.remainder());
    Ok(spec.comparison.eval(inner))
}

/// Left-hand side `℘(Sa, Sb, Sc)`.
pub fn lhs_value(space: &PartialSbSpace, map: &SelfMap, a: Point, b: Point, c: Point) -> Result<f64> {
    Ok(space.dist(map.apply(space, a)?, map.apply(space, b)?, map.apply(space, c)?))
}

/// Which triples [`certify`] evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum TripleSource {
    /// Every triple of a finite carrier.
    Exhaustive,
    /// Every triple over the given points.
    Points(Vec<Point>),
    /// `count` random triples over a deterministic sample of the carrier.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub triple: [Point; 3],
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub kind: ComparisonKind,
    /// Triples evaluated, i.e. those avoiding `Fix(S)`.
    pub triples_checked: usize,
    /// Triples skipped because they contain a fixed point.
    pub triples_skipped: usize,
    /// `Fix(S)` restricted to the points the triples were drawn from.
    pub excluded_fixed_points: BTreeSet<Point>,
    /// Sorted by triple.
    pub failures: Vec<Failure>,
    /// Smallest `rhs - lhs`; `None` when nothing was checked.
    pub min_margin: Option<f64>,
    pub passed: bool,
}

/// The sampled points `x` with `S(x) = x`.
pub fn fixed_points_bruteforce(space: &PartialSbSpace, map: &SelfMap, sample: &[Point]) -> Result<BTreeSet<Point>> {
    if sample.is_empty() {
        return Err(Error::InvalidArgument("sample must be nonempty".into()));
    }
    let mut fixed = BTreeSet::new();
    for &x in sample {
        if map.apply(space, x)? == x {
            fixed.insert(x);
        }
    }
    Ok(fixed)
}

/// Evaluates both sides on every generated triple outside `Fix(S)`.
pub fn certify(space: &PartialSbSpace, spec: &InterpolativeSpec, source: &TripleSource) -> Result<CertificateReport> {
    spec.validate()?;
    let (points, triples): (Vec<Point>, Vec<[Point; 3]>) = match source {
        TripleSource::Exhaustive => {
            let pts = space.carrier().finite_points().ok_or(Error::InfeasibleExhaustive)?.to_vec();
            let all = all_triples(&pts);
            (pts, all)
        }
        TripleSource::Points(pts) => {
            let mut pts = pts.clone();
            pts.sort();
            pts.dedup();
            let all = all_triples(&pts);
            (pts, all)
        }
        &TripleSource::Sampled { count, seed } => {
            let pool = space.sample(SAMPLE_POOL, seed);
            let mut sampler = TupleSampler::new(&pool, space.isolated_points(), seed);
            let triples = (0..count)
                .map(|_| {
                    let t = sampler.tuple(3);
                    [t[0], t[1], t[2]]
                })
                .collect();
            (pool, triples)
        }
    };
    let fixed = fixed_points_bruteforce(space, &spec.map, &points)?;

    let mut failures = Vec::new();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut min_margin: Option<f64> = None;
    for triple in triples {
        let [a, b, c] = triple;
        if triple.iter().any(|x| fixed.contains(x)) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let lhs = lhs_value(space, &spec.map, a, b, c)?;
        let rhs = rhs_value(space, spec, a, b, c)?;
        let margin = rhs - lhs;
        min_margin = Some(min_margin.map_or(margin, |m: f64| m.min(margin)));
        if !at_most(lhs, rhs) {
            failures.push(Failure { triple, lhs, rhs });
        }
    }
    failures.sort_by_key(|x| x.triple);
    failures.dedup_by(|x, y| x.triple == y.triple);
    Ok(CertificateReport {
        kind: spec.kind(),
        triples_checked: checked,
        triples_skipped: skipped,
        excluded_fixed_points: fixed,
        passed: failures.is_empty(),
        failures,
        min_margin,
    })
}

fn all_triples(points: &[Point]) -> Vec<[Point; 3]> {
    let mut out = Vec::with_capacity(points.len().pow(3));
    for &a in points {
        for &b in points {
            for &c in points {
                out.push([a, b, c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::builtin_space;

    fn s(x: f64) -> Point {
        Point::Scalar(x)
    }

    fn gap() -> PartialSbSpace {
        builtin_space("quintic_gap").unwrap()
    }

    #[test]
    fn rhs_at_four() {
        let spec = InterpolativeSpec::paper(ComparisonKind::BoydWong);
        let rhs = rhs_value(&gap(), &spec, s(4.0), s(4.0), s(4.0)).unwrap();
        // Factors: ℘(4,4,4) = 1024, ℘(4,4,3) = 2534 (three times), bracket 2534.
        let oracle = (1024f64.ln() * 0.2 + 2534f64.ln() * 0.8).exp() / 2.0;
        assert!((rhs - oracle).abs() < 1e-9 * oracle);
        assert!((rhs - 1057.2).abs() < 0.5, "{rhs}");
    }

    #[test]
    fn fixed_triple_has_zero_lhs() {
        let spec = InterpolativeSpec::paper(ComparisonKind::BoydWong);
        assert_eq!(lhs_value(&gap(), &spec.map, s(3.0), s(3.0), s(3.0)).unwrap(), 0.0);
        assert!(rhs_value(&gap(), &spec, s(3.0), s(3.0), s(3.0)).unwrap() >= 0.0);
    }

    #[test]
    fn exponent_validation() {
        let tau = ComparisonFn::paper_tau();
        let err = InterpolativeSpec::new([0.25; 4], tau.clone(), SelfMap::PaperS).unwrap_err();
        assert!(matches!(err, Error::InvalidExponents(_)));
        assert!(InterpolativeSpec::new([0.0, 0.2, 0.2, 0.2], tau.clone(), SelfMap::PaperS).is_err());
        assert!(InterpolativeSpec::new([0.2; 4], tau, SelfMap::PaperS).is_ok());
    }

    #[test]
    fn zero_factor_zeroes_rhs() {
        // Identity map: ℘(a,a,Sa) = ℘(a,a,a) = 0 at a = 0.
        let spec = InterpolativeSpec { map: SelfMap::Identity, ..InterpolativeSpec::paper(ComparisonKind::BoydWong) };
        assert_eq!(rhs_value(&gap(), &spec, s(0.0), s(4.0), s(5.0)).unwrap(), 0.0);
    }

    #[test]
    fn fixed_points() {
        let sample = [s(0.0), s(3.0), s(4.0), s(7.0), s(64.0)];
        let g = gap();
        assert_eq!(fixed_points_bruteforce(&g, &SelfMap::PaperS, &sample).unwrap(), BTreeSet::from([s(0.0)]));
        assert_eq!(fixed_points_bruteforce(&g, &SelfMap::Identity, &sample).unwrap().len(), 5);
        let three = SelfMap::Constant(s(3.0));
        assert_eq!(
            fixed_points_bruteforce(&g, &three, &[s(0.0), s(3.0), s(4.0)]).unwrap(),
            BTreeSet::from([s(3.0)])
        );
    }

    #[test]
    fn map_leaving_carrier() {
        let m = SelfMap::Constant(s(3.5));
        assert_eq!(m.apply(&gap(), s(4.0)).unwrap_err(), Error::MapLeavesCarrier { from: "4".into() });
    }

    #[test]
    fn certify_worked_example_sampled() {
        for kind in [ComparisonKind::BoydWong, ComparisonKind::Matkowski] {
            let spec = InterpolativeSpec::paper(kind);
            let rep = certify(&gap(), &spec, &TripleSource::Sampled { count: 200, seed: 0 }).unwrap();
            assert!(rep.passed, "{kind:?}: {:?}", rep.failures);
            assert!(rep.triples_checked > 0);
            assert_eq!(rep.excluded_fixed_points, BTreeSet::from([s(0.0)]));
        }
    }

    #[test]
    fn identity_comparison_with_constant_map_fails() {
        // Constant map onto 4 (not fixed-free: only 4 is fixed). lhs = ℘(4,4,4) = 1024.
        let spec = InterpolativeSpec {
            map: SelfMap::Constant(s(4.0)),
            comparison: ComparisonFn::half(),
            ..InterpolativeSpec::paper(ComparisonKind::Matkowski)
        };
        let rep = certify(&gap(), &spec, &TripleSource::Points(vec![s(0.0), s(3.0), s(4.0)])).unwrap();
        assert_eq!(rep.excluded_fixed_points, BTreeSet::from([s(4.0)]));
        assert!(!rep.passed);
        for f in &rep.failures {
            let [a, b, c] = f.triple;
            assert!(lhs_value(&gap(), &spec.map, a, b, c).unwrap() > rhs_value(&gap(), &spec, a, b, c).unwrap());
        }
    }

    #[test]
    fn exhaustive_needs_finite_carrier() {
        let spec = InterpolativeSpec::paper(ComparisonKind::BoydWong);
        assert_eq!(certify(&gap(), &spec, &TripleSource::Exhaustive).unwrap_err(), Error::InfeasibleExhaustive);
    }
}
