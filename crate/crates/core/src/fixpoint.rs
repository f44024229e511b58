//! Picard iteration, fixed-point verification and convergence diagnostics.

use crate::arith::at_most;
use crate::comparison::{iterate_comparison, ComparisonFn, ComparisonKind};
use crate::contraction::SelfMap;
use crate::error::{Error, Result};
use crate::spaces::{PartialSbSpace, Point};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_TAIL: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// `a_0, a_1 = S(a_0), ...`; a converged trace ends with the repeated point.
    pub orbit: Vec<Point>,
    /// `℘(a_k, a_k, a_{k+1})`.
    pub gaps: Vec<f64>,
    /// `℘(a_k, a_k, a_k)`.
    pub self_distances: Vec<f64>,
    pub converged: bool,
    pub limit: Option<Point>,
    /// Final gap of a converged trace.
    pub limit_gap: Option<f64>,
}

impl IterationTrace {
    /// Map applications performed.
    pub fn steps(&self) -> usize {
        self.orbit.len() - 1
    }
}

/// Isolated and tabulated points compare exactly; points on a continuum
/// compare within `tol`.
fn same_point(space: &PartialSbSpace, x: Point, y: Point, tol: f64) -> bool {
    if x == y {
        return true;
    }
    if space.carrier().is_isolated(x) || space.carrier().is_isolated(y) {
        return false;
    }
    match (x.scalar(), y.scalar()) {
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        _ => false,
    }
}

/// Iterates `S` from `a0` until two consecutive points coincide or
/// `max_iter` applications have been made. Non-convergence is reported in
/// the trace, not as an error.
pub fn picard_iterate(
    space: &PartialSbSpace,
    map: &SelfMap,
    a0: Point,
    tol: f64,
    max_iter: usize,
) -> Result<IterationTrace> {
    space.check_point(a0)?;
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let mut orbit = vec![a0];
    let mut gaps = Vec::new();
    let mut self_distances = vec![space.dist(a0, a0, a0)];
    let mut converged = false;
    for _ in 0..max_iter {
        let cur = *orbit.last().unwrap();
        let next = map.apply(space, cur)?;
        orbit.push(next);
        gaps.push(space.dist(cur, cur, next));
        self_distances.push(space.dist(next, next, next));
        if same_point(space, cur, next, tol) {
            converged = true;
            break;
        }
    }
    let limit = converged.then(|| *orbit.last().unwrap());
    let limit_gap = if converged { gaps.last().copied() } else { None };
    Ok(IterationTrace { orbit, gaps, self_distances, converged, limit, limit_gap })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointCheck {
    pub is_fixed: bool,
    pub self_distance_zero: bool,
    pub self_distance: f64,
}

/// `S(a) = a` and `℘(a, a, a) <= tol`, checked independently.
pub fn verify_fixed_point(space: &PartialSbSpace, map: &SelfMap, a: Point, tol: f64) -> Result<FixedPointCheck> {
    let image = map.apply(space, a)?;
    let self_distance = space.dist(a, a, a);
    Ok(FixedPointCheck {
        is_fixed: same_point(space, image, a, tol),
        self_distance_zero: self_distance <= tol,
        self_distance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub gap_monotone_nonincreasing: bool,
    /// Last gap of the trace.
    pub gap_limit: f64,
    pub cauchy_pairs_checked: usize,
    /// Largest `|℘(a_k, a_k, a_l) - ℘(L, L, L)|` over the tail, where `L` is
    /// the limit (or the last orbit point when the trace did not converge).
    pub max_pair_deviation: f64,
    pub self_distance_at_limit: f64,
}

/// Cauchy-style diagnostic over the last `tail` orbit points.
pub fn cauchy_diagnostic(space: &PartialSbSpace, trace: &IterationTrace, tail: usize) -> Result<ConvergenceReport> {
    let needed = tail + 2;
    if trace.orbit.len() < needed || tail == 0 {
        return Err(Error::TraceTooShort { len: trace.orbit.len(), needed: needed.max(3) });
    }
    let window = &trace.orbit[trace.orbit.len() - tail..];
    let anchor = trace.limit.unwrap_or(*trace.orbit.last().unwrap());
    let at_limit = space.dist(anchor, anchor, anchor);
    let mut max_dev: f64 = 0.0;
    let mut pairs = 0usize;
    for &k in window {
        for &l in window {
            pairs += 1;
            max_dev = max_dev.max((space.dist(k, k, l) - at_limit).abs());
        }
    }
    Ok(ConvergenceReport {
        gap_monotone_nonincreasing: gaps_nonincreasing(&trace.gaps),
        gap_limit: trace.gaps.last().copied().unwrap_or(0.0),
        cauchy_pairs_checked: pairs,
        max_pair_deviation: max_dev,
        self_distance_at_limit: at_limit,
    })
}

pub fn gaps_nonincreasing(gaps: &[f64]) -> bool {
    gaps.windows(2).all(|w| at_most(w[1], w[0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvelopeCheck {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// `gaps[k] <= J^k(gaps[0])` for every `k`.
pub fn envelope_check_gaps(gaps: &[f64], f: &ComparisonFn) -> Result<EnvelopeCheck> {
    if f.kind != ComparisonKind::Matkowski {
        return Err(Error::KindMismatch { expected: "matkowski", actual: f.kind.name() });
    }
    let first_violation = gaps.first().and_then(|&g0| {
        let mut bound = g0;
        gaps.iter().enumerate().skip(1).find_map(|(k, &g)| {
            bound = f.eval(bound);
            debug_assert_eq!(bound, iterate_comparison(f, g0, k));
            (!at_most(g, bound)).then_some(k)
        })
    });
    Ok(EnvelopeCheck { holds: first_violation.is_none(), first_violation })
}

pub fn matkowski_envelope_check(trace: &IterationTrace, f: &ComparisonFn) -> Result<EnvelopeCheck> {
    envelope_check_gaps(&trace.gaps, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniquenessCheck {
    pub unique: bool,
    pub counterexample: Option<Point>,
}

/// Whether `claimed` is the only fixed point among `sample`.
pub fn uniqueness_check(
    space: &PartialSbSpace,
    map: &SelfMap,
    sample: &[Point],
    claimed: Point,
    tol: f64,
) -> Result<UniquenessCheck> {
    if !verify_fixed_point(space, map, claimed, tol)?.is_fixed {
        return Err(Error::NotAFixedPoint(space.label(claimed)));
    }
    for &x in sample {
        if same_point(space, x, claimed, tol) {
            continue;
        }
        if verify_fixed_point(space, map, x, tol)?.is_fixed {
            return Ok(UniquenessCheck { unique: false, counterexample: Some(x) });
        }
    }
    Ok(UniquenessCheck { unique: true, counterexample: None })
}

/// `k,a_k,gap_k` rows; the last orbit point has an empty gap.
pub fn trace_to_csv(space: &PartialSbSpace, trace: &IterationTrace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record(["k", "a_k", "gap_k"]).map_err(io)?;
    for (k, &a) in trace.orbit.iter().enumerate() {
        let gap = trace.gaps.get(k).map_or(String::new(), |g| g.to_string());
        w.write_record([k.to_string(), space.label(a), gap]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
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

    fn run(a0: f64) -> IterationTrace {
        picard_iterate(&gap(), &SelfMap::PaperS, s(a0), DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap()
    }

    #[test]
    fn orbit_from_seven() {
        let t = run(7.0);
        assert_eq!(t.orbit, vec![s(7.0), s(3.0), s(0.0), s(0.0)]);
        // ℘(7,7,3) = 2(7^5 + 3^5), ℘(3,3,0) = 2·3^5, ℘(0,0,0) = 0
        assert_eq!(t.gaps, vec![2.0 * (16807.0 + 243.0), 486.0, 0.0]);
        assert_eq!(t.self_distances, vec![16807.0, 243.0, 0.0, 0.0]);
        assert!(t.converged);
        assert_eq!(t.limit, Some(s(0.0)));
        assert_eq!(t.limit_gap, Some(0.0));
        assert_eq!(t.steps(), 3);
    }

    #[test]
    fn fixed_start() {
        let t = run(0.0);
        assert_eq!(t.orbit, vec![s(0.0), s(0.0)]);
        assert!(t.converged);
    }

    #[test]
    fn non_convergence_is_reported() {
        // Swap on two labels never settles.
        let a = builtin_space("two_point_a").unwrap();
        let swap = SelfMap::Tabulated([(Point::Label(0), Point::Label(1)), (Point::Label(1), Point::Label(0))].into());
        let t = picard_iterate(&a, &swap, Point::Label(0), 1e-9, 5).unwrap();
        assert!(!t.converged);
        assert_eq!(t.orbit.len(), 6);
        assert_eq!(t.limit, None);
    }

    #[test]
    fn continuous_points_use_tolerance() {
        let ray = builtin_space("quintic_ray").unwrap();
        let shrink = SelfMap::Tabulated([(s(5.0), s(5.0 + 1e-12))].into_iter().chain([(s(5.0 + 1e-12), s(5.0))]).collect());
        let t = picard_iterate(&ray, &shrink, s(5.0), 1e-9, 10).unwrap();
        assert!(t.converged);
        assert_eq!(t.orbit.len(), 2);
    }

    #[test]
    fn fixed_point_checks() {
        let g = gap();
        let zero = verify_fixed_point(&g, &SelfMap::PaperS, s(0.0), 1e-9).unwrap();
        assert!(zero.is_fixed && zero.self_distance_zero);
        assert_eq!(zero.self_distance, 0.0);
        assert!(!verify_fixed_point(&g, &SelfMap::PaperS, s(3.0), 1e-9).unwrap().is_fixed);
        let id = verify_fixed_point(&g, &SelfMap::Identity, s(4.0), 1e-9).unwrap();
        assert!(id.is_fixed && !id.self_distance_zero);
    }

    #[test]
    fn cauchy() {
        let g = gap();
        let t = run(7.0);
        let r = cauchy_diagnostic(&g, &t, 2).unwrap();
        assert_eq!(r.max_pair_deviation, 0.0);
        assert_eq!(r.cauchy_pairs_checked, 4);
        assert!(r.gap_monotone_nonincreasing);
        assert_eq!(r.self_distance_at_limit, 0.0);
        assert_eq!(cauchy_diagnostic(&g, &t, 8).unwrap_err(), Error::TraceTooShort { len: 4, needed: 10 });
    }

    #[test]
    fn envelope() {
        let half = ComparisonFn::half();
        assert!(matkowski_envelope_check(&run(7.0), &half).unwrap().holds);
        let bad = envelope_check_gaps(&[10.0, 6.0], &half).unwrap();
        assert_eq!(bad, EnvelopeCheck { holds: false, first_violation: Some(1) });
        assert!(envelope_check_gaps(&[10.0], &half).unwrap().holds);
        assert!(matches!(
            envelope_check_gaps(&[1.0], &ComparisonFn::paper_tau()),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn uniqueness() {
        let g = gap();
        let sample = [s(0.0), s(3.0), s(4.0), s(7.0), s(64.0)];
        assert!(uniqueness_check(&g, &SelfMap::PaperS, &sample, s(0.0), 1e-9).unwrap().unique);
        let id = uniqueness_check(&g, &SelfMap::Identity, &sample, s(0.0), 1e-9).unwrap();
        assert_eq!(id.counterexample, Some(s(3.0)));
        let three = SelfMap::Constant(s(3.0));
        assert!(uniqueness_check(&g, &three, &sample[..3], s(3.0), 1e-9).unwrap().unique);
        assert!(matches!(
            uniqueness_check(&g, &SelfMap::PaperS, &sample, s(3.0), 1e-9),
            Err(Error::NotAFixedPoint(_))
        ));
    }

    #[test]
    fn csv_rows() {
        let csv = trace_to_csv(&gap(), &run(7.0)).unwrap();
        assert_eq!(csv, "k,a_k,gap_k\n0,7,34100\n1,3,486\n2,0,0\n3,0,\n");
    }
}
