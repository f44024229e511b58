//! Partial S_b-metric spaces: carriers, triple distances, builtin examples
//! and axiom checking.

mod axioms;
mod carrier;
mod file;
mod metric;
mod point;
pub mod random;

pub use axioms::{check_axioms, Axiom, AxiomReport, AxiomSet, TupleSource, Violation, SAMPLE_POOL};
pub(crate) use carrier::describe as describe_point;
pub use carrier::{Carrier, Interval, Region, DEFAULT_UPPER_BOUND};
pub use file::{load_tabulated_space, to_space_file};
pub use metric::{BuiltinMetric, Table, TripleMetric};
pub use point::Point;

use crate::error::{Error, Result};

/// Names accepted by [`builtin_space`].
pub const BUILTIN_NAMES: [&str; 4] = ["quintic_ray", "quintic_gap", "two_point_a", "two_point_b"];

/// A carrier with a triple distance and coefficient `t >= 1`.
///
/// Construction does not check the axioms; use [`check_axioms`] for that.
#[derive(Debug, Clone)]
pub struct PartialSbSpace {
    name: Option<String>,
    carrier: Carrier,
    metric: TripleMetric,
    coefficient: f64,
}

impl PartialEq for PartialSbSpace {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.metric == other.metric
            && self.coefficient == other.coefficient
    }
}

impl PartialSbSpace {
    pub fn new(carrier: Carrier, metric: TripleMetric, coefficient: f64) -> Result<Self> {
        if !(coefficient.is_finite() && coefficient >= 1.0) {
            return Err(Error::InvalidCoefficient(coefficient));
        }
        match (&carrier, &metric) {
            (Carrier::Finite { points, .. }, TripleMetric::Tabulated(t)) => {
                if t.size() != points.len() || points.iter().any(|p| p.label_index().is_none()) {
                    return Err(Error::InvalidArgument(format!(
                        "table of size {} does not match a labelled carrier of {} points",
                        t.size(),
                        points.len()
                    )));
                }
            }
            (Carrier::Finite { points, .. }, TripleMetric::Builtin(_)) => {
                if points.iter().any(|p| p.scalar().is_none()) {
                    return Err(Error::InvalidArgument(
                        "analytic metric needs a scalar carrier".into(),
                    ));
                }
            }
            (Carrier::Region(_), TripleMetric::Builtin(_)) => {}
            (Carrier::Region(_), TripleMetric::Tabulated(_)) => {
                return Err(Error::InvalidArgument("tabulated metric needs a finite carrier".into()))
            }
        }
        if let Carrier::Finite { points, .. } = &carrier {
            if points.is_empty() || points.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(
                    "finite carrier must be nonempty, sorted and duplicate-free".into(),
                ));
            }
        }
        Ok(PartialSbSpace { name: None, carrier, metric, coefficient })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn metric(&self) -> &TripleMetric {
        &self.metric
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// Changes the sampling truncation of region carriers; no effect on
    /// finite carriers.
    pub fn with_upper_bound(mut self, bound: f64) -> Self {
        if let Carrier::Region(r) = &mut self.carrier {
            r.upper_bound = bound;
        }
        self
    }

    pub fn contains(&self, p: Point) -> bool {
        self.carrier.contains(p)
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(self.label(p)))
        }
    }

    pub fn label(&self, p: Point) -> String {
        self.carrier.label(p)
    }

    pub fn parse_point(&self, text: &str) -> Result<Point> {
        self.carrier
            .parse_point(text)
            .ok_or_else(|| Error::UnknownPoint(text.trim().to_string()))
    }

    pub fn evaluate(&self, p: Point, q: Point, r: Point) -> Result<f64> {
        for x in [p, q, r] {
            self.check_point(x)?;
        }
        Ok(self.dist(p, q, r))
    }

    /// Distance of carrier points. Callers validate membership first.
    pub(crate) fn dist(&self, p: Point, q: Point, r: Point) -> f64 {
        self.metric
            .eval(p, q, r)
            .expect("point kind matches the metric representation")
    }

    /// Finite carriers return every point; regions return their isolated
    /// points plus `count` deterministic samples up to the upper bound.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Point> {
        match &self.carrier {
            Carrier::Finite { points, .. } => points.clone(),
            Carrier::Region(r) => r.sample(count, seed).into_iter().map(Point::Scalar).collect(),
        }
    }

    /// Isolated points plus an evenly spaced grid; the whole carrier when
    /// finite.
    pub fn grid(&self, count: usize) -> Vec<Point> {
        match &self.carrier {
            Carrier::Finite { points, .. } => points.clone(),
            Carrier::Region(r) => r.grid(count).into_iter().map(Point::Scalar).collect(),
        }
    }

    pub fn isolated_points(&self) -> Vec<Point> {
        match &self.carrier {
            Carrier::Finite { points, .. } => points.clone(),
            Carrier::Region(r) => r.isolated.iter().map(|&x| Point::Scalar(x)).collect(),
        }
    }

    /// The subspace on finitely many scalar points of a region carrier.
    pub fn restrict(&self, points: &[Point]) -> Result<PartialSbSpace> {
        let mut values = Vec::with_capacity(points.len());
        for &p in points {
            self.check_point(p)?;
            values.push(p.scalar().ok_or_else(|| {
                Error::InvalidArgument("only scalar carriers can be restricted".into())
            })?);
        }
        let mut sub = PartialSbSpace::new(Carrier::scalars(&values), self.metric.clone(), self.coefficient)?;
        sub.name = self.name.as_ref().map(|n| format!("{n}|restricted"));
        Ok(sub)
    }
}

/// Distance `℘(p, q, r)`.
pub fn evaluate_metric(space: &PartialSbSpace, p: Point, q: Point, r: Point) -> Result<f64> {
    space.evaluate(p, q, r)
}

pub fn sample_carrier(space: &PartialSbSpace, count: usize, seed: u64) -> Vec<Point> {
    space.sample(count, seed)
}

/// The worked example spaces, all with coefficient 1.
pub fn builtin_space(name: &str) -> Result<PartialSbSpace> {
    let quintic = |isolated: Vec<f64>, lo: f64| {
        let region = Region {
            isolated,
            intervals: vec![Interval::ray(lo)],
            upper_bound: DEFAULT_UPPER_BOUND,
        };
        PartialSbSpace::new(
            Carrier::Region(region),
            TripleMetric::Builtin(BuiltinMetric::QuinticPower),
            1.0,
        )
    };
    let space = match name {
        "quintic_ray" => quintic(Vec::new(), 1.0)?,
        "quintic_gap" => quintic(vec![0.0, 3.0], 4.0)?,
        "two_point_a" => {
            // Every triple is 8 except ℘(2,2,2) = ℘(2,1,2) = 4.
            let mut t = Table::filled(2, 8.0);
            t.set(1, 1, 1, 4.0);
            t.set(1, 0, 1, 4.0);
            two_point(t)?
        }
        "two_point_b" => {
            let mut t = Table::filled(2, 8.0);
            t.set(0, 0, 0, 4.0);
            t.set(1, 1, 1, 4.0);
            two_point(t)?
        }
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(space.named(name))
}

fn two_point(table: Table) -> Result<PartialSbSpace> {
    PartialSbSpace::new(
        Carrier::labelled(vec!["1".into(), "2".into()]),
        TripleMetric::Tabulated(table),
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> Point {
        Point::Scalar(x)
    }

    #[test]
    fn evaluate_examples() {
        let a = builtin_space("two_point_a").unwrap();
        let one = a.parse_point("1").unwrap();
        let two = a.parse_point("2").unwrap();
        assert_eq!(a.evaluate(one, one, two).unwrap(), 8.0);
        assert_eq!(a.evaluate(two, two, one).unwrap(), 8.0);
        assert_eq!(a.evaluate(two, two, two).unwrap(), 4.0);
        assert_eq!(a.evaluate(two, one, two).unwrap(), 4.0);

        let ray = builtin_space("quintic_ray").unwrap();
        assert_eq!(ray.evaluate(s(1.0), s(1.0), s(1.0)).unwrap(), 1.0);
        assert_eq!(ray.evaluate(s(4.0), s(4.0), s(3.0)).unwrap(), 2534.0);
    }

    #[test]
    fn evaluate_rejects_outside_points() {
        let a = builtin_space("two_point_a").unwrap();
        assert!(matches!(
            a.evaluate(Point::Label(0), Point::Label(5), Point::Label(0)),
            Err(Error::UnknownPoint(_))
        ));
        let gap = builtin_space("quintic_gap").unwrap();
        assert!(gap.evaluate(s(3.5), s(0.0), s(0.0)).is_err());
    }

    #[test]
    fn builtin_tables() {
        let b = builtin_space("two_point_b").unwrap();
        let (one, two) = (Point::Label(0), Point::Label(1));
        assert_eq!(b.evaluate(one, one, one).unwrap(), 4.0);
        assert_eq!(b.evaluate(two, two, two).unwrap(), 4.0);
        for t in [(one, one, two), (two, two, one), (one, two, one), (two, one, one), (one, two, two), (two, one, two)] {
            assert_eq!(b.evaluate(t.0, t.1, t.2).unwrap(), 8.0);
        }
        let gap = builtin_space("quintic_gap").unwrap();
        assert_eq!(gap.evaluate(s(0.0), s(0.0), s(0.0)).unwrap(), 0.0);
        assert!(matches!(builtin_space("nope"), Err(Error::UnknownBuiltin(_))));
        for name in BUILTIN_NAMES {
            assert_eq!(builtin_space(name).unwrap().coefficient(), 1.0);
        }
    }

    #[test]
    fn sampling_contract() {
        let a = builtin_space("two_point_a").unwrap();
        assert_eq!(a.sample(1000, 3), vec![Point::Label(0), Point::Label(1)]);

        let gap = builtin_space("quintic_gap").unwrap();
        let g = gap.sample(5, 0);
        assert!(g.contains(&s(0.0)) && g.contains(&s(3.0)));

        let ray = builtin_space("quintic_ray").unwrap();
        let r = ray.sample(10, 1);
        assert_eq!(r.len(), 10);
        assert!(r.iter().all(|p| p.scalar().unwrap() >= 1.0));
        assert_eq!(r, ray.sample(10, 1));
    }

    #[test]
    fn coefficient_below_one_rejected() {
        let err = PartialSbSpace::new(
            Carrier::labelled(vec!["x".into()]),
            TripleMetric::Tabulated(Table::filled(1, 0.0)),
            0.5,
        );
        assert_eq!(err.unwrap_err(), Error::InvalidCoefficient(0.5));
    }

    #[test]
    fn restriction_keeps_distances() {
        let gap = builtin_space("quintic_gap").unwrap();
        let sub = gap.restrict(&[s(0.0), s(3.0), s(4.0)]).unwrap();
        assert!(sub.carrier().is_finite());
        assert_eq!(sub.evaluate(s(4.0), s(4.0), s(3.0)).unwrap(), 2534.0);
        assert!(gap.restrict(&[s(3.5)]).is_err());
    }
}
