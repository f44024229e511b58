use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Point;
use crate::arith::format_scalar;

/// Default truncation for unbounded intervals.
pub const DEFAULT_UPPER_BOUND: f64 = 64.0;

/// A closed-below interval `[lo, hi]`, or `[lo, ∞)` when `hi` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: Option<f64>,
}

impl Interval {
    pub fn ray(lo: f64) -> Self {
        Interval { lo, hi: None }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && self.hi.is_none_or(|hi| x <= hi)
    }

    /// The finite window `[lo, min(hi, bound)]`, or `None` if it is empty.
    fn window(&self, bound: f64) -> Option<(f64, f64)> {
        let hi = self.hi.map_or(bound, |h| h.min(bound));
        (hi >= self.lo).then_some((self.lo, hi))
    }
}

/// A union of isolated points and intervals of the real line, sampled
/// deterministically up to `upper_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub isolated: Vec<f64>,
    pub intervals: Vec<Interval>,
    pub upper_bound: f64,
}

impl Region {
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && (self.is_isolated(x) || self.intervals.iter().any(|i| i.contains(x)))
    }

    pub fn is_isolated(&self, x: f64) -> bool {
        self.isolated.contains(&x)
    }

    /// Isolated points plus `count` grid-and-jitter samples spread over the
    /// continuous parts in proportion to their truncated length. Each
    /// interval's first sample is its left endpoint.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<f64> = self.isolated.clone();
        for (lo, hi, n) in self.allocate(count) {
            let width = (hi - lo) / n as f64;
            for i in 0..n {
                let jitter = if i == 0 { 0.0 } else { rng.gen::<f64>() };
                out.push(lo + width * (i as f64 + jitter));
            }
        }
        normalize(out)
    }

    /// Isolated points plus `count` evenly spaced points (endpoints
    /// included) over the continuous parts.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        let mut out: Vec<f64> = self.isolated.clone();
        for (lo, hi, n) in self.allocate(count) {
            if n == 1 || hi == lo {
                out.push(lo);
                continue;
            }
            let step = (hi - lo) / (n - 1) as f64;
            out.extend((0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }));
        }
        normalize(out)
    }

    fn allocate(&self, count: usize) -> Vec<(f64, f64, usize)> {
        let windows: Vec<(f64, f64)> = self
            .intervals
            .iter()
            .filter_map(|i| i.window(self.upper_bound))
            .collect();
        if windows.is_empty() || count == 0 {
            return Vec::new();
        }
        let total: f64 = windows.iter().map(|(lo, hi)| hi - lo).sum();
        let mut left = count;
        let last = windows.len() - 1;
        windows
            .iter()
            .enumerate()
            .map(|(k, &(lo, hi))| {
                let share = if k == last {
                    left
                } else if total > 0.0 {
                    (((hi - lo) / total) * count as f64).round() as usize
                } else {
                    count / windows.len()
                };
                let n = share.clamp(1, left.max(1));
                left = left.saturating_sub(n);
                (lo, hi, n)
            })
            .collect()
    }
}

fn normalize(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// The set a space lives on.
#[derive(Debug, Clone, PartialEq)]
pub enum Carrier {
    /// Explicit points with display labels, no duplicates.
    Finite { points: Vec<Point>, labels: Vec<String> },
    Region(Region),
}

impl Carrier {
    pub fn labelled(labels: Vec<String>) -> Self {
        let points = (0..labels.len() as u32).map(Point::Label).collect();
        Carrier::Finite { points, labels }
    }

    pub fn scalars(values: &[f64]) -> Self {
        let values = normalize(values.to_vec());
        Carrier::Finite {
            points: values.iter().map(|&x| Point::Scalar(x)).collect(),
            labels: values.iter().map(|&x| format_scalar(x)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Carrier::Finite { .. })
    }

    pub fn finite_points(&self) -> Option<&[Point]> {
        match self {
            Carrier::Finite { points, .. } => Some(points),
            Carrier::Region(_) => None,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match (self, p) {
            (Carrier::Finite { points, .. }, _) => points.binary_search(&p).is_ok(),
            (Carrier::Region(r), Point::Scalar(x)) => r.contains(x),
            (Carrier::Region(_), Point::Label(_)) => false,
        }
    }

    /// Whether `p` is an isolated (discrete) point rather than a sample of a
    /// continuous interval. Every point of a finite carrier is isolated.
    pub fn is_isolated(&self, p: Point) -> bool {
        match (self, p) {
            (Carrier::Finite { .. }, _) => true,
            (Carrier::Region(r), Point::Scalar(x)) => r.is_isolated(x),
            (Carrier::Region(_), Point::Label(_)) => false,
        }
    }

    pub fn label(&self, p: Point) -> String {
        match (self, p) {
            (Carrier::Finite { points, labels }, _) => match points.binary_search(&p) {
                Ok(i) => labels[i].clone(),
                Err(_) => describe(p),
            },
            (Carrier::Region(_), _) => describe(p),
        }
    }

    /// Resolves a textual point: a label on labelled carriers, a number
    /// otherwise.
    pub fn parse_point(&self, text: &str) -> Option<Point> {
        let text = text.trim();
        if let Carrier::Finite { points, labels } = self {
            if let Some(i) = labels.iter().position(|l| l == text) {
                return Some(points[i]);
            }
        }
        let x: f64 = text.parse().ok()?;
        let p = Point::Scalar(x);
        self.contains(p).then_some(p)
    }
}

pub(crate) fn describe(p: Point) -> String {
    match p {
        Point::Scalar(x) => format_scalar(x),
        Point::Label(i) => format!("#{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap() -> Region {
        Region {
            isolated: vec![0.0, 3.0],
            intervals: vec![Interval::ray(4.0)],
            upper_bound: 64.0,
        }
    }

    #[test]
    fn membership() {
        let r = gap();
        assert!(r.contains(0.0) && r.contains(3.0) && r.contains(4.0) && r.contains(1e6));
        assert!(!r.contains(3.5) && !r.contains(-1.0) && !r.contains(f64::NAN));
    }

    #[test]
    fn sample_is_deterministic_and_bounded() {
        let r = gap();
        let a = r.sample(10, 1);
        assert_eq!(a, r.sample(10, 1));
        assert_eq!(a.len(), 12);
        assert!(a.contains(&0.0) && a.contains(&3.0) && a.contains(&4.0));
        assert!(a.iter().all(|&x| r.contains(x) && x <= 64.0));
        assert_ne!(a, r.sample(10, 2));
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = gap().grid(50);
        assert_eq!(g.len(), 52);
        assert_eq!(g[2], 4.0);
        assert_eq!(*g.last().unwrap(), 64.0);
    }

    #[test]
    fn labels_resolve() {
        let c = Carrier::labelled(vec!["1".into(), "2".into()]);
        assert_eq!(c.parse_point("2"), Some(Point::Label(1)));
        assert_eq!(c.parse_point("3"), None);
        assert_eq!(c.label(Point::Label(0)), "1");
    }
}
