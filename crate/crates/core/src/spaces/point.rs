use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

/// An element of a carrier.
///
/// Analytic carriers use real scalars; tabulated carriers use the index of
/// the point's label. Equality is exact in both cases.
#[derive(Debug, Clone, Copy)]
pub enum Point {
    Scalar(f64),
    Label(u32),
}

impl Point {
    pub fn scalar(self) -> Option<f64> {
        match self {
            Point::Scalar(x) => Some(x),
            Point::Label(_) => None,
        }
    }

    pub fn label_index(self) -> Option<usize> {
        match self {
            Point::Label(i) => Some(i as usize),
            Point::Scalar(_) => None,
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::Scalar(x)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Point {}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Label(a), Point::Label(b)) => a.cmp(b),
            // -0.0 and 0.0 are the same point.
            (Point::Scalar(a), Point::Scalar(b)) => (a + 0.0).total_cmp(&(b + 0.0)),
            (Point::Label(_), Point::Scalar(_)) => Ordering::Less,
            (Point::Scalar(_), Point::Label(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match *self {
            Point::Scalar(x) => {
                0u8.hash(state);
                (x + 0.0).to_bits().hash(state);
            }
            Point::Label(i) => {
                1u8.hash(state);
                i.hash(state);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_exact() {
        assert_eq!(Point::Scalar(3.0), Point::Scalar(3.0));
        assert_ne!(Point::Scalar(3.0), Point::Scalar(3.0 + 1e-12));
        assert_eq!(Point::Scalar(0.0), Point::Scalar(-0.0));
        assert_ne!(Point::Label(0), Point::Scalar(0.0));
        assert!(Point::Scalar(1.0) < Point::Scalar(2.0));
    }
}
