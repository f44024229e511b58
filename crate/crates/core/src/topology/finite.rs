use std::collections::BTreeSet;

use super::ball::{canonical_radii, in_ball};
use crate::error::{Error, Result};
use crate::spaces::{Carrier, PartialSbSpace, Point};

/// Upper limit on the number of open sets materialized by
/// [`generate_topology`].
pub const MAX_OPEN_SETS: usize = 1 << 20;

/// A topology on at most 64 points; open sets are bit masks over `points`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTopology {
    points: Vec<Point>,
    labels: Vec<String>,
    opens: BTreeSet<u64>,
}

impl FiniteTopology {
    /// Builds a family without checking the topology axioms.
    pub fn from_family(points: Vec<Point>, labels: Vec<String>, family: &[Vec<Point>]) -> Result<Self> {
        if points.len() > 64 {
            return Err(Error::CarrierTooLarge(points.len()));
        }
        assert_eq!(points.len(), labels.len());
        let mut opens = BTreeSet::new();
        for set in family {
            let mut mask = 0u64;
            for p in set {
                let i = points
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| Error::UnknownPoint(crate::spaces::describe_point(*p)))?;
                mask |= 1 << i;
            }
            opens.insert(mask);
        }
        Ok(FiniteTopology { points, labels, opens })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn full(&self) -> u64 {
        full_mask(self.points.len())
    }

    fn members(&self, mask: u64) -> Vec<Point> {
        (0..self.points.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.points[i]).collect()
    }

    /// Open sets ordered by size, then by position of their points.
    pub fn open_sets(&self) -> Vec<Vec<Point>> {
        self.sorted_masks().into_iter().map(|m| self.members(m)).collect()
    }

    /// Open sets as label lists, in the order of [`Self::open_sets`].
    pub fn open_set_labels(&self) -> Vec<Vec<String>> {
        self.sorted_masks()
            .into_iter()
            .map(|m| {
                (0..self.points.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| self.labels[i].clone())
                    .collect()
            })
            .collect()
    }

    pub fn label_of(&self, p: Point) -> String {
        self.points
            .iter()
            .position(|&q| q == p)
            .map_or_else(|| crate::spaces::describe_point(p), |i| self.labels[i].clone())
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn is_open(&self, set: &[Point]) -> bool {
        let mut mask = 0u64;
        for p in set {
            match self.points.iter().position(|q| q == p) {
                Some(i) => mask |= 1 << i,
                None => return false,
            }
        }
        self.opens.contains(&mask)
    }

    fn sorted_masks(&self) -> Vec<u64> {
        let mut masks: Vec<u64> = self.opens.iter().copied().collect();
        masks.sort_by_key(|&m| (m.count_ones(), (0..64).filter(|i| has(m, *i)).collect::<Vec<usize>>()));
        masks
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every distinct ball of a finite space, as masks over its points.
pub(crate) fn ball_masks(space: &PartialSbSpace, points: &[Point]) -> Result<BTreeSet<u64>> {
    let mut balls = BTreeSet::new();
    for &center in points {
        for r in canonical_radii(space, center, points)? {
            let mask = points
                .iter()
                .enumerate()
                .filter(|(_, &z)| in_ball(space, center, r, z))
                .fold(0u64, |m, (i, _)| m | 1 << i);
            balls.insert(mask);
        }
    }
    Ok(balls)
}

/// The balls of a finite space as point sets; these generate
/// [`generate_topology`]'s output.
pub fn ball_family(space: &PartialSbSpace) -> Result<Vec<Vec<Point>>> {
    let points = space.carrier().finite_points().ok_or(Error::InfeasibleExhaustive)?;
    let masks = ball_masks(space, points)?;
    Ok(masks
        .into_iter()
        .map(|m| (0..points.len()).filter(|i| m >> i & 1 == 1).map(|i| points[i]).collect())
        .collect())
}

/// The topology generated by all open balls of a finite space.
///
/// Balls are first closed under finite intersection and then under union.
/// When the balls already form a basis (the case for valid spaces) the
/// intersection step adds nothing and the result is exactly the family of
/// unions of balls.
pub fn generate_topology(space: &PartialSbSpace) -> Result<FiniteTopology> {
    let (points, labels) = match space.carrier() {
        Carrier::Finite { points, labels } => (points.clone(), labels.clone()),
        Carrier::Region(_) => return Err(Error::InfeasibleExhaustive),
    };
    if points.len() > 64 {
        return Err(Error::CarrierTooLarge(points.len()));
    }
    let mut basis = ball_masks(space, &points)?;
    loop {
        let extra: Vec<u64> = basis
            .iter()
            .flat_map(|&a| basis.iter().map(move |&b| a & b))
            .filter(|m| *m != 0 && !basis.contains(m))
            .collect();
        if extra.is_empty() {
            break;
        }
        basis.extend(extra);
    }

    let mut opens: BTreeSet<u64> = BTreeSet::from([0u64]);
    for &b in &basis {
        let grown: Vec<u64> = opens.iter().map(|&o| o | b).collect();
        opens.extend(grown);
        if opens.len() > MAX_OPEN_SETS {
            return Err(Error::InvalidArgument(format!(
                "topology has more than {MAX_OPEN_SETS} open sets"
            )));
        }
    }
    opens.insert(full_mask(points.len()));
    Ok(FiniteTopology { points, labels, opens })
}

/// `∅` and the carrier are open and the family is closed under pairwise
/// union and intersection.
pub fn verify_topology_axioms(topology: &FiniteTopology) -> bool {
    let opens = &topology.opens;
    opens.contains(&0)
        && opens.contains(&topology.full())
        && opens.iter().all(|&a| {
            opens.iter().all(|&b| opens.contains(&(a | b)) && opens.contains(&(a & b)))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Separation {
    T0,
    T1,
    T2,
}

/// A pair for which no separating open set (or pair of sets) exists.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationFailure {
    pub property: Separation,
    pub pair: (Point, Point),
    pub open_sets_searched: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    pub witnesses: Vec<SeparationFailure>,
}

fn has(mask: u64, i: usize) -> bool {
    mask >> i & 1 == 1
}

fn distinct_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn t0_failures(t: &FiniteTopology) -> Vec<SeparationFailure> {
    distinct_pairs(t.points.len())
        .filter(|&(i, j)| !t.opens.iter().any(|&o| has(o, i) != has(o, j)))
        .map(|(i, j)| SeparationFailure {
            property: Separation::T0,
            pair: (t.points[i], t.points[j]),
            open_sets_searched: t.opens.len(),
        })
        .collect()
}

fn t1_failures(t: &FiniteTopology) -> Vec<SeparationFailure> {
    let n = t.points.len();
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| !t.opens.iter().any(|&o| has(o, i) && !has(o, j)))
        .map(|(i, j)| SeparationFailure {
            property: Separation::T1,
            pair: (t.points[i], t.points[j]),
            open_sets_searched: t.opens.len(),
        })
        .collect()
}

fn t2_failures(t: &FiniteTopology) -> Vec<SeparationFailure> {
    distinct_pairs(t.points.len())
        .filter_map(|(i, j)| {
            let around_i: Vec<u64> = t.opens.iter().copied().filter(|&o| has(o, i)).collect();
            let around_j: Vec<u64> = t.opens.iter().copied().filter(|&o| has(o, j)).collect();
            let separated = around_i.iter().any(|&u| around_j.iter().any(|&v| u & v == 0));
            (!separated).then(|| SeparationFailure {
                property: Separation::T2,
                pair: (t.points[i], t.points[j]),
                open_sets_searched: around_i.len() * around_j.len(),
            })
        })
        .collect()
}

pub fn is_t0(topology: &FiniteTopology) -> bool {
    t0_failures(topology).is_empty()
}

pub fn is_t1(topology: &FiniteTopology) -> bool {
    t1_failures(topology).is_empty()
}

pub fn is_t2(topology: &FiniteTopology) -> bool {
    t2_failures(topology).is_empty()
}

/// T0, T1 and T2 verdicts with every failing pair.
pub fn separation_report(topology: &FiniteTopology) -> SeparationReport {
    let mut witnesses = t0_failures(topology);
    let t0 = witnesses.is_empty();
    let t1_fail = t1_failures(topology);
    let t1 = t1_fail.is_empty();
    let t2_fail = t2_failures(topology);
    let t2 = t2_fail.is_empty();
    witnesses.extend(t1_fail);
    witnesses.extend(t2_fail);
    SeparationReport { t0, t1, t2, witnesses }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connectedness {
    pub connected: bool,
    /// Two disjoint nonempty open sets covering the carrier.
    pub separation: Option<(Vec<Point>, Vec<Point>)>,
}

pub fn is_connected(topology: &FiniteTopology) -> Connectedness {
    let full = topology.full();
    let split = topology
        .sorted_masks()
        .into_iter()
        .find(|&u| u != 0 && u != full && topology.opens.contains(&(full & !u)));
    match split {
        Some(u) => Connectedness {
            connected: false,
            separation: Some((topology.members(u), topology.members(full & !u))),
        },
        None => Connectedness { connected: true, separation: None },
    }
}

/// Every finite topological space is compact.
pub fn is_compact(_topology: &FiniteTopology) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{builtin_space, Table, TripleMetric};

    fn labels_of(t: &FiniteTopology) -> Vec<Vec<String>> {
        t.open_set_labels()
    }

    fn one_point() -> PartialSbSpace {
        PartialSbSpace::new(
            Carrier::labelled(vec!["x".into()]),
            TripleMetric::Tabulated(Table::filled(1, 0.0)),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn sierpinski_and_discrete() {
        let a = generate_topology(&builtin_space("two_point_a").unwrap()).unwrap();
        assert_eq!(labels_of(&a), vec![vec![], vec!["2".to_string()], vec!["1".into(), "2".into()]]);
        assert!(verify_topology_axioms(&a));

        let b = generate_topology(&builtin_space("two_point_b").unwrap()).unwrap();
        assert_eq!(b.len(), 4);
        assert!(verify_topology_axioms(&b));
    }

    #[test]
    fn one_point_topology() {
        let t = generate_topology(&one_point()).unwrap();
        assert_eq!(labels_of(&t), vec![vec![], vec!["x".to_string()]]);
        let r = separation_report(&t);
        assert!(r.t0 && r.t1 && r.t2);
        assert!(is_connected(&t).connected);
    }

    #[test]
    fn family_checks() {
        let pts = vec![Point::Label(0), Point::Label(1)];
        let labels = vec!["1".to_string(), "2".to_string()];
        let missing = FiniteTopology::from_family(pts.clone(), labels.clone(), &[vec![], vec![pts[0]]]).unwrap();
        assert!(!verify_topology_axioms(&missing));
        let discrete = FiniteTopology::from_family(
            pts.clone(),
            labels,
            &[vec![], vec![pts[0]], vec![pts[1]], pts.clone()],
        )
        .unwrap();
        assert!(verify_topology_axioms(&discrete));
    }

    #[test]
    fn separation_of_examples() {
        let a = generate_topology(&builtin_space("two_point_a").unwrap()).unwrap();
        let r = separation_report(&a);
        assert_eq!((r.t0, r.t1, r.t2), (true, false, false));
        // 2 cannot be kept out of an open set containing 1.
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.property == Separation::T1 && w.pair == (Point::Label(0), Point::Label(1))));

        let b = generate_topology(&builtin_space("two_point_b").unwrap()).unwrap();
        let r = separation_report(&b);
        assert_eq!((r.t0, r.t1, r.t2), (true, true, true));
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn connectedness_of_examples() {
        let a = generate_topology(&builtin_space("two_point_a").unwrap()).unwrap();
        assert!(is_connected(&a).connected);
        let b = generate_topology(&builtin_space("two_point_b").unwrap()).unwrap();
        let c = is_connected(&b);
        assert!(!c.connected);
        assert_eq!(c.separation, Some((vec![Point::Label(0)], vec![Point::Label(1)])));
        assert!(is_compact(&b));
    }

    #[test]
    fn region_carrier_rejected() {
        let ray = builtin_space("quintic_ray").unwrap();
        assert_eq!(generate_topology(&ray).unwrap_err(), Error::InfeasibleExhaustive);
    }
}
