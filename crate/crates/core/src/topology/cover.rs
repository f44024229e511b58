use std::fmt;

use super::ball::{check_radius, in_ball};
use crate::error::{Error, Result};
use crate::spaces::{Carrier, PartialSbSpace, Point};

/// Non-integer sample points tried after the integer lattice.
const FALLBACK_SAMPLES: usize = 256;

/// Radius of the ball with index `n`: `scale · n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RadiusRule {
    pub scale: f64,
    pub offset: f64,
}

impl RadiusRule {
    /// `r(n) = n`.
    pub const INDEX: RadiusRule = RadiusRule { scale: 1.0, offset: 0.0 };

    pub fn radius(&self, n: i64) -> f64 {
        self.scale * n as f64 + self.offset
    }
}

impl fmt::Display for RadiusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.scale, self.offset) {
            (s, 0.0) if s == 1.0 => write!(f, "n"),
            (s, 0.0) => write!(f, "{s}*n"),
            (s, o) if s == 1.0 => write!(f, "n + {o}"),
            (s, o) => write!(f, "{s}*n + {o}"),
        }
    }
}

/// The indexed family `{ D(center; rule(n)) : n ∈ indices }`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverFamily {
    pub center: Point,
    pub rule: RadiusRule,
    pub indices: Vec<i64>,
}

impl CoverFamily {
    pub fn new(center: Point, rule: RadiusRule, indices: Vec<i64>) -> Self {
        CoverFamily { center, rule, indices }
    }

    pub fn covers(&self, space: &PartialSbSpace, index: i64, z: Point) -> bool {
        in_ball(space, self.center, self.rule.radius(index), z)
    }
}

/// Search order: carrier points up to `search_bound`, integers first, then
/// a deterministic sample of the rest, ending with the bound itself.
fn search_candidates(space: &PartialSbSpace, search_bound: f64) -> Vec<Point> {
    let region = match space.carrier() {
        Carrier::Finite { points, .. } => return points.clone(),
        Carrier::Region(r) => r,
    };
    let mut integers: Vec<f64> = region.isolated.iter().copied().filter(|x| x.fract() == 0.0).collect();
    for interval in &region.intervals {
        let hi = interval.hi.map_or(search_bound, |h| h.min(search_bound));
        if hi < interval.lo {
            continue;
        }
        let mut k = interval.lo.ceil();
        while k <= hi.floor() {
            integers.push(k);
            k += 1.0;
        }
    }
    let mut bounded = region.clone();
    bounded.upper_bound = search_bound;
    let mut rest: Vec<f64> = bounded.sample(FALLBACK_SAMPLES, 0);
    if region.contains(search_bound) {
        rest.push(search_bound);
    }
    integers.retain(|&x| x <= search_bound);
    integers.sort_by(f64::total_cmp);
    integers.dedup();
    rest.retain(|x| *x <= search_bound && !integers.contains(x));
    rest.sort_by(f64::total_cmp);
    rest.dedup();
    integers.into_iter().chain(rest).map(Point::Scalar).collect()
}

/// Candidate points prepared once for many subfamily queries.
#[derive(Debug, Clone)]
pub struct CoverSearch<'a> {
    space: &'a PartialSbSpace,
    family: &'a CoverFamily,
    candidates: Vec<Point>,
}

impl<'a> CoverSearch<'a> {
    pub fn new(space: &'a PartialSbSpace, family: &'a CoverFamily, search_bound: f64) -> Result<Self> {
        space.check_point(family.center)?;
        for &n in &family.indices {
            check_radius(family.rule.radius(n))?;
        }
        Ok(CoverSearch { space, family, candidates: search_candidates(space, search_bound) })
    }

    /// A carrier point lying in none of the subfamily's balls, or `None`
    /// when every searched point is covered.
    pub fn witness(&self, subfamily: &[i64]) -> Result<Option<Point>> {
        if subfamily.is_empty() {
            return Err(Error::EmptySubfamily);
        }
        if let Some(&n) = subfamily.iter().find(|n| !self.family.indices.contains(n)) {
            return Err(Error::NotInFamily(n));
        }
        Ok(self
            .candidates
            .iter()
            .copied()
            .find(|&z| subfamily.iter().all(|&n| !self.family.covers(self.space, n, z))))
    }
}

/// A carrier point lying in none of the subfamily's balls, or `None` when
/// every searched point is covered.
pub fn uncovered_witness(
    space: &PartialSbSpace,
    family: &CoverFamily,
    subfamily: &[i64],
    search_bound: f64,
) -> Result<Option<Point>> {
    if subfamily.is_empty() {
        return Err(Error::EmptySubfamily);
    }
    CoverSearch::new(space, family, search_bound)?.witness(subfamily)
}
