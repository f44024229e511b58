use std::collections::BTreeSet;

use crate::arith::{approx_eq, strictly_less};
use crate::error::{Error, Result};
use crate::spaces::{PartialSbSpace, Point};

/// `D(center; radius) = { z : ℘(center, center, z) < radius + ℘(center, center, center) }`,
/// materialized against a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenBall {
    pub center: Point,
    pub radius: f64,
    pub members: BTreeSet<Point>,
}

impl OpenBall {
    pub fn contains(&self, p: Point) -> bool {
        self.members.contains(&p)
    }

    pub fn is_subset(&self, other: &OpenBall) -> bool {
        self.members.is_subset(&other.members)
    }
}

pub(crate) fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(radius))
    }
}

/// Membership test for a single point, without validation.
pub(crate) fn in_ball(space: &PartialSbSpace, center: Point, radius: f64, z: Point) -> bool {
    strictly_less(space.dist(center, center, z), radius + space.dist(center, center, center))
}

/// The ball over `candidates`. The center is always considered, even when
/// absent from the candidate list.
pub fn open_ball(space: &PartialSbSpace, center: Point, radius: f64, candidates: &[Point]) -> Result<OpenBall> {
    check_radius(radius)?;
    space.check_point(center)?;
    for &z in candidates {
        space.check_point(z)?;
    }
    let members = candidates
        .iter()
        .copied()
        .chain(std::iter::once(center))
        .filter(|&z| in_ball(space, center, radius, z))
        .collect();
    Ok(OpenBall { center, radius, members })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerBall {
    /// `s` when `v = x`, otherwise `s / (4t)`.
    pub radius: f64,
    /// Whether `D(v; radius) ⊆ D(x; s)` over the candidates.
    pub contained: bool,
    pub outer: OpenBall,
    pub inner: OpenBall,
}

/// For `v ∈ D(x; s)`, picks a radius `c` for a ball around `v` and checks
/// by direct comparison that it stays inside `D(x; s)`.
pub fn inner_ball_radius(
    space: &PartialSbSpace,
    x: Point,
    s: f64,
    v: Point,
    candidates: &[Point],
) -> Result<InnerBall> {
    let outer = open_ball(space, x, s, candidates)?;
    space.check_point(v)?;
    if !in_ball(space, x, s, v) {
        return Err(Error::NotInBall { point: space.label(v), center: space.label(x), radius: s });
    }
    let radius = if v == x { s } else { s / (4.0 * space.coefficient()) };
    let inner = open_ball(space, v, radius, candidates)?;
    let contained = inner.members.iter().all(|&z| in_ball(space, x, s, z));
    Ok(InnerBall { radius, contained, outer, inner })
}

/// One radius per distinct ball centered at `center` over `candidates`:
/// midpoints between consecutive gap thresholds `℘(c,c,z) − ℘(c,c,c)`, plus
/// one radius above the largest threshold.
pub fn canonical_radii(space: &PartialSbSpace, center: Point, candidates: &[Point]) -> Result<Vec<f64>> {
    space.check_point(center)?;
    let base = space.dist(center, center, center);
    let mut thresholds = vec![0.0];
    for &z in candidates {
        space.check_point(z)?;
        let gap = space.dist(center, center, z) - base;
        if gap > 0.0 {
            thresholds.push(gap);
        }
    }
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup_by(|a, b| approx_eq(*a, *b));
    let mut radii: Vec<f64> = thresholds.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    let top = *thresholds.last().unwrap();
    radii.push(top + top.max(1.0));
    Ok(radii)
}
