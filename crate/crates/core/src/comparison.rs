//! Comparison functions for Boyd-Wong and Matkowski contractions, with
//! sample-based checks of their defining properties.

use std::fmt;

use serde::Serialize;

use crate::arith::{at_most, strictly_less, EQ_REL_TOL};
use crate::error::{Error, Result};

/// Absolute threshold below which `J^k(v)` counts as having reached zero.
pub const DECAY_TOL: f64 = 1e-9;
/// Points per side in the upper-semicontinuity probe.
pub const USC_PROBE_LEN: usize = 16;
/// Step shrink factor of the upper-semicontinuity probe.
pub const USC_SHRINK: f64 = 0.5;
pub const DEFAULT_GRID: [f64; 9] = [1e-6, 0.1, 0.5, 1.0, 2.0, 10.0, 243.0, 486.0, 34100.0];
pub const DEFAULT_ITER_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonKind {
    BoydWong,
    Matkowski,
}

impl ComparisonKind {
    pub fn name(self) -> &'static str {
        match self {
            ComparisonKind::BoydWong => "boyd-wong",
            ComparisonKind::Matkowski => "matkowski",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonRule {
    /// `9a/10` on `[0, 1]`, `a/2` above.
    PaperTau,
    Half,
    Identity,
    /// Linear interpolation through breakpoints starting at `x = 0`,
    /// extended with the last segment's slope.
    PiecewiseLinear(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonFn {
    pub kind: ComparisonKind,
    pub rule: ComparisonRule,
}

impl ComparisonFn {
    pub fn paper_tau() -> Self {
        ComparisonFn { kind: ComparisonKind::BoydWong, rule: ComparisonRule::PaperTau }
    }

    pub fn half() -> Self {
        ComparisonFn { kind: ComparisonKind::Matkowski, rule: ComparisonRule::Half }
    }

    pub fn identity(kind: ComparisonKind) -> Self {
        ComparisonFn { kind, rule: ComparisonRule::Identity }
    }

    /// `paper_tau`, `half` or `identity`, tagged with `kind`.
    pub fn builtin(name: &str, kind: ComparisonKind) -> Result<Self> {
        let rule = match name {
            "paper_tau" => ComparisonRule::PaperTau,
            "half" => ComparisonRule::Half,
            "identity" => ComparisonRule::Identity,
            other => return Err(Error::InvalidComparison(format!("unknown builtin `{other}`"))),
        };
        Ok(ComparisonFn { kind, rule })
    }

    pub fn piecewise_linear(kind: ComparisonKind, breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidComparison("need at least two breakpoints".into()));
        }
        if breakpoints[0].0 != 0.0 {
            return Err(Error::InvalidComparison("first breakpoint must be at x = 0".into()));
        }
        if breakpoints.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite() || y < 0.0) {
            return Err(Error::InvalidComparison("breakpoints must be finite with y >= 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidComparison("breakpoint x values must increase".into()));
        }
        let n = breakpoints.len();
        let (a, b) = (breakpoints[n - 2], breakpoints[n - 1]);
        if b.1 < a.1 {
            return Err(Error::InvalidComparison("last segment must not decrease".into()));
        }
        Ok(ComparisonFn { kind, rule: ComparisonRule::PiecewiseLinear(breakpoints) })
    }

    /// Reads `[[x, y], ...]`.
    pub fn from_json(kind: ComparisonKind, text: &str) -> Result<Self> {
        let pairs: Vec<(f64, f64)> =
            serde_json::from_str(text).map_err(|e| Error::InvalidComparison(e.to_string()))?;
        Self::piecewise_linear(kind, pairs)
    }

    pub fn eval(&self, v: f64) -> f64 {
        match &self.rule {
            ComparisonRule::PaperTau => {
                if v <= 1.0 {
                    0.9 * v
                } else {
                    v / 2.0
                }
            }
            ComparisonRule::Half => v / 2.0,
            ComparisonRule::Identity => v,
            ComparisonRule::PiecewiseLinear(bp) => {
                let seg = bp.windows(2).position(|w| v <= w[1].0).unwrap_or(bp.len() - 2);
                let ((x0, y0), (x1, y1)) = (bp[seg], bp[seg + 1]);
                (y0 + (y1 - y0) * (v - x0) / (x1 - x0)).max(0.0)
            }
        }
    }

    pub fn name(&self) -> String {
        match &self.rule {
            ComparisonRule::PaperTau => "paper_tau".into(),
            ComparisonRule::Half => "half".into(),
            ComparisonRule::Identity => "identity".into(),
            ComparisonRule::PiecewiseLinear(bp) => format!("piecewise-linear[{}]", bp.len()),
        }
    }
}

impl fmt::Display for ComparisonFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.kind.name())
    }
}

/// `f^k(v)`; `k = 0` gives `v`.
pub fn iterate_comparison(f: &ComparisonFn, v: f64, k: usize) -> f64 {
    (0..k).fold(v, |acc, _| f.eval(acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    ZeroAtZero,
    BelowIdentity,
    Monotone,
    IterateDecay,
    /// Numeric probe only; finitely many samples cannot prove semicontinuity.
    UscProbe,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::ZeroAtZero => "zero-at-zero",
            Property::BelowIdentity => "below-identity",
            Property::Monotone => "monotone",
            Property::IterateDecay => "iterate-decay",
            Property::UscProbe => "usc-probe",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub property: Property,
    pub passed: bool,
    /// Input at which the property fails.
    pub witness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub function: String,
    pub results: Vec<PropertyResult>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, property: Property) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.property == property)
    }
}

fn result(property: Property, witness: Option<f64>) -> PropertyResult {
    PropertyResult { property, passed: witness.is_none(), witness }
}

fn zero_at_zero(f: &ComparisonFn) -> PropertyResult {
    result(Property::ZeroAtZero, (f.eval(0.0) != 0.0).then_some(0.0))
}

fn below_identity(f: &ComparisonFn, grid: &[f64]) -> PropertyResult {
    result(Property::BelowIdentity, grid.iter().copied().find(|&v| !strictly_less(f.eval(v), v)))
}

fn monotone(f: &ComparisonFn, grid: &[f64]) -> PropertyResult {
    let bad = grid.windows(2).find(|w| !at_most(f.eval(w[0]), f.eval(w[1]))).map(|w| w[1]);
    result(Property::Monotone, bad)
}

fn usc_probe(f: &ComparisonFn, grid: &[f64]) -> PropertyResult {
    let bad = grid.iter().copied().find(|&g| {
        let value = f.eval(g);
        let tol = EQ_REL_TOL * value.abs().max(1.0);
        // Excess of the neighbourhood maximum over f(g) at shrinking radii.
        let mut h = g * USC_SHRINK;
        let mut excess = Vec::with_capacity(USC_PROBE_LEN);
        for _ in 0..USC_PROBE_LEN {
            let m = f.eval((g - h).max(0.0)).max(f.eval(g + h));
            excess.push(m - value);
            h *= USC_SHRINK;
        }
        // A continuous point shows the excess shrinking with the radius; an
        // upward jump leaves it roughly constant through the tail.
        let mid = excess[USC_PROBE_LEN / 2];
        let last = excess[USC_PROBE_LEN - 1];
        last > tol && last > 0.25 * mid
    });
    result(Property::UscProbe, bad)
}

fn iterate_decay(f: &ComparisonFn, grid: &[f64], budget: usize) -> PropertyResult {
    let bad = grid.iter().copied().find(|&v| {
        let mut x = v;
        for _ in 0..budget {
            x = f.eval(x);
            if x < DECAY_TOL {
                return false;
            }
        }
        true
    });
    result(Property::IterateDecay, bad)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|&g| !(g.is_finite() && g > 0.0)) {
        return Err(Error::InvalidArgument("grid must be nonempty and strictly positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid must be sorted ascending".into()));
    }
    Ok(())
}

/// `τ(0) = 0`, `τ(v) < v`, monotone on consecutive grid pairs, and the
/// upper-semicontinuity probe at each grid point.
pub fn check_boyd_wong_properties(f: &ComparisonFn, grid: &[f64]) -> Result<ComparisonReport> {
    check_grid(grid)?;
    Ok(ComparisonReport {
        function: f.name(),
        results: vec![zero_at_zero(f), below_identity(f, grid), monotone(f, grid), usc_probe(f, grid)],
    })
}

/// Monotone on grid pairs, `J^k(v)` below [`DECAY_TOL`] within `iter_budget`
/// steps, and the consequences `J(0) = 0`, `J(v) < v`.
pub fn check_matkowski_properties(f: &ComparisonFn, grid: &[f64], iter_budget: usize) -> Result<ComparisonReport> {
    check_grid(grid)?;
    if iter_budget == 0 {
        return Err(Error::InvalidArgument("iteration budget must be at least 1".into()));
    }
    Ok(ComparisonReport {
        function: f.name(),
        results: vec![
            zero_at_zero(f),
            below_identity(f, grid),
            monotone(f, grid),
            iterate_decay(f, grid, iter_budget),
        ],
    })
}
