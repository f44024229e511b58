use super::Point;

/// Analytic distance rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinMetric {
    /// `a⁵` on the diagonal, `2(a⁵ + c⁵)` when only the first two arguments
    /// agree, `a⁵ + b⁵ + c⁵` otherwise.
    QuinticPower,
}

impl BuiltinMetric {
    pub fn eval(self, a: f64, b: f64, c: f64) -> f64 {
        match self {
            BuiltinMetric::QuinticPower => {
                let p5 = |x: f64| x.powi(5);
                if a == b && b == c {
                    p5(a)
                } else if a == b {
                    2.0 * (p5(a) + p5(c))
                } else {
                    p5(a) + p5(b) + p5(c)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinMetric::QuinticPower => "quintic",
        }
    }
}

/// A dense `n × n × n` table of distances indexed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    n: usize,
    values: Vec<f64>,
}

impl Table {
    pub fn filled(n: usize, value: f64) -> Self {
        Table { n, values: vec![value; n * n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.index(i, j, k)]
    }

    /// Overwrites one entry. Any finite value is accepted, including
    /// negative ones, so that deliberately broken tables can be built.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.values[idx] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        let n = self.n;
        self.values
            .iter()
            .enumerate()
            .map(move |(idx, &v)| ((idx / (n * n), (idx / n) % n, idx % n), v))
    }
}

/// The three-argument distance of a space.
#[derive(Debug, Clone, PartialEq)]
pub enum TripleMetric {
    Tabulated(Table),
    Builtin(BuiltinMetric),
}

impl TripleMetric {
    /// Evaluates on points already known to belong to the carrier. Returns
    /// `None` when the point kind does not fit the representation.
    pub(crate) fn eval(&self, p: Point, q: Point, r: Point) -> Option<f64> {
        match self {
            TripleMetric::Tabulated(t) => {
                let (i, j, k) = (p.label_index()?, q.label_index()?, r.label_index()?);
                (i < t.n && j < t.n && k < t.n).then(|| t.get(i, j, k))
            }
            TripleMetric::Builtin(rule) => Some(rule.eval(p.scalar()?, q.scalar()?, r.scalar()?)),
        }
    }
}
