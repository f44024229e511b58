//! Random integer tables for counterexample search.
//!
//! Candidates are drawn with the cheap structural constraints built in
//! (symmetric pair distances, self-distances below every row entry) and then
//! filtered by exhaustive axiom checking; the filter is the only validity
//! guarantee.

use rand::Rng;

use super::{check_axioms, AxiomSet, Carrier, PartialSbSpace, Table, TripleMetric, TupleSource};

/// An integer table on `n` labelled points with entries in `0..=max_value`.
pub fn random_candidate<R: Rng + ?Sized>(n: usize, max_value: u32, coefficient: f64, rng: &mut R) -> PartialSbSpace {
    assert!(n >= 1 && max_value >= 1);
    let self_d: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_value / 2)).collect();
    let mut pair = vec![vec![0u32; n]; n];
    for i in 0..n {
        pair[i][i] = self_d[i];
        for j in i + 1..n {
            let v = rng.gen_range(self_d[i].max(self_d[j])..=max_value);
            pair[i][j] = v;
            pair[j][i] = v;
        }
    }
    let mut table = Table::filled(n, 0.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = if i == j {
                    pair[i][k]
                } else {
                    rng.gen_range(self_d[i]..=max_value)
                };
                table.set(i, j, k, f64::from(v));
            }
        }
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    PartialSbSpace::new(Carrier::labelled(labels), TripleMetric::Tabulated(table), coefficient)
        .expect("labelled carrier matches table size")
}

/// Draws candidates until one passes every partial S_b axiom exhaustively.
pub fn random_valid<R: Rng + ?Sized>(
    n: usize,
    max_value: u32,
    coefficient: f64,
    max_attempts: usize,
    rng: &mut R,
) -> Option<PartialSbSpace> {
    (0..max_attempts).find_map(|_| {
        let space = random_candidate(n, max_value, coefficient, rng);
        let report = check_axioms(&space, AxiomSet::PartialSb, TupleSource::Exhaustive).ok()?;
        report.passed.then_some(space)
    })
}
