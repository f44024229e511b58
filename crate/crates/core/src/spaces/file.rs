//! Line-based space files.
//!
//! ```text
//! # comment
//! points: 1 2
//! coefficient: 1
//! 1 1 1 4
//! 1 1 2 8
//! ...
//! ```
//!
//! Every ordered triple of labels must appear exactly once.

use std::fmt::Write;

use super::{Carrier, PartialSbSpace, Table, TripleMetric};
use crate::error::{Error, Result};

pub fn load_tabulated_space(text: &str) -> Result<PartialSbSpace> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let parse_err = |line: usize, message: &str| Error::Parse { line, message: message.to_string() };

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "missing `points:` line"))?;
    let labels: Vec<String> = header
        .strip_prefix("points:")
        .ok_or_else(|| parse_err(line_no, "expected `points: <label> ...`"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if labels.is_empty() {
        return Err(parse_err(line_no, "point list is empty"));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(parse_err(line_no, &format!("duplicate point label `{l}`")));
        }
    }

    let (line_no, coef_line) =
        lines.next().ok_or_else(|| parse_err(line_no + 1, "missing `coefficient:` line"))?;
    let coefficient: f64 = coef_line
        .strip_prefix("coefficient:")
        .ok_or_else(|| parse_err(line_no, "expected `coefficient: <real>`"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, "coefficient is not a number"))?;

    let n = labels.len();
    let index = |line: usize, label: &str| {
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| parse_err(line, &format!("unknown point label `{label}`")))
    };
    let mut table = Table::filled(n, 0.0);
    let mut seen = vec![false; n * n * n];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, j, k, v] = fields[..] else {
            return Err(parse_err(line_no, "expected `<i> <j> <k> <value>`"));
        };
        let (i, j, k) = (index(line_no, i)?, index(line_no, j)?, index(line_no, k)?);
        let value: f64 = v
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| parse_err(line_no, &format!("`{v}` is not a finite number")))?;
        if value < 0.0 {
            return Err(Error::NegativeValue { line: line_no, value });
        }
        let slot = (i * n + j) * n + k;
        if seen[slot] {
            return Err(parse_err(line_no, "triple given more than once"));
        }
        seen[slot] = true;
        table.set(i, j, k, value);
    }
    if let Some(slot) = seen.iter().position(|s| !s) {
        let (i, j, k) = (slot / (n * n), (slot / n) % n, slot % n);
        return Err(Error::IncompleteTable(labels[i].clone(), labels[j].clone(), labels[k].clone()));
    }

    PartialSbSpace::new(Carrier::labelled(labels), TripleMetric::Tabulated(table), coefficient)
}

/// Writes a tabulated space in the format read by [`load_tabulated_space`].
pub fn to_space_file(space: &PartialSbSpace) -> Result<String> {
    let (Carrier::Finite { labels, .. }, TripleMetric::Tabulated(table)) = (space.carrier(), space.metric())
    else {
        return Err(Error::InvalidArgument("only tabulated spaces can be written as space files".into()));
    };
    let mut out = String::new();
    if let Some(name) = space.name() {
        let _ = writeln!(out, "# {name}");
    }
    let _ = writeln!(out, "points: {}", labels.join(" "));
    let _ = writeln!(out, "coefficient: {}", space.coefficient());
    for ((i, j, k), v) in table.entries() {
        let _ = writeln!(out, "{} {} {} {}", labels[i], labels[j], labels[k], v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::builtin_space;

    const TWO_POINT_B: &str = "\
# two isolated points
points: 1 2
coefficient: 1
1 1 1 4
2 2 2 4   # self-distances
1 1 2 8
2 2 1 8
1 2 1 8
2 1 1 8
1 2 2 8
2 1 2 8
";

    #[test]
    fn loads_two_point_b() {
        let loaded = load_tabulated_space(TWO_POINT_B).unwrap();
        assert_eq!(loaded, builtin_space("two_point_b").unwrap());
    }

    #[test]
    fn writer_round_trips() {
        let b = builtin_space("two_point_a").unwrap();
        let text = to_space_file(&b).unwrap();
        assert_eq!(load_tabulated_space(&text).unwrap(), b);
        assert!(to_space_file(&builtin_space("quintic_ray").unwrap()).is_err());
    }

    #[test]
    fn empty_point_list() {
        assert!(matches!(
            load_tabulated_space("points:\ncoefficient: 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(load_tabulated_space(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_triple() {
        let text: String = TWO_POINT_B.lines().filter(|l| !l.starts_with("2 1 2")).collect::<Vec<_>>().join("\n");
        assert_eq!(
            load_tabulated_space(&text).unwrap_err(),
            Error::IncompleteTable("2".into(), "1".into(), "2".into())
        );
    }

    #[test]
    fn negative_and_malformed_lines() {
        let neg = TWO_POINT_B.replace("1 1 1 4", "1 1 1 -4");
        assert!(matches!(load_tabulated_space(&neg), Err(Error::NegativeValue { line: 4, .. })));
        let bad = TWO_POINT_B.replace("1 1 1 4", "1 1 4");
        assert!(matches!(load_tabulated_space(&bad), Err(Error::Parse { line: 4, .. })));
        let dup = format!("{TWO_POINT_B}1 1 1 4\n");
        assert!(matches!(load_tabulated_space(&dup), Err(Error::Parse { .. })));
        let unknown = TWO_POINT_B.replace("1 1 1 4", "1 1 3 4");
        assert!(matches!(load_tabulated_space(&unknown), Err(Error::Parse { .. })));
        let coef = TWO_POINT_B.replace("coefficient: 1", "coefficient: 0.5");
        assert_eq!(load_tabulated_space(&coef).unwrap_err(), Error::InvalidCoefficient(0.5));
    }
}
