//! Plain-text formats for matrices, graphs, point configurations and
//! parameter lists. `#` starts a comment anywhere on a line.
//!
//! - matrix: `rows cols`, then `rows` lines of `cols` rationals
//! - graph: `n m`, then `m` lines `u v`, then optionally `B: x1 x2 ...`
//!   listing one side of a bipartition
//! - points: `n d`, then `n` lines of `d` rationals
//! - params: rationals separated by whitespace or commas
//!
//! Rationals are integers or `num/den`.

use std::fmt::Write as _;
use std::str::FromStr;

use rigidlab_core::graph::{Bipartition, Graph};
use rigidlab_core::{Matrix, Params, PointConfig, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Some((_, den)) = s.split_once('/') {
        if den.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(format!("zero denominator in `{s}`"));
        }
    }
    Rational::from_str(s).map_err(|_| format!("`{s}` is not a rational number"))
}

fn parse_num<T: FromStr>(line: usize, s: &str, what: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| err(line, format!("`{s}` is not a valid {what}")))
}

fn header(lines: &mut dyn Iterator<Item = (usize, &str)>, what: &str) -> Result<(usize, usize, usize), FormatError> {
    let (line, text) = lines.next().ok_or_else(|| err(0, format!("empty {what} file")))?;
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(err(line, format!("{what} header must hold two counts")));
    }
    Ok((line, parse_num(line, parts[0], "count")?, parse_num(line, parts[1], "count")?))
}

fn rational_row(line: usize, text: &str, len: usize) -> Result<Vec<Rational>, FormatError> {
    let row = text.split_whitespace().map(|t| parse_rational(t).map_err(|m| err(line, m))).collect::<Result<Vec<_>, _>>()?;
    if row.len() != len {
        return Err(err(line, format!("expected {len} entries, found {}", row.len())));
    }
    Ok(row)
}

fn rational_rows(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    count: usize,
    len: usize,
    after: usize,
) -> Result<Vec<Vec<Rational>>, FormatError> {
    let mut rows = Vec::with_capacity(count);
    let mut last = after;
    for _ in 0..count {
        let (line, text) = lines.next().ok_or_else(|| err(last + 1, format!("expected {count} rows")))?;
        rows.push(rational_row(line, text, len)?);
        last = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "unexpected trailing content"));
    }
    Ok(rows)
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FormatError> {
    let mut lines = content_lines(text);
    let (line, rows, cols) = header(&mut lines, "matrix")?;
    let data = rational_rows(&mut lines, rows, cols, line)?;
    Matrix::from_rows_with_cols(data, cols).map_err(|e| err(line, e.to_string()))
}

/// The matrix preceded by one `# ` comment line per note.
pub fn write_matrix(m: &Matrix, notes: &[String]) -> String {
    let mut out = String::new();
    for n in notes {
        let _ = writeln!(out, "# {n}");
    }
    out.push_str(&m.to_string());
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    let (first, n, m) = header(&mut lines, "graph")?;
    let mut g = Graph::empty(n);
    let mut last = first;
    for _ in 0..m {
        let (line, t) = lines.next().ok_or_else(|| err(last + 1, format!("expected {m} edges")))?;
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(line, "an edge line holds two vertices"));
        }
        let (u, v) = (parse_num(line, parts[0], "vertex")?, parse_num(line, parts[1], "vertex")?);
        g.add_edge(u, v).map_err(|e| err(line, e.to_string()))?;
        last = line;
    }
    if let Some((line, t)) = lines.next() {
        let Some(rest) = t.strip_prefix("B:") else {
            return Err(err(line, "unexpected trailing content"));
        };
        let x = rest.split_whitespace().map(|s| parse_num(line, s, "vertex")).collect::<Result<Vec<usize>, _>>()?;
        let bip = Bipartition::new(n, x).map_err(|e| err(line, e.to_string()))?;
        g = g.with_bipartition(bip).map_err(|e| err(line, e.to_string()))?;
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "unexpected trailing content"));
        }
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.num_edges());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u(), e.v());
    }
    if let Some(bip) = g.bipartition() {
        let xs: Vec<String> = bip.x().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "B: {}", xs.join(" "));
    }
    out
}

pub fn parse_points(text: &str) -> Result<PointConfig, FormatError> {
    let mut lines = content_lines(text);
    let (line, n, d) = header(&mut lines, "points")?;
    let rows = rational_rows(&mut lines, n, d, line)?;
    PointConfig::new(d, rows).map_err(|e| err(line, e.to_string()))
}

pub fn write_points(p: &PointConfig) -> String {
    let mut out = format!("{} {}\n", p.len(), p.dim());
    for x in p.points() {
        let row: Vec<String> = x.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_params(text: &str) -> Result<Params, FormatError> {
    let mut t = Vec::new();
    for (line, l) in content_lines(text) {
        for tok in l.split([' ', '\t', ',']).filter(|s| !s.is_empty()) {
            t.push(parse_rational(tok).map_err(|m| err(line, m))?);
        }
    }
    Params::new(t).map_err(|e| err(0, e.to_string()))
}

/// Comma-separated rationals, as used on command lines and in manifests.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').filter(|t| !t.is_empty()).map(parse_rational).collect()
}

/// Comma-separated `u-v` pairs.
pub fn parse_edge_list(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t.split_once('-').ok_or_else(|| format!("`{t}` is not an edge `u-v`"))?;
            let a = a.parse().map_err(|_| format!("bad vertex in `{t}`"))?;
            let b = b.parse().map_err(|_| format!("bad vertex in `{t}`"))?;
            Ok((a, b))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').filter(|t| !t.is_empty()).map(|t| t.parse().map_err(|_| format!("`{t}` is not a count"))).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use rigidlab_core::linalg::{frac, int};

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_rows(vec![vec![frac(1, 2), int(-3)], vec![int(0), frac(-7, 4)]]).unwrap();
        let text = write_matrix(&m, &["builder=test".into()]);
        assert!(text.starts_with("# builder=test\n2 2\n1/2 -3\n"));
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert_eq!(parse_matrix("0 3\n").unwrap().cols(), 3);
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(parse_matrix("2 2\n1 2\n3\n").unwrap_err().line, 3);
        assert_eq!(parse_matrix("1 1\n1/0\n").unwrap_err().line, 2);
        assert!(parse_matrix("1 1\nx\n").is_err());
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("1 1\n1\n2\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let text = "# K_{2,2}\n4 4\n1 3\n1 4\n2 3\n2 4\nB: 1 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert!(g.bipartition().unwrap().in_x(2));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        assert_eq!(parse_graph("3 2\n1 2\n1 1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph("3 2\n1 2\n1 2\n").unwrap_err().line, 3);
        assert!(parse_graph("3 1\n1 4\n").is_err());
        assert!(parse_graph("3 2\n1 2\n").is_err());
        assert!(parse_graph("3 1\n1 2\nB: 1 2\n").is_err());
        assert!(parse_graph("3 x\n").is_err());
    }

    #[test]
    fn points_and_params() {
        let p = parse_points("2 2\n1 2\n3/4 -1\n").unwrap();
        assert_eq!(p.vertex(2), &[frac(3, 4), int(-1)]);
        assert_eq!(parse_points(&write_points(&p)).unwrap(), p);
        assert!(parse_points("2 2\n1 2\n").is_err());
        let t = parse_params("1, 2 -3/2\n# comment\n5").unwrap();
        assert_eq!(t.len(), 4);
        assert!(parse_params("1 1").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_edge_list("1-2,3-4").unwrap(), [(1, 2), (3, 4)]);
        assert!(parse_edge_list("12").is_err());
        assert_eq!(parse_usize_list("1,3").unwrap(), [1, 3]);
        assert_eq!(parse_rational_list("1/2,3").unwrap(), [frac(1, 2), int(3)]);
    }
}
