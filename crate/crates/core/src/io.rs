//! Plain-text graph files.
//!
//! ```text
//! n d [directed|undirected]
//! <d neighbor ids of vertex 0>
//! ...
//! <d neighbor ids of vertex n-1>
//! ```
//!
//! An optional label file has the same shape without the header. Writing
//! then reading a graph reproduces the slot table exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Orientation, RegularGraph};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn parse_row<T: std::str::FromStr>(text: &str, line: usize, d: usize) -> Result<Vec<T>> {
    let row = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad integer {tok:?}"),
            })
        })
        .collect::<Result<Vec<T>>>()?;
    if row.len() != d {
        return parse_err(line, format!("expected {d} entries, found {}", row.len()));
    }
    Ok(row)
}

pub fn graph_to_string(g: &RegularGraph) -> String {
    let m = g.materialize();
    let mut out = format!("{} {} {}\n", m.n(), m.d(), m.orientation().as_str());
    for v in 0..m.n() {
        let mut first = true;
        for w in m.neighbors(v) {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{w}");
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn labels_to_string(g: &RegularGraph) -> Option<String> {
    let labels = g.labels()?;
    let mut out = String::new();
    for row in labels.chunks(g.d().max(1)).take(g.n()) {
        let strs: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&strs.join(" "));
        out.push('\n');
    }
    Some(out)
}

pub fn parse_graph(text: &str) -> Result<RegularGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 2 || toks.len() > 3 {
        return parse_err(1, "header must be `n d [directed|undirected]`");
    }
    let n: usize = toks[0]
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: format!("bad n {:?}", toks[0]) })?;
    let d: usize = toks[1]
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: format!("bad d {:?}", toks[1]) })?;
    let orientation = match toks.get(2) {
        None | Some(&"undirected") => Orientation::Undirected,
        Some(&"directed") => Orientation::Directed,
        Some(other) => return parse_err(1, format!("unknown orientation {other:?}")),
    };
    let mut slots = Vec::with_capacity(n.saturating_mul(d));
    for v in 0..n {
        let (i, line) = lines
            .next()
            .ok_or(Error::Parse { line: v + 2, msg: format!("missing row for vertex {v}") })?;
        slots.extend(parse_row::<usize>(line, i + 1, d)?);
    }
    if let Some((i, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return parse_err(i + 1, format!("unexpected trailing content {extra:?}"));
    }
    RegularGraph::from_slots(n, d, slots, orientation)
}

pub fn parse_labels(text: &str, n: usize, d: usize) -> Result<Vec<u32>> {
    let mut lines = text.lines().enumerate();
    let mut labels = Vec::with_capacity(n * d);
    for v in 0..n {
        let (i, line) = lines
            .next()
            .ok_or(Error::Parse { line: v + 1, msg: format!("missing label row for vertex {v}") })?;
        labels.extend(parse_row::<u32>(line, i + 1, d)?);
    }
    Ok(labels)
}

/// Companion label file path: `<path>.labels`.
pub fn labels_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

/// Write the graph and, when labels exist, the companion label file.
pub fn write_graph(g: &RegularGraph, path: &Path) -> Result<()> {
    fs::write(path, graph_to_string(g))?;
    if let Some(labels) = labels_to_string(g) {
        fs::write(labels_path(path), labels)?;
    }
    Ok(())
}

/// Read a graph, attaching labels from `<path>.labels` if that file exists.
pub fn read_graph(path: &Path) -> Result<RegularGraph> {
    let g = parse_graph(&fs::read_to_string(path)?)?;
    let lp = labels_path(path);
    if lp.exists() {
        let labels = parse_labels(&fs::read_to_string(lp)?, g.n(), g.d())?;
        return g.with_labels(labels);
    }
    Ok(g)
}

/// Query script: one non-negative time per line. Blank lines and anything
/// after `#` are ignored.
pub fn parse_queries(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let t = body.parse::<u64>().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected a non-negative integer, found {body:?}"),
        })?;
        out.push(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn header_and_round_trip() {
        let c8 = RegularGraph::cayley(GroupSpec::cyclic(8, &[1, 7]).unwrap()).unwrap();
        let text = graph_to_string(&c8);
        assert!(text.starts_with("8 2 undirected\n"));
        let back = parse_graph(&text).unwrap();
        assert_eq!(graph_to_string(&back), text);
        assert_eq!(back.slots().unwrap(), c8.materialize().slots().unwrap());
    }

    #[test]
    fn orientation_defaults_to_undirected() {
        let g = parse_graph("2 1\n1\n0\n").unwrap();
        assert!(g.is_undirected());
        assert!(parse_graph("2 1 directed\n1\n1\n").is_ok());
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("2 1\n1\n").is_err());
        assert!(parse_graph("2 1\n1 0\n0\n").is_err());
        assert!(parse_graph("2 1\nx\n0\n").is_err());
        assert!(parse_graph("2 1 sideways\n1\n0\n").is_err());
        assert!(parse_graph("2 1\n1\n0\n5\n").is_err());
    }

    #[test]
    fn labels_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c5.g");
        let c5 = RegularGraph::cayley(GroupSpec::cyclic(5, &[1, 4]).unwrap()).unwrap();
        write_graph(&c5, &p).unwrap();
        let back = read_graph(&p).unwrap();
        assert!(back.has_labels());
        assert_eq!(back.labels(), c5.labels());
        assert_eq!(fs::read_to_string(&p).unwrap(), graph_to_string(&back));
    }

    #[test]
    fn query_scripts() {
        let q = parse_queries("# times\n5\n\n 0 # start\n1048576\n").unwrap();
        assert_eq!(q, vec![5, 0, 1 << 20]);
        assert!(matches!(parse_queries("3\n-1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
