//! Line-oriented text formats. Node indices are one-based in text.
//!
//! ```text
//! # comment
//! n 3
//! edge 1 2        (directed edge, or a present statement)
//! biedge 1 2      (bidirected edge)
//! noedge 2 2      (absent statement, estimated structures only)
//! nobiedge 2 3
//! ```
//!
//! Weighted structures append a weight to each statement and must list
//! every pair exactly once. Solution files hold one block per graph, each
//! opened by `u <rate>` and separated by `---` lines.

use std::fmt::Write;

use crate::consistent::SolutionSet;
use crate::error::{parse_err, Error, Result};
use crate::graph::{EstimatedStructure, MeasurementGraph, Status, SystemGraph};
use crate::optimal::{OptimalResult, Statement, WeightedMeasurement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Keyword {
    Edge,
    NoEdge,
    BiEdge,
    NoBiEdge,
}

struct Line {
    number: usize,
    keyword: Keyword,
    i: usize,
    j: usize,
    weight: Option<f64>,
}

/// Splits a document into its node count and statement lines.
fn tokenize(text: &str, weighted: bool) -> Result<(usize, Vec<Line>)> {
    let mut n: Option<usize> = None;
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "n" {
            if n.is_some() {
                return Err(parse_err(number, "duplicate `n` line"));
            }
            if fields.len() != 2 {
                return Err(parse_err(number, "expected `n <count>`"));
            }
            let count: usize = fields[1]
                .parse()
                .map_err(|_| parse_err(number, format!("bad node count {:?}", fields[1])))?;
            if count == 0 || count > crate::bitmatrix::MAX_NODES {
                return Err(parse_err(number, Error::NodeCount(count).to_string()));
            }
            n = Some(count);
            continue;
        }
        let keyword = match fields[0] {
            "edge" => Keyword::Edge,
            "noedge" => Keyword::NoEdge,
            "biedge" => Keyword::BiEdge,
            "nobiedge" => Keyword::NoBiEdge,
            other => return Err(parse_err(number, format!("unknown statement {other:?}"))),
        };
        let Some(count) = n else {
            return Err(parse_err(number, "statement before `n` line"));
        };
        let expected = if weighted { 4 } else { 3 };
        if fields.len() != expected {
            return Err(parse_err(
                number,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        let index = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| parse_err(number, format!("bad node index {s:?}")))?;
            if v == 0 || v > count {
                return Err(parse_err(number, format!("node {v} outside 1..={count}")));
            }
            Ok(v - 1)
        };
        let i = index(fields[1])?;
        let j = index(fields[2])?;
        if matches!(keyword, Keyword::BiEdge | Keyword::NoBiEdge) && i == j {
            return Err(parse_err(number, "bidirected pair needs distinct nodes"));
        }
        let weight = if weighted {
            let w: f64 = fields[3]
                .parse()
                .map_err(|_| parse_err(number, format!("bad weight {:?}", fields[3])))?;
            if !w.is_finite() || w < 0.0 {
                return Err(parse_err(
                    number,
                    format!("weight {w} must be finite and >= 0"),
                ));
            }
            Some(w)
        } else {
            None
        };
        lines.push(Line {
            number,
            keyword,
            i,
            j,
            weight,
        });
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `n` line"))?;
    Ok((n, lines))
}

pub fn parse_system_graph(text: &str) -> Result<SystemGraph> {
    let (n, lines) = tokenize(text, false)?;
    let mut g = SystemGraph::empty(n)?;
    for l in lines {
        if l.keyword != Keyword::Edge {
            return Err(parse_err(
                l.number,
                "system graphs contain only `edge` lines",
            ));
        }
        g.add_edge(l.i, l.j)?;
    }
    Ok(g)
}

pub fn parse_measurement_graph(text: &str) -> Result<MeasurementGraph> {
    let (n, lines) = tokenize(text, false)?;
    let mut m = MeasurementGraph::empty(n)?;
    for l in lines {
        match l.keyword {
            Keyword::Edge => m.add_directed(l.i, l.j)?,
            Keyword::BiEdge => m.add_bidirected(l.i, l.j)?,
            _ => {
                return Err(parse_err(
                    l.number,
                    "concrete graphs contain only `edge` and `biedge` lines",
                ))
            }
        }
    }
    Ok(m)
}

/// Unmentioned pairs are unknown. Contradictory statements are rejected.
pub fn parse_estimated_structure(text: &str) -> Result<EstimatedStructure> {
    let (n, lines) = tokenize(text, false)?;
    let mut h = EstimatedStructure::unknown(n)?;
    for l in lines {
        let (status, bidirected) = match l.keyword {
            Keyword::Edge => (Status::Present, false),
            Keyword::NoEdge => (Status::Absent, false),
            Keyword::BiEdge => (Status::Present, true),
            Keyword::NoBiEdge => (Status::Absent, true),
        };
        let old = if bidirected {
            h.bidirected_status(l.i, l.j)
        } else {
            h.directed_status(l.i, l.j)
        };
        if old != Status::Unknown && old != status {
            return Err(parse_err(l.number, "contradicts an earlier statement"));
        }
        if bidirected {
            h.set_bidirected(l.i, l.j, status)?;
        } else {
            h.set_directed(l.i, l.j, status)?;
        }
    }
    Ok(h)
}

/// Every ordered pair and every unordered pair must appear exactly once.
pub fn parse_weighted(text: &str) -> Result<WeightedMeasurement> {
    let (n, lines) = tokenize(text, true)?;
    let mut w = WeightedMeasurement::new(n)?;
    let mut seen_dir = vec![false; n * n];
    let mut seen_bi = vec![false; n * n];
    for l in &lines {
        let weight = l.weight.expect("weighted line");
        let (seen, key) = match l.keyword {
            Keyword::Edge | Keyword::NoEdge => (&mut seen_dir, l.i * n + l.j),
            _ => (&mut seen_bi, l.i.min(l.j) * n + l.i.max(l.j)),
        };
        if std::mem::replace(&mut seen[key], true) {
            return Err(parse_err(l.number, "pair listed more than once"));
        }
        match l.keyword {
            Keyword::Edge => w.set_directed(l.i, l.j, Statement::present(weight))?,
            Keyword::NoEdge => w.set_directed(l.i, l.j, Statement::absent(weight))?,
            Keyword::BiEdge => w.set_bidirected(l.i, l.j, Statement::present(weight))?,
            Keyword::NoBiEdge => w.set_bidirected(l.i, l.j, Statement::absent(weight))?,
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !seen_dir[i * n + j] {
                return Err(parse_err(
                    0,
                    format!("missing directed pair {} {}", i + 1, j + 1),
                ));
            }
            if i < j && !seen_bi[i * n + j] {
                return Err(parse_err(
                    0,
                    format!("missing bidirected pair {} {}", i + 1, j + 1),
                ));
            }
        }
    }
    Ok(w)
}

pub fn write_system_graph(g: &SystemGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        writeln!(out, "edge {} {}", i + 1, j + 1).unwrap();
    }
    out
}

pub fn write_measurement_graph(m: &MeasurementGraph) -> String {
    let mut out = format!("n {}\n", m.n());
    for (i, j) in m.directed_edges() {
        writeln!(out, "edge {} {}", i + 1, j + 1).unwrap();
    }
    for (i, j) in m.bidirected_edges() {
        writeln!(out, "biedge {} {}", i + 1, j + 1).unwrap();
    }
    out
}

pub fn write_estimated_structure(h: &EstimatedStructure) -> String {
    let mut out = format!("n {}\n", h.n());
    for (kw, mask, sym) in [
        ("edge", h.directed_present(), false),
        ("noedge", h.directed_absent(), false),
        ("biedge", h.bidirected_present(), true),
        ("nobiedge", h.bidirected_absent(), true),
    ] {
        for (i, j) in mask.iter_ones().filter(|&(i, j)| !sym || i < j) {
            writeln!(out, "{kw} {} {}", i + 1, j + 1).unwrap();
        }
    }
    out
}

pub fn write_weighted(w: &WeightedMeasurement) -> String {
    let mut out = format!("n {}\n", w.n());
    for (i, j, s) in w.directed_statements() {
        let kw = if s.present { "edge" } else { "noedge" };
        writeln!(out, "{kw} {} {} {}", i + 1, j + 1, s.weight).unwrap();
    }
    for (i, j, s) in w.bidirected_statements() {
        let kw = if s.present { "biedge" } else { "nobiedge" };
        writeln!(out, "{kw} {} {} {}", i + 1, j + 1, s.weight).unwrap();
    }
    out
}

pub fn write_solutions(set: &SolutionSet) -> String {
    let blocks: Vec<String> = set
        .solutions
        .iter()
        .map(|s| format!("u {}\n{}", s.u, write_system_graph(&s.graph)))
        .collect();
    blocks.join("---\n")
}

/// Like [`write_solutions`], with a `# cost` comment in each block.
pub fn write_optimal(result: &OptimalResult) -> String {
    let blocks: Vec<String> = result
        .solutions
        .iter()
        .map(|s| {
            format!(
                "u {}\n# cost {}\n{}",
                s.u,
                s.cost,
                write_system_graph(&s.graph)
            )
        })
        .collect();
    blocks.join("---\n")
}

/// Reads a solution file back into `(graph, u)` pairs.
pub fn parse_solutions(text: &str) -> Result<Vec<(SystemGraph, usize)>> {
    let mut out = Vec::new();
    let mut block = String::new();
    let mut u: Option<usize> = None;
    let mut start = 1;
    let mut flush = |block: &mut String, u: &mut Option<usize>, start: usize| -> Result<()> {
        if block.trim().is_empty() && u.is_none() {
            return Ok(());
        }
        let rate = u
            .take()
            .ok_or_else(|| parse_err(start, "block without `u` line"))?;
        let g = parse_system_graph(block).map_err(|e| match e {
            Error::Parse { line, msg } => parse_err(start + line - 1, msg),
            other => other,
        })?;
        out.push((g, rate));
        block.clear();
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line == "---" {
            flush(&mut block, &mut u, start)?;
            start = idx + 2;
            continue;
        }
        if let Some(rest) = line.strip_prefix("u ") {
            let rate = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("bad rate {rest:?}")))?;
            u = Some(rate);
            block.push('\n');
            continue;
        }
        block.push_str(raw);
        block.push('\n');
    }
    flush(&mut block, &mut u, start)?;
    Ok(out)
}
