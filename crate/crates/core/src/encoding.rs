//! Answer-set programs equivalent to the native searches, for use with an
//! external solver such as clingo.
//!
//! The consistency program has one answer set per consistent `(G1, u)`
//! pair. The weighted program replaces the four integrity constraints with
//! weak constraints whose optimum equals the native minimum in milli-units.

use std::fmt::Write;

use crate::graph::{EstimatedStructure, USpec};
use crate::optimal::{to_milli, WeightedMeasurement};

const RATE_CHOICE: &str = "1 { u(U): urange(U) } 1.";

const GENERATE_AND_DERIVE: &str = "\
{ edge1(X,Y) } :- node(X), node(Y).
path(X,Y,1) :- edge1(X,Y).
path(X,Y,L) :- path(X,Z,L-1), edge1(Z,Y), L <= U, u(U).
edgeu(X,Y) :- path(X,Y,L), u(L).
confu(X,Y) :- path(Z,X,L), path(Z,Y,L), node(X;Y;Z), X < Y, L < U, u(U).
";

const HARD_CONSTRAINTS: &str = "\
:- edgeh(X,Y), not edgeu(X,Y).
:- no_edgeh(X,Y), edgeu(X,Y).
:- confh(X,Y), not confu(X,Y).
:- no_confh(X,Y), confu(X,Y).
";

const WEAK_CONSTRAINTS: &str = "\
:~ edgeh(X,Y,W), not edgeu(X,Y). [W,X,Y,1]
:~ no_edgeh(X,Y,W), edgeu(X,Y). [W,X,Y,1]
:~ confh(X,Y,W), not confu(X,Y). [W,X,Y,2]
:~ no_confh(X,Y,W), confu(X,Y). [W,X,Y,2]
";

const SHOW: &str = "#show edge1/2.\n#show u/1.\n";

fn push_header(out: &mut String, n: usize, uspec: USpec) {
    for i in 1..=n {
        writeln!(out, "node({i}).").unwrap();
    }
    match uspec {
        USpec::Fixed(u) => writeln!(out, "u({u}).").unwrap(),
        USpec::Range(lo, hi) => {
            writeln!(out, "urange({lo}..{hi}).").unwrap();
            writeln!(out, "{RATE_CHOICE}").unwrap();
        }
    }
}

/// Program whose answer sets are exactly the consistent `(G1, u)` pairs.
pub fn emit_encoding(h: &EstimatedStructure, uspec: USpec) -> String {
    let mut out = String::new();
    push_header(&mut out, h.n(), uspec);
    for (i, j) in h.directed_present().iter_ones() {
        writeln!(out, "edgeh({},{}).", i + 1, j + 1).unwrap();
    }
    for (i, j) in h.directed_absent().iter_ones() {
        writeln!(out, "no_edgeh({},{}).", i + 1, j + 1).unwrap();
    }
    for (i, j) in h.bidirected_present().iter_ones().filter(|(i, j)| i < j) {
        writeln!(out, "confh({},{}).", i + 1, j + 1).unwrap();
    }
    for (i, j) in h.bidirected_absent().iter_ones().filter(|(i, j)| i < j) {
        writeln!(out, "no_confh({},{}).", i + 1, j + 1).unwrap();
    }
    out.push_str(GENERATE_AND_DERIVE);
    out.push_str(HARD_CONSTRAINTS);
    out.push_str(SHOW);
    out
}

/// Program whose optimal answer sets are the minimizers of the weighted
/// objective; weights are written as `round(1000 * w)`.
pub fn emit_weighted_encoding(w: &WeightedMeasurement, uspec: USpec) -> String {
    let mut out = String::new();
    push_header(&mut out, w.n(), uspec);
    for (i, j, s) in w.directed_statements() {
        let pred = if s.present { "edgeh" } else { "no_edgeh" };
        writeln!(out, "{pred}({},{},{}).", i + 1, j + 1, to_milli(s.weight)).unwrap();
    }
    for (i, j, s) in w.bidirected_statements() {
        let pred = if s.present { "confh" } else { "no_confh" };
        writeln!(out, "{pred}({},{},{}).", i + 1, j + 1, to_milli(s.weight)).unwrap();
    }
    out.push_str(GENERATE_AND_DERIVE);
    out.push_str(WEAK_CONSTRAINTS);
    out.push_str(SHOW);
    out
}
