//! Graph value types and the undersampling operator.
//!
//! Node indices are zero-based throughout the library API; the text formats
//! in [`crate::format`] use one-based indices.

use std::cmp::Ordering;
use std::fmt;

use crate::bitmatrix::{low_bits, BitMatrix, MAX_NODES};
use crate::error::{Error, Result};

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_NODES {
        Err(Error::NodeCount(n))
    } else {
        Ok(())
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index >= n {
        Err(Error::NodeIndex { index, n })
    } else {
        Ok(())
    }
}

/// Rolled system-timescale graph: `i -> j` means `V_i^{t-1} -> V_j^t`.
/// Self-loops are allowed; there are no bidirected edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SystemGraph {
    adj: BitMatrix,
}

impl SystemGraph {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(SystemGraph {
            adj: BitMatrix::zeros(n),
        })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn from_adjacency(adj: BitMatrix) -> Result<Self> {
        check_n(adj.n())?;
        Ok(SystemGraph { adj })
    }

    /// Graph whose row-major edge bits are the low `n * n` bits of `code`.
    /// Only meaningful for `n <= 11`.
    pub fn from_code(n: usize, code: u128) -> Self {
        assert!(n * n <= 128);
        let mut adj = BitMatrix::zeros(n);
        for i in 0..n {
            adj.set_row(i, (code >> (i * n)) & low_bits(n));
        }
        SystemGraph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.n()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        check_index(i, self.n())?;
        check_index(j, self.n())?;
        self.adj.set(i, j);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        if i < self.n() && j < self.n() {
            self.adj.clear(i, j);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n() && j < self.n() && self.adj.get(i, j)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.adj.row(i).count_ones() as usize
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.adj.canonical_cmp(&other.adj)
    }
}

impl fmt::Debug for SystemGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemGraph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Subsampling rate: a single `u` or an inclusive range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum USpec {
    Fixed(usize),
    Range(usize, usize),
}

impl USpec {
    pub fn fixed(u: usize) -> Result<Self> {
        if u == 0 {
            return Err(Error::InvalidRate("u must be at least 1".into()));
        }
        Ok(USpec::Fixed(u))
    }

    pub fn range(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidRate(format!(
                "range {lo}:{hi} must satisfy 1 <= lo <= hi"
            )));
        }
        Ok(USpec::Range(lo, hi))
    }

    pub fn lo(&self) -> usize {
        match *self {
            USpec::Fixed(u) => u,
            USpec::Range(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> usize {
        match *self {
            USpec::Fixed(u) => u,
            USpec::Range(_, hi) => hi,
        }
    }

    pub fn rates(&self) -> std::ops::RangeInclusive<usize> {
        self.lo()..=self.hi()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            USpec::Fixed(u) => Self::fixed(u).map(|_| ()),
            USpec::Range(lo, hi) => Self::range(lo, hi).map(|_| ()),
        }
    }
}

impl Default for USpec {
    fn default() -> Self {
        USpec::Range(1, 5)
    }
}

impl std::str::FromStr for USpec {
    type Err = Error;

    /// `"2"` or `"1:5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRate(format!("cannot parse {s:?}"));
        let spec = match s.split_once(':') {
            Some((lo, hi)) => USpec::Range(
                lo.trim().parse().map_err(|_| bad())?,
                hi.trim().parse().map_err(|_| bad())?,
            ),
            None => USpec::Fixed(s.trim().parse().map_err(|_| bad())?),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Rolled measurement-timescale graph with directed and bidirected edges.
/// The bidirected relation is kept as a symmetric matrix with an empty
/// diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeasurementGraph {
    directed: BitMatrix,
    bidirected: BitMatrix,
}

impl MeasurementGraph {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(MeasurementGraph {
            directed: BitMatrix::zeros(n),
            bidirected: BitMatrix::zeros(n),
        })
    }

    pub(crate) fn from_parts(directed: BitMatrix, bidirected: BitMatrix) -> Self {
        debug_assert_eq!(bidirected, bidirected.transpose());
        MeasurementGraph {
            directed,
            bidirected,
        }
    }

    pub fn n(&self) -> usize {
        self.directed.n()
    }

    pub fn add_directed(&mut self, i: usize, j: usize) -> Result<()> {
        check_index(i, self.n())?;
        check_index(j, self.n())?;
        self.directed.set(i, j);
        Ok(())
    }

    pub fn add_bidirected(&mut self, i: usize, j: usize) -> Result<()> {
        check_index(i, self.n())?;
        check_index(j, self.n())?;
        if i == j {
            return Err(Error::SelfBidirected(i));
        }
        self.bidirected.set(i, j);
        self.bidirected.set(j, i);
        Ok(())
    }

    pub fn has_directed(&self, i: usize, j: usize) -> bool {
        self.directed.get(i, j)
    }

    pub fn has_bidirected(&self, i: usize, j: usize) -> bool {
        self.bidirected.get(i, j)
    }

    pub fn directed(&self) -> &BitMatrix {
        &self.directed
    }

    /// Symmetric bidirected adjacency.
    pub fn bidirected(&self) -> &BitMatrix {
        &self.bidirected
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.directed.iter_ones()
    }

    /// Unordered bidirected pairs as `(i, j)` with `i < j`.
    pub fn bidirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bidirected.iter_ones().filter(|&(i, j)| i < j)
    }
}

impl fmt::Debug for MeasurementGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasurementGraph")
            .field("n", &self.n())
            .field("directed", &self.directed_edges().collect::<Vec<_>>())
            .field("bidirected", &self.bidirected_edges().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Present,
    Absent,
    Unknown,
}

/// Three-valued measurement structure H. Each directed pair and each
/// unordered bidirected pair is present, absent, or unconstrained.
#[derive(Clone, PartialEq, Eq)]
pub struct EstimatedStructure {
    n: usize,
    dir_present: BitMatrix,
    dir_absent: BitMatrix,
    // symmetric, empty diagonal
    bi_present: BitMatrix,
    bi_absent: BitMatrix,
}

impl EstimatedStructure {
    /// Every status unknown.
    pub fn unknown(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(EstimatedStructure {
            n,
            dir_present: BitMatrix::zeros(n),
            dir_absent: BitMatrix::zeros(n),
            bi_present: BitMatrix::zeros(n),
            bi_absent: BitMatrix::zeros(n),
        })
    }

    /// Fully specified structure: edges of `m` present, everything else absent.
    pub fn from_measurement(m: &MeasurementGraph) -> Self {
        let n = m.n();
        let off_diag = BitMatrix::identity(n).complement();
        EstimatedStructure {
            n,
            dir_present: m.directed.clone(),
            dir_absent: m.directed.complement(),
            bi_present: m.bidirected.clone(),
            bi_absent: m.bidirected.complement().and(&off_diag),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed_status(&self, i: usize, j: usize) -> Status {
        if self.dir_present.get(i, j) {
            Status::Present
        } else if self.dir_absent.get(i, j) {
            Status::Absent
        } else {
            Status::Unknown
        }
    }

    pub fn bidirected_status(&self, i: usize, j: usize) -> Status {
        if self.bi_present.get(i, j) {
            Status::Present
        } else if self.bi_absent.get(i, j) {
            Status::Absent
        } else {
            Status::Unknown
        }
    }

    pub fn set_directed(&mut self, i: usize, j: usize, status: Status) -> Result<()> {
        check_index(i, self.n)?;
        check_index(j, self.n)?;
        self.dir_present.assign(i, j, status == Status::Present);
        self.dir_absent.assign(i, j, status == Status::Absent);
        Ok(())
    }

    pub fn set_bidirected(&mut self, i: usize, j: usize, status: Status) -> Result<()> {
        check_index(i, self.n)?;
        check_index(j, self.n)?;
        if i == j {
            return Err(Error::SelfBidirected(i));
        }
        for (a, b) in [(i, j), (j, i)] {
            self.bi_present.assign(a, b, status == Status::Present);
            self.bi_absent.assign(a, b, status == Status::Absent);
        }
        Ok(())
    }

    pub fn directed_present(&self) -> &BitMatrix {
        &self.dir_present
    }

    pub fn directed_absent(&self) -> &BitMatrix {
        &self.dir_absent
    }

    /// Symmetric.
    pub fn bidirected_present(&self) -> &BitMatrix {
        &self.bi_present
    }

    /// Symmetric.
    pub fn bidirected_absent(&self) -> &BitMatrix {
        &self.bi_absent
    }

    /// True when every unordered pair is marked absent.
    pub fn all_bidirected_absent(&self) -> bool {
        self.bi_absent == BitMatrix::identity(self.n).complement()
    }

    /// Marks every unknown pair absent, as for a concrete measurement graph.
    pub fn close_unknowns(&mut self) {
        self.dir_absent = self.dir_present.complement();
        self.bi_absent = self
            .bi_present
            .complement()
            .and_not(&BitMatrix::identity(self.n));
    }
}

impl fmt::Debug for EstimatedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EstimatedStructure")
            .field("n", &self.n)
            .field("edge", &self.dir_present.iter_ones().collect::<Vec<_>>())
            .field("noedge", &self.dir_absent.iter_ones().collect::<Vec<_>>())
            .field(
                "biedge",
                &self
                    .bi_present
                    .iter_ones()
                    .filter(|(i, j)| i < j)
                    .collect::<Vec<_>>(),
            )
            .field(
                "nobiedge",
                &self
                    .bi_absent
                    .iter_ones()
                    .filter(|(i, j)| i < j)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Pairs `(i, j)` joined by a directed walk of exactly `len` steps.
pub fn exact_length_paths(g: &SystemGraph, len: usize) -> BitMatrix {
    assert!(len >= 1, "path length must be at least 1");
    g.adj.pow(len)
}

/// `[P^0, P^1, ..., P^max]` where `P^k` holds the length-k walks.
pub(crate) fn walk_powers(adj: &BitMatrix, max: usize) -> Vec<BitMatrix> {
    let mut powers = Vec::with_capacity(max + 1);
    powers.push(BitMatrix::identity(adj.n()));
    for k in 1..=max {
        let next = powers[k - 1].mul(adj);
        powers.push(next);
    }
    powers
}

/// Bidirected relation induced by common causes whose two arms have the same
/// length `k` with `1 <= k < u`, given walk powers up to at least `u - 1`.
pub(crate) fn confounded_pairs(powers: &[BitMatrix], u: usize) -> BitMatrix {
    let n = powers[0].n();
    let mut acc = BitMatrix::zeros(n);
    for p in powers.iter().take(u).skip(1) {
        acc.or_assign(&p.shared_sources());
    }
    acc
}

/// Measurement graph obtained by observing every `u`-th step of `g`.
pub fn undersample(g: &SystemGraph, u: usize) -> MeasurementGraph {
    assert!(u >= 1, "subsampling rate must be at least 1");
    let powers = walk_powers(&g.adj, u);
    let bidirected = confounded_pairs(&powers, u);
    MeasurementGraph::from_parts(powers[u].clone(), bidirected)
}

/// Whether the `u`-undersampling of `g` agrees with every known status of `h`.
pub fn is_consistent(g: &SystemGraph, u: usize, h: &EstimatedStructure) -> Result<bool> {
    if g.n() != h.n() {
        return Err(Error::NodeCountMismatch {
            left: g.n(),
            right: h.n(),
        });
    }
    let m = undersample(g, u);
    let ok = h.dir_present.and_not(&m.directed).is_empty()
        && h.dir_absent.and(&m.directed).is_empty()
        && h.bi_present.and_not(&m.bidirected).is_empty()
        && h.bi_absent.and(&m.bidirected).is_empty();
    Ok(ok)
}

/// System graph of the running three-node example:
/// `1 -> 1`, `1 -> 2`, `2 -> 3`, `3 -> 1` (zero-based here).
pub fn example_system_graph() -> SystemGraph {
    SystemGraph::from_edges(3, [(0, 0), (0, 1), (1, 2), (2, 0)]).expect("valid example")
}
