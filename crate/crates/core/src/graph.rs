//! Multi-edge graphs, degree sequences and the edge-list text format.
//!
//! An edge list holds one dyad per line, `source<sep>target[<sep>weight]`, where
//! the separator is a comma, a tab or any run of whitespace. Lines starting with
//! `#` are comments. Repeated lines accumulate weight.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Ordered node pair `(source, target)` by index.
pub type Dyad = (usize, usize);

/// Sparse integer counts over dyads. Zero counts are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Adjacency {
    counts: BTreeMap<Dyad, u64>,
}

impl Adjacency {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Sets the count of a dyad; a zero count removes it.
    pub fn set(&mut self, i: usize, j: usize, count: u64) {
        if count == 0 {
            self.counts.remove(&(i, j));
        } else {
            self.counts.insert((i, j), count);
        }
    }

    pub fn add(&mut self, i: usize, j: usize, count: u64) {
        if count > 0 {
            *self.counts.entry((i, j)).or_insert(0) += count;
        }
    }

    /// Nonzero entries in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Dyad, u64)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    /// Number of dyads with a nonzero count.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

impl FromIterator<(Dyad, u64)> for Adjacency {
    fn from_iter<T: IntoIterator<Item = (Dyad, u64)>>(iter: T) -> Self {
        let mut adjacency = Adjacency::new();
        for ((i, j), c) in iter {
            adjacency.add(i, j, c);
        }
        adjacency
    }
}

impl<'a> IntoIterator for &'a Adjacency {
    type Item = (&'a Dyad, &'a u64);
    type IntoIter = btree_map::Iter<'a, Dyad, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.counts.iter()
    }
}

/// A directed or undirected multi-edge graph with labelled nodes.
///
/// Undirected graphs store each dyad once with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    directed: bool,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    weights: Adjacency,
}

impl MultiGraph {
    /// Creates an edgeless graph over the given labels.
    pub fn new(directed: bool, labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "a graph needs at least one node".into(),
            ));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate node label {label:?}"
                )));
            }
        }
        Ok(Self {
            directed,
            labels,
            index,
            weights: Adjacency::new(),
        })
    }

    /// Graph over `n` nodes labelled `0..n`.
    pub fn with_nodes(directed: bool, n: usize) -> Result<Self> {
        Self::new(directed, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn weights(&self) -> &Adjacency {
        &self.weights
    }

    /// Weight of a dyad, looked up in canonical order for undirected graphs.
    pub fn weight(&self, i: usize, j: usize) -> u64 {
        let (i, j) = self.canonical(i, j);
        self.weights.get(i, j)
    }

    /// Total number of multi-edges.
    pub fn edge_count(&self) -> u64 {
        self.weights.total()
    }

    /// Number of distinct dyads with positive weight.
    pub fn link_count(&self) -> usize {
        self.weights.len()
    }

    pub fn canonical(&self, i: usize, j: usize) -> Dyad {
        if !self.directed && j < i {
            (j, i)
        } else {
            (i, j)
        }
    }

    /// Adds `weight` parallel edges between `i` and `j`.
    pub fn add_edges(&mut self, i: usize, j: usize, weight: u64) -> Result<()> {
        let n = self.node_count();
        if i >= n || j >= n {
            return Err(Error::InvalidArgument(format!(
                "dyad ({i}, {j}) out of range for {n} nodes"
            )));
        }
        let (i, j) = self.canonical(i, j);
        self.weights.add(i, j, weight);
        Ok(())
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    /// Copy of the graph over the same nodes keeping only dyads accepted by `keep`.
    pub fn retain<F>(&self, mut keep: F) -> MultiGraph
    where
        F: FnMut(Dyad, u64) -> bool,
    {
        let mut out = MultiGraph {
            directed: self.directed,
            labels: self.labels.clone(),
            index: self.index.clone(),
            weights: Adjacency::new(),
        };
        for (d, w) in self.weights.iter() {
            if keep(d, w) {
                out.weights.set(d.0, d.1, w);
            }
        }
        out
    }

    /// Splits off self-loops, returning the loop-free graph and the dropped loop weight.
    pub fn without_loops(&self) -> (MultiGraph, u64) {
        let dropped = self
            .weights
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, w)| w)
            .sum();
        (self.retain(|(i, j), _| i != j), dropped)
    }
}

/// Weighted in- and out-degrees of a graph.
///
/// For undirected graphs `k_out` and `k_in` are the same sequence and a
/// self-loop contributes twice to its node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub directed: bool,
    pub k_out: Vec<u64>,
    pub k_in: Vec<u64>,
    /// Total number of multi-edges.
    pub m: u64,
}

impl DegreeSequence {
    pub fn node_count(&self) -> usize {
        self.k_out.len()
    }

    /// Checks the handshake identity for the sequence's directedness.
    pub fn is_consistent(&self) -> bool {
        if self.k_out.len() != self.k_in.len() {
            return false;
        }
        let out: u64 = self.k_out.iter().sum();
        let inn: u64 = self.k_in.iter().sum();
        if self.directed {
            out == self.m && inn == self.m
        } else {
            self.k_out == self.k_in && out == 2 * self.m
        }
    }
}

pub fn degrees(g: &MultiGraph) -> DegreeSequence {
    let n = g.node_count();
    let mut k_out = vec![0u64; n];
    let mut k_in = vec![0u64; n];
    for ((i, j), w) in g.weights().iter() {
        if g.is_directed() {
            k_out[i] += w;
            k_in[j] += w;
        } else {
            k_out[i] += w;
            k_out[j] += w;
        }
    }
    if !g.is_directed() {
        k_in.clone_from(&k_out);
    }
    DegreeSequence {
        directed: g.is_directed(),
        k_out,
        k_in,
        m: g.edge_count(),
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn parse_weight(field: &str, line: usize) -> Result<u64> {
    let parse_error = |message: &str| Error::Parse {
        line,
        message: message.to_owned(),
    };
    let value: i128 = field
        .parse()
        .map_err(|_| parse_error("non-integer weight"))?;
    if value <= 0 {
        return Err(parse_error("non-positive weight"));
    }
    u64::try_from(value).map_err(|_| parse_error("weight too large"))
}

/// Reads an edge list.
///
/// With `weighted` set, an optional third field carries a positive integer
/// weight (default 1); otherwise every line must have exactly two fields. Node
/// indices follow first appearance.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    directed: bool,
    weighted: bool,
) -> Result<MultiGraph> {
    let mut g = MultiGraph {
        directed,
        labels: Vec::new(),
        index: HashMap::new(),
        weights: Adjacency::new(),
    };
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed);
        let malformed = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let weight = match (fields.len(), weighted) {
            (2, _) => 1,
            (3, true) => parse_weight(fields[2], lineno)?,
            (3, false) => {
                return Err(malformed(
                    "malformed line (unexpected weight column; pass weighted input)".into(),
                ))
            }
            (k, _) => return Err(malformed(format!("malformed line ({k} fields)"))),
        };
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(malformed("malformed line (empty node label)".into()));
        }
        let i = g.intern(fields[0]);
        let j = g.intern(fields[1]);
        let (i, j) = g.canonical(i, j);
        g.weights.add(i, j, weight);
    }
    if g.labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(g)
}

/// Writes one tab-separated `source target weight` line per stored dyad, in index order.
pub fn write_edge_list<W: Write>(g: &MultiGraph, mut out: W) -> Result<()> {
    for ((i, j), w) in g.weights().iter() {
        writeln!(out, "{}\t{}\t{}", g.label(i), g.label(j), w)?;
    }
    out.flush()?;
    Ok(())
}
