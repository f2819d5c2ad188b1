use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Dyad};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiKind {
    Configuration,
    ErdosRenyi,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Capacities {
    /// `Ξ_ij = row_i · col_j`, never materialized.
    Product {
        row: Vec<u64>,
        col: Vec<u64>,
    },
    Dense(Vec<u64>),
}

/// Per-dyad capacities Ξ: the number of distinct multi-edges that could join
/// each pair of nodes.
///
/// A dyad is admissible when it can carry edges at all: every ordered pair
/// for directed ensembles, pairs with `i < j` for undirected ones, and the
/// diagonal only when self-loops are enabled. Inadmissible dyads have Ξ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiMatrix {
    n: usize,
    directed: bool,
    allow_loops: bool,
    kind: XiKind,
    capacities: Capacities,
    total: u64,
}

fn product_total(row: &[u64], col: &[u64], directed: bool, allow_loops: bool) -> Result<u64> {
    let overflow = || Error::Overflow("total capacity M");
    let diagonal: u128 = row
        .iter()
        .zip(col)
        .map(|(&r, &c)| u128::from(r) * u128::from(c))
        .sum();
    let off_diagonal: u128 = if directed {
        let rows: u128 = row.iter().map(|&r| u128::from(r)).sum();
        let cols: u128 = col.iter().map(|&c| u128::from(c)).sum();
        rows.checked_mul(cols).ok_or_else(overflow)? - diagonal
    } else {
        // Σ_{i<j} row_i col_j
        let mut prefix: u128 = 0;
        let mut acc: u128 = 0;
        for (&r, &c) in row.iter().zip(col) {
            acc = acc
                .checked_add(prefix * u128::from(c))
                .ok_or_else(overflow)?;
            prefix += u128::from(r);
        }
        acc
    };
    let total = if allow_loops {
        off_diagonal + diagonal
    } else {
        off_diagonal
    };
    u64::try_from(total).map_err(|_| overflow())
}

impl XiMatrix {
    fn product(
        row: Vec<u64>,
        col: Vec<u64>,
        directed: bool,
        allow_loops: bool,
        kind: XiKind,
    ) -> Result<Self> {
        for (&r, &c) in row.iter().zip(&col) {
            r.checked_mul(c).ok_or(Error::Overflow("capacity"))?;
        }
        let total = product_total(&row, &col, directed, allow_loops)?;
        Ok(Self {
            n: row.len(),
            directed,
            allow_loops,
            kind,
            capacities: Capacities::Product { row, col },
            total,
        })
    }

    /// Capacities given as a dense row-major `n × n` matrix. Entries at
    /// inadmissible dyads must be zero.
    pub fn from_entries(
        n: usize,
        directed: bool,
        allow_loops: bool,
        entries: Vec<u64>,
    ) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: (entries.len() as f64).sqrt() as usize,
            });
        }
        let mut xi = Self {
            n,
            directed,
            allow_loops,
            kind: XiKind::Custom,
            capacities: Capacities::Dense(Vec::new()),
            total: 0,
        };
        let mut total: u64 = 0;
        for i in 0..n {
            for j in 0..n {
                let value = entries[i * n + j];
                if value > 0 && !xi.is_admissible(i, j) {
                    return Err(Error::InvalidArgument(format!(
                        "capacity {value} on inadmissible dyad ({i}, {j})"
                    )));
                }
                total = total
                    .checked_add(value)
                    .ok_or(Error::Overflow("total capacity M"))?;
            }
        }
        xi.capacities = Capacities::Dense(entries);
        xi.total = total;
        Ok(xi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn allows_loops(&self) -> bool {
        self.allow_loops
    }

    pub fn kind(&self) -> XiKind {
        self.kind
    }

    /// M = Σ Ξ_ij over admissible dyads.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_admissible(&self, i: usize, j: usize) -> bool {
        i < self.n
            && j < self.n
            && (if i == j {
                self.allow_loops
            } else {
                self.directed || i < j
            })
    }

    /// Ξ_ij, zero for inadmissible dyads.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        if !self.is_admissible(i, j) {
            return 0;
        }
        match &self.capacities {
            Capacities::Product { row, col } => row[i] * col[j],
            Capacities::Dense(entries) => entries[i * self.n + j],
        }
    }

    /// Admissible dyads in row-major order.
    pub fn dyads(&self) -> impl Iterator<Item = Dyad> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_admissible(i, j))
    }

    /// Row and column factors when Ξ is an implicit outer product.
    pub(crate) fn factors(&self) -> Option<(&[u64], &[u64])> {
        match &self.capacities {
            Capacities::Product { row, col } => Some((row, col)),
            Capacities::Dense(_) => None,
        }
    }

    pub(crate) fn hash_into(&self, bytes: &mut Vec<u8>) {
        bytes.extend_from_slice(&(self.n as u64).to_le_bytes());
        bytes.push(u8::from(self.directed));
        bytes.push(u8::from(self.allow_loops));
        let mut push_all = |tag: u8, values: &[u64]| {
            bytes.push(tag);
            for v in values {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        };
        match &self.capacities {
            Capacities::Product { row, col } => {
                push_all(b'r', row);
                push_all(b'c', col);
            }
            Capacities::Dense(entries) => push_all(b'd', entries),
        }
    }
}

/// Configuration-model capacities `Ξ_ij = k_out(i) · k_in(j)`.
///
/// Undirected sequences fill the upper triangle `i < j` with `k(i) · k(j)`;
/// with loops enabled the diagonal carries `k(i)²`.
pub fn xi_configuration(d: &DegreeSequence, allow_loops: bool) -> Result<XiMatrix> {
    if d.node_count() == 0 || d.k_in.len() != d.k_out.len() {
        return Err(Error::DimensionMismatch {
            expected: d.k_out.len(),
            found: d.k_in.len(),
        });
    }
    XiMatrix::product(
        d.k_out.clone(),
        d.k_in.clone(),
        d.directed,
        allow_loops,
        XiKind::Configuration,
    )
}

/// Constant capacities for the multi-edge Erdős–Rényi ensemble.
///
/// Every admissible entry is `m²/n²` rounded to the nearest integer (a square
/// of a rational is never a half-integer, so there are no ties). M equals `m²`
/// only when `n` divides `m` and every dyad is admissible.
pub fn xi_erdos_renyi(n: usize, m: u64, directed: bool, allow_loops: bool) -> Result<XiMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Erdős–Rényi capacities need n >= 1".into(),
        ));
    }
    let m2 = u128::from(m) * u128::from(m);
    let n2 = (n as u128) * (n as u128);
    let value = u64::try_from((2 * m2 + n2) / (2 * n2)).map_err(|_| Error::Overflow("capacity"))?;
    XiMatrix::product(
        vec![value; n],
        vec![1; n],
        directed,
        allow_loops,
        XiKind::ErdosRenyi,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(xi: &XiMatrix) -> Vec<u64> {
        let n = xi.n();
        (0..n * n).map(|k| xi.get(k / n, k % n)).collect()
    }

    fn two_node() -> DegreeSequence {
        DegreeSequence {
            directed: true,
            k_out: vec![2, 1],
            k_in: vec![1, 2],
            m: 3,
        }
    }

    #[test]
    fn configuration_with_loops() {
        let xi = xi_configuration(&two_node(), true).unwrap();
        assert_eq!(dense(&xi), [2, 4, 1, 2]);
        assert_eq!(xi.total(), 9);
        assert_eq!(xi.kind(), XiKind::Configuration);
    }

    #[test]
    fn configuration_without_loops() {
        let xi = xi_configuration(&two_node(), false).unwrap();
        assert_eq!(dense(&xi), [0, 4, 1, 0]);
        assert_eq!(xi.total(), 5);
        assert_eq!(xi.dyads().collect::<Vec<_>>(), [(0, 1), (1, 0)]);
    }

    #[test]
    fn configuration_of_zero_degrees() {
        let d = DegreeSequence {
            directed: true,
            k_out: vec![0; 4],
            k_in: vec![0; 4],
            m: 0,
        };
        let xi = xi_configuration(&d, true).unwrap();
        assert!(dense(&xi).iter().all(|&v| v == 0));
        assert_eq!(xi.total(), 0);
    }

    #[test]
    fn undirected_configuration() {
        let d = DegreeSequence {
            directed: false,
            k_out: vec![3, 1, 2],
            k_in: vec![3, 1, 2],
            m: 3,
        };
        let xi = xi_configuration(&d, false).unwrap();
        assert_eq!(dense(&xi), [0, 3, 6, 0, 0, 2, 0, 0, 0]);
        assert_eq!(xi.total(), 11);
        let xi = xi_configuration(&d, true).unwrap();
        assert_eq!(xi.get(0, 0), 9);
        assert_eq!(xi.total(), 11 + 9 + 1 + 4);
    }

    #[test]
    fn erdos_renyi_rounding() {
        let xi = xi_erdos_renyi(2, 4, true, true).unwrap();
        assert_eq!(dense(&xi), [4; 4]);
        assert_eq!(xi.total(), 16);
        let xi = xi_erdos_renyi(3, 3, true, true).unwrap();
        assert_eq!(dense(&xi), [1; 9]);
        assert_eq!(xi.total(), 9);
        // 9/4 = 2.25 rounds to 2; M = 8 != m² = 9
        let xi = xi_erdos_renyi(2, 3, true, true).unwrap();
        assert_eq!(dense(&xi), [2; 4]);
        assert_eq!(xi.total(), 8);
        assert_eq!(xi_erdos_renyi(2, 1, true, true).unwrap().get(0, 1), 0);
        assert_eq!(xi_erdos_renyi(4, 7, true, true).unwrap().get(1, 2), 3);
        let xi = xi_erdos_renyi(2, 3, true, false).unwrap();
        assert_eq!(xi.total(), 4);
    }

    #[test]
    fn dense_entries_validated() {
        assert!(XiMatrix::from_entries(2, true, false, vec![1, 3, 3, 0]).is_err());
        let xi = XiMatrix::from_entries(2, true, false, vec![0, 3, 3, 0]).unwrap();
        assert_eq!(xi.total(), 6);
        assert!(XiMatrix::from_entries(2, false, false, vec![0, 3, 3, 0]).is_err());
        assert!(XiMatrix::from_entries(2, true, true, vec![1, 2, 3]).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_total_matches_sum(
            directed in any::<bool>(),
            loops in any::<bool>(),
            k in prop::collection::vec(0u64..50, 1..12),
        ) {
            let mut k_in = k.clone();
            if directed {
                k_in.reverse();
            }
            let d = DegreeSequence { directed, k_out: k.clone(), k_in, m: 0 };
            let xi = xi_configuration(&d, loops).unwrap();
            let summed: u64 = xi.dyads().map(|(i, j)| xi.get(i, j)).sum();
            prop_assert_eq!(summed, xi.total());
        }
    }
}
