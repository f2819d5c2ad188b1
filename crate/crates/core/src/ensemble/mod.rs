//! Generalized hypergeometric ensembles.
//!
//! An ensemble draws `m` multi-edges without replacement from an urn holding
//! `Ξ_ij` balls for every admissible dyad, `M = Σ Ξ_ij` in total. With equal
//! propensities the outcome follows the multivariate hypergeometric
//! distribution; with propensities Ω each draw picks dyad `(i, j)` with
//! probability proportional to `Ω_ij` times the balls of that dyad still in
//! the urn, giving the multivariate Wallenius distribution
//!
//! ```text
//! Pr(A) = ∏ C(Ξ_ij, A_ij) · ∫₀¹ ∏ (1 − z^{Ω_ij / S})^{A_ij} dz,   S = Σ Ω_ij (Ξ_ij − A_ij).
//! ```
//!
//! Per-dyad marginals use the two-colour reduction in which every other dyad
//! is merged into one colour with the Ξ-weighted mean propensity Ω̄. The
//! reduction is exact whenever the other dyads share a single propensity.

mod omega;
mod xi;

pub use omega::{omega_block, omega_custom, omega_uniform, OmegaKind, OmegaMatrix};
pub use xi::{xi_configuration, xi_erdos_renyi, XiKind, XiMatrix};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{degrees, Adjacency, DegreeSequence, MultiGraph};
use crate::numerics::{
    central_hypergeometric_log_pmf, log_choose, log_sum_exp, log_wallenius_integral, support,
    IntegrandSpec, Probability, Term,
};

/// Smallest per-term tolerance handed to the quadrature when a tolerance is
/// split across the terms of a tail sum.
pub const MIN_TERM_TOL: f64 = 1e-13;

/// Terms this far below the largest one are dropped from tail sums once the
/// walk is past the mode.
const NEGLIGIBLE_LOG_RATIO: f64 = 60.0;

/// Acknowledgement required to evaluate the unbiased pmf for non-uniform Ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UnbiasedFormula {
    /// Refuse unless the propensities are uniform.
    #[default]
    RequireUniform,
    /// Evaluate the hypergeometric pmf regardless of Ω.
    IgnorePropensities,
}

/// Probability mass of one dyad's marginal around an observed count `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tails {
    /// `Pr(A < x)`
    pub below: f64,
    /// `Pr(A = x)`
    pub at: f64,
    /// `Pr(A > x)`
    pub above: f64,
    pub in_support: bool,
}

impl Tails {
    /// `Pr(A ≤ x)`, computed from the smaller of the two sides.
    pub fn cdf(&self) -> f64 {
        let lower = self.below + self.at;
        let value = if lower <= 0.5 {
            lower
        } else {
            1.0 - self.above
        };
        value.clamp(0.0, 1.0)
    }

    /// Upper-tail p-value `Pr(A ≥ x)`.
    pub fn upper_pvalue(&self) -> f64 {
        let upper = self.above + self.at;
        let value = if upper <= 0.5 {
            upper
        } else {
            1.0 - self.below
        };
        value.clamp(0.0, 1.0)
    }
}

/// Dense row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    pub n: usize,
    pub values: Vec<f64>,
}

impl RealMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Stable identifier of a degree sequence.
pub fn degree_fingerprint(d: &DegreeSequence) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"ghype-degrees-v1");
    hasher.update([u8::from(d.directed)]);
    for k in d.k_out.iter().chain(&d.k_in) {
        hasher.update(k.to_le_bytes());
    }
    hasher.update(d.m.to_le_bytes());
    hex(&hasher.finalize()[..16])
}

/// `Σ Ξ_ij Ω_ij` over admissible dyads, in closed form for implicit Ξ.
fn weighted_capacity(xi: &XiMatrix, omega: &OmegaMatrix) -> f64 {
    let Some((row, col)) = xi.factors() else {
        return xi
            .dyads()
            .map(|(i, j)| xi.get(i, j) as f64 * omega.get(i, j))
            .sum();
    };
    match omega.kind() {
        OmegaKind::Uniform => xi.total() as f64,
        OmegaKind::Block => {
            let (assignment, within, between) = omega.blocks().expect("block kind");
            let blocks = assignment.iter().max().map_or(0, |b| b + 1);
            let diagonal: f64 = if xi.allows_loops() {
                row.iter()
                    .zip(col)
                    .map(|(&r, &c)| (r as f64) * (c as f64))
                    .sum::<f64>()
                    * within
            } else {
                0.0
            };
            if xi.is_directed() {
                let mut block_rows = vec![0f64; blocks];
                let mut block_cols = vec![0f64; blocks];
                for (k, &b) in assignment.iter().enumerate() {
                    block_rows[b] += row[k] as f64;
                    block_cols[b] += col[k] as f64;
                }
                let rows: f64 = block_rows.iter().sum();
                let cols: f64 = block_cols.iter().sum();
                let same: f64 = block_rows.iter().zip(&block_cols).map(|(r, c)| r * c).sum();
                let self_pairs: f64 = row
                    .iter()
                    .zip(col)
                    .map(|(&r, &c)| (r as f64) * (c as f64))
                    .sum::<f64>()
                    * within;
                between * rows * cols + (within - between) * same - self_pairs + diagonal
            } else {
                // Σ_{i<j} Ω_ij row_i col_j by a sweep over j
                let mut prefix = vec![0f64; blocks];
                let mut prefix_total = 0.0;
                let mut acc = 0.0;
                for (j, &b) in assignment.iter().enumerate() {
                    let paired = between * prefix_total + (within - between) * prefix[b];
                    acc += col[j] as f64 * paired;
                    prefix[b] += row[j] as f64;
                    prefix_total += row[j] as f64;
                }
                acc + diagonal
            }
        }
        OmegaKind::Custom => xi
            .dyads()
            .map(|(i, j)| xi.get(i, j) as f64 * omega.get(i, j))
            .sum(),
    }
}

fn propensities_are_equal(xi: &XiMatrix, omega: &OmegaMatrix) -> bool {
    match omega.kind() {
        OmegaKind::Uniform => true,
        OmegaKind::Block => {
            let (assignment, within, between) = omega.blocks().expect("block kind");
            within == between || assignment.windows(2).all(|w| w[0] == w[1])
        }
        OmegaKind::Custom => {
            let mut seen: Option<f64> = None;
            xi.dyads().filter(|&(i, j)| xi.get(i, j) > 0).all(|(i, j)| {
                let v = omega.get(i, j);
                *seen.get_or_insert(v) == v
            })
        }
    }
}

/// `ln ∫₀¹ ∏ (1 − z^{ω_c / S})^{x_c} dz` over drawn colours `(ω_c, x_c)`.
fn log_urn_integral(drawn: &[(f64, u64)], s: f64, tol: f64) -> Result<f64> {
    let zero_weight_drawn = drawn.iter().any(|&(w, x)| x > 0 && w == 0.0);
    if s <= 0.0 {
        // every ball left in the urn has zero weight
        return if zero_weight_drawn {
            Err(Error::DegenerateNormalization)
        } else {
            Ok(0.0)
        };
    }
    if zero_weight_drawn {
        return Ok(f64::NEG_INFINITY);
    }
    let terms: Vec<Term> = drawn
        .iter()
        .filter(|&&(_, x)| x > 0)
        .map(|&(w, x)| Term::new(w / s, x as f64))
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let spec = IntegrandSpec::new(terms)?.with_tol(tol)?;
    Ok(log_wallenius_integral(&spec)?.log_value)
}

/// Sums `exp(log_pmf(k))` along `ks`, stopping once terms are negligible and
/// shrinking. The marginals are unimodal, so nothing beyond that point matters.
fn tail_sum<I, F>(ks: I, ascending: bool, mut log_pmf: F) -> Result<f64>
where
    I: Iterator<Item = u64>,
    F: FnMut(u64) -> Result<f64>,
{
    let mut logs = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut previous = f64::NEG_INFINITY;
    for k in ks {
        let v = log_pmf(k)?;
        let shrinking = v <= previous;
        best = best.max(v);
        if shrinking && (v < best - NEGLIGIBLE_LOG_RATIO || v == f64::NEG_INFINITY) {
            break;
        }
        logs.push(v);
        previous = v;
    }
    if !ascending {
        logs.reverse();
    }
    Ok(log_sum_exp(&logs).exp())
}

/// The probability space of multi-edge graphs defined by (Ξ, Ω, m).
#[derive(Clone, Debug)]
pub struct Ensemble {
    xi: XiMatrix,
    omega: OmegaMatrix,
    m: u64,
    weighted_capacity: f64,
    unbiased: bool,
    fingerprint: String,
    source_degrees: Option<String>,
}

impl Ensemble {
    pub fn new(xi: XiMatrix, omega: OmegaMatrix, m: u64) -> Result<Self> {
        if xi.n() != omega.n() {
            return Err(Error::DimensionMismatch {
                expected: xi.n(),
                found: omega.n(),
            });
        }
        if m > xi.total() {
            return Err(Error::InvalidArgument(format!(
                "cannot draw m = {m} edges from M = {} possible",
                xi.total()
            )));
        }
        let weighted_capacity = weighted_capacity(&xi, &omega);
        if xi.total() > 0 && weighted_capacity <= 0.0 {
            return Err(Error::InvalidArgument(
                "no dyad combines positive capacity with positive propensity".into(),
            ));
        }
        let unbiased = propensities_are_equal(&xi, &omega);
        let mut bytes = b"ghype-ensemble-v1".to_vec();
        xi.hash_into(&mut bytes);
        omega.hash_into(&mut bytes);
        bytes.extend_from_slice(&m.to_le_bytes());
        let fingerprint = hex(&Sha256::digest(&bytes)[..8]);
        Ok(Self {
            xi,
            omega,
            m,
            weighted_capacity,
            unbiased,
            fingerprint,
            source_degrees: None,
        })
    }

    /// Ensemble for an observed graph, with `m` equal to its edge count.
    ///
    /// The graph must be loop-free unless `allow_loops` is set.
    pub fn for_graph(
        g: &MultiGraph,
        kind: XiKind,
        omega: OmegaMatrix,
        allow_loops: bool,
    ) -> Result<Self> {
        if !allow_loops && g.weights().iter().any(|((i, j), _)| i == j) {
            return Err(Error::InvalidArgument(
                "graph has self-loops but the ensemble excludes them".into(),
            ));
        }
        let d = degrees(g);
        let xi = match kind {
            XiKind::Configuration => xi_configuration(&d, allow_loops)?,
            XiKind::ErdosRenyi => {
                xi_erdos_renyi(g.node_count(), d.m, g.is_directed(), allow_loops)?
            }
            XiKind::Custom => {
                return Err(Error::InvalidArgument(
                    "custom capacities cannot be derived from a graph".into(),
                ))
            }
        };
        let mut ensemble = Self::new(xi, omega, d.m)?;
        ensemble.source_degrees = Some(degree_fingerprint(&d));
        Ok(ensemble)
    }

    pub fn xi(&self) -> &XiMatrix {
        &self.xi
    }

    pub fn omega(&self) -> &OmegaMatrix {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.xi.n()
    }

    pub fn is_directed(&self) -> bool {
        self.xi.is_directed()
    }

    /// Number of sampled edges.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Total capacity M.
    pub fn total(&self) -> u64 {
        self.xi.total()
    }

    /// Whether every dyad with positive capacity has the same propensity.
    pub fn is_unbiased(&self) -> bool {
        self.unbiased
    }

    /// Hash of Ξ, Ω and m.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Fingerprint of the degree sequence the ensemble was built from, if any.
    pub fn source_degrees(&self) -> Option<&str> {
        self.source_degrees.as_deref()
    }

    fn check_support(&self, a: &Adjacency) -> Result<()> {
        for ((i, j), count) in a.iter() {
            if !self.xi.is_admissible(i, j) {
                return Err(Error::SupportViolation(format!(
                    "dyad ({i}, {j}) is not in the ensemble"
                )));
            }
            let capacity = self.xi.get(i, j);
            if count > capacity {
                return Err(Error::SupportViolation(format!(
                    "A[{i},{j}] = {count} exceeds capacity {capacity}"
                )));
            }
        }
        let total = a.total();
        if total != self.m {
            return Err(Error::SupportViolation(format!(
                "outcome has {total} edges, ensemble draws {}",
                self.m
            )));
        }
        Ok(())
    }

    /// `ln Pr(A)` under unbiased sampling: `ln[∏ C(Ξ_ij, A_ij) / C(M, m)]`.
    pub fn log_pmf_hypergeometric(&self, a: &Adjacency, formula: UnbiasedFormula) -> Result<f64> {
        if !self.unbiased && formula == UnbiasedFormula::RequireUniform {
            return Err(Error::NotUniform);
        }
        self.check_support(a)?;
        let numerator: f64 = a
            .iter()
            .map(|((i, j), x)| log_choose(self.xi.get(i, j), x))
            .sum();
        Ok(numerator - log_choose(self.total(), self.m))
    }

    /// `ln Pr(A)` under biased (Wallenius) sampling, with the integral
    /// evaluated to relative tolerance `tol`.
    pub fn log_pmf_wallenius(&self, a: &Adjacency, tol: f64) -> Result<f64> {
        self.check_support(a)?;
        if self.m == self.total() {
            return Ok(0.0);
        }
        let mut drawn_mass = 0.0;
        let mut log_binomials = 0.0;
        let mut drawn = Vec::with_capacity(a.len());
        for ((i, j), x) in a.iter() {
            let w = self.omega.get(i, j);
            drawn_mass += w * x as f64;
            log_binomials += log_choose(self.xi.get(i, j), x);
            drawn.push((w, x));
        }
        let mut s = self.weighted_capacity - drawn_mass;
        if s <= 1e-9 * self.weighted_capacity {
            // recompute without cancellation
            s = self
                .xi
                .dyads()
                .map(|(i, j)| self.omega.get(i, j) * (self.xi.get(i, j) - a.get(i, j)) as f64)
                .sum();
        }
        Ok(log_binomials + log_urn_integral(&drawn, s, tol)?)
    }

    /// Ξ-weighted mean propensity of every dyad other than `(i, j)`; zero when
    /// `(i, j)` holds all the capacity.
    pub fn complement_propensity(&self, i: usize, j: usize) -> f64 {
        let capacity = self.xi.get(i, j);
        let rest = self.total() - capacity;
        if rest == 0 {
            return 0.0;
        }
        let own = capacity as f64 * self.omega.get(i, j);
        ((self.weighted_capacity - own) / rest as f64).max(0.0)
    }

    fn check_dyad(&self, i: usize, j: usize) -> Result<()> {
        if self.xi.is_admissible(i, j) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "dyad ({i}, {j}) is not in the ensemble"
            )))
        }
    }

    /// log marginal pmf; negative infinity outside the support.
    fn log_marginal(&self, i: usize, j: usize, x: u64, tol: f64, quadrature: bool) -> Result<f64> {
        let capacity = self.xi.get(i, j);
        let rest = self.total() - capacity;
        if x > capacity || x > self.m || self.m - x > rest {
            return Ok(f64::NEG_INFINITY);
        }
        if self.unbiased && !quadrature {
            return Ok(central_hypergeometric_log_pmf(
                x as i64,
                capacity,
                self.total(),
                self.m,
            ));
        }
        let own = self.omega.get(i, j);
        let other = self.complement_propensity(i, j);
        let need = self.m - x;
        let s = own * (capacity - x) as f64 + other * (rest - need) as f64;
        let integral = log_urn_integral(&[(own, x), (other, need)], s, tol)?;
        Ok(log_choose(capacity, x) + log_choose(rest, need) + integral)
    }

    fn checked_marginal(
        &self,
        i: usize,
        j: usize,
        x: u64,
        tol: f64,
        quadrature: bool,
    ) -> Result<Probability> {
        self.check_dyad(i, j)?;
        if x > self.m.min(self.xi.get(i, j)) {
            return Err(Error::InvalidArgument(format!(
                "count {x} exceeds min(m, Ξ[{i},{j}])"
            )));
        }
        let in_support = self.m - x <= self.total() - self.xi.get(i, j);
        let value = if in_support {
            self.log_marginal(i, j, x, tol, quadrature)?.exp()
        } else {
            0.0
        };
        Ok(Probability { value, in_support })
    }

    /// `Pr(A_ij = x)`; uses the closed central form when Ω is uniform.
    pub fn marginal_pmf(&self, i: usize, j: usize, x: u64, tol: f64) -> Result<Probability> {
        self.checked_marginal(i, j, x, tol, false)
    }

    /// `Pr(A_ij = x)` always through the Wallenius integral.
    pub fn marginal_pmf_wallenius(
        &self,
        i: usize,
        j: usize,
        x: u64,
        tol: f64,
    ) -> Result<Probability> {
        self.checked_marginal(i, j, x, tol, true)
    }

    fn term_tol(tol: f64, x: u64) -> f64 {
        (tol / (x as f64 + 1.0)).max(MIN_TERM_TOL)
    }

    /// `Pr(A_ij ≤ x)` summed upward through the support, clamped to `[0, 1]`.
    pub fn marginal_cdf(&self, i: usize, j: usize, x: i64, tol: f64) -> Result<f64> {
        self.check_dyad(i, j)?;
        let Some((lo, hi)) = support(self.xi.get(i, j), self.total(), self.m) else {
            return Ok(0.0);
        };
        if x < lo as i64 {
            return Ok(0.0);
        }
        if x >= hi as i64 {
            return Ok(1.0);
        }
        let x = x as u64;
        let per_term = Self::term_tol(tol, x);
        let value = tail_sum((lo..=x).rev(), false, |k| {
            self.log_marginal(i, j, k, per_term, false)
        })?;
        Ok(value.clamp(0.0, 1.0))
    }

    /// Mass of the marginal of `(i, j)` below, at and above `x`.
    pub fn marginal_tails(&self, i: usize, j: usize, x: u64, tol: f64) -> Result<Tails> {
        self.check_dyad(i, j)?;
        let (lo, hi) = support(self.xi.get(i, j), self.total(), self.m).unwrap_or((1, 0));
        if x < lo || x > hi {
            let below = if x > hi { 1.0 } else { 0.0 };
            return Ok(Tails {
                below,
                at: 0.0,
                above: 1.0 - below,
                in_support: false,
            });
        }
        let per_term = Self::term_tol(tol, x);
        let log_pmf = |k| self.log_marginal(i, j, k, per_term, false);
        let at = log_pmf(x)?.exp();
        let below = if x > lo {
            tail_sum((lo..x).rev(), false, log_pmf)?
        } else {
            0.0
        };
        let above = if x < hi {
            tail_sum(x + 1..=hi, true, log_pmf)?
        } else {
            0.0
        };
        Ok(Tails {
            below,
            at,
            above,
            in_support: true,
        })
    }

    /// `E[A_ij] = m Ξ_ij / M`, available for uniform Ω only.
    pub fn expected_weights(&self) -> Result<RealMatrix> {
        if !self.unbiased {
            return Err(Error::AnalyticUnavailable);
        }
        let n = self.n();
        let total = self.total();
        let values = (0..n * n)
            .map(|k| {
                if total == 0 {
                    0.0
                } else {
                    self.m as f64 * self.xi.get(k / n, k % n) as f64 / total as f64
                }
            })
            .collect();
        Ok(RealMatrix { n, values })
    }
}
