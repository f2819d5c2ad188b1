use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaKind {
    Uniform,
    Block,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
enum Propensities {
    Uniform,
    Block {
        assignment: Vec<usize>,
        within: f64,
        between: f64,
    },
    Dense(Vec<f64>),
}

/// Relative dyadic propensities Ω. Only ratios matter: scaling every entry by
/// the same positive constant leaves the ensemble unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaMatrix {
    n: usize,
    propensities: Propensities,
}

/// All-ones propensities.
pub fn omega_uniform(n: usize) -> OmegaMatrix {
    OmegaMatrix {
        n,
        propensities: Propensities::Uniform,
    }
}

/// `Ω_ij = within` when `i` and `j` share a block, `between` otherwise.
pub fn omega_block(assignment: Vec<usize>, within: f64, between: f64) -> Result<OmegaMatrix> {
    for (name, value) in [("within", within), ("between", between)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "{name}-block propensity must be positive, got {value}"
            )));
        }
    }
    Ok(OmegaMatrix {
        n: assignment.len(),
        propensities: Propensities::Block {
            assignment,
            within,
            between,
        },
    })
}

/// Dense row-major `n × n` propensities.
pub fn omega_custom(n: usize, entries: Vec<f64>) -> Result<OmegaMatrix> {
    if entries.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: (entries.len() as f64).sqrt() as usize,
        });
    }
    if let Some(k) = entries.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::NegativePropensity {
            i: k / n,
            j: k % n,
            value: entries[k],
        });
    }
    Ok(OmegaMatrix {
        n,
        propensities: Propensities::Dense(entries),
    })
}

impl OmegaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OmegaKind {
        match self.propensities {
            Propensities::Uniform => OmegaKind::Uniform,
            Propensities::Block { .. } => OmegaKind::Block,
            Propensities::Dense(_) => OmegaKind::Custom,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.propensities {
            Propensities::Uniform => 1.0,
            Propensities::Block {
                assignment,
                within,
                between,
            } => {
                if assignment[i] == assignment[j] {
                    *within
                } else {
                    *between
                }
            }
            Propensities::Dense(entries) => entries[i * self.n + j],
        }
    }

    /// Same propensities multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<OmegaMatrix> {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.get(k / n, k % n) * factor)
            .collect();
        omega_custom(n, entries)
    }

    /// Block structure, when Ω is a block closure.
    pub(crate) fn blocks(&self) -> Option<(&[usize], f64, f64)> {
        match &self.propensities {
            Propensities::Block {
                assignment,
                within,
                between,
            } => Some((assignment, *within, *between)),
            _ => None,
        }
    }

    pub(crate) fn hash_into(&self, bytes: &mut Vec<u8>) {
        bytes.extend_from_slice(&(self.n as u64).to_le_bytes());
        match &self.propensities {
            Propensities::Uniform => bytes.push(b'u'),
            Propensities::Block {
                assignment,
                within,
                between,
            } => {
                bytes.push(b'b');
                for b in assignment {
                    bytes.extend_from_slice(&(*b as u64).to_le_bytes());
                }
                bytes.extend_from_slice(&within.to_le_bytes());
                bytes.extend_from_slice(&between.to_le_bytes());
            }
            Propensities::Dense(entries) => {
                bytes.push(b'd');
                for v in entries {
                    bytes.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(omega: &OmegaMatrix) -> Vec<f64> {
        let n = omega.n();
        (0..n * n).map(|k| omega.get(k / n, k % n)).collect()
    }

    #[test]
    fn uniform_is_all_ones() {
        let omega = omega_uniform(3);
        assert_eq!(dense(&omega), [1.0; 9]);
        assert_eq!(omega.kind(), OmegaKind::Uniform);
    }

    #[test]
    fn block_matrix() {
        let omega = omega_block(vec![0, 0, 1], 2.0, 1.0).unwrap();
        assert_eq!(dense(&omega), [2.0, 2.0, 1.0, 2.0, 2.0, 1.0, 1.0, 1.0, 2.0]);
        assert!(omega_block(vec![0, 1], 0.0, 1.0).is_err());
        assert!(omega_block(vec![0, 1], 1.0, -2.0).is_err());
    }

    #[test]
    fn custom_rejects_negative_entries() {
        let err = omega_custom(2, vec![1.0, -0.5, 1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NegativePropensity { i: 0, j: 1, .. }));
        assert!(matches!(
            omega_custom(2, vec![1.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(omega_custom(2, vec![0.0, 3.0, 1.0, f64::NAN]).is_err());
    }

    #[test]
    fn scaling() {
        let omega = omega_block(vec![0, 1], 3.0, 1.0)
            .unwrap()
            .scaled(0.5)
            .unwrap();
        assert_eq!(dense(&omega), [1.5, 0.5, 0.5, 1.5]);
    }
}
