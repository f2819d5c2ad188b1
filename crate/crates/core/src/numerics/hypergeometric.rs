//! Central (two-colour) hypergeometric distribution.

use super::binomial::log_choose;

/// A probability together with whether its argument lay in the support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probability {
    pub value: f64,
    pub in_support: bool,
}

/// Support `[lo, hi]` of the number of marked balls among `draws` taken from
/// `total` balls of which `capacity` are marked. `None` when the parameters
/// are inconsistent.
pub fn support(capacity: u64, total: u64, draws: u64) -> Option<(u64, u64)> {
    if capacity > total || draws > total {
        return None;
    }
    let lo = draws.saturating_sub(total - capacity);
    let hi = draws.min(capacity);
    Some((lo, hi))
}

/// `ln[C(K, x) C(M − K, m − x) / C(M, m)]`, negative infinity outside the support.
pub fn central_hypergeometric_log_pmf(x: i64, capacity: u64, total: u64, draws: u64) -> f64 {
    match support(capacity, total, draws) {
        Some((lo, hi)) if x >= lo as i64 && x <= hi as i64 => {
            let x = x as u64;
            log_choose(capacity, x) + log_choose(total - capacity, draws - x)
                - log_choose(total, draws)
        }
        _ => f64::NEG_INFINITY,
    }
}

pub fn central_hypergeometric_pmf(x: i64, capacity: u64, total: u64, draws: u64) -> Probability {
    let in_support = matches!(
        support(capacity, total, draws),
        Some((lo, hi)) if x >= lo as i64 && x <= hi as i64
    );
    Probability {
        value: if in_support {
            central_hypergeometric_log_pmf(x, capacity, total, draws).exp()
        } else {
            0.0
        },
        in_support,
    }
}

/// Lower tail `Pr(X ≤ x)`, summed upward from the bottom of the support.
pub fn central_hypergeometric_cdf(x: i64, capacity: u64, total: u64, draws: u64) -> Probability {
    let Some((lo, hi)) = support(capacity, total, draws) else {
        return Probability {
            value: 0.0,
            in_support: false,
        };
    };
    let in_support = x >= lo as i64 && x <= hi as i64;
    let value = if x < lo as i64 {
        0.0
    } else if x >= hi as i64 {
        1.0
    } else {
        (lo..=x as u64)
            .map(|k| central_hypergeometric_log_pmf(k as i64, capacity, total, draws).exp())
            .sum::<f64>()
            .min(1.0)
    };
    Probability { value, in_support }
}
