//! Numerical kernel: log binomials, the Wallenius integral, and the central
//! hypergeometric distribution used as the unbiased fast path.

mod binomial;
mod hypergeometric;
mod integral;
pub mod quadrature;

pub use binomial::{log_binomial, log_choose};
pub use hypergeometric::{
    central_hypergeometric_cdf, central_hypergeometric_log_pmf, central_hypergeometric_pmf,
    support, Probability,
};
pub use integral::{log_wallenius_integral, IntegrandSpec, LogIntegral, Term, DEFAULT_TOL};

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`, negative infinity for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
