//! Log binomial coefficients.
//!
//! Small arguments are computed exactly in 128-bit integers. Larger ones use
//! Loader's saddle-point decomposition, which writes `ln C(n, k)` as a sum of
//! terms no larger than the result itself and so avoids the cancellation of a
//! plain `lgamma` difference when `n` is in the billions.

use std::f64::consts::PI;

/// Largest `n` for which `C(n, k)` is built exactly in `u128`.
const EXACT_LIMIT: u64 = 120;

/// `ln(n!) - (n + 1/2) ln n + n - ln(2 pi)/2` for `n = 1..=15`.
const STIRLING_REMAINDER: [f64; 15] = [
    0.08106146679532726,
    0.0413406959554093,
    0.02767792568499834,
    0.020790672103765093,
    0.016644691189821193,
    0.013876128823070748,
    0.01189670994589177,
    0.010411265261972096,
    0.009255462182712733,
    0.00833056343336287,
    0.007573675487951841,
    0.00694284010720953,
    0.006408994188004207,
    0.0059513701127588475,
    0.005554733551962801,
];

/// Remainder of Stirling's approximation to `ln(n!)`, `n >= 1`.
fn stirling_remainder(n: u64) -> f64 {
    if n <= 15 {
        return STIRLING_REMAINDER[n as usize - 1];
    }
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let x = n as f64;
    let x2 = x * x;
    (S0 - (S1 - (S2 - (S3 - S4 / x2) / x2) / x2) / x2) / x
}

fn exact_binomial(n: u64, k: u64) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    c
}

/// Loader's form, valid for `1 <= k < n`.
fn loader_log_binomial(n: u64, k: u64) -> f64 {
    let (nf, kf, rf) = (n as f64, k as f64, (n - k) as f64);
    let entropy = kf * (nf / kf).ln() - rf * (-kf / nf).ln_1p();
    stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(n - k)
        + 0.5 * (nf / (2.0 * PI * kf * rf)).ln()
        + entropy
}

/// `ln C(n, k)`, or negative infinity when `k < 0` or `k > n`.
pub fn log_binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let k = k as u64;
    let k = k.min(n - k);
    match k {
        0 => 0.0,
        1 => (n as f64).ln(),
        _ if n <= EXACT_LIMIT => (exact_binomial(n, k) as f64).ln(),
        _ => loader_log_binomial(n, k),
    }
}

/// `ln C(n, k)` for unsigned `k`.
pub fn log_choose(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        log_binomial(n, k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_exact_values() {
        assert!(rel(log_binomial(9, 3), 84f64.ln()) < 1e-15);
        assert_eq!(log_binomial(17, 0), 0.0);
        assert_eq!(log_binomial(17, 17), 0.0);
        assert_eq!(log_binomial(0, 0), 0.0);
        assert_eq!(log_binomial(5, -1), f64::NEG_INFINITY);
        assert_eq!(log_binomial(5, 6), f64::NEG_INFINITY);
    }

    #[test]
    fn fifty_two_choose_twenty_six() {
        // exact integer, representable in f64
        let exact = 495_918_532_948_104u64;
        assert_eq!(exact_binomial(52, 26), u128::from(exact));
        assert!(rel(log_binomial(52, 26), (exact as f64).ln()) < 1e-12);
    }

    #[test]
    fn stirling_table_joins_series() {
        // the series at n = 15 must agree with the tabulated value
        let x = 15.0f64;
        let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3)) + 1.0 / (1260.0 * x.powi(5))
            - 1.0 / (1680.0 * x.powi(7));
        assert!((series - STIRLING_REMAINDER[14]).abs() < 1e-13);
    }

    #[test]
    fn loader_agrees_with_exact_arithmetic() {
        for n in 20..=EXACT_LIMIT {
            for k in 2..n - 1 {
                let exact = (exact_binomial(n, k.min(n - k)) as f64).ln();
                let approx = loader_log_binomial(n, k);
                assert!(
                    (approx - exact).abs() <= 2e-14 * exact.max(1.0),
                    "n={n} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn large_arguments_stay_accurate() {
        // ln C(n, 2) = ln(n (n-1) / 2) is available in closed form
        for &n in &[1_000u64, 1_000_000, 10_000_000_000, 1 << 60] {
            let nf = n as f64;
            let expected = nf.ln() + (nf - 1.0).ln() - 2f64.ln();
            assert!(rel(log_binomial(n, 2), expected) < 1e-14, "n={n}");
        }
        // symmetry and Pascal's rule in log space
        let n = 10_000_000_000u64;
        let k = 100_000i64;
        assert_eq!(log_binomial(n, k), log_binomial(n, n as i64 - k));
        let lhs = log_binomial(n + 1, k);
        let a = log_binomial(n, k);
        let b = log_binomial(n, k - 1);
        let rhs = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        assert!(rel(lhs, rhs) < 1e-13);
    }
}
