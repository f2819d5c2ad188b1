//! The Wallenius integral `I = ∫₀¹ ∏_c (1 − z^{a_c})^{x_c} dz` in log space.
//!
//! In `z` the integrand falls monotonically from 1 at `z = 0` to 0 at `z = 1`,
//! so all of its mass sits against the left endpoint and becomes a spike as
//! the exponents shrink. Substituting `z = exp(−e^s)` maps the interval onto
//! the real line with integrand `exp(ψ(s))`,
//!
//! ```text
//! ψ(s) = s − e^s + Σ_c x_c ln(1 − exp(−a_c e^s)),
//! ```
//!
//! which is strictly concave. The integral is evaluated by locating the mode
//! `s*` with a bracketed Newton iteration, evaluating `ψ(s) − ψ(s*)` through
//! `expm1`/`ln_1p` differences so that the shifted integrand is accurate even
//! when `ψ(s*)` is of order `−10⁶`, and running adaptive Gauss-Kronrod on each
//! side of the mode out to where the integrand has dropped by `e^{-46}`. The
//! tails beyond are bounded analytically by concavity.

use super::quadrature::{integrate, Budget};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// log-drop at which the integration window ends
const WINDOW_DROP: f64 = 46.0;
const PANELS_PER_SIDE: usize = 4;
/// largest expansion tried by the closed-form path
const MAX_MONOMIALS: usize = 729;

/// One factor `(1 − z^exponent)^multiplicity` of the integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub exponent: f64,
    pub multiplicity: f64,
}

impl Term {
    pub fn new(exponent: f64, multiplicity: f64) -> Self {
        Self {
            exponent,
            multiplicity,
        }
    }
}

/// A validated integrand together with its relative tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrandSpec {
    terms: Vec<Term>,
    tol: f64,
}

impl IntegrandSpec {
    /// Fails unless there is at least one term, every exponent is positive and
    /// finite, and every multiplicity is non-negative and finite.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument(
                "integrand needs at least one term".into(),
            ));
        }
        for t in &terms {
            if !(t.exponent > 0.0 && t.exponent.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "exponent must be positive and finite, got {}",
                    t.exponent
                )));
            }
            if !(t.multiplicity >= 0.0 && t.multiplicity.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "multiplicity must be non-negative, got {}",
                    t.multiplicity
                )));
            }
        }
        Ok(Self {
            terms,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must lie in (0, 1), got {tol}"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// `ln I` with its relative error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogIntegral {
    pub log_value: f64,
    /// Estimated bound on `|I_computed / I − 1|`.
    pub rel_error: f64,
    /// Quadrature panels used; zero for the closed-form path.
    pub panels: usize,
}

pub fn log_wallenius_integral(spec: &IntegrandSpec) -> Result<LogIntegral> {
    let terms: Vec<Term> = spec
        .terms
        .iter()
        .copied()
        .filter(|t| t.multiplicity > 0.0)
        .collect();
    if terms.is_empty() {
        return Ok(LogIntegral {
            log_value: 0.0,
            rel_error: 0.0,
            panels: 0,
        });
    }
    if let Some(exact) = closed_form(&terms, spec.tol) {
        return Ok(exact);
    }
    by_quadrature(&terms, spec.tol)
}

/// Expands the product when every multiplicity is 1 or 2 and integrates term
/// by term, `∫ z^e dz = 1/(1 + e)`. Rejected when the alternating sum cancels
/// badly enough to miss the tolerance.
fn closed_form(terms: &[Term], tol: f64) -> Option<LogIntegral> {
    let small_integer = |x: f64| x == 1.0 || x == 2.0;
    if !terms.iter().all(|t| small_integer(t.multiplicity)) {
        return None;
    }
    let mut monomials: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    for t in terms {
        let coefficients: &[f64] = if t.multiplicity == 1.0 {
            &[1.0, -1.0]
        } else {
            &[1.0, -2.0, 1.0]
        };
        if monomials.len() * coefficients.len() > MAX_MONOMIALS {
            return None;
        }
        monomials = monomials
            .iter()
            .flat_map(|&(c, e)| {
                coefficients
                    .iter()
                    .enumerate()
                    .map(move |(p, &b)| (c * b, e + p as f64 * t.exponent))
            })
            .collect();
    }
    let (value, magnitude) = monomials.iter().fold((0.0, 0.0), |(v, m), &(c, e)| {
        (v + c / (1.0 + e), m + c.abs() / (1.0 + e))
    });
    if value <= 0.0 {
        return None;
    }
    let rel_error = 8.0 * f64::EPSILON * magnitude / value;
    (rel_error <= 0.01 * tol).then(|| LogIntegral {
        log_value: value.ln(),
        rel_error,
        panels: 0,
    })
}

/// `w / (e^w − 1)`, continuous at zero.
fn bose(w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        w / w.exp_m1()
    }
}

/// `w · d/dw [w / (e^w − 1)]`
fn bose_slope(w: f64) -> f64 {
    if w < 1e-3 {
        -0.5 * w + w * w / 6.0
    } else if w > 700.0 {
        0.0
    } else {
        let em = w.exp_m1();
        w * (em - w * (em + 1.0)) / (em * em)
    }
}

/// ψ and its derivatives in the substituted variable.
struct LogIntegrand<'a> {
    terms: &'a [Term],
}

impl LogIntegrand<'_> {
    fn value(&self, s: f64) -> f64 {
        let u = s.exp();
        self.terms.iter().fold(s - u, |acc, t| {
            acc + t.multiplicity * (-(-t.exponent * u).exp_m1()).ln()
        })
    }

    fn slope(&self, s: f64) -> f64 {
        let u = s.exp();
        self.terms.iter().fold(1.0 - u, |acc, t| {
            acc + t.multiplicity * bose(t.exponent * u)
        })
    }

    fn curvature(&self, s: f64) -> f64 {
        let u = s.exp();
        self.terms.iter().fold(-u, |acc, t| {
            acc + t.multiplicity * bose_slope(t.exponent * u)
        })
    }

    /// Root of the slope. With `X = Σ x_c`, the slope is positive at
    /// `u = (1 + X) / (2 + Σ x_c a_c)` and negative at `u = 1 + X`.
    fn mode(&self) -> f64 {
        let total: f64 = self.terms.iter().map(|t| t.multiplicity).sum();
        let weighted: f64 = self.terms.iter().map(|t| t.multiplicity * t.exponent).sum();
        let mut lo = ((1.0 + total) / (2.0 + weighted)).ln();
        let mut hi = (1.0 + total).ln();
        let mut s = ((1.0 + total) / (1.0 + 0.5 * weighted)).ln().clamp(lo, hi);
        for _ in 0..200 {
            let g = self.slope(s);
            if g > 0.0 {
                lo = s;
            } else if g < 0.0 {
                hi = s;
            } else {
                return s;
            }
            let newton = s - g / self.curvature(s);
            let next = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - s).abs() <= 1e-14 * (1.0 + s.abs()) || hi - lo <= 1e-15 * (1.0 + s.abs()) {
                return next;
            }
            s = next;
        }
        s
    }
}

/// `ψ(s) − ψ(s*)`, computed from differences.
struct Shifted {
    mode: f64,
    mode_u: f64,
    /// (multiplicity, exponent · u*, exp(−a u*), 1 − exp(−a u*))
    parts: Vec<(f64, f64, f64, f64)>,
}

impl Shifted {
    fn new(terms: &[Term], mode: f64) -> Self {
        let mode_u = mode.exp();
        let parts = terms
            .iter()
            .map(|t| {
                let w = t.exponent * mode_u;
                (t.multiplicity, w, (-w).exp(), -(-w).exp_m1())
            })
            .collect();
        Self {
            mode,
            mode_u,
            parts,
        }
    }

    fn delta(&self, s: f64) -> f64 {
        let t = s - self.mode;
        let g = t.exp_m1();
        let mut acc = t - self.mode_u * g;
        for &(x, w0, e0, d0) in &self.parts {
            let shift = w0 * g;
            let numerator = if shift.abs() < 700.0 {
                e0 * -(-shift).exp_m1()
            } else {
                e0 - (-(w0 + shift)).exp()
            };
            acc += x * (numerator / d0).ln_1p();
        }
        acc
    }

    /// Rounding carried by ψ(s*) itself, relative to I.
    fn rounding(&self) -> f64 {
        let magnitude = self
            .parts
            .iter()
            .fold(self.mode.abs() + self.mode_u, |acc, &(x, _, _, d0)| {
                acc + x * d0.ln().abs()
            });
        4.0 * f64::EPSILON * magnitude
    }
}

/// Walks away from the mode in steps of `width · 2^k` until the shifted log
/// integrand drops below `-WINDOW_DROP`, then tightens the edge by bisection.
fn window_edge(shifted: &Shifted, width: f64, direction: f64) -> f64 {
    let mut inner = shifted.mode;
    let mut step = width;
    let mut outer = shifted.mode + direction * step;
    for _ in 0..2000 {
        if shifted.delta(outer) < -WINDOW_DROP {
            break;
        }
        inner = outer;
        step *= 2.0;
        outer = shifted.mode + direction * step;
    }
    for _ in 0..12 {
        let mid = 0.5 * (inner + outer);
        if shifted.delta(mid) < -WINDOW_DROP {
            outer = mid;
        } else {
            inner = mid;
        }
    }
    outer
}

fn by_quadrature(terms: &[Term], tol: f64) -> Result<LogIntegral> {
    let psi = LogIntegrand { terms };
    let mode = psi.mode();
    let peak = psi.value(mode);
    let shifted = Shifted::new(terms, mode);

    let curvature = psi.curvature(mode);
    let width = if curvature < 0.0 && curvature.is_finite() {
        (-curvature).sqrt().recip()
    } else {
        1.0
    };
    let left = window_edge(&shifted, width, -1.0);
    let right = window_edge(&shifted, width, 1.0);

    let mut breaks = Vec::with_capacity(2 * PANELS_PER_SIDE + 1);
    for k in 0..PANELS_PER_SIDE {
        breaks.push(left + (mode - left) * k as f64 / PANELS_PER_SIDE as f64);
    }
    for k in 0..=PANELS_PER_SIDE {
        breaks.push(mode + (right - mode) * k as f64 / PANELS_PER_SIDE as f64);
    }

    let q = integrate(
        |s| shifted.delta(s).exp(),
        &breaks,
        0.5 * tol,
        Budget::default(),
    );

    // concavity: the integrand beyond an edge lies under the tangent exponential
    let tail = |edge: f64| shifted.delta(edge).exp() / psi.slope(edge).abs();
    let tails = tail(left) + tail(right);
    let truncation = (q.error + tails) / q.value;
    if !(q.value > 0.0 && q.value.is_finite()) || !q.converged || truncation > tol {
        return Err(Error::NonConvergent {
            rel_error: truncation,
            panels: q.panels,
        });
    }
    Ok(LogIntegral {
        log_value: peak + q.value.ln(),
        rel_error: truncation + shifted.rounding(),
        panels: q.panels,
    })
}
