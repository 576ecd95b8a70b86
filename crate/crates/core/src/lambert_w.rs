//! Principal branch `W₀` of the Lambert W function on the real line.
//!
//! `W₀(z)` is the solution `w ≥ -1` of `w·eʷ = z`, defined for `z ≥ -1/e`.
//! Evaluation starts from a regime-specific initial guess (branch-point
//! expansion, Maclaurin series, or the asymptotic logarithmic form) and is
//! polished with Halley iteration.

use crate::error::{Error, Result};
use crate::stable;

/// `1/e` rounded to the nearest double.
pub const INV_E: f64 = 0.367_879_441_171_442_33;
/// `1/e - INV_E`, the rounding residue of [`INV_E`].
const INV_E_LO: f64 = -1.242_875_367_278_836_3e-17;

/// Offsets from the branch point below which the expansion is returned as is.
const BRANCH_DIRECT: f64 = 1e-9;
const HALLEY_RTOL: f64 = 1e-15;
const HALLEY_MAX_ITER: usize = 50;

/// Real argument of `W₀`, checked against the branch point `-1/e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WDomainPoint(f64);

impl WDomainPoint {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_nan() || z < -INV_E {
            return Err(Error::Domain {
                function: "w0",
                arg: z,
                reason: "requires z >= -1/e",
            });
        }
        Ok(Self(z))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `z + 1/e`, computed with the split constant so the offset keeps its
    /// relative accuracy next to the branch point.
    fn branch_offset(self) -> f64 {
        ((self.0 + INV_E) + INV_E_LO).max(0.0)
    }
}

/// Principal branch `W₀(z)`.
pub fn w0(z: f64) -> Result<f64> {
    let point = WDomainPoint::new(z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    let offset = point.branch_offset();
    if offset <= BRANCH_DIRECT {
        return Ok(branch_expansion(offset));
    }

    if z < -0.25 {
        // Near the branch point the shifted form is better conditioned.
        return Ok(w0_plus_one(std::f64::consts::E * offset)? - 1.0);
    }
    let guess = if z <= 0.25 {
        z * (1.0 - z * (1.0 - z * (1.5 - z * 8.0 / 3.0)))
    } else if z <= 3.0 {
        let l = z.ln_1p();
        let ll = l.ln_1p();
        l * (1.0 - ll / (2.0 + ll))
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    halley(z, guess)
}

/// Expansion of `W₀` about `z = -1/e` in `p = √(2(e·z + 1))`.
fn branch_expansion(offset: f64) -> f64 {
    branch_expansion_plus_one(offset) - 1.0
}

/// The same expansion for `1 + W₀`, without the leading `-1`.
fn branch_expansion_plus_one(offset: f64) -> f64 {
    let p = (2.0 * std::f64::consts::E * offset).sqrt();
    const COEFFS: [f64; 6] = [
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
    ];
    p * COEFFS.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

/// Halley iteration on `w - z·e^{-w} = 0`, which is `w·eʷ - z` scaled by
/// `e^{-w}` so large arguments do not overflow.
fn halley(z: f64, mut w: f64) -> Result<f64> {
    let mut prev_delta = f64::INFINITY;
    for _ in 0..HALLEY_MAX_ITER {
        let f = w - z * (-w).exp();
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(w);
        }
        let step = f / (wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !step.is_finite() {
            return Err(Error::Numeric(format!(
                "w0({z}): non-finite Halley step from w = {w}"
            )));
        }
        let next = (w - step).max(-1.0);
        let delta = (next - w).abs();
        w = next;
        if delta <= HALLEY_RTOL * w.abs() || at_noise_floor(delta, prev_delta, w) {
            return Ok(w);
        }
        prev_delta = delta;
    }
    Err(Error::Numeric(format!(
        "w0({z}): Halley iteration did not converge in {HALLEY_MAX_ITER} steps"
    )))
}

/// Steps that stop shrinking while already tiny are rounding noise.
fn at_noise_floor(delta: f64, prev_delta: f64, x: f64) -> bool {
    delta == 0.0 || (delta >= prev_delta && delta <= 1e-13 * x.abs().max(1e-300))
}

/// `1 + W₀(z)` for `-1/e ≤ z ≤ 0`, given the branch offset `d = e·z + 1`.
///
/// Writing `v = 1 + w`, the equation `w·eʷ = z` becomes
/// `(v - 1)·eᵛ + 1 = d`, which is free of cancellation near the branch point.
/// Callers that know `d` more accurately than `z` itself keep that accuracy
/// in the result.
pub fn w0_plus_one(d: f64) -> Result<f64> {
    if d.is_nan() || !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain {
            function: "w0_plus_one",
            arg: d,
            reason: "requires 0 <= e*z + 1 <= 1",
        });
    }
    if d == 0.0 {
        return Ok(0.0);
    }
    let mut v = branch_expansion_plus_one(d / std::f64::consts::E);
    if d <= BRANCH_DIRECT {
        return Ok(v);
    }
    let mut prev_delta = f64::INFINITY;
    for _ in 0..HALLEY_MAX_ITER {
        let g = stable::xexp_minus_expm1(v) - d;
        let ev = v.exp();
        let g1 = v * ev;
        let g2 = (v + 1.0) * ev;
        let step = g / g1 / (1.0 - g * g2 / (2.0 * g1 * g1));
        if !step.is_finite() {
            return Err(Error::Numeric(format!(
                "w0_plus_one({d}): non-finite Halley step from v = {v}"
            )));
        }
        let next = (v - step).max(0.0);
        let delta = (next - v).abs();
        v = next;
        if delta <= HALLEY_RTOL * v || at_noise_floor(delta, prev_delta, v) {
            return Ok(v);
        }
        prev_delta = delta;
    }
    Err(Error::Numeric(format!(
        "w0_plus_one({d}): Halley iteration did not converge in {HALLEY_MAX_ITER} steps"
    )))
}

/// Partial sum `Σ_{n=1}^{n_terms} (-n)^{n-1}/n! · zⁿ` of the Maclaurin series
/// of `W₀`, valid for `|z| < 1/e`.
pub fn w0_series(z: f64, n_terms: usize) -> Result<f64> {
    if z.is_nan() || z.abs() >= INV_E {
        return Err(Error::Domain {
            function: "w0_series",
            arg: z,
            reason: "requires |z| < 1/e",
        });
    }
    if n_terms == 0 {
        return Err(Error::invalid("w0_series: n_terms must be >= 1"));
    }
    // Consecutive terms differ by the factor -z·(1 + 1/n)^{n-1}.
    let mut term = z;
    let mut sum = z;
    for n in 1..n_terms {
        let nf = n as f64;
        term *= -z * (1.0 + 1.0 / nf).powi(n as i32 - 1);
        sum += term;
    }
    Ok(sum)
}

/// Inverse of `W₀` on its range: `w·eʷ` for `w > -1`.
pub fn w0_inverse(w: f64) -> Result<f64> {
    if w.is_nan() || w <= -1.0 {
        return Err(Error::Domain {
            function: "w0_inverse",
            arg: w,
            reason: "requires w > -1",
        });
    }
    Ok(w * w.exp())
}
