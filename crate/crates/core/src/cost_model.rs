//! Closed-form annual-equivalent costs of an asset with linear maintenance
//! `M(t) = a·t` and straight-line salvage `R(t) = max(A - b·t, 0)`.
//!
//! With continuous discounting at nominal rate `r` and `k = eʳ - 1`:
//!
//! ```text
//! g(t) = k/(e^{rt} - 1) · (A·e^{rt} - R(t))                   capital
//! f(t) = k/(e^{rt} - 1) · e^{rt} · ∫₀ᵗ M(s)·e^{-rs} ds        maintenance
//! h(t) = f(t) + g(t)                                          property
//! ```
//!
//! `t = 0` is a removable singularity of all three; they are defined there by
//! their limits. The salvage junction `t = A/b` belongs to the second branch.
//! All formulas are evaluated through the helpers in `stable`, so they are
//! finite for every finite `t ≥ 0`.

use crate::error::{Error, Result};
use crate::stable;

/// The model quadruple `(A, a, b, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssetParams {
    acquisition: f64,
    maint_slope: f64,
    depreciation: f64,
    rate: f64,
}

impl AssetParams {
    /// Validates `A > 0`, `a > 0`, `b > 0`, `0 < r ≤ 1` and a finite junction `A/b`.
    pub fn new(acquisition: f64, maint_slope: f64, depreciation: f64, rate: f64) -> Result<Self> {
        positive_finite("A", acquisition)?;
        positive_finite("a", maint_slope)?;
        positive_finite("b", depreciation)?;
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::invalid("r must be in (0, 1]"));
        }
        let junction = acquisition / depreciation;
        if !(junction.is_finite() && junction > 0.0) {
            return Err(Error::invalid("A/b must be finite and > 0"));
        }
        Ok(Self {
            acquisition,
            maint_slope,
            depreciation,
            rate,
        })
    }

    /// Acquisition cost `A`.
    pub fn acquisition(&self) -> f64 {
        self.acquisition
    }

    /// Maintenance slope `a`.
    pub fn maint_slope(&self) -> f64 {
        self.maint_slope
    }

    /// Yearly depreciation `b`.
    pub fn depreciation(&self) -> f64 {
        self.depreciation
    }

    /// Nominal interest rate `r`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Age `A/b` at which the asset is fully depreciated.
    pub fn junction(&self) -> f64 {
        self.acquisition / self.depreciation
    }

    /// The continuous-compounding factor `eʳ - 1`.
    pub fn annuity_factor(&self) -> f64 {
        self.rate.exp_m1()
    }

    /// A copy with a different acquisition cost.
    pub fn with_acquisition(&self, acquisition: f64) -> Result<Self> {
        Self::new(acquisition, self.maint_slope, self.depreciation, self.rate)
    }
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(format!("{name} must be finite")));
    }
    if v <= 0.0 {
        return Err(Error::invalid(format!("{name} must be > 0")));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::invalid(format!("t must be finite (got {t})")));
    }
    if t < 0.0 {
        return Err(Error::invalid(format!("t must be >= 0 (got {t})")));
    }
    Ok(())
}

/// One row of a cost curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSample {
    pub t: f64,
    pub capital: f64,
    pub maintenance: f64,
    pub property: f64,
}

/// Maintenance rate `M(t) = a·t`.
pub fn maintenance(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(p.maint_slope * t)
}

/// Salvage value `R(t)`: `A - b·t` before the junction, zero from it on.
pub fn salvage(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(if t < p.junction() {
        p.acquisition - p.depreciation * t
    } else {
        0.0
    })
}

/// Equivalent capital cost `g(t)`; `g(0) = k·(A·r + b)/r`.
pub fn capital_cost(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let k = p.annuity_factor();
    let x = p.rate * t;
    Ok(if t < p.junction() {
        // (A·e^x - A + b·t)/(e^x - 1) = A + (b/r)·x/(e^x - 1)
        k * (p.acquisition + p.depreciation / p.rate * stable::x_over_expm1(x))
    } else {
        k * p.acquisition * stable::exp_over_expm1(x)
    })
}

/// Equivalent maintenance cost `f(t)`; zero at `t = 0`.
///
/// With `M(s) = a·s` the integral is `a·(1 - e^{-rt}(1 + rt))/r²`, giving
/// `f(t) = k·a/r² · (e^{rt} - 1 - rt)/(e^{rt} - 1)`.
pub fn maintenance_cost(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let k = p.annuity_factor();
    let r = p.rate;
    Ok(k * p.maint_slope / (r * r) * stable::expm1_minus_x_over_expm1(r * t))
}

/// Equivalent property cost `h(t)`, piecewise in `t` around the junction.
pub fn property_cost(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let AssetParams {
        acquisition: big_a,
        maint_slope: a,
        depreciation: b,
        rate: r,
    } = *p;
    let k = p.annuity_factor();
    let x = r * t;
    let r2 = r * r;
    Ok(if t < p.junction() {
        // k/r² · (rt·(br - a)/(e^{rt} - 1) + a + A·r²)
        k / r2 * ((b * r - a) * stable::x_over_expm1(x) + a + big_a * r2)
    } else {
        // k/(r²(e^{rt} - 1)) · (e^{rt}(a + A·r²) - a(1 + rt)), regrouped as
        // k/r² · (A·r²·e^{rt}/(e^{rt} - 1) + a·(e^{rt} - 1 - rt)/(e^{rt} - 1))
        k / r2 * (big_a * r2 * stable::exp_over_expm1(x) + a * stable::expm1_minus_x_over_expm1(x))
    })
}

/// Limit of `h(t)` as `t → ∞`: `k·(a + A·r²)/r²`.
pub fn long_run_cost(p: &AssetParams) -> f64 {
    let r2 = p.rate * p.rate;
    p.annuity_factor() / r2 * (p.maint_slope + p.acquisition * r2)
}

/// `h(t) - long_run_cost`, evaluated without subtracting.
///
/// Its variation is resolvable even where `h` is flat to within rounding,
/// so minimizers of `h` can be located more finely through it.
pub fn property_cost_excess(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let AssetParams {
        acquisition: big_a,
        maint_slope: a,
        depreciation: b,
        rate: r,
    } = *p;
    let k = p.annuity_factor();
    let x = r * t;
    let r2 = r * r;
    Ok(if t < p.junction() {
        k / r2 * (b * r - a) * stable::x_over_expm1(x)
    } else {
        k / r2 * (big_a * r2 - a * x) / x.exp_m1()
    })
}

/// Derivative `h'(t)` for `t > 0`, `t ≠ A/b`.
///
/// Both branches share the factor `k/(r(e^{rt} - 1)²)`:
/// `(a - b·r)·(e^{rt}(rt - 1) + 1)` before the junction and
/// `a - e^{rt}(a + A·r² - a·rt)` after it.
pub fn property_cost_derivative(p: &AssetParams, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Err(Error::invalid("h'(t) requires t > 0"));
    }
    let junction = p.junction();
    if t == junction {
        return Err(Error::invalid(format!(
            "h'(t) is one-sided at the junction t = A/b = {junction}"
        )));
    }
    let AssetParams {
        acquisition: big_a,
        maint_slope: a,
        depreciation: b,
        rate: r,
    } = *p;
    let k = p.annuity_factor();
    let x = r * t;
    let d = stable::xexp_minus_expm1_over_expm1_sq(x);
    Ok(if t < junction {
        k / r * (a - b * r) * d
    } else {
        let exp_over_sq = stable::exp_over_expm1(x) / x.exp_m1();
        k / r * (a * d - big_a * r * r * exp_over_sq)
    })
}

/// Samples `g`, `f`, `h` at `0, step, 2·step, …` up to `t_max` inclusive
/// when it falls on the grid.
pub fn curve(p: &AssetParams, t_max: f64, step: f64) -> Result<Vec<CostSample>> {
    if !(t_max.is_finite() && step.is_finite()) {
        return Err(Error::invalid("t_max and step must be finite"));
    }
    if !(step > 0.0 && step < t_max) {
        return Err(Error::invalid(format!(
            "grid requires 0 < step < t_max (step = {step}, t_max = {t_max})"
        )));
    }
    let n = grid_intervals(t_max, step);
    if n > MAX_CURVE_SAMPLES {
        return Err(Error::invalid(format!(
            "grid of {n} intervals exceeds the limit of {MAX_CURVE_SAMPLES}"
        )));
    }
    (0..=n)
        .map(|i| {
            let t = i as f64 * step;
            let capital = capital_cost(p, t)?;
            let maintenance = maintenance_cost(p, t)?;
            Ok(CostSample {
                t,
                capital,
                maintenance,
                property: capital + maintenance,
            })
        })
        .collect()
}

const MAX_CURVE_SAMPLES: usize = 50_000_000;

/// Number of whole steps in `[0, t_max]`, tolerant to rounding in `t_max/step`.
pub(crate) fn grid_intervals(t_max: f64, step: f64) -> usize {
    (t_max / step * (1.0 + 1e-12)).floor() as usize
}
