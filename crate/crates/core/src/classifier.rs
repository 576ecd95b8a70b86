//! Global minimizer of the property cost `h(t)` over `t ≥ 0`.
//!
//! The cost is monotone on `(0, A/b)`, with direction given by the sign of
//! `a - b·r`. On `(A/b, ∞)` it has a single interior minimum exactly when
//! `a < a*`, with
//!
//! ```text
//! a* = A·b·r² / (A·r + b·(e^{-A·r/b} - 1))
//! ```
//!
//! and that minimum sits at `t* = T(c)/r`, where `c = A·r²/a` and
//! `T(u) = 1 + u + W₀(-e^{-1-u})` solves `τ - 1 + e^{-τ} = u`. When both a
//! left-end minimum at `t = 0` and `t*` compete, the winner is decided by
//! comparing `A` with
//!
//! ```text
//! A₄ = -(a/r²)·ln(1 - b·r/a) - b/r
//! ```
//!
//! Together these give the seven regimes of [`CaseLabel`].

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::cost_model::{self, AssetParams};
use crate::error::{Error, Result};
use crate::lambert_w;
use crate::stable;

/// Parameter regime of the minimization problem.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    /// Increasing everywhere: minimum only at `t = 0`.
    C1,
    /// Flat on `[0, A/b]`, increasing after.
    C2,
    /// Decreasing to the junction, increasing after: minimum at `A/b`.
    C3,
    /// Competing minima at `0` and `t*`; `0` wins.
    C4_1,
    /// Competing minima at `0` and `t*` with equal cost.
    C4_2,
    /// Competing minima at `0` and `t*`; `t*` wins.
    C4_3,
    /// Non-increasing before the junction: minimum only at `t*`.
    C5,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 7] = [
        CaseLabel::C1,
        CaseLabel::C2,
        CaseLabel::C3,
        CaseLabel::C4_1,
        CaseLabel::C4_2,
        CaseLabel::C4_3,
        CaseLabel::C5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::C1 => "C1",
            CaseLabel::C2 => "C2",
            CaseLabel::C3 => "C3",
            CaseLabel::C4_1 => "C4_1",
            CaseLabel::C4_2 => "C4_2",
            CaseLabel::C4_3 => "C4_3",
            CaseLabel::C5 => "C5",
        }
    }

    /// True when the regime has an interior critical point `t* > A/b`.
    pub fn has_interior_minimum(self) -> bool {
        matches!(
            self,
            CaseLabel::C4_1 | CaseLabel::C4_2 | CaseLabel::C4_3 | CaseLabel::C5
        )
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown case label {s:?}")))
    }
}

/// Set of global minimizers of `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinimizerSet {
    Point(f64),
    /// Two isolated minimizers, `first < second`.
    TwoPoints(f64, f64),
    /// Every `t` in `[lo, hi]`.
    Interval {
        lo: f64,
        hi: f64,
    },
}

impl MinimizerSet {
    /// Earliest minimizing age.
    pub fn lo(&self) -> f64 {
        match *self {
            MinimizerSet::Point(t) => t,
            MinimizerSet::TwoPoints(t, _) => t,
            MinimizerSet::Interval { lo, .. } => lo,
        }
    }

    /// Latest age of the first minimizing component: the point itself, the
    /// first of two points, or the interval's upper end.
    pub fn hi(&self) -> f64 {
        match *self {
            MinimizerSet::Point(t) => t,
            MinimizerSet::TwoPoints(t, _) => t,
            MinimizerSet::Interval { hi, .. } => hi,
        }
    }

    /// The second isolated minimizer, if any.
    pub fn secondary(&self) -> Option<f64> {
        match *self {
            MinimizerSet::TwoPoints(_, t) => Some(t),
            _ => None,
        }
    }

    /// Isolated minimizers and interval end points.
    pub fn points(&self) -> Vec<f64> {
        match *self {
            MinimizerSet::Point(t) => vec![t],
            MinimizerSet::TwoPoints(s, t) => vec![s, t],
            MinimizerSet::Interval { lo, hi } => vec![lo, hi],
        }
    }
}

/// Classification outcome with the diagnostics behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomicLifeResult {
    pub case: CaseLabel,
    pub minimizers: MinimizerSet,
    /// Minimum annual-equivalent cost `min h`.
    pub min_cost: f64,
    /// Interior critical point `T(c)/r`, present iff it exists.
    pub t_star: Option<f64>,
    /// `A·r²/a`.
    pub c: f64,
    /// Maintenance-slope threshold `a*`.
    pub a_star: f64,
    /// Acquisition-cost threshold `A₄`, defined only when `a > b·r`.
    pub a_threshold: Option<f64>,
}

/// `τ - 1 + e^{-τ}`, strictly increasing on `τ > 0`.
pub fn gap(tau: f64) -> Result<f64> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::invalid(format!("gap requires tau >= 0 (got {tau})")));
    }
    Ok(stable::expm1_minus_x(-tau))
}

/// `c = A·r²/a`.
pub fn ratio_c(p: &AssetParams) -> f64 {
    p.acquisition() * p.rate() * p.rate() / p.maint_slope()
}

/// `T(u) = 1 + u + W₀(-e^{-1-u})` for `u > 0`; the root of `gap(τ) = u`.
pub fn t_of(u: f64) -> Result<f64> {
    if u.is_nan() || u <= 0.0 || u.is_infinite() {
        return Err(Error::invalid(format!(
            "T(u) requires finite u > 0 (got {u})"
        )));
    }
    // e·(-e^{-1-u}) + 1 = 1 - e^{-u}
    let one_plus_w = lambert_w::w0_plus_one(-(-u).exp_m1())?;
    Ok(u + one_plus_w)
}

/// Interior critical point `t* = T(c)/r` of the post-junction branch.
///
/// Exceeds `A/b` exactly when `a < a*`.
pub fn t_star(p: &AssetParams) -> Result<f64> {
    Ok(t_of(ratio_c(p))? / p.rate())
}

/// Maintenance-slope threshold `a* = A·b·r²/(A·r + b·(e^{-A·r/b} - 1))`.
///
/// Always strictly above `b·r`.
pub fn threshold_a_star(p: &AssetParams) -> f64 {
    let x = p.rate() * p.junction();
    // b·(x + e^{-x} - 1) with x = A·r/b, so a* = A·r²/(x - 1 + e^{-x})
    p.acquisition() * p.rate() * p.rate() / stable::expm1_minus_x(-x)
}

/// Acquisition-cost threshold `A₄ = -(a/r²)·ln(1 - b·r/a) - b/r`, defined for `a > b·r`.
pub fn threshold_a_c4(p: &AssetParams) -> Result<f64> {
    let (a, b, r) = (p.maint_slope(), p.depreciation(), p.rate());
    let u = b * r / a;
    if u.is_nan() || u >= 1.0 {
        return Err(Error::invalid(format!(
            "A threshold requires a > b*r (a = {a}, b*r = {})",
            b * r
        )));
    }
    // (a/r²)·u = b/r, so the closed form is (a/r²)·(-ln(1 - u) - u)
    Ok(a / (r * r) * stable::neg_ln1m_minus_u(u))
}

/// `h(0) = (eʳ - 1)·(A·r + b)/r`.
pub fn cost_at_zero(p: &AssetParams) -> f64 {
    p.annuity_factor() * (p.acquisition() * p.rate() + p.depreciation()) / p.rate()
}

/// `h(t*) = (eʳ - 1)/r² · (a + A·r² + a·W₀(-e^{-1-c}))`.
pub fn cost_at_t_star(p: &AssetParams) -> Result<f64> {
    let r2 = p.rate() * p.rate();
    let c = ratio_c(p);
    let one_plus_w = lambert_w::w0_plus_one(-(-c).exp_m1())?;
    Ok(p.annuity_factor() / r2 * (p.maint_slope() * one_plus_w + p.acquisition() * r2))
}

/// Regime classifier with an optional relative tolerance for the equality
/// cases (`a = b·r`, `a = a*`, `A = A₄`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Classifier {
    tolerance: f64,
}

impl Classifier {
    /// Exact floating-point comparisons.
    pub fn exact() -> Self {
        Self::default()
    }

    /// Treats values within `tolerance` (relative) of a boundary as on it.
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::invalid("tolerance must be finite and >= 0"));
        }
        Ok(Self { tolerance })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn compare(&self, x: f64, y: f64) -> Ordering {
        if (x - y).abs() <= self.tolerance * x.abs().max(y.abs()) {
            Ordering::Equal
        } else if x < y {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn classify(&self, p: &AssetParams) -> Result<CaseLabel> {
        let a = p.maint_slope();
        let vs_br = self.compare(a, p.depreciation() * p.rate());
        let below_a_star = self.compare(a, threshold_a_star(p)) == Ordering::Less;
        Ok(match (below_a_star, vs_br) {
            (false, Ordering::Greater) => CaseLabel::C1,
            (false, Ordering::Equal) => CaseLabel::C2,
            (false, Ordering::Less) => CaseLabel::C3,
            (true, Ordering::Greater) => {
                let threshold = threshold_a_c4(p)?;
                match self.compare(p.acquisition(), threshold) {
                    Ordering::Greater => CaseLabel::C4_1,
                    Ordering::Equal => CaseLabel::C4_2,
                    Ordering::Less => CaseLabel::C4_3,
                }
            }
            (true, _) => CaseLabel::C5,
        })
    }

    pub fn economic_life(&self, p: &AssetParams) -> Result<EconomicLifeResult> {
        let case = self.classify(p)?;
        let t_star = if case.has_interior_minimum() {
            Some(t_star(p)?)
        } else {
            None
        };
        let (minimizers, min_cost) = match (case, t_star) {
            (CaseLabel::C1 | CaseLabel::C4_1, _) => (MinimizerSet::Point(0.0), cost_at_zero(p)),
            (CaseLabel::C2, _) => (
                MinimizerSet::Interval {
                    lo: 0.0,
                    hi: p.junction(),
                },
                cost_at_zero(p),
            ),
            (CaseLabel::C3, _) => (
                MinimizerSet::Point(p.junction()),
                cost_model::property_cost(p, p.junction())?,
            ),
            (CaseLabel::C4_2, Some(ts)) => (MinimizerSet::TwoPoints(0.0, ts), cost_at_zero(p)),
            (CaseLabel::C4_3 | CaseLabel::C5, Some(ts)) => {
                (MinimizerSet::Point(ts), cost_at_t_star(p)?)
            }
            (_, None) => unreachable!("interior cases always carry t*"),
        };
        let a_threshold = if p.maint_slope() > p.depreciation() * p.rate() {
            Some(threshold_a_c4(p)?)
        } else {
            None
        };
        Ok(EconomicLifeResult {
            case,
            minimizers,
            min_cost,
            t_star,
            c: ratio_c(p),
            a_star: threshold_a_star(p),
            a_threshold,
        })
    }
}

/// [`Classifier::classify`] with exact comparisons.
pub fn classify(p: &AssetParams) -> Result<CaseLabel> {
    Classifier::exact().classify(p)
}

/// [`Classifier::economic_life`] with exact comparisons.
pub fn economic_life(p: &AssetParams) -> Result<EconomicLifeResult> {
    Classifier::exact().economic_life(p)
}
