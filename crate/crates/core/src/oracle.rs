//! Numerical ground truth for the closed forms.
//!
//! Nothing here calls into the classifier: the integral in the maintenance
//! cost is integrated by adaptive Simpson quadrature, and the global
//! minimizer of `h` is located by a dense grid scan followed by
//! golden-section refinement of every local basin.

use crate::classifier::{EconomicLifeResult, MinimizerSet};
use crate::cost_model::{self, AssetParams};
use crate::error::{Error, Result};

const QUAD_MAX_DEPTH: u32 = 60;
/// Golden-section stopping width.
pub const GOLDEN_WIDTH: f64 = 1e-10;
/// Relative tolerance for value ties.
pub const TIE_RTOL: f64 = 1e-12;
const MAX_GRID_POINTS: usize = 50_000_000;

/// `∫₀ᵗ a·s·e^{-r·s} ds` by adaptive Simpson quadrature with Richardson
/// correction. The error target is `tol·(1 + |I|)`.
pub fn integrate_discounted_maintenance(p: &AssetParams, t: f64, tol: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!(
            "t must be finite and >= 0 (got {t})"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tol must be > 0"));
    }
    let (a, r) = (p.maint_slope(), p.rate());
    adaptive_simpson(|s| a * s * (-r * s).exp(), 0.0, t, tol)
}

/// Adaptive Simpson quadrature of `f` over `[lo, hi]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if hi == lo {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    let eps = tol * (1.0 + whole.abs());
    simpson_step(&f, lo, hi, flo, fmid, fhi, whole, eps, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let lmid = 0.5 * (lo + mid);
    let rmid = 0.5 * (mid + hi);
    let (flm, frm) = (f(lmid), f(rmid));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    // Below a few ulps of the partial sum the estimate is pure rounding.
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * eps.max(floor) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= QUAD_MAX_DEPTH {
        return Err(Error::Numeric(format!(
            "adaptive quadrature did not converge on [{lo}, {hi}] at depth {depth}"
        )));
    }
    let l = simpson_step(f, lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1)?;
    let r = simpson_step(f, mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1)?;
    Ok(l + r)
}

/// Equivalent maintenance cost computed from its integral definition,
/// `(eʳ - 1)/(e^{rt} - 1) · e^{rt} · ∫₀ᵗ M(s)·e^{-rs} ds`, for `t > 0`.
pub fn maintenance_cost_by_quadrature(p: &AssetParams, t: f64, tol: f64) -> Result<f64> {
    let integral = integrate_discounted_maintenance(p, t, tol)?;
    let x = p.rate() * t;
    // e^{x}/(e^{x} - 1) written to stay finite for large x
    let scale = -1.0 / (-x).exp_m1();
    Ok(p.annuity_factor() * scale * integral)
}

/// Minimizer of a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_section(
    f: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// One parabolic step through `t - w, t, t + w` after golden-section search.
///
/// Comparisons alone stall once `f` varies by less than its rounding, about
/// `√ε` of the curvature scale away from the minimum. The stencil widens from
/// `1e-6·max(1, |t|)` until its second difference is clear of rounding, within
/// the scanned range `[lo, hi]`. The vertex is kept only if it is no worse than `t`.
fn parabolic_polish(
    f: &impl Fn(f64) -> Result<f64>,
    t: f64,
    ft: f64,
    lo: f64,
    hi: f64,
) -> Result<(f64, f64)> {
    let reach = (t - lo).min(hi - t);
    let mut w = 1e-6 * t.abs().max(1.0);
    while w <= reach {
        let (fm, fp) = (f(t - w)?, f(t + w)?);
        let curvature = fp - 2.0 * ft + fm;
        if curvature > 1e-9 * ft.abs() && curvature > 0.0 {
            let vertex = t - w * (fp - fm) / (2.0 * curvature);
            if (vertex - t).abs() <= w {
                let fv = f(vertex)?;
                if fv <= ft + TIE_RTOL * ft.abs() {
                    return Ok((vertex, fv.min(ft)));
                }
            }
            break;
        }
        w *= 2.0;
    }
    Ok((t, ft))
}

/// Outcome of a brute-force minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizationReport {
    /// Isolated global minimizers in ascending order.
    pub argmin_points: Vec<f64>,
    /// Interval of tied grid values at the global minimum.
    pub plateau: Option<(f64, f64)>,
    pub min_value: f64,
    pub grid_step: f64,
    /// Golden-section searches performed.
    pub refinements: usize,
}

fn tied(x: f64, y: f64) -> bool {
    (x - y).abs() <= TIE_RTOL * x.abs().max(y.abs())
}

/// Global minimization of an arbitrary `f` over `[0, t_max]`.
///
/// Grid values tied with the grid minimum over three or more consecutive
/// points form a plateau; every other grid-local minimum is refined by
/// golden-section search over its neighbouring cells, and end points are
/// kept exact. Golden-section results get one parabolic polish step.
/// Whatever ties the overall minimum is reported.
pub fn minimize_on_grid(
    f: impl Fn(f64) -> Result<f64>,
    t_max: f64,
    step: f64,
) -> Result<MinimizationReport> {
    if !(step > 0.0 && step.is_finite() && t_max.is_finite() && t_max > step) {
        return Err(Error::invalid(format!(
            "grid requires 0 < step < t_max (step = {step}, t_max = {t_max})"
        )));
    }
    let n = cost_model::grid_intervals(t_max, step);
    if n + 2 > MAX_GRID_POINTS {
        return Err(Error::invalid(format!(
            "grid of {n} intervals exceeds the limit of {MAX_GRID_POINTS}"
        )));
    }
    let mut ts: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    if t_max - ts[n] > 1e-12 * t_max {
        ts.push(t_max);
    }
    let vs = ts.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;
    let last = vs.len() - 1;
    let grid_min = vs.iter().copied().fold(f64::INFINITY, f64::min);

    let mut plateaus = Vec::new();
    let mut i = 0;
    while i <= last {
        if tied(vs[i], grid_min) {
            let start = i;
            while i < last && tied(vs[i + 1], grid_min) {
                i += 1;
            }
            if i - start >= 2 {
                plateaus.push((start, i));
            }
        }
        i += 1;
    }
    let in_plateau = |k: usize| plateaus.iter().any(|&(s, e)| (s..=e).contains(&k));

    // Consecutive grid-local minima are grouped so flat stretches cost one search.
    let is_local_min = |k: usize| {
        (k == 0 || vs[k] <= vs[k - 1]) && (k == last || vs[k] <= vs[k + 1]) && !in_plateau(k)
    };
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let mut refinements = 0;
    let mut k = 0;
    while k <= last {
        if !is_local_min(k) {
            k += 1;
            continue;
        }
        let start = k;
        while k < last && is_local_min(k + 1) {
            k += 1;
        }
        let lo = ts[start.saturating_sub(1)];
        let hi = ts[(k + 1).min(last)];
        let (gt, gv) = golden_section(&f, lo, hi, GOLDEN_WIDTH)?;
        let (mut best_t, mut best_v) = parabolic_polish(&f, gt, gv, ts[0], ts[last])?;
        refinements += 1;
        for end in [0, last] {
            if (start..=k).contains(&end) && vs[end] <= best_v {
                best_t = ts[end];
                best_v = vs[end];
            }
        }
        candidates.push((best_t, best_v));
        k += 1;
    }

    let min_value = candidates.iter().map(|&(_, v)| v).fold(grid_min, f64::min);
    let plateau = plateaus
        .iter()
        .find(|&&(s, _)| tied(vs[s], min_value))
        .map(|&(s, e)| (ts[s], ts[e]));
    let argmin_points = candidates
        .into_iter()
        .filter(|&(_, v)| tied(v, min_value))
        .map(|(t, _)| t)
        .collect();
    Ok(MinimizationReport {
        argmin_points,
        plateau,
        min_value,
        grid_step: step,
        refinements,
    })
}

/// Global minimizers of the property cost `h` on `[0, t_max]`.
///
/// `t_max` must be at least `max(2·A/b, 10)` and should also exceed any
/// interior minimum by a margin; the search cannot see beyond it.
///
/// The scan runs on `h` minus its long-run limit, which has the same
/// minimizers but keeps its variation above rounding where `h` itself is
/// flat to the last digit. Ties are judged on that shifted scale.
pub fn brute_force_minimize(p: &AssetParams, t_max: f64, step: f64) -> Result<MinimizationReport> {
    let required = (2.0 * p.junction()).max(10.0);
    if t_max < required {
        return Err(Error::invalid(format!(
            "t_max = {t_max} is below max(2*A/b, 10) = {required}"
        )));
    }
    let mut report = minimize_on_grid(|t| cost_model::property_cost_excess(p, t), t_max, step)?;
    report.min_value += cost_model::long_run_cost(p);
    Ok(report)
}

/// Agreement thresholds between the closed-form result and a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheckTolerance {
    /// Absolute distance for isolated minimizers.
    pub point: f64,
    /// Absolute distance for plateau end points.
    pub plateau: f64,
    /// Relative difference of the minimum values.
    pub value: f64,
}

impl Default for CrossCheckTolerance {
    fn default() -> Self {
        Self {
            point: 1e-6,
            plateau: 1e-3,
            value: 1e-9,
        }
    }
}

/// Compares a closed-form result with an oracle report; the error lists
/// every disagreement.
pub fn cross_check(
    result: &EconomicLifeResult,
    report: &MinimizationReport,
    tol: CrossCheckTolerance,
) -> std::result::Result<(), String> {
    let mut issues = Vec::new();
    let value_gap = (result.min_cost - report.min_value).abs() / report.min_value.abs();
    if value_gap.is_nan() || value_gap > tol.value {
        issues.push(format!(
            "min cost {} vs oracle {} (relative gap {value_gap:.3e})",
            result.min_cost, report.min_value
        ));
    }
    let expected_points = match result.minimizers {
        MinimizerSet::Point(t) => vec![t],
        MinimizerSet::TwoPoints(s, t) => vec![s, t],
        MinimizerSet::Interval { lo, hi } => {
            match report.plateau {
                Some((plo, phi)) => {
                    if (plo - lo).abs() > tol.plateau || (phi - hi).abs() > tol.plateau {
                        issues.push(format!("plateau [{lo}, {hi}] vs oracle [{plo}, {phi}]"));
                    }
                }
                None => issues.push(format!("plateau [{lo}, {hi}] not found by oracle")),
            }
            Vec::new()
        }
    };
    if !matches!(result.minimizers, MinimizerSet::Interval { .. }) && report.plateau.is_some() {
        issues.push(format!(
            "oracle found unexpected plateau {:?}",
            report.plateau
        ));
    }
    if expected_points.len() != report.argmin_points.len()
        && !matches!(result.minimizers, MinimizerSet::Interval { .. })
    {
        issues.push(format!(
            "minimizers {:?} vs oracle {:?}",
            expected_points, report.argmin_points
        ));
    } else {
        for (want, got) in expected_points.iter().zip(&report.argmin_points) {
            if (want - got).abs() > tol.point {
                issues.push(format!("minimizer {want} vs oracle {got}"));
            }
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(issues.join("; "))
    }
}
