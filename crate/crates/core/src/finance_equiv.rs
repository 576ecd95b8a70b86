//! Discrete-period equivalences between present values, future values and
//! level end-of-period annuities, plus nominal-to-effective rate conversion.
//!
//! Closed forms are evaluated through `ln_1p`/`exp_m1` so small rates keep
//! their precision; a zero rate is handled by its continuous extension.

use crate::error::{Error, Result};

fn check_rate(i: f64, allow_zero: bool) -> Result<()> {
    let ok = i.is_finite() && if allow_zero { i >= 0.0 } else { i > 0.0 };
    if ok {
        Ok(())
    } else if allow_zero {
        Err(Error::invalid(format!("rate must be >= 0 (got {i})")))
    } else {
        Err(Error::invalid(format!("rate must be > 0 (got {i})")))
    }
}

fn check_periods(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("periods must be >= 1"));
    }
    Ok(())
}

fn check_amount(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite")))
    }
}

/// `(1+i)^N - 1`.
fn growth_minus_one(i: f64, n: u32) -> f64 {
    (f64::from(n) * i.ln_1p()).exp_m1()
}

/// `1 - (1+i)^{-N}`.
fn one_minus_discount(i: f64, n: u32) -> f64 {
    -(-f64::from(n) * i.ln_1p()).exp_m1()
}

/// Value at period `N` of `N` end-of-period deposits: `annuity·((1+i)^N - 1)/i`.
pub fn future_value_of_annuity(annuity: f64, i: f64, n: u32) -> Result<f64> {
    check_amount("annuity", annuity)?;
    check_rate(i, true)?;
    check_periods(n)?;
    if i == 0.0 {
        return Ok(annuity * f64::from(n));
    }
    Ok(annuity * growth_minus_one(i, n) / i)
}

/// Level payment over `N` periods equivalent to present value `P`:
/// `P·i·(1+i)^N/((1+i)^N - 1)`, or `P/N` at `i = 0`.
pub fn capital_recovery(present: f64, i: f64, n: u32) -> Result<f64> {
    check_amount("present value", present)?;
    check_rate(i, true)?;
    check_periods(n)?;
    if i == 0.0 {
        return Ok(present / f64::from(n));
    }
    Ok(present * i / one_minus_discount(i, n))
}

/// Present value of `N` level payments: `annuity·((1+i)^N - 1)/(i·(1+i)^N)`.
pub fn present_value(annuity: f64, i: f64, n: u32) -> Result<f64> {
    check_amount("annuity", annuity)?;
    check_rate(i, true)?;
    check_periods(n)?;
    if i == 0.0 {
        return Ok(annuity * f64::from(n));
    }
    Ok(annuity * one_minus_discount(i, n) / i)
}

/// Effective rate of nominal `r` compounded `M` times a period: `(1 + r/M)^M - 1`.
pub fn effective_rate(r: f64, periods_per_year: u32) -> Result<f64> {
    check_rate(r, false)?;
    if periods_per_year == 0 {
        return Err(Error::invalid("periods per year must be >= 1"));
    }
    let m = f64::from(periods_per_year);
    Ok((m * (r / m).ln_1p()).exp_m1())
}

/// Limit of [`effective_rate`] as compounding becomes continuous: `eʳ - 1`.
pub fn continuous_effective_rate(r: f64) -> Result<f64> {
    check_rate(r, false)?;
    Ok(r.exp_m1())
}

/// Irregular end-of-period cash flows over a horizon of `N` periods.
#[derive(Debug, Clone, PartialEq)]
pub struct CashFlowSeries {
    deposits: Vec<(u32, f64)>,
    horizon: u32,
    rate: f64,
}

impl CashFlowSeries {
    /// `deposits` are `(period, amount)` with distinct periods in `1..=horizon`.
    pub fn new(mut deposits: Vec<(u32, f64)>, horizon: u32, rate: f64) -> Result<Self> {
        check_periods(horizon)?;
        check_rate(rate, false)?;
        deposits.sort_by_key(|&(k, _)| k);
        for &(k, amount) in &deposits {
            if k == 0 || k > horizon {
                return Err(Error::invalid(format!("period {k} outside 1..={horizon}")));
            }
            check_amount("deposit", amount)?;
        }
        if deposits.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("deposit periods must be distinct"));
        }
        Ok(Self {
            deposits,
            horizon,
            rate,
        })
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Value at period `N`: `Σ amount_k·(1+i)^{N-k}`.
    pub fn future_value(&self) -> f64 {
        let ln_growth = self.rate.ln_1p();
        self.deposits
            .iter()
            .map(|&(k, amount)| amount * (f64::from(self.horizon - k) * ln_growth).exp())
            .sum()
    }

    /// Value at period 0: `Σ amount_k/(1+i)^k`.
    pub fn present_value(&self) -> f64 {
        let ln_growth = self.rate.ln_1p();
        self.deposits
            .iter()
            .map(|&(k, amount)| amount * (-f64::from(k) * ln_growth).exp())
            .sum()
    }

    /// The level end-of-period payment with the same present value.
    pub fn equivalent_annuity(&self) -> f64 {
        self.present_value() * self.rate / one_minus_discount(self.rate, self.horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs()
    }

    #[test]
    fn future_value_small_cases() {
        assert_eq!(future_value_of_annuity(123.0, 0.07, 1).unwrap(), 123.0);
        assert!(rel(future_value_of_annuity(100.0, 0.1, 2).unwrap(), 210.0) < 1e-15);
        assert_eq!(future_value_of_annuity(10.0, 0.0, 3).unwrap(), 30.0);
        assert!(future_value_of_annuity(10.0, -0.1, 3).is_err());
        assert!(future_value_of_annuity(10.0, 0.1, 0).is_err());
    }

    #[test]
    fn capital_recovery_small_cases() {
        assert!(rel(capital_recovery(100.0, 0.1, 1).unwrap(), 110.0) < 1e-15);
        assert_eq!(capital_recovery(100.0, 0.0, 4).unwrap(), 25.0);
        assert!(rel(capital_recovery(100.0, 1e-12, 4).unwrap(), 25.0) < 1e-11);
    }

    #[test]
    fn present_value_small_cases() {
        assert_eq!(present_value(25.0, 0.0, 4).unwrap(), 100.0);
        assert!(rel(present_value(110.0, 0.1, 1).unwrap(), 100.0) < 1e-15);
        assert!(rel(present_value(25.0, 1e-12, 4).unwrap(), 100.0) < 1e-11);
    }

    #[test]
    fn effective_rates() {
        assert!(rel(effective_rate(0.1, 1).unwrap(), 0.1) < 1e-15);
        assert!(rel(effective_rate(0.1, 2).unwrap(), 0.1025) < 1e-14);
        let cont = continuous_effective_rate(0.1).unwrap();
        assert!((effective_rate(0.1, 1_000_000).unwrap() - cont).abs() < 1e-5);
        assert!(rel(continuous_effective_rate(2f64.ln()).unwrap(), 1.0) < 1e-15);
        assert!(effective_rate(0.1, 0).is_err());
        assert!(effective_rate(0.0, 4).is_err());
    }

    #[test]
    fn discount_equivalence() {
        for &r in &[0.01, 0.1, 0.5, 1.0] {
            let i = continuous_effective_rate(r).unwrap();
            for &t in &[0.5, 1.0, 7.0, 30.0] {
                let lhs = (-r * t).exp();
                let rhs = (-t * i.ln_1p()).exp();
                assert!((lhs - rhs).abs() <= 1e-15, "r = {r}, t = {t}");
            }
        }
    }

    #[test]
    fn irregular_series() {
        let flows = CashFlowSeries::new(vec![(3, 50.0), (1, 100.0)], 3, 0.1).unwrap();
        assert!(rel(flows.future_value(), 100.0 * 1.21 + 50.0) < 1e-14);
        assert!(rel(flows.present_value(), 100.0 / 1.1 + 50.0 / 1.331) < 1e-14);
        let level = flows.equivalent_annuity();
        assert!(rel(present_value(level, 0.1, 3).unwrap(), flows.present_value()) < 1e-14);
        assert!(CashFlowSeries::new(vec![(4, 1.0)], 3, 0.1).is_err());
        assert!(CashFlowSeries::new(vec![(1, 1.0), (1, 2.0)], 3, 0.1).is_err());
        assert!(CashFlowSeries::new(vec![(0, 1.0)], 3, 0.1).is_err());
    }

    #[test]
    fn regular_series_is_annuity() {
        let flows = CashFlowSeries::new((1..=12).map(|k| (k, 40.0)).collect(), 12, 0.05).unwrap();
        assert!(rel(flows.equivalent_annuity(), 40.0) < 1e-13);
        let fv = future_value_of_annuity(40.0, 0.05, 12).unwrap();
        assert!(rel(flows.future_value(), fv) < 1e-13);
    }
}
