//! Cancellation-free building blocks in `x = r·t`.
//!
//! Every cost formula is a combination of `eˣ - 1`, `eˣ - 1 - x` and
//! `x·eˣ - (eˣ - 1)`. Near zero the naive forms lose most of their digits and
//! for large `x` the raw exponentials overflow, so each helper switches
//! between a Taylor series and a scaled closed form.

const SERIES_CUTOFF: f64 = 0.5;

/// Sum `Σ_{n≥2} w(n)·xⁿ/n!` until the terms stop contributing.
fn tail_series(x: f64, weight: impl Fn(f64) -> f64) -> f64 {
    let mut power_over_fact = x; // xⁿ/n! at n = 1
    let mut sum = 0.0;
    for n in 2..60 {
        let nf = n as f64;
        power_over_fact *= x / nf;
        let term = weight(nf) * power_over_fact;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `eˣ - 1 - x`.
pub(crate) fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        tail_series(x, |_| 1.0)
    } else {
        x.exp_m1() - x
    }
}

/// `x·eˣ - (eˣ - 1)`.
pub(crate) fn xexp_minus_expm1(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        tail_series(x, |n| n - 1.0)
    } else {
        x * x.exp() - x.exp_m1()
    }
}

/// `-ln(1 - u) - u` for `u < 1`.
pub(crate) fn neg_ln1m_minus_u(u: f64) -> f64 {
    if u.abs() < SERIES_CUTOFF {
        let mut power = u;
        let mut sum = 0.0;
        for n in 2..80 {
            power *= u;
            let term = power / n as f64;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        -(-u).ln_1p() - u
    }
}

/// `x / (eˣ - 1)`, equal to 1 at `x = 0`.
pub(crate) fn x_over_expm1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x / x.exp_m1()
    }
}

/// `eˣ / (eˣ - 1)` for `x > 0`.
pub(crate) fn exp_over_expm1(x: f64) -> f64 {
    -1.0 / (-x).exp_m1()
}

/// `(eˣ - 1 - x) / (eˣ - 1)`, equal to 0 at `x = 0`.
pub(crate) fn expm1_minus_x_over_expm1(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x.abs() < SERIES_CUTOFF {
        expm1_minus_x(x) / x.exp_m1()
    } else {
        1.0 - x_over_expm1(x)
    }
}

/// `(x·eˣ - (eˣ - 1)) / (eˣ - 1)²` for `x > 0`; tends to 1/2 at zero.
pub(crate) fn xexp_minus_expm1_over_expm1_sq(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let e = x.exp_m1();
        xexp_minus_expm1(x) / e / e
    } else {
        (x * exp_over_expm1(x) - 1.0) / x.exp_m1()
    }
}
