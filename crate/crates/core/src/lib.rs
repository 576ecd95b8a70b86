//! Economic life of physical assets.
//!
//! The economic life is the age that minimizes the equivalent property cost
//! `h(t)`: the annualized sum of capital cost (acquisition less discounted
//! salvage) and accumulated maintenance, under continuous discounting. For
//! linear maintenance `M(t) = a·t` and straight-line salvage down to zero at
//! `t = A/b`, the minimizer has a closed form through the Lambert W function
//! and falls into one of seven regimes ([`CaseLabel`]).
//!
//! * [`lambert_w`]: principal branch `W₀`, its series and inverse.
//! * [`cost_model`]: the capital, maintenance and property cost functions.
//! * [`classifier`]: regime thresholds, `t*`, and the minimizer set.
//! * [`finance_equiv`]: annuity, present/future value and rate conversions.
//! * [`oracle`]: quadrature and brute-force minimization used to check the
//!   closed forms.
//! * [`cli`]: the `econlife` command-line front end.
//!
//! ```
//! use econlife::{economic_life, AssetParams, CaseLabel};
//!
//! let asset = AssetParams::new(40.0, 5.0, 20.0, 0.1).unwrap();
//! let life = economic_life(&asset).unwrap();
//! assert_eq!(life.case, CaseLabel::C4_3);
//! assert!((life.minimizers.lo() - 4.3).abs() < 0.1);
//! ```

pub mod classifier;
pub mod cli;
pub mod cost_model;
pub mod error;
pub mod finance_equiv;
pub mod format;
pub mod lambert_w;
pub mod oracle;
mod stable;

pub use classifier::{
    classify, economic_life, CaseLabel, Classifier, EconomicLifeResult, MinimizerSet,
};
pub use cost_model::{AssetParams, CostSample};
pub use error::{Error, Result};
pub use oracle::MinimizationReport;
