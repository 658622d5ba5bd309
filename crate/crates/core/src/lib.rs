//! Mixed fractional Brownian motion `a B + b B^H` run on a random clock
//! (tempered stable or gamma subordinator).
//!
//! * [`gaussian`]: covariance kernels and exact Gaussian sampling.
//! * [`subordinators`]: samplers, densities and moments of the clocks.
//! * [`analytics`]: exact and large-time covariance, MSD and correlation formulas.
//! * [`estimation`]: Monte Carlo ensembles, correlation curves, power-law fits
//!   and the long-range-dependence verdict.
//! * [`cli`]: the command-line driver behind the `tcfbm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod cli;
pub mod error;
pub mod estimation;
pub mod gaussian;
pub mod quadrature;
pub mod rng;
pub mod subordinators;

pub use error::{Error, Result};
pub use gaussian::{fbm_cov, mfbm_cov, sample_fgn_grid, sample_mfbm_at_times, HurstExponent, MfbmParams, TimePoints};
pub use rng::RandomStream;
pub use subordinators::{Clock, GammaParams, SubordinatorPath, TssParams};
