//! Asymmetric dependence measurement between variable pairs.
//!
//! The crate provides:
//! - generalized correlation coefficients r*(i|j) from Nadaraya-Watson
//!   kernel regressions, the asymmetric matrix they form, and the signed
//!   pairwise dependence measure ([`gencorr`], [`kernel`]);
//! - the exact sampling distribution of a correlation coefficient with
//!   grid quantiles, p-values, and confidence intervals ([`taraldsen`],
//!   [`special`]);
//! - maximum-entropy and i.i.d. bootstrap inference ([`bootstrap`]);
//! - classical comparison measures ([`classical`]);
//! - CSV ingestion with missingness tracking ([`ingest`]).
//!
//! All numeric routines are generic over the [`num::Real`] scalar trait
//! (`f32` or `f64`); the aliases below fix `f64` for everyday use.

pub mod bootstrap;
pub mod classical;
pub mod error;
pub mod gencorr;
pub mod ingest;
pub mod kernel;
pub mod num;
pub mod special;
pub mod taraldsen;

pub use error::{Error, Result};
pub use taraldsen::Tails;

/// `f64` aliases for the generic core types.
pub type GridDensity = taraldsen::GridDensity<f64>;
pub type DensityOptions = taraldsen::DensityOptions<f64>;
pub type ExactInterval = taraldsen::ExactInterval<f64>;
pub type KernelFit = kernel::KernelFit<f64>;
pub type GenCorrPair = gencorr::GenCorrPair<f64>;
pub type AsymmetricMatrix = gencorr::AsymmetricMatrix<f64>;
pub type ContingencyTable = classical::ContingencyTable<f64>;
pub type BinnedDistribution = classical::BinnedDistribution<f64>;
pub type BootstrapResult = bootstrap::BootstrapResult<f64>;
pub type BootInterval = bootstrap::BootInterval<f64>;
pub type HypergeomParams = special::HypergeomParams<f64>;
