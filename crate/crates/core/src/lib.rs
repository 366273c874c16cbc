//! Gaussian entropy vectors and principal-minor machinery.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common `f64` instantiation.

pub mod error;
pub mod gaussian_core;
pub mod hyperdet;
pub mod info_inequalities;
pub mod io;
pub mod linalg;
pub mod minor_assignment;
pub mod region3;
pub mod scalar;
pub mod subsets;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use subsets::{enumerate_subsets, SubsetMask, SubsetVector};

pub type Matrix64 = linalg::Matrix<f64>;
pub type SymmetricMatrix64 = gaussian_core::SymmetricMatrix<f64>;
pub type BlockCovariance64 = gaussian_core::BlockCovariance<f64>;
pub type EntropyVector64 = gaussian_core::EntropyVector<f64>;
pub type SubsetVector64 = subsets::SubsetVector<f64>;
