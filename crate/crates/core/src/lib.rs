//! Wiener-chaos determinant machinery over a finite orthonormal basis.
//!
//! The crate is organised bottom-up:
//!
//! * [`multi_index`]: occupation-number multi-indices, ranking and
//!   multinomial weights.
//! * [`tensor`]: symmetric tensors stored once per canonical multi-index,
//!   two-block tensors produced by contractions, symmetrization and slices.
//! * [`chaos`]: Hermite polynomials, pointwise evaluation of multiple
//!   Wiener-Ito integrals, the product formula and exact expectations.
//! * [`malliavin`]: Malliavin derivative slices, the Malliavin matrix
//!   determinant (pointwise and in expectation), covariance determinants and
//!   the same-chaos density verdict.
//! * [`montecarlo`]: seeded, chunked Monte Carlo estimation.
//! * [`verify`]: executable identity checks and the chaos-algebra oracle for
//!   the expected Malliavin determinant.
//!
//! Everything is generic over [`Scalar`], implemented for `f64` and for
//! exact [`Rational`] arithmetic. Evaluation at Gaussian samples and Monte
//! Carlo are `f64` only.
//!
//! The crate is `no_std` and needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chaos;
mod dd;
mod error;
pub mod malliavin;
pub mod montecarlo;
pub mod multi_index;
pub mod rng;
mod scalar;
pub mod tensor;
pub mod verify;

pub use chaos::{hermite, ChaosExpansion, GaussianSample};
pub use error::{Error, Result};
pub use malliavin::{ChaosPair, DensityVerdict, MalliavinReport};
pub use montecarlo::McEstimate;
pub use multi_index::MultiIndex;
pub use scalar::{Rational, Scalar};
pub use tensor::{BiSymTensor, CoeffDistribution, SymTensor};

/// Limits for the exact (non Monte Carlo) routes.
///
/// The chaos oracle expands `det Λ` up to order `2n + 2m - 4`, which grows
/// quickly with the dimension; callers may override the guard explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_dim: usize,
    pub max_order: usize,
}

impl Guard {
    pub const DEFAULT: Guard = Guard { max_dim: 5, max_order: 4 };
    pub const UNBOUNDED: Guard = Guard { max_dim: usize::MAX, max_order: usize::MAX };

    pub fn admits(&self, dim: usize, n: usize, m: usize) -> bool {
        dim <= self.max_dim && n <= self.max_order && m <= self.max_order
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::DEFAULT
    }
}
