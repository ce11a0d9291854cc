use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("block orders mismatch: ({left_p}, {left_q}) vs ({right_p}, {right_q})")]
    BlockMismatch { left_p: usize, left_q: usize, right_p: usize, right_q: usize },
    #[error("contraction index {r} out of range 0..={max}")]
    ContractionOutOfRange { r: usize, max: usize },
    #[error("term index {k} out of range 0..={max}")]
    TermOutOfRange { k: usize, max: usize },
    #[error("cannot slice an order-0 tensor")]
    SliceOfScalar,
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("chaos orders must be at least 1, got ({n}, {m})")]
    ZeroOrder { n: usize, m: usize },
    #[error("occupation {occupation:?} does not describe an order-{order} index over dimension {dim}")]
    BadOccupation { occupation: alloc::vec::Vec<u32>, order: usize, dim: usize },
    #[error("duplicate entry for occupation {occupation:?}")]
    DuplicateEntry { occupation: alloc::vec::Vec<u32> },
    #[error("expected {expected} coefficients, got {got}")]
    CoeffCount { expected: usize, got: usize },
    #[error("operation requires orders n = m, got ({n}, {m})")]
    NotSameChaos { n: usize, m: usize },
    #[error("operation requires m = 1, got m = {m}")]
    NotOrderOne { m: usize },
    #[error("density verdict covers n = m <= 4, got n = m = {m}")]
    OutsideDensityScope { m: usize },
    #[error("(dim {dim}, n {n}, m {m}) exceeds exact-route guard (dim <= {max_dim}, orders <= {max_order}); use the Monte Carlo route")]
    GuardExceeded { dim: usize, n: usize, m: usize, max_dim: usize, max_order: usize },
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("Monte Carlo needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample has {got} coordinates, expected {expected}")]
    SampleDim { expected: usize, got: usize },
}
