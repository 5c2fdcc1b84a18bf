//! Pfaffian matrix-kernel elements.
//!
//! [`finite`] carries the exact finite-N elements `D`, `S`, `S~`, `I~`
//! assembled from the skew-orthogonal machinery; [`infinite`] the
//! scaling-limit elements built from Riemann-Liouville differintegrals of
//! scaled Bessel functions; [`homogeneous`] the temporally homogeneous
//! space-time Bessel kernel reached by shifting all times to minus
//! infinity; [`asymptotic`] the finite-to-limit convergence validators.

pub mod asymptotic;
pub mod finite;
pub mod homogeneous;
pub mod infinite;

pub use asymptotic::{
    homogeneous_limit_check, kernel_convergence, validate_mode, ConvergenceMode,
    ConvergenceReport, ConvergenceRow,
};
pub use finite::{FiniteKernel, PointData};
pub use homogeneous::homogeneous_kernel;
pub use infinite::InfiniteKernel;

/// A 2x2 kernel block at a pair of space-time points, laid out as
///
/// ```text
/// [  d       s_bwd ]      d     = D(m, x; n, y)
/// [ -s_fwd  -i     ]      s_fwd = S~(m, x; n, y),  s_bwd = S~(n, y; m, x)
/// ```
///
/// so that the assembled point-set matrix is skew-symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBlock {
    pub d: f64,
    pub s_fwd: f64,
    pub s_bwd: f64,
    pub i: f64,
}

impl KernelBlock {
    /// Entries of the block in row-major order.
    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.d, self.s_bwd], [-self.s_fwd, -self.i]]
    }
}

/// A space-time argument: either a grid index with a coordinate (finite
/// mode) or a shifted time with a coordinate (infinite mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    /// Time label: grid index in finite mode, shifted time in infinite mode.
    pub time: f64,
    /// Squared coordinate, `>= 0`.
    pub y: f64,
}
