//! Dual-modular density decomposition.
//!
//! An instance is a ground set `V` with a monotone supermodular reward `f`
//! and a (strictly) monotone submodular cost `g`. The crate computes the
//! exact density decomposition by brute force, approximates it with a
//! Frank-Wolfe method whose gradient oracle is a single density sort, and
//! uses the decomposition to check fair allocations and to analyse
//! combinatorial contracts.
//!
//! All set-function values are exact rationals ([`Rational`]); subsets are
//! bit masks ([`Mask`]).

pub mod cli;
pub mod contracts;
pub mod decomposition;
pub mod divergence;
pub mod error;
pub mod fairness;
pub mod fixtures;
pub mod instance;
pub mod io;
pub mod mask;
pub mod permutation;
pub mod rational;
pub mod solver;

pub use decomposition::{density_decomposition, maximal_densest_subset, DensityDecomposition};
pub use divergence::{DivergenceKind, Value};
pub use error::{Error, Result};
pub use instance::{DualModularInstance, GroundSet, SetFunction};
pub use mask::Mask;
pub use permutation::{Allocation, Permutation};
pub use rational::Rational;

/// Default brute-force limits. The CLI lets `DUALMOD_BRUTE_LIMIT` override
/// all of them at once.
pub mod limits {
    /// Pairwise structure checks cost `4^n` evaluations.
    pub const VERIFY: usize = 12;
    /// One densest-subset search costs `2^n` evaluations.
    pub const DECOMPOSE: usize = 18;
    pub const MEMBERSHIP: usize = 20;
    pub const SUBSETS: usize = 20;
}
