//! Executable checks for F-metric spaces on finite carriers.
//!
//! A distance `D` on a finite point set is an F-metric under a witness
//! `(f, α)` when it separates points, is symmetric, and satisfies
//! `f(D(x,y)) ≤ f(Σ D(u_i, u_{i+1})) + α` for every chain from `x` to `y`.
//! The crate verifies these axioms ([`axioms`]), builds the chain-infimum
//! metric they induce ([`induced`]), constructs and checks the
//! uniform-regularity certificate `φ(ε) = δ/2` ([`chittenden`]), and offers
//! exploration helpers ([`analysis`], [`sweep`]).

pub mod analysis;
pub mod axioms;
pub mod chittenden;
pub mod error;
pub mod generator;
pub mod induced;
pub mod space;
pub mod sweep;
pub mod verdict;

pub use axioms::{check_axioms, check_d1, check_d2, check_d3, check_d3_bruteforce, is_metric, min_chain_sums, AxiomReport, DEFAULT_TOL};
pub use error::{Error, Result, SpaceError};
pub use generator::{check_f1, check_f2, delta_below, Evaluate, Generator, Witness};
pub use space::{FiniteSpace, Matrix, SpaceDocument};
pub use verdict::Verdict;
