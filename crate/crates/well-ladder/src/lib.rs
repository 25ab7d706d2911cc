//! Ladder-operator toolkit for a particle in a one-dimensional infinite
//! square well.
//!
//! The factorization method turns the well Hamiltonian into a hierarchy of
//! first-order operators built on the superpotential family
//! `f_j(x) = (jπħ/L)·cot(πx/L)`. From the hierarchy one obtains the exact
//! eigenpairs, a pair of su(1,1) ladder operators `K±`, and two families of
//! coherent states: Barut-Girardello (eigenstates of `K₋`) and
//! Gilmore-Perelomov (displacement orbits of the lowest level). The crate
//! implements all of it numerically, at desk scale:
//!
//! - [`grid`]: open-interval discretization, high-order differentiation and
//!   Simpson quadrature,
//! - [`factorization`]: superpotentials, Riccati residuals, the operator
//!   hierarchy and chain-built eigenfunctions,
//! - [`su11`]: `K±`, `K₀` both as differential operators and as truncated
//!   level-space matrices, with the algebra and Hamiltonian identities,
//! - [`coherent`]: both coherent-state families, overlaps, and the
//!   Bessel-weighted resolution of the identity as an inverse moment problem,
//! - [`nonclassical`]: quadrature squeezing, amplitude-squared squeezing and
//!   the Mandel Q parameter over amplitude sweeps,
//! - [`jcsim`]: a driven Jaynes-Cummings model with su(1,1) coupling that
//!   generates Gilmore-Perelomov states, with factored, exact and analytic
//!   propagators,
//! - [`special`], [`linalg`], [`report`]: the supporting kernels (Bessel K₀,
//!   log-gamma, matrix exponential, deterministic CSV/JSON emission).
//!
//! Every capability has a runnable demo under `examples/`, and the `cli`
//! module backs the `well-ladder` binary for scripted table generation.

pub mod cli;
pub mod coherent;
pub mod factorization;
pub mod grid;
pub mod jcsim;
pub mod linalg;
pub mod nonclassical;
pub mod report;
pub mod special;
pub mod su11;
pub mod units;

mod quad;

pub use units::WellParams;
