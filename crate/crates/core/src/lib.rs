//! Transitive GPT systems built from group data.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: dense real/complex linear algebra, a cyclic Jacobi
//!   eigensolver and a two-phase simplex LP solver.
//! * [`finite_rep`]: permutation groups, character tables, Gelfand-pair
//!   decisions and Frobenius–Schur indicators.
//! * [`compact_rep`]: matrix models of SU(d) and SO(d), Haar sampling and
//!   projectors onto subgroup-invariant vectors.
//! * [`state_space`]: orbit state spaces with a normalisation coordinate,
//!   effects and their validity.
//! * [`discrimination`]: the hexagon projection of the deformable SU(3)
//!   family, perfect distinguishability and the two-bit encoding game.
//! * [`deformation`]: distances between probabilistic structures,
//!   deformation paths and the Schur-average identity.
//! * [`classification`]: spherical partitions for complex Grassmannians,
//!   Dynkin reality typing, Weyl dimensions and static catalogues.

pub mod classification;
pub mod compact_rep;
pub mod deformation;
pub mod discrimination;
pub mod error;
pub mod finite_rep;
pub mod numerics;
pub mod presets;
pub mod rng;
pub mod state_space;

pub use error::{Error, Result};
pub use rng::SeededRng;

/// Default absolute tolerance used by checks that do not take an override.
pub const DEFAULT_TOL: f64 = 1e-8;
