//! Generalized Bloch representation of finite-dimensional quantum states.
//!
//! Density operators on `ℂᴺ` map to real vectors in the unit ball of
//! `ℝ^{N²−1}` via `D(r) = (I + c_N r·Λ)/N`. On top of that map the crate
//! provides measurement simplexes with a stochastic membrane sampler,
//! closed-form interference analysis of two- and three-state
//! superpositions, and sector decompositions of bipartite states.

pub mod basis;
pub mod bloch;
pub mod error;
pub mod interference;
pub mod matrix;
pub mod measurement;
pub mod multipartite;
pub mod rng;

pub use basis::{
    c_n, e_n, reorder, standard_basis, tensorial_basis, verify_basis, BasisKind, BasisReport, GeneratorBasis,
    GeneratorLabel,
};
pub use bloch::{convex_combine, decode, encode, purity, qubit_from_spherical, BlochVector, OperatorState};
pub use error::{BlochError, Result};
pub use matrix::{ComplexMatrix, SpectralResult, Subsystem};
pub use measurement::{
    born_probabilities, immersion_path, project_onto_simplex, run_measurement, sample_membrane,
    simplex_from_observable, subregion_fraction, BarycentricCoords, MeasurementSimplex, MembraneOutcome,
};
