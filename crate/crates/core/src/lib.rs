//! Zero-temperature phase diagrams of one-dimensional Bose-Fermi mixtures in
//! optical lattices.
//!
//! The pipeline runs in four stages, each a module:
//!
//! * [`lattice`]: optical-lattice depths and scattering lengths to single-band
//!   Hubbard parameters (Mathieu band solve, Wannier overlaps).
//! * [`hydro`]: Hubbard parameters to the effective Luttinger inputs
//!   `v_f, v_b, K_b, g, G` (Bogoliubov phonons, fermion-phonon vertex).
//! * [`gaussian`]: the coupled two-field quadratic theory; eigenmodes,
//!   stability, logarithmic stiffness matrices and every correlation exponent.
//! * [`phases`]: spinless and spin-1/2 phase classification, impurity
//!   relevance and finite-temperature visibility.
//!
//! [`sweeps`] strings the stages together over parameter grids and writes CSV
//! or JSON. Units throughout: lattice period 1, `hbar = k_B = 1`, energies in
//! recoil units with `k_R = pi`, so the bare atomic mass is `pi^2 / 2`.

// `!(x > 0.0)` guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod hydro;
pub mod lattice;
pub mod linalg;
pub mod phases;
pub mod sweeps;
pub mod warning;

pub use error::{Error, Result};
pub use gaussian::{
    build_theory, eigen_velocities, exponent_set, stability, stiffness_matrices, ExponentSet,
    GaussianTheory, ModeSpectrum, Stability, StiffnessMatrices,
};
pub use hydro::LuttingerParams;
pub use lattice::{HubbardParams, OpticalSetup};
pub use phases::{PhasePoint, SpinSector};
pub use sweeps::{Execution, GridResult, Mode, SweepConfig};
pub use warning::Warning;
