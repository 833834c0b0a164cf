//! Numerics for periodically kicked one-dimensional mixtures of fermions or
//! bosons with qubits.
//!
//! The crate covers the whole pipeline from Fock-space sectors to spectral
//! form factors:
//!
//! - [`basis`]: enumeration and ranking of symmetry sectors for the four
//!   species/mixing variants (Jaynes-Cummings or Rabi, fermions or bosons).
//! - [`model`]: disorder draws, the diagonal kick phases, the driving
//!   Hamiltonian (with Jordan-Wigner signs for fermions) and its propagator.
//! - [`sff_exact`]: disorder-averaged spectral form factor from Floquet
//!   eigenphases.
//! - [`rpa`]: the doubly stochastic map `M = |V|^2`, its small-coupling
//!   generator, spectra (optionally resolved by lattice momentum), the
//!   random-phase form factor and symmetry diagnostics.
//! - [`analytic`]: closed forms and fitters (single-excitation spectrum,
//!   Thouless-time estimates, impurity bound states, truncation
//!   extrapolation).

pub mod analytic;
pub mod basis;
pub mod error;
pub mod linalg;
pub mod model;
pub mod rpa;
pub mod sff_exact;

pub use analytic::{
    chain_green_diagonal, crossover_scales, degenerate_sum, dyson_bound_states, extrapolate_lambda1, fit_scaling, jc_n1_eigenvalues,
    rabi_fermion_lambda1, thouless_estimate, BoundStatePair, CrossoverScales,
    ExtrapolationResult, N1Eigenvalues, ScalingFit, ScalingForm, ThoulessEstimate, ThoulessInput,
    ThoulessMethod, DEFAULT_EXTRAPOLATION_POINTS,
};
pub use basis::{
    enumerate_sector, Basis, FockState, Mixing, Parity, SectorSpec, Species, DEFAULT_STATE_CAP,
};
pub use error::{Error, ErrorClass, Result};
pub use model::{
    build_driving_matrix, build_phase_vector, build_sparse_driving, draw_disorder, propagator,
    DisorderRealization, DrivingMatrix, GaussianLaw, ModelParams, PhaseVector, SparseDriving,
    UnitaryMatrix,
};
pub use rpa::{
    build_map, full_map, lambda1_across_n, map_spectrum, momentum_map_spectrum, rpa_sff,
    stochastic_map_from_unitary, symmetry_report, trotter_generating_map, Expectation, MapKind,
    MapSpectrum, SpectrumCluster, StochasticMap, SymmetryCheck, SymmetryReport,
};
pub use sff_exact::{
    coe_first_order, coe_reference, compute_exact_sff, default_time_grid, floquet_eigenphases,
    EigenphaseSet, SpectralSeries,
};
