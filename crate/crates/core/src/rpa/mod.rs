//! Stochastic map `M_ab = |V_ab|²`, its Trotter-regime generator, spectra and
//! the random-phase form factor `K(t) = 2t tr M^t`.

mod map;
mod momentum;
mod spectrum;
mod symmetry;

pub use map::{
    build_map, full_map, stochastic_map_from_unitary, trotter_generating_map, MapKind,
    StochasticMap,
};
pub use momentum::momentum_map_spectrum;
pub use spectrum::{
    lambda1_across_n, map_spectrum, rpa_sff, MapSpectrum, SpectrumCluster, CLUSTER_TOLERANCE,
};
pub use symmetry::{
    commutator_norm, symmetry_report, Expectation, SymmetryCheck, SymmetryReport, BREAKS_ABOVE,
    COMMUTES_BELOW,
};
