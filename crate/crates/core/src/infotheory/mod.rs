//! Entropies, entanglement measures and separability tests.
//!
//! Entropies are in base 2: bits for classical distributions, qubits for
//! density operators and ebits for the entanglement of a pure bipartite
//! state.

mod cloning;
mod ensemble;
mod entropy;
mod schmidt;
mod separability;

pub use cloning::{
    broadcastable, cloning_consistency, cloning_defect, CloningConsistency, CLONING_TOL,
};
pub use ensemble::{holevo_chi, measured_mutual_information, sample_measurement, Ensemble};
pub use entropy::{
    binary_entropy, max_accessible_info, mutual_information, shannon_entropy, spectral_entropy,
    von_neumann_entropy, EIGEN_CLAMP,
};
pub use schmidt::{
    entanglement_entropy, is_entangled_pure, schmidt_decompose, schmidt_entropy, Cut,
    SchmidtDecomposition, SCHMIDT_TOL,
};
pub use separability::{ppt_check, ppt_class, PptClass, PptVerdict, PPT_TOL};
