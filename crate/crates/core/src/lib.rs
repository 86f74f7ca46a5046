//! Exact simulation of small quantum registers, entanglement analytics and
//! protocol verification.
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigensolver, SVD, partial
//!   trace and transpose.
//! * [`qstate`]: state vectors, density operators, gates and measurement.
//!   Qubit 0 is the leftmost tensor factor.
//! * [`infotheory`]: entropies, Holevo quantity, Schmidt decomposition,
//!   separability and cloning checks.
//! * [`protocols`]: teleportation, superdense coding, entanglement swapping,
//!   tomography, cloning attempts.
//! * [`qkd`]: BB84 in prepare-and-measure and entanglement-based form.
//!
//! All randomness flows through an explicit [`rng::SimRng`], so equal seeds
//! give bit-identical runs.
//!
//! ```
//! use qinfo::protocols::teleport;
//! use qinfo::qstate::PureState;
//! use qinfo::rng::SimRng;
//!
//! let mut rng = SimRng::seed_from_u64(7);
//! let chi = PureState::from_bloch_angles(1.2, 0.3);
//! let out = teleport(&chi, &mut rng)?;
//! assert!(out.fidelity_to_input > 1.0 - 1e-9);
//! # Ok::<(), qinfo::QinfoError>(())
//! ```

pub mod error;
pub mod infotheory;
pub mod linalg;
pub mod protocols;
pub mod qkd;
pub mod qstate;
pub mod random;
pub mod rng;

pub use error::{QinfoError, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/protocols.md")]
    mod protocols {}
    #[doc = include_str!("../../../book/src/tomography.md")]
    mod tomography {}
    #[doc = include_str!("../../../book/src/bb84.md")]
    mod bb84 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
