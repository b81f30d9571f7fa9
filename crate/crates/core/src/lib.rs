//! Coherence and entanglement of qubits under pi-pulse dynamical decoupling.
//!
//! A qubit dephases through an Ohmic bosonic bath. Instantaneous pi pulses
//! flip the sign of the coupling; the resulting filter function weights the
//! bath spectrum in the decoherence exponent
//!
//! ```text
//! S(t) = exp(-2 * integral_0^omega_d J(w) (n(w) + 1/2) |f(w)|^2 dw)
//! ```
//!
//! `S(t)` multiplies the anti-diagonal coherence of a two-qubit X state,
//! which fixes the concurrence, and its power `S^(N/2)` gives the coherence
//! prefactor of an `N`-qubit GHZ state.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod coherence;
pub mod entanglement;
mod error;
pub mod numerics;
pub mod pulse_sequence;

pub use bath::{BathSpec, Spectrum};
pub use coherence::{CoherenceCurve, PhenomenologicalModel};
pub use entanglement::{DeathTime, GhzSpec, XState};
pub use error::{Error, Result};
pub use numerics::QuadratureSpec;
pub use pulse_sequence::{FilterValue, PulseSequence, SequenceKind};
