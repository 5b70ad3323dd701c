//! Parametrized noise channels: phase-covariant qubit noise, correlated
//! dephasing of two-species registers and bosonic photon loss.

mod bosonic;
mod correlated;
mod qubit;

pub use bosonic::{
    ecs_state, interferometer_family, loss_kraus, poisson_tail, two_mode_loss_kraus, EcsSpec,
    InterferometerSpec, TRUNCATION_TAIL_TOL,
};
pub use correlated::CorrelatedDephasing;
pub use qubit::{
    hamiltonian_family, named_noise, params_at, phase_covariant_derivative, phase_covariant_family,
    phase_covariant_superop, rotation_family, rotation_superop, rotation_superop_derivative,
    CoherenceLayout, ExpansionForm, NoiseKind, NoiseParams, RawParams, ShortTimeModel,
};
