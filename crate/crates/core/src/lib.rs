//! Ising-interaction graph states and the geometric measure of entanglement
//! of a single spin with the rest of the system.
//!
//! The numeric types are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the tolerances in the
//! test suites assume.

pub mod calibration;
pub mod circuit;
pub mod entanglement;
pub mod error;
pub mod gate;
pub mod graph;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use calibration::CalibrationData;
pub use circuit::{
    choose_orientation, measurement_prelude, synthesize_edge, synthesize_graph_circuit, Circuit,
    EdgeOrientation,
};
pub use entanglement::{
    analytic_entanglement, analytic_estimate, entanglement_from_bloch, exact_entanglement,
    exact_entanglement_all, exact_entanglement_with_cap, graph_state, BlochVector,
    EntanglementEstimate, Method,
};
pub use error::{Error, Result};
pub use gate::Gate;
pub use graph::{Graph, GraphFormat, Preset};
pub use sampling::{
    apply_depolarizing_noise, corrupt_readout, derive_seed, estimate_entanglement_shots,
    estimate_entanglement_shots_with, estimate_mean_z, sample_z, MeanEstimate, ShotOptions,
    ShotResult, DEFAULT_SHOTS,
};
pub use scalar::Real;
pub use state::{Axis, StateVector, DEFAULT_MAX_QUBITS};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type Gate64 = Gate<f64>;
pub type Circuit64 = Circuit<f64>;
pub type BlochVector64 = BlochVector<f64>;
pub type Estimate64 = EntanglementEstimate<f64>;
