//! Physical demonstrations built on the gate algebra.

mod fhn;
mod memristive;
mod neuron;
mod pendulum;

pub use fhn::{fields_to_poly, fields_to_state, simulate_fhn, Fields, RdConfig};
pub use memristive::{simulate_memristive, MemristiveSample};
pub use neuron::{
    gate_features, neuron_forward, perceptron_train, perceptron_train_features, Activation, GateInput, NeuronParams,
    TrainingReport, REAL_INPUT_TOL,
};
pub use pendulum::{
    normal_modes, pendulum_gate_table, pendulum_state, GateRow, PendulumParams, PendulumState, INSTABILITY_TOL,
};
