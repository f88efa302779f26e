//! Holomorphic logic gates.
//!
//! States are truncated power series in the Segal-Bargmann space and gates are
//! elements of the Weyl algebra acting on them by differentiation and
//! multiplication. On top of that algebra sit information measures over channel
//! ensembles, a handful of physical demonstrations (coupled pendulums,
//! memristive systems, FitzHugh-Nagumo reaction-diffusion, gate-fed neurons) and
//! the eight-instruction pattern pipeline with its time-ordered layer scheduler.

pub mod bargmann;
pub mod error;
pub mod gates;
pub mod holostate;
pub mod infotheory;
pub mod systems;
pub mod upl;

pub use num_complex::Complex64 as C64;

pub use bargmann::{BargmannSpace, QuadratureGrid, SampledFunction};
pub use error::{HoloError, Result};
pub use gates::{DiffOp, GateName, Normalization};
pub use holostate::{HoloPoly, MultiIndex, Partition};
pub use infotheory::{ChannelEnsemble, ProbVector};
pub use upl::{Classification, Layer, PatternRecord, Schedule, UplProgram};

/// Absolute tolerance used for coefficient-wise comparison of states and operators.
pub const COEFF_TOL: f64 = 1e-12;
