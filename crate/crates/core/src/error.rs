use thiserror::Error;

pub type Result<T> = std::result::Result<T, HoloError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HoloError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree bound mismatch: expected {expected}, found {found}")]
    DegreeBoundMismatch { expected: u32, found: u32 },

    #[error("multi-index {index:?} exceeds the degree bound {max_degree}")]
    DegreeOverflow { index: Vec<u32>, max_degree: u32 },

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operation undefined on the zero state")]
    ZeroState,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not strictly first-order")]
    NotFirstOrder,

    #[error("{nodes} contour nodes are too few, at least {required} needed")]
    InsufficientNodes { nodes: usize, required: usize },

    #[error("sampled integrand does not decay at the rule endpoints (envelope {envelope:e})")]
    TruncatedTails { envelope: f64 },

    #[error("finite-difference order {0} unsupported, expected 1 or 2")]
    InvalidOrder(u32),

    #[error("Pochhammer pole: lower parameter {param} vanishes before order {n}")]
    Pole { param: f64, n: u32 },

    #[error("hypergeometric coefficient routes disagree: direct {direct}, inner product {via_inner_product}")]
    Reconciliation { direct: f64, via_inner_product: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("KL divergence undefined: q vanishes where p is positive at index {index}")]
    SupportViolation { index: usize },

    #[error("negative squared frequency {eigenvalue:e}: unstable mode")]
    Instability { eigenvalue: f64 },

    #[error("simulation diverged at step {step}")]
    Divergence { step: usize },

    #[error("expectation of input {index} has imaginary part {imag:e}")]
    ComplexInput { index: usize, imag: f64 },

    #[error("time scales must be strictly increasing (layer {index})")]
    NonMonotonicTimeScale { index: usize },

    #[error("unknown gate '{0}'")]
    UnknownGate(String),

    #[error("instruction L{instruction}: {source}")]
    Instruction {
        instruction: u8,
        #[source]
        source: Box<HoloError>,
    },
}

impl HoloError {
    pub(crate) fn at_instruction(self, instruction: u8) -> Self {
        HoloError::Instruction {
            instruction,
            source: Box::new(self),
        }
    }
}
