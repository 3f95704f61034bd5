use thiserror::Error;

/// Failures raised by the chain solver and the quantum-information measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("temperature must be finite and strictly positive, got {0}")]
    InvalidTemperature(f64),

    #[error("inverse temperature must be finite and non-negative, got {0}")]
    InvalidBeta(f64),

    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("Boltzmann exponent {exponent:.3} overflows f64; choose a lower energy reference")]
    Overflow { exponent: f64 },

    #[error("transfer matrix has degenerate eigenvalues (Λ+ = Λ- = {0})")]
    DegenerateSpectrum(f64),

    #[error("cell count must be at least {min}, got {got}")]
    TooFewCells { min: usize, got: usize },

    #[error("cell count {got} exceeds the enumeration limit of {max}")]
    TooManyCells { max: usize, got: usize },

    #[error("impurity cell index {r} outside 1..={n}")]
    CellIndex { r: usize, n: usize },

    #[error("input state angles out of range: theta = {theta}, phi = {phi}")]
    InputAngles { theta: f64, phi: f64 },

    #[error("density matrix rejected: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
