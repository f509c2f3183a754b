use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid atomic level index {0} (expected 0, 1 or 2)")]
    InvalidLevel(usize),
    #[error("invalid field mode index {0} (expected 0, 1 or 2)")]
    InvalidMode(usize),
    #[error("{excitations} excitations requested in an ensemble of {atoms} atoms")]
    ExcitationsExceedAtoms { excitations: u32, atoms: u32 },
    #[error("every ensemble needs at least one atom")]
    EmptyEnsemble,
    #[error("photon count {count} in mode {mode} exceeds the truncation n_max = {n_max}")]
    PhotonOverflow { mode: usize, count: u8, n_max: u8 },
    #[error("state spaces differ: {0}")]
    ShapeMismatch(String),
    #[error("label {0} does not belong to the state space")]
    LabelOutsideSpace(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("generator is not anti-Hermitian")]
    NotAntiHermitian,
    #[error("beamsplitter amplitudes violate c^2 + s^2 = 1 (got {0})")]
    SplitterNorm(f64),
    #[error("beamsplitter must act on two distinct modes")]
    SplitterModes,
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("invalid coupling parameters: {0}")]
    InvalidCoupling(String),
    #[error("series order {0} exceeds the supported maximum of 6")]
    SeriesOrder(usize),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
