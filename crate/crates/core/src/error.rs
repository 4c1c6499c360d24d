use thiserror::Error;

/// Parameter record violations, one per invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("field dimensions must be positive (got {rows}x{cols})")]
    EmptyField { rows: usize, cols: usize },
    #[error("{name} must be positive and finite (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} out of range: {value} not in {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("surround must be broader: sigma_i ({sigma_i}) <= sigma_e ({sigma_e})")]
    SurroundNotBroader { sigma_e: f64, sigma_i: f64 },
    #[error("tau_slow ({tau_slow}) must exceed tau_fast ({tau_fast})")]
    FdsrTausInverted { tau_fast: f64, tau_slow: f64 },
    #[error("tau schedule inverted: tau_s_min ({min}) > tau_s_max ({max})")]
    TauScheduleInverted { min: f64, max: f64 },
    #[error("connections reach outside the field: n_con*d = {reach} >= min(rows, cols) = {limit}")]
    ConnectionsExceedField { reach: usize, limit: usize },
    #[error("spiking threshold unreachable: t_sp = {0} not in (0, 0.5)")]
    ThresholdUnreachable(f64),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

/// Errors raised while stepping the network or rendering stimuli.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("luminance value {value} at ({x}, {y}) outside [0, 255]")]
    LuminanceOutOfRange { x: usize, y: usize, value: f64 },
    #[error("frame index regression: got {got} after {last}")]
    FrameRegression { last: u64, got: u64 },
    #[error("frame {t} outside scene duration {duration}")]
    FrameOutOfRange { t: usize, duration: usize },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
