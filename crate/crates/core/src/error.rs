use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number to factor must be at least 2, got {0}")]
    NumberTooSmall(u64),

    #[error("trial factor must be at least 1")]
    ZeroTrial,

    #[error("exponent power must lie in 2..={max}, got {got}")]
    ExponentOutOfRange { got: u32, max: u32 },

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("flip angle must be finite and positive, got {0}")]
    InvalidFlipAngle(f64),

    #[error("pulse phase {0} is not finite")]
    NonFinitePhase(f64),

    #[error("matrix is not unitary (Frobenius deviation {0:e})")]
    NonUnitary(f64),

    #[error(
        "reference signal vanishes: total flip angle {total_angle} is a multiple of pi, \
         so the all-zero-phase sequence cannot normalise the estimate"
    )]
    VanishingReference { total_angle: f64 },

    #[error("invalid trial range [{l_min}, {l_max}] for N = {n}: need 2 <= l_min <= l_max <= N")]
    InvalidTrialRange { n: u64, l_min: u64, l_max: u64 },

    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),

    #[error("invalid f grid [{f_min}, {f_max}] with step {step}")]
    InvalidGrid { f_min: f64, f_max: f64, step: f64 },
}
