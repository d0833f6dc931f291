use thiserror::Error;

/// Errors raised by the stochastic-computing primitives and tooling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScError {
    #[error("bitstream length must be at least 1")]
    EmptyStream,
    #[error("bitstream length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid bitstream character {ch:?} at offset {offset}")]
    BadChar { ch: char, offset: usize },
    #[error("operand width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u32, right: u32 },
    #[error("operand width {0} outside the supported range 1..=16")]
    BadWidth(u32),
    #[error("value {value} does not fit in {width} bits")]
    OutOfRange { value: u64, width: u32 },
    #[error("unipolar value {num}/{den} is not a probability")]
    NotAProbability { num: u128, den: u128 },
    #[error("correlation encoder needs at least 2 operand bits, got {0}")]
    EncoderWidth(u32),
    #[error("LFSR state must be nonzero")]
    ZeroLfsrState,
    #[error("invalid LFSR configuration: {0}")]
    BadLfsr(String),
    #[error("Gaines multiplier needs decorrelated generators (identical seed and taps)")]
    CorrelatedGenerators,
    #[error("Jenson truncation length {len} outside 1..={max}")]
    BadTruncation { len: u64, max: u64 },
    #[error("{0} requires at least {1} record(s)")]
    TooFewRecords(&'static str, usize),
    #[error("bucket count must be at least 1")]
    ZeroBuckets,
    #[error("exhaustive sweep at B={width} needs {pairs} pairs, above the cap of {cap}")]
    SweepTooLarge { width: u32, pairs: u64, cap: u64 },
    #[error("gate library has no entry for {0}")]
    MissingGate(&'static str),
    #[error("invalid gate library: {0}")]
    BadGateLibrary(String),
    #[error("comparison needs at least 2 reports")]
    TooFewReports,
}

pub type Result<T> = std::result::Result<T, ScError>;
