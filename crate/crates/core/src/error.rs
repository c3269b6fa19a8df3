use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-binary value {value} at position {position}")]
    NonBinary { position: usize, value: u8 },

    #[error("slot index {index} outside 1..={phi}")]
    SlotIndexOutOfRange { index: usize, phi: usize },

    #[error("sequential slot counter must start at 1")]
    ZeroSlotCounter,

    #[error("invalid SNR: {0}")]
    InvalidSnr(String),

    #[error("invalid code rate {0}")]
    InvalidRate(f64),

    #[error("alist parse error at line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("stream of {len} bits (pad {pad}) is not a whole number of {slot}-bit slots")]
    MisalignedStream { len: usize, pad: usize, slot: usize },

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("target BER {target:e} is not bracketed by curve '{curve}'")]
    NotBracketed { target: f64, curve: String },

    #[error("analytic BER is only defined for uncoded transmission")]
    CodedAnalytic,

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
