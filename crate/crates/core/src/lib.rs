//! Opportunistic-bit link simulator.
//!
//! Each fixed-length bit-unit is split into a short leading pattern, carried
//! only by the index of the time slot it is sent in, and a payload that is
//! actually transmitted. Payloads wait in a falling-model storage until their
//! slot comes round; the slot stream is optionally LDPC coded, sent as BPSK
//! over AWGN, and the receiver rebuilds each unit from arrival position and
//! slot content.

pub mod analysis;
pub mod bitunit;
pub mod error;
pub mod falling_storage;
pub mod fec;
pub mod harness;
pub mod phy;
pub mod receiver;

pub use bitunit::{BitUnit, CbPayload, ObPattern, SchemeParams};
pub use error::{Error, Result};
pub use falling_storage::{FallingStorage, Frame};
pub use phy::{Scheme, SnrConvention, SnrSpec};
