//! Correlation dynamics of two-qubit Bell-diagonal states under local
//! flip channels, with and without a local filtering operation.

// 4x4 index loops read closer to the math than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod channels;
pub mod dynamics;
pub mod error;
pub mod filtering;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod scenario;
pub mod states;
pub mod verify;

pub use channels::ChannelKind;
pub use error::{Error, Result};
pub use filtering::FilterSetting;
pub use states::{BellDiagonalParams, TwoQubitState};
