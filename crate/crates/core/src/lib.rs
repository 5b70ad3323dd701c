//! Saturable lower bound on the quantum Fisher information of parametrized
//! channels, computed from their Liouville-space matrix representations.

// NaN-rejecting range checks are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod channels;
pub mod cli;
pub mod error;
pub mod liouville;
pub mod metrology;
pub mod numerics;
pub mod qfi_oracle;
pub mod sampling;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
