//! SL2 over the local fields `Q_p` and `F_p((t))` acting on their
//! Bruhat-Tits trees, with a valuation form of Jorgensen's inequality,
//! non-discreteness certificates and the equality-case geometry.

pub mod bttree;
pub mod convergence;
pub mod error;
pub mod jorgensen;
pub mod localfield;
pub mod sl2core;

pub use error::{Error, Result};
