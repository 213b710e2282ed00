//! Exact integer computations around simplicial sets, the Dold-Kan correspondence,
//! shuffle and homotopy operators, bar and cobar constructions, and loop groups.

pub mod awez;
pub mod barcobar;
pub mod chain;
pub mod doldkan;
pub mod error;
pub mod loopgroup;
pub mod simplexcat;
pub mod sset;
pub mod szczarba;

pub use error::{Error, Result};
