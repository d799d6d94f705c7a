//! Procrustean filters: tracing, determinization, output simulation,
//! exact minimization and the hardness reductions around them.

pub mod dot;
pub mod error;
pub mod families;
pub mod filter;
pub mod format;
pub mod minimize;
pub mod nfa;
pub mod product;
pub mod random;
pub mod reductions;

pub use error::{Error, Result};
pub use filter::{Filter, Output, TraceResult};
pub use format::{FilterDesc, NfaDesc};
pub use nfa::Nfa;
pub use product::{output_simulates, SimulationVerdict};
