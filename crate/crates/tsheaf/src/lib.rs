//! Command-line tooling around `tsheaf-core`: JSON spec files, result
//! reports, the cross-theory comparison and the diffusion simulator.

pub mod cli;
pub mod compare;
pub mod error;
pub mod report;
pub mod sim;
pub mod spec;

pub use error::{ToolError, ToolResult};
