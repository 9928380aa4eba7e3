//! Std companion to `circhad-core`: the `circhad` command, MatrixMarket
//! system files, JSON certificates and reports, and rayon-parallel drivers
//! whose results do not depend on the thread count.

pub mod app;
pub mod cert;
pub mod error;
pub mod mtx;
pub mod report;

pub use app::{run, Cli};
pub use error::{CliError, CliResult};
