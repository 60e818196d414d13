//! Reproducible experiment harness over the nsgauss toolkit crates.
//!
//! Every experiment is described by an [`config::ExperimentConfig`] with
//! explicit seeds, hashed into a manifest; identical manifests reproduce
//! identical CSV artifacts byte for byte regardless of thread count. The
//! [`accept`] module packages the numerical acceptance criteria behind the
//! `nsgauss accept` subcommand.

pub mod accept;
pub mod checks;
pub mod config;
pub mod csvfmt;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod plotdata;

pub use config::{resolve_config, Experiment, ExperimentConfig, ResolvedConfig};
pub use error::{HarnessError, Result};
pub use manifest::RunManifest;
