//! Bayesian optimization with a posterior placed directly on the location of
//! the maximum of a noisy function.
//!
//! The model ([`posterior::PosteriorState`]) turns a kernel-regression estimate
//! of the mean function into a density over maximizers whose precision grows
//! with the number of distinct locations tested. Sampling from it with
//! Metropolis–Hastings ([`sampler`]) gives a Thompson-sampling optimizer
//! ([`runner`]), benchmarked against GP-UCB ([`gp`]) on the objectives in
//! [`objectives`].

// `!(a < b)` comparisons are deliberate: they treat NaN as a rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod gp;
pub mod kernel;
pub mod objectives;
pub mod posterior;
pub mod prior;
pub mod rng;
pub mod runner;
pub mod sampler;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use gp::{GpConfig, GpPosterior};
pub use kernel::{GramianStats, KernelSpec};
pub use objectives::Objective;
pub use posterior::PosteriorState;
pub use prior::{Center, PriorMean, PriorPrecision, PriorSpec};
pub use sampler::{ChainState, LogDensity, MhConfig};
