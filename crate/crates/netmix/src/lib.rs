//! Minimum-cost linear network mixing for general connections on DAGs.
//!
//! Terminals may demand arbitrary subsets of the flows injected at the
//! sources. A *mixing design* declares, per edge and per parallel slot, which
//! flows are allowed to appear in the coded stream on that slot, without
//! committing to field coefficients. This crate
//!
//! * models and validates instances ([`netmodel`]),
//! * searches for feasible designs either combinatorially, by a decentralized
//!   probabilistic constraint solver ([`mixing`], [`cfl`]), or by a penalized
//!   continuous relaxation ([`relax`]),
//! * prices designs by convex flow optimization with a dual-decomposition
//!   solver certified against a from-scratch simplex ([`flowopt`]),
//! * turns feasible designs into explicit codes over prime fields and checks
//!   decodability at every terminal ([`coderealize`]),
//! * and cross-checks everything against exhaustive enumeration on small
//!   instances ([`oracle`]).
//!
//! The [`pipeline`] module ties the pieces into end-to-end runs and the
//! baselines used for comparison. Data-parallel inner loops (enumeration,
//! multi-starts, solve attempts, per-edge subproblems) run on rayon when the
//! default `parallel` feature is enabled and fall back to sequential
//! execution otherwise; results are identical either way.

pub mod cfl;
pub mod coderealize;
pub mod exec;
pub mod fixtures;
pub mod flowopt;
pub mod gf;
pub mod mixing;
pub mod netmodel;
pub mod oracle;
pub mod pipeline;
pub mod relax;

use thiserror::Error;

/// Crate-level error type for fallible operations.
#[derive(Debug, Error)]
pub enum NetmixError {
    #[error("format error: {0}")]
    Format(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}
