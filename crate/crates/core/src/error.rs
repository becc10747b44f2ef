// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Hypotheses of the canonical decomposition that an input can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Legendrian,
    Effective,
    Orthogonal,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Hypothesis::Legendrian => "legendrian",
            Hypothesis::Effective => "effective",
            Hypothesis::Orthogonal => "orthogonal",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("structure tensor is not antisymmetric: |c[{i}][{j}][{k}] + c[{j}][{i}][{k}]| = {residual:e}")]
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },

    #[error("basis change is singular or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("operator is not an involution: |s^2 - I| = {residual:e}")]
    NotInvolutive { residual: f64 },

    #[error("operator is not a Lie algebra automorphism: residual {residual:e}")]
    NotAutomorphism { residual: f64 },

    #[error("involution equals the identity; a symmetric Lie algebra needs s != Id")]
    TrivialInvolution,

    #[error("invalid inner product: {0}")]
    InvalidInner(String),

    #[error("bilinear form is numerically singular (reciprocal condition {margin:e})")]
    SingularForm { margin: f64 },

    #[error(
        "Killing form of h is degenerate (rank {rank} of {dim}); the J operator needs a semisimple h"
    )]
    DegenerateKilling { rank: usize, dim: usize },

    #[error("hypothesis '{hypothesis}' of the decomposition theorem fails: {detail}")]
    Hypothesis {
        hypothesis: Hypothesis,
        detail: String,
    },

    #[error("subspace is not an ideal: closure residual {residual:e} ({what})")]
    NotAnIdeal { what: String, residual: f64 },

    #[error("{what} residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge {
        what: String,
        residual: f64,
        tol: f64,
    },

    #[error("group element is numerically singular")]
    SingularElement,

    #[error("rank decision for {what} is ambiguous: singular value {value:e} is near the threshold {threshold:e}")]
    AmbiguousRank {
        what: String,
        value: f64,
        threshold: f64,
    },

    #[error("operation needs the {expected} case, got {found}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },

    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
