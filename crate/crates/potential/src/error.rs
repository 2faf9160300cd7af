//! Crate-wide error type.

use crate::sampler::RolloutBatch;
use crate::types::PotentialCurve;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty trace")]
    EmptyTrace,

    #[error("too many chunks: requested {requested} chunks for {tokens} tokens")]
    TooManyChunks { requested: usize, tokens: usize },

    #[error("curve has {0} points, need at least 3")]
    CurveTooShort(usize),

    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },

    #[error("unknown question id: {0}")]
    UnknownQuestion(String),

    #[error("invalid toy fixture: {0}")]
    InvalidFixture(String),

    #[error("zero-probability prefix")]
    ZeroProbabilityPrefix,

    #[error("conditioning on null event")]
    ConditioningOnNullEvent,

    #[error("proposition vacuous: model has no correct path")]
    PropositionVacuous,

    #[error("expected potential to be non-decreasing at step {step}: {before} -> {after}")]
    MartingaleViolated { step: usize, before: f64, after: f64 },

    #[error("unstable target: trace has no extracted answer")]
    UnstableTarget,

    #[error("no qualifying traces")]
    NoQualifyingTraces,

    #[error("degraded batch: {failures}/{requested} rollouts failed")]
    DegradedBatch {
        failures: u32,
        requested: u32,
        batch: Box<RolloutBatch>,
    },

    #[error("degraded campaign: {degraded_points:?} curve points ran short of n_samples")]
    DegradedCampaign {
        curve: Box<PotentialCurve>,
        degraded_points: Vec<usize>,
    },

    #[error("question {question_id} has {available} samples, pass@{k} needs {k}")]
    NotEnoughSamples {
        question_id: String,
        available: usize,
        k: usize,
    },

    #[error("shape flags misaligned with outcomes for question {0}")]
    MisalignedFlags(String),

    #[error("token budget overflows a signed 64-bit count")]
    BudgetOverflow,

    #[error("transport error after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },

    #[error("provider request rejected (HTTP {status}): {body}")]
    Request { status: u16, body: String },

    #[error("provider returned a malformed response: {0}")]
    MalformedResponse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
