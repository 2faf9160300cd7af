//! Shared domain types: questions, sampling parameters, traces, curves, budgets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a question's final answer is compared against gold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerKind {
    Integer,
    ExactString,
    MultipleChoice,
}

/// A benchmark question: prompt plus normalized ground-truth answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub prompt: String,
    #[serde(rename = "answer")]
    pub gold_answer: String,
    pub answer_kind: AnswerKind,
}

impl Question {
    pub fn new(
        id: impl Into<String>,
        prompt: impl Into<String>,
        gold_answer: impl Into<String>,
        answer_kind: AnswerKind,
    ) -> Result<Self> {
        let q = Self {
            id: id.into(),
            prompt: prompt.into(),
            gold_answer: gold_answer.into(),
            answer_kind,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Invalid {
                what: "question",
                why: "id must be non-empty".into(),
            });
        }
        if self.gold_answer.is_empty() {
            return Err(Error::Invalid {
                what: "question",
                why: format!("{}: gold answer must be non-empty", self.id),
            });
        }
        if self.answer_kind == AnswerKind::MultipleChoice
            && !matches!(self.gold_answer.as_str(), "A" | "B" | "C" | "D")
        {
            return Err(Error::Invalid {
                what: "question",
                why: format!(
                    "{}: multiple-choice gold answer must be one of A-D, got {:?}",
                    self.id, self.gold_answer
                ),
            });
        }
        Ok(())
    }
}

/// Sampling configuration for rollout campaigns.
///
/// Defaults match the usual serving setup for reasoning evaluations:
/// temperature 0.6, top-p 0.95, a 32768-token total budget, and 128
/// rollouts per estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    pub temperature: f64,
    pub top_p: f64,
    /// Total token budget per run, prompt excluded. Generation for a
    /// conditioned run is capped at this minus the prefix length.
    pub max_total_tokens: u64,
    pub n_samples: u32,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        Self {
            temperature: 0.6,
            top_p: 0.95,
            max_total_tokens: 32_768,
            n_samples: 128,
            seed: 0,
        }
    }
}

impl SamplingParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(Error::Invalid {
                what: "sampling params",
                why: "n_samples must be >= 1".into(),
            });
        }
        if self.max_total_tokens < 1 {
            return Err(Error::Invalid {
                what: "sampling params",
                why: "max_total_tokens must be >= 1".into(),
            });
        }
        if !(self.temperature >= 0.0) {
            return Err(Error::Invalid {
                what: "sampling params",
                why: format!("temperature must be non-negative, got {}", self.temperature),
            });
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(Error::Invalid {
                what: "sampling params",
                why: format!("top_p must be in (0, 1], got {}", self.top_p),
            });
        }
        Ok(())
    }
}

/// One sampled chain of thought with its grading outcome.
///
/// `text` holds the reasoning only; the final answer lives in
/// `extracted_answer`. `chunk_boundaries` are byte offsets of interior
/// cut points (n_chunks - 1 of them), empty until the trace is chunked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub question_id: String,
    pub text: String,
    pub token_count: u64,
    #[serde(default)]
    pub chunk_boundaries: Vec<usize>,
    pub extracted_answer: Option<String>,
    pub correct: bool,
    pub provider_id: String,
    pub seed_used: u64,
}

impl Trace {
    pub fn validate(&self) -> Result<()> {
        let mut prev = 0usize;
        for &b in &self.chunk_boundaries {
            if b <= prev && !(prev == 0 && b == 0) {
                return Err(Error::Invalid {
                    what: "trace",
                    why: format!("chunk boundaries not strictly increasing: {:?}", self.chunk_boundaries),
                });
            }
            if b > self.text.len() {
                return Err(Error::Invalid {
                    what: "trace",
                    why: format!("boundary {b} past end of text ({} bytes)", self.text.len()),
                });
            }
            prev = b;
        }
        Ok(())
    }

    /// Stable identifier used to reference this trace from curves and reports.
    pub fn trace_ref(&self) -> String {
        format!("{}:{}:{}", self.question_id, self.provider_id, self.seed_used)
    }
}

/// One grid point of a potential or stability curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub prefix_fraction: f64,
    pub estimate: f64,
    /// Rollouts that actually contributed; the estimate is an exact
    /// multiple of 1/n_used. Zero for exact (enumerated) curves.
    pub n_used: u32,
}

/// Estimated (or exactly enumerated) success probability along a trace's
/// chunk grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub question_id: String,
    pub trace_ref: Option<String>,
    pub points: Vec<CurvePoint>,
    pub exact: bool,
}

impl PotentialCurve {
    pub fn validate(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for p in &self.points {
            if p.prefix_fraction <= prev {
                return Err(Error::Invalid {
                    what: "curve",
                    why: "prefix fractions must be strictly increasing".into(),
                });
            }
            prev = p.prefix_fraction;
            if !(0.0..=1.0).contains(&p.estimate) {
                return Err(Error::Invalid {
                    what: "curve",
                    why: format!("estimate {} outside [0, 1]", p.estimate),
                });
            }
            if !self.exact {
                if p.n_used == 0 {
                    return Err(Error::Invalid {
                        what: "curve",
                        why: "sampled curve point with n_used = 0".into(),
                    });
                }
                let scaled = p.estimate * f64::from(p.n_used);
                if (scaled - scaled.round()).abs() > 1e-9 {
                    return Err(Error::Invalid {
                        what: "curve",
                        why: format!("estimate {} is not a multiple of 1/{}", p.estimate, p.n_used),
                    });
                }
            }
        }
        Ok(())
    }

    /// The estimate at prefix fraction zero, when the curve carries it.
    pub fn empty_prefix_estimate(&self) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.prefix_fraction == 0.0)
            .map(|p| p.estimate)
    }
}

/// Stability curve: same grid as a potential curve, but graded against the
/// trace's own final answer instead of gold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCurve {
    pub question_id: String,
    pub trace_ref: Option<String>,
    pub target_answer: String,
    pub points: Vec<CurvePoint>,
    pub exact: bool,
}

impl StabilityCurve {
    pub fn as_curve(&self) -> PotentialCurve {
        PotentialCurve {
            question_id: self.question_id.clone(),
            trace_ref: self.trace_ref.clone(),
            points: self.points.clone(),
            exact: self.exact,
        }
    }
}

/// Token budget for a full potential-curve campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetEstimate {
    pub n_samples: u64,
    pub n_chunks: u64,
    pub per_run_tokens: u64,
    /// N * T * (n_chunks + 1) / 2, evaluated exactly.
    pub total_tokens: u64,
}

impl BudgetEstimate {
    /// The coarse N * n_chunks * T / 2 figure the exact total is usually
    /// quoted as; exact - approximate = N * T / 2.
    pub fn approximate_tokens(&self) -> u64 {
        (u128::from(self.n_samples) * u128::from(self.n_chunks) * u128::from(self.per_run_tokens)
            / 2) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn question_rejects_empty_id_and_gold() {
        assert!(Question::new("", "p", "7", AnswerKind::Integer).is_err());
        assert!(Question::new("q1", "p", "", AnswerKind::Integer).is_err());
        assert!(Question::new("q1", "p", "7", AnswerKind::Integer).is_ok());
    }

    #[test]
    fn multiple_choice_gold_must_be_a_letter() {
        assert!(Question::new("q1", "p", "E", AnswerKind::MultipleChoice).is_err());
        assert!(Question::new("q1", "p", "7", AnswerKind::MultipleChoice).is_err());
        assert!(Question::new("q1", "p", "C", AnswerKind::MultipleChoice).is_ok());
    }

    #[test]
    fn default_params_match_serving_defaults() {
        let p = SamplingParams::default();
        assert_eq!(p.temperature, 0.6);
        assert_eq!(p.top_p, 0.95);
        assert_eq!(p.max_total_tokens, 32_768);
        assert_eq!(p.n_samples, 128);
        p.validate().unwrap();
    }

    #[test]
    fn params_validation_bounds() {
        let mut p = SamplingParams::default();
        p.top_p = 0.0;
        assert!(p.validate().is_err());
        p.top_p = 1.0;
        assert!(p.validate().is_ok());
        p.temperature = -0.1;
        assert!(p.validate().is_err());
    }

    #[test]
    fn sampled_curve_estimates_must_be_rational_in_n_used() {
        let curve = PotentialCurve {
            question_id: "q".into(),
            trace_ref: None,
            points: vec![CurvePoint { prefix_fraction: 0.0, estimate: 0.333, n_used: 4 }],
            exact: false,
        };
        assert!(curve.validate().is_err());

        let curve = PotentialCurve {
            question_id: "q".into(),
            trace_ref: None,
            points: vec![CurvePoint { prefix_fraction: 0.0, estimate: 0.75, n_used: 4 }],
            exact: false,
        };
        curve.validate().unwrap();
    }

    #[test]
    fn answer_kind_serializes_kebab_case() {
        assert_eq!(
            serde_json::to_string(&AnswerKind::ExactString).unwrap(),
            "\"exact-string\""
        );
        assert_eq!(
            serde_json::to_string(&AnswerKind::MultipleChoice).unwrap(),
            "\"multiple-choice\""
        );
    }
}
