//! Whitespace tokenization and chunk-grid construction.
//!
//! Traces are split into near-equal token-count chunks. Tokens are maximal
//! non-whitespace runs: exact for the toy provider (one symbol per token)
//! and the standing approximation for HTTP providers, which report counts
//! but not offsets. Boundaries are byte offsets at token ends, so cutting
//! never splits a token and concatenating the chunks reproduces the text.

use crate::error::{Error, Result};
use crate::types::Trace;

/// Byte spans of whitespace-delimited tokens.
pub fn token_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                spans.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Interior cut points splitting `text` into `n_chunks` parts whose token
/// counts differ by at most one. Returns n_chunks - 1 offsets, each at the
/// end of a token.
pub fn chunk_boundaries(text: &str, n_chunks: usize) -> Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Err(Error::EmptyTrace);
    }
    if n_chunks < 1 {
        return Err(Error::Invalid {
            what: "chunking",
            why: "n_chunks must be >= 1".into(),
        });
    }
    let spans = token_spans(text);
    let tokens = spans.len();
    if n_chunks > tokens {
        return Err(Error::TooManyChunks {
            requested: n_chunks,
            tokens,
        });
    }
    let mut boundaries = Vec::with_capacity(n_chunks - 1);
    for i in 1..n_chunks {
        let split = i * tokens / n_chunks;
        boundaries.push(spans[split - 1].1);
    }
    Ok(boundaries)
}

/// Returns a copy of `trace` with `chunk_boundaries` populated for an
/// `n_chunks`-part grid.
pub fn chunk_trace(trace: &Trace, n_chunks: usize) -> Result<Trace> {
    let boundaries = chunk_boundaries(&trace.text, n_chunks)?;
    let mut chunked = trace.clone();
    chunked.chunk_boundaries = boundaries;
    Ok(chunked)
}

/// Number of chunks implied by a trace's boundaries.
pub fn chunk_count(trace: &Trace) -> usize {
    trace.chunk_boundaries.len() + 1
}

/// Prefix of a chunked trace at grid point `i` of `0..=n_chunks`:
/// empty at 0, the whole text at n_chunks.
pub fn prefix_at<'a>(trace: &'a Trace, i: usize) -> &'a str {
    let n_chunks = chunk_count(trace);
    if i == 0 {
        ""
    } else if i >= n_chunks {
        &trace.text
    } else {
        &trace.text[..trace.chunk_boundaries[i - 1]]
    }
}

/// The chunk texts themselves; concatenating them yields the original text.
pub fn chunks<'a>(trace: &'a Trace) -> Vec<&'a str> {
    let mut out = Vec::with_capacity(trace.chunk_boundaries.len() + 1);
    let mut start = 0;
    for &b in &trace.chunk_boundaries {
        out.push(&trace.text[start..b]);
        start = b;
    }
    out.push(&trace.text[start..]);
    out
}

/// Cuts `text` at `fraction` of its tokens (rounded to the nearest token
/// edge). `0.0` yields the empty string, `1.0` the full text.
pub fn cut_at_fraction(text: &str, fraction: f64) -> &str {
    let spans = token_spans(text);
    if spans.is_empty() {
        return "";
    }
    let n_cut = (fraction * spans.len() as f64).round() as usize;
    if n_cut == 0 {
        ""
    } else if n_cut >= spans.len() {
        text
    } else {
        &text[..spans[n_cut - 1].1]
    }
}
