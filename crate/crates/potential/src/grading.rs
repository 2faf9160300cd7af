//! Final-answer extraction and grading against gold answers.

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::types::AnswerKind;

/// Which rule produced an extracted answer. Recorded per result so
/// downstream filtering can distinguish explicit markers from fallbacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionMethod {
    Boxed,
    FinalAnswerPhrase,
    LastInteger,
    ChoiceLetter,
    None,
}

impl ExtractionMethod {
    /// True for markers that state an answer explicitly, as opposed to the
    /// bare last-integer / last-letter fallbacks.
    pub fn is_explicit(self) -> bool {
        matches!(self, Self::Boxed | Self::FinalAnswerPhrase)
    }
}

/// An extracted answer with the byte span of the marker that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    /// Normalized answer value.
    pub value: String,
    pub method: ExtractionMethod,
    /// Byte span from marker start to the end of the matched value.
    pub span: (usize, usize),
}

/// Outcome of grading one completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeResult {
    pub extracted: Option<String>,
    pub correct: bool,
    pub extraction_method: ExtractionMethod,
}

static PHRASE_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)\b(?:final\s+answer|answer)\s*(?:is|:|=)\s*").unwrap());
static INTEGER_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"-?\d{1,3}(?:,\d{3})+|-?\d+").unwrap());
static CHOICE_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"[A-Da-d]").unwrap());

/// Normalizes an answer string for comparison under the given kind.
pub fn normalize_answer(s: &str, kind: AnswerKind) -> String {
    match kind {
        AnswerKind::Integer => match parse_integer(s) {
            Some(v) => v.to_string(),
            None => s.trim().to_string(),
        },
        AnswerKind::ExactString => s.trim().to_lowercase(),
        AnswerKind::MultipleChoice => s.trim().to_uppercase(),
    }
}

/// Canonical integer parse: tolerates whitespace, a sign, thousands commas,
/// dollar signs, and leading zeros.
pub fn parse_integer(s: &str) -> Option<i128> {
    let cleaned: String = s
        .trim()
        .chars()
        .filter(|c| !matches!(c, ',' | '$') && !c.is_whitespace())
        .collect();
    let cleaned = cleaned.strip_prefix('+').unwrap_or(&cleaned);
    if cleaned.is_empty() {
        return None;
    }
    cleaned.parse::<i128>().ok()
}

/// Extracts a final answer from completion text.
///
/// Precedence: the last `\boxed{...}` expression, then the last explicit
/// final-answer phrase, then the kind-specific fallback (last standalone
/// integer for integer answers, last standalone choice letter for
/// multiple choice). Returns `None` when nothing matches.
pub fn extract_answer(text: &str, kind: AnswerKind) -> Option<Extraction> {
    if let Some(e) = extract_boxed(text, kind) {
        return Some(e);
    }
    if let Some(e) = extract_phrase(text, kind) {
        return Some(e);
    }
    match kind {
        AnswerKind::Integer => standalone_integers(text).last().map(|&(s, e)| Extraction {
            value: normalize_answer(&text[s..e], kind),
            method: ExtractionMethod::LastInteger,
            span: (s, e),
        }),
        AnswerKind::MultipleChoice => standalone_choices(text).last().map(|&(s, e)| Extraction {
            value: normalize_answer(&text[s..e], kind),
            method: ExtractionMethod::ChoiceLetter,
            span: (s, e),
        }),
        AnswerKind::ExactString => None,
    }
}

/// Compares an extracted answer against gold. Absent answers grade false;
/// an unparsable integer grades false rather than erroring.
pub fn grade(extracted: Option<&str>, gold: &str, kind: AnswerKind) -> bool {
    let Some(extracted) = extracted else {
        return false;
    };
    match kind {
        AnswerKind::Integer => match (parse_integer(extracted), parse_integer(gold)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        AnswerKind::ExactString => {
            normalize_answer(extracted, kind) == normalize_answer(gold, kind)
        }
        AnswerKind::MultipleChoice => {
            normalize_answer(extracted, kind) == normalize_answer(gold, kind)
        }
    }
}

/// Extraction plus grading in one step.
pub fn grade_completion(text: &str, gold: &str, kind: AnswerKind) -> GradeResult {
    match extract_answer(text, kind) {
        Some(extraction) => {
            let correct = grade(Some(&extraction.value), gold, kind);
            GradeResult {
                extracted: Some(extraction.value),
                correct,
                extraction_method: extraction.method,
            }
        }
        None => GradeResult {
            extracted: None,
            correct: false,
            extraction_method: ExtractionMethod::None,
        },
    }
}

fn extract_boxed(text: &str, kind: AnswerKind) -> Option<Extraction> {
    // Models restate intermediate boxed values; the last one is the answer.
    let mut search_end = text.len();
    while let Some(rel) = text[..search_end].rfind("\\boxed{") {
        let open = rel + "\\boxed{".len();
        let mut depth = 1usize;
        let mut close = None;
        for (i, c) in text[open..].char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(open + i);
                        break;
                    }
                }
                _ => {}
            }
        }
        if let Some(close) = close {
            let inner = text[open..close].trim();
            if !inner.is_empty() {
                return Some(Extraction {
                    value: normalize_answer(inner, kind),
                    method: ExtractionMethod::Boxed,
                    span: (rel, close + 1),
                });
            }
        }
        search_end = rel;
    }
    None
}

fn extract_phrase(text: &str, kind: AnswerKind) -> Option<Extraction> {
    let matches: Vec<_> = PHRASE_RE.find_iter(text).collect();
    for m in matches.iter().rev() {
        let region_start = m.end();
        let region_end = region_start + sentence_end(&text[region_start..]);
        let region = &text[region_start..region_end];
        let narrowed = match kind {
            AnswerKind::Integer => standalone_integers(region).first().copied(),
            AnswerKind::MultipleChoice => standalone_choices(region).first().copied(),
            AnswerKind::ExactString => {
                let trimmed = region.trim().trim_matches(|c| matches!(c, '*' | '`' | '"' | '$'));
                if trimmed.is_empty() {
                    None
                } else {
                    let s = region_start + region.find(trimmed).unwrap_or(0);
                    Some((s, s + trimmed.len()))
                }
            }
        };
        if let Some((s, e)) = narrowed {
            return Some(Extraction {
                value: normalize_answer(&text[region_start + s - region_start..][..e - s], kind),
                method: ExtractionMethod::FinalAnswerPhrase,
                span: (m.start(), region_start + (e - region_start) - (s - s)),
            });
        }
    }
    None
}

/// Offset of the end of the current sentence within `tail` (exclusive of
/// the terminator when it is a period that could continue a number).
fn sentence_end(tail: &str) -> usize {
    for (i, c) in tail.char_indices() {
        match c {
            '\n' | '!' | '?' | ';' => return i,
            '.' => {
                // Keep decimal points inside the region.
                let next_is_digit = tail[i + 1..].chars().next().is_some_and(|n| n.is_ascii_digit());
                if !next_is_digit {
                    return i;
                }
            }
            _ => {}
        }
    }
    tail.len()
}

/// Byte spans of integers not glued to surrounding identifiers or decimals.
fn standalone_integers(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in INTEGER_RE.find_iter(text) {
        let (mut start, end) = (m.start(), m.end());
        if text[start..].starts_with('-') {
            // A minus glued to a preceding value is subtraction, not a sign.
            if prev_char(text, start).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                start += 1;
            }
        }
        if is_glued_left(text, start) || is_glued_right(text, end) {
            continue;
        }
        out.push((start, end));
    }
    out
}

fn standalone_choices(text: &str) -> Vec<(usize, usize)> {
    CHOICE_RE
        .find_iter(text)
        .filter(|m| {
            let left_ok = !prev_char(text, m.start())
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\\');
            let right_ok = !text[m.end()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_');
            left_ok && right_ok
        })
        .map(|m| (m.start(), m.end()))
        .collect()
}

fn prev_char(text: &str, pos: usize) -> Option<char> {
    text[..pos].chars().next_back()
}

fn is_glued_left(text: &str, start: usize) -> bool {
    match prev_char(text, start) {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => true,
        Some('.') | Some(',') => {
            prev_char(text, start - 1).is_some_and(|c| c.is_ascii_digit())
        }
        _ => false,
    }
}

fn is_glued_right(text: &str, end: usize) -> bool {
    let mut rest = text[end..].chars();
    match rest.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => true,
        Some('.') | Some(',') => rest.next().is_some_and(|c| c.is_ascii_digit()),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boxed_answer_is_extracted() {
        let e = extract_answer("so the answer is \\boxed{513}", AnswerKind::Integer).unwrap();
        assert_eq!(e.value, "513");
        assert_eq!(e.method, ExtractionMethod::Boxed);
    }

    #[test]
    fn last_boxed_wins_and_nested_braces_survive() {
        let e = extract_answer(
            "first \\boxed{1}, corrected to \\boxed{2}",
            AnswerKind::Integer,
        )
        .unwrap();
        assert_eq!(e.value, "2");

        let e = extract_answer("\\boxed{\\frac{1}{2}}", AnswerKind::ExactString).unwrap();
        assert_eq!(e.value, "\\frac{1}{2}");
    }

    #[test]
    fn phrase_with_filler_word_yields_integer() {
        let e =
            extract_answer("long derivation... the answer is likely 80.", AnswerKind::Integer)
                .unwrap();
        assert_eq!(e.value, "80");
        assert_eq!(e.method, ExtractionMethod::FinalAnswerPhrase);
    }

    #[test]
    fn final_answer_colon_form() {
        let e = extract_answer("Final answer: 42", AnswerKind::Integer).unwrap();
        assert_eq!(e.value, "42");
        assert_eq!(e.method, ExtractionMethod::FinalAnswerPhrase);
    }

    #[test]
    fn no_digits_extracts_nothing() {
        assert!(extract_answer("no digits here", AnswerKind::Integer).is_none());
    }

    #[test]
    fn last_standalone_integer_fallback() {
        let e = extract_answer("we get 10 + 20 = 30", AnswerKind::Integer).unwrap();
        assert_eq!(e.value, "30");
        assert_eq!(e.method, ExtractionMethod::LastInteger);
    }

    #[test]
    fn decimals_and_identifiers_are_not_standalone() {
        let spans = standalone_integers("x80 and 3.14 but 7 yes");
        let values: Vec<_> = spans
            .iter()
            .map(|&(s, e)| &"x80 and 3.14 but 7 yes"[s..e])
            .collect();
        assert_eq!(values, vec!["7"]);
    }

    #[test]
    fn sentence_final_integer_is_standalone() {
        let text = "the total is 80.";
        let spans = standalone_integers(text);
        assert_eq!(spans.len(), 1);
        assert_eq!(&text[spans[0].0..spans[0].1], "80");
    }

    #[test]
    fn choice_letter_extraction() {
        let e = extract_answer("therefore (C) is right", AnswerKind::MultipleChoice).unwrap();
        assert_eq!(e.value, "C");
        let e = extract_answer("maybe B... final answer: d", AnswerKind::MultipleChoice).unwrap();
        assert_eq!(e.value, "D");
        assert_eq!(e.method, ExtractionMethod::FinalAnswerPhrase);
    }

    #[test]
    fn integer_grading_normalizes_leading_zeros_and_signs() {
        assert!(grade(Some("080"), "80", AnswerKind::Integer));
        // AIME answers are 0-999 and often zero-padded; parse equality is
        // the oracle: 033 and 33 parse to the same integer.
        assert_eq!(parse_integer("033"), parse_integer("33"));
        assert!(grade(Some("033"), "33", AnswerKind::Integer));
        assert!(grade(Some("+5"), "5", AnswerKind::Integer));
        assert!(grade(Some("-0"), "0", AnswerKind::Integer));
        assert!(!grade(Some("81"), "80", AnswerKind::Integer));
    }

    #[test]
    fn absent_and_unparsable_grade_false() {
        assert!(!grade(None, "80", AnswerKind::Integer));
        assert!(!grade(Some("eighty"), "80", AnswerKind::Integer));
    }

    #[test]
    fn grade_completion_ties_extraction_to_correctness() {
        let r = grade_completion("the answer is \\boxed{7}", "7", AnswerKind::Integer);
        assert!(r.correct);
        assert_eq!(r.extracted.as_deref(), Some("7"));
        assert_eq!(r.extraction_method, ExtractionMethod::Boxed);

        let r = grade_completion("nothing here", "7", AnswerKind::Integer);
        assert!(!r.correct);
        assert!(r.extracted.is_none());
        assert_eq!(r.extraction_method, ExtractionMethod::None);
    }

    proptest! {
        #[test]
        fn exact_string_grading_is_reflexive(s in "[a-zA-Z0-9][a-zA-Z0-9 ]{0,20}") {
            prop_assert!(grade(Some(&s), &s, AnswerKind::ExactString));
        }

        #[test]
        fn integer_grade_matches_parse_equality(a in -10000i64..10000, b in -10000i64..10000, pad in 0usize..3) {
            let a_s = format!("{}{}", if a < 0 { "-" } else { "" }, format!("{:0width$}", a.abs(), width = pad + 1));
            let b_s = b.to_string();
            let expect = parse_integer(&a_s) == parse_integer(&b_s);
            prop_assert_eq!(grade(Some(&a_s), &b_s, AnswerKind::Integer), expect);
        }

        #[test]
        fn extraction_is_total(s in ".{0,200}") {
            // Must never panic, whatever the text.
            let _ = extract_answer(&s, AnswerKind::Integer);
            let _ = extract_answer(&s, AnswerKind::ExactString);
            let _ = extract_answer(&s, AnswerKind::MultipleChoice);
        }
    }
}
