//! Edit-distance baselines: WER, PER, TER (with block shifts) and HTER.
//!
//! Rates are exact fractions. Counts use the error-view convention common in
//! MT evaluation: an *insertion* is a hypothesis word with no counterpart in the
//! reference, a *deletion* is a reference word missing from the hypothesis.

mod align;
mod ter;
mod tokenize;

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use align::{edit_distance, levenshtein};
pub use ter::{ter, ter_shifts, Shift};
pub use tokenize::{tokenize, TokenSequence, TokenizerConfig};

/// An exact non-negative rate.
pub type Rate = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("undefined rate: reference is empty")]
    EmptyReference,
    #[error("no references given")]
    NoReferences,
    #[error("reference {0} is empty")]
    EmptyReferenceAt(usize),
    #[error("trace does not replay: {0}")]
    BadTrace(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditCounts {
    pub matches: u64,
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub shifts: u64,
}

impl EditCounts {
    /// S + I + D + shifts.
    pub fn edits(&self) -> u64 {
        self.substitutions + self.insertions + self.deletions + self.shifts
    }
}

/// One step of an edit trace.
///
/// Shifts come first and rearrange the hypothesis. The remaining steps walk the
/// shifted hypothesis and the reference left to right; `hyp` indices refer to
/// the shifted hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    Match {
        hyp: usize,
        reference: usize,
    },
    Substitute {
        hyp: usize,
        reference: usize,
        token: String,
    },
    /// Hypothesis word absent from the reference; dropped on replay.
    Insertion {
        hyp: usize,
    },
    /// Reference word absent from the hypothesis; restored on replay.
    Deletion {
        reference: usize,
        token: String,
    },
    /// Move `len` words starting at `start` so they begin at `dest` in the
    /// sequence that remains after removing them.
    Shift {
        start: usize,
        len: usize,
        dest: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditTrace {
    pub ops: Vec<EditOp>,
}

impl EditTrace {
    /// Applies the trace to `hyp`, producing the reference it was computed against.
    pub fn replay(&self, hyp: &[String]) -> Result<Vec<String>, MetricError> {
        let mut cur = hyp.to_vec();
        let mut out = Vec::new();
        let (mut h, mut r) = (0usize, 0usize);
        let mut aligning = false;
        for op in &self.ops {
            match op {
                EditOp::Shift { start, len, dest } => {
                    if aligning {
                        return Err(bad("shift after alignment steps"));
                    }
                    cur = apply_shift(&cur, *start, *len, *dest)
                        .ok_or_else(|| bad(format!("shift {start}+{len}->{dest} out of range")))?;
                }
                EditOp::Match { hyp, reference } => {
                    aligning = true;
                    expect_pos(*hyp, h, *reference, r)?;
                    out.push(cur.get(*hyp).ok_or_else(|| bad("match past end"))?.clone());
                    h += 1;
                    r += 1;
                }
                EditOp::Substitute { hyp, reference, token } => {
                    aligning = true;
                    expect_pos(*hyp, h, *reference, r)?;
                    if *hyp >= cur.len() {
                        return Err(bad("substitution past end"));
                    }
                    out.push(token.clone());
                    h += 1;
                    r += 1;
                }
                EditOp::Insertion { hyp } => {
                    aligning = true;
                    if *hyp != h || *hyp >= cur.len() {
                        return Err(bad(format!("insertion at {hyp}, expected {h}")));
                    }
                    h += 1;
                }
                EditOp::Deletion { reference, token } => {
                    aligning = true;
                    if *reference != r {
                        return Err(bad(format!("deletion at {reference}, expected {r}")));
                    }
                    out.push(token.clone());
                    r += 1;
                }
            }
        }
        if h != cur.len() {
            return Err(bad(format!("{} hypothesis words left unconsumed", cur.len() - h)));
        }
        Ok(out)
    }

    pub fn shifts(&self) -> impl Iterator<Item = &EditOp> {
        self.ops.iter().filter(|op| matches!(op, EditOp::Shift { .. }))
    }
}

fn bad(msg: impl Into<String>) -> MetricError {
    MetricError::BadTrace(msg.into())
}

fn expect_pos(hyp: usize, h: usize, reference: usize, r: usize) -> Result<(), MetricError> {
    if hyp != h || reference != r {
        return Err(bad(format!("step at ({hyp},{reference}), expected ({h},{r})")));
    }
    Ok(())
}

/// Moves `seq[start..start+len]` so it begins at `dest` in the remainder.
pub fn apply_shift<T: Clone>(seq: &[T], start: usize, len: usize, dest: usize) -> Option<Vec<T>> {
    let end = start.checked_add(len)?;
    if len == 0 || end > seq.len() || dest > seq.len() - len {
        return None;
    }
    let mut rest: Vec<T> = Vec::with_capacity(seq.len());
    rest.extend_from_slice(&seq[..start]);
    rest.extend_from_slice(&seq[end..]);
    let mut out = Vec::with_capacity(seq.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&seq[start..end]);
    out.extend_from_slice(&rest[dest..]);
    Some(out)
}

/// Rate, counts and evidence for one scored hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditScore {
    pub rate: Rate,
    pub counts: EditCounts,
    pub trace: EditTrace,
    /// Index of the reference the counts and trace refer to.
    pub reference_index: usize,
}

/// Word error rate: Levenshtein edits over reference length. May exceed 1.
pub fn wer(hyp: &TokenSequence, reference: &TokenSequence) -> Result<EditScore, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let (counts, trace) = levenshtein(&hyp.tokens, &reference.tokens);
    Ok(EditScore {
        rate: Rate::new(counts.edits(), reference.len() as u64),
        counts,
        trace,
        reference_index: 0,
    })
}

/// Number of tokens shared by both sequences, counting duplicates as a multiset.
pub fn multiset_overlap(a: &[String], b: &[String]) -> u64 {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in a {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let mut shared = 0;
    for t in b {
        if let Some(c) = counts.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                shared += 1;
            }
        }
    }
    shared
}

/// Position-independent error rate:
/// `1 - (correct - max(0, |hyp| - |ref|)) / |ref|`.
pub fn per(hyp: &TokenSequence, reference: &TokenSequence) -> Result<Rate, MetricError> {
    Ok(Rate::new(per_errors(hyp, reference)?, reference.len() as u64))
}

/// Numerator of [`per`]: `|ref| - correct + max(0, |hyp| - |ref|)`.
pub fn per_errors(hyp: &TokenSequence, reference: &TokenSequence) -> Result<u64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let r = reference.len() as u64;
    let o = hyp.len() as u64;
    let correct = multiset_overlap(&hyp.tokens, &reference.tokens);
    Ok(r - correct + o.saturating_sub(r))
}

/// Human-targeted TER: TER against a post-edit of this very hypothesis.
pub fn hter(hyp: &TokenSequence, post_edited: &TokenSequence) -> Result<EditScore, MetricError> {
    ter(hyp, std::slice::from_ref(post_edited))
}

/// Renders a rate as a decimal with `places` digits, rounding half up.
pub fn format_decimal(rate: Rate, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = *rate.numer() as u128;
    let den = *rate.denom() as u128;
    let scaled = (num * scale * 2 + den) / (2 * den);
    let int = scaled / scale;
    if places == 0 {
        return int.to_string();
    }
    format!("{int}.{:0width$}", scaled % scale, width = places as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> TokenSequence {
        TokenSequence::from_tokens(s.split_whitespace())
    }

    #[test]
    fn wer_examples() {
        assert_eq!(wer(&seq("a b c"), &seq("a b c")).unwrap().rate, Rate::from_integer(0));
        let s = wer(&seq("a b x d"), &seq("a b c d")).unwrap();
        assert_eq!(s.rate, Rate::new(1, 4));
        assert_eq!(s.counts.substitutions, 1);
        let s = wer(&seq("a b c"), &seq("a")).unwrap();
        assert_eq!(s.rate, Rate::from_integer(2));
        assert_eq!(s.counts.insertions, 2);
        assert_eq!(s.counts.deletions, 0);
    }

    #[test]
    fn wer_empty_cases() {
        assert_eq!(wer(&seq("a"), &seq("")), Err(MetricError::EmptyReference));
        let s = wer(&seq(""), &seq("a b c")).unwrap();
        assert_eq!(s.counts.deletions, 3);
        assert_eq!(s.rate, Rate::from_integer(1));
    }

    #[test]
    fn per_examples() {
        assert_eq!(per(&seq("a b c"), &seq("a b c")).unwrap(), Rate::from_integer(0));
        assert_eq!(per(&seq("c b a"), &seq("a b c")).unwrap(), Rate::from_integer(0));
        assert_eq!(per(&seq("a b"), &seq("a b c")).unwrap(), Rate::new(1, 3));
        assert_eq!(per(&seq("a b b"), &seq("a a b")).unwrap(), Rate::new(1, 3));
        assert_eq!(per(&seq("a"), &seq("")), Err(MetricError::EmptyReference));
    }

    #[test]
    fn per_longer_hypothesis() {
        // correct = 2, excess = 2 -> 1 - 0/2 = 1
        assert_eq!(per(&seq("a b x y"), &seq("a b")).unwrap(), Rate::from_integer(1));
        // correct = 0, excess = 3 -> 1 - (0 - 3)/1 = 4
        assert_eq!(per(&seq("x y z w"), &seq("a")).unwrap(), Rate::from_integer(4));
    }

    #[test]
    fn hter_examples() {
        assert_eq!(hter(&seq("a b c"), &seq("a b c")).unwrap().rate, Rate::from_integer(0));
        assert_eq!(hter(&seq("a b c"), &seq("a x c")).unwrap().rate, Rate::new(1, 3));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(Rate::new(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(Rate::new(2, 3), 4), "0.6667");
        assert_eq!(format_decimal(Rate::from_integer(2), 1), "2.0");
        assert_eq!(format_decimal(Rate::new(1, 8), 2), "0.13");
        assert_eq!(format_decimal(Rate::new(7, 2), 0), "4");
    }

    #[test]
    fn shift_application() {
        let s: Vec<char> = "cdab".chars().collect();
        assert_eq!(apply_shift(&s, 2, 2, 0).unwrap(), "abcd".chars().collect::<Vec<_>>());
        assert_eq!(apply_shift(&s, 0, 1, 3).unwrap(), "dabc".chars().collect::<Vec<_>>());
        assert!(apply_shift(&s, 3, 2, 0).is_none());
        assert!(apply_shift(&s, 0, 2, 3).is_none());
        assert!(apply_shift(&s, 0, 0, 0).is_none());
    }

    #[test]
    fn replay_rejects_bad_traces() {
        let hyp: Vec<String> = vec!["a".into(), "b".into()];
        let short = EditTrace {
            ops: vec![EditOp::Match { hyp: 0, reference: 0 }],
        };
        assert!(short.replay(&hyp).is_err());
        let skipped = EditTrace {
            ops: vec![EditOp::Match { hyp: 1, reference: 0 }],
        };
        assert!(skipped.replay(&hyp).is_err());
        let late_shift = EditTrace {
            ops: vec![
                EditOp::Match { hyp: 0, reference: 0 },
                EditOp::Shift {
                    start: 0,
                    len: 1,
                    dest: 1,
                },
            ],
        };
        assert!(late_shift.replay(&hyp).is_err());
    }
}
