use std::collections::HashMap;

use super::align::{edit_distance, levenshtein, matched_mask};
use super::{apply_shift, EditCounts, EditOp, EditScore, EditTrace, MetricError, Rate, TokenSequence};

/// A block move chosen by the greedy search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shift {
    pub start: usize,
    pub len: usize,
    pub dest: usize,
}

/// Translation edit rate against one or more references.
///
/// For each reference, block shifts are applied greedily (see [`ter_shifts`])
/// and the remaining Levenshtein edits are added. The reference with the fewest
/// edits is selected (first on ties); the rate divides by the mean reference
/// length.
pub fn ter(hyp: &TokenSequence, references: &[TokenSequence]) -> Result<EditScore, MetricError> {
    if references.is_empty() {
        return Err(MetricError::NoReferences);
    }
    if let Some(i) = references.iter().position(|r| r.is_empty()) {
        return Err(MetricError::EmptyReferenceAt(i));
    }
    let mut best: Option<(usize, EditCounts, EditTrace)> = None;
    for (index, reference) in references.iter().enumerate() {
        let (counts, trace) = ter_single(&hyp.tokens, &reference.tokens);
        if best.as_ref().is_none_or(|(_, b, _)| counts.edits() < b.edits()) {
            best = Some((index, counts, trace));
        }
    }
    let (reference_index, counts, trace) = best.expect("at least one reference");
    let total_len: u64 = references.iter().map(|r| r.len() as u64).sum();
    Ok(EditScore {
        // edits / (total_len / k)
        rate: Rate::new(counts.edits() * references.len() as u64, total_len),
        counts,
        trace,
        reference_index,
    })
}

fn ter_single(hyp: &[String], reference: &[String]) -> (EditCounts, EditTrace) {
    let (shifts, shifted) = ter_shifts(hyp, reference);
    let (mut counts, trace) = levenshtein(&shifted, reference);
    counts.shifts = shifts.len() as u64;
    let mut ops: Vec<EditOp> = shifts
        .into_iter()
        .map(|s| EditOp::Shift {
            start: s.start,
            len: s.len,
            dest: s.dest,
        })
        .collect();
    ops.extend(trace.ops);
    (counts, EditTrace { ops })
}

/// Greedy block-shift search.
///
/// Each round evaluates every candidate shift and applies the one that lowers
/// `shifts + edit distance` the most. A candidate block must occur verbatim
/// somewhere in the reference and must contain at least one word the current
/// alignment leaves unmatched. Ties go to the shortest block, then the leftmost
/// start, then the leftmost destination. Stops when no shift helps.
///
/// Returns the shifts in application order and the rearranged hypothesis.
pub fn ter_shifts(hyp: &[String], reference: &[String]) -> (Vec<Shift>, Vec<String>) {
    let mut vocab: HashMap<&str, u32> = HashMap::new();
    let mut ids = [Vec::with_capacity(hyp.len()), Vec::with_capacity(reference.len())];
    for (side, tokens) in [hyp, reference].into_iter().enumerate() {
        for t in tokens {
            let next = vocab.len() as u32;
            ids[side].push(*vocab.entry(t.as_str()).or_insert(next));
        }
    }
    let [mut cur, refs] = ids;
    let mut words: Vec<String> = hyp.to_vec();
    let mut shifts = Vec::new();

    loop {
        let base = edit_distance(&cur, &refs);
        if base == 0 {
            break;
        }
        let Some(shift) = best_shift(&cur, &refs, base) else {
            break;
        };
        cur = apply_shift(&cur, shift.start, shift.len, shift.dest).expect("candidate in range");
        words = apply_shift(&words, shift.start, shift.len, shift.dest).expect("candidate in range");
        shifts.push(shift);
    }
    (shifts, words)
}

fn best_shift(cur: &[u32], reference: &[u32], base: u64) -> Option<Shift> {
    let n = cur.len();
    let matched = matched_mask(cur, reference);
    // (gain, len, start, dest); larger gain wins, then smaller len/start/dest
    let mut best: Option<(u64, Shift)> = None;
    for start in 0..n {
        for len in 1..=n - start {
            let block = &cur[start..start + len];
            if !occurs_in(block, reference) {
                // every longer block from this start contains this one
                break;
            }
            if matched[start..start + len].iter().all(|m| *m) {
                continue;
            }
            for dest in 0..=n - len {
                if dest == start {
                    continue;
                }
                let moved = apply_shift(cur, start, len, dest).expect("in range");
                let dist = edit_distance(&moved, reference);
                // the shift itself costs one edit
                if dist + 1 >= base {
                    continue;
                }
                let gain = base - dist - 1;
                let candidate = Shift { start, len, dest };
                let better = match &best {
                    None => true,
                    Some((g, s)) => gain > *g || (gain == *g && (len, start, dest) < (s.len, s.start, s.dest)),
                };
                if better {
                    best = Some((gain, candidate));
                }
            }
        }
    }
    best.map(|(_, s)| s)
}

fn occurs_in(block: &[u32], haystack: &[u32]) -> bool {
    block.len() <= haystack.len() && haystack.windows(block.len()).any(|w| w == block)
}
