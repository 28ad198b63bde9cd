use super::{EditCounts, EditOp, EditTrace};

/// Unit-cost Levenshtein distance between two sequences, in two rows of memory.
pub fn edit_distance<T: PartialEq>(hyp: &[T], reference: &[T]) -> u64 {
    let m = reference.len();
    let mut prev: Vec<u64> = (0..=m as u64).collect();
    let mut cur = vec![0u64; m + 1];
    for (i, h) in hyp.iter().enumerate() {
        cur[0] = i as u64 + 1;
        for (j, r) in reference.iter().enumerate() {
            let diag = prev[j] + u64::from(h != r);
            cur[j + 1] = diag.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Minimum-cost alignment of `hyp` against `reference` with its trace.
///
/// Ties in the backtrace prefer the diagonal step, then an insertion, then a
/// deletion, which keeps traces deterministic.
pub fn levenshtein(hyp: &[String], reference: &[String]) -> (EditCounts, EditTrace) {
    let (n, m) = (hyp.len(), reference.len());
    let width = m + 1;
    let mut d = vec![0u32; (n + 1) * width];
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j as u32;
    }
    for i in 1..=n {
        d[i * width] = i as u32;
        for j in 1..=m {
            let sub = d[(i - 1) * width + j - 1] + u32::from(hyp[i - 1] != reference[j - 1]);
            let ins = d[(i - 1) * width + j] + 1;
            let del = d[i * width + j - 1] + 1;
            d[i * width + j] = sub.min(ins).min(del);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let mut counts = EditCounts::default();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * width + j];
        if i > 0 && j > 0 {
            let same = hyp[i - 1] == reference[j - 1];
            if here == d[(i - 1) * width + j - 1] + u32::from(!same) {
                i -= 1;
                j -= 1;
                if same {
                    counts.matches += 1;
                    ops.push(EditOp::Match { hyp: i, reference: j });
                } else {
                    counts.substitutions += 1;
                    ops.push(EditOp::Substitute {
                        hyp: i,
                        reference: j,
                        token: reference[j].clone(),
                    });
                }
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * width + j] + 1 {
            i -= 1;
            counts.insertions += 1;
            ops.push(EditOp::Insertion { hyp: i });
        } else {
            j -= 1;
            counts.deletions += 1;
            ops.push(EditOp::Deletion {
                reference: j,
                token: reference[j].clone(),
            });
        }
    }
    ops.reverse();
    (counts, EditTrace { ops })
}

/// Marks the hypothesis positions that the minimum alignment pairs with an
/// identical reference word, using the same tie-breaking as [`levenshtein`].
pub(crate) fn matched_mask<T: PartialEq>(hyp: &[T], reference: &[T]) -> Vec<bool> {
    let (n, m) = (hyp.len(), reference.len());
    let width = m + 1;
    let mut d = vec![0u32; (n + 1) * width];
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j as u32;
    }
    for i in 1..=n {
        d[i * width] = i as u32;
        for j in 1..=m {
            let sub = d[(i - 1) * width + j - 1] + u32::from(hyp[i - 1] != reference[j - 1]);
            let ins = d[(i - 1) * width + j] + 1;
            let del = d[i * width + j - 1] + 1;
            d[i * width + j] = sub.min(ins).min(del);
        }
    }
    let mut mask = vec![false; n];
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * width + j];
        if i > 0 && j > 0 {
            let same = hyp[i - 1] == reference[j - 1];
            if here == d[(i - 1) * width + j - 1] + u32::from(!same) {
                i -= 1;
                j -= 1;
                mask[i] = same;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * width + j] + 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    mask
}
