//! Automatic baselines on one sentence pair: WER, PER, TER with block shifts
//! and HTER, with the edit trace that explains each score.
//!
//! cargo run --example edit_metrics

use hope::metrics::{format_decimal, hter, per, ter, tokenize, wer, EditOp, TokenizerConfig};

fn main() {
    let config = TokenizerConfig {
        lowercase: true,
        split_punctuation: true,
    };
    let hyp = tokenize("Often save your work.", config);
    let reference = tokenize("Save your work often.", config);
    let other = tokenize("Save the work frequently.", config);
    println!("hyp: {:?}", hyp.tokens);
    println!("ref: {:?}", reference.tokens);

    let w = wer(&hyp, &reference).unwrap();
    println!(
        "\nWER  {} ({} edits: {:?})",
        format_decimal(w.rate, 4),
        w.counts.edits(),
        w.counts
    );
    println!("PER  {}", format_decimal(per(&hyp, &reference).unwrap(), 4));

    let t = ter(&hyp, std::slice::from_ref(&reference)).unwrap();
    println!(
        "TER  {} ({} shift, {} edits total)",
        format_decimal(t.rate, 4),
        t.counts.shifts,
        t.counts.edits()
    );
    println!("trace:");
    for op in &t.trace.ops {
        match op {
            EditOp::Shift { start, len, dest } => println!("  shift {len} word(s) from {start} to {dest}"),
            EditOp::Match { reference: r, .. } => println!("  keep {:?}", reference.tokens[*r]),
            other => println!("  {other:?}"),
        }
    }
    assert_eq!(t.trace.replay(&hyp.tokens).unwrap(), reference.tokens);

    let multi = ter(&hyp, &[other, reference.clone()]).unwrap();
    println!(
        "\nTER against two references: {} (closest is reference {})",
        format_decimal(multi.rate, 4),
        multi.reference_index
    );
    // HTER: the reference is a human post-edit of this very output
    println!("HTER {}", format_decimal(hter(&hyp, &reference).unwrap().rate, 4));
}
