//! Stability and comparison of hazing sequences as the discount factor
//! approaches 1.

use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::{HazingInstance, HazingSequence, StabilityReport, ViolationDetail};

/// Checks that the hazing before every step strictly exceeds that step's
/// threshold and that the total strictly exceeds `delta`.
///
/// A final-threshold failure is reported at index `seq.len()`.
pub fn check_stability_limit(inst: &HazingInstance, seq: &HazingSequence) -> Result<StabilityReport> {
    inst.validate(seq)?;
    Ok(limit_report(inst, seq.steps()))
}

pub(crate) fn limit_report(inst: &HazingInstance, steps: &[usize]) -> StabilityReport {
    let mut accumulated = 0i64;
    for (k, &j) in steps.iter().enumerate() {
        let a = inst.alphabet()[j];
        if accumulated <= a.t {
            return StabilityReport::violated(k, ViolationDetail::Limit { accumulated, threshold: a.t });
        }
        accumulated += a.h;
    }
    if accumulated <= inst.delta() {
        return StabilityReport::violated(steps.len(), ViolationDetail::Limit { accumulated, threshold: inst.delta() });
    }
    StabilityReport::stable()
}

/// Whether all occurrences of each action are adjacent and the blocks appear
/// in nondecreasing threshold order.
pub fn is_threshold_monotonic(inst: &HazingInstance, seq: &HazingSequence) -> bool {
    let runs = seq.runs();
    let mut seen = vec![false; inst.len()];
    for &(j, _) in &runs {
        if j >= seen.len() || std::mem::replace(&mut seen[j], true) {
            return false;
        }
    }
    runs.windows(2).all(|w| inst.alphabet()[w[0].0].t <= inst.alphabet()[w[1].0].t)
}

/// Rearranges a stable sequence into threshold-monotonic form without
/// changing which actions it uses.
///
/// Occurrences of each action are first gathered at its first appearance,
/// then the resulting blocks are stably sorted by threshold. Both moves only
/// ever increase the hazing that precedes any step, so stability is kept.
pub fn canonicalize(inst: &HazingInstance, seq: &HazingSequence) -> Result<HazingSequence> {
    let report = check_stability_limit(inst, seq)?;
    if let Some(k) = report.first_violation {
        return Err(Error::NotStable(k));
    }

    let mut counts = vec![0usize; inst.len()];
    let mut blocks = Vec::new();
    for &j in seq.steps() {
        if counts[j] == 0 {
            blocks.push(j);
        }
        counts[j] += 1;
    }
    blocks.sort_by_key(|&j| inst.alphabet()[j].t);

    let steps = blocks.iter().flat_map(|&j| std::iter::repeat_n(j, counts[j])).collect::<Vec<_>>();
    debug_assert!(limit_report(inst, &steps).stable);
    Ok(HazingSequence::new(steps))
}

/// Orders two sequences by total hazing. In the patient limit the sequence
/// with less hazing has the higher utility, and equal totals are equivalent.
pub fn limit_compare(inst: &HazingInstance, a: &HazingSequence, b: &HazingSequence) -> Result<Ordering> {
    Ok(inst.total_hazing(a)?.cmp(&inst.total_hazing(b)?))
}
