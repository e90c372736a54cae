//! Approximation scheme adapted from the Ibarra-Kim scheme for unbounded
//! knapsack.
//!
//! Costs of "large" actions are normalized by `delta_norm = H~ (eps/3)^2`,
//! where `H~` is a 2-approximation of the optimum, and a table indexed by
//! normalized cost keeps the largest true hazing reachable by a stable
//! threshold-monotonic sequence. The cheapest "small" action then tops the
//! best entry up past the final threshold.
//!
//! All normalizations are computed with exact integer arithmetic from the
//! numerator and denominator of `eps`.

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::game::HazingInstance;

use super::{Epsilon, SolveResult};

/// Upper bound on the table size, reached around `eps = 3e-4`.
const MAX_TABLE: i128 = 100_000_000;

/// How the scheme terminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FptasExit {
    /// `delta < 0`: the empty sequence is optimal.
    Trivial,
    /// Every threshold is nonnegative.
    Infeasible,
    /// No legal first action stays at or below `delta`, so the cheapest legal
    /// first action alone is optimal.
    Shortcut,
    /// Normal termination through the table.
    Table,
}

/// Tables of a run that reached the normalization stage. Action positions
/// refer to the alphabet sorted by threshold; `order` maps them back.
#[derive(Clone, Debug)]
pub struct FptasTables {
    pub order: Vec<usize>,
    /// Position of the action used for the upper bound.
    pub j_star: usize,
    pub h_tilde: i64,
    pub delta_norm: Ratio<i128>,
    pub g: usize,
    /// Normalized cost of each large action, `None` for small ones.
    pub f: Vec<Option<i64>>,
    /// Largest true hazing per normalized total.
    pub best: Vec<Option<i64>>,
    /// Small actions in processing order.
    pub small: Vec<usize>,
    pub j_s: Option<usize>,
    pub k_star: usize,
    /// Copies of `j_s` appended to `list(k_star)`.
    pub top_up: u64,
    heads: Vec<Option<usize>>,
    nodes: Vec<(usize, usize)>,
}

impl FptasTables {
    /// Action list stored for normalized total `k`, in sorted positions.
    pub fn list(&self, k: usize) -> Option<Vec<usize>> {
        let mut node = self.heads.get(k).copied().flatten()?;
        let mut out = Vec::new();
        while node != EMPTY_LIST {
            let (action, parent) = self.nodes[node];
            out.push(action);
            node = parent;
        }
        out.reverse();
        Some(out)
    }
}

const EMPTY_LIST: usize = 0;

#[derive(Clone, Debug)]
pub struct FptasRun {
    pub exit: FptasExit,
    pub result: SolveResult,
    pub tables: Option<FptasTables>,
}

pub fn solve_fptas(inst: &HazingInstance, epsilon: Epsilon) -> Result<SolveResult> {
    Ok(fptas_run(inst, epsilon)?.result)
}

pub fn fptas_run(inst: &HazingInstance, epsilon: Epsilon) -> Result<FptasRun> {
    let delta = inst.delta();
    if delta < 0 {
        let result = SolveResult::from_steps(inst, Vec::new());
        return Ok(FptasRun { exit: FptasExit::Trivial, result, tables: None });
    }
    let (sorted, order) = inst.threshold_ordered();
    let actions = sorted.alphabet();
    if actions.first().is_none_or(|a| a.t >= 0) {
        let result = SolveResult::infeasible(inst);
        return Ok(FptasRun { exit: FptasExit::Infeasible, result, tables: None });
    }

    // Legal first actions that do not clear the final threshold on their own.
    let j_star = match actions.iter().position(|a| a.t < 0 && a.h <= delta) {
        Some(j) => j,
        None => {
            let mut pick = 0;
            for (j, a) in actions.iter().enumerate() {
                if a.t < 0 && a.h < actions[pick].h {
                    pick = j;
                }
            }
            let result = SolveResult::from_steps(inst, vec![order[pick]]);
            return Ok(FptasRun { exit: FptasExit::Shortcut, result, tables: None });
        }
    };

    let h_star = actions[j_star].h;
    let h_tilde = (delta / h_star + 1) * h_star;

    let (a, b) = (epsilon.numer() as i128, epsilon.denom() as i128);
    let g_wide = 9 * b * b / (a * a);
    if g_wide > MAX_TABLE {
        return Err(Error::TooLarge(format!("epsilon {epsilon} needs a table of {g_wide} entries")));
    }
    let g = g_wide as usize;
    let delta_norm = Ratio::new(h_tilde as i128 * a * a, 9 * b * b);

    let mut best: Vec<Option<i64>> = vec![None; g + 1];
    let mut heads: Vec<Option<usize>> = vec![None; g + 1];
    // Node 0 is the empty list; nodes are never modified once pushed.
    let mut nodes: Vec<(usize, usize)> = vec![(usize::MAX, EMPTY_LIST)];
    best[0] = Some(0);
    heads[0] = Some(EMPTY_LIST);

    let mut small = Vec::new();
    let mut f = vec![None; actions.len()];
    for (j, act) in actions.iter().enumerate() {
        let h = act.h as i128;
        if 3 * b * h <= a * h_tilde as i128 {
            small.push(j);
            continue;
        }
        let fj = (9 * b * b * h / (h_tilde as i128 * a * a)) as usize;
        f[j] = Some(fj as i64);
        if fj > g {
            continue;
        }
        for k in 0..=g - fj {
            let Some(tk) = best[k] else { continue };
            if tk <= act.t {
                continue;
            }
            let candidate = tk + act.h;
            if best[k + fj].is_none_or(|cur| candidate > cur) {
                best[k + fj] = Some(candidate);
                nodes.push((j, heads[k].expect("finite entry has a list")));
                heads[k + fj] = Some(nodes.len() - 1);
            }
        }
    }

    let j_s = small.iter().copied().min_by_key(|&j| (actions[j].t, j));
    let mut pick: Option<(i64, usize, u64)> = None;
    for (k, entry) in best.iter().enumerate() {
        let Some(tk) = *entry else { continue };
        let (value, reps) = match j_s {
            Some(s) => {
                if tk <= actions[s].t {
                    continue;
                }
                let hs = actions[s].h;
                let reps = if tk > delta { 0 } else { (delta - tk) / hs + 1 };
                (tk + reps * hs, reps as u64)
            }
            None => {
                if tk <= delta {
                    continue;
                }
                (tk, 0)
            }
        };
        if pick.is_none_or(|(v, _, _)| value < v) {
            pick = Some((value, k, reps));
        }
    }
    let (_, k_star, top_up) =
        pick.ok_or_else(|| Error::Invariant("no table entry can be completed past the final threshold".into()))?;

    let tables =
        FptasTables { order, j_star, h_tilde, delta_norm, g, f, best, small, j_s, k_star, top_up, heads, nodes };
    let mut steps: Vec<usize> = tables.list(k_star).expect("selected entry is finite");
    if let Some(s) = j_s {
        steps.extend(std::iter::repeat_n(s, top_up as usize));
    }
    let steps = steps.into_iter().map(|j| tables.order[j]).collect();
    let result = SolveResult::from_steps(inst, steps);
    Ok(FptasRun { exit: FptasExit::Table, result, tables: Some(tables) })
}
