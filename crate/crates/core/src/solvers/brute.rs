//! Exhaustive search over explicit sequences, used as a test oracle.
//!
//! Every prefix is extended by every action that is stable at that step,
//! as long as the running total stays within `delta + h_max` (the optimum
//! never exceeds that bound). No structural property of optimal sequences is
//! assumed, so this is independent of the other solvers.

use crate::error::{Error, Result};
use crate::game::HazingInstance;

use super::SolveResult;

pub const DEFAULT_BRUTE_NODE_CAP: u64 = 50_000_000;

pub fn solve_brute(inst: &HazingInstance) -> Result<SolveResult> {
    solve_brute_with(inst, DEFAULT_BRUTE_NODE_CAP)
}

/// Like [`solve_brute`], failing with [`Error::TooLarge`] once more than
/// `node_cap` prefixes have been explored.
pub fn solve_brute_with(inst: &HazingInstance, node_cap: u64) -> Result<SolveResult> {
    let mut search =
        Enumeration { inst, ceiling: inst.delta() + inst.h_max(), best: None, current: Vec::new(), nodes: 0, node_cap };
    search.extend(0)?;
    Ok(match search.best {
        Some((_, steps)) => SolveResult::from_steps(inst, steps),
        None => SolveResult::infeasible(inst),
    })
}

struct Enumeration<'a> {
    inst: &'a HazingInstance,
    ceiling: i64,
    best: Option<(i64, Vec<usize>)>,
    current: Vec<usize>,
    nodes: u64,
    node_cap: u64,
}

impl Enumeration<'_> {
    fn extend(&mut self, total: i64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::TooLarge(format!("brute force explored more than {} prefixes", self.node_cap)));
        }
        let delta = self.inst.delta();
        if total > delta {
            if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                self.best = Some((total, self.current.clone()));
            }
            return Ok(());
        }
        for (j, a) in self.inst.alphabet().iter().enumerate() {
            // Nothing beats delta + 1.
            if self.best.as_ref().is_some_and(|(b, _)| *b == delta + 1) {
                return Ok(());
            }
            let next = total + a.h;
            if total <= a.t || next > self.ceiling {
                continue;
            }
            if self.best.as_ref().is_some_and(|(b, _)| next >= *b) {
                continue;
            }
            self.current.push(j);
            self.extend(next)?;
            self.current.pop();
        }
        Ok(())
    }
}
