//! Pseudo-polynomial dynamic program over the hazing accumulated so far.
//!
//! Whether an action may be played depends only on the hazing already
//! accumulated, so a single state variable suffices. `D[h]` is the least
//! overshoot over `delta + 1` reachable from accumulated hazing `h`.

use crate::game::HazingInstance;

use super::SolveResult;

/// Filled tables of the dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTables {
    /// Largest state, `delta + h_max` (at least 0).
    pub limit: i64,
    /// Minimum overshoot from each state, `None` when no stable completion
    /// exists.
    pub overshoot: Vec<Option<i64>>,
    /// Chosen action and successor state for states below `delta + 1`.
    pub choice: Vec<Option<(usize, usize)>>,
}

impl DpTables {
    pub fn min_hazing(&self, delta: i64) -> Option<i64> {
        self.overshoot[0].map(|d| d + delta + 1)
    }
}

pub fn dp_tables(inst: &HazingInstance) -> DpTables {
    let delta = inst.delta();
    let limit = (delta + inst.h_max()).max(0);
    let size = limit as usize + 1;
    let mut overshoot = vec![None; size];
    let mut choice = vec![None; size];

    for h in (0..size).rev() {
        let acc = h as i64;
        if acc > delta {
            overshoot[h] = Some(acc - delta - 1);
            continue;
        }
        let mut best: Option<(i64, usize)> = None;
        for (j, a) in inst.alphabet().iter().enumerate() {
            if acc <= a.t {
                continue;
            }
            if let Some(d) = overshoot[h + a.h as usize] {
                if best.is_none_or(|(b, _)| d < b) {
                    best = Some((d, j));
                }
            }
        }
        if let Some((d, j)) = best {
            overshoot[h] = Some(d);
            choice[h] = Some((j, h + inst.alphabet()[j].h as usize));
        }
    }
    DpTables { limit, overshoot, choice }
}

/// Minimum-hazing stable sequence, reconstructed by following the chosen
/// actions from state 0 until the final threshold is exceeded.
pub fn solve_dp(inst: &HazingInstance) -> SolveResult {
    let tables = dp_tables(inst);
    if tables.overshoot[0].is_none() {
        return SolveResult::infeasible(inst);
    }
    let mut steps = Vec::new();
    let mut state = 0usize;
    while (state as i64) <= inst.delta() {
        let (j, next) = tables.choice[state].expect("reachable state below the threshold has a choice");
        steps.push(j);
        state = next;
    }
    SolveResult::from_steps(inst, steps)
}

/// Minimum total hazing without a witness, keeping only the
/// `min(delta + 1, h_max)` most recent table entries.
pub fn min_hazing_dp(inst: &HazingInstance) -> Option<i64> {
    let delta = inst.delta();
    if delta < 0 {
        return Some(0);
    }
    let window = (delta + 1).min(inst.h_max().max(1)) as usize;
    let mut ring: Vec<Option<i64>> = vec![None; window];
    let lookup = |ring: &[Option<i64>], x: i64| {
        if x > delta {
            Some(x - delta - 1)
        } else {
            ring[x as usize % window]
        }
    };

    let mut current = None;
    for h in (0..=delta).rev() {
        current = None;
        for a in inst.alphabet() {
            if h <= a.t {
                continue;
            }
            if let Some(d) = lookup(&ring, h + a.h) {
                if current.is_none_or(|b| d < b) {
                    current = Some(d);
                }
            }
        }
        ring[h as usize % window] = current;
    }
    current.map(|d| d + delta + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{check_stability_limit, HazingAction};
    use crate::solvers::SolveStatus;

    fn inst(pairs: &[(i64, i64)], delta: i64) -> HazingInstance {
        HazingInstance::new(pairs.iter().map(|&(h, t)| HazingAction::new(h, t)).collect(), delta).unwrap()
    }

    #[test]
    fn basic_game() {
        let i = inst(&[(4, -8), (3, 3)], 6);
        let r = solve_dp(&i);
        assert_eq!(r.total_hazing, 7);
        assert_eq!(r.counts, vec![1, 1]);
        assert_eq!(r.sequence.steps(), &[0, 1]);
        assert_eq!(min_hazing_dp(&i), Some(7));
    }

    #[test]
    fn non_monotone_optimum() {
        let i = inst(&[(5, -1), (6, 4)], 10);
        let r = solve_dp(&i);
        assert_eq!(r.total_hazing, 11);
        assert_eq!(r.sequence.steps(), &[0, 1]);
        assert_eq!(min_hazing_dp(&i), Some(11));
    }

    #[test]
    fn no_legal_first_action() {
        let i = inst(&[(4, 3)], 6);
        assert_eq!(solve_dp(&i).status, SolveStatus::Infeasible);
        assert_eq!(min_hazing_dp(&i), None);
        let empty = inst(&[], 0);
        assert_eq!(solve_dp(&empty).status, SolveStatus::Infeasible);
        assert_eq!(min_hazing_dp(&empty), None);
    }

    #[test]
    fn negative_delta_needs_no_hazing() {
        let i = inst(&[(2, -5)], -1);
        let r = solve_dp(&i);
        assert_eq!(r.status, SolveStatus::Solved);
        assert_eq!(r.total_hazing, 0);
        assert!(r.sequence.is_empty());
        assert_eq!(min_hazing_dp(&i), Some(0));
        assert_eq!(min_hazing_dp(&inst(&[], -3)), Some(0));
    }

    #[test]
    fn zero_delta_needs_one_step() {
        let i = inst(&[(3, -1), (1, -1)], 0);
        let r = solve_dp(&i);
        assert_eq!(r.total_hazing, 1);
        assert_eq!(r.sequence.steps(), &[1]);
    }

    #[test]
    fn table_base_case() {
        let i = inst(&[(4, -8), (3, 3)], 6);
        let t = dp_tables(&i);
        assert_eq!(t.limit, 10);
        for h in 7..=10 {
            assert_eq!(t.overshoot[h], Some(h as i64 - 7));
        }
        assert_eq!(t.min_hazing(6), Some(7));
    }

    #[test]
    fn ties_pick_lowest_index() {
        let i = inst(&[(2, -1), (1, -1), (2, -1)], 1);
        let r = solve_dp(&i);
        assert_eq!(r.sequence.steps(), &[0]);
    }

    #[test]
    fn witness_is_stable() {
        let i = inst(&[(3, -2), (5, 2), (7, 9), (2, 12)], 20);
        let r = solve_dp(&i);
        assert!(check_stability_limit(&i, &r.sequence).unwrap().stable);
        assert_eq!(Some(r.total_hazing), min_hazing_dp(&i));
    }
}
