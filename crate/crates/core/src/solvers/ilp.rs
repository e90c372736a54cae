//! Integer program over repetition counts, solved by depth-first branch and
//! bound.
//!
//! With the alphabet sorted by threshold, a threshold-monotonic sequence is
//! fully described by how often each action repeats. The program is
//!
//! ```text
//! minimize    sum_j r_j h_j
//! subject to  sum_{j' < j} r_j' h_j' >= t_j + 1     for j >= 2
//!             sum_j r_j h_j          >= delta + 1
//!             r_j >= 0 integer
//! ```
//!
//! The prefix constraints are imposed whether or not `r_j > 0`: the next used
//! action, or the final constraint, always dominates an unused one because
//! thresholds are sorted and none exceeds `delta`.

use std::collections::HashSet;

use crate::game::HazingInstance;

use super::SolveResult;

const UNREACHABLE: i64 = i64::MAX / 4;

pub fn solve_ilp(inst: &HazingInstance) -> SolveResult {
    if inst.delta() < 0 {
        return SolveResult::from_steps(inst, Vec::new());
    }
    let (sorted, order) = inst.threshold_ordered();
    let actions = sorted.alphabet();
    if actions.first().is_none_or(|a| a.t >= 0) {
        return SolveResult::infeasible(inst);
    }

    let target = inst.delta() + 1;
    let hazing: Vec<i64> = actions.iter().map(|a| a.h).collect();
    // need[j]: accumulated hazing required before action j; need[n] is the
    // final constraint.
    let mut need: Vec<i64> = actions.iter().map(|a| a.t + 1).collect();
    need.push(target);

    let mut search = Search {
        hazing: &hazing,
        need: &need,
        target,
        bounds: SuffixBounds::new(&hazing),
        best: UNREACHABLE,
        best_counts: vec![0; hazing.len()],
        counts: vec![0; hazing.len()],
        visited: HashSet::new(),
    };
    search.seed_incumbent(actions.iter().map(|a| a.t < 0));
    search.descend(0, 0);

    let steps =
        search.best_counts.iter().enumerate().flat_map(|(j, &r)| std::iter::repeat_n(order[j], r as usize)).collect();
    SolveResult::from_steps(inst, steps)
}

struct Search<'a> {
    hazing: &'a [i64],
    need: &'a [i64],
    target: i64,
    bounds: SuffixBounds,
    best: i64,
    best_counts: Vec<u64>,
    counts: Vec<u64>,
    visited: HashSet<(usize, i64)>,
}

impl Search<'_> {
    /// Starts from the cheapest single-action plan that can open the
    /// sequence, which costs at most `delta + h_max`.
    fn seed_incumbent(&mut self, opens: impl Iterator<Item = bool>) {
        for (j, ok) in opens.enumerate() {
            if !ok {
                continue;
            }
            let h = self.hazing[j];
            let reps = (self.target + h - 1) / h;
            if reps * h < self.best {
                self.best = reps * h;
                self.best_counts.iter_mut().for_each(|r| *r = 0);
                self.best_counts[j] = reps as u64;
            }
        }
    }

    fn descend(&mut self, j: usize, sum: i64) {
        if sum >= self.target {
            if sum < self.best {
                self.best = sum;
                self.best_counts.copy_from_slice(&self.counts);
            }
            return;
        }
        if j == self.hazing.len() {
            return;
        }
        if self.bounds.lower_bound(j, self.target - sum).is_none_or(|x| sum + x >= self.best) {
            return;
        }
        if !self.visited.insert((j, sum)) {
            return;
        }

        let h = self.hazing[j];
        let next_need = self.need[j + 1];
        let mut reps = if sum >= next_need { 0 } else { (next_need - sum + h - 1) / h };
        loop {
            let next = sum + reps * h;
            if next >= self.best {
                break;
            }
            self.counts[j] = reps as u64;
            self.descend(j + 1, next);
            if next >= self.target {
                break;
            }
            reps += 1;
        }
        self.counts[j] = 0;
    }
}

/// For each suffix of the alphabet, the set of sums its hazing costs can
/// form, stored as the smallest representable value in every residue class
/// modulo the suffix's smallest cost. Thresholds are ignored, so this gives a
/// valid lower bound on any completion.
struct SuffixBounds {
    tables: Vec<Residues>,
}

struct Residues {
    modulus: i64,
    least: Vec<i64>,
}

impl Residues {
    fn single(modulus: i64) -> Self {
        let mut least = vec![UNREACHABLE; modulus as usize];
        least[0] = 0;
        Residues { modulus, least }
    }

    /// Adds a generator by walking each cycle of `x -> x + item (mod m)` once,
    /// starting from its minimum, which no other entry of the cycle can lower.
    fn add(&mut self, item: i64) {
        let m = self.modulus;
        let step = (item % m) as usize;
        if step == 0 {
            return;
        }
        let m = m as usize;
        let cycles = gcd(step, m);
        let len = m / cycles;
        for start in 0..cycles {
            let mut pos = start;
            let mut min_pos = start;
            for _ in 0..len {
                if self.least[pos] < self.least[min_pos] {
                    min_pos = pos;
                }
                pos = (pos + step) % m;
            }
            if self.least[min_pos] >= UNREACHABLE {
                continue;
            }
            let mut pos = min_pos;
            for _ in 0..len {
                let next = (pos + step) % m;
                let candidate = self.least[pos] + item;
                if candidate < self.least[next] {
                    self.least[next] = candidate;
                }
                pos = next;
            }
        }
    }

    /// Smallest representable value that is at least `need`.
    fn at_least(&self, need: i64) -> Option<i64> {
        let m = self.modulus;
        let mut best: Option<i64> = None;
        for (rho, &least) in self.least.iter().enumerate() {
            if least >= UNREACHABLE {
                continue;
            }
            let x = if least >= need { least } else { need + (rho as i64 - need).rem_euclid(m) };
            if best.is_none_or(|b| x < b) {
                best = Some(x);
            }
        }
        best
    }
}

impl SuffixBounds {
    fn new(hazing: &[i64]) -> Self {
        let mut tables: Vec<Residues> = Vec::with_capacity(hazing.len());
        for &h in hazing.iter().rev() {
            let table = match tables.last() {
                None => Residues::single(h),
                Some(prev) if h >= prev.modulus => {
                    let mut next = Residues { modulus: prev.modulus, least: prev.least.clone() };
                    next.add(h);
                    next
                }
                Some(prev) => {
                    let mut next = Residues::single(h);
                    next.add(prev.modulus);
                    for &least in &prev.least {
                        if least > 0 && least < UNREACHABLE {
                            next.add(least);
                        }
                    }
                    next
                }
            };
            tables.push(table);
        }
        tables.reverse();
        SuffixBounds { tables }
    }

    fn lower_bound(&self, j: usize, need: i64) -> Option<i64> {
        self.tables[j].at_least(need)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{check_stability_limit, is_threshold_monotonic, HazingAction};
    use crate::solvers::SolveStatus;

    fn inst(pairs: &[(i64, i64)], delta: i64) -> HazingInstance {
        HazingInstance::new(pairs.iter().map(|&(h, t)| HazingAction::new(h, t)).collect(), delta).unwrap()
    }

    #[test]
    fn basic_game() {
        let r = solve_ilp(&inst(&[(4, -8), (3, 3)], 6));
        assert_eq!(r.total_hazing, 7);
        assert_eq!(r.counts, vec![1, 1]);
        assert_eq!(r.sequence.steps(), &[0, 1]);
    }

    #[test]
    fn non_monotone_optimum() {
        let r = solve_ilp(&inst(&[(5, -1), (6, 4)], 10));
        assert_eq!(r.total_hazing, 11);
        assert_eq!(r.counts, vec![1, 1]);
    }

    #[test]
    fn counts_follow_input_positions() {
        // Input order differs from threshold order.
        let i = inst(&[(3, 3), (4, -8)], 6);
        let r = solve_ilp(&i);
        assert_eq!(r.total_hazing, 7);
        assert_eq!(r.counts, vec![1, 1]);
        assert_eq!(r.sequence.steps(), &[1, 0]);
        assert!(check_stability_limit(&i, &r.sequence).unwrap().stable);
        assert!(is_threshold_monotonic(&i, &r.sequence));
    }

    #[test]
    fn infeasible_and_trivial() {
        assert_eq!(solve_ilp(&inst(&[(4, 0), (2, 5)], 6)).status, SolveStatus::Infeasible);
        assert_eq!(solve_ilp(&inst(&[], 6)).status, SolveStatus::Infeasible);
        let r = solve_ilp(&inst(&[], -2));
        assert_eq!((r.status, r.total_hazing), (SolveStatus::Solved, 0));
    }

    #[test]
    fn residue_bound() {
        let mut r = Residues::single(4);
        r.add(6);
        // Sums of 4 and 6: all even numbers except 2.
        assert_eq!(r.at_least(1), Some(4));
        assert_eq!(r.at_least(5), Some(6));
        assert_eq!(r.at_least(7), Some(8));
        let b = SuffixBounds::new(&[6, 4, 9]);
        assert_eq!(b.lower_bound(2, 10), Some(18));
        assert_eq!(b.lower_bound(1, 10), Some(12));
        assert_eq!(b.lower_bound(0, 11), Some(12));
        assert_eq!(b.lower_bound(0, 5), Some(6));
    }

    #[test]
    fn large_delta() {
        let i = inst(&[(7, -1), (9, 40), (5, 300), (13, 900)], 5000);
        let r = solve_ilp(&i);
        let dp = crate::solvers::solve_dp(&i);
        assert_eq!(r.total_hazing, dp.total_hazing);
        assert!(check_stability_limit(&i, &r.sequence).unwrap().stable);
    }
}
