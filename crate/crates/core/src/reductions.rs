//! Reduction from Unbounded Subset-Sum.
//!
//! Each item `a` becomes an action with hazing cost `a` and threshold `-1`,
//! so every action is always playable, and the final threshold is `A - 1`.
//! The target is reachable exactly when the minimum total hazing equals `A`.

use crate::error::{Error, Result};
use crate::game::{HazingAction, HazingInstance};

/// Largest target accepted by [`solve_ussp_brute`].
pub const USSP_TARGET_CAP: u64 = 10_000;

/// Can `target` be written as a nonnegative integer combination of `items`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsspInstance {
    items: Vec<u64>,
    target: u64,
}

impl UsspInstance {
    pub fn new(items: Vec<u64>, target: u64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidUssp("no items".into()));
        }
        if items.contains(&0) {
            return Err(Error::InvalidUssp("items must be positive".into()));
        }
        if target == 0 {
            return Err(Error::InvalidUssp("target must be positive".into()));
        }
        if items.iter().chain([&target]).any(|&v| v > i64::MAX as u64 / 2) {
            return Err(Error::InvalidUssp("values too large".into()));
        }
        Ok(UsspInstance { items, target })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn target(&self) -> u64 {
        self.target
    }
}

pub fn ussp_to_optrep(u: &UsspInstance) -> HazingInstance {
    let alphabet = u.items.iter().map(|&a| HazingAction::new(a as i64, -1)).collect();
    HazingInstance::new(alphabet, u.target as i64 - 1).expect("thresholds of -1 never exceed target - 1")
}

/// Coin-change reachability up to the target.
pub fn solve_ussp_brute(u: &UsspInstance) -> Result<bool> {
    if u.target > USSP_TARGET_CAP {
        return Err(Error::TooLarge(format!("target {} exceeds {USSP_TARGET_CAP}", u.target)));
    }
    let target = u.target as usize;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for s in 1..=target {
        reachable[s] = u.items.iter().any(|&a| a as usize <= s && reachable[s - a as usize]);
    }
    Ok(reachable[target])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::min_hazing_dp;

    fn ussp(items: &[u64], target: u64) -> UsspInstance {
        UsspInstance::new(items.to_vec(), target).unwrap()
    }

    #[test]
    fn mapping() {
        let i = ussp_to_optrep(&ussp(&[3, 5], 11));
        assert_eq!(i.alphabet(), &[HazingAction::new(3, -1), HazingAction::new(5, -1)]);
        assert_eq!(i.delta(), 10);

        let i = ussp_to_optrep(&ussp(&[1], 1));
        assert_eq!(i.alphabet(), &[HazingAction::new(1, -1)]);
        assert_eq!(i.delta(), 0);

        let i = ussp_to_optrep(&ussp(&[4, 6], 9));
        assert_eq!(i.alphabet(), &[HazingAction::new(4, -1), HazingAction::new(6, -1)]);
        assert_eq!(i.delta(), 8);
    }

    #[test]
    fn reachability() {
        assert!(solve_ussp_brute(&ussp(&[3, 5], 11)).unwrap());
        assert!(!solve_ussp_brute(&ussp(&[4, 6], 9)).unwrap());
        for k in 1..50 {
            assert!(solve_ussp_brute(&ussp(&[1], k)).unwrap());
        }
        assert!(matches!(solve_ussp_brute(&ussp(&[1], 10_001)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn reduction_agrees_on_examples() {
        assert_eq!(min_hazing_dp(&ussp_to_optrep(&ussp(&[3, 5], 11))), Some(11));
        assert_eq!(min_hazing_dp(&ussp_to_optrep(&ussp(&[4, 6], 9))), Some(10));
    }

    #[test]
    fn rejects_invalid() {
        assert!(UsspInstance::new(vec![], 3).is_err());
        assert!(UsspInstance::new(vec![0, 2], 3).is_err());
        assert!(UsspInstance::new(vec![2], 0).is_err());
    }
}
