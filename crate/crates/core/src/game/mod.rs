//! Game and sequence data model.
//!
//! A symmetric game is described by one `(p, p*)` pair per action: the
//! cooperative payoff both players receive when both play the action, and the
//! best payoff a player can get by deviating from it. In the limit of a
//! patient discount factor only the differences to the goal payoff matter, so
//! the game is re-expressed as a [`HazingInstance`] of `(h, t)` pairs (hazing
//! cost and deviation threshold) plus the final threshold `delta`.

mod discounted;
mod limit;

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use discounted::{check_stability_beta, discounted_utility};
pub use limit::{canonicalize, check_stability_limit, is_threshold_monotonic, limit_compare};

/// Discount factor in `[0, 1)`, held as an exact fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discount(BigRational);

impl Discount {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value >= BigRational::one() {
            return Err(Error::DiscountOutOfRange(value.to_string()));
        }
        Ok(Discount(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Discount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for Discount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `"num/den"`, a bare integer, or a finite decimal such as `"0.9"`
/// into an exact fraction.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = num::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mut value = BigRational::new(int_part * &scale + frac_part, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let value: BigRational = s.parse().map_err(|_| bad())?;
    if value.denom().is_zero() {
        return Err(bad());
    }
    Ok(value)
}

/// Payoff pair of one action of a symmetric game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActionPayoff {
    /// Payoff when both players play the action.
    pub p: i64,
    /// Best payoff from deviating while the partner plays the action.
    pub p_star: i64,
}

impl ActionPayoff {
    pub fn new(p: i64, p_star: i64) -> Self {
        ActionPayoff { p, p_star }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricGame {
    actions: Vec<ActionPayoff>,
    beta: Discount,
}

impl SymmetricGame {
    pub fn new(actions: Vec<ActionPayoff>, beta: Discount) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptyGame);
        }
        Ok(SymmetricGame { actions, beta })
    }

    pub fn actions(&self) -> &[ActionPayoff] {
        &self.actions
    }

    pub fn beta(&self) -> &Discount {
        &self.beta
    }

    /// Index of the goal action: the highest cooperative payoff, ties broken
    /// by the lowest deviation payoff and then by position.
    pub fn goal_action(&self) -> usize {
        let mut best = 0;
        for (j, a) in self.actions.iter().enumerate().skip(1) {
            let b = &self.actions[best];
            if a.p > b.p || (a.p == b.p && a.p_star < b.p_star) {
                best = j;
            }
        }
        best
    }

    /// Re-expresses the game relative to its goal payoff.
    ///
    /// Actions with zero hazing cost never help and are dropped, as are
    /// actions whose threshold exceeds `delta` (they could only be played once
    /// the final threshold is already met).
    pub fn to_hazing_instance(&self) -> HazingInstance {
        let goal = self.goal_action();
        let goal_payoff = self.actions[goal].p;
        let goal_deviation = self.actions[goal].p_star;
        let delta = goal_deviation - goal_payoff;

        let mut alphabet = Vec::new();
        let mut source_actions = Vec::new();
        for (j, a) in self.actions.iter().enumerate() {
            let h = goal_payoff - a.p;
            let t = a.p_star - goal_payoff;
            if h >= 1 && t <= delta {
                alphabet.push(HazingAction { h, t });
                source_actions.push(j);
            }
        }
        let h_max = alphabet.iter().map(|a| a.h).max().unwrap_or(0);
        HazingInstance {
            alphabet,
            delta,
            h_max,
            goal: Some(GoalMeta { goal_payoff, goal_action: goal, goal_deviation, source_actions }),
        }
    }
}

/// One letter of the hazing alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HazingAction {
    /// Per-round loss against the goal payoff, at least 1.
    pub h: i64,
    /// Deviation advantage over the goal payoff; the hazing accumulated before
    /// the action is played must strictly exceed it.
    pub t: i64,
}

impl HazingAction {
    pub fn new(h: i64, t: i64) -> Self {
        HazingAction { h, t }
    }
}

/// Provenance of an instance derived from a [`SymmetricGame`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalMeta {
    pub goal_payoff: i64,
    pub goal_action: usize,
    pub goal_deviation: i64,
    /// Game action index for each alphabet position.
    pub source_actions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HazingInstance {
    alphabet: Vec<HazingAction>,
    delta: i64,
    h_max: i64,
    goal: Option<GoalMeta>,
}

impl HazingInstance {
    pub fn new(alphabet: Vec<HazingAction>, delta: i64) -> Result<Self> {
        for a in &alphabet {
            if a.h < 1 {
                return Err(Error::NonPositiveHazing(a.h));
            }
            if a.t > delta {
                return Err(Error::ThresholdAboveDelta { threshold: a.t, delta });
            }
        }
        let h_max = alphabet.iter().map(|a| a.h).max().unwrap_or(0);
        Ok(HazingInstance { alphabet, delta, h_max, goal: None })
    }

    /// Builds an instance from `(h, t)` pairs, dropping actions whose
    /// threshold exceeds `delta`.
    pub fn filtered(pairs: &[(i64, i64)], delta: i64) -> Result<Self> {
        let alphabet = pairs.iter().filter(|&&(_, t)| t <= delta).map(|&(h, t)| HazingAction { h, t }).collect();
        Self::new(alphabet, delta)
    }

    pub fn alphabet(&self) -> &[HazingAction] {
        &self.alphabet
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Largest hazing cost in the alphabet, 0 when the alphabet is empty.
    pub fn h_max(&self) -> i64 {
        self.h_max
    }

    pub fn goal(&self) -> Option<&GoalMeta> {
        self.goal.as_ref()
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Stable sort of the alphabet by threshold. Returns the sorted instance
    /// and, for each new position, the position it had in `self`.
    pub fn threshold_ordered(&self) -> (HazingInstance, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.alphabet.len()).collect();
        order.sort_by_key(|&j| self.alphabet[j].t);
        let alphabet = order.iter().map(|&j| self.alphabet[j]).collect();
        let goal = self
            .goal
            .as_ref()
            .map(|g| GoalMeta { source_actions: order.iter().map(|&j| g.source_actions[j]).collect(), ..g.clone() });
        let inst = HazingInstance { alphabet, delta: self.delta, h_max: self.h_max, goal };
        (inst, order)
    }

    pub fn is_threshold_ordered(&self) -> bool {
        self.alphabet.windows(2).all(|w| w[0].t <= w[1].t)
    }

    /// Errors if any step indexes outside the alphabet.
    pub fn validate(&self, seq: &HazingSequence) -> Result<()> {
        for (step, &index) in seq.steps().iter().enumerate() {
            if index >= self.alphabet.len() {
                return Err(Error::InvalidStep { step, index, len: self.alphabet.len() });
            }
        }
        Ok(())
    }

    /// Undiscounted sum of hazing costs along `seq`.
    pub fn total_hazing(&self, seq: &HazingSequence) -> Result<i64> {
        self.validate(seq)?;
        Ok(self.sum_unchecked(seq.steps()))
    }

    pub(crate) fn sum_unchecked(&self, steps: &[usize]) -> i64 {
        steps.iter().map(|&j| self.alphabet[j].h).sum()
    }

    /// Payoff plan that plays `seq` and then the goal action forever.
    ///
    /// Uses the recorded goal payoff when the instance came from a game;
    /// otherwise payoffs are expressed relative to a goal payoff of 0, which
    /// leaves every stability verdict unchanged.
    pub fn payoff_sequence(&self, seq: &HazingSequence) -> Result<PayoffSequence> {
        self.validate(seq)?;
        let goal = self.goal.as_ref().map_or(0, |g| g.goal_payoff);
        let prefix = seq
            .steps()
            .iter()
            .map(|&j| {
                let a = self.alphabet[j];
                (goal - a.h, goal + a.t)
            })
            .collect::<Vec<_>>();
        PayoffSequence::from_integers(&prefix, &[(goal, goal + self.delta)])
    }
}

/// Finite sequence of alphabet indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HazingSequence {
    steps: Vec<usize>,
}

impl HazingSequence {
    pub fn new(steps: Vec<usize>) -> Self {
        HazingSequence { steps }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Maximal runs of equal steps as `(action, count)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &j in &self.steps {
            match runs.last_mut() {
                Some((a, n)) if *a == j => *n += 1,
                _ => runs.push((j, 1)),
            }
        }
        runs
    }

    pub fn into_steps(self) -> Vec<usize> {
        self.steps
    }
}

impl From<Vec<usize>> for HazingSequence {
    fn from(steps: Vec<usize>) -> Self {
        HazingSequence { steps }
    }
}

/// Payoff pair with exact rational values, used on the discounted side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Payoff {
    pub p: BigRational,
    pub p_star: BigRational,
}

impl Payoff {
    pub fn new(p: BigRational, p_star: BigRational) -> Self {
        Payoff { p, p_star }
    }

    pub fn from_integers(p: i64, p_star: i64) -> Self {
        Payoff { p: BigRational::from_integer(p.into()), p_star: BigRational::from_integer(p_star.into()) }
    }
}

/// Eventually periodic payoff plan: `prefix`, then `cycle` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffSequence {
    prefix: Vec<Payoff>,
    cycle: Vec<Payoff>,
}

impl PayoffSequence {
    pub fn new(prefix: Vec<Payoff>, cycle: Vec<Payoff>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(PayoffSequence { prefix, cycle })
    }

    pub fn from_integers(prefix: &[(i64, i64)], cycle: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(p, s)| Payoff::from_integers(p, s)).collect();
        Self::new(conv(prefix), conv(cycle))
    }

    pub fn prefix(&self) -> &[Payoff] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Payoff] {
        &self.cycle
    }

    /// Payoff pair played at round `i`.
    pub fn at(&self, i: usize) -> &Payoff {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn is_goal_value(&self) -> bool {
        self.cycle.len() == 1
    }

    /// Multiplies every payoff by `factor`.
    pub fn scaled(&self, factor: &BigRational) -> PayoffSequence {
        let scale = |v: &[Payoff]| v.iter().map(|x| Payoff::new(&x.p * factor, &x.p_star * factor)).collect();
        PayoffSequence { prefix: scale(&self.prefix), cycle: scale(&self.cycle) }
    }
}

/// Outcome of a stability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Earliest round at which deviating pays. For the limit check, a value
    /// equal to the sequence length means the final threshold is not met.
    pub first_violation: Option<usize>,
    pub detail: Option<ViolationDetail>,
}

impl StabilityReport {
    pub(crate) fn stable() -> Self {
        StabilityReport { stable: true, first_violation: None, detail: None }
    }

    pub(crate) fn violated(k: usize, detail: ViolationDetail) -> Self {
        StabilityReport { stable: false, first_violation: Some(k), detail: Some(detail) }
    }
}

/// Both sides of the violated inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationDetail {
    /// Discounted payoff from deviating at round k against the share of the
    /// plan's utility forgone by restarting.
    Discounted { deviation: BigRational, cooperation: BigRational },
    /// Hazing accumulated before round k against the threshold it must exceed.
    Limit { accumulated: i64, threshold: i64 },
}
