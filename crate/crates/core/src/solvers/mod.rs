//! Solvers for the minimum-hazing problem.
//!
//! Every solver takes a [`HazingInstance`] and returns a [`SolveResult`]
//! whose witness is stable in the patient limit. Indices in the witness and
//! in `counts` refer to the alphabet of the instance that was passed in.

mod brute;
mod dp;
mod fptas;
mod ilp;

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::game::{parse_rational, HazingInstance, HazingSequence};

pub use brute::{solve_brute, solve_brute_with, DEFAULT_BRUTE_NODE_CAP};
pub use dp::{dp_tables, min_hazing_dp, solve_dp, DpTables};
pub use fptas::{fptas_run, solve_fptas, FptasExit, FptasRun, FptasTables};
pub use ilp::solve_ilp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Solved,
    /// No action can be played first, so no stable sequence exists.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Total hazing of the witness; 0 when infeasible.
    pub total_hazing: i64,
    /// Number of times each alphabet action occurs in the witness.
    pub counts: Vec<u64>,
    pub sequence: HazingSequence,
}

impl SolveResult {
    pub(crate) fn infeasible(inst: &HazingInstance) -> Self {
        SolveResult {
            status: SolveStatus::Infeasible,
            total_hazing: 0,
            counts: vec![0; inst.len()],
            sequence: HazingSequence::empty(),
        }
    }

    pub(crate) fn from_steps(inst: &HazingInstance, steps: Vec<usize>) -> Self {
        let mut counts = vec![0u64; inst.len()];
        for &j in &steps {
            counts[j] += 1;
        }
        SolveResult {
            status: SolveStatus::Solved,
            total_hazing: inst.sum_unchecked(&steps),
            counts,
            sequence: HazingSequence::new(steps),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    /// Total hazing, or `None` when infeasible.
    pub fn hazing(&self) -> Option<i64> {
        self.is_feasible().then_some(self.total_hazing)
    }
}

/// Approximation parameter in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epsilon(Ratio<i64>);

impl Epsilon {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidEpsilon(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        if r <= Ratio::from_integer(0) || r > Ratio::from_integer(1) {
            return Err(Error::InvalidEpsilon(r.to_string()));
        }
        Ok(Epsilon(r))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        let (n, d) = (r.numer().to_i64(), r.denom().to_i64());
        match (n, d) {
            (Some(n), Some(d)) => Self::new(n, d),
            _ => Err(Error::InvalidEpsilon(s.to_string())),
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algo {
    Dp,
    Ilp,
    Fptas,
    Brute,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Dp => "dp",
            Algo::Ilp => "ilp",
            Algo::Fptas => "fptas",
            Algo::Brute => "brute",
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Algo::Fptas)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dp" => Ok(Algo::Dp),
            "ilp" => Ok(Algo::Ilp),
            "fptas" => Ok(Algo::Fptas),
            "brute" => Ok(Algo::Brute),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Runs `algo` on `inst`. The FPTAS requires `epsilon`; the exact solvers
/// ignore it.
pub fn solve(inst: &HazingInstance, algo: Algo, epsilon: Option<Epsilon>) -> Result<SolveResult> {
    match algo {
        Algo::Dp => Ok(solve_dp(inst)),
        Algo::Ilp => Ok(solve_ilp(inst)),
        Algo::Fptas => {
            let eps = epsilon.ok_or_else(|| Error::InvalidEpsilon("missing".into()))?;
            solve_fptas(inst, eps)
        }
        Algo::Brute => solve_brute(inst),
    }
}
