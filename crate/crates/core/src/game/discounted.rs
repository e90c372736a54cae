//! Exact discounted utilities and the finite-discount equilibrium check.

use num::{BigRational, One, Zero};

use super::{Discount, PayoffSequence, StabilityReport, ViolationDetail};

/// Total discounted utility `sum_i beta^i p_i`, in closed form.
///
/// With prefix length `z`, cycle length `L` and cycle payoffs `c`, this is
/// `sum_{i<z} beta^i p_i + beta^z (sum_{i<L} beta^i c_i) / (1 - beta^L)`.
pub fn discounted_utility(seq: &PayoffSequence, beta: &Discount) -> BigRational {
    let beta = beta.value();
    let mut total = BigRational::zero();
    let mut power = BigRational::one();
    for x in seq.prefix() {
        total += &power * &x.p;
        power *= beta;
    }
    let beta_z = power;

    let mut cycle_sum = BigRational::zero();
    let mut power = BigRational::one();
    for x in seq.cycle() {
        cycle_sum += &power * &x.p;
        power *= beta;
    }
    // power == beta^L < 1, so the denominator is positive.
    total + beta_z * cycle_sum / (BigRational::one() - power)
}

/// Checks that no player gains by deviating once and restarting.
///
/// At round `k` the deviator collects `sum_{i<k} beta^i p_i + beta^k p*_k`
/// and restarts, while staying is worth `(1 - beta^(k+1)) U` more than that
/// restart, `U` being the plan's utility. Past the prefix both sides repeat
/// with the cycle, so rounds `0 .. z + L` decide every round.
pub fn check_stability_beta(seq: &PayoffSequence, beta: &Discount) -> StabilityReport {
    let utility = discounted_utility(seq, beta);
    let beta = beta.value();
    let horizon = seq.prefix().len() + seq.cycle().len();

    let mut collected = BigRational::zero();
    let mut power = BigRational::one();
    for k in 0..horizon {
        let x = seq.at(k);
        let deviation = &collected + &power * &x.p_star;
        let next_power = &power * beta;
        let cooperation = (BigRational::one() - &next_power) * &utility;
        if deviation > cooperation {
            return StabilityReport::violated(k, ViolationDetail::Discounted { deviation, cooperation });
        }
        collected += &power * &x.p;
        power = next_power;
    }
    StabilityReport::stable()
}
