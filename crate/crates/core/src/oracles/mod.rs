//! Closed-form probability bounds and the tools used to check them.
//!
//! The analytic functions here are plain formula evaluations. Their
//! independent checks live in [`montecarlo`] (simulation against the engine)
//! and in the exact binomial helpers below.

pub mod montecarlo;

use std::f64::consts::{E, PI};

use rand::Rng;

use crate::error::{JumpGaError, Result};

pub use montecarlo::{
    exact_crossover_improvement, improvement_region, mc_crossover_improvement,
    mc_single_iteration_event, mc_single_iteration_events, plateau_population_with,
    CrossoverImprovement, EventFrequencies, Frequency, IterationEvent, Region,
};

/// Absorbing random walk on `0..=a` started at `start`, stepping up with
/// probability `p` and down with `q = 1 - p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GamblerRuinParams {
    pub p: f64,
    pub a: u32,
    pub start: u32,
}

impl GamblerRuinParams {
    pub fn new(p: f64, a: u32, start: u32) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(JumpGaError::InvalidConfig(format!(
                "step probability must lie in (0, 1), got {p}"
            )));
        }
        if !(0 < start && start < a) {
            return Err(JumpGaError::InvalidConfig(format!(
                "start must satisfy 0 < {start} < {a}"
            )));
        }
        Ok(Self { p, a, start })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        1.0 - self.p
    }
}

/// Probability that the walk is absorbed at 0.
pub fn gambler_ruin_probability(params: &GamblerRuinParams) -> f64 {
    let r = params.q() / params.p;
    let (a, l) = (params.a as f64, params.start as f64);
    if (r - 1.0).abs() < 1e-12 {
        return (a - l) / a;
    }
    (r.powf(a) - r.powf(l)) / (r.powf(a) - 1.0)
}

/// Fraction of `trials` simulated walks absorbed at 0.
pub fn simulate_gambler_ruin<R: Rng + ?Sized>(
    params: &GamblerRuinParams,
    trials: u64,
    rng: &mut R,
) -> f64 {
    let mut ruined = 0u64;
    for _ in 0..trials {
        let mut x = params.start;
        while x > 0 && x < params.a {
            if rng.random_bool(params.p) {
                x += 1;
            } else {
                x -= 1;
            }
        }
        ruined += u64::from(x == 0);
    }
    ruined as f64 / trials as f64
}

/// `1 - (1 - p)^lambda`, the chance of at least one success in `lambda` trials.
pub fn amplified_probability(p: f64, lambda: u32) -> f64 {
    1.0 - (1.0 - p).powi(lambda as i32)
}

/// Bracket `[p*lambda / (1 + p*lambda), 2*p*lambda / (1 + p*lambda)]` around
/// [`amplified_probability`].
pub fn amplification_bounds(p: f64, lambda: u32) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) || lambda == 0 {
        return Err(JumpGaError::InvalidConfig(format!(
            "need p in [0, 1] and lambda >= 1, got p = {p}, lambda = {lambda}"
        )));
    }
    let pl = p * lambda as f64;
    Ok((pl / (1.0 + pl), 2.0 * pl / (1.0 + pl)))
}

/// `C(n, l)` as a float, exact for the sizes used here (n up to about 1000
/// stays within relative error 1e-12).
pub fn binomial_coefficient(n: u64, l: u64) -> f64 {
    if l > n {
        return 0.0;
    }
    let l = l.min(n - l);
    (0..l).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability mass function of `Bin(n, 1/2)`.
pub fn binomial_half_pmf(n: u64, i: u64) -> f64 {
    if i > n {
        return 0.0;
    }
    // work in logs so that large n does not overflow 2^n
    (ln_binomial(n, i) - n as f64 * std::f64::consts::LN_2).exp()
}

fn ln_binomial(n: u64, l: u64) -> f64 {
    let l = l.min(n - l);
    (0..l).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// Exact `Pr[X > n/2]` for `X ~ Bin(n, 1/2)`.
pub fn binomial_upper_half_exact(n: u64) -> f64 {
    (n / 2 + 1..=n).map(|i| binomial_half_pmf(n, i)).sum()
}

/// `(1/2)(1 - sqrt(1/pi))`, the floor of [`binomial_median_bound`] over all n.
pub fn binomial_median_floor() -> f64 {
    0.5 * (1.0 - (1.0 / PI).sqrt())
}

/// Lower bound on `Pr[X > n/2]`, `X ~ Bin(n, 1/2)`: exactly 1/2 for odd `n`,
/// `(1/2)(1 - sqrt(2/(pi n)))` for even `n`.
pub fn binomial_median_bound(n: u64) -> Result<f64> {
    match n {
        0 => Err(JumpGaError::InvalidConfig("n must be at least 1".into())),
        n if n % 2 == 1 => Ok(0.5),
        n => Ok(0.5 * (1.0 - (2.0 / (PI * n as f64)).sqrt())),
    }
}

/// `gamma = |l - n/2| / sqrt(n)`
pub fn binomial_gamma(n: u64, l: u64) -> f64 {
    (l as f64 - n as f64 / 2.0).abs() / (n as f64).sqrt()
}

/// `2^n / (2 sqrt(pi n) e^(4 gamma))` with `gamma` from [`binomial_gamma`].
///
/// This is a valid lower bound on `C(n, l)` only for moderate `gamma`; it
/// fails in the tails (for example `n = 30, l = 0` gives about 970). The
/// range it is used on in practice is `gamma <= 1`.
pub fn binomial_coefficient_floor(n: u64, l: u64) -> Result<f64> {
    if n == 0 || l > n {
        return Err(JumpGaError::InvalidConfig(format!(
            "need 0 <= l <= n and n >= 1, got n = {n}, l = {l}"
        )));
    }
    let gamma = binomial_gamma(n, l);
    Ok(2f64.powi(n as i32) / (2.0 * (PI * n as f64).sqrt() * (4.0 * gamma).exp()))
}

/// Single-iteration lower bound on `Pr[d or m increases]` from an all-plateau
/// population: `(p_c p_fu / 4) (1/2)^d (1 - (2m + 1)/mu)`.
///
/// Non-positive values (m close to mu/2) are vacuous.
pub fn p_up_formula(d: u32, m: usize, mu: usize, p_c: f64, p_fu: f64) -> f64 {
    p_c * p_fu / 4.0 * 0.5f64.powi(d as i32) * (1.0 - (2 * m + 1) as f64 / mu as f64)
}

/// Lower bounds on `Pr[d increases]` (for `d < 2k`) and on
/// `Pr[optimum created]` in one iteration from an all-plateau population:
///
/// ```text
/// p_up*  = p_c p_fu (1/2)^d / (3 e n) * (1 - 1/mu)
/// p_opt  = p_c p_fu (1/2)^d / (e n^(k - d/2))
/// ```
pub fn p_upstar_and_popt(
    d: u32,
    n: usize,
    k: usize,
    mu: usize,
    p_c: f64,
    p_fu: f64,
) -> Result<(f64, f64)> {
    if !d.is_multiple_of(2) || d as usize > 2 * k {
        return Err(JumpGaError::InvalidConfig(format!(
            "d must be even and at most 2k = {}, got {d}",
            2 * k
        )));
    }
    if 3 * k > n {
        return Err(JumpGaError::InvalidConfig(format!(
            "bounds need k <= n/3, got n = {n}, k = {k}"
        )));
    }
    let base = p_c * p_fu * 0.5f64.powi(d as i32);
    let up = base / (3.0 * E * n as f64) * (1.0 - 1.0 / mu as f64);
    let opt = base / (E * (n as f64).powi((k - d as usize / 2) as i32));
    Ok((up, opt))
}

/// Explicit constants of the crossover-improvement bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    /// `(1/2)(1 - sqrt(1/pi))`, valley and statement (3) far from the plateau
    pub c1_prime: f64,
    /// `c1' - e^(-8/3)`, slope far from the plateau, `k >= 100`
    pub c1_doubleprime: f64,
    /// `1/(6 sqrt(2 pi) e^4)`, scaled by `1/sqrt(k)` near the plateau
    pub c2: f64,
    /// `1/(6 e^4 sqrt(2 pi))`, statement (3) near the plateau
    pub c3_prime: f64,
}

impl BoundConstants {
    pub fn new() -> Self {
        let c1_prime = binomial_median_floor();
        Self {
            c1_prime,
            c1_doubleprime: c1_prime - (-8.0f64 / 3.0).exp(),
            c2: 1.0 / (6.0 * (2.0 * PI).sqrt() * E.powi(4)),
            c3_prime: 1.0 / (6.0 * E.powi(4) * (2.0 * PI).sqrt()),
        }
    }
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self::new()
    }
}
