//! Monte Carlo checks of the single-iteration and crossover-improvement bounds.
//!
//! Trial `i` of a check seeded with `seed` uses the stream
//! `seed_sequence(seed, i + 1)`, so results do not depend on how trials are
//! scheduled.

use serde::Serialize;

use crate::diversity::{self, DiversitySnapshot};
use crate::engine::{Engine, GaConfig};
use crate::error::{JumpGaError, Result};
use crate::genotype::Genotype;
use crate::jump::{is_optimum, jump_fitness, on_plateau, FitnessSpec};
use crate::operators::uniform_crossover;
use crate::population::Population;
use crate::rng::{rng_from_seed, seed_sequence};
use crate::selection::PairSelector;

use super::binomial_half_pmf;

pub const MIN_ITERATION_TRIALS: u64 = 10_000;

/// Hit count out of a number of independent trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn estimate(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// Three binomial standard errors at the empirical frequency.
    pub fn three_sigma(&self) -> f64 {
        let p = self.estimate();
        3.0 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `estimate >= bound - 3 sigma`
    pub fn supports_lower_bound(&self, bound: f64) -> bool {
        self.estimate() >= bound - self.three_sigma()
    }

    fn record(&mut self, hit: bool) {
        self.trials += 1;
        self.hits += u64::from(hit);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IterationEvent {
    /// `d` grows, or `d` stays and `m` grows.
    DOrMIncreases,
    DIncreases,
    /// The offspring is the all-ones string.
    OptimumCreated,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventFrequencies {
    pub d_or_m_increases: Frequency,
    pub d_increases: Frequency,
    pub optimum_created: Frequency,
}

impl EventFrequencies {
    pub fn get(&self, event: IterationEvent) -> Frequency {
        match event {
            IterationEvent::DOrMIncreases => self.d_or_m_increases,
            IterationEvent::DIncreases => self.d_increases,
            IterationEvent::OptimumCreated => self.optimum_created,
        }
    }
}

/// All-plateau population with prescribed `(d, m)`.
///
/// The base string has its `k` zeros at the first `k` positions. A partner
/// moves `d/2` of those zeros onto one-positions, so it sits at distance `d`
/// from the base. The population is `m` partners followed by `mu - m` bases,
/// which makes the max-distance graph complete bipartite `K(m, mu - m)`.
pub fn plateau_population_with(
    spec: FitnessSpec,
    mu: usize,
    d: u32,
    m: usize,
) -> Result<Population> {
    let (n, k) = (spec.n(), spec.k());
    let half = d as usize / 2;
    if !d.is_multiple_of(2) || half > k || half > n - k {
        return Err(JumpGaError::InvalidConfig(format!(
            "plateau distance must be even and at most 2 min(k, n - k), got d = {d} for n = {n}, k = {k}"
        )));
    }
    if d == 0 && m != 0 || d > 0 && (m == 0 || 2 * m > mu) || mu < 2 {
        return Err(JumpGaError::InvalidConfig(format!(
            "cannot build m = {m} disjoint pairs at d = {d} with mu = {mu}"
        )));
    }
    let base = Genotype::from_bits(&(0..n).map(|i| i >= k).collect::<Vec<_>>())?;
    let flips: Vec<usize> = (0..half).chain(k..k + half).collect();
    let partner = base.with_flipped(&flips)?;
    let slots = (0..mu)
        .map(|i| if i < m { partner.clone() } else { base.clone() })
        .collect();
    Population::new(spec, slots)
}

/// Runs `trials` independent single iterations from `population` and counts
/// all three events, classifying each outcome by a from-scratch `(d, m)`.
pub fn mc_single_iteration_events(
    population: &Population,
    selector: PairSelector,
    p_c: f64,
    trials: u64,
    seed: u64,
) -> Result<EventFrequencies> {
    if trials < MIN_ITERATION_TRIALS {
        return Err(JumpGaError::InvalidConfig(format!(
            "at least {MIN_ITERATION_TRIALS} trials are required, got {trials}"
        )));
    }
    let spec = *population.spec();
    if !population.all_on_plateau() {
        return Err(JumpGaError::ContractViolation(
            "every member must be on the plateau".into(),
        ));
    }
    let config = GaConfig::builder(spec.n(), spec.k())
        .mu(population.len())
        .p_c(p_c)
        .pair_selector(selector)
        .max_evaluations(u64::MAX)
        .build()?;
    let before = diversity::snapshot(population.genotypes())?;
    let mut out = EventFrequencies::default();
    for i in 0..trials {
        let rng = rng_from_seed(seed_sequence(seed, i + 1));
        let mut engine = Engine::from_population(&config, population.clone(), rng)?;
        let record = engine.step()?;
        let (d_up, d_or_m_up) = match record.replaced_slot {
            Some(slot) if population.genotype(slot) != &record.offspring => {
                compare(&before, engine.population())?
            }
            _ => (false, false),
        };
        out.d_increases.record(d_up);
        out.d_or_m_increases.record(d_or_m_up);
        out.optimum_created
            .record(is_optimum(&record.offspring, &spec));
    }
    Ok(out)
}

fn compare(before: &DiversitySnapshot, after: &Population) -> Result<(bool, bool)> {
    let matrix = diversity::DistanceMatrix::new(after.genotypes())?;
    let d = matrix.max_distance();
    if d != before.d {
        return Ok((d > before.d, d > before.d));
    }
    Ok((false, matrix.max_disjoint_pairs() > before.m))
}

/// Frequency of a single event; see [`mc_single_iteration_events`].
pub fn mc_single_iteration_event(
    population: &Population,
    selector: PairSelector,
    p_c: f64,
    event: IterationEvent,
    trials: u64,
    seed: u64,
) -> Result<Frequency> {
    Ok(mc_single_iteration_events(population, selector, p_c, trials, seed)?.get(event))
}

/// Where a non-plateau, non-optimal point sits relative to the plateau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// `|y|_1 > n - k`
    Valley,
    /// `|y|_1 <= n - k - 8 sqrt(k)`
    SlopeFar,
    /// `n - k - 8 sqrt(k) < |y|_1 < n - k`
    SlopeNear,
}

pub fn improvement_region(y: &Genotype, spec: &FitnessSpec) -> Result<Region> {
    jump_fitness(y, spec)?;
    if on_plateau(y, spec) || is_optimum(y, spec) {
        return Err(JumpGaError::ContractViolation(
            "region is defined only off the plateau and away from the optimum".into(),
        ));
    }
    let ones = y.ones_count();
    let plateau = spec.plateau_ones();
    Ok(if ones > plateau {
        Region::Valley
    } else if ones as f64 <= plateau as f64 - 8.0 * (spec.k() as f64).sqrt() {
        Region::SlopeFar
    } else {
        Region::SlopeNear
    })
}

/// Frequencies of `f(z) > f(y)` and `f(z) > f(y) - sqrt(k)` for uniform
/// crossover `z` of `x` and `y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossoverImprovement {
    pub improves: Frequency,
    pub near: Frequency,
}

fn check_improvement_pair(x: &Genotype, y: &Genotype, spec: &FitnessSpec) -> Result<()> {
    let (fx, fy) = (jump_fitness(x, spec)?, jump_fitness(y, spec)?);
    if x == y || fy > fx || is_optimum(x, spec) {
        return Err(JumpGaError::ContractViolation(
            "need x != y, f(y) <= f(x) and x not optimal".into(),
        ));
    }
    Ok(())
}

pub fn mc_crossover_improvement(
    x: &Genotype,
    y: &Genotype,
    spec: &FitnessSpec,
    trials: u64,
    seed: u64,
) -> Result<CrossoverImprovement> {
    check_improvement_pair(x, y, spec)?;
    let fy = jump_fitness(y, spec)?.0 as f64;
    let slack = (spec.k() as f64).sqrt();
    let mut rng = rng_from_seed(seed);
    let mut out = CrossoverImprovement::default();
    for _ in 0..trials {
        let z = uniform_crossover(x, y, &mut rng)?;
        let fz = jump_fitness(&z, spec)?.0 as f64;
        out.improves.record(fz > fy);
        out.near.record(fz > fy - slack);
    }
    Ok(out)
}

/// Exact probabilities of the two events of [`mc_crossover_improvement`].
///
/// `|z|_1` is the agreement part of `x` and `y` plus `Bin(H(x, y), 1/2)`.
pub fn exact_crossover_improvement(
    x: &Genotype,
    y: &Genotype,
    spec: &FitnessSpec,
) -> Result<(f64, f64)> {
    check_improvement_pair(x, y, spec)?;
    let delta = crate::genotype::hamming(x, y)? as usize;
    let common_ones = (x.ones_count() + y.ones_count() - delta) / 2;
    let fy = jump_fitness(y, spec)?.0 as f64;
    let slack = (spec.k() as f64).sqrt();
    let (mut improves, mut near) = (0.0, 0.0);
    for i in 0..=delta {
        let p = binomial_half_pmf(delta as u64, i as u64);
        let fz = spec.value_for_ones(common_ones + i).0 as f64;
        if fz > fy {
            improves += p;
        }
        if fz > fy - slack {
            near += p;
        }
    }
    Ok((improves, near))
}
