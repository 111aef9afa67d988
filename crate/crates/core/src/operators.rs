//! Variation and survival operators of the (mu+1) GA.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::Result;
use crate::genotype::Genotype;
use crate::jump::FitnessValue;
use crate::population::Population;

/// Telemetry for one produced offspring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffspringRecord {
    pub offspring: Genotype,
    pub fitness: FitnessValue,
    pub via_crossover: bool,
    /// One slot for mutation-only offspring, two for crossover offspring.
    pub parents: Vec<usize>,
    pub bits_flipped_by_mutation: usize,
    /// Slot overwritten by the offspring, if it survived.
    pub replaced_slot: Option<usize>,
}

/// Takes each bit from `x1` or `x2` with probability 1/2, independently.
pub fn uniform_crossover<R: Rng + ?Sized>(
    x1: &Genotype,
    x2: &Genotype,
    rng: &mut R,
) -> Result<Genotype> {
    x1.check_same_len(x2)?;
    let words = x1
        .words()
        .iter()
        .zip(x2.words())
        .map(|(&a, &b)| {
            let take_first: u64 = rng.random();
            (a & take_first) | (b & !take_first)
        })
        .collect();
    Ok(Genotype::from_words_unchecked(x1.len(), words))
}

/// Flips each bit independently with probability `1/n`.
pub fn standard_bit_mutation<R: Rng + ?Sized>(x: &Genotype, rng: &mut R) -> Genotype {
    standard_bit_mutation_counted(x, rng).0
}

/// [`standard_bit_mutation`] that also reports how many bits were flipped.
///
/// Flip positions are generated by geometric skipping, which has the same
/// law as `n` independent Bernoulli(1/n) trials.
pub fn standard_bit_mutation_counted<R: Rng + ?Sized>(
    x: &Genotype,
    rng: &mut R,
) -> (Genotype, usize) {
    let n = x.len();
    let gap = Geometric::new(1.0 / n as f64).expect("1/n is a valid probability");
    let mut words = x.words().to_vec();
    let mut flips = 0;
    let mut pos = gap.sample(rng);
    while pos < n as u64 {
        let i = pos as usize;
        words[i / 64] ^= 1 << (i % 64);
        flips += 1;
        pos = pos.saturating_add(1).saturating_add(gap.sample(rng));
    }
    (Genotype::from_words_unchecked(n, words), flips)
}

/// Steady-state elitist survival: a uniformly chosen minimum-fitness slot `z`
/// is overwritten by `y` when `f(y) >= f(z)`. Returns the overwritten slot.
///
/// The tie-break draw is taken only when `y` is accepted.
pub fn elitist_replace<R: Rng + ?Sized>(
    population: &mut Population,
    y: Genotype,
    fitness: FitnessValue,
    rng: &mut R,
) -> Option<usize> {
    let worst = population.min_fitness();
    if fitness < worst {
        return None;
    }
    let candidates: Vec<usize> = population
        .fitness_values()
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f == worst)
        .map(|(i, _)| i)
        .collect();
    let slot = candidates[rng.random_range(0..candidates.len())];
    population.replace(slot, y, fitness);
    Some(slot)
}
