//! Parent selection: the crossover pair distribution and the mutation parent
//! distribution.
//!
//! Crossover pairs are unordered pairs of distinct population slots. The
//! probability that a selector returns a pair at the population's maximum
//! distance is what [`p_fu_exact`] computes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JumpGaError, Result};
use crate::population::Population;

/// Largest population for which the tournament hit probability is reported.
pub const TOURNAMENT_EXACT_LIMIT: usize = 64;

/// Crossover parent-selection distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum PairSelector {
    /// Uniform over all slot pairs.
    UniformPair,
    /// Uniform over slot pairs at the maximum distance.
    #[default]
    FurthestUniform,
    /// Best of `size` uniformly drawn pairs (with replacement), ties uniform.
    DistanceTournament { size: u32 },
    /// Rank-`j` pair (by non-ascending distance) with weight `j^-exponent`.
    DistancePowerLaw { exponent: f64 },
}

impl PairSelector {
    pub const DEFAULT_POWER_LAW_EXPONENT: f64 = 2.0;

    pub fn tournament(size: u32) -> Result<Self> {
        let s = PairSelector::DistanceTournament { size };
        s.validate()?;
        Ok(s)
    }

    pub fn power_law(exponent: f64) -> Result<Self> {
        let s = PairSelector::DistancePowerLaw { exponent };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PairSelector::DistanceTournament { size: 0 } => Err(JumpGaError::InvalidConfig(
                "tournament size must be at least 1".into(),
            )),
            PairSelector::DistancePowerLaw { exponent }
                if !(exponent > 1.0 && exponent.is_finite()) =>
            {
                Err(JumpGaError::InvalidConfig(format!(
                    "power-law exponent must be a finite value > 1, got {exponent}"
                )))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PairSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSelector::UniformPair => f.write_str("uniform-pair"),
            PairSelector::FurthestUniform => f.write_str("furthest"),
            PairSelector::DistanceTournament { size } => write!(f, "tournament:{size}"),
            PairSelector::DistancePowerLaw { exponent } => write!(f, "powerlaw:{exponent}"),
        }
    }
}

impl FromStr for PairSelector {
    type Err = JumpGaError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed = match s.split_once(':') {
            None => match s {
                "uniform-pair" | "uniform" => PairSelector::UniformPair,
                "furthest" => PairSelector::FurthestUniform,
                "powerlaw" => PairSelector::DistancePowerLaw {
                    exponent: Self::DEFAULT_POWER_LAW_EXPONENT,
                },
                _ => return Err(JumpGaError::Parse(format!("unknown selector {s:?}"))),
            },
            Some(("tournament", size)) => PairSelector::DistanceTournament {
                size: size
                    .parse()
                    .map_err(|_| JumpGaError::Parse(format!("invalid tournament size {size:?}")))?,
            },
            Some(("powerlaw", beta)) => PairSelector::DistancePowerLaw {
                exponent: beta.parse().map_err(|_| {
                    JumpGaError::Parse(format!("invalid power-law exponent {beta:?}"))
                })?,
            },
            Some(_) => return Err(JumpGaError::Parse(format!("unknown selector {s:?}"))),
        };
        parsed.validate()?;
        Ok(parsed)
    }
}

/// Mutation parent-selection distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MutationSelector {
    #[default]
    Uniform,
}

#[inline]
fn pair_count(mu: usize) -> usize {
    mu * (mu - 1) / 2
}

/// Uniform unordered pair of distinct slots, returned as `(lo, hi)`.
#[inline]
fn uniform_slot_pair<R: Rng + ?Sized>(mu: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..mu);
    let mut b = rng.random_range(0..mu - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Selector bound to a population size, with the power-law rank weights
/// precomputed. Engines hold one of these for the whole run.
#[derive(Clone, Debug)]
pub struct CrossoverSelection {
    selector: PairSelector,
    mu: usize,
    rank_cdf: Vec<f64>,
}

impl CrossoverSelection {
    pub fn new(selector: PairSelector, mu: usize) -> Result<Self> {
        selector.validate()?;
        if mu < 2 {
            return Err(JumpGaError::ContractViolation(format!(
                "crossover selection needs at least two slots, got {mu}"
            )));
        }
        let rank_cdf = match selector {
            PairSelector::DistancePowerLaw { exponent } => {
                let mut acc = 0.0;
                (1..=pair_count(mu))
                    .map(|j| {
                        acc += (j as f64).powf(-exponent);
                        acc
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(Self {
            selector,
            mu,
            rank_cdf,
        })
    }

    pub fn selector(&self) -> PairSelector {
        self.selector
    }

    pub fn select<R: Rng + ?Sized>(
        &self,
        population: &Population,
        rng: &mut R,
    ) -> Result<(usize, usize)> {
        if population.len() != self.mu {
            return Err(JumpGaError::ContractViolation(format!(
                "selector built for {} slots used on {}",
                self.mu,
                population.len()
            )));
        }
        let matrix = population.matrix();
        let mu = self.mu;
        Ok(match self.selector {
            PairSelector::UniformPair => uniform_slot_pair(mu, rng),
            PairSelector::FurthestUniform => {
                let d = matrix.max_distance();
                let count = matrix.max_pair_count();
                let pick = rng.random_range(0..count);
                matrix.pairs_at(d).nth(pick).expect("pick < count")
            }
            PairSelector::DistanceTournament { size } => {
                let mut best = uniform_slot_pair(mu, rng);
                let mut best_dist = matrix.get(best.0, best.1);
                let mut ties = 1u32;
                for _ in 1..size {
                    let cand = uniform_slot_pair(mu, rng);
                    let dist = matrix.get(cand.0, cand.1);
                    if dist > best_dist {
                        best = cand;
                        best_dist = dist;
                        ties = 1;
                    } else if dist == best_dist {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            best = cand;
                        }
                    }
                }
                best
            }
            PairSelector::DistancePowerLaw { .. } => {
                let total = *self.rank_cdf.last().expect("at least one pair");
                let u = rng.random::<f64>() * total;
                let rank = self
                    .rank_cdf
                    .partition_point(|&c| c <= u)
                    .min(self.rank_cdf.len() - 1);
                let mut pairs: Vec<(u32, usize, usize)> = (0..mu)
                    .flat_map(|i| ((i + 1)..mu).map(move |j| (i, j)))
                    .map(|(i, j)| (matrix.get(i, j), i, j))
                    .collect();
                let (_, &mut (_, i, j), _) = pairs.select_nth_unstable_by(rank, |a, b| {
                    b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
                });
                (i, j)
            }
        })
    }

    /// Exact probability that [`select`](Self::select) returns a pair at
    /// distance `d(P)` for this population.
    pub fn p_fu_exact(&self, population: &Population) -> Result<f64> {
        let matrix = population.matrix();
        let total = pair_count(population.len());
        let hits = matrix.max_pair_count();
        Ok(match self.selector {
            PairSelector::FurthestUniform => 1.0,
            PairSelector::UniformPair => hits as f64 / total as f64,
            PairSelector::DistanceTournament { size } => {
                if population.len() > TOURNAMENT_EXACT_LIMIT {
                    return Err(JumpGaError::UnsupportedSize(format!(
                        "tournament hit probability supported up to mu = {TOURNAMENT_EXACT_LIMIT}, got {}",
                        population.len()
                    )));
                }
                let miss = 1.0 - hits as f64 / total as f64;
                1.0 - miss.powi(size as i32)
            }
            // max-distance pairs occupy ranks 1..=hits
            PairSelector::DistancePowerLaw { .. } => {
                self.rank_cdf[hits - 1] / self.rank_cdf[total - 1]
            }
        })
    }
}

/// Draws an unordered pair of distinct slots from the crossover distribution.
pub fn select_crossover_parents<R: Rng + ?Sized>(
    population: &Population,
    selector: &PairSelector,
    rng: &mut R,
) -> Result<(usize, usize)> {
    CrossoverSelection::new(*selector, population.len())?.select(population, rng)
}

pub fn select_mutation_parent<R: Rng + ?Sized>(
    population: &Population,
    selector: &MutationSelector,
    rng: &mut R,
) -> usize {
    match selector {
        MutationSelector::Uniform => rng.random_range(0..population.len()),
    }
}

/// Probability that `selector` returns a maximally distant pair of `population`.
pub fn p_fu_exact(population: &Population, selector: &PairSelector) -> Result<f64> {
    CrossoverSelection::new(*selector, population.len())?.p_fu_exact(population)
}
