//! The Jump_k fitness family.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JumpGaError, Result};
use crate::genotype::Genotype;

/// Problem dimension `n` and jump size `k`, with `1 <= k <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FitnessSpec {
    n: usize,
    k: usize,
}

impl FitnessSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(JumpGaError::InvalidConfig("n must be positive".into()));
        }
        if k == 0 || k > n {
            return Err(JumpGaError::InvalidConfig(format!(
                "jump size k must satisfy 1 <= k <= n (k = {k}, n = {n})"
            )));
        }
        Ok(Self { n, k })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of ones of every plateau point.
    #[inline]
    pub fn plateau_ones(&self) -> usize {
        self.n - self.k
    }

    /// Fitness of the all-ones optimum, `n + k`.
    #[inline]
    pub fn optimum_value(&self) -> FitnessValue {
        FitnessValue((self.n + self.k) as u64)
    }

    /// Fitness shared by plateau points, `n`.
    #[inline]
    pub fn plateau_value(&self) -> FitnessValue {
        FitnessValue(self.n as u64)
    }

    /// Whether `k` exceeds `n/3`, outside the range the plateau-escape
    /// bound is stated for.
    pub fn beyond_plateau_bound_range(&self) -> bool {
        3 * self.k > self.n
    }

    /// Jump_k as a function of the ones count alone.
    #[inline]
    pub fn value_for_ones(&self, ones: usize) -> FitnessValue {
        debug_assert!(ones <= self.n);
        if ones == self.n || ones <= self.n - self.k {
            FitnessValue((ones + self.k) as u64)
        } else {
            FitnessValue((self.n - ones) as u64)
        }
    }

    fn check(&self, x: &Genotype) -> Result<()> {
        if x.len() != self.n {
            return Err(JumpGaError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// A Jump_k fitness value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FitnessValue(pub u64);

impl fmt::Display for FitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Jump_k(x): `|x|_1 + k` on the slope and at the optimum, `n - |x|_1` in the valley.
pub fn jump_fitness(x: &Genotype, spec: &FitnessSpec) -> Result<FitnessValue> {
    spec.check(x)?;
    Ok(spec.value_for_ones(x.ones_count()))
}

/// True iff `|x|_1 = n - k`. Returns false on a dimension mismatch.
pub fn on_plateau(x: &Genotype, spec: &FitnessSpec) -> bool {
    x.len() == spec.n && x.ones_count() == spec.plateau_ones()
}

/// True iff `x` is the all-ones string of the right length.
pub fn is_optimum(x: &Genotype, spec: &FitnessSpec) -> bool {
    x.len() == spec.n && x.ones_count() == spec.n
}

pub fn random_genotype<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Genotype> {
    Genotype::random(n, rng)
}

/// Uniform over strings with exactly `n - k` ones.
pub fn random_plateau_genotype<R: Rng + ?Sized>(
    spec: &FitnessSpec,
    rng: &mut R,
) -> Result<Genotype> {
    Genotype::random_with_ones(spec.n, spec.plateau_ones(), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    #[test]
    fn jump_examples() {
        let spec = FitnessSpec::new(6, 2).unwrap();
        assert_eq!(jump_fitness(&g("111111"), &spec).unwrap(), FitnessValue(8));
        assert_eq!(jump_fitness(&g("111100"), &spec).unwrap(), FitnessValue(6));
        assert_eq!(jump_fitness(&g("111110"), &spec).unwrap(), FitnessValue(1));
    }

    #[test]
    fn jump_rejects_wrong_length() {
        let spec = FitnessSpec::new(6, 2).unwrap();
        assert!(matches!(
            jump_fitness(&g("11111"), &spec),
            Err(JumpGaError::DimensionMismatch {
                expected: 6,
                found: 5
            })
        ));
    }

    #[test]
    fn plateau_examples() {
        let spec = FitnessSpec::new(6, 2).unwrap();
        assert!(on_plateau(&g("111100"), &spec));
        assert!(!on_plateau(&g("111111"), &spec));
        assert!(!on_plateau(&g("110100"), &spec));
    }

    #[test]
    fn spec_validation() {
        assert!(FitnessSpec::new(5, 0).is_err());
        assert!(FitnessSpec::new(5, 6).is_err());
        assert!(FitnessSpec::new(0, 0).is_err());
        // k = 1 is OneMax shifted by one
        let one = FitnessSpec::new(4, 1).unwrap();
        assert_eq!(one.value_for_ones(3), FitnessValue(4));
        assert_eq!(one.value_for_ones(4), FitnessValue(5));
        assert!(FitnessSpec::new(9, 4).unwrap().beyond_plateau_bound_range());
        assert!(!FitnessSpec::new(9, 3).unwrap().beyond_plateau_bound_range());
    }

    #[test]
    fn shape_of_jump_in_ones_count() {
        for n in 1..=12 {
            for k in 1..=n {
                let spec = FitnessSpec::new(n, k).unwrap();
                let f = |o: usize| spec.value_for_ones(o).0;
                for o in 1..=(n - k) {
                    assert!(f(o) > f(o - 1));
                }
                for o in (n - k + 1)..n.saturating_sub(1) {
                    assert!(f(o + 1) < f(o));
                }
                assert_eq!(f(n), (n + k) as u64);
                assert!((0..n).all(|o| f(o) < f(n)));
            }
        }
    }

    #[test]
    fn plateau_sampler_lands_on_plateau() {
        let spec = FitnessSpec::new(30, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = random_plateau_genotype(&spec, &mut rng).unwrap();
            assert!(on_plateau(&x, &spec));
            assert_eq!(jump_fitness(&x, &spec).unwrap(), spec.plateau_value());
        }
    }
}
