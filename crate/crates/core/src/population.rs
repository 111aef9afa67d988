//! Fixed-size population: genotype slots with cached fitness and an
//! incrementally maintained distance matrix.

use crate::diversity::{DistanceMatrix, DiversitySnapshot};
use crate::error::{JumpGaError, Result};
use crate::genotype::Genotype;
use crate::jump::{jump_fitness, FitnessSpec, FitnessValue};

#[derive(Clone, Debug)]
pub struct Population {
    spec: FitnessSpec,
    slots: Vec<Genotype>,
    fitness: Vec<FitnessValue>,
    matrix: DistanceMatrix,
    settled: usize,
}

impl Population {
    /// Evaluates every member once.
    pub fn new(spec: FitnessSpec, slots: Vec<Genotype>) -> Result<Self> {
        if slots.is_empty() {
            return Err(JumpGaError::ContractViolation(
                "population must not be empty".into(),
            ));
        }
        let fitness = slots
            .iter()
            .map(|x| jump_fitness(x, &spec))
            .collect::<Result<Vec<_>>>()?;
        let matrix = DistanceMatrix::new(&slots)?;
        let settled = slots.iter().filter(|x| is_settled(x, &spec)).count();
        Ok(Self {
            spec,
            slots,
            fitness,
            matrix,
            settled,
        })
    }

    #[inline]
    pub fn spec(&self) -> &FitnessSpec {
        &self.spec
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    #[inline]
    pub fn genotypes(&self) -> &[Genotype] {
        &self.slots
    }

    #[inline]
    pub fn genotype(&self, slot: usize) -> &Genotype {
        &self.slots[slot]
    }

    #[inline]
    pub fn fitness(&self, slot: usize) -> FitnessValue {
        self.fitness[slot]
    }

    #[inline]
    pub fn fitness_values(&self) -> &[FitnessValue] {
        &self.fitness
    }

    #[inline]
    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    pub fn min_fitness(&self) -> FitnessValue {
        *self.fitness.iter().min().expect("non-empty population")
    }

    pub fn best_fitness(&self) -> FitnessValue {
        *self.fitness.iter().max().expect("non-empty population")
    }

    /// Every slot is on the plateau or is the optimum.
    #[inline]
    pub fn all_settled(&self) -> bool {
        self.settled == self.slots.len()
    }

    pub fn all_on_plateau(&self) -> bool {
        self.slots
            .iter()
            .all(|x| x.ones_count() == self.spec.plateau_ones())
    }

    pub fn contains_optimum(&self) -> bool {
        self.slots.iter().any(|x| x.ones_count() == self.spec.n())
    }

    pub fn snapshot(&self) -> DiversitySnapshot {
        self.matrix.snapshot()
    }

    /// Overwrites `slot` with an already evaluated genotype.
    pub fn replace(&mut self, slot: usize, genotype: Genotype, fitness: FitnessValue) {
        debug_assert_eq!(genotype.len(), self.spec.n());
        debug_assert_eq!(Some(fitness), jump_fitness(&genotype, &self.spec).ok());
        if is_settled(&self.slots[slot], &self.spec) {
            self.settled -= 1;
        }
        if is_settled(&genotype, &self.spec) {
            self.settled += 1;
        }
        self.slots[slot] = genotype;
        self.fitness[slot] = fitness;
        self.matrix.update_on_replacement(&self.slots, slot);
    }
}

fn is_settled(x: &Genotype, spec: &FitnessSpec) -> bool {
    let ones = x.ones_count();
    ones == spec.plateau_ones() || ones == spec.n()
}
