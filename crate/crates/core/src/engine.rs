//! The (mu+1) GA main loop with hitting-time detection and diversity tracing.
//!
//! One iteration draws from the run's single RNG stream in this order:
//!
//! 1. branch: one `f64`, crossover iff it is `< p_c`
//! 2. parents: the crossover pair, or the mutation parent
//! 3. crossover mask (crossover branch only), one `u64` per word
//! 4. mutation: geometric gaps between flipped positions
//! 5. survival tie-break among worst slots, only if the offspring is accepted
//!
//! Evaluations are the clock. Initialisation costs `mu` evaluations and each
//! iteration costs one, so `evaluations = mu + iterations`. The budget
//! `max_evaluations` includes the initial population.

use std::fmt;
use std::str::FromStr;

use log::warn;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{self, DiversitySnapshot};
use crate::error::{JumpGaError, Result};
use crate::genotype::Genotype;
use crate::jump::{jump_fitness, random_genotype, random_plateau_genotype, FitnessSpec};
use crate::operators::{
    elitist_replace, standard_bit_mutation_counted, uniform_crossover, OffspringRecord,
};
use crate::population::Population;
use crate::rng::{rng_from_seed, seed_sequence, RunRng};
use crate::selection::{
    select_mutation_parent, CrossoverSelection, MutationSelector, PairSelector,
    TOURNAMENT_EXACT_LIMIT,
};

pub const RESULT_SCHEMA: &str = "jumpga-result-v1";

/// Largest population for which `verify` compares the maintained diversity
/// snapshot against a from-scratch recomputation.
pub const VERIFY_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMode {
    /// Every slot uniform over `{0,1}^n`.
    #[default]
    UniformRandom,
    /// Every slot uniform over the plateau.
    AllOnPlateau,
}

impl fmt::Display for InitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitMode::UniformRandom => "random",
            InitMode::AllOnPlateau => "plateau",
        })
    }
}

impl FromStr for InitMode {
    type Err = JumpGaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(InitMode::UniformRandom),
            "plateau" => Ok(InitMode::AllOnPlateau),
            other => Err(JumpGaError::Parse(format!("unknown init mode {other:?}"))),
        }
    }
}

/// When a run stops before its budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopRule {
    /// Stop once the optimum is in the population.
    #[default]
    Optimum,
    /// Stop once every slot is on the plateau or optimal.
    AllOnPlateau,
}

impl fmt::Display for StopRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopRule::Optimum => "optimum",
            StopRule::AllOnPlateau => "plateau",
        })
    }
}

impl FromStr for StopRule {
    type Err = JumpGaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "optimum" => Ok(StopRule::Optimum),
            "plateau" => Ok(StopRule::AllOnPlateau),
            other => Err(JumpGaError::Parse(format!("unknown stop rule {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    OptimumFound,
    PlateauReached,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub spec: FitnessSpec,
    pub mu: usize,
    pub p_c: f64,
    pub pair_selector: PairSelector,
    pub mutation_selector: MutationSelector,
    pub init: InitMode,
    pub seed: u64,
    /// Total evaluation budget, initial population included.
    pub max_evaluations: u64,
    /// Iterations between trajectory samples; 0 disables tracing.
    pub trace_stride: u64,
    pub stop: StopRule,
    /// Cross-check the maintained diversity snapshot at every trace sample.
    pub verify: bool,
}

impl GaConfig {
    pub const DEFAULT_MU: usize = 20;
    pub const DEFAULT_P_C: f64 = 0.5;
    pub const DEFAULT_BUDGET: u64 = 1_000_000;

    pub fn builder(n: usize, k: usize) -> GaConfigBuilder {
        GaConfigBuilder {
            n,
            k,
            mu: Self::DEFAULT_MU,
            p_c: Self::DEFAULT_P_C,
            pair_selector: PairSelector::default(),
            mutation_selector: MutationSelector::default(),
            init: InitMode::default(),
            seed: 0,
            max_evaluations: Self::DEFAULT_BUDGET,
            trace_stride: 0,
            stop: StopRule::default(),
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 2 {
            return Err(JumpGaError::InvalidConfig(format!(
                "mu must be at least 2, got {}",
                self.mu
            )));
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            return Err(JumpGaError::InvalidConfig(format!(
                "p_c must lie in [0, 1], got {}",
                self.p_c
            )));
        }
        if self.max_evaluations < self.mu as u64 {
            return Err(JumpGaError::InvalidConfig(format!(
                "budget {} is smaller than mu = {}",
                self.max_evaluations, self.mu
            )));
        }
        self.pair_selector.validate()
    }

    /// Same configuration with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct GaConfigBuilder {
    n: usize,
    k: usize,
    mu: usize,
    p_c: f64,
    pair_selector: PairSelector,
    mutation_selector: MutationSelector,
    init: InitMode,
    seed: u64,
    max_evaluations: u64,
    trace_stride: u64,
    stop: StopRule,
    verify: bool,
}

impl GaConfigBuilder {
    pub fn mu(mut self, mu: usize) -> Self {
        self.mu = mu;
        self
    }

    pub fn p_c(mut self, p_c: f64) -> Self {
        self.p_c = p_c;
        self
    }

    pub fn pair_selector(mut self, selector: PairSelector) -> Self {
        self.pair_selector = selector;
        self
    }

    pub fn mutation_selector(mut self, selector: MutationSelector) -> Self {
        self.mutation_selector = selector;
        self
    }

    pub fn init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_evaluations(mut self, budget: u64) -> Self {
        self.max_evaluations = budget;
        self
    }

    pub fn trace_stride(mut self, stride: u64) -> Self {
        self.trace_stride = stride;
        self
    }

    pub fn stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn verify(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }

    pub fn build(self) -> Result<GaConfig> {
        let config = GaConfig {
            spec: FitnessSpec::new(self.n, self.k)
                .map_err(|e| JumpGaError::InvalidConfig(e.to_string()))?,
            mu: self.mu,
            p_c: self.p_c,
            pair_selector: self.pair_selector,
            mutation_selector: self.mutation_selector,
            init: self.init,
            seed: self.seed,
            max_evaluations: self.max_evaluations,
            trace_stride: self.trace_stride,
            stop: self.stop,
            verify: self.verify,
        };
        config.validate()?;
        Ok(config)
    }
}

/// One trajectory sample, taken after `t` iterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: u64,
    pub evaluations: u64,
    pub d: u32,
    pub m: usize,
    pub max_pair_count: usize,
    pub min_fitness: u64,
    pub best_fitness: u64,
}

/// Outcome of one run, serialised as a flat JSON object.
///
/// Hitting times count evaluations including the `mu` spent on the initial
/// population; `None` means the event did not happen within the budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub schema: String,
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub p_c: f64,
    pub selector: String,
    pub init: String,
    pub stop: String,
    pub seed: u64,
    pub max_evaluations: u64,
    pub evaluations_to_all_plateau: Option<u64>,
    pub evaluations_to_optimum: Option<u64>,
    pub total_evaluations: u64,
    pub final_best_fitness: u64,
    pub stop_reason: StopReason,
    /// Largest `d` seen while the optimum was absent.
    pub peak_max_distance: u32,
    /// Minimum over trace samples of the exact max-pair hit probability of the
    /// selector. Only recorded when tracing is on and the value is computable.
    pub running_min_p_fu: Option<f64>,
    #[serde(skip)]
    pub trajectory: Vec<TraceRecord>,
}

/// A running GA. Use [`run`] for the common case; the stepping interface is
/// for callers that need to inspect individual iterations.
pub struct Engine {
    config: GaConfig,
    population: Population,
    selection: CrossoverSelection,
    rng: RunRng,
    iterations: u64,
    evaluations: u64,
    plateau_hit: Option<u64>,
    optimum_hit: Option<u64>,
    peak_d: u32,
    running_min_p_fu: Option<f64>,
    trajectory: Vec<TraceRecord>,
}

impl Engine {
    /// Validates `config`, seeds the stream and evaluates the initial population.
    pub fn new(config: &GaConfig) -> Result<Self> {
        config.validate()?;
        let spec = config.spec;
        if spec.beyond_plateau_bound_range() {
            warn!(
                "k = {} exceeds n/3 for n = {}; runtime guarantees do not cover this setting",
                spec.k(),
                spec.n()
            );
        }
        let mut rng = rng_from_seed(config.seed);
        let slots = (0..config.mu)
            .map(|_| match config.init {
                InitMode::UniformRandom => random_genotype(spec.n(), &mut rng),
                InitMode::AllOnPlateau => random_plateau_genotype(&spec, &mut rng),
            })
            .collect::<Result<Vec<Genotype>>>()?;
        let population = Population::new(spec, slots)?;
        Self::from_population(config, population, rng)
    }

    /// Starts from a given population whose `mu` evaluations are already spent.
    pub fn from_population(config: &GaConfig, population: Population, rng: RunRng) -> Result<Self> {
        config.validate()?;
        if population.len() != config.mu || *population.spec() != config.spec {
            return Err(JumpGaError::ContractViolation(format!(
                "population of {} slots for n = {} does not match config (mu = {}, n = {})",
                population.len(),
                population.spec().n(),
                config.mu,
                config.spec.n()
            )));
        }
        let selection = CrossoverSelection::new(config.pair_selector, config.mu)?;
        let mut engine = Self {
            config: config.clone(),
            population,
            selection,
            rng,
            iterations: 0,
            evaluations: config.mu as u64,
            plateau_hit: None,
            optimum_hit: None,
            peak_d: 0,
            running_min_p_fu: None,
            trajectory: Vec::new(),
        };
        engine.observe();
        if engine.config.trace_stride > 0 {
            engine.sample()?;
        }
        Ok(engine)
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn is_finished(&self) -> bool {
        self.stop_reason().is_some()
    }

    fn stop_reason(&self) -> Option<StopReason> {
        match self.config.stop {
            StopRule::Optimum if self.optimum_hit.is_some() => Some(StopReason::OptimumFound),
            StopRule::AllOnPlateau if self.plateau_hit.is_some() => {
                Some(StopReason::PlateauReached)
            }
            _ if self.evaluations >= self.config.max_evaluations => {
                Some(StopReason::BudgetExhausted)
            }
            _ => None,
        }
    }

    fn observe(&mut self) {
        if self.optimum_hit.is_none() {
            if self.population.contains_optimum() {
                self.optimum_hit = Some(self.evaluations);
            } else {
                self.peak_d = self.peak_d.max(self.population.matrix().max_distance());
            }
        }
        if self.plateau_hit.is_none() && self.population.all_settled() {
            self.plateau_hit = Some(self.evaluations);
        }
    }

    /// Performs one iteration regardless of the stop rule.
    pub fn step(&mut self) -> Result<OffspringRecord> {
        let via_crossover = self.rng.random::<f64>() < self.config.p_c;
        let (parents, child) = if via_crossover {
            let (a, b) = self.selection.select(&self.population, &mut self.rng)?;
            let child = uniform_crossover(
                self.population.genotype(a),
                self.population.genotype(b),
                &mut self.rng,
            )?;
            (vec![a, b], child)
        } else {
            let a = select_mutation_parent(
                &self.population,
                &self.config.mutation_selector,
                &mut self.rng,
            );
            (vec![a], self.population.genotype(a).clone())
        };
        let (offspring, bits_flipped_by_mutation) =
            standard_bit_mutation_counted(&child, &mut self.rng);
        let fitness = jump_fitness(&offspring, &self.config.spec)?;
        self.evaluations += 1;
        self.iterations += 1;
        let replaced_slot = elitist_replace(
            &mut self.population,
            offspring.clone(),
            fitness,
            &mut self.rng,
        );
        self.observe();
        if self.config.trace_stride > 0 && self.iterations.is_multiple_of(self.config.trace_stride)
        {
            self.sample()?;
        }
        Ok(OffspringRecord {
            offspring,
            fitness,
            via_crossover,
            parents,
            bits_flipped_by_mutation,
            replaced_slot,
        })
    }

    fn sample(&mut self) -> Result<()> {
        if self
            .trajectory
            .last()
            .is_some_and(|r| r.t == self.iterations)
        {
            return Ok(());
        }
        let snap = self.population.snapshot();
        self.check_snapshot(&snap)?;
        if self.config.mu <= TOURNAMENT_EXACT_LIMIT {
            let p = self.selection.p_fu_exact(&self.population)?;
            self.running_min_p_fu = Some(self.running_min_p_fu.map_or(p, |q| q.min(p)));
        }
        self.trajectory.push(TraceRecord {
            t: self.iterations,
            evaluations: self.evaluations,
            d: snap.d,
            m: snap.m,
            max_pair_count: snap.max_pair_count,
            min_fitness: self.population.min_fitness().0,
            best_fitness: self.population.best_fitness().0,
        });
        Ok(())
    }

    fn check_snapshot(&self, snap: &DiversitySnapshot) -> Result<()> {
        assert!(
            snap.m <= self.config.mu / 2,
            "m = {} exceeds mu/2 for mu = {}",
            snap.m,
            self.config.mu
        );
        if self.population.all_on_plateau() {
            assert!(
                snap.d.is_multiple_of(2),
                "odd max distance {} on an all-plateau population",
                snap.d
            );
        }
        if self.config.verify && self.config.mu <= VERIFY_LIMIT {
            let fresh = diversity::snapshot(self.population.genotypes())?;
            if fresh != *snap {
                return Err(JumpGaError::ContractViolation(format!(
                    "maintained diversity {snap:?} differs from recomputed {fresh:?} after {} iterations",
                    self.iterations
                )));
            }
        }
        Ok(())
    }

    /// Steps until the stop rule or budget ends the run.
    pub fn run_to_end(mut self) -> Result<RunResult> {
        while !self.is_finished() {
            self.step()?;
        }
        if self.config.trace_stride > 0 {
            self.sample()?;
        }
        let config = &self.config;
        Ok(RunResult {
            schema: RESULT_SCHEMA.to_string(),
            n: config.spec.n(),
            k: config.spec.k(),
            mu: config.mu,
            p_c: config.p_c,
            selector: config.pair_selector.to_string(),
            init: config.init.to_string(),
            stop: config.stop.to_string(),
            seed: config.seed,
            max_evaluations: config.max_evaluations,
            evaluations_to_all_plateau: self.plateau_hit,
            evaluations_to_optimum: self.optimum_hit,
            total_evaluations: self.evaluations,
            final_best_fitness: self.population.best_fitness().0,
            stop_reason: self.stop_reason().expect("finished run has a stop reason"),
            peak_max_distance: self.peak_d,
            running_min_p_fu: self.running_min_p_fu,
            trajectory: self.trajectory,
        })
    }
}

pub fn run(config: &GaConfig) -> Result<RunResult> {
    Engine::new(config)?.run_to_end()
}

/// Runs `replicates` independent copies; replicate `i` is seeded with
/// `seed_sequence(config.seed, i)`. Results are ordered by replicate index and
/// do not depend on `parallelism`.
pub fn run_batch(
    config: &GaConfig,
    replicates: usize,
    parallelism: usize,
) -> Result<Vec<RunResult>> {
    config.validate()?;
    if replicates == 0 {
        return Err(JumpGaError::InvalidConfig(
            "replicate count must be at least 1".into(),
        ));
    }
    let configs: Vec<GaConfig> = (0..replicates as u64)
        .map(|i| config.with_seed(seed_sequence(config.seed, i)))
        .collect();
    run_configs(&configs, parallelism)
}

/// Runs each configuration on a pool of `parallelism` workers, keeping input order.
pub fn run_configs(configs: &[GaConfig], parallelism: usize) -> Result<Vec<RunResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| JumpGaError::InvalidConfig(format!("cannot build worker pool: {e}")))?;
    pool.install(|| configs.par_iter().map(run).collect())
}
