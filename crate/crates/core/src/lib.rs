//! A steady-state (mu+1) genetic algorithm on the Jump_k benchmark with
//! pluggable, distance-aware crossover parent selection.
//!
//! The population is instrumented with the diversity pair `(d, m)`: the largest
//! pairwise Hamming distance and the number of disjoint pairs at that distance.
//! [`oracles`] holds closed-form probability bounds together with Monte Carlo
//! checks against the engine, and [`harness`] runs seeded batch experiments.
//!
//! ```
//! use jumpga::{engine, GaConfig};
//!
//! let config = GaConfig::builder(8, 2).mu(8).p_c(0.5).seed(7).build().unwrap();
//! let result = engine::run(&config).unwrap();
//! assert!(result.evaluations_to_optimum.is_some());
//! ```

pub mod diversity;
pub mod engine;
pub mod error;
pub mod genotype;
pub mod harness;
pub mod jump;
pub mod operators;
pub mod oracles;
pub mod population;
pub mod rng;
pub mod selection;

pub use diversity::{DistanceMatrix, DiversitySnapshot};
pub use engine::{Engine, GaConfig, InitMode, RunResult, StopRule, TraceRecord};
pub use error::{JumpGaError, Result};
pub use genotype::Genotype;
pub use jump::{jump_fitness, FitnessSpec, FitnessValue};
pub use population::Population;
pub use selection::{MutationSelector, PairSelector};
