//! Experiment grids and their execution.

use std::io::Write;

use crate::engine::{run_configs, GaConfig, TraceRecord};
use crate::error::{JumpGaError, Result};
use crate::rng::seed_sequence;

use super::config::Settings;
use super::table::{Metric, ResultTable};

/// A named set of default settings. Any key can be overridden by a config
/// file or CLI flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub description: &'static str,
    pub settings: Settings,
}

impl ExperimentPreset {
    /// Furthest-pair vs uniform-pair selection across a small (n, k) grid.
    pub fn selection_comparison() -> Self {
        Self::build(
            "selection-comparison",
            "median evaluations to the optimum, furthest vs uniform-pair selection",
            &[
                ("n", "20,30"),
                ("k", "3,4"),
                ("mu", "50"),
                ("pc", "0.5"),
                ("selector", "furthest,uniform-pair"),
                ("init", "random"),
                ("replicates", "20"),
                ("budget", "100000000"),
                ("metric", "optimum"),
            ],
        )
    }

    /// Runs started with the whole population on the plateau.
    pub fn plateau_escape() -> Self {
        Self::build(
            "plateau-escape",
            "evaluations to the optimum from an all-plateau start, with (d, m) trajectories",
            &[
                ("n", "15,30,60"),
                ("k", "3"),
                ("mu", "50"),
                ("pc", "0.5"),
                ("selector", "furthest"),
                ("init", "plateau"),
                ("replicates", "20"),
                ("budget", "100000000"),
                ("metric", "optimum"),
                ("trajectories", "first"),
                ("trace-stride", "10"),
            ],
        )
    }

    /// Time for a random population to settle on the plateau.
    pub fn hill_climb() -> Self {
        Self::build(
            "hill-climb",
            "evaluations until every member is on the plateau",
            &[
                ("n", "50,100,200"),
                ("k", "3"),
                ("mu", "20"),
                ("pc", "0.5"),
                ("selector", "furthest"),
                ("init", "random"),
                ("stop", "plateau"),
                ("replicates", "20"),
                ("budget", "10000000"),
                ("metric", "plateau"),
            ],
        )
    }

    pub fn all() -> Vec<Self> {
        vec![
            Self::selection_comparison(),
            Self::plateau_escape(),
            Self::hill_climb(),
        ]
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| JumpGaError::Parse(format!("unknown preset {name:?}")))
    }

    fn build(name: &'static str, description: &'static str, pairs: &[(&str, &str)]) -> Self {
        Self {
            name,
            description,
            settings: Settings::from_pairs(pairs.iter().copied()).expect("preset keys are valid"),
        }
    }
}

/// An expanded grid ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub grid: Vec<GaConfig>,
    pub replicates: usize,
    pub metric: Metric,
    /// Record the trajectory of replicate 0 of every cell.
    pub trajectories: bool,
}

/// Sampled trajectory of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct CellTrajectory {
    pub cell: usize,
    pub replicate: usize,
    pub records: Vec<TraceRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub table: ResultTable,
    pub trajectories: Vec<CellTrajectory>,
}

impl Experiment {
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let trajectories = settings.flag("trajectories")?;
        let mut grid = settings.grid()?;
        if trajectories {
            for config in &mut grid {
                if config.trace_stride == 0 {
                    config.trace_stride = 1;
                }
            }
        }
        Ok(Self {
            grid,
            replicates: settings.replicates()?,
            metric: settings.metric()?,
            trajectories,
        })
    }

    /// Replicate `i` of cell `c` is seeded with `seed_sequence(cell seed, i)`.
    /// Only traced replicates keep a non-zero trace stride.
    fn jobs(&self) -> Vec<GaConfig> {
        let mut jobs = Vec::with_capacity(self.grid.len() * self.replicates);
        for cell in &self.grid {
            for i in 0..self.replicates {
                let mut config = cell.with_seed(seed_sequence(cell.seed, i as u64));
                if !(self.trajectories && i == 0) {
                    config.trace_stride = 0;
                }
                jobs.push(config);
            }
        }
        jobs
    }

    pub fn run(&self, parallelism: usize) -> Result<ExperimentOutput> {
        let mut results = run_configs(&self.jobs(), parallelism)?.into_iter();
        let mut cells = Vec::with_capacity(self.grid.len());
        let mut trajectories = Vec::new();
        for cell in 0..self.grid.len() {
            let mut replicates: Vec<_> = results.by_ref().take(self.replicates).collect();
            if self.trajectories {
                trajectories.push(CellTrajectory {
                    cell,
                    replicate: 0,
                    records: std::mem::take(&mut replicates[0].trajectory),
                });
            }
            cells.push(replicates);
        }
        Ok(ExperimentOutput {
            table: ResultTable::from_cells(&cells, self.metric),
            trajectories,
        })
    }
}

/// Writes trajectories as CSV with columns `cell, replicate` followed by
/// the trace columns.
pub fn write_trajectories_csv<W: Write>(trajectories: &[CellTrajectory], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    w.write_record([
        "cell",
        "replicate",
        "t",
        "evaluations",
        "d",
        "m",
        "max_pair_count",
        "min_fitness",
        "best_fitness",
    ])?;
    for tr in trajectories {
        for r in &tr.records {
            w.write_record(&[
                tr.cell.to_string(),
                tr.replicate.to_string(),
                r.t.to_string(),
                r.evaluations.to_string(),
                r.d.to_string(),
                r.m.to_string(),
                r.max_pair_count.to_string(),
                r.min_fitness.to_string(),
                r.best_fitness.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes a single run's trace with the columns of [`TraceRecord`].
pub fn write_trace_csv<W: Write>(records: &[TraceRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record([
            "t",
            "evaluations",
            "d",
            "m",
            "max_pair_count",
            "min_fitness",
            "best_fitness",
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run_preset(preset: ExperimentPreset, parallelism: usize) -> Result<ExperimentOutput> {
    Experiment::from_settings(&preset.settings)?.run(parallelism)
}

pub fn preset_selection_comparison(parallelism: usize) -> Result<ExperimentOutput> {
    run_preset(ExperimentPreset::selection_comparison(), parallelism)
}

pub fn preset_plateau_escape(parallelism: usize) -> Result<ExperimentOutput> {
    run_preset(ExperimentPreset::plateau_escape(), parallelism)
}

pub fn preset_hill_climb(parallelism: usize) -> Result<ExperimentOutput> {
    run_preset(ExperimentPreset::hill_climb(), parallelism)
}
