//! Result tables: one row per (cell, replicate) plus one aggregate row per cell.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::engine::RunResult;
use crate::error::{JumpGaError, Result};

pub const TABLE_SCHEMA: &str = "jumpga-table-v1";

/// Hitting time that aggregate rows summarise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    EvaluationsToOptimum,
    EvaluationsToAllPlateau,
}

impl Metric {
    /// Hitting time, or the budget for censored runs.
    pub fn value(&self, r: &RunResult) -> (u64, bool) {
        let hit = match self {
            Metric::EvaluationsToOptimum => r.evaluations_to_optimum,
            Metric::EvaluationsToAllPlateau => r.evaluations_to_all_plateau,
        };
        match hit {
            Some(v) => (v, false),
            None => (r.max_evaluations, true),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Replicate,
    Aggregate,
}

/// Flat CSV row. Replicate rows fill the run columns, aggregate rows the
/// statistic columns; the rest stay empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub schema: String,
    pub kind: RowKind,
    pub cell: usize,
    pub replicate: Option<usize>,
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub p_c: f64,
    pub selector: String,
    pub init: String,
    pub max_evaluations: u64,
    pub metric: Metric,
    pub seed: Option<u64>,
    pub evaluations_to_all_plateau: Option<u64>,
    pub evaluations_to_optimum: Option<u64>,
    pub total_evaluations: Option<u64>,
    pub final_best_fitness: Option<u64>,
    pub peak_max_distance: Option<u32>,
    pub censored: Option<bool>,
    pub replicates: Option<usize>,
    pub censored_count: Option<usize>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
}

impl TableRow {
    pub fn replicate(cell: usize, replicate: usize, metric: Metric, r: &RunResult) -> Self {
        let (_, censored) = metric.value(r);
        Self {
            schema: TABLE_SCHEMA.into(),
            kind: RowKind::Replicate,
            cell,
            replicate: Some(replicate),
            n: r.n,
            k: r.k,
            mu: r.mu,
            p_c: r.p_c,
            selector: r.selector.clone(),
            init: r.init.clone(),
            max_evaluations: r.max_evaluations,
            metric,
            seed: Some(r.seed),
            evaluations_to_all_plateau: r.evaluations_to_all_plateau,
            evaluations_to_optimum: r.evaluations_to_optimum,
            total_evaluations: Some(r.total_evaluations),
            final_best_fitness: Some(r.final_best_fitness),
            peak_max_distance: Some(r.peak_max_distance),
            censored: Some(censored),
            replicates: None,
            censored_count: None,
            median: None,
            mean: None,
            q1: None,
            q3: None,
            iqr: None,
        }
    }

    /// Censored hitting time of a replicate row.
    pub fn metric_value(&self) -> Option<f64> {
        let hit = match self.metric {
            Metric::EvaluationsToOptimum => self.evaluations_to_optimum,
            Metric::EvaluationsToAllPlateau => self.evaluations_to_all_plateau,
        };
        match self.kind {
            RowKind::Replicate => Some(hit.unwrap_or(self.max_evaluations) as f64),
            RowKind::Aggregate => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub median: f64,
    pub mean: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Summary {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

/// Linear-interpolation quantile of sorted data (R type 7).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(Summary {
        median: quantile_sorted(&sorted, 0.5),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        q1: quantile_sorted(&sorted, 0.25),
        q3: quantile_sorted(&sorted, 0.75),
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<TableRow>,
}

impl ResultTable {
    /// Builds replicate rows and aggregates from results grouped by cell.
    pub fn from_cells(cells: &[Vec<RunResult>], metric: Metric) -> Self {
        let mut rows = Vec::new();
        for (cell, results) in cells.iter().enumerate() {
            rows.extend(
                results
                    .iter()
                    .enumerate()
                    .map(|(i, r)| TableRow::replicate(cell, i, metric, r)),
            );
        }
        let mut table = Self { rows };
        table.rows.extend(table.compute_aggregates());
        table
    }

    pub fn replicate_rows(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| r.kind == RowKind::Replicate)
    }

    pub fn aggregate_rows(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| r.kind == RowKind::Aggregate)
    }

    pub fn aggregate(&self, cell: usize) -> Option<&TableRow> {
        self.aggregate_rows().find(|r| r.cell == cell)
    }

    /// Aggregate rows recomputed from the replicate rows, in cell order.
    pub fn compute_aggregates(&self) -> Vec<TableRow> {
        let mut cells: Vec<usize> = self.replicate_rows().map(|r| r.cell).collect();
        cells.sort_unstable();
        cells.dedup();
        cells
            .into_iter()
            .map(|cell| {
                let members: Vec<&TableRow> =
                    self.replicate_rows().filter(|r| r.cell == cell).collect();
                let values: Vec<f64> = members.iter().filter_map(|r| r.metric_value()).collect();
                let s = summarize(&values).expect("cell has replicate rows");
                let first = members[0];
                TableRow {
                    kind: RowKind::Aggregate,
                    replicate: None,
                    seed: None,
                    evaluations_to_all_plateau: None,
                    evaluations_to_optimum: None,
                    total_evaluations: None,
                    final_best_fitness: None,
                    peak_max_distance: None,
                    censored: None,
                    replicates: Some(members.len()),
                    censored_count: Some(
                        members.iter().filter(|r| r.censored == Some(true)).count(),
                    ),
                    median: Some(s.median),
                    mean: Some(s.mean),
                    q1: Some(s.q1),
                    q3: Some(s.q3),
                    iqr: Some(s.iqr()),
                    ..first.clone()
                }
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| JumpGaError::Parse(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<TableRow>, _>>()?;
        if let Some(row) = rows.iter().find(|row| row.schema != TABLE_SCHEMA) {
            return Err(JumpGaError::Parse(format!(
                "unexpected table schema {:?}",
                row.schema
            )));
        }
        Ok(Self { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_batch, GaConfig};

    fn sample_table() -> ResultTable {
        let a = GaConfig::builder(10, 2).mu(5).seed(1).build().unwrap();
        let b = GaConfig::builder(30, 4)
            .mu(5)
            .seed(2)
            .max_evaluations(300)
            .build()
            .unwrap();
        let cells = vec![run_batch(&a, 4, 1).unwrap(), run_batch(&b, 3, 1).unwrap()];
        ResultTable::from_cells(&cells, Metric::EvaluationsToOptimum)
    }

    #[test]
    fn quantiles_match_type_seven() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((s.median, s.q1, s.q3, s.mean), (2.5, 1.75, 3.25, 2.5));
        let s = summarize(&[5.0]).unwrap();
        assert_eq!((s.median, s.iqr()), (5.0, 0.0));
        assert!(summarize(&[]).is_none());
    }

    #[test]
    fn csv_round_trip() {
        let t = sample_table();
        assert_eq!(t.rows.len(), 4 + 3 + 2);
        let text = t.to_csv_string().unwrap();
        assert!(text.starts_with("schema,kind,cell,replicate"));
        let back = ResultTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn aggregates_recompute_and_censoring() {
        let t = sample_table();
        let emitted: Vec<TableRow> = t.aggregate_rows().cloned().collect();
        assert_eq!(emitted, t.compute_aggregates());
        let censored = t.aggregate(1).unwrap();
        assert_eq!(censored.censored_count, Some(3));
        assert_eq!(censored.median, Some(300.0));
        assert_eq!(t.aggregate(0).unwrap().replicates, Some(4));
    }

    #[test]
    fn rejects_foreign_schema() {
        let text = sample_table()
            .to_csv_string()
            .unwrap()
            .replace(TABLE_SCHEMA, "other-v9");
        assert!(ResultTable::read_csv(text.as_bytes()).is_err());
    }
}
