use std::path::Path;

use pcfr::solvers::{Algorithm, IterationRecord};

use crate::config::EvalSchedule;
use crate::error::{BenchError, Result};
use crate::runs::RunResult;

pub const AGGREGATE_HEADER: [&str; 6] = [
    "nodes_touched_checkpoint",
    "algorithm",
    "mean_exploitability",
    "ci_low",
    "ci_high",
    "n_seeds",
];

/// z-score of a two-sided 90% normal interval.
const Z90: f64 = 1.645;

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub checkpoint: u64,
    pub algorithm: String,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_seeds: usize,
}

/// Mean and 90% interval `mean ± 1.645 s / sqrt(n)` with the sample standard
/// deviation `s`; a single sample gives a zero-width interval.
pub fn mean_ci(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, mean, mean);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = Z90 * var.sqrt() / n.sqrt();
    (mean, mean - half, mean + half)
}

/// A run's exploitability at a node checkpoint: the first evaluated record at
/// or past it.
pub fn value_at(records: &[IterationRecord], checkpoint: u64) -> Option<f64> {
    records
        .iter()
        .find(|r| r.nodes_touched >= checkpoint && r.exploitability.is_some())
        .and_then(|r| r.exploitability)
}

/// Per-algorithm, per-checkpoint statistics across seeds. Checkpoints come
/// from the evaluation schedule's node grid; a checkpoint is reported for an
/// algorithm as long as at least one of its runs reached it.
pub fn aggregate(runs: &[RunResult], schedule: EvalSchedule) -> Vec<AggregateRow> {
    let max_nodes = runs
        .iter()
        .filter_map(|r| r.records.last())
        .map(|r| r.nodes_touched)
        .max()
        .unwrap_or(1);
    let grid = schedule.node_grid(max_nodes);
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in runs {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
    }
    let mut rows = Vec::new();
    for algo in algorithms {
        for &c in &grid {
            let values: Vec<f64> = runs
                .iter()
                .filter(|r| r.algorithm == algo)
                .filter_map(|r| value_at(&r.records, c))
                .collect();
            if values.is_empty() {
                continue;
            }
            let (mean, ci_low, ci_high) = mean_ci(&values);
            rows.push(AggregateRow {
                checkpoint: c,
                algorithm: algo.id().to_string(),
                mean,
                ci_low,
                ci_high,
                n_seeds: values.len(),
            });
        }
    }
    rows
}

pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        w.write_record([
            r.checkpoint.to_string(),
            r.algorithm.clone(),
            r.mean.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            r.n_seeds.to_string(),
        ])?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))?;
    Ok(())
}

pub fn read_aggregate(path: &Path) -> Result<Vec<AggregateRow>> {
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().collect::<Vec<_>>() != AGGREGATE_HEADER {
        return Err(BenchError::Usage(format!(
            "{} is not an aggregate CSV: expected columns {}",
            path.display(),
            AGGREGATE_HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (k, row) in r.records().enumerate() {
        let row = row?;
        let bad = || BenchError::Usage(format!("{}: malformed row {}", path.display(), k + 2));
        let float = |i: usize| row[i].parse::<f64>().map_err(|_| bad());
        rows.push(AggregateRow {
            checkpoint: row[0].parse().map_err(|_| bad())?,
            algorithm: row[1].to_string(),
            mean: float(2)?,
            ci_low: float(3)?,
            ci_high: float(4)?,
            n_seeds: row[5].parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}

/// Nodes touched at an algorithm's first checkpoint whose mean is at or below `target`.
pub fn first_crossing(rows: &[AggregateRow], algorithm: &str, target: f64) -> Option<u64> {
    rows.iter()
        .filter(|r| r.algorithm == algorithm && r.mean <= target)
        .map(|r| r.checkpoint)
        .min()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub a_crossing: Option<u64>,
    pub b_crossing: Option<u64>,
    /// `a_crossing / b_crossing` when both crossed.
    pub ratio: Option<f64>,
}

pub fn compare(rows: &[AggregateRow], a: &str, b: &str, target: f64) -> Result<Comparison> {
    for algo in [a, b] {
        if !rows.iter().any(|r| r.algorithm == algo) {
            return Err(BenchError::Usage(format!("algorithm `{algo}` does not appear in the aggregate")));
        }
    }
    let a_crossing = first_crossing(rows, a, target);
    let b_crossing = first_crossing(rows, b, target);
    let ratio = match (a_crossing, b_crossing) {
        (Some(x), Some(y)) => Some(x as f64 / y as f64),
        _ => None,
    };
    Ok(Comparison {
        a_crossing,
        b_crossing,
        ratio,
    })
}

impl Comparison {
    pub fn describe(&self, a: &str, b: &str, target: f64) -> String {
        let crossing = |c: Option<u64>| c.map_or("not crossed".to_string(), |n| format!("{n} nodes"));
        let ratio = self.ratio.map_or("n/a".to_string(), |r| format!("{r:.4}"));
        format!(
            "target {target}: {a} {}, {b} {}, ratio {a}/{b} = {ratio}",
            crossing(self.a_crossing),
            crossing(self.b_crossing)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(nodes: u64, e: Option<f64>) -> IterationRecord {
        IterationRecord {
            meta_iteration: 0,
            effective_iteration: 0,
            w_pst: 1,
            nodes_touched: nodes,
            exploitability: e,
            wall_time_ms: 0.0,
        }
    }

    #[test]
    fn ci_of_known_samples() {
        let (m, lo, hi) = mean_ci(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // s = sqrt(5/3), half width 1.645 * s / 2
        let half = 1.645 * (5.0f64 / 3.0).sqrt() / 2.0;
        assert!((hi - m - half).abs() < 1e-15 && (m - lo - half).abs() < 1e-15);
        assert_eq!(mean_ci(&[0.7]), (0.7, 0.7, 0.7));
    }

    #[test]
    fn value_at_uses_first_evaluated_record() {
        let rs = [record(5, Some(1.0)), record(9, None), record(12, Some(0.5)), record(20, Some(0.1))];
        assert_eq!(value_at(&rs, 1), Some(1.0));
        assert_eq!(value_at(&rs, 6), Some(0.5));
        assert_eq!(value_at(&rs, 20), Some(0.1));
        assert_eq!(value_at(&rs, 21), None);
    }

    #[test]
    fn crossing_and_ratio() {
        let row = |c, a: &str, m| AggregateRow {
            checkpoint: c,
            algorithm: a.into(),
            mean: m,
            ci_low: m,
            ci_high: m,
            n_seeds: 1,
        };
        let rows = vec![
            row(10, "cfr", 0.5),
            row(100, "cfr", 0.01),
            row(1000, "cfr", 0.2e-3),
            row(10, "cfrplus", 0.1),
            row(100, "cfrplus", 0.9e-3),
        ];
        let c = compare(&rows, "cfr", "cfrplus", 1e-3).unwrap();
        assert_eq!(c.ratio, Some(10.0));
        let same = compare(&rows, "cfr", "cfr", 1e-3).unwrap();
        assert_eq!(same.ratio, Some(1.0));
        let never = compare(&rows, "cfr", "cfrplus", 1e-5).unwrap();
        assert_eq!((never.a_crossing, never.ratio), (None, None));
        assert!(never.describe("cfr", "cfrplus", 1e-5).contains("not crossed"));
        assert!(compare(&rows, "cfr", "pcfr", 1e-3).is_err());
    }
}
