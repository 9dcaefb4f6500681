use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use pcfr::game::{build_game, GameTree};
use pcfr::metrics::exploitability;
use pcfr::solvers::{run_with, Algorithm, Budget, IterationRecord};
use rayon::prelude::*;

use crate::aggregate::{aggregate, write_aggregate, AggregateRow};
use crate::config::{BenchmarkConfig, EvalSchedule, EvalTracker};
use crate::error::{BenchError, Result};

pub const RUN_HEADER: [&str; 6] = [
    "meta_iteration",
    "effective_iteration",
    "w_pst",
    "nodes_touched",
    "exploitability",
    "wall_time_ms",
];

/// One solver run with its evaluated records.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub records: Vec<IterationRecord>,
    /// Solver tables after the last meta-iteration, if requested.
    pub checkpoint: Option<String>,
}

/// Runs one solver, evaluating the average profile's exploitability on `schedule`
/// and after the final meta-iteration. Evaluation passes are not counted as touches.
pub fn run_single(
    tree: &GameTree,
    algorithm: Algorithm,
    budget: Budget,
    seed: u64,
    schedule: EvalSchedule,
    keep_checkpoint: bool,
) -> Result<RunResult> {
    let mut tracker = EvalTracker::new(schedule);
    let mut checkpoint = None;
    let out = run_with(tree, algorithm, budget, seed, |solver, record, last| {
        if tracker.due(record.meta_iteration, record.nodes_touched) || last {
            let e = exploitability(tree, &solver.average_profile()).exploitability;
            record.exploitability = Some(e);
        }
        if last && keep_checkpoint {
            checkpoint = Some(solver.checkpoint());
        }
    })?;
    Ok(RunResult {
        algorithm,
        seed,
        records: out.records,
        checkpoint,
    })
}

pub fn run_file_name(game: &str, algorithm: Algorithm, seed: u64) -> String {
    format!("{game}_{algorithm}_seed{seed}.csv")
}

/// Writes a run CSV. Exploitability is blank where it was not evaluated; wall
/// time is blank when `wall_time` is off.
pub fn write_run_csv(path: &Path, records: &[IterationRecord], wall_time: bool) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(RUN_HEADER)?;
    for r in records {
        w.write_record([
            r.meta_iteration.to_string(),
            r.effective_iteration.to_string(),
            r.w_pst.to_string(),
            r.nodes_touched.to_string(),
            r.exploitability.map(|e| e.to_string()).unwrap_or_default(),
            if wall_time {
                format!("{:.3}", r.wall_time_ms)
            } else {
                String::new()
            },
        ])?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))?;
    Ok(())
}

/// Reads a run CSV written by [`write_run_csv`]. Blank wall times read as 0.
pub fn read_run_csv(path: &Path) -> Result<Vec<IterationRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != RUN_HEADER {
        return Err(BenchError::Usage(format!(
            "{} is not a run CSV: expected columns {}",
            path.display(),
            RUN_HEADER.join(",")
        )));
    }
    let mut records = Vec::new();
    for (k, row) in r.records().enumerate() {
        let row = row?;
        let bad = || BenchError::Usage(format!("{}: malformed row {}", path.display(), k + 2));
        let int = |i: usize| row[i].parse::<u64>().map_err(|_| bad());
        let opt = |i: usize| -> Result<Option<f64>> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                row[i].parse().map(Some).map_err(|_| bad())
            }
        };
        records.push(IterationRecord {
            meta_iteration: int(0)?,
            effective_iteration: int(1)?,
            w_pst: int(2)?,
            nodes_touched: int(3)?,
            exploitability: opt(4)?,
            wall_time_ms: opt(5)?.unwrap_or(0.0),
        });
    }
    Ok(records)
}

/// Files written by [`run_benchmark`].
#[derive(Debug, Clone)]
pub struct BenchmarkOutput {
    pub run_files: Vec<PathBuf>,
    pub aggregate_file: PathBuf,
    pub aggregate: Vec<AggregateRow>,
}

/// Runs every (algorithm, seed) pair on a bounded worker pool, then writes one
/// CSV per run and the cross-seed aggregate.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkOutput> {
    config.validate()?;
    let tree = build_game(&config.game)?;
    fs::create_dir_all(&config.out).map_err(|e| BenchError::io(&config.out, e))?;

    let jobs: Vec<(Algorithm, u64)> = config
        .algorithms
        .iter()
        .flat_map(|&a| config.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count())
        .build()
        .map_err(|e| BenchError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<RunResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(algorithm, seed)| run_single(&tree, algorithm, config.budget, seed, config.eval_every, false))
            .collect::<Result<_>>()
    })?;

    let mut run_files = Vec::with_capacity(results.len());
    for run in &results {
        let path = config.out.join(run_file_name(&config.game, run.algorithm, run.seed));
        write_run_csv(&path, &run.records, config.wall_time)?;
        run_files.push(path);
    }
    let rows = aggregate(&results, config.eval_every);
    let aggregate_file = config.out.join("aggregate.csv");
    write_aggregate(&aggregate_file, &rows)?;
    Ok(BenchmarkOutput {
        run_files,
        aggregate_file,
        aggregate: rows,
    })
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| BenchError::io(path, e))
}
