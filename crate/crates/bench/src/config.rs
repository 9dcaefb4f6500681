use std::path::PathBuf;
use std::str::FromStr;

use pcfr::game::GAME_IDS;
use pcfr::solvers::{Algorithm, Budget};

use crate::error::{BenchError, Result};

/// Environment variable overriding the worker-pool size.
pub const WORKERS_ENV: &str = "PCFR_WORKERS";

/// When exploitability is evaluated during a run. The final meta-iteration
/// is always evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalSchedule {
    /// Log-spaced node checkpoints, `per_decade` per power of ten.
    Log { per_decade: u32 },
    /// Every `n` nodes touched.
    Nodes(u64),
    /// Every `n` meta-iterations.
    Iters(u64),
}

impl EvalSchedule {
    /// The `k`-th node checkpoint (k = 0, 1, ...); `None` for iteration cadences.
    pub fn node_checkpoint(self, k: u64) -> Option<u64> {
        match self {
            EvalSchedule::Log { per_decade } => {
                let x = 10f64.powf(k as f64 / per_decade as f64);
                let r = x.round();
                Some(if (x - r).abs() < 1e-9 * r { r as u64 } else { x.ceil() as u64 })
            }
            EvalSchedule::Nodes(n) => Some(n * (k + 1)),
            EvalSchedule::Iters(_) => None,
        }
    }

    /// Distinct node checkpoints up to and including the first one at or past `max_nodes`.
    /// Iteration cadences use a log grid with ten points per decade.
    pub fn node_grid(self, max_nodes: u64) -> Vec<u64> {
        let schedule = match self {
            EvalSchedule::Iters(_) => EvalSchedule::Log { per_decade: 10 },
            s => s,
        };
        let mut grid: Vec<u64> = Vec::new();
        for k in 0.. {
            let c = schedule.node_checkpoint(k).expect("node schedule");
            if grid.last() != Some(&c) {
                grid.push(c);
            }
            if c >= max_nodes {
                break;
            }
        }
        grid
    }
}

impl FromStr for EvalSchedule {
    type Err = BenchError;

    /// `log:<per decade>`, `nodes:<n>` or `iters:<n>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || BenchError::Usage(format!("bad eval cadence `{s}`: expected log:<k>, nodes:<n> or iters:<n>"));
        let (kind, amount) = s.split_once(':').ok_or_else(bad)?;
        let n: f64 = amount.trim().parse().map_err(|_| bad())?;
        if n.is_nan() || n < 1.0 || n.fract() != 0.0 || n > 1e18 {
            return Err(bad());
        }
        match kind.trim() {
            "log" if n <= 1000.0 => Ok(EvalSchedule::Log { per_decade: n as u32 }),
            "nodes" => Ok(EvalSchedule::Nodes(n as u64)),
            "iters" => Ok(EvalSchedule::Iters(n as u64)),
            _ => Err(bad()),
        }
    }
}

/// Tracks which meta-iterations of a run get an exploitability evaluation.
#[derive(Debug, Clone)]
pub struct EvalTracker {
    schedule: EvalSchedule,
    next: u64,
}

impl EvalTracker {
    pub fn new(schedule: EvalSchedule) -> Self {
        EvalTracker { schedule, next: 0 }
    }

    /// Whether a record with these counters is due; advances past it if so.
    pub fn due(&mut self, meta_iteration: u64, nodes_touched: u64) -> bool {
        match self.schedule {
            EvalSchedule::Iters(n) => meta_iteration.is_multiple_of(n),
            schedule => {
                let mut hit = false;
                while let Some(c) = schedule.node_checkpoint(self.next) {
                    if c > nodes_touched {
                        break;
                    }
                    hit = true;
                    self.next += 1;
                }
                hit
            }
        }
    }
}

pub fn parse_game(id: &str) -> Result<String> {
    if GAME_IDS.contains(&id) {
        Ok(id.to_string())
    } else {
        Err(BenchError::Usage(format!(
            "unknown game `{id}`; valid games: {}",
            GAME_IDS.join(", ")
        )))
    }
}

pub fn parse_algorithm(id: &str) -> Result<Algorithm> {
    id.trim().parse().map_err(|_| {
        let ids: Vec<_> = Algorithm::ALL.iter().map(|a| a.id()).collect();
        BenchError::Usage(format!("unknown algorithm `{id}`; valid algorithms: {}", ids.join(", ")))
    })
}

pub fn parse_budget(s: &str) -> Result<Budget> {
    s.parse().map_err(|e: pcfr::Error| BenchError::Usage(e.to_string()))
}

/// A multi-seed, multi-algorithm benchmark on one game.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub game: String,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub budget: Budget,
    pub eval_every: EvalSchedule,
    pub out: PathBuf,
    /// Worker-pool size; `None` defers to the environment, then to available parallelism.
    pub workers: Option<usize>,
    /// Write wall-clock times; off makes run CSVs byte-reproducible.
    pub wall_time: bool,
}

impl BenchmarkConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `game`, `algorithms` (comma list), `seeds` (a count, seeds
    /// `0..n`) or `seed_list` (comma list), `budget`, `eval_every`, `out`,
    /// optional `workers` and `wall_time` (`true`/`false`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut game = None;
        let mut algorithms = None;
        let mut seeds: Option<Vec<u64>> = None;
        let mut budget = None;
        let mut eval_every = None;
        let mut out = None;
        let mut workers = None;
        let mut wall_time = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| BenchError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| BenchError::Usage(format!("line {}: `{v}` is not a non-negative integer", lineno + 1)))
            };
            match key {
                "game" => game = Some(parse_game(value)?),
                "algorithms" => {
                    algorithms = Some(value.split(',').map(parse_algorithm).collect::<Result<Vec<_>>>()?)
                }
                "seeds" | "seed_list" if seeds.is_some() => {
                    return Err(BenchError::Usage("give either seeds or seed_list, once".into()))
                }
                "seeds" => seeds = Some((0..number(value)?).collect()),
                "seed_list" => {
                    seeds = Some(value.split(',').map(|s| number(s.trim())).collect::<Result<Vec<_>>>()?)
                }
                "budget" => budget = Some(parse_budget(value)?),
                "eval_every" => eval_every = Some(value.parse()?),
                "out" => out = Some(PathBuf::from(value)),
                "workers" => workers = Some(number(value)? as usize),
                "wall_time" => {
                    wall_time = value
                        .parse()
                        .map_err(|_| BenchError::Usage(format!("line {}: wall_time must be true or false", lineno + 1)))?
                }
                other => return Err(BenchError::Usage(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        let missing = |k: &str| BenchError::Usage(format!("config is missing `{k}`"));
        let config = BenchmarkConfig {
            game: game.ok_or_else(|| missing("game"))?,
            algorithms: algorithms.ok_or_else(|| missing("algorithms"))?,
            seeds: seeds.ok_or_else(|| missing("seeds"))?,
            budget: budget.ok_or_else(|| missing("budget"))?,
            eval_every: eval_every.unwrap_or(EvalSchedule::Log { per_decade: 10 }),
            out: out.ok_or_else(|| missing("out"))?,
            workers,
            wall_time,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(BenchError::Usage("at least one seed is required".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Usage("at least one algorithm is required".into()));
        }
        if self.workers == Some(0) {
            return Err(BenchError::Usage("workers must be positive".into()));
        }
        Ok(())
    }

    /// Explicit setting, then the environment override, then available parallelism.
    pub fn worker_count(&self) -> usize {
        self.workers
            .or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok().filter(|&n| n > 0))
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}
