use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pcfr::game::build_game;
use pcfr_bench::config::{parse_algorithm, parse_budget, parse_game};
use pcfr_bench::matrix::{load_matrix, matrix_trajectory, write_trajectory, MatrixDynamics};
use pcfr_bench::runs::write_text;
use pcfr_bench::{
    compare, phase_stats, read_aggregate, read_run_csv, run_benchmark, run_file_name, run_single,
    write_phase_stats, write_run_csv, BenchError, BenchmarkConfig, EvalSchedule, Result,
};

#[derive(Parser)]
#[command(name = "pcfr-bench", version, about = "Equilibrium solver benchmarks on Kuhn and Leduc poker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver and write its run CSV.
    Solve {
        /// kuhn, leduc or leduc5.
        #[arg(long)]
        game: String,
        /// cfr, cfrplus, pcfr or sync-pcfr.
        #[arg(long)]
        algo: String,
        /// Amount and unit, e.g. 1e7nodes, 5000iters, 20000eff-iters.
        #[arg(long)]
        budget: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// log:<k>, nodes:<n> or iters:<n>.
        #[arg(long, default_value = "log:10")]
        eval_every: String,
        #[arg(long)]
        out: PathBuf,
        /// Also write the final Q/regret and average tables here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Leave the wall-time column blank so the CSV is reproducible.
        #[arg(long)]
        no_wall_time: bool,
    },
    /// Run a benchmark described by a key = value config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sync-phase mapping and phase-length histogram of a run CSV.
    PhaseStats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ratio of nodes touched by two algorithms to reach a target exploitability.
    Compare {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        target: f64,
    },
    /// Print a game tree, one node per line.
    Dump {
        #[arg(long)]
        game: String,
    },
    /// Fictitious play, sync fictitious play or regret matching on a matrix game.
    Matrix {
        /// rps, matching-pennies, diag-<k> or a matrix file ("rows cols" then payoffs).
        #[arg(long)]
        game: String,
        /// fp, sync-fp or rm.
        #[arg(long)]
        algo: String,
        #[arg(long)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Solve {
            game,
            algo,
            budget,
            seed,
            eval_every,
            out,
            checkpoint,
            no_wall_time,
        } => {
            let game = parse_game(&game)?;
            let algorithm = parse_algorithm(&algo)?;
            let budget = parse_budget(&budget)?;
            let schedule: EvalSchedule = eval_every.parse()?;
            let tree = build_game(&game)?;
            let run = run_single(&tree, algorithm, budget, seed, schedule, checkpoint.is_some())?;
            std::fs::create_dir_all(&out).map_err(|e| BenchError::io(&out, e))?;
            let path = out.join(run_file_name(&game, algorithm, seed));
            write_run_csv(&path, &run.records, !no_wall_time)?;
            if let (Some(path), Some(text)) = (checkpoint, run.checkpoint) {
                write_text(&path, &text)?;
            }
            let last = run.records.last().expect("a run has at least one record");
            println!(
                "{game} {algorithm} seed {seed}: {} meta-iterations, {} effective, {} nodes, exploitability {:.6e}",
                last.meta_iteration,
                last.effective_iteration,
                last.nodes_touched,
                last.exploitability.unwrap_or(f64::NAN)
            );
            println!("wrote {}", path.display());
        }
        Command::Bench { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| BenchError::io(&config, e))?;
            let config = BenchmarkConfig::parse(&text)?;
            let out = run_benchmark(&config)?;
            println!("wrote {} run files and {}", out.run_files.len(), out.aggregate_file.display());
        }
        Command::PhaseStats { input, out } => {
            let records = read_run_csv(&input)?;
            let stats = phase_stats(&records)?;
            write_phase_stats(&out, &stats)?;
            println!(
                "{} meta-iterations, max w {}, median w {}, ln w mean {:.3} sd {:.3}",
                stats.mapping.len(),
                stats.max_w,
                stats.median_w,
                stats.log_mean,
                stats.log_sd
            );
            println!(
                "effective/meta slope: overall {:.3}, final decile {:.3}; effective ~ meta^{:.3}",
                stats.overall_slope, stats.final_decile_slope, stats.power_exponent
            );
            println!("wrote {}", out.display());
        }
        Command::Compare { input, a, b, target } => {
            let rows = read_aggregate(&input)?;
            let c = compare(&rows, &a, &b, target)?;
            println!("{}", c.describe(&a, &b, target));
        }
        Command::Dump { game } => {
            print!("{}", build_game(&parse_game(&game)?)?.dump());
        }
        Command::Matrix {
            game,
            algo,
            iters,
            seed,
            out,
        } => {
            let matrix = load_matrix(&game)?;
            let dynamics: MatrixDynamics = algo.parse()?;
            if iters == 0 {
                return Err(BenchError::Usage("iters must be positive".into()));
            }
            let rows = matrix_trajectory(&matrix, dynamics, iters, seed);
            match out {
                Some(path) => {
                    let mut f = std::fs::File::create(&path).map_err(|e| BenchError::io(&path, e))?;
                    write_trajectory(&mut f, &rows)?;
                }
                None => write_trajectory(&mut std::io::stdout().lock(), &rows)?,
            }
        }
    }
    Ok(())
}
