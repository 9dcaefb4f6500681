use std::path::Path;
use std::str::FromStr;

use pcfr::normal_form::{FPState, MatrixGame, RmState};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixDynamics {
    Fp,
    SyncFp,
    Rm,
}

impl FromStr for MatrixDynamics {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fp" => Ok(MatrixDynamics::Fp),
            "sync-fp" => Ok(MatrixDynamics::SyncFp),
            "rm" => Ok(MatrixDynamics::Rm),
            other => Err(BenchError::Usage(format!(
                "unknown matrix dynamics `{other}`; valid: fp, sync-fp, rm"
            ))),
        }
    }
}

/// A built-in game id (`rps`, `matching-pennies`, `diag-<k>`) or a path to a
/// matrix file.
pub fn load_matrix(spec: &str) -> Result<MatrixGame> {
    match MatrixGame::builtin(spec) {
        Ok(g) => Ok(g),
        Err(_) if Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| BenchError::io(spec, e))?;
            Ok(MatrixGame::parse(&text)?)
        }
        Err(_) => Err(BenchError::Usage(format!(
            "`{spec}` is neither a built-in matrix game (rps, matching-pennies, diag-<k>) nor a file"
        ))),
    }
}

/// One row per step: `(t, w, exploitability)` where `t` counts effective iterations.
pub fn matrix_trajectory(
    game: &MatrixGame,
    dynamics: MatrixDynamics,
    iterations: u64,
    seed: u64,
) -> Vec<(u64, u64, f64)> {
    let mut rows = Vec::new();
    match dynamics {
        MatrixDynamics::Fp | MatrixDynamics::SyncFp => {
            let mut s = FPState::new(game, seed);
            rows.push((s.t, 1, s.exploitability(game)));
            while s.t < iterations {
                let w = if dynamics == MatrixDynamics::Fp {
                    s.fp_step(game);
                    1
                } else {
                    s.sync_fp_step(game, iterations - s.t)
                };
                rows.push((s.t, w, s.exploitability(game)));
            }
        }
        MatrixDynamics::Rm => {
            let mut s = RmState::new(game);
            while s.t < iterations {
                s.rm_step(game);
                let [x, y] = s.average_strategy();
                rows.push((s.t, 1, game.exploitability(&x, &y)));
            }
        }
    }
    rows
}

pub fn write_trajectory(out: &mut dyn std::io::Write, rows: &[(u64, u64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "w", "exploitability"])?;
    for (t, step, e) in rows {
        w.write_record([t.to_string(), step.to_string(), e.to_string()])?;
    }
    w.flush().map_err(|e| BenchError::io("<output>", e))?;
    Ok(())
}
