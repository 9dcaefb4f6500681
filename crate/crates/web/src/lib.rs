//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array` of fixed-width rows so the page
//! can plot it without any decoding library.

use pcfr::game::build_game;
use pcfr::metrics::exploitability;
use pcfr::normal_form::{FPState, MatrixGame, RmState};
use pcfr::solvers::{Algorithm, Solver};
use wasm_bindgen::prelude::*;

/// Hard cap on effective iterations for the matrix demo.
const MAX_MATRIX_ITERS: u64 = 1_000_000;
/// Hard cap on nodes touched per convergence curve.
const MAX_NODES: u64 = 200_000_000;

fn matrix_game(id: &str) -> Result<MatrixGame, String> {
    MatrixGame::builtin(id).or_else(|_| MatrixGame::parse(id)).map_err(|e| e.to_string())
}

/// Rows of `[t, w, exploitability, x_0 .. x_{rows-1}]`, where `x` is the row
/// player's average strategy after `t` effective iterations.
pub fn matrix_rows(game: &str, dynamics: &str, iterations: u64, seed: u64) -> Result<Vec<f64>, String> {
    let game = matrix_game(game)?;
    let iterations = iterations.clamp(1, MAX_MATRIX_ITERS);
    let mut out = Vec::new();
    let mut push = |t: u64, w: u64, e: f64, x: &[f64]| {
        out.extend([t as f64, w as f64, e]);
        out.extend_from_slice(x);
    };
    match dynamics {
        "fp" | "sync-fp" => {
            let mut s = FPState::new(&game, seed);
            push(s.t, 1, s.exploitability(&game), &s.avg_strategy[0]);
            while s.t < iterations {
                let w = if dynamics == "fp" {
                    s.fp_step(&game);
                    1
                } else {
                    s.sync_fp_step(&game, iterations - s.t)
                };
                push(s.t, w, s.exploitability(&game), &s.avg_strategy[0]);
            }
        }
        "rm" => {
            let mut s = RmState::new(&game);
            while s.t < iterations {
                s.rm_step(&game);
                let [x, y] = s.average_strategy();
                push(s.t, 1, game.exploitability(&x, &y), &x);
            }
        }
        other => return Err(format!("unknown dynamics `{other}`; use fp, sync-fp or rm")),
    }
    Ok(out)
}

/// Rows of `[nodes_touched, effective_iteration, exploitability]` at
/// log-spaced node checkpoints (`per_decade` per power of ten) and at the end.
pub fn convergence_rows(
    game: &str,
    algorithm: &str,
    node_budget: u64,
    seed: u64,
    per_decade: u32,
) -> Result<Vec<f64>, String> {
    let tree = build_game(game).map_err(|e| e.to_string())?;
    let algorithm: Algorithm = algorithm.parse().map_err(|e: pcfr::Error| e.to_string())?;
    let budget = node_budget.clamp(1, MAX_NODES);
    let per_decade = per_decade.clamp(1, 100) as f64;
    let mut solver = Solver::new(&tree, algorithm, seed);
    let mut next = 0u32;
    let mut out = Vec::new();
    while solver.state().nodes_touched < budget {
        solver.step(None);
        let s = solver.state();
        let mut due = s.nodes_touched >= budget;
        while 10f64.powf(next as f64 / per_decade) <= s.nodes_touched as f64 {
            next += 1;
            due = true;
        }
        if due {
            let e = exploitability(&tree, &solver.average_profile()).exploitability;
            out.extend([s.nodes_touched as f64, s.effective_iteration as f64, e]);
        }
    }
    Ok(out)
}

/// Rows of `[w_low, count]` for phase-length bins `[2^k, 2^(k+1))` of a sync
/// PCFR run, followed by one row `[meta_iterations, effective_iterations]`.
pub fn phase_rows(game: &str, meta_iterations: u64, seed: u64) -> Result<Vec<f64>, String> {
    let tree = build_game(game).map_err(|e| e.to_string())?;
    let mut solver = Solver::new(&tree, Algorithm::SyncPcfr, seed);
    let mut counts = vec![0u64; 64];
    for _ in 0..meta_iterations.clamp(1, 1_000_000) {
        let w = solver.step(None).w_pst;
        counts[63 - w.leading_zeros() as usize] += 1;
    }
    let top = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    let mut out: Vec<f64> = counts[..=top]
        .iter()
        .enumerate()
        .flat_map(|(k, &c)| [(1u64 << k) as f64, c as f64])
        .collect();
    let s = solver.state();
    out.extend([s.meta_iteration as f64, s.effective_iteration as f64]);
    Ok(out)
}

#[wasm_bindgen(js_name = matrixRun)]
pub fn matrix_run(game: &str, dynamics: &str, iterations: u32, seed: u32) -> Result<Vec<f64>, JsError> {
    matrix_rows(game, dynamics, iterations as u64, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = convergenceCurve)]
pub fn convergence_curve(
    game: &str,
    algorithm: &str,
    node_budget: f64,
    seed: u32,
    per_decade: u32,
) -> Result<Vec<f64>, JsError> {
    convergence_rows(game, algorithm, node_budget.max(1.0) as u64, seed as u64, per_decade)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = phaseHistogram)]
pub fn phase_histogram(game: &str, meta_iterations: u32, seed: u32) -> Result<Vec<f64>, JsError> {
    phase_rows(game, meta_iterations as u64, seed as u64).map_err(|e| JsError::new(&e))
}
