//! Extensive-form solvers: CFR, CFR+, pure CFR (PCFR) and sync PCFR.
//!
//! PCFR replaces regret matching with a pure best response to cumulative
//! Q-values, `Q(I, a) += pi^{-i}(I) u^i(I, sigma|I->a)`, and plays
//! `argmax_a Q(I, a)`. Because the profile is pure, whole subtrees drop out of
//! each pass. Sync PCFR additionally computes how many iterations the argmax
//! profile must stay unchanged (the shortest pursue time of any trailing
//! action) and applies that many PCFR iterations at the cost of one tree pass.
//!
//! Counterfactual values and cumulative Q/regret tables are kept in units of
//! `1 / chance_scale` chips (see [`ValueTable`]); regret matching and argmax
//! are scale invariant.

mod pursuit;
mod values;

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameTree, Player, Profile};
use crate::normal_form::{argmax, regret_matching};

pub use pursuit::{compute_pursuit_ef, PursuitResultEF};
pub use values::{strategy_to_values, ValueTable};

/// Phase length used when every pursue time is infinite and no effective
/// iteration budget bounds the skip.
pub const UNBOUNDED_PHASE_CAP: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Cfr,
    CfrPlus,
    Pcfr,
    SyncPcfr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Cfr,
        Algorithm::CfrPlus,
        Algorithm::Pcfr,
        Algorithm::SyncPcfr,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Cfr => "cfr",
            Algorithm::CfrPlus => "cfrplus",
            Algorithm::Pcfr => "pcfr",
            Algorithm::SyncPcfr => "sync-pcfr",
        }
    }

    /// PCFR and sync PCFR keep Q-values and play pure profiles.
    pub fn is_pure(self) -> bool {
        matches!(self, Algorithm::Pcfr | Algorithm::SyncPcfr)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// When a run stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Loop bodies executed.
    MetaIterations(u64),
    /// Sum of applied phase lengths; also caps the last sync phase.
    EffectiveIterations(u64),
    /// Cumulative nodes touched by the solver's own tree passes.
    NodesTouched(u64),
}

impl Budget {
    pub fn amount(self) -> u64 {
        match self {
            Budget::MetaIterations(n) | Budget::EffectiveIterations(n) | Budget::NodesTouched(n) => n,
        }
    }

    fn exhausted(self, state: &SolverState) -> bool {
        match self {
            Budget::MetaIterations(n) => state.meta_iteration >= n,
            Budget::EffectiveIterations(n) => state.effective_iteration >= n,
            Budget::NodesTouched(n) => state.nodes_touched >= n,
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// `<amount><unit>` with unit `nodes`, `iters` or `eff-iters`; the amount
    /// may use scientific notation (`1e7nodes`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (amount, make): (&str, fn(u64) -> Budget) = if let Some(a) = s.strip_suffix("eff-iters") {
            (a, Budget::EffectiveIterations)
        } else if let Some(a) = s.strip_suffix("iters") {
            (a, Budget::MetaIterations)
        } else if let Some(a) = s.strip_suffix("nodes") {
            (a, Budget::NodesTouched)
        } else {
            return Err(Error::Budget(format!("`{s}` needs a unit: nodes, iters or eff-iters")));
        };
        let amount: f64 = amount
            .parse()
            .map_err(|_| Error::Budget(format!("bad amount in `{s}`")))?;
        if amount.is_nan() || amount < 1.0 || amount.fract() != 0.0 || amount > 1e18 {
            return Err(Error::Budget(format!("amount in `{s}` must be a positive integer")));
        }
        Ok(make(amount as u64))
    }
}

/// One meta-iteration of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub meta_iteration: u64,
    pub effective_iteration: u64,
    pub w_pst: u64,
    /// Cumulative, excluding evaluation passes.
    pub nodes_touched: u64,
    /// Filled in only at evaluation checkpoints.
    pub exploitability: Option<f64>,
    pub wall_time_ms: f64,
}

/// Mutable solver tables, all indexed by [`GameTree::slot`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// Cumulative Q-values for the PCFR family, cumulative regrets for CFR/CFR+.
    pub q_or_regret: Vec<f64>,
    /// Numerators of the average strategy.
    pub avg_numerator: Vec<f64>,
    /// Profile used by the most recent iteration.
    pub current_profile: Profile,
    pub meta_iteration: u64,
    pub effective_iteration: u64,
    pub nodes_touched: u64,
    pub seed: u64,
}

/// How [`update_q_values`] advances the Q table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QUpdate {
    /// A single PCFR iteration.
    Pcfr,
    /// Skip the whole sync phase, at most `cap` iterations.
    Sync { cap: u64 },
}

/// Point mass on the Q-argmax of every infoset; ties go to the lowest action.
pub fn q_to_strategy(tree: &GameTree, q: &[f64]) -> Profile {
    let actions: Vec<usize> = (0..tree.num_infosets())
        .map(|i| argmax(&q[tree.slots(i)]))
        .collect();
    Profile::pure(tree, &actions)
}

/// Adds `phase_length` PCFR iterations worth of counterfactual values to the
/// Q table and returns the phase length.
///
/// In sync mode the length comes from [`compute_pursuit_ef`], which requires
/// `profile` to be the Q-argmax profile.
pub fn update_q_values(
    tree: &GameTree,
    q: &mut [f64],
    profile: &Profile,
    values: &ValueTable,
    mode: QUpdate,
) -> u64 {
    let w = match mode {
        QUpdate::Pcfr => 1,
        QUpdate::Sync { cap } => compute_pursuit_ef(tree, q, profile, values, cap).phase_length,
    };
    let scale = w as f64;
    for (q, v) in q.iter_mut().zip(values.raw()) {
        *q += scale * v;
    }
    w
}

/// `avg(I, a) += weight * pi^i(I) * sigma(I, a)` for every infoset.
pub fn update_average(
    tree: &GameTree,
    avg_numerator: &mut [f64],
    profile: &Profile,
    weight: f64,
    own_reach: &[f64],
) {
    for (i, &r) in own_reach.iter().enumerate().take(tree.num_infosets()) {
        if r == 0.0 {
            continue;
        }
        for (slot, &p) in tree.slots(i).zip(profile.at(i)) {
            avg_numerator[slot] += weight * r * p;
        }
    }
}

/// Normalizes the average-strategy numerators per infoset; infosets with no
/// mass get the uniform distribution.
pub fn normalize_average(tree: &GameTree, avg_numerator: &[f64]) -> Profile {
    let dists = (0..tree.num_infosets())
        .map(|i| {
            let nums = &avg_numerator[tree.slots(i)];
            let total: f64 = nums.iter().sum();
            if total > 0.0 {
                nums.iter().map(|n| n / total).collect()
            } else {
                vec![1.0 / nums.len() as f64; nums.len()]
            }
        })
        .collect();
    Profile::from_distributions(tree, dists)
}

fn regret_matching_profile(tree: &GameTree, regrets: &[f64]) -> Profile {
    let dists = (0..tree.num_infosets())
        .map(|i| regret_matching(&regrets[tree.slots(i)]))
        .collect();
    Profile::from_distributions(tree, dists)
}

/// Outcome of one [`Solver::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    pub w_pst: u64,
    pub nodes_touched: u64,
}

/// A solver run over a shared game tree, advanced one meta-iteration at a time.
#[derive(Debug, Clone)]
pub struct Solver<'a> {
    tree: &'a GameTree,
    algorithm: Algorithm,
    state: SolverState,
}

impl<'a> Solver<'a> {
    /// Fresh state: zero tables and, for every infoset, an action drawn
    /// uniformly from a generator seeded with `seed`. The PCFR family plays
    /// that random pure profile in its first iteration.
    pub fn new(tree: &'a GameTree, algorithm: Algorithm, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let actions: Vec<usize> = tree
            .infosets()
            .iter()
            .map(|i| rng.gen_range(0..i.num_actions))
            .collect();
        let current_profile = if algorithm.is_pure() {
            Profile::pure(tree, &actions)
        } else {
            Profile::uniform(tree)
        };
        Solver {
            tree,
            algorithm,
            state: SolverState {
                q_or_regret: vec![0.0; tree.num_slots()],
                avg_numerator: vec![0.0; tree.num_slots()],
                current_profile,
                meta_iteration: 0,
                effective_iteration: 0,
                nodes_touched: 0,
                seed,
            },
        }
    }

    pub fn tree(&self) -> &'a GameTree {
        self.tree
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn average_profile(&self) -> Profile {
        normalize_average(self.tree, &self.state.avg_numerator)
    }

    /// Runs one meta-iteration. `effective_cap` bounds the phase length of sync PCFR.
    pub fn step(&mut self, effective_cap: Option<u64>) -> StepReport {
        let report = match self.algorithm {
            Algorithm::Cfr => self.cfr_step(),
            Algorithm::CfrPlus => self.cfrplus_step(),
            Algorithm::Pcfr => self.pcfr_step(None),
            Algorithm::SyncPcfr => {
                self.pcfr_step(Some(effective_cap.unwrap_or(UNBOUNDED_PHASE_CAP).max(1)))
            }
        };
        self.state.meta_iteration += 1;
        self.state.effective_iteration += report.w_pst;
        self.state.nodes_touched += report.nodes_touched;
        report
    }

    fn pcfr_step(&mut self, sync_cap: Option<u64>) -> StepReport {
        let tree = self.tree;
        let state = &mut self.state;
        if state.meta_iteration > 0 {
            state.current_profile = q_to_strategy(tree, &state.q_or_regret);
        }
        let values = strategy_to_values(tree, &state.current_profile);
        // The seeded first profile is not the Q-argmax, so it is played for exactly one iteration.
        let mode = match sync_cap {
            Some(cap) if state.meta_iteration > 0 => QUpdate::Sync { cap },
            _ => QUpdate::Pcfr,
        };
        let w = update_q_values(tree, &mut state.q_or_regret, &state.current_profile, &values, mode);
        update_average(
            tree,
            &mut state.avg_numerator,
            &state.current_profile,
            w as f64,
            values.own_reaches(),
        );
        StepReport {
            w_pst: w,
            nodes_touched: values.nodes_touched,
        }
    }

    /// Simultaneous updates, regret matching, uniform reach-weighted averaging.
    fn cfr_step(&mut self) -> StepReport {
        let tree = self.tree;
        let state = &mut self.state;
        state.current_profile = regret_matching_profile(tree, &state.q_or_regret);
        let values = strategy_to_values(tree, &state.current_profile);
        accumulate_regrets(tree, state, &values, None, false);
        update_average(
            tree,
            &mut state.avg_numerator,
            &state.current_profile,
            1.0,
            values.own_reaches(),
        );
        StepReport {
            w_pst: 1,
            nodes_touched: values.nodes_touched,
        }
    }

    /// Alternating updates, regrets clamped at zero, averaging weighted by `t`.
    fn cfrplus_step(&mut self) -> StepReport {
        let tree = self.tree;
        let state = &mut self.state;
        let weight = (state.meta_iteration + 1) as f64;
        let mut touched = 0;
        for player in Player::BOTH {
            state.current_profile = regret_matching_profile(tree, &state.q_or_regret);
            let values = strategy_to_values(tree, &state.current_profile);
            touched += values.nodes_touched;
            accumulate_regrets(tree, state, &values, Some(player), true);
            for i in 0..tree.num_infosets() {
                let r = values.own_reach(i);
                if tree.infoset(i).player != player || r == 0.0 {
                    continue;
                }
                for (slot, &p) in tree.slots(i).zip(state.current_profile.at(i)) {
                    state.avg_numerator[slot] += weight * r * p;
                }
            }
        }
        StepReport {
            w_pst: 1,
            nodes_touched: touched,
        }
    }

    /// Text dump of the tables: a header line, then one line per infoset with
    /// its Q-value or regret vector and its average-strategy numerators.
    pub fn checkpoint(&self) -> String {
        let s = &self.state;
        let mut out = format!(
            "# algorithm={} seed={} meta={} effective={} nodes={} scale={}\n",
            self.algorithm,
            s.seed,
            s.meta_iteration,
            s.effective_iteration,
            s.nodes_touched,
            self.tree.chance_scale()
        );
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        for info in self.tree.infosets() {
            let slots = self.tree.slots(info.id);
            let _ = writeln!(
                out,
                "{} q {} avg {}",
                info.id,
                join(&s.q_or_regret[slots.clone()]),
                join(&s.avg_numerator[slots])
            );
        }
        out
    }
}

/// `R(I, a) += v(I, a) - sum_b sigma(I, b) v(I, b)` for the given player (or both).
fn accumulate_regrets(
    tree: &GameTree,
    state: &mut SolverState,
    values: &ValueTable,
    only: Option<Player>,
    clamp: bool,
) {
    let raw = values.raw();
    for info in tree.infosets() {
        if only.is_some_and(|p| p != info.player) {
            continue;
        }
        let slots = tree.slots(info.id);
        let sigma = state.current_profile.at(info.id);
        let expected: f64 = raw[slots.clone()].iter().zip(sigma).map(|(v, p)| v * p).sum();
        for slot in slots {
            let r = &mut state.q_or_regret[slot];
            *r += raw[slot] - expected;
            if clamp && *r < 0.0 {
                *r = 0.0;
            }
        }
    }
}

/// Final average profile, per-meta-iteration records and the final tables.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub average: Profile,
    pub records: Vec<IterationRecord>,
    pub state: SolverState,
}

/// Runs `algorithm` until `budget` is exhausted, calling `observe` after every
/// meta-iteration so callers can fill in evaluation columns.
pub fn run_with<F>(
    tree: &GameTree,
    algorithm: Algorithm,
    budget: Budget,
    seed: u64,
    mut observe: F,
) -> Result<RunOutput>
where
    F: FnMut(&Solver<'_>, &mut IterationRecord, bool),
{
    if budget.amount() == 0 {
        return Err(Error::Budget("budget must be at least 1".into()));
    }
    let mut solver = Solver::new(tree, algorithm, seed);
    let mut records = Vec::new();
    let start = Instant::now();
    while !budget.exhausted(&solver.state) {
        let cap = match budget {
            Budget::EffectiveIterations(n) => Some(n - solver.state.effective_iteration),
            _ => None,
        };
        let report = solver.step(cap);
        let s = &solver.state;
        let mut record = IterationRecord {
            meta_iteration: s.meta_iteration,
            effective_iteration: s.effective_iteration,
            w_pst: report.w_pst,
            nodes_touched: s.nodes_touched,
            exploitability: None,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        let last = budget.exhausted(s);
        observe(&solver, &mut record, last);
        records.push(record);
    }
    Ok(RunOutput {
        average: solver.average_profile(),
        records,
        state: solver.state,
    })
}

pub fn run(tree: &GameTree, algorithm: Algorithm, budget: Budget, seed: u64) -> Result<RunOutput> {
    run_with(tree, algorithm, budget, seed, |_, _, _| {})
}

pub fn run_sync_pcfr(tree: &GameTree, budget: Budget, seed: u64) -> Result<RunOutput> {
    run(tree, Algorithm::SyncPcfr, budget, seed)
}

pub fn run_pcfr(tree: &GameTree, budget: Budget, seed: u64) -> Result<RunOutput> {
    run(tree, Algorithm::Pcfr, budget, seed)
}

pub fn run_cfr(tree: &GameTree, budget: Budget, seed: u64) -> Result<RunOutput> {
    run(tree, Algorithm::Cfr, budget, seed)
}

pub fn run_cfrplus(tree: &GameTree, budget: Budget, seed: u64) -> Result<RunOutput> {
    run(tree, Algorithm::CfrPlus, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_kuhn;

    #[test]
    fn algorithm_ids_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dcfr".parse::<Algorithm>().is_err());
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("1e7nodes".parse::<Budget>().unwrap(), Budget::NodesTouched(10_000_000));
        assert_eq!("250iters".parse::<Budget>().unwrap(), Budget::MetaIterations(250));
        assert_eq!("3000eff-iters".parse::<Budget>().unwrap(), Budget::EffectiveIterations(3000));
        assert!("0iters".parse::<Budget>().is_err());
        assert!("12".parse::<Budget>().is_err());
        assert!("1.5iters".parse::<Budget>().is_err());
        assert!("10parsecs".parse::<Budget>().is_err());
    }

    #[test]
    fn zero_budget_is_rejected() {
        let tree = build_kuhn();
        assert!(matches!(
            run_sync_pcfr(&tree, Budget::MetaIterations(0), 1),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn q_to_strategy_breaks_ties_low() {
        let tree = build_kuhn();
        let mut q = vec![0.0; tree.num_slots()];
        q[tree.slot(1, 1)] = 3.0;
        q[tree.slot(2, 0)] = 3.0;
        q[tree.slot(2, 1)] = -1.0;
        let p = q_to_strategy(&tree, &q);
        assert_eq!(p.at(0), &[1.0, 0.0]);
        assert_eq!(p.at(1), &[0.0, 1.0]);
        assert_eq!(p.at(2), &[1.0, 0.0]);
    }

    #[test]
    fn average_update_and_normalization() {
        let tree = build_kuhn();
        let profile = Profile::pure(&tree, &vec![1; tree.num_infosets()]);
        let mut avg = vec![0.0; tree.num_slots()];
        let mut reach = vec![1.0; tree.num_infosets()];
        reach[3] = 0.0;
        update_average(&tree, &mut avg, &profile, 4.0, &reach);
        assert_eq!(&avg[tree.slots(0)], &[0.0, 4.0]);
        assert_eq!(&avg[tree.slots(3)], &[0.0, 0.0]);

        avg[tree.slot(0, 0)] = 12.0;
        let norm = normalize_average(&tree, &avg);
        assert_eq!(norm.at(0), &[0.75, 0.25]);
        assert_eq!(norm.at(3), &[0.5, 0.5]);
    }

    #[test]
    fn pcfr_records_unit_phases() {
        let tree = build_kuhn();
        let out = run_pcfr(&tree, Budget::MetaIterations(50), 3).unwrap();
        assert!(out.records.iter().all(|r| r.w_pst == 1));
        assert_eq!(out.state.effective_iteration, 50);
    }

    #[test]
    fn checkpoint_has_a_line_per_infoset() {
        let tree = build_kuhn();
        let mut solver = Solver::new(&tree, Algorithm::SyncPcfr, 9);
        solver.step(None);
        let dump = solver.checkpoint();
        assert!(dump.starts_with("# algorithm=sync-pcfr seed=9 meta=1 effective=1"));
        assert_eq!(dump.lines().count(), 1 + tree.num_infosets());
    }
}
