//! Fictitious play, sync fictitious play and regret matching on zero-sum matrix games.
//!
//! Sync fictitious play treats the length of a sync phase (a run of iterations
//! whose best-response profile is constant) as a pursuit problem. Every
//! non-best action `a` trails the current best response `a*` by a cumulative
//! payoff gap `Q(a*) - Q(a)` and closes it at speed `u(a, b) - u(a*, b)` per
//! iteration, where `b` is the opponent's current best response. The shortest
//! catch-up time over both players is the number of vanilla iterations that
//! can be applied in closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameTree, Player, TreeBuilder};

/// Two-player zero-sum game given by player one's payoff matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    payoff: Vec<f64>,
}

impl MatrixGame {
    pub fn new(rows: usize, cols: usize, payoff: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Matrix("each player needs at least one action".into()));
        }
        if payoff.len() != rows * cols {
            return Err(Error::Matrix(format!(
                "expected {} payoffs, found {}",
                rows * cols,
                payoff.len()
            )));
        }
        if payoff.iter().any(|p| !p.is_finite()) {
            return Err(Error::Matrix("payoffs must be finite".into()));
        }
        Ok(MatrixGame { rows, cols, payoff })
    }

    /// Parses `"rows cols"` followed by the row-major player-one payoffs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Matrix(format!("missing {what} count")))?
                .parse()
                .map_err(|_| Error::Matrix(format!("bad {what} count")))
        };
        let rows = dim("row")?;
        let cols = dim("column")?;
        let payoff = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Matrix(format!("bad payoff `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, payoff)
    }

    /// Built-in games: `rps`, `matching-pennies` and `diag-<k>` (k x k identity payoffs).
    pub fn builtin(id: &str) -> Result<Self> {
        match id {
            "rps" => Self::new(
                3,
                3,
                vec![0., -1., 1., 1., 0., -1., -1., 1., 0.],
            ),
            "matching-pennies" => Self::new(2, 2, vec![1., -1., -1., 1.]),
            _ => {
                let k: usize = id
                    .strip_prefix("diag-")
                    .and_then(|k| k.parse().ok())
                    .filter(|&k| k > 0)
                    .ok_or_else(|| Error::Matrix(format!("unknown matrix game `{id}`")))?;
                let mut payoff = vec![0.0; k * k];
                for i in 0..k {
                    payoff[i * k + i] = 1.0;
                }
                Self::new(k, k, payoff)
            }
        }
    }

    pub fn num_actions(&self, player: Player) -> usize {
        match player {
            Player::One => self.rows,
            Player::Two => self.cols,
        }
    }

    pub fn payoff(&self, row: usize, col: usize) -> f64 {
        self.payoff[row * self.cols + col]
    }

    /// `u^i(action, opponent_action)`.
    pub fn utility(&self, player: Player, action: usize, opponent_action: usize) -> f64 {
        match player {
            Player::One => self.payoff(action, opponent_action),
            Player::Two => -self.payoff(opponent_action, action),
        }
    }

    /// `u^i(action, opponent)` for a mixed opponent strategy.
    pub fn expected_utility(&self, player: Player, action: usize, opponent: &[f64]) -> f64 {
        opponent
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(b, &p)| p * self.utility(player, action, b))
            .sum()
    }

    /// `(max_a (A y)_a - min_b (x^T A)_b) / 2`, zero exactly at an equilibrium.
    pub fn exploitability(&self, x: &[f64], y: &[f64]) -> f64 {
        let br1 = (0..self.rows)
            .map(|a| self.expected_utility(Player::One, a, y))
            .fold(f64::NEG_INFINITY, f64::max);
        let br2 = (0..self.cols)
            .map(|b| self.expected_utility(Player::Two, b, x))
            .fold(f64::NEG_INFINITY, f64::max);
        (br1 + br2) / 2.0
    }

    /// The same game as a two-level tree: player one moves, then player two
    /// moves without observing player one's action.
    pub fn to_tree(&self) -> GameTree {
        let mut b = TreeBuilder::new();
        let row_labels: Vec<String> = (0..self.rows).map(|r| format!("r{r}")).collect();
        let col_labels: Vec<String> = (0..self.cols).map(|c| format!("c{c}")).collect();
        let root = b.decision(Player::One, "row", &row_labels).expect("fresh infoset");
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let node = b.decision(Player::Two, "col", &col_labels).expect("same labels");
            let leaves = (0..self.cols).map(|c| b.terminal(self.payoff(r, c))).collect();
            b.set_children(node, leaves);
            rows.push(node);
        }
        b.set_children(root, rows);
        b.finish(root).expect("matrix tree is well formed")
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Number of constant-profile iterations until an action trailing by `gap`
/// and closing at `speed` per iteration catches up.
///
/// `None` stands for an infinite pursue time. A zero gap with positive speed
/// yields 1: the tied action (necessarily of higher index than the current
/// argmax) strictly overtakes after one iteration.
pub fn pursue_time(gap: f64, speed: f64) -> Option<u64> {
    if speed.is_nan() || speed <= 0.0 || gap < 0.0 || !gap.is_finite() {
        return None;
    }
    if gap == 0.0 {
        return Some(1);
    }
    let ratio = gap / speed;
    if ratio >= 9.0e15 {
        return Some(u64::MAX);
    }
    // Rounding in the division can move the ceiling by one; settle it with products.
    let mut k = ratio.ceil().max(1.0);
    while k > 1.0 && (k - 1.0) * speed >= gap {
        k -= 1.0;
    }
    while k * speed < gap {
        k += 1.0;
    }
    Some(k as u64)
}

/// Fictitious-play state for both players.
#[derive(Debug, Clone, PartialEq)]
pub struct FPState {
    /// Effective iteration count; the average covers `t` profiles.
    pub t: u64,
    pub avg_strategy: [Vec<f64>; 2],
    /// Cumulative payoff of each action against every profile in the average.
    pub q_values: [Vec<f64>; 2],
    pub current_br: [usize; 2],
}

impl FPState {
    /// Starts from pure strategies drawn uniformly with a seeded generator.
    pub fn new(game: &MatrixGame, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a1 = rng.gen_range(0..game.num_actions(Player::One));
        let a2 = rng.gen_range(0..game.num_actions(Player::Two));
        Self::from_pure(game, [a1, a2])
    }

    /// `t = 1` with the average equal to the given pure profile, and Q holding
    /// the payoff of every action against it.
    pub fn from_pure(game: &MatrixGame, initial: [usize; 2]) -> Self {
        let mut avg_strategy = [vec![0.0; game.rows], vec![0.0; game.cols]];
        let mut q_values = avg_strategy.clone();
        for p in Player::BOTH {
            let i = p.index();
            avg_strategy[i][initial[i]] = 1.0;
            for (a, q) in q_values[i].iter_mut().enumerate() {
                *q = game.utility(p, a, initial[1 - i]);
            }
        }
        let current_br = [argmax(&q_values[0]), argmax(&q_values[1])];
        FPState {
            t: 1,
            avg_strategy,
            q_values,
            current_br,
        }
    }

    /// One vanilla step: `avg <- (1 - 1/(t+1)) avg + 1/(t+1) b(avg)`.
    pub fn fp_step(&mut self, game: &MatrixGame) {
        self.advance(game, 1);
    }

    /// Skips one sync phase (at most `budget_remaining` iterations) in closed
    /// form and returns its length.
    pub fn sync_fp_step(&mut self, game: &MatrixGame, budget_remaining: u64) -> u64 {
        assert!(budget_remaining >= 1, "sync step needs a positive budget");
        let w = compute_pursuit_nf(game, self, budget_remaining).phase_length;
        self.advance(game, w);
        w
    }

    /// Applies `w` iterations with the current best-response profile held fixed.
    fn advance(&mut self, game: &MatrixGame, w: u64) {
        let br = self.current_br;
        let eta = w as f64 / (self.t + w) as f64;
        for p in Player::BOTH {
            let i = p.index();
            for (a, s) in self.avg_strategy[i].iter_mut().enumerate() {
                let target = if a == br[i] { 1.0 } else { 0.0 };
                *s = (1.0 - eta) * *s + eta * target;
            }
            for (a, q) in self.q_values[i].iter_mut().enumerate() {
                *q += w as f64 * game.utility(p, a, br[1 - i]);
            }
        }
        self.t += w;
        self.current_br = [argmax(&self.q_values[0]), argmax(&self.q_values[1])];
    }

    pub fn exploitability(&self, game: &MatrixGame) -> f64 {
        game.exploitability(&self.avg_strategy[0], &self.avg_strategy[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PursuitResultNF {
    pub gap: [Vec<f64>; 2],
    pub speed: [Vec<f64>; 2],
    /// `None` is an infinite pursue time.
    pub pursue_time: [Vec<Option<u64>>; 2],
    pub phase_length: u64,
    /// Every pursue time was infinite: the current profile never changes.
    pub stationary: bool,
}

/// Gaps, speeds and pursue times of every action; the phase length is their
/// minimum over both players, floored at 1 and capped at `budget_remaining`.
pub fn compute_pursuit_nf(game: &MatrixGame, state: &FPState, budget_remaining: u64) -> PursuitResultNF {
    let mut gap = [Vec::new(), Vec::new()];
    let mut speed = [Vec::new(), Vec::new()];
    let mut pursue = [Vec::new(), Vec::new()];
    let mut shortest: Option<u64> = None;
    for p in Player::BOTH {
        let i = p.index();
        let best = state.current_br[i];
        let opp = state.current_br[1 - i];
        let q = &state.q_values[i];
        for a in 0..q.len() {
            let g = q[best] - q[a];
            let s = game.utility(p, a, opp) - game.utility(p, best, opp);
            let w = pursue_time(g, s);
            if let Some(w) = w {
                shortest = Some(shortest.map_or(w, |m| m.min(w)));
            }
            gap[i].push(g);
            speed[i].push(s);
            pursue[i].push(w);
        }
    }
    let cap = budget_remaining.max(1);
    PursuitResultNF {
        gap,
        speed,
        pursue_time: pursue,
        phase_length: shortest.unwrap_or(cap).clamp(1, cap),
        stationary: shortest.is_none(),
    }
}

/// Distribution proportional to the positive parts of `regrets`; uniform if none is positive.
pub fn regret_matching(regrets: &[f64]) -> Vec<f64> {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    if total > 0.0 {
        regrets.iter().map(|r| r.max(0.0) / total).collect()
    } else {
        vec![1.0 / regrets.len() as f64; regrets.len()]
    }
}

/// Simultaneous regret matching on a matrix game.
#[derive(Debug, Clone, PartialEq)]
pub struct RmState {
    pub regrets: [Vec<f64>; 2],
    pub strategy_sum: [Vec<f64>; 2],
    pub t: u64,
}

impl RmState {
    pub fn new(game: &MatrixGame) -> Self {
        let zeros = [vec![0.0; game.rows], vec![0.0; game.cols]];
        RmState {
            regrets: zeros.clone(),
            strategy_sum: zeros,
            t: 0,
        }
    }

    pub fn current_strategy(&self) -> [Vec<f64>; 2] {
        [regret_matching(&self.regrets[0]), regret_matching(&self.regrets[1])]
    }

    pub fn rm_step(&mut self, game: &MatrixGame) {
        let sigma = self.current_strategy();
        for p in Player::BOTH {
            let i = p.index();
            let values: Vec<f64> = (0..sigma[i].len())
                .map(|a| game.expected_utility(p, a, &sigma[1 - i]))
                .collect();
            let played: f64 = values.iter().zip(&sigma[i]).map(|(v, s)| v * s).sum();
            for (a, r) in self.regrets[i].iter_mut().enumerate() {
                *r += values[a] - played;
            }
            for (acc, s) in self.strategy_sum[i].iter_mut().zip(&sigma[i]) {
                *acc += s;
            }
        }
        self.t += 1;
    }

    pub fn average_strategy(&self) -> [Vec<f64>; 2] {
        self.strategy_sum.clone().map(|sum| {
            let total: f64 = sum.iter().sum();
            if total > 0.0 {
                sum.iter().map(|s| s / total).collect()
            } else {
                vec![1.0 / sum.len() as f64; sum.len()]
            }
        })
    }
}
