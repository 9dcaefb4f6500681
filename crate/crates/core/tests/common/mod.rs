//! Test-only oracles. None of these reuse the library's traversal code.
#![allow(dead_code)]

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use pcfr::game::{GameTree, NodeKind, Player, Profile};

/// Probability of chance outcome `k` at `node`.
fn chance_prob(tree: &GameTree, node: usize, k: usize) -> f64 {
    match &tree.node(node).kind {
        NodeKind::Chance { weights, total } => weights[k] as f64 / *total as f64,
        _ => unreachable!(),
    }
}

/// Reach of `node` split into (player one, player two, chance), computed by
/// walking parent pointers.
pub fn path_reach(tree: &GameTree, profile: &Profile, node: usize) -> (f64, f64, f64) {
    let (mut p1, mut p2, mut c) = (1.0, 1.0, 1.0);
    let mut child = node;
    while let Some(parent) = tree.node(child).parent {
        let k = tree.node(parent).children.iter().position(|&x| x == child).unwrap();
        match tree.node(parent).kind {
            NodeKind::Chance { .. } => c *= chance_prob(tree, parent, k),
            NodeKind::Decision { player: Player::One, infoset } => p1 *= profile.at(infoset)[k],
            NodeKind::Decision { player: Player::Two, infoset } => p2 *= profile.at(infoset)[k],
            NodeKind::Terminal { .. } => unreachable!(),
        }
        child = parent;
    }
    (p1, p2, c)
}

/// Player one's expected utility of the subtree at `node` under `profile`.
pub fn subtree_value(tree: &GameTree, profile: &Profile, node: usize) -> f64 {
    let n = tree.node(node);
    match &n.kind {
        NodeKind::Terminal { utility } => *utility,
        NodeKind::Chance { .. } => (0..n.children.len())
            .map(|k| chance_prob(tree, node, k) * subtree_value(tree, profile, n.children[k]))
            .sum(),
        NodeKind::Decision { infoset, .. } => (0..n.children.len())
            .map(|k| profile.at(*infoset)[k] * subtree_value(tree, profile, n.children[k]))
            .sum(),
    }
}

/// Sum over terminals of reach times utility, by explicit enumeration.
pub fn terminal_enumeration_value(tree: &GameTree, profile: &Profile) -> f64 {
    (0..tree.num_nodes())
        .filter_map(|z| match tree.node(z).kind {
            NodeKind::Terminal { utility } => {
                let (a, b, c) = path_reach(tree, profile, z);
                Some(a * b * c * utility)
            }
            _ => None,
        })
        .sum()
}

/// Counterfactual values `v(I, a)` in chips, indexed by slot, from the definition.
pub fn counterfactual_values(tree: &GameTree, profile: &Profile) -> Vec<f64> {
    let mut out = vec![0.0; tree.num_slots()];
    for info in tree.infosets() {
        for a in 0..info.num_actions {
            let mut v = 0.0;
            for &h in &info.members {
                let (p1, p2, c) = path_reach(tree, profile, h);
                let opp = if info.player == Player::One { p2 * c } else { p1 * c };
                let child = tree.node(h).children[a];
                v += opp * info.player.sign() * subtree_value(tree, profile, child);
            }
            out[tree.slot(info.id, a)] = v;
        }
    }
    out
}

/// Every pure strategy of `player`: one action index per infoset (other
/// players' infosets are filled with 0).
pub fn pure_strategies(tree: &GameTree, player: Player) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; tree.num_infosets()]];
    for info in tree.infosets().iter().filter(|i| i.player == player) {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..info.num_actions).map(move |a| {
                    let mut s = s.clone();
                    s[info.id] = a;
                    s
                })
            })
            .collect();
    }
    out
}

pub fn combine(tree: &GameTree, s1: &[usize], s2: &[usize]) -> Profile {
    let actions: Vec<usize> = tree
        .infosets()
        .iter()
        .map(|i| if i.player == Player::One { s1[i.id] } else { s2[i.id] })
        .collect();
    Profile::pure(tree, &actions)
}

pub type PureStrategies = Vec<Vec<usize>>;

/// Payoff matrix over all pure strategy pairs.
pub fn pure_strategy_matrix(tree: &GameTree) -> (PureStrategies, PureStrategies, Vec<Vec<f64>>) {
    let s1 = pure_strategies(tree, Player::One);
    let s2 = pure_strategies(tree, Player::Two);
    let m = s1
        .iter()
        .map(|a| {
            s2.iter()
                .map(|b| subtree_value(tree, &combine(tree, a, b), tree.root()))
                .collect()
        })
        .collect();
    (s1, s2, m)
}

/// Maximin mixed strategy of the row player and the game value, by LP.
#[allow(clippy::needless_range_loop)]
pub fn solve_matrix_lp(m: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let rows = m.len();
    let cols = m[0].len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = (0..rows).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let v = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for j in 0..cols {
        let mut row: Vec<_> = (0..rows).map(|i| (x[i], m[i][j])).collect();
        row.push((v, -1.0));
        lp.add_constraint(&row, ComparisonOp::Ge, 0.0);
    }
    let ones: Vec<_> = x.iter().map(|&xi| (xi, 1.0)).collect();
    lp.add_constraint(&ones, ComparisonOp::Eq, 1.0);
    let sol = lp.solve().expect("matrix game LP is feasible and bounded");
    (sol.objective(), x.iter().map(|&xi| sol[xi]).collect())
}

/// Behavioural strategy of `player` induced by a mixture over pure strategies.
pub fn mixture_to_behaviour(
    tree: &GameTree,
    player: Player,
    pures: &[Vec<usize>],
    weights: &[f64],
) -> Vec<Vec<f64>> {
    tree.infosets()
        .iter()
        .map(|info| {
            let mut dist = vec![0.0; info.num_actions];
            if info.player != player {
                dist[0] = 1.0;
                return dist;
            }
            let h = info.members[0];
            for (s, &w) in pures.iter().zip(weights) {
                let profile = combine(tree, s, s);
                let (p1, p2, _) = path_reach(tree, &profile, h);
                let own = if player == Player::One { p1 } else { p2 };
                dist[s[info.id]] += w * own;
            }
            let total: f64 = dist.iter().sum();
            if total > 0.0 {
                dist.iter().map(|d| d / total).collect()
            } else {
                vec![1.0 / info.num_actions as f64; info.num_actions]
            }
        })
        .collect()
}

/// Analytic Kuhn equilibrium with player one's bluffing frequency `alpha` in `[0, 1/3]`.
pub fn kuhn_equilibrium(tree: &GameTree, alpha: f64) -> Profile {
    let dists = tree
        .infosets()
        .iter()
        .map(|info| {
            // probability of the second action (bet / call)
            let second = match info.key.as_str() {
                "J:" => alpha,
                "Q:" => 0.0,
                "K:" => 3.0 * alpha,
                "J:cb" => 0.0,
                "Q:cb" => alpha + 1.0 / 3.0,
                "K:cb" => 1.0,
                "J:b" => 0.0,
                "Q:b" => 1.0 / 3.0,
                "K:b" => 1.0,
                "J:c" => 1.0 / 3.0,
                "Q:c" => 0.0,
                "K:c" => 1.0,
                other => panic!("unexpected kuhn infoset {other}"),
            };
            vec![1.0 - second, second]
        })
        .collect();
    Profile::from_distributions(tree, dists)
}

/// Best pure response value by trying every pure strategy of `responder`.
pub fn brute_force_best_response(tree: &GameTree, profile: &Profile, responder: Player) -> f64 {
    pure_strategies(tree, responder)
        .iter()
        .map(|s| {
            let mut dists = profile.distributions().to_vec();
            for info in tree.infosets().iter().filter(|i| i.player == responder) {
                dists[info.id] = vec![0.0; info.num_actions];
                dists[info.id][s[info.id]] = 1.0;
            }
            let p = Profile::from_distributions(tree, dists);
            responder.sign() * subtree_value(tree, &p, tree.root())
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random behavioural profile with strictly positive entries.
pub fn random_profile(tree: &GameTree, raw: &[f64]) -> Profile {
    let mut k = 0;
    let dists = tree
        .infosets()
        .iter()
        .map(|info| {
            let d: Vec<f64> = (0..info.num_actions)
                .map(|_| {
                    let x = 0.05 + raw[k % raw.len()];
                    k += 1;
                    x
                })
                .collect();
            let s: f64 = d.iter().sum();
            d.into_iter().map(|x| x / s).collect()
        })
        .collect();
    Profile::from_distributions(tree, dists)
}
