//! Profile evaluation: best responses, exploitability, game value and node-touch accounting.

use crate::game::{GameTree, NodeKind, Player, Profile};

/// Best-response values of both players against a fixed profile, in chips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploitabilityReport {
    /// Player one's best-response payoff against player two's strategy.
    pub br_value_p1: f64,
    /// Player two's best-response payoff against player one's strategy.
    pub br_value_p2: f64,
    pub nash_conv: f64,
    /// `nash_conv / 2`.
    pub exploitability: f64,
}

struct BestResponse<'a> {
    tree: &'a GameTree,
    profile: &'a Profile,
    responder: Player,
    /// Opponent-and-chance reach per node; the responder's own moves count as 1.
    reach: Vec<f64>,
    value: Vec<Option<f64>>,
    choice: Vec<Option<usize>>,
}

impl<'a> BestResponse<'a> {
    fn new(tree: &'a GameTree, profile: &'a Profile, responder: Player) -> Self {
        let mut reach = vec![0.0; tree.num_nodes()];
        reach[tree.root()] = 1.0;
        let mut stack = vec![tree.root()];
        while let Some(h) = stack.pop() {
            let node = tree.node(h);
            for (k, &child) in node.children.iter().enumerate() {
                let p = match &node.kind {
                    NodeKind::Chance { weights, total } => weights[k] as f64 / *total as f64,
                    NodeKind::Decision { player, infoset } if *player != responder => {
                        profile.at(*infoset)[k]
                    }
                    _ => 1.0,
                };
                reach[child] = reach[h] * p;
                stack.push(child);
            }
        }
        BestResponse {
            tree,
            profile,
            responder,
            reach,
            value: vec![None; tree.num_nodes()],
            choice: vec![None; tree.num_infosets()],
        }
    }

    fn value(&mut self, h: usize) -> f64 {
        if let Some(v) = self.value[h] {
            return v;
        }
        let tree = self.tree;
        let node = tree.node(h);
        let v = match &node.kind {
            NodeKind::Terminal { utility } => self.responder.sign() * utility,
            NodeKind::Chance { weights, total } => {
                let mut v = 0.0;
                for (&child, &w) in node.children.iter().zip(weights) {
                    v += w as f64 / *total as f64 * self.value(child);
                }
                v
            }
            NodeKind::Decision { player, infoset } if *player == self.responder => {
                let a = self.choose(*infoset);
                self.value(node.children[a])
            }
            NodeKind::Decision { infoset, .. } => {
                let mut v = 0.0;
                for (k, &child) in node.children.iter().enumerate() {
                    let p = self.profile.at(*infoset)[k];
                    if p != 0.0 {
                        v += p * self.value(child);
                    }
                }
                v
            }
        };
        self.value[h] = Some(v);
        v
    }

    /// Maximizes the reach-weighted value summed over the infoset's members;
    /// ties go to the lowest action index.
    fn choose(&mut self, infoset: usize) -> usize {
        if let Some(a) = self.choice[infoset] {
            return a;
        }
        let info = self.tree.infoset(infoset);
        let mut best = (0, f64::NEG_INFINITY);
        for a in 0..info.num_actions {
            let mut total = 0.0;
            for &h in &info.members {
                let child = self.tree.node(h).children[a];
                total += self.reach[h] * self.value(child);
            }
            if total > best.1 {
                best = (a, total);
            }
        }
        self.choice[infoset] = Some(best.0);
        best.0
    }
}

/// Expected payoff of `responder` when best-responding to the other player's
/// part of `profile`.
pub fn best_response_value(tree: &GameTree, profile: &Profile, responder: Player) -> f64 {
    BestResponse::new(tree, profile, responder).value(tree.root())
}

/// Pure best-response action per infoset of `responder` (other infosets get 0).
pub fn best_response(tree: &GameTree, profile: &Profile, responder: Player) -> Vec<usize> {
    let mut br = BestResponse::new(tree, profile, responder);
    br.value(tree.root());
    (0..tree.num_infosets())
        .map(|i| {
            if tree.infoset(i).player == responder {
                br.choose(i)
            } else {
                0
            }
        })
        .collect()
}

pub fn exploitability(tree: &GameTree, profile: &Profile) -> ExploitabilityReport {
    let br_value_p1 = best_response_value(tree, profile, Player::One);
    let br_value_p2 = best_response_value(tree, profile, Player::Two);
    let nash_conv = br_value_p1 + br_value_p2;
    ExploitabilityReport {
        br_value_p1,
        br_value_p2,
        nash_conv,
        exploitability: nash_conv / 2.0,
    }
}

/// Player one's expected utility when both players follow `profile`.
pub fn game_value(tree: &GameTree, profile: &Profile) -> f64 {
    fn walk(tree: &GameTree, profile: &Profile, h: usize) -> f64 {
        let node = tree.node(h);
        match &node.kind {
            NodeKind::Terminal { utility } => *utility,
            NodeKind::Chance { weights, total } => node
                .children
                .iter()
                .zip(weights)
                .map(|(&c, &w)| w as f64 / *total as f64 * walk(tree, profile, c))
                .sum(),
            NodeKind::Decision { infoset, .. } => node
                .children
                .iter()
                .zip(profile.at(*infoset))
                .filter(|(_, &p)| p != 0.0)
                .map(|(&c, &p)| p * walk(tree, profile, c))
                .sum(),
        }
    }
    walk(tree, profile, tree.root())
}

/// Node visits, cumulative and per iteration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TouchCounter {
    pub cumulative: u64,
    pub per_iteration: Vec<u64>,
}

impl TouchCounter {
    pub fn record(&mut self, touched: u64) {
        self.cumulative += touched;
        self.per_iteration.push(touched);
    }

    pub fn median(&self) -> Option<u64> {
        if self.per_iteration.is_empty() {
            return None;
        }
        let mut v = self.per_iteration.clone();
        v.sort_unstable();
        Some(v[v.len() / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_kuhn;

    #[test]
    fn folding_everything_is_exploitable() {
        let tree = build_kuhn();
        // action 0 is check or fold everywhere
        let profile = Profile::pure(&tree, &vec![0; tree.num_infosets()]);
        assert!(exploitability(&tree, &profile).exploitability > 0.1);
    }

    #[test]
    fn best_response_dominates_own_value() {
        let tree = build_kuhn();
        let profile = Profile::uniform(&tree);
        let v = game_value(&tree, &profile);
        assert!(best_response_value(&tree, &profile, Player::One) >= v);
        assert!(best_response_value(&tree, &profile, Player::Two) >= -v);
    }

    #[test]
    fn touch_counter_accumulates() {
        let mut c = TouchCounter::default();
        c.record(3);
        c.record(5);
        c.record(4);
        assert_eq!(c.cumulative, 12);
        assert_eq!(c.median(), Some(4));
    }
}
