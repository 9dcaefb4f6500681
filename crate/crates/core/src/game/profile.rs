use super::tree::{GameTree, NodeKind, Player};

/// Behavioural strategy profile: an action distribution for every infoset of both players.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    probs: Vec<Vec<f64>>,
}

impl Profile {
    pub fn uniform(tree: &GameTree) -> Self {
        let probs = tree
            .infosets()
            .iter()
            .map(|i| vec![1.0 / i.num_actions as f64; i.num_actions])
            .collect();
        Profile { probs }
    }

    /// Point mass on `actions[infoset]` at every infoset.
    pub fn pure(tree: &GameTree, actions: &[usize]) -> Self {
        assert_eq!(actions.len(), tree.num_infosets(), "one action per infoset");
        let probs = tree
            .infosets()
            .iter()
            .zip(actions)
            .map(|(info, &a)| {
                assert!(a < info.num_actions, "action {a} out of range at infoset {}", info.id);
                let mut p = vec![0.0; info.num_actions];
                p[a] = 1.0;
                p
            })
            .collect();
        Profile { probs }
    }

    /// Wraps per-infoset distributions. Panics if the shape does not match `tree`.
    pub fn from_distributions(tree: &GameTree, probs: Vec<Vec<f64>>) -> Self {
        assert_eq!(probs.len(), tree.num_infosets(), "profile must cover every infoset");
        for (info, dist) in tree.infosets().iter().zip(&probs) {
            assert_eq!(dist.len(), info.num_actions, "wrong action count at infoset {}", info.id);
        }
        Profile { probs }
    }

    pub fn at(&self, infoset: usize) -> &[f64] {
        &self.probs[infoset]
    }

    pub fn at_mut(&mut self, infoset: usize) -> &mut [f64] {
        &mut self.probs[infoset]
    }

    pub fn num_infosets(&self) -> usize {
        self.probs.len()
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.probs
    }

    /// Largest deviation of any infoset distribution from summing to one, or
    /// infinity if some entry is negative or non-finite.
    pub fn normalization_error(&self) -> f64 {
        self.probs
            .iter()
            .map(|d| {
                if d.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    f64::INFINITY
                } else {
                    (d.iter().sum::<f64>() - 1.0).abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Per-node reach probabilities under a profile.
///
/// `player[p][h]` is the product of player `p`'s own action probabilities on
/// the path to `h`; chance contributions come from the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachWeights {
    player: [Vec<f64>; 2],
    chance: Vec<f64>,
}

impl ReachWeights {
    pub fn player_reach(&self, player: Player, node: usize) -> f64 {
        self.player[player.index()][node]
    }

    pub fn chance_reach(&self, node: usize) -> f64 {
        self.chance[node]
    }

    /// Contribution of everyone except `player`: the opponent and chance.
    pub fn opponent_reach(&self, player: Player, node: usize) -> f64 {
        self.player[player.opponent().index()][node] * self.chance[node]
    }

    /// Own reach of the player acting at a decision node, 1 elsewhere.
    pub fn own_reach(&self, tree: &GameTree, node: usize) -> f64 {
        match tree.node(node).kind {
            NodeKind::Decision { player, .. } => self.player_reach(player, node),
            _ => 1.0,
        }
    }

    /// Opponent-and-chance reach of the player acting at a decision node.
    pub fn opp_reach(&self, tree: &GameTree, node: usize) -> f64 {
        match tree.node(node).kind {
            NodeKind::Decision { player, .. } => self.opponent_reach(player, node),
            _ => self.chance[node],
        }
    }

    /// Own reach of the acting player at `infoset`. Under perfect recall all
    /// member nodes agree, so the first member is used.
    pub fn infoset_own_reach(&self, tree: &GameTree, infoset: usize) -> f64 {
        let info = tree.infoset(infoset);
        self.player_reach(info.player, info.members[0])
    }

    /// Sum of opponent-and-chance reach over the infoset's member nodes.
    pub fn infoset_opp_reach(&self, tree: &GameTree, infoset: usize) -> f64 {
        let info = tree.infoset(infoset);
        info.members
            .iter()
            .map(|&h| self.opponent_reach(info.player, h))
            .sum()
    }
}

/// Top-down pass assigning every node its per-player and chance reach.
pub fn compute_reach(tree: &GameTree, profile: &Profile) -> ReachWeights {
    assert_eq!(
        profile.num_infosets(),
        tree.num_infosets(),
        "profile must cover every infoset"
    );
    let n = tree.num_nodes();
    let mut player = [vec![0.0; n], vec![0.0; n]];
    player[0][tree.root()] = 1.0;
    player[1][tree.root()] = 1.0;
    let mut stack = vec![tree.root()];
    while let Some(h) = stack.pop() {
        let node = tree.node(h);
        for (a, &child) in node.children.iter().enumerate() {
            let mut r = [player[0][h], player[1][h]];
            if let NodeKind::Decision { player: p, infoset } = node.kind {
                r[p.index()] *= profile.at(infoset)[a];
            }
            player[0][child] = r[0];
            player[1][child] = r[1];
            stack.push(child);
        }
    }
    let chance = (0..n).map(|h| tree.chance_reach(h)).collect();
    ReachWeights { player, chance }
}
