use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// One of the two players. Player one is the maximizer of every stored utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Sign that converts a player-one utility into this player's utility.
    pub fn sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Leaf carrying player one's utility; player two receives the negation.
    Terminal { utility: f64 },
    /// Chance move. Outcome `k` has probability `weights[k] / total`.
    Chance { weights: Vec<u64>, total: u64 },
    Decision { player: Player, infoset: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub id: usize,
    pub player: Player,
    pub num_actions: usize,
    pub members: Vec<NodeId>,
    pub action_labels: Vec<String>,
    /// Human readable description of what the acting player observes.
    pub key: String,
}

/// Immutable two-player zero-sum extensive-form game.
///
/// Per-(infoset, action) quantities used by the solvers live in flat arrays;
/// [`GameTree::slot`] maps a pair to its index.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    nodes: Vec<Node>,
    root: NodeId,
    infosets: Vec<InfoSet>,
    offsets: Vec<usize>,
    num_slots: usize,
    chance_reach: Vec<f64>,
    chance_weight: Vec<f64>,
    chance_scale: u64,
    utility_range: f64,
}

impl GameTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_players(&self) -> usize {
        2
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn infoset(&self, id: usize) -> &InfoSet {
        &self.infosets[id]
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    /// Largest absolute terminal utility, in chips.
    pub fn utility_range(&self) -> f64 {
        self.utility_range
    }

    /// Index of `(infoset, action)` in flat per-action arrays.
    #[inline]
    pub fn slot(&self, infoset: usize, action: usize) -> usize {
        self.offsets[infoset] + action
    }

    /// Range of flat indices holding the actions of `infoset`.
    #[inline]
    pub fn slots(&self, infoset: usize) -> std::ops::Range<usize> {
        self.offsets[infoset]..self.offsets[infoset] + self.infosets[infoset].num_actions
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    /// Product of chance probabilities on the path from the root to `node`.
    pub fn chance_reach(&self, node: NodeId) -> f64 {
        self.chance_reach[node]
    }

    /// `chance_reach(node) * chance_scale()`, which is always an integer.
    ///
    /// Solvers accumulate values in these units so that runs driven by pure
    /// profiles on integer-utility games stay exact in `f64`.
    pub fn chance_weight(&self, node: NodeId) -> f64 {
        self.chance_weight[node]
    }

    /// Least common denominator of all chance path probabilities.
    pub fn chance_scale(&self) -> u64 {
        self.chance_scale
    }

    /// Decision infosets of `player` in ascending id order.
    pub fn enumerate_infosets(&self, player: Player) -> Vec<&InfoSet> {
        self.infosets.iter().filter(|i| i.player == player).collect()
    }

    /// Line-oriented dump: `index kind infoset children`.
    ///
    /// `kind` is `chance:w1/w2/..`, `decision:<player>` or `terminal:<utility>`;
    /// absent fields are written as `-`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, node) in self.nodes.iter().enumerate() {
            let (kind, infoset) = match &node.kind {
                NodeKind::Terminal { utility } => (format!("terminal:{utility}"), "-".to_string()),
                NodeKind::Chance { weights, total } => {
                    let ws: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                    (format!("chance:{}/{total}", ws.join(",")), "-".to_string())
                }
                NodeKind::Decision { player, infoset } => {
                    (format!("decision:{player}"), infoset.to_string())
                }
            };
            let children = if node.children.is_empty() {
                "-".to_string()
            } else {
                node.children
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let _ = writeln!(out, "{idx} {kind} {infoset} {children}");
        }
        out
    }
}

/// Incremental constructor for [`GameTree`].
///
/// Nodes are created first and wired afterwards with [`TreeBuilder::set_children`],
/// which allows simple recursive pre-order construction. Infosets are created
/// on first use of their key; ids follow first-use order.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
    infosets: Vec<InfoSet>,
    infoset_ids: HashMap<String, usize>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, kind: NodeKind) -> NodeId {
        self.nodes.push(Node {
            kind,
            parent: None,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    pub fn terminal(&mut self, utility: f64) -> NodeId {
        self.push(NodeKind::Terminal { utility })
    }

    /// Chance node whose outcome `k` has probability `weights[k] / sum(weights)`.
    pub fn chance(&mut self, weights: Vec<u64>) -> Result<NodeId> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::Config(
                "chance outcomes need strictly positive weights".into(),
            ));
        }
        let total = weights.iter().sum();
        Ok(self.push(NodeKind::Chance { weights, total }))
    }

    pub fn decision<S: AsRef<str>>(
        &mut self,
        player: Player,
        infoset_key: &str,
        action_labels: &[S],
    ) -> Result<NodeId> {
        let labels: Vec<String> = action_labels.iter().map(|s| s.as_ref().to_string()).collect();
        if labels.is_empty() {
            return Err(Error::InconsistentInfoset {
                key: infoset_key.to_string(),
                reason: "decision node without actions".into(),
            });
        }
        let node = self.nodes.len();
        let id = match self.infoset_ids.get(infoset_key) {
            Some(&id) => {
                let info = &mut self.infosets[id];
                if info.player != player {
                    return Err(Error::InconsistentInfoset {
                        key: infoset_key.to_string(),
                        reason: "member nodes disagree on the acting player".into(),
                    });
                }
                if info.action_labels != labels {
                    return Err(Error::InconsistentInfoset {
                        key: infoset_key.to_string(),
                        reason: "member nodes disagree on the available actions".into(),
                    });
                }
                info.members.push(node);
                id
            }
            None => {
                let id = self.infosets.len();
                self.infosets.push(InfoSet {
                    id,
                    player,
                    num_actions: labels.len(),
                    members: vec![node],
                    action_labels: labels,
                    key: infoset_key.to_string(),
                });
                self.infoset_ids.insert(infoset_key.to_string(), id);
                id
            }
        };
        Ok(self.push(NodeKind::Decision { player, infoset: id }))
    }

    pub fn set_children(&mut self, node: NodeId, children: Vec<NodeId>) {
        self.nodes[node].children = children;
    }

    pub fn finish(mut self, root: NodeId) -> Result<GameTree> {
        let n = self.nodes.len();
        if root >= n {
            return Err(Error::Config(format!("root {root} out of range")));
        }
        for idx in 0..n {
            let expected = match &self.nodes[idx].kind {
                NodeKind::Terminal { utility } => {
                    if !utility.is_finite() {
                        return Err(Error::Config(format!("terminal {idx} has non-finite utility")));
                    }
                    0
                }
                NodeKind::Chance { weights, .. } => weights.len(),
                NodeKind::Decision { infoset, .. } => self.infosets[*infoset].num_actions,
            };
            let children = self.nodes[idx].children.clone();
            if children.len() != expected {
                return Err(Error::Config(format!(
                    "node {idx} has {} children, expected {expected}",
                    children.len()
                )));
            }
            for c in children {
                if c >= n || c == root {
                    return Err(Error::Config(format!("node {idx} has invalid child {c}")));
                }
                if self.nodes[c].parent.is_some() {
                    return Err(Error::Config(format!("node {c} has more than one parent")));
                }
                self.nodes[c].parent = Some(idx);
            }
        }

        // Every node must hang off the root, which also rules out cycles.
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        while let Some(id) = stack.pop() {
            if seen[id] {
                return Err(Error::Config("game graph is not a tree".into()));
            }
            seen[id] = true;
            order.push(id);
            stack.extend(self.nodes[id].children.iter().rev().copied());
        }
        if order.len() != n {
            return Err(Error::Config("some nodes are unreachable from the root".into()));
        }

        // Exact rational chance reach per node, then a common denominator.
        let mut reach = vec![(1u128, 1u128); n];
        for &id in &order {
            if let NodeKind::Chance { weights, total } = &self.nodes[id].kind {
                let (num, den) = reach[id];
                for (&c, &w) in self.nodes[id].children.iter().zip(weights) {
                    let (a, b) = (num * w as u128, den * *total as u128);
                    let g = gcd(a, b);
                    reach[c] = (a / g, b / g);
                }
            } else {
                for &c in &self.nodes[id].children {
                    reach[c] = reach[id];
                }
            }
        }
        let mut scale: u128 = 1;
        for &(_, den) in &reach {
            scale = scale / gcd(scale, den) * den;
            if scale > (1u128 << 40) {
                return Err(Error::Config("chance denominators are too large".into()));
            }
        }
        let chance_reach = reach.iter().map(|&(a, b)| a as f64 / b as f64).collect();
        let chance_weight = reach.iter().map(|&(a, b)| (a * (scale / b)) as f64).collect();

        let mut offsets = Vec::with_capacity(self.infosets.len());
        let mut num_slots = 0;
        for info in &self.infosets {
            offsets.push(num_slots);
            num_slots += info.num_actions;
        }
        let utility_range = self
            .nodes
            .iter()
            .filter_map(|node| match node.kind {
                NodeKind::Terminal { utility } => Some(utility.abs()),
                _ => None,
            })
            .fold(0.0, f64::max);

        Ok(GameTree {
            nodes: self.nodes,
            root,
            infosets: self.infosets,
            offsets,
            num_slots,
            chance_reach,
            chance_weight,
            chance_scale: scale as u64,
            utility_range,
        })
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
