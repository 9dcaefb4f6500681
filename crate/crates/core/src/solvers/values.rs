use crate::game::{GameTree, NodeKind, Profile};

/// Counterfactual action values for both players from one tree pass.
///
/// Values are stored in units of `1 / chance_scale` chips: chance enters
/// through the tree's integer chance weights. With a pure profile and integer
/// utilities every stored value is an exact integer, which keeps Q-value
/// accumulation exact across any grouping of iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    /// Per `(infoset, action)` slot, from the acting player's point of view.
    values: Vec<f64>,
    /// Per infoset, summed over member nodes; includes chance.
    opp_reach: Vec<f64>,
    /// Per infoset, the acting player's own reach.
    own_reach: Vec<f64>,
    scale: f64,
    /// Nodes visited by the pass; pruned subtrees are not counted.
    pub nodes_touched: u64,
}

impl ValueTable {
    /// Counterfactual value `v(I, a)` in chips.
    pub fn value(&self, tree: &GameTree, infoset: usize, action: usize) -> f64 {
        self.values[tree.slot(infoset, action)] / self.scale
    }

    /// Scaled values indexed by [`GameTree::slot`].
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `pi^{-i}(I)`: opponent and chance reach summed over the infoset's members.
    pub fn opp_reach(&self, infoset: usize) -> f64 {
        self.opp_reach[infoset] / self.scale
    }

    /// `pi^i(I)`: the acting player's own reach.
    pub fn own_reach(&self, infoset: usize) -> f64 {
        self.own_reach[infoset]
    }

    pub fn own_reaches(&self) -> &[f64] {
        &self.own_reach
    }
}

struct Pass<'a> {
    tree: &'a GameTree,
    profile: &'a Profile,
    table: ValueTable,
}

impl Pass<'_> {
    /// Returns the chance-weighted player-one utility of the subtree under `profile`.
    fn walk(&mut self, h: usize, reach: [f64; 2]) -> f64 {
        self.table.nodes_touched += 1;
        let tree = self.tree;
        let node = tree.node(h);
        match node.kind {
            NodeKind::Terminal { utility } => tree.chance_weight(h) * utility,
            NodeKind::Chance { .. } => node.children.iter().map(|&c| self.walk(c, reach)).sum(),
            NodeKind::Decision { player, infoset } => {
                let me = player.index();
                let opp = reach[1 - me];
                let own = &mut self.table.own_reach[infoset];
                *own = own.max(reach[me]);
                self.table.opp_reach[infoset] += opp * tree.chance_weight(h);
                let sigma = self.profile.at(infoset);
                let base = tree.slot(infoset, 0);
                let mut total = 0.0;
                for (a, &child) in node.children.iter().enumerate() {
                    let mut next = reach;
                    next[me] *= sigma[a];
                    // nobody can reach the child: it contributes to no value
                    if next[0] == 0.0 && next[1] == 0.0 {
                        continue;
                    }
                    let u = self.walk(child, next);
                    if sigma[a] != 0.0 {
                        total += sigma[a] * u;
                    }
                    self.table.values[base + a] += opp * player.sign() * u;
                }
                total
            }
        }
    }
}

/// One pass computing counterfactual values for both players under `profile`.
///
/// A child is skipped, and not counted as touched, when both players' reach
/// into it is zero.
pub fn strategy_to_values(tree: &GameTree, profile: &Profile) -> ValueTable {
    assert_eq!(profile.num_infosets(), tree.num_infosets(), "profile must cover every infoset");
    let mut pass = Pass {
        tree,
        profile,
        table: ValueTable {
            values: vec![0.0; tree.num_slots()],
            opp_reach: vec![0.0; tree.num_infosets()],
            own_reach: vec![0.0; tree.num_infosets()],
            scale: tree.chance_scale() as f64,
            nodes_touched: 0,
        },
    };
    pass.walk(tree.root(), [1.0, 1.0]);
    pass.table
}
