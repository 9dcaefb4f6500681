mod common;

use std::collections::BTreeSet;

use approx::assert_relative_eq;
use pcfr::game::{build_game, build_kuhn, build_leduc, compute_reach, GameTree, NodeKind, Player, Profile};
use proptest::prelude::*;

const RANKS: [char; 3] = ['J', 'Q', 'K'];

/// Betting sequences of one round: (prefixes where someone acts, sequences
/// that close the round with a check or call). At most `max_raises` bets or
/// raises per round.
fn round_sequences(max_raises: usize) -> (Vec<String>, Vec<String>) {
    let mut open = vec![String::new()];
    let mut acting = Vec::new();
    let mut closing = Vec::new();
    while let Some(h) = open.pop() {
        acting.push(h.clone());
        let aggression = h.chars().filter(|&c| c == 'b' || c == 'r').count();
        let facing = aggression > 0;
        if facing || h == "c" {
            closing.push(format!("{h}c"));
        } else {
            open.push(format!("{h}c"));
        }
        if aggression < max_raises {
            open.push(format!("{h}{}", if facing { 'r' } else { 'b' }));
        }
    }
    (acting, closing)
}

/// Infoset keys of Leduc poker from the betting grammar alone.
fn leduc_oracle_keys(max_raises: usize) -> BTreeSet<String> {
    let (acting, closing) = round_sequences(max_raises);
    let mut keys = BTreeSet::new();
    for private in RANKS {
        for h in &acting {
            keys.insert(format!("{private}:{h}"));
        }
        for public in RANKS {
            for first in &closing {
                for h in &acting {
                    keys.insert(format!("{private}|{public}:{first}/{h}"));
                }
            }
        }
    }
    keys
}

fn keys(tree: &GameTree) -> BTreeSet<String> {
    tree.infosets().iter().map(|i| i.key.clone()).collect()
}

fn is_ancestor(tree: &GameTree, a: usize, mut b: usize) -> bool {
    while let Some(p) = tree.node(b).parent {
        if p == a {
            return true;
        }
        b = p;
    }
    false
}

#[test]
fn kuhn_structure_matches_enumeration() {
    let tree = build_kuhn();
    // 6 deals, each with 4 decision points and 5 terminal histories
    assert_eq!(tree.num_nodes(), 1 + 6 * (4 + 5));
    assert_eq!(tree.num_infosets(), 12);
    for p in Player::BOTH {
        let own = tree.enumerate_infosets(p);
        assert_eq!(own.len(), 6);
        assert!(own.iter().all(|i| i.num_actions == 2 && i.members.len() == 2));
    }
    let expected: BTreeSet<String> = RANKS
        .iter()
        .flat_map(|r| ["", "c", "b", "cb"].map(|h| format!("{r}:{h}")))
        .collect();
    assert_eq!(keys(&tree), expected);
    assert_eq!(tree.utility_range(), 2.0);

    match &tree.node(tree.root()).kind {
        NodeKind::Chance { weights, total } => {
            assert_eq!(weights.len(), 6);
            assert!(weights.iter().all(|&w| w as f64 / *total as f64 == 1.0 / 6.0));
        }
        other => panic!("root should be chance, got {other:?}"),
    }
}

#[test]
fn leduc_infosets_match_betting_grammar() {
    let tree = build_leduc(1, &[2, 4], 2).unwrap();
    let oracle = leduc_oracle_keys(2);
    assert_eq!(oracle.len(), 288);
    assert_eq!(keys(&tree), oracle);
    assert_eq!(tree.num_infosets(), 288);

    // per deal: round one has 6 decisions, 4 folds and 5 chance nodes; each
    // of the 5 x 4 public cards opens a round with 6 decisions, 4 folds and
    // 5 showdowns
    assert_eq!(tree.num_nodes(), 1 + 30 * (6 + 4 + 5 + 5 * 4 * 15));
}

#[test]
fn leduc_variants_share_structure() {
    let standard = build_game("leduc").unwrap();
    let big_ante = build_game("leduc5").unwrap();
    assert_eq!(keys(&standard), keys(&big_ante));
    assert_eq!(standard.num_nodes(), big_ante.num_nodes());

    let one_raise = build_leduc(1, &[2, 4], 1).unwrap();
    assert_eq!(keys(&one_raise), leduc_oracle_keys(1));
}

#[test]
fn leduc_fold_and_showdown_payoffs() {
    let tree = build_leduc(1, &[2, 4], 2).unwrap();
    let utilities: BTreeSet<i64> = tree
        .nodes()
        .iter()
        .filter_map(|n| match n.kind {
            NodeKind::Terminal { utility } => Some(utility as i64),
            _ => None,
        })
        .collect();
    // contributions reachable at a terminal: 1, 3, 5 after round one plus 0, 4, 8 in round two
    let expected: BTreeSet<i64> = [0, 1, 3, 5, 7, 9, 11, 13]
        .iter()
        .flat_map(|&x| [x, -x])
        .collect();
    assert_eq!(utilities, expected);
}

#[test]
fn infoset_members_are_consistent() {
    for id in ["kuhn", "leduc"] {
        let tree = build_game(id).unwrap();
        for info in tree.infosets() {
            for &h in &info.members {
                let node = tree.node(h);
                assert_eq!(node.children.len(), info.num_actions);
                match node.kind {
                    NodeKind::Decision { player, infoset } => {
                        assert_eq!(player, info.player);
                        assert_eq!(infoset, info.id);
                    }
                    _ => panic!("member {h} is not a decision node"),
                }
                for &g in &info.members {
                    assert!(!is_ancestor(&tree, g, h), "{} has nested members", info.key);
                }
            }
        }
    }
}

#[test]
fn chance_distributions_sum_to_one() {
    for id in ["kuhn", "leduc"] {
        let tree = build_game(id).unwrap();
        for (h, node) in tree.nodes().iter().enumerate() {
            if let NodeKind::Chance { weights, total } = &node.kind {
                assert_eq!(weights.iter().sum::<u64>(), *total);
                let children: f64 = node.children.iter().map(|&c| tree.chance_reach(c)).sum();
                assert_relative_eq!(children, tree.chance_reach(h), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn trees_are_deterministic() {
    for id in ["kuhn", "leduc", "leduc5"] {
        assert_eq!(build_game(id).unwrap().dump(), build_game(id).unwrap().dump());
    }
}

#[test]
fn kuhn_dump_matches_golden_file() {
    let golden = include_str!("golden/kuhn_tree.txt");
    assert_eq!(build_kuhn().dump(), golden);
}

#[test]
fn reach_after_deal_and_one_action() {
    let tree = build_kuhn();
    let reach = compute_reach(&tree, &Profile::uniform(&tree));
    let root = tree.root();
    assert_eq!(reach.player_reach(Player::One, root), 1.0);
    assert_eq!(reach.player_reach(Player::Two, root), 1.0);
    assert_eq!(reach.chance_reach(root), 1.0);

    let deal = tree.node(root).children[0];
    let after_check = tree.node(deal).children[0];
    assert!(matches!(tree.node(after_check).kind, NodeKind::Decision { player: Player::Two, .. }));
    assert_relative_eq!(reach.opp_reach(&tree, after_check), 1.0 / 12.0, epsilon = 1e-15);
    assert_relative_eq!(reach.own_reach(&tree, after_check), 1.0);
    // the player-two infoset "J:c" collects two deals, each at 1/6 x 1/2
    let info = tree.infosets().iter().find(|i| i.key == "J:c").unwrap();
    assert_relative_eq!(reach.infoset_opp_reach(&tree, info.id), 1.0 / 6.0, epsilon = 1e-15);

    let pure = Profile::pure(&tree, &vec![0; tree.num_infosets()]);
    let pure_reach = compute_reach(&tree, &pure);
    for h in 0..tree.num_nodes() {
        for p in Player::BOTH {
            let r = pure_reach.player_reach(p, h);
            assert!(r == 0.0 || r == 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn terminal_reach_sums_to_one(raw in prop::collection::vec(0.0f64..1.0, 64), leduc in any::<bool>()) {
        let tree = if leduc { build_game("leduc").unwrap() } else { build_kuhn() };
        let profile = common::random_profile(&tree, &raw);
        let reach = compute_reach(&tree, &profile);
        let total: f64 = (0..tree.num_nodes())
            .filter(|&h| tree.node(h).is_terminal())
            .map(|h| {
                reach.player_reach(Player::One, h) * reach.player_reach(Player::Two, h) * reach.chance_reach(h)
            })
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reach_matches_path_products(raw in prop::collection::vec(0.0f64..1.0, 16)) {
        let tree = build_kuhn();
        let profile = common::random_profile(&tree, &raw);
        let reach = compute_reach(&tree, &profile);
        for h in 0..tree.num_nodes() {
            let (p1, p2, c) = common::path_reach(&tree, &profile, h);
            prop_assert!((reach.player_reach(Player::One, h) - p1).abs() < 1e-12);
            prop_assert!((reach.player_reach(Player::Two, h) - p2).abs() < 1e-12);
            prop_assert!((reach.chance_reach(h) - c).abs() < 1e-12);
        }
    }
}
