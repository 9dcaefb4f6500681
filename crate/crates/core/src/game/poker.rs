//! Kuhn and Leduc poker.
//!
//! Action order is fixed: `check < bet` when no bet is pending and
//! `fold < call < raise` when facing one. Argmax tie-breaking everywhere picks
//! the lowest index, so this order is part of every solver's behaviour.

use super::tree::{GameTree, NodeId, Player, TreeBuilder};
use crate::error::{Error, Result};

const RANKS: [char; 3] = ['J', 'Q', 'K'];

/// Game ids understood by [`build_game`].
pub const GAME_IDS: [&str; 3] = ["kuhn", "leduc", "leduc5"];

/// Builds one of the benchmark games by id.
///
/// `leduc5` is Leduc poker with a five chip ante and the standard `[2, 4]` bets.
pub fn build_game(id: &str) -> Result<GameTree> {
    match id {
        "kuhn" => Ok(build_kuhn()),
        "leduc" => build_leduc(1, &[2, 4], 2),
        "leduc5" => build_leduc(5, &[2, 4], 2),
        other => Err(Error::UnknownGame(other.to_string())),
    }
}

/// Three-card Kuhn poker: ante 1, a single bet of 1, deals J/Q/K without replacement.
pub fn build_kuhn() -> GameTree {
    let mut b = TreeBuilder::new();
    let deals: Vec<(usize, usize)> = (0..3)
        .flat_map(|c1| (0..3).filter(move |&c2| c2 != c1).map(move |c2| (c1, c2)))
        .collect();
    let root = b.chance(vec![1; deals.len()]).expect("positive weights");
    let children = deals
        .iter()
        .map(|&cards| kuhn_node(&mut b, cards, ""))
        .collect();
    b.set_children(root, children);
    b.finish(root).expect("kuhn tree is well formed")
}

fn kuhn_node(b: &mut TreeBuilder, cards: (usize, usize), history: &str) -> NodeId {
    let showdown = |stake: f64| if cards.0 > cards.1 { stake } else { -stake };
    match history {
        "cc" => return b.terminal(showdown(1.0)),
        "bc" | "cbc" => return b.terminal(showdown(2.0)),
        "bf" => return b.terminal(1.0),
        "cbf" => return b.terminal(-1.0),
        _ => {}
    }
    let (player, card) = if history.len().is_multiple_of(2) {
        (Player::One, cards.0)
    } else {
        (Player::Two, cards.1)
    };
    let facing_bet = history.ends_with('b');
    let (labels, codes): (&[&str], [char; 2]) = if facing_bet {
        (&["fold", "call"], ['f', 'c'])
    } else {
        (&["check", "bet"], ['c', 'b'])
    };
    let key = format!("{}:{}", RANKS[card], history);
    let node = b.decision(player, &key, labels).expect("consistent kuhn infosets");
    let children = codes
        .iter()
        .map(|code| kuhn_node(b, cards, &format!("{history}{code}")))
        .collect();
    b.set_children(node, children);
    node
}

#[derive(Debug, Clone, Copy)]
struct LeducRules {
    bet_sizes: [u32; 2],
    max_raises: u32,
}

#[derive(Debug, Clone)]
struct BettingState {
    /// Private card ids; a card's rank is `id / 2`.
    cards: [usize; 2],
    public: Option<usize>,
    round: usize,
    history: String,
    round_actions: usize,
    contrib: [u32; 2],
    raises: u32,
    to_act: Player,
}

/// Leduc poker with a six card deck (J, Q, K in two suits).
///
/// Each player antes `ante`; there are two betting rounds with bets of
/// `bet_sizes[round]` and at most `max_raises` bets or raises per round. One
/// public card is dealt between the rounds. A private card pairing the public
/// card wins, otherwise the higher private card wins.
pub fn build_leduc(ante: u32, bet_sizes: &[u32], max_raises: u32) -> Result<GameTree> {
    if ante < 1 {
        return Err(Error::Config("leduc ante must be at least 1".into()));
    }
    let bet_sizes: [u32; 2] = bet_sizes
        .try_into()
        .map_err(|_| Error::Config("leduc needs exactly two bet sizes".into()))?;
    if bet_sizes.contains(&0) {
        return Err(Error::Config("leduc bet sizes must be positive".into()));
    }
    if max_raises < 1 {
        return Err(Error::Config("leduc max_raises must be at least 1".into()));
    }
    let rules = LeducRules {
        bet_sizes,
        max_raises,
    };

    let mut b = TreeBuilder::new();
    let deals: Vec<[usize; 2]> = (0..6)
        .flat_map(|c1| (0..6).filter(move |&c2| c2 != c1).map(move |c2| [c1, c2]))
        .collect();
    let root = b.chance(vec![1; deals.len()])?;
    let mut children = Vec::with_capacity(deals.len());
    for cards in deals {
        let state = BettingState {
            cards,
            public: None,
            round: 0,
            history: String::new(),
            round_actions: 0,
            contrib: [ante, ante],
            raises: 0,
            to_act: Player::One,
        };
        children.push(leduc_node(&mut b, &rules, state)?);
    }
    b.set_children(root, children);
    b.finish(root)
}

fn leduc_node(b: &mut TreeBuilder, rules: &LeducRules, s: BettingState) -> Result<NodeId> {
    let me = s.to_act.index();
    let other = 1 - me;
    let facing_bet = s.contrib[me] < s.contrib[other];
    let mut actions: Vec<&str> = if facing_bet {
        vec!["fold", "call"]
    } else {
        vec!["check"]
    };
    if s.raises < rules.max_raises {
        actions.push(if s.raises == 0 { "bet" } else { "raise" });
    }

    let card = s.cards[me] / 2;
    let key = match s.public {
        Some(p) => format!("{}|{}:{}", RANKS[card], RANKS[p / 2], s.history),
        None => format!("{}:{}", RANKS[card], s.history),
    };
    let node = b.decision(s.to_act, &key, &actions)?;

    let mut children = Vec::with_capacity(actions.len());
    for &action in &actions {
        let mut next = s.clone();
        next.round_actions += 1;
        next.to_act = s.to_act.opponent();
        let child = match action {
            "fold" => {
                let utility = if s.to_act == Player::One {
                    -(s.contrib[0] as f64)
                } else {
                    s.contrib[1] as f64
                };
                b.terminal(utility)
            }
            "check" if s.round_actions == 0 => {
                next.history.push('c');
                leduc_node(b, rules, next)?
            }
            "check" | "call" => {
                next.history.push('c');
                next.contrib[me] = s.contrib[other];
                leduc_round_end(b, rules, next)?
            }
            _ => {
                next.history.push(if s.raises == 0 { 'b' } else { 'r' });
                next.contrib[me] = s.contrib[other] + rules.bet_sizes[s.round];
                next.raises += 1;
                leduc_node(b, rules, next)?
            }
        };
        children.push(child);
    }
    b.set_children(node, children);
    Ok(node)
}

fn leduc_round_end(b: &mut TreeBuilder, rules: &LeducRules, mut s: BettingState) -> Result<NodeId> {
    if s.round == 1 {
        let public = s.public.expect("public card dealt before round two") / 2;
        let [r1, r2] = s.cards.map(|c| c / 2);
        let stake = s.contrib[0] as f64;
        let utility = if r1 == public {
            stake
        } else if r2 == public {
            -stake
        } else if r1 > r2 {
            stake
        } else if r2 > r1 {
            -stake
        } else {
            0.0
        };
        return Ok(b.terminal(utility));
    }
    let remaining: Vec<usize> = (0..6).filter(|c| !s.cards.contains(c)).collect();
    let chance = b.chance(vec![1; remaining.len()])?;
    s.round = 1;
    s.round_actions = 0;
    s.raises = 0;
    s.to_act = Player::One;
    s.history.push('/');
    let mut children = Vec::with_capacity(remaining.len());
    for card in remaining {
        let mut next = s.clone();
        next.public = Some(card);
        children.push(leduc_node(b, rules, next)?);
    }
    b.set_children(chance, children);
    Ok(chance)
}
