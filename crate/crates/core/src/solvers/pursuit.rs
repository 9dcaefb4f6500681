use super::values::ValueTable;
use crate::game::{GameTree, Profile};
use crate::normal_form::{argmax, pursue_time};

/// Sync-phase computation for one PCFR iteration, indexed by [`GameTree::slot`].
#[derive(Debug, Clone, PartialEq)]
pub struct PursuitResultEF {
    /// `Q(I, a*) - Q(I, a)`, scaled like the Q table.
    pub gap: Vec<f64>,
    /// `v(I, a) - v(I, a*)`, the per-iteration change of `Q(I, a) - Q(I, a*)`.
    pub speed: Vec<f64>,
    /// `None` is an infinite pursue time.
    pub pursue_time: Vec<Option<u64>>,
    /// Minimum pursue time over every player, infoset and action, floored at 1
    /// and capped at the budget passed in.
    pub phase_length: u64,
    /// No action ever catches up while the profile stays fixed.
    pub stationary: bool,
}

/// Computes the sync-phase length for a pure `profile` that is the argmax of `q`.
///
/// Holding the profile fixed, every iteration adds the same values, so an
/// action trailing the played action `a*` by `gap` overtakes it after
/// `ceil(gap / speed)` iterations when `speed > 0`. Until the shortest such
/// time no infoset's argmax can change.
pub fn compute_pursuit_ef(
    tree: &GameTree,
    q: &[f64],
    profile: &Profile,
    values: &ValueTable,
    cap: u64,
) -> PursuitResultEF {
    let v = values.raw();
    let mut gap = vec![0.0; tree.num_slots()];
    let mut speed = vec![0.0; tree.num_slots()];
    let mut times = vec![None; tree.num_slots()];
    let mut shortest: Option<u64> = None;
    for info in tree.infosets() {
        let played = argmax(profile.at(info.id));
        let best = tree.slot(info.id, played);
        for slot in tree.slots(info.id) {
            let g = q[best] - q[slot];
            let s = v[slot] - v[best];
            let w = pursue_time(g, s);
            if let Some(w) = w {
                shortest = Some(shortest.map_or(w, |m| m.min(w)));
            }
            gap[slot] = g;
            speed[slot] = s;
            times[slot] = w;
        }
    }
    let cap = cap.max(1);
    PursuitResultEF {
        gap,
        speed,
        pursue_time: times,
        phase_length: shortest.unwrap_or(cap).clamp(1, cap),
        stationary: shortest.is_none(),
    }
}
