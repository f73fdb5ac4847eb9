//! Punishment values: the largest cost the other players, acting together,
//! can force on a single player who best-responds to their strategy.
//!
//! The coalition is abstracted to a count of members per vertex, which is
//! all the deviator's step costs depend on. Values are computed by memoized
//! backward induction: at every state the coalition commits to a joint move
//! and the deviator answers it.

use std::collections::HashMap;

use crate::combin::{advance, compositions};
use crate::cost::Cost;
use crate::model::{Date, PlayerId, VertexId};
use crate::semantics::{Action, Config, FiniteGame};

/// Deviator position, coalition members per vertex, and the date.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PunishState {
    pub me: VertexId,
    pub others: Vec<u8>,
    pub date: Date,
}

impl PunishState {
    /// Abstracts a configuration from player `i`'s point of view.
    pub fn from_config(fg: &FiniteGame, i: PlayerId, s: &Config) -> PunishState {
        let mut others = vec![0u8; fg.game().network().vertex_count()];
        for (j, &v) in s.positions.iter().enumerate() {
            if j != i {
                others[v] += 1;
            }
        }
        PunishState { me: s.positions[i], others, date: s.date }
    }
}

/// The effect of the coalition's proposals: the earliest proposed date and
/// who moves where at that date. `date == None` means there is no coalition;
/// `date == H + 1` means every member proposed the clamp date.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoalitionMove {
    pub date: Option<Date>,
    /// `(from, to, count)` of the members moving at `date`.
    pub flows: Vec<(VertexId, VertexId, u8)>,
}

/// Raw coalition proposals: `(source vertex, proposal, number of members)`.
pub type RawMove = Vec<(VertexId, Action, u8)>;

/// Memoized punishment values for one player and horizon.
pub struct Punisher<'g> {
    fg: FiniteGame<'g>,
    player: PlayerId,
    tgt: VertexId,
    table: HashMap<PunishState, Cost>,
}

impl<'g> Punisher<'g> {
    pub fn new(fg: &FiniteGame<'g>, player: PlayerId) -> Self {
        Punisher { fg: *fg, player, tgt: fg.game().tgt(player), table: HashMap::new() }
    }

    pub fn player(&self) -> PlayerId {
        self.player
    }

    /// Number of states evaluated so far.
    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn value_at(&mut self, s: &Config) -> Cost {
        let ps = PunishState::from_config(&self.fg, self.player, s);
        self.value(&ps)
    }

    pub fn value(&mut self, s: &PunishState) -> Cost {
        if s.me == self.tgt {
            return Cost::ZERO;
        }
        if s.date >= self.fg.horizon() {
            return Cost::Infinite;
        }
        if let Some(&v) = self.table.get(s) {
            return v;
        }
        let v = self.evaluate(s);
        self.table.insert(s.clone(), v);
        v
    }

    /// Same value as maximizing [`Self::answer`] over all coalition moves,
    /// but the deviator's solo moves are priced once per date and shared
    /// between moves through prefix minima.
    fn evaluate(&mut self, s: &PunishState) -> Cost {
        let fg = self.fg;
        let h = fg.horizon();
        let d = s.date;
        let w = fg.game().wgt(s.me, usize::from(s.others[s.me]) + 1);
        let acts = fg.allowed_at(s.me, d);
        let last = acts.iter().map(|a| a.date).max().expect("allowed actions are never empty");
        let wait = |m: Date| Cost::Finite(u64::from(m - d) * w);

        // before[k]: best solo move strictly before date d + 1 + k
        let span = (h + 1 - d) as usize;
        let mut solo = vec![Cost::Infinite; span];
        for b in &acts {
            if let Some(x) = b.vertex.filter(|_| b.date <= h) {
                let c = wait(b.date) + self.value(&PunishState { me: x, others: s.others.clone(), date: b.date });
                let k = (b.date - d - 1) as usize;
                solo[k] = solo[k].min(c);
            }
        }
        let mut before = vec![Cost::Infinite; span + 1];
        for k in 0..span {
            before[k + 1] = before[k].min(solo[k]);
        }

        let mut best = None::<Cost>;
        for mv in self.coalition_moves(s) {
            let val = match mv.date {
                None => before[span],
                Some(m) if m > h => before[span],
                Some(m) => {
                    let moved = apply(&s.others, &mv.flows);
                    let mut c = before[(m - d - 1) as usize];
                    for b in acts.iter().filter(|b| b.date == m) {
                        if let Some(x) = b.vertex {
                            c = c.min(wait(m) + self.value(&PunishState { me: x, others: moved.clone(), date: m }));
                        }
                    }
                    if last > m {
                        c = c.min(wait(m) + self.value(&PunishState { me: s.me, others: moved, date: m }));
                    }
                    c
                }
            };
            if best.is_none_or(|b| val > b) {
                best = Some(val);
            }
        }
        best.expect("the coalition always has a move")
    }

    /// A coalition move achieving the punishment value (first in enumeration order).
    pub fn best_coalition_move(&mut self, s: &PunishState) -> Option<CoalitionMove> {
        if s.me == self.tgt || s.date >= self.fg.horizon() {
            return None;
        }
        let target = self.value(s);
        self.coalition_moves(s).into_iter().find(|mv| self.answer(s, mv).0 == target)
    }

    /// The deviator's cheapest answer to `mv` and its value.
    pub fn best_deviation(&mut self, s: &PunishState, mv: &CoalitionMove) -> (Cost, Action) {
        self.answer(s, mv)
    }

    fn answer(&mut self, s: &PunishState, mv: &CoalitionMove) -> (Cost, Action) {
        let fg = self.fg;
        let h = fg.horizon();
        let d = s.date;
        let w = fg.game().wgt(s.me, usize::from(s.others[s.me]) + 1);
        let m = mv.date.unwrap_or(Date::MAX);
        let moved = apply(&s.others, &mv.flows);
        let mut best = (Cost::Infinite, None::<Action>);
        let consider = |c: Cost, a: Action, best: &mut (Cost, Option<Action>)| {
            if best.1.is_none() || c < best.0 {
                *best = (c, Some(a));
            }
        };
        for b in fg.allowed_at(s.me, d) {
            let e = b.date;
            let c = if e < m {
                // the deviator moves alone
                match b.vertex {
                    Some(x) if e <= h => {
                        Cost::Finite(u64::from(e - d) * w) + self.value(&PunishState { me: x, others: s.others.clone(), date: e })
                    }
                    _ => Cost::Infinite,
                }
            } else if e == m {
                match b.vertex {
                    Some(x) if m <= h => {
                        Cost::Finite(u64::from(m - d) * w) + self.value(&PunishState { me: x, others: moved.clone(), date: m })
                    }
                    _ => Cost::Infinite,
                }
            } else {
                Cost::Finite(u64::from(m - d) * w) + self.value(&PunishState { me: s.me, others: moved.clone(), date: m })
            };
            consider(c, b, &mut best);
        }
        (best.0, best.1.expect("the deviator always has an action"))
    }

    /// Distinct effects of the coalition's joint proposals, by date and then
    /// by how the members at each vertex split.
    pub fn coalition_moves(&self, s: &PunishState) -> Vec<CoalitionMove> {
        let fg = &self.fg;
        let h = fg.horizon();
        let occupied: Vec<VertexId> = (0..s.others.len()).filter(|&v| s.others[v] > 0).collect();
        if occupied.is_empty() {
            return vec![CoalitionMove { date: None, flows: Vec::new() }];
        }
        let allowed: Vec<Vec<Action>> = occupied.iter().map(|&u| fg.allowed_at(u, s.date)).collect();
        let mut out = Vec::new();
        for m in s.date + 1..=h + 1 {
            if m == h + 1 {
                if allowed.iter().all(|acts| acts.iter().any(|a| a.date == m)) {
                    out.push(CoalitionMove { date: Some(m), flows: Vec::new() });
                }
                continue;
            }
            // per vertex: destinations reachable at m, and whether staying is possible
            let opts: Vec<(Vec<VertexId>, bool)> = allowed
                .iter()
                .map(|acts| {
                    let dests: Vec<VertexId> = acts.iter().filter(|a| a.date == m).filter_map(|a| a.vertex).collect();
                    (dests, acts.iter().any(|a| a.date > m))
                })
                .collect();
            let splits: Vec<Vec<Vec<u8>>> = occupied
                .iter()
                .zip(&opts)
                .map(|(&u, (dests, stay))| {
                    let slots = dests.len() + usize::from(*stay);
                    if slots == 0 {
                        return Vec::new();
                    }
                    compositions(s.others[u], slots)
                })
                .collect();
            if splits.iter().any(Vec::is_empty) {
                continue;
            }
            let mut choice = vec![0usize; occupied.len()];
            loop {
                let mut flows = Vec::new();
                for (k, &u) in occupied.iter().enumerate() {
                    let counts = &splits[k][choice[k]];
                    for (slot, &dest) in opts[k].0.iter().enumerate() {
                        if counts[slot] > 0 {
                            flows.push((u, dest, counts[slot]));
                        }
                    }
                }
                if !flows.is_empty() {
                    out.push(CoalitionMove { date: Some(m), flows });
                }
                if !advance(&mut choice, |k| splits[k].len()) {
                    break;
                }
            }
        }
        out
    }

    /// Concrete proposals realizing `mv` for the coalition players of `s`:
    /// movers are assigned in player order, the rest propose something later.
    pub fn coalition_actions(&self, s: &Config, mv: &CoalitionMove) -> Vec<Option<Action>> {
        let fg = &self.fg;
        let mut remaining = mv.flows.clone();
        s.positions
            .iter()
            .enumerate()
            .map(|(j, &u)| {
                if j == self.player {
                    return None;
                }
                let acts = fg.allowed_at(u, s.date);
                let a = match mv.date {
                    None => unreachable!("player {j} belongs to the coalition"),
                    Some(m) if m == fg.horizon() + 1 => *acts.iter().find(|a| a.date == m).expect("clamp proposal"),
                    Some(m) => match remaining.iter_mut().find(|f| f.0 == u && f.2 > 0) {
                        Some(f) => {
                            f.2 -= 1;
                            Action::to(f.1, m)
                        }
                        None => *acts.iter().find(|a| a.date > m).expect("member can wait"),
                    },
                };
                Some(a)
            })
            .collect()
    }
}

fn apply(others: &[u8], flows: &[(VertexId, VertexId, u8)]) -> Vec<u8> {
    let mut next = others.to_vec();
    for &(from, _, k) in flows {
        next[from] -= k;
    }
    for &(_, to, k) in flows {
        next[to] += k;
    }
    next
}

/// `LowVal_i` at a configuration.
pub fn lowval(fg: &FiniteGame, i: PlayerId, s: &Config) -> Cost {
    Punisher::new(fg, i).value_at(s)
}

/// Every multiset of raw proposals of the coalition at `ps`, vertex by vertex.
pub fn enumerate_coalition_moves(fg: &FiniteGame, ps: &PunishState) -> Vec<RawMove> {
    let mut out: Vec<RawMove> = vec![Vec::new()];
    for u in 0..ps.others.len() {
        let k = ps.others[u];
        if k == 0 {
            continue;
        }
        let acts = fg.allowed_at(u, ps.date);
        let per_vertex: Vec<RawMove> = compositions(k, acts.len())
            .into_iter()
            .map(|counts| counts.iter().zip(&acts).filter(|(c, _)| **c > 0).map(|(&c, &a)| (u, a, c)).collect())
            .collect();
        out = out.iter().flat_map(|prefix| per_vertex.iter().map(move |m| [prefix.clone(), m.clone()].concat())).collect();
    }
    out
}

/// Punishment value computed directly over raw coalition proposals, without
/// merging proposals that have the same effect. Slower; used to cross-check
/// [`Punisher`].
pub fn lowval_by_raw_moves(fg: &FiniteGame, i: PlayerId, s: &Config) -> Cost {
    fn go(fg: &FiniteGame, tgt: VertexId, s: &PunishState, memo: &mut HashMap<PunishState, Cost>) -> Cost {
        let h = fg.horizon();
        if s.me == tgt {
            return Cost::ZERO;
        }
        if s.date >= h {
            return Cost::Infinite;
        }
        if let Some(&v) = memo.get(s) {
            return v;
        }
        let d = s.date;
        let w = fg.game().wgt(s.me, usize::from(s.others[s.me]) + 1);
        let mut best = Cost::ZERO;
        for raw in enumerate_coalition_moves(fg, s) {
            let mut worst_for_coalition = Cost::Infinite;
            for b in fg.allowed_at(s.me, d) {
                let m = raw.iter().map(|p| p.1.date).chain([b.date]).min().unwrap();
                let c = if m > h {
                    Cost::Infinite
                } else {
                    let mut others = s.others.clone();
                    for &(u, a, k) in &raw {
                        if a.date == m {
                            others[u] -= k;
                            others[a.vertex.unwrap()] += k;
                        }
                    }
                    let me = if b.date == m { b.vertex.unwrap() } else { s.me };
                    Cost::Finite(u64::from(m - d) * w) + go(fg, tgt, &PunishState { me, others, date: m }, memo)
                };
                worst_for_coalition = worst_for_coalition.min(c);
            }
            best = best.max(worst_for_coalition);
        }
        memo.insert(s.clone(), best);
        best
    }
    go(fg, fg.game().tgt(i), &PunishState::from_config(fg, i, s), &mut HashMap::new())
}
