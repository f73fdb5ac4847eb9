//! Social optimum: the least social welfare over all plays.
//!
//! Two searches are provided. The product search tracks every player's
//! position; the abstract search, for games where all players share one
//! objective, tracks only how many active and finished players stand on each
//! vertex. Both are uniform-cost searches whose dates are capped by
//! `min(H, bound)`: every unit of time costs an unfinished player at least 1,
//! so a play with social welfare at most `bound` ends by date `bound`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::combin::{advance, compositions};
use crate::cost::Cost;
use crate::model::{Date, VertexId};
use crate::semantics::{Action, Config, FiniteGame, Play};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SocialOptError {
    #[error("the abstract search needs every player to share the same source and target")]
    NotSymmetric,
}

#[derive(Clone, Debug)]
pub struct SocialOptimum {
    pub value: Cost,
    /// A play achieving `value`, when finite.
    pub witness: Option<Play>,
    /// Largest date explored.
    pub date_cap: Date,
}

/// `(P_A, P_W, d)`: active and finished player counts per vertex, and the date.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractNode {
    pub active: Vec<u8>,
    pub winning: Vec<u8>,
    pub date: Date,
}

/// Flow leaving one vertex along an abstract edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFlow {
    pub from: VertexId,
    /// `(destination, crosses an edge, active count, finished count)`.
    pub parts: Vec<(VertexId, bool, u8, u8)>,
}

#[derive(Clone, Debug)]
pub struct AbstractEdge {
    pub from: AbstractNode,
    pub to: AbstractNode,
    pub flows: Vec<VertexFlow>,
    pub weight: u64,
}

#[derive(Clone, Debug)]
pub struct SymmetricOptimum {
    pub value: Cost,
    pub path: Vec<AbstractEdge>,
    /// The abstract path replayed with concrete players.
    pub witness: Option<Play>,
    pub date_cap: Date,
}

/// Social optimum over the horizon, using the abstract search when the
/// objectives allow it.
pub fn social_optimum(fg: &FiniteGame) -> SocialOptimum {
    if fg.game().symmetric_pair().is_some() {
        let so = social_optimum_symmetric(fg, u64::MAX).expect("symmetric game");
        SocialOptimum { value: so.value, witness: so.witness, date_cap: so.date_cap }
    } else {
        social_optimum_asymmetric(fg, u64::MAX)
    }
}

/// Whether some play has social welfare at most `x`.
pub fn constrained_sw(fg: &FiniteGame, x: u64) -> bool {
    let value = if fg.game().symmetric_pair().is_some() {
        social_optimum_symmetric(fg, x).expect("symmetric game").value
    } else {
        social_optimum_asymmetric(fg, x).value
    };
    value <= Cost::Finite(x)
}

fn date_cap(fg: &FiniteGame, bound: u64) -> Date {
    u64::from(fg.horizon()).min(bound) as Date
}

/// Edge targets of `v` open at `d2`, in declaration order.
fn move_targets(fg: &FiniteGame, v: VertexId, d2: Date) -> Vec<VertexId> {
    fg.game().network().out_edges(v).filter(|e| e.guard.contains(d2)).map(|e| e.to).collect()
}

/// A player on `v` at date `d` can let others move at `d2` if it has an
/// allowed proposal later than `d2`.
fn stay_action(fg: &FiniteGame, v: VertexId, d: Date, d2: Date) -> Option<Action> {
    fg.allowed_at(v, d).into_iter().find(|a| a.date > d2)
}

type ProductKey = (Vec<VertexId>, Date, u64);

/// Uniform-cost search over `(positions, date, finished players)`.
pub fn social_optimum_asymmetric(fg: &FiniteGame, bound: u64) -> SocialOptimum {
    let g = fg.game();
    let n = fg.n();
    let all: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let cap = date_cap(fg, bound);
    let start = fg.start();
    let done0 = (0..n).filter(|&i| start.positions[i] == g.tgt(i)).fold(0u64, |m, i| m | 1 << i);
    let key0: ProductKey = (start.positions.clone(), 0, done0);

    let mut best: HashMap<ProductKey, u64> = HashMap::from([(key0.clone(), 0)]);
    let mut parent: HashMap<ProductKey, ProductKey> = HashMap::new();
    let mut heap = BinaryHeap::from([Reverse((0u64, 0 as Date, key0.0.clone(), done0))]);

    while let Some(Reverse((cost, d, pos, done))) = heap.pop() {
        let key = (pos, d, done);
        if best.get(&key).is_some_and(|&b| b < cost) {
            continue;
        }
        if done == all {
            let witness = rebuild_product(fg, &parent, key);
            return SocialOptimum { value: Cost::Finite(cost), witness: Some(witness), date_cap: cap };
        }
        let (pos, _, _) = &key;
        let here = Config { positions: pos.clone(), date: d };
        for d2 in d + 1..=cap {
            let step: u64 = fg.step_costs(&here, d2).iter().enumerate().filter(|&(i, _)| done >> i & 1 == 0).map(|(_, c)| c).sum();
            let next_cost = cost + step;
            if next_cost > bound {
                continue;
            }
            // options per player: (position, crosses an edge)
            let options: Vec<Vec<(VertexId, bool)>> = pos
                .iter()
                .map(|&v| {
                    let mut opts: Vec<(VertexId, bool)> = move_targets(fg, v, d2).into_iter().map(|u| (u, true)).collect();
                    if !opts.iter().any(|&(u, _)| u == v) && stay_action(fg, v, d, d2).is_some() {
                        opts.push((v, false));
                    }
                    opts
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let mut choice = vec![0usize; n];
            loop {
                if (0..n).any(|i| options[i][choice[i]].1) {
                    let next: Vec<VertexId> = (0..n).map(|i| options[i][choice[i]].0).collect();
                    let nd = (0..n).filter(|&i| next[i] == g.tgt(i)).fold(done, |m, i| m | 1 << i);
                    let nkey = (next, d2, nd);
                    if best.get(&nkey).is_none_or(|&b| next_cost < b) {
                        best.insert(nkey.clone(), next_cost);
                        parent.insert(nkey.clone(), key.clone());
                        heap.push(Reverse((next_cost, d2, nkey.0, nd)));
                    }
                }
                if !advance(&mut choice, |i| options[i].len()) {
                    break;
                }
            }
        }
    }
    SocialOptimum { value: Cost::Infinite, witness: None, date_cap: cap }
}

fn rebuild_product(fg: &FiniteGame, parent: &HashMap<ProductKey, ProductKey>, goal: ProductKey) -> Play {
    let mut chain = vec![goal];
    while let Some(p) = parent.get(chain.last().unwrap()) {
        chain.push(p.clone());
    }
    chain.reverse();
    let mut play = Play::new(fg, fg.start());
    for w in chain.windows(2) {
        let ((pos, d, _), (next, d2, _)) = (&w[0], &w[1]);
        let actions = concrete_actions(fg, pos, *d, next, *d2);
        play.push(fg, actions).expect("search successors follow the rules");
    }
    play
}

/// Players that can cross an edge to their next position at `d2` do so; the
/// rest propose something later.
fn concrete_actions(fg: &FiniteGame, pos: &[VertexId], d: Date, next: &[VertexId], d2: Date) -> Vec<Action> {
    pos.iter()
        .zip(next)
        .map(|(&v, &u)| {
            let can_move = fg.game().network().edge(v, u).is_some_and(|e| e.guard.contains(d2));
            if can_move {
                Action::to(u, d2)
            } else {
                stay_action(fg, v, d, d2).expect("stay is feasible")
            }
        })
        .collect()
}

/// Uniform-cost search over the abstract graph of `(P_A, P_W, d)` nodes.
pub fn social_optimum_symmetric(fg: &FiniteGame, bound: u64) -> Result<SymmetricOptimum, SocialOptError> {
    let g = fg.game();
    let (src, tgt) = g.symmetric_pair().ok_or(SocialOptError::NotSymmetric)?;
    let cap = date_cap(fg, bound);
    let n = fg.n();
    if src == tgt {
        return Ok(SymmetricOptimum { value: Cost::ZERO, path: Vec::new(), witness: Some(Play::new(fg, fg.start())), date_cap: cap });
    }
    let nv = g.network().vertex_count();
    let mut active = vec![0u8; nv];
    active[src] = n as u8;
    let start = AbstractNode { active, winning: vec![0; nv], date: 0 };

    let mut best: HashMap<AbstractNode, u64> = HashMap::from([(start.clone(), 0)]);
    let mut parent: HashMap<AbstractNode, AbstractEdge> = HashMap::new();
    let mut heap = BinaryHeap::from([Reverse((0u64, 0 as Date, start.clone()))]);

    while let Some(Reverse((cost, _, node))) = heap.pop() {
        if best.get(&node).is_some_and(|&b| b < cost) {
            continue;
        }
        if node.active.iter().all(|&a| a == 0) {
            let mut path = Vec::new();
            let mut cur = node;
            while let Some(e) = parent.get(&cur) {
                cur = e.from.clone();
                path.push(e.clone());
            }
            path.reverse();
            let witness = lift_abstract_path(fg, &path);
            return Ok(SymmetricOptimum { value: Cost::Finite(cost), path, witness: Some(witness), date_cap: cap });
        }
        for edge in abstract_successors(fg, &node, tgt, cap) {
            let next_cost = cost + edge.weight;
            if next_cost > bound {
                continue;
            }
            if best.get(&edge.to).is_none_or(|&b| next_cost < b) {
                best.insert(edge.to.clone(), next_cost);
                heap.push(Reverse((next_cost, edge.to.date, edge.to.clone())));
                parent.insert(edge.to.clone(), edge);
            }
        }
    }
    Ok(SymmetricOptimum { value: Cost::Infinite, path: Vec::new(), witness: None, date_cap: cap })
}

/// All abstract edges leaving `node` with target date at most `cap`.
pub fn abstract_successors(fg: &FiniteGame, node: &AbstractNode, tgt: VertexId, cap: Date) -> Vec<AbstractEdge> {
    let g = fg.game();
    let nv = node.active.len();
    let d = node.date;
    let occupied: Vec<VertexId> = (0..nv).filter(|&v| node.active[v] + node.winning[v] > 0).collect();
    let mut out = Vec::new();
    for d2 in d + 1..=cap {
        let weight: u64 = occupied
            .iter()
            .filter(|&&v| node.active[v] > 0)
            .map(|&v| {
                let load = usize::from(node.active[v] + node.winning[v]);
                u64::from(node.active[v]) * g.wgt(v, load) * u64::from(d2 - d)
            })
            .sum();
        // destinations per occupied vertex: (vertex, crosses an edge)
        let dests: Vec<Vec<(VertexId, bool)>> = occupied
            .iter()
            .map(|&v| {
                let mut ds: Vec<(VertexId, bool)> = move_targets(fg, v, d2).into_iter().map(|u| (u, true)).collect();
                if !ds.iter().any(|&(u, _)| u == v) && stay_action(fg, v, d, d2).is_some() {
                    ds.push((v, false));
                }
                ds
            })
            .collect();
        if dests.iter().any(Vec::is_empty) {
            continue;
        }
        // per vertex, every way to split its active and finished players
        let splits: Vec<Vec<Vec<(u8, u8)>>> = occupied
            .iter()
            .zip(&dests)
            .map(|(&v, ds)| {
                let act = compositions(node.active[v], ds.len());
                let win = compositions(node.winning[v], ds.len());
                act.iter().flat_map(|a| win.iter().map(move |w| a.iter().copied().zip(w.iter().copied()).collect())).collect()
            })
            .collect();
        let mut choice = vec![0usize; occupied.len()];
        loop {
            let moves = occupied
                .iter()
                .enumerate()
                .any(|(k, _)| splits[k][choice[k]].iter().zip(&dests[k]).any(|(&(a, w), &(_, mv))| mv && a + w > 0));
            if moves {
                let mut active = vec![0u8; nv];
                let mut winning = vec![0u8; nv];
                let mut flows = Vec::with_capacity(occupied.len());
                for (k, &v) in occupied.iter().enumerate() {
                    let mut parts = Vec::new();
                    for (&(a, w), &(u, mv)) in splits[k][choice[k]].iter().zip(&dests[k]) {
                        if a + w == 0 {
                            continue;
                        }
                        if u == tgt {
                            winning[u] += a + w;
                        } else {
                            active[u] += a;
                            winning[u] += w;
                        }
                        parts.push((u, mv, a, w));
                    }
                    flows.push(VertexFlow { from: v, parts });
                }
                out.push(AbstractEdge { from: node.clone(), to: AbstractNode { active, winning, date: d2 }, flows, weight });
            }
            if !advance(&mut choice, |k| splits[k].len()) {
                break;
            }
        }
    }
    out
}

/// Replays an abstract path, assigning flows to concrete players in index order.
pub fn lift_abstract_path(fg: &FiniteGame, path: &[AbstractEdge]) -> Play {
    let g = fg.game();
    let n = fg.n();
    let mut play = Play::new(fg, fg.start());
    let mut finished: Vec<bool> = (0..n).map(|i| g.src(i) == g.tgt(i)).collect();
    for edge in path {
        let cur = play.terminal().clone();
        let mut actions = vec![None; n];
        for flow in &edge.flows {
            let here: Vec<usize> = (0..n).filter(|&i| cur.positions[i] == flow.from).collect();
            let mut act = here.iter().copied().filter(|&i| !finished[i]);
            let mut win = here.iter().copied().filter(|&i| finished[i]);
            for &(u, mv, a, w) in &flow.parts {
                let who: Vec<usize> = act.by_ref().take(a.into()).chain(win.by_ref().take(w.into())).collect();
                for i in who {
                    actions[i] = Some(if mv {
                        Action::to(u, edge.to.date)
                    } else {
                        stay_action(fg, flow.from, cur.date, edge.to.date).expect("stay is feasible")
                    });
                }
            }
        }
        let actions: Vec<Action> = actions.into_iter().map(|a| a.expect("every player assigned")).collect();
        play.push(fg, actions).expect("abstract edges follow the rules");
        let to = play.terminal();
        for (i, done) in finished.iter_mut().enumerate() {
            *done |= to.positions[i] == g.tgt(i);
        }
    }
    play
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_game;

    #[test]
    fn single_player_is_cheapest_path() {
        let g = parse_game("players 1\nvertex s affine 3 0\nvertex m affine 1 0\nvertex t affine 1 0\nedge s s 0..inf\nedge s m 1..1\nedge m t 4..4\nedge s t 3..3\nedge m m 0..inf\nedge t t 0..inf\nobjective all s t\n").unwrap();
        let fg = FiniteGame::new(&g, 6).unwrap();
        // via m: 3 + 3 = 6; direct: 9
        assert_eq!(social_optimum_asymmetric(&fg, u64::MAX).value, Cost::Finite(6));
        assert_eq!(social_optimum_symmetric(&fg, u64::MAX).unwrap().value, Cost::Finite(6));
        assert!(constrained_sw(&fg, 6));
        assert!(!constrained_sw(&fg, 5));
    }

    #[test]
    fn source_equals_target_costs_nothing() {
        let g = parse_game("players 2\nvertex v affine 1 0\nedge v v 0..inf\nobjective all v v\n").unwrap();
        let fg = FiniteGame::new(&g, 3).unwrap();
        assert_eq!(social_optimum_asymmetric(&fg, u64::MAX).value, Cost::ZERO);
        assert_eq!(social_optimum_symmetric(&fg, u64::MAX).unwrap().value, Cost::ZERO);
    }
}
