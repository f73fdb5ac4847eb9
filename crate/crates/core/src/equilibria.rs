//! Winning blind strategies, the potential and best-response dynamics.
//!
//! A blind strategy is a trajectory: a player commits to its dated path and
//! ignores everyone else. Each player's realized positions are then fixed by
//! its own trajectory, so the load every other player sees is known in
//! advance and a best response is a shortest path in the time-expanded graph.

use thiserror::Error;

use crate::model::{Date, PlayerId, VertexId};
use crate::semantics::{FiniteGame, Trajectory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquilibriaError {
    #[error("player {} has no winning trajectory within the horizon", .player + 1)]
    NoWinningTrajectory { player: PlayerId },
    #[error("potential did not decrease: {before} -> {after} after player {} improved", .player + 1)]
    PotentialNotDecreasing { player: PlayerId, before: u64, after: u64 },
}

/// One winning trajectory per player, each cut at its first target visit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlindProfile {
    pub trajs: Vec<Trajectory>,
}

/// Player positions at every date `0..=H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupancy {
    /// `timelines[i][t]` is player `i`'s vertex during `[t, t + 1)`.
    pub timelines: Vec<Vec<VertexId>>,
    /// Date of each player's first target visit.
    pub arrivals: Vec<Date>,
}

impl Occupancy {
    pub fn of(fg: &FiniteGame, p: &BlindProfile) -> Occupancy {
        let g = fg.game();
        let timelines = p.trajs.iter().map(|t| t.timeline(fg)).collect();
        let arrivals = p.trajs.iter().enumerate().map(|(i, t)| t.steps[t.first_visit(g.tgt(i)).expect("winning trajectory")].1).collect();
        Occupancy { timelines, arrivals }
    }

    /// Players on `v` at date `t`, skipping `except`.
    pub fn load(&self, v: VertexId, t: Date, except: Option<PlayerId>) -> usize {
        self.timelines.iter().enumerate().filter(|&(j, tl)| Some(j) != except && tl[t as usize] == v).count()
    }

    /// Players on `v` at `t` that have not reached their target yet.
    pub fn pre_target_load(&self, v: VertexId, t: Date) -> usize {
        self.timelines.iter().zip(&self.arrivals).filter(|&(tl, &a)| t < a && tl[t as usize] == v).count()
    }
}

/// All winning trajectories of player `i` whose first target visit is at
/// most `min(time_cap, H)`, depth-first by edge declaration order and then
/// by date.
pub fn enumerate_winning_trajectories(fg: &FiniteGame, i: PlayerId, time_cap: Date) -> Vec<Trajectory> {
    let g = fg.game();
    let cap = time_cap.min(fg.horizon());
    let tgt = g.tgt(i);
    let reach = reachability(fg, tgt, cap);
    let mut out = Vec::new();
    let mut path = vec![(g.src(i), 0)];
    fn go(fg: &FiniteGame, tgt: VertexId, cap: Date, reach: &[Vec<bool>], path: &mut Vec<(VertexId, Date)>, out: &mut Vec<Trajectory>) {
        let &(v, d) = path.last().unwrap();
        if v == tgt {
            out.push(Trajectory::new(path.clone()));
            return;
        }
        for e in fg.game().network().out_edges(v) {
            for d2 in e.guard.dates_in(d + 1, cap) {
                if reach[e.to][d2 as usize] {
                    path.push((e.to, d2));
                    go(fg, tgt, cap, reach, path, out);
                    path.pop();
                }
            }
        }
    }
    if reach[g.src(i)][0] {
        go(fg, tgt, cap, &reach, &mut path, &mut out);
    }
    out
}

/// `reach[v][t]`: `tgt` can be reached from `(v, t)` by date `cap`.
fn reachability(fg: &FiniteGame, tgt: VertexId, cap: Date) -> Vec<Vec<bool>> {
    let net = fg.game().network();
    let mut reach = vec![vec![false; cap as usize + 1]; net.vertex_count()];
    for t in (0..=cap).rev() {
        for v in 0..net.vertex_count() {
            reach[v][t as usize] = v == tgt || net.out_edges(v).any(|e| e.guard.dates_in(t + 1, cap).any(|d2| reach[e.to][d2 as usize]));
        }
    }
    reach
}

/// Σ over dates `t ≤ H` and vertices `v` of `Σ_{k=1}^{L} wgt(v)(k)`, where `L`
/// counts the players on `v` at `t` that have not yet reached their target.
pub fn potential(fg: &FiniteGame, p: &BlindProfile) -> u64 {
    let g = fg.game();
    let occ = Occupancy::of(fg, p);
    let mut psi = 0;
    for t in 0..=fg.horizon() {
        for v in 0..g.network().vertex_count() {
            psi += (1..=occ.pre_target_load(v, t)).map(|k| g.wgt(v, k)).sum::<u64>();
        }
    }
    psi
}

/// Cost of staying on `v` during `[t, t2)` next to the other players.
fn stay_cost(fg: &FiniteGame, occ: &Occupancy, i: PlayerId, v: VertexId, t: Date, t2: Date) -> u64 {
    (t..t2).map(|u| fg.game().wgt(v, occ.load(v, u, Some(i)) + 1)).sum()
}

/// Player `i`'s cost when following `traj` against the others in `occ`.
pub fn trajectory_cost(fg: &FiniteGame, occ: &Occupancy, i: PlayerId, traj: &Trajectory) -> u64 {
    let end = traj.first_visit(fg.game().tgt(i)).expect("winning trajectory");
    traj.steps[..=end].windows(2).map(|w| stay_cost(fg, occ, i, w[0].0, w[0].1, w[1].1)).sum()
}

/// The cheapest winning trajectory of player `i` against the other players'
/// trajectories in `p` (first in enumeration order among the cheapest), and
/// its cost.
pub fn best_response(fg: &FiniteGame, p: &BlindProfile, i: PlayerId) -> Option<(Trajectory, u64)> {
    let g = fg.game();
    let occ = Occupancy::of(fg, p);
    let h = fg.horizon();
    let tgt = g.tgt(i);
    let nv = g.network().vertex_count();
    // dist[v][t]: cheapest cost from (v, t) to the target
    let mut dist: Vec<Vec<Option<u64>>> = vec![vec![None; h as usize + 1]; nv];
    for t in (0..=h).rev() {
        for v in 0..nv {
            dist[v][t as usize] = if v == tgt {
                Some(0)
            } else {
                g.network()
                    .out_edges(v)
                    .flat_map(|e| e.guard.dates_in(t + 1, h).map(move |t2| (e.to, t2)))
                    .filter_map(|(x, t2)| dist[x][t2 as usize].map(|rest| rest + stay_cost(fg, &occ, i, v, t, t2)))
                    .min()
            };
        }
    }
    let total = dist[g.src(i)][0]?;
    let mut steps = vec![(g.src(i), 0)];
    let (mut v, mut t) = steps[0];
    while v != tgt {
        let here = dist[v][t as usize].unwrap();
        let (x, t2) = g
            .network()
            .out_edges(v)
            .flat_map(|e| e.guard.dates_in(t + 1, h).map(move |t2| (e.to, t2)))
            .find(|&(x, t2)| dist[x][t2 as usize].is_some_and(|rest| rest + stay_cost(fg, &occ, i, v, t, t2) == here))
            .expect("an optimal arc exists");
        steps.push((x, t2));
        (v, t) = (x, t2);
    }
    Some((Trajectory::new(steps), total))
}

#[derive(Clone, Debug)]
pub struct Dynamics {
    pub profile: BlindProfile,
    pub costs: Vec<u64>,
    /// Potential before the first improvement and after each one.
    pub potential_trace: Vec<u64>,
    /// `(player, new cost)` for each improvement.
    pub improvements: Vec<(PlayerId, u64)>,
}

impl Dynamics {
    pub fn sw(&self) -> u64 {
        self.costs.iter().sum()
    }
}

/// Round-robin best-response dynamics from each player's first winning
/// trajectory. A player switches only on a strict improvement; the potential
/// must strictly decrease at every switch.
pub fn best_response_dynamics(fg: &FiniteGame) -> Result<Dynamics, EquilibriaError> {
    let n = fg.n();
    let mut trajs = Vec::with_capacity(n);
    for i in 0..n {
        let first = first_winning_trajectory(fg, i).ok_or(EquilibriaError::NoWinningTrajectory { player: i })?;
        trajs.push(first);
    }
    let mut profile = BlindProfile { trajs };
    let mut psi = potential(fg, &profile);
    let mut trace = vec![psi];
    let mut improvements = Vec::new();
    loop {
        let mut changed = false;
        for i in 0..n {
            let occ = Occupancy::of(fg, &profile);
            let current = trajectory_cost(fg, &occ, i, &profile.trajs[i]);
            let (br, cost) = best_response(fg, &profile, i).expect("player has a winning trajectory");
            if cost < current {
                profile.trajs[i] = br;
                let next = potential(fg, &profile);
                if next >= psi {
                    return Err(EquilibriaError::PotentialNotDecreasing { player: i, before: psi, after: next });
                }
                psi = next;
                trace.push(psi);
                improvements.push((i, cost));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let occ = Occupancy::of(fg, &profile);
    let costs = (0..n).map(|i| trajectory_cost(fg, &occ, i, &profile.trajs[i])).collect();
    Ok(Dynamics { profile, costs, potential_trace: trace, improvements })
}

/// First winning trajectory in enumeration order, without enumerating the rest.
pub fn first_winning_trajectory(fg: &FiniteGame, i: PlayerId) -> Option<Trajectory> {
    let g = fg.game();
    let h = fg.horizon();
    let tgt = g.tgt(i);
    let reach = reachability(fg, tgt, h);
    if !reach[g.src(i)][0] {
        return None;
    }
    let mut steps = vec![(g.src(i), 0)];
    let (mut v, mut t) = steps[0];
    while v != tgt {
        let next = g
            .network()
            .out_edges(v)
            .flat_map(|e| e.guard.dates_in(t + 1, h).map(move |t2| (e.to, t2)))
            .find(|&(x, t2)| reach[x][t2 as usize])
            .expect("reachable state has a reachable successor");
        steps.push(next);
        (v, t) = next;
    }
    Some(Trajectory::new(steps))
}
