use std::fmt::Write;

use crate::model::{Date, Game, PlayerId, VertexId};

use super::{Action, FiniteGame, Play, SemanticsError};

/// A dated path `(v_0, d_0)(v_1, d_1)...` with strictly increasing dates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trajectory {
    pub steps: Vec<(VertexId, Date)>,
}

impl Trajectory {
    pub fn new(steps: Vec<(VertexId, Date)>) -> Trajectory {
        Trajectory { steps }
    }

    /// Index of the first step on `tgt`.
    pub fn first_visit(&self, tgt: VertexId) -> Option<usize> {
        self.steps.iter().position(|&(v, _)| v == tgt)
    }

    /// Copy cut right after the first visit of `tgt`.
    pub fn truncated_at(&self, tgt: VertexId) -> Trajectory {
        let end = self.first_visit(tgt).map_or(self.steps.len(), |k| k + 1);
        Trajectory { steps: self.steps[..end].to_vec() }
    }

    pub fn show(&self, g: &Game) -> String {
        let mut out = String::new();
        for &(v, d) in &self.steps {
            write!(out, "({},{d})", g.network().name(v)).unwrap();
        }
        out
    }

    /// Position at every date `0..=H`, following the canonical continuation
    /// after the last step. The trajectory must start at date 0.
    pub fn timeline(&self, fg: &FiniteGame) -> Vec<VertexId> {
        let h = fg.horizon();
        let mut pos = Vec::with_capacity(h as usize + 1);
        let mut steps = self.steps.clone();
        let (mut v, mut t) = *steps.last().expect("non-empty trajectory");
        while t < h {
            match continuation(fg, v, t) {
                Action { vertex: Some(w), date } if date <= h => {
                    steps.push((w, date));
                    (v, t) = (w, date);
                }
                _ => break,
            }
        }
        let mut k = 0;
        for d in 0..=h {
            while k + 1 < steps.len() && steps[k + 1].1 <= d {
                k += 1;
            }
            pos.push(steps[k].0);
        }
        pos
    }
}

/// The proposal a player makes after its target visit, from its last
/// realized position `(v, t)`: stay via the self-loop if it is open at
/// `t + 1`, else take the first declared out-edge at its earliest date.
pub fn continuation(fg: &FiniteGame, v: VertexId, t: Date) -> Action {
    let h = fg.horizon();
    if t >= h {
        return Action::bottom(h + 1);
    }
    let net = fg.game().network();
    if net.edge(v, v).is_some_and(|e| e.guard.contains(t + 1)) {
        return Action::to(v, t + 1);
    }
    net.out_edges(v)
        .find_map(|e| e.guard.first_at_or_after(t + 1).filter(|&d| d <= h + 1).map(|d| Action::to(e.to, d)))
        .unwrap_or(Action::bottom(h + 1))
}

/// Checks a blind trajectory and returns the index of its first target visit.
fn check_trajectory(fg: &FiniteGame, i: PlayerId, traj: &Trajectory) -> Result<usize, SemanticsError> {
    let g = fg.game();
    if traj.steps.first() != Some(&(g.src(i), 0)) {
        return Err(SemanticsError::TrajectoryStart { player: i });
    }
    for (k, w) in traj.steps.windows(2).enumerate() {
        let ((v, d), (v2, d2)) = (w[0], w[1]);
        let ok = d2 > d && d2 <= fg.horizon() && g.network().edge(v, v2).is_some_and(|e| e.guard.contains(d2));
        if !ok {
            return Err(SemanticsError::TrajectoryGuard { player: i, step: k + 1 });
        }
    }
    let k = traj.first_visit(g.tgt(i)).ok_or(SemanticsError::TrajectoryNotWinning { player: i })?;
    let (mut v, mut t) = traj.steps[k];
    for &(v2, d2) in &traj.steps[k + 1..] {
        if continuation(fg, v, t) != Action::to(v2, d2) {
            return Err(SemanticsError::TrajectoryTail { player: i });
        }
        (v, t) = (v2, d2);
    }
    Ok(k)
}

/// The unique play produced when every player follows its trajectory blindly.
///
/// Players propose their next trajectory step until it is realized; after
/// reaching the target they follow [`continuation`]. The play stops once all
/// players have visited their targets or the horizon clamp is hit.
pub fn outcome_of_blind(fg: &FiniteGame, trajs: &[Trajectory]) -> Result<Play, SemanticsError> {
    let n = fg.n();
    if trajs.len() != n {
        return Err(SemanticsError::ActionCount { expected: n, got: trajs.len() });
    }
    let visit: Vec<usize> = trajs.iter().enumerate().map(|(i, t)| check_trajectory(fg, i, t)).collect::<Result<_, _>>()?;
    let mut idx = vec![0usize; n];
    let mut last: Vec<(VertexId, Date)> = trajs.iter().map(|t| t.steps[0]).collect();
    let mut play = Play::new(fg, fg.start());
    let h = fg.horizon();
    loop {
        if (0..n).all(|i| idx[i] >= visit[i]) {
            break;
        }
        let actions: Vec<Action> = (0..n)
            .map(|i| match trajs[i].steps.get(idx[i] + 1) {
                Some(&(v, d)) => Action::to(v, d),
                None => continuation(fg, last[i].0, last[i].1),
            })
            .collect();
        play.push_unchecked(fg, actions);
        let t = play.transitions().last().unwrap();
        if t.to.date > h {
            break;
        }
        for i in 0..n {
            if t.moved(i) {
                idx[i] += 1;
                last[i] = (t.to.positions[i], t.to.date);
            }
        }
    }
    Ok(play)
}

/// Parses `traj <i> (<v>,<d>) ...` lines, one per player (1-based).
pub fn parse_trajectories(g: &Game, text: &str) -> Result<Vec<Trajectory>, SemanticsError> {
    let n = g.player_count();
    let mut out: Vec<Option<Trajectory>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| SemanticsError::TrajectoryFile { line, msg };
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else { continue };
        if kw != "traj" {
            return Err(err(format!("unknown keyword `{kw}`")));
        }
        let Some((player, steps)) = rest.split_first() else { return Err(err("missing player index".into())) };
        let player: usize = player.parse().map_err(|_| err(format!("bad player index `{player}`")))?;
        if player == 0 || player > n {
            return Err(err(format!("player {player} out of range 1..={n}")));
        }
        if out[player - 1].is_some() {
            return Err(err(format!("player {player} given twice")));
        }
        let mut traj = Vec::new();
        for tok in steps {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.split_once(','))
                .ok_or_else(|| err(format!("`{tok}` is not a step `(v,d)`")))?;
            let v = g.network().vertex_id(inner.0).ok_or_else(|| err(format!("unknown vertex \"{}\"", inner.0)))?;
            let d: Date = inner.1.parse().map_err(|_| err(format!("bad date `{}`", inner.1)))?;
            if traj.last().is_some_and(|&(_, prev)| d <= prev) || (traj.is_empty() && d != 0) {
                return Err(err("dates must increase strictly from 0".into()));
            }
            traj.push((v, d));
        }
        if traj.is_empty() {
            return Err(err("empty trajectory".into()));
        }
        out[player - 1] = Some(Trajectory { steps: traj });
    }
    out.into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or(SemanticsError::TrajectoryFile { line: 0, msg: format!("no trajectory for player {}", i + 1) }))
        .collect()
}

pub fn render_trajectories(g: &Game, trajs: &[Trajectory]) -> String {
    let mut out = String::new();
    for (i, t) in trajs.iter().enumerate() {
        writeln!(out, "traj {} {}", i + 1, t.show(g).replace(")(", ") (")).unwrap();
    }
    out
}
