//! The horizon-truncated concurrent game.
//!
//! States are timed configurations `(c, d)`. At each state every player
//! proposes a dated move; the earliest proposals win, only their proposers
//! move, and everyone pays `(d' - d) · wgt(v)(load)` for the time spent at
//! their current vertex. Dates past the horizon `H` are clamped to `H + 1`
//! and cost nothing.

mod blind;
mod play;

use std::fmt;

use thiserror::Error;

use crate::model::{Date, Game, GameBounds, PlayerId, VertexId};

pub use blind::{continuation, outcome_of_blind, parse_trajectories, render_trajectories, Trajectory};
pub use play::{play_cost, project_trajectory, CostProfile, Play, Transition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("horizon must be at least 1")]
    HorizonTooSmall,
    #[error("expected {expected} actions, got {got}")]
    ActionCount { expected: usize, got: usize },
    #[error("player {}: action {action} is not allowed at {state}", .player + 1)]
    InvalidAction { player: PlayerId, action: String, state: String },
    #[error("player {}: trajectory must start at its source at date 0", .player + 1)]
    TrajectoryStart { player: PlayerId },
    #[error("player {}: trajectory step {step} is not a guarded move", .player + 1)]
    TrajectoryGuard { player: PlayerId, step: usize },
    #[error("player {}: trajectory does not reach the target by the horizon", .player + 1)]
    TrajectoryNotWinning { player: PlayerId },
    #[error("player {}: trajectory continues after the target differently from the canonical policy", .player + 1)]
    TrajectoryTail { player: PlayerId },
    #[error("line {line}: {msg}")]
    TrajectoryFile { line: usize, msg: String },
    #[error("transition {step} of the play does not follow the game rules")]
    BrokenPlay { step: usize },
}

/// A proposal: a destination (`None` is ⊥) and a strictly later date.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub vertex: Option<VertexId>,
    pub date: Date,
}

impl Action {
    pub fn to(vertex: VertexId, date: Date) -> Action {
        Action { vertex: Some(vertex), date }
    }

    pub fn bottom(date: Date) -> Action {
        Action { vertex: None, date }
    }
}

/// Player positions plus the current date.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub positions: Vec<VertexId>,
    pub date: Date,
}

impl Config {
    pub fn load(&self, v: VertexId) -> usize {
        self.positions.iter().filter(|&&p| p == v).count()
    }
}

/// A game together with the analysis horizon `H`.
#[derive(Clone, Copy, Debug)]
pub struct FiniteGame<'g> {
    game: &'g Game,
    bounds: GameBounds,
}

impl<'g> FiniteGame<'g> {
    pub fn new(game: &'g Game, horizon: Date) -> Result<Self, SemanticsError> {
        if horizon < 1 {
            return Err(SemanticsError::HorizonTooSmall);
        }
        Ok(FiniteGame { game, bounds: game.bounds().with_horizon(horizon) })
    }

    /// The game truncated at `MaxTime`.
    pub fn with_default_horizon(game: &'g Game) -> Self {
        FiniteGame { game, bounds: game.bounds() }
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn horizon(&self) -> Date {
        self.bounds.horizon
    }

    pub fn bounds(&self) -> GameBounds {
        self.bounds
    }

    pub fn n(&self) -> usize {
        self.game.player_count()
    }

    pub fn start(&self) -> Config {
        Config { positions: (0..self.n()).map(|i| self.game.src(i)).collect(), date: 0 }
    }

    /// Allowed actions of a player standing on `v` at date `d`, by edge
    /// declaration order and then by date.
    pub fn allowed_at(&self, v: VertexId, d: Date) -> Vec<Action> {
        let h = self.horizon();
        let mut out = Vec::new();
        if d < h {
            for e in self.game.network().out_edges(v) {
                out.extend(e.guard.dates_in(d + 1, h + 1).map(|d2| Action::to(e.to, d2)));
            }
        }
        if out.is_empty() {
            out.push(Action::bottom(h + 1));
        }
        out
    }

    pub fn allowed(&self, s: &Config, i: PlayerId) -> Vec<Action> {
        self.allowed_at(s.positions[i], s.date)
    }

    pub fn is_allowed(&self, v: VertexId, d: Date, a: Action) -> bool {
        let h = self.horizon();
        if a.date <= d || a.date > h + 1 {
            return false;
        }
        match a.vertex {
            Some(to) => d < h && self.game.network().edge(v, to).is_some_and(|e| e.guard.contains(a.date)),
            None => a.date == h + 1 && self.allowed_at(v, d) == [a],
        }
    }

    /// Successor state and the bitmask of moving players. Checks every action.
    pub fn update(&self, s: &Config, a: &[Action]) -> Result<(Config, u64), SemanticsError> {
        if a.len() != self.n() {
            return Err(SemanticsError::ActionCount { expected: self.n(), got: a.len() });
        }
        for (i, &ai) in a.iter().enumerate() {
            if !self.is_allowed(s.positions[i], s.date, ai) {
                return Err(SemanticsError::InvalidAction { player: i, action: self.show_action(ai), state: self.show_config(s) });
            }
        }
        Ok(self.update_unchecked(s, a))
    }

    /// [`update`](Self::update) without validating the actions.
    pub fn update_unchecked(&self, s: &Config, a: &[Action]) -> (Config, u64) {
        let min = a.iter().map(|x| x.date).min().expect("at least one player");
        let mut select = 0u64;
        let mut next = s.clone();
        next.date = min;
        for (i, ai) in a.iter().enumerate() {
            if ai.date == min {
                select |= 1 << i;
                if min <= self.horizon() {
                    next.positions[i] = ai.vertex.expect("⊥ is only proposed at H+1");
                }
            }
        }
        (next, select)
    }

    /// Per-player cost of moving from `s` to a state at date `d2`.
    pub fn step_costs(&self, s: &Config, d2: Date) -> Vec<u64> {
        if d2 > self.horizon() {
            return vec![0; self.n()];
        }
        let dt = u64::from(d2 - s.date);
        s.positions.iter().map(|&v| dt * self.game.wgt(v, s.load(v))).collect()
    }

    pub fn show_action(&self, a: Action) -> String {
        match a.vertex {
            Some(v) => format!("({},{})", self.game.network().name(v), a.date),
            None => format!("(⊥,{})", a.date),
        }
    }

    pub fn show_config(&self, s: &Config) -> String {
        let names: Vec<&str> = s.positions.iter().map(|&v| self.game.network().name(v)).collect();
        format!("(({}),{})", names.join(","), s.date)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.vertex {
            Some(v) => write!(f, "(#{v},{})", self.date),
            None => write!(f, "(⊥,{})", self.date),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_game;

    const FIG1: &str = include_str!("../../fixtures/fig1.tng");

    fn v(g: &Game, name: &str) -> VertexId {
        g.network().vertex_id(name).unwrap()
    }

    #[test]
    fn allowed_actions_at_date_two() {
        let g = parse_game(FIG1).unwrap();
        let fg = FiniteGame::new(&g, 8).unwrap();
        let s = Config { positions: vec![v(&g, "src"), v(&g, "s1")], date: 2 };
        let mut got = fg.allowed(&s, 0);
        got.sort();
        let mut want = vec![Action::to(v(&g, "s1"), 3), Action::to(v(&g, "s4"), 3), Action::to(v(&g, "s2"), 4), Action::to(v(&g, "s5"), 4)];
        want.extend((3..=9).map(|d| Action::to(v(&g, "src"), d)));
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn allowed_respects_guards_and_horizon() {
        let g = parse_game(FIG1).unwrap();
        let fg = FiniteGame::new(&g, 8).unwrap();
        let start = fg.start();
        let acts = fg.allowed(&start, 0);
        assert!(acts.contains(&Action::to(v(&g, "s3"), 1)));
        assert!(!acts.contains(&Action::to(v(&g, "s3"), 3)));
        let late = Config { positions: start.positions.clone(), date: 8 };
        assert_eq!(fg.allowed(&late, 1), vec![Action::bottom(9)]);
    }

    #[test]
    fn update_moves_only_the_earliest() {
        let g = parse_game(FIG1).unwrap();
        let fg = FiniteGame::new(&g, 8).unwrap();
        let (src, s1, s2, s3, tgt) = (v(&g, "src"), v(&g, "s1"), v(&g, "s2"), v(&g, "s3"), v(&g, "tgt"));
        let s = Config { positions: vec![src, s1], date: 2 };
        let (next, sel) = fg.update(&s, &[Action::to(s1, 3), Action::to(s2, 4)]).unwrap();
        assert_eq!(next, Config { positions: vec![s1, s1], date: 3 });
        assert_eq!(sel, 0b01);
        assert_eq!(fg.step_costs(&s, next.date), vec![5, 1]);

        let s = Config { positions: vec![s3, s3], date: 1 };
        let (next, sel) = fg.update(&s, &[Action::to(tgt, 3), Action::to(tgt, 3)]).unwrap();
        assert_eq!(next, Config { positions: vec![tgt, tgt], date: 3 });
        assert_eq!(sel, 0b11);
        assert_eq!(fg.step_costs(&s, 3), vec![52, 52]);
        assert_eq!(fg.step_costs(&s, 9), vec![0, 0]);
    }

    #[test]
    fn update_rejects_bad_actions() {
        let g = parse_game(FIG1).unwrap();
        let fg = FiniteGame::new(&g, 8).unwrap();
        let s3 = v(&g, "s3");
        let err = fg.update(&fg.start(), &[Action::to(s3, 1), Action::to(s3, 3)]).unwrap_err();
        assert!(matches!(err, SemanticsError::InvalidAction { player: 1, .. }));
    }

    #[test]
    fn clamp_keeps_positions() {
        let g = parse_game(FIG1).unwrap();
        let fg = FiniteGame::new(&g, 8).unwrap();
        let src = v(&g, "src");
        let s = Config { positions: vec![src, src], date: 7 };
        let (next, sel) = fg.update(&s, &[Action::to(src, 9), Action::to(src, 9)]).unwrap();
        assert_eq!(next, Config { positions: vec![src, src], date: 9 });
        assert_eq!(sel, 0b11);
    }
}
