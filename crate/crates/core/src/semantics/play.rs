use crate::cost::Cost;
use crate::model::{Date, PlayerId};

use super::{Action, Config, FiniteGame, SemanticsError, Trajectory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: Config,
    pub actions: Vec<Action>,
    pub to: Config,
    /// Bitmask of the players whose proposal was earliest.
    pub select: u64,
    pub step_costs: Vec<u64>,
}

impl Transition {
    pub fn moved(&self, i: PlayerId) -> bool {
        self.select >> i & 1 == 1
    }
}

/// A finite prefix of a play; the rest is an implicit self-loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    horizon: Date,
    start: Config,
    transitions: Vec<Transition>,
}

impl Play {
    pub fn new(fg: &FiniteGame, start: Config) -> Play {
        Play { horizon: fg.horizon(), start, transitions: Vec::new() }
    }

    /// Builds a play by feeding action vectors through the update rule.
    pub fn from_actions(fg: &FiniteGame, start: Config, actions: impl IntoIterator<Item = Vec<Action>>) -> Result<Play, SemanticsError> {
        let mut play = Play::new(fg, start);
        for a in actions {
            play.push(fg, a)?;
        }
        Ok(play)
    }

    pub fn push(&mut self, fg: &FiniteGame, actions: Vec<Action>) -> Result<(), SemanticsError> {
        let from = self.terminal().clone();
        let (to, select) = fg.update(&from, &actions)?;
        let step_costs = fg.step_costs(&from, to.date);
        self.transitions.push(Transition { from, actions, to, select, step_costs });
        Ok(())
    }

    pub fn horizon(&self) -> Date {
        self.horizon
    }

    /// Appends a transition whose actions are already known to be allowed.
    pub fn push_unchecked(&mut self, fg: &FiniteGame, actions: Vec<Action>) {
        let from = self.terminal().clone();
        let (to, select) = fg.update_unchecked(&from, &actions);
        let step_costs = fg.step_costs(&from, to.date);
        self.transitions.push(Transition { from, actions, to, select, step_costs });
    }

    /// Drops the transitions after the first `k`.
    pub fn truncate(&mut self, k: usize) {
        self.transitions.truncate(k);
    }

    pub fn start(&self) -> &Config {
        &self.start
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn terminal(&self) -> &Config {
        self.transitions.last().map_or(&self.start, |t| &t.to)
    }

    /// `s_0, s_1, ..., s_m`.
    pub fn states(&self) -> impl Iterator<Item = &Config> + '_ {
        std::iter::once(&self.start).chain(self.transitions.iter().map(|t| &t.to))
    }

    /// Re-checks every transition against the rules of `fg`.
    pub fn check(&self, fg: &FiniteGame) -> Result<(), SemanticsError> {
        if self.horizon != fg.horizon() {
            return Err(SemanticsError::BrokenPlay { step: 0 });
        }
        let mut cur = &self.start;
        for (k, t) in self.transitions.iter().enumerate() {
            let ok = &t.from == cur
                && fg.update(cur, &t.actions).is_ok_and(|(to, sel)| to == t.to && sel == t.select)
                && t.step_costs == fg.step_costs(cur, t.to.date);
            if !ok {
                return Err(SemanticsError::BrokenPlay { step: k });
            }
            cur = &t.to;
        }
        Ok(())
    }

    /// Index of the first state where player `i` stands on its target.
    pub fn first_visit(&self, fg: &FiniteGame, i: PlayerId) -> Option<usize> {
        let tgt = fg.game().tgt(i);
        self.states().position(|s| s.positions[i] == tgt)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostProfile {
    pub costs: Vec<Cost>,
    pub sw: Cost,
}

/// Per-player costs (charges up to the first target visit, `inf` if never)
/// and their sum.
pub fn play_cost(fg: &FiniteGame, p: &Play) -> CostProfile {
    let costs: Vec<Cost> = (0..fg.n())
        .map(|i| match p.first_visit(fg, i) {
            Some(k) => Cost::Finite(p.transitions[..k].iter().map(|t| t.step_costs[i]).sum()),
            None => Cost::Infinite,
        })
        .collect();
    let sw = costs.iter().copied().sum();
    CostProfile { costs, sw }
}

/// Player `i`'s realized dated moves, starting from its initial position.
pub fn project_trajectory(p: &Play, i: PlayerId) -> Trajectory {
    let mut steps = vec![(p.start.positions[i], p.start.date)];
    for t in &p.transitions {
        if t.moved(i) && t.to.date <= p.horizon {
            steps.push((t.to.positions[i], t.to.date));
        }
    }
    Trajectory { steps }
}
