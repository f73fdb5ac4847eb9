//! Brute-force reference implementations for the test suite.
//!
//! These enumerate the concrete game directly, using only the update rule
//! and step costs from [`semantics`](crate::semantics). They are meant to be
//! obviously correct, not fast, and give up with
//! [`OracleError::BudgetExceeded`] rather than return a partial answer.

use std::collections::HashMap;

use thiserror::Error;

use crate::cost::Cost;
use crate::model::{Date, PlayerId, VertexId};
use crate::semantics::{outcome_of_blind, play_cost, Action, Config, CostProfile, FiniteGame, Trajectory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_horizon: Date,
    pub max_nodes: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_horizon: 12, max_nodes: 5_000_000 }
    }
}

struct Meter {
    left: u64,
}

impl Meter {
    fn start(fg: &FiniteGame, budget: EnumerationBudget) -> Result<Meter, OracleError> {
        if fg.horizon() > budget.max_horizon {
            return Err(OracleError::BudgetExceeded(format!("horizon {} > {}", fg.horizon(), budget.max_horizon)));
        }
        Ok(Meter { left: budget.max_nodes })
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        if self.left == 0 {
            return Err(OracleError::BudgetExceeded("node limit reached".into()));
        }
        self.left -= 1;
        Ok(())
    }
}

/// Next tuple in lexicographic order, last position fastest.
fn next_tuple(t: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for k in (0..t.len()).rev() {
        t[k] += 1;
        if t[k] < len(k) {
            return true;
        }
        t[k] = 0;
    }
    false
}

/// Every action vector at `s`, player 0 slowest.
fn action_vectors(fg: &FiniteGame, s: &Config) -> Vec<Vec<Action>> {
    let mut out: Vec<Vec<Action>> = vec![Vec::new()];
    for i in 0..fg.n() {
        let acts = fg.allowed(s, i);
        out = out.iter().flat_map(|p| acts.iter().map(move |&a| [p.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Minimum social welfare over all plays of the truncated game.
pub fn brute_so(fg: &FiniteGame, budget: EnumerationBudget) -> Result<Cost, OracleError> {
    fn go(fg: &FiniteGame, s: &Config, done: u64, memo: &mut HashMap<(Config, u64), Cost>, meter: &mut Meter) -> Result<Cost, OracleError> {
        let g = fg.game();
        if (0..fg.n()).all(|i| done >> i & 1 == 1) {
            return Ok(Cost::ZERO);
        }
        if s.date > fg.horizon() {
            return Ok(Cost::Infinite);
        }
        if let Some(&c) = memo.get(&(s.clone(), done)) {
            return Ok(c);
        }
        meter.tick()?;
        let mut successors: Vec<Config> = Vec::new();
        for a in action_vectors(fg, s) {
            let (next, _) = fg.update(s, &a).expect("enumerated actions are allowed");
            if !successors.contains(&next) {
                successors.push(next);
            }
        }
        let mut best = Cost::Infinite;
        for next in successors {
            let steps = fg.step_costs(s, next.date);
            let paid: u64 = (0..fg.n()).filter(|&i| done >> i & 1 == 0).map(|i| steps[i]).sum();
            let nd = (0..fg.n()).filter(|&i| next.positions[i] == g.tgt(i)).fold(done, |m, i| m | 1 << i);
            best = best.min(Cost::Finite(paid) + go(fg, &next, nd, memo, meter)?);
        }
        memo.insert((s.clone(), done), best);
        Ok(best)
    }
    let mut meter = Meter::start(fg, budget)?;
    let start = fg.start();
    let g = fg.game();
    let done = (0..fg.n()).filter(|&i| start.positions[i] == g.tgt(i)).fold(0u64, |m, i| m | 1 << i);
    go(fg, &start, done, &mut HashMap::new(), &mut meter)
}

/// Winning trajectories of player `i` (first target visit by the horizon),
/// cut at the first visit.
pub fn winning_trajectories(fg: &FiniteGame, i: PlayerId, budget: EnumerationBudget) -> Result<Vec<Trajectory>, OracleError> {
    fn go(
        fg: &FiniteGame,
        tgt: VertexId,
        path: &mut Vec<(VertexId, Date)>,
        out: &mut Vec<Trajectory>,
        meter: &mut Meter,
    ) -> Result<(), OracleError> {
        meter.tick()?;
        let &(v, d) = path.last().unwrap();
        if v == tgt {
            out.push(Trajectory::new(path.clone()));
            return Ok(());
        }
        for e in fg.game().network().edges().iter().filter(|e| e.from == v) {
            for d2 in d + 1..=fg.horizon() {
                if e.guard.contains(d2) {
                    path.push((e.to, d2));
                    go(fg, tgt, path, out, meter)?;
                    path.pop();
                }
            }
        }
        Ok(())
    }
    let mut meter = Meter::start(fg, budget)?;
    let mut out = Vec::new();
    go(fg, fg.game().tgt(i), &mut vec![(fg.game().src(i), 0)], &mut out, &mut meter)?;
    Ok(out)
}

/// All winning blind profiles where no player gains by swapping its own
/// trajectory for another winning one.
pub fn brute_blind_ne(fg: &FiniteGame, budget: EnumerationBudget) -> Result<Vec<(Vec<Trajectory>, CostProfile)>, OracleError> {
    let n = fg.n();
    let sets: Vec<Vec<Trajectory>> = (0..n).map(|i| winning_trajectories(fg, i, budget)).collect::<Result<_, _>>()?;
    let mut meter = Meter::start(fg, budget)?;
    let mut costs: HashMap<Vec<usize>, CostProfile> = HashMap::new();
    let mut cost_of = |idx: &[usize], meter: &mut Meter| -> Result<CostProfile, OracleError> {
        if let Some(c) = costs.get(idx) {
            return Ok(c.clone());
        }
        meter.tick()?;
        let trajs: Vec<Trajectory> = idx.iter().enumerate().map(|(i, &k)| sets[i][k].clone()).collect();
        let c = play_cost(fg, &outcome_of_blind(fg, &trajs).expect("winning trajectories"));
        costs.insert(idx.to_vec(), c.clone());
        Ok(c)
    };
    let mut out = Vec::new();
    if sets.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut idx = vec![0usize; n];
    loop {
        let base = cost_of(&idx, &mut meter)?;
        let mut stable = true;
        'players: for i in 0..n {
            for k in 0..sets[i].len() {
                let mut dev = idx.clone();
                dev[i] = k;
                if cost_of(&dev, &mut meter)?.costs[i] < base.costs[i] {
                    stable = false;
                    break 'players;
                }
            }
        }
        if stable {
            out.push((idx.iter().enumerate().map(|(i, &k)| sets[i][k].clone()).collect(), base));
        }
        if !next_tuple(&mut idx, |i| sets[i].len()) {
            break;
        }
    }
    Ok(out)
}

/// Punishment value of player `i` at `s` by max-min over concrete states,
/// with the coalition choosing a full action vector for its members.
pub fn brute_lowval(fg: &FiniteGame, i: PlayerId, s: &Config, budget: EnumerationBudget) -> Result<Cost, OracleError> {
    fn go(fg: &FiniteGame, i: PlayerId, s: &Config, memo: &mut HashMap<Config, Cost>, meter: &mut Meter) -> Result<Cost, OracleError> {
        if s.positions[i] == fg.game().tgt(i) {
            return Ok(Cost::ZERO);
        }
        if s.date > fg.horizon() {
            return Ok(Cost::Infinite);
        }
        if let Some(&c) = memo.get(s) {
            return Ok(c);
        }
        meter.tick()?;
        let mine = fg.allowed(s, i);
        let mut best: Option<Cost> = None;
        for a in coalition_vectors(fg, s, i) {
            let mut answer = Cost::Infinite;
            for &b in &mine {
                let mut full = a.clone();
                full[i] = b;
                let (next, _) = fg.update(s, &full).expect("enumerated actions are allowed");
                let step = fg.step_costs(s, next.date)[i];
                answer = answer.min(Cost::Finite(step) + go(fg, i, &next, memo, meter)?);
            }
            best = Some(best.map_or(answer, |c| c.max(answer)));
        }
        let v = best.unwrap_or(Cost::Infinite);
        memo.insert(s.clone(), v);
        Ok(v)
    }
    let mut meter = Meter::start(fg, budget)?;
    go(fg, i, s, &mut HashMap::new(), &mut meter)
}

/// Action vectors of everyone but `i`; slot `i` holds a placeholder.
fn coalition_vectors(fg: &FiniteGame, s: &Config, i: PlayerId) -> Vec<Vec<Action>> {
    let mut out: Vec<Vec<Action>> = vec![Vec::new()];
    for j in 0..fg.n() {
        let acts = if j == i { vec![Action::bottom(0)] } else { fg.allowed(s, j) };
        out = out.iter().flat_map(|p| acts.iter().map(move |&a| [p.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Punishment value by enumerating every coalition strategy as an explicit
/// decision tree (one coalition action vector per deviator history) and
/// letting the deviator best-respond to each. Only usable on micro instances.
pub fn brute_lowval_strategy_trees(fg: &FiniteGame, i: PlayerId, s: &Config, budget: EnumerationBudget) -> Result<Cost, OracleError> {
    /// Deviator's best-response cost against every coalition strategy tree rooted at `s`.
    fn trees(fg: &FiniteGame, i: PlayerId, s: &Config, meter: &mut Meter) -> Result<Vec<Cost>, OracleError> {
        if s.positions[i] == fg.game().tgt(i) {
            return Ok(vec![Cost::ZERO]);
        }
        if s.date > fg.horizon() {
            return Ok(vec![Cost::Infinite]);
        }
        let mine = fg.allowed(s, i);
        let mut out = Vec::new();
        for a in coalition_vectors(fg, s, i) {
            // one subtree choice per deviator action
            let mut per_action: Vec<Vec<Cost>> = Vec::new();
            for &b in &mine {
                let mut full = a.clone();
                full[i] = b;
                let (next, _) = fg.update(s, &full).expect("enumerated actions are allowed");
                let step = fg.step_costs(s, next.date)[i];
                per_action.push(trees(fg, i, &next, meter)?.into_iter().map(|c| Cost::Finite(step) + c).collect());
            }
            let mut pick = vec![0usize; per_action.len()];
            loop {
                meter.tick()?;
                out.push((0..pick.len()).map(|k| per_action[k][pick[k]]).min().unwrap_or(Cost::Infinite));
                if !next_tuple(&mut pick, |k| per_action[k].len()) {
                    break;
                }
            }
        }
        Ok(out)
    }
    let mut meter = Meter::start(fg, budget)?;
    Ok(trees(fg, i, s, &mut meter)?.into_iter().max().unwrap_or(Cost::Infinite))
}
