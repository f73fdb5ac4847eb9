//! Nash-equilibrium outcomes.
//!
//! A play is the outcome of a Nash equilibrium exactly when, at every step
//! and for every player that has not reached its target yet, no single
//! deviation followed by the coalition's harshest punishment would have
//! been cheaper than staying on the play. [`check_ne_outcome`] tests that
//! condition; [`NeSearch`] searches plays for one that satisfies it and a
//! set of linear constraints on the cost profile.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::cost::Cost;
use crate::model::PlayerId;
use crate::punish::Punisher;
use crate::semantics::{play_cost, Action, Config, FiniteGame, Play, SemanticsError};
use crate::social_opt::social_optimum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NeError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("the play stops before every player reached its target or the horizon")]
    IncompletePlay,
    #[error("constraint \"{0}\": {1}")]
    BadConstraint(String, String),
    #[error("no equilibrium outcome with finite costs exists within the horizon")]
    NoEquilibrium,
    #[error("the social optimum is infinite within the horizon")]
    InfiniteOptimum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
}

impl Relation {
    fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    /// Whether some value in `[lo, hi]` (`hi = None` is unbounded) satisfies it.
    fn feasible(self, lo: i128, hi: Option<i128>, rhs: i128) -> bool {
        match self {
            Relation::Le => lo <= rhs,
            Relation::Lt => lo < rhs,
            Relation::Ge => hi.is_none_or(|h| h >= rhs),
            Relation::Gt => hi.is_none_or(|h| h > rhs),
            Relation::Eq => lo <= rhs && hi.is_none_or(|h| rhs <= h),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        })
    }
}

/// `Σ coefficients[i] · cost_i  relation  bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coefficients: Vec<i64>,
    pub relation: Relation,
    pub bound: i64,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<i64>, relation: Relation, bound: i64) -> LinearConstraint {
        LinearConstraint { coefficients, relation, bound }
    }

    /// `Σ cost_i relation bound`.
    pub fn sum(n: usize, relation: Relation, bound: i64) -> LinearConstraint {
        LinearConstraint::new(vec![1; n], relation, bound)
    }

    /// `cost_i = value`.
    pub fn fix(n: usize, i: PlayerId, value: i64) -> LinearConstraint {
        let mut coefficients = vec![0; n];
        coefficients[i] = 1;
        LinearConstraint::new(coefficients, Relation::Eq, value)
    }

    pub fn holds(&self, costs: &[u64]) -> bool {
        let lhs: i128 = self.coefficients.iter().zip(costs).map(|(&a, &c)| i128::from(a) * i128::from(c)).sum();
        self.relation.holds(lhs, self.bound.into())
    }

    fn feasible(&self, ranges: &[(u64, Option<u64>)]) -> bool {
        let (mut lo, mut hi) = (0i128, Some(0i128));
        for (&a, &(l, h)) in self.coefficients.iter().zip(ranges) {
            let a = i128::from(a);
            let (l, h) = (i128::from(l), h.map(i128::from));
            if a >= 0 {
                lo += a * l;
                hi = hi.zip(h).map(|(x, y)| x + a * y);
            } else {
                hi = hi.map(|x| x + a * l);
                lo = match h {
                    Some(h) => lo + a * h,
                    None => i128::MIN / 4,
                };
            }
        }
        self.relation.feasible(lo, hi, self.bound.into())
    }

    /// Checks the constraint is usable for an `n`-player game.
    pub fn check(&self, n: usize) -> Result<(), NeError> {
        if self.coefficients.len() != n {
            return Err(NeError::BadConstraint(self.to_string(), format!("expected {n} coefficients")));
        }
        if self.coefficients.iter().all(|&a| a == 0) {
            return Err(NeError::BadConstraint(self.to_string(), "all coefficients are zero".into()));
        }
        Ok(())
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coefficients.iter().map(i64::to_string).collect();
        write!(f, "{}:{}:{}", coeffs.join(","), self.relation, self.bound)
    }
}

impl FromStr for LinearConstraint {
    type Err = NeError;

    /// `c1,c2,...:<rel>:<bound>` with `<rel>` one of `<=`, `>=`, `=`, `<`, `>`.
    fn from_str(s: &str) -> Result<Self, NeError> {
        let bad = |why: &str| NeError::BadConstraint(s.to_string(), why.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [coeffs, rel, bound] = parts.as_slice() else { return Err(bad("expected `c1,...,cn:<rel>:<bound>`")) };
        let coefficients = coeffs
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| bad("coefficients must be integers")))
            .collect::<Result<Vec<_>, _>>()?;
        let relation = match rel.trim() {
            "<=" => Relation::Le,
            ">=" => Relation::Ge,
            "=" | "==" => Relation::Eq,
            "<" => Relation::Lt,
            ">" => Relation::Gt,
            _ => return Err(bad("relation must be one of <=, >=, =, <, >")),
        };
        let bound = bound.trim().parse().map_err(|_| bad("bound must be an integer"))?;
        if coefficients.iter().all(|&a| a == 0) {
            return Err(bad("all coefficients are zero"));
        }
        Ok(LinearConstraint { coefficients, relation, bound })
    }
}

/// A failed deviation test: at step `step`, player `player` deviating with
/// `deviation` is guaranteed `bound`, less than the `remaining` cost it pays
/// on the play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeViolation {
    pub step: usize,
    pub player: PlayerId,
    pub deviation: Action,
    pub remaining: Cost,
    pub bound: Cost,
}

/// Players that have stood on their target in states `0..=k`.
fn visited_by(fg: &FiniteGame, play: &Play) -> Vec<u64> {
    let g = fg.game();
    let mut mask = 0u64;
    play.states()
        .map(|s| {
            for i in 0..fg.n() {
                if s.positions[i] == g.tgt(i) {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect()
}

fn check_player(fg: &FiniteGame, play: &Play, i: PlayerId, visited: &[u64]) -> Option<NeViolation> {
    let mut punisher = Punisher::new(fg, i);
    let ts = play.transitions();
    // remaining[k]: cost of i from state k until its first later target visit
    let total = play_cost(fg, play).costs[i];
    let mut paid = 0u64;
    for (k, t) in ts.iter().enumerate() {
        if visited[k] >> i & 1 == 1 {
            break;
        }
        let remaining = match total {
            Cost::Finite(c) => Cost::Finite(c - paid),
            Cost::Infinite => Cost::Infinite,
        };
        for b in fg.allowed(&t.from, i) {
            let mut a = t.actions.clone();
            a[i] = b;
            let (next, _) = fg.update_unchecked(&t.from, &a);
            let step = fg.step_costs(&t.from, next.date)[i];
            let bound = Cost::Finite(step) + punisher.value_at(&next);
            if remaining > bound {
                return Some(NeViolation { step: k, player: i, deviation: b, remaining, bound });
            }
        }
        paid += t.step_costs[i];
    }
    None
}

/// Checks that `play` is the outcome of a Nash equilibrium; returns the
/// first violation by step, then player, then allowed-action order.
pub fn check_ne_outcome(fg: &FiniteGame, play: &Play) -> Result<Option<NeViolation>, NeError> {
    check_ne_outcome_jobs(fg, play, 1)
}

/// [`check_ne_outcome`] with the players split over `jobs` threads.
pub fn check_ne_outcome_jobs(fg: &FiniteGame, play: &Play, jobs: usize) -> Result<Option<NeViolation>, NeError> {
    play.check(fg)?;
    let n = fg.n();
    let visited = visited_by(fg, play);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if visited.last() != Some(&all) && play.terminal().date <= fg.horizon() {
        return Err(NeError::IncompletePlay);
    }
    let per_player: Vec<Option<NeViolation>> = if jobs <= 1 || n == 1 {
        (0..n).map(|i| check_player(fg, play, i, &visited)).collect()
    } else {
        let chunk = n.div_ceil(jobs.min(n));
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..n)
                .collect::<Vec<_>>()
                .chunks(chunk)
                .map(|players| {
                    let players = players.to_vec();
                    let visited = &visited;
                    scope.spawn(move || players.into_iter().map(|i| check_player(fg, play, i, visited)).collect::<Vec<_>>())
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("checker thread")).collect()
        })
    };
    Ok(per_player.into_iter().flatten().min_by_key(|v| (v.step, v.player)))
}

type CappedActions = (Vec<Cost>, Vec<Action>);

#[derive(Clone, Debug)]
pub struct NeWitness {
    pub play: Play,
    pub costs: Vec<u64>,
    pub sw: u64,
}

/// Search state for constrained equilibrium existence. Punishment values and
/// lower bounds are kept across queries on the same game.
pub struct NeSearch<'g> {
    fg: FiniteGame<'g>,
    punishers: Vec<Punisher<'g>>,
    /// `lower[i][v][t]`: cheapest cost for player `i` alone from `(v, t)` to its target.
    lower: Vec<Vec<Vec<Cost>>>,
    max_step: u64,
    nodes: u64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    state: Config,
    visited: u64,
    paid: Vec<u64>,
    caps: Vec<Cost>,
}

impl<'g> NeSearch<'g> {
    pub fn new(fg: &FiniteGame<'g>) -> Self {
        let n = fg.n();
        let g = fg.game();
        let h = fg.horizon();
        let nv = g.network().vertex_count();
        let lower = (0..n)
            .map(|i| {
                let tgt = g.tgt(i);
                let mut lb = vec![vec![Cost::Infinite; h as usize + 2]; nv];
                for t in (0..=h).rev() {
                    for v in 0..nv {
                        lb[v][t as usize] = if v == tgt {
                            Cost::ZERO
                        } else {
                            g.network()
                                .out_edges(v)
                                .flat_map(|e| e.guard.dates_in(t + 1, h).map(move |t2| (e.to, t2)))
                                .map(|(x, t2)| Cost::Finite(u64::from(t2 - t) * g.wgt(v, 1)) + lb[x][t2 as usize])
                                .min()
                                .unwrap_or(Cost::Infinite)
                        };
                    }
                }
                lb
            })
            .collect();
        let max_step = (0..nv).map(|v| g.wgt(v, n)).max().unwrap_or(1);
        NeSearch { fg: *fg, punishers: (0..n).map(|i| Punisher::new(fg, i)).collect(), lower, max_step, nodes: 0 }
    }

    /// Search nodes expanded so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// The first play in search order that is an equilibrium outcome with
    /// finite costs satisfying every constraint.
    pub fn find(&mut self, cs: &[LinearConstraint]) -> Result<Option<NeWitness>, NeError> {
        let n = self.fg.n();
        for c in cs {
            c.check(n)?;
        }
        let g = self.fg.game();
        let start = self.fg.start();
        let visited = (0..n).filter(|&i| start.positions[i] == g.tgt(i)).fold(0u64, |m, i| m | 1 << i);
        let root = Node { state: start.clone(), visited, paid: vec![0; n], caps: vec![Cost::Infinite; n] };
        let mut failed = HashSet::new();
        let mut path = Vec::new();
        if self.dfs(&root, cs, &mut failed, &mut path) {
            let play = Play::from_actions(&self.fg, start, path)?;
            let costs: Vec<u64> = play_cost(&self.fg, &play).costs.iter().map(|c| c.finite().expect("finite witness")).collect();
            let sw = costs.iter().sum();
            return Ok(Some(NeWitness { play, costs, sw }));
        }
        Ok(None)
    }

    fn prune(&self, node: &Node, cs: &[LinearConstraint]) -> bool {
        let n = self.fg.n();
        let h = self.fg.horizon();
        let mut ranges = Vec::with_capacity(n);
        for i in 0..n {
            if node.visited >> i & 1 == 1 {
                ranges.push((node.paid[i], Some(node.paid[i])));
                continue;
            }
            let lb = Cost::Finite(node.paid[i]) + self.lower[i][node.state.positions[i]][node.state.date as usize];
            if lb > node.caps[i] {
                return true;
            }
            let Cost::Finite(lo) = lb else { return true };
            let reach = node.paid[i] + self.max_step * u64::from(h.saturating_sub(node.state.date));
            let hi = match node.caps[i] {
                Cost::Finite(c) => c.min(reach),
                Cost::Infinite => reach,
            };
            ranges.push((lo, Some(hi)));
        }
        cs.iter().any(|c| !c.feasible(&ranges))
    }

    fn dfs(&mut self, node: &Node, cs: &[LinearConstraint], failed: &mut HashSet<Node>, path: &mut Vec<Vec<Action>>) -> bool {
        let n = self.fg.n();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if node.visited == all {
            return cs.iter().all(|c| c.holds(&node.paid));
        }
        if node.state.date >= self.fg.horizon() || self.prune(node, cs) || failed.contains(node) {
            return false;
        }
        self.nodes += 1;
        for (next, actions) in self.successors(node) {
            path.push(actions);
            if self.dfs(&next, cs, failed, path) {
                return true;
            }
            path.pop();
        }
        failed.insert(node.clone());
        false
    }

    /// Successor nodes grouped by next state in order of first appearance;
    /// within a group only action vectors leaving Pareto-maximal caps are kept.
    fn successors(&mut self, node: &Node) -> Vec<(Node, Vec<Action>)> {
        let fg = self.fg;
        let n = fg.n();
        let s = &node.state;
        let g = fg.game();
        let allowed: Vec<Vec<Action>> = (0..n).map(|i| fg.allowed(s, i)).collect();
        // deviation guarantee for each player and each choice of the others
        let mut guarantee: Vec<Vec<Cost>> = Vec::with_capacity(n);
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| allowed[j].len()).collect();
            let count: usize = others.iter().product();
            let mut table = vec![Cost::Infinite; count];
            if node.visited >> i & 1 == 0 {
                let mut idx = vec![0usize; n];
                for (slot, entry) in table.iter_mut().enumerate() {
                    let mut rem = slot;
                    for j in (0..n).rev() {
                        if j == i {
                            continue;
                        }
                        idx[j] = rem % allowed[j].len();
                        rem /= allowed[j].len();
                    }
                    let mut a: Vec<Action> = (0..n).map(|j| if j == i { allowed[i][0] } else { allowed[j][idx[j]] }).collect();
                    let mut best = Cost::Infinite;
                    for &b in &allowed[i] {
                        a[i] = b;
                        let (next, _) = fg.update_unchecked(s, &a);
                        let step = fg.step_costs(s, next.date)[i];
                        best = best.min(Cost::Finite(step) + self.punishers[i].value_at(&next));
                    }
                    *entry = best;
                }
            }
            guarantee.push(table);
        }
        let slot_of = |i: usize, idx: &[usize]| {
            let mut slot = 0;
            for j in 0..n {
                if j != i {
                    slot = slot * allowed[j].len() + idx[j];
                }
            }
            slot
        };

        // successor -> Pareto-maximal (caps, action vector) pairs
        let mut groups: Vec<(Config, Vec<CappedActions>)> = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let a: Vec<Action> = (0..n).map(|j| allowed[j][idx[j]]).collect();
            let (next, _) = fg.update_unchecked(s, &a);
            if next.date <= fg.horizon() {
                let caps: Vec<Cost> = (0..n)
                    .map(|i| {
                        if node.visited >> i & 1 == 1 {
                            node.caps[i]
                        } else {
                            node.caps[i].min(Cost::Finite(node.paid[i]) + guarantee[i][slot_of(i, &idx)])
                        }
                    })
                    .collect();
                let group = match groups.iter().position(|(c, _)| *c == next) {
                    Some(p) => &mut groups[p].1,
                    None => {
                        groups.push((next, Vec::new()));
                        &mut groups.last_mut().unwrap().1
                    }
                };
                let dominated = group.iter().any(|(u, _)| u.iter().zip(&caps).all(|(x, y)| x >= y));
                if !dominated {
                    group.retain(|(u, _)| !u.iter().zip(&caps).all(|(x, y)| x <= y));
                    group.push((caps, a));
                }
            }
            if !crate::combin::advance(&mut idx, |j| allowed[j].len()) {
                break;
            }
        }

        let mut out = Vec::new();
        for (next, options) in groups {
            let steps = fg.step_costs(s, next.date);
            let mut paid = node.paid.clone();
            let mut visited = node.visited;
            for i in 0..n {
                if node.visited >> i & 1 == 0 {
                    paid[i] += steps[i];
                    if next.positions[i] == g.tgt(i) {
                        visited |= 1 << i;
                    }
                }
            }
            for (caps, a) in options {
                // a player arriving now must not pay more than its guarantees
                let arrived_ok = (0..n).all(|i| visited >> i & 1 == 0 || node.visited >> i & 1 == 1 || Cost::Finite(paid[i]) <= caps[i]);
                if arrived_ok {
                    out.push((Node { state: next.clone(), visited, paid: paid.clone(), caps }, a));
                }
            }
        }
        out
    }
}

/// First equilibrium outcome (in search order) meeting every constraint.
pub fn constrained_ne_exists(fg: &FiniteGame, cs: &[LinearConstraint]) -> Result<Option<NeWitness>, NeError> {
    NeSearch::new(fg).find(cs)
}

/// Upper end of the social-welfare search range.
fn sw_ceiling(fg: &FiniteGame) -> i64 {
    let b = fg.bounds();
    let per_player = b.max_time.max(b.max_cost * u64::from(b.horizon));
    (fg.n() as u64 * per_player).min(i64::MAX as u64) as i64
}

/// Least social welfare of an equilibrium outcome, with a witness.
pub fn best_ne_sw(fg: &FiniteGame) -> Result<NeWitness, NeError> {
    let mut search = NeSearch::new(fg);
    let n = fg.n();
    let mut best = search.find(&[LinearConstraint::sum(n, Relation::Le, sw_ceiling(fg))])?.ok_or(NeError::NoEquilibrium)?;
    // invariant: best.sw is achievable; nothing below lo is
    let mut lo = 0i64;
    while lo < best.sw as i64 {
        let mid = lo + (best.sw as i64 - 1 - lo) / 2;
        match search.find(&[LinearConstraint::sum(n, Relation::Le, mid)])? {
            Some(w) => best = w,
            None => lo = mid + 1,
        }
    }
    Ok(best)
}

/// Greatest social welfare of an equilibrium outcome, with a witness.
pub fn worst_ne_sw(fg: &FiniteGame) -> Result<NeWitness, NeError> {
    let mut search = NeSearch::new(fg);
    let n = fg.n();
    let mut worst = search.find(&[LinearConstraint::sum(n, Relation::Ge, 0)])?.ok_or(NeError::NoEquilibrium)?;
    let mut hi = sw_ceiling(fg);
    while (worst.sw as i64) < hi {
        let mid = worst.sw as i64 + 1 + (hi - worst.sw as i64 - 1) / 2;
        match search.find(&[LinearConstraint::sum(n, Relation::Ge, mid)])? {
            Some(w) => worst = w,
            None => hi = mid - 1,
        }
    }
    Ok(worst)
}

/// A ratio against the social optimum; undefined when the optimum is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Price {
    Ratio(Ratio<u64>),
    Undefined,
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::Ratio(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Price::Ratio(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Price::Undefined => f.write_str("undefined"),
        }
    }
}

fn price(fg: &FiniteGame, ne_sw: impl FnOnce() -> Result<NeWitness, NeError>) -> Result<Price, NeError> {
    match social_optimum(fg).value {
        Cost::Infinite => Err(NeError::InfiniteOptimum),
        Cost::Finite(0) => ne_sw().map(|_| Price::Undefined),
        Cost::Finite(so) => Ok(Price::Ratio(Ratio::new(ne_sw()?.sw, so))),
    }
}

/// Worst equilibrium social welfare over the social optimum.
pub fn poa(fg: &FiniteGame) -> Result<Price, NeError> {
    price(fg, || worst_ne_sw(fg))
}

/// Best equilibrium social welfare over the social optimum.
pub fn pos(fg: &FiniteGame) -> Result<Price, NeError> {
    price(fg, || best_ne_sw(fg))
}

/// Whether results are relative to a horizon below `MaxTime`.
pub fn horizon_limited(fg: &FiniteGame) -> bool {
    u64::from(fg.horizon()) < fg.bounds().max_time
}
