use std::collections::VecDeque;
use std::fmt;

use super::{Date, Game, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// No trajectory from `(src, 0)` reaches `tgt` by date `cap`.
    Unreachable {
        src: String,
        tgt: String,
        cap: Date,
    },
    /// No outgoing edge of `vertex` is available after `date` (nor after any later date).
    Blocking {
        vertex: String,
        date: Date,
    },
    WeightNotPositive {
        vertex: String,
        problem: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unreachable { src, tgt, cap } => {
                write!(f, "reachability: {tgt} cannot be reached from ({src},0) by date {cap}")
            }
            Violation::Blocking { vertex, date } => {
                write!(f, "non-blocking: no edge leaves {vertex} after date {date}")
            }
            Violation::WeightNotPositive { vertex, problem } => write!(f, "weight of {vertex}: {problem}"),
        }
    }
}

/// Checks reachability of every objective, the non-blocking property and
/// weight positivity. An empty result means the game is valid.
pub fn validate(g: &Game) -> Vec<Violation> {
    let net = g.network();
    let nv = net.vertex_count();
    let bounds = g.bounds();
    let mut out = Vec::new();

    let cap = bounds.max_int.saturating_add(nv as Date);
    let mut seen_pairs = Vec::new();
    for i in 0..g.player_count() {
        let pair = (g.src(i), g.tgt(i));
        if seen_pairs.contains(&pair) {
            continue;
        }
        seen_pairs.push(pair);
        if !reaches(g, pair.0, pair.1, cap) {
            out.push(Violation::Unreachable { src: net.name(pair.0).into(), tgt: net.name(pair.1).into(), cap });
        }
    }

    // Past MaxInt every guard is either exhausted or unbounded, so dates up
    // to MaxInt+1 cover the whole range up to MaxTime+1.
    let last = u64::from(bounds.max_int + 1).min(bounds.max_time + 1) as Date;
    for v in 0..nv {
        let blocked = (0..=last).find(|&d| !net.out_edges(v).any(|e| e.guard.first_at_or_after(d + 1).is_some()));
        if let Some(date) = blocked {
            out.push(Violation::Blocking { vertex: net.name(v).into(), date });
        }
    }

    for v in 0..nv {
        if let Some(problem) = net.weight(v).positivity_problem() {
            out.push(Violation::WeightNotPositive { vertex: net.name(v).into(), problem });
        }
    }
    out
}

fn reaches(g: &Game, src: VertexId, tgt: VertexId, cap: Date) -> bool {
    if src == tgt {
        return true;
    }
    let net = g.network();
    let width = cap as usize + 1;
    let mut seen = vec![false; net.vertex_count() * width];
    let mut queue = VecDeque::from([(src, 0)]);
    seen[src * width] = true;
    while let Some((v, d)) = queue.pop_front() {
        for e in net.out_edges(v) {
            for d2 in e.guard.dates_in(d + 1, cap) {
                if e.to == tgt {
                    return true;
                }
                let slot = e.to * width + d2 as usize;
                if !seen[slot] {
                    seen[slot] = true;
                    queue.push_back((e.to, d2));
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_game;

    #[test]
    fn unreachable_target_is_reported() {
        let g = parse_game(
            "players 1\nvertex s affine 1 0\nvertex t affine 1 0\nedge s t 0..0\nedge s s 0..inf\nedge t t 0..inf\nobjective all s t\n",
        )
        .unwrap();
        let v = validate(&g);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Unreachable { .. }));
    }

    #[test]
    fn blocking_vertex_is_reported_at_first_blocked_date() {
        let g =
            parse_game("players 1\nvertex s affine 1 0\nvertex t affine 1 0\nedge s t 1..2\nedge s s 0..inf\nobjective all s t\n").unwrap();
        assert_eq!(validate(&g), vec![Violation::Blocking { vertex: "t".into(), date: 0 }]);
    }

    #[test]
    fn trivial_game_is_valid() {
        let g = parse_game("players 1\nvertex v affine 1 0\nedge v v 0..inf\nobjective all v v\n").unwrap();
        assert!(validate(&g).is_empty());
    }
}
