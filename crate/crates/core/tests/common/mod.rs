#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tng_core::model::{parse_game, validate, Game, Guard, Interval, Objectives, TimedNetwork, WeightFn};
use tng_core::semantics::Trajectory;
use tng_core::VertexId;

pub const FIG1: &str = include_str!("../../fixtures/fig1.tng");
pub const FIG5: &str = include_str!("../../fixtures/fig5.tng");

pub fn fig1() -> Game {
    parse_game(FIG1).unwrap()
}

pub fn fig5() -> Game {
    parse_game(FIG5).unwrap()
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn v(g: &Game, name: &str) -> VertexId {
    g.network().vertex_id(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

pub fn traj(g: &Game, steps: &[(&str, u32)]) -> Trajectory {
    Trajectory::new(steps.iter().map(|&(n, d)| (v(g, n), d)).collect())
}

/// The four winning trajectories of the three-player fixture.
pub fn fig5_pis(g: &Game) -> [Trajectory; 4] {
    let route = |names: [&str; 7]| {
        let mut steps = vec![("src", 0)];
        steps.extend(names.iter().zip(1..).map(|(&n, d)| (n, d)));
        traj(g, &steps)
    };
    [
        route(["s1", "s2", "s3", "s4", "s5", "s6", "tgt"]),
        route(["s7", "s8", "s9", "s10", "s11", "s12", "tgt"]),
        route(["s1", "s14", "s9", "s10", "s11", "s12", "tgt"]),
        route(["s1", "s2", "s3", "s15", "s11", "s12", "tgt"]),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_players: usize,
    pub max_vertices: usize,
    pub max_guard: u32,
    pub symmetric: bool,
    /// Targets keep only a self-loop, so finished players stay put.
    pub absorbing_targets: bool,
}

pub const TINY: Shape = Shape { max_players: 3, max_vertices: 4, max_guard: 5, symmetric: false, absorbing_targets: false };

/// A random valid game. Every vertex gets a guarded edge set; a self-loop on
/// the first vertex of each route and an always-open escape keep it
/// non-blocking.
pub fn random_game(rng: &mut impl Rng, shape: Shape) -> Game {
    loop {
        if let Some(g) = try_random_game(rng, shape) {
            if validate(&g).is_empty() {
                return g;
            }
        }
    }
}

/// A random game with at least two players, none starting on its target.
pub fn contested_game(rng: &mut impl Rng, shape: Shape) -> Game {
    loop {
        let g = random_game(rng, shape);
        if g.player_count() >= 2 && (0..g.player_count()).all(|i| g.src(i) != g.tgt(i)) {
            return g;
        }
    }
}

fn try_random_game(rng: &mut impl Rng, shape: Shape) -> Option<Game> {
    let n = rng.gen_range(1..=shape.max_players);
    let nv = rng.gen_range(2..=shape.max_vertices);
    let mut net = TimedNetwork::new();
    for k in 0..nv {
        let w = if rng.gen_bool(0.7) {
            let a = rng.gen_range(0..=3);
            let b = rng.gen_range(if a == 0 { 1 } else { 0 }..=3);
            WeightFn::Affine { a, b }
        } else {
            let mut acc = rng.gen_range(1..=3);
            WeightFn::Table(
                (0..n)
                    .map(|_| {
                        let cur = acc;
                        acc += rng.gen_range(0..=2);
                        cur
                    })
                    .collect(),
            )
        };
        net.add_vertex(format!("v{k}"), w);
    }
    let objs: Vec<(VertexId, VertexId)> = if shape.symmetric {
        let s = rng.gen_range(0..nv);
        let t = (s + rng.gen_range(1..nv)) % nv;
        vec![(s, t); n]
    } else {
        (0..n).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv))).collect()
    };
    let targets: Vec<VertexId> = objs.iter().map(|o| o.1).collect();
    let edges = rng.gen_range(nv..=nv * 2);
    for _ in 0..edges {
        let from = rng.gen_range(0..nv);
        if shape.absorbing_targets && targets.contains(&from) {
            continue;
        }
        let to = rng.gen_range(0..nv);
        let lo = rng.gen_range(0..=shape.max_guard);
        let hi = if rng.gen_bool(0.2) { None } else { Some(lo + rng.gen_range(0..=2)) };
        net.add_edge(from, to, Guard::new([Interval::new(lo, hi)]).ok()?);
    }
    for v in 0..nv {
        if shape.absorbing_targets && targets.contains(&v) {
            net.add_edge(v, v, Guard::always());
        } else if rng.gen_bool(0.6) {
            // waiting is possible on most vertices
            net.add_edge(v, v, Guard::always());
        }
    }
    // a late always-open exit everywhere keeps the network non-blocking
    let mut order: Vec<VertexId> = (0..nv).collect();
    order.shuffle(rng);
    for (v, &next) in order.iter().enumerate() {
        let has_open = net.out_edges(v).any(|e| e.guard.intervals().last().is_some_and(|iv| iv.hi.is_none()));
        if !has_open {
            let to = if shape.absorbing_targets && targets.contains(&v) { v } else { next };
            net.add_edge(v, to, Guard::new([Interval::unbounded(shape.max_guard + 1)]).ok()?);
        }
    }
    let objectives = if shape.symmetric {
        Objectives::Symmetric { src: objs[0].0, tgt: objs[0].1 }
    } else {
        Objectives::Asymmetric(objs.iter().map(|&(s, t)| (s, t, 1)).collect())
    };
    Game::new(net, n, objectives).ok()
}
