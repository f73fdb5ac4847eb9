//! Timed networks, games and their textual description.

mod guard;
mod parse;
mod validate;
mod weight;

use indexmap::IndexMap;
use thiserror::Error;

pub use guard::{Guard, Interval};
pub use parse::{parse_game, render_game};
pub use validate::{validate, Violation};
pub use weight::{eval_weight, WeightFn};

/// An integer date.
pub type Date = u32;
/// Index of a vertex in declaration order.
pub type VertexId = usize;
/// Zero-based player index.
pub type PlayerId = usize;

/// Largest supported player count; several searches keep a bitmask of players.
pub const MAX_PLAYERS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown vertex \"{name}\"")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: duplicate vertex \"{name}\"")]
    DuplicateVertex { line: usize, name: String },
    #[error("vertex \"{name}\": weight table has {len} entries but the game has {players} players")]
    TableTooShort { name: String, len: usize, players: usize },
    #[error("{}empty guard", line_prefix(*.line))]
    EmptyGuard { line: Option<usize> },
    #[error("{}interval {interval} has lo > hi", line_prefix(*.line))]
    InvertedInterval { line: Option<usize>, interval: String },
    #[error("weight function undefined at load {load}")]
    WeightDomain { load: usize },
    #[error("objectives: {0}")]
    Objectives(String),
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub guard: Guard,
}

/// Vertices with weight functions and guarded edges.
///
/// At most one edge per ordered pair; adding a second one unions the guards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TimedNetwork {
    vertices: IndexMap<String, WeightFn>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl TimedNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex, returning `None` if the name is taken.
    pub fn add_vertex(&mut self, name: impl Into<String>, weight: WeightFn) -> Option<VertexId> {
        let name = name.into();
        if self.vertices.contains_key(&name) {
            return None;
        }
        self.vertices.insert(name, weight);
        self.out.push(Vec::new());
        Some(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId, guard: Guard) {
        assert!(from < self.vertex_count() && to < self.vertex_count(), "edge endpoint out of range");
        if let Some(&e) = self.out[from].iter().find(|&&e| self.edges[e].to == to) {
            self.edges[e].guard = self.edges[e].guard.union(&guard);
        } else {
            self.out[from].push(self.edges.len());
            self.edges.push(Edge { from, to, guard });
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.get_index_of(name)
    }

    pub fn name(&self, v: VertexId) -> &str {
        self.vertices.get_index(v).expect("vertex id").0
    }

    pub fn weight(&self, v: VertexId) -> &WeightFn {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `v` in declaration order.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.out[v].iter().map(move |&e| &self.edges[e])
    }

    pub fn edge(&self, from: VertexId, to: VertexId) -> Option<&Edge> {
        self.out_edges(from).find(|e| e.to == to)
    }

    /// Largest finite guard constant, 0 when every guard is `[lo, ∞)` with `lo = 0`.
    pub fn max_int(&self) -> Date {
        self.edges.iter().map(|e| e.guard.max_constant()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objectives {
    /// Every player goes from `src` to `tgt`.
    Symmetric { src: VertexId, tgt: VertexId },
    /// `(src, tgt, count)` groups in declaration order; players are numbered group by group.
    Asymmetric(Vec<(VertexId, VertexId, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    network: TimedNetwork,
    players: usize,
    objectives: Objectives,
    src: Vec<VertexId>,
    tgt: Vec<VertexId>,
}

impl Game {
    pub fn new(network: TimedNetwork, players: usize, objectives: Objectives) -> Result<Game, ModelError> {
        if players == 0 {
            return Err(ModelError::Objectives("a game needs at least one player".into()));
        }
        if players > MAX_PLAYERS {
            return Err(ModelError::Objectives(format!("at most {MAX_PLAYERS} players are supported")));
        }
        let nv = network.vertex_count();
        let (src, tgt): (Vec<_>, Vec<_>) = match &objectives {
            Objectives::Symmetric { src, tgt } => (vec![*src; players], vec![*tgt; players]),
            Objectives::Asymmetric(groups) => groups.iter().flat_map(|&(s, t, m)| std::iter::repeat_n((s, t), m)).unzip(),
        };
        if src.len() != players {
            return Err(ModelError::Objectives(format!("objective counts sum to {} but the game has {players} players", src.len())));
        }
        if src.iter().chain(&tgt).any(|&v| v >= nv) {
            return Err(ModelError::Objectives("objective vertex out of range".into()));
        }
        for v in 0..nv {
            let w = network.weight(v);
            if let Some(len) = w.max_load() {
                if len < players {
                    return Err(ModelError::TableTooShort { name: network.name(v).to_string(), len, players });
                }
            }
        }
        Ok(Game { network, players, objectives, src, tgt })
    }

    pub fn network(&self) -> &TimedNetwork {
        &self.network
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    pub fn src(&self, i: PlayerId) -> VertexId {
        self.src[i]
    }

    pub fn tgt(&self, i: PlayerId) -> VertexId {
        self.tgt[i]
    }

    /// The common `(src, tgt)` pair when every player shares it.
    pub fn symmetric_pair(&self) -> Option<(VertexId, VertexId)> {
        let pair = (self.src[0], self.tgt[0]);
        (0..self.players).all(|i| (self.src[i], self.tgt[i]) == pair).then_some(pair)
    }

    /// Weight of `v` at `load`; loads come from valid configurations and are in range.
    pub fn wgt(&self, v: VertexId, load: usize) -> u64 {
        self.network.weight(v).eval(load).expect("load within the weight domain")
    }

    /// Bounds with the default horizon `MaxTime`.
    pub fn bounds(&self) -> GameBounds {
        let max_int = self.network.max_int();
        let max_cost = (0..self.network.vertex_count()).map(|v| self.wgt(v, self.players)).max().unwrap_or(1);
        let max_time = max_cost * (u64::from(max_int) + self.network.vertex_count() as u64);
        GameBounds { max_int, max_cost, max_time, horizon: Date::try_from(max_time).unwrap_or(Date::MAX - 1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameBounds {
    pub max_int: Date,
    pub max_cost: u64,
    pub max_time: u64,
    pub horizon: Date,
}

impl GameBounds {
    pub fn with_horizon(self, horizon: Date) -> GameBounds {
        GameBounds { horizon, ..self }
    }
}
