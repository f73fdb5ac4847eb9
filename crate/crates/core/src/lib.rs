//! Solvers for discrete-time timed network congestion games.
//!
//! A timed network game moves `n` players through a directed graph whose
//! edges can only be crossed at guarded integer dates. Waiting in a vertex
//! costs `(time elapsed) × wgt(v)(load)`, and a player's cost is the sum of
//! these charges until it first reaches its target.
//!
//! The crate is organised as:
//!
//! * [`model`]: networks, games, the game-file grammar and validation;
//! * [`semantics`]: the horizon-truncated concurrent game (allowed actions,
//!   updates, step costs, plays, trajectories and blind outcomes);
//! * [`social_opt`]: social optimum by product-graph and abstract-graph search;
//! * [`equilibria`]: winning blind strategies, the potential and
//!   best-response dynamics;
//! * [`punish`]: coalition punishment values by backward induction;
//! * [`ne_search`]: the NE-outcome check, constrained NE existence, best/worst
//!   NE social welfare and the prices of anarchy and stability;
//! * [`oracle`]: brute-force reference implementations used by the tests;
//! * [`cli`]: the `tng` command-line front end.
//!
//! ```
//! use tng_core::model::parse_game;
//! use tng_core::semantics::FiniteGame;
//! use tng_core::social_opt::social_optimum;
//!
//! let game = parse_game(
//!     "players 2\n\
//!      vertex s affine 1 0\n\
//!      vertex t affine 0 1\n\
//!      edge s t 1..inf\n\
//!      edge t t 0..inf\n\
//!      objective all s t\n",
//! )
//! .unwrap();
//! let fg = FiniteGame::new(&game, 4).unwrap();
//! // both players leave `s` at date 1 and pay 2 each
//! assert_eq!(social_optimum(&fg).value.finite(), Some(4));
//! ```

pub mod cli;
mod combin;
pub mod cost;
pub mod equilibria;
pub mod model;
pub mod ne_search;
pub mod oracle;
pub mod punish;
pub mod semantics;
pub mod social_opt;

pub use cost::Cost;
pub use model::{Date, Game, PlayerId, VertexId};
pub use semantics::FiniteGame;
