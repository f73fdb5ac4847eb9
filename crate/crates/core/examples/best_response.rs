//! Blind strategies: best responses, the potential, and best-response dynamics.

use tng_core::equilibria::{best_response, best_response_dynamics, potential, BlindProfile};
use tng_core::model::parse_game;
use tng_core::semantics::{parse_trajectories, FiniteGame};

fn main() {
    let game = parse_game(include_str!("../fixtures/fig1.tng")).unwrap();
    let fg = FiniteGame::new(&game, 8).unwrap();

    let trajs = parse_trajectories(&game, include_str!("../fixtures/fig1-ex3.traj")).unwrap();
    let profile = BlindProfile { trajs };
    println!("potential of the profile: {}", potential(&fg, &profile));
    for i in 0..fg.n() {
        if let Some((t, c)) = best_response(&fg, &profile, i) {
            println!("player {} best response {} at cost {c}", i + 1, t.show(&game));
        }
    }

    let dynamics = best_response_dynamics(&fg).unwrap();
    println!("potential trace {:?}", dynamics.potential_trace);
    for (i, t) in dynamics.profile.trajs.iter().enumerate() {
        println!("player {}: {} cost {}", i + 1, t.show(&game), dynamics.costs[i]);
    }
    println!("sw={}", dynamics.sw());
}
