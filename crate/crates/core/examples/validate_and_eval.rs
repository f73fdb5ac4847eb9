//! Parse a game, check it, and price a blind trajectory profile.

use tng_core::model::{parse_game, validate};
use tng_core::semantics::{outcome_of_blind, parse_trajectories, play_cost, FiniteGame};

fn main() {
    let game = parse_game(include_str!("../fixtures/fig1.tng")).expect("fixture parses");
    let problems = validate(&game);
    println!("violations: {}", problems.len());

    let b = game.bounds();
    println!("max_int={} max_cost={} max_time={}", b.max_int, b.max_cost, b.max_time);

    let fg = FiniteGame::new(&game, 8).unwrap();
    for file in [include_str!("../fixtures/fig1-ex3.traj"), include_str!("../fixtures/fig1-ex4.traj")] {
        let trajs = parse_trajectories(&game, file).unwrap();
        let play = outcome_of_blind(&fg, &trajs).unwrap();
        let cost = play_cost(&fg, &play);
        for t in &trajs {
            println!("  {}", t.show(&game));
        }
        let costs: Vec<String> = cost.costs.iter().map(ToString::to_string).collect();
        println!("costs={} sw={}", costs.join(","), cost.sw);
    }
}
