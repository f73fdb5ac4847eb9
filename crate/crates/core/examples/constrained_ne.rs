//! Equilibrium outcomes under linear cost constraints, plus the deviation
//! check on a concrete play.

use tng_core::model::parse_game;
use tng_core::ne_search::{check_ne_outcome, constrained_ne_exists, LinearConstraint, Relation};
use tng_core::semantics::{outcome_of_blind, parse_trajectories, FiniteGame};

fn main() {
    let game = parse_game(include_str!("../fixtures/fig1.tng")).unwrap();
    let fg = FiniteGame::new(&game, 8).unwrap();

    for file in [include_str!("../fixtures/fig1-ex3.traj"), include_str!("../fixtures/fig1-ex4.traj")] {
        let play = outcome_of_blind(&fg, &parse_trajectories(&game, file).unwrap()).unwrap();
        match check_ne_outcome(&fg, &play).unwrap() {
            None => println!("outcome is an equilibrium outcome"),
            Some(v) => println!(
                "player {} deviates at step {} to {}: {} > {}",
                v.player + 1,
                v.step,
                fg.show_action(v.deviation),
                v.remaining,
                v.bound
            ),
        }
    }

    let queries = [
        vec![LinearConstraint::fix(2, 0, 26), LinearConstraint::fix(2, 1, 20)],
        vec![LinearConstraint::sum(2, Relation::Le, 45)],
        vec!["1,-1:>=:10".parse().unwrap()],
    ];
    for cs in &queries {
        let shown: Vec<String> = cs.iter().map(ToString::to_string).collect();
        match constrained_ne_exists(&fg, cs).unwrap() {
            Some(w) => println!("[{}] witness costs {:?} sw={}", shown.join(" & "), w.costs, w.sw),
            None => println!("[{}] no equilibrium outcome", shown.join(" & ")),
        }
    }
}
