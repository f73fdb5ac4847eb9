mod common;

use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use tng_core::equilibria::{best_response, best_response_dynamics, enumerate_winning_trajectories, potential, BlindProfile};
use tng_core::semantics::{outcome_of_blind, play_cost, FiniteGame, Trajectory};
use tng_core::Cost;

fn blind_costs(fg: &FiniteGame, trajs: &[Trajectory]) -> Vec<Cost> {
    play_cost(fg, &outcome_of_blind(fg, trajs).unwrap()).costs
}

#[test]
fn fig5_has_four_winning_trajectories() {
    let g = fig5();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let pi = fig5_pis(&g);
    let found = enumerate_winning_trajectories(&fg, 0, 7);
    assert_eq!(found.len(), 4);
    for p in &pi {
        assert!(found.contains(p));
    }
}

#[test]
fn fig1_trajectories_include_examples() {
    let g = fig1();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let found = enumerate_winning_trajectories(&fg, 0, 5);
    assert!(found.contains(&traj(&g, &[("src", 0), ("s3", 1), ("tgt", 2)])));
    assert!(found.contains(&traj(&g, &[("src", 0), ("s1", 2), ("s2", 4), ("tgt", 5)])));
}

#[test]
fn fig5_best_responses() {
    let g = fig5();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let pi = fig5_pis(&g);
    let p = BlindProfile { trajs: vec![pi[0].clone(), pi[0].clone(), pi[1].clone()] };
    let (br, c) = best_response(&fg, &p, 1).unwrap();
    assert_eq!((br, c), (pi[2].clone(), 14));
    let (_, c3) = best_response(&fg, &p, 2).unwrap();
    assert!(c3 <= 9);
}

#[test]
fn fig5_dynamics_reach_a_blind_equilibrium_above_39() {
    let g = fig5();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let d = best_response_dynamics(&fg).unwrap();
    assert!(d.sw() >= 40, "{}", d.sw());
    assert!(d.potential_trace.windows(2).all(|w| w[1] < w[0]));
    let costs = blind_costs(&fg, &d.profile.trajs);
    assert_eq!(costs, d.costs.iter().map(|&c| Cost::Finite(c)).collect::<Vec<_>>());
}

#[test]
fn single_player_dynamics_is_cheapest_path() {
    let g = tng_core::model::parse_game("players 1\nvertex s affine 3 0\nvertex m affine 1 0\nvertex t affine 1 0\nedge s s 0..inf\nedge s m 1..1\nedge m t 4..4\nedge s t 3..3\nedge m m 0..inf\nedge t t 0..inf\nobjective all s t\n").unwrap();
    let fg = FiniteGame::new(&g, 6).unwrap();
    let d = best_response_dynamics(&fg).unwrap();
    assert_eq!(d.costs, vec![6]);
    assert!(d.improvements.len() <= 1);
}

#[test]
fn potential_tracks_unilateral_deviations() {
    let mut rng = rng(21);
    let shape = Shape { absorbing_targets: true, ..TINY };
    let mut checked = 0;
    while checked < 300 {
        let g = random_game(&mut rng, shape);
        let fg = FiniteGame::new(&g, rng.gen_range(3..=6)).unwrap();
        let sets: Vec<Vec<Trajectory>> = (0..g.player_count()).map(|i| enumerate_winning_trajectories(&fg, i, fg.horizon())).collect();
        if sets.iter().any(|s| s.is_empty() || s.len() > 10) {
            continue;
        }
        let trajs: Vec<Trajectory> = sets.iter().map(|s| s.choose(&mut rng).unwrap().clone()).collect();
        let i = rng.gen_range(0..g.player_count());
        let mut dev = trajs.clone();
        dev[i] = sets[i].choose(&mut rng).unwrap().clone();
        let (c0, c1) = (blind_costs(&fg, &trajs)[i].finite().unwrap(), blind_costs(&fg, &dev)[i].finite().unwrap());
        let (p0, p1) = (potential(&fg, &BlindProfile { trajs }), potential(&fg, &BlindProfile { trajs: dev }));
        assert_eq!(p1 as i64 - p0 as i64, c1 as i64 - c0 as i64);
        checked += 1;
    }
}
