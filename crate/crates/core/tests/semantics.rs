mod common;

use common::*;
use tng_core::model::validate;
use tng_core::semantics::{outcome_of_blind, parse_trajectories, play_cost, project_trajectory, FiniteGame};
use tng_core::Cost;

fn costs(fg: &FiniteGame, trajs: &[tng_core::semantics::Trajectory]) -> Vec<Cost> {
    play_cost(fg, &outcome_of_blind(fg, trajs).unwrap()).costs
}

#[test]
fn fixtures_validate() {
    assert!(validate(&fig1()).is_empty(), "{:?}", validate(&fig1()));
    assert!(validate(&fig5()).is_empty(), "{:?}", validate(&fig5()));
    let b = fig1().bounds();
    assert_eq!((b.max_int, b.max_cost, b.max_time), (6, 26, 364));
    let b = fig5().bounds();
    assert_eq!((b.max_int, b.max_cost, b.max_time), (8, 9, 225));
}

#[test]
fn fig1_trajectory_files() {
    let g = fig1();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let load = |f: &str| parse_trajectories(&g, &std::fs::read_to_string(fixture_path(f)).unwrap()).unwrap();
    let p = play_cost(&fg, &outcome_of_blind(&fg, &load("fig1-ex3.traj")).unwrap());
    assert_eq!(p.costs, vec![Cost::Finite(28), Cost::Finite(36)]);
    let p = play_cost(&fg, &outcome_of_blind(&fg, &load("fig1-ex4.traj")).unwrap());
    assert_eq!(p.costs, vec![Cost::Finite(26), Cost::Finite(20)]);
    assert_eq!(p.sw, Cost::Finite(46));
    let p = play_cost(&fg, &outcome_of_blind(&fg, &load("fig1-ex4-dev.traj")).unwrap());
    assert_eq!(p.costs[0], Cost::Finite(28));
}

#[test]
fn fig1_projection() {
    let g = fig1();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let t1 = traj(&g, &[("src", 0), ("s3", 1), ("tgt", 2)]);
    let t2 = traj(&g, &[("src", 0), ("src", 1), ("s4", 2), ("s5", 4), ("tgt", 5)]);
    let play = outcome_of_blind(&fg, &[t1.clone(), t2.clone()]).unwrap();
    assert_eq!(project_trajectory(&play, 1), t2);
    assert_eq!(project_trajectory(&play, 0).truncated_at(v(&g, "tgt")), t1);
}

#[test]
fn fig5_table() {
    let g = fig5();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let pi = fig5_pis(&g);
    #[rustfmt::skip]
    let table: [([usize; 3], u64); 20] = [
        ([0, 0, 0], 57), ([1, 1, 1], 75), ([2, 2, 2], 66), ([3, 3, 3], 60),
        ([0, 0, 1], 39), ([0, 0, 2], 46), ([0, 0, 3], 50),
        ([1, 1, 0], 45), ([1, 1, 2], 58), ([1, 1, 3], 54),
        ([2, 2, 0], 49), ([2, 2, 1], 55), ([2, 2, 3], 58),
        ([3, 3, 0], 51), ([3, 3, 1], 49), ([3, 3, 2], 56),
        ([0, 1, 2], 40), ([0, 1, 3], 40), ([0, 2, 3], 47), ([1, 2, 3], 49),
    ];
    for (prof, sw) in table {
        let trajs: Vec<_> = prof.iter().map(|&k| pi[k].clone()).collect();
        let p = play_cost(&fg, &outcome_of_blind(&fg, &trajs).unwrap());
        assert_eq!(p.sw, Cost::Finite(sw), "{prof:?}");
    }
    assert_eq!(costs(&fg, &[pi[0].clone(), pi[0].clone(), pi[1].clone()]), vec![Cost::Finite(15), Cost::Finite(15), Cost::Finite(9)]);
    assert_eq!(costs(&fg, &[pi[0].clone(), pi[2].clone(), pi[1].clone()])[1], Cost::Finite(14));
}
