mod common;

use common::*;
use rand::Rng;
use tng_core::equilibria::best_response_dynamics;
use tng_core::model::render_game;
use tng_core::ne_search::{best_ne_sw, check_ne_outcome, constrained_ne_exists, worst_ne_sw, LinearConstraint, NeError, Relation};
use tng_core::semantics::{outcome_of_blind, parse_trajectories, play_cost, Action, FiniteGame, Play};

fn load(g: &tng_core::Game, f: &str) -> Vec<tng_core::semantics::Trajectory> {
    parse_trajectories(g, &std::fs::read_to_string(fixture_path(f)).unwrap()).unwrap()
}

#[test]
fn fig1_example_outcomes() {
    let g = fig1();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let ex4 = outcome_of_blind(&fg, &load(&g, "fig1-ex4.traj")).unwrap();
    assert_eq!(check_ne_outcome(&fg, &ex4).unwrap(), None);
    let ex3 = outcome_of_blind(&fg, &load(&g, "fig1-ex3.traj")).unwrap();
    let v = check_ne_outcome(&fg, &ex3).unwrap().expect("violation");
    assert_eq!((v.step, v.player, v.deviation), (0, 0, Action::to(common::v(&g, "s3"), 1)));
}

#[test]
fn fig1_constrained() {
    let g = fig1();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let w = constrained_ne_exists(&fg, &[LinearConstraint::fix(2, 0, 26), LinearConstraint::fix(2, 1, 20)]).unwrap().expect("witness");
    assert_eq!(w.costs, vec![26, 20]);
    assert_eq!(check_ne_outcome(&fg, &w.play).unwrap(), None);
    assert!(constrained_ne_exists(&fg, &[LinearConstraint::new(vec![1, 0], Relation::Le, -1)]).unwrap().is_none());
}

#[test]
fn fig5_constrained_and_best() {
    let g = fig5();
    let fg = FiniteGame::new(&g, 8).unwrap();
    let w = constrained_ne_exists(&fg, &[LinearConstraint::sum(3, Relation::Le, 39)]).unwrap().expect("witness");
    assert_eq!(w.costs, vec![15, 15, 9]);
    let b = best_ne_sw(&fg).unwrap();
    assert_eq!(b.sw, 39);
}

#[test]
fn dynamics_outcomes_pass_the_check() {
    for g in [fig1(), fig5()] {
        let fg = FiniteGame::new(&g, 8).unwrap();
        let d = best_response_dynamics(&fg).unwrap();
        let play = outcome_of_blind(&fg, &d.profile.trajs).unwrap();
        assert_eq!(check_ne_outcome(&fg, &play).unwrap(), None);
    }
}

/// Calls `visit` on every complete play extending `play`; gives up (returns
/// false) after `budget` plays.
fn complete_plays(fg: &FiniteGame, play: &mut Play, visited: u64, budget: &mut usize, visit: &mut dyn FnMut(&Play)) -> bool {
    let g = fg.game();
    let all = (1u64 << fg.n()) - 1;
    if visited == all || play.terminal().date > fg.horizon() {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        visit(play);
        return true;
    }
    let s = play.terminal().clone();
    let options: Vec<Vec<Action>> = (0..fg.n()).map(|i| fg.allowed(&s, i)).collect();
    let mut choice = vec![0; fg.n()];
    loop {
        let actions: Vec<Action> = choice.iter().zip(&options).map(|(&c, o)| o[c]).collect();
        play.push(fg, actions).unwrap();
        let t = play.terminal();
        let seen = (0..fg.n()).filter(|&i| t.positions[i] == g.tgt(i)).fold(visited, |m, i| m | 1 << i);
        let ok = complete_plays(fg, play, seen, budget, visit);
        play.truncate(play.len() - 1);
        if !ok {
            return false;
        }
        let mut k = fg.n();
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

#[test]
fn extreme_welfare_matches_exhaustive_enumeration() {
    let mut rng = rng(31);
    let shape = Shape { max_players: 2, max_vertices: 4, max_guard: 4, ..TINY };
    let (mut compared, mut spread) = (0, 0);
    while compared < 100 {
        let g = contested_game(&mut rng, shape);
        let fg = FiniteGame::new(&g, rng.gen_range(2..=4)).unwrap();
        let mut sws = Vec::new();
        let mut budget = 20_000;
        let finished = complete_plays(&fg, &mut Play::new(&fg, fg.start()), 0, &mut budget, &mut |p| {
            if let Some(sw) = play_cost(&fg, p).sw.finite() {
                if check_ne_outcome(&fg, p).unwrap().is_none() {
                    sws.push(sw);
                }
            }
        });
        if !finished {
            continue;
        }
        match (sws.iter().min(), best_ne_sw(&fg), worst_ne_sw(&fg)) {
            (Some(&lo), Ok(b), Ok(w)) => {
                assert_eq!((b.sw, w.sw), (lo, *sws.iter().max().unwrap()), "{}", render_game(&g));
                spread += usize::from(b.sw < w.sw);
            }
            (None, Err(NeError::NoEquilibrium), Err(NeError::NoEquilibrium)) => {}
            other => panic!("{other:?}\n{}", render_game(&g)),
        }
        compared += 1;
    }
    assert!(spread >= 1, "only {spread} games separate best from worst");
}
