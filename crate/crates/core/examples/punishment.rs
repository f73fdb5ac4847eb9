//! Punishment values: how much a coalition of everyone else can force a
//! player to pay, and the coalition's first move.

use tng_core::model::parse_game;
use tng_core::punish::{PunishState, Punisher};
use tng_core::semantics::FiniteGame;

fn main() {
    let game = parse_game(include_str!("../fixtures/fig5.tng")).unwrap();
    let fg = FiniteGame::new(&game, 8).unwrap();
    let start = fg.start();
    for i in 0..fg.n() {
        let mut punisher = Punisher::new(&fg, i);
        let s = PunishState::from_config(&fg, i, &start);
        let value = punisher.value(&s);
        print!("player {}: lowval={value}", i + 1);
        if let Some(mv) = punisher.best_coalition_move(&s) {
            let (_, reply) = punisher.best_deviation(&s, &mv);
            print!("  coalition moves at {:?}, best reply {}", mv.date, fg.show_action(reply));
        }
        println!("  ({} states)", punisher.table_len());
    }
}
