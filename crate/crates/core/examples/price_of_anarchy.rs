//! Best and worst equilibrium welfare and the two prices.

use tng_core::model::parse_game;
use tng_core::ne_search::{best_ne_sw, horizon_limited, poa, pos, worst_ne_sw};
use tng_core::semantics::FiniteGame;
use tng_core::social_opt::social_optimum;

fn main() {
    for (name, text) in [("fig1", include_str!("../fixtures/fig1.tng")), ("fig5", include_str!("../fixtures/fig5.tng"))] {
        let game = parse_game(text).unwrap();
        let fg = FiniteGame::new(&game, 8).unwrap();
        let so = social_optimum(&fg).value;
        let best = best_ne_sw(&fg).unwrap();
        let worst = worst_ne_sw(&fg).unwrap();
        println!(
            "{name}: so={so} best={} worst={} poa={} pos={} horizon_limited={}",
            best.sw,
            worst.sw,
            poa(&fg).unwrap(),
            pos(&fg).unwrap(),
            horizon_limited(&fg)
        );
    }
}
