//! Social optimum by the product search and, for symmetric games, by the
//! abstract counting graph.

use tng_core::model::parse_game;
use tng_core::semantics::FiniteGame;
use tng_core::social_opt::{constrained_sw, social_optimum_asymmetric, social_optimum_symmetric};

fn main() {
    for (name, text) in [("fig1", include_str!("../fixtures/fig1.tng")), ("fig5", include_str!("../fixtures/fig5.tng"))] {
        let game = parse_game(text).unwrap();
        let fg = FiniteGame::new(&game, 8).unwrap();
        let product = social_optimum_asymmetric(&fg, u64::MAX);
        let counted = social_optimum_symmetric(&fg, u64::MAX).unwrap();
        println!("{name}: product={} counting={} ({} abstract steps)", product.value, counted.value, counted.path.len());

        let so = product.value.finite().unwrap();
        println!("  sw <= {so}: {}   sw <= {}: {}", constrained_sw(&fg, so), so - 1, constrained_sw(&fg, so - 1));

        if let Some(play) = counted.witness {
            for t in play.transitions() {
                println!("  {} -> {}", fg.show_config(&t.from), fg.show_config(&t.to));
            }
        }
    }
}
