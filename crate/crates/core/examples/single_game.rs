//! One grand-canonical game: burn-in, predictability, participation and a
//! snapshot round trip.
//!
//!     cargo run --release --example single_game

use mgimpact::game::{GameConfig, GameState};

pub fn main() {
    let cfg = GameConfig::new(64, 1.0, 1.0).with_seed(11);
    let mut game = GameState::new(&cfg).expect("valid config");
    game.burn_in().expect("burn-in");

    let h = game.measure_predictability(40 * 64).expect("window");
    println!("H / P = {:.3} (cross {:.3}, naive {:.3})", h.value() / 64.0, h.cross / 64.0, h.naive / 64.0);

    let mut active = 0;
    let steps = 10_000;
    for _ in 0..steps {
        active += game.step().n_active;
    }
    let frac = active as f64 / (steps * game.book().num_speculators()) as f64;
    println!("active fraction = {frac:.3} of {} speculators", game.book().num_speculators());

    let json = game.to_json().expect("snapshot");
    let mut copy = GameState::from_json(&json).expect("restore");
    let same = (0..1000).all(|_| game.step() == copy.step());
    println!("snapshot of {} bytes resumes identically: {same}", json.len());
}
