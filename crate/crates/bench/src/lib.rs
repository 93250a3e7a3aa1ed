//! Benchmarks live under `benches/`; this library only holds shared inputs.

use choice_lab::joint_choice::oracle::random_configuration;
use choice_lab::montecarlo::substream;
use choice_lab::random_utility::random_menu;
use choice_lab::{BinaryEvent, Menu};

/// `count` random menus with sizes cycling through 2..=4.
pub fn menus(count: usize, seed: u64) -> Vec<Menu> {
    let mut rng = substream(seed, 0);
    (0..count).map(|i| random_menu(&mut rng, 2 + i % 3, 12)).collect()
}

/// `count` random four-event configurations on the grid of step 1/12.
pub fn configurations(count: usize, seed: u64) -> Vec<Vec<BinaryEvent>> {
    let mut rng = substream(seed, 1);
    (0..count).map(|_| random_configuration(&mut rng, 4, 12)).collect()
}
