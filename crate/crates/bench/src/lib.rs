//! Instance generators shared by the benchmarks.

use hamdist_core::gen::{generate, Plant};
use hamdist_core::Rng;

/// Uniform pattern and text over `sigma` symbols.
pub fn random_instance(n: usize, m: usize, sigma: u32, seed: u64) -> (Vec<u8>, Vec<u8>) {
    planted(n, m, sigma, Plant::None, seed)
}

pub fn planted(n: usize, m: usize, sigma: u32, plant: Plant, seed: u64) -> (Vec<u8>, Vec<u8>) {
    let inst = generate(n, m, sigma, plant, &mut Rng::new(seed)).expect("valid benchmark shape");
    (inst.pattern, inst.text)
}

pub fn all_positions(n: usize, m: usize) -> Vec<usize> {
    (0..=n - m).collect()
}
