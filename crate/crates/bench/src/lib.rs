//! Fixed inputs shared by the benchmarks.

use cylmatch::generate::{gen_flag, gen_mixed, GenConfig};
use cylmatch::{q, recut, Drawing};

pub fn flag(n: usize, seed: u64) -> Drawing {
    gen_flag(&GenConfig::new(n, seed)).expect("flag")
}

pub fn mixed(n: usize, seed: u64) -> Drawing {
    gen_mixed(&GenConfig::new(n, seed).with_wrap_prob(q(1, 2))).expect("mixed")
}

/// A flag cut open at another position; its solve runs the layer recursion.
pub fn recut_flag(n: usize, seed: u64) -> Drawing {
    let f = flag(n, seed);
    [q(3, 7), q(2, 7), q(4, 7)].iter().find_map(|&a| recut(&f, a).ok()).expect("a clean cut")
}
