//! Seeded generators of small bounded test polytopes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HPolytope, Inequality};
use crate::rational::{int, Rational};

/// A box `-r_i <= x_i <= r_i` cut by `extra_rows` random integer
/// half-spaces that keep the origin in the interior. Small coefficients
/// make degenerate vertices common.
pub fn random_bounded_hpolytope<R: Rng>(rng: &mut R, dim: usize, extra_rows: usize) -> HPolytope {
    let mut rows = Vec::with_capacity(2 * dim + extra_rows);
    for i in 0..dim {
        let r = rng.random_range(1..=3);
        for sign in [1, -1] {
            let mut c = vec![int(0); dim];
            c[i] = int(sign);
            rows.push(Inequality::new(c, int(r)).expect("unit row"));
        }
    }
    while rows.len() < 2 * dim + extra_rows {
        let coeffs: Vec<Rational> = (0..dim).map(|_| int(rng.random_range(-3..=3))).collect();
        let bound = int(rng.random_range(1..=6));
        if let Ok(row) = Inequality::new(coeffs, bound) {
            rows.push(row);
        }
    }
    HPolytope::new(dim, rows).expect("rows match dimension")
}

/// `count` polytopes of dimension 3 or 4 from a fixed seed.
pub fn seeded_batch(seed: u64, count: usize) -> Vec<HPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.random_range(3..=4);
            let extra = rng.random_range(2..=6);
            random_bounded_hpolytope(&mut rng, dim, extra)
        })
        .collect()
}
