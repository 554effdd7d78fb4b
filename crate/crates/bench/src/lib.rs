//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::fan::library::{cyclic_surface, product, projective_space};
use toric_core::{Fan, FiniteCover, IntMatrix, SimplicialComplex};

pub fn random_matrix(seed: u64, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&entries)
}

/// Smooth complete surface with rays (1,0), (a,1) for a = s..1, then
/// (0,1), (-1,0), (-1,-1), (0,-1).
pub fn long_surface(s: i64) -> Fan {
    let mut rays = vec![vec![1, 0]];
    rays.extend((1..=s).rev().map(|a| vec![a, 1]));
    rays.extend([vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]]);
    cyclic_surface(rays)
}

/// (P^1)^n, whose cone complex is the boundary of the n-dimensional cross-polytope.
pub fn cube(n: usize) -> Fan {
    let p1 = projective_space(1);
    (1..n).fold(p1.clone(), |acc, _| product(&acc, &p1))
}

/// A cover of a full triangle with `fibre` points over every vertex.
pub fn triangle_cover(fibre: usize) -> FiniteCover {
    let base = SimplicialComplex::new(3, vec![vec![0, 1, 2]]).expect("triangle");
    FiniteCover::with_fibre_sizes(base, &[fibre; 3]).expect("cover")
}
