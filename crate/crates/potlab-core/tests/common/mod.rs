//! Shared instance builders for the property suites.

use potlab_core::{DiagonalPolicy, Kernel, MeasureSpace, RadialProfile};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Seeded random point cloud in the unit cube with equal weights.
pub fn cloud_space(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> MeasureSpace {
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    MeasureSpace::with_coords(points, vec![1.0 / n as f64; n]).unwrap()
}

/// Bounded radial kernel `exp(-rate r)` sampled densely enough for the
/// cloud's diameter. Its diagonal is the profile maximum.
pub fn radial_exp_kernel(space: &MeasureSpace, rate: f64) -> Kernel {
    let mut max_d = 0.0f64;
    for i in 0..space.n() {
        for j in (i + 1)..space.n() {
            max_d = max_d.max(space.distance(i, j));
        }
    }
    let m = 512;
    let radii: Vec<f64> = (0..=m)
        .map(|k| k as f64 * (max_d * 1.01 + 1e-6) / m as f64)
        .collect();
    let profile = RadialProfile::sampled(|r| (-rate * r).exp(), radii).unwrap();
    Kernel::radial(space, &profile).unwrap()
}

/// Riesz kernel with the singular diagonal replaced by the largest
/// off-diagonal entry, so the diagonal dominates every row.
pub fn capped_riesz_kernel(space: &MeasureSpace, alpha: f64) -> Kernel {
    let dim = space.dim();
    let raw = Kernel::riesz(space, alpha, dim, DiagonalPolicy::Exclude).unwrap();
    let cap = raw.max_off_diagonal();
    Kernel::riesz(space, alpha, dim, DiagonalPolicy::Cap(cap)).unwrap()
}

/// Rescale so the largest weighted row sum is `target`, which keeps the
/// fixed-point iterations contractive for moderate data.
pub fn scaled_to_row_sum(kernel: &Kernel, space: &MeasureSpace, target: f64) -> Kernel {
    let g1 = kernel.potential_of_weights(space).unwrap();
    let top = g1.iter().fold(0.0f64, |a, &v| a.max(v));
    if top > 0.0 && top.is_finite() {
        kernel.scaled(target / top).unwrap()
    } else {
        kernel.clone()
    }
}

/// A random instance drawn from the two bounded-diagonal families.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (MeasureSpace, Kernel) {
    let n = rng.gen_range(4..=max_n.max(4));
    let dim = rng.gen_range(1..=3usize);
    let space = cloud_space(rng, n, dim);
    let kernel = if rng.gen_bool(0.5) {
        radial_exp_kernel(&space, rng.gen_range(0.5..3.0))
    } else {
        let alpha = rng.gen_range(0.2..dim as f64 - 0.1);
        capped_riesz_kernel(&space, alpha.min(dim as f64 * 0.9))
    };
    (space, kernel)
}
