//! Seeded low-rank + sparse ground-truth instances, shared by solver tests
//! and the benchmark suites.

use ndarray::{Array1, Array2, Array3};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn smooth_unit_vector(len: usize, waves: f64, phase: f64) -> Array1<f64> {
    let v = Array1::from_shape_fn(len, |i| {
        let x = i as f64 / len as f64;
        (waves * std::f64::consts::TAU * x + phase).sin() + 0.25
    });
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.mapv(|x| x / norm)
}

/// `D = B* + T*` with `B*` a smooth rank-`rank` matrix and `T*` holding
/// spikes of `|magnitude|` on a random `sparse_frac` support.
///
/// Returns `(d, b_star, t_star)`.
pub fn synthetic_low_rank_sparse(
    m: usize,
    n: usize,
    rank: usize,
    sparse_frac: f64,
    magnitude: f64,
    seed: u64,
) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut b = Array2::<f64>::zeros((m, n));
    for k in 0..rank {
        let scale = 10.0 / (k + 1) as f64;
        let u = smooth_unit_vector(m, 1.0 + k as f64, rng.random_range(0.0..1.0));
        let v = smooth_unit_vector(n, 1.5 + k as f64 * 0.7, rng.random_range(0.0..1.0));
        for i in 0..m {
            for j in 0..n {
                b[(i, j)] += scale * u[i] * v[j];
            }
        }
    }

    let total = m * n;
    let count = ((total as f64) * sparse_frac).round() as usize;
    let mut idx: Vec<usize> = (0..total).collect();
    idx.shuffle(&mut rng);
    let mut t = Array2::<f64>::zeros((m, n));
    for &flat in idx.iter().take(count) {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        t[(flat / n, flat % n)] = sign * magnitude;
    }

    let d = &b + &t;
    (d, b, t)
}

/// Tensor instance: each mode unfolding is low-rank, plus one positive spike
/// per frontal slice. Returns `(d, b_star, t_star)`.
pub fn synthetic_low_rank_sparse_tensor(
    i_dim: usize,
    j_dim: usize,
    p_dim: usize,
    magnitude: f64,
    seed: u64,
) -> (Array3<f64>, Array3<f64>, Array3<f64>) {
    let mut rng = StdRng::seed_from_u64(seed);
    // Separable smooth profiles keep every unfolding low-rank.
    let fi = smooth_unit_vector(i_dim, 1.0, 0.3);
    let fj = smooth_unit_vector(j_dim, 1.4, 0.9);
    let fp = smooth_unit_vector(p_dim, 0.8, 0.1);
    let gi = smooth_unit_vector(i_dim, 2.0, 1.2);
    let gj = smooth_unit_vector(j_dim, 0.6, 0.4);
    let gp = smooth_unit_vector(p_dim, 1.7, 2.0);

    let mut b = Array3::<f64>::zeros((i_dim, j_dim, p_dim));
    for i in 0..i_dim {
        for j in 0..j_dim {
            for p in 0..p_dim {
                b[(i, j, p)] = 40.0 * fi[i] * fj[j] * fp[p] + 15.0 * gi[i] * gj[j] * gp[p];
            }
        }
    }

    let mut t = Array3::<f64>::zeros((i_dim, j_dim, p_dim));
    for p in 0..p_dim {
        let si = rng.random_range(0..i_dim);
        let sj = rng.random_range(0..j_dim);
        t[(si, sj, p)] = magnitude;
    }

    let d = &b + &t;
    (d, b, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowrank::singular_values;

    #[test]
    fn matrix_instance_has_planted_structure() {
        let (d, b, t) = synthetic_low_rank_sparse(40, 30, 2, 0.01, 5.0, 1);
        let sigma = singular_values(&b).unwrap();
        assert!(sigma[2] < 1e-10 * sigma[0], "b should be rank 2");
        assert_eq!(t.iter().filter(|&&v| v != 0.0).count(), 12);
        assert_eq!(&b + &t, d);
    }

    #[test]
    fn tensor_instance_spikes_one_per_slice() {
        let (_, _, t) = synthetic_low_rank_sparse_tensor(10, 12, 5, 8.0, 2);
        for p in 0..5 {
            let slice_count = t
                .index_axis(ndarray::Axis(2), p)
                .iter()
                .filter(|&&v| v != 0.0)
                .count();
            assert_eq!(slice_count, 1);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = synthetic_low_rank_sparse(20, 20, 2, 0.05, 5.0, 9);
        let b = synthetic_low_rank_sparse(20, 20, 2, 0.05, 5.0, 9);
        assert_eq!(a.0, b.0);
    }
}
