//! Chebyshev polynomials `T_k(2X - 1)` on `[0, 1]` with derivatives up to
//! fourth order in `X`.

use crate::error::{Error, Result};

/// Number of derivative orders carried (value plus four derivatives).
pub const JET: usize = 5;

/// Chebyshev expansion `T_0 .. T_order` over the mapped domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSet {
    order: usize,
}

impl BasisSet {
    /// Scale of the affine map `X -> 2X - 1`.
    pub const MAP_SCALE: f64 = 2.0;

    pub fn new(order: usize) -> Result<Self> {
        if order < 4 {
            return Err(Error::OrderTooLow(order));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of basis functions (`order + 1`).
    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, x: f64) -> Vec<[f64; JET]> {
        eval_basis(x, self.order)
    }

    pub fn free_function(&self, weights: &[f64], x: f64) -> [f64; JET] {
        debug_assert_eq!(weights.len(), self.len());
        free_function(weights, x)
    }
}

/// Row `k` holds `T_k(2X - 1)` and its first four `X`-derivatives.
///
/// Uses the three-term recurrence differentiated `d` times:
/// `T_{k+1}^(d) = 2 t T_k^(d) + 2 d T_k^(d-1) - T_{k-1}^(d)` in `t = 2X - 1`,
/// then applies the chain-rule factor `2^d`.
pub fn eval_basis(x: f64, order: usize) -> Vec<[f64; JET]> {
    let t = BasisSet::MAP_SCALE * x - 1.0;
    let mut rows = vec![[0.0; JET]; order + 1];
    rows[0][0] = 1.0;
    if order >= 1 {
        rows[1][0] = t;
        rows[1][1] = 1.0;
    }
    for k in 1..order {
        let (lo, hi) = rows.split_at_mut(k + 1);
        let (prev, cur) = (&lo[k - 1], &lo[k]);
        let next = &mut hi[0];
        next[0] = 2.0 * t * cur[0] - prev[0];
        for d in 1..JET {
            next[d] = 2.0 * t * cur[d] + 2.0 * d as f64 * cur[d - 1] - prev[d];
        }
    }
    for row in &mut rows {
        let mut scale = 1.0;
        for v in row.iter_mut() {
            *v *= scale;
            scale *= BasisSet::MAP_SCALE;
        }
    }
    rows
}

/// `h^(d)(X) = sum_k w_k d^d/dX^d T_k(2X - 1)` for `d = 0..=4`.
pub fn free_function(weights: &[f64], x: f64) -> [f64; JET] {
    let rows = eval_basis(x, weights.len().saturating_sub(1));
    let mut h = [0.0; JET];
    for (w, row) in weights.iter().zip(&rows) {
        for (hd, td) in h.iter_mut().zip(row) {
            *hd += w * td;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn values_at_center() {
        let rows = eval_basis(0.5, 8);
        let expected = [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (row, e) in rows.iter().zip(expected) {
            assert_eq!(row[0], e);
        }
    }

    #[test]
    fn endpoint_derivatives() {
        let rows = eval_basis(1.0, 3);
        assert_eq!(rows[3][0], 1.0);
        assert_eq!(rows[3][1], 18.0);
        let rows = eval_basis(0.0, 2);
        assert_eq!(rows[2][0], 1.0);
        assert_eq!(rows[2][2], 16.0);
    }

    #[test]
    fn order_guard() {
        assert!(BasisSet::new(3).is_err());
        assert_eq!(BasisSet::new(15).unwrap().len(), 16);
    }

    #[test]
    fn unit_weight_on_t1() {
        let mut w = vec![0.0; 16];
        assert_eq!(free_function(&w, 0.3), [0.0; JET]);
        w[1] = 1.0;
        let h = free_function(&w, 0.25);
        assert_eq!(h, [-0.5, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn cosine_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let x = (theta.cos() + 1.0) / 2.0;
            let rows = eval_basis(x, 15);
            for (k, row) in rows.iter().enumerate() {
                assert!((row[0] - (k as f64 * theta).cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_tower_matches_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let weights: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let step = 1e-6;
        for x in [0.07, 0.3, 0.7, 0.93] {
            let h = free_function(&weights, x);
            let hp = free_function(&weights, x + step);
            let hm = free_function(&weights, x - step);
            for d in 1..JET {
                let fd = (hp[d - 1] - hm[d - 1]) / (2.0 * step);
                let scale = h[d].abs().max(hp[d - 1].abs() / step * 1e-9).max(1.0);
                assert!((fd - h[d]).abs() / scale < 1e-6, "d={d} x={x}: {fd} vs {}", h[d]);
            }
        }
        let x = 0.7;
        let eps = 1e-5;
        let fd = (free_function(&weights, x + eps)[0] - free_function(&weights, x - eps)[0]) / (2.0 * eps);
        assert_relative_eq!(free_function(&weights, x)[1], fd, max_relative = 1e-7);
    }

    proptest! {
        #[test]
        fn free_function_is_linear_in_weights(
            w1 in prop::collection::vec(-1.0f64..1.0, 16),
            w2 in prop::collection::vec(-1.0f64..1.0, 16),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            x in 0.0f64..=1.0,
        ) {
            let combo: Vec<f64> = w1.iter().zip(&w2).map(|(p, q)| a * p + b * q).collect();
            let lhs = free_function(&combo, x);
            let h1 = free_function(&w1, x);
            let h2 = free_function(&w2, x);
            let rows = eval_basis(x, 15);
            for d in 0..JET {
                let rhs = a * h1[d] + b * h2[d];
                // magnitude of the summands, so cancellation does not shrink the yardstick
                let scale: f64 = rows
                    .iter()
                    .zip(w1.iter().zip(&w2))
                    .map(|(row, (p, q))| (a.abs() * p.abs() + b.abs() * q.abs()) * row[d].abs())
                    .sum();
                prop_assert!((lhs[d] - rhs).abs() <= 1e-13 * scale.max(f64::MIN_POSITIVE));
            }
        }
    }
}
