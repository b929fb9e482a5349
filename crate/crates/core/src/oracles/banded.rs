use crate::error::{Error, Result};

/// Square banded matrix with room for the fill-in of partial pivoting.
///
/// Row `i` stores columns `i - kl ..= i + ku + kl`.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * Self::row_width(kl, ku)],
        }
    }

    fn row_width(kl: usize, ku: usize) -> usize {
        2 * kl + ku + 1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.ku + self.kl || i >= self.n || j >= self.n {
            None
        } else {
            Some(i * Self::row_width(self.kl, self.ku) + j + self.kl - i)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Panics if `(i, j)` lies outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside band");
        let s = self.slot(i, j).expect("index in range");
        self.data[s] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    /// Gaussian elimination with partial pivoting; consumes the matrix.
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::Singular(format!("rhs has {} rows, matrix {n}", rhs.len())));
        }
        let mut b = rhs.to_vec();
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::Singular("zero matrix".into()));
        }
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + self.ku + self.kl).min(n - 1);
            let pivot_row = (k..=last_row)
                .max_by(|&a, &c| self.get(a, k).abs().total_cmp(&self.get(c, k).abs()))
                .expect("non-empty range");
            let pivot = self.get(pivot_row, k);
            if pivot.abs() <= 1e-14 * scale {
                return Err(Error::Singular(format!("pivot {pivot:e} in column {k}")));
            }
            if pivot_row != k {
                for j in k..=last_col {
                    let a = self.slot(k, j).expect("in band");
                    let c = self.slot(pivot_row, j).expect("in band");
                    self.data.swap(a, c);
                }
                b.swap(k, pivot_row);
            }
            for r in k + 1..=last_row {
                let factor = self.get(r, k) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in k..=last_col {
                    let s = self.slot(r, j).expect("in band");
                    self.data[s] -= factor * self.get(k, j);
                }
                b[r] -= factor * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let last_col = (k + self.ku + self.kl).min(n - 1);
            let tail: f64 = (k + 1..=last_col).map(|j| self.get(k, j) * x[j]).sum();
            x[k] = (b[k] - tail) / self.get(k, k);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_solve_with_pivoting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, kl, ku) = (30, 2, 2);
        let mut band = BandedMatrix::zeros(n, kl, ku);
        let mut dense = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // small diagonal forces row swaps
                let v = if i == j { 1e-3 } else { rng.gen_range(-1.0..1.0) };
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = band.solve(&rhs).unwrap();
        let expected = dense.lu().solve(&DVector::from_vec(rhs)).unwrap();
        for (a, b) in x.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn singular_is_reported() {
        let mut m = BandedMatrix::zeros(3, 1, 1);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        assert!(matches!(m.solve(&[1.0, 1.0, 1.0]), Err(Error::Singular(_))));
    }

    #[test]
    #[should_panic]
    fn out_of_band_set_panics() {
        BandedMatrix::zeros(5, 1, 1).set(0, 3, 1.0);
    }
}
