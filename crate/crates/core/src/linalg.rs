//! Dense least squares through the singular value decomposition.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// Minimum-norm minimizer of `|A x - b|`.
    pub solution: DVector<f64>,
    /// `A x - b` at the solution.
    pub residual: DVector<f64>,
    /// Number of singular values kept.
    pub rank: usize,
}

/// Minimum-norm least-squares solution of `A x ~ b`.
///
/// Singular values below `eps * max(n, p) * sigma_max` are discarded, which
/// makes rank-deficient systems well defined instead of an error.
pub fn solve_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> LeastSquares {
    assert_eq!(a.nrows(), b.len(), "row count of A must match length of b");
    let (n, p) = a.shape();
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = f64::EPSILON * n.max(p) as f64 * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let solution = if sigma_max == 0.0 {
        DVector::zeros(p)
    } else {
        svd.solve(b, tol).expect("U and V^T were requested")
    };
    let residual = a * &solution - b;
    LeastSquares {
        solution,
        residual,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_system() {
        let a = DMatrix::identity(3, 3);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let ls = solve_least_squares(&a, &b);
        assert_relative_eq!(ls.solution, b, epsilon = 1e-15);
        assert_eq!(ls.rank, 3);
    }

    #[test]
    fn mean_minimizes_two_observations() {
        let a = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
        let b = DVector::from_vec(vec![0.0, 2.0]);
        let ls = solve_least_squares(&a, &b);
        assert_relative_eq!(ls.solution[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(ls.residual, DVector::from_vec(vec![1.0, -1.0]), epsilon = 1e-15);
    }

    #[test]
    fn recovers_consistent_system() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = DMatrix::from_fn(100, 16, |_, _| rng.gen_range(-1.0..1.0));
        let w = DVector::from_fn(16, |_, _| rng.gen_range(-1.0..1.0));
        let b = &a * &w;
        let ls = solve_least_squares(&a, &b);
        assert!((ls.solution - w).amax() < 1e-10);
        assert!(ls.residual.amax() < 1e-12);
    }

    #[test]
    fn rank_deficient_gives_minimum_norm() {
        // two identical columns: the minimum-norm split is even
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let b = DVector::from_vec(vec![2.0, 4.0, 6.0]);
        let ls = solve_least_squares(&a, &b);
        assert_eq!(ls.rank, 1);
        assert_relative_eq!(ls.solution[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(ls.solution[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let ls = solve_least_squares(&DMatrix::zeros(4, 2), &DVector::from_element(4, 1.0));
        assert_eq!(ls.rank, 0);
        assert_eq!(ls.solution, DVector::zeros(2));
    }
}
