//! Dense polynomials in the monomial basis, coefficients in ascending order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Self { coeffs }
    }

    /// `d`-th derivative evaluated at `x`.
    pub fn eval_derivative(&self, d: usize, x: f64) -> f64 {
        // falling factorial k (k-1) ... (k-d+1) times c_k x^(k-d)
        self.coeffs.iter().enumerate().skip(d).rev().fold(0.0, |acc, (k, &c)| {
            let ff: f64 = (0..d).map(|j| (k - j) as f64).product();
            acc * x + ff * c
        })
    }

    /// Value and first four derivatives at `x`.
    pub fn jet(&self, x: f64) -> [f64; 5] {
        std::array::from_fn(|d| self.eval_derivative(d, x))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Polynomial) -> Self {
        let n = self.len().max(other.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + factor * other.coeffs.get(k).copied().unwrap_or(0.0))
            .collect();
        Self { coeffs }
    }
}
