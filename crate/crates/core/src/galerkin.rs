//! Weighted-residual reference solver on boundary-characteristic orthonormal
//! polynomials.
//!
//! The trial space is every polynomial of degree `< n` that satisfies all
//! four support conditions (`n - 4` dimensions). Its basis is orthonormalized
//! in `L2(0, 1)` and doubles as the weight functions, so the strong-form
//! residual is projected without boundary terms.
//!
//! Internally each basis function is a combination of projected Chebyshev
//! polynomials `r_m = T_m - sum_j phi_j C_j[T_m]`, `m = 4..n`, which span the
//! admissible space and evaluate stably. Monomial coefficients are exported
//! for inspection only.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::beam::{BeamConfig, BoundaryKind, OperatorCoefficients};
use crate::chebyshev::eval_basis;
use crate::dfl_tfc::{displacement_jet, CollocationGrid};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::quadrature::gauss_legendre_unit;
use crate::solution::{Deflection, Method, SolveResult};
use crate::tfc::{ConstrainedExpression, FreeFunctionData};

pub const DEFAULT_N: usize = 15;
pub const MIN_N: usize = 5;
pub const MAX_N: usize = 20;
const QUADRATURE_POINTS: usize = 64;
/// First Chebyshev degree not annihilated by the constrained expression.
const FIRST_FREE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinBasis {
    pub bc: BoundaryKind,
    pub n: usize,
    /// Monomial coefficients of each orthonormal function.
    pub polys: Vec<Polynomial>,
    /// Row `i` holds the coefficients of function `i` over `r_4 .. r_{n-1}`.
    transform: DMatrix<f64>,
    ce: ConstrainedExpression,
    raw_functionals: Vec<[f64; 4]>,
}

/// `T_m(2X - 1)` in monomial form.
fn chebyshev_monomial(m: usize) -> Polynomial {
    let t = Polynomial::new(vec![-1.0, 2.0]);
    let mut prev = Polynomial::new(vec![1.0]);
    if m == 0 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 1..m {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, c) in cur.coeffs().iter().enumerate() {
            next[k] -= 2.0 * c;
            next[k + 1] += 4.0 * c;
        }
        let next = Polynomial::new(next).axpy(-1.0, &prev);
        prev = cur;
        cur = next;
    }
    cur
}

impl GalerkinBasis {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn raw_jets(&self, x: f64) -> Vec<[f64; 5]> {
        let cheb = eval_basis(x, self.n - 1);
        let switching = self.ce.switching_jets(x);
        (FIRST_FREE..self.n)
            .map(|m| {
                let data = FreeFunctionData {
                    at_x: cheb[m],
                    functionals: self.raw_functionals[m - FIRST_FREE],
                };
                self.ce.eval_with_switching(&switching, &data)
            })
            .collect()
    }

    /// Value and first four derivatives of every basis function at `x`.
    pub fn jets(&self, x: f64) -> Vec<[f64; 5]> {
        let raw = self.raw_jets(x);
        (0..self.len())
            .map(|i| {
                let mut jet = [0.0; 5];
                for (m, r) in raw.iter().enumerate() {
                    let c = self.transform[(i, m)];
                    for d in 0..5 {
                        jet[d] += c * r[d];
                    }
                }
                jet
            })
            .collect()
    }

    /// Chebyshev weights `T_0 .. T_{n-1}` whose constrained expression equals
    /// `sum_i eta_i theta_i`.
    fn chebyshev_weights(&self, eta: &DVector<f64>) -> Vec<f64> {
        let raw = self.transform.tr_mul(eta);
        let mut weights = vec![0.0; self.n];
        weights[FIRST_FREE..].copy_from_slice(raw.as_slice());
        weights
    }
}

/// Orthonormal basis of `{p : deg p < n, C_j[p] = 0}`, by modified
/// Gram-Schmidt (two passes) in the Gauss-Legendre inner product, which is
/// exact for these polynomials.
pub fn build_basis(bc: BoundaryKind, n: usize) -> Result<GalerkinBasis> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::GalerkinSize(n));
    }
    let ce = ConstrainedExpression::for_boundary(bc);
    let left = eval_basis(0.0, n - 1);
    let right = eval_basis(1.0, n - 1);
    let raw_functionals: Vec<[f64; 4]> = (FIRST_FREE..n)
        .map(|m| ce.functional_values(&left[m], &right[m]))
        .collect();
    let k = n - FIRST_FREE;
    let mut basis = GalerkinBasis {
        bc,
        n,
        polys: Vec::new(),
        transform: DMatrix::identity(k, k),
        ce,
        raw_functionals,
    };

    let (nodes, weights) = gauss_legendre_unit(QUADRATURE_POINTS);
    let mut values = DMatrix::zeros(nodes.len(), k);
    for (q, (&x, &w)) in nodes.iter().zip(&weights).enumerate() {
        for (m, r) in basis.raw_jets(x).iter().enumerate() {
            values[(q, m)] = w.sqrt() * r[0];
        }
    }
    let mut transform = DMatrix::<f64>::identity(k, k);
    for i in 0..k {
        for _ in 0..2 {
            for j in 0..i {
                let c = values.column(i).dot(&values.column(j));
                let qj = values.column(j).into_owned();
                values.column_mut(i).axpy(-c, &qj, 1.0);
                for col in 0..k {
                    transform[(i, col)] -= c * transform[(j, col)];
                }
            }
        }
        let norm = values.column(i).norm();
        if norm.is_nan() || norm <= 1e-12 {
            return Err(Error::Singular("Gram-Schmidt produced a zero vector".into()));
        }
        values.column_mut(i).unscale_mut(norm);
        transform.row_mut(i).unscale_mut(norm);
    }

    let switching = basis.ce.switching().clone();
    let raw_polys: Vec<Polynomial> = (FIRST_FREE..n)
        .map(|m| {
            let t = chebyshev_monomial(m);
            basis
                .ce
                .functionals()
                .iter()
                .zip(&switching)
                .fold(t.clone(), |acc, (f, phi)| acc.axpy(-f.apply_poly(&t), phi))
        })
        .collect();
    basis.polys = (0..k)
        .map(|i| {
            raw_polys
                .iter()
                .enumerate()
                .fold(Polynomial::new(vec![0.0; n]), |acc, (m, p)| {
                    acc.axpy(transform[(i, m)], p)
                })
        })
        .collect();
    basis.transform = transform;
    Ok(basis)
}

/// Galerkin deflection model.
#[derive(Debug, Clone)]
pub struct GalerkinSolution {
    pub result: SolveResult,
    pub basis: GalerkinBasis,
    /// Equivalent Chebyshev weights under the basis' constrained expression.
    chebyshev: Vec<f64>,
}

impl GalerkinSolution {
    /// The solved displacement in monomial form.
    pub fn polynomial(&self) -> Polynomial {
        self.basis
            .polys
            .iter()
            .zip(&self.result.weights)
            .fold(Polynomial::new(vec![0.0; self.basis.n]), |acc, (p, &c)| acc.axpy(c, p))
    }

    pub fn jet(&self, x: f64) -> [f64; 5] {
        displacement_jet(&self.chebyshev, &self.basis.ce, x)
    }
}

impl Deflection for GalerkinSolution {
    fn displacement(&self, x: f64) -> f64 {
        self.jet(x)[0]
    }
}

/// Assembles `K eta = f` with `K_ij = <L[theta_j], theta_i>` and
/// `f_i = <q, theta_i>`, then solves it.
pub fn galerkin_solve(cfg: &BeamConfig, n: usize) -> Result<GalerkinSolution> {
    cfg.validate()?;
    let start = Instant::now();
    let basis = build_basis(cfg.bc, n)?;
    let m = basis.len();
    let (nodes, weights) = gauss_legendre_unit(QUADRATURE_POINTS);
    let mut k = DMatrix::zeros(m, m);
    let mut f = DVector::zeros(m);
    for (&x, &wq) in nodes.iter().zip(&weights) {
        let op = OperatorCoefficients::at(x, cfg);
        let jets = basis.jets(x);
        for i in 0..m {
            let ti = jets[i][0];
            f[i] += wq * op.load * ti;
            for j in 0..m {
                k[(i, j)] += wq * op.apply(jets[j][2], jets[j][3], jets[j][4]) * ti;
            }
        }
    }
    let eta = k
        .lu()
        .solve(&f)
        .filter(|eta: &DVector<f64>| eta.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Singular("Galerkin stiffness matrix".into()))?;
    let chebyshev = basis.chebyshev_weights(&eta);

    let grid = CollocationGrid::default();
    let loss = grid
        .points()
        .iter()
        .map(|&x| {
            let w = displacement_jet(&chebyshev, &basis.ce, x);
            OperatorCoefficients::at(x, cfg).residual(w[2], w[3], w[4]).powi(2)
        })
        .sum::<f64>()
        / grid.len() as f64;

    let result = SolveResult::direct(
        Method::Galerkin,
        eta.iter().copied().collect(),
        loss,
        start.elapsed().as_secs_f64(),
    );
    Ok(GalerkinSolution {
        result,
        basis,
        chebyshev,
    })
}
