//! Constrained expressions for the two supported support conditions.
//!
//! A constrained expression maps any smooth free function `h` to
//!
//! ```text
//! W(X) = h(X) - sum_j phi_j(X) * C_j[h]
//! ```
//!
//! where `C_j` are the boundary functionals and `phi_j` the switching
//! polynomials with `C_i[phi_j] = delta_ij`. Every `W` built this way satisfies
//! `C_j[W] = 0` for all `j`, whatever `h` is.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::beam::BoundaryKind;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    /// `X = 0`
    Left,
    /// `X = 1`
    Right,
}

impl End {
    pub fn location(self) -> f64 {
        match self {
            End::Left => 0.0,
            End::Right => 1.0,
        }
    }
}

/// The `derivative_order`-th derivative evaluated at one end of the beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryFunctional {
    pub end: End,
    pub derivative_order: usize,
}

impl BoundaryFunctional {
    pub const fn new(end: End, derivative_order: usize) -> Self {
        Self { end, derivative_order }
    }

    pub fn location(&self) -> f64 {
        self.end.location()
    }

    pub fn apply_poly(&self, p: &Polynomial) -> f64 {
        p.eval_derivative(self.derivative_order, self.location())
    }

    /// Picks the right entry from the value/derivative jets of a function at
    /// `X = 0` and `X = 1`.
    pub fn apply_jets(&self, left: &[f64; 5], right: &[f64; 5]) -> f64 {
        match self.end {
            End::Left => left[self.derivative_order],
            End::Right => right[self.derivative_order],
        }
    }
}

/// Functionals in the order used throughout: S-S is
/// `{W(0), W(1), W''(0), W''(1)}`, C-S is `{W(0), W'(0), W(1), W''(1)}`.
pub fn functionals_for(bc: BoundaryKind) -> [BoundaryFunctional; 4] {
    use End::{Left, Right};
    match bc {
        BoundaryKind::SS => [
            BoundaryFunctional::new(Left, 0),
            BoundaryFunctional::new(Right, 0),
            BoundaryFunctional::new(Left, 2),
            BoundaryFunctional::new(Right, 2),
        ],
        BoundaryKind::CS => [
            BoundaryFunctional::new(Left, 0),
            BoundaryFunctional::new(Left, 1),
            BoundaryFunctional::new(Right, 0),
            BoundaryFunctional::new(Right, 2),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedExpression {
    functionals: [BoundaryFunctional; 4],
    switching: [Polynomial; 4],
}

/// Free-function data needed to evaluate a constrained expression at one
/// point: `h` and its first four derivatives at `X`, and the four boundary
/// functionals `C_j[h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeFunctionData {
    pub at_x: [f64; 5],
    pub functionals: [f64; 4],
}

impl ConstrainedExpression {
    /// Closed-form switching polynomials for `bc`.
    pub fn for_boundary(bc: BoundaryKind) -> Self {
        let p = |c: [f64; 4]| Polynomial::new(c.to_vec());
        let switching = match bc {
            BoundaryKind::SS => [
                p([1.0, -1.0, 0.0, 0.0]),
                p([0.0, 1.0, 0.0, 0.0]),
                p([0.0, -1.0 / 3.0, 0.5, -1.0 / 6.0]),
                p([0.0, -1.0 / 6.0, 0.0, 1.0 / 6.0]),
            ],
            BoundaryKind::CS => [
                p([1.0, 0.0, -1.5, 0.5]),
                p([0.0, 1.0, -1.5, 0.5]),
                p([0.0, 0.0, 1.5, -0.5]),
                p([0.0, 0.0, -0.25, 0.25]),
            ],
        };
        Self {
            functionals: functionals_for(bc),
            switching,
        }
    }

    /// Builds switching polynomials from cubic support functions
    /// `s_j = X^(j-1)`: with `M_ij = C_i[s_j]`, the coefficients of `phi_j`
    /// on the supports are column `j` of `M^-1`.
    pub fn from_functionals(functionals: [BoundaryFunctional; 4]) -> Result<Self> {
        let supports: [Polynomial; 4] = std::array::from_fn(Polynomial::monomial);
        let m = Matrix4::from_fn(|i, j| functionals[i].apply_poly(&supports[j]));
        let lu = m.lu();
        let u = lu.u();
        let pivot = (0..4).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        if pivot < 1e-12 {
            return Err(Error::SingularFunctionals { pivot });
        }
        let mut switching: [Polynomial; 4] = Default::default();
        for (j, phi) in switching.iter_mut().enumerate() {
            let col = lu
                .solve(&Vector4::from_fn(|i, _| if i == j { 1.0 } else { 0.0 }))
                .ok_or(Error::SingularFunctionals { pivot })?;
            *phi = Polynomial::new(col.iter().copied().collect());
        }
        Ok(Self { functionals, switching })
    }

    pub fn functionals(&self) -> &[BoundaryFunctional; 4] {
        &self.functionals
    }

    pub fn switching(&self) -> &[Polynomial; 4] {
        &self.switching
    }

    /// Value and derivatives 0..=4 of every switching polynomial at `x`.
    pub fn switching_jets(&self, x: f64) -> [[f64; 5]; 4] {
        std::array::from_fn(|j| self.switching[j].jet(x))
    }

    /// Boundary functionals of a function given its jets at both ends.
    pub fn functional_values(&self, left: &[f64; 5], right: &[f64; 5]) -> [f64; 4] {
        std::array::from_fn(|j| self.functionals[j].apply_jets(left, right))
    }

    /// `W` and its first four derivatives at `x`.
    pub fn eval(&self, x: f64, h: &FreeFunctionData) -> [f64; 5] {
        self.eval_with_switching(&self.switching_jets(x), h)
    }

    /// Same as [`eval`](Self::eval) with the switching jets at `x` already
    /// computed.
    pub fn eval_with_switching(&self, switching: &[[f64; 5]; 4], h: &FreeFunctionData) -> [f64; 5] {
        let mut w = h.at_x;
        for (phi, c) in switching.iter().zip(h.functionals) {
            for (wk, pk) in w.iter_mut().zip(phi) {
                *wk -= pk * c;
            }
        }
        w
    }
}

/// Constrained expression for `bc` through the generic construction.
pub fn build_ce(bc: BoundaryKind) -> Result<ConstrainedExpression> {
    ConstrainedExpression::from_functionals(functionals_for(bc))
}

/// Free function `X -> h` evaluated through a constrained expression.
pub fn ce_eval(ce: &ConstrainedExpression, x: f64, h: &FreeFunctionData) -> [f64; 5] {
    ce.eval(x, h)
}
