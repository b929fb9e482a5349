//! Fourth-order univariate jets: a value together with its first four
//! derivatives with respect to the network input.

use std::ops::{Add, Mul};

/// `[f, f', f'', f''', f'''']` of some quantity with respect to `X`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InputJet(pub [f64; 5]);

impl InputJet {
    /// Jet of the input itself: `(X, 1, 0, 0, 0)`.
    pub fn variable(x: f64) -> Self {
        Self([x, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self([c, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `self += w * other`.
    #[inline]
    pub fn add_scaled(&mut self, w: f64, other: &InputJet) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += w * b;
        }
    }

    pub fn tanh(&self) -> InputJet {
        TanhJet::forward(self).output
    }
}

impl Add for InputJet {
    type Output = InputJet;

    fn add(mut self, rhs: InputJet) -> InputJet {
        self.add_scaled(1.0, &rhs);
        self
    }
}

impl Mul<f64> for InputJet {
    type Output = InputJet;

    fn mul(self, rhs: f64) -> InputJet {
        InputJet(self.0.map(|v| v * rhs))
    }
}

/// Product rule for jets (Leibniz, truncated at order four).
impl Mul for InputJet {
    type Output = InputJet;

    fn mul(self, rhs: InputJet) -> InputJet {
        const BINOM: [[f64; 5]; 5] = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 6.0, 4.0, 1.0],
        ];
        let (a, b) = (self.0, rhs.0);
        InputJet(std::array::from_fn(|n| {
            (0..=n).map(|k| BINOM[n][k] * a[k] * b[n - k]).sum()
        }))
    }
}

/// `tanh` applied to a jet, keeping what the reverse pass needs.
///
/// With `f = tanh` and `f_k` its `k`-th derivative at `z0`, Faa di Bruno gives
///
/// ```text
/// y1 = f1 z1
/// y2 = f2 z1^2 + f1 z2
/// y3 = f3 z1^3 + 3 f2 z1 z2 + f1 z3
/// y4 = f4 z1^4 + 6 f3 z1^2 z2 + f2 (3 z2^2 + 4 z1 z3) + f1 z4
/// ```
#[derive(Debug, Clone, Copy)]
pub struct TanhJet {
    pub input: InputJet,
    pub output: InputJet,
    /// `tanh` derivatives of orders 1..=5 at `z0`.
    f: [f64; 5],
}

impl TanhJet {
    pub fn forward(z: &InputJet) -> Self {
        let t = z.0[0].tanh();
        let t2 = t * t;
        let f1 = 1.0 - t2;
        let f2 = -2.0 * t * f1;
        let f3 = f1 * (6.0 * t2 - 2.0);
        let f4 = f2 * (6.0 * t2 - 2.0) + 12.0 * t * f1 * f1;
        let f5 = f3 * (6.0 * t2 - 2.0) + 36.0 * t * f1 * f2 + 12.0 * f1 * f1 * f1;
        let [_, z1, z2, z3, z4] = z.0;
        let y = [
            t,
            f1 * z1,
            f2 * z1 * z1 + f1 * z2,
            f3 * z1 * z1 * z1 + 3.0 * f2 * z1 * z2 + f1 * z3,
            f4 * z1.powi(4) + 6.0 * f3 * z1 * z1 * z2 + f2 * (3.0 * z2 * z2 + 4.0 * z1 * z3) + f1 * z4,
        ];
        Self {
            input: *z,
            output: InputJet(y),
            f: [f1, f2, f3, f4, f5],
        }
    }

    /// Pulls the adjoint of the output jet back to the input jet.
    pub fn backward(&self, gy: &[f64; 5]) -> [f64; 5] {
        let [f1, f2, f3, f4, f5] = self.f;
        let [_, z1, z2, z3, z4] = self.input.0;
        let z1s = z1 * z1;
        let gz0 = gy[0] * f1
            + gy[1] * f2 * z1
            + gy[2] * (f3 * z1s + f2 * z2)
            + gy[3] * (f4 * z1s * z1 + 3.0 * f3 * z1 * z2 + f2 * z3)
            + gy[4] * (f5 * z1s * z1s + 6.0 * f4 * z1s * z2 + f3 * (3.0 * z2 * z2 + 4.0 * z1 * z3) + f2 * z4);
        let gz1 = gy[1] * f1
            + gy[2] * 2.0 * f2 * z1
            + gy[3] * (3.0 * f3 * z1s + 3.0 * f2 * z2)
            + gy[4] * (4.0 * f4 * z1s * z1 + 12.0 * f3 * z1 * z2 + 4.0 * f2 * z3);
        let gz2 = gy[2] * f1 + gy[3] * 3.0 * f2 * z1 + gy[4] * (6.0 * f3 * z1s + 6.0 * f2 * z2);
        let gz3 = gy[3] * f1 + gy[4] * 4.0 * f2 * z1;
        let gz4 = gy[4] * f1;
        [gz0, gz1, gz2, gz3, gz4]
    }
}
