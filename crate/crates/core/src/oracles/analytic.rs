use serde::{Deserialize, Serialize};

use crate::beam::{BeamConfig, BoundaryKind};
use crate::solution::Deflection;

/// `(cosh y - 1 - y^2/2) / y^4`
fn cosh_remainder(y: f64) -> f64 {
    let y2 = y * y;
    if y.abs() < 0.1 {
        1.0 / 24.0 + y2 / 720.0 + y2 * y2 / 40_320.0 + y2 * y2 * y2 / 3_628_800.0
    } else {
        let half = (y / 2.0).sinh();
        (2.0 * half * half - y2 / 2.0) / (y2 * y2)
    }
}

/// `(sinh y - y) / y^3`
fn sinh_remainder(y: f64) -> f64 {
    let y2 = y * y;
    if y.abs() < 0.1 {
        1.0 / 6.0 + y2 / 120.0 + y2 * y2 / 5040.0 + y2 * y2 * y2 / 362_880.0
    } else {
        (y.sinh() - y) / (y2 * y)
    }
}

/// `(cosh y - 1) / y^2`
fn cosh_ratio(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        0.5 + y * y / 24.0
    } else {
        let half = (y / 2.0).sinh();
        2.0 * half * half / (y * y)
    }
}

/// `sinh y / y`
fn sinh_ratio(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 + y * y / 6.0
    } else {
        y.sinh() / y
    }
}

/// `(1 - cosh k) / (k sinh k)`
fn end_ratio(k: f64) -> f64 {
    if k < 1e-3 {
        -0.5 + k * k / 24.0
    } else {
        let half = (k / 2.0).sinh();
        -2.0 * half * half / (k * k.sinh())
    }
}

/// `[W, W', W'', W''', W'''']` of a solid, untapered, uniformly loaded simply
/// supported beam (displacement, not scaled by 100).
///
/// For `kp > 0`, `V = W''` solves `V'' - kp V = q0` with `V(0) = V(1) = 0`.
/// Integrating twice with `W(0) = W(1) = 0` gives
///
/// ```text
/// W = q0 [X^4 c(kX) + (B/k) X^3 s(kX) - X (c(k) + (B/k) s(k))]
/// ```
///
/// with `k = sqrt(kp)`, `B = (1 - cosh k) / sinh k`, `c(y) = (cosh y - 1 -
/// y^2/2) / y^4` and `s(y) = (sinh y - y) / y^3`. Written this way the
/// `kp -> 0` limit is exact and no branch cancels catastrophically.
pub fn analytic_solid_ss_jet(x: f64, q0: f64, kp: f64) -> [f64; 5] {
    let k = kp.sqrt();
    let bk = end_ratio(k);
    let y = k * x;
    let slope0 = -(cosh_remainder(k) + bk * sinh_remainder(k));
    [
        q0 * (x.powi(4) * cosh_remainder(y) + bk * x.powi(3) * sinh_remainder(y) + x * slope0),
        q0 * (x.powi(3) * sinh_remainder(y) + bk * x * x * cosh_ratio(y) + slope0),
        q0 * (x * x * cosh_ratio(y) + bk * x * sinh_ratio(y)),
        q0 * (x * sinh_ratio(y) + bk * y.cosh()),
        q0 * (y.cosh() + bk * k * y.sinh()),
    ]
}

/// Deflection `100 W(X)` of the solid S-S beam.
pub fn analytic_solid_ss(x: f64, q0: f64, kp: f64) -> f64 {
    100.0 * analytic_solid_ss_jet(x, q0, kp)[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticKind {
    SolidSsNoK,
    SolidSsWithK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCase {
    pub kind: AnalyticKind,
    pub q0: f64,
    pub kp: f64,
}

impl AnalyticCase {
    /// The closed form applies only to solid (`S = 1`), untapered, uniformly
    /// loaded S-S beams.
    pub fn for_config(cfg: &BeamConfig) -> Option<Self> {
        let solid = (cfg.stiffness().s_factor - 1.0).abs() < 1e-14;
        if solid && cfg.phi == 0.0 && cfg.psi == 0.0 && cfg.gamma == 0.0 && cfg.bc == BoundaryKind::SS {
            let kind = if cfg.kp == 0.0 {
                AnalyticKind::SolidSsNoK
            } else {
                AnalyticKind::SolidSsWithK
            };
            Some(Self {
                kind,
                q0: cfg.q0,
                kp: cfg.kp,
            })
        } else {
            None
        }
    }
}

impl Deflection for AnalyticCase {
    fn displacement(&self, x: f64) -> f64 {
        analytic_solid_ss(x, self.q0, self.kp) / 100.0
    }

    fn deflection(&self, x: f64) -> f64 {
        analytic_solid_ss(x, self.q0, self.kp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_beam_midspan() {
        assert_abs_diff_eq!(analytic_solid_ss(0.5, 1.0, 0.0), 500.0 / 384.0, epsilon = 1e-14);
        // symbolic solution of W'''' - kp W'' = 1 with S-S ends
        assert_abs_diff_eq!(
            analytic_solid_ss(0.5, 1.0, 10.0),
            0.644_770_974_871_429_4,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            analytic_solid_ss(0.5, 1.0, 25.0),
            0.366_091_397_108_796_45,
            epsilon = 1e-13
        );
    }

    #[test]
    fn ends_are_pinned() {
        for kp in [0.0, 1e-8, 3.0, 25.0] {
            assert_abs_diff_eq!(analytic_solid_ss(0.0, 2.0, kp), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(analytic_solid_ss(1.0, 2.0, kp), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn continuous_in_kp_at_zero() {
        assert_abs_diff_eq!(
            analytic_solid_ss(0.5, 1.0, 1e-8),
            analytic_solid_ss(0.5, 1.0, 0.0),
            epsilon = 1e-6
        );
        // across the series switch-over
        for f in [cosh_remainder, sinh_remainder] {
            assert!((f(0.099_999_999) - f(0.100_000_001)).abs() < 1e-11);
        }
        for f in [cosh_ratio, sinh_ratio] {
            assert!((f(0.999_999e-4) - f(1.000_001e-4)).abs() < 1e-12);
        }
    }

    #[test]
    fn satisfies_the_differential_equation() {
        // W'''' - kp W'' = q0 by finite differences
        let (q0, kp) = (1.5, 10.0);
        let w = |x: f64| analytic_solid_ss(x, q0, kp) / 100.0;
        let h = 1e-2;
        let x = 0.37;
        let d2 = (w(x + h) - 2.0 * w(x) + w(x - h)) / (h * h);
        let d4 = (w(x + 2.0 * h) - 4.0 * w(x + h) + 6.0 * w(x) - 4.0 * w(x - h) + w(x - 2.0 * h)) / h.powi(4);
        assert!((d4 - kp * d2 - q0).abs() < 1e-3);
    }

    #[test]
    fn jet_matches_polynomial_limit() {
        let x: f64 = 0.3;
        let j = analytic_solid_ss_jet(x, 2.0, 0.0);
        let expected = [
            2.0 * (x.powi(4) - 2.0 * x.powi(3) + x) / 24.0,
            2.0 * (4.0 * x.powi(3) - 6.0 * x * x + 1.0) / 24.0,
            2.0 * (x * x - x) / 2.0,
            2.0 * (2.0 * x - 1.0) / 2.0,
            2.0,
        ];
        for (a, b) in j.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn jet_solves_equation() {
        for kp in [0.0, 1e-6, 10.0, 25.0] {
            for x in [0.0, 0.13, 0.5, 0.91, 1.0] {
                let j = analytic_solid_ss_jet(x, 1.0, kp);
                assert!((j[4] - kp * j[2] - 1.0).abs() < 1e-12, "kp {kp} x {x}");
            }
            let left = analytic_solid_ss_jet(0.0, 1.0, kp);
            let right = analytic_solid_ss_jet(1.0, 1.0, kp);
            assert!(left[2].abs() < 1e-14 && right[2].abs() < 1e-13, "kp {kp}");
        }
    }

    #[test]
    fn applicability() {
        let solid = BeamConfig::solid(1.0, 10.0, BoundaryKind::SS).unwrap();
        assert_eq!(
            AnalyticCase::for_config(&solid).unwrap().kind,
            AnalyticKind::SolidSsWithK
        );
        assert!(AnalyticCase::for_config(&solid.with_bc(BoundaryKind::CS)).is_none());
        let tapered = BeamConfig::new(1.0, 0, 0.1, 0.0, 0.0, 1.0, 0.0, BoundaryKind::SS).unwrap();
        assert!(AnalyticCase::for_config(&tapered).is_none());
    }
}
