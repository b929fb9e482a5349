//! Non-dimensional beam model: perforation stiffness ratio, quadratic taper,
//! exponential load and the strong-form residual of
//! `(E(X) W'')'' = q0 exp(gamma X) + kp W''` on `X in [0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Support conditions at the two ends of the beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// Simply supported at both ends: `W = W'' = 0` at `X = 0` and `X = 1`.
    #[serde(rename = "ss", alias = "SS", alias = "S-S")]
    SS,
    /// Clamped at `X = 0` (`W = W' = 0`), simply supported at `X = 1`.
    #[serde(rename = "cs", alias = "CS", alias = "C-S")]
    CS,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 2] = [BoundaryKind::SS, BoundaryKind::CS];

    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::SS => "S-S",
            BoundaryKind::CS => "C-S",
        }
    }
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ss" | "s-s" => Ok(BoundaryKind::SS),
            "cs" | "c-s" => Ok(BoundaryKind::CS),
            other => Err(format!("unknown boundary kind `{other}` (expected ss or cs)")),
        }
    }
}

/// All non-dimensional parameters of one beam problem.
///
/// Construct through [`BeamConfig::new`] (or call [`BeamConfig::validate`]
/// after deserializing) so the positivity invariants hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    /// Filling ratio, in `(0, 1]`.
    pub alpha: f64,
    /// Rows of holes along the length.
    pub n_holes: u32,
    /// Linear taper parameter.
    pub phi: f64,
    /// Quadratic taper parameter.
    pub psi: f64,
    /// Exponent of the load `q0 * exp(gamma * X)`.
    pub gamma: f64,
    /// Non-dimensional load amplitude.
    pub q0: f64,
    /// Non-dimensional Pasternak foundation parameter.
    pub kp: f64,
    pub bc: BoundaryKind,
}

impl BeamConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        n_holes: u32,
        phi: f64,
        psi: f64,
        gamma: f64,
        q0: f64,
        kp: f64,
        bc: BoundaryKind,
    ) -> Result<Self> {
        let cfg = Self {
            alpha,
            n_holes,
            phi,
            psi,
            gamma,
            q0,
            kp,
            bc,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Solid, untapered, uniformly loaded beam (`alpha = 1`, `N = 0`).
    pub fn solid(q0: f64, kp: f64, bc: BoundaryKind) -> Result<Self> {
        Self::new(1.0, 0, 0.0, 0.0, 0.0, q0, kp, bc)
    }

    pub fn with_bc(mut self, bc: BoundaryKind) -> Self {
        self.bc = bc;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::FillingRatio(self.alpha));
        }
        for (name, value) in [("phi", self.phi), ("psi", self.psi), ("gamma", self.gamma)] {
            if !value.is_finite() {
                return Err(Error::NotFinite { name, value });
            }
        }
        for (name, value) in [("q0", self.q0), ("kp", self.kp)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Negative { name, value });
            }
        }
        let min = taper_minimum(self.phi, self.psi);
        if min <= 0.0 {
            return Err(Error::TaperNotPositive { min });
        }
        Ok(())
    }

    pub fn stiffness(&self) -> StiffnessProfile {
        StiffnessProfile {
            s_factor: stiffness_factor_unchecked(self.alpha, self.n_holes),
            phi: self.phi,
            psi: self.psi,
        }
    }

    pub fn load(&self, x: f64) -> f64 {
        load(x, self.q0, self.gamma)
    }
}

/// Minimum of `1 + phi X + psi X^2` over `[0, 1]`: both endpoints plus the
/// vertex when it falls inside the interval.
fn taper_minimum(phi: f64, psi: f64) -> f64 {
    let g = |x: f64| 1.0 + phi * x + psi * x * x;
    let mut min = g(0.0).min(g(1.0));
    if psi != 0.0 {
        let vertex = -phi / (2.0 * psi);
        if (0.0..=1.0).contains(&vertex) {
            min = min.min(g(vertex));
        }
    }
    min
}

/// Bending-stiffness ratio of the perforated beam relative to the solid one.
pub fn stiffness_factor(alpha: f64, n_holes: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::FillingRatio(alpha));
    }
    Ok(stiffness_factor_unchecked(alpha, n_holes))
}

fn stiffness_factor_unchecked(alpha: f64, n_holes: u32) -> f64 {
    let a = alpha;
    let n = f64::from(n_holes);
    let a2 = a * a;
    let a3 = a2 * a;
    let num = a * (n + 1.0) * (n * n + 2.0 * n + a2);
    let den = (1.0 - a2 + a3) * n * n * n + 3.0 * a * n * n + (3.0 + 2.0 * a - 3.0 * a2 + a3) * a2 * n + a3;
    num / den
}

/// `E(X) = S * (1 + phi X + psi X^2)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessProfile {
    pub s_factor: f64,
    pub phi: f64,
    pub psi: f64,
}

impl StiffnessProfile {
    pub fn eval(&self, x: f64) -> f64 {
        ei_eq(x, self).0
    }
}

/// Equivalent stiffness and its first two derivatives at `x`.
pub fn ei_eq(x: f64, profile: &StiffnessProfile) -> (f64, f64, f64) {
    let StiffnessProfile { s_factor: s, phi, psi } = *profile;
    let g = 1.0 + phi * x + psi * x * x;
    let g1 = phi + 2.0 * psi * x;
    let g2 = 2.0 * psi;
    let e0 = s * g * g * g;
    let e1 = 3.0 * s * g * g * g1;
    let e2 = s * (6.0 * g * g1 * g1 + 3.0 * g * g * g2);
    (e0, e1, e2)
}

pub fn load(x: f64, q0: f64, gamma: f64) -> f64 {
    q0 * (gamma * x).exp()
}

/// Coefficients of the linear differential operator at one point:
/// `L[W] = c2 W'' + c3 W''' + c4 W''''`, so that the residual is `L[W] - q(X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCoefficients {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub load: f64,
}

impl OperatorCoefficients {
    pub fn at(x: f64, cfg: &BeamConfig) -> Self {
        let (e0, e1, e2) = ei_eq(x, &cfg.stiffness());
        Self {
            c2: e2 - cfg.kp,
            c3: 2.0 * e1,
            c4: e0,
            load: cfg.load(x),
        }
    }

    /// Linear part of the residual, without the load.
    #[inline]
    pub fn apply(&self, w2: f64, w3: f64, w4: f64) -> f64 {
        self.c2 * w2 + self.c3 * w3 + self.c4 * w4
    }

    #[inline]
    pub fn residual(&self, w2: f64, w3: f64, w4: f64) -> f64 {
        self.apply(w2, w3, w4) - self.load
    }
}

/// Strong-form residual `(E W'')'' - q0 e^{gamma X} - kp W''` in
/// product-rule form.
pub fn residual(x: f64, w2: f64, w3: f64, w4: f64, cfg: &BeamConfig) -> f64 {
    let (e0, e1, e2) = ei_eq(x, &cfg.stiffness());
    e2 * w2 + 2.0 * e1 * w3 + e0 * w4 - cfg.load(x) - cfg.kp * w2
}
