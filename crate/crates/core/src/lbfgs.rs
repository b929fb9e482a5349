//! Limited-memory BFGS with a strong-Wolfe line search.
//!
//! The driver runs `outer_steps` rounds of at most `max_inner_iterations`
//! iterations each. Curvature history carries over between rounds, so the
//! rounds behave like repeated calls into one stateful optimizer.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbfgsSettings {
    pub outer_steps: usize,
    pub max_inner_iterations: usize,
    pub history_size: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    /// Stop when `max |grad|` falls to this value.
    pub gradient_tolerance: f64,
    /// Stop a round when the loss or the step changes by less than this.
    pub change_tolerance: f64,
    /// Objective evaluations allowed per line search.
    pub max_line_search: usize,
}

impl Default for LbfgsSettings {
    fn default() -> Self {
        Self {
            outer_steps: 10,
            max_inner_iterations: 50,
            history_size: 10,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            gradient_tolerance: 1e-12,
            change_tolerance: 1e-16,
            max_line_search: 25,
        }
    }
}

impl LbfgsSettings {
    /// 50 rounds of 50 iterations, the network training protocol.
    pub fn pinn() -> Self {
        Self {
            outer_steps: 50,
            ..Self::default()
        }
    }

    /// 10 rounds of 50 iterations.
    pub fn dfl_tfc() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0 < self.wolfe_c1 && self.wolfe_c1 < self.wolfe_c2 && self.wolfe_c2 < 1.0) {
            return Err(format!(
                "Wolfe constants must satisfy 0 < c1 < c2 < 1, got c1={} c2={}",
                self.wolfe_c1, self.wolfe_c2
            ));
        }
        if self.history_size == 0 {
            return Err("history_size must be at least 1".into());
        }
        if self.max_line_search == 0 {
            return Err("max_line_search must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub loss: f64,
    /// Loss at the end of every outer step.
    pub trace: Vec<f64>,
    /// Set when a line search could not find a sufficient decrease; `x` is
    /// then the last accepted iterate.
    pub line_search_failed: bool,
    /// Gradient tolerance reached.
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Largest `grad . direction` over accepted steps (negative for a
    /// descent method).
    pub max_accepted_slope: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn amax(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Minimizer of the cubic interpolating `(x1, f1, g1)` and `(x2, f2, g2)`,
/// clamped to `bounds`.
fn cubic_interpolate(x1: f64, f1: f64, g1: f64, x2: f64, f2: f64, g2: f64, bounds: Option<(f64, f64)>) -> f64 {
    let (lo, hi) = bounds.unwrap_or(if x1 <= x2 { (x1, x2) } else { (x2, x1) });
    let d1 = g1 + g2 - 3.0 * (f1 - f2) / (x1 - x2);
    let d2_sq = d1 * d1 - g1 * g2;
    if d2_sq >= 0.0 {
        let d2 = d2_sq.sqrt();
        let t = if x1 <= x2 {
            x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2.0 * d2))
        } else {
            x1 - (x1 - x2) * ((g1 + d2 - d1) / (g1 - g2 + 2.0 * d2))
        };
        if t.is_finite() {
            return t.max(lo).min(hi);
        }
    }
    (lo + hi) / 2.0
}

#[derive(Clone)]
struct Probe {
    t: f64,
    f: f64,
    g: Vec<f64>,
    gtd: f64,
}

struct LineSearch {
    probe: Probe,
    evaluations: usize,
}

/// Strong-Wolfe search along `d` from `x`: bracketing then zoom.
fn strong_wolfe<F>(
    objective: &mut F,
    x: &[f64],
    d: &[f64],
    start: Probe,
    t_init: f64,
    settings: &LbfgsSettings,
) -> LineSearch
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let (c1, c2) = (settings.wolfe_c1, settings.wolfe_c2);
    let max_ls = settings.max_line_search;
    let d_norm = amax(d);
    let f0 = start.f;
    let gtd0 = start.gtd;
    let mut evaluations = 0;
    let mut xt = vec![0.0; x.len()];
    let mut eval = |t: f64, evaluations: &mut usize| -> Probe {
        for ((xi, &x0), &di) in xt.iter_mut().zip(x).zip(d) {
            *xi = x0 + t * di;
        }
        let (f, g) = objective(&xt);
        *evaluations += 1;
        let gtd = dot(&g, d);
        Probe { t, f, g, gtd }
    };

    let mut prev = start.clone();
    let mut new = eval(t_init, &mut evaluations);
    let mut iter = 0;
    let mut bracket: Vec<Probe>;
    let mut done = false;
    loop {
        if iter >= max_ls {
            bracket = vec![start.clone(), new];
            break;
        }
        if !new.f.is_finite() || new.f > f0 + c1 * new.t * gtd0 || (iter > 1 && new.f >= prev.f) {
            bracket = vec![prev, new];
            break;
        }
        if new.gtd.abs() <= -c2 * gtd0 {
            bracket = vec![new];
            done = true;
            break;
        }
        if new.gtd >= 0.0 {
            bracket = vec![prev, new];
            break;
        }
        let min_step = new.t + 0.01 * (new.t - prev.t);
        let max_step = new.t * 10.0;
        let t = cubic_interpolate(
            prev.t,
            prev.f,
            prev.gtd,
            new.t,
            new.f,
            new.gtd,
            Some((min_step, max_step)),
        );
        prev = new;
        new = eval(t, &mut evaluations);
        iter += 1;
    }

    if bracket.len() == 1 {
        return LineSearch {
            probe: bracket.pop().unwrap(),
            evaluations,
        };
    }

    let mut insufficient_progress = false;
    let order = |b: &[Probe]| if b[0].f <= b[1].f { (0, 1) } else { (1, 0) };
    let (mut low, mut high) = order(&bracket);
    while !done && iter < max_ls {
        let width = (bracket[1].t - bracket[0].t).abs();
        if width * d_norm < settings.change_tolerance {
            break;
        }
        let mut t = cubic_interpolate(
            bracket[0].t,
            bracket[0].f,
            bracket[0].gtd,
            bracket[1].t,
            bracket[1].f,
            bracket[1].gtd,
            None,
        );
        let b_max = bracket[0].t.max(bracket[1].t);
        let b_min = bracket[0].t.min(bracket[1].t);
        let eps = 0.1 * (b_max - b_min);
        if (b_max - t).min(t - b_min) < eps {
            if insufficient_progress || t >= b_max || t <= b_min {
                t = if (t - b_max).abs() < (t - b_min).abs() {
                    b_max - eps
                } else {
                    b_min + eps
                };
                insufficient_progress = false;
            } else {
                insufficient_progress = true;
            }
        } else {
            insufficient_progress = false;
        }
        let probe = eval(t, &mut evaluations);
        iter += 1;
        if !probe.f.is_finite() || probe.f > f0 + c1 * t * gtd0 || probe.f >= bracket[low].f {
            bracket[high] = probe;
            (low, high) = order(&bracket);
        } else {
            if probe.gtd.abs() <= -c2 * gtd0 {
                done = true;
            } else if probe.gtd * (bracket[high].t - bracket[low].t) >= 0.0 {
                bracket[high] = bracket[low].clone();
            }
            bracket[low] = probe;
        }
    }
    LineSearch {
        probe: bracket.swap_remove(low),
        evaluations,
    }
}

/// Minimizes `objective`, which returns the loss and its gradient.
pub fn lbfgs_minimize<F>(mut objective: F, x0: &[f64], settings: &LbfgsSettings) -> LbfgsOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = x0.to_vec();
    let (mut f, mut g) = objective(&x);
    let mut evaluations = 1;
    let mut iterations = 0;
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(settings.history_size);
    let mut h_diag = 1.0;
    let mut trace = Vec::with_capacity(settings.outer_steps);
    let mut line_search_failed = false;
    let mut converged = false;
    let mut max_accepted_slope = f64::NEG_INFINITY;
    let mut alpha = vec![0.0; settings.history_size];

    'outer: for _ in 0..settings.outer_steps {
        if converged || line_search_failed {
            trace.push(f);
            continue;
        }
        for _ in 0..settings.max_inner_iterations {
            if amax(&g) <= settings.gradient_tolerance {
                converged = true;
                break;
            }

            // two-loop recursion
            let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
            for (i, (s, y, rho)) in history.iter().enumerate().rev() {
                alpha[i] = rho * dot(s, &d);
                for (dk, yk) in d.iter_mut().zip(y) {
                    *dk -= alpha[i] * yk;
                }
            }
            for dk in d.iter_mut() {
                *dk *= h_diag;
            }
            for (i, (s, y, rho)) in history.iter().enumerate() {
                let beta = rho * dot(y, &d);
                for (dk, sk) in d.iter_mut().zip(s) {
                    *dk += (alpha[i] - beta) * sk;
                }
            }

            let mut gtd = dot(&g, &d);
            if gtd.is_nan() || gtd >= 0.0 {
                // curvature pairs produced an ascent direction; restart
                history.clear();
                h_diag = 1.0;
                d = g.iter().map(|v| -v).collect();
                gtd = dot(&g, &d);
            }
            let t_init = if iterations == 0 {
                1.0f64.min(1.0 / g.iter().map(|v| v.abs()).sum::<f64>())
            } else {
                1.0
            };

            let start = Probe {
                t: 0.0,
                f,
                g: g.clone(),
                gtd,
            };
            let ls = strong_wolfe(&mut objective, &x, &d, start, t_init, settings);
            evaluations += ls.evaluations;
            let Probe {
                t, f: f_new, g: g_new, ..
            } = ls.probe;
            if !(t > 0.0 && f_new.is_finite() && f_new <= f + settings.wolfe_c1 * t * gtd) {
                line_search_failed = true;
                trace.push(f);
                continue 'outer;
            }

            iterations += 1;
            max_accepted_slope = max_accepted_slope.max(gtd);
            let s: Vec<f64> = d.iter().map(|v| t * v).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let ys = dot(&y, &s);
            if ys > 1e-10 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && ys > 0.0 {
                if history.len() == settings.history_size {
                    history.pop_front();
                }
                h_diag = ys / dot(&y, &y);
                history.push_back((s.clone(), y, 1.0 / ys));
            }
            for (xi, si) in x.iter_mut().zip(&s) {
                *xi += si;
            }
            let change = (f_new - f).abs();
            f = f_new;
            g = g_new;
            if change < settings.change_tolerance || amax(&s) < settings.change_tolerance {
                break;
            }
        }
        trace.push(f);
    }

    LbfgsOutcome {
        x,
        loss: f,
        trace,
        line_search_failed,
        converged,
        iterations,
        evaluations,
        max_accepted_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> (f64, Vec<f64>) {
        (dot(x, x), x.iter().map(|v| 2.0 * v).collect())
    }

    fn rosenbrock(x: &[f64]) -> (f64, Vec<f64>) {
        let (a, b) = (x[0], x[1]);
        let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
        let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
        (f, g)
    }

    #[test]
    fn quadratic_bowl() {
        let settings = LbfgsSettings {
            outer_steps: 5,
            gradient_tolerance: 0.0,
            ..LbfgsSettings::default()
        };
        let out = lbfgs_minimize(sphere, &[3.0, 4.0], &settings);
        assert!(out.loss <= 1e-16, "loss {}", out.loss);
        assert!(out.x.iter().all(|v| v.abs() < 1e-8));
        assert_eq!(out.trace.len(), 5);
    }

    #[test]
    fn rosenbrock_valley() {
        let out = lbfgs_minimize(rosenbrock, &[-1.2, 1.0], &LbfgsSettings::default());
        assert!(out.loss <= 1e-8, "loss {}", out.loss);
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4);
        assert!(!out.line_search_failed);
    }

    #[test]
    fn stationary_start_returns_immediately() {
        let out = lbfgs_minimize(
            |x: &[f64]| (1.0, vec![0.0; x.len()]),
            &[0.5, -0.5],
            &LbfgsSettings::default(),
        );
        assert_eq!(out.x, vec![0.5, -0.5]);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.evaluations, 1);
        assert!(out.converged);
    }

    #[test]
    fn trace_is_monotone_and_steps_descend() {
        let settings = LbfgsSettings {
            history_size: 1,
            ..LbfgsSettings::default()
        };
        // ill-conditioned quadratic
        let q = |x: &[f64]| {
            let w = [1.0, 10.0, 100.0, 1000.0];
            let f = x.iter().zip(w).map(|(v, w)| w * v * v).sum();
            let g = x.iter().zip(w).map(|(v, w)| 2.0 * w * v).collect();
            (f, g)
        };
        let out = lbfgs_minimize(q, &[1.0, 1.0, 1.0, 1.0], &settings);
        for pair in out.trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15);
        }
        assert!(out.max_accepted_slope < 0.0);
        assert!(out.loss < 1e-10);
    }

    #[test]
    fn settings_validation() {
        assert!(LbfgsSettings::default().validate().is_ok());
        let bad = LbfgsSettings {
            wolfe_c1: 0.95,
            ..LbfgsSettings::default()
        };
        assert!(bad.validate().is_err());
        let bad = LbfgsSettings {
            history_size: 0,
            ..LbfgsSettings::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn cubic_interpolation_finds_parabola_minimum() {
        // f = (t - 2)^2 sampled at 0 and 3
        let t = cubic_interpolate(0.0, 4.0, -4.0, 3.0, 1.0, 2.0, None);
        assert!((t - 2.0).abs() < 1e-12);
    }
}
