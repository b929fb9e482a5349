use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::jet::{InputJet, TanhJet};
use crate::error::{Error, Result};

/// Three hidden tanh layers of five neurons.
pub const DEFAULT_LAYERS: [usize; 5] = [1, 5, 5, 5, 1];
pub const DEFAULT_SEED: u64 = 42;

/// Fully connected scalar network, parameters flattened layer by layer as
/// `W (out x in, row-major)` followed by `b (out)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub layer_sizes: Vec<usize>,
    pub params: Vec<f64>,
    pub seed: u64,
}

pub fn parameter_count(layer_sizes: &[usize]) -> usize {
    layer_sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

fn check_layout(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::Network("need at least an input and an output layer".into()));
    }
    if layer_sizes[0] != 1 || *layer_sizes.last().unwrap() != 1 {
        return Err(Error::Network("input and output must be scalar".into()));
    }
    if layer_sizes.contains(&0) {
        return Err(Error::Network("empty layer".into()));
    }
    Ok(())
}

/// Network with `hidden` tanh layers of `width` neurons.
pub fn layers_with_depth(hidden: usize, width: usize) -> Vec<usize> {
    let mut sizes = vec![1];
    sizes.resize(1 + hidden, width);
    sizes.push(1);
    sizes
}

/// Cached forward pass for one input, consumed by [`MlpParams::backward`].
pub struct Tape {
    /// Input jet of every layer (`inputs[0]` is the network input).
    inputs: Vec<Vec<InputJet>>,
    /// tanh caches of every hidden layer.
    activations: Vec<Vec<TanhJet>>,
    output: InputJet,
}

impl Tape {
    pub fn output(&self) -> &InputJet {
        &self.output
    }
}

impl MlpParams {
    /// Glorot-uniform weights, zero biases.
    pub fn init(layer_sizes: &[usize], seed: u64) -> Result<Self> {
        check_layout(layer_sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::with_capacity(parameter_count(layer_sizes));
        for w in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            params.extend((0..fan_in * fan_out).map(|_| rng.gen_range(-limit..=limit)));
            params.resize(params.len() + fan_out, 0.0);
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            params,
            seed,
        })
    }

    pub fn from_params(layer_sizes: &[usize], params: Vec<f64>) -> Result<Self> {
        check_layout(layer_sizes)?;
        if params.len() != parameter_count(layer_sizes) {
            return Err(Error::Network(format!(
                "expected {} parameters, got {}",
                parameter_count(layer_sizes),
                params.len()
            )));
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            params,
            seed: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Forward pass over jets, recording everything the reverse pass needs.
    pub fn forward_tape(&self, params: &[f64], x: f64) -> Tape {
        let layers = self.layer_sizes.len() - 1;
        let mut inputs = Vec::with_capacity(layers);
        let mut activations = Vec::with_capacity(layers - 1);
        let mut current = vec![InputJet::variable(x)];
        let mut offset = 0;
        for l in 0..layers {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let weights = &params[offset..offset + fan_in * fan_out];
            let biases = &params[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
            offset += fan_in * fan_out + fan_out;
            let pre: Vec<InputJet> = (0..fan_out)
                .map(|o| {
                    let mut z = InputJet::constant(biases[o]);
                    for (w, a) in weights[o * fan_in..(o + 1) * fan_in].iter().zip(&current) {
                        z.add_scaled(*w, a);
                    }
                    z
                })
                .collect();
            inputs.push(std::mem::take(&mut current));
            if l + 1 < layers {
                let act: Vec<TanhJet> = pre.iter().map(TanhJet::forward).collect();
                current = act.iter().map(|a| a.output).collect();
                activations.push(act);
            } else {
                current = pre;
            }
        }
        Tape {
            inputs,
            activations,
            output: current[0],
        }
    }

    /// Accumulates `d(loss)/d(params)` into `grad` given the adjoint of the
    /// output jet.
    pub fn backward(&self, params: &[f64], tape: &Tape, output_adjoint: &[f64; 5], grad: &mut [f64]) {
        let layers = self.layer_sizes.len() - 1;
        let mut offsets = Vec::with_capacity(layers);
        let mut offset = 0;
        for l in 0..layers {
            offsets.push(offset);
            offset += self.layer_sizes[l] * self.layer_sizes[l + 1] + self.layer_sizes[l + 1];
        }
        // adjoint of the current layer's pre-activation jets
        let mut g_pre: Vec<[f64; 5]> = vec![*output_adjoint];
        for l in (0..layers).rev() {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let off = offsets[l];
            let inputs = &tape.inputs[l];
            let mut g_in = vec![[0.0; 5]; fan_in];
            for o in 0..fan_out {
                let g = &g_pre[o];
                grad[off + fan_in * fan_out + o] += g[0];
                for i in 0..fan_in {
                    let a = &inputs[i].0;
                    let w_idx = off + o * fan_in + i;
                    grad[w_idx] += g.iter().zip(a).map(|(p, q)| p * q).sum::<f64>();
                    let w = params[w_idx];
                    for k in 0..5 {
                        g_in[i][k] += w * g[k];
                    }
                }
            }
            if l == 0 {
                break;
            }
            g_pre = tape.activations[l - 1]
                .iter()
                .zip(&g_in)
                .map(|(act, g)| act.backward(g))
                .collect();
        }
    }

    /// Network output and its first four `X`-derivatives.
    pub fn forward_jet(&self, x: f64) -> [f64; 5] {
        self.forward_tape(&self.params, x).output.0
    }
}

/// Free-function form of [`MlpParams::forward_jet`].
pub fn mlp_forward_jet(params: &MlpParams, x: f64) -> [f64; 5] {
    params.forward_jet(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_layout_has_76_parameters() {
        assert_eq!(parameter_count(&DEFAULT_LAYERS), 76);
        let p = MlpParams::init(&DEFAULT_LAYERS, DEFAULT_SEED).unwrap();
        assert_eq!(p.len(), 76);
        assert_eq!(layers_with_depth(3, 5), DEFAULT_LAYERS.to_vec());
        assert_eq!(parameter_count(&layers_with_depth(1, 5)), 16);
    }

    #[test]
    fn initialization_is_seeded_and_bounded() {
        let a = MlpParams::init(&DEFAULT_LAYERS, 7).unwrap();
        let b = MlpParams::init(&DEFAULT_LAYERS, 7).unwrap();
        let c = MlpParams::init(&DEFAULT_LAYERS, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.params, c.params);
        let limit = (6.0f64 / 6.0).sqrt();
        assert!(a.params[..5].iter().all(|w| w.abs() <= limit));
    }

    #[test]
    fn layout_errors() {
        assert!(MlpParams::init(&[1], 0).is_err());
        assert!(MlpParams::init(&[2, 5, 1], 0).is_err());
        assert!(MlpParams::init(&[1, 0, 1], 0).is_err());
        assert!(MlpParams::from_params(&[1, 2, 1], vec![0.0; 3]).is_err());
    }

    #[test]
    fn zero_network_outputs_zero_jet() {
        let p = MlpParams::from_params(&DEFAULT_LAYERS, vec![0.0; 76]).unwrap();
        assert_eq!(p.forward_jet(0.3), [0.0; 5]);
    }

    #[test]
    fn unit_chain_matches_nested_tanh() {
        // 1-1-1-1-1 with unit weights: u = tanh(tanh(tanh(X)))
        let layers = [1, 1, 1, 1, 1];
        let params = vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let net = MlpParams::from_params(&layers, params).unwrap();
        let u = |x: f64| x.tanh().tanh().tanh();
        let x = 0.6;
        let jet = net.forward_jet(x);
        assert_relative_eq!(jet[0], u(x), max_relative = 1e-15);
        // Richardson-extrapolated central differences
        let h = 1e-2;
        let d = |k: usize, h: f64| -> f64 {
            match k {
                1 => (u(x + h) - u(x - h)) / (2.0 * h),
                2 => (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h),
                3 => (u(x + 2.0 * h) - 2.0 * u(x + h) + 2.0 * u(x - h) - u(x - 2.0 * h)) / (2.0 * h.powi(3)),
                _ => (u(x + 2.0 * h) - 4.0 * u(x + h) + 6.0 * u(x) - 4.0 * u(x - h) + u(x - 2.0 * h)) / h.powi(4),
            }
        };
        for (k, jk) in jet.iter().enumerate().skip(1) {
            let rich = (4.0 * d(k, h / 2.0) - d(k, h)) / 3.0;
            assert_relative_eq!(*jk, rich, max_relative = 1e-5);
        }
    }
}
