//! One-hidden-layer softmax network trained with Adam.
//!
//! `logits = W2 · relu(W1 · x + b1) + b2`, weights row-major. The first
//! layer walks only the non-zero inputs, which keeps hashed features cheap.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ClassifierError;
use crate::rng::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub output_dim: usize,
    /// hidden_dim x input_dim
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// output_dim x hidden_dim
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// A training example with its non-zero features.
#[derive(Debug, Clone)]
pub struct Sample {
    pub x: Vec<(usize, f64)>,
    pub label: usize,
    pub weight: f64,
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

impl Mlp {
    pub fn zeros(input_dim: usize, hidden_dim: usize, output_dim: usize) -> Self {
        Mlp {
            input_dim,
            hidden_dim,
            output_dim,
            w1: vec![0.0; hidden_dim * input_dim],
            b1: vec![0.0; hidden_dim],
            w2: vec![0.0; output_dim * hidden_dim],
            b2: vec![0.0; output_dim],
        }
    }

    /// He-uniform first layer, Glorot-uniform second layer, zero biases.
    pub fn init(input_dim: usize, hidden_dim: usize, output_dim: usize, seed: u64) -> Self {
        let mut m = Mlp::zeros(input_dim, hidden_dim, output_dim);
        let mut rng = rng_for(seed, 0);
        let a1 = (6.0 / input_dim as f64).sqrt();
        m.w1.iter_mut().for_each(|w| *w = rng.gen_range(-a1..a1));
        let a2 = (6.0 / (hidden_dim + output_dim) as f64).sqrt();
        m.w2.iter_mut().for_each(|w| *w = rng.gen_range(-a2..a2));
        m
    }

    pub fn parameter_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    /// Parameter tensors in a fixed order: w1, b1, w2, b2.
    pub fn tensors_mut(&mut self) -> [&mut Vec<f64>; 4] {
        [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2]
    }

    pub fn tensors(&self) -> [&Vec<f64>; 4] {
        [&self.w1, &self.b1, &self.w2, &self.b2]
    }

    fn hidden(&self, x: &[(usize, f64)]) -> Vec<f64> {
        let mut h = self.b1.clone();
        for (j, hj) in h.iter_mut().enumerate() {
            let row = &self.w1[j * self.input_dim..(j + 1) * self.input_dim];
            for &(i, v) in x {
                *hj += row[i] * v;
            }
        }
        h
    }

    fn logits_from_hidden(&self, h: &[f64]) -> Vec<f64> {
        (0..self.output_dim)
            .map(|k| {
                let row = &self.w2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
                self.b2[k] + row.iter().zip(h).map(|(w, a)| w * a.max(0.0)).sum::<f64>()
            })
            .collect()
    }

    pub fn logits_sparse(&self, x: &[(usize, f64)]) -> Vec<f64> {
        self.logits_from_hidden(&self.hidden(x))
    }

    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        let sparse: Vec<(usize, f64)> = x
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        self.logits_sparse(&sparse)
    }

    pub fn proba(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.logits(x))
    }

    /// Weighted mean cross-entropy over the batch.
    pub fn loss(&self, batch: &[Sample]) -> f64 {
        let total_w: f64 = batch.iter().map(|s| s.weight).sum();
        batch
            .iter()
            .map(|s| {
                let z = self.logits_sparse(&s.x);
                let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                s.weight * (lse - z[s.label])
            })
            .sum::<f64>()
            / total_w
    }

    /// Loss and its gradient with respect to every parameter, packed in an
    /// `Mlp` of the same shape.
    pub fn loss_and_gradient(&self, batch: &[Sample]) -> (f64, Mlp) {
        let mut g = Mlp::zeros(self.input_dim, self.hidden_dim, self.output_dim);
        let total_w: f64 = batch.iter().map(|s| s.weight).sum();
        let mut loss = 0.0;
        for s in batch {
            let pre = self.hidden(&s.x);
            let z = self.logits_from_hidden(&pre);
            let p = softmax(&z);
            loss += s.weight * -p[s.label].ln();
            let scale = s.weight / total_w;
            // dL/dz = p - onehot
            let dz: Vec<f64> = p
                .iter()
                .enumerate()
                .map(|(k, pk)| scale * (pk - f64::from(u8::from(k == s.label))))
                .collect();
            let mut dh = vec![0.0; self.hidden_dim];
            for (k, dzk) in dz.iter().enumerate() {
                g.b2[k] += dzk;
                let row = k * self.hidden_dim;
                for j in 0..self.hidden_dim {
                    g.w2[row + j] += dzk * pre[j].max(0.0);
                    dh[j] += dzk * self.w2[row + j];
                }
            }
            for j in 0..self.hidden_dim {
                if pre[j] <= 0.0 {
                    continue;
                }
                g.b1[j] += dh[j];
                let row = j * self.input_dim;
                for &(i, v) in &s.x {
                    g.w1[row + i] += dh[j] * v;
                }
            }
        }
        (loss / total_w, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub hidden_dim: usize,
    pub seed: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Weight each sample by the inverse frequency of its label.
    pub class_weighting: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 60,
            learning_rate: 1e-3,
            batch_size: 32,
            hidden_dim: 128,
            seed: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            class_weighting: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |m: &str| Err(ClassifierError::Config(m.into()));
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive");
        }
        if self.hidden_dim == 0 {
            return bad("hidden_dim must be positive");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("betas must lie in [0, 1)");
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub network: Mlp,
    /// Mean training loss per epoch.
    pub loss_trace: Vec<f64>,
}

struct Adam {
    m: Mlp,
    v: Mlp,
    t: i32,
}

impl Adam {
    fn step(&mut self, params: &mut Mlp, grad: &Mlp, c: &TrainConfig) {
        self.t += 1;
        let bc1 = 1.0 - c.beta1.powi(self.t);
        let bc2 = 1.0 - c.beta2.powi(self.t);
        let m_t = self.m.tensors_mut();
        let v_t = self.v.tensors_mut();
        let p_t = params.tensors_mut();
        let g_t = grad.tensors();
        for (((p, g), m), v) in p_t.into_iter().zip(g_t).zip(m_t).zip(v_t) {
            for i in 0..p.len() {
                m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
                v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                p[i] -= c.learning_rate * m_hat / (v_hat.sqrt() + c.epsilon);
            }
        }
    }
}

/// Trains a fresh network on dense feature rows. Deterministic in
/// `config.seed`: initialization uses stream 0, epoch `e` shuffles with
/// stream `e + 1`.
pub fn train(
    rows: &[(Vec<f64>, usize)],
    output_dim: usize,
    config: &TrainConfig,
) -> Result<TrainOutcome, ClassifierError> {
    config.validate()?;
    let Some((first, _)) = rows.first() else {
        return Err(ClassifierError::EmptyDataset);
    };
    let input_dim = first.len();
    let mut counts = vec![0usize; output_dim];
    for (x, label) in rows {
        if x.len() != input_dim {
            return Err(ClassifierError::DimensionMismatch {
                expected: input_dim,
                got: x.len(),
            });
        }
        if *label >= output_dim {
            return Err(ClassifierError::LabelOutOfRange {
                label: *label,
                arity: output_dim,
            });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteFeature { index });
        }
        counts[*label] += 1;
    }
    let samples: Vec<Sample> = rows
        .iter()
        .map(|(x, label)| Sample {
            x: x.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
            label: *label,
            weight: if config.class_weighting {
                rows.len() as f64 / (output_dim * counts[*label]) as f64
            } else {
                1.0
            },
        })
        .collect();

    let mut net = Mlp::init(input_dim, config.hidden_dim, output_dim, config.seed);
    let mut adam = Adam {
        m: Mlp::zeros(input_dim, config.hidden_dim, output_dim),
        v: Mlp::zeros(input_dim, config.hidden_dim, output_dim),
        t: 0,
    };
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut loss_trace = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng_for(config.seed, epoch as u64 + 1));
        let mut epoch_loss = 0.0;
        let mut epoch_weight = 0.0;
        for (b, chunk) in order.chunks(config.batch_size).enumerate() {
            let batch: Vec<Sample> = chunk.iter().map(|&i| samples[i].clone()).collect();
            let (loss, grad) = net.loss_and_gradient(&batch);
            if !loss.is_finite() {
                return Err(ClassifierError::NonFiniteLoss { epoch, batch: b });
            }
            let w: f64 = batch.iter().map(|s| s.weight).sum();
            epoch_loss += loss * w;
            epoch_weight += w;
            adam.step(&mut net, &grad, config);
        }
        loss_trace.push(epoch_loss / epoch_weight);
    }
    Ok(TrainOutcome {
        network: net,
        loss_trace,
    })
}
