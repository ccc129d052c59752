//! Fully connected tanh network mapping (t, zeta) to (s_R, s_I), with
//! exact input derivatives and exact parameter gradients.
//!
//! Input derivatives come from truncated Taylor-coefficient propagation
//! through every layer: each scalar carries (value, three t coefficients,
//! one zeta coefficient). That makes the third time derivative exact for
//! the network function rather than a stencil approximation, so stencil
//! error never enters the residual loss. Parameter gradients are
//! reverse-mode through the same jet arithmetic; finite differences are
//! used only as a test oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree-3 Taylor jet in t combined with a degree-1 jet in zeta.
/// `t1..t3` are Taylor coefficients (derivative / k!), not derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub z1: f64,
}

impl Jet {
    fn constant(v: f64) -> Self {
        Jet { v, ..Default::default() }
    }

    #[inline]
    fn scale_add(&mut self, w: f64, x: &Jet) {
        self.v += w * x.v;
        self.t1 += w * x.t1;
        self.t2 += w * x.t2;
        self.t3 += w * x.t3;
        self.z1 += w * x.z1;
    }
}

/// Degree-4 tanh derivatives at a point, shared by the forward jet rule
/// and its reverse-mode transpose.
#[inline]
fn tanh_derivs(x: f64) -> [f64; 5] {
    let f0 = x.tanh();
    let f1 = 1.0 - f0 * f0;
    let f2 = -2.0 * f0 * f1;
    let f3 = -2.0 * (f1 * f1 + f0 * f2);
    let f4 = -2.0 * (3.0 * f1 * f2 + f0 * f3);
    [f0, f1, f2, f3, f4]
}

/// Composition of tanh with a jet (Faà di Bruno on Taylor coefficients).
#[inline]
fn tanh_jet(u: &Jet) -> Jet {
    let [f0, f1, f2, f3, _] = tanh_derivs(u.v);
    Jet {
        v: f0,
        t1: f1 * u.t1,
        t2: f1 * u.t2 + 0.5 * f2 * u.t1 * u.t1,
        t3: f1 * u.t3 + f2 * u.t1 * u.t2 + f3 * u.t1 * u.t1 * u.t1 / 6.0,
        z1: f1 * u.z1,
    }
}

/// Transpose of the tanh jet rule: converts an adjoint on the activation
/// jet into an adjoint on the pre-activation jet.
#[inline]
fn tanh_jet_backward(u: &Jet, ybar: &Jet) -> Jet {
    let [_, f1, f2, f3, f4] = tanh_derivs(u.v);
    let q2 = f2 * u.t2 + 0.5 * f3 * u.t1 * u.t1;
    let q3 = f2 * u.t3 + f3 * u.t1 * u.t2 + f4 * u.t1 * u.t1 * u.t1 / 6.0;
    Jet {
        v: f1 * ybar.v + f2 * u.t1 * ybar.t1 + q2 * ybar.t2 + q3 * ybar.t3 + f2 * u.z1 * ybar.z1,
        t1: f1 * ybar.t1 + f2 * u.t1 * ybar.t2 + q2 * ybar.t3,
        t2: f1 * ybar.t2 + f2 * u.t1 * ybar.t3,
        t3: f1 * ybar.t3,
        z1: f1 * ybar.z1,
    }
}

/// Network output and its input derivatives at one point. Entries are
/// (real, imaginary) pairs; derivative entries are true derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DerivativeBundle {
    pub value: (f64, f64),
    pub d_zeta: (f64, f64),
    pub d_t: (f64, f64),
    pub d_tt: (f64, f64),
    pub d_ttt: (f64, f64),
}

impl DerivativeBundle {
    pub fn is_finite(&self) -> bool {
        let all = [self.value, self.d_zeta, self.d_t, self.d_tt, self.d_ttt];
        all.iter().all(|(r, i)| r.is_finite() && i.is_finite())
    }

    /// Weighted accumulate: self += c * other. Linear combinations of
    /// networks have linear combinations of derivatives.
    pub fn scale_add(&mut self, c: f64, other: &DerivativeBundle) {
        let pairs = [
            (&mut self.value, other.value),
            (&mut self.d_zeta, other.d_zeta),
            (&mut self.d_t, other.d_t),
            (&mut self.d_tt, other.d_tt),
            (&mut self.d_ttt, other.d_ttt),
        ];
        for (dst, src) in pairs {
            dst.0 += c * src.0;
            dst.1 += c * src.1;
        }
    }

    fn from_jets(re: &Jet, im: &Jet) -> Self {
        DerivativeBundle {
            value: (re.v, im.v),
            d_zeta: (re.z1, im.z1),
            d_t: (re.t1, im.t1),
            d_tt: (2.0 * re.t2, 2.0 * im.t2),
            d_ttt: (6.0 * re.t3, 6.0 * im.t3),
        }
    }

    /// Adjoint conversion back to jet coefficients (d_tt = 2 t2 etc.).
    fn to_jet_adjoints(&self) -> (Jet, Jet) {
        let re = Jet {
            v: self.value.0,
            t1: self.d_t.0,
            t2: 2.0 * self.d_tt.0,
            t3: 6.0 * self.d_ttt.0,
            z1: self.d_zeta.0,
        };
        let im = Jet {
            v: self.value.1,
            t1: self.d_t.1,
            t2: 2.0 * self.d_tt.1,
            t3: 6.0 * self.d_ttt.1,
            z1: self.d_zeta.1,
        };
        (re, im)
    }
}

/// Weights and biases of the fixed-architecture network, stored flat:
/// per layer, the (n_out x n_in) weight matrix row-major, then biases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub layer_sizes: Vec<usize>,
    pub seed: u64,
    pub values: Vec<f64>,
}

pub fn param_count(layer_sizes: &[usize]) -> usize {
    layer_sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

fn validate_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidArchitecture(format!(
            "need at least input and output layers, got {layer_sizes:?}"
        )));
    }
    if layer_sizes[0] != 2 || *layer_sizes.last().unwrap() != 2 {
        return Err(Error::InvalidArchitecture(format!(
            "inputs are (t, zeta) and outputs (s_R, s_I); sizes must start and end with 2, got {layer_sizes:?}"
        )));
    }
    if layer_sizes.iter().any(|&n| n == 0) {
        return Err(Error::InvalidArchitecture("zero-width layer".to_string()));
    }
    Ok(())
}

/// Deterministic Xavier-uniform initialization (biases zero).
pub fn init_network(layer_sizes: &[usize], seed: u64) -> Result<NetworkParams> {
    validate_sizes(layer_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(param_count(layer_sizes));
    for w in layer_sizes.windows(2) {
        let (n_in, n_out) = (w[0], w[1]);
        let bound = (6.0 / (n_in + n_out) as f64).sqrt();
        for _ in 0..n_in * n_out {
            values.push((rng.gen::<f64>() * 2.0 - 1.0) * bound);
        }
        values.extend(std::iter::repeat(0.0).take(n_out));
    }
    Ok(NetworkParams { layer_sizes: layer_sizes.to_vec(), seed, values })
}

/// Reverse-pass record for one evaluation point.
pub struct JetTape {
    /// acts[0] is the input pair; acts[l+1] holds hidden layer l's
    /// activations.
    acts: Vec<Vec<Jet>>,
    /// Pre-activation jets per hidden layer.
    preacts: Vec<Vec<Jet>>,
}

impl NetworkParams {
    pub fn n_params(&self) -> usize {
        self.values.len()
    }

    fn n_affine(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    /// Plain forward pass, values only.
    pub fn forward(&self, t: f64, zeta: f64) -> (f64, f64) {
        let mut cur = vec![t, zeta];
        let mut off = 0;
        for l in 0..self.n_affine() {
            let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let mut next = vec![0.0; n_out];
            for (j, nj) in next.iter_mut().enumerate() {
                let mut acc = self.values[off + n_out * n_in + j];
                let row = &self.values[off + j * n_in..off + (j + 1) * n_in];
                for (wi, xi) in row.iter().zip(&cur) {
                    acc += wi * xi;
                }
                *nj = if l + 1 < self.n_affine() { acc.tanh() } else { acc };
            }
            off += n_out * n_in + n_out;
            cur = next;
        }
        (cur[0], cur[1])
    }

    /// Forward pass carrying Taylor jets; returns the derivative bundle
    /// and the tape needed for the reverse pass.
    pub fn forward_jet(&self, t: f64, zeta: f64) -> (DerivativeBundle, JetTape) {
        let input = vec![
            Jet { v: t, t1: 1.0, ..Default::default() },
            Jet { v: zeta, z1: 1.0, ..Default::default() },
        ];
        let mut acts = vec![input];
        let mut preacts = Vec::with_capacity(self.n_affine().saturating_sub(1));
        let mut off = 0;
        for l in 0..self.n_affine() {
            let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let cur = acts.last().unwrap();
            let mut pre = vec![Jet::default(); n_out];
            for (j, pj) in pre.iter_mut().enumerate() {
                *pj = Jet::constant(self.values[off + n_out * n_in + j]);
                let row = &self.values[off + j * n_in..off + (j + 1) * n_in];
                for (wi, xi) in row.iter().zip(cur) {
                    pj.scale_add(*wi, xi);
                }
            }
            off += n_out * n_in + n_out;
            if l + 1 < self.n_affine() {
                let act: Vec<Jet> = pre.iter().map(tanh_jet).collect();
                preacts.push(pre);
                acts.push(act);
            } else {
                let bundle = DerivativeBundle::from_jets(&pre[0], &pre[1]);
                return (bundle, JetTape { acts, preacts });
            }
        }
        unreachable!("network has at least one affine layer");
    }

    /// Exact input derivatives at one point.
    pub fn input_derivatives(&self, t: f64, zeta: f64) -> DerivativeBundle {
        self.forward_jet(t, zeta).0
    }

    /// Reverse pass for one point: accumulates d(loss)/d(params) into
    /// `grad`, given d(loss)/d(bundle entries).
    pub fn backward(&self, tape: &JetTape, adjoint: &DerivativeBundle, grad: &mut [f64]) {
        debug_assert_eq!(grad.len(), self.n_params());
        let (re_bar, im_bar) = adjoint.to_jet_adjoints();
        let mut out_bar = vec![re_bar, im_bar];

        // Layer parameter offsets.
        let mut offsets = Vec::with_capacity(self.n_affine());
        let mut off = 0;
        for l in 0..self.n_affine() {
            offsets.push(off);
            off += self.layer_sizes[l] * self.layer_sizes[l + 1] + self.layer_sizes[l + 1];
        }

        for l in (0..self.n_affine()).rev() {
            let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let off = offsets[l];
            // Hidden layers: adjoint passes through the activation first.
            let pre_bar: Vec<Jet> = if l + 1 < self.n_affine() {
                out_bar
                    .iter()
                    .zip(&tape.preacts[l])
                    .map(|(yb, u)| tanh_jet_backward(u, yb))
                    .collect()
            } else {
                out_bar.clone()
            };
            let inputs = &tape.acts[l];
            // Weight and bias gradients.
            for (j, zb) in pre_bar.iter().enumerate() {
                grad[off + n_out * n_in + j] += zb.v;
                let wrow = off + j * n_in;
                for (i, xi) in inputs.iter().enumerate() {
                    grad[wrow + i] +=
                        zb.v * xi.v + zb.t1 * xi.t1 + zb.t2 * xi.t2 + zb.t3 * xi.t3 + zb.z1 * xi.z1;
                }
            }
            // Input adjoints for the next (earlier) layer.
            if l > 0 {
                let mut in_bar = vec![Jet::default(); n_in];
                for (j, zb) in pre_bar.iter().enumerate() {
                    let row = &self.values[off + j * n_in..off + (j + 1) * n_in];
                    for (ib, wi) in in_bar.iter_mut().zip(row) {
                        ib.scale_add(*wi, zb);
                    }
                }
                out_bar = in_bar;
            }
        }
    }
}

/// Scalar loss with exact gradient: the evaluator sees the bundles at
/// its points and reports the loss plus its partial derivatives with
/// respect to every bundle entry; the reverse pass does the rest.
pub trait BundleLoss {
    fn points(&self) -> &[(f64, f64)];
    fn loss_and_adjoints(&self, bundles: &[DerivativeBundle]) -> (f64, Vec<DerivativeBundle>);
}

/// Evaluates a bundle-composed scalar loss and its exact parameter
/// gradient.
pub fn loss_gradient(params: &NetworkParams, loss: &dyn BundleLoss) -> Result<(f64, Vec<f64>)> {
    let points = loss.points();
    let mut bundles = Vec::with_capacity(points.len());
    let mut tapes = Vec::with_capacity(points.len());
    for &(t, zeta) in points {
        let (b, tape) = params.forward_jet(t, zeta);
        bundles.push(b);
        tapes.push(tape);
    }
    let (value, adjoints) = loss.loss_and_adjoints(&bundles);
    if !value.is_finite() {
        return Err(Error::Divergence { context: "loss evaluation".to_string() });
    }
    let mut grad = vec![0.0; params.n_params()];
    for (tape, adj) in tapes.iter().zip(&adjoints) {
        params.backward(tape, adj, &mut grad);
    }
    Ok((value, grad))
}
