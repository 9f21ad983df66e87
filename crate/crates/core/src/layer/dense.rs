use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Identity,
    Relu,
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative at pre-activation `z`, given the output `y`.
    fn slope(self, z: f64, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
        }
    }
}

/// `y = act(W x + b)`, with `W` stored as `out x in`.
///
/// The last `linear_tail` outputs skip the activation, which lets one
/// layer carry values through unchanged next to activated lanes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
    #[serde(default)]
    pub linear_tail: usize,
}

impl Dense {
    pub fn new(weight: Array2<f64>, bias: Array1<f64>, activation: Activation) -> Result<Self> {
        if weight.nrows() != bias.len() {
            return Err(Error::ShapeMismatch(format!(
                "weight has {} rows but bias has {} entries",
                weight.nrows(),
                bias.len()
            )));
        }
        Ok(Self {
            weight,
            bias,
            activation,
            linear_tail: 0,
        })
    }

    pub fn with_linear_tail(mut self, lanes: usize) -> Result<Self> {
        if lanes > self.out_dim() {
            return Err(Error::ShapeMismatch(format!(
                "linear tail of {lanes} lanes on a layer with {} outputs",
                self.out_dim()
            )));
        }
        self.linear_tail = lanes;
        Ok(self)
    }

    /// Uniform weights in `±1/sqrt(in)`, zero bias.
    pub fn random(input: usize, output: usize, activation: Activation, rng: &mut impl Rng) -> Self {
        let s = 1.0 / (input.max(1) as f64).sqrt();
        let weight = Array2::from_shape_fn((output, input), |_| rng.gen_range(-s..s));
        let bias = Array1::from_shape_fn(output, |_| rng.gen_range(-s..s));
        Self {
            weight,
            bias,
            activation,
            linear_tail: 0,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.nrows()
    }

    fn activated_lanes(&self) -> usize {
        self.out_dim() - self.linear_tail
    }

    /// Row-wise forward pass; returns `(pre-activation, output)`.
    fn forward(&self, x: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
        let pre = x.dot(&self.weight.t()) + &self.bias;
        let mut out = pre.clone();
        let act = self.activated_lanes();
        if self.activation != Activation::Identity {
            for mut row in out.rows_mut() {
                for z in row.iter_mut().take(act) {
                    *z = self.activation.apply(*z);
                }
            }
        }
        (pre, out)
    }

    /// Accumulates parameter gradients into `grad` and returns the gradient
    /// with respect to the input rows.
    fn backward(
        &self,
        x: &Array2<f64>,
        pre: &Array2<f64>,
        out: &Array2<f64>,
        mut g: Array2<f64>,
        grad: &mut Dense,
    ) -> Array2<f64> {
        let act = self.activated_lanes();
        if self.activation != Activation::Identity {
            for ((mut gr, zr), yr) in g.rows_mut().into_iter().zip(pre.rows()).zip(out.rows()) {
                for j in 0..act {
                    gr[j] *= self.activation.slope(zr[j], yr[j]);
                }
            }
        }
        grad.weight += &g.t().dot(x);
        grad.bias += &g.sum_axis(Axis(0));
        g.dot(&self.weight)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            weight: Array2::zeros(self.weight.raw_dim()),
            bias: Array1::zeros(self.bias.raw_dim()),
            activation: self.activation,
            linear_tail: self.linear_tail,
        }
    }
}

/// A stack of [`Dense`] layers; no layers means the identity on
/// `input_dim`-wide rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub input_dim: usize,
    pub layers: Vec<Dense>,
}

/// Per-layer values saved by a forward pass for the matching backward.
#[derive(Debug, Clone)]
pub(crate) struct Trace {
    inputs: Vec<Array2<f64>>,
    pres: Vec<Array2<f64>>,
    outs: Vec<Array2<f64>>,
}

impl Mlp {
    pub fn new(input_dim: usize, layers: Vec<Dense>) -> Result<Self> {
        let mut width = input_dim;
        for (i, l) in layers.iter().enumerate() {
            if l.in_dim() != width {
                return Err(Error::ShapeMismatch(format!(
                    "layer {i} expects {} inputs, previous width is {width}",
                    l.in_dim()
                )));
            }
            width = l.out_dim();
        }
        Ok(Self { input_dim, layers })
    }

    pub fn identity(width: usize) -> Self {
        Self {
            input_dim: width,
            layers: Vec::new(),
        }
    }

    pub fn single(layer: Dense) -> Self {
        Self {
            input_dim: layer.in_dim(),
            layers: vec![layer],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.input_dim
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, Dense::out_dim)
    }

    pub fn forward(&self, x: &Array2<f64>) -> Array2<f64> {
        self.forward_trace(x.clone()).0
    }

    pub(crate) fn forward_trace(&self, x: Array2<f64>) -> (Array2<f64>, Trace) {
        let mut trace = Trace {
            inputs: Vec::with_capacity(self.layers.len()),
            pres: Vec::with_capacity(self.layers.len()),
            outs: Vec::with_capacity(self.layers.len()),
        };
        let mut cur = x;
        for l in &self.layers {
            let (pre, out) = l.forward(&cur);
            trace.inputs.push(cur);
            trace.pres.push(pre);
            trace.outs.push(out.clone());
            cur = out;
        }
        (cur, trace)
    }

    pub(crate) fn backward(&self, trace: &Trace, g_out: Array2<f64>, grad: &mut Mlp) -> Array2<f64> {
        let mut g = g_out;
        for i in (0..self.layers.len()).rev() {
            g = self.layers[i].backward(
                &trace.inputs[i],
                &trace.pres[i],
                &trace.outs[i],
                g,
                &mut grad.layers[i],
            );
        }
        g
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            input_dim: self.input_dim,
            layers: self.layers.iter().map(Dense::zeros_like).collect(),
        }
    }
}
