//! Fixed-topology MLPs with explicit tapes: `forward` records exactly the
//! intermediates `backward` consumes, so there is no runtime graph capture.

use rand::Rng;

use crate::numerics::tensor::{Scalar, Tensor};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Activation {
    Identity,
    Relu,
    /// `a = sin(omega * z)`. Hidden layers of the deformation field use
    /// omega = 30 with the matching uniform init.
    Sine {
        omega: f64,
    },
}

impl Activation {
    #[inline]
    fn apply<S: Scalar>(self, z: S) -> S {
        match self {
            Activation::Identity => z,
            Activation::Relu => {
                if z > S::ZERO {
                    z
                } else {
                    S::ZERO
                }
            }
            Activation::Sine { omega } => (z * S::from_f64(omega)).sin(),
        }
    }

    /// Derivative d a / d z evaluated from the pre-activation z.
    #[inline]
    fn deriv<S: Scalar>(self, z: S) -> S {
        match self {
            Activation::Identity => S::ONE,
            Activation::Relu => {
                if z > S::ZERO {
                    S::ONE
                } else {
                    S::ZERO
                }
            }
            Activation::Sine { omega } => {
                let w = S::from_f64(omega);
                (z * w).cos() * w
            }
        }
    }
}

/// One affine layer. Weight is stored as (fan_in, fan_out) so a row-major
/// batch multiplies it directly.
#[derive(Clone, Debug)]
pub struct Layer<S: Scalar> {
    pub weight: Tensor<S>,
    pub bias: Tensor<S>,
    pub act: Activation,
}

impl<S: Scalar> Layer<S> {
    pub fn fan_in(&self) -> usize {
        self.weight.shape()[0]
    }

    pub fn fan_out(&self) -> usize {
        self.weight.shape()[1]
    }

    /// Uniform init in ±limit for both weight and bias.
    pub fn uniform(
        fan_in: usize,
        fan_out: usize,
        act: Activation,
        limit: f64,
        rng: &mut impl Rng,
    ) -> Self {
        let mut w = Tensor::zeros(&[fan_in, fan_out]);
        for v in w.data_mut() {
            *v = S::from_f64(rng.gen_range(-limit..limit));
        }
        let mut b = Tensor::zeros(&[fan_out]);
        for v in b.data_mut() {
            *v = S::from_f64(rng.gen_range(-limit..limit));
        }
        Layer {
            weight: w,
            bias: b,
            act,
        }
    }

    /// First sine layer: ±1/fan_in keeps the initial spatial frequencies low.
    pub fn sine_first(fan_in: usize, fan_out: usize, omega: f64, rng: &mut impl Rng) -> Self {
        Layer::uniform(
            fan_in,
            fan_out,
            Activation::Sine { omega },
            1.0 / fan_in as f64,
            rng,
        )
    }

    /// Hidden sine layer: ±sqrt(6/fan_in)/omega preserves activation spread
    /// through depth.
    pub fn sine_hidden(fan_in: usize, fan_out: usize, omega: f64, rng: &mut impl Rng) -> Self {
        Layer::uniform(
            fan_in,
            fan_out,
            Activation::Sine { omega },
            (6.0 / fan_in as f64).sqrt() / omega,
            rng,
        )
    }

    /// He-style uniform init for relu / identity layers.
    pub fn dense(fan_in: usize, fan_out: usize, act: Activation, rng: &mut impl Rng) -> Self {
        Layer::uniform(fan_in, fan_out, act, (6.0 / fan_in as f64).sqrt(), rng)
    }

    fn affine(&self, input: &Tensor<S>) -> Tensor<S> {
        let mut z = input.matmul(&self.weight);
        let bias = self.bias.data();
        for i in 0..z.rows() {
            let row = z.row_mut(i);
            for (j, &b) in bias.iter().enumerate() {
                row[j] += b;
            }
        }
        z
    }
}

/// Stack of layers with validated chaining.
#[derive(Clone, Debug)]
pub struct Mlp<S: Scalar> {
    layers: Vec<Layer<S>>,
}

/// Intermediates recorded by a forward pass: each layer's input and
/// pre-activation, in layer order.
#[derive(Clone, Debug)]
pub struct MlpTape<S: Scalar> {
    pub inputs: Vec<Tensor<S>>,
    pub zs: Vec<Tensor<S>>,
}

/// Parameter and input gradients from one backward pass.
#[derive(Clone, Debug)]
pub struct MlpGrads<S: Scalar> {
    pub dw: Vec<Tensor<S>>,
    pub db: Vec<Tensor<S>>,
    pub dinput: Tensor<S>,
}

impl<S: Scalar> Mlp<S> {
    pub fn new(layers: Vec<Layer<S>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArg("Mlp requires at least one layer".into()));
        }
        for l in 1..layers.len() {
            let expected = layers[l - 1].fan_out();
            let got = layers[l].fan_in();
            if expected != got {
                return Err(Error::LayerDim {
                    layer: l,
                    expected,
                    got,
                });
            }
        }
        Ok(Mlp { layers })
    }

    /// Sine-activated trunk (`dims[0] -> ... -> dims.last()`), identity final
    /// layer, with the init scheme matched to the activation.
    pub fn siren(dims: &[usize], omega: f64, rng: &mut impl Rng) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidArg("siren needs >= 2 dims".into()));
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for l in 0..dims.len() - 1 {
            let (fi, fo) = (dims[l], dims[l + 1]);
            let layer = if l == 0 {
                Layer::sine_first(fi, fo, omega, rng)
            } else if l == dims.len() - 2 {
                // Identity output head; small init keeps early outputs near 0.
                Layer::uniform(
                    fi,
                    fo,
                    Activation::Identity,
                    (6.0 / fi as f64).sqrt() / omega,
                    rng,
                )
            } else {
                Layer::sine_hidden(fi, fo, omega, rng)
            };
            layers.push(layer);
        }
        Mlp::new(layers)
    }

    /// Relu trunk with an identity output head.
    pub fn relu(dims: &[usize], rng: &mut impl Rng) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidArg("relu mlp needs >= 2 dims".into()));
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for l in 0..dims.len() - 1 {
            let act = if l == dims.len() - 2 {
                Activation::Identity
            } else {
                Activation::Relu
            };
            layers.push(Layer::dense(dims[l], dims[l + 1], act, rng));
        }
        Mlp::new(layers)
    }

    pub fn layers(&self) -> &[Layer<S>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer<S>] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().fan_out()
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weight.len() + l.bias.len())
            .sum()
    }

    /// Forward pass over a (batch, input_dim) tensor, recording a tape.
    pub fn forward(&self, input: &Tensor<S>) -> Result<(Tensor<S>, MlpTape<S>)> {
        self.check_input(input)?;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut zs = Vec::with_capacity(self.layers.len());
        let mut x = input.clone();
        for layer in &self.layers {
            let z = layer.affine(&x);
            let a = z.map(|v| layer.act.apply(v));
            inputs.push(x);
            zs.push(z);
            x = a;
        }
        if !x.is_all_finite() {
            return Err(Error::NonFinite {
                context: "mlp forward output".into(),
            });
        }
        Ok((x, MlpTape { inputs, zs }))
    }

    /// Forward without a tape, for inference paths.
    pub fn infer(&self, input: &Tensor<S>) -> Result<Tensor<S>> {
        self.check_input(input)?;
        let mut x = input.clone();
        for layer in &self.layers {
            let z = layer.affine(&x);
            x = z.map(|v| layer.act.apply(v));
        }
        if !x.is_all_finite() {
            return Err(Error::NonFinite {
                context: "mlp infer output".into(),
            });
        }
        Ok(x)
    }

    /// Backward pass. `upstream` is dLoss/dOutput with the output's shape;
    /// returns per-layer weight/bias gradients plus the input gradient.
    pub fn backward(&self, tape: &MlpTape<S>, upstream: &Tensor<S>) -> Result<MlpGrads<S>> {
        let n = self.layers.len();
        assert_eq!(tape.zs.len(), n, "tape does not match this mlp");
        let out_z = &tape.zs[n - 1];
        if upstream.shape() != out_z.shape() {
            return Err(Error::Shape {
                context: "mlp backward upstream".into(),
                expected: out_z.shape().to_vec(),
                got: upstream.shape().to_vec(),
            });
        }
        let mut dw = Vec::with_capacity(n);
        let mut db = Vec::with_capacity(n);
        let mut g = upstream.clone();
        for l in (0..n).rev() {
            let layer = &self.layers[l];
            let z = &tape.zs[l];
            let mut dz = g;
            for (gv, &zv) in dz.data_mut().iter_mut().zip(z.data().iter()) {
                *gv *= layer.act.deriv(zv);
            }
            dw.push(tape.inputs[l].matmul_tn(&dz));
            db.push(dz.col_sum());
            g = dz.matmul_nt(&layer.weight);
        }
        dw.reverse();
        db.reverse();
        if !g.is_all_finite() {
            return Err(Error::NonFinite {
                context: "mlp backward input gradient".into(),
            });
        }
        Ok(MlpGrads {
            dw,
            db,
            dinput: g,
        })
    }

    fn check_input(&self, input: &Tensor<S>) -> Result<()> {
        let expected = self.input_dim();
        let got = *input.shape().last().unwrap_or(&0);
        if input.rank() != 2 || got != expected {
            return Err(Error::LayerDim {
                layer: 0,
                expected,
                got,
            });
        }
        Ok(())
    }
}
