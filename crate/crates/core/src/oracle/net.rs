use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archspec::{Block, InputShape, NetworkSpec};
use crate::error::{Error, Result};

/// One affine layer: `weights` is `out x in`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub weights: Vec<Vec<BigRational>>,
    pub biases: Vec<BigRational>,
}

impl Layer {
    pub fn width(&self) -> usize {
        self.biases.len()
    }

    pub fn affine(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(row, b)| {
                row.iter()
                    .zip(x)
                    .fold(b.clone(), |acc, (w, xi)| acc + w * xi)
            })
            .collect()
    }
}

/// A network with concrete rational parameters. Every layer but the last is
/// followed by a ReLU; the last layer is linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteNet {
    n0: usize,
    layers: Vec<Layer>,
}

impl ConcreteNet {
    pub fn new(n0: usize, layers: Vec<Layer>) -> Result<ConcreteNet> {
        if n0 == 0 {
            return Err(Error::Network("input dimension must be positive".into()));
        }
        if layers.is_empty() {
            return Err(Error::Network("at least one layer is required".into()));
        }
        let mut width = n0;
        for (i, layer) in layers.iter().enumerate() {
            if layer.width() == 0 {
                return Err(Error::Network(format!("layer {i} has no units")));
            }
            if layer.weights.len() != layer.width() {
                return Err(Error::Network(format!(
                    "layer {i}: {} weight rows but {} biases",
                    layer.weights.len(),
                    layer.width()
                )));
            }
            if let Some(j) = layer.weights.iter().position(|r| r.len() != width) {
                return Err(Error::Network(format!(
                    "layer {i}: row {j} has {} weights, expected {width}",
                    layer.weights[j].len()
                )));
            }
            width = layer.width();
        }
        Ok(ConcreteNet { n0, layers })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Output width of every layer.
    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::width).collect()
    }

    pub fn hidden_units(&self) -> usize {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(Layer::width)
            .sum()
    }

    /// The shape-only description of this network, for computing its bound.
    pub fn architecture(&self) -> NetworkSpec {
        let last = self.layers.len() - 1;
        NetworkSpec {
            input: InputShape::Flat { nodes: self.n0 },
            blocks: self
                .layers
                .iter()
                .enumerate()
                .map(|(i, l)| Block::dense(l.width(), i < last))
                .collect(),
        }
    }

    /// Output and the full activation pattern (`true` = strictly positive).
    pub fn forward(&self, x: &[BigRational]) -> (Vec<BigRational>, Vec<bool>) {
        assert_eq!(x.len(), self.n0, "input has the wrong dimension");
        let mut pattern = Vec::with_capacity(self.hidden_units());
        let mut h = x.to_vec();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = layer.affine(&h);
            if i < last {
                for zj in z.iter_mut() {
                    let on = zj.is_positive();
                    pattern.push(on);
                    if !on {
                        *zj = BigRational::zero();
                    }
                }
            }
            h = z;
        }
        (h, pattern)
    }

    /// `x -> f(scale * x)`: rescales the input line.
    pub fn with_input_scaled(&self, scale: &BigRational) -> ConcreteNet {
        let mut layers = self.layers.clone();
        for row in layers[0].weights.iter_mut() {
            for w in row.iter_mut() {
                *w = &*w * scale;
            }
        }
        ConcreteNet {
            n0: self.n0,
            layers,
        }
    }

    pub fn from_json(text: &str) -> Result<ConcreteNet> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawNet = serde_path_to_error::deserialize(de).map_err(|e| Error::Document {
            path: e.path().to_string(),
            message: e.into_inner().to_string(),
        })?;
        let layers = raw
            .layers
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                let weights = l
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(j, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(k, v)| v.parse(&format!("layers[{i}].weights[{j}][{k}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let biases = l
                    .biases
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v.parse(&format!("layers[{i}].biases[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Layer { weights, biases })
            })
            .collect::<Result<Vec<_>>>()?;
        ConcreteNet::new(raw.input, layers)
    }

    pub fn to_json(&self) -> String {
        let text = |q: &BigRational| RawNumber::Text(q.to_string());
        let raw = RawNet {
            input: self.n0,
            layers: self
                .layers
                .iter()
                .map(|l| RawLayer {
                    weights: l
                        .weights
                        .iter()
                        .map(|r| r.iter().map(text).collect())
                        .collect(),
                    biases: l.biases.iter().map(text).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("nets always serialize")
    }
}

impl fmt::Display for ConcreteNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n0)?;
        for w in self.widths() {
            write!(f, "-{w}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNet {
    input: usize,
    layers: Vec<RawLayer>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    weights: Vec<Vec<RawNumber>>,
    biases: Vec<RawNumber>,
}

/// `"3/7"`, `"-2"` or a bare JSON integer.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Text(String),
}

impl RawNumber {
    fn parse(&self, path: &str) -> Result<BigRational> {
        match self {
            RawNumber::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
            RawNumber::Text(s) => parse_rational(s).map_err(|message| Error::Document {
                path: path.to_string(),
                message,
            }),
        }
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let t = s.trim();
    if let Some((_, d)) = t.split_once('/') {
        if d.trim().parse::<BigInt>().is_ok_and(|d| d.is_zero()) {
            return Err(format!("`{s}` has a zero denominator"));
        }
    }
    BigRational::from_str(t).map_err(|_| format!("`{s}` is not a rational number"))
}

/// Random net with small rational parameters (numerators in [-6, 6], denominators 1..=4).
pub fn random_net(seed: u64, n0: usize, hidden: &[usize]) -> ConcreteNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = move || {
        BigRational::new(
            BigInt::from(rng.gen_range(-6i64..=6)),
            BigInt::from(rng.gen_range(1i64..=4)),
        )
    };
    let mut layers = Vec::with_capacity(hidden.len() + 1);
    let mut width = n0;
    for &out in hidden.iter().chain(std::iter::once(&1)) {
        layers.push(Layer {
            weights: (0..out)
                .map(|_| (0..width).map(|_| q()).collect())
                .collect(),
            biases: (0..out).map(|_| q()).collect(),
        });
        width = out;
    }
    ConcreteNet::new(n0, layers).expect("random shapes chain")
}
