//! Declarative architecture documents.
//!
//! A document fixes only shapes; weights and biases never appear because the
//! bound holds for every parameter choice. Documents are JSON:
//!
//! ```json
//! { "input": {"channels": 1, "height": 8, "width": 8},
//!   "blocks": [ {"conv": {"out_channels": 2, "kernel": 3, "stride": 1, "padding": 1, "relu": true}},
//!               {"skip": {"body": [ {"avgpool": {"factor": 2}}, {"unpool": {"factor": 2}} ]}},
//!               {"dense": {"out": 1, "relu": false}} ] }
//! ```

mod builtin;
mod resolve;

use serde::{Deserialize, Serialize};

pub use builtin::{builtin, mlp, strip_wrappers, Builtin, Wrapper};
pub use resolve::{resolve, ResolvedStage, Shape, StageKind};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub input: InputShape,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInput", into = "RawInput")]
pub enum InputShape {
    Spatial {
        channels: usize,
        height: usize,
        width: usize,
    },
    Flat {
        nodes: usize,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    #[serde(skip_serializing_if = "Option::is_none")]
    channels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    height: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
}

impl TryFrom<RawInput> for InputShape {
    type Error = String;

    fn try_from(raw: RawInput) -> Result<Self, String> {
        match raw {
            RawInput {
                channels: Some(channels),
                height: Some(height),
                width: Some(width),
                nodes: None,
            } => Ok(InputShape::Spatial {
                channels,
                height,
                width,
            }),
            RawInput {
                channels: None,
                height: None,
                width: None,
                nodes: Some(nodes),
            } => Ok(InputShape::Flat { nodes }),
            _ => Err("input needs either `nodes` or all of `channels`, `height`, `width`".into()),
        }
    }
}

impl From<InputShape> for RawInput {
    fn from(shape: InputShape) -> Self {
        match shape {
            InputShape::Spatial {
                channels,
                height,
                width,
            } => RawInput {
                channels: Some(channels),
                height: Some(height),
                width: Some(width),
                nodes: None,
            },
            InputShape::Flat { nodes } => RawInput {
                channels: None,
                height: None,
                width: None,
                nodes: Some(nodes),
            },
        }
    }
}

impl InputShape {
    pub fn nodes(&self) -> usize {
        match *self {
            InputShape::Spatial {
                channels,
                height,
                width,
            } => channels * height * width,
            InputShape::Flat { nodes } => nodes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Dense(Dense),
    Conv(Conv),
    Avgpool(Factor),
    Unpool(Factor),
    Maxpool(Window),
    Skip(Body),
    Residual(Body),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dense {
    pub out: usize,
    pub relu: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conv {
    pub out_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    pub relu: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub factor: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Body {
    pub body: Vec<Block>,
}

impl Block {
    pub fn dense(out: usize, relu: bool) -> Block {
        Block::Dense(Dense { out, relu })
    }

    /// Size-preserving `kernel x kernel` convolution with stride 1.
    pub fn conv_same(out_channels: usize, kernel: usize, relu: bool) -> Block {
        Block::Conv(Conv {
            out_channels,
            kernel,
            stride: 1,
            padding: kernel / 2,
            relu,
        })
    }

    pub fn avgpool(factor: usize) -> Block {
        Block::Avgpool(Factor { factor })
    }

    pub fn unpool(factor: usize) -> Block {
        Block::Unpool(Factor { factor })
    }

    pub fn maxpool(window: usize) -> Block {
        Block::Maxpool(Window { window })
    }

    pub fn skip(body: Vec<Block>) -> Block {
        Block::Skip(Body { body })
    }

    pub fn residual(body: Vec<Block>) -> Block {
        Block::Residual(Body { body })
    }

    fn validate(&self, path: &str) -> Result<()> {
        let invalid = |message: &str| {
            Err(Error::Document {
                path: path.to_string(),
                message: message.to_string(),
            })
        };
        match self {
            Block::Dense(d) if d.out == 0 => invalid("`out` must be positive"),
            Block::Conv(c) if c.out_channels == 0 => invalid("`out_channels` must be positive"),
            Block::Conv(c) if c.kernel % 2 == 0 => invalid("`kernel` must be odd"),
            Block::Conv(c) if c.stride == 0 => invalid("`stride` must be positive"),
            Block::Avgpool(f) | Block::Unpool(f) if f.factor < 2 => {
                invalid("`factor` must be at least 2")
            }
            Block::Maxpool(w) if w.window < 2 => Err(Error::DegenerateMaxout(w.window * w.window)),
            Block::Skip(b) | Block::Residual(b) => {
                if b.body.is_empty() {
                    return invalid("`body` must not be empty");
                }
                let kind = if matches!(self, Block::Skip(_)) {
                    "skip"
                } else {
                    "residual"
                };
                b.body
                    .iter()
                    .enumerate()
                    .try_for_each(|(i, blk)| blk.validate(&format!("{path}.{kind}.body[{i}]")))
            }
            _ => Ok(()),
        }
    }
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.input.nodes() == 0 {
            return Err(Error::Document {
                path: "input".into(),
                message: "input must have at least one node".into(),
            });
        }
        self.blocks
            .iter()
            .enumerate()
            .try_for_each(|(i, b)| b.validate(&format!("blocks[{i}]")))
    }
}

/// Parses and structurally validates an architecture document.
pub fn parse(text: &str) -> Result<NetworkSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: NetworkSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Document {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn render(spec: &NetworkSpec) -> String {
    serde_json::to_string_pretty(spec).expect("architecture documents always serialize")
}
