use std::fmt;

use super::{Block, InputShape, NetworkSpec};
use crate::error::{Error, Result};

/// Tensor shape threaded through resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Spatial { c: usize, h: usize, w: usize },
    Flat(usize),
}

impl Shape {
    pub fn nodes(&self) -> usize {
        match *self {
            Shape::Spatial { c, h, w } => c * h * w,
            Shape::Flat(n) => n,
        }
    }
}

impl From<InputShape> for Shape {
    fn from(input: InputShape) -> Self {
        match input {
            InputShape::Spatial {
                channels,
                height,
                width,
            } => Shape::Spatial {
                c: channels,
                h: height,
                w: width,
            },
            InputShape::Flat { nodes } => Shape::Flat(nodes),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Spatial { c, h, w } => write!(f, "({c},{h},{w})"),
            Shape::Flat(n) => write!(f, "({n})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageKind {
    Dense,
    /// A convolution lowered to a dense layer.
    Conv,
    AvgPool,
    Unpool,
    /// Max-pooling as a maxout layer of rank `k` (window area).
    MaxPool {
        k: usize,
    },
    Skip,
    Residual,
}

/// One stage with concrete node counts.
///
/// For skip stages `n_out` is the width after concatenation,
/// `n_in + body n_out`; residual stages have `n_out == n_in`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedStage {
    pub kind: StageKind,
    pub n_in: usize,
    pub n_out: usize,
    /// Rank of the linear map, at most `min(n_in, n_out)`.
    pub rank: usize,
    pub relu: bool,
    pub body: Vec<ResolvedStage>,
}

impl ResolvedStage {
    pub fn label(&self) -> String {
        let name = match self.kind {
            StageKind::Dense => "dense".to_string(),
            StageKind::Conv => "conv".to_string(),
            StageKind::AvgPool => "avgpool".to_string(),
            StageKind::Unpool => "unpool".to_string(),
            StageKind::MaxPool { k } => format!("maxpool(k={k})"),
            StageKind::Skip => format!("skip[{}]", self.body.len()),
            StageKind::Residual => format!("residual[{}]", self.body.len()),
        };
        let relu = if self.relu { " relu" } else { "" };
        format!("{name} {}->{}{relu}", self.n_in, self.n_out)
    }

    /// Output width of the wrapped body (skip/residual only).
    pub fn body_out(&self) -> usize {
        self.body.last().map_or(self.n_in, |s| s.n_out)
    }
}

/// Lowers every block to a stage with concrete widths. Convolutions become
/// dense stages over the flattened tensors.
pub fn resolve(spec: &NetworkSpec) -> Result<Vec<ResolvedStage>> {
    spec.validate()?;
    let (stages, _) = resolve_blocks(&spec.blocks, spec.input.into())?;
    Ok(stages)
}

fn resolve_blocks(blocks: &[Block], mut shape: Shape) -> Result<(Vec<ResolvedStage>, Shape)> {
    let mut stages = Vec::with_capacity(blocks.len());
    for block in blocks {
        let (stage, next) = resolve_block(block, shape)?;
        stages.push(stage);
        shape = next;
    }
    Ok((stages, shape))
}

fn downsample(shape: Shape, f: usize, what: &str) -> Result<Shape> {
    match shape {
        Shape::Spatial { c, h, w } if h % f == 0 && w % f == 0 => Ok(Shape::Spatial {
            c,
            h: h / f,
            w: w / f,
        }),
        Shape::Flat(n) if n % (f * f) == 0 => Ok(Shape::Flat(n / (f * f))),
        _ => Err(Error::Architecture(format!(
            "{what} factor {f} does not divide shape {shape}"
        ))),
    }
}

fn resolve_block(block: &Block, shape: Shape) -> Result<(ResolvedStage, Shape)> {
    let n_in = shape.nodes();
    let stage = |kind, out: Shape, rank, relu| ResolvedStage {
        kind,
        n_in,
        n_out: out.nodes(),
        rank,
        relu,
        body: Vec::new(),
    };
    match block {
        Block::Dense(d) => {
            let out = Shape::Flat(d.out);
            Ok((stage(StageKind::Dense, out, n_in.min(d.out), d.relu), out))
        }
        Block::Conv(conv) => {
            let Shape::Spatial { h, w, .. } = shape else {
                return Err(Error::Architecture(format!(
                    "conv needs a (channels, height, width) input, got {shape}"
                )));
            };
            let span = |x: usize| -> Result<usize> {
                let padded = x + 2 * conv.padding;
                if padded < conv.kernel {
                    return Err(Error::Architecture(format!(
                        "conv kernel {} larger than padded input {padded}",
                        conv.kernel
                    )));
                }
                Ok((padded - conv.kernel) / conv.stride + 1)
            };
            let out = Shape::Spatial {
                c: conv.out_channels,
                h: span(h)?,
                w: span(w)?,
            };
            let rank = n_in.min(out.nodes());
            Ok((stage(StageKind::Conv, out, rank, conv.relu), out))
        }
        Block::Avgpool(f) => {
            let out = downsample(shape, f.factor, "avgpool")?;
            Ok((stage(StageKind::AvgPool, out, out.nodes(), false), out))
        }
        Block::Unpool(f) => {
            let out = match shape {
                Shape::Spatial { c, h, w } => Shape::Spatial {
                    c,
                    h: h * f.factor,
                    w: w * f.factor,
                },
                Shape::Flat(n) => Shape::Flat(n * f.factor * f.factor),
            };
            Ok((stage(StageKind::Unpool, out, n_in, false), out))
        }
        Block::Maxpool(m) => {
            let out = downsample(shape, m.window, "maxpool")?;
            let k = m.window * m.window;
            Ok((
                stage(StageKind::MaxPool { k }, out, out.nodes(), false),
                out,
            ))
        }
        Block::Skip(b) => {
            let (body, body_shape) = resolve_blocks(&b.body, shape)?;
            let out = match (shape, body_shape) {
                (
                    Shape::Spatial { c, h, w },
                    Shape::Spatial {
                        c: c2,
                        h: h2,
                        w: w2,
                    },
                ) => {
                    if (h, w) != (h2, w2) {
                        return Err(Error::Architecture(format!(
                            "skip body changes spatial size {shape} -> {body_shape}; cannot concatenate"
                        )));
                    }
                    Shape::Spatial { c: c + c2, h, w }
                }
                (a, b) => Shape::Flat(a.nodes() + b.nodes()),
            };
            let mut s = stage(StageKind::Skip, out, n_in, false);
            s.body = body;
            Ok((s, out))
        }
        Block::Residual(b) => {
            let (body, body_shape) = resolve_blocks(&b.body, shape)?;
            let same = match (shape, body_shape) {
                (Shape::Spatial { .. }, Shape::Spatial { .. }) => shape == body_shape,
                _ => shape.nodes() == body_shape.nodes(),
            };
            if !same {
                return Err(Error::Architecture(format!(
                    "residual body maps {shape} to {body_shape}; dimensions must match"
                )));
            }
            let mut s = stage(StageKind::Residual, shape, n_in, false);
            s.body = body;
            Ok((s, shape))
        }
    }
}
