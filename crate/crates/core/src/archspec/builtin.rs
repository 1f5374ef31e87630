use std::str::FromStr;

use super::{Block, InputShape, NetworkSpec};
use crate::error::{Error, Result};

/// Named architectures shipped with the tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Three-level encoder/decoder on 8x8 inputs, channels 2-4-8, with skips.
    UnetSmall,
    /// `UnetSmall` with the skip wrappers removed.
    AeSmall,
    /// Small classifier with two residual blocks.
    ResnetSmall,
    /// `ResnetSmall` with the residual wrappers removed.
    ResnetSmallPlain,
    /// `n0`-`ni`-...-`ni`-1 with `k` hidden ReLU layers.
    Mlp { n0: usize, ni: usize, k: usize },
}

impl Builtin {
    pub const NAMED: [&'static str; 4] = [
        "unet_small",
        "ae_small",
        "resnet_small",
        "resnet_small_plain",
    ];

    pub fn spec(self) -> NetworkSpec {
        match self {
            Builtin::UnetSmall => unet_small(),
            Builtin::AeSmall => strip_wrappers(&unet_small(), Wrapper::Skip),
            Builtin::ResnetSmall => resnet_small(),
            Builtin::ResnetSmallPlain => strip_wrappers(&resnet_small(), Wrapper::Residual),
            Builtin::Mlp { n0, ni, k } => mlp(n0, ni, k),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownBuiltin(name.to_string());
        match name {
            "unet_small" => Ok(Builtin::UnetSmall),
            "ae_small" => Ok(Builtin::AeSmall),
            "resnet_small" => Ok(Builtin::ResnetSmall),
            "resnet_small_plain" => Ok(Builtin::ResnetSmallPlain),
            _ => {
                let args = name
                    .strip_prefix("mlp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(unknown)?;
                let nums = args
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                match nums[..] {
                    [n0, ni, k] if n0 > 0 && ni > 0 => Ok(Builtin::Mlp { n0, ni, k }),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

pub fn builtin(name: &str) -> Result<NetworkSpec> {
    Ok(name.parse::<Builtin>()?.spec())
}

pub fn mlp(n0: usize, ni: usize, k: usize) -> NetworkSpec {
    let mut blocks: Vec<Block> = (0..k).map(|_| Block::dense(ni, true)).collect();
    blocks.push(Block::dense(1, false));
    NetworkSpec {
        input: InputShape::Flat { nodes: n0 },
        blocks,
    }
}

fn unet_small() -> NetworkSpec {
    let inner = vec![
        Block::avgpool(2),
        Block::conv_same(8, 3, true),
        Block::conv_same(4, 3, true),
        Block::unpool(2),
    ];
    let outer = vec![
        Block::avgpool(2),
        Block::conv_same(4, 3, true),
        Block::skip(inner),
        Block::conv_same(2, 3, true),
        Block::unpool(2),
    ];
    NetworkSpec {
        input: InputShape::Spatial {
            channels: 1,
            height: 8,
            width: 8,
        },
        blocks: vec![
            Block::conv_same(2, 3, true),
            Block::skip(outer),
            Block::conv_same(1, 3, false),
        ],
    }
}

fn resnet_small() -> NetworkSpec {
    NetworkSpec {
        input: InputShape::Spatial {
            channels: 1,
            height: 8,
            width: 8,
        },
        blocks: vec![
            Block::conv_same(2, 3, true),
            Block::avgpool(2),
            Block::conv_same(4, 3, true),
            Block::residual(vec![Block::conv_same(4, 3, true)]),
            Block::residual(vec![Block::conv_same(4, 3, true)]),
            Block::avgpool(2),
            Block::dense(16, true),
            Block::dense(8, true),
            Block::dense(1, false),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wrapper {
    Skip,
    Residual,
}

/// Replaces every wrapper of the given kind by its body, recursively.
pub fn strip_wrappers(spec: &NetworkSpec, which: Wrapper) -> NetworkSpec {
    fn strip(blocks: &[Block], which: Wrapper) -> Vec<Block> {
        let mut out = Vec::new();
        for block in blocks {
            match (block, which) {
                (Block::Skip(b), Wrapper::Skip) | (Block::Residual(b), Wrapper::Residual) => {
                    out.extend(strip(&b.body, which))
                }
                (Block::Skip(b), _) => out.push(Block::skip(strip(&b.body, which))),
                (Block::Residual(b), _) => out.push(Block::residual(strip(&b.body, which))),
                (other, _) => out.push(other.clone()),
            }
        }
        out
    }
    NetworkSpec {
        input: spec.input,
        blocks: strip(&spec.blocks, which),
    }
}
