//! Bound evaluation over a resolved stage sequence.
//!
//! Starting from `e^{n0}`, every stage contributes one or more transforms:
//!
//! | stage              | transforms (applied left to right)            |
//! |--------------------|-----------------------------------------------|
//! | dense/conv + ReLU  | `M_{d,n}`, `B_n`                              |
//! | linear (pool, ...) | `M_{d,k}`, `M_{k,n}` with `k = min(d, rank, n)` |
//! | maxpool            | maxout diagonal, `M_{d,n}`                    |
//! | skip / residual    | column-norm diagonal of the body's product    |
//!
//! `d` is the ambient width; a skip widens it by the body's output width.
//! The bound is the `l1` norm of the final histogram.

mod render;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

pub use render::Scientific;

use crate::archspec::{mlp, resolve, ResolvedStage, StageKind};
use crate::error::{Error, Result};
use crate::gamma::GammaProvider;
use crate::histogram::Histogram;
use crate::transfer::{
    b_matrix, m_matrix, maxpool_diag, residual_diag, skip_diag, MaxoutConstant, StageTransform,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub maxout: MaxoutConstant,
    pub mantissa_digits: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            maxout: MaxoutConstant::Statement,
            mantissa_digits: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageHistogram {
    pub label: String,
    pub histogram: Histogram,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub bound: BigUint,
    pub variant: String,
    pub per_stage: Vec<StageHistogram>,
    pub scientific: String,
}

struct Evaluator<'a> {
    provider: &'a GammaProvider,
    config: EngineConfig,
}

impl Evaluator<'_> {
    /// Transforms for one stage entered at ambient width `d`, and the width after it.
    fn factors(&self, stage: &ResolvedStage, d: usize) -> Result<(Vec<StageTransform>, usize)> {
        if stage.n_in != d {
            return Err(Error::Architecture(format!(
                "stage `{}` expects {} inputs but the ambient width is {d}",
                stage.label(),
                stage.n_in
            )));
        }
        let n = stage.n_out;
        let linear = |rank: usize| {
            let k = d.min(rank).min(n);
            (vec![m_matrix(d, k), m_matrix(k, n)], n)
        };
        Ok(match stage.kind {
            StageKind::Dense | StageKind::Conv if stage.relu => {
                (vec![m_matrix(d, n), b_matrix(self.provider, n)?], n)
            }
            StageKind::Dense | StageKind::Conv | StageKind::AvgPool | StageKind::Unpool => {
                linear(stage.rank)
            }
            StageKind::MaxPool { k } => (
                vec![maxpool_diag(d, n, k, self.config.maxout)?, m_matrix(d, n)],
                n,
            ),
            StageKind::Skip => {
                let diag = skip_diag(&self.segment(&stage.body, d)?);
                let widened = d + stage.body_out();
                (vec![diag, m_matrix(d, widened)], widened)
            }
            StageKind::Residual => {
                let segment = self.segment(&stage.body, d)?;
                if stage.body_out() != d {
                    return Err(Error::Architecture(format!(
                        "residual body maps {d} nodes to {}",
                        stage.body_out()
                    )));
                }
                (vec![residual_diag(&segment)], d)
            }
        })
    }

    /// Product of all transforms of a wrapped body.
    fn segment(&self, body: &[ResolvedStage], mut d: usize) -> Result<StageTransform> {
        let mut product = StageTransform::identity(d);
        for stage in body {
            let (factors, next) = self.factors(stage, d)?;
            for f in &factors {
                product = f.compose(&product)?;
            }
            d = next;
        }
        Ok(product)
    }

    fn run(&self, stages: &[ResolvedStage], n0: usize) -> Result<BoundReport> {
        let mut h = Histogram::unit(n0);
        let mut d = n0;
        let mut per_stage = Vec::with_capacity(stages.len());
        for stage in stages {
            let (factors, next) = self.factors(stage, d)?;
            for f in &factors {
                h = f.apply(&h)?;
            }
            d = next;
            debug_assert!(h.len() <= d + 1);
            per_stage.push(StageHistogram {
                label: stage.label(),
                histogram: h.clone(),
            });
        }
        let bound = h.l1();
        Ok(BoundReport {
            scientific: Scientific::from_integer(&bound, self.config.mantissa_digits).to_string(),
            bound,
            variant: self.provider.name().to_string(),
            per_stage,
        })
    }
}

/// Upper bound on the number of linear regions for a network with `n0` inputs.
pub fn evaluate(
    stages: &[ResolvedStage],
    provider: &GammaProvider,
    n0: usize,
    config: EngineConfig,
) -> Result<BoundReport> {
    Evaluator { provider, config }.run(stages, n0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub tight: BoundReport,
    pub loose: BoundReport,
    /// `loose / tight`, exact.
    pub ratio: Ratio<BigUint>,
    pub ratio_text: String,
}

/// Evaluates both strategies; the ratio is `loose / tight`.
pub fn compare(
    stages: &[ResolvedStage],
    n0: usize,
    tight: &GammaProvider,
    loose: &GammaProvider,
    config: EngineConfig,
) -> Result<Comparison> {
    let tight = evaluate(stages, tight, n0, config)?;
    let loose = evaluate(stages, loose, n0, config)?;
    let ratio = Ratio::new(loose.bound.clone(), tight.bound.clone());
    let ratio_text =
        Scientific::from_ratio(&loose.bound, &tight.bound, config.mantissa_digits).compact();
    Ok(Comparison {
        tight,
        loose,
        ratio,
        ratio_text,
    })
}

/// Grid of `n0`-`ni`^k-1 MLPs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepGrid {
    pub n0: usize,
    pub widths: Vec<usize>,
    pub depths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub n0: usize,
    pub ni: usize,
    pub k: usize,
    pub bound_tight: BigUint,
    pub bound_loose: BigUint,
    pub ratio: Ratio<BigUint>,
    pub ratio_text: String,
}

pub const SWEEP_HEADER: &str = "n0,ni,k,bound_ours,bound_serra,ratio";

/// One row per (width, depth), width-major. Cells run in parallel; output order is fixed.
pub fn sweep(
    grid: &SweepGrid,
    tight: &GammaProvider,
    loose: &GammaProvider,
    config: EngineConfig,
) -> Result<Vec<SweepRow>> {
    let cells: Vec<(usize, usize)> = grid
        .widths
        .iter()
        .flat_map(|&ni| grid.depths.iter().map(move |&k| (ni, k)))
        .collect();
    // build the needed columns up front so workers only read
    for &ni in &grid.widths {
        tight.column(ni)?;
        loose.column(ni)?;
    }
    cells
        .par_iter()
        .map(|&(ni, k)| {
            let stages = resolve(&mlp(grid.n0, ni, k))?;
            let c = compare(&stages, grid.n0, tight, loose, config)?;
            Ok(SweepRow {
                n0: grid.n0,
                ni,
                k,
                bound_tight: c.tight.bound,
                bound_loose: c.loose.bound,
                ratio: c.ratio,
                ratio_text: c.ratio_text,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER.split(','))
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n0.to_string(),
            r.ni.to_string(),
            r.k.to_string(),
            r.bound_tight.to_string(),
            r.bound_loose.to_string(),
            r.ratio_text.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("records are UTF-8")
}
