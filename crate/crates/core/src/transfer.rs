//! Explicit histogram transforms: the layer matrix `B_{n'}`, the resize/clip
//! matrix `M_{n,n'}`, the max-pooling diagonal and the skip/residual diagonal.
//!
//! Every transform built here moves mass only to equal or lower indices and
//! has columns that are non-decreasing under the histogram order, which is
//! what makes the bounds composable.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::binomial::pascal_row;
use crate::error::{Error, Result};
use crate::gamma::GammaProvider;
use crate::histogram::Histogram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// One ReLU layer.
    B,
    /// Clip or zero-padded embedding.
    M,
    MaxpoolDiag,
    SkipDiag,
    /// Result of [`StageTransform::compose`].
    Product,
}

/// Which hyperplane count a rank-`k` maxout layer with `n_l` outputs is charged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MaxoutConstant {
    /// `(k^2 - k) * n_l`
    #[default]
    Statement,
    /// `k (k - 1) / 2 * n_l`
    Halved,
}

impl MaxoutConstant {
    pub fn hyperplanes(self, k: usize, n_out: usize) -> usize {
        match self {
            MaxoutConstant::Statement => (k * k - k) * n_out,
            MaxoutConstant::Halved => k * (k - 1) / 2 * n_out,
        }
    }
}

/// Dense `rows x cols` matrix of non-negative integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTransform {
    rows: usize,
    cols: usize,
    data: Vec<BigUint>,
    kind: TransformKind,
}

impl StageTransform {
    pub fn zeros(rows: usize, cols: usize, kind: TransformKind) -> Self {
        StageTransform {
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
            kind,
        }
    }

    pub fn identity(n: usize) -> Self {
        m_matrix(n, n)
    }

    /// Builds a matrix from its columns; each column is zero-padded to `rows`.
    pub fn from_columns(rows: usize, columns: &[Histogram], kind: TransformKind) -> Result<Self> {
        let mut t = Self::zeros(rows, columns.len(), kind);
        for (j, col) in columns.iter().enumerate() {
            if col.len() > rows {
                return Err(Error::DimensionMismatch {
                    left_rows: rows,
                    left_cols: columns.len(),
                    right_rows: col.len(),
                    right_cols: 1,
                });
            }
            for (i, x) in col.entries().iter().enumerate() {
                *t.at_mut(i, j) = x.clone();
            }
        }
        Ok(t)
    }

    pub fn diagonal(entries: Vec<BigUint>, kind: TransformKind) -> Self {
        let n = entries.len();
        let mut t = Self::zeros(n, n, kind);
        for (i, x) in entries.into_iter().enumerate() {
            *t.at_mut(i, i) = x;
        }
        t
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn at(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut BigUint {
        &mut self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Histogram {
        Histogram::new((0..self.rows).map(|i| self.at(i, j).clone()).collect())
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    /// Matrix-vector product. `v` may be shorter than `cols` (implicit zeros)
    /// but must not carry mass beyond it.
    pub fn apply(&self, v: &Histogram) -> Result<Histogram> {
        if v.len() > self.cols {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        let mut out = vec![BigUint::zero(); self.rows];
        for (j, x) in v.entries().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.at(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(Histogram::new(out))
    }

    /// `self * rhs`: apply `rhs` first, then `self`.
    pub fn compose(&self, rhs: &StageTransform) -> Result<StageTransform> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols, TransformKind::Product);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `l1` norm of every column, i.e. `|T e^n|_1` for `n = 0..cols`.
    pub fn column_norms(&self) -> Vec<BigUint> {
        let mut norms = vec![BigUint::zero(); self.cols];
        for i in 0..self.rows {
            for (j, n) in norms.iter_mut().enumerate() {
                *n += self.at(i, j);
            }
        }
        norms
    }
}

/// Rows of space-separated decimals.
impl fmt::Display for StageTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `B_{n'}`: column `j` (0-based) is `cl_j(γ_{j,n'})`.
pub fn b_matrix(provider: &GammaProvider, nprime: usize) -> Result<StageTransform> {
    let column = provider.column(nprime)?;
    let columns: Vec<Histogram> = (0..=nprime).map(|j| column.get(j).clip(j)).collect();
    StageTransform::from_columns(nprime + 1, &columns, TransformKind::B)
}

/// `M_{n,n'}`: `(n'+1) x (n+1)` with a single 1 per column at row `min(j, n')`.
/// Clips when `n' < n`, embeds with zero padding otherwise.
pub fn m_matrix(n: usize, nprime: usize) -> StageTransform {
    let mut t = StageTransform::zeros(nprime + 1, n + 1, TransformKind::M);
    for j in 0..=n {
        *t.at_mut(j.min(nprime), j) = BigUint::one();
    }
    t
}

/// Diagonal `|γ_{n,c}|_1` for `n = 0..=n_in`, where `c` is the maxout hyperplane count.
/// The caller clips to `n_out` afterwards.
pub fn maxpool_diag(
    n_in: usize,
    n_out: usize,
    k: usize,
    constant: MaxoutConstant,
) -> Result<StageTransform> {
    if k < 2 {
        return Err(Error::DegenerateMaxout(k));
    }
    let c = constant.hyperplanes(k, n_out);
    let row = pascal_row(c);
    let mut running = BigUint::zero();
    let mut diag = Vec::with_capacity(n_in + 1);
    for n in 0..=n_in {
        if let Some(x) = row.get(n) {
            running += x;
        }
        diag.push(running.clone());
    }
    Ok(StageTransform::diagonal(diag, TransformKind::MaxpoolDiag))
}

/// Diagonal of the column norms of the wrapped segment: a concatenated skip
/// keeps each input region's dimension while counting all its sub-regions.
pub fn skip_diag(segment: &StageTransform) -> StageTransform {
    StageTransform::diagonal(segment.column_norms(), TransformKind::SkipDiag)
}

/// Same transform as [`skip_diag`]; addition bounds like concatenation.
pub fn residual_diag(segment: &StageTransform) -> StageTransform {
    skip_diag(segment)
}
