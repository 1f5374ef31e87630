//! Histograms over dimensions / activation counts.
//!
//! A histogram is a finitely supported sequence of non-negative integers. Entry
//! `i` counts regions whose statistic (space dimension or number of active
//! units) equals `i`. Values are kept normalized (no trailing zeros), so the
//! derived equality ignores trailing zeros.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Histogram {
    entries: Vec<BigUint>,
}

impl Histogram {
    pub fn new(mut entries: Vec<BigUint>) -> Self {
        while entries.last().is_some_and(Zero::is_zero) {
            entries.pop();
        }
        Histogram { entries }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn zero() -> Self {
        Histogram::default()
    }

    /// `e^n`: a single unit of mass at index `n`.
    pub fn unit(n: usize) -> Self {
        let mut entries = vec![BigUint::zero(); n + 1];
        entries[n] = BigUint::one();
        Histogram { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Logical length: highest nonzero index + 1.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<&BigUint> {
        self.entries.get(i)
    }

    /// Entries zero-padded (or truncated, if all dropped entries are zero) to `len`.
    pub fn padded(&self, len: usize) -> Vec<BigUint> {
        let mut out = self.entries.clone();
        out.resize(len.max(out.len()), BigUint::zero());
        out
    }

    pub fn l1(&self) -> BigUint {
        self.entries.iter().sum()
    }

    /// `tail[J] = sum_{j >= J} v_j`, for `J = 0..=len`; the last element is zero.
    pub fn tail_sums(&self) -> Vec<BigUint> {
        let mut tails = vec![BigUint::zero(); self.entries.len() + 1];
        for j in (0..self.entries.len()).rev() {
            tails[j] = &tails[j + 1] + &self.entries[j];
        }
        tails
    }

    /// The order relation: every tail sum of `self` is at most the matching tail sum of `other`.
    pub fn leq(&self, other: &Histogram) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mine = self.tail_sums();
        let theirs = other.tail_sums();
        mine.iter().zip(theirs.iter()).all(|(a, b)| a <= b)
    }

    /// Least histogram (w.r.t. tail sums) dominating every input.
    pub fn max_of<'a, I>(histograms: I) -> Result<Histogram>
    where
        I: IntoIterator<Item = &'a Histogram>,
    {
        let mut best: Option<Vec<BigUint>> = None;
        for h in histograms {
            let tails = h.tail_sums();
            best = Some(match best {
                None => tails,
                Some(mut acc) => {
                    if acc.len() < tails.len() {
                        acc.resize(tails.len(), BigUint::zero());
                    }
                    for (a, t) in acc.iter_mut().zip(tails) {
                        if t > *a {
                            *a = t;
                        }
                    }
                    acc
                }
            });
        }
        let tails = best.ok_or(Error::EmptyMax)?;
        // max tail sums are non-increasing, so consecutive differences are non-negative
        let entries = tails.windows(2).map(|w| &w[0] - &w[1]).collect();
        Ok(Histogram::new(entries))
    }

    /// `cl_{istar}`: collapses all mass at indices `>= istar` onto `istar`.
    pub fn clip(&self, istar: usize) -> Histogram {
        if self.len() <= istar + 1 {
            return self.clone();
        }
        let mut entries: Vec<BigUint> = self.entries[..istar].to_vec();
        entries.push(self.entries[istar..].iter().sum());
        Histogram::new(entries)
    }

    /// `dm`: shifts every entry one index up; index 0 becomes 0.
    pub fn down_move(&self) -> Histogram {
        if self.is_zero() {
            return Histogram::zero();
        }
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(BigUint::zero());
        entries.extend(self.entries.iter().cloned());
        Histogram { entries }
    }

    /// `self + dm(other)` without materializing the shifted copy.
    pub fn add_down_moved(&self, other: &Histogram) -> Histogram {
        let len = self.len().max(other.len() + 1);
        let mut entries = Vec::with_capacity(len);
        for i in 0..len {
            let mut x = self.entries.get(i).cloned().unwrap_or_default();
            if i >= 1 {
                if let Some(y) = other.entries.get(i - 1) {
                    x += y;
                }
            }
            entries.push(x);
        }
        Histogram::new(entries)
    }

    pub fn scale(&self, factor: &BigUint) -> Histogram {
        Histogram::new(self.entries.iter().map(|x| x * factor).collect())
    }
}

impl Add for &Histogram {
    type Output = Histogram;

    fn add(self, rhs: &Histogram) -> Histogram {
        let (long, short) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut entries = long.entries.clone();
        for (a, b) in entries.iter_mut().zip(short.entries.iter()) {
            *a += b;
        }
        Histogram::new(entries)
    }
}

impl Add for Histogram {
    type Output = Histogram;

    fn add(self, rhs: Histogram) -> Histogram {
        &self + &rhs
    }
}

/// Renders as a parenthesized decimal tuple, lowest index first. The zero
/// histogram renders as `(0)`.
impl fmt::Display for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("(0)");
        }
        f.write_str("(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Histogram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::HistogramSyntax(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let entries = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigUint>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Histogram::new(entries))
    }
}
