//! Exact breakpoint propagation for networks on a line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::net::ConcreteNet;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// `a * x + b`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: BigRational,
    pub b: BigRational,
}

impl Affine {
    fn zero() -> Affine {
        Affine {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    fn identity() -> Affine {
        Affine {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        &self.a * x + &self.b
    }

    /// Zero crossing, if the form is not constant.
    fn root(&self) -> Option<BigRational> {
        (!self.a.is_zero()).then(|| -&self.b / &self.a)
    }
}

/// Where to count: the whole line or an open interval.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Line,
    Interval(BigRational, BigRational),
}

/// A maximal open interval (ends `None` are infinite) with the network's
/// output as an affine function of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Option<BigRational>,
    pub hi: Option<BigRational>,
    pub output: Vec<Affine>,
}

#[derive(Clone, Debug)]
struct Cell {
    lo: Option<BigRational>,
    hi: Option<BigRational>,
    forms: Vec<Affine>,
}

impl Cell {
    fn contains(&self, x: &BigRational) -> bool {
        self.lo.as_ref().is_none_or(|l| l < x) && self.hi.as_ref().is_none_or(|h| x < h)
    }

    fn interior(&self) -> BigRational {
        match (&self.lo, &self.hi) {
            (None, None) => BigRational::zero(),
            (None, Some(h)) => h - BigRational::one(),
            (Some(l), None) => l + BigRational::one(),
            (Some(l), Some(h)) => (l + h) / BigRational::from_integer(BigInt::from(2)),
        }
    }
}

/// Result of a sweep: final pieces plus the first hidden layer's histogram
/// of active-unit counts over its own cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub pieces: Vec<Piece>,
    pub first_layer: Option<Histogram>,
}

pub fn sweep_1d(net: &ConcreteNet, domain: &Domain) -> Result<Sweep> {
    if net.n0() != 1 {
        return Err(Error::NotOneDimensional(net.n0()));
    }
    let (lo, hi) = match domain {
        Domain::Line => (None, None),
        Domain::Interval(l, h) if l < h => (Some(l.clone()), Some(h.clone())),
        Domain::Interval(l, h) => {
            return Err(Error::Network(format!("empty interval ({l}, {h})")));
        }
    };
    let mut cells = vec![Cell {
        lo,
        hi,
        forms: vec![Affine::identity()],
    }];
    let mut first_layer = None;
    let last = net.layers().len() - 1;
    for (li, layer) in net.layers().iter().enumerate() {
        let mut next = Vec::with_capacity(cells.len());
        let mut active_counts = vec![0u64; layer.width() + 1];
        for cell in cells {
            let pre: Vec<Affine> = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, b)| {
                    row.iter().zip(&cell.forms).fold(
                        Affine {
                            a: BigRational::zero(),
                            b: b.clone(),
                        },
                        |acc, (w, f)| Affine {
                            a: acc.a + w * &f.a,
                            b: acc.b + w * &f.b,
                        },
                    )
                })
                .collect();
            if li == last {
                next.push(Cell { forms: pre, ..cell });
                continue;
            }
            let mut cuts: Vec<BigRational> = pre
                .iter()
                .filter_map(Affine::root)
                .filter(|r| cell.contains(r))
                .collect();
            cuts.sort();
            cuts.dedup();
            let mut bounds = Vec::with_capacity(cuts.len() + 2);
            bounds.push(cell.lo.clone());
            bounds.extend(cuts.into_iter().map(Some));
            bounds.push(cell.hi.clone());
            for w in bounds.windows(2) {
                let mut sub = Cell {
                    lo: w[0].clone(),
                    hi: w[1].clone(),
                    forms: Vec::new(),
                };
                let x = sub.interior();
                let mut active = 0;
                sub.forms = pre
                    .iter()
                    .map(|f| {
                        if f.eval(&x).is_positive() {
                            active += 1;
                            f.clone()
                        } else {
                            Affine::zero()
                        }
                    })
                    .collect();
                active_counts[active] += 1;
                next.push(sub);
            }
        }
        if li == 0 && li != last {
            first_layer = Some(Histogram::from_counts(&active_counts));
        }
        cells = next;
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(cells.len());
    for cell in cells {
        match pieces.last_mut() {
            Some(prev) if prev.output == cell.forms => prev.hi = cell.hi,
            _ => pieces.push(Piece {
                lo: cell.lo,
                hi: cell.hi,
                output: cell.forms,
            }),
        }
    }
    Ok(Sweep {
        pieces,
        first_layer,
    })
}
