//! Ground truth for small networks.
//!
//! Two counters are available: an exact sweep for single-input networks and a
//! sampled lower bound on the number of activation patterns for any input
//! width. Both are registered by name; see [`counter`].

mod net;
mod sample;
mod sweep;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use net::{parse_rational, random_net, ConcreteNet, Layer};
pub use sample::{distinct_patterns, SampleBox};
pub use sweep::{sweep_1d, Affine, Domain, Piece, Sweep};

use crate::error::{Error, Result};
use crate::histogram::Histogram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sweep1d,
    PatternSample,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sweep1d => "sweep1d",
            Method::PatternSample => "pattern_sample",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCount {
    pub count: usize,
    pub method: Method,
    /// Only the sweep is exact; sampling gives a lower bound.
    pub exact: bool,
    pub activation_histogram: Option<Histogram>,
}

/// Exact number of linear pieces of a single-input network over `domain`.
/// Degenerate (single-point) pieces are not counted.
pub fn count_regions_1d(net: &ConcreteNet, domain: &Domain) -> Result<RegionCount> {
    let s = sweep_1d(net, domain)?;
    Ok(RegionCount {
        count: s.pieces.len(),
        method: Method::Sweep1d,
        exact: true,
        activation_histogram: s.first_layer,
    })
}

/// Lower bound on the number of activation patterns, from `samples` points
/// drawn from the default box `[-10, 10]^{n0}`.
pub fn pattern_lower_bound(net: &ConcreteNet, samples: usize, seed: u64) -> RegionCount {
    pattern_lower_bound_in(net, samples, seed, &SampleBox::default())
}

pub fn pattern_lower_bound_in(
    net: &ConcreteNet,
    samples: usize,
    seed: u64,
    bx: &SampleBox,
) -> RegionCount {
    assert!(samples >= 1, "at least one sample is required");
    RegionCount {
        count: distinct_patterns(net, samples, seed, bx),
        method: Method::PatternSample,
        exact: false,
        activation_histogram: None,
    }
}

/// A single-input net whose `n` hidden units meet the first-layer bound
/// with equality: breakpoints at `1..=n`, the first `n/2` active to the
/// right, the rest to the left, summed by the output unit.
pub fn build_gamma1n_witness(n: usize) -> ConcreteNet {
    assert!(n >= 1, "witness needs at least one unit");
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let right = n / 2;
    let (weights, biases) = (1..=n as i64)
        .map(|i| {
            if (i as usize) <= right {
                (vec![int(1)], int(-i))
            } else {
                (vec![int(-1)], int(i))
            }
        })
        .unzip();
    let first = Layer { weights, biases };
    let out = Layer {
        weights: vec![vec![BigRational::one(); n]],
        biases: vec![BigRational::zero()],
    };
    ConcreteNet::new(1, vec![first, out]).expect("witness shapes chain")
}

/// A region-counting method selected by name.
pub trait RegionCounter: Send + Sync {
    fn method(&self) -> Method;
    fn count(&self, net: &ConcreteNet) -> Result<RegionCount>;
}

pub struct SweepCounter {
    pub domain: Domain,
}

impl RegionCounter for SweepCounter {
    fn method(&self) -> Method {
        Method::Sweep1d
    }

    fn count(&self, net: &ConcreteNet) -> Result<RegionCount> {
        count_regions_1d(net, &self.domain)
    }
}

pub struct PatternCounter {
    pub samples: usize,
    pub seed: u64,
    pub sample_box: SampleBox,
}

impl RegionCounter for PatternCounter {
    fn method(&self) -> Method {
        Method::PatternSample
    }

    fn count(&self, net: &ConcreteNet) -> Result<RegionCount> {
        if self.samples == 0 {
            return Err(Error::Network(
                "pattern sampling needs at least one sample".into(),
            ));
        }
        Ok(pattern_lower_bound_in(
            net,
            self.samples,
            self.seed,
            &self.sample_box,
        ))
    }
}

/// Settings shared by all counters; each uses the fields it needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterOptions {
    pub domain: Domain,
    pub samples: usize,
    pub seed: u64,
    pub sample_box: SampleBox,
}

impl Default for CounterOptions {
    fn default() -> Self {
        CounterOptions {
            domain: Domain::Line,
            samples: 100_000,
            seed: 0,
            sample_box: SampleBox::default(),
        }
    }
}

type Factory = fn(&CounterOptions) -> Box<dyn RegionCounter>;

const COUNTERS: &[(&str, Factory)] = &[
    ("sweep1d", |o| {
        Box::new(SweepCounter {
            domain: o.domain.clone(),
        })
    }),
    ("pattern_sample", |o| {
        Box::new(PatternCounter {
            samples: o.samples,
            seed: o.seed,
            sample_box: o.sample_box.clone(),
        })
    }),
];

pub fn counter_names() -> impl Iterator<Item = &'static str> {
    COUNTERS.iter().map(|(name, _)| *name)
}

pub fn counter(name: &str, options: &CounterOptions) -> Result<Box<dyn RegionCounter>> {
    COUNTERS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make(options))
        .ok_or_else(|| Error::UnknownMethod(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archspec::resolve;
    use crate::engine::{evaluate, EngineConfig};
    use crate::gamma::{gamma, GammaProvider, GammaVariant};

    #[test]
    fn witness_histograms() {
        let cases: [(usize, &[u64]); 3] = [
            (1, &[1, 1]),
            (4, &[0, 0, 2, 2, 1]),
            (6, &[0, 0, 0, 2, 2, 2, 1]),
        ];
        for (n, expected) in cases {
            let c = count_regions_1d(&build_gamma1n_witness(n), &Domain::Line).unwrap();
            assert_eq!(
                c.activation_histogram,
                Some(Histogram::from_counts(expected)),
                "n={n}"
            );
            assert_eq!(c.count, n + 1);
        }
        for n in 1..=12 {
            let c = count_regions_1d(&build_gamma1n_witness(n), &Domain::Line).unwrap();
            assert_eq!(
                c.activation_histogram.unwrap(),
                gamma(GammaVariant::Ours, 1, n).unwrap()
            );
        }
    }

    fn bound(net: &ConcreteNet) -> num_bigint::BigUint {
        let provider = GammaProvider::new(GammaVariant::Ours.strategy());
        let stages = resolve(&net.architecture()).unwrap();
        evaluate(&stages, &provider, net.n0(), EngineConfig::default())
            .unwrap()
            .bound
    }

    #[test]
    fn maximal_small_chain() {
        let net = ConcreteNet::from_json(
            r#"{"input": 1, "layers": [
                {"weights": [["1"], ["-1"]], "biases": ["0", "1"]},
                {"weights": [["-1", "-1"]], "biases": ["2"]},
                {"weights": [["1"]], "biases": ["0"]}]}"#,
        )
        .unwrap();
        let c = count_regions_1d(&net, &Domain::Line).unwrap();
        assert_eq!(c.count, 5);
        assert_eq!(bound(&net), 6u32.into());
    }

    #[test]
    fn sampled_patterns() {
        let zero = ConcreteNet::new(
            2,
            vec![
                Layer {
                    weights: vec![vec![BigRational::zero(); 2]; 3],
                    biases: vec![BigRational::zero(); 3],
                },
                Layer {
                    weights: vec![vec![BigRational::zero(); 3]],
                    biases: vec![BigRational::zero()],
                },
            ],
        )
        .unwrap();
        assert_eq!(pattern_lower_bound(&zero, 50, 1).count, 1);

        let net = random_net(11, 2, &[4]);
        let a = pattern_lower_bound(&net, 5000, 3);
        assert_eq!(a, pattern_lower_bound(&net, 5000, 3));
        assert!(!a.exact);
        assert!(a.count >= 1 && a.count <= 11, "{}", a.count);
    }

    #[test]
    fn registry() {
        let names: Vec<_> = counter_names().collect();
        assert_eq!(names, vec!["sweep1d", "pattern_sample"]);
        let net = build_gamma1n_witness(3);
        let sweep = counter("sweep1d", &CounterOptions::default()).unwrap();
        assert_eq!(sweep.method(), Method::Sweep1d);
        assert_eq!(sweep.count(&net).unwrap().count, 4);
        let opts = CounterOptions {
            samples: 2000,
            seed: 9,
            ..CounterOptions::default()
        };
        let sampled = counter("pattern_sample", &opts)
            .unwrap()
            .count(&net)
            .unwrap();
        assert!(sampled.count <= 4);
        assert!(matches!(counter("lp", &opts), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn sweep_never_exceeds_bound() {
        for seed in 0..30 {
            let net = random_net(seed, 1, &[3, 2]);
            let c = count_regions_1d(&net, &Domain::Line).unwrap();
            assert!(
                num_bigint::BigUint::from(c.count) <= bound(&net),
                "seed {seed}"
            );
        }
    }
}
