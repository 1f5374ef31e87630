use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::net::ConcreteNet;

/// Sampling box `[lo, hi]^{n0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBox {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            lo: BigRational::from_integer(BigInt::from(-10)),
            hi: BigRational::from_integer(BigInt::from(10)),
        }
    }
}

/// Grid resolution per coordinate; points are `lo + (hi - lo) * k / GRID`.
const GRID: u64 = 1 << 24;
const SHARD: usize = 2048;

/// Distinct activation patterns over `samples` seeded points.
///
/// Work is split into fixed shards, each on its own ChaCha stream, so the
/// result does not depend on the thread count.
pub fn distinct_patterns(net: &ConcreteNet, samples: usize, seed: u64, bx: &SampleBox) -> usize {
    let span = &bx.hi - &bx.lo;
    let grid = BigRational::from_integer(BigInt::from(GRID));
    let shards = samples.div_ceil(SHARD);
    let seen: HashSet<Vec<bool>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let count = SHARD.min(samples - shard * SHARD);
            let mut local = HashSet::new();
            for _ in 0..count {
                let x: Vec<BigRational> = (0..net.n0())
                    .map(|_| {
                        let k = BigRational::from_integer(BigInt::from(rng.gen_range(0..=GRID)));
                        &bx.lo + &span * k / &grid
                    })
                    .collect();
                local.insert(net.forward(&x).1);
            }
            local
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    seen.len()
}
