//! γ tables: upper bounds on the activation histogram of an `n`-dimensional
//! space cut by `n'` hyperplanes.
//!
//! Every variant shares the recursion
//! `γ_{n,n'} = γ_{n-1,n'-1} + dm(γ_{n,n'-1})` and differs only in the seeds
//! `γ_{1,n'}`. Variants are [`GammaStrategy`] trait objects looked up by name
//! in a [`StrategyRegistry`]; [`GammaProvider`] memoizes whole columns.

mod provider;
mod strategy;

use num_bigint::BigUint;

pub use provider::{GammaProvider, DEFAULT_GAMMA_CAP};
pub use strategy::{GammaStrategy, Ours, Serra, StrategyRegistry};

use crate::binomial::partial_row_sum;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Tag for the built-in variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GammaVariant {
    Ours,
    Serra,
}

impl GammaVariant {
    pub const ALL: [GammaVariant; 2] = [GammaVariant::Ours, GammaVariant::Serra];

    pub fn name(self) -> &'static str {
        match self {
            GammaVariant::Ours => "ours",
            GammaVariant::Serra => "serra",
        }
    }

    pub fn strategy(self) -> std::sync::Arc<dyn GammaStrategy> {
        match self {
            GammaVariant::Ours => std::sync::Arc::new(Ours),
            GammaVariant::Serra => std::sync::Arc::new(Serra),
        }
    }
}

impl std::str::FromStr for GammaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ours" => Ok(GammaVariant::Ours),
            "serra" => Ok(GammaVariant::Serra),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

impl std::fmt::Display for GammaVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// All `γ_{n,n'}` for `n = 0..=n'` and one fixed `n'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaColumn {
    nprime: usize,
    entries: Vec<Histogram>,
}

impl GammaColumn {
    pub(crate) fn new(nprime: usize, entries: Vec<Histogram>) -> Self {
        debug_assert_eq!(entries.len(), nprime + 1);
        GammaColumn { nprime, entries }
    }

    pub fn nprime(&self) -> usize {
        self.nprime
    }

    /// `γ_{n,n'}`; for `n > n'` this is `γ_{n',n'}`.
    pub fn get(&self, n: usize) -> &Histogram {
        &self.entries[n.min(self.nprime)]
    }

    pub fn entries(&self) -> &[Histogram] {
        &self.entries
    }
}

/// Builds column `n'` from column `n' - 1` with the shared recursion, taking
/// `γ_{1,m}` from `seed`. `previous` is ignored when `nprime == 1`.
pub fn recursive_column(
    seed: &dyn Fn(usize) -> Histogram,
    previous: Option<&GammaColumn>,
    nprime: usize,
) -> Result<GammaColumn> {
    if nprime == 0 {
        return Err(Error::NoHyperplanes);
    }
    let mut entries = Vec::with_capacity(nprime + 1);
    entries.push(Histogram::unit(nprime));
    entries.push(seed(nprime));
    if nprime >= 2 {
        let prev = previous
            .filter(|p| p.nprime() + 1 == nprime)
            .expect("recursive_column needs column n'-1");
        for n in 2..=nprime {
            entries.push(prev.get(n - 1).add_down_moved(prev.get(n)));
        }
    }
    Ok(GammaColumn::new(nprime, entries))
}

/// `γ_{n,n'}` for a built-in variant, computed from scratch.
pub fn gamma(variant: GammaVariant, n: usize, nprime: usize) -> Result<Histogram> {
    let provider = GammaProvider::new(variant.strategy());
    Ok(provider.column(nprime)?.get(n).clone())
}

/// `|γ_{n,n'}|_1 = sum_{s <= min(n, n')} C(n', s)`, without building histograms.
pub fn gamma_norm(n: usize, nprime: usize) -> BigUint {
    partial_row_sum(n, nprime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(counts: &[u64]) -> Histogram {
        Histogram::from_counts(counts)
    }

    #[test]
    fn reference_values() {
        assert_eq!(
            gamma(GammaVariant::Ours, 1, 4).unwrap(),
            h(&[0, 0, 2, 2, 1])
        );
        assert_eq!(
            gamma(GammaVariant::Ours, 3, 6).unwrap(),
            h(&[0, 0, 4, 16, 15, 6, 1])
        );
        assert_eq!(
            gamma(GammaVariant::Serra, 2, 6).unwrap(),
            h(&[0, 0, 0, 0, 15, 6, 1])
        );
        assert_eq!(
            gamma(GammaVariant::Ours, 6, 6).unwrap(),
            h(&[1, 6, 15, 20, 15, 6, 1])
        );
    }

    #[test]
    fn n_above_nprime_saturates() {
        assert_eq!(
            gamma(GammaVariant::Ours, 9, 6).unwrap(),
            gamma(GammaVariant::Ours, 6, 6).unwrap()
        );
        assert_eq!(gamma(GammaVariant::Ours, 5, 1).unwrap(), h(&[1, 1]));
    }

    #[test]
    fn zero_hyperplanes_is_an_error() {
        assert!(matches!(
            gamma(GammaVariant::Ours, 1, 0),
            Err(Error::NoHyperplanes)
        ));
    }

    #[test]
    fn seeds_only_column() {
        let col = GammaProvider::new(GammaVariant::Ours.strategy())
            .column(1)
            .unwrap();
        assert_eq!(col.entries(), &[h(&[0, 1]), h(&[1, 1])]);
    }

    #[test]
    fn norms() {
        assert_eq!(gamma_norm(2, 4), BigUint::from(11u32));
        assert_eq!(gamma_norm(6, 6), BigUint::from(64u32));
        assert_eq!(gamma_norm(0, 12), BigUint::from(1u32));
    }

    #[test]
    fn variant_names_parse() {
        for v in GammaVariant::ALL {
            assert_eq!(v.name().parse::<GammaVariant>().unwrap(), v);
        }
        assert!("tight".parse::<GammaVariant>().is_err());
    }
}
