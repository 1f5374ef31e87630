use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{recursive_column, GammaColumn, GammaVariant};
use crate::binomial::pascal_row;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// A choice of initial values for the γ recursion.
pub trait GammaStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// `γ_{1,n'}`, the bound for a line cut by `n'` points.
    fn first_order_seed(&self, nprime: usize) -> Histogram;

    /// Column `n'`. The default runs the shared recursion on column `n' - 1`;
    /// strategies with a closed form may ignore `previous`.
    fn column(&self, previous: Option<&GammaColumn>, nprime: usize) -> Result<GammaColumn> {
        recursive_column(&|m| self.first_order_seed(m), previous, nprime)
    }

    /// Whether [`GammaStrategy::column`] needs column `n' - 1`.
    fn needs_previous(&self) -> bool {
        true
    }
}

/// Tight first-order seed: `ceil(n/2) - 1` zeros, `n mod 2`, `floor(n/2)` twos, then 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ours;

impl GammaStrategy for Ours {
    fn name(&self) -> &'static str {
        GammaVariant::Ours.name()
    }

    fn first_order_seed(&self, nprime: usize) -> Histogram {
        assert!(nprime >= 1);
        let zeros = nprime.div_ceil(2) - 1;
        let mut counts = vec![0u64; zeros];
        counts.push((nprime % 2) as u64);
        counts.extend(std::iter::repeat_n(2, nprime / 2));
        counts.push(1);
        Histogram::from_counts(&counts)
    }
}

/// Binomial tail: entry `i` is `C(n', i)` for `i >= n' - n`, zero below.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serra;

impl Serra {
    pub fn closed_form(n: usize, nprime: usize) -> Histogram {
        tail_of_row(pascal_row(nprime), n)
    }
}

fn tail_of_row(mut row: Vec<BigUint>, n: usize) -> Histogram {
    let nprime = row.len() - 1;
    let cut = nprime.saturating_sub(n);
    for x in row.iter_mut().take(cut) {
        x.set_zero();
    }
    Histogram::new(row)
}

impl GammaStrategy for Serra {
    fn name(&self) -> &'static str {
        GammaVariant::Serra.name()
    }

    fn first_order_seed(&self, nprime: usize) -> Histogram {
        assert!(nprime >= 1);
        let mut counts = vec![0u64; nprime - 1];
        counts.push(nprime as u64);
        counts.push(1);
        Histogram::from_counts(&counts)
    }

    fn column(&self, _previous: Option<&GammaColumn>, nprime: usize) -> Result<GammaColumn> {
        if nprime == 0 {
            return Err(Error::NoHyperplanes);
        }
        let row = pascal_row(nprime);
        let entries = (0..=nprime).map(|n| tail_of_row(row.clone(), n)).collect();
        Ok(GammaColumn::new(nprime, entries))
    }

    fn needs_previous(&self) -> bool {
        false
    }
}

/// Name → strategy lookup used by the CLI and the comparison harness.
#[derive(Clone, Default)]
pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn GammaStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the built-in variants.
    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        for variant in GammaVariant::ALL {
            registry.register(variant.strategy());
        }
        registry
    }

    pub fn register(&mut self, strategy: Arc<dyn GammaStrategy>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn GammaStrategy>> {
        self.strategies
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownVariant(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(counts: &[u64]) -> Histogram {
        Histogram::from_counts(counts)
    }

    #[test]
    fn ours_seed_shape() {
        assert_eq!(Ours.first_order_seed(1), h(&[1, 1]));
        assert_eq!(Ours.first_order_seed(2), h(&[0, 2, 1]));
        assert_eq!(Ours.first_order_seed(4), h(&[0, 0, 2, 2, 1]));
        assert_eq!(Ours.first_order_seed(5), h(&[0, 0, 1, 2, 2, 1]));
        assert_eq!(Ours.first_order_seed(6), h(&[0, 0, 0, 2, 2, 2, 1]));
        for n in 1..40 {
            assert_eq!(Ours.first_order_seed(n).l1(), BigUint::from(n as u64 + 1));
        }
    }

    #[test]
    fn serra_seed_shape() {
        assert_eq!(Serra.first_order_seed(1), h(&[1, 1]));
        assert_eq!(Serra.first_order_seed(4), h(&[0, 0, 0, 4, 1]));
        assert_eq!(Serra::closed_form(1, 4), Serra.first_order_seed(4));
    }

    #[test]
    fn registry_lookup() {
        let registry = StrategyRegistry::with_builtins();
        assert_eq!(registry.names(), vec!["ours", "serra"]);
        assert_eq!(registry.get("serra").unwrap().name(), "serra");
        assert!(matches!(
            registry.get("nope"),
            Err(Error::UnknownVariant(_))
        ));
    }
}
