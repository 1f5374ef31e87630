use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{GammaColumn, GammaStrategy};
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Largest `n'` built unless the caller raises the cap.
pub const DEFAULT_GAMMA_CAP: usize = 4096;

/// Memoizing source of γ columns for one strategy.
///
/// Columns are built by a rolling dynamic program that keeps only the
/// most recent column (the frontier) plus any column that was actually
/// requested. Completed columns are shared as `Arc`s; a single lock
/// serializes construction.
pub struct GammaProvider {
    strategy: Arc<dyn GammaStrategy>,
    cap: usize,
    state: Mutex<State>,
}

#[derive(Default)]
struct State {
    frontier: Option<Arc<GammaColumn>>,
    requested: HashMap<usize, Arc<GammaColumn>>,
}

impl GammaProvider {
    pub fn new(strategy: Arc<dyn GammaStrategy>) -> Self {
        Self::with_cap(strategy, DEFAULT_GAMMA_CAP)
    }

    pub fn with_cap(strategy: Arc<dyn GammaStrategy>, cap: usize) -> Self {
        GammaProvider {
            strategy,
            cap,
            state: Mutex::new(State::default()),
        }
    }

    pub fn strategy(&self) -> &Arc<dyn GammaStrategy> {
        &self.strategy
    }

    pub fn name(&self) -> &'static str {
        self.strategy.name()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Fails early with [`Error::GammaCapExceeded`] when `nprime` is over the cap.
    pub fn check_cap(&self, nprime: usize) -> Result<()> {
        if nprime > self.cap {
            return Err(Error::GammaCapExceeded {
                nprime,
                cap: self.cap,
            });
        }
        Ok(())
    }

    pub fn column(&self, nprime: usize) -> Result<Arc<GammaColumn>> {
        if nprime == 0 {
            return Err(Error::NoHyperplanes);
        }
        self.check_cap(nprime)?;

        let mut state = self.state.lock().expect("gamma provider lock poisoned");
        if let Some(col) = state.requested.get(&nprime) {
            return Ok(Arc::clone(col));
        }

        let column = if !self.strategy.needs_previous() {
            Arc::new(self.strategy.column(None, nprime)?)
        } else {
            let mut current = match state.frontier.take() {
                Some(f) if f.nprime() <= nprime => f,
                _ => Arc::new(self.strategy.column(None, 1)?),
            };
            while current.nprime() < nprime {
                let next = self.strategy.column(Some(&current), current.nprime() + 1)?;
                current = Arc::new(next);
            }
            state.frontier = Some(Arc::clone(&current));
            current
        };

        state.requested.insert(nprime, Arc::clone(&column));
        Ok(column)
    }

    pub fn gamma(&self, n: usize, nprime: usize) -> Result<Histogram> {
        Ok(self.column(nprime)?.get(n).clone())
    }
}

impl std::fmt::Debug for GammaProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GammaProvider")
            .field("strategy", &self.strategy.name())
            .field("cap", &self.cap)
            .finish()
    }
}
