//! Binomial coefficients by the additive Pascal recurrence.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Row `n` of Pascal's triangle: `C(n, 0), ..., C(n, n)`.
pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::zero(); n + 1];
    row[0] = BigUint::one();
    for filled in 1..=n {
        for k in (1..=filled).rev() {
            let prev = row[k - 1].clone();
            row[k] += prev;
        }
    }
    row
}

/// `sum_{s=0}^{min(n, nprime)} C(nprime, s)`: the number of regions `nprime`
/// hyperplanes in general position cut an `n`-dimensional space into.
pub fn partial_row_sum(n: usize, nprime: usize) -> BigUint {
    pascal_row(nprime).into_iter().take(n.min(nprime) + 1).sum()
}
