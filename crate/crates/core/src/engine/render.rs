//! Decimal scientific rendering of exact integers and ratios.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `mantissa x 10^exponent`, where `mantissa` holds the significant digits
/// (first digit nonzero unless the value is zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scientific {
    pub digits: String,
    pub exponent: i64,
}

fn pow10(k: u64) -> BigUint {
    BigUint::from(10u32).pow(k as u32)
}

fn decimal_len(x: &BigUint) -> i64 {
    x.to_string().len() as i64
}

/// `num / den >= 10^e`
fn at_least_pow10(num: &BigUint, den: &BigUint, e: i64) -> bool {
    if e >= 0 {
        *num >= den * pow10(e as u64)
    } else {
        num * pow10((-e) as u64) >= *den
    }
}

impl Scientific {
    /// Rounds `num / den` half-up to `digits` significant digits.
    pub fn from_ratio(num: &BigUint, den: &BigUint, digits: usize) -> Scientific {
        assert!(digits >= 1, "need at least one mantissa digit");
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scientific {
                digits: "0".repeat(digits),
                exponent: 0,
            };
        }
        let guess = decimal_len(num) - decimal_len(den);
        let mut exponent = if at_least_pow10(num, den, guess) {
            guess
        } else {
            guess - 1
        };
        // scaled = num/den * 10^(digits-1-exponent)
        let shift = digits as i64 - 1 - exponent;
        let (n, d) = if shift >= 0 {
            (num * pow10(shift as u64), den.clone())
        } else {
            (num.clone(), den * pow10((-shift) as u64))
        };
        let two = BigUint::from(2u32);
        let mut mantissa = (&two * &n + &d).div_floor(&(&two * &d));
        if mantissa == pow10(digits as u64) {
            mantissa = pow10(digits as u64 - 1);
            exponent += 1;
        }
        Scientific {
            digits: mantissa.to_string(),
            exponent,
        }
    }

    pub fn from_integer(x: &BigUint, digits: usize) -> Scientific {
        Self::from_ratio(x, &BigUint::one(), digits)
    }

    pub fn mantissa(&self) -> String {
        let (head, tail) = self.digits.split_at(1);
        if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head}.{tail}")
        }
    }

    /// Table style: the bare mantissa when the exponent is zero.
    pub fn compact(&self) -> String {
        if self.exponent == 0 {
            self.mantissa()
        } else {
            self.to_string()
        }
    }

    /// The represented value as `(numerator, denominator)`.
    pub fn value(&self) -> (BigUint, BigUint) {
        let m: BigUint = self.digits.parse().expect("digits are decimal");
        let e = self.exponent - (self.digits.len() as i64 - 1);
        if e >= 0 {
            (m * pow10(e as u64), BigUint::one())
        } else {
            (m, pow10((-e) as u64))
        }
    }
}

impl fmt::Display for Scientific {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}×10^{}", self.mantissa(), self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sci(x: u64, digits: usize) -> String {
        Scientific::from_integer(&BigUint::from(x), digits).to_string()
    }

    #[test]
    fn integers() {
        assert_eq!(sci(3, 4), "3.000×10^0");
        assert_eq!(sci(94928, 4), "9.493×10^4");
        assert_eq!(sci(99995, 4), "1.000×10^5");
        assert_eq!(sci(99994, 4), "9.999×10^4");
        assert_eq!(sci(1000, 1), "1×10^3");
        assert_eq!(sci(0, 3), "0.00×10^0");
    }

    #[test]
    fn ratios() {
        let r = Scientific::from_ratio(&BigUint::from(96753u32), &BigUint::from(94928u32), 4);
        assert_eq!(r.compact(), "1.019");
        let r = Scientific::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32), 3);
        assert_eq!(r.to_string(), "3.33×10^-1");
        let r = Scientific::from_ratio(&BigUint::from(2u32), &BigUint::from(3u32), 3);
        assert_eq!(r.to_string(), "6.67×10^-1");
        let r = Scientific::from_ratio(&BigUint::from(1u32), &BigUint::from(1u32), 4);
        assert_eq!(r.compact(), "1.000");
    }

    #[test]
    fn huge_values() {
        let x = BigUint::from(5431u32) * pow10(2028);
        let s = Scientific::from_integer(&(x + 1u32), 4);
        assert_eq!(s.to_string(), "5.431×10^2031");
    }
}
