//! Exact dyadic rationals `p / 2^e`.
//!
//! All weights and lengths in this crate are finite sums of halvings, so they
//! stay inside the dyadic rationals. Arithmetic is exact: no rounding step
//! exists anywhere in this module. Values are kept canonical (odd numerator,
//! or zero with exponent zero), which makes equality structural.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigInt::from(0),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: BigInt::from(1),
            exponent: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::make(BigInt::from(n), 0)
    }

    /// `1 / 2^e`.
    pub fn half_pow(e: u64) -> Self {
        Dyadic {
            numerator: BigInt::from(1),
            exponent: e,
        }
    }

    /// Builds `numerator / 2^exponent` and normalizes to canonical form.
    pub fn make(numerator: BigInt, exponent: u64) -> Self {
        let mut d = Dyadic {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.numerator.sign() == Sign::NoSign {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && !self.numerator.magnitude().bit(0) {
            self.numerator >>= 1;
            self.exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.sign() == Sign::NoSign
    }

    pub fn is_positive(&self) -> bool {
        self.numerator.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.sign() == Sign::Minus
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        Dyadic::make(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator.clone(),
            exponent: self.exponent,
        }
    }

    pub fn double(&self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if self.exponent > 0 {
            Dyadic {
                numerator: self.numerator.clone(),
                exponent: self.exponent - 1,
            }
        } else {
            Dyadic {
                numerator: &self.numerator << 1,
                exponent: 0,
            }
        }
    }

    pub fn halve(&self) -> Dyadic {
        self.shr(1)
    }

    /// Division by `2^k`.
    pub fn shr(&self, k: u64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::make(self.numerator.clone(), self.exponent + k)
    }

    /// Midpoint of two values, exact.
    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        self.add(other).halve()
    }

    pub fn sum<'a>(values: impl IntoIterator<Item = &'a Dyadic>) -> Dyadic {
        values.into_iter().fold(Dyadic::zero(), |acc, v| acc.add(v))
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl FromStr for Dyadic {
    type Err = String;

    /// Accepts `p`, `p/2^e` and the degenerate `p/2` (meaning `e = 1`).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|e| format!("bad integer `{s}`: {e}"))?;
                Ok(Dyadic::make(n, 0))
            }
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim())
                    .map_err(|e| format!("bad numerator `{num}`: {e}"))?;
                let den = den.trim();
                let e = if den == "2" {
                    1
                } else if let Some(exp) = den.strip_prefix("2^") {
                    exp.parse::<u64>()
                        .map_err(|e| format!("bad exponent `{exp}`: {e}"))?
                } else {
                    return Err(format!("denominator `{den}` is not a power of two"));
                };
                Ok(Dyadic::make(n, e))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dy(n: i64, e: u64) -> Dyadic {
        Dyadic::make(BigInt::from(n), e)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(dy(4, 3), dy(1, 1));
        assert_eq!(dy(0, 7), Dyadic::zero());
        assert_eq!(dy(6, 1), Dyadic::from_int(3));
    }

    #[test]
    fn arithmetic() {
        let half = Dyadic::half_pow(1);
        let quarter = Dyadic::half_pow(2);
        assert_eq!(half.add(&quarter), dy(3, 2));
        assert_eq!(half.sub(&quarter), quarter);
        assert_eq!(quarter.double(), half);
        assert_eq!(half.halve(), quarter);
        assert_eq!(dy(3, 2).midpoint(&dy(1, 2)), half);
        assert!(dy(-1, 3).is_negative());
        assert!(quarter < half);
    }

    #[test]
    fn display_round_trip() {
        for d in [Dyadic::zero(), dy(5, 0), dy(-3, 4), dy(7, 2)] {
            let s = d.to_string();
            assert_eq!(s.parse::<Dyadic>().unwrap(), d);
        }
        assert_eq!("3/2".parse::<Dyadic>().unwrap(), dy(3, 1));
    }

    proptest! {
        #[test]
        fn add_commutes(a in -1000i64..1000, ea in 0u64..12, b in -1000i64..1000, eb in 0u64..12) {
            let x = dy(a, ea);
            let y = dy(b, eb);
            prop_assert_eq!(x.add(&y), y.add(&x));
        }

        #[test]
        fn add_associates(a in -100i64..100, b in -100i64..100, c in -100i64..100, e in 0u64..10) {
            let (x, y, z) = (dy(a, e), dy(b, e / 2), dy(c, 0));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        }

        #[test]
        fn halve_double_round_trip(a in -1000i64..1000, e in 0u64..20) {
            let x = dy(a, e);
            prop_assert_eq!(x.halve().double(), x.clone());
            prop_assert_eq!(x.double().halve(), x);
        }

        #[test]
        fn order_matches_cross_multiplication(a in -50i64..50, ea in 0u64..8, b in -50i64..50, eb in 0u64..8) {
            let x = dy(a, ea);
            let y = dy(b, eb);
            let lhs = i128::from(a) << eb;
            let rhs = i128::from(b) << ea;
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
        }
    }
}
