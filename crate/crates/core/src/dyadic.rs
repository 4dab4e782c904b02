//! Exact non-negative dyadic rationals `num / 2^exp`.
//!
//! Every threshold in the solver is a product of integers and dyadics, so all
//! comparisons reduce to integer arithmetic after shifting by a power of two.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: u128) -> u32 {
    assert!(x >= 1, "ceil_log2 of zero");
    if x == 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// `floor(log2(x))` for `x >= 1`.
pub fn floor_log2(x: u128) -> u32 {
    assert!(x >= 1, "floor_log2 of zero");
    127 - x.leading_zeros()
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: u128, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(v: u128) -> Self {
        Dyadic { num: v, exp: 0 }
    }

    /// `2^-exp`.
    pub fn pow2_recip(exp: u32) -> Self {
        Dyadic { num: 1, exp }
    }

    /// Largest power of two that is `<= 1/x`.
    pub fn recip_floor(x: u128) -> Self {
        Dyadic::pow2_recip(ceil_log2(x))
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True when the value is `2^-j` for some `j >= 0`.
    pub fn is_pow2_recip(&self) -> bool {
        self.num == 1
    }

    pub fn checked_mul(&self, other: &Dyadic) -> Option<Dyadic> {
        Some(Dyadic::new(
            self.num.checked_mul(other.num)?,
            self.exp.checked_add(other.exp)?,
        ))
    }

    pub fn checked_mul_int(&self, k: u128) -> Option<Dyadic> {
        Some(Dyadic::new(self.num.checked_mul(k)?, self.exp))
    }

    pub fn halve(&self, times: u32) -> Dyadic {
        Dyadic::new(self.num, self.exp + times)
    }

    /// Value multiplied by `2^exp`, i.e. the numerator at a given denominator.
    /// Fails if `exp` is smaller than this value's own exponent.
    pub fn scaled_to(&self, exp: u32) -> Option<u128> {
        let shift = exp.checked_sub(self.exp)?;
        if self.num == 0 {
            return Some(0);
        }
        self.num.checked_mul(1u128.checked_shl(shift)?)
    }

    pub fn ceil(&self) -> u128 {
        let den = 1u128 << self.exp;
        self.num.div_ceil(den)
    }

    pub fn floor(&self) -> u128 {
        self.num >> self.exp
    }

    /// Compare `self` against the integer `v` exactly.
    pub fn cmp_int(&self, v: u128) -> Ordering {
        match v.checked_mul(1u128 << self.exp) {
            Some(scaled) => self.num.cmp(&scaled),
            None => Ordering::Less,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/2^ea vs b/2^eb: lift the smaller exponent. An overflowing lift is
        // necessarily larger than any u128 on the other side.
        if self.exp <= other.exp {
            match self.scaled_to(other.exp) {
                Some(a) => a.cmp(&other.num),
                None => Ordering::Greater,
            }
        } else {
            match other.scaled_to(self.exp) {
                Some(b) => self.num.cmp(&b),
                None => Ordering::Less,
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else if self.exp < 128 {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `num`, `num/den` with `den` a power of two, or `num/2^k`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        let Some((n, d)) = s.split_once('/') else {
            return s.parse::<u128>().map(Dyadic::from_int).map_err(|_| bad());
        };
        let num: u128 = n.trim().parse().map_err(|_| bad())?;
        let d = d.trim();
        let exp = if let Some(k) = d.strip_prefix("2^") {
            k.parse::<u32>().map_err(|_| bad())?
        } else {
            let den: u128 = d.parse().map_err(|_| bad())?;
            if den == 0 || !den.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "denominator of {s:?} must be a power of two"
                )));
            }
            den.trailing_zeros()
        };
        Ok(Dyadic::new(num, exp))
    }
}
