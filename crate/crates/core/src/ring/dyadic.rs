use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// An element of `Z[1/2]`, stored as `numerator / 2^exponent`.
///
/// The representation is canonical: the numerator is odd, or it is zero and
/// then the exponent is zero too. Structural equality is therefore value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigInt::one(), exp: 0 }
    }

    pub fn half() -> Self {
        Dyadic { num: BigInt::one(), exp: 1 }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Denominator is `2^exponent`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// Integer value if this dyadic has no denominator and fits an `i128`.
    pub fn to_i128(&self) -> Option<i128> {
        if self.exp != 0 {
            return None;
        }
        i128::try_from(&self.num).ok()
    }

    pub fn scale_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            Dyadic::new(&self.num << (k as usize), self.exp)
        } else {
            let down = (-k) as u32;
            Dyadic::new(self.num.clone(), self.exp + down)
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exp as u64) as u32;
        if shift > 0 {
            self.num >>= shift as usize;
            self.exp -= shift;
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<i128> for Dyadic {
    fn from(n: i128) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic::from_int(n)
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let exp = self.exp.max(rhs.exp);
        let a = &self.num << ((exp - self.exp) as usize);
        let b = &rhs.num << ((exp - rhs.exp) as usize);
        Dyadic::new(a + b, exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

/// Canonical text form `p/2^k`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

/// Accepts `p/2^k`, a bare integer `p`, or `p/d` where `d` is a power of two.
impl FromStr for Dyadic {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RingError::Parse(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((n, d)) => (n.trim(), Some(d.trim())),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let exp = match den {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.parse::<u32>().map_err(|_| bad())?
                } else {
                    let d: BigInt = d.parse().map_err(|_| bad())?;
                    if !d.is_positive() {
                        return Err(bad());
                    }
                    let tz = d.trailing_zeros().unwrap_or(0);
                    if d != BigInt::one() << (tz as usize) {
                        return Err(RingError::NonDyadic(s.to_string()));
                    }
                    tz as u32
                }
            }
        };
        Ok(Dyadic::new(num, exp))
    }
}
