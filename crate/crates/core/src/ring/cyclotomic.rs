use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Dyadic, RingError};

/// The cyclotomic polynomial `Φ_n`, coefficients from the constant term up.
///
/// Computed as `(x^n - 1) / Π_{d | n, d < n} Φ_d` with exact integer long
/// division; every divisor is monic so no fractions arise.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic_polynomial needs n >= 1");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = div_exact_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let mut rem = num.to_vec();
    let qlen = rem.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// `Z[1/2][A] / (Φ_{2N})`: the coefficient ring at a primitive `2N`-th root
/// of unity, in the power basis `1, A, ..., A^{d-1}`.
#[derive(Debug)]
pub struct CyclotomicRing {
    n: u32,
    modulus: Vec<BigInt>,
    /// `A^j` reduced, for `0 <= j < 2N`.
    powers: Vec<Vec<Dyadic>>,
}

impl CyclotomicRing {
    /// Shared context for `N`; `N` must be odd and at least 3.
    pub fn get(n: u32) -> Result<Arc<CyclotomicRing>, RingError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(RingError::BadOrder(n));
        }
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        Ok(guard.entry(n).or_insert_with(|| Arc::new(CyclotomicRing::build(n))).clone())
    }

    fn build(n: u32) -> Self {
        let modulus = cyclotomic_polynomial(2 * n);
        let d = modulus.len() - 1;
        let mut powers = Vec::with_capacity(2 * n as usize);
        let mut cur = vec![Dyadic::zero(); d];
        cur[0] = Dyadic::one();
        for _ in 0..2 * n {
            powers.push(cur.clone());
            // multiply by A: shift up, then fold the overflow coefficient back
            let top = cur[d - 1].clone();
            for j in (1..d).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = Dyadic::zero();
            if !top.is_zero() {
                for (j, mj) in modulus.iter().take(d).enumerate() {
                    cur[j] = &cur[j] - &(&top * &Dyadic::from_int(mj.clone()));
                }
            }
        }
        CyclotomicRing { n, modulus, powers }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Degree of `Φ_{2N}`, i.e. the length of a coordinate vector.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Coordinates of `A^e`, any integer `e`.
    pub fn power(&self, e: i64) -> &[Dyadic] {
        let m = 2 * self.n as i64;
        &self.powers[e.rem_euclid(m) as usize]
    }

    /// Reduce a dense polynomial in `A` (nonnegative exponents) modulo `Φ_{2N}`.
    pub(crate) fn reduce(&self, mut poly: Vec<Dyadic>) -> Vec<Dyadic> {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let base = poly.len() - d;
            for (j, mj) in self.modulus.iter().take(d).enumerate() {
                poly[base + j] = &poly[base + j] - &(&top * &Dyadic::from_int(mj.clone()));
            }
        }
        poly.resize(d, Dyadic::zero());
        poly
    }
}
