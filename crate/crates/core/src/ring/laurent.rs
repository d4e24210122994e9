use std::collections::BTreeMap;

use super::RingError;

/// Integer Laurent polynomial in `A`, the native output of the state sum.
///
/// Arithmetic is checked; overflow surfaces as [`RingError::Overflow`]
/// rather than wrapping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntLaurent {
    terms: BTreeMap<i32, i128>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        IntLaurent::default()
    }

    pub fn one() -> Self {
        IntLaurent::monomial(1, 0)
    }

    pub fn monomial(c: i128, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        IntLaurent { terms }
    }

    /// `-A^2 - A^{-2}`.
    pub fn loop_value() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(-2, -1);
        terms.insert(2, -1);
        IntLaurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i128)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: i32, c: i128) -> Result<(), RingError> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot = slot.checked_add(c).ok_or(RingError::Overflow)?;
        if *slot == 0 {
            self.terms.remove(&e);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &IntLaurent) -> Result<(), RingError> {
        for (e, c) in other.terms() {
            self.add_term(e, c)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &IntLaurent) -> Result<IntLaurent, RingError> {
        let mut out = IntLaurent::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let c = ca.checked_mul(cb).ok_or(RingError::Overflow)?;
                out.add_term(ea + eb, c)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<IntLaurent, RingError> {
        let mut out = IntLaurent::one();
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}
