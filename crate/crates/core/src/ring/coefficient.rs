use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{CyclotomicRing, Dyadic, IntLaurent, RingError};

/// Which coefficient ring a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingMode {
    /// Laurent polynomials in `A` over `Z[1/2]`.
    Generic,
    /// `Z[1/2][A]/(Φ_{2N})`, `A` a primitive `2N`-th root of unity.
    Cyclotomic(u32),
}

impl RingMode {
    pub fn cyclotomic(n: u32) -> Result<RingMode, RingError> {
        CyclotomicRing::get(n)?;
        Ok(RingMode::Cyclotomic(n))
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMode::Generic => write!(f, "generic"),
            RingMode::Cyclotomic(n) => write!(f, "cyclotomic:{n}"),
        }
    }
}

impl std::str::FromStr for RingMode {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "generic" => Ok(RingMode::Generic),
            other => {
                let n = other
                    .strip_prefix("cyclotomic:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| RingError::Parse(s.to_string()))?;
                RingMode::cyclotomic(n)
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Generic(BTreeMap<i64, Dyadic>),
    Cyclotomic(Arc<CyclotomicRing>, Vec<Dyadic>),
}

/// An exact scalar of the skein algebra.
#[derive(Clone, Debug)]
pub struct Coefficient {
    repr: Repr,
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Generic(a), Repr::Generic(b)) => a == b,
            (Repr::Cyclotomic(ra, a), Repr::Cyclotomic(rb, b)) => ra.order() == rb.order() && a == b,
            _ => false,
        }
    }
}

impl Eq for Coefficient {}

impl Coefficient {
    pub fn zero(mode: RingMode) -> Self {
        match mode {
            RingMode::Generic => Coefficient { repr: Repr::Generic(BTreeMap::new()) },
            RingMode::Cyclotomic(n) => {
                let ring = ring_for(n);
                let d = ring.degree();
                Coefficient { repr: Repr::Cyclotomic(ring, vec![Dyadic::zero(); d]) }
            }
        }
    }

    pub fn one(mode: RingMode) -> Self {
        Coefficient::monomial(mode, Dyadic::one(), 0)
    }

    pub fn from_dyadic(mode: RingMode, c: Dyadic) -> Self {
        Coefficient::monomial(mode, c, 0)
    }

    pub fn from_int(mode: RingMode, c: i64) -> Self {
        Coefficient::monomial(mode, Dyadic::from_int(c), 0)
    }

    /// `A^e`.
    pub fn a_power(mode: RingMode, e: i64) -> Self {
        Coefficient::monomial(mode, Dyadic::one(), e)
    }

    /// `c * A^e`.
    pub fn monomial(mode: RingMode, c: Dyadic, e: i64) -> Self {
        match mode {
            RingMode::Generic => {
                let mut terms = BTreeMap::new();
                if !c.is_zero() {
                    terms.insert(e, c);
                }
                Coefficient { repr: Repr::Generic(terms) }
            }
            RingMode::Cyclotomic(n) => {
                let ring = ring_for(n);
                let coords = ring.power(e).iter().map(|x| x * &c).collect();
                Coefficient { repr: Repr::Cyclotomic(ring, coords) }
            }
        }
    }

    /// Image of a Laurent polynomial `Σ c_e A^e` in `mode`.
    pub fn from_laurent(mode: RingMode, terms: &BTreeMap<i64, Dyadic>) -> Self {
        match mode {
            RingMode::Generic => {
                let terms = terms.iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (*e, c.clone())).collect();
                Coefficient { repr: Repr::Generic(terms) }
            }
            RingMode::Cyclotomic(n) => {
                let ring = ring_for(n);
                let mut coords = vec![Dyadic::zero(); ring.degree()];
                for (e, c) in terms {
                    for (slot, p) in coords.iter_mut().zip(ring.power(*e)) {
                        if !p.is_zero() {
                            *slot = &*slot + &(p * c);
                        }
                    }
                }
                Coefficient { repr: Repr::Cyclotomic(ring, coords) }
            }
        }
    }

    pub fn from_int_laurent(mode: RingMode, poly: &IntLaurent) -> Self {
        let terms: BTreeMap<i64, Dyadic> =
            poly.terms().map(|(e, c)| (e as i64, Dyadic::from_int(c))).collect();
        Coefficient::from_laurent(mode, &terms)
    }

    /// Cyclotomic coefficient from power-basis coordinates.
    pub fn from_coords(n: u32, coords: Vec<Dyadic>) -> Result<Self, RingError> {
        let ring = CyclotomicRing::get(n)?;
        if coords.len() != ring.degree() {
            return Err(RingError::CoordLength { expected: ring.degree(), got: coords.len() });
        }
        Ok(Coefficient { repr: Repr::Cyclotomic(ring, coords) })
    }

    pub fn mode(&self) -> RingMode {
        match &self.repr {
            Repr::Generic(_) => RingMode::Generic,
            Repr::Cyclotomic(r, _) => RingMode::Cyclotomic(r.order()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Generic(t) => t.is_empty(),
            Repr::Cyclotomic(_, c) => c.iter().all(Dyadic::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Coefficient::one(self.mode())
    }

    /// Generic-mode terms; `None` in cyclotomic mode.
    pub fn laurent_terms(&self) -> Option<&BTreeMap<i64, Dyadic>> {
        match &self.repr {
            Repr::Generic(t) => Some(t),
            Repr::Cyclotomic(..) => None,
        }
    }

    /// Cyclotomic coordinates; `None` in generic mode.
    pub fn coords(&self) -> Option<&[Dyadic]> {
        match &self.repr {
            Repr::Generic(_) => None,
            Repr::Cyclotomic(_, c) => Some(c),
        }
    }

    /// All dyadic entries of the representation.
    pub fn entries(&self) -> Vec<&Dyadic> {
        match &self.repr {
            Repr::Generic(t) => t.values().collect(),
            Repr::Cyclotomic(_, c) => c.iter().filter(|x| !x.is_zero()).collect(),
        }
    }

    /// Largest `k` such that `2^k` appears in a denominator.
    pub fn denominator_exponent(&self) -> u32 {
        self.entries().into_iter().map(Dyadic::exponent).max().unwrap_or(0)
    }

    /// If this value is `c * A^e` for a single exponent, returns `(c, e)`.
    ///
    /// In cyclotomic mode the exponent is reported in `0..2N`.
    pub fn as_monomial(&self) -> Option<(Dyadic, i64)> {
        match &self.repr {
            Repr::Generic(t) if t.len() == 1 => t.iter().next().map(|(e, c)| (c.clone(), *e)),
            Repr::Generic(_) => None,
            Repr::Cyclotomic(ring, coords) => {
                if coords.iter().all(Dyadic::is_zero) {
                    return None;
                }
                // c*A^e = -c*A^{e+N}; report the form with a positive scalar
                for e in 0..2 * ring.order() as i64 {
                    let p = ring.power(e);
                    let Some(j) = p.iter().position(|x| x.is_one() || (-x).is_one()) else { continue };
                    let Some(scale) = ratio(&coords[j], &p[j]) else { continue };
                    if p.iter().zip(coords).all(|(a, b)| &(a * &scale) == b) && scale.numerator() > &0.into() {
                        return Some((scale, e));
                    }
                }
                None
            }
        }
    }

    pub fn try_add(&self, rhs: &Coefficient) -> Result<Coefficient, RingError> {
        self.check_mode(rhs)?;
        Ok(match (&self.repr, &rhs.repr) {
            (Repr::Generic(a), Repr::Generic(b)) => {
                let mut out = a.clone();
                for (e, c) in b {
                    add_term(&mut out, *e, c.clone());
                }
                Coefficient { repr: Repr::Generic(out) }
            }
            (Repr::Cyclotomic(ring, a), Repr::Cyclotomic(_, b)) => {
                let coords = a.iter().zip(b).map(|(x, y)| x + y).collect();
                Coefficient { repr: Repr::Cyclotomic(ring.clone(), coords) }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, rhs: &Coefficient) -> Result<Coefficient, RingError> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Coefficient) -> Result<Coefficient, RingError> {
        self.check_mode(rhs)?;
        Ok(match (&self.repr, &rhs.repr) {
            (Repr::Generic(a), Repr::Generic(b)) => {
                let mut out = BTreeMap::new();
                for (ea, ca) in a {
                    for (eb, cb) in b {
                        add_term(&mut out, ea + eb, ca * cb);
                    }
                }
                Coefficient { repr: Repr::Generic(out) }
            }
            (Repr::Cyclotomic(ring, a), Repr::Cyclotomic(_, b)) => {
                let d = ring.degree();
                let mut prod = vec![Dyadic::zero(); 2 * d - 1];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        prod[i + j] = &prod[i + j] + &(x * y);
                    }
                }
                Coefficient { repr: Repr::Cyclotomic(ring.clone(), ring.reduce(prod)) }
            }
            _ => unreachable!(),
        })
    }

    pub fn scale(&self, c: &Dyadic) -> Coefficient {
        match &self.repr {
            Repr::Generic(t) => {
                let terms = t.iter().map(|(e, x)| (*e, x * c)).filter(|(_, x)| !x.is_zero()).collect();
                Coefficient { repr: Repr::Generic(terms) }
            }
            Repr::Cyclotomic(ring, coords) => {
                Coefficient { repr: Repr::Cyclotomic(ring.clone(), coords.iter().map(|x| x * c).collect()) }
            }
        }
    }

    /// Multiply by `A^e`.
    pub fn shift(&self, e: i64) -> Coefficient {
        match &self.repr {
            Repr::Generic(t) => Coefficient { repr: Repr::Generic(t.iter().map(|(k, c)| (k + e, c.clone())).collect()) },
            Repr::Cyclotomic(..) => self * &Coefficient::a_power(self.mode(), e),
        }
    }

    /// The mirror involution `A -> A^{-1}`.
    pub fn bar(&self) -> Coefficient {
        match &self.repr {
            Repr::Generic(t) => Coefficient { repr: Repr::Generic(t.iter().map(|(e, c)| (-e, c.clone())).collect()) },
            Repr::Cyclotomic(ring, coords) => {
                let mut out = vec![Dyadic::zero(); ring.degree()];
                for (j, c) in coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (slot, p) in out.iter_mut().zip(ring.power(-(j as i64))) {
                        if !p.is_zero() {
                            *slot = &*slot + &(p * c);
                        }
                    }
                }
                Coefficient { repr: Repr::Cyclotomic(ring.clone(), out) }
            }
        }
    }

    pub fn pow(&self, k: u32) -> Coefficient {
        let mut out = Coefficient::one(self.mode());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    fn check_mode(&self, rhs: &Coefficient) -> Result<(), RingError> {
        if self.mode() != rhs.mode() {
            return Err(RingError::ModeMismatch(self.mode(), rhs.mode()));
        }
        Ok(())
    }
}

/// Value of a trivial loop, `-A^2 - A^{-2}`.
pub fn loop_scalar(mode: RingMode) -> Coefficient {
    let mut terms = BTreeMap::new();
    terms.insert(2, Dyadic::from_int(-1));
    terms.insert(-2, Dyadic::from_int(-1));
    Coefficient::from_laurent(mode, &terms)
}

fn ring_for(n: u32) -> Arc<CyclotomicRing> {
    CyclotomicRing::get(n).unwrap_or_else(|e| panic!("invalid cyclotomic mode: {e}"))
}

fn add_term(map: &mut BTreeMap<i64, Dyadic>, e: i64, c: Dyadic) {
    if c.is_zero() {
        return;
    }
    let sum = match map.get(&e) {
        Some(old) => old + &c,
        None => c,
    };
    if sum.is_zero() {
        map.remove(&e);
    } else {
        map.insert(e, sum);
    }
}

fn ratio(num: &Dyadic, den: &Dyadic) -> Option<Dyadic> {
    if den.is_one() {
        Some(num.clone())
    } else if (-den).is_one() {
        Some(-num)
    } else {
        None
    }
}

// Operator forms panic on mixed modes; use the `try_*` methods where the
// modes are not already known to agree.

impl Add<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(&Dyadic::from_int(-1))
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, &Dyadic)> = match &self.repr {
            Repr::Generic(t) => t.iter().rev().map(|(e, c)| (*e, c)).collect(),
            Repr::Cyclotomic(_, c) => c.iter().enumerate().rev().map(|(e, c)| (e as i64, c)).filter(|(_, c)| !c.is_zero()).collect(),
        };
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let s = if c.is_integer() { c.numerator().to_string() } else { format!("({c})") };
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{s}")?,
                _ if c.is_one() => write!(f, "A^{e}")?,
                _ => write!(f, "{s}*A^{e}")?,
            }
        }
        Ok(())
    }
}
