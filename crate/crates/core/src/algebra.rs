//! Skein elements over the simple-diagram basis and their stacking product.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::curves::{self, Coloring};
use crate::error::{Error, Result};
use crate::planar;
use crate::ring::{Coefficient, IntLaurent, RingMode};
use crate::surface::IdealTriangulation;

/// A finite combination of simple diagrams, keyed by normal coordinates.
/// The zero coloring is the empty diagram, i.e. `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinElement {
    mode: RingMode,
    terms: BTreeMap<Coloring, Coefficient>,
}

impl SkeinElement {
    pub fn zero(mode: RingMode) -> Self {
        SkeinElement { mode, terms: BTreeMap::new() }
    }

    pub fn one(mode: RingMode, edges: usize) -> Self {
        SkeinElement::diagram(mode, Coloring::zero(edges))
    }

    pub fn diagram(mode: RingMode, f: Coloring) -> Self {
        SkeinElement::term(Coefficient::one(mode), f)
    }

    pub fn term(c: Coefficient, f: Coloring) -> Self {
        let mut x = SkeinElement::zero(c.mode());
        x.add_term(f, c);
        x
    }

    pub fn from_terms(mode: RingMode, terms: impl IntoIterator<Item = (Coloring, Coefficient)>) -> Result<Self> {
        let mut x = SkeinElement::zero(mode);
        for (f, c) in terms {
            if c.mode() != mode {
                return Err(crate::ring::RingError::ModeMismatch(mode, c.mode()).into());
            }
            x.add_term(f, c);
        }
        Ok(x)
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn terms(&self) -> &BTreeMap<Coloring, Coefficient> {
        &self.terms
    }

    pub fn coefficient(&self, f: &Coloring) -> Coefficient {
        self.terms.get(f).cloned().unwrap_or_else(|| Coefficient::zero(self.mode))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight of a diagram in the support; `None` for zero.
    pub fn weight(&self) -> Option<u64> {
        self.terms.keys().map(Coloring::weight).max()
    }

    pub fn add_term(&mut self, f: Coloring, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&f) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(f, sum);
                }
            }
            None => {
                self.terms.insert(f, c);
            }
        }
    }

    pub fn add(&self, other: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SkeinElement) -> SkeinElement {
        self.add(&other.scale(&Coefficient::from_int(other.mode, -1)))
    }

    pub fn scale(&self, c: &Coefficient) -> SkeinElement {
        let mut out = SkeinElement::zero(self.mode);
        for (f, x) in &self.terms {
            out.add_term(f.clone(), x * c);
        }
        out
    }

    /// Apply the mirror involution to every coefficient.
    pub fn bar(&self) -> SkeinElement {
        let terms = self.terms.iter().map(|(f, c)| (f.clone(), c.bar())).collect();
        SkeinElement { mode: self.mode, terms }
    }
}

/// Top-weight part of a nonzero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub weight: u64,
    pub leading: BTreeMap<Coloring, Coefficient>,
}

type PairProduct = Arc<BTreeMap<Coloring, IntLaurent>>;

/// Product context: a surface, a coefficient ring, a crossing bound, and a
/// cache of basis-pair products.
///
/// Basis-pair products are computed over `Z[A, A^-1]` and specialized to the
/// ring afterwards, so one cache serves every mode.
pub struct SkeinAlgebra {
    surface: Arc<IdealTriangulation>,
    mode: RingMode,
    max_crossings: usize,
    cache: Mutex<HashMap<(Coloring, Coloring), PairProduct>>,
}

impl SkeinAlgebra {
    pub fn new(surface: IdealTriangulation, mode: RingMode) -> Self {
        SkeinAlgebra::with_surface(Arc::new(surface), mode)
    }

    pub fn with_surface(surface: Arc<IdealTriangulation>, mode: RingMode) -> Self {
        SkeinAlgebra { surface, mode, max_crossings: planar::max_crossings_from_env(), cache: Mutex::default() }
    }

    pub fn with_max_crossings(mut self, bound: usize) -> Self {
        self.max_crossings = bound;
        self
    }

    pub fn surface(&self) -> &IdealTriangulation {
        &self.surface
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn max_crossings(&self) -> usize {
        self.max_crossings
    }

    pub fn one(&self) -> SkeinElement {
        SkeinElement::one(self.mode, self.surface.num_edges())
    }

    pub fn diagram(&self, f: Coloring) -> SkeinElement {
        SkeinElement::diagram(self.mode, f)
    }

    /// Check that an element belongs to this algebra.
    pub fn check(&self, x: &SkeinElement) -> Result<()> {
        if x.mode != self.mode {
            return Err(crate::ring::RingError::ModeMismatch(self.mode, x.mode).into());
        }
        for f in x.terms.keys() {
            curves::check_shape(&self.surface, f)?;
            if !curves::is_admissible(&self.surface, f) {
                return Err(Error::NotAdmissible(format!("{:?}", f.values())));
            }
        }
        Ok(())
    }

    /// `f * g` for two simple diagrams, over the integers.
    pub fn pair_product(&self, f: &Coloring, g: &Coloring) -> Result<PairProduct> {
        let key = (f.clone(), g.clone());
        if let Some(hit) = self.cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(hit.clone());
        }
        let value = if f.is_zero() || g.is_zero() {
            for h in [f, g] {
                curves::check_shape(&self.surface, h)?;
                if !curves::is_admissible(&self.surface, h) {
                    return Err(Error::NotAdmissible(format!("{:?}", h.values())));
                }
            }
            BTreeMap::from([(f.add(g), IntLaurent::one())])
        } else {
            let placed = planar::place(&self.surface, f, g)?;
            planar::expand(&self.surface, &placed, self.max_crossings)?
        };
        let value = Arc::new(value);
        self.cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, value.clone());
        Ok(value)
    }

    /// The stacking product, `x` over `y`.
    pub fn product(&self, x: &SkeinElement, y: &SkeinElement) -> Result<SkeinElement> {
        self.check(x)?;
        self.check(y)?;
        let pairs: Vec<(&Coloring, &Coefficient, &Coloring, &Coefficient)> = x
            .terms
            .iter()
            .flat_map(|(f, a)| y.terms.iter().map(move |(g, b)| (f, a, g, b)))
            .collect();
        let pieces = pairs
            .par_iter()
            .map(|&(f, a, g, b)| {
                let ab = a * b;
                let pp = self.pair_product(f, g)?;
                Ok(pp.iter().map(|(h, w)| (h.clone(), &ab * &Coefficient::from_int_laurent(self.mode, w))).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = SkeinElement::zero(self.mode);
        for (h, c) in pieces.into_iter().flatten() {
            out.add_term(h, c);
        }
        Ok(out)
    }

    pub fn symbol(&self, x: &SkeinElement) -> Result<Symbol> {
        symbol(x)
    }

    /// Exponent `e` with `f * g = A^e [f + g] + (lower weight)`.
    pub fn leading_exponent(&self, f: &Coloring, g: &Coloring) -> Result<i64> {
        let pp = self.pair_product(f, g)?;
        let top = f.add(g);
        let poly = pp.get(&top).ok_or_else(|| Error::NotMonomial(format!("{:?}", top.values())))?;
        let mut terms = poly.terms();
        match (terms.next(), terms.next()) {
            (Some((e, 1)), None) => Ok(e as i64),
            _ => Err(Error::NotMonomial(format!("{:?}", top.values()))),
        }
    }
}

pub fn symbol(x: &SkeinElement) -> Result<Symbol> {
    let weight = x.weight().ok_or(Error::ZeroElement)?;
    let leading = x.terms.iter().filter(|(f, _)| f.weight() == weight).map(|(f, c)| (f.clone(), c.clone())).collect();
    Ok(Symbol { weight, leading })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[u32]) -> Coloring {
        Coloring::new(v.to_vec())
    }

    fn torus(mode: RingMode) -> SkeinAlgebra {
        SkeinAlgebra::new(IdealTriangulation::preset("punctured_torus").unwrap(), mode)
    }

    #[test]
    fn unit_is_neutral() {
        let alg = torus(RingMode::Generic);
        let y = alg.diagram(c(&[1, 1, 2])).add(&alg.diagram(c(&[1, 0, 1])).scale(&Coefficient::a_power(RingMode::Generic, 3)));
        assert_eq!(alg.product(&alg.one(), &y).unwrap(), y);
        assert_eq!(alg.product(&y, &alg.one()).unwrap(), y);
    }

    #[test]
    fn golden_product() {
        let g = RingMode::Generic;
        let alg = torus(g);
        let p = alg.product(&alg.diagram(c(&[1, 0, 1])), &alg.diagram(c(&[0, 1, 1]))).unwrap();
        let want = SkeinElement::from_terms(
            g,
            [(c(&[1, 1, 2]), Coefficient::a_power(g, 1)), (c(&[1, 1, 0]), Coefficient::a_power(g, -1))],
        )
        .unwrap();
        assert_eq!(p, want);
        assert_eq!(alg.leading_exponent(&c(&[1, 0, 1]), &c(&[0, 1, 1])).unwrap(), 1);
        assert_eq!(alg.leading_exponent(&c(&[0, 1, 1]), &c(&[1, 0, 1])).unwrap(), -1);
    }

    #[test]
    fn parallel_copies_multiply_to_multicurve() {
        let alg = torus(RingMode::Generic);
        let s = alg.diagram(c(&[1, 1, 0]));
        assert_eq!(alg.product(&s, &s).unwrap(), alg.diagram(c(&[2, 2, 0])));
        assert_eq!(alg.leading_exponent(&c(&[1, 1, 0]), &c(&[1, 1, 0])).unwrap(), 0);
    }

    #[test]
    fn symbol_of_golden_product() {
        let alg = torus(RingMode::Generic);
        let p = alg.product(&alg.diagram(c(&[1, 0, 1])), &alg.diagram(c(&[0, 1, 1]))).unwrap();
        let s = symbol(&p).unwrap();
        assert_eq!(s.weight, 4);
        assert_eq!(s.leading.keys().cloned().collect::<Vec<_>>(), vec![c(&[1, 1, 2])]);
        assert_eq!(symbol(&SkeinElement::zero(RingMode::Generic)), Err(Error::ZeroElement));
    }

    #[test]
    fn weight_of_sums() {
        let g = RingMode::Generic;
        let x = SkeinElement::diagram(g, c(&[1, 1, 0]));
        let y = SkeinElement::diagram(g, c(&[1, 1, 2]));
        assert_eq!(x.add(&y).weight(), Some(4));
        assert_eq!(x.sub(&x).weight(), None);
    }

    #[test]
    fn rejects_foreign_elements() {
        let alg = torus(RingMode::Generic);
        let bad = SkeinElement::diagram(RingMode::Generic, c(&[1, 1, 1]));
        assert!(matches!(alg.product(&bad, &alg.one()), Err(Error::NotAdmissible(_))));
        let wrong_mode = SkeinElement::diagram(RingMode::Cyclotomic(3), c(&[1, 1, 0]));
        assert!(alg.product(&wrong_mode, &alg.one()).is_err());
        let short = SkeinElement::diagram(RingMode::Generic, c(&[1, 1]));
        assert!(matches!(alg.product(&short, &alg.one()), Err(Error::ColoringMismatch(_))));
    }

    #[test]
    fn crossing_bound_reports_pair() {
        let alg = torus(RingMode::Generic).with_max_crossings(0);
        let err = alg.product(&alg.diagram(c(&[1, 0, 1])), &alg.diagram(c(&[0, 1, 1]))).unwrap_err();
        assert!(matches!(err, Error::CrossingBound { crossings: 1, bound: 0, .. }));
    }
}
