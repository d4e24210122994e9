//! Chebyshev polynomials of the first kind, threading, and the threaded
//! basis `Π T_{k_i}(S_i)` over primitive components.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::SkeinElement;
use crate::curves::{decompose, Coloring};
use crate::error::Result;
use crate::ring::{Coefficient, Dyadic, RingMode};
use crate::surface::IdealTriangulation;

/// Integer polynomial, constant term first.
pub type IntPoly = Vec<BigInt>;

/// `T_k` in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebPoly {
    pub k: u32,
    pub coeffs: IntPoly,
}

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let get = |p: &[BigInt], i: usize| p.get(i).cloned().unwrap_or_default();
    trim((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

pub fn poly_sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let neg: IntPoly = b.iter().map(|x| -x).collect();
    poly_add(a, &neg)
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `p(q(x))`.
pub fn poly_compose(p: &[BigInt], q: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero()];
    for c in p.iter().rev() {
        out = poly_add(&poly_mul(&out, q), std::slice::from_ref(c));
    }
    out
}

static CHEB: OnceLock<RwLock<Vec<Arc<ChebPoly>>>> = OnceLock::new();

/// `T_k`, by the three-term recursion; cached.
pub fn cheb_poly(k: u32) -> Arc<ChebPoly> {
    let table = CHEB.get_or_init(|| {
        let t0 = ChebPoly { k: 0, coeffs: vec![BigInt::from(2)] };
        let t1 = ChebPoly { k: 1, coeffs: vec![BigInt::zero(), BigInt::one()] };
        RwLock::new(vec![Arc::new(t0), Arc::new(t1)])
    });
    if let Some(p) = table.read().unwrap_or_else(|e| e.into_inner()).get(k as usize) {
        return p.clone();
    }
    let mut w = table.write().unwrap_or_else(|e| e.into_inner());
    let x = [BigInt::zero(), BigInt::one()];
    while w.len() <= k as usize {
        let n = w.len();
        let next = poly_sub(&poly_mul(&x, &w[n - 1].coeffs), &w[n - 2].coeffs);
        w.push(Arc::new(ChebPoly { k: n as u32, coeffs: next }));
    }
    w[k as usize].clone()
}

/// `T_k(x) = Σ_i (-1)^i k/(k-i) C(k-i, i) x^{k-2i}` for `k >= 1`.
pub fn cheb_closed_form(k: u32) -> IntPoly {
    if k == 0 {
        return vec![BigInt::from(2)];
    }
    let mut out = vec![BigInt::zero(); k as usize + 1];
    for i in 0..=k / 2 {
        let c = BigInt::from(k) * binomial(k - i, i) / BigInt::from(k - i);
        out[(k - 2 * i) as usize] = if i % 2 == 0 { c } else { -c };
    }
    out
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

type PowerTable = BTreeMap<u32, Arc<Vec<(u32, Dyadic)>>>;

static POW: OnceLock<RwLock<PowerTable>> = OnceLock::new();

/// Coefficients `c_{m,k}` with `x^m = Σ c_{m,k} T_k`, nonzero ones only, by
/// peeling off leading terms (each `T_k`, `k >= 1`, is monic; `T_0 = 2`).
pub fn power_to_cheb(m: u32) -> Arc<Vec<(u32, Dyadic)>> {
    let cache = POW.get_or_init(Default::default);
    if let Some(hit) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&m) {
        return hit.clone();
    }
    let mut rest: IntPoly = vec![BigInt::zero(); m as usize + 1];
    rest[m as usize] = BigInt::one();
    let mut out = Vec::new();
    for k in (0..=m).rev() {
        let c = rest.get(k as usize).cloned().unwrap_or_default();
        if c.is_zero() {
            continue;
        }
        if k == 0 {
            out.push((0, Dyadic::new(c, 1)));
        } else {
            let tk: IntPoly = cheb_poly(k).coeffs.iter().map(|x| x * &c).collect();
            rest = poly_sub(&rest, &tk);
            out.push((k, Dyadic::from_int(c)));
        }
    }
    out.reverse();
    let out = Arc::new(out);
    cache.write().unwrap_or_else(|e| e.into_inner()).insert(m, out.clone());
    out
}

/// A product of threaded components, `Π T_{k_i}(S_i)`, sorted by component,
/// with no zero exponents.
pub type ThreadKey = Vec<(Coloring, u32)>;

/// An element in the threaded basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadedElement {
    mode: RingMode,
    terms: BTreeMap<ThreadKey, Coefficient>,
}

impl ThreadedElement {
    pub fn zero(mode: RingMode) -> Self {
        ThreadedElement { mode, terms: BTreeMap::new() }
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn terms(&self) -> &BTreeMap<ThreadKey, Coefficient> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut key: ThreadKey, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        key.retain(|(_, k)| *k > 0);
        key.sort();
        match self.terms.remove(&key) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn from_terms(mode: RingMode, terms: impl IntoIterator<Item = (ThreadKey, Coefficient)>) -> Self {
        let mut t = ThreadedElement::zero(mode);
        for (k, c) in terms {
            t.add_term(k, c);
        }
        t
    }
}

/// `Σ_j c_j S^j` as colorings `j f_S`.
fn powers_of(component: &Coloring, poly: &[BigInt]) -> Vec<(Coloring, Dyadic)> {
    poly.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (component.scaled(j as u32), Dyadic::from_int(c.clone())))
        .collect()
}

/// Multiply out disjoint factors, each a list of (coloring, scalar).
fn multiply_disjoint(edges: usize, factors: &[Vec<(Coloring, Dyadic)>]) -> Vec<(Coloring, Dyadic)> {
    let mut acc = vec![(Coloring::zero(edges), Dyadic::one())];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for (ca, xa) in &acc {
            for (cb, xb) in f {
                next.push((ca.add(cb), xa * xb));
            }
        }
        acc = next;
    }
    acc
}

/// Rewrite each diagram as a polynomial in its components, then each power
/// `S^m` in the Chebyshev basis. Components of one diagram are disjoint, so
/// the factors commute.
pub fn to_threaded(surface: &IdealTriangulation, x: &SkeinElement) -> Result<ThreadedElement> {
    let mut out = ThreadedElement::zero(x.mode());
    for (f, c) in x.terms() {
        let parts = decompose(surface, f)?.parts;
        let mut keys: Vec<(ThreadKey, Dyadic)> = vec![(Vec::new(), Dyadic::one())];
        for (component, m) in &parts {
            let mut next = Vec::new();
            for (key, scalar) in &keys {
                for (k, ck) in power_to_cheb(*m).iter() {
                    let mut key = key.clone();
                    // T_0(S) = 2 is a scalar
                    let s = if *k == 0 { ck.scale_pow2(1) } else { ck.clone() };
                    if *k > 0 {
                        key.push((component.clone(), *k));
                    }
                    next.push((key, scalar * &s));
                }
            }
            keys = next;
        }
        for (key, s) in keys {
            out.add_term(key, c.scale(&s));
        }
    }
    Ok(out)
}

pub fn expand_threaded(surface: &IdealTriangulation, t: &ThreadedElement) -> SkeinElement {
    let mut out = SkeinElement::zero(t.mode);
    for (key, c) in &t.terms {
        let factors: Vec<_> = key.iter().map(|(s, k)| powers_of(s, &cheb_poly(*k).coeffs)).collect();
        for (f, x) in multiply_disjoint(surface.num_edges(), &factors) {
            out.add_term(f, c.scale(&x));
        }
    }
    out
}

/// The threading map: every component `S` of multiplicity `m` becomes
/// `T_N(S)^m`, expanded back to diagrams.
pub fn thread_tau(surface: &IdealTriangulation, x: &SkeinElement, n: u32) -> Result<SkeinElement> {
    let tn = &cheb_poly(n).coeffs;
    let mut out = SkeinElement::zero(x.mode());
    for (f, c) in x.terms() {
        let parts = decompose(surface, f)?.parts;
        let factors: Vec<_> = parts
            .iter()
            .map(|(s, m)| {
                let p = (0..*m).fold(vec![BigInt::one()], |acc, _| poly_mul(&acc, tn));
                powers_of(s, &p)
            })
            .collect();
        for (g, scalar) in multiply_disjoint(surface.num_edges(), &factors) {
            out.add_term(g, c.scale(&scalar));
        }
    }
    Ok(out)
}

/// `T_{aN}(S) T_r(S)` per component with `r < N`; `a = 0` or `r = 0` drops
/// that factor.
pub type ReducedKey = Vec<(Coloring, u32, u32)>;

/// A threaded element with every exponent split as `aN + r`, `r < N`: a
/// combination of `T_r` monomials with coefficients in the threaded
/// central part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedElement {
    pub n: u32,
    pub mode: RingMode,
    pub terms: BTreeMap<ReducedKey, Coefficient>,
}

/// `T_k` as `Σ ± T_{aN} T_r`, via `T_{aN+r} = T_{aN} T_r - T_{aN-r}`.
fn reduce_exponent(k: u32, n: u32) -> Vec<(i64, u32, u32)> {
    let (a, r) = (k / n, k % n);
    if a == 0 || r == 0 {
        return vec![(1, a, r)];
    }
    let mut out = vec![(1, a, r)];
    out.extend(reduce_exponent(a * n - r, n).into_iter().map(|(s, a, r)| (-s, a, r)));
    out
}

pub fn reduce_mod_n(t: &ThreadedElement, n: u32) -> ReducedElement {
    let mut terms: BTreeMap<ReducedKey, Coefficient> = BTreeMap::new();
    for (key, c) in &t.terms {
        let mut acc: Vec<(ReducedKey, i64)> = vec![(Vec::new(), 1)];
        for (s, k) in key {
            let mut next = Vec::new();
            for (rk, sign) in &acc {
                for (sg, a, r) in reduce_exponent(*k, n) {
                    let mut rk = rk.clone();
                    rk.push((s.clone(), a, r));
                    next.push((rk, sign * sg));
                }
            }
            acc = next;
        }
        for (rk, sign) in acc {
            let v = c.scale(&Dyadic::from_int(sign));
            let slot = terms.entry(rk).or_insert_with(|| Coefficient::zero(t.mode));
            *slot = &*slot + &v;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    ReducedElement { n, mode: t.mode, terms }
}

/// Back to the threaded basis with `T_{aN} T_r = T_{aN+r} + T_{aN-r}`.
pub fn unreduce(r: &ReducedElement) -> ThreadedElement {
    let mut out = ThreadedElement::zero(r.mode);
    for (key, c) in &r.terms {
        let mut acc: Vec<ThreadKey> = vec![Vec::new()];
        for (s, a, rr) in key {
            let ks: Vec<u32> = if *a > 0 && *rr > 0 { vec![a * r.n + rr, a * r.n - rr] } else { vec![a * r.n + rr] };
            acc = acc
                .into_iter()
                .flat_map(|k0| {
                    ks.iter().map(move |k| {
                        let mut k0 = k0.clone();
                        k0.push((s.clone(), *k));
                        k0
                    })
                })
                .collect();
        }
        for key in acc {
            out.add_term(key, c.clone());
        }
    }
    out
}

/// Polynomial in `t = T_N(x)` over `Z[1/2]`, constant term first.
pub type TPoly = Vec<Dyadic>;

fn tpoly_trim(mut p: TPoly) -> TPoly {
    while p.last().is_some_and(Dyadic::is_zero) {
        p.pop();
    }
    p
}

fn tpoly_add(a: &[Dyadic], b: &[Dyadic]) -> TPoly {
    let n = a.len().max(b.len());
    let get = |p: &[Dyadic], i: usize| p.get(i).cloned().unwrap_or_default();
    tpoly_trim((0..n).map(|i| &get(a, i) + &get(b, i)).collect())
}

fn tpoly_scale(a: &[Dyadic], c: &Dyadic) -> TPoly {
    tpoly_trim(a.iter().map(|x| x * c).collect())
}

fn tpoly_from_int(p: &[BigInt]) -> TPoly {
    tpoly_trim(p.iter().map(|x| Dyadic::from_int(x.clone())).collect())
}

/// An element of the skein algebra of the annulus written over the
/// threaded subalgebra: coordinates on `T_0, ..., T_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusElement {
    pub coords: Vec<TPoly>,
}

/// `T_m(x)` in annulus coordinates, using `T_{aN} = T_a(t)` and
/// `T_{aN+r} = T_a(t) T_r - T_{aN-r}`.
pub fn annulus_express(m: u32, n: u32) -> AnnulusElement {
    let mut coords = vec![TPoly::new(); n as usize];
    let (a, r) = (m / n, m % n);
    if a == 0 {
        coords[r as usize] = vec![Dyadic::one()];
    } else if r == 0 {
        // T_{aN} = (T_a(t) / 2) T_0
        coords[0] = tpoly_scale(&tpoly_from_int(&cheb_poly(a).coeffs), &Dyadic::half());
    } else {
        let rest = annulus_express(a * n - r, n);
        for (i, c) in rest.coords.into_iter().enumerate() {
            coords[i] = tpoly_scale(&c, &Dyadic::from_int(-1));
        }
        coords[r as usize] = tpoly_add(&coords[r as usize], &tpoly_from_int(&cheb_poly(a).coeffs));
    }
    AnnulusElement { coords }
}

/// Matrix of multiplication by `T_k` on the basis `T_0, ..., T_{N-1}`;
/// entry `[i][j]` is the `T_i` coordinate of `T_k T_j`.
pub fn annulus_mult_matrix(k: u32, n: u32) -> Vec<Vec<TPoly>> {
    let mut m = vec![vec![TPoly::new(); n as usize]; n as usize];
    for j in 0..n {
        let hi = annulus_express(k + j, n);
        let lo = annulus_express(k.abs_diff(j), n);
        for (i, row) in m.iter_mut().enumerate() {
            row[j as usize] = tpoly_add(&hi.coords[i], &lo.coords[i]);
        }
    }
    m
}

pub fn matrix_trace(m: &[Vec<TPoly>]) -> TPoly {
    m.iter().enumerate().fold(TPoly::new(), |acc, (i, row)| tpoly_add(&acc, &row[i]))
}

/// `N T_a(t)` when `k = aN`, else zero.
pub fn expected_annulus_trace(k: u32, n: u32) -> TPoly {
    if !k.is_multiple_of(n) {
        return TPoly::new();
    }
    tpoly_scale(&tpoly_from_int(&cheb_poly(k / n).coeffs), &Dyadic::from_int(n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SkeinElement;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn c(v: &[u32]) -> Coloring {
        Coloring::new(v.to_vec())
    }

    fn torus() -> IdealTriangulation {
        IdealTriangulation::preset("punctured_torus").unwrap()
    }

    #[test]
    fn small_chebyshev() {
        assert_eq!(cheb_poly(0).coeffs, ints(&[2]));
        assert_eq!(cheb_poly(2).coeffs, ints(&[-2, 0, 1]));
        assert_eq!(cheb_poly(5).coeffs, ints(&[0, 5, 0, -5, 0, 1]));
    }

    #[test]
    fn recursion_matches_closed_form() {
        for k in 0..=30 {
            assert_eq!(cheb_poly(k).coeffs, cheb_closed_form(k), "k = {k}");
        }
    }

    #[test]
    fn product_to_sum_and_composition() {
        for m in 0..=12u32 {
            for n in 0..=12u32 {
                let lhs = poly_mul(&cheb_poly(m).coeffs, &cheb_poly(n).coeffs);
                let rhs = poly_add(&cheb_poly(m + n).coeffs, &cheb_poly(m.abs_diff(n)).coeffs);
                assert_eq!(lhs, rhs, "T_{m} T_{n}");
            }
        }
        for m in 1..=6u32 {
            for n in 1..=6u32 {
                assert_eq!(poly_compose(&cheb_poly(m).coeffs, &cheb_poly(n).coeffs), cheb_poly(m * n).coeffs);
            }
        }
    }

    #[test]
    fn power_basis_change() {
        assert_eq!(*power_to_cheb(0), vec![(0, Dyadic::half())]);
        assert_eq!(*power_to_cheb(2), vec![(0, Dyadic::one()), (2, Dyadic::one())]);
        for m in 0..=12u32 {
            // x = z + 1/z, T_k = z^k + z^-k: x^m = Σ_j C(m, j) z^{m-2j}
            let mut want = Vec::new();
            for k in (0..=m).rev().filter(|k| (m - k) % 2 == 0) {
                let b = binomial(m, (m - k) / 2);
                want.push((k, if k == 0 { Dyadic::new(b, 1) } else { Dyadic::from_int(b) }));
            }
            want.reverse();
            assert_eq!(*power_to_cheb(m), want, "m = {m}");
            // expanding back gives x^m
            let mut back = vec![Dyadic::zero(); m as usize + 1];
            for (k, ck) in power_to_cheb(m).iter() {
                for (i, t) in cheb_poly(*k).coeffs.iter().enumerate() {
                    back[i] = &back[i] + &(ck * &Dyadic::from_int(t.clone()));
                }
            }
            let mut xm = vec![Dyadic::zero(); m as usize + 1];
            xm[m as usize] = Dyadic::one();
            assert_eq!(back, xm);
        }
    }

    #[test]
    fn threading_a_double_curve() {
        let g = RingMode::Generic;
        let s = torus();
        let x = SkeinElement::diagram(g, c(&[2, 2, 0]));
        let t = to_threaded(&s, &x).unwrap();
        // S^2 = T_2(S) + 2
        let want = ThreadedElement::from_terms(
            g,
            [(vec![(c(&[1, 1, 0]), 2)], Coefficient::one(g)), (vec![], Coefficient::from_int(g, 2))],
        );
        assert_eq!(t, want);
        assert_eq!(expand_threaded(&s, &t), x);
        let single = to_threaded(&s, &SkeinElement::diagram(g, c(&[1, 0, 1]))).unwrap();
        assert_eq!(single, ThreadedElement::from_terms(g, [(vec![(c(&[1, 0, 1]), 1)], Coefficient::one(g))]));
    }

    #[test]
    fn tau_of_a_curve() {
        let g = RingMode::Generic;
        let s = torus();
        let tau = thread_tau(&s, &SkeinElement::diagram(g, c(&[1, 1, 0])), 3).unwrap();
        let want = SkeinElement::from_terms(
            g,
            [(c(&[3, 3, 0]), Coefficient::one(g)), (c(&[1, 1, 0]), Coefficient::from_int(g, -3))],
        )
        .unwrap();
        assert_eq!(tau, want);
        let one = SkeinElement::one(g, 3);
        assert_eq!(thread_tau(&s, &one, 3).unwrap(), one);
        let sym = crate::algebra::symbol(&tau).unwrap();
        assert_eq!(sym.leading.keys().cloned().collect::<Vec<_>>(), vec![c(&[3, 3, 0])]);
    }

    #[test]
    fn tau_is_multiplicative_on_powers() {
        let g = RingMode::Generic;
        let s = torus();
        let tau2 = thread_tau(&s, &SkeinElement::diagram(g, c(&[2, 2, 0])), 3).unwrap();
        // (S^3 - 3S)^2 = S^6 - 6 S^4 + 9 S^2
        let want = SkeinElement::from_terms(
            g,
            [
                (c(&[6, 6, 0]), Coefficient::one(g)),
                (c(&[4, 4, 0]), Coefficient::from_int(g, -6)),
                (c(&[2, 2, 0]), Coefficient::from_int(g, 9)),
            ],
        )
        .unwrap();
        assert_eq!(tau2, want);
    }

    #[test]
    fn reduction_examples() {
        let g = RingMode::Generic;
        let s = c(&[1, 1, 0]);
        let t = ThreadedElement::from_terms(g, [(vec![(s.clone(), 3)], Coefficient::one(g))]);
        let r = reduce_mod_n(&t, 3);
        assert_eq!(r.terms.keys().cloned().collect::<Vec<_>>(), vec![vec![(s.clone(), 1, 0)]]);
        let t4 = ThreadedElement::from_terms(g, [(vec![(s.clone(), 4)], Coefficient::one(g))]);
        let r4 = reduce_mod_n(&t4, 3);
        let want: BTreeMap<ReducedKey, Coefficient> = [
            (vec![(s.clone(), 1, 1)], Coefficient::one(g)),
            (vec![(s.clone(), 0, 2)], Coefficient::from_int(g, -1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(r4.terms, want);
        for k in 1..=20 {
            let t = ThreadedElement::from_terms(g, [(vec![(s.clone(), k)], Coefficient::one(g))]);
            let r = reduce_mod_n(&t, 5);
            assert!(r.terms.keys().all(|key| key.iter().all(|(_, _, rr)| *rr < 5)));
            assert_eq!(unreduce(&r), t, "k = {k}");
        }
    }

    #[test]
    fn annulus_examples() {
        for n in [3u32, 5] {
            let id = annulus_mult_matrix(0, n);
            for (i, row) in id.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let want = if i == j { vec![Dyadic::from_int(2)] } else { vec![] };
                    assert_eq!(*e, want);
                }
            }
            for k in 0..=4 * n {
                assert_eq!(matrix_trace(&annulus_mult_matrix(k, n)), expected_annulus_trace(k, n), "k = {k}, N = {n}");
            }
        }
        // k = N: trace N t
        assert_eq!(matrix_trace(&annulus_mult_matrix(3, 3)), vec![Dyadic::zero(), Dyadic::from_int(3)]);
    }
}
