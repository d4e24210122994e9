//! The trace onto the threaded central part: keep exactly the threaded
//! terms whose exponents are all multiples of `N`.

use crate::algebra::{symbol, SkeinAlgebra, SkeinElement};
use crate::cheb::{to_threaded, ThreadedElement};
use crate::curves::{decompose, Coloring};
use crate::error::{Error, Result};
use crate::ring::{CyclotomicRing, RingError, RingMode};
use crate::surface::IdealTriangulation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceResult {
    pub n: u32,
    pub value: ThreadedElement,
    pub dropped_terms: usize,
}

impl TraceResult {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Multiplier and the nonzero trace it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Zero when the element's own trace is already nonzero.
    pub multiplier: Coloring,
    pub witness: TraceResult,
}

fn check_order(n: u32) -> Result<()> {
    CyclotomicRing::get(n)?;
    Ok(())
}

pub fn trace_threaded(t: &ThreadedElement, n: u32) -> Result<TraceResult> {
    check_order(n)?;
    let mut value = ThreadedElement::zero(t.mode());
    let mut dropped_terms = 0;
    for (key, c) in t.terms() {
        if key.iter().all(|(_, k)| k % n == 0) {
            value.add_term(key.clone(), c.clone());
        } else {
            dropped_terms += 1;
        }
    }
    Ok(TraceResult { n, value, dropped_terms })
}

pub fn trace(surface: &IdealTriangulation, x: &SkeinElement, n: u32) -> Result<TraceResult> {
    check_order(n)?;
    trace_threaded(&to_threaded(surface, x)?, n)
}

fn require_root_of_unity(alg: &SkeinAlgebra, n: u32) -> Result<()> {
    check_order(n)?;
    if alg.mode() != RingMode::Cyclotomic(n) {
        return Err(RingError::ModeMismatch(RingMode::Cyclotomic(n), alg.mode()).into());
    }
    Ok(())
}

/// `Tr(x * y) == Tr(y * x)`, with products taken at the root of unity.
pub fn cyclicity_check(alg: &SkeinAlgebra, x: &SkeinElement, y: &SkeinElement, n: u32) -> Result<bool> {
    require_root_of_unity(alg, n)?;
    let xy = alg.product(x, y)?;
    let yx = alg.product(y, x)?;
    Ok(trace(alg.surface(), &xy, n)? == trace(alg.surface(), &yx, n)?)
}

/// Exhibit `m` with `Tr(m * x) != 0`.
///
/// Picks the first top-weight diagram of `x`; if its component
/// multiplicities are all divisible by `N` the trace of `x` itself is
/// nonzero. Otherwise each component `J` of multiplicity `aN + r` is
/// topped up with `N - r` parallel copies, which makes the leading diagram
/// of the product survive the trace.
pub fn nonzero_certificate(alg: &SkeinAlgebra, x: &SkeinElement, n: u32) -> Result<Certificate> {
    check_order(n)?;
    let sym = symbol(x)?;
    let surface = alg.surface();
    let edges = surface.num_edges();
    let mut chosen = None;
    for f in sym.leading.keys() {
        let parts = decompose(surface, f)?.parts;
        if parts.iter().all(|(_, m)| m % n == 0) {
            chosen = Some(Coloring::zero(edges));
            break;
        }
        if chosen.is_none() {
            let top_up = parts.iter().fold(Coloring::zero(edges), |acc, (j, m)| acc.add(&j.scaled((n - m % n) % n)));
            chosen = Some(top_up);
        }
    }
    let multiplier = chosen.expect("symbol of a nonzero element is nonempty");
    let target = if multiplier.is_zero() { x.clone() } else { alg.product(&alg.diagram(multiplier.clone()), x)? };
    let witness = trace(surface, &target, n)?;
    if witness.is_zero() {
        return Err(Error::CertificateFailed(format!("multiplier {:?} gives zero trace", multiplier.values())));
    }
    Ok(Certificate { multiplier, witness })
}
