//! Seeded self-check suites, one per acceptance item.
//!
//! Random inputs come from `ChaCha8Rng` seeded with the caller's seed, so a
//! failing run can be replayed exactly on any platform.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{symbol, SkeinAlgebra, SkeinElement};
use crate::cheb::{
    annulus_mult_matrix, cheb_closed_form, cheb_poly, expand_threaded, expected_annulus_trace, matrix_trace,
    poly_add, poly_compose, poly_mul, thread_tau, to_threaded, ThreadedElement,
};
use crate::curves::{decompose, enumerate_admissible, hilbert_basis, Coloring};
use crate::error::Result;
use crate::json;
use crate::ring::{Coefficient, RingMode};
use crate::surface::IdealTriangulation;
use crate::trace::{cyclicity_check, nonzero_certificate, trace};

/// Expected product of the convention-pinning pair.
pub const GOLDEN_PRODUCT: &str = include_str!("../golden/torus_product.json");

#[derive(Clone, Copy, Debug)]
pub struct Suite {
    pub id: &'static str,
    pub name: &'static str,
    pub limit: Duration,
    run: fn(&mut Ctx) -> Result<()>,
}

pub const SUITES: [Suite; 11] = [
    Suite { id: "A1", name: "chebyshev", limit: Duration::from_secs(1), run: chebyshev },
    Suite { id: "A2", name: "hilbert", limit: Duration::from_secs(1), run: hilbert },
    Suite { id: "A3", name: "golden", limit: Duration::from_secs(1), run: golden },
    Suite { id: "A4", name: "leading", limit: Duration::from_secs(60), run: leading },
    Suite { id: "A5", name: "associativity", limit: Duration::from_secs(60), run: associativity },
    Suite { id: "A6", name: "bar", limit: Duration::from_secs(30), run: bar },
    Suite { id: "A7", name: "centrality", limit: Duration::from_secs(60), run: centrality },
    Suite { id: "A8", name: "annulus", limit: Duration::from_secs(5), run: annulus },
    Suite { id: "A9", name: "trace", limit: Duration::from_secs(60), run: trace_props },
    Suite { id: "A10", name: "certificate", limit: Duration::from_secs(120), run: certificate },
    Suite { id: "A11", name: "roundtrip", limit: Duration::from_secs(10), run: roundtrip },
];

pub fn find_suite(name: &str) -> Option<Suite> {
    SUITES.iter().copied().find(|s| s.name == name || s.id.eq_ignore_ascii_case(name))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "limit_ms": self.limit.as_millis() as u64,
        })
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    checks: usize,
    failures: Vec<String>,
}

impl Ctx {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

/// Run one suite. Engine errors count as failures rather than aborting.
pub fn run_suite(suite: &Suite, seed: u64) -> SuiteReport {
    let mut ctx = Ctx { rng: ChaCha8Rng::seed_from_u64(seed), checks: 0, failures: Vec::new() };
    let start = Instant::now();
    if let Err(e) = (suite.run)(&mut ctx) {
        ctx.failures.push(format!("error: {e}"));
    }
    let elapsed = start.elapsed();
    let mut failures = ctx.failures;
    if elapsed > suite.limit {
        failures.push(format!("took {elapsed:?}, limit {:?}", suite.limit));
    }
    SuiteReport {
        id: suite.id,
        name: suite.name,
        passed: failures.is_empty(),
        checks: ctx.checks,
        failures,
        elapsed,
        limit: suite.limit,
    }
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, seed)).collect()
}

fn preset(name: &str) -> IdealTriangulation {
    IdealTriangulation::preset(name).expect("built-in preset")
}

fn colors(v: &[u32]) -> Coloring {
    Coloring::new(v.to_vec())
}

/// A random coloring from `pool`.
pub fn random_coloring(rng: &mut impl Rng, pool: &[Coloring]) -> Coloring {
    pool.choose(rng).expect("nonempty pool").clone()
}

/// `Σ c_e A^e` with up to two small nonzero integer terms.
pub fn random_coefficient(rng: &mut impl Rng, mode: RingMode) -> Coefficient {
    let mut c = Coefficient::zero(mode);
    while c.is_zero() {
        for _ in 0..rng.gen_range(1..=2) {
            let k = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            c = &c + &Coefficient::from_int(mode, k).shift(rng.gen_range(-4..=4));
        }
    }
    c
}

/// A nonzero element with up to `max_terms` diagrams from `pool`.
pub fn random_element(rng: &mut impl Rng, mode: RingMode, pool: &[Coloring], max_terms: usize) -> SkeinElement {
    let mut x = SkeinElement::zero(mode);
    while x.is_zero() {
        for _ in 0..rng.gen_range(1..=max_terms) {
            let f = random_coloring(rng, pool);
            x.add_term(f, random_coefficient(rng, mode));
        }
    }
    x
}

fn chebyshev(ctx: &mut Ctx) -> Result<()> {
    for m in 0..=12u32 {
        for n in 0..=12u32 {
            let lhs = poly_mul(&cheb_poly(m).coeffs, &cheb_poly(n).coeffs);
            let rhs = poly_add(&cheb_poly(m + n).coeffs, &cheb_poly(m.abs_diff(n)).coeffs);
            ctx.check(lhs == rhs, || format!("T_{m} T_{n} != T_{} + T_{}", m + n, m.abs_diff(n)));
            let comp = poly_compose(&cheb_poly(m).coeffs, &cheb_poly(n).coeffs);
            ctx.check(comp == cheb_poly(m * n).coeffs, || format!("T_{m}(T_{n}) != T_{}", m * n));
        }
    }
    for k in 0..=30 {
        ctx.check(cheb_closed_form(k) == cheb_poly(k).coeffs, || format!("closed form of T_{k} disagrees"));
    }
    Ok(())
}

fn hilbert(ctx: &mut Ctx) -> Result<()> {
    let hb = hilbert_basis(&preset("punctured_torus"), 6);
    let want = vec![colors(&[0, 1, 1]), colors(&[1, 0, 1]), colors(&[1, 1, 0])];
    let got = hb.elements.clone();
    ctx.check(got == want, || format!("basis {got:?}"));
    Ok(())
}

fn golden(ctx: &mut Ctx) -> Result<()> {
    let doc: Value = serde_json::from_str(GOLDEN_PRODUCT)?;
    let s = preset("punctured_torus");
    let mode = RingMode::Generic;
    let alg = SkeinAlgebra::new(s.clone(), mode);
    let left = json::element_from_json(&s, &doc["left"], mode)?;
    let right = json::element_from_json(&s, &doc["right"], mode)?;
    let want = json::element_from_json(&s, &doc["product"], mode)?;
    let got = alg.product(&left, &right)?;
    ctx.check(got == want, || format!("got {}", json::element_to_json(&s, &got)));
    Ok(())
}

fn leading(ctx: &mut Ctx) -> Result<()> {
    for (name, max_weight) in [("punctured_torus", 6), ("four_punctured_sphere", 4)] {
        let s = preset(name);
        let pool = enumerate_admissible(&s, max_weight);
        let alg = SkeinAlgebra::new(s, RingMode::Generic);
        for _ in 0..200 {
            let f = random_coloring(&mut ctx.rng, &pool);
            let g = random_coloring(&mut ctx.rng, &pool);
            let p = alg.product(&alg.diagram(f.clone()), &alg.diagram(g.clone()))?;
            let sym = symbol(&p)?;
            let top = f.add(&g);
            let ok = sym.weight == top.weight()
                && sym.leading.len() == 1
                && sym.leading.get(&top).and_then(Coefficient::as_monomial).is_some_and(|(c, _)| {
                    c.is_one() || (-&c).is_one()
                });
            ctx.check(ok, || format!("{name}: {:?} * {:?}", f.values(), g.values()));
        }
    }
    Ok(())
}

fn associativity(ctx: &mut Ctx) -> Result<()> {
    let s = preset("punctured_torus");
    let pool = enumerate_admissible(&s, 3);
    let alg = SkeinAlgebra::new(s, RingMode::Generic);
    for _ in 0..50 {
        let [x, y, z] = [(); 3].map(|_| alg.diagram(random_coloring(&mut ctx.rng, &pool)));
        let lhs = alg.product(&alg.product(&x, &y)?, &z)?;
        let rhs = alg.product(&x, &alg.product(&y, &z)?)?;
        ctx.check(lhs == rhs, || format!("{x:?} {y:?} {z:?}"));
    }
    Ok(())
}

fn bar(ctx: &mut Ctx) -> Result<()> {
    for (name, max_weight) in [("punctured_torus", 6), ("four_punctured_sphere", 4)] {
        let s = preset(name);
        let pool = enumerate_admissible(&s, max_weight);
        let alg = SkeinAlgebra::new(s, RingMode::Generic);
        for _ in 0..50 {
            let f = random_coloring(&mut ctx.rng, &pool);
            let g = random_coloring(&mut ctx.rng, &pool);
            let (x, y) = (alg.diagram(f.clone()), alg.diagram(g.clone()));
            let ok = alg.product(&y, &x)? == alg.product(&x, &y)?.bar();
            ctx.check(ok, || format!("{name}: {:?}, {:?}", f.values(), g.values()));
        }
    }
    Ok(())
}

fn centrality(ctx: &mut Ctx) -> Result<()> {
    let s = preset("punctured_torus");
    let mode = RingMode::Cyclotomic(3);
    let basis = hilbert_basis(&s, 6).elements;
    let diagrams = enumerate_admissible(&s, 4);
    let alg = SkeinAlgebra::new(s, mode);
    for j in &basis {
        let tau = thread_tau(alg.surface(), &alg.diagram(j.clone()), 3)?;
        for d in &diagrams {
            let d_el = alg.diagram(d.clone());
            let ok = alg.product(&tau, &d_el)? == alg.product(&d_el, &tau)?;
            ctx.check(ok, || format!("tau({:?}) vs {:?}", j.values(), d.values()));
        }
    }
    Ok(())
}

fn annulus(ctx: &mut Ctx) -> Result<()> {
    for n in [3, 5] {
        for k in 0..=4 * n {
            let got = matrix_trace(&annulus_mult_matrix(k, n));
            ctx.check(got == expected_annulus_trace(k, n), || format!("N={n}, k={k}: {got:?}"));
        }
    }
    Ok(())
}

fn trace_props(ctx: &mut Ctx) -> Result<()> {
    let n = 3;
    let mode = RingMode::Cyclotomic(n);
    let s = preset("punctured_torus");
    let alg = SkeinAlgebra::new(s.clone(), mode);
    let one = trace(&s, &alg.one(), n)?;
    ctx.check(one.value == ThreadedElement::from_terms(mode, [(vec![], Coefficient::one(mode))]), || {
        "Tr(1) != 1".into()
    });
    for j in hilbert_basis(&s, 6).elements {
        for k in 1..=2 * n {
            let tk = ThreadedElement::from_terms(mode, [(vec![(j.clone(), k)], Coefficient::one(mode))]);
            let tr = trace(&s, &expand_threaded(&s, &tk), n)?;
            let want = if k % n == 0 { tk } else { ThreadedElement::zero(mode) };
            ctx.check(tr.value == want, || format!("Tr(T_{k}({:?}))", j.values()));
        }
    }
    let pool = enumerate_admissible(&s, 4);
    for _ in 0..50 {
        let x = random_element(&mut ctx.rng, mode, &pool, 2);
        let y = random_element(&mut ctx.rng, mode, &pool, 2);
        let ok = cyclicity_check(&alg, &x, &y, n)?;
        ctx.check(ok, || format!("cyclicity fails for {x:?}, {y:?}"));
    }
    Ok(())
}

fn certificate(ctx: &mut Ctx) -> Result<()> {
    let n = 3;
    let s = preset("punctured_torus");
    let pool = enumerate_admissible(&s, 3);
    let alg = SkeinAlgebra::new(s, RingMode::Cyclotomic(n));
    for _ in 0..100 {
        let x = random_element(&mut ctx.rng, alg.mode(), &pool, 3);
        match nonzero_certificate(&alg, &x, n) {
            Ok(cert) => ctx.check(!cert.witness.is_zero(), || format!("empty witness for {x:?}")),
            Err(e) => ctx.check(false, || format!("{x:?}: {e}")),
        }
    }
    Ok(())
}

fn roundtrip(ctx: &mut Ctx) -> Result<()> {
    let torus = preset("punctured_torus");
    let pool = enumerate_admissible(&torus, 8);
    for i in 0..100 {
        let mode = if i % 2 == 0 { RingMode::Generic } else { RingMode::Cyclotomic(3) };
        let x = random_element(&mut ctx.rng, mode, &pool, 4);
        let back = expand_threaded(&torus, &to_threaded(&torus, &x)?);
        ctx.check(back == x, || format!("threading round trip of {x:?}"));
    }
    let surfaces: Vec<(IdealTriangulation, u64)> =
        vec![(torus, 10), (preset("four_punctured_sphere"), 6), (preset("genus2_one_puncture"), 6)];
    let pools: Vec<Vec<Coloring>> = surfaces.iter().map(|(s, w)| enumerate_admissible(s, *w)).collect();
    for i in 0..200 {
        let (s, _) = &surfaces[i % surfaces.len()];
        let f = random_coloring(&mut ctx.rng, &pools[i % surfaces.len()]);
        let d = decompose(s, &f)?;
        ctx.check(d.total(s.num_edges()) == f, || format!("decomposition of {:?}", f.values()));
    }
    Ok(())
}
