//! Normal coordinates of multicurves.
//!
//! A multicurve in normal position meets each triangle in arcs joining
//! distinct sides; it is recorded by how many times it crosses each edge.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::surface::IdealTriangulation;

/// Edge weights of a multicurve, indexed like the surface's edges.
///
/// Ordering is lexicographic on the value vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring(Vec<u32>);

impl Coloring {
    pub fn new(values: Vec<u32>) -> Self {
        Coloring(values)
    }

    pub fn zero(edges: usize) -> Self {
        Coloring(vec![0; edges])
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, e: usize) -> u32 {
        self.0[e]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    pub fn add(&self, other: &Coloring) -> Coloring {
        assert_eq!(self.len(), other.len(), "colorings on different surfaces");
        Coloring(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: u32) -> Coloring {
        Coloring(self.0.iter().map(|v| v * k).collect())
    }

    /// Edgewise `self - other`, if nonnegative.
    pub fn checked_sub(&self, other: &Coloring) -> Option<Coloring> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Coloring)
    }

    pub fn le(&self, other: &Coloring) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// A multicurve split into its distinct component curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<(Coloring, u32)>,
}

impl Decomposition {
    pub fn total(&self, edges: usize) -> Coloring {
        self.parts.iter().fold(Coloring::zero(edges), |acc, (c, m)| acc.add(&c.scaled(*m)))
    }
}

/// Bounded enumeration of indecomposable admissible colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub elements: Vec<Coloring>,
    pub weight_bound: u64,
    /// No general bound is known past which nothing new appears, so results
    /// are marked incomplete unless the caller vouches for the bound.
    pub possibly_incomplete: bool,
}

impl HilbertBasis {
    pub fn certified(mut self) -> Self {
        self.possibly_incomplete = false;
        self
    }
}

pub fn check_shape(surface: &IdealTriangulation, f: &Coloring) -> Result<()> {
    if f.len() != surface.num_edges() {
        return Err(Error::ColoringMismatch(format!(
            "coloring has {} values, surface has {} edges",
            f.len(),
            surface.num_edges()
        )));
    }
    Ok(())
}

fn triple_ok(x: [u32; 3]) -> bool {
    let [a, b, c] = x.map(|v| v as u64);
    (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
}

/// Parity and triangle inequalities in every triangle.
///
/// A folded triangle shows up as a repeated edge in the triple, where the
/// same check reduces to `f(a) + 2f(b)` even and `f(a) <= 2f(b)`.
pub fn is_admissible(surface: &IdealTriangulation, f: &Coloring) -> bool {
    f.len() == surface.num_edges() && surface.triangles().iter().all(|tri| triple_ok(tri.map(|s| f.get(s.edge))))
}

pub fn weight(f: &Coloring) -> u64 {
    f.weight()
}

pub fn geometric_sum(f: &Coloring, g: &Coloring) -> Coloring {
    f.add(g)
}

pub fn gcd_coloring(f: &Coloring) -> Result<u32> {
    let g = f.values().iter().fold(0u32, |acc, v| acc.gcd(v));
    if g == 0 {
        return Err(Error::ZeroColoring);
    }
    Ok(g)
}

pub fn scale_down(surface: &IdealTriangulation, f: &Coloring, n: u32) -> Result<Coloring> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::BadDivisor { n: n as u64, reason: "divisor must be odd".into() });
    }
    if !is_admissible(surface, f) {
        return Err(Error::NotAdmissible(format!("{:?}", f.values())));
    }
    if f.is_zero() {
        return Ok(f.clone());
    }
    let g = gcd_coloring(f)?;
    if g % n != 0 {
        return Err(Error::BadDivisor { n: n as u64, reason: format!("does not divide gcd {g}") });
    }
    Ok(Coloring(f.values().iter().map(|v| v / n).collect()))
}

/// Number of arcs cutting off each corner of a triangle with side counts
/// `x`; corner `i` sits between sides `i - 1` and `i`.
pub(crate) fn corner_counts(x: [u32; 3]) -> [u32; 3] {
    [0, 1, 2].map(|i| (x[(i + 2) % 3] + x[i] - x[(i + 1) % 3]) / 2)
}

/// Partner of point `p` (1-based, counterclockwise order) on side `i` under
/// the normal matching: the first `c_i` points turn back around corner `i`.
pub(crate) fn normal_partner(x: [u32; 3], c: [u32; 3], i: usize, p: u32) -> (usize, u32) {
    if p <= c[i] {
        let prev = (i + 2) % 3;
        (prev, x[prev] - p + 1)
    } else {
        ((i + 1) % 3, x[i] - p + 1)
    }
}

/// Position of a point on a side, counted counterclockwise around the
/// triangle, from its position along the edge. The map is an involution.
pub(crate) fn local_position(along: bool, n: u32, g: u32) -> u32 {
    if along {
        g
    } else {
        n + 1 - g
    }
}

/// Follow a system of arcs through the triangulation and return the
/// sequence of edges crossed by each closed loop.
///
/// `counts[e]` is the number of points on edge `e`; `partner(t, side, p)`
/// gives the other end of the arc in triangle `t` starting at local
/// position `p` on `side`. Every point must be an arc endpoint on both sides.
pub(crate) fn trace_loops<F>(surface: &IdealTriangulation, counts: &[u32], partner: F) -> Vec<Vec<usize>>
where
    F: Fn(usize, usize, u32) -> (usize, u32),
{
    let mut visited: Vec<Vec<bool>> = counts.iter().map(|&n| vec![false; n as usize]).collect();
    let mut loops = Vec::new();
    for e0 in 0..counts.len() {
        for g0 in 1..=counts[e0] {
            if visited[e0][g0 as usize - 1] {
                continue;
            }
            let mut word = Vec::new();
            let (mut t, mut j) = surface.occurrences(e0)[0];
            let (mut e, mut g) = (e0, g0);
            loop {
                visited[e][g as usize - 1] = true;
                word.push(e);
                let tri = surface.triangle(t);
                let p = local_position(tri[j].along, counts[e], g);
                let (j2, p2) = partner(t, j, p);
                let e2 = tri[j2].edge;
                let g2 = local_position(tri[j2].along, counts[e2], p2);
                if (e2, g2) == (e0, g0) {
                    break;
                }
                (t, j) = surface.opposite(t, j2);
                (e, g) = (e2, g2);
            }
            loops.push(word);
        }
    }
    loops
}

/// Letter counts of a crossing sequence.
pub(crate) fn word_coloring(word: &[usize], edges: usize) -> Coloring {
    let mut v = vec![0u32; edges];
    for &e in word {
        v[e] += 1;
    }
    Coloring(v)
}

pub fn decompose(surface: &IdealTriangulation, f: &Coloring) -> Result<Decomposition> {
    if !surface.is_embedded_only() {
        return Err(Error::FoldedTriangulation);
    }
    check_shape(surface, f)?;
    if !is_admissible(surface, f) {
        return Err(Error::NotAdmissible(format!("{:?}", f.values())));
    }
    let tables: Vec<([u32; 3], [u32; 3])> = surface
        .triangles()
        .iter()
        .map(|tri| {
            let x = tri.map(|s| f.get(s.edge));
            (x, corner_counts(x))
        })
        .collect();
    let loops = trace_loops(surface, f.values(), |t, i, p| {
        let (x, c) = tables[t];
        normal_partner(x, c, i, p)
    });
    let mut parts: BTreeMap<Coloring, u32> = BTreeMap::new();
    for word in loops {
        *parts.entry(word_coloring(&word, surface.num_edges())).or_insert(0) += 1;
    }
    Ok(Decomposition { parts: parts.into_iter().collect() })
}

/// All admissible colorings of weight at most `max_weight`, in
/// lexicographic order.
pub fn enumerate_admissible(surface: &IdealTriangulation, max_weight: u64) -> Vec<Coloring> {
    let n = surface.num_edges();
    // a triangle can be checked once its last edge (in index order) is set
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, tri) in surface.triangles().iter().enumerate() {
        let last = tri.iter().map(|s| s.edge).max().expect("three slots");
        ready[last].push(t);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(surface, &ready, 0, max_weight, &mut cur, &mut out);
    out
}

fn fill(
    surface: &IdealTriangulation,
    ready: &[Vec<usize>],
    e: usize,
    budget: u64,
    cur: &mut Vec<u32>,
    out: &mut Vec<Coloring>,
) {
    if e == cur.len() {
        out.push(Coloring(cur.clone()));
        return;
    }
    for v in 0..=budget {
        cur[e] = v as u32;
        let ok = ready[e].iter().all(|&t| triple_ok(surface.triangle(t).map(|s| cur[s.edge])));
        if ok {
            fill(surface, ready, e + 1, budget - v, cur, out);
        }
    }
    cur[e] = 0;
}

pub fn hilbert_basis(surface: &IdealTriangulation, weight_bound: u64) -> HilbertBasis {
    let all: Vec<Coloring> = enumerate_admissible(surface, weight_bound).into_iter().filter(|f| !f.is_zero()).collect();
    let set: HashSet<&Coloring> = all.iter().collect();
    let elements = all
        .par_iter()
        .filter(|f| {
            // a split f = s + (f - s) has a summand of at most half the weight
            !all.iter()
                .filter(|s| s.weight() * 2 <= f.weight() && s.le(f) && s != f)
                .any(|s| f.checked_sub(s).is_some_and(|r| set.contains(&r)))
        })
        .cloned()
        .collect();
    HilbertBasis { elements, weight_bound, possibly_incomplete: true }
}
