//! The product engine: stack one multicurve over another inside each
//! triangle, smooth the crossings, and pull the resulting states back to
//! normal position.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::curves::{self, corner_counts, local_position, normal_partner, trace_loops, word_coloring, Coloring};
use crate::error::{Error, Result};
use crate::ring::{Coefficient, IntLaurent, RingMode, RingError};
use crate::surface::IdealTriangulation;

pub const DEFAULT_MAX_CROSSINGS: usize = 20;

/// Crossing bound from `SKEINLAB_MAX_CROSSINGS`, or the default.
pub fn max_crossings_from_env() -> usize {
    std::env::var("SKEINLAB_MAX_CROSSINGS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_CROSSINGS)
}

/// A crossing of left chord `over` with right chord `under`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub over: usize,
    pub under: usize,
}

/// Both factors' arcs inside one triangle.
///
/// Points are numbered counterclockwise around the triangle: side 0 first,
/// then sides 1 and 2, each in its own counterclockwise order. Chords are
/// stored with the smaller point first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrianglePlacement {
    pub sides: [u32; 3],
    pub left: Vec<(usize, usize)>,
    pub right: Vec<(usize, usize)>,
    pub crossings: Vec<Crossing>,
}

impl TrianglePlacement {
    pub fn points(&self) -> usize {
        self.sides.iter().sum::<u32>() as usize
    }

    fn offset(&self, side: usize) -> usize {
        self.sides[..side].iter().sum::<u32>() as usize
    }

    fn point(&self, side: usize, p: u32) -> usize {
        self.offset(side) + p as usize - 1
    }

    fn side_of(&self, b: usize) -> (usize, u32) {
        let mut b = b as u32;
        for (i, &n) in self.sides.iter().enumerate() {
            if b < n {
                return (i, b + 1);
            }
            b -= n;
        }
        unreachable!("point index out of range")
    }
}

/// Left factor stacked over right factor in a common position.
///
/// On each edge the points are numbered along the edge's orientation; the
/// first `f(e)` belong to the left factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedProduct {
    pub left: Coloring,
    pub right: Coloring,
    pub counts: Vec<u32>,
    pub triangles: Vec<TrianglePlacement>,
}

impl PlacedProduct {
    pub fn crossing_count(&self) -> usize {
        self.triangles.iter().map(|t| t.crossings.len()).sum()
    }

    /// Diagnostic dump: points per edge, chords per triangle, crossings.
    pub fn debug_json(&self, surface: &IdealTriangulation) -> Value {
        let points: serde_json::Map<String, Value> = surface
            .edge_names()
            .iter()
            .enumerate()
            .map(|(e, name)| (name.clone(), json!({"left": self.left.get(e), "right": self.right.get(e)})))
            .collect();
        let triangles: Vec<Value> = self
            .triangles
            .iter()
            .map(|t| {
                json!({
                    "sides": t.sides,
                    "left_chords": t.left,
                    "right_chords": t.right,
                    "crossings": t.crossings.iter().map(|c| [c.over, c.under]).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"points": points, "triangles": triangles, "crossing_count": self.crossing_count()})
    }
}

/// Smoothing choice at each crossing, the resulting matching of points in
/// every triangle, and the closed loops that never reach an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedState {
    /// `true` for the `A` smoothing, in triangle-then-crossing order.
    pub choices: Vec<bool>,
    pub matchings: Vec<Vec<usize>>,
    pub closed_loops: usize,
}

fn factor_chords(
    surface: &IdealTriangulation,
    t: usize,
    own: &Coloring,
    offset_of: impl Fn(usize) -> u32,
    counts: &[u32],
    sides: [u32; 3],
) -> Vec<(usize, usize)> {
    let tri = surface.triangle(t);
    let x = tri.map(|s| own.get(s.edge));
    let c = corner_counts(x);
    let scratch = TrianglePlacement { sides, left: vec![], right: vec![], crossings: vec![] };
    // own local position -> merged point index
    let merged = |i: usize, p: u32| {
        let s = tri[i];
        let own_global = local_position(s.along, x[i], p);
        let g = offset_of(s.edge) + own_global;
        scratch.point(i, local_position(s.along, counts[s.edge], g))
    };
    let mut chords = Vec::new();
    for i in 0..3 {
        for p in 1..=x[i] {
            let (j, q) = normal_partner(x, c, i, p);
            let (a, b) = (merged(i, p), merged(j, q));
            if a < b {
                chords.push((a, b));
            }
        }
    }
    chords.sort();
    chords
}

fn interleave((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b) != (a < d && d < b)
}

/// Put `f` over `g` in the canonical common position.
pub fn place(surface: &IdealTriangulation, f: &Coloring, g: &Coloring) -> Result<PlacedProduct> {
    if !surface.is_embedded_only() {
        return Err(Error::FoldedTriangulation);
    }
    for h in [f, g] {
        curves::check_shape(surface, h)?;
        if !curves::is_admissible(surface, h) {
            return Err(Error::NotAdmissible(format!("{:?}", h.values())));
        }
    }
    let counts: Vec<u32> = f.add(g).values().to_vec();
    let triangles = (0..surface.num_triangles())
        .map(|t| {
            let sides = surface.triangle(t).map(|s| counts[s.edge]);
            let left = factor_chords(surface, t, f, |_| 0, &counts, sides);
            let right = factor_chords(surface, t, g, |e| f.get(e), &counts, sides);
            let mut crossings = Vec::new();
            for (i, &u) in left.iter().enumerate() {
                for (j, &v) in right.iter().enumerate() {
                    if interleave(u, v) {
                        crossings.push(Crossing { over: i, under: j });
                    }
                }
            }
            TrianglePlacement { sides, left, right, crossings }
        })
        .collect();
    Ok(PlacedProduct { left: f.clone(), right: g.clone(), counts, triangles })
}

/// The four-valent graph of one triangle, ready for smoothing.
///
/// Nodes `0..points` are boundary points; crossing `k` owns nodes
/// `points + 4k ..`, its ports in counterclockwise order: toward the lower
/// end of the over chord, toward the under chord's end inside the over
/// chord's span, toward the upper end of the over chord, toward the under
/// chord's other end.
struct CrossingGraph {
    points: usize,
    link: Vec<usize>,
    crossings: usize,
}

impl CrossingGraph {
    fn new(tp: &TrianglePlacement) -> Self {
        let points = tp.points();
        let n = points + 4 * tp.crossings.len();
        let mut link = vec![usize::MAX; n];
        // per chord: (sort key, port toward the lower end, port toward the upper end)
        let mut stops: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); tp.left.len() + tp.right.len()];
        for (k, c) in tp.crossings.iter().enumerate() {
            let (a, b) = tp.left[c.over];
            let (p, q) = tp.right[c.under];
            let p_inside = a < p && p < b;
            let base = points + 4 * k;
            // crossings along a chord are ordered by where the partner chord
            // meets the span between the chord's ends
            stops[c.over].push((if p_inside { p } else { q }, base, base + 2));
            let key = if p < a && a < q { a } else { b };
            let (near, far) = if p_inside { (base + 1, base + 3) } else { (base + 3, base + 1) };
            stops[tp.left.len() + c.under].push((key, near, far));
        }
        let ends = tp.left.iter().chain(tp.right.iter());
        for (&(a, b), mut s) in ends.zip(stops) {
            s.sort();
            let mut prev = a;
            for (_, near, far) in s {
                link[prev] = near;
                link[near] = prev;
                prev = far;
            }
            link[prev] = b;
            link[b] = prev;
        }
        debug_assert!(link.iter().all(|&l| l != usize::MAX));
        CrossingGraph { points, link, crossings: tp.crossings.len() }
    }

    /// Match the boundary points for one smoothing state.
    ///
    /// Returns the point matching and the number of closed loops.
    fn smooth(&self, state: u64) -> (Vec<usize>, usize) {
        let a_smoothing = |k: usize| state >> k & 1 == 1;
        let jump = |node: usize| {
            let k = (node - self.points) / 4;
            let port = (node - self.points) % 4;
            let other = if a_smoothing(k) { [3, 2, 1, 0][port] } else { [1, 0, 3, 2][port] };
            self.points + 4 * k + other
        };
        let mut seen = vec![false; 4 * self.crossings];
        let mut matching = vec![usize::MAX; self.points];
        for start in 0..self.points {
            if matching[start] != usize::MAX {
                continue;
            }
            let mut cur = self.link[start];
            while cur >= self.points {
                seen[cur - self.points] = true;
                let next = jump(cur);
                seen[next - self.points] = true;
                cur = self.link[next];
            }
            matching[start] = cur;
            matching[cur] = start;
        }
        let mut loops = 0;
        for port in 0..4 * self.crossings {
            if seen[port] {
                continue;
            }
            loops += 1;
            let mut cur = self.points + port;
            while !seen[cur - self.points] {
                seen[cur - self.points] = true;
                let next = jump(cur);
                seen[next - self.points] = true;
                cur = self.link[next];
            }
        }
        (matching, loops)
    }
}

fn check_bound(p: &PlacedProduct, bound: usize) -> Result<()> {
    let n = p.crossing_count();
    if n > bound {
        return Err(Error::CrossingBound {
            crossings: n,
            bound,
            left: format!("{:?}", p.left.values()),
            right: format!("{:?}", p.right.values()),
        });
    }
    Ok(())
}

/// Every smoothing of every crossing, with its monomial `A^(#A - #A^-1)`.
pub fn resolve(p: &PlacedProduct, mode: RingMode, bound: usize) -> Result<Vec<(Coefficient, ResolvedState)>> {
    check_bound(p, bound)?;
    let graphs: Vec<CrossingGraph> = p.triangles.iter().map(CrossingGraph::new).collect();
    let n = p.crossing_count();
    let mut out = Vec::with_capacity(1 << n);
    for state in 0..1u64 << n {
        let mut shift = 0;
        let mut matchings = Vec::with_capacity(graphs.len());
        let mut closed_loops = 0;
        for g in &graphs {
            let local = (state >> shift) & ((1u64 << g.crossings) - 1);
            let (m, loops) = g.smooth(local);
            matchings.push(m);
            closed_loops += loops;
            shift += g.crossings;
        }
        let choices: Vec<bool> = (0..n).map(|k| state >> k & 1 == 1).collect();
        let a = choices.iter().filter(|&&c| c).count() as i64;
        let mono = Coefficient::a_power(mode, a - (n as i64 - a));
        out.push((mono, ResolvedState { choices, matchings, closed_loops }));
    }
    Ok(out)
}

/// Remove backtracking from a closed edge path; what remains is the normal
/// form of the loop. Each edge letter is its own inverse.
fn cyclic_reduce(word: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(word.len());
    for &e in word {
        if stack.last() == Some(&e) {
            stack.pop();
        } else {
            stack.push(e);
        }
    }
    let (mut lo, mut hi) = (0, stack.len());
    while hi - lo >= 2 && stack[lo] == stack[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    stack[lo..hi].to_vec()
}

fn normalize_matchings(
    surface: &IdealTriangulation,
    triangles: &[TrianglePlacement],
    counts: &[u32],
    matchings: &[&[usize]],
) -> (usize, Coloring) {
    let loops = trace_loops(surface, counts, |t, i, p| {
        let tp = &triangles[t];
        tp.side_of(matchings[t][tp.point(i, p)])
    });
    let mut trivial = 0;
    let mut total = Coloring::zero(surface.num_edges());
    for word in loops {
        let reduced = cyclic_reduce(&word);
        if reduced.is_empty() {
            trivial += 1;
        } else {
            total = total.add(&word_coloring(&reduced, surface.num_edges()));
        }
    }
    (trivial, total)
}

/// Pull a crossingless state back to normal position.
///
/// Returns the number of trivial loops (closed loops inside triangles plus
/// loops that reduce away entirely) and the coloring of what survives.
pub fn normalize_state(surface: &IdealTriangulation, p: &PlacedProduct, s: &ResolvedState) -> (usize, Coloring) {
    let refs: Vec<&[usize]> = s.matchings.iter().map(Vec::as_slice).collect();
    let (trivial, f) = normalize_matchings(surface, &p.triangles, &p.counts, &refs);
    (trivial + s.closed_loops, f)
}

fn merge_into(acc: &mut BTreeMap<Coloring, IntLaurent>, key: Coloring, poly: &IntLaurent) -> std::result::Result<(), RingError> {
    let slot = acc.entry(key).or_default();
    slot.add_assign(poly)
}

fn merge_maps(
    a: std::result::Result<BTreeMap<Coloring, IntLaurent>, RingError>,
    b: std::result::Result<BTreeMap<Coloring, IntLaurent>, RingError>,
) -> std::result::Result<BTreeMap<Coloring, IntLaurent>, RingError> {
    let mut a = a?;
    for (k, v) in b? {
        merge_into(&mut a, k, &v)?;
    }
    Ok(a)
}

/// Local states of one triangle grouped by matching, each weighted by
/// `A^(#A - #A^-1) d^loops` with `d = -A^2 - A^-2`.
fn triangle_states(tp: &TrianglePlacement) -> std::result::Result<Vec<(Vec<usize>, IntLaurent)>, RingError> {
    let g = CrossingGraph::new(tp);
    let n = g.crossings;
    let delta = IntLaurent::loop_value();
    let grouped = (0..1u64 << n)
        .into_par_iter()
        .fold(
            || Ok(BTreeMap::<Vec<usize>, IntLaurent>::new()),
            |acc, state| {
                let mut acc = acc?;
                let (m, loops) = g.smooth(state);
                let a = state.count_ones() as i32;
                let mut w = IntLaurent::monomial(1, a - (n as i32 - a));
                if loops > 0 {
                    w = w.mul(&delta.pow(loops as u32)?)?;
                }
                acc.entry(m).or_default().add_assign(&w)?;
                Ok(acc)
            },
        )
        .reduce(
            || Ok(BTreeMap::new()),
            |a, b| {
                let mut a = a?;
                for (k, v) in b? {
                    a.entry(k).or_default().add_assign(&v)?;
                }
                Ok(a)
            },
        )?;
    Ok(grouped.into_iter().filter(|(_, w)| !w.is_zero()).collect())
}

/// The full state sum of a placement as integer Laurent polynomials keyed
/// by output coloring.
///
/// States are summed triangle by triangle first, so only distinct local
/// matchings are glued and normalized.
pub fn expand(surface: &IdealTriangulation, p: &PlacedProduct, bound: usize) -> Result<BTreeMap<Coloring, IntLaurent>> {
    check_bound(p, bound)?;
    let locals = p.triangles.iter().map(triangle_states).collect::<std::result::Result<Vec<_>, _>>()?;
    let radix: Vec<usize> = locals.iter().map(Vec::len).collect();
    let total: usize = radix.iter().product();
    let delta = IntLaurent::loop_value();
    let out = (0..total)
        .into_par_iter()
        .fold(
            || Ok(BTreeMap::new()),
            |acc, mut idx| {
                let mut acc = acc?;
                let mut weight = IntLaurent::one();
                let mut matchings = Vec::with_capacity(radix.len());
                for (t, r) in radix.iter().enumerate() {
                    let (m, w) = &locals[t][idx % r];
                    idx /= r;
                    weight = weight.mul(w)?;
                    matchings.push(m.as_slice());
                }
                let (trivial, f) = normalize_matchings(surface, &p.triangles, &p.counts, &matchings);
                if trivial > 0 {
                    weight = weight.mul(&delta.pow(trivial as u32)?)?;
                }
                merge_into(&mut acc, f, &weight)?;
                Ok(acc)
            },
        )
        .reduce(|| Ok(BTreeMap::new()), merge_maps)?;
    Ok(out.into_iter().filter(|(_, w)| !w.is_zero()).collect())
}
