//! Ideal triangulations as pure combinatorics: oriented edges glued to the
//! sides of triangles.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One side of a triangle.
///
/// `along` is true when the counterclockwise boundary of the triangle runs
/// in the direction of the edge's orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub edge: usize,
    pub along: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceKind {
    /// Every triangle meets three distinct edges.
    pub embedded_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealTriangulation {
    edges: Vec<String>,
    triangles: Vec<[Slot; 3]>,
    /// For each edge, its two occurrences as `(triangle, side)`.
    occurrences: Vec<[(usize, usize); 2]>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
}

#[derive(Serialize, Deserialize)]
struct SlotDoc {
    edge: String,
    along: bool,
}

#[derive(Serialize, Deserialize)]
struct TriangleDoc {
    slots: Vec<SlotDoc>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceDoc {
    edges: Vec<EdgeDoc>,
    triangles: Vec<TriangleDoc>,
}

pub const PRESETS: [&str; 3] = ["punctured_torus", "four_punctured_sphere", "genus2_one_puncture"];

impl IdealTriangulation {
    /// Build and validate a triangulation from edge names and slot triples.
    pub fn new(edges: Vec<String>, triangles: Vec<[Slot; 3]>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSurface(msg));
        if triangles.is_empty() {
            return bad("no triangles".into());
        }
        let mut seen = HashMap::new();
        for name in &edges {
            if seen.insert(name.as_str(), ()).is_some() {
                return bad(format!("duplicate edge id {name:?}"));
            }
        }
        let mut uses: Vec<Vec<(usize, usize)>> = vec![Vec::new(); edges.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for (j, slot) in tri.iter().enumerate() {
                match uses.get_mut(slot.edge) {
                    Some(u) => u.push((t, j)),
                    None => return bad(format!("triangle {t} refers to missing edge index {}", slot.edge)),
                }
            }
        }
        let mut occurrences = Vec::with_capacity(edges.len());
        for (e, u) in uses.iter().enumerate() {
            if u.len() != 2 {
                return bad(format!("edge {:?} is used {} times, expected 2", edges[e], u.len()));
            }
            let (s0, s1) = (triangles[u[0].0][u[0].1], triangles[u[1].0][u[1].1]);
            if s0.along == s1.along {
                return bad(format!("edge {:?} is glued with matching directions; the surface would not be orientable", edges[e]));
            }
            occurrences.push([u[0], u[1]]);
        }
        if 2 * edges.len() != 3 * triangles.len() {
            return bad(format!("{} edges and {} triangles violate 2E = 3F", edges.len(), triangles.len()));
        }
        let surface = IdealTriangulation { edges, triangles, occurrences };
        if !surface.is_connected() {
            return bad("slot gluing graph is disconnected".into());
        }
        let e = surface.euler_count() as i64;
        let p = surface.puncture_count() as i64;
        // chi = 2 - 2g - p = -e
        if (2 + e - p) < 0 || (2 + e - p) % 2 != 0 {
            return bad(format!("no genus fits e(F) = {e} with {p} punctures"));
        }
        Ok(surface)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SurfaceDoc = serde_json::from_str(text)?;
        Self::from_doc(doc)
    }

    pub fn from_value(value: &serde_json::Value) -> Result<Self> {
        let doc: SurfaceDoc = serde_json::from_value(value.clone())?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: SurfaceDoc) -> Result<Self> {
        let edges: Vec<String> = doc.edges.into_iter().map(|e| e.id).collect();
        let index: HashMap<&str, usize> = edges.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let mut triangles = Vec::with_capacity(doc.triangles.len());
        for (t, tri) in doc.triangles.iter().enumerate() {
            if tri.slots.len() != 3 {
                return Err(Error::InvalidSurface(format!("triangle {t} has {} slots", tri.slots.len())));
            }
            let mut slots = [Slot { edge: 0, along: true }; 3];
            for (j, s) in tri.slots.iter().enumerate() {
                let edge = *index
                    .get(s.edge.as_str())
                    .ok_or_else(|| Error::InvalidSurface(format!("triangle {t} refers to unknown edge {:?}", s.edge)))?;
                slots[j] = Slot { edge, along: s.along };
            }
            triangles.push(slots);
        }
        Self::new(edges, triangles)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let doc = SurfaceDoc {
            edges: self.edges.iter().map(|id| EdgeDoc { id: id.clone() }).collect(),
            triangles: self
                .triangles
                .iter()
                .map(|tri| TriangleDoc {
                    slots: tri.iter().map(|s| SlotDoc { edge: self.edges[s.edge].clone(), along: s.along }).collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("surface document serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("surface document serializes")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "punctured_torus" => Ok(punctured_torus()),
            "four_punctured_sphere" => Ok(four_punctured_sphere()),
            "genus2_one_puncture" => Ok(genus2_one_puncture()),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edges
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e == name)
    }

    pub fn triangles(&self) -> &[[Slot; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &[Slot; 3] {
        &self.triangles[t]
    }

    /// The two `(triangle, side)` positions where edge `e` appears.
    pub fn occurrences(&self, e: usize) -> [(usize, usize); 2] {
        self.occurrences[e]
    }

    /// The other occurrence of the edge sitting at `(t, j)`.
    pub fn opposite(&self, t: usize, j: usize) -> (usize, usize) {
        let [a, b] = self.occurrences[self.triangles[t][j].edge];
        if a == (t, j) {
            b
        } else {
            a
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        SurfaceKind { embedded_only: self.triangles.iter().all(|tri| !is_folded(tri)) }
    }

    pub fn is_embedded_only(&self) -> bool {
        self.kind().embedded_only
    }

    pub fn is_folded(&self, t: usize) -> bool {
        is_folded(&self.triangles[t])
    }

    /// `e(F)`, minus the Euler characteristic.
    pub fn euler_count(&self) -> usize {
        self.triangles.len() / 2
    }

    /// Corner cycles, one per puncture.
    ///
    /// Corner `(t, j)` is the vertex where side `j - 1` ends and side `j`
    /// starts. Crossing side `j` lands in the neighbor at the corner where the
    /// glued side ends.
    pub fn corner_cycles(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen = vec![[false; 3]; self.triangles.len()];
        let mut cycles = Vec::new();
        for t0 in 0..self.triangles.len() {
            for j0 in 0..3 {
                if seen[t0][j0] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut t, mut j) = (t0, j0);
                while !seen[t][j] {
                    seen[t][j] = true;
                    cycle.push((t, j));
                    let (t2, j2) = self.opposite(t, j);
                    (t, j) = (t2, (j2 + 1) % 3);
                }
                cycles.push(cycle);
            }
        }
        cycles
    }

    pub fn puncture_count(&self) -> usize {
        self.corner_cycles().len()
    }

    pub fn genus(&self) -> usize {
        (2 + self.euler_count() - self.puncture_count()) / 2
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.triangles.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for j in 0..3 {
                let (u, _) = self.opposite(t, j);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn is_folded(tri: &[Slot; 3]) -> bool {
    tri[0].edge == tri[1].edge || tri[1].edge == tri[2].edge || tri[0].edge == tri[2].edge
}

fn slot(edge: usize, along: bool) -> Slot {
    Slot { edge, along }
}

/// Two triangles sharing edges `a, b, c`; one puncture.
///
/// `a` and `b` meet each triangle with opposite directions, so parallel
/// copies of the `(1,1,0)` curve nest instead of crossing.
fn punctured_torus() -> IdealTriangulation {
    let edges = vec!["a".into(), "b".into(), "c".into()];
    let triangles = vec![
        [slot(0, true), slot(1, false), slot(2, false)],
        [slot(2, true), slot(0, false), slot(1, true)],
    ];
    IdealTriangulation::new(edges, triangles).expect("punctured torus preset is valid")
}

/// Boundary of a tetrahedron with its vertices removed.
///
/// Edge `e_ij` (`i < j`) points from vertex `i` to vertex `j`.
fn four_punctured_sphere() -> IdealTriangulation {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let edges = pairs.iter().map(|(i, j)| format!("e{i}{j}")).collect();
    let edge = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let faces = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)];
    let triangles = faces
        .iter()
        .map(|&(u, v, w)| [slot(edge(u, v), u < v), slot(edge(v, w), v < w), slot(edge(w, u), w < u)])
        .collect();
    IdealTriangulation::new(edges, triangles).expect("four-punctured sphere preset is valid")
}

/// Octagon with side word `a b a^-1 b^-1 c d c^-1 d^-1`, fan-triangulated
/// from its first vertex. All eight octagon vertices become one puncture.
fn genus2_one_puncture() -> IdealTriangulation {
    // side i runs V_i -> V_{i+1}
    let word = [(0, true), (1, true), (0, false), (1, false), (2, true), (3, true), (2, false), (3, false)];
    let mut edges: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    // diagonal d_i runs V_0 -> V_i, i = 2..=6
    let diag = |i: usize| 4 + (i - 2);
    edges.extend((2..=6).map(|i| format!("d{i}")));
    let side = |i: usize| slot(word[i].0, word[i].1);
    let mut triangles = Vec::new();
    for i in 1..=6 {
        let first = if i == 1 { side(0) } else { slot(diag(i), true) };
        let last = if i == 6 { side(7) } else { slot(diag(i + 1), false) };
        triangles.push([first, side(i), last]);
    }
    IdealTriangulation::new(edges, triangles).expect("genus two preset is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_have_expected_counts() {
        let cases = [
            ("punctured_torus", 2, 3, 1, 1),
            ("four_punctured_sphere", 4, 6, 4, 0),
            ("genus2_one_puncture", 6, 9, 1, 2),
        ];
        for (name, tris, edges, punctures, genus) in cases {
            let s = IdealTriangulation::preset(name).unwrap();
            assert_eq!(s.num_triangles(), tris, "{name}");
            assert_eq!(s.num_edges(), edges, "{name}");
            assert_eq!(s.puncture_count(), punctures, "{name}");
            assert_eq!(s.genus(), genus, "{name}");
            assert!(s.is_embedded_only(), "{name}");
        }
    }

    #[test]
    fn corner_cycles_partition_corners() {
        for name in PRESETS {
            let s = IdealTriangulation::preset(name).unwrap();
            let mut all: Vec<_> = s.corner_cycles().concat();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), 3 * s.num_triangles());
        }
    }

    #[test]
    fn json_round_trip() {
        for name in PRESETS {
            let s = IdealTriangulation::preset(name).unwrap();
            assert_eq!(IdealTriangulation::from_json(&s.to_json()).unwrap(), s);
        }
    }

    #[test]
    fn torus_document_parses() {
        let doc = r#"{"edges":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "triangles":[{"slots":[{"edge":"a","along":true},{"edge":"b","along":false},{"edge":"c","along":false}]},
                         {"slots":[{"edge":"c","along":true},{"edge":"a","along":false},{"edge":"b","along":true}]}]}"#;
        let s = IdealTriangulation::from_json(doc).unwrap();
        assert_eq!(s, IdealTriangulation::preset("punctured_torus").unwrap());
        assert_eq!(s.euler_count(), 1);
        assert_eq!(s.puncture_count(), 1);
    }

    #[test]
    fn rejects_bad_documents() {
        let triple = r#"{"edges":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "triangles":[{"slots":[{"edge":"a","along":true},{"edge":"a","along":false},{"edge":"a","along":true}]},
                         {"slots":[{"edge":"c","along":true},{"edge":"b","along":false},{"edge":"b","along":true}]}]}"#;
        assert!(matches!(IdealTriangulation::from_json(triple), Err(Error::InvalidSurface(_))));
        let dangling = r#"{"edges":[{"id":"a"}],"triangles":[{"slots":[{"edge":"a","along":true},{"edge":"z","along":true},{"edge":"a","along":false}]}]}"#;
        assert!(IdealTriangulation::from_json(dangling).is_err());
        assert!(matches!(IdealTriangulation::preset("klein_bottle"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn rejects_disconnected_union() {
        let torus = IdealTriangulation::preset("punctured_torus").unwrap();
        let mut edges = torus.edge_names().to_vec();
        edges.extend(["x", "y", "z"].iter().map(|s| s.to_string()));
        let mut triangles = torus.triangles().to_vec();
        for tri in torus.triangles() {
            triangles.push(tri.map(|s| Slot { edge: s.edge + 3, along: s.along }));
        }
        assert!(IdealTriangulation::new(edges, triangles).is_err());
    }

    #[test]
    fn rejects_same_direction_gluing() {
        let triangles = vec![
            [slot(0, true), slot(1, true), slot(2, true)],
            [slot(2, true), slot(0, false), slot(1, false)],
        ];
        let edges = vec!["a".into(), "b".into(), "c".into()];
        assert!(IdealTriangulation::new(edges, triangles).is_err());
    }

    #[test]
    fn folded_triangles_are_detected() {
        // once-punctured monogon doubled: a sphere with three punctures
        let edges = vec!["a".into(), "b".into(), "c".into()];
        let triangles = vec![
            [slot(0, true), slot(1, true), slot(1, false)],
            [slot(0, false), slot(2, true), slot(2, false)],
        ];
        let s = IdealTriangulation::new(edges, triangles).unwrap();
        assert!(!s.is_embedded_only());
        assert!(s.is_folded(0));
        assert_eq!(s.puncture_count(), 3);
        assert_eq!(s.genus(), 0);
    }
}
