//! The closed genus-`g` surface as a `(4g+2)`-gon with opposite sides glued,
//! fan-triangulated from the centre, and its rotation and reflection
//! symmetries as simplicial maps.
//!
//! Numbering: corners `P_0 .. P_{N-1}` counterclockwise (`N = 4g+2`), side
//! `j` runs from `P_j` to `P_{j+1}`, spoke `j` runs from the centre `O` to
//! `P_j`. Side `j` is glued to side `j + 2g + 1` with reversed direction,
//! so `P_j ~ P_{j+2g+2}`. Edge labels: side classes `0 .. 2g+1` (class `j`
//! oriented like side `j`), then spokes at `2g+1 + j`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::{edge_of, negative, positive, HalfEdge, Triangulation};

#[derive(Clone, Debug)]
pub struct PolygonSurface {
    genus: usize,
    triangulation: Triangulation,
    /// Tail vertex of every half-edge slot.
    vertex_of: Vec<usize>,
    num_vertices: usize,
}

impl PolygonSurface {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusOutOfRange { genus, min: 2 });
        }
        let n = 4 * genus + 2;
        let h = 2 * genus + 1;
        let triangles = (0..n)
            .map(|j| {
                let side = if j < h { positive(j) } else { negative(j - h) };
                [positive(h + j), side, negative(h + (j + 1) % n)]
            })
            .collect();
        let triangulation = Triangulation::new(triangles);
        let (vertex_of, num_vertices) = triangulation.vertex_classes();
        Ok(PolygonSurface {
            genus,
            triangulation,
            vertex_of,
            num_vertices,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of polygon sides, `4g + 2`.
    pub fn sides(&self) -> usize {
        4 * self.genus + 2
    }

    /// Number of glued side pairs, `2g + 1`.
    pub fn side_classes(&self) -> usize {
        2 * self.genus + 1
    }

    pub fn num_edges(&self) -> usize {
        self.triangulation.num_edges()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangulation.num_triangles()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn side_edge(&self, j: usize) -> usize {
        j % self.side_classes()
    }

    pub fn spoke_edge(&self, j: usize) -> usize {
        self.side_classes() + j % self.sides()
    }

    pub fn tail(&self, h: HalfEdge) -> usize {
        Triangulation::tail(&self.vertex_of, h)
    }

    pub fn head(&self, h: HalfEdge) -> usize {
        Triangulation::tail(&self.vertex_of, !h)
    }

    pub fn centre_vertex(&self) -> usize {
        self.tail(positive(self.spoke_edge(0)))
    }

    /// Vertex class of polygon corner `P_j`.
    pub fn corner_vertex(&self, j: usize) -> usize {
        self.head(positive(self.spoke_edge(j)))
    }

    /// Sizes of the corner classes, in order of first appearance.
    pub fn corner_class_sizes(&self) -> Vec<usize> {
        let mut order: Vec<usize> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for j in 0..self.sides() {
            let v = self.corner_vertex(j);
            match order.iter().position(|&u| u == v) {
                Some(i) => sizes[i] += 1,
                None => {
                    order.push(v);
                    sizes.push(1);
                }
            }
        }
        sizes
    }

    /// Weight vector of the loop around vertex `v`: each edge counted once
    /// per end at `v`.
    pub fn vertex_link(&self, v: usize) -> Vec<BigUint> {
        (0..self.num_edges())
            .map(|e| {
                let ends = (self.tail(positive(e)) == v) as u32 + (self.head(positive(e)) == v) as u32;
                BigUint::from(ends)
            })
            .collect()
    }

    /// Rotation by one step, `P_j -> P_{j+1}`.
    pub fn rotation_map(&self) -> SimplicialMap {
        let n = self.sides();
        let h = self.side_classes();
        let mut perm = vec![0; self.num_edges()];
        let mut reversed = vec![false; self.num_edges()];
        for j in 0..h {
            perm[j] = (j + 1) % h;
            reversed[j] = j + 1 == h;
        }
        for j in 0..n {
            perm[h + j] = h + (j + 1) % n;
        }
        SimplicialMap {
            perm,
            reversed,
            character: 1,
        }
    }

    /// Reflection in the axis through `P_0` and `P_{2g+1}`: `P_j -> P_{-j}`.
    pub fn reflection_map(&self) -> SimplicialMap {
        let n = self.sides();
        let h = self.side_classes();
        let mut perm = vec![0; self.num_edges()];
        let mut reversed = vec![false; self.num_edges()];
        for j in 0..h {
            // side j maps onto side -j-1 traversed backwards
            let m = (2 * n - j - 1) % n;
            if m < h {
                perm[j] = m;
                reversed[j] = true;
            } else {
                perm[j] = m - h;
                reversed[j] = false;
            }
        }
        for j in 0..n {
            perm[h + j] = h + (n - j) % n;
        }
        SimplicialMap {
            perm,
            reversed,
            character: -1,
        }
    }

    /// Checks that `m` maps triangles onto triangles, reversing the cyclic
    /// order exactly when its character is `-1`.
    pub fn is_simplicial(&self, m: &SimplicialMap) -> bool {
        let tris = self.triangulation.triangles();
        let mut keys: Vec<[HalfEdge; 3]> = tris.iter().map(|t| canonical_cycle(*t)).collect();
        keys.sort_unstable();
        tris.iter().all(|t| {
            let mut img = t.map(|x| m.map_half_edge(x));
            // an orientation-reversing map puts the image triangle on the
            // other side of every image edge
            if m.character < 0 {
                img = [!img[2], !img[1], !img[0]];
            }
            keys.binary_search(&canonical_cycle(img)).is_ok()
        })
    }

    pub fn report(&self) -> SurfaceReport {
        let h = self.side_classes();
        SurfaceReport {
            genus: self.genus,
            sides: self.sides(),
            edges: (0..self.num_edges())
                .map(|e| EdgeReport {
                    index: e,
                    kind: if e < h { "side" } else { "spoke" },
                    polygon_sides: if e < h { vec![e, e + h] } else { vec![] },
                    spoke: if e < h { None } else { Some(e - h) },
                    tail_vertex: self.tail(positive(e)),
                    head_vertex: self.head(positive(e)),
                })
                .collect(),
            triangles: self.triangulation.triangles().to_vec(),
            vertices: self.num_vertices,
            corner_class_sizes: self.corner_class_sizes(),
            euler_characteristic: self.euler_characteristic(),
        }
    }
}

fn canonical_cycle(t: [HalfEdge; 3]) -> [HalfEdge; 3] {
    let i = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

/// Deterministic description of the glued polygon, for debugging dumps.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub genus: usize,
    pub sides: usize,
    pub edges: Vec<EdgeReport>,
    pub triangles: Vec<[HalfEdge; 3]>,
    pub vertices: usize,
    pub corner_class_sizes: Vec<usize>,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub index: usize,
    pub kind: &'static str,
    pub polygon_sides: Vec<usize>,
    pub spoke: Option<usize>,
    pub tail_vertex: usize,
    pub head_vertex: usize,
}

/// A simplicial self-map of the fan triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialMap {
    perm: Vec<usize>,
    /// Whether the image of edge `e` runs against the orientation of edge
    /// `perm[e]`.
    reversed: Vec<bool>,
    character: i8,
}

impl SimplicialMap {
    pub fn identity(num_edges: usize) -> Self {
        SimplicialMap {
            perm: (0..num_edges).collect(),
            reversed: vec![false; num_edges],
            character: 1,
        }
    }

    pub fn character(&self) -> i8 {
        self.character
    }

    pub fn edge_image(&self, e: usize) -> usize {
        self.perm[e]
    }

    pub fn is_reversed(&self, e: usize) -> bool {
        self.reversed[e]
    }

    pub fn map_half_edge(&self, h: HalfEdge) -> HalfEdge {
        let e = edge_of(h);
        let flip = (h < 0) != self.reversed[e];
        if flip {
            negative(self.perm[e])
        } else {
            positive(self.perm[e])
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SimplicialMap) -> SimplicialMap {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut reversed = vec![false; n];
        for e in 0..n {
            let mid = other.perm[e];
            perm[e] = self.perm[mid];
            reversed[e] = other.reversed[e] != self.reversed[mid];
        }
        SimplicialMap {
            perm,
            reversed,
            character: self.character * other.character,
        }
    }

    pub fn inverse(&self) -> SimplicialMap {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut reversed = vec![false; n];
        for e in 0..n {
            perm[self.perm[e]] = e;
            reversed[self.perm[e]] = self.reversed[e];
        }
        SimplicialMap {
            perm,
            reversed,
            character: self.character,
        }
    }

    pub fn pow(&self, k: i64) -> SimplicialMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = SimplicialMap::identity(self.perm.len());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.character == 1
            && self.perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.reversed.iter().all(|r| !r)
    }

    /// Pushes a weight vector forward.
    pub fn apply_weights(&self, w: &[BigUint]) -> Vec<BigUint> {
        let mut out = vec![BigUint::default(); w.len()];
        for (e, x) in w.iter().enumerate() {
            out[self.perm[e]] = x.clone();
        }
        out
    }

    /// Pushes a signed edge chain forward (edge orientations respected).
    pub fn apply_chain(&self, c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; c.len()];
        for (e, &x) in c.iter().enumerate() {
            out[self.perm[e]] = if self.reversed[e] { -x } else { x };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_five_counts() {
        let s = PolygonSurface::new(5).unwrap();
        assert_eq!(s.sides(), 22);
        assert_eq!(s.num_edges(), 33);
        assert_eq!(s.num_triangles(), 22);
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.corner_class_sizes(), vec![11, 11]);
    }

    #[test]
    fn genus_two_euler() {
        let s = PolygonSurface::new(2).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.num_edges(), 15);
        assert_eq!(s.num_triangles(), 10);
        assert_eq!(s.euler_characteristic(), -2);
    }

    #[test]
    fn rejects_small_genus() {
        assert!(matches!(
            PolygonSurface::new(1),
            Err(Error::GenusOutOfRange { genus: 1, .. })
        ));
    }

    #[test]
    fn corners_alternate() {
        let s = PolygonSurface::new(3).unwrap();
        for j in 0..s.sides() {
            assert_eq!(s.corner_vertex(j), s.corner_vertex(j + 2));
            assert_ne!(s.corner_vertex(j), s.corner_vertex(j + 1));
            assert_ne!(s.corner_vertex(j), s.centre_vertex());
        }
    }

    #[test]
    fn symmetries_are_simplicial() {
        for g in 2..=8 {
            let s = PolygonSurface::new(g).unwrap();
            let r = s.rotation_map();
            let t = s.reflection_map();
            assert!(s.is_simplicial(&r));
            assert!(s.is_simplicial(&t));
            assert!(s.is_simplicial(&r.compose(&t)));
            assert!(r.pow(s.sides() as i64).is_identity());
            for d in 1..s.sides() as i64 {
                assert!(!r.pow(d).is_identity());
            }
            assert!(t.compose(&t).is_identity());
            assert_eq!(t.character(), -1);
            assert_eq!(t.compose(&r).compose(&t), r.inverse());
        }
    }

    #[test]
    fn rotation_moves_triangles_along() {
        let s = PolygonSurface::new(5).unwrap();
        let r = s.rotation_map();
        let tris = s.triangulation().triangles();
        for j in 0..s.sides() {
            let img = tris[j].map(|h| r.map_half_edge(h));
            assert_eq!(img, tris[(j + 1) % s.sides()]);
        }
    }
}
