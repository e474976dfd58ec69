//! Ideal triangulations with labelled edges and the flip move.
//!
//! Half-edges use the signed-label convention: edge `e` has the two
//! half-edges `e` (positive) and `!e` (negative, i.e. `-e - 1`). Every
//! triangle lists its three half-edges counterclockwise with respect to the
//! surface orientation, so each edge occurs once with each sign.

use num_bigint::BigUint;

/// A signed half-edge label.
pub type HalfEdge = i32;

#[inline]
pub fn edge_of(h: HalfEdge) -> usize {
    if h >= 0 {
        h as usize
    } else {
        (!h) as usize
    }
}

#[inline]
pub fn positive(e: usize) -> HalfEdge {
    e as HalfEdge
}

#[inline]
pub fn negative(e: usize) -> HalfEdge {
    !(e as HalfEdge)
}

#[inline]
fn slot(h: HalfEdge) -> usize {
    if h >= 0 {
        2 * h as usize
    } else {
        2 * (!h) as usize + 1
    }
}

/// The four sides of the quadrilateral around a flipped edge, in boundary
/// order. Sides `0` and `2` are opposite, as are `1` and `3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlipRecord {
    pub edge: usize,
    pub sides: [usize; 4],
}

impl FlipRecord {
    /// Tropical Ptolemy update of a normal coordinate vector. The move is an
    /// involution: applying it twice restores the input.
    pub fn apply(&self, w: &mut [BigUint]) {
        let [a, b, c, d] = self.sides;
        let ac = &w[a] + &w[c];
        let bd = &w[b] + &w[d];
        let m = if ac >= bd { ac } else { bd };
        w[self.edge] = m - &w[self.edge];
    }

    pub fn apply_u64(&self, w: &mut [u64]) {
        let [a, b, c, d] = self.sides;
        let m = (w[a] + w[c]).max(w[b] + w[d]);
        w[self.edge] = m - w[self.edge];
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    triangles: Vec<[HalfEdge; 3]>,
    /// (triangle, position) for every half-edge slot.
    location: Vec<(usize, usize)>,
}

impl Triangulation {
    /// Builds a triangulation from counterclockwise half-edge triples.
    ///
    /// Panics if some half-edge is missing or repeated; callers construct
    /// triangulations from fixed combinatorial data.
    pub fn new(triangles: Vec<[HalfEdge; 3]>) -> Self {
        let num_edges = triangles.len() * 3 / 2;
        let mut location = vec![(usize::MAX, 0); 2 * num_edges];
        for (t, tri) in triangles.iter().enumerate() {
            for (p, &h) in tri.iter().enumerate() {
                let s = slot(h);
                assert!(s < location.len(), "half-edge {h} out of range");
                assert!(location[s].0 == usize::MAX, "half-edge {h} repeated");
                location[s] = (t, p);
            }
        }
        assert!(location.iter().all(|l| l.0 != usize::MAX), "missing half-edge");
        Triangulation { triangles, location }
    }

    pub fn num_edges(&self) -> usize {
        self.location.len() / 2
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangles(&self) -> &[[HalfEdge; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [HalfEdge; 3] {
        self.triangles[t]
    }

    /// Triangle and position holding the half-edge.
    pub fn locate(&self, h: HalfEdge) -> (usize, usize) {
        self.location[slot(h)]
    }

    /// Partition of half-edges by tail vertex. Returns, for every half-edge
    /// slot, the index of its tail vertex, plus the number of vertices.
    pub fn vertex_classes(&self) -> (Vec<usize>, usize) {
        let n = self.location.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for tri in &self.triangles {
            for p in 0..3 {
                // head of tri[p] is the tail of tri[p+1]; head(h) = tail(!h)
                let a = slot(!tri[p]);
                let b = slot(tri[(p + 1) % 3]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for s in 0..n {
            let r = find(&mut parent, s);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[s] = label[r];
        }
        (out, count)
    }

    /// Tail vertex index of a half-edge, given `vertex_classes` output.
    pub fn tail(classes: &[usize], h: HalfEdge) -> usize {
        classes[slot(h)]
    }

    pub fn is_flippable(&self, e: usize) -> bool {
        self.locate(positive(e)).0 != self.locate(negative(e)).0
    }

    /// The quadrilateral sides the flip of `e` would use, without flipping.
    pub fn flip_sides(&self, e: usize) -> Option<[usize; 4]> {
        let (t1, p1) = self.locate(positive(e));
        let (t2, p2) = self.locate(negative(e));
        if t1 == t2 {
            return None;
        }
        let r1 = self.triangles[t1];
        let r2 = self.triangles[t2];
        let a = r1[(p1 + 1) % 3];
        let b = r1[(p1 + 2) % 3];
        let c = r2[(p2 + 1) % 3];
        let d = r2[(p2 + 2) % 3];
        Some([edge_of(a), edge_of(b), edge_of(c), edge_of(d)])
    }

    /// Flips edge `e`, replacing triangles `[e, a, b]` and `[!e, c, d]` by
    /// `[e, d, a]` and `[!e, b, c]`.
    pub fn flip(&mut self, e: usize) -> Option<FlipRecord> {
        let (t1, p1) = self.locate(positive(e));
        let (t2, p2) = self.locate(negative(e));
        if t1 == t2 {
            return None;
        }
        let r1 = self.triangles[t1];
        let r2 = self.triangles[t2];
        let a = r1[(p1 + 1) % 3];
        let b = r1[(p1 + 2) % 3];
        let c = r2[(p2 + 1) % 3];
        let d = r2[(p2 + 2) % 3];
        self.triangles[t1] = [positive(e), d, a];
        self.triangles[t2] = [negative(e), b, c];
        for (t, tri) in [(t1, self.triangles[t1]), (t2, self.triangles[t2])] {
            for (p, &h) in tri.iter().enumerate() {
                self.location[slot(h)] = (t, p);
            }
        }
        Some(FlipRecord {
            edge: e,
            sides: [edge_of(a), edge_of(b), edge_of(c), edge_of(d)],
        })
    }

    /// Normal coordinate conditions: every triangle has even weight sum and
    /// satisfies the triangle inequalities. Returns the first offending
    /// triangle with a short description.
    pub fn check_coordinates(&self, w: &[BigUint]) -> Result<(), (usize, String)> {
        for (t, tri) in self.triangles.iter().enumerate() {
            let [x, y, z] = tri.map(|h| &w[edge_of(h)]);
            let sum = x + y + z;
            if sum.bit(0) {
                return Err((t, format!("odd weight sum {sum}")));
            }
            for (i, v) in [x, y, z].into_iter().enumerate() {
                if v + v > sum {
                    let e = edge_of(tri[i]);
                    return Err((t, format!("triangle inequality fails on edge {e}")));
                }
            }
        }
        Ok(())
    }

    /// Corner arc counts of triangle `t`: entry `i` counts arcs cutting the
    /// corner where half-edge `i` ends and half-edge `i + 1` starts.
    pub fn corner_counts(&self, t: usize, w: &[BigUint]) -> [BigUint; 3] {
        let tri = self.triangles[t];
        let x = [0, 1, 2].map(|i| &w[edge_of(tri[i])]);
        [0, 1, 2].map(|i| {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            (x[i] + x[j] - x[k]) >> 1u32
        })
    }
}
