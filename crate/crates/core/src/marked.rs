//! The surface with only the polygon centre marked.
//!
//! Cutting the polygon along the rays from the centre `O` to the side
//! midpoints gives one kite per corner. Kites around corners of one vertex
//! class glue into a `(2g+1)`-gon whose corners all sit at `O`, and whose
//! sides are the loops `ℓ_c` running from `O` through the midpoint of side
//! class `c` and back. Face `p` (corners of parity `p`) has corner `t` at kite
//! `K_{p + t(2g+2)}` and side `t` on `ℓ_{(p+t) mod 2g+1}`. Both faces are fan
//! triangulated from corner `0`, which gives a one-vertex triangulation of
//! the surface with one marked point.
//!
//! Normal coordinates there are canonical for isotopy classes in that
//! surface. The rotation and reflection are not simplicial for it; they act
//! by relabelling followed by flips back to the fans ([`FlipMap`]).

use num_bigint::BigUint;
use num_traits::Zero;

use crate::curves::{NormalCurve, OrientedCurve};
use crate::error::{Error, Result};
use crate::surface::{PolygonSurface, SimplicialMap};
use crate::triangulation::{edge_of, negative, positive, FlipRecord, HalfEdge, Triangulation};

/// A simple closed curve in normal coordinates on [`MarkedSurface`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedCurve {
    weights: Vec<BigUint>,
}

impl MarkedCurve {
    pub(crate) fn trusted(weights: Vec<BigUint>) -> Self {
        MarkedCurve { weights }
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn total_weight(&self) -> BigUint {
        self.weights.iter().sum()
    }

    pub fn max_bits(&self) -> u64 {
        self.weights.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

/// Action of a polygon symmetry: permute, flip back to the fans, permute.
#[derive(Clone, Debug)]
pub struct FlipMap {
    pre: Vec<usize>,
    flips: Vec<FlipRecord>,
    post: Vec<usize>,
}

impl FlipMap {
    pub fn apply(&self, w: &[BigUint]) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); w.len()];
        for (e, x) in w.iter().enumerate() {
            v[self.pre[e]] = x.clone();
        }
        for f in &self.flips {
            f.apply(&mut v);
        }
        let mut out = vec![BigUint::zero(); w.len()];
        for (e, x) in v.into_iter().enumerate() {
            out[self.post[e]] = x;
        }
        out
    }

    pub fn num_flips(&self) -> usize {
        self.flips.len()
    }
}

#[derive(Clone, Debug)]
pub struct MarkedSurface {
    genus: usize,
    triangulation: Triangulation,
}

/// Diagonals of one face during a flip sequence, keyed by corner pair.
struct FaceState {
    face: usize,
    h: usize,
    diagonals: Vec<((usize, usize), usize)>,
}

impl FaceState {
    fn label(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        if b == a + 1 {
            (self.face + a) % self.h
        } else if a == 0 && b == self.h - 1 {
            (self.face + self.h - 1) % self.h
        } else {
            self.diagonals
                .iter()
                .find(|(k, _)| *k == (a, b))
                .map(|(_, s)| *s)
                .expect("edge of the current triangulation")
        }
    }

    fn connected(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        b == a + 1 || (a == 0 && b == self.h - 1) || self.diagonals.iter().any(|(k, _)| *k == (a, b))
    }

    /// Apex of the triangle on diagonal `(a, b)` on the side holding corners
    /// strictly between them (`inside`) or the others.
    fn apex(&self, a: usize, b: usize, inside: bool) -> usize {
        (0..self.h)
            .filter(|&x| (a < x && x < b) == inside && x != a && x != b)
            .find(|&x| self.connected(a, x) && self.connected(x, b))
            .expect("triangulated polygon")
    }

    /// Flips diagonals until all of them meet corner `0`.
    fn to_fan(&mut self, flips: &mut Vec<FlipRecord>) {
        loop {
            let next = self.diagonals.iter().position(|&((a, b), _)| a != 0 && self.apex(a, b, false) == 0);
            let Some(i) = next else { break };
            let ((a, b), slot) = self.diagonals[i];
            let v = self.apex(a, b, true);
            flips.push(FlipRecord {
                edge: slot,
                sides: [self.label(a, 0), self.label(0, b), self.label(b, v), self.label(v, a)],
            });
            self.diagonals[i] = ((0, v), slot);
        }
    }
}

impl MarkedSurface {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusOutOfRange { genus, min: 2 });
        }
        let h = 2 * genus + 1;
        let mut triangles: Vec<[HalfEdge; 3]> = Vec::new();
        let d = |p: usize, k: usize| h + p * (h - 3) + k - 2;
        for p in 0..2 {
            let side = |t: usize| {
                let e = (p + t) % h;
                if p == 0 {
                    positive(e)
                } else {
                    negative(e)
                }
            };
            for k in 1..h - 1 {
                let first = if k == 1 { side(0) } else { positive(d(p, k)) };
                let last = if k + 1 == h - 1 { side(h - 1) } else { negative(d(p, k + 1)) };
                // corners 0, k, k+1 run clockwise in this labelling
                triangles.push([last, side(k), first]);
            }
        }
        let triangulation = Triangulation::new(triangles);
        let (_, vertices) = triangulation.vertex_classes();
        if vertices != 1 {
            return Err(Error::Shorten(format!("marked model has {vertices} vertices")));
        }
        Ok(MarkedSurface { genus, triangulation })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn num_edges(&self) -> usize {
        self.triangulation.num_edges()
    }

    fn h(&self) -> usize {
        2 * self.genus + 1
    }

    fn diagonal(&self, p: usize, k: usize) -> usize {
        let h = self.h();
        h + p * (h - 3) + k - 2
    }

    /// Face and corner position of kite `K_j`.
    fn corner_of(&self, j: usize) -> (usize, usize) {
        let h = self.h();
        let p = j % 2;
        (p, (j + h - p) % h)
    }

    fn kite_of(&self, p: usize, t: usize) -> usize {
        let n = 4 * self.genus + 2;
        (p + t * (2 * self.genus + 2)) % n
    }

    /// The action of a symmetry of the polygon model, read off from its
    /// action on sides and spokes.
    pub fn flip_map(&self, s: &PolygonSurface, m: &SimplicialMap) -> FlipMap {
        let h = self.h();
        let ne = self.num_edges();
        let mut pre: Vec<usize> = (0..ne).collect();
        for c in 0..h {
            pre[c] = m.edge_image(s.side_edge(c));
        }
        let kite = |j: usize| m.edge_image(s.spoke_edge(j)) - h;
        let mut faces: Vec<FaceState> = (0..2)
            .map(|face| FaceState {
                face,
                h,
                diagonals: Vec::new(),
            })
            .collect();
        for p in 0..2 {
            for k in 2..h - 1 {
                let (p0, a) = self.corner_of(kite(self.kite_of(p, 0)));
                let (p1, b) = self.corner_of(kite(self.kite_of(p, k)));
                debug_assert_eq!(p0, p1);
                faces[p0].diagonals.push(((a.min(b), a.max(b)), self.diagonal(p, k)));
            }
        }
        let mut flips = Vec::new();
        let mut post: Vec<usize> = (0..ne).collect();
        for f in faces.iter_mut() {
            f.to_fan(&mut flips);
            for &((_, k), slot) in &f.diagonals {
                post[slot] = self.diagonal(f.face, k);
            }
        }
        FlipMap { pre, flips, post }
    }

    /// Converts a curve of the polygon model by retracting it onto the
    /// polygon boundary away from the centre: spoke crossings become corner
    /// passages, and the reduced cycle of side traversals is read off as
    /// crossings with the loops and the fan diagonals.
    pub fn convert(&self, s: &PolygonSurface, c: &NormalCurve) -> Result<MarkedCurve> {
        let h = self.h();
        let tri = s.triangulation();
        let exits: Vec<HalfEdge> = OrientedCurve::new(s, c)?.exits().collect();
        let spokes: Vec<usize> = (0..exits.len()).filter(|&i| edge_of(exits[i]) >= h).collect();
        // (corner parity at the start, side class) for each traversal
        let mut walk: Vec<(usize, usize)> = Vec::new();
        for k in 0..spokes.len() {
            let i = spokes[k];
            let j = spokes[(k + 1) % spokes.len()];
            let u = (edge_of(exits[i]) - h) % 2;
            let v = (edge_of(exits[j]) - h) % 2;
            let (t, _) = tri.locate(!exits[i]);
            if u != v {
                walk.push((u, t % h));
            }
        }
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for x in walk {
            if stack.last().map(|y| y.1) == Some(x.1) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        while stack.len() >= 2 && stack[0].1 == stack[stack.len() - 1].1 {
            stack.pop();
            stack.remove(0);
        }
        if stack.is_empty() {
            return Err(Error::Shorten("curve is inessential once the corners are filled in".into()));
        }
        let mut w = vec![0u64; self.num_edges()];
        let n = stack.len();
        for k in 0..n {
            let (_, c_in) = stack[k];
            let (p, c_out) = stack[(k + 1) % n];
            w[c_in] += 1;
            // side positions of the two loops in face p
            let t1 = (c_in + h - p) % h;
            let t2 = (c_out + h - p) % h;
            for kk in 2..h - 1 {
                if (t1 < kk) != (t2 < kk) {
                    w[self.diagonal(p, kk)] += 1;
                }
            }
        }
        let weights: Vec<BigUint> = w.into_iter().map(BigUint::from).collect();
        self.triangulation
            .check_coordinates(&weights)
            .map_err(|(t, msg)| Error::Shorten(format!("converted curve not normal at triangle {t}: {msg}")))?;
        Ok(MarkedCurve { weights })
    }
}
