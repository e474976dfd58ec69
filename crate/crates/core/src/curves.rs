//! Normal curves on the fan triangulation.
//!
//! A multicurve is stored by its normal coordinates: the number of times it
//! crosses each edge. Vertices of the triangulation are treated as marked
//! points, so coordinates are canonical: two normal curves are isotopic away
//! from the vertices exactly when their weight vectors agree.
//!
//! Explicit realizations (marked points on edges, chords in triangles) are
//! built on demand for curves of moderate size; they back component
//! decomposition, orientation, overlays of two curves and path
//! normalization.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::PolygonSurface;
use crate::triangulation::{edge_of, negative, positive, HalfEdge, Triangulation};

/// Largest total weight realized explicitly with marked points.
pub const REALIZE_LIMIT: u64 = 1 << 22;

/// An essential simple closed curve, up to isotopy in the complement of the
/// triangulation's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalCurve {
    weights: Vec<BigUint>,
}

/// A normal multicurve; components may be parallel or vertex-linking.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multicurve {
    weights: Vec<BigUint>,
}

impl Multicurve {
    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }
}

/// Checks matching and triangle conditions.
pub fn validate_coordinates(s: &PolygonSurface, w: Vec<BigUint>) -> Result<Multicurve> {
    check_len(s, w.len())?;
    s.triangulation()
        .check_coordinates(&w)
        .map_err(|(triangle, reason)| Error::InvalidCoordinates { triangle, reason })?;
    Ok(Multicurve { weights: w })
}

pub(crate) fn check_len(s: &PolygonSurface, got: usize) -> Result<()> {
    if got != s.num_edges() {
        return Err(Error::SurfaceMismatch {
            expected: s.num_edges(),
            got,
        });
    }
    Ok(())
}

impl NormalCurve {
    /// Validates a weight vector as a single essential curve. Connectivity
    /// is only checked for curves small enough to realize.
    pub fn new(s: &PolygonSurface, w: Vec<BigUint>) -> Result<Self> {
        let m = validate_coordinates(s, w)?;
        if m.is_empty() {
            return Err(Error::InessentialCurve);
        }
        if total_weight(m.weights()) <= BigUint::from(REALIZE_LIMIT) {
            let comps = components(s, &m)?;
            if comps.len() != 1 {
                return Err(Error::NotACurve(format!("{} components", comps.len())));
            }
            if comps[0].vertex_linking.is_some() {
                return Err(Error::InessentialCurve);
            }
        }
        Ok(NormalCurve { weights: m.weights })
    }

    pub fn from_u64(s: &PolygonSurface, w: &[u64]) -> Result<Self> {
        Self::new(s, w.iter().map(|&x| BigUint::from(x)).collect())
    }

    /// Wraps coordinates produced by a mapping class acting on a curve.
    pub(crate) fn trusted(weights: Vec<BigUint>) -> Self {
        NormalCurve { weights }
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<BigUint> {
        self.weights
    }

    pub fn total_weight(&self) -> BigUint {
        total_weight(&self.weights)
    }

    pub fn max_bits(&self) -> u64 {
        self.weights.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    pub fn as_multicurve(&self) -> Multicurve {
        Multicurve {
            weights: self.weights.clone(),
        }
    }

    pub fn weights_u64(&self) -> Option<Vec<u64>> {
        self.weights.iter().map(|x| x.to_u64()).collect()
    }
}

pub fn total_weight(w: &[BigUint]) -> BigUint {
    w.iter().sum()
}

pub fn add_weights(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn small_weights(w: &[BigUint]) -> Result<Vec<u64>> {
    let total = total_weight(w);
    if total > BigUint::from(REALIZE_LIMIT) {
        return Err(Error::TooLarge(total.to_string()));
    }
    Ok(w.iter().map(|x| x.to_u64().unwrap()).collect())
}

/// Explicit marked-point model of one multicurve.
#[derive(Clone, Debug)]
pub struct ArcRealization {
    weights: Vec<u64>,
    /// Corner counts per triangle, see [`Triangulation::corner_counts`].
    corners: Vec<[u64; 3]>,
}

impl ArcRealization {
    pub fn new(s: &PolygonSurface, m: &Multicurve) -> Result<Self> {
        let weights = small_weights(m.weights())?;
        let tri = s.triangulation();
        let corners = (0..tri.num_triangles())
            .map(|t| {
                let h = tri.triangle(t);
                let x = h.map(|h| weights[edge_of(h)]);
                [0, 1, 2].map(|i| (x[i] + x[(i + 1) % 3] - x[(i + 2) % 3]) / 2)
            })
            .collect();
        Ok(ArcRealization { weights, corners })
    }

    pub fn weight(&self, e: usize) -> u64 {
        self.weights[e]
    }

    /// Position along half-edge `h` of point `i` of its edge.
    pub fn along(&self, h: HalfEdge, i: u64) -> u64 {
        if h >= 0 {
            i
        } else {
            self.weights[edge_of(h)] - 1 - i
        }
    }

    /// Leaving through `h` at point `i`, the next exit half-edge and point.
    fn step(&self, tri: &Triangulation, h: HalfEdge, i: u64) -> (HalfEdge, u64) {
        let entry = !h;
        let (t, p) = tri.locate(entry);
        let sides = tri.triangle(t);
        let x = sides.map(|h| self.weights[edge_of(h)]);
        let pos = self.along(entry, i);
        let n_end = self.corners[t][p];
        let (q, qpos) = if pos >= x[p] - n_end {
            let q = (p + 1) % 3;
            (q, x[p] - 1 - pos)
        } else {
            let q = (p + 2) % 3;
            (q, x[q] - 1 - pos)
        };
        let out = sides[q];
        (out, self.along(out, qpos))
    }

    /// Which corners a point touches on each side of its edge: returns
    /// `true` for "near the tail of the edge" on the `+e` side and the `!e`
    /// side.
    fn near_tail(&self, tri: &Triangulation, e: usize, i: u64) -> (bool, bool) {
        let w = self.weights[e];
        let (t, p) = tri.locate(positive(e));
        let plus_near_head = i >= w - self.corners[t][p];
        let (t2, p2) = tri.locate(negative(e));
        let along_neg = w - 1 - i;
        let minus_near_tail = along_neg >= w - self.corners[t2][p2];
        (!plus_near_head, minus_near_tail)
    }

    /// Traces every component. Each walk lists exit half-edges together with
    /// the point index on the crossed edge.
    pub fn trace_all(&self, tri: &Triangulation) -> Vec<Vec<(HalfEdge, u64)>> {
        let mut seen: Vec<Vec<bool>> = self.weights.iter().map(|&w| vec![false; w as usize]).collect();
        let mut out = Vec::new();
        for e in 0..self.weights.len() {
            for i in 0..self.weights[e] {
                if seen[e][i as usize] {
                    continue;
                }
                let walk = self.trace_from(tri, negative(e), i);
                for &(h, j) in &walk {
                    seen[edge_of(h)][j as usize] = true;
                }
                out.push(walk);
            }
        }
        out
    }

    fn trace_from(&self, tri: &Triangulation, h0: HalfEdge, i0: u64) -> Vec<(HalfEdge, u64)> {
        let mut walk = vec![(h0, i0)];
        let (mut h, mut i) = self.step(tri, h0, i0);
        while edge_of(h) != edge_of(h0) || i != i0 {
            walk.push((h, i));
            let next = self.step(tri, h, i);
            h = next.0;
            i = next.1;
        }
        walk
    }
}

/// A component of a multicurve: its coordinates and, when it is the loop
/// around a vertex, that vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub weights: Vec<BigUint>,
    pub vertex_linking: Option<usize>,
}

pub fn realize_arcs(s: &PolygonSurface, m: &Multicurve) -> Result<ArcRealization> {
    ArcRealization::new(s, m)
}

fn walk_weights(num_edges: usize, walk: &[(HalfEdge, u64)]) -> Vec<BigUint> {
    let mut w = vec![0u64; num_edges];
    for &(h, _) in walk {
        w[edge_of(h)] += 1;
    }
    w.into_iter().map(BigUint::from).collect()
}

/// Decomposes a multicurve into components, in a deterministic order.
pub fn components(s: &PolygonSurface, m: &Multicurve) -> Result<Vec<Component>> {
    let r = ArcRealization::new(s, m)?;
    let links: Vec<Vec<BigUint>> = (0..s.num_vertices()).map(|v| s.vertex_link(v)).collect();
    let mut comps: Vec<Component> = r
        .trace_all(s.triangulation())
        .iter()
        .map(|walk| {
            let weights = walk_weights(s.num_edges(), walk);
            let vertex_linking = links.iter().position(|l| *l == weights);
            Component {
                weights,
                vertex_linking,
            }
        })
        .collect();
    comps.sort_by(|a, b| a.weights.cmp(&b.weights));
    Ok(comps)
}

/// A connected curve traced with its canonical orientation.
#[derive(Clone, Debug)]
pub struct OrientedCurve {
    /// Exit half-edges and point indices, in traversal order.
    pub walk: Vec<(HalfEdge, u64)>,
}

impl OrientedCurve {
    /// Canonical orientation: start at point 0 of the lowest-indexed crossed
    /// edge, crossing it from right to left (into the `+e` triangle).
    pub fn new(s: &PolygonSurface, c: &NormalCurve) -> Result<Self> {
        let r = ArcRealization::new(s, &c.as_multicurve())?;
        Ok(Self::from_realization(s, &r))
    }

    pub(crate) fn from_realization(s: &PolygonSurface, r: &ArcRealization) -> Self {
        let e = (0..r.weights.len()).find(|&e| r.weight(e) > 0).expect("empty curve");
        OrientedCurve {
            walk: r.trace_from(s.triangulation(), negative(e), 0),
        }
    }

    pub fn exits(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        self.walk.iter().map(|&(h, _)| h)
    }

    /// Signed crossing count per edge; `+1` for crossing right to left.
    pub fn flux(&self, num_edges: usize) -> Vec<i64> {
        let mut f = vec![0; num_edges];
        for h in self.exits() {
            f[edge_of(h)] += if h < 0 { 1 } else { -1 };
        }
        f
    }

    /// An edge cycle homologous to the curve in the closed surface, obtained
    /// by sliding every crossing to the tail of its edge.
    pub fn primal_chain(&self, tri: &Triangulation) -> Vec<i64> {
        let mut c = vec![0; tri.num_edges()];
        let n = self.walk.len();
        for k in 0..n {
            let entry = !self.walk[k].0;
            let exit = self.walk[(k + 1) % n].0;
            let (t, p) = tri.locate(entry);
            let (t2, q) = tri.locate(exit);
            debug_assert_eq!(t, t2);
            let sides = tri.triangle(t);
            // corner index = position of the half-edge starting there
            let a = if entry >= 0 { p } else { (p + 1) % 3 };
            let b = if exit >= 0 { q } else { (q + 1) % 3 };
            if a == b {
                continue;
            }
            if b == (a + 1) % 3 {
                let h = sides[a];
                c[edge_of(h)] += if h >= 0 { 1 } else { -1 };
            } else {
                let h = sides[b];
                c[edge_of(h)] -= if h >= 0 { 1 } else { -1 };
            }
        }
        c
    }
}

/// Pairing of an edge cycle with a dual cycle: the algebraic intersection of
/// the classes they represent.
pub fn pair_chains(primal: &[i64], flux: &[i64]) -> i64 {
    primal.iter().zip(flux).map(|(a, b)| a * b).sum()
}

/// Algebraic intersection of the canonically oriented curves, computed from
/// an edge cycle of `a` and the crossing flux of `b`.
pub fn algebraic_intersection(s: &PolygonSurface, a: &NormalCurve, b: &NormalCurve) -> Result<i64> {
    let oa = OrientedCurve::new(s, a)?;
    let ob = OrientedCurve::new(s, b)?;
    Ok(pair_chains(&oa.primal_chain(s.triangulation()), &ob.flux(s.num_edges())))
}

/// Exact disjointness: the sum of the coordinates splits back into the two
/// curves.
pub fn disjoint(s: &PolygonSurface, a: &NormalCurve, b: &NormalCurve) -> Result<bool> {
    check_len(s, a.weights.len())?;
    check_len(s, b.weights.len())?;
    let sum = add_weights(&a.weights, &b.weights);
    let m = validate_coordinates(s, sum);
    let Ok(m) = m else { return Ok(false) };
    let comps = components(s, &m)?;
    if comps.len() != 2 {
        return Ok(false);
    }
    let mut expect = vec![a.weights.clone(), b.weights.clone()];
    expect.sort();
    Ok(comps.iter().map(|c| &c.weights).eq(expect.iter()))
}

/// Cyclic reduction of a walk in the dual graph: removes every exit that is
/// immediately undone.
pub fn reduce_walk(walk: &[HalfEdge]) -> Vec<HalfEdge> {
    let mut stack: Vec<HalfEdge> = Vec::with_capacity(walk.len());
    for &h in walk {
        if stack.last() == Some(&!h) {
            stack.pop();
        } else {
            stack.push(h);
        }
    }
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == !stack[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    stack[lo..hi].to_vec()
}

/// One step of a raw transverse path: the triangle it passes through and the
/// edges through which it enters and leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, Serialize)]
pub struct PathStep {
    pub triangle: usize,
    pub entry: usize,
    pub exit: usize,
}

/// Turns a closed path of triangle crossings into a walk of exit half-edges.
pub fn path_to_walk(s: &PolygonSurface, path: &[PathStep]) -> Result<Vec<HalfEdge>> {
    let tri = s.triangulation();
    let n = path.len();
    if n == 0 {
        return Err(Error::InessentialCurve);
    }
    let half = |t: usize, e: usize| -> Result<HalfEdge> {
        if t >= tri.num_triangles() {
            return Err(Error::NotACurve(format!("no triangle {t}")));
        }
        tri.triangle(t)
            .into_iter()
            .find(|&h| edge_of(h) == e)
            .ok_or_else(|| Error::NotACurve(format!("edge {e} is not a side of triangle {t}")))
    };
    let mut walk = Vec::with_capacity(n);
    for (k, st) in path.iter().enumerate() {
        let exit = half(st.triangle, st.exit)?;
        let next = path[(k + 1) % n];
        let entry = half(next.triangle, next.entry)?;
        if next.entry != st.exit || entry != !exit {
            return Err(Error::NotACurve(format!(
                "step {k} leaves triangle {} through edge {} but step {} does not continue across it",
                st.triangle,
                st.exit,
                (k + 1) % n
            )));
        }
        walk.push(exit);
    }
    Ok(walk)
}

fn is_rotation_of(a: &[HalfEdge], b: &[HalfEdge]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let doubled: Vec<HalfEdge> = b.iter().chain(b.iter()).copied().collect();
    doubled.windows(a.len()).any(|w| w == a)
}

/// Normalizes a closed walk of exit half-edges: cancels backtracking and
/// returns the normal curve it is homotopic to, rejecting null-homotopic and
/// vertex-linking loops and walks that are not simple.
pub fn normalize_walk(s: &PolygonSurface, walk: &[HalfEdge]) -> Result<NormalCurve> {
    let reduced = reduce_walk(walk);
    if reduced.is_empty() {
        return Err(Error::InessentialCurve);
    }
    let mut w = vec![BigUint::zero(); s.num_edges()];
    for &h in &reduced {
        w[edge_of(h)] += 1u32;
    }
    if (0..s.num_vertices()).any(|v| s.vertex_link(v) == w) {
        return Err(Error::InessentialCurve);
    }
    let m = validate_coordinates(s, w).map_err(|e| Error::NotACurve(format!("non-simple path ({e})")))?;
    let comps = components(s, &m)?;
    if comps.len() != 1 {
        return Err(Error::NotACurve(format!(
            "path is not simple: its crossing counts split into {} curves",
            comps.len()
        )));
    }
    let curve = NormalCurve::trusted(m.weights);
    let traced: Vec<HalfEdge> = OrientedCurve::new(s, &curve)?.exits().collect();
    let reversed: Vec<HalfEdge> = traced.iter().rev().map(|&h| !h).collect();
    if !is_rotation_of(&reduced, &traced) && !is_rotation_of(&reduced, &reversed) {
        return Err(Error::NotACurve("path is not simple".into()));
    }
    Ok(curve)
}

pub fn normalize_path(s: &PolygonSurface, path: &[PathStep]) -> Result<NormalCurve> {
    normalize_walk(s, &path_to_walk(s, path)?)
}

/// Crossing of a chord of the first curve with a chord of the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Chord index of the first curve (chord `k` ends with exit `k`).
    pub first: usize,
    pub second: usize,
    /// `+1` when the second curve crosses the first from right to left.
    pub sign: i8,
    /// Boundary distance from the second chord's entry point; orders the
    /// crossings along that chord.
    pub order: u64,
}

/// Two curves drawn together with a fixed interleaving of their points on
/// every edge.
#[derive(Clone, Debug)]
pub struct Overlay {
    pub first: OrientedCurve,
    pub second: OrientedCurve,
    pub crossings: Vec<Crossing>,
    /// Merged position (from the tail) of every point on every edge, for
    /// each curve.
    pub positions: Vec<[Vec<u64>; 2]>,
}

impl Overlay {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn signed_count(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }
}

struct OverlayBuilder<'a> {
    tri: &'a Triangulation,
    ra: ArcRealization,
    rb: ArcRealization,
    /// Interleaving choice per edge: bit `t` set means the second curve goes
    /// first (nearer the tail) within tier `t`.
    choice: Vec<u8>,
    /// tier of every point, per curve and edge
    tiers: [Vec<Vec<u8>>; 2],
}

impl<'a> OverlayBuilder<'a> {
    fn tier(r: &ArcRealization, tri: &Triangulation, e: usize, i: u64) -> u8 {
        let (p, m) = r.near_tail(tri, e, i);
        p as u8 + m as u8
    }

    fn new(tri: &'a Triangulation, ra: ArcRealization, rb: ArcRealization) -> Self {
        let mk = |r: &ArcRealization| -> Vec<Vec<u8>> {
            (0..r.weights.len())
                .map(|e| (0..r.weight(e)).map(|i| Self::tier(r, tri, e, i)).collect())
                .collect()
        };
        let tiers = [mk(&ra), mk(&rb)];
        OverlayBuilder {
            tri,
            choice: vec![0; ra.weights.len()],
            ra,
            rb,
            tiers,
        }
    }

    /// Merged position (from the tail) of every point on edge `e`, for each
    /// curve.
    fn positions(&self, e: usize) -> [Vec<u64>; 2] {
        let mut keyed: Vec<(u8, u8, u64, usize)> = Vec::new();
        for (c, tiers) in self.tiers.iter().enumerate() {
            for (i, &t) in tiers[e].iter().enumerate() {
                let second_first = (self.choice[e] >> t) & 1 == 1;
                let rank = if (c == 1) == second_first { 0 } else { 1 };
                keyed.push((2 - t, rank, i as u64, c));
            }
        }
        keyed.sort_unstable();
        let mut out = [
            vec![0; self.tiers[0][e].len()],
            vec![0; self.tiers[1][e].len()],
        ];
        for (pos, &(_, _, i, c)) in keyed.iter().enumerate() {
            out[c][i as usize] = pos as u64;
        }
        out
    }

    /// Chords of both curves in every triangle, as boundary coordinates.
    /// Returns per triangle: (curve, chord index, entry coordinate, exit
    /// coordinate).
    fn chords(&self, walks: [&[(HalfEdge, u64)]; 2]) -> Vec<Vec<(usize, usize, u64, u64)>> {
        let pos: Vec<[Vec<u64>; 2]> = (0..self.choice.len()).map(|e| self.positions(e)).collect();
        let total = |e: usize| self.ra.weight(e) + self.rb.weight(e);
        let coord = |h: HalfEdge, c: usize, i: u64| -> u64 {
            let (_, p) = self.tri.locate(h);
            let e = edge_of(h);
            let m = pos[e][c][i as usize];
            let along = if h >= 0 { m } else { total(e) - 1 - m };
            (p as u64) * (REALIZE_LIMIT * 2) + along
        };
        let mut per = vec![Vec::new(); self.tri.num_triangles()];
        for (c, walk) in walks.iter().enumerate() {
            let n = walk.len();
            for k in 0..n {
                let (prev, pi) = walk[(k + n - 1) % n];
                let (exit, ei) = walk[k];
                let entry = !prev;
                let (t, _) = self.tri.locate(exit);
                per[t].push((c, k, coord(entry, c, pi), coord(exit, c, ei)));
            }
        }
        per
    }

    fn count(&self, walks: [&[(HalfEdge, u64)]; 2]) -> usize {
        self.chords(walks)
            .iter()
            .map(|ch| {
                let (a, b): (Vec<&(usize, usize, u64, u64)>, Vec<_>) = ch.iter().partition(|x| x.0 == 0);
                a.iter()
                    .map(|x| b.iter().filter(|y| crosses(x.2, x.3, y.2, y.3).is_some()).count())
                    .sum::<usize>()
            })
            .sum()
    }
}

fn in_ccw_open(from: u64, to: u64, x: u64) -> bool {
    if from < to {
        from < x && x < to
    } else {
        x > from || x < to
    }
}

/// Chord `p1 -> p2` against chord `q1 -> q2` on a circle with ccw
/// coordinates: `Some(+1)` if the second crosses the first from its right to
/// its left, `Some(-1)` for the opposite direction.
fn crosses(p1: u64, p2: u64, q1: u64, q2: u64) -> Option<i8> {
    let a = in_ccw_open(p1, p2, q1);
    let b = in_ccw_open(p1, p2, q2);
    match (a, b) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

/// Builds the canonical overlay of two connected curves: points grouped by
/// corner type on every edge, with the interleaving of the two curves chosen
/// by local search to reduce the number of crossings.
pub fn overlay(s: &PolygonSurface, a: &NormalCurve, b: &NormalCurve) -> Result<Overlay> {
    let tri = s.triangulation();
    let ra = ArcRealization::new(s, &a.as_multicurve())?;
    let rb = ArcRealization::new(s, &b.as_multicurve())?;
    let oa = OrientedCurve::from_realization(s, &ra);
    let ob = OrientedCurve::from_realization(s, &rb);
    let mut builder = OverlayBuilder::new(tri, ra, rb);
    let walks = [&oa.walk[..], &ob.walk[..]];
    let mut best = builder.count(walks);
    let mut improved = true;
    while improved && best > 0 {
        improved = false;
        for e in 0..builder.choice.len() {
            if builder.ra.weight(e) == 0 || builder.rb.weight(e) == 0 {
                continue;
            }
            let keep = builder.choice[e];
            let mut local_best = (best, keep);
            for opt in 0..8u8 {
                if opt == keep {
                    continue;
                }
                builder.choice[e] = opt;
                let n = builder.count(walks);
                if n < local_best.0 {
                    local_best = (n, opt);
                }
            }
            builder.choice[e] = local_best.1;
            if local_best.0 < best {
                best = local_best.0;
                improved = true;
            }
        }
    }
    let mut crossings = Vec::new();
    for ch in builder.chords(walks) {
        for x in ch.iter().filter(|x| x.0 == 0) {
            for y in ch.iter().filter(|y| y.0 == 1) {
                if let Some(sign) = crosses(x.2, x.3, y.2, y.3) {
                    let endpoint = if in_ccw_open(y.2, y.3, x.2) { x.2 } else { x.3 };
                    let order = (endpoint + 6 * REALIZE_LIMIT - y.2) % (6 * REALIZE_LIMIT);
                    crossings.push(Crossing {
                        first: x.1,
                        second: y.1,
                        sign,
                        order,
                    });
                }
            }
        }
    }
    crossings.sort_by_key(|c| (c.second, c.order));
    let positions = (0..builder.choice.len()).map(|e| builder.positions(e)).collect();
    Ok(Overlay {
        first: oa,
        second: ob,
        crossings,
        positions,
    })
}

/// Lower and upper bounds for the geometric intersection number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub lower: u64,
    pub upper: u64,
}

/// Brackets the geometric intersection number between the disjointness and
/// algebraic-intersection lower bound and the crossing count of the
/// canonical overlay.
pub fn intersection_bracket(s: &PolygonSurface, a: &NormalCurve, b: &NormalCurve) -> Result<Bracket> {
    if disjoint(s, a, b)? {
        return Ok(Bracket { lower: 0, upper: 0 });
    }
    let alg = algebraic_intersection(s, a, b)?.unsigned_abs();
    let lower = alg.max(2 - alg % 2);
    let upper = overlay(s, a, b)?.crossing_count() as u64;
    Ok(Bracket { lower, upper })
}

/// Memo of component counts keyed by coordinates; used by callers that test
/// many pairs.
#[derive(Default)]
pub struct ComponentCache {
    map: HashMap<Vec<BigUint>, usize>,
}

impl ComponentCache {
    pub fn count(&mut self, s: &PolygonSurface, m: &Multicurve) -> Result<usize> {
        if let Some(&n) = self.map.get(m.weights()) {
            return Ok(n);
        }
        let n = components(s, m)?.len();
        self.map.insert(m.weights().to_vec(), n);
        Ok(n)
    }
}
