//! Dehn twists on normal coordinates.
//!
//! The fast path moves the triangulation by flips until the twist axis
//! crosses only two edges `x` and `y`. The two triangles containing them
//! then form an annulus around the axis, bounded by the loop edges `z1` and
//! `z2`, and a twist changes only the weights of `x` and `y`. Coordinates
//! are carried to the short triangulation and back with the tropical
//! Ptolemy rule, which is exact for arbitrary-precision weights.
//!
//! [`detour_twist`] is an independent, slow construction used as a test
//! oracle: it reroutes the twisted curve along the axis at every crossing of
//! an explicit overlay.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::curves::{self, normalize_walk, overlay, total_weight, NormalCurve};
use crate::error::{Error, Result};
use crate::surface::PolygonSurface;
use crate::triangulation::{edge_of, positive, FlipRecord, HalfEdge, Triangulation};

const PLATEAU_DEPTH: usize = 4;
const PLATEAU_STATES: usize = 200_000;

/// A twist axis with its flip sequence to an annulus position.
#[derive(Clone, Debug)]
pub struct TwistAxis {
    weights: Vec<BigUint>,
    flips: Vec<FlipRecord>,
    x: usize,
    y: usize,
    z1: usize,
    z2: usize,
}

fn total(w: &[BigUint]) -> BigUint {
    total_weight(w)
}

/// Reduction in total weight if `e` were flipped (negative if it grows).
fn flip_gain(tri: &Triangulation, w: &[BigUint], e: usize) -> Option<(bool, BigUint)> {
    let [a, b, c, d] = tri.flip_sides(e)?;
    let ac = &w[a] + &w[c];
    let bd = &w[b] + &w[d];
    let m = if ac >= bd { ac } else { bd };
    let new = m - &w[e];
    if new <= w[e] {
        Some((true, &w[e] - new))
    } else {
        Some((false, new - &w[e]))
    }
}

/// Annulus edges `(x, y, z1, z2)` if the curve crosses exactly two edges once
/// each and the two triangles through them are arranged as `(z1, x, y)` and
/// `(z2, !x, !y)` counterclockwise.
fn annulus(tri: &Triangulation, w: &[BigUint]) -> Option<(usize, usize, usize, usize)> {
    let crossed: Vec<usize> = (0..w.len()).filter(|&e| !w[e].is_zero()).collect();
    if crossed.len() != 2 || crossed.iter().any(|&e| !w[e].is_one()) {
        return None;
    }
    let (t1, p) = tri.locate(positive(crossed[0]));
    let s1 = tri.triangle(t1);
    let next = s1[(p + 1) % 3];
    let prev = s1[(p + 2) % 3];
    let (hx, hy, hz) = if edge_of(next) == crossed[1] {
        (s1[p], next, prev)
    } else if edge_of(prev) == crossed[1] {
        (prev, s1[p], next)
    } else {
        return None;
    };
    if edge_of(hz) == crossed[0] || edge_of(hz) == crossed[1] {
        return None;
    }
    let (t2, q) = tri.locate(!hx);
    if t2 == t1 {
        return None;
    }
    let s2 = tri.triangle(t2);
    if s2[(q + 1) % 3] != !hy {
        return None;
    }
    let hz2 = s2[(q + 2) % 3];
    if edge_of(hz2) == crossed[0] || edge_of(hz2) == crossed[1] {
        return None;
    }
    Some((edge_of(hx), edge_of(hy), edge_of(hz), edge_of(hz2)))
}

/// Breadth-first search for a short flip sequence that lowers the total
/// weight when no single flip does.
fn plateau_escape(tri: &Triangulation, w: &[BigUint]) -> Option<Vec<usize>> {
    let start = total(w);
    let mut seen: HashSet<Vec<[HalfEdge; 3]>> = HashSet::new();
    let mut queue: VecDeque<(Triangulation, Vec<BigUint>, Vec<usize>)> = VecDeque::new();
    seen.insert(tri.triangles().to_vec());
    queue.push_back((tri.clone(), w.to_vec(), Vec::new()));
    while let Some((t, wt, path)) = queue.pop_front() {
        if path.len() >= PLATEAU_DEPTH {
            continue;
        }
        for e in 0..t.num_edges() {
            let Some((down, _)) = flip_gain(&t, &wt, e) else { continue };
            let mut t2 = t.clone();
            let mut w2 = wt.clone();
            t2.flip(e).unwrap().apply(&mut w2);
            let mut p2 = path.clone();
            p2.push(e);
            if total(&w2) < start {
                return Some(p2);
            }
            // only explore moves that do not increase the weight
            if !down || !seen.insert(t2.triangles().to_vec()) || seen.len() > PLATEAU_STATES {
                continue;
            }
            queue.push_back((t2, w2, p2));
        }
    }
    None
}

impl TwistAxis {
    /// Finds a flip sequence putting `c` in annulus position.
    pub fn new(s: &PolygonSurface, c: &NormalCurve) -> Result<Self> {
        curves::check_len(s, c.weights().len())?;
        Self::on(s.triangulation(), c.weights())
    }

    /// Same as [`TwistAxis::new`] on any triangulation.
    pub fn on(base: &Triangulation, weights: &[BigUint]) -> Result<Self> {
        let mut tri = base.clone();
        let mut w = weights.to_vec();
        let mut flips = Vec::new();
        loop {
            if let Some((x, y, z1, z2)) = annulus(&tri, &w) {
                return Ok(TwistAxis {
                    weights: weights.to_vec(),
                    flips,
                    x,
                    y,
                    z1,
                    z2,
                });
            }
            let mut best: Option<(BigUint, usize)> = None;
            for e in 0..tri.num_edges() {
                if let Some((true, gain)) = flip_gain(&tri, &w, e) {
                    if !gain.is_zero() && best.as_ref().is_none_or(|(g, _)| gain > *g) {
                        best = Some((gain, e));
                    }
                }
            }
            let moves = match best {
                Some((_, e)) => vec![e],
                None => plateau_escape(&tri, &w).ok_or_else(|| {
                    Error::Shorten(format!("stuck at total weight {}", total(&w)))
                })?,
            };
            for e in moves {
                let rec = tri.flip(e).unwrap();
                rec.apply(&mut w);
                flips.push(rec);
            }
        }
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn num_flips(&self) -> usize {
        self.flips.len()
    }

    fn to_short(&self, w: &mut [BigUint]) {
        for f in &self.flips {
            f.apply(w);
        }
    }

    fn to_base(&self, w: &mut [BigUint]) {
        for f in self.flips.iter().rev() {
            f.apply(w);
        }
    }

    fn z(&self, w: &[BigUint]) -> BigUint {
        &w[self.z1] + &w[self.z2]
    }

    /// Applies the `power`-th power of the right-handed twist along the axis.
    pub fn apply(&self, w: &[BigUint], power: i64) -> Vec<BigUint> {
        let mut w = w.to_vec();
        // With the annulus drawn as (z, x, y) counterclockwise in both
        // triangles, shifting weight from y to x is a left turn.
        let power = -power;
        if power == 0 {
            return w;
        }
        self.to_short(&mut w);
        let z = self.z(&w);
        let (x, y) = (self.x, self.y);
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                let twice = &w[y] << 1u32;
                let m = if twice >= z { twice } else { z.clone() };
                let nx = w[y].clone();
                w[y] = m - &w[x];
                w[x] = nx;
            } else {
                let twice = &w[x] << 1u32;
                let m = if twice >= z { twice } else { z.clone() };
                let ny = w[x].clone();
                w[x] = m - &w[y];
                w[y] = ny;
            }
        }
        self.to_base(&mut w);
        w
    }

    /// Exact geometric intersection number with the curve of weights `w`:
    /// the eventual growth per twist of the weight on `x`.
    pub fn intersection(&self, w: &[BigUint]) -> BigUint {
        let mut w = w.to_vec();
        self.to_short(&mut w);
        let z = self.z(&w);
        let (mut u0, mut u1) = (w[self.x].clone(), w[self.y].clone());
        let step = |a: &BigUint, b: &BigUint| -> BigUint {
            let twice = b << 1u32;
            let m = if twice >= z { twice } else { z.clone() };
            m - a
        };
        // The sequence is convex; once two consecutive terms are at least
        // z/2 and non-decreasing it is linear.
        loop {
            let u2 = step(&u0, &u1);
            let twice0 = &u0 << 1u32;
            if twice0 >= z && u1 >= u0 && (&u1 << 1u32) >= z {
                return u2 - &u1;
            }
            u0 = u1;
            u1 = u2;
        }
    }
}

/// Reference twist by explicit surgery on an overlay of the two curves:
/// travelling along `b`, at every crossing with `a` the curve turns right
/// (for `sign > 0`) and follows a full copy of `a` before continuing.
pub fn detour_twist(s: &PolygonSurface, a: &NormalCurve, b: &NormalCurve, sign: i8) -> Result<NormalCurve> {
    let ov = overlay(s, a, b)?;
    let aw: Vec<HalfEdge> = ov.first.exits().collect();
    let bw: Vec<HalfEdge> = ov.second.exits().collect();
    let n = aw.len();
    let mut walk = Vec::new();
    let mut it = ov.crossings.iter().peekable();
    for (k, &h) in bw.iter().enumerate() {
        while let Some(c) = it.peek() {
            if c.second != k {
                break;
            }
            let j = c.first;
            if c.sign * sign > 0 {
                walk.extend((0..n).map(|i| aw[(j + i) % n]));
            } else {
                walk.extend((1..=n).map(|i| !aw[(j + n - i) % n]));
            }
            it.next();
        }
        walk.push(h);
    }
    normalize_walk(s, &walk)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_step_inverts() {
        let s = PolygonSurface::new(2).unwrap();
        let mut w = vec![0u64; s.num_edges()];
        // corner curve around a polygon corner pair
        w[s.side_edge(0)] = 1;
        w[s.side_edge(1)] = 1;
        w[s.spoke_edge(1)] = 1;
        w[s.spoke_edge(1 + s.side_classes())] = 1;
        let c = NormalCurve::from_u64(&s, &w).unwrap();
        let axis = TwistAxis::new(&s, &c).unwrap();
        let beta: Vec<BigUint> = (0..s.num_edges()).map(|_| BigUint::from(2u32)).collect();
        let there = axis.apply(&beta, 3);
        assert_eq!(axis.apply(&there, -3), beta);
        assert_eq!(axis.apply(c.weights(), 1), c.weights());
    }
}
