//! Seed curves `a_0` and `b_0`, their validation tables, and the bounded
//! search that produced the shipped seed files.

use serde::{Deserialize, Serialize};

use crate::curves::{self, disjoint, intersection_bracket, normalize_path, Bracket, NormalCurve, PathStep};
use crate::error::{Error, Result};
use crate::surface::PolygonSurface;
use crate::triangulation::{edge_of, HalfEdge};
use crate::twist::TwistAxis;

/// A curve as it appears in a seed file: a closed crossing sequence of
/// `[triangle, entry edge, exit edge]` triples, or a raw weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveLiteral {
    Path(Vec<(usize, usize, usize)>),
    Weights(Vec<u64>),
}

impl CurveLiteral {
    pub fn resolve(&self, s: &PolygonSurface) -> Result<NormalCurve> {
        match self {
            CurveLiteral::Weights(w) => NormalCurve::from_u64(s, w),
            CurveLiteral::Path(p) => {
                let steps: Vec<PathStep> = p
                    .iter()
                    .map(|&(triangle, entry, exit)| PathStep { triangle, entry, exit })
                    .collect();
                normalize_path(s, &steps)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedData {
    pub genus: usize,
    pub a0: CurveLiteral,
    pub b0: CurveLiteral,
}

impl SeedData {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SeedInvalid(format!("malformed seed file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("seed data serializes")
    }

    /// Resolves both literals on the surface of the stated genus.
    pub fn resolve(&self, s: &PolygonSurface) -> Result<(NormalCurve, NormalCurve)> {
        if s.genus() != self.genus {
            return Err(Error::SeedInvalid(format!(
                "seed file is for genus {}, surface has genus {}",
                self.genus,
                s.genus()
            )));
        }
        let a0 = self.a0.resolve(s).map_err(|e| Error::SeedInvalid(format!("a0: {e}")))?;
        let b0 = self.b0.resolve(s).map_err(|e| Error::SeedInvalid(format!("b0: {e}")))?;
        Ok((a0, b0))
    }
}

/// Seed files shipped with the library.
pub fn shipped(genus: usize) -> Option<SeedData> {
    let text = match genus {
        5 => include_str!("../seeds/g5.json"),
        6 => include_str!("../seeds/g6.json"),
        7 => include_str!("../seeds/g7.json"),
        8 => include_str!("../seeds/g8.json"),
        _ => return None,
    };
    Some(SeedData::from_json(text).expect("shipped seed files parse"))
}

/// The chain curve `a_i`: it encircles the corners `P_{i-2}` and
/// `P_{i-2+2g+1}`, which the gluing identifies.
pub fn chain_curve(s: &PolygonSurface, i: i64) -> NormalCurve {
    let h = s.side_classes() as i64;
    let n = s.sides() as i64;
    let mut w = vec![0u64; s.num_edges()];
    w[s.side_edge((i - 3).rem_euclid(h) as usize)] += 1;
    w[s.side_edge((i - 2).rem_euclid(h) as usize)] += 1;
    w[s.spoke_edge((i - 2).rem_euclid(n) as usize)] += 1;
    w[s.spoke_edge((i - 2 + h).rem_euclid(n) as usize)] += 1;
    NormalCurve::from_u64(s, &w).expect("chain curves are valid")
}

/// Step-1 set: `k` (mod `4g+2`) with `b_i`, `b_{i+k}` disjoint.
pub fn step1_admissible(g: usize, k: usize) -> bool {
    (4..=4 * g - 2).contains(&k) && ![2 * g - 2, 2 * g, 2 * g + 2, 2 * g + 4].contains(&k)
}

/// Step-2 set: `a_m` and `b_n` are disjoint unless `m` is `n` or `n + 4`
/// modulo `2g+1`.
pub fn step2_disjoint(g: usize, m: usize, n: usize) -> bool {
    let h = 2 * g + 1;
    let m = m % h;
    m != n % h && m != (n + 4) % h
}

fn invalid(entry: String) -> Error {
    Error::SeedInvalid(entry)
}

fn orbit(s: &PolygonSurface, c: &NormalCurve, len: usize) -> Vec<NormalCurve> {
    let rot = s.rotation_map();
    let mut out = vec![c.clone()];
    for _ in 1..len {
        let next = rot.apply_weights(out.last().unwrap().weights());
        out.push(NormalCurve::new(s, next).expect("rotation preserves curves"));
    }
    out
}

/// Checks every entry of the seed validation table; the error names the
/// first failing entry.
pub fn check_tables(s: &PolygonSurface, a0: &NormalCurve, b0: &NormalCurve) -> Result<(Vec<NormalCurve>, Vec<NormalCurve>)> {
    let g = s.genus();
    let h = 2 * g + 1;
    let n = 4 * g + 2;
    let rot = s.rotation_map();
    let refl = s.reflection_map();
    if rot.pow(h as i64).apply_weights(a0.weights()) != a0.weights() {
        return Err(invalid("a-orbit: σ^(2g+1)(a_0) != a_0".into()));
    }
    if refl.apply_weights(b0.weights()) != b0.weights() {
        return Err(invalid("τ-invariance: τ(b_0) != b_0".into()));
    }
    let a = orbit(s, a0, h);
    let b = orbit(s, b0, n);
    for i in 0..h {
        for j in i + 1..h {
            let d = j - i;
            if d == 1 || d == h - 1 {
                let br = intersection_bracket(s, &a[i], &a[j])?;
                if br != (Bracket { lower: 1, upper: 1 }) {
                    return Err(invalid(format!("chain: bracket(a_{i}, a_{j}) = ({}, {})", br.lower, br.upper)));
                }
            } else if !disjoint(s, &a[i], &a[j])? {
                return Err(invalid(format!("chain: a_{i} and a_{j} intersect")));
            }
        }
    }
    for k in 1..n {
        let want = step1_admissible(g, k);
        if disjoint(s, &b[0], &b[k])? != want {
            let what = if want { "not disjoint" } else { "disjoint" };
            return Err(invalid(format!("Step-1 entry k={k}: b_0 and b_{k} are {what}")));
        }
    }
    for (m, am) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let want = step2_disjoint(g, m, j);
            if disjoint(s, am, bj)? != want {
                let what = if want { "not disjoint" } else { "disjoint" };
                return Err(invalid(format!("Step-2 entry (m={m}, n={j}): a_{m} and b_{j} are {what}")));
            }
        }
    }
    let br = intersection_bracket(s, &b[0], &a[4])?;
    if br != (Bracket { lower: 1, upper: 1 }) {
        return Err(invalid(format!("duality: bracket(b_0, a_4) = ({}, {})", br.lower, br.upper)));
    }
    let image = refl.apply_weights(a[0].weights());
    let Some(c) = a.iter().position(|x| x.weights() == image.as_slice()) else {
        return Err(invalid("τ-symmetry: τ(a_0) is not a chain curve".into()));
    };
    for (i, ai) in a.iter().enumerate() {
        let j = (c + h - i) % h;
        if refl.apply_weights(ai.weights()) != a[j].weights() {
            return Err(invalid(format!("τ-symmetry: τ(a_{i}) != a_{j}")));
        }
    }
    Ok((a, b))
}

fn walk_to_path(s: &PolygonSurface, walk: &[HalfEdge]) -> Vec<(usize, usize, usize)> {
    let n = walk.len();
    (0..n)
        .map(|k| {
            let (t, _) = s.triangulation().locate(walk[k]);
            (t, edge_of(walk[(k + n - 1) % n]), edge_of(walk[k]))
        })
        .collect()
}

/// Bounded search for `b_0`: closed, non-backtracking walks in the dual graph
/// of length at most `max_len`, in a fixed order, filtered by the
/// intersection pattern with the chain and finally by [`check_tables`].
pub fn search(s: &PolygonSurface, max_len: usize) -> Result<SeedData> {
    search_all(s, max_len, 1)?
        .pop()
        .ok_or_else(|| Error::SeedInvalid(format!("no b_0 found with walks up to length {max_len}")))
}

/// Like [`search`], but collects up to `limit` distinct valid `b_0` curves in
/// search order.
pub fn search_all(s: &PolygonSurface, max_len: usize, limit: usize) -> Result<Vec<SeedData>> {
    let mut found = Vec::new();
    if limit == 0 {
        return Ok(found);
    }
    let h = 2 * s.genus() + 1;
    let a0 = chain_curve(s, 0);
    let chain: Vec<NormalCurve> = (0..h as i64).map(|i| chain_curve(s, i)).collect();
    let axes: Vec<TwistAxis> = chain.iter().map(|c| TwistAxis::new(s, c)).collect::<Result<_>>()?;
    let refl = s.reflection_map();
    let tri = s.triangulation();
    let mut tried = std::collections::HashSet::new();
    for len in 2..=max_len {
        for t0 in 0..tri.num_triangles() {
            let mut walk: Vec<HalfEdge> = Vec::with_capacity(len);
            // depth-first over exits; the stack holds the next choice index
            let mut choice = vec![0usize; len];
            let mut depth = 0;
            loop {
                if depth == len {
                    let last = *walk.last().unwrap();
                    let closes = tri.locate(!last).0 == t0 && walk[0] != last;
                    if closes {
                        let reduced = curves::reduce_walk(&walk);
                        if reduced.len() == walk.len() {
                            if let Some(seed) = consider(s, &walk, &axes, &refl, &mut tried, &a0) {
                                found.push(seed);
                                if found.len() == limit {
                                    return Ok(found);
                                }
                            }
                        }
                    }
                    depth -= 1;
                    walk.pop();
                    continue;
                }
                let t = if depth == 0 { t0 } else { tri.locate(!walk[depth - 1]).0 };
                let sides = tri.triangle(t);
                let mut advanced = false;
                while choice[depth] < 3 {
                    let h = sides[choice[depth]];
                    choice[depth] += 1;
                    if depth > 0 && h == !walk[depth - 1] {
                        continue;
                    }
                    walk.push(h);
                    depth += 1;
                    if depth < len {
                        choice[depth] = 0;
                    }
                    advanced = true;
                    break;
                }
                if !advanced {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    walk.pop();
                }
            }
        }
    }
    Ok(found)
}

fn consider(
    s: &PolygonSurface,
    walk: &[HalfEdge],
    axes: &[TwistAxis],
    refl: &crate::surface::SimplicialMap,
    tried: &mut std::collections::HashSet<Vec<u64>>,
    a0: &NormalCurve,
) -> Option<SeedData> {
    let mut w = vec![0u64; s.num_edges()];
    for &h in walk {
        w[edge_of(h)] += 1;
    }
    if !tried.insert(w.clone()) {
        return None;
    }
    let big: Vec<_> = w.iter().map(|&x| num_bigint::BigUint::from(x)).collect();
    if refl.apply_weights(&big) != big {
        return None;
    }
    let b = NormalCurve::new(s, big).ok()?;
    for (i, ax) in axes.iter().enumerate() {
        let want: u32 = if i == 0 || i == 4 { 1 } else { 0 };
        if ax.intersection(b.weights()) != want.into() {
            return None;
        }
    }
    check_tables(s, a0, &b).ok()?;
    let traced: Vec<HalfEdge> = curves::OrientedCurve::new(s, &b).ok()?.exits().collect();
    Some(SeedData {
        genus: s.genus(),
        a0: CurveLiteral::Weights(a0.weights_u64().unwrap()),
        b0: CurveLiteral::Path(walk_to_path(s, &traced)),
    })
}
