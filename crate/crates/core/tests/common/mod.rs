//! Oracles shared by the integration tests. Everything here recomputes its
//! answer from the polygon model or from first principles rather than
//! trusting the engine under test.

#![allow(dead_code)]

use mcg_core::curves::{disjoint, intersection_bracket, Bracket};
use mcg_core::replay::{load_and_validate_seeds, Replay};
use mcg_core::seeds::{shipped, step1_admissible, step2_disjoint};
use mcg_core::twist::TwistAxis;
use mcg_core::{Engine, MCWord, NormalCurve};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const GENERA: [usize; 4] = [5, 6, 7, 8];

pub fn replay_for(g: usize) -> Replay {
    load_and_validate_seeds(g, &shipped(g).expect("shipped seeds")).expect("seeds validate")
}

pub fn polygon(e: &Engine, name: &str) -> NormalCurve {
    e.polygon_curve(name).unwrap().expect("registry curve").clone()
}

pub fn a(i: usize) -> String {
    format!("a{i}")
}

pub fn b(j: usize) -> String {
    format!("b{j}")
}

fn tw(name: &str, s: i8) -> MCWord {
    MCWord::twist(name, s)
}

fn neg(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

/// Both disjointness tables, computed from component counts in the polygon
/// model, compared with the stated index sets.
pub fn disjointness_tables(e: &Engine) -> Result<(), String> {
    let s = e.surface();
    let g = s.genus();
    let (n, h) = (4 * g + 2, 2 * g + 1);
    let bs: Vec<NormalCurve> = (0..n).map(|j| polygon(e, &b(j))).collect();
    let as_: Vec<NormalCurve> = (0..h).map(|m| polygon(e, &a(m))).collect();
    for i in 0..n {
        for k in 1..n {
            let got = disjoint(s, &bs[i], &bs[(i + k) % n]).map_err(|e| e.to_string())?;
            if got != step1_admissible(g, k) {
                return Err(format!("b{i}, b{}: disjoint = {got}", (i + k) % n));
            }
        }
    }
    for m in 0..h {
        for j in 0..n {
            let got = disjoint(s, &as_[m], &bs[j]).map_err(|e| e.to_string())?;
            if got != step2_disjoint(g, m, j) {
                return Err(format!("a{m}, b{j}: disjoint = {got}"));
            }
        }
    }
    Ok(())
}

/// Registry names, chain curves first.
pub fn registry(e: &Engine) -> Vec<String> {
    e.filling_family().to_vec()
}

pub fn twist_round_trip(e: &Engine) -> Result<(), String> {
    for x in registry(e) {
        let w = tw(&x, 1).then(&tw(&x, -1));
        let v = e.is_identity(&w).map_err(|e| e.to_string())?;
        if !v.identity {
            return Err(format!("T[{x}]T'[{x}]: {v}"));
        }
        let y = "b0";
        let c = e.curve(y).unwrap().clone();
        let there = e.evaluate(&tw(&x, 3), &c).map_err(|e| e.to_string())?;
        let back = e.evaluate(&tw(&x, -3), &there).map_err(|e| e.to_string())?;
        if back != c {
            return Err(format!("T[{x}]^-3 T[{x}]^3 moves {y}"));
        }
    }
    Ok(())
}

/// `count` pairs of disjoint registry curves, drawn with a fixed seed.
pub fn random_disjoint_pairs(e: &Engine, count: usize, seed: u64) -> Vec<(String, String)> {
    let s = e.surface();
    let names = registry(e);
    let mut pairs = Vec::new();
    for (i, x) in names.iter().enumerate() {
        for y in &names[i + 1..] {
            if disjoint(s, &polygon(e, x), &polygon(e, y)).unwrap() {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(count);
    pairs
}

pub fn commuting_twists(e: &Engine, count: usize) -> Result<usize, String> {
    let pairs = random_disjoint_pairs(e, count, 0x5eed);
    for (x, y) in &pairs {
        let v = e
            .equal(&tw(x, 1).then(&tw(y, 1)), &tw(y, 1).then(&tw(x, 1)))
            .map_err(|e| e.to_string())?;
        if !v.identity {
            return Err(format!("T[{x}] and T[{y}] do not commute: {v}"));
        }
    }
    Ok(pairs.len())
}

/// Registry pairs whose intersection bracket in the polygon model is (1,1).
pub fn once_intersecting_pairs(e: &Engine) -> Vec<(String, String)> {
    let s = e.surface();
    let names = registry(e);
    let mut out = Vec::new();
    for (i, x) in names.iter().enumerate() {
        for y in &names[i + 1..] {
            if intersection_bracket(s, &polygon(e, x), &polygon(e, y)).unwrap() == (Bracket { lower: 1, upper: 1 }) {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

pub fn braid_relations(e: &Engine) -> Result<usize, String> {
    let pairs = once_intersecting_pairs(e);
    if pairs.is_empty() {
        return Err("no once-intersecting pairs".into());
    }
    for (x, y) in &pairs {
        let lhs = MCWord::product(&[tw(x, 1), tw(y, 1), tw(x, 1)]);
        let rhs = MCWord::product(&[tw(y, 1), tw(x, 1), tw(y, 1)]);
        let v = e.equal(&lhs, &rhs).map_err(|e| e.to_string())?;
        if !v.identity {
            return Err(format!("braid relation fails for {x}, {y}: {v}"));
        }
    }
    Ok(pairs.len())
}

/// `σ T_c σ⁻¹ = T_{σ(c)}` and `τ T_c τ⁻¹ = T_{τ(c)}⁻¹`, with the images
/// read off the polygon symmetries directly.
pub fn naturality(e: &Engine) -> Result<(), String> {
    let s = e.surface();
    let names = registry(e);
    let find = |c: &NormalCurve| names.iter().find(|n| polygon(e, n) == *c).cloned();
    let rot = s.rotation_map();
    let refl = s.reflection_map();
    for x in &names {
        let c = polygon(e, x);
        let rc = NormalCurve::new(s, rot.apply_weights(c.weights())).unwrap();
        let tc = NormalCurve::new(s, refl.apply_weights(c.weights())).unwrap();
        if let Some(y) = find(&rc) {
            let w = MCWord::product(&[MCWord::rot(1), tw(x, 1), MCWord::rot(-1)]);
            let v = e.equal(&w, &tw(&y, 1)).map_err(|e| e.to_string())?;
            if !v.identity {
                return Err(format!("σ T[{x}] σ^-1 != T[{y}]: {v}"));
            }
        }
        if let Some(y) = find(&tc) {
            let t: MCWord = "t".parse().unwrap();
            let w = MCWord::product(&[t.clone(), tw(x, 1), t]);
            let v = e.equal(&w, &tw(&y, -1)).map_err(|e| e.to_string())?;
            if !v.identity {
                return Err(format!("τ T[{x}] τ != T'[{y}]: {v}"));
            }
            let same = e.equal(&MCWord::product(&["t".parse().unwrap(), tw(x, 1), "t".parse().unwrap()]), &tw(&y, 1));
            if same.map(|v| v.identity).unwrap_or(false) {
                return Err(format!("τ T[{x}] τ agrees with the positive twist"));
            }
        }
    }
    Ok(())
}

/// The engine's homology action of `T_x` against the class of the curve
/// twisted in the polygon model, up to the orientation of the image.
pub fn transvections(e: &Engine) -> Result<usize, String> {
    let s = e.surface();
    let names = registry(e);
    let mut checked = 0;
    for x in &names {
        let axis = TwistAxis::new(s, &polygon(e, x)).map_err(|e| e.to_string())?;
        for y in names.iter().step_by(3) {
            let img = NormalCurve::new(s, axis.apply(polygon(e, y).weights(), 1)).unwrap();
            let direct = e.homology_class(&img).map_err(|e| e.to_string())?;
            let pushed = e.homology_action(&tw(x, 1)).unwrap().matrix.apply(e.class(y).unwrap());
            if direct != pushed && neg(&direct) != pushed {
                return Err(format!("[T_{x}({y})]: direct {direct:?}, action {pushed:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn symplectic(e: &Engine, words: &[MCWord]) -> Result<usize, String> {
    for w in words {
        let act = e.homology_action(w).map_err(|e| e.to_string())?;
        if !e.basis().is_symplectic(&act) {
            return Err(format!("homology action of {w} is not ±symplectic"));
        }
    }
    Ok(words.len())
}

pub fn sample_words() -> Vec<MCWord> {
    ["r", "R", "t", "q", "rq", "qrrq", "T[a1]", "T'[b0]", "T[a2]T[b3]t", "rT[a0]qT'[b5]"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}
