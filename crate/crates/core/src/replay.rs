//! Replays the four-step proof that the rotation `σ` and the involution
//! `q = τ∘B_0` generate the extended mapping class group, and emits a
//! verified word over `{r, R, q}` for every Humphries twist.
//!
//! Every claim is checked before it is used: curve transports by
//! evaluation, word identities by [`Engine::equal`]. Derived curves
//! (`c1`, `c2`, `e`, `f`) are defined as images of known curves under the
//! given words.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seeds::{check_tables, step1_admissible, step2_disjoint, SeedData};
use crate::surface::PolygonSurface;
use crate::words::{Engine, IdentityVerdict, MCWord, Witness};

/// One entry of the verification transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub step: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

/// A word over `{r, R, q}` proved equal to a product of twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProvedElement {
    pub name: String,
    pub word: String,
    pub claimed: String,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub target: String,
    pub word: String,
    pub length: usize,
    pub reduced_length: usize,
    pub verified: bool,
    pub checks: Vec<String>,
}

impl Certificate {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

/// Curve data and state of a replay in progress.
pub struct Replay {
    engine: Engine,
    genus: usize,
    transcript: Vec<Check>,
    /// `A_m B_n⁻¹` words keyed by `(m mod 2g+1, n mod 4g+2)`.
    ab: BTreeMap<(usize, usize), MCWord>,
    /// `A_1` once Step 3 has run.
    a1: Option<MCWord>,
    handedness_flipped: bool,
    literal_transport: Option<bool>,
}

/// Node budget for each pass of [`Replay::find_transport`].
const TRANSPORT_SEARCH_LIMIT: usize = 50_000;

/// Builds the registry from seed data after checking every table entry.
pub fn load_and_validate_seeds(genus: usize, seeds: &SeedData) -> Result<Replay> {
    if genus < 5 {
        return Err(Error::GenusOutOfRange { genus, min: 5 });
    }
    let s = PolygonSurface::new(genus)?;
    let (a0, b0) = seeds.resolve(&s)?;
    check_tables(&s, &a0, &b0)?;
    let engine = Engine::new(s, &a0, &b0)?;
    let mut r = Replay {
        engine,
        genus,
        transcript: Vec::new(),
        ab: BTreeMap::new(),
        a1: None,
        handedness_flipped: false,
        literal_transport: None,
    };
    r.log("seeds", "validation tables (orbits, τ(b_0)=b_0, chain, Step-1, Step-2, duality, τ-symmetry)", true, "all entries hold");
    Ok(r)
}

fn verdict_text(v: &IdentityVerdict) -> String {
    v.to_string()
}

impl Replay {
    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn transcript(&self) -> &[Check] {
        &self.transcript
    }

    pub fn handedness_flipped(&self) -> bool {
        self.handedness_flipped
    }

    fn n(&self) -> i64 {
        4 * self.genus as i64 + 2
    }

    fn h(&self) -> i64 {
        2 * self.genus as i64 + 1
    }

    pub fn a_name(&self, i: i64) -> String {
        format!("a{}", i.rem_euclid(self.h()))
    }

    pub fn b_name(&self, j: i64) -> String {
        format!("b{}", j.rem_euclid(self.n()))
    }

    fn log(&mut self, step: &str, claim: &str, passed: bool, detail: &str) {
        self.transcript.push(Check {
            step: step.into(),
            claim: claim.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, step: &str, claim: &str, detail: String) -> Error {
        self.log(step, claim, false, &detail);
        Error::Falsified(format!("{step}: {claim}: {detail}"))
    }

    /// Verifies `word = claimed`, recording the result; fails the replay if
    /// it does not hold.
    fn prove(&mut self, step: &str, name: &str, word: &MCWord, claimed: &MCWord) -> Result<ProvedElement> {
        let v = self.engine.equal(word, claimed)?;
        if !v.identity {
            return Err(self.fail(step, &format!("{name} = {claimed}"), verdict_text(&v)));
        }
        self.log(step, &format!("{name} = {claimed}"), true, &verdict_text(&v));
        Ok(ProvedElement {
            name: name.into(),
            word: word.to_string(),
            claimed: claimed.to_string(),
            verdict: verdict_text(&v),
        })
    }

    fn twists(&self, factors: &[(&str, i8)]) -> MCWord {
        MCWord::product(factors.iter().map(|(c, s)| MCWord::twist(c, *s)).collect::<Vec<_>>().iter())
    }

    /// Exact intersection number through the twist axis of a registered
    /// curve.
    pub fn intersection(&self, x: &str, y: &str) -> Result<BigUint> {
        let w = self.engine.curve(y)?.weights().to_vec();
        Ok(self.engine.axis(x)?.intersection(&w))
    }

    fn check_disjoint(&mut self, step: &str, x: &str, y: &str, want: bool) -> Result<()> {
        let i = self.intersection(x, y)?;
        let claim = format!("{x} and {y} {}", if want { "disjoint" } else { "intersect" });
        if i.is_zero() != want {
            return Err(self.fail(step, &claim, format!("i = {i}")));
        }
        self.log(step, &claim, true, &format!("i = {i}"));
        Ok(())
    }

    fn check_fixes(&mut self, step: &str, phi: &MCWord, curve: &str) -> Result<()> {
        let c = self.engine.curve(curve)?.clone();
        let img = self.engine.evaluate(phi, &c)?;
        let claim = format!("transport fixes {curve}");
        if img != c {
            return Err(self.fail(step, &claim, "image differs".into()));
        }
        self.log(step, &claim, true, "exact coordinate equality");
        Ok(())
    }

    fn check_image(&mut self, step: &str, phi: &MCWord, from: &str, to: &str) -> Result<()> {
        let c = self.engine.curve(from)?.clone();
        let img = self.engine.evaluate(phi, &c)?;
        let claim = format!("transport maps {from} to {to}");
        if &img != self.engine.curve(to)? {
            return Err(self.fail(step, &claim, format!("image has total weight {}", img.total_weight())));
        }
        self.log(step, &claim, true, "exact coordinate equality");
        Ok(())
    }

    /// The Step-1 word for `B_0 B_k⁻¹`: `σ^k q σ^k q`.
    pub fn step1_word(&self, k: i64) -> MCWord {
        MCWord::product(&[MCWord::rot(k), MCWord::refl_b(), MCWord::rot(k), MCWord::refl_b()])
    }

    /// Word for `B_i B_j⁻¹` with `j - i` admissible.
    pub fn bb(&self, i: i64, j: i64) -> MCWord {
        let k = (j - i).rem_euclid(self.n());
        assert!(step1_admissible(self.genus, k as usize), "B_{i} B_{j}^-1 is not a Step-1 element");
        let i = i.rem_euclid(self.n());
        self.step1_word(k).conjugate_by(&MCWord::rot(i))
    }

    /// Word for `B_i B_j⁻¹` where `b_i`, `b_j` both miss `b_base`; routed
    /// through the base when `b_i` and `b_j` intersect.
    fn bb_via(&self, i: i64, j: i64, base: i64) -> MCWord {
        if step1_admissible(self.genus, (j - i).rem_euclid(self.n()) as usize) {
            self.bb(i, j)
        } else {
            self.bb(i, base).then(&self.bb(base, j))
        }
    }

    /// Best-first search, by total weight, for a product of `B_i B_j⁻¹`
    /// with `b_i`, `b_j` disjoint from `b_base` that carries the registry
    /// curve `start` to a chain curve missing `b_base`. The preferred target
    /// is tried first. Returns the factors in order of application.
    pub fn find_transport(&self, start: &str, base: i64, preferred: usize) -> Result<Option<(Vec<(usize, usize)>, usize)>> {
        let bw = self.engine.curve(&self.b_name(base))?.weights().to_vec();
        let missing = |name: &str| -> Result<bool> { Ok(self.engine.axis(name)?.intersection(&bw).is_zero()) };
        let mut disjoint = Vec::new();
        for j in 0..self.n() {
            if missing(&self.b_name(j))? {
                disjoint.push(j as usize);
            }
        }
        let mut chain = Vec::new();
        for m in 0..self.h() {
            if missing(&self.a_name(m))? {
                chain.push((m as usize, self.engine.curve(&self.a_name(m))?.weights().to_vec()));
            }
        }
        let gens: Vec<(usize, usize, MCWord)> = disjoint
            .iter()
            .flat_map(|&i| disjoint.iter().filter(move |&&j| j != i).map(move |&j| (i, j)))
            .map(|(i, j)| (i, j, MCWord::twist(&format!("b{i}"), 1).then(&MCWord::twist(&format!("b{j}"), -1))))
            .collect();
        let start = self.engine.curve(start)?.weights().to_vec();
        let preferred_only: Vec<_> = chain.iter().filter(|(m, _)| *m == preferred).cloned().collect();
        for targets in [&preferred_only, &chain] {
            let mut heap = BinaryHeap::new();
            let mut seen = HashSet::new();
            seen.insert(start.clone());
            heap.push(Reverse((start.iter().sum::<BigUint>(), Vec::new(), start.clone())));
            let mut expanded = 0;
            while let Some(Reverse((_, path, w))) = heap.pop() {
                if let Some((m, _)) = targets.iter().find(|(_, t)| *t == w) {
                    return Ok(Some((path, *m)));
                }
                expanded += 1;
                if expanded > TRANSPORT_SEARCH_LIMIT {
                    break;
                }
                for (i, j, word) in &gens {
                    let img = self.engine.evaluate_weights(word, &w)?;
                    if seen.insert(img.clone()) {
                        let mut p: Vec<(usize, usize)> = path.clone();
                        p.push((*i, *j));
                        heap.push(Reverse((img.iter().sum(), p, img)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Whether the prescribed Step-2 transport hit its chain curve; `None`
    /// before Step 2 runs.
    pub fn literal_transport(&self) -> Option<bool> {
        self.literal_transport
    }

    /// Word for `A_m B_n⁻¹`; requires Step 2.
    pub fn ab(&self, m: i64, n: i64) -> MCWord {
        let key = (m.rem_euclid(self.h()) as usize, n.rem_euclid(self.n()) as usize);
        self.ab
            .get(&key)
            .unwrap_or_else(|| panic!("A_{m} B_{n}^-1 is not a Step-2 element"))
            .clone()
    }

    fn inv(w: &MCWord) -> MCWord {
        w.inverse_with_involution()
    }

    /// Torsion orders of `σ` and `q`.
    pub fn verify_torsion_orders(&mut self) -> Result<Vec<(String, IdentityVerdict)>> {
        let n = self.n();
        let mut out = Vec::new();
        let full = self.engine.is_identity(&MCWord::rot(n))?;
        out.push((format!("σ^{n}"), full.clone()));
        let qq = self.engine.is_identity(&"qq".parse()?)?;
        out.push(("(τ∘B)^2".to_string(), qq.clone()));
        let q = self.engine.is_identity(&MCWord::refl_b())?;
        out.push(("τ∘B".to_string(), q.clone()));
        if !full.identity {
            return Err(self.fail("torsion", &format!("σ^{n} = 1"), verdict_text(&full)));
        }
        if !qq.identity {
            return Err(self.fail("torsion", "(τ∘B)^2 = 1", verdict_text(&qq)));
        }
        if q.identity {
            return Err(self.fail("torsion", "τ∘B != 1", verdict_text(&q)));
        }
        for d in (1..n).filter(|d| n % d == 0) {
            let v = self.engine.is_identity(&MCWord::rot(d))?;
            if v.identity {
                return Err(self.fail("torsion", &format!("σ^{d} != 1"), verdict_text(&v)));
            }
            out.push((format!("σ^{d}"), v));
        }
        let summary = out.iter().map(|(w, v)| format!("{w}: {}", v.identity)).collect::<Vec<_>>().join(", ");
        self.log("torsion", "σ has order 4g+2 and τ∘B has order 2", true, &summary);
        Ok(out)
    }

    /// Step 1: `σ^k q σ^k q = B_0 B_k⁻¹` for every admissible `k`, together
    /// with both directions of the disjointness table.
    pub fn step1(&mut self) -> Result<Vec<ProvedElement>> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 1..n {
            let adm = step1_admissible(self.genus, k as usize);
            let bk = self.b_name(k);
            self.check_disjoint("step 1", "b0", &bk, adm)?;
            if adm {
                let w = self.step1_word(k);
                let claimed = self.twists(&[("b0", 1), (&bk, -1)]);
                out.push(self.prove("step 1", &format!("B_0 B_{k}^-1"), &w, &claimed)?);
            }
        }
        Ok(out)
    }

    /// Step 2: transports `B_i B_j⁻¹` to `A_m B_n⁻¹` and builds a verified
    /// word for every `m ∉ {n, n+4}`. Returns the name of the chain curve the
    /// transported curve matched.
    pub fn step2(&mut self) -> Result<String> {
        let g = self.genus as i64;
        let st = "step 2";
        let (p, m2, m3, m4) = (2 * g + 2, 2 * g - 3, 2 * g - 4, 4 * g + 1);
        let (bp, b3x, b4x, b41) = (self.b_name(p), self.b_name(m2), self.b_name(m3), self.b_name(m4));
        self.check_disjoint(st, &bp, &b3x, true)?;
        self.check_disjoint(st, &bp, &b4x, true)?;

        // c1 = (B_{2g+2}B_{2g-4}^-1)(B_{2g+2}B_{2g-3}^-1)(b_{4g+1})
        let phi1 = self.bb(p, m3).then(&self.bb(p, m2));
        self.check_fixes(st, &phi1, &bp)?;
        self.engine.add_image("c1", &phi1, &b41)?;
        let bp_c1 = self.bb(p, m4).conjugate_by_g(&phi1);
        self.prove(st, "B_{2g+2} C_1^-1", &bp_c1, &self.twists(&[(&bp, 1), ("c1", -1)]))?;
        let b_c1 = self.bb(m2, p).then(&bp_c1);
        self.prove(st, "B_{2g-3} C_1^-1", &b_c1, &self.twists(&[(&b3x, 1), ("c1", -1)]))?;

        // c2 = image of c1 under the prescribed product, rightmost factor first
        let lo = if g % 2 == 1 { 6 } else { 4 };
        let mut phi2 = MCWord::empty();
        for j in lo..=(2 * g - 7) {
            let bj = self.b_name(j);
            self.check_disjoint(st, &b3x, &bj, true)?;
            phi2 = phi2.then(&self.bb(m2, j));
        }
        self.check_fixes(st, &phi2, &b3x)?;
        self.engine.add_image("c2", &phi2, "c1")?;
        let b_c2 = b_c1.conjugate_by_g(&phi2);
        self.prove(st, "B_{2g-3} C_2^-1", &b_c2, &self.twists(&[(&b3x, 1), ("c2", -1)]))?;

        let (psi, literal) = if g % 2 == 1 {
            (self.bb(3, m2).then(&self.bb(2, m2)), 3)
        } else {
            (self.bb(0, m2), 4)
        };
        self.check_fixes(st, &psi, &b3x)?;
        // the independent cross-check: the transported curve is a seeded
        // chain curve
        let c2 = self.engine.curve("c2")?.clone();
        let image = self.engine.evaluate(&psi, &c2)?;
        let literal_name = self.a_name(literal);
        let holds = &image == self.engine.curve(&literal_name)?;
        let detail = if holds {
            "exact coordinate equality".to_string()
        } else {
            format!("image has total weight {}, {literal_name} has {}", image.total_weight(), self.engine.curve(&literal_name)?.total_weight())
        };
        self.log(st, &format!("transport maps c2 to {literal_name}"), holds, &detail);
        self.literal_transport = Some(holds);

        let (b_a, target) = if holds {
            (b_c2.conjugate_by_g(&psi), literal)
        } else {
            let (factors, target) = self
                .find_transport("c1", m2, literal as usize)?
                .ok_or_else(|| self.fail(st, "repair transport", "no transport found within the search budget".into()))?;
            let desc = factors.iter().map(|(i, j)| format!("B_{i}B_{j}^-1")).collect::<Vec<_>>().join(" then ");
            let mut psi = MCWord::empty();
            for &(i, j) in &factors {
                psi = self.bb_via(i as i64, j as i64, m2).then(&psi);
            }
            let target_name = self.a_name(target as i64);
            self.check_fixes(st, &psi, &b3x)?;
            self.check_image(st, &psi, "c1", &target_name)?;
            self.log(st, "repair transport", true, &format!("c1 to {target_name} by {desc}"));
            (b_c1.conjugate_by_g(&psi), target as i64)
        };
        let target_name = self.a_name(target);
        self.prove(st, &format!("B_{{2g-3}} A_{target}^-1"), &b_a, &self.twists(&[(&b3x, 1), (&target_name, -1)]))?;
        let a_b = Self::inv(&b_a);

        // σ^{2g+5} moves (a_target, b_{2g-3}) to (a_i, b_0)
        let shift = 2 * g + 5;
        let i = (target + shift).rem_euclid(self.h());
        let rot = MCWord::rot(shift);
        let a_i = self.a_name(i);
        self.check_image(st, &rot, &target_name, &a_i)?;
        self.check_image(st, &rot, &b3x, "b0")?;
        let ai_b0 = a_b.conjugate_by_g(&rot);
        self.prove(st, &format!("A_{i} B_0^-1"), &ai_b0, &self.twists(&[(&a_i, 1), ("b0", -1)]))?;

        // q σ^k q (A_i B_0^-1) σ^k = A_{i-k} B_0^-1 whenever a_{i-k} misses b_0
        let mut base: BTreeMap<usize, MCWord> = BTreeMap::new();
        for k in 0..self.h() {
            let m = (i - k).rem_euclid(self.h());
            if !step2_disjoint(self.genus, m as usize, 0) {
                continue;
            }
            let w = if k == 0 {
                ai_b0.clone()
            } else {
                MCWord::product(&[MCWord::refl_b(), MCWord::rot(k), MCWord::refl_b(), ai_b0.clone(), MCWord::rot(k)])
            };
            let am = self.a_name(m);
            self.prove(st, &format!("A_{m} B_0^-1"), &w, &self.twists(&[(&am, 1), ("b0", -1)]))?;
            base.insert(m as usize, w);
        }

        // σ^n-conjugates give every A_m B_n^-1
        for n in 0..self.n() {
            for m in 0..self.h() {
                if !step2_disjoint(self.genus, m as usize, n as usize) {
                    continue;
                }
                let m0 = (m - n).rem_euclid(self.h()) as usize;
                let w = base[&m0].conjugate_by(&MCWord::rot(n));
                let (am, bn) = (self.a_name(m), self.b_name(n));
                self.prove(st, &format!("A_{m} B_{n}^-1"), &w, &self.twists(&[(&am, 1), (&bn, -1)]))?;
                self.ab.insert((m as usize, n as usize), w);
            }
        }
        Ok(target_name)
    }

    /// Checks a bracket claim through the exact intersection number in the
    /// marked surface, which bounds the closed-surface one from above.
    fn check_bracket(&mut self, step: &str, x: &str, y: &str, want: u64) -> Result<()> {
        let claim = format!("bracket({x}, {y}) = ({want}, {want})");
        let i = self.intersection(x, y)?;
        let detail = format!("exact i = {i}");
        if i != BigUint::from(want) {
            return Err(self.fail(step, &claim, detail));
        }
        self.log(step, &claim, true, &detail);
        Ok(())
    }

    /// Step 3: the lantern relation and a word for `A_1`.
    pub fn step3(&mut self) -> Result<ProvedElement> {
        let g = self.genus as i64;
        let st = "step 3";
        let m2 = 2 * g - 3;
        let b3x = self.b_name(m2);

        // f = (B_{2g-3}B_3^-1)(A_6B_{2g-3}^-1)(A_5B_{2g-3}^-1)(A_4B_{2g-3}^-1)(b_0)
        let phi_f = MCWord::product(&[self.bb(m2, 3), self.ab(6, m2), self.ab(5, m2), self.ab(4, m2)]);
        self.check_fixes(st, &phi_f, &b3x)?;
        self.engine.add_image("f", &phi_f, "b0")?;
        // e = (A_2B_{2g-3}^-1)(A_1B_{2g-3}^-1)(A_4^-1B_{2g-3})(B_1B_{2g-3}^-1)(a_5)
        let a4_inv_b = Self::inv(&self.ab(4, m2));
        let phi_e = MCWord::product(&[self.ab(2, m2), self.ab(1, m2), a4_inv_b, self.bb(1, m2)]);
        self.check_fixes(st, &phi_e, &b3x)?;
        self.engine.add_image("e", &phi_e, "a5")?;

        let boundary = ["a1", "a3", "a5", "f"];
        let interior = ["b0", "b2", "e"];
        for (i, x) in boundary.iter().enumerate() {
            for y in &boundary[i + 1..] {
                self.check_disjoint(st, x, y, true)?;
            }
            for y in &interior {
                self.check_disjoint(st, x, y, true)?;
            }
        }
        for (i, x) in interior.iter().enumerate() {
            for y in &interior[i + 1..] {
                self.check_bracket(st, x, y, 2)?;
            }
        }
        let mut avoid: Vec<String> = (0..4).map(|j| self.b_name(j)).collect();
        avoid.extend((1..=6).map(|j| self.a_name(j)));
        avoid.extend(["e".to_string(), "f".to_string()]);
        for y in avoid {
            self.check_disjoint(st, &b3x, &y, true)?;
        }

        let lhs = self.twists(&[("b0", 1), ("b2", 1), ("e", 1)]);
        let rhs = self.twists(&[("a1", 1), ("a3", 1), ("a5", 1), ("f", 1)]);
        let v = self.engine.equal(&lhs, &rhs)?;
        if !v.identity {
            self.engine.set_mirrored(true);
            let mirror = self.engine.equal(&lhs, &rhs)?;
            self.engine.set_mirrored(false);
            if mirror.identity {
                self.handedness_flipped = true;
                return Err(self.fail(st, "lantern B_0 B_2 E = A_1 A_3 A_5 F", "handedness convention flipped".into()));
            }
            return Err(self.fail(st, "lantern B_0 B_2 E = A_1 A_3 A_5 F", verdict_text(&v)));
        }
        self.log(st, "lantern B_0 B_2 E = A_1 A_3 A_5 F", true, &verdict_text(&v));

        let b_f = self.bb(m2, 0).conjugate_by_g(&phi_f);
        self.prove(st, "B_{2g-3} F^-1", &b_f, &self.twists(&[(&b3x, 1), ("f", -1)]))?;
        let b_a5 = Self::inv(&self.ab(5, m2));
        let b_e = b_a5.conjugate_by_g(&phi_e);
        self.prove(st, "B_{2g-3} E^-1", &b_e, &self.twists(&[(&b3x, 1), ("e", -1)]))?;
        let e_f = Self::inv(&b_e).then(&b_f);
        self.prove(st, "E F^-1", &e_f, &self.twists(&[("e", 1), ("f", -1)]))?;
        let a1 = MCWord::product(&[Self::inv(&self.ab(3, 0)), Self::inv(&self.ab(5, 2)), e_f]);
        let el = self.prove(st, "A_1", &a1, &MCWord::twist("a1", 1))?;
        self.a1 = Some(a1);
        Ok(el)
    }

    fn certify(&mut self, target: &str, raw: &MCWord, claimed: &MCWord) -> Result<Certificate> {
        let reduced = raw.reduce_in_group(self.n());
        if !reduced.is_restricted() {
            return Err(self.fail("step 4", target, "word leaves the alphabet {r, R, q}".into()));
        }
        let v = self.engine.equal(&reduced, claimed)?;
        if !v.identity {
            return Err(self.fail("step 4", &format!("{target} = {claimed}"), verdict_text(&v)));
        }
        self.log("step 4", &format!("{target} = {claimed}"), true, &verdict_text(&v));
        let mut checks = vec![
            "alphabet {r, R, q}".to_string(),
            format!("character {:+}", reduced.character()),
        ];
        if v.witness == Witness::AllChecksPassed {
            checks.push("homology action = I".into());
            checks.push(format!("fixes the filling family ({} curves)", self.engine.filling_family().len()));
        }
        Ok(Certificate {
            target: target.into(),
            word: reduced.to_string(),
            length: raw.len(),
            reduced_length: reduced.len(),
            verified: true,
            checks,
        })
    }

    /// Step 4: certificates for `A_1..A_{2g}` and `B_0`.
    pub fn step4(&mut self) -> Result<Vec<Certificate>> {
        let a1 = self.a1.clone().ok_or_else(|| Error::Falsified("step 4 needs step 3".into()))?;
        let mut out = Vec::new();
        for i in 1..=2 * self.genus as i64 {
            let raw = a1.conjugate_by_g(&MCWord::rot(i - 1));
            let name = self.a_name(i);
            out.push(self.certify(&format!("A_{i}"), &raw, &MCWord::twist(&name, 1))?);
        }
        let b0 = Self::inv(&self.ab(1, 0)).then(&a1);
        out.push(self.certify("B_0", &b0, &MCWord::twist("b0", 1))?);
        Ok(out)
    }

    /// `τ₂ = σ τ` is an orientation-reversing involution with `τ τ₂ = σ^{±1}`.
    pub fn three_reflections_check(&mut self) -> Result<Vec<(String, bool)>> {
        let tau2: MCWord = "rt".parse()?;
        let sq = self.engine.is_identity(&tau2.then(&tau2))?;
        let chi = tau2.character() == -1;
        let prod: MCWord = "trt".parse()?;
        let plus = self.engine.equal(&prod, &MCWord::rot(1))?;
        let minus = self.engine.equal(&prod, &MCWord::rot(-1))?;
        let out = vec![
            ("τ₂² = 1".to_string(), sq.identity),
            ("character(τ₂) = -1".to_string(), chi),
            ("τ τ₂ = σ or σ^-1".to_string(), plus.identity || minus.identity),
        ];
        let ok = out.iter().all(|(_, b)| *b);
        let detail = out.iter().map(|(c, b)| format!("{c}: {b}")).collect::<Vec<_>>().join(", ");
        self.log("reflections", "τ₂ = στ checks", ok, &detail);
        Ok(out)
    }
}

trait ConjugateInG {
    fn conjugate_by_g(&self, c: &MCWord) -> MCWord;
}

impl ConjugateInG for MCWord {
    /// `c · self · c⁻¹` with `c` a word in `⟨σ, q⟩`, inverted as such.
    fn conjugate_by_g(&self, c: &MCWord) -> MCWord {
        c.then(self).then(&c.inverse_with_involution())
    }
}

/// Result of a full replay.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub genus: usize,
    pub step2_target: String,
    /// Whether the prescribed transport reached its chain curve directly.
    pub step2_literal: bool,
    pub certificates: Vec<Certificate>,
    pub reflections: Vec<(String, bool)>,
    pub transcript: Vec<Check>,
}

/// Which parts of the replay to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Steps {
    pub reflections: bool,
}

impl Default for Steps {
    fn default() -> Self {
        Steps { reflections: true }
    }
}

/// Seeds, torsion, Steps 1 to 4 and the optional reflection check.
pub fn replay(genus: usize, seeds: &SeedData, steps: Steps) -> Result<ReplayReport> {
    let mut r = load_and_validate_seeds(genus, seeds)?;
    r.verify_torsion_orders()?;
    r.step1()?;
    let step2_target = r.step2()?;
    r.step3()?;
    let certificates = r.step4()?;
    let reflections = if steps.reflections { r.three_reflections_check()? } else { Vec::new() };
    Ok(ReplayReport {
        genus,
        step2_target,
        step2_literal: r.literal_transport == Some(true),
        certificates,
        reflections,
        transcript: r.transcript,
    })
}
