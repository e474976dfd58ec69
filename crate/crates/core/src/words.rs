//! Words in the extended mapping class group and the identity test.
//!
//! Words compose functionally: the rightmost letter acts first. The identity
//! test checks the orientation character, the action on first homology and
//! the action on the filling family `a_0..a_{2g}, b_0..b_{4g+1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::NormalCurve;
use crate::error::{Error, Result};
use crate::homology::{HomologyAction, HomologyBasis, Matrix};
use crate::marked::{FlipMap, MarkedCurve, MarkedSurface};
use crate::surface::{PolygonSurface, SimplicialMap};
use crate::twist::TwistAxis;

pub const DEFAULT_MAX_WEIGHT_BITS: u64 = 1_000_000;

/// Name of the curve whose twist enters the letter `q`.
pub const B0: &str = "b0";

/// Sign `s` in `[T_c x] = [x] + s⟨x, c⟩[c]` for a right-handed twist, with
/// `⟨x, y⟩ = xᵀJy` in the chain basis.
pub const TRANSVECTION_SIGN: i64 = -1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `r` (`+1`) or `R` (`-1`).
    Rot(i8),
    /// `t`.
    Refl,
    /// `q`, the reflection applied after the twist along `b_0`.
    ReflB,
    /// `T[name]` (`+1`) or `T'[name]` (`-1`).
    Twist(String, i8),
}

impl Letter {
    pub fn character(&self) -> i8 {
        match self {
            Letter::Refl | Letter::ReflB => -1,
            _ => 1,
        }
    }

    /// The exact inverse as a word; `q⁻¹` is `T'[b0] t`.
    pub fn inverse(&self) -> Vec<Letter> {
        match self {
            Letter::Rot(s) => vec![Letter::Rot(-s)],
            Letter::Refl => vec![Letter::Refl],
            Letter::ReflB => vec![Letter::Twist(B0.into(), -1), Letter::Refl],
            Letter::Twist(c, s) => vec![Letter::Twist(c.clone(), -s)],
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        match (self, other) {
            (Letter::Rot(a), Letter::Rot(b)) => a + b == 0,
            (Letter::Refl, Letter::Refl) => true,
            (Letter::Twist(c, a), Letter::Twist(d, b)) => c == d && a + b == 0,
            _ => false,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Rot(1) => f.write_str("r"),
            Letter::Rot(_) => f.write_str("R"),
            Letter::Refl => f.write_str("t"),
            Letter::ReflB => f.write_str("q"),
            Letter::Twist(c, 1) => write!(f, "T[{c}]"),
            Letter::Twist(c, _) => write!(f, "T'[{c}]"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MCWord {
    letters: Vec<Letter>,
}

impl MCWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        MCWord { letters }
    }

    pub fn empty() -> Self {
        MCWord::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rot(k: i64) -> Self {
        let l = if k >= 0 { Letter::Rot(1) } else { Letter::Rot(-1) };
        MCWord {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }

    pub fn twist(name: &str, sign: i8) -> Self {
        MCWord {
            letters: vec![Letter::Twist(name.into(), sign)],
        }
    }

    pub fn refl_b() -> Self {
        MCWord {
            letters: vec![Letter::ReflB],
        }
    }

    /// `self · other`: `other` acts first.
    pub fn then(&self, other: &MCWord) -> MCWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        MCWord { letters }
    }

    pub fn product<'a>(words: impl IntoIterator<Item = &'a MCWord>) -> MCWord {
        words.into_iter().fold(MCWord::empty(), |acc, w| acc.then(w))
    }

    /// `c · self · c⁻¹`.
    pub fn conjugate_by(&self, c: &MCWord) -> MCWord {
        c.then(self).then(&c.inverse())
    }

    pub fn inverse(&self) -> MCWord {
        MCWord {
            letters: self.letters.iter().rev().flat_map(|l| l.inverse()).collect(),
        }
    }

    /// Inverse in which `q` is its own inverse; valid once `q² = 1` has been
    /// verified. Keeps words over `{r, R, q}` in that alphabet.
    pub fn inverse_with_involution(&self) -> MCWord {
        MCWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::ReflB => Letter::ReflB,
                    other => {
                        let mut inv = other.inverse();
                        debug_assert_eq!(inv.len(), 1);
                        inv.pop().unwrap()
                    }
                })
                .collect(),
        }
    }

    pub fn character(&self) -> i8 {
        self.letters.iter().map(Letter::character).product()
    }

    /// Cancels adjacent mutually inverse letters.
    pub fn free_reduce(&self) -> MCWord {
        self.reduce_by(|a, b| a.cancels(b))
    }

    /// Free reduction that also cancels `qq`; valid once `q² = 1` has been
    /// verified.
    pub fn reduce_with_involution(&self) -> MCWord {
        self.reduce_by(|a, b| a.cancels(b) || (*a == Letter::ReflB && *b == Letter::ReflB))
    }

    fn reduce_by(&self, cancels: impl Fn(&Letter, &Letter) -> bool) -> MCWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if out.last().is_some_and(|p| cancels(p, l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        MCWord { letters: out }
    }

    /// Merges every run of rotations into the shortest equivalent run, given
    /// that the rotation has order `period`.
    pub fn normalize_rotations(&self, period: i64) -> MCWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        let mut run = 0i64;
        let flush = |run: &mut i64, out: &mut Vec<Letter>| {
            let k = run.rem_euclid(period);
            let k = if 2 * k > period { k - period } else { k };
            out.extend(MCWord::rot(k).letters);
            *run = 0;
        };
        for l in &self.letters {
            match l {
                Letter::Rot(s) => run += *s as i64,
                other => {
                    flush(&mut run, &mut out);
                    out.push(other.clone());
                }
            }
        }
        flush(&mut run, &mut out);
        MCWord { letters: out }
    }

    /// Shortest form reachable by cancelling `qq`, inverse pairs and full
    /// turns of the rotation; valid once `q² = 1` and `σ^period = 1` are
    /// verified.
    pub fn reduce_in_group(&self, period: i64) -> MCWord {
        let mut w = self.clone();
        loop {
            let next = w.normalize_rotations(period).reduce_with_involution();
            if next == w {
                return w;
            }
            w = next;
        }
    }

    /// True if the word only uses `r`, `R` and `q`.
    pub fn is_restricted(&self) -> bool {
        self.letters
            .iter()
            .all(|l| matches!(l, Letter::Rot(_) | Letter::ReflB))
    }

    /// Names of all twist axes used, `b0` included when `q` occurs.
    pub fn axes(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .letters
            .iter()
            .filter_map(|l| match l {
                Letter::Twist(c, _) => Some(c.clone()),
                Letter::ReflB => Some(B0.to_string()),
                _ => None,
            })
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

impl fmt::Display for MCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for MCWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut letters = Vec::new();
        let mut i = 0;
        // positions are reported as 1-based character columns
        let err = |byte: usize, message: &str| Error::Parse {
            position: text[..byte].chars().count() + 1,
            message: message.into(),
        };
        while i < chars.len() {
            let (pos, c) = chars[i];
            i += 1;
            match c {
                'r' => letters.push(Letter::Rot(1)),
                'R' => letters.push(Letter::Rot(-1)),
                't' => letters.push(Letter::Refl),
                'q' => letters.push(Letter::ReflB),
                'T' => {
                    let mut sign = 1;
                    if i < chars.len() && chars[i].1 == '\'' {
                        sign = -1;
                        i += 1;
                    }
                    if i >= chars.len() || chars[i].1 != '[' {
                        return Err(err(pos, "expected `[` after `T`"));
                    }
                    i += 1;
                    let mut name = String::new();
                    while i < chars.len() && chars[i].1 != ']' {
                        name.push(chars[i].1);
                        i += 1;
                    }
                    if i >= chars.len() {
                        return Err(err(pos, "unterminated curve name"));
                    }
                    i += 1;
                    if name.is_empty() {
                        return Err(err(pos, "empty curve name"));
                    }
                    letters.push(Letter::Twist(name, sign));
                }
                other => return Err(err(pos, &format!("unexpected character `{other}`"))),
            }
        }
        Ok(MCWord { letters })
    }
}

/// Why a word is or is not the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    CharacterMinusOne,
    HomologyNotIdentity,
    MovedCurve { curve: String, weight_before: String, weight_after: String },
    AllChecksPassed,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::CharacterMinusOne => f.write_str("character -1"),
            Witness::HomologyNotIdentity => f.write_str("homology matrix != I"),
            Witness::MovedCurve {
                curve,
                weight_before,
                weight_after,
            } => write!(f, "{curve} moved (total weight {weight_before} -> {weight_after})"),
            Witness::AllChecksPassed => f.write_str("all checks passed"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub identity: bool,
    pub witness: Witness,
}

impl IdentityVerdict {
    fn not(witness: Witness) -> Self {
        IdentityVerdict {
            identity: false,
            witness,
        }
    }
}

impl fmt::Display for IdentityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.identity { "identity" } else { "not identity" };
        write!(f, "{v}: {}", self.witness)
    }
}

#[derive(Clone, Debug)]
struct NamedCurve {
    curve: MarkedCurve,
    /// The polygon-model curve it was converted from, if any.
    polygon: Option<NormalCurve>,
    axis: TwistAxis,
    class: Vec<BigInt>,
}

/// Evaluates words on curves and homology for one surface and seed pair.
///
/// Curves are held in normal coordinates on [`MarkedSurface`], where they
/// are canonical up to isotopy in the surface with the centre marked; the
/// polygon model is used to build the seeds and the homology basis.
#[derive(Clone, Debug)]
pub struct Engine {
    surface: PolygonSurface,
    marked: MarkedSurface,
    rot_powers: Vec<FlipMap>,
    refl: FlipMap,
    rot_matrices: Vec<Matrix>,
    refl_matrix: Matrix,
    basis: HomologyBasis,
    curves: BTreeMap<String, NamedCurve>,
    filling: Vec<String>,
    max_bits: u64,
    /// Twist handedness: `1` normally, `-1` when every twist is mirrored.
    hand: i64,
}

fn max_bits_from_env() -> u64 {
    std::env::var("MCG_MAX_WEIGHT_BITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WEIGHT_BITS)
}

impl Engine {
    /// Builds the registry `a_i = σ^i(a_0)`, `b_j = σ^j(b_0)` and the
    /// homology basis `a_1..a_{2g}`. Table validation is the caller's job.
    pub fn new(surface: PolygonSurface, a0: &NormalCurve, b0: &NormalCurve) -> Result<Self> {
        let g = surface.genus();
        let n = surface.sides();
        let marked = MarkedSurface::new(g)?;
        let rot = surface.rotation_map();
        let mut rot_maps = vec![SimplicialMap::identity(surface.num_edges())];
        for _ in 1..n {
            rot_maps.push(rot.compose(rot_maps.last().unwrap()));
        }
        let refl_map = surface.reflection_map();
        let a: Vec<NormalCurve> = (0..2 * g + 1)
            .map(|i| NormalCurve::new(&surface, rot_maps[i].apply_weights(a0.weights())))
            .collect::<Result<_>>()?;
        let b: Vec<NormalCurve> = (0..n)
            .map(|j| NormalCurve::new(&surface, rot_maps[j].apply_weights(b0.weights())))
            .collect::<Result<_>>()?;
        let basis = HomologyBasis::new(&surface, &a[1..])?;
        let rot_matrix = basis.simplicial_matrix(&rot);
        let mut rot_matrices = vec![Matrix::identity(2 * g)];
        for _ in 1..n {
            rot_matrices.push(rot_matrix.mul(rot_matrices.last().unwrap()));
        }
        let refl_matrix = basis.simplicial_matrix(&refl_map);
        let rot_powers = rot_maps.iter().map(|m| marked.flip_map(&surface, m)).collect();
        let refl = marked.flip_map(&surface, &refl_map);
        let mut engine = Engine {
            surface,
            marked,
            rot_powers,
            refl,
            rot_matrices,
            refl_matrix,
            basis,
            curves: BTreeMap::new(),
            filling: Vec::new(),
            max_bits: max_bits_from_env(),
            hand: 1,
        };
        let named: Vec<(String, NormalCurve)> = a
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("a{i}"), c))
            .chain(b.into_iter().enumerate().map(|(j, c)| (format!("b{j}"), c)))
            .collect();
        let built: Vec<(String, NamedCurve)> = named
            .into_par_iter()
            .map(|(name, polygon)| Ok((name, engine.named_from_polygon(polygon)?)))
            .collect::<Result<_>>()?;
        for (name, nc) in built {
            engine.filling.push(name.clone());
            engine.curves.insert(name, nc);
        }
        Ok(engine)
    }

    fn named_from_polygon(&self, polygon: NormalCurve) -> Result<NamedCurve> {
        let class = self.basis.class_of(&self.surface, &polygon)?;
        let curve = self.marked.convert(&self.surface, &polygon)?;
        let axis = TwistAxis::on(self.marked.triangulation(), curve.weights())?;
        Ok(NamedCurve {
            curve,
            polygon: Some(polygon),
            axis,
            class,
        })
    }

    pub fn surface(&self) -> &PolygonSurface {
        &self.surface
    }

    pub fn marked(&self) -> &MarkedSurface {
        &self.marked
    }

    pub fn basis(&self) -> &HomologyBasis {
        &self.basis
    }

    pub fn max_weight_bits(&self) -> u64 {
        self.max_bits
    }

    pub fn set_max_weight_bits(&mut self, bits: u64) {
        self.max_bits = bits;
    }

    /// Swaps the meaning of right- and left-handed twists globally.
    pub fn set_mirrored(&mut self, mirrored: bool) {
        self.hand = if mirrored { -1 } else { 1 };
    }

    pub fn is_mirrored(&self) -> bool {
        self.hand < 0
    }

    /// Names of the filling family, in registry order.
    pub fn filling_family(&self) -> &[String] {
        &self.filling
    }

    fn named(&self, name: &str) -> Result<&NamedCurve> {
        self.curves.get(name).ok_or_else(|| Error::UnknownCurve(name.into()))
    }

    pub fn curve(&self, name: &str) -> Result<&MarkedCurve> {
        Ok(&self.named(name)?.curve)
    }

    /// The polygon-model curve a registry entry was built from; derived
    /// curves have none.
    pub fn polygon_curve(&self, name: &str) -> Result<Option<&NormalCurve>> {
        Ok(self.named(name)?.polygon.as_ref())
    }

    pub fn class(&self, name: &str) -> Result<&[BigInt]> {
        Ok(&self.named(name)?.class)
    }

    pub fn axis(&self, name: &str) -> Result<&TwistAxis> {
        Ok(&self.named(name)?.axis)
    }

    pub fn has_curve(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    /// Registers a polygon-model curve small enough to orient directly.
    pub fn add_curve(&mut self, name: &str, curve: NormalCurve) -> Result<()> {
        let nc = self.named_from_polygon(curve)?;
        self.curves.insert(name.into(), nc);
        Ok(())
    }

    /// Registers the image of a named curve under a word; its homology class
    /// is pushed forward by the word's action, so no realization is needed.
    pub fn add_image(&mut self, name: &str, word: &MCWord, source: &str) -> Result<MarkedCurve> {
        let src = self.curve(source)?.clone();
        let class = self.homology_action(word)?.matrix.apply(self.class(source)?);
        let image = self.evaluate(word, &src)?;
        let axis = TwistAxis::on(self.marked.triangulation(), image.weights())?;
        self.curves.insert(
            name.into(),
            NamedCurve {
                curve: image.clone(),
                polygon: None,
                axis,
                class,
            },
        );
        Ok(image)
    }

    /// Converts a polygon-model curve to the coordinates the engine uses.
    pub fn to_marked(&self, c: &NormalCurve) -> Result<MarkedCurve> {
        self.marked.convert(&self.surface, c)
    }

    /// Exact geometric intersection number of a registry curve with `c`.
    pub fn intersection(&self, axis: &str, c: &MarkedCurve) -> Result<BigUint> {
        Ok(self.axis(axis)?.intersection(c.weights()))
    }

    fn check_cap(&self, w: &[BigUint]) -> Result<()> {
        let bits = w.iter().map(|x| x.bits()).max().unwrap_or(0);
        if bits > self.max_bits {
            return Err(Error::WeightCap {
                bits,
                cap: self.max_bits,
            });
        }
        Ok(())
    }

    fn rot_power(&self, k: i64) -> &FlipMap {
        &self.rot_powers[k.rem_euclid(self.rot_powers.len() as i64) as usize]
    }

    /// Applies the word to a weight vector, rightmost letter first. Runs of
    /// rotations and of twists along one axis are applied as powers.
    pub fn evaluate_weights(&self, word: &MCWord, w: &[BigUint]) -> Result<Vec<BigUint>> {
        let mut w = w.to_vec();
        let letters = word.letters();
        let mut i = letters.len();
        while i > 0 {
            let l = &letters[i - 1];
            let mut j = i - 1;
            match l {
                Letter::Rot(_) => {
                    while j > 0 && matches!(letters[j - 1], Letter::Rot(_)) {
                        j -= 1;
                    }
                    let k: i64 = letters[j..i]
                        .iter()
                        .map(|l| if let Letter::Rot(s) = l { *s as i64 } else { 0 })
                        .sum();
                    w = self.rot_power(k).apply(&w);
                }
                Letter::Refl => w = self.refl.apply(&w),
                Letter::ReflB => {
                    w = self.axis(B0)?.apply(&w, self.hand);
                    w = self.refl.apply(&w);
                }
                Letter::Twist(c, _) => {
                    while j > 0 && matches!(&letters[j - 1], Letter::Twist(d, _) if d == c) {
                        j -= 1;
                    }
                    let k: i64 = letters[j..i]
                        .iter()
                        .map(|l| if let Letter::Twist(_, s) = l { *s as i64 } else { 0 })
                        .sum();
                    w = self.axis(c)?.apply(&w, k * self.hand);
                }
            }
            self.check_cap(&w)?;
            i = j;
        }
        Ok(w)
    }

    pub fn evaluate(&self, word: &MCWord, c: &MarkedCurve) -> Result<MarkedCurve> {
        if c.weights().len() != self.marked.num_edges() {
            return Err(Error::SurfaceMismatch {
                expected: self.marked.num_edges(),
                got: c.weights().len(),
            });
        }
        Ok(MarkedCurve::trusted(self.evaluate_weights(word, c.weights())?))
    }

    /// Homology class of a registry curve, or of any small curve.
    pub fn homology_class(&self, c: &NormalCurve) -> Result<Vec<BigInt>> {
        self.basis.class_of(&self.surface, c)
    }

    fn twist_matrix(&self, m: &mut Matrix, name: &str, s: i64) -> Result<()> {
        let v = self.class(name)?;
        let jv = self.basis.pair_with(v);
        // ⟨x, v⟩ = x·(Jv); x ↦ x + s⟨x, v⟩v has matrix I + s·v·(Jv)ᵀ
        m.left_rank_one(TRANSVECTION_SIGN * s * self.hand, v, &jv);
        Ok(())
    }

    pub fn homology_action(&self, word: &MCWord) -> Result<HomologyAction> {
        let mut m = Matrix::identity(self.basis.rank());
        for l in word.letters().iter().rev() {
            match l {
                Letter::Rot(s) => m = self.rot_matrices[if *s > 0 { 1 } else { self.rot_matrices.len() - 1 }].mul(&m),
                Letter::Refl => m = self.refl_matrix.mul(&m),
                Letter::ReflB => {
                    self.twist_matrix(&mut m, B0, 1)?;
                    m = self.refl_matrix.mul(&m);
                }
                Letter::Twist(c, s) => self.twist_matrix(&mut m, c, *s as i64)?,
            }
        }
        Ok(HomologyAction {
            matrix: m,
            character: word.character(),
        })
    }

    /// Decides whether the word acts trivially: character, homology, then the
    /// filling family (evaluated in parallel; the witness is the first moved
    /// curve in registry order).
    pub fn is_identity(&self, word: &MCWord) -> Result<IdentityVerdict> {
        if word.character() != 1 {
            return Ok(IdentityVerdict::not(Witness::CharacterMinusOne));
        }
        for name in word.axes() {
            self.axis(&name)?;
        }
        if !self.homology_action(word)?.matrix.is_identity() {
            return Ok(IdentityVerdict::not(Witness::HomologyNotIdentity));
        }
        let moved = self
            .filling
            .par_iter()
            .map(|name| {
                let c = &self.curves[name].curve;
                let image = self.evaluate_weights(word, c.weights())?;
                Ok((image != c.weights()).then(|| Witness::MovedCurve {
                    curve: name.clone(),
                    weight_before: c.total_weight().to_string(),
                    weight_after: crate::curves::total_weight(&image).to_string(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(match moved.into_iter().flatten().next() {
            Some(w) => IdentityVerdict::not(w),
            None => IdentityVerdict {
                identity: true,
                witness: Witness::AllChecksPassed,
            },
        })
    }

    /// `is_identity(w1 · w2⁻¹)` after free reduction.
    pub fn equal(&self, w1: &MCWord, w2: &MCWord) -> Result<IdentityVerdict> {
        self.is_identity(&w1.then(&w2.inverse()).free_reduce())
    }
}
