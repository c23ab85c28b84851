//! Quadratic words in variables and their canonical forms.
//!
//! A word is quadratic when every variable occurring in it occurs exactly
//! twice. Under automorphisms of the free group on the variables every such
//! word is equivalent to exactly one of
//!
//! * `[x1,x2]···[x(2g-1),x(2g)]` (orientable, genus `g`),
//! * `x1²···xg²` (non-orientable, genus `g`),
//! * the empty word.
//!
//! [`canonicalize`] finds the automorphism as an explicit, replayable
//! sequence of [`QMove`]s. [`polygon_type`] computes the closed surface
//! obtained by gluing the edges of a single polygon labelled by the word.
//! The two notions are computed independently; for cyclically reduced
//! quadratic words they always describe the same surface, which the test
//! suite checks exhaustively at small sizes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Group;
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotQuadratic {
    #[error("variable {variable} occurs {count} times")]
    WrongOccurrences { variable: u32, count: usize },
    #[error("variable {variable} exceeds the declared {n_variables} variables")]
    OutOfRange { variable: u32, n_variables: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("expected {expected} solution components, got {got}")]
    Arity { expected: String, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticWord {
    word: Word,
    conjugator: Word,
    n_variables: u32,
}

impl QuadraticWord {
    /// The cyclically reduced word.
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// `c` with `input = c · word · c⁻¹`.
    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }

    pub fn n_variables(&self) -> u32 {
        self.n_variables
    }

    /// Every occurring variable appears once with each sign.
    pub fn is_orientable_type(&self) -> bool {
        orientable_type(&self.word)
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.word.letters().iter().map(|l| l.generator()).collect()
    }
}

impl fmt::Display for QuadraticWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word.to_text(Alphabet::Variables))
    }
}

fn orientable_type(w: &Word) -> bool {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for l in w.letters() {
        if l.is_inverse() {
            neg.insert(l.generator());
        } else {
            pos.insert(l.generator());
        }
    }
    pos == neg
}

pub fn classify_quadratic(w: &Word, n_variables: u32) -> Result<QuadraticWord, NotQuadratic> {
    if let Some(l) = w.letters().iter().find(|l| l.generator() > n_variables) {
        return Err(NotQuadratic::OutOfRange {
            variable: l.generator(),
            n_variables,
        });
    }
    let (core, conjugator) = w.cyclic_core();
    for v in 1..=n_variables {
        let count = core.occurrences(v);
        if count != 0 && count != 2 {
            return Err(NotQuadratic::WrongOccurrences { variable: v, count });
        }
    }
    Ok(QuadraticWord {
        word: core,
        conjugator,
        n_variables,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonType {
    pub orientable: bool,
    pub genus: u32,
    pub euler_characteristic: i64,
}

/// Surface obtained by identifying paired edges of one polygon labelled by
/// the word. `V` is the number of corner classes, `E = len / 2`, `F = 1`.
pub fn polygon_type(q: &QuadraticWord) -> PolygonType {
    polygon_type_of(&q.word)
}

pub(crate) fn polygon_type_of(w: &Word) -> PolygonType {
    let letters = w.letters();
    let n = letters.len();
    if n == 0 {
        return PolygonType {
            orientable: true,
            genus: 0,
            euler_characteristic: 2,
        };
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // Edge at position k runs from corner k to corner k+1, or backwards for inverses.
    let edge = |k: usize| {
        let (s, t) = (k, (k + 1) % n);
        if letters[k].is_inverse() {
            (t, s)
        } else {
            (s, t)
        }
    };
    let mut first: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for k in 0..n {
        let g = letters[k].generator();
        if let Some(&j) = first.get(&g) {
            let (t1, h1) = edge(j);
            let (t2, h2) = edge(k);
            let (a, b) = (find(&mut parent, t1), find(&mut parent, t2));
            parent[a] = b;
            let (a, b) = (find(&mut parent, h1), find(&mut parent, h2));
            parent[a] = b;
        } else {
            first.insert(g, k);
        }
    }
    let v = (0..n).filter(|&x| find(&mut parent, x) == x).count() as i64;
    let chi = v - (n as i64) / 2 + 1;
    let orientable = orientable_type(w);
    let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
    PolygonType {
        orientable,
        genus: genus as u32,
        euler_characteristic: chi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Orientable,
    NonOrientable,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub kind: FormKind,
    pub genus: u32,
}

impl CanonicalForm {
    pub fn trivial() -> Self {
        CanonicalForm {
            kind: FormKind::Trivial,
            genus: 0,
        }
    }

    /// Number of variables in the canonical word.
    pub fn n_variables(&self) -> u32 {
        match self.kind {
            FormKind::Orientable => 2 * self.genus,
            FormKind::NonOrientable => self.genus,
            FormKind::Trivial => 0,
        }
    }

    pub fn word(&self) -> Word {
        let mut letters = Vec::new();
        match self.kind {
            FormKind::Orientable => {
                for i in 0..self.genus {
                    let (x, y) = (Letter::new(2 * i + 1, false), Letter::new(2 * i + 2, false));
                    letters.extend([x, y, x.inverse(), y.inverse()]);
                }
            }
            FormKind::NonOrientable => {
                for i in 0..self.genus {
                    let x = Letter::new(i + 1, false);
                    letters.extend([x, x]);
                }
            }
            FormKind::Trivial => {}
        }
        Word::from_letters(letters)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FormKind::Trivial => write!(f, "trivial"),
            FormKind::Orientable => write!(f, "orientable genus {}", self.genus),
            FormKind::NonOrientable => write!(f, "non-orientable genus {}", self.genus),
        }
    }
}

/// An elementary automorphism of the free group on the variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum QMove {
    /// `x ↦ x⁻¹`
    Invert { var: u32 },
    /// `x ↦ left · x · right`; neither side contains `x`.
    Transvect {
        var: u32,
        #[serde(with = "var_word")]
        left: Word,
        #[serde(with = "var_word")]
        right: Word,
    },
    /// `v ↦ by⁻¹ · v · by` for every `v` in `vars`; `by` lies either
    /// entirely inside or entirely outside the set.
    ConjugateSet {
        vars: Vec<u32>,
        #[serde(with = "var_word")]
        by: Word,
    },
    /// `x_i ↦ images[i-1]`, each image a single signed variable.
    Permute {
        #[serde(with = "var_words")]
        images: Vec<Word>,
    },
}

mod var_word {
    use super::*;
    pub fn serialize<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_text(Alphabet::Variables))
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse_variables(&text).map_err(serde::de::Error::custom)
    }
}

mod var_words {
    use super::*;
    pub fn serialize<S: serde::Serializer>(ws: &[Word], s: S) -> Result<S::Ok, S::Error> {
        let texts: Vec<String> = ws.iter().map(|w| w.to_text(Alphabet::Variables)).collect();
        texts.serialize(s)
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Word>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| Word::parse_variables(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl QMove {
    /// Images of `x1..xn` under this move.
    pub fn images(&self, n: u32) -> Vec<Word> {
        let mut images: Vec<Word> = (1..=n).map(Word::generator).collect();
        match self {
            QMove::Invert { var } => {
                images[*var as usize - 1] = Word::generator(*var).inverse();
            }
            QMove::Transvect { var, left, right } => {
                images[*var as usize - 1] = left.mul(&Word::generator(*var)).mul(right);
            }
            QMove::ConjugateSet { vars, by } => {
                for &v in vars {
                    images[v as usize - 1] = by.inverse().mul(&Word::generator(v)).mul(by);
                }
            }
            QMove::Permute { images: perm } => {
                for (i, img) in perm.iter().enumerate() {
                    images[i] = img.clone();
                }
            }
        }
        images
    }

    pub fn inverse(&self) -> QMove {
        match self {
            QMove::Invert { var } => QMove::Invert { var: *var },
            QMove::Transvect { var, left, right } => QMove::Transvect {
                var: *var,
                left: left.inverse(),
                right: right.inverse(),
            },
            QMove::ConjugateSet { vars, by } => QMove::ConjugateSet {
                vars: vars.clone(),
                by: by.inverse(),
            },
            QMove::Permute { images } => {
                let mut inv = vec![Word::identity(); images.len()];
                for (i, img) in images.iter().enumerate() {
                    let l = img.letters()[0];
                    inv[l.generator() as usize - 1] = Word::generator(i as u32 + 1).pow(if l.is_inverse() { -1 } else { 1 });
                }
                QMove::Permute { images: inv }
            }
        }
    }
}

/// An automorphism of the free group on `x1..xn` together with the move
/// sequence that builds it.
///
/// `images` is the composite substitution: applying the moves one after the
/// other to a word `q` gives `q.substitute(images)`. `inverse_images`
/// undoes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    n: u32,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
    moves: Vec<QMove>,
}

impl Substitution {
    pub fn identity(n: u32) -> Self {
        let basis: Vec<Word> = (1..=n).map(Word::generator).collect();
        Substitution {
            n,
            images: basis.clone(),
            inverse_images: basis,
            moves: Vec::new(),
        }
    }

    pub fn from_moves(n: u32, moves: &[QMove]) -> Self {
        let mut s = Substitution::identity(n);
        for m in moves {
            s.push(m.clone());
        }
        s
    }

    pub fn push(&mut self, m: QMove) {
        let imgs = m.images(self.n);
        for img in &mut self.images {
            *img = img.substitute(&imgs);
        }
        let inv = m.inverse().images(self.n);
        self.inverse_images = inv.iter().map(|w| w.substitute(&self.inverse_images)).collect();
        self.moves.push(m);
    }

    pub fn n_variables(&self) -> u32 {
        self.n
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn moves(&self) -> &[QMove] {
        &self.moves
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::generator(i as u32 + 1))
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// Replay the recorded moves one at a time.
    pub fn replay(&self, w: &Word) -> Word {
        self.moves.iter().fold(w.clone(), |acc, m| acc.substitute(&m.images(self.n)))
    }
}

struct Canonicalizer {
    word: Word,
    /// Letters of `word` already in canonical block form.
    fixed: usize,
    squares: usize,
    sub: Substitution,
}

impl Canonicalizer {
    fn apply(&mut self, m: QMove) {
        let prefix = self.word.prefix(self.fixed);
        self.word = self.word.substitute(&m.images(self.sub.n));
        debug_assert_eq!(self.word.prefix(self.fixed), prefix, "move touched the fixed prefix");
        self.sub.push(m);
    }

    fn tail(&self) -> Vec<Letter> {
        self.word.letters()[self.fixed..].to_vec()
    }

    fn tail_vars(&self) -> BTreeSet<u32> {
        self.tail().iter().map(|l| l.generator()).collect()
    }

    /// Positions (within the tail) of the two occurrences of `v`.
    fn positions(&self, v: u32) -> (usize, usize) {
        let tail = self.tail();
        let mut it = tail.iter().enumerate().filter(|(_, l)| l.generator() == v).map(|(i, _)| i);
        let i = it.next().expect("variable present");
        let j = it.next().expect("variable occurs twice");
        (i, j)
    }

    fn slice(&self, from: usize, to: usize) -> Word {
        Word::from_letters(self.tail()[from..to].iter().copied())
    }

    /// Conjugate every tail variable so the tail starts at position `k`.
    fn rotate_tail(&mut self, k: usize) {
        if k == 0 {
            return;
        }
        let by = self.slice(0, k);
        let vars: Vec<u32> = self.tail_vars().into_iter().collect();
        self.apply(QMove::ConjugateSet { vars, by });
    }

    fn same_sign_variable(&self) -> Option<u32> {
        let tail = self.tail();
        if tail.len() >= 2 && tail[0] == tail[1] {
            return Some(tail[0].generator());
        }
        self.tail_vars().into_iter().find(|&v| {
            let signs: Vec<bool> = tail.iter().filter(|l| l.generator() == v).map(|l| l.is_inverse()).collect();
            signs[0] == signs[1]
        })
    }

    fn extract_square(&mut self, x: u32) {
        let tail = self.tail();
        if tail[0] == tail[1] {
            self.fixed += 2;
            self.squares += 1;
            return;
        }
        let (i, _) = self.positions(x);
        if self.tail()[i].is_inverse() {
            self.apply(QMove::Invert { var: x });
        }
        let (i, j) = self.positions(x);
        let u = self.slice(0, i);
        let v = self.slice(i + 1, j);
        // tail = U x V x Z  and  x ↦ U⁻¹ x U V⁻¹  gives  x x U V⁻¹ Z
        self.apply(QMove::Transvect {
            var: x,
            left: u.inverse(),
            right: u.mul(&v.inverse()),
        });
        debug_assert_eq!(&self.tail()[..2], &[Letter::new(x, false); 2]);
        self.fixed += 2;
        self.squares += 1;
    }

    fn extract_handle(&mut self, x: u32) {
        let tail = self.tail();
        if self.squares == 0
            && tail.len() >= 4
            && tail[0].generator() != tail[1].generator()
            && tail[2] == tail[0].inverse()
            && tail[3] == tail[1].inverse()
        {
            self.fixed += 4;
            return;
        }
        let (i, _) = self.positions(x);
        self.rotate_tail(i);
        if self.tail()[0].is_inverse() {
            self.apply(QMove::Invert { var: x });
        }
        // tail = x V x⁻¹ R
        let (_, j) = self.positions(x);
        let tail = self.tail();
        let inner: BTreeSet<u32> = tail[1..j].iter().map(|l| l.generator()).collect();
        let outer: BTreeSet<u32> = tail[j + 1..].iter().map(|l| l.generator()).collect();
        let Some(&y) = inner.intersection(&outer).next() else {
            // x V x⁻¹ R with V and R sharing nothing: conjugating V by x kills x.
            self.apply(QMove::ConjugateSet {
                vars: inner.into_iter().collect(),
                by: Word::generator(x),
            });
            return;
        };
        let (p, _) = self.positions(y);
        if self.tail()[p].is_inverse() {
            self.apply(QMove::Invert { var: y });
        }
        // x V1 y V2 x⁻¹ R1 y⁻¹ R2, then x ↦ x V1⁻¹ gives x y M x⁻¹ N y⁻¹ K
        let (p, _) = self.positions(y);
        let v1 = self.slice(1, p);
        if !v1.is_empty() {
            self.apply(QMove::Transvect {
                var: x,
                left: Word::identity(),
                right: v1.inverse(),
            });
        }
        // y ↦ y M⁻¹ gives x y x⁻¹ N y⁻¹ K
        let (_, j) = self.positions(x);
        let m = self.slice(2, j);
        if !m.is_empty() {
            self.apply(QMove::Transvect {
                var: y,
                left: Word::identity(),
                right: m.inverse(),
            });
        }
        // rotate to y⁻¹ K x y x⁻¹ N, then x ↦ K⁻¹ x gives y⁻¹ x y x⁻¹ K N
        let (_, q) = self.positions(y);
        let len = self.tail().len();
        let k = self.slice(q + 1, len);
        self.rotate_tail(q);
        if !k.is_empty() {
            self.apply(QMove::Transvect {
                var: x,
                left: k.inverse(),
                right: Word::identity(),
            });
        }
        self.apply(QMove::Invert { var: y });
        debug_assert_eq!(
            &self.tail()[..4],
            &[
                Letter::new(y, false),
                Letter::new(x, false),
                Letter::new(y, true),
                Letter::new(x, true)
            ]
        );
        if self.squares > 0 {
            self.absorb_handle(y, x);
        } else {
            self.fixed += 4;
        }
    }

    /// `s s a b a⁻¹ b⁻¹` with `s` the last square becomes `a a b b s s`.
    fn absorb_handle(&mut self, a: u32, b: u32) {
        let last = self.word.letters()[self.fixed - 1];
        let s = last.generator();
        self.fixed -= 2;
        if last.is_inverse() {
            self.apply(QMove::Invert { var: s });
        }
        let (ga, gb, gs) = (Word::generator(a), Word::generator(b), Word::generator(s));
        self.apply(QMove::Transvect {
            var: s,
            left: Word::identity(),
            right: ga.inverse(),
        });
        self.apply(QMove::ConjugateSet {
            vars: vec![a, b],
            by: gs.clone(),
        });
        self.apply(QMove::Transvect {
            var: b,
            left: gs.inverse(),
            right: Word::identity(),
        });
        self.apply(QMove::Transvect {
            var: a,
            left: gb,
            right: Word::identity(),
        });
        self.apply(QMove::Invert { var: a });
        self.apply(QMove::Invert { var: b });
        debug_assert_eq!(
            &self.tail()[..6],
            &[
                Letter::new(a, false),
                Letter::new(a, false),
                Letter::new(b, false),
                Letter::new(b, false),
                Letter::new(s, false),
                Letter::new(s, false)
            ]
        );
        self.fixed += 6;
        self.squares += 2;
    }

    /// Rename the block variables to `x1, x2, ...` in order.
    fn relabel(&mut self) -> CanonicalForm {
        let n = self.sub.n;
        let letters = self.word.letters().to_vec();
        let mut images = vec![Word::identity(); n as usize];
        let mut used = BTreeSet::new();
        let mut next = 1u32;
        let mut assign = |l: Letter, images: &mut Vec<Word>, used: &mut BTreeSet<u32>| {
            let img = Word::generator(next).pow(if l.is_inverse() { -1 } else { 1 });
            images[l.generator() as usize - 1] = img;
            used.insert(l.generator());
            next += 1;
        };
        let form = if letters.is_empty() {
            CanonicalForm::trivial()
        } else if self.squares > 0 {
            for pair in letters.chunks(2) {
                assign(pair[0], &mut images, &mut used);
            }
            CanonicalForm {
                kind: FormKind::NonOrientable,
                genus: (letters.len() / 2) as u32,
            }
        } else {
            for block in letters.chunks(4) {
                assign(block[0], &mut images, &mut used);
                assign(block[1], &mut images, &mut used);
            }
            CanonicalForm {
                kind: FormKind::Orientable,
                genus: (letters.len() / 4) as u32,
            }
        };
        let mut next_free = form.n_variables() + 1;
        for v in 1..=n {
            if !used.contains(&v) {
                images[v as usize - 1] = Word::generator(next_free);
                next_free += 1;
            }
        }
        let perm = QMove::Permute { images };
        if !Substitution::from_moves(n, std::slice::from_ref(&perm)).is_identity() {
            self.fixed = 0;
            self.apply(perm);
        }
        form
    }
}

/// Canonical form of `q` and an automorphism `φ` with `φ(q) = canonical word`
/// exactly (as reduced words). Variables that vanish are renumbered after
/// the canonical ones.
pub fn canonicalize(q: &QuadraticWord) -> (CanonicalForm, Substitution) {
    let mut c = Canonicalizer {
        word: q.word.clone(),
        fixed: 0,
        squares: 0,
        sub: Substitution::identity(q.n_variables),
    };
    while let Some(x) = c.same_sign_variable() {
        c.extract_square(x);
    }
    while c.fixed < c.word.len() {
        let x = *c.tail_vars().iter().next().expect("nonempty tail");
        c.extract_handle(x);
    }
    let form = c.relabel();
    debug_assert_eq!(c.sub.apply(&q.word), form.word());
    (form, c.sub)
}

/// Turn a solution of the canonical equation into a solution of `q`.
///
/// `canonical_solution` assigns the canonical variables, optionally followed
/// by values for the vanished variables (identity when absent). If
/// `R(s) = z` for the canonical word `R`, the result `t` satisfies `q(t) = z`.
pub fn transport_solution<G: Group>(
    group: &G,
    form: &CanonicalForm,
    sub: &Substitution,
    canonical_solution: &[G::Elem],
) -> Result<Vec<G::Elem>, TransportError> {
    let n = sub.n_variables() as usize;
    let k = form.n_variables() as usize;
    if canonical_solution.len() != k && canonical_solution.len() != n {
        return Err(TransportError::Arity {
            expected: if k == n { format!("{n}") } else { format!("{k} or {n}") },
            got: canonical_solution.len(),
        });
    }
    let mut values = canonical_solution.to_vec();
    values.resize(n, group.identity());
    Ok(sub.images().iter().map(|img| group.eval(img, &values)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FreeGroup;
    use crate::words::enumerate_words;

    fn q(text: &str, n: u32) -> QuadraticWord {
        classify_quadratic(&Word::parse_variables(text).unwrap(), n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let t = q("xyXY", 2);
        assert!(t.is_orientable_type());
        let p = q("xx", 1);
        assert!(!p.is_orientable_type());
        let bad = classify_quadratic(&Word::parse_variables("xyx").unwrap(), 2);
        assert_eq!(bad, Err(NotQuadratic::WrongOccurrences { variable: 2, count: 1 }));
        let conj = q("z xx Z", 3);
        assert_eq!(conj.word(), &Word::parse_variables("xx").unwrap());
        assert_eq!(conj.conjugator(), &Word::parse_variables("z").unwrap());
    }

    #[test]
    fn polygon_examples() {
        assert_eq!(
            polygon_type(&q("xyXY", 2)),
            PolygonType { orientable: true, genus: 1, euler_characteristic: 0 }
        );
        assert_eq!(
            polygon_type(&q("xx", 1)),
            PolygonType { orientable: false, genus: 1, euler_characteristic: 1 }
        );
        // abab is the projective plane: corners {0,2} and {1,3}.
        assert_eq!(
            polygon_type(&q("xyxy", 2)),
            PolygonType { orientable: false, genus: 1, euler_characteristic: 1 }
        );
        assert_eq!(
            polygon_type(&q("xyxY", 2)),
            PolygonType { orientable: false, genus: 2, euler_characteristic: 0 }
        );
        assert_eq!(
            polygon_type(&q("xxyy", 2)),
            PolygonType { orientable: false, genus: 2, euler_characteristic: 0 }
        );
    }

    #[test]
    fn canonicalize_examples() {
        let (f, s) = canonicalize(&q("xyXY", 2));
        assert_eq!(f, CanonicalForm { kind: FormKind::Orientable, genus: 1 });
        assert!(s.is_identity());

        let (f, s) = canonicalize(&q("xx", 1));
        assert_eq!(f, CanonicalForm { kind: FormKind::NonOrientable, genus: 1 });
        assert!(s.is_identity());

        let (f, s) = canonicalize(&q("xyxy", 2));
        assert_eq!(f, CanonicalForm { kind: FormKind::NonOrientable, genus: 1 });
        assert_eq!(s.images()[0], Word::parse_variables("xY").unwrap());
        assert_eq!(s.images()[1], Word::parse_variables("y").unwrap());
        assert_eq!(s.apply(&Word::parse_variables("xyxy").unwrap()), Word::parse_variables("xx").unwrap());
    }

    #[test]
    fn mixed_words_become_squares() {
        let (f, s) = canonicalize(&q("xx yzYZ", 3));
        assert_eq!(f, CanonicalForm { kind: FormKind::NonOrientable, genus: 3 });
        assert_eq!(s.apply(&Word::parse_variables("xxyzYZ").unwrap()), f.word());
        assert_eq!(s.replay(&Word::parse_variables("xxyzYZ").unwrap()), f.word());
    }

    #[test]
    fn inverse_images_invert() {
        let (_, s) = canonicalize(&q("x y Z X u Y z U", 5));
        for i in 1..=5u32 {
            let g = Word::generator(i);
            assert_eq!(g.substitute(s.images()).substitute(s.inverse_images()), g);
            assert_eq!(g.substitute(s.inverse_images()).substitute(s.images()), g);
        }
    }

    #[test]
    fn transport_examples() {
        let f2 = FreeGroup::new(2);
        let w = |t: &str| Word::parse(t).unwrap();

        let qw = q("xyxy", 2);
        let (form, sub) = canonicalize(&qw);
        let sol = transport_solution(&f2, &form, &sub, &[w("ab")]).unwrap();
        assert_eq!(f2.eval(qw.word(), &sol), w("abab"));

        let qw = q("xyXY", 2);
        let (form, sub) = canonicalize(&qw);
        let sol = transport_solution(&f2, &form, &sub, &[w("a"), w("b")]).unwrap();
        assert_eq!(sol, vec![w("a"), w("b")]);

        assert!(matches!(
            transport_solution(&f2, &form, &sub, &[w("a")]),
            Err(TransportError::Arity { .. })
        ));
    }

    #[test]
    fn canonical_and_polygon_agree_exhaustively() {
        for word in enumerate_words(3, 6) {
            let Ok(qw) = classify_quadratic(&word, 3) else { continue };
            let (form, sub) = canonicalize(&qw);
            assert_eq!(sub.apply(qw.word()), form.word(), "{qw}");
            let poly = polygon_type(&qw);
            let expected = match form.kind {
                FormKind::Trivial => PolygonType { orientable: true, genus: 0, euler_characteristic: 2 },
                FormKind::Orientable => PolygonType {
                    orientable: true,
                    genus: form.genus,
                    euler_characteristic: 2 - 2 * form.genus as i64,
                },
                FormKind::NonOrientable => PolygonType {
                    orientable: false,
                    genus: form.genus,
                    euler_characteristic: 2 - form.genus as i64,
                },
            };
            assert_eq!(poly, expected, "{qw}");
            assert_eq!(qw.is_orientable_type(), form.kind != FormKind::NonOrientable);
        }
    }

    #[test]
    fn polygon_invariant_under_rotation_and_inversion() {
        let qw = q("x y Z X u Y z U", 5);
        let base = polygon_type(&qw);
        for k in 0..qw.word().len() {
            let r = classify_quadratic(&qw.word().rotate(k), 5).unwrap();
            assert_eq!(polygon_type(&r), base);
        }
        let inv = classify_quadratic(&qw.word().inverse(), 5).unwrap();
        assert_eq!(polygon_type(&inv), base);
    }

    #[test]
    fn moves_serialize() {
        let (_, s) = canonicalize(&q("xyxy", 2));
        let json = serde_json::to_string(s.moves()).unwrap();
        let back: Vec<QMove> = serde_json::from_str(&json).unwrap();
        assert_eq!(Substitution::from_moves(2, &back), s);
    }
}
