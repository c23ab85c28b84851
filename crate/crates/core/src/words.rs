//! Reduced words in a free group.
//!
//! Generators are numbered from 1. In text, generators `1..=26` are written
//! `a..z` and their inverses `A..Z`; words over *variables* use the
//! alphabet `x y z u v w` (or indexed `x1 x2 ...`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: u32, rank: u32 },
    #[error("the identity has no primitive root")]
    IdentityRoot,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A generator or its inverse, stored as a nonzero signed index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn from_signed(value: i32) -> Option<Self> {
        (value != 0).then_some(Letter(value))
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the fixed alphabet order `a < A < b < B < ...`.
    pub fn alphabet_index(self) -> usize {
        2 * (self.generator() as usize - 1) + usize::from(self.is_inverse())
    }

    pub fn from_alphabet_index(index: usize) -> Self {
        Letter::new(index as u32 / 2 + 1, index % 2 == 1)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet_index().cmp(&other.alphabet_index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordered shortlex: by length, then lexicographically in the alphabet order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free reduction of an arbitrary letter sequence, no range check.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Free reduction with a generator range check against `rank`.
pub fn reduce(raw: &[Letter], rank: u32) -> Result<Word, WordError> {
    if let Some(bad) = raw.iter().find(|l| l.generator() > rank) {
        return Err(WordError::GeneratorOutOfRange {
            index: bad.generator(),
            rank,
        });
    }
    Ok(free_reduce(raw.iter().copied()))
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(index: u32) -> Self {
        Word(vec![Letter::new(index, false)])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        free_reduce(raw)
    }

    /// Build from signed integers (`-2` is `B`); zeros are rejected.
    pub fn from_signed(raw: &[i32]) -> Self {
        free_reduce(raw.iter().map(|&v| Letter::from_signed(v).expect("zero letter")))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index occurring, 0 for the identity.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: u32) -> Result<(), WordError> {
        match self.0.iter().find(|l| l.generator() > rank) {
            Some(l) => Err(WordError::GeneratorOutOfRange {
                index: l.generator(),
                rank,
            }),
            None => Ok(()),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut cancel = 0;
        let (a, b) = (&self.0, &other.0);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == b[cancel].inverse() {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = base.cyclic_reduce_raw();
        let mut letters = Vec::with_capacity(core.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            letters.extend_from_slice(&core);
        }
        conj.mul(&Word(letters)).mul(&conj.inverse())
    }

    /// `t · self · t⁻¹`
    pub fn conjugate_by(&self, t: &Word) -> Word {
        t.mul(self).mul(&t.inverse())
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`
    pub fn commutator(x: &Word, y: &Word) -> Word {
        free_reduce(
            x.0.iter()
                .chain(y.0.iter())
                .copied()
                .chain(x.0.iter().rev().map(|l| l.inverse()))
                .chain(y.0.iter().rev().map(|l| l.inverse())),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    fn cyclic_reduce_raw(&self) -> (Vec<Letter>, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (self.0[k..n - k].to_vec(), Word(self.0[..k].to_vec()))
    }

    /// Split `self = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let (core, conj) = self.cyclic_reduce_raw();
        (CyclicWord::from_reduced(core), conj)
    }

    /// Cyclically reduced core as a plain word, with its conjugator.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let (core, conj) = self.cyclic_reduce_raw();
        (Word(core), conj)
    }

    /// Left-rotation by `k` letters: `self[k..] · self[..k]`. Only a conjugate
    /// when `self` is cyclically reduced.
    pub fn rotate(&self, k: usize) -> Word {
        let k = k % self.len().max(1);
        let mut out = self.0[k..].to_vec();
        out.extend_from_slice(&self.0[..k]);
        Word(out)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// `(root, exponent)` with `self = root^exponent` and `root` not a proper power.
    pub fn primitive_root(&self) -> Result<(Word, u32), WordError> {
        if self.is_identity() {
            return Err(WordError::IdentityRoot);
        }
        let (core, conj) = self.cyclic_reduce_raw();
        let n = core.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (d..n).all(|i| core[i] == core[i - d]))
            .unwrap_or(n);
        let root = Word(core[..period].to_vec()).conjugate_by(&conj);
        Ok((root, (n / period) as u32))
    }

    /// Abelianization: entry `i` is the signed count of generator `i + 1`.
    pub fn exponent_sums(&self, rank: u32) -> Vec<i64> {
        let mut sums = vec![0i64; rank as usize];
        for l in &self.0 {
            if let Some(s) = sums.get_mut(l.generator() as usize - 1) {
                *s += if l.is_inverse() { -1 } else { 1 };
            }
        }
        sums
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.exponent_sums(self.max_generator()).iter().all(|&s| s == 0)
    }

    /// Substitute `images[i - 1]` for generator `i`; generators past the end are kept.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        let push = |l: Letter, out: &mut Vec<Letter>| {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        };
        for &l in &self.0 {
            match images.get(l.generator() as usize - 1) {
                Some(img) if l.is_inverse() => {
                    for &m in img.0.iter().rev() {
                        push(m.inverse(), &mut out);
                    }
                }
                Some(img) => {
                    for &m in &img.0 {
                        push(m, &mut out);
                    }
                }
                None => push(l, &mut out),
            }
        }
        Word(out)
    }

    /// Number of occurrences (either sign) of generator `g`.
    pub fn occurrences(&self, g: u32) -> usize {
        self.0.iter().filter(|l| l.generator() == g).count()
    }

    pub fn to_text(&self, alphabet: Alphabet) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        match alphabet {
            Alphabet::Generators => self.0.iter().map(|&l| generator_name(l)).collect(),
            Alphabet::Variables => {
                let max = self.max_generator();
                if max <= VARIABLE_LETTERS.len() as u32 {
                    self.0
                        .iter()
                        .map(|l| {
                            let c = VARIABLE_LETTERS[l.generator() as usize - 1];
                            if l.is_inverse() {
                                c.to_ascii_uppercase()
                            } else {
                                c
                            }
                        })
                        .collect()
                } else {
                    self.0
                        .iter()
                        .map(|l| format!("{}{}", if l.is_inverse() { 'X' } else { 'x' }, l.generator()))
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            }
        }
    }

    pub fn parse(text: &str) -> Result<Word, WordError> {
        Parser::new(text, Alphabet::Generators).parse_all()
    }

    pub fn parse_variables(text: &str) -> Result<Word, WordError> {
        Parser::new(text, Alphabet::Variables).parse_all()
    }
}

fn generator_name(l: Letter) -> String {
    let g = l.generator();
    if g <= 26 {
        let c = (b'a' + (g - 1) as u8) as char;
        if l.is_inverse() {
            c.to_ascii_uppercase().to_string()
        } else {
            c.to_string()
        }
    } else if l.is_inverse() {
        format!("G{g}")
    } else {
        format!("g{g}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(Alphabet::Generators))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// `a..z`, inverses `A..Z`.
    Generators,
    /// `x y z u v w` or `x1 x2 ...`, inverses uppercase.
    Variables,
}

pub const VARIABLE_LETTERS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: Alphabet,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, alphabet: Alphabet) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            alphabet,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Word, WordError> {
        let w = self.parse_product()?;
        if self.peek().is_some() {
            return self.err("unexpected character");
        }
        Ok(w)
    }

    fn parse_product(&mut self) -> Result<Word, WordError> {
        let mut acc = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let item = self.parse_item()?;
            let item = self.parse_exponent(item)?;
            acc = acc.mul(&item);
        }
        Ok(acc)
    }

    fn parse_item(&mut self) -> Result<Word, WordError> {
        let c = self.peek().expect("caller checked");
        match c {
            b'1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            b'(' => {
                self.pos += 1;
                let inner = self.parse_product()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            b'[' => {
                self.pos += 1;
                let x = self.parse_product()?;
                if self.peek() != Some(b',') {
                    return self.err("expected ','");
                }
                self.pos += 1;
                let y = self.parse_product()?;
                if self.peek() != Some(b']') {
                    return self.err("expected ']'");
                }
                self.pos += 1;
                Ok(Word::commutator(&x, &y))
            }
            c if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let inverse = c.is_ascii_uppercase();
                let lower = c.to_ascii_lowercase();
                let index = match self.alphabet {
                    Alphabet::Generators => u32::from(lower - b'a') + 1,
                    Alphabet::Variables => {
                        let start = self.pos;
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                        if self.pos > start {
                            if lower != b'x' {
                                return self.err("only x may carry an index");
                            }
                            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                            match digits.parse::<u32>() {
                                Ok(n) if n >= 1 => n,
                                _ => return self.err("bad variable index"),
                            }
                        } else {
                            match VARIABLE_LETTERS.iter().position(|&v| v as u8 == lower) {
                                Some(i) => i as u32 + 1,
                                None => return self.err(format!("unknown variable '{}'", c as char)),
                            }
                        }
                    }
                };
                Ok(Word(vec![Letter::new(index, inverse)]))
            }
            _ => self.err(format!("unexpected '{}'", c as char)),
        }
    }

    fn parse_exponent(&mut self, base: Word) -> Result<Word, WordError> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<i64>() {
            Ok(n) => Ok(base.pow(n)),
            Err(_) => self.err("bad exponent"),
        }
    }
}

/// A cyclically reduced word up to rotation.
///
/// Equality and hashing go through the canonical key, the lexicographically
/// least rotation.
#[derive(Clone)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    key: Vec<Letter>,
}

impl CyclicWord {
    pub fn new(w: &Word) -> Self {
        w.cyclic_reduce().0
    }

    fn from_reduced(letters: Vec<Letter>) -> Self {
        let key = least_rotation(&letters);
        CyclicWord { letters, key }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn as_word(&self) -> Word {
        Word(self.letters.clone())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn key(&self) -> &[Letter] {
        &self.key
    }

    /// Key that also identifies a class with its inverse.
    pub fn unoriented_key(&self) -> Vec<Letter> {
        let inv: Vec<Letter> = self.letters.iter().rev().map(|l| l.inverse()).collect();
        let inv_key = least_rotation(&inv);
        std::cmp::min(self.key.clone(), inv_key)
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let w = Word(self.letters.clone());
        (0..self.letters.len().max(1)).map(move |k| if w.is_empty() { w.clone() } else { w.rotate(k) })
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({})", Word(self.letters.clone()))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", Word(self.letters.clone()))
    }
}

fn least_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    (0..n)
        .map(|k| {
            let mut r = letters[k..].to_vec();
            r.extend_from_slice(&letters[..k]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// Ambient free group of a given rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreeGroupSpec {
    rank: u32,
}

impl FreeGroupSpec {
    pub fn new(rank: u32) -> Option<Self> {
        (rank >= 1).then_some(FreeGroupSpec { rank })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let w = Word::parse(text)?;
        w.check_rank(self.rank)?;
        Ok(w)
    }
}

/// Every reduced word of length `<= max_length` over `rank` generators, in
/// length-then-alphabet order.
pub fn enumerate_words(rank: u32, max_length: usize) -> WordEnumerator {
    WordEnumerator {
        alphabet: 2 * rank as usize,
        max_length,
        length: 0,
        digits: Vec::new(),
        started: false,
    }
}

/// Number of reduced words of length exactly `length`.
pub fn count_words(rank: u32, length: usize) -> u64 {
    if length == 0 {
        return 1;
    }
    let r = u64::from(rank);
    2 * r * (2 * r - 1).pow(length as u32 - 1)
}

pub struct WordEnumerator {
    alphabet: usize,
    max_length: usize,
    length: usize,
    digits: Vec<usize>,
    started: bool,
}

impl WordEnumerator {
    fn valid_after(&self, left: Option<usize>, d: usize) -> bool {
        match left {
            Some(l) => d != (l ^ 1),
            None => true,
        }
    }

    fn smallest_after(&self, left: Option<usize>) -> usize {
        if self.valid_after(left, 0) {
            0
        } else {
            1
        }
    }

    fn fill_from(&mut self, pos: usize) {
        for i in pos..self.length {
            let left = if i == 0 { None } else { Some(self.digits[i - 1]) };
            self.digits[i] = self.smallest_after(left);
        }
    }

    /// Advance to the next reduced word of the current length.
    fn increment(&mut self) -> bool {
        let mut pos = self.length;
        while pos > 0 {
            pos -= 1;
            let left = if pos == 0 { None } else { Some(self.digits[pos - 1]) };
            let mut d = self.digits[pos] + 1;
            while d < self.alphabet && !self.valid_after(left, d) {
                d += 1;
            }
            if d < self.alphabet {
                self.digits[pos] = d;
                self.fill_from(pos + 1);
                return true;
            }
        }
        false
    }

    fn current(&self) -> Word {
        Word(self.digits.iter().map(|&d| Letter::from_alphabet_index(d)).collect())
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.started {
            self.started = true;
            return Some(Word::identity());
        }
        if self.alphabet == 0 {
            return None;
        }
        if self.length > 0 && self.increment() {
            return Some(self.current());
        }
        if self.length >= self.max_length {
            return None;
        }
        self.length += 1;
        self.digits = vec![0; self.length];
        self.fill_from(0);
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a = Letter::new(1, false);
        let b = Letter::new(2, false);
        let c = Letter::new(3, false);
        assert_eq!(reduce(&[a, a.inverse()], 3).unwrap(), Word::identity());
        assert_eq!(reduce(&[a, b, b.inverse(), a], 3).unwrap(), w("aa"));
        assert_eq!(
            reduce(&[b, a.inverse(), a, b.inverse(), c], 3).unwrap(),
            w("c")
        );
        assert!(matches!(
            reduce(&[c], 2),
            Err(WordError::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
    }

    #[test]
    fn parse_syntax() {
        assert_eq!(w("abAB"), w("a b a^-1 b^-1"));
        assert_eq!(w("1"), Word::identity());
        assert_eq!(w(""), Word::identity());
        assert_eq!(w("[a,b]"), w("abAB"));
        assert_eq!(w("(ab)^2"), w("abab"));
        assert_eq!(w("a^3 A"), w("aa"));
        assert_eq!(Word::parse_variables("x1 x2 X1 X2").unwrap(), Word::parse_variables("xyXY").unwrap());
        assert!(Word::parse("a?").is_err());
        assert!(Word::parse("(ab").is_err());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (c, conj) = w("abA").cyclic_reduce();
        assert_eq!(c.as_word(), w("b"));
        assert_eq!(conj, w("a"));

        let (c, conj) = w("abAB").cyclic_reduce();
        assert_eq!(c.as_word(), w("abAB"));
        assert!(conj.is_identity());

        let (c2, conj2) = w("b abAB B").cyclic_reduce();
        assert_eq!(conj2, w("b"));
        assert_eq!(c2, c);
        assert_eq!(c2.as_word().conjugate_by(&conj2), w("babABB"));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(w("aaaaaa").primitive_root().unwrap(), (w("a"), 6));
        assert_eq!(w("abab").primitive_root().unwrap(), (w("ab"), 2));
        assert_eq!(w("abAB").primitive_root().unwrap(), (w("abAB"), 1));
        assert_eq!(w("b abab B").primitive_root().unwrap(), (w("bab B"), 2));
        assert_eq!(Word::identity().primitive_root(), Err(WordError::IdentityRoot));
    }

    #[test]
    fn commutator_has_no_short_root() {
        let target = w("abAB");
        for u in enumerate_words(2, 2).skip(1) {
            for k in 2..=4 {
                assert_ne!(u.pow(k), target, "{u}^{k}");
            }
        }
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w("abAB").exponent_sums(2), vec![0, 0]);
        assert_eq!(w("a").exponent_sums(2), vec![1, 0]);
        assert_eq!(w("abaBAA").exponent_sums(2), vec![0, 0]);
    }

    #[test]
    fn enumeration_counts_and_order() {
        let all: Vec<Word> = enumerate_words(2, 0).collect();
        assert_eq!(all, vec![Word::identity()]);
        let one: Vec<String> = enumerate_words(2, 1).map(|w| w.to_string()).collect();
        assert_eq!(one, ["1", "a", "A", "b", "B"]);
        assert_eq!(enumerate_words(2, 2).count(), 17);
        for rank in 1..=3 {
            for len in 0..=5 {
                let n = enumerate_words(rank, len).filter(|w| w.len() == len).count() as u64;
                assert_eq!(n, count_words(rank, len));
            }
        }
        let words: Vec<Word> = enumerate_words(2, 4).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|w| free_reduce(w.letters().iter().copied()) == *w));
    }

    #[test]
    fn group_axioms_exhaustive() {
        let words: Vec<Word> = enumerate_words(2, 4).collect();
        for x in &words {
            assert!(x.mul(&x.inverse()).is_identity());
            assert_eq!(&x.mul(&Word::identity()), x);
            assert_eq!(&Word::identity().mul(x), x);
        }
        let short: Vec<Word> = enumerate_words(2, 3).collect();
        for x in &short {
            for y in &short {
                for z in &short {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }

    #[test]
    fn variable_text_round_trip() {
        let q = Word::parse_variables("xyXY zz").unwrap();
        assert_eq!(q.to_text(Alphabet::Variables), "xyXYzz");
        let big = Word::parse_variables("x7 X8").unwrap();
        assert_eq!(big.to_text(Alphabet::Variables), "x7 X8");
        assert_eq!(Word::parse_variables(&big.to_text(Alphabet::Variables)).unwrap(), big);
    }
}
