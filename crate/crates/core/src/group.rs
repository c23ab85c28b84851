//! The arithmetic interface shared by free groups and free products.

use std::fmt::Debug;
use std::hash::Hash;

use crate::words::{Word, WordError};

pub trait Group: Clone {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// Normal-form length (letters for free groups, syllables for products).
    fn length(&self, a: &Self::Elem) -> usize;

    /// Elements `t` such that `t a t⁻¹` runs over the cyclically reduced
    /// representatives of the conjugacy class of `a` that the group can
    /// cheaply produce. Never empty.
    fn cyclic_normalizers(&self, a: &Self::Elem) -> Vec<Self::Elem>;

    /// Index of the free factor containing `a`, if it lies in one. Free
    /// groups are a single factor; the identity reports factor 0.
    fn factor_of(&self, a: &Self::Elem) -> Option<usize>;

    /// An element `z` and factor index such that `z⁻¹ a z` lies in that factor
    /// for every `a` in `elems`.
    fn common_factor_conjugator(&self, elems: &[Self::Elem]) -> Option<(usize, Self::Elem)>;

    /// Generator of the centralizer of a nontrivial `a` when that centralizer
    /// is infinite cyclic. Only used to sharpen [`tuple_conjugacy_key`].
    fn centralizer_root(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem, String>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn conjugate(&self, a: &Self::Elem, by: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(by, a), &self.inverse(by))
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inverse(&ba))
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inverse(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Evaluate a word in abstract generators under `images`.
    fn eval(&self, word: &Word, images: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.identity();
        for l in word.letters() {
            let img = &images[l.generator() as usize - 1];
            acc = if l.is_inverse() {
                self.mul(&acc, &self.inverse(img))
            } else {
                self.mul(&acc, img)
            };
        }
        acc
    }
}

/// The free group of a given rank, elements are reduced words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreeGroup {
    pub rank: u32,
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        FreeGroup { rank }
    }
}

impl Group for FreeGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.mul(b)
    }

    fn inverse(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn is_identity(&self, a: &Word) -> bool {
        a.is_identity()
    }

    fn length(&self, a: &Word) -> usize {
        a.len()
    }

    fn cyclic_normalizers(&self, a: &Word) -> Vec<Word> {
        let (core, conj) = a.cyclic_core();
        if core.is_empty() {
            return vec![Word::identity()];
        }
        // rotation k of core is P⁻¹ core P with P = core[..k]; a = c core c⁻¹
        (0..core.len())
            .map(|k| conj.mul(&core.prefix(k)).inverse())
            .collect()
    }

    fn factor_of(&self, _a: &Word) -> Option<usize> {
        Some(0)
    }

    fn common_factor_conjugator(&self, _elems: &[Word]) -> Option<(usize, Word)> {
        Some((0, Word::identity()))
    }

    fn centralizer_root(&self, a: &Word) -> Option<Word> {
        a.primitive_root().ok().map(|(root, _)| root)
    }

    fn parse_elem(&self, text: &str) -> Result<Word, String> {
        let w = Word::parse(text).map_err(|e| e.to_string())?;
        w.check_rank(self.rank).map_err(|e: WordError| e.to_string())?;
        Ok(w)
    }

    fn format_elem(&self, a: &Word) -> String {
        a.to_string()
    }

    fn commutator(&self, a: &Word, b: &Word) -> Word {
        Word::commutator(a, b)
    }

    fn pow(&self, a: &Word, n: i64) -> Word {
        a.pow(n)
    }
}

/// Key of a tuple modulo simultaneous conjugation. Equal keys always mean
/// conjugate tuples. The converse needs every element's centralizer to be
/// covered by its normalizers plus powers of its centralizer root, which
/// holds for free groups and free products.
///
/// The first nontrivial entry is moved to its least cyclically reduced
/// rotation; the remaining freedom, conjugation by powers of its centralizer root, is
/// spent shortening the first entry that does not commute with it.
pub fn tuple_conjugacy_key<G: Group>(group: &G, tuple: &[G::Elem]) -> Vec<G::Elem> {
    let Some(first) = tuple.iter().find(|e| !group.is_identity(e)) else {
        return tuple.to_vec();
    };
    // Only rotations giving the least first entry can win; they differ by
    // centralizer elements, which the refinement handles.
    let rotated: Vec<(G::Elem, G::Elem)> =
        group.cyclic_normalizers(first).into_iter().map(|t| (group.conjugate(first, &t), t)).collect();
    let least = rotated.iter().map(|(r, _)| r).min().expect("normalizers are never empty").clone();
    let mut best: Option<Vec<G::Elem>> = None;
    for (_, t) in rotated.into_iter().filter(|(r, _)| *r == least) {
        let base: Vec<G::Elem> = tuple.iter().map(|e| group.conjugate(e, &t)).collect();
        for cand in centralizer_refinements(group, &base) {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("normalizers are never empty")
}

fn centralizer_refinements<G: Group>(group: &G, base: &[G::Elem]) -> Vec<Vec<G::Elem>> {
    let first = base.iter().find(|e| !group.is_identity(e)).expect("nontrivial");
    let Some(root) = group.centralizer_root(first) else {
        return vec![base.to_vec()];
    };
    let commutes = |e: &G::Elem| group.mul(e, &root) == group.mul(&root, e);
    let Some(other) = base.iter().find(|e| !commutes(e)) else {
        return vec![base.to_vec()];
    };
    let window = (2 * group.length(other) / group.length(&root).max(1) + 2) as i64;
    let shifted: Vec<(usize, G::Elem)> = (-window..=window)
        .map(|m| {
            let p = group.pow(&root, m);
            (group.length(&group.conjugate(other, &p)), p)
        })
        .collect();
    let least = shifted.iter().map(|(l, _)| *l).min().expect("window nonempty");
    shifted
        .into_iter()
        .filter(|(l, _)| *l == least)
        .map(|(_, p)| base.iter().map(|e| group.conjugate(e, &p)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizers_produce_rotations() {
        let g = FreeGroup::new(2);
        let a = Word::parse("b abAB B").unwrap();
        let ts = g.cyclic_normalizers(&a);
        assert_eq!(ts.len(), 4);
        for t in ts {
            let c = g.conjugate(&a, &t);
            assert!(c.is_cyclically_reduced());
            assert_eq!(c.len(), 4);
        }
    }

    #[test]
    fn tuple_key_is_conjugation_invariant() {
        let g = FreeGroup::new(2);
        let tuple = vec![Word::parse("ab").unwrap(), Word::parse("aab").unwrap()];
        let t = Word::parse("bA").unwrap();
        let moved: Vec<Word> = tuple.iter().map(|e| g.conjugate(e, &t)).collect();
        assert_eq!(tuple_conjugacy_key(&g, &tuple), tuple_conjugacy_key(&g, &moved));
    }

    #[test]
    fn tuple_key_separates_and_identifies_exhaustively() {
        let g = FreeGroup::new(2);
        let words: Vec<Word> = crate::words::enumerate_words(2, 2).collect();
        let conjugators: Vec<Word> = crate::words::enumerate_words(2, 3).collect();
        for x in &words {
            for y in &words {
                let tuple = vec![x.clone(), y.clone()];
                let key = tuple_conjugacy_key(&g, &tuple);
                assert_eq!(key.len(), 2);
                for t in &conjugators {
                    let moved: Vec<Word> = tuple.iter().map(|e| g.conjugate(e, t)).collect();
                    assert_eq!(tuple_conjugacy_key(&g, &moved), key, "{x} {y} by {t}");
                }
            }
        }
    }

    #[test]
    fn eval_commutator() {
        let g = FreeGroup::new(2);
        let r = Word::parse("abAB").unwrap();
        let img = [Word::parse("aa").unwrap(), Word::parse("aaa").unwrap()];
        assert!(g.eval(&r, &img).is_identity());
    }
}
