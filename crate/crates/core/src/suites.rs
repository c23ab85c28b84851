//! Named verification suites. Each runs a fixed, seeded batch of checks and
//! reports the number of cases, failures, and the first counterexample.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::genus::{enumerate_wicks_forms, genus_growth, genus_upper_search, match_wicks, WicksOptions};
use crate::group::{FreeGroup, Group};
use crate::product::{classify_special, verify_decomposition, FactorElem, FactorSpec, ProductElement, ProductGroup};
use crate::quadratic::{canonicalize, classify_quadratic, transport_solution, CanonicalForm};
use crate::surface::{
    apply_move, elementary_check, factors_through_free, generating_moves, genus_reduce, klein_classify, orbit_search,
    Certificate, Dedup, ElementaryOutcome, KleinOutcome, Move, SearchOutcome, SurfaceGroupSpec, SurfaceHom,
};
use crate::words::{enumerate_words, Word};

/// Default orbit budget in expanded nodes.
pub const DEFAULT_BUDGET: usize = 100_000;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const SUITES: [&str; 10] = [
    "wicks-oracle",
    "canonical-roundtrip",
    "thm33-torus",
    "thm33-genus2",
    "genus-growth",
    "orbit-6-1-2",
    "cor-6-8",
    "product-axioms",
    "klein-4-8",
    "structural-invariants",
];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: DEFAULT_SEED,
            cache_dir: None,
        }
    }
}

impl SuiteOptions {
    fn wicks(&self) -> WicksOptions {
        WicksOptions {
            allow_expensive: false,
            cache_dir: self.cache_dir.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} cases, {} failures", self.suite, self.cases, self.failures)?;
        if let Some(c) = &self.first_counterexample {
            write!(f, "; first counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite {:?}; known suites: {}", self.0, SUITES.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            report: SuiteReport {
                suite: name.to_string(),
                passed: true,
                cases: 0,
                failures: 0,
                first_counterexample: None,
                notes: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.fail(describe);
        }
    }

    /// Record a failure without counting a new case.
    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.report.failures += 1;
        self.report.passed = false;
        if self.report.first_counterexample.is_none() {
            self.report.first_counterexample = Some(describe());
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        self.report.notes.push(text.into());
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, UnknownSuite> {
    Ok(match name {
        "wicks-oracle" => wicks_oracle(opts),
        "canonical-roundtrip" => canonical_roundtrip(opts),
        "thm33-torus" => torus_elementary(),
        "thm33-genus2" => genus_two_elementary(opts),
        "genus-growth" => growth(opts),
        "orbit-6-1-2" => commutator_orbit(),
        "cor-6-8" => endomorphism_refutation(),
        "product-axioms" => product_axioms(),
        "klein-4-8" => klein_cases(),
        "structural-invariants" => structural_invariants(opts),
        other => return Err(UnknownSuite(other.to_string())),
    })
}

fn text(ws: &[Word]) -> String {
    let parts: Vec<String> = ws.iter().map(|w| if w.is_empty() { "1".into() } else { w.to_string() }).collect();
    format!("({})", parts.join(", "))
}

/// Genus-1 Wicks matching against brute-force commutator search over all
/// cyclically reduced words of length at most 8 with zero exponent sums.
fn wicks_oracle(opts: &SuiteOptions) -> SuiteReport {
    let mut t = Tally::new("wicks-oracle");
    let forms = match enumerate_wicks_forms(1, &opts.wicks()) {
        Ok(f) => f,
        Err(e) => {
            t.fail(|| e.to_string());
            return t.finish();
        }
    };
    let mut genus_one = 0;
    for w in enumerate_words(2, 8) {
        if !w.is_cyclically_reduced() || !w.in_commutator_subgroup() {
            continue;
        }
        let matched = forms.iter().find_map(|f| match_wicks(&w, f));
        let searched = genus_upper_search(&w, 1, 8);
        let ok = matched.is_some() == searched.is_some()
            && matched.as_ref().is_none_or(|m| m.witness.verifies(&w))
            && searched.as_ref().is_none_or(|s| s.verifies(&w));
        genus_one += usize::from(matched.is_some());
        t.check(ok, || {
            format!(
                "{w}: Wicks match {}, tuple search {}",
                matched.is_some(),
                searched.is_some()
            )
        });
    }
    t.note(format!("{genus_one} words are single commutators"));
    t.finish()
}

/// Quadratic words on up to 3 variables as plain letter counts: every
/// variable occurs zero or two times in the word as written.
fn quadratic_words(max_len: usize) -> Vec<Word> {
    enumerate_words(3, max_len)
        .filter(|w| !w.is_empty() && (1..=3).all(|v| matches!(w.occurrences(v), 0 | 2)))
        .collect()
}

fn canonical_solutions(form: &CanonicalForm, pool: &[Word]) -> Vec<Vec<Word>> {
    let k = form.n_variables() as usize;
    let word = form.word();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let sol: Vec<Word> = idx.iter().map(|&i| pool[i].clone()).collect();
        if word.substitute(&sol).is_identity() {
            out.push(sol);
        }
        let Some(pos) = (0..k).find(|&p| idx[p] + 1 < pool.len()) else {
            break;
        };
        idx[pos] += 1;
        idx[..pos].iter_mut().for_each(|i| *i = 0);
    }
    out
}

fn canonical_roundtrip(opts: &SuiteOptions) -> SuiteReport {
    let mut t = Tally::new("canonical-roundtrip");
    let free = FreeGroup::new(2);
    let pool: Vec<Word> = enumerate_words(2, 2).collect();
    let mut solutions: BTreeMap<(u8, u32), Vec<Vec<Word>>> = BTreeMap::new();
    let words = quadratic_words(6);
    let mut transported = 0;
    for w in &words {
        let q = classify_quadratic(w, 3).expect("filtered to quadratic words");
        let (form, sub) = canonicalize(&q);
        t.check(sub.apply(q.word()) == form.word(), || format!("{w}: substitution does not reach {form}"));
        let sols = solutions
            .entry((form.kind as u8, form.genus))
            .or_insert_with(|| canonical_solutions(&form, &pool));
        for s in sols.iter() {
            transported += 1;
            let ok = transport_solution(&free, &form, &sub, s).is_ok_and(|x| w.substitute(&x).is_identity());
            t.check(ok, || format!("{w}: canonical solution {} does not transport", text(s)));
        }
    }
    t.note(format!("{} quadratic words, {transported} transported solutions", words.len()));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..1000 {
        let w = random_quadratic(&mut rng);
        let before = canonicalize(&classify_quadratic(&w, 4).expect("quadratic")).0;
        match random_twist(&mut rng, &w) {
            Some(twisted) => {
                let after = classify_quadratic(&twisted, 4).map(|q| canonicalize(&q).0);
                t.check(after == Ok(before), || format!("{w} twisted to {twisted}: {before} vs {after:?}"));
            }
            None => t.check(false, || format!("twist of {w} left the quadratic words")),
        }
    }
    t.note("1000 seeded automorphism twists");
    t.finish()
}

/// A random cyclically reduced quadratic word on 1 to 4 variables.
fn random_quadratic(rng: &mut ChaCha8Rng) -> Word {
    loop {
        let k = rng.gen_range(1..=4i32);
        let mut signed: Vec<i32> = (1..=k)
            .flat_map(|v| [v, v])
            .map(|v| if rng.gen_bool(0.5) { v } else { -v })
            .collect();
        signed.shuffle(rng);
        let (core, _) = Word::from_signed(&signed).cyclic_core();
        if !core.is_empty() && (1..=4).all(|v| matches!(core.occurrences(v), 0 | 2)) {
            return core;
        }
    }
}

/// Apply 1 to 5 random automorphisms that keep the word quadratic: variable
/// permutations, inversions, and slides `x ↦ x·A₁⁻¹` for a prefix `A₁` of
/// the segment following `x`. Returns `None` if a result is not quadratic.
fn random_twist(rng: &mut ChaCha8Rng, w: &Word) -> Option<Word> {
    let n = 4u32;
    let mut cur = w.clone();
    for _ in 0..rng.gen_range(1..=5) {
        let vars: Vec<u32> = (1..=n).filter(|&v| cur.occurrences(v) == 2).collect();
        let x = *vars.choose(rng)?;
        let mut images: Vec<Word> = (1..=n).map(Word::generator).collect();
        match rng.gen_range(0..3) {
            0 => {
                let mut perm: Vec<u32> = (1..=n).collect();
                perm.shuffle(rng);
                images = perm.into_iter().map(Word::generator).collect();
            }
            1 => images[x as usize - 1] = Word::generator(x).inverse(),
            _ => {
                if !cur.letters().iter().any(|l| l.generator() == x && !l.is_inverse()) {
                    let mut flip = images.clone();
                    flip[x as usize - 1] = Word::generator(x).inverse();
                    cur = cur.substitute(&flip);
                }
                let i = cur.letters().iter().position(|l| l.generator() == x && !l.is_inverse())?;
                let rotated = cur.rotate(i);
                let j = 1 + rotated.letters()[1..].iter().position(|l| l.generator() == x)?;
                let a1 = Word::from_letters(rotated.letters()[1..1 + rng.gen_range(0..j)].iter().copied());
                images[x as usize - 1] = Word::generator(x).mul(&a1.inverse());
                cur = rotated;
            }
        }
        cur = cur.substitute(&images).cyclic_core().0;
        if !(1..=n).all(|v| matches!(cur.occurrences(v), 0 | 2)) {
            return None;
        }
    }
    Some(cur)
}

fn check_certificate<G: Group>(t: &mut Tally, hom: &SurfaceHom<G>, outcome: &ElementaryOutcome<G::Elem>) {
    let g = hom.group();
    let show = || {
        let imgs: Vec<String> = hom.images().iter().map(|e| g.format_elem(e)).collect();
        format!("({})", imgs.join(", "))
    };
    match outcome {
        ElementaryOutcome::Certificate { certificate, .. } => {
            let round_trip = Certificate::from_json(&certificate.to_json(g), g).is_ok_and(|c| c == *certificate);
            t.check(factors_through_free(hom, certificate) && round_trip, || {
                format!("{}: certificate does not replay or factor", show())
            });
        }
        ElementaryOutcome::Exhausted { expanded, budget } => {
            t.check(false, || format!("{}: exhausted after {expanded} of {budget} nodes", show()));
        }
    }
}

/// Every commuting pair of short words is elementary.
fn torus_elementary() -> SuiteReport {
    let mut t = Tally::new("thm33-torus");
    let free = FreeGroup::new(2);
    let words: Vec<Word> = enumerate_words(2, 3).collect();
    let spec = SurfaceGroupSpec::orientable(1);
    for x in &words {
        for y in &words {
            if x.mul(y) != y.mul(x) {
                continue;
            }
            let hom = SurfaceHom::new(spec, vec![x.clone(), y.clone()], free).expect("commuting");
            let outcome = elementary_check(&hom, DEFAULT_BUDGET).expect("orientable");
            check_certificate(&mut t, &hom, &outcome);
        }
    }
    t.note(format!("budget {DEFAULT_BUDGET}"));
    t.finish()
}

/// All genus-2 tuples over `pool` satisfying the relator.
fn genus_two_solutions<G: Group>(g: &G, pool: &[G::Elem]) -> Vec<Vec<G::Elem>> {
    let spec = SurfaceGroupSpec::orientable(2);
    let mut out = Vec::new();
    for a in pool {
        for b in pool {
            let k1 = g.commutator(a, b);
            for c in pool {
                for d in pool {
                    if g.mul(&k1, &g.commutator(c, d)) == g.identity() {
                        let tuple = vec![a.clone(), b.clone(), c.clone(), d.clone()];
                        debug_assert!(SurfaceHom::new(spec, tuple.clone(), g.clone()).is_ok());
                        out.push(tuple);
                    }
                }
            }
        }
    }
    out
}

pub const GENUS_TWO_BUDGET: usize = 1_000_000;
pub const GENUS_TWO_SAMPLES: usize = 200;

fn genus_two_elementary(opts: &SuiteOptions) -> SuiteReport {
    let mut t = Tally::new("thm33-genus2");
    let spec = SurfaceGroupSpec::orientable(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let z2z3 = ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 3 }]).expect("valid");
    let pool = z2z3.enumerate_finite(2).expect("finite factors");
    let mut sols = genus_two_solutions(&z2z3, &pool);
    sols.shuffle(&mut rng);
    let total = sols.len();
    for tuple in sols.into_iter().take(GENUS_TWO_SAMPLES) {
        let hom = SurfaceHom::new(spec, tuple, z2z3.clone()).expect("relator holds");
        let c = classify_special(&hom, GENUS_TWO_BUDGET).expect("orientable");
        check_certificate(&mut t, &hom, &c.outcome);
    }
    t.note(format!("Z2 * Z3: {} of {total} valid homomorphisms", total.min(GENUS_TWO_SAMPLES)));

    // F2 as the free product of one rank-2 free factor, so both targets go
    // through the same classification entry point.
    let f2 = ProductGroup::new(vec![FactorSpec::Free { rank: 2 }]).expect("valid");
    let pool: Vec<ProductElement> = enumerate_words(2, 2).map(|w| g_word(&f2, &w)).collect();
    let mut sols = genus_two_solutions(&f2, &pool);
    sols.shuffle(&mut rng);
    let total = sols.len();
    for tuple in sols.into_iter().take(GENUS_TWO_SAMPLES) {
        let hom = SurfaceHom::new(spec, tuple, f2.clone()).expect("relator holds");
        let c = classify_special(&hom, GENUS_TWO_BUDGET).expect("orientable");
        check_certificate(&mut t, &hom, &c.outcome);
    }
    t.note(format!("F2: {} of {total} valid homomorphisms", total.min(GENUS_TWO_SAMPLES)));
    t.note(format!("budget {GENUS_TWO_BUDGET}, seed {}", opts.seed));
    t.finish()
}

/// Genus of `[a,b]^p` for `p ≤ 4`, with independent tuple-search checks
/// for `p ≤ 2`.
fn growth(opts: &SuiteOptions) -> SuiteReport {
    let mut t = Tally::new("genus-growth");
    let w = Word::parse("abAB").expect("word");
    let table = match genus_growth(&w, 4, 2, &opts.wicks()) {
        Ok(table) => table,
        Err(e) => {
            t.fail(|| e.to_string());
            return t.finish();
        }
    };
    let values = table.values();
    t.check(values == [Some(1), Some(2), Some(2), Some(3)], || format!("values {values:?}"));
    for row in &table.rows {
        let wp = w.pow(row.p as i64);
        let witnessed = row.result.witness.as_ref().is_some_and(|x| x.verifies(&wp));
        t.check(witnessed, || format!("p = {}: no verified witness", row.p));
        let lower = row.result.lower();
        let exhausted = (1..lower).all(|g| {
            let tag = format!("genus {g}: all ");
            row.result.certificates.iter().any(|c| c.starts_with(&tag))
        });
        t.check(exhausted, || format!("p = {}: lower bound {lower} lacks Wicks certificates", row.p));
    }
    t.check(table.subadditive(), || "subadditivity fails".into());
    let one = genus_upper_search(&w, 1, 2);
    t.check(one.is_some_and(|x| x.verifies(&w)), || "tuple search misses [a,b]".into());
    let w2 = w.pow(2);
    let two = genus_upper_search(&w2, 2, 2);
    t.check(two.is_some_and(|x| x.verifies(&w2)), || "tuple search misses [a,b]^2 at genus 2".into());
    t.check(genus_upper_search(&w2, 1, 4).is_none(), || "tuple search writes [a,b]^2 as one commutator".into());
    t.note(format!("values {values:?}"));
    t.finish()
}

pub const ORBIT_BUDGET: usize = 200_000;

/// Solutions of `[x,y] = [a,b]` with short entries all lie in the orbit of
/// `(a, b)` under the handle moves and conjugation by `[a,b]`.
fn commutator_orbit() -> SuiteReport {
    let mut t = Tally::new("orbit-6-1-2");
    let free = FreeGroup::new(2);
    let k = Word::parse("abAB").expect("word");
    let words: Vec<Word> = enumerate_words(2, 3).collect();
    let mut targets: HashSet<Vec<Word>> = HashSet::new();
    for x in &words {
        for y in &words {
            if Word::commutator(x, y) == k {
                targets.insert(vec![x.clone(), y.clone()]);
            }
        }
    }
    let n_targets = targets.len();
    let spec = SurfaceGroupSpec::orientable(1);
    let mut moves: Vec<Move<Word>> = generating_moves(&spec);
    moves.push(Move::Conjugate { by: k.clone() });
    moves.push(Move::Conjugate { by: k.inverse() });
    let start = vec![Word::generator(1), Word::generator(2)];
    let mut remaining = targets.clone();
    let outcome = orbit_search(&free, &start, &moves, ORBIT_BUDGET, Dedup::Exact, |tuple| {
        remaining.remove(tuple);
        remaining.is_empty().then_some(())
    });
    let expanded = match outcome {
        SearchOutcome::Found { expanded, .. } | SearchOutcome::Exhausted { expanded, .. } => expanded,
    };
    let mut sorted: Vec<&Vec<Word>> = targets.iter().collect();
    sorted.sort();
    for target in sorted {
        t.check(!remaining.contains(target), || format!("{} not reached", text(target)));
    }
    t.note(format!("{n_targets} solutions, {expanded} nodes expanded of budget {ORBIT_BUDGET}"));
    t.finish()
}

/// No endomorphism with generator images of length at most 4 sends
/// `u = [a,b]` to `u` and `v = [a²,b]` to `uv`.
fn endomorphism_refutation() -> SuiteReport {
    let mut t = Tally::new("cor-6-8");
    let u = Word::parse("abAB").expect("word");
    let v = Word::parse("aabAAB").expect("word");
    let uv = u.mul(&v);
    let words: Vec<Word> = enumerate_words(2, 4).collect();
    for x in &words {
        for y in &words {
            let images = [x.clone(), y.clone()];
            let hit = u.substitute(&images) == u && v.substitute(&images) == uv;
            t.check(!hit, || format!("φ(a) = {x}, φ(b) = {y} satisfies both equations"));
        }
    }
    t.note(format!("{} endomorphisms searched", words.len() * words.len()));
    t.finish()
}

fn product_axioms() -> SuiteReport {
    let mut t = Tally::new("product-axioms");
    let g = ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 3 }]).expect("valid");
    let elems = g.enumerate_finite(3).expect("finite factors");
    let e = g.identity();
    for x in &elems {
        let inv = g.inverse(x);
        t.check(g.mul(x, &inv) == e && g.mul(&inv, x) == e, || format!("{}: inverse fails", g.format(x)));
        t.check(g.mul(x, &e) == *x && g.mul(&e, x) == *x, || format!("{}: identity fails", g.format(x)));
        t.check(g.normal_form(x.syllables()).as_ref() == Ok(x), || format!("{}: normal form not idempotent", g.format(x)));
        if let Some((f, y, z)) = g.conjugate_into_factor(x) {
            let y = g.syllable(f, y).expect("factor element");
            t.check(g.conjugate(&y, &z) == *x, || format!("{}: conjugator does not verify", g.format(x)));
        }
        for y in &elems {
            for z in &elems {
                let ok = g.mul(&g.mul(x, y), z) == g.mul(x, &g.mul(y, z));
                t.check(ok, || format!("associativity fails at {}, {}, {}", g.format(x), g.format(y), g.format(z)));
            }
        }
    }
    // Completeness: conjugates of single syllables are detected.
    for x in elems.iter().filter(|x| x.len() == 1) {
        for z in &elems {
            let c = g.conjugate(x, z);
            let found = g.conjugate_into_factor(&c);
            t.check(found.is_some_and(|(f, _, _)| f == x.syllables()[0].0), || {
                format!("{} is a conjugate of a syllable but not detected", g.format(&c))
            });
        }
    }
    // Merge order: raw sequences of up to 4 syllables, possibly repeating a factor.
    let raw_syllables = [(0, FactorElem::Index(1)), (1, FactorElem::Index(1)), (1, FactorElem::Index(2))];
    let mut seqs: Vec<Vec<(usize, FactorElem)>> = vec![Vec::new()];
    for _ in 0..4 {
        let next: Vec<_> = seqs
            .iter()
            .filter(|s| s.len() == seqs.last().map_or(0, Vec::len))
            .flat_map(|s| {
                raw_syllables.iter().map(move |r| {
                    let mut s = s.clone();
                    s.push(r.clone());
                    s
                })
            })
            .collect();
        seqs.extend(next);
    }
    for raw in &seqs {
        let nf = g.normal_form(raw).expect("valid syllables");
        let singles: Vec<ProductElement> = raw.iter().map(|(f, y)| g.syllable(*f, y.clone()).expect("valid")).collect();
        let left = singles.iter().fold(e.clone(), |acc, s| g.mul(&acc, s));
        let right = singles.iter().rev().fold(e.clone(), |acc, s| g.mul(s, &acc));
        t.check(nf == left && nf == right, || format!("merge order changes {}", g.format(&nf)));
    }
    // A free factor of rank 2 computes exactly as reduced words do.
    let f2 = ProductGroup::new(vec![FactorSpec::Free { rank: 2 }]).expect("valid");
    let words: Vec<Word> = enumerate_words(2, 3).collect();
    for x in &words {
        for y in &words {
            let px = g_word(&f2, x);
            let py = g_word(&f2, y);
            t.check(f2.mul(&px, &py) == g_word(&f2, &x.mul(y)), || format!("free factor disagrees on {x} * {y}"));
        }
    }
    t.note(format!("{} elements of Z2 * Z3, {} raw sequences", elems.len(), seqs.len()));
    t.finish()
}

fn g_word(g: &ProductGroup, w: &Word) -> ProductElement {
    g.syllable(0, FactorElem::Word(w.clone())).expect("free factor")
}

fn klein_cases() -> SuiteReport {
    let mut t = Tally::new("klein-4-8");
    let spec = SurfaceGroupSpec::non_orientable(2);
    let z2z2 = ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 2 }]).expect("valid");
    let mut counts = BTreeMap::new();
    let pool = z2z2.enumerate_finite(2).expect("finite factors");
    klein_batch(&mut t, &mut counts, &z2z2, &pool, spec);
    let pool: Vec<Word> = enumerate_words(2, 2).collect();
    klein_batch(&mut t, &mut counts, &FreeGroup::new(2), &pool, spec);
    t.note(format!("cases found: {counts:?}"));
    t.finish()
}

fn klein_batch<G: Group>(
    t: &mut Tally,
    counts: &mut BTreeMap<String, usize>,
    g: &G,
    pool: &[G::Elem],
    spec: SurfaceGroupSpec,
) {
    for a in pool {
        for b in pool {
            let Ok(hom) = SurfaceHom::new(spec, vec![a.clone(), b.clone()], g.clone()) else {
                continue;
            };
            let show = || format!("({}, {})", g.format_elem(a), g.format_elem(b));
            match klein_classify(&hom, DEFAULT_BUDGET).expect("Klein bottle") {
                KleinOutcome::Case {
                    case,
                    certificate,
                    decomposition,
                } => {
                    *counts.entry(format!("{case:?}")).or_default() += 1;
                    let report = verify_decomposition(&hom, &decomposition);
                    let ok = certificate.replays(g, hom.images()) && report.is_ok_and(|r| r.passed());
                    t.check(ok, || format!("{}: case {case:?} does not verify", show()));
                }
                KleinOutcome::EssentiallyInjectiveWithinBudget { .. } => t.check(false, || format!("{}: inconclusive", show())),
            }
        }
    }
}

/// Move soundness, certificate replay, recomposition and Euler bookkeeping
/// on seeded random homomorphisms.
fn structural_invariants(opts: &SuiteOptions) -> SuiteReport {
    let mut t = Tally::new("structural-invariants");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let free = FreeGroup::new(2);
    let z2z3 = ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 3 }]).expect("valid");
    let z2z3_pool = z2z3.enumerate_finite(3).expect("finite");
    let words: Vec<Word> = enumerate_words(2, 2).collect();
    for case in 0..10_000 {
        let orientable = rng.gen_bool(0.5);
        let genus = if orientable { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) };
        let spec = SurfaceGroupSpec::new(genus, orientable).expect("positive genus");
        if case % 2 == 0 {
            let start = random_solution(&mut rng, &free, &spec, &words);
            invariants_case(&mut t, &mut rng, &free, spec, start, &words);
        } else {
            let start = random_solution(&mut rng, &z2z3, &spec, &z2z3_pool);
            invariants_case(&mut t, &mut rng, &z2z3, spec, start, &z2z3_pool);
        }
    }
    t.finish()
}

/// A solution built from commuting handles or cancelling crosscaps,
/// then scrambled by random moves.
fn random_solution<G: Group>(rng: &mut ChaCha8Rng, g: &G, spec: &SurfaceGroupSpec, pool: &[G::Elem]) -> Vec<G::Elem> {
    let pick = |rng: &mut ChaCha8Rng| pool.choose(rng).expect("pool").clone();
    let mut tuple = Vec::new();
    if spec.orientable {
        for _ in 0..spec.genus {
            let r = pick(rng);
            tuple.push(g.pow(&r, rng.gen_range(-2..=2)));
            tuple.push(g.pow(&r, rng.gen_range(-2..=2)));
        }
    } else {
        let involutions: Vec<G::Elem> = pool.iter().filter(|x| g.is_identity(&g.mul(x, x))).cloned().collect();
        let mut k = 0;
        while k < spec.genus {
            if k + 1 < spec.genus && rng.gen_bool(0.6) {
                let x = pick(rng);
                tuple.push(x.clone());
                tuple.push(g.inverse(&x));
                k += 2;
            } else {
                tuple.push(involutions.choose(rng).expect("identity is an involution").clone());
                k += 1;
            }
        }
    }
    let moves = generating_moves::<G::Elem>(spec);
    for _ in 0..rng.gen_range(0..6) {
        let m = if moves.is_empty() || rng.gen_bool(0.15) {
            Move::Conjugate { by: pick(rng) }
        } else {
            moves.choose(rng).expect("moves").clone()
        };
        tuple = apply_move(g, &tuple, &m);
    }
    tuple
}

const INVARIANT_BUDGET: usize = 300;

fn invariants_case<G: Group>(
    t: &mut Tally,
    rng: &mut ChaCha8Rng,
    g: &G,
    spec: SurfaceGroupSpec,
    start: Vec<G::Elem>,
    pool: &[G::Elem],
) {
    let show = |tuple: &[G::Elem]| {
        let imgs: Vec<String> = tuple.iter().map(|e| g.format_elem(e)).collect();
        format!("{spec} ({})", imgs.join(", "))
    };
    let hom = match SurfaceHom::new(spec, start.clone(), g.clone()) {
        Ok(h) => h,
        Err(e) => {
            t.check(false, || format!("{}: scrambled start invalid: {e}", show(&start)));
            return;
        }
    };
    let mut moves = generating_moves::<G::Elem>(&spec);
    moves.push(Move::Conjugate {
        by: pool.choose(rng).expect("pool").clone(),
    });
    for m in &moves {
        let moved = apply_move(g, hom.images(), m);
        let back = apply_move(g, &moved, &m.inverse(g));
        let ok = SurfaceHom::new(spec, moved, g.clone()).is_ok() && back == hom.images();
        t.check(ok, || format!("{}: move {:?} unsound", show(hom.images()), m.to_json(g)));
    }

    if spec.orientable {
        let outcome = elementary_check(&hom, INVARIANT_BUDGET).expect("orientable");
        if let ElementaryOutcome::Certificate { certificate, .. } = &outcome {
            t.check(factors_through_free(&hom, certificate), || format!("{}: certificate replay", show(hom.images())));
        }
    } else if spec.genus == 2 {
        if let Ok(KleinOutcome::Case { certificate, .. }) = klein_classify(&hom, INVARIANT_BUDGET) {
            t.check(certificate.replays(g, hom.images()), || format!("{}: Klein certificate replay", show(hom.images())));
        }
    }

    let dec = genus_reduce(&hom, INVARIANT_BUDGET);
    t.check(dec.recompose(g) == hom.images(), || format!("{}: recomposition fails", show(hom.images())));
    t.check(dec.splits().iter().all(|s| s.euler_holds()), || format!("{}: Euler bookkeeping fails", show(hom.images())));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert_eq!(
            run_suite("no-such-suite", &SuiteOptions::default()),
            Err(UnknownSuite("no-such-suite".into()))
        );
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["cor-6-8", "product-axioms"] {
            let r = run_suite(name, &SuiteOptions::default()).unwrap();
            assert!(r.passed, "{r}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn twists_stay_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let w = random_quadratic(&mut rng);
            let twisted = random_twist(&mut rng, &w).expect("quadratic");
            let f = |x: &Word| canonicalize(&classify_quadratic(x, 4).unwrap()).0;
            assert_eq!(f(&w), f(&twisted), "{w} -> {twisted}");
        }
    }
}
