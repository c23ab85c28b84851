//! Commutator genus in free groups.
//!
//! Lower bounds come only from exhausting Wicks forms: a cyclically reduced
//! word is a product of `g` commutators iff some rotation of it spells a
//! genus-`g` Wicks form with the pieces substituted. Only maximal forms
//! (`6g−3` pieces, trivalent corners) are generated; degenerate forms are
//! covered by letting pieces be empty during matching. Upper bounds come
//! from matches and from a bounded tuple search; a failed search proves
//! nothing.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::quadratic::{canonicalize, classify_quadratic, polygon_type, FormKind, PolygonType};
use crate::words::{enumerate_words, Alphabet, Letter, Word};

/// Bumped whenever generation or the cache format changes.
pub const WICKS_VERSION: u32 = 1;

/// Largest genus generated without the expensive flag.
pub const DEFAULT_MAX_WICKS_GENUS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("genus undefined: exponent sums {sums:?} are not all zero")]
    NotInCommutatorSubgroup { sums: Vec<i64> },
    #[error("Wicks forms of genus {genus} are not supported{hint}")]
    Unsupported { genus: u32, hint: String },
    #[error("Wicks cache: {0}")]
    Cache(String),
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Default)]
pub struct WicksOptions {
    /// Permit genus 3 (minutes of enumeration).
    pub allow_expensive: bool,
    /// Directory for the on-disk cache; `None` keeps forms in memory only.
    pub cache_dir: Option<PathBuf>,
}

impl WicksOptions {
    pub fn max_genus(&self) -> u32 {
        if self.allow_expensive {
            3
        } else {
            DEFAULT_MAX_WICKS_GENUS
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Oriented {
    /// `(piece, inverse)` per letter.
    letters: Vec<(usize, bool)>,
    /// Canonical commutator variables in terms of the pieces.
    witness: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WicksForm {
    pattern: Word,
    genus: u32,
    n_pieces: usize,
    orientations: [Oriented; 2],
}

impl WicksForm {
    /// Validates that `pattern` is an orientable quadratic cyclic word of
    /// the given genus.
    pub fn new(pattern: Word, genus: u32) -> Result<Self, GenusError> {
        let n_pieces = pattern.max_generator() as usize;
        let q = classify_quadratic(&pattern, n_pieces as u32).map_err(|e| GenusError::Domain(e.to_string()))?;
        let expected = PolygonType {
            orientable: true,
            genus,
            euler_characteristic: 2 - 2 * genus as i64,
        };
        if q.word() != &pattern || polygon_type(&q) != expected || !q.is_orientable_type() {
            return Err(GenusError::Domain(format!(
                "{} is not a cyclically reduced orientable genus {genus} pattern",
                pattern.to_text(Alphabet::Variables)
            )));
        }
        let orient = |p: &Word| -> Oriented {
            let q = classify_quadratic(p, n_pieces as u32).expect("quadratic");
            let (form, sub) = canonicalize(&q);
            debug_assert_eq!((form.kind, form.genus), (FormKind::Orientable, genus));
            Oriented {
                letters: p.letters().iter().map(|l| (l.generator() as usize - 1, l.is_inverse())).collect(),
                witness: sub.inverse_images()[..2 * genus as usize].to_vec(),
            }
        };
        let orientations = [orient(&pattern), orient(&pattern.inverse())];
        Ok(WicksForm {
            pattern,
            genus,
            n_pieces,
            orientations,
        })
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn n_pieces(&self) -> usize {
        self.n_pieces
    }

    pub fn to_text(&self) -> String {
        self.pattern.to_text(Alphabet::Variables)
    }
}

/// `[x₁,y₁]···[x_g,y_g]` as the tuple `(x₁, y₁, …, x_g, y_g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorWitness {
    #[serde(serialize_with = "words_as_text")]
    pub tuple: Vec<Word>,
}

fn words_as_text<S: serde::Serializer>(ws: &[Word], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(|w| w.to_string()))
}

impl CommutatorWitness {
    pub fn genus(&self) -> u32 {
        (self.tuple.len() / 2) as u32
    }

    pub fn product(&self) -> Word {
        self.tuple
            .chunks(2)
            .fold(Word::identity(), |acc, p| acc.mul(&Word::commutator(&p[0], &p[1])))
    }

    pub fn verifies(&self, target: &Word) -> bool {
        self.tuple.len().is_multiple_of(2) && self.product() == *target
    }

    pub fn conjugate_by(&self, t: &Word) -> Self {
        CommutatorWitness {
            tuple: self.tuple.iter().map(|x| x.conjugate_by(t)).collect(),
        }
    }

    /// Shorten each pair by the exact identities `[x, y] = [x y^{±1}, y]
    /// = [x, y x^{±1}]` while the pair gets shorter.
    pub fn simplified(&self) -> Self {
        let mut tuple = self.tuple.clone();
        for pair in tuple.chunks_mut(2) {
            loop {
                let (x, y) = (&pair[0], &pair[1]);
                let size = x.len() + y.len();
                let candidates = [
                    (x.mul(y), y.clone()),
                    (x.mul(&y.inverse()), y.clone()),
                    (x.clone(), y.mul(x)),
                    (x.clone(), y.mul(&x.inverse())),
                ];
                match candidates.into_iter().find(|(a, b)| a.len() + b.len() < size) {
                    Some((a, b)) => {
                        pair[0] = a;
                        pair[1] = b;
                    }
                    None => break,
                }
            }
        }
        CommutatorWitness { tuple }
    }

    pub fn concat(&self, other: &CommutatorWitness) -> Self {
        CommutatorWitness {
            tuple: self.tuple.iter().chain(&other.tuple).cloned().collect(),
        }
    }
}

struct UndoUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl UndoUnionFind {
    fn new(n: usize) -> Self {
        UndoUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merge, refusing (and recording nothing) when the class would exceed `cap`.
    fn union_capped(&mut self, a: usize, b: usize, cap: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            self.history.push(None);
            return true;
        }
        if self.size[a] + self.size[b] > cap {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(Some((b, a)));
        true
    }

    fn undo(&mut self) {
        if let Some((b, a)) = self.history.pop().expect("history") {
            self.parent[b] = b;
            self.size[a] -= self.size[b];
        }
    }
}

/// Least relabelled rotation of the pattern or its inverse; pieces are
/// numbered by first occurrence, which is made positive.
fn pattern_key(signed: &[i32]) -> Vec<i32> {
    let n = signed.len();
    let inverse: Vec<i32> = signed.iter().rev().map(|x| -x).collect();
    let mut best: Option<Vec<i32>> = None;
    let mut label = vec![0i32; n + 1];
    for seq in [signed, inverse.as_slice()] {
        for r in 0..n {
            label.iter_mut().for_each(|x| *x = 0);
            let mut next = 1;
            let mut cand = Vec::with_capacity(n);
            for k in 0..n {
                let x = seq[(r + k) % n];
                let v = x.unsigned_abs() as usize;
                if label[v] == 0 {
                    label[v] = if x > 0 { next } else { -next };
                    next += 1;
                }
                cand.push(if x > 0 { label[v] } else { -label[v] });
            }
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Enumerate maximal genus-`g` Wicks forms from scratch.
fn generate(g: u32) -> Vec<Word> {
    let n = (12 * g - 6) as usize;
    let mut partner = vec![usize::MAX; n];
    let mut uf = UndoUnionFind::new(n);
    let mut keys: BTreeSet<Vec<i32>> = BTreeSet::new();

    fn rec(n: usize, partner: &mut [usize], uf: &mut UndoUnionFind, keys: &mut BTreeSet<Vec<i32>>) {
        let Some(i) = partner.iter().position(|&p| p == usize::MAX) else {
            if (0..n).all(|c| uf.size[uf.find(c)] == 3) {
                let mut label = vec![0i32; n];
                let mut next = 1;
                for k in 0..n {
                    if partner[k] > k {
                        label[k] = next;
                        label[partner[k]] = -next;
                        next += 1;
                    }
                }
                keys.insert(pattern_key(&label));
            }
            return;
        };
        for j in i + 1..n {
            if partner[j] != usize::MAX || j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            // x at i, x⁻¹ at j: tails i ~ j+1, heads i+1 ~ j.
            if !uf.union_capped(i, (j + 1) % n, 3) {
                continue;
            }
            if !uf.union_capped(i + 1, j, 3) {
                uf.undo();
                continue;
            }
            partner[i] = j;
            partner[j] = i;
            rec(n, partner, uf, keys);
            partner[i] = usize::MAX;
            partner[j] = usize::MAX;
            uf.undo();
            uf.undo();
        }
    }

    rec(n, &mut partner, &mut uf, &mut keys);
    keys.into_iter().map(|k| Word::from_signed(&k)).collect()
}

static MEMO: LazyLock<Mutex<HashMap<u32, Arc<Vec<WicksForm>>>>> = LazyLock::new(Default::default);

fn cache_file(dir: &Path, g: u32) -> PathBuf {
    dir.join(format!("wicks-g{g}.txt"))
}

fn read_cache(path: &Path, g: u32) -> Option<Vec<Word>> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    let header = lines.next()?;
    let fields: HashMap<&str, &str> = header
        .strip_prefix("wicks ")?
        .split_whitespace()
        .filter_map(|f| f.split_once('='))
        .collect();
    if fields.get("g")? != &g.to_string() || fields.get("version")? != &WICKS_VERSION.to_string() {
        return None;
    }
    let count: usize = fields.get("count")?.parse().ok()?;
    let words: Vec<Word> = lines
        .filter(|l| !l.trim().is_empty())
        .map(Word::parse_variables)
        .collect::<Result<_, _>>()
        .ok()?;
    (words.len() == count).then_some(words)
}

fn write_cache(path: &Path, g: u32, forms: &[WicksForm]) -> Result<(), GenusError> {
    let mut text = format!("wicks g={g} count={} version={WICKS_VERSION}\n", forms.len());
    for f in forms {
        text.push_str(&f.to_text());
        text.push('\n');
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| GenusError::Cache(e.to_string()))?;
    }
    fs::write(path, text).map_err(|e| GenusError::Cache(e.to_string()))
}

/// All maximal genus-`g` forms up to relabelling, rotation and inversion.
/// Memoized in process and, when `opts.cache_dir` is set, on disk.
pub fn enumerate_wicks_forms(g: u32, opts: &WicksOptions) -> Result<Arc<Vec<WicksForm>>, GenusError> {
    if g == 0 {
        return Ok(Arc::new(Vec::new()));
    }
    if g > opts.max_genus() {
        let hint = if g == 3 {
            " without the expensive flag (--allow-expensive); enumeration takes several minutes".to_string()
        } else {
            format!("; the maximum is {}", WicksOptions { allow_expensive: true, cache_dir: None }.max_genus())
        };
        return Err(GenusError::Unsupported { genus: g, hint });
    }
    if let Some(forms) = MEMO.lock().expect("memo lock").get(&g) {
        return Ok(forms.clone());
    }
    let cached = opts.cache_dir.as_ref().and_then(|d| read_cache(&cache_file(d, g), g));
    let fresh = cached.is_none();
    let patterns = cached.unwrap_or_else(|| generate(g));
    let forms: Vec<WicksForm> = patterns
        .into_iter()
        .map(|p| WicksForm::new(p, g))
        .collect::<Result<_, _>>()?;
    if fresh {
        if let Some(d) = &opts.cache_dir {
            write_cache(&cache_file(d, g), g, &forms)?;
        }
    }
    let forms = Arc::new(forms);
    MEMO.lock().expect("memo lock").insert(g, forms.clone());
    Ok(forms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WicksMatch {
    /// `w = t · rotated · t⁻¹` with `rotated` the word that spells the form.
    pub rotation: usize,
    pub inverted: bool,
    #[serde(serialize_with = "words_as_text")]
    pub pieces: Vec<Word>,
    pub witness: CommutatorWitness,
}

/// Match `w` against one form. Rotations are tried in order, the form before
/// its inverse, and piece lengths in increasing lexicographic order; the
/// first match wins. The witness is checked against `w` before returning.
pub fn match_wicks(w: &Word, form: &WicksForm) -> Option<WicksMatch> {
    let (core, conj) = w.cyclic_core();
    let n = core.len();
    let target: Vec<Letter> = core.letters().to_vec();
    for rotation in 0..n.max(1) {
        let rotated: Vec<Letter> = (0..n).map(|k| target[(rotation + k) % n]).collect();
        for (o, oriented) in form.orientations.iter().enumerate() {
            let mut spans = vec![None; form.n_pieces];
            if !split(&rotated, &oriented.letters, 0, 0, &mut spans) {
                continue;
            }
            let pieces: Vec<Word> = spans
                .iter()
                .zip(first_signs(&oriented.letters, form.n_pieces))
                .map(|(span, inv)| {
                    let (s, len) = span.expect("every piece assigned");
                    let seg = Word::from_letters(rotated[s..s + len].iter().copied());
                    if inv {
                        seg.inverse()
                    } else {
                        seg
                    }
                })
                .collect();
            let t = conj.mul(&core.prefix(rotation));
            let witness = CommutatorWitness {
                tuple: oriented.witness.iter().map(|x| x.substitute(&pieces)).collect(),
            }
            .conjugate_by(&t)
            .simplified();
            if witness.verifies(w) {
                return Some(WicksMatch {
                    rotation,
                    inverted: o == 1,
                    pieces,
                    witness,
                });
            }
        }
    }
    None
}

fn first_signs(letters: &[(usize, bool)], n_pieces: usize) -> Vec<bool> {
    let mut signs = vec![None; n_pieces];
    for &(p, inv) in letters {
        signs[p].get_or_insert(inv);
    }
    signs.into_iter().map(|s| s.unwrap_or(false)).collect()
}

/// Backtracking split of `word[pos..]` into the pattern letters from `k` on.
/// `spans[p]` is the `(start, len)` of the first occurrence of piece `p`.
fn split(word: &[Letter], pattern: &[(usize, bool)], k: usize, pos: usize, spans: &mut [Option<(usize, usize)>]) -> bool {
    let n = word.len();
    if k == pattern.len() {
        return pos == n;
    }
    let (piece, inv) = pattern[k];
    match spans[piece] {
        Some((start, len)) => {
            if pos + len > n {
                return false;
            }
            // Same sign: literal copy; opposite sign: reversed inverse.
            let first_inv = pattern.iter().find(|(p, _)| *p == piece).expect("seen").1;
            let ok = if first_inv == inv {
                (0..len).all(|i| word[pos + i] == word[start + i])
            } else {
                (0..len).all(|i| word[pos + i] == word[start + len - 1 - i].inverse())
            };
            ok && split(word, pattern, k + 1, pos + len, spans)
        }
        None => {
            // Lengths still owed by pieces whose second occurrence lies ahead.
            let owed: usize = pattern[k + 1..]
                .iter()
                .filter_map(|(p, _)| spans[*p].map(|(_, l)| l))
                .sum();
            let mut len = 0;
            while pos + 2 * len + owed <= n {
                spans[piece] = Some((pos, len));
                if split(word, pattern, k + 1, pos + len, spans) {
                    return true;
                }
                len += 1;
            }
            spans[piece] = None;
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenusStatus {
    Exact { genus: u32 },
    Bounds { lower: u32, upper: Option<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusResult {
    pub status: GenusStatus,
    pub witness: Option<CommutatorWitness>,
    /// Which Wicks levels were exhausted and where the witness came from.
    pub certificates: Vec<String>,
    /// `w = conjugator · core · conjugator⁻¹` for the cyclic core.
    #[serde(serialize_with = "word_as_text")]
    pub conjugator: Word,
}

fn word_as_text<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

impl GenusResult {
    pub fn exact(&self) -> Option<u32> {
        match self.status {
            GenusStatus::Exact { genus } => Some(genus),
            GenusStatus::Bounds { .. } => None,
        }
    }

    pub fn lower(&self) -> u32 {
        match self.status {
            GenusStatus::Exact { genus } => genus,
            GenusStatus::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> Option<u32> {
        match self.status {
            GenusStatus::Exact { genus } => Some(genus),
            GenusStatus::Bounds { upper, .. } => upper,
        }
    }
}

pub fn check_commutator_subgroup(w: &Word) -> Result<(), GenusError> {
    let sums = w.exponent_sums(w.max_generator());
    if sums.iter().any(|&s| s != 0) {
        return Err(GenusError::NotInCommutatorSubgroup { sums });
    }
    Ok(())
}

/// Scan Wicks forms of genus `1..=g_max`; the first match gives the exact
/// genus, otherwise the lower bound is `g_max + 1`.
pub fn genus_exact(w: &Word, g_max: u32, opts: &WicksOptions) -> Result<GenusResult, GenusError> {
    check_commutator_subgroup(w)?;
    let (_, conjugator) = w.cyclic_core();
    if w.is_identity() {
        return Ok(GenusResult {
            status: GenusStatus::Exact { genus: 0 },
            witness: Some(CommutatorWitness { tuple: Vec::new() }),
            certificates: vec!["identity".into()],
            conjugator,
        });
    }
    let mut certificates = Vec::new();
    for g in 1..=g_max {
        let forms = enumerate_wicks_forms(g, opts)?;
        if let Some(m) = forms.iter().find_map(|f| match_wicks(w, f)) {
            certificates.push(format!("genus {g}: matched a Wicks form at rotation {}", m.rotation));
            return Ok(GenusResult {
                status: GenusStatus::Exact { genus: g },
                witness: Some(m.witness),
                certificates,
                conjugator,
            });
        }
        certificates.push(format!("genus {g}: all {} Wicks forms exhausted", forms.len()));
    }
    Ok(GenusResult {
        status: GenusStatus::Bounds {
            lower: g_max + 1,
            upper: None,
        },
        witness: None,
        certificates,
        conjugator,
    })
}

/// Look for `w = [x₁,y₁]···[x_g,y_g]`.
///
/// Iterative deepening on `L`: the first `g − 1` pairs range over words of
/// length `≤ L`, pruned when the remainder is longer than the remaining
/// commutators could be. The last pair is solved exactly: for each `x` with
/// `|x| ≤ L`, `y` must conjugate `x⁻¹` to `x⁻¹ r`, which is a cyclic-word
/// comparison; the shortest such `y` is kept when `|y| ≤ len_budget`.
pub fn genus_upper_search(w: &Word, g: u32, len_budget: usize) -> Option<CommutatorWitness> {
    if g == 0 {
        return w.is_identity().then(|| CommutatorWitness { tuple: Vec::new() });
    }
    if w.is_identity() {
        return Some(CommutatorWitness {
            tuple: vec![Word::identity(); 2 * g as usize],
        });
    }
    let rank = w.max_generator().max(1);
    let words: Vec<Word> = enumerate_words(rank, len_budget).collect();
    let first_l = if g == 1 { len_budget } else { 0 };
    for l in first_l..=len_budget {
        let upto = words.partition_point(|x| x.len() <= l);
        let pool = &words[..upto];
        let mut prefix = Vec::new();
        if let Some(t) = search_pairs(w, g as usize, l, len_budget, pool, &mut prefix) {
            let witness = CommutatorWitness { tuple: t }.simplified();
            assert!(witness.verifies(w), "tuple search produced a bad witness");
            return Some(witness);
        }
    }
    None
}

fn search_pairs(r: &Word, pairs: usize, l: usize, budget: usize, pool: &[Word], prefix: &mut Vec<Word>) -> Option<Vec<Word>> {
    if pairs == 1 {
        return solve_last_pair(r, pool, budget).map(|(x, y)| {
            let mut t = prefix.clone();
            t.extend([x, y]);
            t
        });
    }
    for x in pool {
        for y in pool {
            let rest = Word::commutator(x, y).inverse().mul(r);
            if rest.len() > 4 * l * (pairs - 1) && rest.len() > 4 * budget {
                continue;
            }
            prefix.extend([x.clone(), y.clone()]);
            if let Some(t) = search_pairs(&rest, pairs - 1, l, budget, pool, prefix) {
                return Some(t);
            }
            prefix.truncate(prefix.len() - 2);
        }
    }
    None
}

/// Some `(x, y)` with `[x, y] = r`, `x` from `pool`.
fn solve_last_pair(r: &Word, pool: &[Word], budget: usize) -> Option<(Word, Word)> {
    for x in pool {
        if x.is_identity() {
            if r.is_identity() {
                return Some((Word::identity(), Word::identity()));
            }
            continue;
        }
        let a = x.inverse();
        let t = a.mul(r);
        if let Some(y) = shortest_conjugator(&a, &t) {
            if y.len() <= budget {
                return Some((x.clone(), y));
            }
        }
    }
    None
}

/// Shortest `y` with `y a y⁻¹ = t`, if conjugate; `a` nontrivial.
pub fn shortest_conjugator(a: &Word, t: &Word) -> Option<Word> {
    let (core_a, c1) = a.cyclic_core();
    let (core_t, c2) = t.cyclic_core();
    if core_a.len() != core_t.len() {
        return None;
    }
    let k = (0..core_a.len()).find(|&k| core_a.rotate(k) == core_t)?;
    let y0 = c2.mul(&core_a.prefix(k).inverse()).mul(&c1.inverse());
    let (root, _) = a.primitive_root().ok()?;
    let (root_core, _) = root.cyclic_core();
    let window = (2 * y0.len() / root_core.len().max(1) + 1) as i64;
    let y = (-window..=window)
        .map(|m| y0.mul(&root.pow(m)))
        .min_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)))
        .expect("window nonempty");
    debug_assert_eq!(a.conjugate_by(&y), *t);
    Some(y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub p: u32,
    pub result: GenusResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubadditivityCheck {
    pub p: u32,
    pub q: u32,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    pub subadditivity: Vec<SubadditivityCheck>,
}

impl GrowthTable {
    pub fn values(&self) -> Vec<Option<u32>> {
        self.rows.iter().map(|r| r.result.exact()).collect()
    }

    pub fn subadditive(&self) -> bool {
        self.subadditivity.iter().all(|c| c.holds)
    }
}

/// Genus of `w^p` for `p = 1..=p_max`. Where Wicks matching is exhausted,
/// witnesses for `w^a` and `w^b` with `a + b = p` are concatenated for an
/// upper bound, which becomes exact when it meets the lower bound.
pub fn genus_growth(w: &Word, p_max: u32, g_max: u32, opts: &WicksOptions) -> Result<GrowthTable, GenusError> {
    check_commutator_subgroup(w)?;
    if w.is_identity() {
        return Err(GenusError::Domain("growth of the identity is trivially zero".into()));
    }
    let mut rows: Vec<GrowthRow> = Vec::new();
    for p in 1..=p_max {
        let wp = w.pow(p as i64);
        let mut result = genus_exact(&wp, g_max, opts)?;
        if result.exact().is_none() {
            let best = (1..p)
                .filter_map(|a| {
                    let x = rows[a as usize - 1].result.witness.as_ref()?;
                    let y = rows[(p - a) as usize - 1].result.witness.as_ref()?;
                    Some((a, x.concat(y)))
                })
                .min_by_key(|(_, c)| c.genus());
            if let Some((a, composed)) = best {
                assert!(composed.verifies(&wp), "composed witness must reduce to w^p");
                let upper = composed.genus();
                result.certificates.push(format!(
                    "upper bound {upper} by composing the witnesses for p = {a} and p = {}",
                    p - a
                ));
                result.status = if upper == result.lower() {
                    GenusStatus::Exact { genus: upper }
                } else {
                    GenusStatus::Bounds {
                        lower: result.lower(),
                        upper: Some(upper),
                    }
                };
                result.witness = Some(composed);
            }
        }
        rows.push(GrowthRow { p, result });
    }
    let mut subadditivity = Vec::new();
    for p in 1..=p_max {
        for q in p..=p_max - p {
            let get = |k: u32| rows[k as usize - 1].result.exact();
            if let (Some(a), Some(b), Some(c)) = (get(p), get(q), get(p + q)) {
                subadditivity.push(SubadditivityCheck { p, q, holds: c <= a + b });
            }
        }
    }
    Ok(GrowthTable { rows, subadditivity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn mem() -> WicksOptions {
        WicksOptions::default()
    }

    #[test]
    fn genus_one_has_a_single_form() {
        let forms = enumerate_wicks_forms(1, &mem()).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].to_text(), "xyzXYZ");
        assert!(enumerate_wicks_forms(0, &mem()).unwrap().is_empty());
        assert!(matches!(enumerate_wicks_forms(3, &mem()), Err(GenusError::Unsupported { genus: 3, .. })));
        assert!(matches!(enumerate_wicks_forms(4, &mem()), Err(GenusError::Unsupported { genus: 4, .. })));
    }

    #[test]
    fn matching_examples() {
        let forms = enumerate_wicks_forms(1, &mem()).unwrap();
        let f = &forms[0];
        let m = match_wicks(&w("abAB"), f).unwrap();
        assert_eq!(m.witness.tuple, vec![w("ab"), w("A")]);
        assert_eq!((m.rotation, m.inverted), (0, false));
        let m = match_wicks(&w("aabbAABB"), f).unwrap();
        assert!(m.witness.verifies(&w("aabbAABB")));
        assert!(match_wicks(&w("abABabAB"), f).is_none());
        let m = match_wicks(&Word::identity(), f).unwrap();
        assert!(m.witness.tuple.iter().all(Word::is_identity));
    }

    #[test]
    fn matching_handles_conjugates() {
        let forms = enumerate_wicks_forms(1, &mem()).unwrap();
        let target = w("abAB").conjugate_by(&w("bbA"));
        let m = match_wicks(&target, &forms[0]).unwrap();
        assert!(m.witness.verifies(&target));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(genus_exact(&Word::identity(), 2, &mem()).unwrap().exact(), Some(0));
        let r = genus_exact(&w("abAB"), 2, &mem()).unwrap();
        assert_eq!(r.exact(), Some(1));
        assert!(r.witness.unwrap().verifies(&w("abAB")));
        assert!(matches!(
            genus_exact(&w("a"), 2, &mem()),
            Err(GenusError::NotInCommutatorSubgroup { .. })
        ));
        let r = genus_exact(&w("abAB"), 0, &mem()).unwrap();
        assert_eq!(r.status, GenusStatus::Bounds { lower: 1, upper: None });
    }

    #[test]
    fn upper_search_examples() {
        assert_eq!(genus_upper_search(&w("abAB"), 1, 1).unwrap().tuple, vec![w("a"), w("b")]);
        assert_eq!(
            genus_upper_search(&Word::identity(), 1, 3).unwrap().tuple,
            vec![Word::identity(), Word::identity()]
        );
        assert!(genus_upper_search(&w("abABabAB"), 1, 4).is_none());
        let t = genus_upper_search(&w("abABabAB"), 2, 2).unwrap();
        assert!(t.verifies(&w("abABabAB")));
    }

    #[test]
    fn simplification_keeps_the_product() {
        let long = CommutatorWitness {
            tuple: vec![w("abABBA"), w("aBA")],
        };
        let short = long.simplified();
        assert_eq!(short.product(), long.product());
        assert!(short.tuple.iter().map(Word::len).sum::<usize>() < 9);
        for x in enumerate_words(2, 2) {
            for y in enumerate_words(2, 2) {
                let c = CommutatorWitness { tuple: vec![x.clone(), y.clone()] };
                assert_eq!(c.simplified().product(), c.product());
            }
        }
    }

    #[test]
    fn conjugator_solver() {
        let a = w("ab");
        for y in enumerate_words(2, 3) {
            let t = a.conjugate_by(&y);
            let found = shortest_conjugator(&a, &t).unwrap();
            assert_eq!(a.conjugate_by(&found), t);
            assert!(found.len() <= y.len());
        }
        assert!(shortest_conjugator(&w("ab"), &w("aB")).is_none());
    }

    #[test]
    fn pattern_keys_identify_symmetries() {
        let base = [1, 2, 3, -1, -2, -3];
        let key = pattern_key(&base);
        let rotated = [2, 3, -1, -2, -3, 1];
        let inverted: Vec<i32> = base.iter().rev().map(|x| -x).collect();
        let relabelled = [3, 1, 2, -3, -1, -2];
        assert_eq!(pattern_key(&rotated), key);
        assert_eq!(pattern_key(&inverted), key);
        assert_eq!(pattern_key(&relabelled), key);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("quadgroup-cache-test-{}", std::process::id()));
        let forms = enumerate_wicks_forms(1, &mem()).unwrap();
        let path = cache_file(&dir, 1);
        write_cache(&path, 1, &forms).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&format!("wicks g=1 count=1 version={WICKS_VERSION}\n")));
        assert_eq!(read_cache(&path, 1).unwrap(), vec![forms[0].pattern().clone()]);
        fs::write(&path, text.replace(&format!("version={WICKS_VERSION}"), "version=0")).unwrap();
        assert!(read_cache(&path, 1).is_none());
        fs::remove_dir_all(&dir).ok();
    }

    /// Rooted one-face cubic maps: every rotation of a form or of its
    /// inverse, relabelled by first occurrence.
    fn rooted_count(forms: &[Word]) -> usize {
        let mut rooted = BTreeSet::new();
        for p in forms {
            let signed: Vec<i32> = p.letters().iter().map(|l| if l.is_inverse() { -(l.generator() as i32) } else { l.generator() as i32 }).collect();
            let inverse: Vec<i32> = signed.iter().rev().map(|x| -x).collect();
            for seq in [&signed, &inverse] {
                for r in 0..seq.len() {
                    let rotated: Vec<i32> = (0..seq.len()).map(|k| seq[(r + k) % seq.len()]).collect();
                    let mut label = HashMap::new();
                    let relabelled: Vec<i32> = rotated
                        .iter()
                        .map(|&x| {
                            let next = label.len() as i32 + 1;
                            let v = *label.entry(x.abs()).or_insert(if x > 0 { next } else { -next });
                            if x > 0 { v } else { -v }
                        })
                        .collect();
                    rooted.insert(relabelled);
                }
            }
        }
        rooted.len()
    }

    #[test]
    fn form_counts_match_rooted_map_formula() {
        // 2 (6g-3)! / (12^g g! (3g-2)!)
        let expected = |g: u64| -> usize {
            let f = |n: u64| (1..=n).product::<u64>();
            (2 * f(6 * g - 3) / (12u64.pow(g as u32) * f(g) * f(3 * g - 2))) as usize
        };
        assert_eq!(expected(1), 1);
        assert_eq!(expected(2), 105);
        for g in 1..=2 {
            let forms = generate(g);
            assert_eq!(rooted_count(&forms), expected(g as u64), "genus {g}");
        }
        assert_eq!(generate(2).len(), 8);
    }

    #[test]
    #[ignore = "genus 3 enumeration takes minutes"]
    fn genus_three_rooted_count() {
        let forms = generate(3);
        assert_eq!(rooted_count(&forms), 50050);
    }
}
