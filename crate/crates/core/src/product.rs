//! Free products of free, cyclic and finite (table) groups.
//!
//! Elements are alternating syllable sequences. Finite factors are given by
//! Cayley tables; builders cover binary dihedral groups, `S4`, `A5` and
//! direct products, which together host every exotic factor on the list of
//! groups whose free products make all surface-group homomorphisms
//! elementary. `Free` factors of any rank count as list members, since a
//! free group of rank `r` is itself a free product of `r` copies of `Z`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{FreeGroup, Group};
use crate::surface::{elementary_check, ElementaryOutcome, Piece, PinchDecomposition, SurfaceError, SurfaceHom};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("factor index {index} out of range ({count} factors)")]
    FactorIndex { index: usize, count: usize },
    #[error("invalid element for factor {factor}: {msg}")]
    InvalidElement { factor: usize, msg: String },
    #[error("invalid group spec: {0}")]
    Spec(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    name: String,
    table: Vec<Vec<u32>>,
    identity: u32,
    inverses: Vec<u32>,
    list_member: bool,
}

impl FiniteTable {
    /// Validates closure, identity, inverses and associativity (exhaustive up
    /// to 64 elements, 20 000 seeded samples above).
    pub fn new(name: impl Into<String>, table: Vec<Vec<u32>>, list_member: bool) -> Result<Self, ProductError> {
        let n = table.len();
        if n == 0 {
            return Err(ProductError::InvalidTable("empty table".into()));
        }
        if let Some(row) = table.iter().position(|r| r.len() != n) {
            return Err(ProductError::InvalidTable(format!("row {row} has wrong length")));
        }
        if table.iter().flatten().any(|&x| x as usize >= n) {
            return Err(ProductError::InvalidTable("entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| ProductError::InvalidTable("no identity".into()))? as u32;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| ProductError::InvalidTable(format!("element {x} has no inverse")))?;
            inverses.push(inv as u32);
        }
        let assoc = |a: usize, b: usize, c: usize| {
            table[table[a][b] as usize][c] == table[a][table[b][c] as usize]
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(ProductError::InvalidTable(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7AB1E);
            for _ in 0..20_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(ProductError::InvalidTable(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(FiniteTable {
            name: name.into(),
            table,
            identity,
            inverses,
            list_member,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<u32>] {
        &self.table
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn is_list_member(&self) -> bool {
        self.list_member
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    fn from_fn(name: String, n: usize, list_member: bool, mul: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| mul(a, b) as u32).collect()).collect();
        FiniteTable::new(name, table, list_member).expect("builder produces a group")
    }
}

pub fn cyclic_table(m: usize) -> FiniteTable {
    FiniteTable::from_fn(format!("cyclic:{m}"), m, true, |a, b| (a + b) % m)
}

/// Binary dihedral group of order `4n`: `x^{2n} = 1, y² = xⁿ, y x y⁻¹ = x⁻¹`.
/// Element `k + 2n·e` is `x^k y^e`.
pub fn binary_dihedral(n: usize) -> FiniteTable {
    assert!(n >= 1, "binary dihedral groups need n >= 1");
    let m = 2 * n;
    FiniteTable::from_fn(format!("binary_dihedral:{n}"), 2 * m, true, |p, q| {
        let (a, e) = (p % m, p / m);
        let (b, f) = (q % m, q / m);
        let b = if e == 1 { (m - b) % m } else { b };
        let shift = if e == 1 && f == 1 { n } else { 0 };
        (a + b + shift) % m + m * (e ^ f)
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    fn rec(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, &mut out);
    out.sort();
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_table(name: &str, perms: Vec<Vec<usize>>) -> FiniteTable {
    let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    FiniteTable::from_fn(name.to_string(), perms.len(), true, |a, b| {
        let composed: Vec<usize> = (0..perms[a].len()).map(|i| perms[a][perms[b][i]]).collect();
        index[&composed]
    })
}

pub fn symmetric_s4() -> FiniteTable {
    permutation_table("s4", permutations(4))
}

pub fn alternating_a5() -> FiniteTable {
    permutation_table("a5", permutations(5).into_iter().filter(|p| is_even(p)).collect())
}

/// `A × B` with element `(i, j)` stored at `i·|B| + j`. A list member when
/// `A` is cyclic and `B` is a list member, or the other way round.
pub fn direct_product(a: &FiniteTable, b: &FiniteTable) -> FiniteTable {
    let nb = b.order();
    let cyclic = |t: &FiniteTable| t.name.starts_with("cyclic:");
    let list = (cyclic(a) && b.list_member) || (cyclic(b) && a.list_member);
    FiniteTable::from_fn(format!("{} x {}", a.name, b.name), a.order() * nb, list, |p, q| {
        let i = a.mul((p / nb) as u32, (q / nb) as u32) as usize;
        let j = b.mul((p % nb) as u32, (q % nb) as u32) as usize;
        i * nb + j
    })
}

/// Builds a table from a name such as `s4`, `binary_dihedral:3`, or a
/// product `cyclic:2 x a5`.
pub fn named_table(name: &str) -> Result<FiniteTable, ProductError> {
    let mut parts = name.split(" x ").map(str::trim);
    let first = parts.next().ok_or_else(|| ProductError::Spec("empty name".into()))?;
    let mut acc = single_named_table(first)?;
    for p in parts {
        acc = direct_product(&acc, &single_named_table(p)?);
    }
    Ok(acc)
}

fn single_named_table(name: &str) -> Result<FiniteTable, ProductError> {
    let bad = || ProductError::Spec(format!("unknown finite group {name:?}"));
    let param = |prefix: &str| -> Result<Option<usize>, ProductError> {
        match name.strip_prefix(prefix) {
            Some(rest) => rest.parse::<usize>().map(Some).map_err(|_| bad()),
            None => Ok(None),
        }
    };
    if name == "s4" {
        return Ok(symmetric_s4());
    }
    if name == "a5" {
        return Ok(alternating_a5());
    }
    if let Some(n) = param("binary_dihedral:")? {
        if n == 0 {
            return Err(bad());
        }
        return Ok(binary_dihedral(n));
    }
    if let Some(m) = param("cyclic:")? {
        if m < 2 {
            return Err(bad());
        }
        return Ok(cyclic_table(m));
    }
    Err(bad())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorSpec {
    Free { rank: u32 },
    Cyclic { order: u32 },
    Finite(FiniteTable),
}

impl FactorSpec {
    pub fn is_list_member(&self) -> bool {
        match self {
            FactorSpec::Free { .. } | FactorSpec::Cyclic { .. } => true,
            FactorSpec::Finite(t) => t.list_member,
        }
    }

    fn identity(&self) -> FactorElem {
        match self {
            FactorSpec::Free { .. } => FactorElem::Word(Word::identity()),
            FactorSpec::Cyclic { .. } => FactorElem::Index(0),
            FactorSpec::Finite(t) => FactorElem::Index(t.identity),
        }
    }

    fn is_identity(&self, a: &FactorElem) -> bool {
        *a == self.identity()
    }

    fn mul(&self, a: &FactorElem, b: &FactorElem) -> FactorElem {
        match (self, a, b) {
            (FactorSpec::Free { .. }, FactorElem::Word(x), FactorElem::Word(y)) => FactorElem::Word(x.mul(y)),
            (FactorSpec::Cyclic { order }, FactorElem::Index(x), FactorElem::Index(y)) => {
                FactorElem::Index((x + y) % order)
            }
            (FactorSpec::Finite(t), FactorElem::Index(x), FactorElem::Index(y)) => FactorElem::Index(t.mul(*x, *y)),
            _ => panic!("factor element of the wrong kind"),
        }
    }

    fn inverse(&self, a: &FactorElem) -> FactorElem {
        match (self, a) {
            (FactorSpec::Free { .. }, FactorElem::Word(x)) => FactorElem::Word(x.inverse()),
            (FactorSpec::Cyclic { order }, FactorElem::Index(x)) => FactorElem::Index((order - x) % order),
            (FactorSpec::Finite(t), FactorElem::Index(x)) => FactorElem::Index(t.inverse(*x)),
            _ => panic!("factor element of the wrong kind"),
        }
    }

    fn validate(&self, factor: usize, a: &FactorElem) -> Result<(), ProductError> {
        let err = |msg: String| ProductError::InvalidElement { factor, msg };
        match (self, a) {
            (FactorSpec::Free { rank }, FactorElem::Word(w)) => w.check_rank(*rank).map_err(|e| err(e.to_string())),
            (FactorSpec::Cyclic { order }, FactorElem::Index(k)) if k < order => Ok(()),
            (FactorSpec::Finite(t), FactorElem::Index(k)) if (*k as usize) < t.order() => Ok(()),
            (FactorSpec::Free { .. }, _) => Err(err("expected a word".into())),
            _ => Err(err(format!("index {a} out of range"))),
        }
    }

    fn parse(&self, factor: usize, text: &str) -> Result<FactorElem, ProductError> {
        let elem = match self {
            FactorSpec::Free { .. } => {
                FactorElem::Word(Word::parse(text).map_err(|e| ProductError::Parse(e.to_string()))?)
            }
            _ => FactorElem::Index(
                text.trim()
                    .parse()
                    .map_err(|_| ProductError::Parse(format!("expected an element index, got {text:?}")))?,
            ),
        };
        self.validate(factor, &elem)?;
        Ok(elem)
    }

    /// Every element, for finite factors.
    fn elements(&self) -> Option<Vec<FactorElem>> {
        match self {
            FactorSpec::Free { .. } => None,
            FactorSpec::Cyclic { order } => Some((0..*order).map(FactorElem::Index).collect()),
            FactorSpec::Finite(t) => Some((0..t.order() as u32).map(FactorElem::Index).collect()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FactorSpec::Free { rank } => json!({"type": "free", "rank": rank}),
            FactorSpec::Cyclic { order } => json!({"type": "cyclic", "order": order}),
            FactorSpec::Finite(t) => json!({
                "type": "finite",
                "name": t.name,
                "table": t.table,
                "list_member": t.list_member,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorElem {
    Word(Word),
    Index(u32),
}

impl fmt::Display for FactorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorElem::Word(w) => write!(f, "{w}"),
            FactorElem::Index(k) => write!(f, "{k}"),
        }
    }
}

/// Alternating sequence of nontrivial syllables `(factor, element)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ProductElement {
    syllables: Vec<(usize, FactorElem)>,
}

impl ProductElement {
    pub fn identity() -> Self {
        ProductElement::default()
    }

    pub fn syllables(&self) -> &[(usize, FactorElem)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGroup {
    factors: Vec<FactorSpec>,
}

impl ProductGroup {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self, ProductError> {
        if factors.is_empty() {
            return Err(ProductError::Spec("a free product needs at least one factor".into()));
        }
        Ok(ProductGroup { factors })
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    /// Off-list factors, by index.
    pub fn off_list_factors(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| !self.factors[i].is_list_member()).collect()
    }

    /// Free reduction of raw syllables: merge equal-factor neighbours, drop
    /// identities, repeat to a fixpoint (a single stack pass suffices).
    pub fn normal_form(&self, raw: &[(usize, FactorElem)]) -> Result<ProductElement, ProductError> {
        for (f, e) in raw {
            let spec = self.factors.get(*f).ok_or(ProductError::FactorIndex {
                index: *f,
                count: self.factors.len(),
            })?;
            spec.validate(*f, e)?;
        }
        Ok(self.merge(raw.iter().cloned()))
    }

    fn merge(&self, raw: impl IntoIterator<Item = (usize, FactorElem)>) -> ProductElement {
        let mut stack: Vec<(usize, FactorElem)> = Vec::new();
        for (f, e) in raw {
            let spec = &self.factors[f];
            match stack.last_mut() {
                Some((top, elem)) if *top == f => {
                    let merged = spec.mul(elem, &e);
                    if spec.is_identity(&merged) {
                        stack.pop();
                    } else {
                        *elem = merged;
                    }
                }
                _ => {
                    if !spec.is_identity(&e) {
                        stack.push((f, e));
                    }
                }
            }
        }
        ProductElement { syllables: stack }
    }

    pub fn syllable(&self, factor: usize, e: FactorElem) -> Result<ProductElement, ProductError> {
        self.normal_form(&[(factor, e)])
    }

    /// `x = c · g · c⁻¹` with `g` in a single factor and `c` cyclically reducing.
    fn cyclic_syllable_reduce(&self, x: &ProductElement) -> (ProductElement, ProductElement) {
        let mut core = x.clone();
        let mut conj = ProductElement::identity();
        while core.len() >= 2 && core.syllables[0].0 == core.syllables[core.len() - 1].0 {
            let first = ProductElement {
                syllables: vec![core.syllables[0].clone()],
            };
            core = self.conjugate(&core, &self.inverse(&first));
            conj = self.mul(&conj, &first);
        }
        (core, conj)
    }

    /// The factor containing a conjugate of `x`, that conjugate, and `c` with
    /// `x = c · g · c⁻¹`. The identity reports factor 0.
    pub fn conjugate_into_factor(&self, x: &ProductElement) -> Option<(usize, FactorElem, ProductElement)> {
        if x.is_empty() {
            return Some((0, self.factors[0].identity(), ProductElement::identity()));
        }
        let (core, conj) = self.cyclic_syllable_reduce(x);
        if core.len() == 1 {
            let (f, g) = core.syllables[0].clone();
            Some((f, g, conj))
        } else {
            None
        }
    }

    pub fn parse(&self, text: &str) -> Result<ProductElement, ProductError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(ProductElement::identity());
        }
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            let (f, e) = token
                .split_once(':')
                .ok_or_else(|| ProductError::Parse(format!("expected factor:element, got {token:?}")))?;
            let f: usize = f.parse().map_err(|_| ProductError::Parse(format!("bad factor index {f:?}")))?;
            let spec = self.factors.get(f).ok_or(ProductError::FactorIndex {
                index: f,
                count: self.factors.len(),
            })?;
            raw.push((f, spec.parse(f, e)?));
        }
        self.normal_form(&raw)
    }

    pub fn format(&self, x: &ProductElement) -> String {
        if x.is_empty() {
            return "1".into();
        }
        x.syllables.iter().map(|(f, e)| format!("{f}:{e}")).collect::<Vec<_>>().join(" ")
    }

    /// Syllable-array JSON: `[[factor, "element"], ...]`.
    pub fn element_to_json(&self, x: &ProductElement) -> Value {
        Value::Array(x.syllables.iter().map(|(f, e)| json!([f, e.to_string()])).collect())
    }

    pub fn element_from_json(&self, v: &Value) -> Result<ProductElement, ProductError> {
        match v {
            Value::String(s) => self.parse(s),
            Value::Array(items) => {
                let mut raw = Vec::new();
                for item in items {
                    let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        ProductError::Parse("syllables are [factor, element] pairs".into())
                    })?;
                    let f = pair[0].as_u64().ok_or_else(|| ProductError::Parse("factor must be an index".into()))?
                        as usize;
                    let spec = self.factors.get(f).ok_or(ProductError::FactorIndex {
                        index: f,
                        count: self.factors.len(),
                    })?;
                    let text = match &pair[1] {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(ProductError::Parse("element must be a string or index".into())),
                    };
                    raw.push((f, spec.parse(f, &text)?));
                }
                self.normal_form(&raw)
            }
            _ => Err(ProductError::Parse("expected a syllable array or string".into())),
        }
    }

    /// Every element of syllable length at most `max_len` when all factors are
    /// finite, in a fixed order.
    pub fn enumerate_finite(&self, max_len: usize) -> Option<Vec<ProductElement>> {
        let elems: Vec<Vec<FactorElem>> = self
            .factors
            .iter()
            .map(|f| f.elements().map(|es| es.into_iter().filter(|e| !f.is_identity(e)).collect()))
            .collect::<Option<_>>()?;
        let mut out = vec![ProductElement::identity()];
        let mut layer = vec![ProductElement::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &layer {
                let last = x.syllables.last().map(|s| s.0);
                for (f, es) in elems.iter().enumerate() {
                    if Some(f) == last {
                        continue;
                    }
                    for e in es {
                        let mut s = x.syllables.clone();
                        s.push((f, e.clone()));
                        next.push(ProductElement { syllables: s });
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Some(out)
    }
}

impl Group for ProductGroup {
    type Elem = ProductElement;

    fn identity(&self) -> ProductElement {
        ProductElement::identity()
    }

    fn mul(&self, a: &ProductElement, b: &ProductElement) -> ProductElement {
        self.merge(a.syllables.iter().chain(b.syllables.iter()).cloned())
    }

    fn inverse(&self, a: &ProductElement) -> ProductElement {
        ProductElement {
            syllables: a
                .syllables
                .iter()
                .rev()
                .map(|(f, e)| (*f, self.factors[*f].inverse(e)))
                .collect(),
        }
    }

    fn length(&self, a: &ProductElement) -> usize {
        a.len()
    }

    fn cyclic_normalizers(&self, a: &ProductElement) -> Vec<ProductElement> {
        let (core, conj) = self.cyclic_syllable_reduce(a);
        match core.len() {
            0 => vec![ProductElement::identity()],
            1 => {
                let (f, g) = &core.syllables[0];
                let inner: Vec<ProductElement> = match (&self.factors[*f], g) {
                    (FactorSpec::Free { rank }, FactorElem::Word(w)) => FreeGroup::new(*rank)
                        .cyclic_normalizers(w)
                        .into_iter()
                        .map(|t| self.merge([(*f, FactorElem::Word(t))]))
                        .collect(),
                    // Finite factors: the whole factor, which contains the centralizer.
                    (spec, _) => spec
                        .elements()
                        .expect("finite")
                        .into_iter()
                        .map(|t| self.merge([(*f, t)]))
                        .collect(),
                };
                let c_inv = self.inverse(&conj);
                inner.into_iter().map(|t| self.mul(&t, &c_inv)).collect()
            }
            n => (0..n)
                .map(|k| {
                    let prefix = ProductElement {
                        syllables: core.syllables[..k].to_vec(),
                    };
                    self.inverse(&self.mul(&conj, &prefix))
                })
                .collect(),
        }
    }

    fn factor_of(&self, a: &ProductElement) -> Option<usize> {
        match a.len() {
            0 => Some(0),
            1 => Some(a.syllables[0].0),
            _ => None,
        }
    }

    fn common_factor_conjugator(&self, elems: &[ProductElement]) -> Option<(usize, ProductElement)> {
        let Some(first) = elems.iter().find(|e| !e.is_empty()) else {
            return Some((0, ProductElement::identity()));
        };
        let (factor, _, z) = self.conjugate_into_factor(first)?;
        let z_inv = self.inverse(&z);
        elems
            .iter()
            .all(|e| {
                let c = self.conjugate(e, &z_inv);
                c.is_empty() || (c.len() == 1 && c.syllables[0].0 == factor)
            })
            .then_some((factor, z))
    }

    fn centralizer_root(&self, a: &ProductElement) -> Option<ProductElement> {
        let (core, conj) = self.cyclic_syllable_reduce(a);
        let n = core.len();
        let root = match n {
            0 => return None,
            1 => match &core.syllables[0] {
                (f, FactorElem::Word(w)) => {
                    let (r, _) = w.primitive_root().ok()?;
                    self.merge([(*f, FactorElem::Word(r))])
                }
                _ => return None,
            },
            _ => {
                let period = (1..=n)
                    .find(|&d| n % d == 0 && (d..n).all(|i| core.syllables[i] == core.syllables[i - d]))
                    .unwrap_or(n);
                ProductElement {
                    syllables: core.syllables[..period].to_vec(),
                }
            }
        };
        Some(self.conjugate(&root, &conj))
    }

    fn parse_elem(&self, text: &str) -> Result<ProductElement, String> {
        self.parse(text).map_err(|e| e.to_string())
    }

    fn format_elem(&self, a: &ProductElement) -> String {
        self.format(a)
    }
}

/// Group descriptor from JSON. A top-level `free` spec is the free group
/// itself; everything else becomes a free product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Free { rank: u32 },
    Product(ProductGroup),
}

impl GroupSpec {
    pub fn from_json(v: &Value) -> Result<Self, ProductError> {
        let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| ProductError::Spec("missing \"type\"".into()))?;
        if kind == "free" {
            let rank = positive(v, "rank")?;
            return Ok(GroupSpec::Free { rank });
        }
        let mut factors = Vec::new();
        collect_factors(v, &mut factors)?;
        Ok(GroupSpec::Product(ProductGroup::new(factors)?))
    }

    pub fn parse(text: &str) -> Result<Self, ProductError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ProductError::Spec(e.to_string()))?;
        GroupSpec::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupSpec::Free { rank } => json!({"type": "free", "rank": rank}),
            GroupSpec::Product(p) => json!({
                "type": "product",
                "factors": p.factors.iter().map(FactorSpec::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

fn positive(v: &Value, key: &str) -> Result<u32, ProductError> {
    v.get(key)
        .and_then(Value::as_u64)
        .filter(|&x| x >= 1 && x <= u32::MAX as u64)
        .map(|x| x as u32)
        .ok_or_else(|| ProductError::Spec(format!("\"{key}\" must be a positive integer")))
}

fn collect_factors(v: &Value, out: &mut Vec<FactorSpec>) -> Result<(), ProductError> {
    let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| ProductError::Spec("missing \"type\"".into()))?;
    match kind {
        "free" => out.push(FactorSpec::Free { rank: positive(v, "rank")? }),
        "cyclic" => {
            let order = positive(v, "order")?;
            if order < 2 {
                return Err(ProductError::Spec("cyclic order must be at least 2".into()));
            }
            out.push(FactorSpec::Cyclic { order });
        }
        "finite" => {
            let name = v.get("name").and_then(Value::as_str).unwrap_or("table");
            let table = match v.get("table") {
                Some(t) => {
                    let table: Vec<Vec<u32>> =
                        serde_json::from_value(t.clone()).map_err(|e| ProductError::Spec(e.to_string()))?;
                    let list = v.get("list_member").and_then(Value::as_bool).unwrap_or(false);
                    FiniteTable::new(name, table, list)?
                }
                None => named_table(name)?,
            };
            out.push(FactorSpec::Finite(table));
        }
        "product" => {
            let factors = v
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| ProductError::Spec("product needs \"factors\"".into()))?;
            for f in factors {
                collect_factors(f, out)?;
            }
        }
        other => return Err(ProductError::Spec(format!("unknown group type {other:?}"))),
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CheckItem {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    fn push(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.items.push(CheckItem {
            check: check.into(),
            passed,
            detail: detail.into(),
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("decomposition source {found} does not match homomorphism source {expected}")]
pub struct SpecMismatch {
    pub expected: String,
    pub found: String,
}

/// Itemized check of a decomposition against the homomorphism it claims to
/// decompose: (a) recomposition, (b) surface pieces lie in one factor after
/// conjugation, (c) circles unconstrained, (d) projective pieces have order
/// at most 2.
pub fn verify_decomposition<G: Group>(
    hom: &SurfaceHom<G>,
    dec: &PinchDecomposition<G::Elem>,
) -> Result<VerificationReport, SpecMismatch> {
    if hom.spec() != dec.source() {
        return Err(SpecMismatch {
            expected: hom.spec().to_string(),
            found: dec.source().to_string(),
        });
    }
    let g = hom.group();
    let mut report = VerificationReport { items: Vec::new() };

    let recomposed = dec.recompose(g);
    let bad: Vec<usize> = (0..hom.images().len()).filter(|&j| recomposed[j] != hom.images()[j]).collect();
    report.push(
        "recomposition",
        bad.is_empty(),
        if bad.is_empty() {
            "all generators agree".to_string()
        } else {
            format!("generators {bad:?} differ")
        },
    );

    let mut straddling = Vec::new();
    let mut circles = 0;
    let mut bad_projective = Vec::new();
    for (k, piece) in dec.pieces().iter().enumerate() {
        match piece {
            Piece::Surface { images, .. } => {
                let factors: Vec<Option<usize>> =
                    images.iter().filter(|e| !g.is_identity(e)).map(|e| g.factor_of(e)).collect();
                let single = factors.iter().all(|f| f.is_some() && *f == factors[0]);
                if !single {
                    straddling.push(k);
                }
            }
            Piece::Circle { .. } => circles += 1,
            Piece::Projective { image, .. } => {
                if !g.is_identity(&g.mul(image, image)) {
                    bad_projective.push(k);
                }
            }
        }
    }
    report.push(
        "surface pieces in one factor",
        straddling.is_empty(),
        if straddling.is_empty() {
            "every surface piece lies in a single factor".to_string()
        } else {
            format!("pieces {straddling:?} straddle factors")
        },
    );
    report.push("circle pieces", true, format!("{circles} circle pieces, unconstrained"));
    report.push(
        "projective pieces of order at most 2",
        bad_projective.is_empty(),
        if bad_projective.is_empty() {
            "ok".to_string()
        } else {
            format!("pieces {bad_projective:?} have order above 2")
        },
    );
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialClassification {
    pub outcome: ElementaryOutcome<ProductElement>,
    /// Factors off the list; when nonempty a certificate is still valid but
    /// none is guaranteed to exist.
    pub off_list: Vec<usize>,
}

impl SpecialClassification {
    pub fn guaranteed(&self) -> bool {
        self.off_list.is_empty()
    }
}

/// [`elementary_check`] over a free product, recording whether every factor
/// is one for which all such homomorphisms are known to be elementary.
pub fn classify_special(hom: &SurfaceHom<ProductGroup>, budget: usize) -> Result<SpecialClassification, SurfaceError> {
    let off_list = hom.group().off_list_factors();
    let outcome = elementary_check(hom, budget)?;
    Ok(SpecialClassification { outcome, off_list })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2z3() -> ProductGroup {
        ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 3 }]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let g = z2z3();
        let e = g.normal_form(&[(1, FactorElem::Index(1)), (1, FactorElem::Index(2))]).unwrap();
        assert!(e.is_empty());

        let h = ProductGroup::new(vec![FactorSpec::Free { rank: 1 }, FactorSpec::Cyclic { order: 2 }]).unwrap();
        let a = FactorElem::Word(Word::parse("a").unwrap());
        let a_inv = FactorElem::Word(Word::parse("A").unwrap());
        let e = h
            .normal_form(&[(0, a), (1, FactorElem::Index(1)), (1, FactorElem::Index(1)), (0, a_inv)])
            .unwrap();
        assert!(e.is_empty());

        let x = g
            .normal_form(&[(0, FactorElem::Index(1)), (1, FactorElem::Index(1)), (0, FactorElem::Index(1))])
            .unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(g.format(&x), "0:1 1:1 0:1");
        assert!(g.normal_form(&[(1, FactorElem::Index(3))]).is_err());
        assert!(g.normal_form(&[(2, FactorElem::Index(0))]).is_err());
    }

    #[test]
    fn conjugate_into_factor_examples() {
        let g = z2z3();
        assert_eq!(
            g.conjugate_into_factor(&ProductElement::identity()),
            Some((0, FactorElem::Index(0), ProductElement::identity()))
        );
        let z = g.parse("1:1 0:1").unwrap();
        let s = g.parse("1:1").unwrap();
        let x = g.conjugate(&s, &z);
        let (f, e, c) = g.conjugate_into_factor(&x).unwrap();
        assert_eq!((f, e), (1, FactorElem::Index(1)));
        assert_eq!(c, z);
        assert_eq!(g.conjugate(&s, &c), x);
        assert_eq!(g.conjugate_into_factor(&g.parse("0:1 1:1").unwrap()), None);
    }

    #[test]
    fn tables_are_groups() {
        assert_eq!(binary_dihedral(1).order(), 4);
        assert_eq!(binary_dihedral(2).order(), 8);
        assert_eq!(binary_dihedral(3).order(), 12);
        assert_eq!(symmetric_s4().order(), 24);
        assert_eq!(alternating_a5().order(), 60);
        let p = direct_product(&cyclic_table(2), &binary_dihedral(2));
        assert_eq!(p.order(), 16);
        assert!(p.is_list_member());
        // Rebuilding through the validating constructor must succeed.
        for t in [binary_dihedral(5), symmetric_s4(), alternating_a5(), direct_product(&cyclic_table(3), &alternating_a5())] {
            FiniteTable::new(t.name.clone(), t.table.clone(), true).unwrap();
        }
    }

    #[test]
    fn binary_dihedral_relations() {
        for n in 1..6usize {
            let t = binary_dihedral(n);
            let x = 1u32;
            let y = 2 * n as u32;
            let pow = |g: u32, k: usize| (0..k).fold(t.identity(), |acc, _| t.mul(acc, g));
            assert_eq!(pow(x, 2 * n), t.identity());
            assert_eq!(t.mul(y, y), pow(x, n));
            assert_eq!(t.mul(t.mul(y, x), t.inverse(y)), t.inverse(x));
        }
        // Q8 has a unique element of order 2.
        let q8 = binary_dihedral(2);
        let involutions = (0..8).filter(|&g| g != q8.identity() && q8.mul(g, g) == q8.identity()).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteTable::new("t", vec![vec![0, 1], vec![1, 1]], false).is_err());
        assert!(FiniteTable::new("t", vec![vec![0, 1]], false).is_err());
        assert!(FiniteTable::new("t", vec![vec![1, 0], vec![0, 0]], false).is_err());
    }

    #[test]
    fn json_specs() {
        let spec = GroupSpec::parse(r#"{"type":"product","factors":[{"type":"cyclic","order":2},{"type":"cyclic","order":3}]}"#)
            .unwrap();
        assert_eq!(spec, GroupSpec::Product(z2z3()));
        assert_eq!(GroupSpec::parse(&spec.to_json().to_string()).unwrap(), spec);
        assert_eq!(GroupSpec::parse(r#"{"type":"free","rank":2}"#).unwrap(), GroupSpec::Free { rank: 2 });
        let named = GroupSpec::parse(r#"{"type":"finite","name":"cyclic:2 x binary_dihedral:3"}"#).unwrap();
        let GroupSpec::Product(p) = named else { panic!() };
        assert!(p.off_list_factors().is_empty());
        let custom = GroupSpec::parse(r#"{"type":"finite","name":"t","table":[[0,1],[1,0]]}"#).unwrap();
        let GroupSpec::Product(p) = custom else { panic!() };
        assert_eq!(p.off_list_factors(), vec![0]);
        assert!(GroupSpec::parse(r#"{"type":"cyclic","order":1}"#).is_err());

        let g = z2z3();
        let x = g.parse("0:1 1:2").unwrap();
        assert_eq!(g.element_from_json(&g.element_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn free_factor_matches_words() {
        let g = ProductGroup::new(vec![FactorSpec::Free { rank: 2 }]).unwrap();
        let f = FreeGroup::new(2);
        let words: Vec<Word> = crate::words::enumerate_words(2, 3).collect();
        for u in &words {
            for v in &words {
                let pu = g.merge([(0, FactorElem::Word(u.clone()))]);
                let pv = g.merge([(0, FactorElem::Word(v.clone()))]);
                let expected = f.mul(u, v);
                let got = g.mul(&pu, &pv);
                assert_eq!(got, g.merge([(0, FactorElem::Word(expected))]));
            }
        }
    }

    #[test]
    fn centralizer_roots() {
        let g = z2z3();
        let x = g.parse("0:1 1:1 0:1 1:1").unwrap();
        assert_eq!(g.centralizer_root(&x), Some(g.parse("0:1 1:1").unwrap()));
        assert_eq!(g.centralizer_root(&g.parse("1:1").unwrap()), None);
    }

    #[test]
    fn classify_special_examples() {
        use crate::surface::SurfaceGroupSpec;
        let g = ProductGroup::new(vec![FactorSpec::Cyclic { order: 3 }, FactorSpec::Free { rank: 1 }]).unwrap();
        let e = |t: &str| g.parse(t).unwrap();
        let hom = SurfaceHom::new(SurfaceGroupSpec::orientable(1), vec![e("0:1"), e("0:2")], g.clone()).unwrap();
        let c = classify_special(&hom, 1000).unwrap();
        assert!(c.guaranteed());
        let ElementaryOutcome::Certificate { certificate, .. } = c.outcome else {
            panic!("expected a certificate");
        };
        assert!(certificate.replays(&g, hom.images()));
        assert!(certificate.terminal[0].is_empty());

        let h = z2z3();
        let e = |t: &str| h.parse(t).unwrap();
        let id = ProductElement::identity();
        let hom = SurfaceHom::new(SurfaceGroupSpec::orientable(2), vec![id.clone(), e("0:1"), id, e("1:1")], h.clone()).unwrap();
        let ElementaryOutcome::Certificate { certificate, .. } = classify_special(&hom, 10).unwrap().outcome else {
            panic!("expected a certificate");
        };
        assert!(certificate.moves.is_empty());

        let x = e("0:1 1:2");
        let hom = SurfaceHom::new(SurfaceGroupSpec::orientable(1), vec![x.clone(), h.inverse(&x)], h.clone()).unwrap();
        assert!(matches!(classify_special(&hom, 100).unwrap().outcome, ElementaryOutcome::Certificate { .. }));

        let klein_four = FiniteTable::new("V4", vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]], false).unwrap();
        let off = ProductGroup::new(vec![FactorSpec::Finite(klein_four), FactorSpec::Cyclic { order: 2 }]).unwrap();
        let hom = SurfaceHom::new(SurfaceGroupSpec::orientable(1), vec![ProductElement::identity(); 2], off).unwrap();
        assert!(!classify_special(&hom, 10).unwrap().guaranteed());
    }

    #[test]
    fn tuple_key_sees_torsion_centralizers() {
        let g = z2z3();
        let (s, t) = (g.parse("0:1").unwrap(), g.parse("1:1").unwrap());
        let moved = vec![s.clone(), g.conjugate(&t, &s)];
        let key = crate::group::tuple_conjugacy_key(&g, &[s, t]);
        assert_eq!(crate::group::tuple_conjugacy_key(&g, &moved), key);
    }
}
