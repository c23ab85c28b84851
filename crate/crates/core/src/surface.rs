//! Homomorphisms from surface groups, the relator-preserving moves acting on
//! their generator images, and searches over the resulting orbits.
//!
//! Orientable genus `g` uses generators `u1 v1 … ug vg` with relator
//! `[u1,v1]···[ug,vg]`; non-orientable genus `g` uses `V1 … Vg` with relator
//! `V1²···Vg²`. Image tuples are stored in that order.
//!
//! Every move replaces a block of adjacent slots by words in the old slots
//! and preserves the product of the local relator factors exactly, so it
//! preserves the full relator. Searches are breadth-first in the fixed order
//! of [`generating_moves`]; absence of a result within budget is never a
//! proof of anything.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{tuple_conjugacy_key, FreeGroup, Group};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("relator evaluates to {value}, not the identity")]
    Relator { value: String },
    #[error("expected {expected} images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{0}")]
    Capability(String),
    #[error("invalid surface: {0}")]
    Spec(String),
    #[error("cannot decode move: {0}")]
    Decode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceGroupSpec {
    pub genus: u32,
    pub orientable: bool,
}

impl SurfaceGroupSpec {
    pub fn new(genus: u32, orientable: bool) -> Result<Self, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::Spec("genus must be at least 1".into()));
        }
        Ok(SurfaceGroupSpec { genus, orientable })
    }

    pub fn orientable(genus: u32) -> Self {
        SurfaceGroupSpec::new(genus, true).expect("positive genus")
    }

    pub fn non_orientable(genus: u32) -> Self {
        SurfaceGroupSpec::new(genus, false).expect("positive genus")
    }

    pub fn n_generators(&self) -> usize {
        if self.orientable {
            2 * self.genus as usize
        } else {
            self.genus as usize
        }
    }

    /// The defining relator over generators `1..=n_generators`.
    pub fn relator(&self) -> Word {
        let mut signed = Vec::new();
        for i in 0..self.genus as i32 {
            if self.orientable {
                signed.extend([2 * i + 1, 2 * i + 2, -(2 * i + 1), -(2 * i + 2)]);
            } else {
                signed.extend([i + 1, i + 1]);
            }
        }
        Word::from_signed(&signed)
    }

    pub fn generator_names(&self) -> Vec<String> {
        if self.orientable {
            (1..=self.genus).flat_map(|i| [format!("u{i}"), format!("v{i}")]).collect()
        } else {
            (1..=self.genus).map(|i| format!("V{i}")).collect()
        }
    }

    pub fn surface_type(&self) -> SurfaceType {
        SurfaceType {
            genus: self.genus,
            orientable: self.orientable,
        }
    }
}

impl fmt::Display for SurfaceGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.surface_type().fmt(f)
    }
}

/// A closed surface, genus 0 allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: u32,
    pub orientable: bool,
}

impl SurfaceType {
    pub fn euler_characteristic(&self) -> i64 {
        if self.orientable {
            2 - 2 * self.genus as i64
        } else {
            2 - self.genus as i64
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.orientable { "orientable" } else { "non-orientable" };
        write!(f, "{kind} genus {}", self.genus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceHom<G: Group> {
    spec: SurfaceGroupSpec,
    images: Vec<G::Elem>,
    group: G,
}

pub fn relator_value<G: Group>(group: &G, spec: &SurfaceGroupSpec, images: &[G::Elem]) -> G::Elem {
    group.eval(&spec.relator(), images)
}

impl<G: Group> SurfaceHom<G> {
    pub fn new(spec: SurfaceGroupSpec, images: Vec<G::Elem>, group: G) -> Result<Self, SurfaceError> {
        if images.len() != spec.n_generators() {
            return Err(SurfaceError::Arity {
                expected: spec.n_generators(),
                got: images.len(),
            });
        }
        let r = relator_value(&group, &spec, &images);
        if !group.is_identity(&r) {
            return Err(SurfaceError::Relator {
                value: group.format_elem(&r),
            });
        }
        Ok(SurfaceHom { spec, images, group })
    }

    pub fn spec(&self) -> &SurfaceGroupSpec {
        &self.spec
    }

    pub fn images(&self) -> &[G::Elem] {
        &self.images
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn to_json(&self, target: Value) -> Value {
        json!({
            "genus": self.spec.genus,
            "orientable": self.spec.orientable,
            "target": target,
            "images": self.images.iter().map(|e| self.group.format_elem(e)).collect::<Vec<_>>(),
        })
    }

    /// Reads `genus`, `orientable` and `images` (elements in text form).
    pub fn from_json(v: &Value, group: G) -> Result<Self, SurfaceError> {
        let genus = v
            .get("genus")
            .and_then(Value::as_u64)
            .ok_or_else(|| SurfaceError::Spec("missing \"genus\"".into()))?;
        let orientable = v.get("orientable").and_then(Value::as_bool).unwrap_or(true);
        let spec = SurfaceGroupSpec::new(genus as u32, orientable)?;
        let images = v
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(|| SurfaceError::Spec("missing \"images\"".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| SurfaceError::Spec("images are strings".into()))
                    .and_then(|s| group.parse_elem(s).map_err(SurfaceError::Spec))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SurfaceHom::new(spec, images, group)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    TwistU,
    TwistV,
    Rotate,
    Swap,
    Mix,
    CrossSlide,
    CrossMix,
}

impl Kind {
    const ALL: [Kind; 7] = [
        Kind::TwistU,
        Kind::TwistV,
        Kind::Rotate,
        Kind::Swap,
        Kind::Mix,
        Kind::CrossSlide,
        Kind::CrossMix,
    ];

    fn name(self) -> &'static str {
        match self {
            Kind::TwistU => "twist_u",
            Kind::TwistV => "twist_v",
            Kind::Rotate => "rotate",
            Kind::Swap => "swap",
            Kind::Mix => "mix",
            Kind::CrossSlide => "cross_slide",
            Kind::CrossMix => "cross_mix",
        }
    }

    /// Local images over slots `a b c d`, forward then inverse.
    fn formulas(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Kind::TwistU => (&["ab", "b"], &["aB", "b"]),
            Kind::TwistV => (&["a", "ba"], &["a", "bA"]),
            Kind::Rotate => (&["B", "baB"], &["abA", "A"]),
            Kind::Swap => (
                &["abABcbaBA", "abABdbaBA", "a", "b"],
                &["c", "d", "dcDCacdCD", "dcDCbcdCD"],
            ),
            Kind::Mix => (
                &["adb", "BDbdb", "BDbdcdb", "Bdb"],
                &["aBD", "dbD", "dbDBcBD", "dbdBD"],
            ),
            Kind::CrossSlide => (&["aabAA", "a"], &["b", "BBabb"]),
            Kind::CrossMix => (&["aab", "BAb"], &["aBA", "abb"]),
        }
    }

    fn is_pair(self) -> bool {
        matches!(self, Kind::Swap | Kind::Mix)
    }
}

static LOCAL_IMAGES: LazyLock<HashMap<(Kind, bool), Vec<Word>>> = LazyLock::new(|| {
    let parse = |ws: &[&str]| ws.iter().map(|w| Word::parse(w).expect("valid formula")).collect::<Vec<_>>();
    let mut m = HashMap::new();
    for k in Kind::ALL {
        let (fwd, inv) = k.formulas();
        m.insert((k, false), parse(fwd));
        m.insert((k, true), parse(inv));
    }
    m
});

/// One relator-preserving transformation of an image tuple.
///
/// Orientable moves address handles (`handle` and, for `Swap`/`Mix`,
/// `handle + 1`); non-orientable moves address the slot pair `slot`,
/// `slot + 1`. Indices are 0-based here and 1-based in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move<E> {
    /// `(u, v) ↦ (u v^{±1}, v)`
    TwistU { handle: usize, inverse: bool },
    /// `(u, v) ↦ (u, v u^{±1})`
    TwistV { handle: usize, inverse: bool },
    /// `(u, v) ↦ (v⁻¹, v u v⁻¹)`, inverse `(u v u⁻¹, u⁻¹)`
    Rotate { handle: usize, inverse: bool },
    /// Exchange two handles: `(a,b,c,d) ↦ (KcK⁻¹, KdK⁻¹, a, b)`, `K = [a,b]`.
    Swap { handle: usize, inverse: bool },
    /// `(a,b,c,d) ↦ (adb, b⁻¹d⁻¹bdb, b⁻¹d⁻¹bdcdb, b⁻¹db)`: the transvection
    /// `a ↦ dba, c ↦ bdc` followed by conjugation by `(db)⁻¹`.
    Mix { handle: usize, inverse: bool },
    /// `(a, b) ↦ (a²ba⁻², a)`
    CrossSlide { slot: usize, inverse: bool },
    /// `(a, b) ↦ (a²b, b⁻¹a⁻¹b)`
    CrossMix { slot: usize, inverse: bool },
    /// Every image `x ↦ by · x · by⁻¹`.
    Conjugate { by: E },
}

impl<E: Clone> Move<E> {
    fn parts(&self) -> Option<(Kind, usize, bool)> {
        Some(match *self {
            Move::TwistU { handle, inverse } => (Kind::TwistU, handle, inverse),
            Move::TwistV { handle, inverse } => (Kind::TwistV, handle, inverse),
            Move::Rotate { handle, inverse } => (Kind::Rotate, handle, inverse),
            Move::Swap { handle, inverse } => (Kind::Swap, handle, inverse),
            Move::Mix { handle, inverse } => (Kind::Mix, handle, inverse),
            Move::CrossSlide { slot, inverse } => (Kind::CrossSlide, slot, inverse),
            Move::CrossMix { slot, inverse } => (Kind::CrossMix, slot, inverse),
            Move::Conjugate { .. } => return None,
        })
    }

    fn from_parts(kind: Kind, index: usize, inverse: bool) -> Self {
        match kind {
            Kind::TwistU => Move::TwistU { handle: index, inverse },
            Kind::TwistV => Move::TwistV { handle: index, inverse },
            Kind::Rotate => Move::Rotate { handle: index, inverse },
            Kind::Swap => Move::Swap { handle: index, inverse },
            Kind::Mix => Move::Mix { handle: index, inverse },
            Kind::CrossSlide => Move::CrossSlide { slot: index, inverse },
            Kind::CrossMix => Move::CrossMix { slot: index, inverse },
        }
    }

    /// First affected slot and the local images, or `None` for conjugation.
    pub fn local(&self) -> Option<(usize, &'static [Word])> {
        let (kind, index, inverse) = self.parts()?;
        let first = match kind {
            Kind::CrossSlide | Kind::CrossMix => index,
            _ => 2 * index,
        };
        Some((first, LOCAL_IMAGES[&(kind, inverse)].as_slice()))
    }

    /// Slots read and written by the move.
    pub fn slots(&self) -> Option<std::ops::Range<usize>> {
        self.local().map(|(first, imgs)| first..first + imgs.len())
    }

    pub fn inverse<G: Group<Elem = E>>(&self, group: &G) -> Self {
        match self {
            Move::Conjugate { by } => Move::Conjugate { by: group.inverse(by) },
            _ => {
                let (k, i, inv) = self.parts().expect("local move");
                Move::from_parts(k, i, !inv)
            }
        }
    }

    /// The same move acting on abstract generators; `None` for conjugation.
    pub fn symbolic(&self) -> Option<Move<Word>> {
        self.parts().map(|(k, i, inv)| Move::from_parts(k, i, inv))
    }

    pub fn to_json<G: Group<Elem = E>>(&self, group: &G) -> Value {
        match self {
            Move::Conjugate { by } => json!({"move": "conjugate", "by": group.format_elem(by)}),
            _ => {
                let (k, i, inv) = self.parts().expect("local move");
                let key = if matches!(k, Kind::CrossSlide | Kind::CrossMix) { "slot" } else { "handle" };
                json!({"move": k.name(), key: i + 1, "inverse": inv})
            }
        }
    }

    pub fn from_json<G: Group<Elem = E>>(v: &Value, group: &G) -> Result<Self, SurfaceError> {
        let name = v
            .get("move")
            .and_then(Value::as_str)
            .ok_or_else(|| SurfaceError::Decode("missing \"move\"".into()))?;
        if name == "conjugate" {
            let by = v
                .get("by")
                .and_then(Value::as_str)
                .ok_or_else(|| SurfaceError::Decode("conjugate needs \"by\"".into()))?;
            return Ok(Move::Conjugate {
                by: group.parse_elem(by).map_err(SurfaceError::Decode)?,
            });
        }
        let kind = Kind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| SurfaceError::Decode(format!("unknown move {name:?}")))?;
        let index = v
            .get("handle")
            .or_else(|| v.get("slot"))
            .and_then(Value::as_u64)
            .filter(|&i| i >= 1)
            .ok_or_else(|| SurfaceError::Decode("missing 1-based \"handle\"/\"slot\"".into()))?;
        let inverse = v.get("inverse").and_then(Value::as_bool).unwrap_or(false);
        Ok(Move::from_parts(kind, index as usize - 1, inverse))
    }
}

impl<E: Clone + fmt::Debug> fmt::Display for Move<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts() {
            Some((k, i, inv)) => write!(f, "{}{}({})", k.name(), if inv { "⁻¹" } else { "" }, i + 1),
            None => write!(f, "{self:?}"),
        }
    }
}

pub fn apply_move<G: Group>(group: &G, tuple: &[G::Elem], m: &Move<G::Elem>) -> Vec<G::Elem> {
    match m {
        Move::Conjugate { by } => tuple.iter().map(|x| group.conjugate(x, by)).collect(),
        _ => {
            let (first, imgs) = m.local().expect("local move");
            let old = &tuple[first..first + imgs.len()];
            let mut out = tuple.to_vec();
            for (k, w) in imgs.iter().enumerate() {
                out[first + k] = group.eval(w, old);
            }
            out
        }
    }
}

pub fn replay<G: Group>(group: &G, start: &[G::Elem], moves: &[Move<G::Elem>]) -> Vec<G::Elem> {
    moves.iter().fold(start.to_vec(), |t, m| apply_move(group, &t, m))
}

/// Moves in their fixed priority order, without conjugations: per handle
/// `TwistU±, TwistV±, Rotate±`, then per adjacent pair `Swap±, Mix±`; for
/// non-orientable surfaces per adjacent pair `CrossSlide±, CrossMix±`.
pub fn generating_moves<E: Clone>(spec: &SurfaceGroupSpec) -> Vec<Move<E>> {
    block_moves(spec, 0, spec.genus as usize)
}

/// Generating moves confined to handles (or slots) `lo..hi`.
pub fn block_moves<E: Clone>(spec: &SurfaceGroupSpec, lo: usize, hi: usize) -> Vec<Move<E>> {
    let mut out = Vec::new();
    if spec.orientable {
        for h in lo..hi {
            for k in [Kind::TwistU, Kind::TwistV, Kind::Rotate] {
                out.push(Move::from_parts(k, h, false));
                out.push(Move::from_parts(k, h, true));
            }
        }
        for h in lo..hi.saturating_sub(1) {
            for k in [Kind::Swap, Kind::Mix] {
                debug_assert!(k.is_pair());
                out.push(Move::from_parts(k, h, false));
                out.push(Move::from_parts(k, h, true));
            }
        }
    } else {
        for s in lo..hi.saturating_sub(1) {
            for k in [Kind::CrossSlide, Kind::CrossMix] {
                out.push(Move::from_parts(k, s, false));
                out.push(Move::from_parts(k, s, true));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dedup {
    /// Identify tuples that differ by a global conjugation.
    Conjugacy,
    /// Identify only equal tuples.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<E, T> {
    Found {
        goal: T,
        path: Vec<Move<E>>,
        terminal: Vec<E>,
        expanded: usize,
    },
    Exhausted {
        expanded: usize,
        /// The whole orbit was explored, not just `budget` nodes.
        orbit_complete: bool,
    },
}

/// Breadth-first search from `start`. Goals are tested as nodes are
/// generated, in move order, starting with `start` itself; `budget` caps the
/// number of expanded nodes.
pub fn orbit_search<G: Group, T>(
    group: &G,
    start: &[G::Elem],
    moves: &[Move<G::Elem>],
    budget: usize,
    dedup: Dedup,
    mut goal: impl FnMut(&[G::Elem]) -> Option<T>,
) -> SearchOutcome<G::Elem, T> {
    let key = |t: &[G::Elem]| match dedup {
        Dedup::Conjugacy => tuple_conjugacy_key(group, t),
        Dedup::Exact => t.to_vec(),
    };
    let path_to = |nodes: &[(Vec<G::Elem>, usize, usize)], mut i: usize| {
        let mut path = Vec::new();
        while i != 0 {
            let (_, parent, m) = &nodes[i];
            path.push(moves[*m].clone());
            i = *parent;
        }
        path.reverse();
        path
    };
    if let Some(g) = goal(start) {
        return SearchOutcome::Found {
            goal: g,
            path: Vec::new(),
            terminal: start.to_vec(),
            expanded: 0,
        };
    }
    let mut nodes: Vec<(Vec<G::Elem>, usize, usize)> = vec![(start.to_vec(), 0, usize::MAX)];
    let mut seen: HashSet<Vec<G::Elem>> = HashSet::from([key(start)]);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(i) = queue.pop_front() {
        if expanded >= budget {
            return SearchOutcome::Exhausted {
                expanded,
                orbit_complete: false,
            };
        }
        expanded += 1;
        for (mi, m) in moves.iter().enumerate() {
            let child = apply_move(group, &nodes[i].0, m);
            if !seen.insert(key(&child)) {
                continue;
            }
            nodes.push((child, i, mi));
            let j = nodes.len() - 1;
            if let Some(g) = goal(&nodes[j].0) {
                return SearchOutcome::Found {
                    goal: g,
                    path: path_to(&nodes, j),
                    terminal: nodes[j].0.clone(),
                    expanded,
                };
            }
            queue.push_back(j);
        }
    }
    SearchOutcome::Exhausted {
        expanded,
        orbit_complete: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate<E> {
    pub moves: Vec<Move<E>>,
    pub terminal: Vec<E>,
}

impl<E: Clone + Eq> Certificate<E> {
    pub fn replays<G: Group<Elem = E>>(&self, group: &G, start: &[E]) -> bool {
        replay(group, start, &self.moves) == self.terminal
    }

    pub fn to_json<G: Group<Elem = E>>(&self, group: &G) -> Value {
        json!({
            "moves": self.moves.iter().map(|m| m.to_json(group)).collect::<Vec<_>>(),
            "terminal": self.terminal.iter().map(|e| group.format_elem(e)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json<G: Group<Elem = E>>(v: &Value, group: &G) -> Result<Self, SurfaceError> {
        let moves = v
            .get("moves")
            .and_then(Value::as_array)
            .ok_or_else(|| SurfaceError::Decode("missing \"moves\"".into()))?
            .iter()
            .map(|m| Move::from_json(m, group))
            .collect::<Result<Vec<_>, _>>()?;
        let terminal = v
            .get("terminal")
            .and_then(Value::as_array)
            .ok_or_else(|| SurfaceError::Decode("missing \"terminal\"".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| SurfaceError::Decode("terminal entries are strings".into()))
                    .and_then(|s| group.parse_elem(s).map_err(SurfaceError::Decode))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Certificate { moves, terminal })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryOutcome<E> {
    Certificate { certificate: Certificate<E>, expanded: usize },
    Exhausted { expanded: usize, budget: usize },
}

/// Search for generators with every `u`-image trivial.
///
/// Works handle by handle: a breadth-first search over the moves of the
/// still-open handles looks for a trivial `u` or `v`; that handle is
/// normalized to `(1, v)`, moved to the front of the open range and closed.
/// `budget` caps the expanded nodes over all stages.
pub fn elementary_check<G: Group>(hom: &SurfaceHom<G>, budget: usize) -> Result<ElementaryOutcome<G::Elem>, SurfaceError> {
    if !hom.spec.orientable {
        return Err(SurfaceError::Capability(
            "elementary_check needs an orientable source; use klein_classify or genus_reduce".into(),
        ));
    }
    let g = &hom.group;
    let genus = hom.spec.genus as usize;
    let mut tuple = hom.images.clone();
    let mut moves = Vec::new();
    let mut expanded = 0;
    for lo in 0..genus {
        let local = block_moves(&hom.spec, lo, genus);
        let found = orbit_search(g, &tuple, &local, budget - expanded, Dedup::Conjugacy, |t| trivial_slot(g, t, lo, genus));
        match found {
            SearchOutcome::Found {
                goal,
                path,
                terminal,
                expanded: e,
            } => {
                expanded += e;
                moves.extend(path);
                tuple = terminal;
                close_handle(g, &mut tuple, &mut moves, goal, lo);
            }
            SearchOutcome::Exhausted { expanded: e, .. } => {
                return Ok(ElementaryOutcome::Exhausted {
                    expanded: expanded + e,
                    budget,
                });
            }
        }
    }
    Ok(ElementaryOutcome::Certificate {
        certificate: Certificate { moves, terminal: tuple },
        expanded,
    })
}

/// A handle in `lo..hi` with trivial `u` (`false`) or `v` (`true`) image.
fn trivial_slot<G: Group>(g: &G, t: &[G::Elem], lo: usize, hi: usize) -> Option<(usize, bool)> {
    (lo..hi).find_map(|h| {
        if g.is_identity(&t[2 * h]) {
            Some((h, false))
        } else if g.is_identity(&t[2 * h + 1]) {
            Some((h, true))
        } else {
            None
        }
    })
}

/// Bring the handle found by [`trivial_slot`] to position `lo` as `(1, v)`.
fn close_handle<G: Group>(g: &G, tuple: &mut Vec<G::Elem>, moves: &mut Vec<Move<G::Elem>>, found: (usize, bool), lo: usize) {
    let (h, v_trivial) = found;
    let mut push = |m: Move<G::Elem>, tuple: &mut Vec<G::Elem>| {
        *tuple = apply_move(g, tuple, &m);
        moves.push(m);
    };
    if v_trivial && !g.is_identity(&tuple[2 * h]) {
        push(Move::Rotate { handle: h, inverse: false }, tuple);
    }
    for j in (lo + 1..=h).rev() {
        push(Move::Swap { handle: j - 1, inverse: true }, tuple);
    }
    debug_assert!(g.is_identity(&tuple[2 * lo]));
}

/// Same, for a non-orientable slot with trivial image.
fn close_crosscap<G: Group>(g: &G, tuple: &mut Vec<G::Elem>, moves: &mut Vec<Move<G::Elem>>, slot: usize, lo: usize) {
    for j in (lo + 1..=slot).rev() {
        let m = Move::CrossSlide { slot: j - 1, inverse: true };
        *tuple = apply_move(g, tuple, &m);
        moves.push(m);
    }
    debug_assert!(g.is_identity(&tuple[lo]));
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certification {
    /// No standard simple closed curve class reached within `budget`
    /// expanded nodes maps to the identity.
    EssentiallyInjectiveWithinBudget { budget: usize, orbit_complete: bool },
    Unknown { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece<E> {
    /// `images` are the generator images conjugated into one factor when
    /// possible: the actual images are `conjugator · image · conjugator⁻¹`.
    Surface {
        spec: SurfaceGroupSpec,
        images: Vec<E>,
        conjugator: E,
        factor: Option<usize>,
        certification: Certification,
    },
    Circle { image: E, conjugator: E },
    Projective { image: E, conjugator: E },
}

impl<E> Piece<E> {
    pub fn n_generators(&self) -> usize {
        match self {
            Piece::Surface { spec, .. } => spec.n_generators(),
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Piece::Surface { .. } => "surface",
            Piece::Circle { .. } => "circle",
            Piece::Projective { .. } => "projective",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    /// Pinch along a separating curve: `χ = χ₁ + χ₂ − 2`.
    Separating,
    /// Pinch along a non-separating curve, leaving a circle: `χ = χ' − 2`.
    NonSeparating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub kind: SplitKind,
    pub before: SurfaceType,
    pub after: Vec<SurfaceType>,
}

impl Split {
    pub fn euler_holds(&self) -> bool {
        let chi: Vec<i64> = self.after.iter().map(SurfaceType::euler_characteristic).collect();
        let before = self.before.euler_characteristic();
        match (self.kind, chi.as_slice()) {
            (SplitKind::Separating, [a, b]) => before == a + b - 2,
            (SplitKind::NonSeparating, [a]) => before == a - 2,
            _ => false,
        }
    }
}

/// A homomorphism written as a pinch onto a wedge of surfaces, circles and
/// projective planes followed by maps of the pieces.
///
/// Piece generators are numbered consecutively over the pieces in order;
/// `pinch[j]` expresses source generator `j` as a word in them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinchDecomposition<E> {
    source: SurfaceGroupSpec,
    pieces: Vec<Piece<E>>,
    pinch: Vec<Word>,
    splits: Vec<Split>,
    moves: Vec<Move<E>>,
}

impl<E: Clone + Eq> PinchDecomposition<E> {
    pub fn source(&self) -> &SurfaceGroupSpec {
        &self.source
    }

    pub fn pieces(&self) -> &[Piece<E>] {
        &self.pieces
    }

    pub fn pinch(&self) -> &[Word] {
        &self.pinch
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    /// The move sequence taking the source images to the normalized tuple.
    pub fn moves(&self) -> &[Move<E>] {
        &self.moves
    }

    pub fn defect(&self) -> usize {
        self.pieces.iter().filter(|p| matches!(p, Piece::Circle { .. })).count()
    }

    /// Actual images of the piece generators, in order.
    pub fn piece_generator_images<G: Group<Elem = E>>(&self, g: &G) -> Vec<E> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match p {
                Piece::Surface { images, conjugator, .. } => {
                    out.extend(images.iter().map(|x| g.conjugate(x, conjugator)));
                }
                Piece::Circle { image, conjugator } | Piece::Projective { image, conjugator } => {
                    out.push(g.conjugate(image, conjugator));
                }
            }
        }
        out
    }

    /// Source generator images obtained by evaluating the pinch words.
    pub fn recompose<G: Group<Elem = E>>(&self, g: &G) -> Vec<E> {
        let imgs = self.piece_generator_images(g);
        self.pinch.iter().map(|w| g.eval(w, &imgs)).collect()
    }

    pub fn to_json<G: Group<Elem = E>>(&self, g: &G) -> Value {
        let f = |e: &E| g.format_elem(e);
        let pieces: Vec<Value> = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Surface {
                    spec,
                    images,
                    conjugator,
                    factor,
                    certification,
                } => json!({
                    "kind": "surface",
                    "genus": spec.genus,
                    "orientable": spec.orientable,
                    "images": images.iter().map(f).collect::<Vec<_>>(),
                    "conjugator": f(conjugator),
                    "factor": factor,
                    "certification": certification,
                }),
                Piece::Circle { image, conjugator } => {
                    json!({"kind": "circle", "image": f(image), "conjugator": f(conjugator)})
                }
                Piece::Projective { image, conjugator } => {
                    json!({"kind": "projective", "image": f(image), "conjugator": f(conjugator)})
                }
            })
            .collect();
        json!({
            "source": {"genus": self.source.genus, "orientable": self.source.orientable},
            "pieces": pieces,
            "pinch": self.pinch.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "splits": self.splits,
            "defect": self.defect(),
            "moves": self.moves.iter().map(|m| m.to_json(g)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Draft {
    Surface { lo: usize, hi: usize },
    /// Orientable handle at `h` with trivial `u`.
    Circle { handle: usize },
    /// Klein block `(slot, slot + 1)` with `V1 V2 = 1`.
    KleinCircle { slot: usize },
    Projective { slot: usize },
}

struct Reducer<'a, G: Group> {
    group: &'a G,
    spec: SurfaceGroupSpec,
    budget: usize,
    tuple: Vec<G::Elem>,
    moves: Vec<Move<G::Elem>>,
    drafts: Vec<(Draft, Option<Certification>)>,
    splits: Vec<Split>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OrientableGoal {
    Trivial(usize, bool),
    Separating(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CrosscapGoal {
    Trivial(usize),
    Klein(KleinCase),
    Separating(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KleinCase {
    /// `V1 ↦ 1`: factors through the pinch onto a projective plane.
    I,
    /// `V1 V2 ↦ 1`: factors through the pinch onto a circle.
    II,
    /// `V1² ↦ 1`: factors through the pinch onto two projective planes.
    III,
}

fn klein_goal<G: Group>(g: &G, t: &[G::Elem], lo: usize) -> Option<KleinCase> {
    let (a, b) = (&t[lo], &t[lo + 1]);
    if g.is_identity(a) {
        Some(KleinCase::I)
    } else if g.is_identity(&g.mul(a, b)) {
        Some(KleinCase::II)
    } else if g.is_identity(&g.mul(a, a)) {
        Some(KleinCase::III)
    } else {
        None
    }
}

impl<'a, G: Group> Reducer<'a, G> {
    fn push_moves(&mut self, path: Vec<Move<G::Elem>>, terminal: Vec<G::Elem>) {
        self.moves.extend(path);
        self.tuple = terminal;
    }

    fn orientable_block(&mut self, lo: usize, hi: usize) {
        if lo == hi {
            return;
        }
        let g = self.group;
        let moves = block_moves(&self.spec, lo, hi);
        let found = orbit_search(g, &self.tuple, &moves, self.budget, Dedup::Conjugacy, |t| {
            if let Some((h, v)) = trivial_slot(g, t, lo, hi) {
                return Some(OrientableGoal::Trivial(h, v));
            }
            let mut acc = g.identity();
            for k in lo + 1..hi {
                acc = g.mul(&acc, &g.commutator(&t[2 * (k - 1)], &t[2 * k - 1]));
                if g.is_identity(&acc) {
                    return Some(OrientableGoal::Separating(k));
                }
            }
            None
        });
        let genus = (hi - lo) as u32;
        match found {
            SearchOutcome::Found {
                goal, path, terminal, ..
            } => {
                self.push_moves(path, terminal);
                match goal {
                    OrientableGoal::Trivial(h, v) => {
                        close_handle(g, &mut self.tuple, &mut self.moves, (h, v), lo);
                        self.drafts.push((Draft::Circle { handle: lo }, None));
                        self.splits.push(Split {
                            kind: SplitKind::NonSeparating,
                            before: SurfaceType { genus, orientable: true },
                            after: vec![SurfaceType {
                                genus: genus - 1,
                                orientable: true,
                            }],
                        });
                        self.orientable_block(lo + 1, hi);
                    }
                    OrientableGoal::Separating(k) => {
                        self.splits.push(Split {
                            kind: SplitKind::Separating,
                            before: SurfaceType { genus, orientable: true },
                            after: vec![
                                SurfaceType {
                                    genus: (k - lo) as u32,
                                    orientable: true,
                                },
                                SurfaceType {
                                    genus: (hi - k) as u32,
                                    orientable: true,
                                },
                            ],
                        });
                        self.orientable_block(lo, k);
                        self.orientable_block(k, hi);
                    }
                }
            }
            SearchOutcome::Exhausted { orbit_complete, .. } => {
                self.drafts.push((Draft::Surface { lo, hi }, Some(self.certify(orbit_complete))));
            }
        }
    }

    fn certify(&self, orbit_complete: bool) -> Certification {
        if self.budget == 0 {
            Certification::Unknown {
                reason: "no search budget".into(),
            }
        } else {
            Certification::EssentiallyInjectiveWithinBudget {
                budget: self.budget,
                orbit_complete,
            }
        }
    }

    fn crosscap_block(&mut self, lo: usize, hi: usize) {
        let g = self.group;
        let n = hi - lo;
        if n == 0 {
            return;
        }
        if n == 1 {
            self.drafts.push((Draft::Projective { slot: lo }, None));
            return;
        }
        let moves = block_moves(&self.spec, lo, hi);
        let found = orbit_search(g, &self.tuple, &moves, self.budget, Dedup::Conjugacy, |t| {
            if n == 2 {
                return klein_goal(g, t, lo).map(CrosscapGoal::Klein);
            }
            if let Some(s) = (lo..hi).find(|&s| g.is_identity(&t[s])) {
                return Some(CrosscapGoal::Trivial(s));
            }
            let mut acc = g.identity();
            for k in lo + 1..hi {
                acc = g.mul(&acc, &g.mul(&t[k - 1], &t[k - 1]));
                if g.is_identity(&acc) {
                    return Some(CrosscapGoal::Separating(k));
                }
            }
            None
        });
        let nonor = |genus: usize| SurfaceType {
            genus: genus as u32,
            orientable: false,
        };
        match found {
            SearchOutcome::Found {
                goal, path, terminal, ..
            } => {
                self.push_moves(path, terminal);
                match goal {
                    CrosscapGoal::Trivial(s) => {
                        close_crosscap(g, &mut self.tuple, &mut self.moves, s, lo);
                        self.splits.push(Split {
                            kind: SplitKind::Separating,
                            before: nonor(n),
                            after: vec![nonor(1), nonor(n - 1)],
                        });
                        self.drafts.push((Draft::Projective { slot: lo }, None));
                        self.crosscap_block(lo + 1, hi);
                    }
                    CrosscapGoal::Klein(KleinCase::I) | CrosscapGoal::Klein(KleinCase::III) => {
                        self.splits.push(Split {
                            kind: SplitKind::Separating,
                            before: nonor(2),
                            after: vec![nonor(1), nonor(1)],
                        });
                        self.drafts.push((Draft::Projective { slot: lo }, None));
                        self.drafts.push((Draft::Projective { slot: lo + 1 }, None));
                    }
                    CrosscapGoal::Klein(KleinCase::II) => {
                        self.splits.push(Split {
                            kind: SplitKind::NonSeparating,
                            before: nonor(2),
                            after: vec![SurfaceType {
                                genus: 0,
                                orientable: true,
                            }],
                        });
                        self.drafts.push((Draft::KleinCircle { slot: lo }, None));
                    }
                    CrosscapGoal::Separating(k) => {
                        self.splits.push(Split {
                            kind: SplitKind::Separating,
                            before: nonor(n),
                            after: vec![nonor(k - lo), nonor(hi - k)],
                        });
                        self.crosscap_block(lo, k);
                        self.crosscap_block(k, hi);
                    }
                }
            }
            SearchOutcome::Exhausted { orbit_complete, .. } => {
                self.drafts.push((Draft::Surface { lo, hi }, Some(self.certify(orbit_complete))));
            }
        }
    }

    fn finish(self) -> PinchDecomposition<G::Elem> {
        let g = self.group;
        let n = self.tuple.len();
        let orientable = self.spec.orientable;
        // Source generators in terms of the final slots.
        let free = FreeGroup::new(n as u32);
        let mut in_final: Vec<Word> = (1..=n as u32).map(Word::generator).collect();
        for m in self.moves.iter().rev() {
            let sym = m.symbolic().expect("reductions never conjugate");
            in_final = apply_move(&free, &in_final, &sym.inverse(&free));
        }

        let mut drafts = self.drafts;
        drafts.sort_by_key(|(d, _)| match *d {
            Draft::Surface { lo, .. } => lo,
            Draft::Circle { handle } => handle,
            Draft::KleinCircle { slot } | Draft::Projective { slot } => slot,
        });
        let mut slot_map = vec![Word::identity(); n];
        let mut pieces = Vec::new();
        let mut next = 1u32;
        let t = &self.tuple;
        let conj_into = |elems: &[G::Elem]| g.common_factor_conjugator(elems);
        let into_factor = |e: &G::Elem| -> (G::Elem, G::Elem) {
            match conj_into(std::slice::from_ref(e)) {
                Some((_, z)) => (g.conjugate(e, &g.inverse(&z)), z),
                None => (e.clone(), g.identity()),
            }
        };
        for (draft, cert) in drafts {
            match draft {
                Draft::Surface { lo, hi } => {
                    let slots = if orientable { 2 * lo..2 * hi } else { lo..hi };
                    let real: Vec<G::Elem> = t[slots.clone()].to_vec();
                    for s in slots {
                        slot_map[s] = Word::generator(next);
                        next += 1;
                    }
                    let (factor, z) = match conj_into(&real) {
                        Some((f, z)) => (Some(f), z),
                        None => (None, g.identity()),
                    };
                    let z_inv = g.inverse(&z);
                    pieces.push(Piece::Surface {
                        spec: SurfaceGroupSpec::new((hi - lo) as u32, orientable).expect("nonempty block"),
                        images: real.iter().map(|x| g.conjugate(x, &z_inv)).collect(),
                        conjugator: z,
                        factor,
                        certification: cert.expect("surface drafts are certified"),
                    });
                }
                Draft::Circle { handle } => {
                    slot_map[2 * handle + 1] = Word::generator(next);
                    next += 1;
                    let (image, conjugator) = into_factor(&t[2 * handle + 1]);
                    pieces.push(Piece::Circle { image, conjugator });
                }
                Draft::KleinCircle { slot } => {
                    slot_map[slot] = Word::generator(next);
                    slot_map[slot + 1] = Word::generator(next).inverse();
                    next += 1;
                    let (image, conjugator) = into_factor(&t[slot]);
                    pieces.push(Piece::Circle { image, conjugator });
                }
                Draft::Projective { slot } => {
                    slot_map[slot] = Word::generator(next);
                    next += 1;
                    let (image, conjugator) = into_factor(&t[slot]);
                    pieces.push(Piece::Projective { image, conjugator });
                }
            }
        }
        let pinch = in_final.iter().map(|w| w.substitute(&slot_map)).collect();
        PinchDecomposition {
            source: self.spec,
            pieces,
            pinch,
            splits: self.splits,
            moves: self.moves,
        }
    }
}

/// Split `hom` along kernel curves found by orbit search until no standard
/// curve class in a remaining block maps to the identity within `budget`
/// expanded nodes per block search.
///
/// Orientable blocks look for a trivial `u` or `v` (split off a circle) and
/// then for a trivial separating product `[u_lo,v_lo]···[u_k,v_k]`.
/// Non-orientable blocks look for a trivial `V` (split off a projective
/// plane) and a trivial separating product of squares; two-crosscap blocks
/// use the Klein-bottle cases of [`klein_classify`].
pub fn genus_reduce<G: Group>(hom: &SurfaceHom<G>, budget: usize) -> PinchDecomposition<G::Elem> {
    let mut r = Reducer {
        group: &hom.group,
        spec: hom.spec,
        budget,
        tuple: hom.images.clone(),
        moves: Vec::new(),
        drafts: Vec::new(),
        splits: Vec::new(),
    };
    let g = hom.spec.genus as usize;
    if hom.spec.orientable {
        r.orientable_block(0, g);
    } else {
        r.crosscap_block(0, g);
    }
    r.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect<E> {
    pub value: usize,
    pub decomposition: PinchDecomposition<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefectOutcome<E> {
    Witness(Defect<E>),
    /// The decomposition found within budget has fewer circles.
    Inconclusive { found: usize },
}

pub fn defect_at_least<G: Group>(hom: &SurfaceHom<G>, d: usize, budget: usize) -> DefectOutcome<G::Elem> {
    let decomposition = genus_reduce(hom, budget);
    let value = decomposition.defect();
    if value >= d {
        DefectOutcome::Witness(Defect { value, decomposition })
    } else {
        DefectOutcome::Inconclusive { found: value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KleinOutcome<E> {
    Case {
        case: KleinCase,
        certificate: Certificate<E>,
        decomposition: PinchDecomposition<E>,
    },
    EssentiallyInjectiveWithinBudget { budget: usize, expanded: usize },
}

/// Search the orbit of a Klein-bottle homomorphism for `V1 ↦ 1` (case I),
/// `V1 V2 ↦ 1` (case II) or `V1² ↦ 1` (case III), tested in that order at
/// every node.
pub fn klein_classify<G: Group>(hom: &SurfaceHom<G>, budget: usize) -> Result<KleinOutcome<G::Elem>, SurfaceError> {
    if hom.spec != SurfaceGroupSpec::non_orientable(2) {
        return Err(SurfaceError::Spec(format!("klein_classify needs a Klein bottle source, got {}", hom.spec)));
    }
    let g = &hom.group;
    let moves = generating_moves(&hom.spec);
    match orbit_search(g, &hom.images, &moves, budget, Dedup::Conjugacy, |t| klein_goal(g, t, 0)) {
        SearchOutcome::Found { goal, path, terminal, .. } => {
            let decomposition = genus_reduce(hom, budget);
            Ok(KleinOutcome::Case {
                case: goal,
                certificate: Certificate { moves: path, terminal },
                decomposition,
            })
        }
        SearchOutcome::Exhausted { expanded, .. } => Ok(KleinOutcome::EssentiallyInjectiveWithinBudget { budget, expanded }),
    }
}

/// Check that an elementary certificate exhibits a factorization through the
/// free group on the `v`-slots: every source generator, rewritten in the
/// final generators with the `u`s deleted, still evaluates to its image.
pub fn factors_through_free<G: Group>(hom: &SurfaceHom<G>, cert: &Certificate<G::Elem>) -> bool {
    let g = &hom.group;
    let n = hom.images.len();
    if !cert.replays(g, &hom.images) || (0..n).step_by(2).any(|i| !g.is_identity(&cert.terminal[i])) {
        return false;
    }
    let free = FreeGroup::new(n as u32);
    let mut in_final: Vec<Word> = (1..=n as u32).map(Word::generator).collect();
    for m in cert.moves.iter().rev() {
        let Some(sym) = m.symbolic() else { return false };
        in_final = apply_move(&free, &in_final, &sym.inverse(&free));
    }
    let kill_u: Vec<Word> = (1..=n as u32)
        .map(|i| if i % 2 == 1 { Word::identity() } else { Word::generator(i) })
        .collect();
    (0..n).all(|j| g.eval(&in_final[j].substitute(&kill_u), &cert.terminal) == hom.images[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn free_hom(genus: u32, orientable: bool, images: &[&str]) -> SurfaceHom<FreeGroup> {
        SurfaceHom::new(
            SurfaceGroupSpec::new(genus, orientable).unwrap(),
            images.iter().map(|s| w(s)).collect(),
            FreeGroup::new(2),
        )
        .unwrap()
    }

    #[test]
    fn local_formulas_preserve_relator_and_invert() {
        let free = FreeGroup::new(4);
        for k in Kind::ALL {
            for inverse in [false, true] {
                let m: Move<Word> = Move::from_parts(k, 0, inverse);
                let arity = m.local().unwrap().1.len();
                let spec = if matches!(k, Kind::CrossSlide | Kind::CrossMix) {
                    SurfaceGroupSpec::non_orientable(2)
                } else {
                    SurfaceGroupSpec::orientable(arity as u32 / 2)
                };
                let gens: Vec<Word> = (1..=arity as u32).map(Word::generator).collect();
                let moved = apply_move(&free, &gens, &m);
                assert_eq!(relator_value(&free, &spec, &moved), spec.relator(), "{k:?} {inverse}");
                let back = apply_move(&free, &moved, &m.inverse(&free));
                assert_eq!(back, gens, "{k:?} {inverse} does not invert");
            }
        }
    }

    #[test]
    fn make_hom_examples() {
        free_hom(1, true, &["aa", "aaa"]);
        let err = SurfaceHom::new(SurfaceGroupSpec::orientable(1), vec![w("a"), w("b")], FreeGroup::new(2));
        assert_eq!(err, Err(SurfaceError::Relator { value: "abAB".into() }));
        free_hom(2, true, &["", "abAAB", "", "bbaB"]);
        assert!(matches!(
            SurfaceHom::new(SurfaceGroupSpec::orientable(1), vec![w("a")], FreeGroup::new(2)),
            Err(SurfaceError::Arity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn elementary_examples() {
        let hom = free_hom(1, true, &["aa", "aaa"]);
        let ElementaryOutcome::Certificate { certificate, .. } = elementary_check(&hom, 1000).unwrap() else {
            panic!("no certificate");
        };
        assert!(certificate.terminal[0].is_identity());
        assert_eq!(certificate.terminal[1].len(), 1);
        assert!(certificate.replays(&FreeGroup::new(2), hom.images()));
        assert!(factors_through_free(&hom, &certificate));

        let hom = free_hom(1, true, &["", "ab"]);
        let ElementaryOutcome::Certificate { certificate, .. } = elementary_check(&hom, 10).unwrap() else {
            panic!();
        };
        assert!(certificate.moves.is_empty());

        let klein = free_hom(2, false, &["a", "A"]);
        assert!(matches!(elementary_check(&klein, 10), Err(SurfaceError::Capability(_))));
    }

    #[test]
    fn reduce_examples() {
        let g = FreeGroup::new(2);
        let hom = free_hom(2, true, &["", "ab", "", "b"]);
        let dec = genus_reduce(&hom, 100);
        assert_eq!(dec.defect(), 2);
        assert_eq!(dec.recompose(&g), hom.images());
        assert!(dec.splits().iter().all(Split::euler_holds));

        let hom = free_hom(1, true, &["aa", "aaa"]);
        let dec = genus_reduce(&hom, 1000);
        assert_eq!(dec.pieces().len(), 1);
        let Piece::Circle { image, conjugator } = &dec.pieces()[0] else { panic!() };
        assert_eq!(g.conjugate(image, conjugator).len(), 1);
        assert_eq!(dec.recompose(&g), hom.images());

        let hom = free_hom(2, true, &["abAB", "ab", "ab", "abAB"]);
        let dec = genus_reduce(&hom, 200);
        assert_eq!(dec.recompose(&g), hom.images());
        assert!(dec.splits().iter().all(Split::euler_holds));
    }

    #[test]
    fn klein_examples() {
        let g = FreeGroup::new(2);
        for (images, case) in [(["", ""], KleinCase::I), (["ab", "BA"], KleinCase::II)] {
            let hom = free_hom(2, false, &images);
            let KleinOutcome::Case {
                case: c,
                certificate,
                decomposition,
            } = klein_classify(&hom, 100).unwrap()
            else {
                panic!()
            };
            assert_eq!(c, case);
            assert!(certificate.replays(&g, hom.images()));
            assert_eq!(decomposition.recompose(&g), hom.images());
        }
    }

    #[test]
    fn moves_round_trip_json() {
        let g = FreeGroup::new(2);
        let moves: Vec<Move<Word>> = generating_moves(&SurfaceGroupSpec::orientable(2))
            .into_iter()
            .chain([Move::Conjugate { by: w("ab") }])
            .collect();
        for m in moves {
            assert_eq!(Move::from_json(&m.to_json(&g), &g).unwrap(), m);
        }
    }

    #[test]
    fn move_counts() {
        assert_eq!(generating_moves::<Word>(&SurfaceGroupSpec::orientable(1)).len(), 6);
        assert_eq!(generating_moves::<Word>(&SurfaceGroupSpec::orientable(2)).len(), 16);
        assert_eq!(generating_moves::<Word>(&SurfaceGroupSpec::non_orientable(3)).len(), 8);
    }
}
