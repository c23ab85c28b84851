//! The `quadgroup` command line.
//!
//! Every command turns its arguments into an `input` object, computes a
//! `result` from that object alone, and prints both. `--replay <report>`
//! feeds a saved JSON report back in: the stored certificates are checked
//! directly and the computation is repeated to confirm the result.
//!
//! Exit codes: 0 computed, 1 computed but inconclusive, 2 usage error,
//! 3 domain error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use quadgroup::genus::{genus_exact, genus_growth, genus_upper_search, CommutatorWitness, GenusError, GenusStatus, WicksOptions};
use quadgroup::group::{FreeGroup, Group};
use quadgroup::product::{verify_decomposition, GroupSpec};
use quadgroup::quadratic::{canonicalize, classify_quadratic, polygon_type, QMove, Substitution};
use quadgroup::suites::{run_suite, SuiteOptions, DEFAULT_BUDGET, DEFAULT_SEED};
use quadgroup::surface::{
    elementary_check, factors_through_free, generating_moves, genus_reduce, klein_classify, orbit_search, Certificate,
    Certification, Dedup, ElementaryOutcome, KleinOutcome, Piece, SearchOutcome, SurfaceError, SurfaceHom,
};
use quadgroup::words::{enumerate_words, Alphabet, Word};

pub const SCHEMA_VERSION: u32 = 1;

/// Default cap on witness length for the commutator tuple search at genus 1.
pub const DEFAULT_WITNESS_LENGTH: usize = 6;

/// Default cap when more than one commutator is searched for; the cost grows
/// like the pool size to the power `2g − 1`.
pub const DEFAULT_MULTI_WITNESS_LENGTH: usize = 2;

pub const DEFAULT_ENDO_LENGTH: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "quadgroup", version, about = "Quadratic equations, commutator genus and surface-group homomorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Rank of the free group (words) or number of variables (canonicalize).
    #[arg(long, global = true)]
    rank: Option<u32>,
    /// Target group as a JSON file or inline JSON.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Orbit nodes (hom commands), witness length (genus) or image length (endo-search).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Largest power for growth.
    #[arg(long, global = true)]
    pmax: Option<u32>,
    /// Largest genus searched with Wicks forms.
    #[arg(long = "max-genus", global = true)]
    max_genus: Option<u32>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Check a saved JSON report instead of computing from arguments.
    #[arg(long, global = true)]
    replay: Option<PathBuf>,
    /// Print the JSON report.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print a plain summary (the default).
    #[arg(long, global = true)]
    text: bool,
    /// Allow genus-3 Wicks forms (several minutes to enumerate).
    #[arg(long = "allow-expensive", global = true)]
    allow_expensive: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator genus of a word.
    Genus { word: Option<String> },
    /// Genus of w^p for p = 1..pmax.
    Growth { word: Option<String> },
    /// Canonical form of a quadratic word in variables x y z u v w (or x1 x2 ...).
    Canonicalize { word: Option<String> },
    /// Certify that an orientable surface-group homomorphism is elementary.
    Elementary { hom: Option<String> },
    /// Decompose a homomorphism along a pinch.
    ReduceHom { hom: Option<String> },
    /// Classify a Klein-bottle homomorphism.
    Klein { hom: Option<String> },
    /// Count conjugacy classes of generating tuples in the move orbit.
    Orbit { hom: Option<String> },
    /// Search endomorphisms satisfying equations `word=image`.
    EndoSearch { equations: Vec<String> },
    /// Run a named verification suite.
    Verify { suite: Option<String> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Genus { .. } => "genus",
            Command::Growth { .. } => "growth",
            Command::Canonicalize { .. } => "canonicalize",
            Command::Elementary { .. } => "elementary",
            Command::ReduceHom { .. } => "reduce-hom",
            Command::Klein { .. } => "klein",
            Command::Orbit { .. } => "orbit",
            Command::EndoSearch { .. } => "endo-search",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn domain(m: impl Into<String>) -> Failure {
    Failure::Domain(m.into())
}

struct Report {
    command: String,
    input: Value,
    conclusive: bool,
    result: Value,
    summary: Vec<String>,
}

impl Report {
    fn to_json(&self) -> Value {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": if self.conclusive { "computed" } else { "inconclusive" },
            "input": self.input,
            "result": self.result,
            "timestamp": timestamp,
        })
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(if self.conclusive { "status: computed\n" } else { "status: inconclusive\n" });
        out
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            return Output { code, stdout, stderr };
        }
    };
    let json_out = cli.flags.json;
    let outcome = match &cli.flags.replay {
        Some(path) => replay(cli.command.name(), path),
        None => build_input(&cli).and_then(|input| execute(cli.command.name(), &input)),
    };
    match outcome {
        Ok(report) => Output {
            code: if report.conclusive { 0 } else { 1 },
            stdout: if json_out {
                let mut s = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
                s.push('\n');
                s
            } else {
                report.to_text()
            },
            stderr: String::new(),
        },
        Err(f) => Output {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn required<'a>(value: &'a Option<String>, what: &str) -> Result<&'a str, Failure> {
    value.as_deref().ok_or_else(|| usage(format!("missing {what} (or --replay <report>)")))
}

fn reject(flags: &[(&str, bool)], command: &str) -> Result<(), Failure> {
    match flags.iter().find(|(_, set)| *set) {
        Some((name, _)) => Err(usage(format!("{name} does not apply to {command}"))),
        None => Ok(()),
    }
}

fn build_input(cli: &Cli) -> Result<Value, Failure> {
    let f = &cli.flags;
    let name = cli.command.name();
    match &cli.command {
        Command::Genus { word } => {
            reject(&[("--pmax", f.pmax.is_some()), ("--group", f.group.is_some()), ("--seed", f.seed.is_some())], name)?;
            Ok(json!({
                "word": required(word, "word")?,
                "rank": f.rank,
                "max_genus": f.max_genus.unwrap_or(2),
                "witness_length": f.budget,
                "allow_expensive": f.allow_expensive,
            }))
        }
        Command::Growth { word } => {
            reject(&[("--budget", f.budget.is_some()), ("--group", f.group.is_some()), ("--seed", f.seed.is_some())], name)?;
            Ok(json!({
                "word": required(word, "word")?,
                "rank": f.rank,
                "pmax": f.pmax.unwrap_or(4),
                "max_genus": f.max_genus.unwrap_or(2),
                "allow_expensive": f.allow_expensive,
            }))
        }
        Command::Canonicalize { word } => {
            reject(
                &[
                    ("--budget", f.budget.is_some()),
                    ("--group", f.group.is_some()),
                    ("--pmax", f.pmax.is_some()),
                    ("--max-genus", f.max_genus.is_some()),
                    ("--seed", f.seed.is_some()),
                ],
                name,
            )?;
            Ok(json!({"word": required(word, "word")?, "n_variables": f.rank}))
        }
        Command::Elementary { hom } | Command::ReduceHom { hom } | Command::Klein { hom } | Command::Orbit { hom } => {
            reject(
                &[("--pmax", f.pmax.is_some()), ("--max-genus", f.max_genus.is_some()), ("--seed", f.seed.is_some())],
                name,
            )?;
            let mut hom = load_json(required(hom, "homomorphism")?)?;
            let target = match (&f.group, hom.get("target")) {
                (Some(g), _) => load_json(g)?,
                (None, Some(t)) if !t.is_null() => t.clone(),
                (None, _) => json!({"type": "free", "rank": f.rank.unwrap_or(2)}),
            };
            let target = GroupSpec::from_json(&target).map_err(|e| usage(e.to_string()))?;
            hom["target"] = target.to_json();
            Ok(json!({"hom": hom, "budget": f.budget.unwrap_or(DEFAULT_BUDGET)}))
        }
        Command::EndoSearch { equations } => {
            reject(
                &[
                    ("--group", f.group.is_some()),
                    ("--pmax", f.pmax.is_some()),
                    ("--max-genus", f.max_genus.is_some()),
                    ("--seed", f.seed.is_some()),
                ],
                name,
            )?;
            if equations.is_empty() {
                return Err(usage("endo-search needs at least one equation word=image"));
            }
            let pairs: Vec<Value> = equations
                .iter()
                .map(|e| {
                    e.split_once('=')
                        .map(|(l, r)| json!([l.trim(), r.trim()]))
                        .ok_or_else(|| usage(format!("equation {e:?} is not of the form word=image")))
                })
                .collect::<Result<_, _>>()?;
            Ok(json!({
                "rank": f.rank.unwrap_or(2),
                "equations": pairs,
                "max_length": f.budget.unwrap_or(DEFAULT_ENDO_LENGTH),
            }))
        }
        Command::Verify { suite } => {
            reject(
                &[
                    ("--budget", f.budget.is_some()),
                    ("--group", f.group.is_some()),
                    ("--pmax", f.pmax.is_some()),
                    ("--max-genus", f.max_genus.is_some()),
                    ("--rank", f.rank.is_some()),
                ],
                name,
            )?;
            Ok(json!({"suite": required(suite, "suite name")?, "seed": f.seed.unwrap_or(DEFAULT_SEED)}))
        }
    }
}

/// Inline JSON (starting with `{`) or a path to a JSON file.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))
}

fn cache_dir() -> PathBuf {
    std::env::var_os("QUADGROUP_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".cache"))
}

fn str_field<'a>(input: &'a Value, key: &str) -> Result<&'a str, Failure> {
    input.get(key).and_then(Value::as_str).ok_or_else(|| usage(format!("input lacks \"{key}\"")))
}

fn u64_field(input: &Value, key: &str) -> Result<u64, Failure> {
    input.get(key).and_then(Value::as_u64).ok_or_else(|| usage(format!("input lacks \"{key}\"")))
}

fn opt_u64(input: &Value, key: &str) -> Option<u64> {
    input.get(key).and_then(Value::as_u64)
}

fn execute(command: &str, input: &Value) -> Result<Report, Failure> {
    let (conclusive, result, summary) = match command {
        "genus" => genus_cmd(input)?,
        "growth" => growth_cmd(input)?,
        "canonicalize" => canonicalize_cmd(input)?,
        "elementary" | "reduce-hom" | "klein" | "orbit" => hom_cmd(command, input)?,
        "endo-search" => endo_cmd(input)?,
        "verify" => verify_cmd(input)?,
        other => return Err(usage(format!("unknown command {other}"))),
    };
    Ok(Report {
        command: command.to_string(),
        input: input.clone(),
        conclusive,
        result,
        summary,
    })
}

type Computed = (bool, Value, Vec<String>);

fn parse_word(text: &str, rank: Option<u64>) -> Result<Word, Failure> {
    let w = Word::parse(text).map_err(|e| usage(e.to_string()))?;
    if let Some(r) = rank {
        w.check_rank(r as u32).map_err(|e| usage(e.to_string()))?;
    }
    Ok(w)
}

fn genus_failure(e: GenusError) -> Failure {
    match e {
        GenusError::Unsupported { .. } => usage(e.to_string()),
        _ => domain(e.to_string()),
    }
}

fn wicks_options(input: &Value) -> WicksOptions {
    WicksOptions {
        allow_expensive: input.get("allow_expensive").and_then(Value::as_bool).unwrap_or(false),
        cache_dir: Some(cache_dir()),
    }
}

fn witness_text(w: &CommutatorWitness) -> String {
    w.tuple
        .chunks(2)
        .map(|p| format!("[{}, {}]", p[0], p[1]))
        .collect::<Vec<_>>()
        .join(" ")
}

fn genus_cmd(input: &Value) -> Result<Computed, Failure> {
    let w = parse_word(str_field(input, "word")?, opt_u64(input, "rank"))?;
    let g_max = u64_field(input, "max_genus")? as u32;
    let mut r = genus_exact(&w, g_max, &wicks_options(input)).map_err(genus_failure)?;
    let mut searched = None;
    if r.exact().is_none() {
        let g = r.lower();
        let len = opt_u64(input, "witness_length").map(|l| l as usize).unwrap_or(if g == 1 {
            DEFAULT_WITNESS_LENGTH
        } else {
            DEFAULT_MULTI_WITNESS_LENGTH
        });
        searched = Some(len);
        match genus_upper_search(&w, g, len) {
            Some(witness) => {
                r.certificates.push(format!("genus {g}: tuple search found a witness within length {len}"));
                r.status = GenusStatus::Exact { genus: g };
                r.witness = Some(witness);
            }
            None => r.certificates.push(format!("genus {g}: tuple search up to length {len} found nothing")),
        }
    }
    let mut summary = vec![format!("word: {w}")];
    summary.push(match &r.status {
        GenusStatus::Exact { genus } => format!("genus: {genus} (exact)"),
        GenusStatus::Bounds { lower, upper } => match upper {
            Some(u) => format!("genus: between {lower} and {u}"),
            None => format!("genus: at least {lower}"),
        },
    });
    if let Some(wit) = &r.witness {
        summary.push(format!("witness: {}", witness_text(wit)));
    }
    summary.extend(r.certificates.iter().map(|c| format!("certificate: {c}")));
    let mut result = serde_json::to_value(&r).expect("serializable");
    result["witness_length_searched"] = json!(searched);
    Ok((r.exact().is_some(), result, summary))
}

fn growth_cmd(input: &Value) -> Result<Computed, Failure> {
    let w = parse_word(str_field(input, "word")?, opt_u64(input, "rank"))?;
    let pmax = u64_field(input, "pmax")? as u32;
    if pmax == 0 {
        return Err(usage("--pmax must be at least 1"));
    }
    let g_max = u64_field(input, "max_genus")? as u32;
    let table = genus_growth(&w, pmax, g_max, &wicks_options(input)).map_err(genus_failure)?;
    let mut summary = vec![format!("word: {w}")];
    for row in &table.rows {
        let value = match row.result.status {
            GenusStatus::Exact { genus } => genus.to_string(),
            GenusStatus::Bounds { lower, upper } => match upper {
                Some(u) => format!("{lower}..{u}"),
                None => format!(">= {lower}"),
            },
        };
        summary.push(format!("p = {}: {value}", row.p));
        for c in &row.result.certificates {
            summary.push(format!("  certificate: {c}"));
        }
    }
    summary.push(format!("subadditivity: {}", if table.subadditive() { "holds" } else { "fails" }));
    let conclusive = table.values().iter().all(Option::is_some);
    Ok((conclusive, serde_json::to_value(&table).expect("serializable"), summary))
}

fn canonicalize_cmd(input: &Value) -> Result<Computed, Failure> {
    let w = Word::parse_variables(str_field(input, "word")?).map_err(|e| usage(e.to_string()))?;
    let n = opt_u64(input, "n_variables").map(|n| n as u32).unwrap_or(w.max_generator());
    let q = classify_quadratic(&w, n).map_err(|e| domain(format!("not quadratic: {e}")))?;
    let (form, sub) = canonicalize(&q);
    let poly = polygon_type(&q);
    let v = |x: &Word| x.to_text(Alphabet::Variables);
    let summary = vec![
        format!("word: {}", v(&w)),
        format!("cyclically reduced: {} (conjugator {})", v(q.word()), v(q.conjugator())),
        format!("canonical form: {form}: {}", v(&form.word())),
        format!("automorphism: {}", sub.images().iter().map(v).collect::<Vec<_>>().join(", ")),
        format!("moves: {}", sub.moves().len()),
    ];
    let result = json!({
        "form": form,
        "canonical_word": v(&form.word()),
        "cyclically_reduced": v(q.word()),
        "conjugator": v(q.conjugator()),
        "polygon": poly,
        "moves": sub.moves(),
        "images": sub.images().iter().map(v).collect::<Vec<_>>(),
        "inverse_images": sub.inverse_images().iter().map(v).collect::<Vec<_>>(),
    });
    Ok((true, result, summary))
}

fn surface_failure(e: SurfaceError) -> Failure {
    match e {
        SurfaceError::Relator { .. } | SurfaceError::Arity { .. } | SurfaceError::Capability(_) => domain(e.to_string()),
        SurfaceError::Spec(_) | SurfaceError::Decode(_) => usage(e.to_string()),
    }
}

fn hom_cmd(command: &str, input: &Value) -> Result<Computed, Failure> {
    let hom = input.get("hom").ok_or_else(|| usage("input lacks \"hom\""))?;
    let budget = u64_field(input, "budget")? as usize;
    let target = GroupSpec::from_json(&hom["target"]).map_err(|e| usage(e.to_string()))?;
    match target {
        GroupSpec::Free { rank } => hom_with(command, hom, budget, FreeGroup::new(rank), &[]),
        GroupSpec::Product(p) => {
            let off_list = p.off_list_factors();
            hom_with(command, hom, budget, p, &off_list)
        }
    }
}

fn hom_with<G: Group>(command: &str, hom_json: &Value, budget: usize, g: G, off_list: &[usize]) -> Result<Computed, Failure> {
    let hom = SurfaceHom::from_json(hom_json, g).map_err(surface_failure)?;
    let mut summary = vec![format!(
        "source: {}; images: {}",
        hom.spec(),
        hom.images().iter().map(|e| hom.group().format_elem(e)).collect::<Vec<_>>().join(", ")
    )];
    summary.push(format!("budget: {budget}"));
    let (conclusive, mut result) = match command {
        "elementary" if hom.spec().orientable => elementary_of(&hom, budget, &mut summary),
        "elementary" if hom.spec().genus == 2 => {
            summary.push("non-orientable source: routed to klein".into());
            let (c, mut r) = klein_of(&hom, budget, &mut summary)?;
            r["routed_to"] = json!("klein");
            (c, r)
        }
        "elementary" => {
            summary.push("non-orientable source: routed to reduce-hom".into());
            let (c, mut r) = reduce_of(&hom, budget, &mut summary);
            r["routed_to"] = json!("reduce-hom");
            (c, r)
        }
        "reduce-hom" => reduce_of(&hom, budget, &mut summary),
        "klein" => klein_of(&hom, budget, &mut summary)?,
        _ => orbit_of(&hom, budget, &mut summary),
    };
    if !off_list.is_empty() {
        summary.push(format!("warning: factors {off_list:?} are off the list; no certificate is guaranteed"));
    }
    result["off_list_factors"] = json!(off_list);
    Ok((conclusive, result, summary))
}

fn moves_text<G: Group>(g: &G, cert: &Certificate<G::Elem>) -> String {
    if cert.moves.is_empty() {
        return "(none)".into();
    }
    cert.moves
        .iter()
        .map(|m| m.to_json(g).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn tuple_text<G: Group>(g: &G, t: &[G::Elem]) -> String {
    format!("({})", t.iter().map(|e| g.format_elem(e)).collect::<Vec<_>>().join(", "))
}

fn elementary_of<G: Group>(hom: &SurfaceHom<G>, budget: usize, summary: &mut Vec<String>) -> (bool, Value) {
    let g = hom.group();
    match elementary_check(hom, budget).expect("orientable") {
        ElementaryOutcome::Certificate { certificate, expanded } => {
            let free = factors_through_free(hom, &certificate);
            summary.push(format!("elementary: certificate with {} moves, {expanded} nodes expanded", certificate.moves.len()));
            summary.push(format!("moves: {}", moves_text(g, &certificate)));
            summary.push(format!("terminal: {}", tuple_text(g, &certificate.terminal)));
            summary.push(format!("factors through the free group on the v-slots: {free}"));
            (
                true,
                json!({
                    "outcome": "certificate",
                    "certificate": certificate.to_json(g),
                    "expanded": expanded,
                    "factors_through_free": free,
                }),
            )
        }
        ElementaryOutcome::Exhausted { expanded, budget } => {
            summary.push(format!("exhausted: {expanded} nodes expanded within budget {budget}; this is not a disproof"));
            (false, json!({"outcome": "exhausted", "expanded": expanded, "budget": budget}))
        }
    }
}

fn reduce_of<G: Group>(hom: &SurfaceHom<G>, budget: usize, summary: &mut Vec<String>) -> (bool, Value) {
    let g = hom.group();
    let dec = genus_reduce(hom, budget);
    let report = verify_decomposition(hom, &dec).expect("same source");
    for p in dec.pieces() {
        summary.push(match p {
            Piece::Surface {
                spec,
                images,
                certification,
                ..
            } => format!(
                "piece: surface {spec} {} [{}]",
                tuple_text(g, images),
                match certification {
                    Certification::EssentiallyInjectiveWithinBudget { budget, orbit_complete } => {
                        format!("essentially injective within budget {budget}, orbit complete: {orbit_complete}")
                    }
                    Certification::Unknown { reason } => format!("unknown: {reason}"),
                }
            ),
            Piece::Circle { image, conjugator } => {
                format!("piece: circle {} conjugated by {}", g.format_elem(image), g.format_elem(conjugator))
            }
            Piece::Projective { image, conjugator } => {
                format!("piece: projective {} conjugated by {}", g.format_elem(image), g.format_elem(conjugator))
            }
        });
    }
    summary.push(format!("defect: {}", dec.defect()));
    summary.push(format!("verification: {}", if report.passed() { "pass" } else { "fail" }));
    let conclusive = !dec
        .pieces()
        .iter()
        .any(|p| matches!(p, Piece::Surface { certification: Certification::Unknown { .. }, .. }));
    let mut result = dec.to_json(g);
    result["verification"] = serde_json::to_value(&report).expect("serializable");
    (conclusive, result)
}

fn klein_of<G: Group>(hom: &SurfaceHom<G>, budget: usize, summary: &mut Vec<String>) -> Result<(bool, Value), Failure> {
    let g = hom.group();
    match klein_classify(hom, budget).map_err(surface_failure)? {
        KleinOutcome::Case {
            case,
            certificate,
            decomposition,
        } => {
            let report = verify_decomposition(hom, &decomposition).expect("same source");
            summary.push(format!("case: {case:?}"));
            summary.push(format!("moves: {}", moves_text(g, &certificate)));
            summary.push(format!("terminal: {}", tuple_text(g, &certificate.terminal)));
            summary.push(format!("decomposition verification: {}", if report.passed() { "pass" } else { "fail" }));
            Ok((
                true,
                json!({
                    "outcome": "case",
                    "case": case,
                    "certificate": certificate.to_json(g),
                    "decomposition": decomposition.to_json(g),
                    "verification": report,
                }),
            ))
        }
        KleinOutcome::EssentiallyInjectiveWithinBudget { budget, expanded } => {
            summary.push(format!("no case within budget {budget} ({expanded} nodes expanded)"));
            Ok((
                false,
                json!({"outcome": "essentially_injective_within_budget", "budget": budget, "expanded": expanded}),
            ))
        }
    }
}

fn orbit_of<G: Group>(hom: &SurfaceHom<G>, budget: usize, summary: &mut Vec<String>) -> (bool, Value) {
    let moves = generating_moves(hom.spec());
    let mut classes = 0usize;
    let outcome = orbit_search(hom.group(), hom.images(), &moves, budget, Dedup::Conjugacy, |_| {
        classes += 1;
        None::<()>
    });
    let (expanded, complete) = match outcome {
        SearchOutcome::Exhausted { expanded, orbit_complete } => (expanded, orbit_complete),
        SearchOutcome::Found { expanded, .. } => (expanded, false),
    };
    summary.push(format!(
        "{classes} conjugacy classes of tuples, {expanded} nodes expanded, orbit {}",
        if complete { "complete" } else { "not exhausted" }
    ));
    (
        complete,
        json!({"classes": classes, "expanded": expanded, "orbit_complete": complete}),
    )
}

fn endo_cmd(input: &Value) -> Result<Computed, Failure> {
    let rank = u64_field(input, "rank")? as u32;
    if rank == 0 {
        return Err(usage("--rank must be positive"));
    }
    let max_len = u64_field(input, "max_length")? as usize;
    let equations: Vec<(Word, Word)> = input
        .get("equations")
        .and_then(Value::as_array)
        .ok_or_else(|| usage("input lacks \"equations\""))?
        .iter()
        .map(|e| {
            let l = e.get(0).and_then(Value::as_str).ok_or_else(|| usage("equation sides are strings"))?;
            let r = e.get(1).and_then(Value::as_str).ok_or_else(|| usage("equation sides are strings"))?;
            Ok((parse_word(l, Some(rank as u64))?, parse_word(r, Some(rank as u64))?))
        })
        .collect::<Result<_, Failure>>()?;
    let pool: Vec<Word> = enumerate_words(rank, max_len).collect();
    let total = (pool.len() as u128).pow(rank);
    if total > 50_000_000 {
        return Err(usage(format!("{total} endomorphisms exceed the search limit; lower --budget or --rank")));
    }
    let mut idx = vec![0usize; rank as usize];
    let mut hits: Vec<Vec<String>> = Vec::new();
    let mut count = 0usize;
    loop {
        let images: Vec<Word> = idx.iter().map(|&i| pool[i].clone()).collect();
        if equations.iter().all(|(l, r)| l.substitute(&images) == *r) {
            count += 1;
            if hits.len() < 20 {
                hits.push(images.iter().map(|w| w.to_string()).collect());
            }
        }
        let Some(pos) = (0..idx.len()).rev().find(|&p| idx[p] + 1 < pool.len()) else {
            break;
        };
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|i| *i = 0);
    }
    let mut summary = vec![
        format!(
            "equations: {}",
            equations.iter().map(|(l, r)| format!("φ({l}) = {r}")).collect::<Vec<_>>().join(", ")
        ),
        format!("searched {total} endomorphisms with generator images of length at most {max_len}"),
        format!("solutions: {count}"),
    ];
    for h in &hits {
        summary.push(format!("  φ = ({})", h.join(", ")));
    }
    Ok((
        true,
        json!({"searched": total as u64, "solutions": count, "first_solutions": hits}),
        summary,
    ))
}

fn verify_cmd(input: &Value) -> Result<Computed, Failure> {
    let suite = str_field(input, "suite")?;
    let opts = SuiteOptions {
        seed: u64_field(input, "seed")?,
        cache_dir: Some(cache_dir()),
    };
    let report = run_suite(suite, &opts).map_err(|e| usage(e.to_string()))?;
    let mut summary = vec![report.to_string()];
    summary.extend(report.notes.iter().map(|n| format!("note: {n}")));
    Ok((report.passed, serde_json::to_value(&report).expect("serializable"), summary))
}

fn replay(command: &str, path: &Path) -> Result<Report, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let stored: Value = serde_json::from_str(&text).map_err(|e| usage(format!("invalid report: {e}")))?;
    if stored.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION as u64) {
        return Err(usage(format!("report schema version is not {SCHEMA_VERSION}")));
    }
    let stored_command = stored.get("command").and_then(Value::as_str).unwrap_or_default();
    if stored_command != command {
        return Err(usage(format!("report is for {stored_command:?}, not {command:?}")));
    }
    let input = stored.get("input").ok_or_else(|| usage("report lacks \"input\""))?;
    let result = stored.get("result").ok_or_else(|| usage("report lacks \"result\""))?;
    let checks = check_stored(command, input, result)?;
    let fresh = execute(command, input)?;
    let reproduced = fresh.result == *result;
    let mut summary = vec![format!("replayed {command} report {}", path.display())];
    summary.extend(checks.iter().map(|c| format!("check: {c}")));
    summary.push(format!("recomputed result matches: {reproduced}"));
    if !reproduced {
        return Err(domain(format!("{}\nrecomputed result differs from the report", summary.join("\n"))));
    }
    Ok(Report {
        command: command.to_string(),
        input: input.clone(),
        conclusive: fresh.conclusive,
        result: json!({"replayed": true, "checks": checks, "reproduced": reproduced}),
        summary,
    })
}

/// Verify the certificates in a stored result without recomputing them.
fn check_stored(command: &str, input: &Value, result: &Value) -> Result<Vec<String>, Failure> {
    let mut checks = Vec::new();
    match command {
        "genus" | "growth" => {
            let w = parse_word(str_field(input, "word")?, opt_u64(input, "rank"))?;
            let rows: Vec<(u32, &Value)> = if command == "genus" {
                vec![(1, result)]
            } else {
                result
                    .get("rows")
                    .and_then(Value::as_array)
                    .map(|rows| {
                        rows.iter()
                            .map(|r| (r.get("p").and_then(Value::as_u64).unwrap_or(0) as u32, &r["result"]))
                            .collect()
                    })
                    .unwrap_or_default()
            };
            for (p, row) in rows {
                let Some(tuple) = row.get("witness").and_then(|x| x.get("tuple")).and_then(Value::as_array) else {
                    continue;
                };
                let tuple = tuple
                    .iter()
                    .map(|x| parse_word(x.as_str().unwrap_or("?"), None))
                    .collect::<Result<Vec<_>, _>>()?;
                let label = if command == "genus" { "witness".to_string() } else { format!("witness for p = {p}") };
                if !(CommutatorWitness { tuple }).verifies(&w.pow(p as i64)) {
                    return Err(domain(format!("stored {label} does not multiply out")));
                }
                checks.push(format!("{label} multiplies out"));
            }
        }
        "canonicalize" => {
            let w = Word::parse_variables(str_field(input, "word")?).map_err(|e| usage(e.to_string()))?;
            let n = opt_u64(input, "n_variables").map(|n| n as u32).unwrap_or(w.max_generator());
            let q = classify_quadratic(&w, n).map_err(|e| domain(e.to_string()))?;
            let moves: Vec<QMove> = serde_json::from_value(result["moves"].clone()).map_err(|e| usage(e.to_string()))?;
            let canonical = Word::parse_variables(str_field(result, "canonical_word")?).map_err(|e| usage(e.to_string()))?;
            let reached = Substitution::from_moves(n, &moves).replay(q.word());
            let canonical = if canonical.to_text(Alphabet::Variables) == "1" { Word::identity() } else { canonical };
            if reached != canonical {
                return Err(domain("stored moves do not reach the canonical word"));
            }
            checks.push(format!("{} moves replay to the canonical word", moves.len()));
        }
        "elementary" | "klein"
            if result.get("certificate").is_some() => {
                let hom = &input["hom"];
                let target = GroupSpec::from_json(&hom["target"]).map_err(|e| usage(e.to_string()))?;
                let ok = match target {
                    GroupSpec::Free { rank } => replays(hom, &result["certificate"], FreeGroup::new(rank))?,
                    GroupSpec::Product(p) => replays(hom, &result["certificate"], p)?,
                };
                if !ok {
                    return Err(domain("stored certificate does not replay"));
                }
                checks.push("certificate replays to its terminal tuple".into());
            }
        _ => {}
    }
    Ok(checks)
}

fn replays<G: Group>(hom: &Value, cert: &Value, g: G) -> Result<bool, Failure> {
    let hom = SurfaceHom::from_json(hom, g).map_err(surface_failure)?;
    let cert = Certificate::from_json(cert, hom.group()).map_err(surface_failure)?;
    Ok(cert.replays(hom.group(), hom.images()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("quadgroup").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn input_records_defaults() {
        let input = build_input(&parsed(&["genus", "abAB"])).unwrap();
        assert_eq!(input["word"], "abAB");
        assert_eq!(input["max_genus"], 2);
        let input = build_input(&parsed(&["growth", "abAB", "--pmax", "4"])).unwrap();
        assert_eq!(input["pmax"], 4);
    }

    #[test]
    fn inapplicable_flags_are_usage_errors() {
        let err = build_input(&parsed(&["canonicalize", "xx", "--seed", "3"])).unwrap_err();
        assert_eq!(err.code(), 2);
        assert!(err.message().contains("--seed"));
    }

    #[test]
    fn words_respect_rank() {
        assert!(parse_word("abc", Some(2)).is_err());
        assert!(parse_word("abc", Some(3)).is_ok());
        assert!(parse_word("ab", None).is_ok());
    }

    #[test]
    fn inline_json_is_accepted() {
        assert_eq!(load_json(r#"{"type":"free","rank":2}"#).unwrap()["rank"], 2);
        assert_eq!(load_json("/no/such/file.json").unwrap_err().code(), 2);
    }
}
