//! Command-line surface: argument parsing and dispatch to the library.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use strat_core::anodyne::{
    base_case_witness, cone_certificate, prism_certificate, spine_certificate, verify_certificate, CellCertificate,
    WitnessError,
};
use strat_core::decollage::{adjunction_check, base_change_iso, is_decollage, nerve_presheaf, segal_map, DecollageError, Presheaf};
use strat_core::homotopy::{strata_links_equiv, VerdictBudget};
use strat_core::poset::{all_strings, ElemId, PString, Poset};
use strat_core::simplicial::{iso_check, Budget, SimplicialError};
use strat_core::stratified::{
    classify_horn, fibrant_replace_nv, generating_set, is_fibrant, is_fibrant_bounded, vex, GeneratorKind, StratError,
    StratMap, StratSSet,
};
use strat_core::anodyne::non_lifting_witness;
use strat_realization::{appendix_suite, Orientation, SuiteConfig};
use thiserror::Error;

use crate::format::{ParseError, Workspace};
use crate::report::{Format, Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{command}: {message}")]
    Module { command: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 3,
            CliError::Module { .. } => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "stratctl", version, about = "Checks on finite stratified simplicial sets")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,
    /// Highest dimension for lifting and homology checks.
    #[arg(long, default_value_t = 3, global = true)]
    pub max_dim: usize,
    /// Stage limit for fibrant replacement.
    #[arg(long, default_value_t = 4, global = true)]
    pub max_stages: usize,
    /// Candidate limit for each map search.
    #[arg(long, default_value_t = Budget::DEFAULT_CANDIDATES, global = true)]
    pub budget: u64,
    /// Largest denominator of barycentric sample points.
    #[arg(long, default_value_t = 6, global = true)]
    pub grid: usize,
    /// Evaluate the retraction with the swapped orientation (shrink inside Σ).
    #[arg(long, global = true)]
    pub printed_orientation: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a poset comes from when one is needed without an object.
#[derive(Args, Debug, Clone)]
pub struct PosetSource {
    /// File holding the poset.
    #[arg(long, requires = "poset")]
    pub file: Option<PathBuf>,
    /// Poset name in `--file`.
    #[arg(long, requires = "file")]
    pub poset: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fibrancy of stratified objects (all in the file if none is named).
    CheckFibrant { file: PathBuf, names: Vec<String> },
    /// Classify the horn (n, k) for the given labels, n = #labels - 1.
    ClassifyHorn {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<String>,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        source: PosetSource,
    },
    /// List a named generating set.
    GenSet {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        /// Use the chain [N] as the poset.
        #[arg(long, conflicts_with = "file")]
        chain: Option<usize>,
        #[command(flatten)]
        source: PosetSource,
    },
    /// Stratum-preserving fibrant replacement by non-vertical inner horns.
    Replace {
        file: PathBuf,
        name: String,
        /// Write the result and its certificate here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply Ex^m on every stratum.
    Vex {
        file: PathBuf,
        name: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Segal condition of a presheaf, or of the nerve presheaf of an object.
    DecollageCheck { file: PathBuf, name: String },
    /// Segal map at one string (all strings of length ≥ 3 if omitted).
    Segal {
        file: PathBuf,
        presheaf: String,
        #[arg(long)]
        string: Option<String>,
    },
    /// Strata and links criterion for a stratified map.
    LinksEquiv {
        file: PathBuf,
        /// Map name.
        #[arg(required_unless_present = "identity")]
        map: Option<String>,
        /// Check the identity of this object instead.
        #[arg(long, conflicts_with = "map")]
        identity: Option<String>,
    },
    /// Build and verify a certificate.
    Certify {
        #[command(subcommand)]
        kind: CertifyKind,
        /// Write the certificate with its start and end here.
        #[arg(long, global = true)]
        output: Option<PathBuf>,
        /// Name of the written certificate.
        #[arg(long, default_value = "cert", global = true)]
        name: String,
    },
    /// Replay certificates (all in the file if none is named).
    VerifyCert { file: PathBuf, names: Vec<String> },
    /// The base-case cube for labels (p, p, q).
    BaseCase {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<String>,
        /// Truncation of the objects built (default: --max-dim).
        #[arg(long)]
        trunc: Option<usize>,
        #[command(flatten)]
        source: PosetSource,
    },
    /// A square against a non-trivial horn with no lift.
    NonLift {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<String>,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        source: PosetSource,
    },
    /// Unit, counit and triangle identities for a presheaf and an object.
    Adjunction { file: PathBuf, presheaf: String, object: String },
    /// Base change along strings (all strings if omitted).
    BaseChange {
        file: PathBuf,
        presheaf: String,
        #[arg(long)]
        string: Option<String>,
    },
    /// Sampled checks of the explicit homotopy formulas.
    AppendixEval {
        /// Posets with at most this many elements.
        #[arg(long, default_value_t = 4)]
        max_poset: usize,
        /// Largest denominator of time parameters.
        #[arg(long, default_value_t = 3)]
        time_density: usize,
        /// Largest denominator for mapping path space samples.
        #[arg(long, default_value_t = 3)]
        mapping_density: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CertifyKind {
    /// Spine inclusion into Δ^n.
    Spine { n: usize },
    /// Prism over a labelled simplex.
    Prism {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<String>,
        #[command(flatten)]
        source: PosetSource,
    },
    /// Cone X ⋊ Δ^0 ↪ X ⋊ Δ^n.
    Cone { file: PathBuf, object: String, n: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckFibrant { .. } => "check-fibrant",
            Command::ClassifyHorn { .. } => "classify-horn",
            Command::GenSet { .. } => "gen-set",
            Command::Replace { .. } => "replace",
            Command::Vex { .. } => "vex",
            Command::DecollageCheck { .. } => "decollage-check",
            Command::Segal { .. } => "segal",
            Command::LinksEquiv { .. } => "links-equiv",
            Command::Certify { .. } => "certify",
            Command::VerifyCert { .. } => "verify-cert",
            Command::BaseCase { .. } => "base-case",
            Command::NonLift { .. } => "non-lift",
            Command::Adjunction { .. } => "adjunction",
            Command::BaseChange { .. } => "base-change",
            Command::AppendixEval { .. } => "appendix-eval",
        }
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 3 }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome { stdout: report.emit(cli.format), stderr: String::new(), code: report.status().exit_code() },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

pub fn load(path: &Path) -> Result<Workspace, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    Workspace::parse(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn write_doc(path: &Path, ws: &Workspace) -> Result<(), CliError> {
    std::fs::write(path, ws.serialize()).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Budget exhaustion, if that is what the error is.
fn budget_of(e: &SimplicialError) -> Option<(String, u64)> {
    match e {
        SimplicialError::Budget { resource, limit } => Some((resource.clone(), *limit)),
        _ => None,
    }
}

trait ModuleError: std::fmt::Display {
    fn budget(&self) -> Option<(String, u64)>;
}

impl ModuleError for StratError {
    fn budget(&self) -> Option<(String, u64)> {
        match self {
            StratError::Simplicial(e) => budget_of(e),
            StratError::Stages(n) => Some(("stages".into(), *n as u64)),
            _ => None,
        }
    }
}

impl ModuleError for DecollageError {
    fn budget(&self) -> Option<(String, u64)> {
        match self {
            DecollageError::Simplicial(e) => budget_of(e),
            DecollageError::Strat(e) => e.budget(),
            _ => None,
        }
    }
}

impl ModuleError for WitnessError {
    fn budget(&self) -> Option<(String, u64)> {
        match self {
            WitnessError::Simplicial(e) => budget_of(e),
            WitnessError::Strat(e) => e.budget(),
            _ => None,
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    report: Report,
}

impl Ctx<'_> {
    fn budget(&self) -> Budget {
        Budget::new(self.cli.budget)
    }

    fn verdict_budget(&self) -> VerdictBudget {
        VerdictBudget { max_dim: self.cli.max_dim, search: self.budget(), homotopy_search: true }
    }

    /// `Ok(Some(v))`, or records budget exhaustion as unknown and returns
    /// `Ok(None)`; other errors abort the command.
    fn attempt<T, E: ModuleError>(&mut self, kind: &str, subject: &str, r: Result<T, E>) -> Result<Option<T>, CliError> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) => match e.budget() {
                Some((resource, limit)) => {
                    self.report.push(
                        kind,
                        Status::Unknown,
                        [("subject", subject.to_string()), ("resource", resource), ("limit", limit.to_string())],
                    );
                    Ok(None)
                }
                None => Err(self.module(format!("{subject}: {e}"))),
            },
        }
    }

    fn module(&self, message: impl Into<String>) -> CliError {
        CliError::Module { command: self.report.command.clone(), message: message.into() }
    }
}

fn resolve<'a, T>(map: &'a std::collections::BTreeMap<String, T>, what: &str, name: &str) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| CliError::Usage(format!("no {what} named `{name}`")))
}

/// The poset from `--file/--poset`, or the chain on the labels in order of
/// first appearance.
fn poset_for(source: &PosetSource, labels: &[String]) -> Result<(Arc<Poset>, Vec<ElemId>), CliError> {
    let base = match (&source.file, &source.poset) {
        (Some(f), Some(p)) => resolve(&load(f)?.posets, "poset", p)?.clone(),
        _ => {
            let mut names: Vec<&str> = Vec::new();
            for l in labels {
                if !names.contains(&l.as_str()) {
                    names.push(l);
                }
            }
            let rels: Vec<(String, String)> = names.windows(2).map(|w| (w[0].to_string(), w[1].to_string())).collect();
            Arc::new(Poset::new(names.iter().map(|s| s.to_string()), &rels).map_err(|e| CliError::Usage(e.to_string()))?)
        }
    };
    let ids = labels.iter().map(|l| base.id(l).map_err(|e| CliError::Usage(e.to_string()))).collect::<Result<_, _>>()?;
    Ok((base, ids))
}

fn labels_text(p: &Poset, labels: &[ElemId]) -> String {
    labels.iter().map(|&l| p.name(l)).collect::<Vec<_>>().join(",")
}

fn counts(x: &StratSSet) -> String {
    x.total().cell_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn names_or_all<T>(map: &std::collections::BTreeMap<String, T>, names: &[String]) -> Vec<String> {
    if names.is_empty() {
        map.keys().cloned().collect()
    } else {
        names.to_vec()
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let mut cx = Ctx { cli, report: Report::new(cli.command.name()) };
    match &cli.command {
        Command::CheckFibrant { file, names } => check_fibrant(&mut cx, &load(file)?, names)?,
        Command::ClassifyHorn { labels, k, source } => {
            let (base, ids) = poset_for(source, labels)?;
            let n = ids.len().checked_sub(1).ok_or_else(|| CliError::Usage("no labels".into()))?;
            let class = classify_horn(&base, &ids, n, *k).map_err(|e| cx.module(e.to_string()))?;
            cx.report.push(
                "horn",
                Status::Pass,
                [("n", n.to_string()), ("k", k.to_string()), ("labels", labels_text(&base, &ids)), ("class", class.to_string())],
            );
        }
        Command::GenSet { kind, max_n, chain, source } => {
            let kind: GeneratorKind = kind.parse().map_err(CliError::Usage)?;
            let base = match (&source.file, &source.poset) {
                (Some(f), Some(p)) => resolve(&load(f)?.posets, "poset", p)?.clone(),
                _ => Arc::new(Poset::chain(chain.unwrap_or(1))),
            };
            let set = generating_set(&base, kind, *max_n);
            let valid = set.validate();
            for item in &set.items {
                cx.report.push("item", Status::Pass, [("horn", item.display(&base))]);
            }
            let mut fields = vec![("kind", kind.to_string()), ("max_n", max_n.to_string()), ("size", set.items.len().to_string())];
            if let Err(e) = &valid {
                fields.push(("invalid", e.clone()));
            }
            cx.report.push("summary", Status::of_bool(valid.is_ok()), fields);
        }
        Command::Replace { file, name, output } => replace(&mut cx, &load(file)?, name, output.as_deref())?,
        Command::Vex { file, name, m } => {
            let ws = load(file)?;
            let x = resolve(&ws.strats, "stratified object", name)?;
            if let Some((y, inc)) = cx.attempt("vex", name, vex(x, *m, cli.max_dim, cx.budget()))? {
                let mut fields = vec![
                    ("object", name.clone()),
                    ("m", m.to_string()),
                    ("source_cells", counts(inc.source())),
                    ("result_cells", counts(&y)),
                    ("inclusion_injective", inc.map().is_injective().to_string()),
                ];
                let base = x.base().clone();
                for p in base.elements() {
                    let n = y.stratum(p).map(|(s, _)| s.cell_counts()).unwrap_or_default();
                    fields.push(("stratum", format!("{}:{}", base.name(p), n.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))));
                }
                cx.report.push("vex", Status::of_bool(inc.map().is_injective()), fields);
            }
        }
        Command::DecollageCheck { file, name } => {
            let ws = load(file)?;
            let vb = cx.verdict_budget();
            let owned;
            let f: &Presheaf = if let Some(f) = ws.presheaves.get(name) {
                f
            } else if let Some(x) = ws.strats.get(name) {
                match cx.attempt("decollage", name, nerve_presheaf(x, cli.max_dim, cx.budget()))? {
                    Some(n) => {
                        owned = n.presheaf;
                        &owned
                    }
                    None => return Ok(cx.report),
                }
            } else {
                return Err(CliError::Usage(format!("no presheaf or stratified object named `{name}`")));
            };
            if let Some(v) = cx.attempt("decollage", name, is_decollage(f, &vb))? {
                cx.report.verdict("decollage", vec![("presheaf", name.clone())], &v);
            }
        }
        Command::Segal { file, presheaf, string } => {
            let ws = load(file)?;
            let f = resolve(&ws.presheaves, "presheaf", presheaf)?;
            let idx: Vec<usize> = match string {
                Some(s) => vec![f.parse_string(s).map_err(|e| CliError::Usage(e.to_string()))?],
                None => (0..f.strings().len()).filter(|&i| f.strings()[i].len() >= 3).collect(),
            };
            let vb = cx.verdict_budget();
            for i in idx {
                let label = f.display(i);
                if let Some((_, v)) = cx.attempt("segal", &label, segal_map(f, i, &vb))? {
                    cx.report.verdict("segal", vec![("string", label)], &v);
                }
            }
        }
        Command::LinksEquiv { file, map, identity } => {
            let ws = load(file)?;
            let (label, f) = match (map, identity) {
                (_, Some(x)) => (format!("id_{x}"), StratMap::identity(resolve(&ws.strats, "stratified object", x)?.clone())),
                (Some(m), None) => (m.clone(), resolve(&ws.maps, "map", m)?.clone()),
                (None, None) => return Err(CliError::Usage("name a map or pass --identity".into())),
            };
            let v = strata_links_equiv(&f, &cx.verdict_budget());
            cx.report.verdict("links-equiv", vec![("map", label)], &v);
        }
        Command::Certify { kind, output, name } => certify(&mut cx, kind, output.as_deref(), name)?,
        Command::VerifyCert { file, names } => {
            let ws = load(file)?;
            for n in names_or_all(&ws.certs, names) {
                let c = resolve(&ws.certs, "certificate", &n)?;
                report_cert(&mut cx, &n, c);
            }
        }
        Command::BaseCase { labels, trunc, source } => {
            let (base, ids) = poset_for(source, labels)?;
            let trunc = trunc.unwrap_or(cli.max_dim);
            if let Some(r) = cx.attempt("base-case", &labels.join(","), base_case_witness(&base, &ids, trunc))? {
                let mut fields = vec![
                    ("labels", labels_text(&base, &ids)),
                    ("trunc", trunc.to_string()),
                    ("back_face_iso", r.back_face_iso.to_string()),
                    ("front_face_pushout", r.front_face_pushout.to_string()),
                    ("l20_vertices", r.l20_vertices.to_string()),
                    ("simplex_in_d20", r.simplex_in_d20.to_string()),
                ];
                for (m, valid, inj, lab) in &r.maps {
                    fields.push(("map", format!("{m}:valid={valid},injective={inj},over_base={lab}")));
                }
                cx.report.push("base-case", Status::of_bool(r.ok()), fields);
            }
        }
        Command::NonLift { labels, k, source } => {
            let (base, ids) = poset_for(source, labels)?;
            let n = ids.len().checked_sub(1).ok_or_else(|| CliError::Usage("no labels".into()))?;
            if let Some(w) = cx.attempt("non-lift", &labels.join(","), non_lifting_witness(&base, &ids, n, *k, cx.budget()))? {
                let recheck = w.recheck(cx.budget());
                let fields = vec![
                    ("horn", w.item.display(&base)),
                    ("candidate_maps", w.candidate_maps.to_string()),
                    ("lifts", w.lifts.to_string()),
                    ("explored", w.explored.to_string()),
                    ("target_fibrant", w.target_fibrant.outcome().to_string()),
                    ("recheck", recheck.clone().err().unwrap_or_else(|| "ok".into())),
                    ("description", w.description.clone()),
                ];
                let ok = w.lifts == 0 && w.target_fibrant.is_equivalent() && recheck.is_ok();
                cx.report.push("non-lift", Status::of_bool(ok), fields);
            }
        }
        Command::Adjunction { file, presheaf, object } => {
            let ws = load(file)?;
            let f = resolve(&ws.presheaves, "presheaf", presheaf)?;
            let x = resolve(&ws.strats, "stratified object", object)?;
            if let Some(r) = cx.attempt("adjunction", presheaf, adjunction_check(f, x, cli.max_dim, cx.budget()))? {
                for u in &r.units {
                    let dim = u.dim.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                    cx.report.push(
                        "unit",
                        Status::of_bool(u.valid),
                        [("string", u.string.clone()), ("dim", dim), ("injective", u.injective.to_string()), ("iso", u.iso.to_string())],
                    );
                }
                cx.report.push(
                    "counit",
                    Status::of_bool(r.counit.is_ok()),
                    [("object", object.clone()), ("result", r.counit.clone().err().unwrap_or_else(|| "ok".into()))],
                );
                for (kind, t) in [("triangle-left", r.triangle_left), ("triangle-right", r.triangle_right)] {
                    cx.report.push(
                        kind,
                        Status::of_bool(t.failed == 0),
                        [("checked", t.checked), ("failed", t.failed), ("skipped", t.skipped)],
                    );
                }
            }
        }
        Command::BaseChange { file, presheaf, string } => {
            let ws = load(file)?;
            let f = resolve(&ws.presheaves, "presheaf", presheaf)?;
            let sigmas: Vec<PString> = match string {
                Some(s) => vec![PString::parse(f.base(), s).map_err(|e| CliError::Usage(e.to_string()))?],
                None => all_strings(f.base()),
            };
            for s in sigmas {
                let label = s.display(f.base());
                match base_change_iso(f, &s) {
                    Ok(b) => cx.report.push(
                        "base-change",
                        Status::of_bool(b.adjunction.is_ok()),
                        [
                            ("string", label),
                            ("lhs_cells", counts(&b.lhs)),
                            ("rhs_cells", counts(&b.rhs)),
                            ("adjunction", b.adjunction.clone().err().unwrap_or_else(|| "ok".into())),
                        ],
                    ),
                    Err(e @ DecollageError::NotIso(_)) => {
                        cx.report.push("base-change", Status::Fail, [("string", label), ("error", e.to_string())])
                    }
                    Err(e) => {
                        cx.attempt::<(), _>("base-change", &label, Err(e))?;
                    }
                }
            }
        }
        Command::AppendixEval { max_poset, time_density, mapping_density } => {
            let cfg = SuiteConfig {
                max_poset: *max_poset,
                density: cli.grid,
                time_density: *time_density,
                mapping_density: *mapping_density,
                orientation: if cli.printed_orientation { Orientation::Printed } else { Orientation::Corrected },
            };
            let r = appendix_suite(&cfg);
            for t in &r.tallies {
                let mut fields = vec![("check", t.name.clone()), ("checked", t.checked.to_string()), ("failed", t.failed.to_string())];
                if let Some(f) = &t.first_failure {
                    fields.push(("first_failure", f.clone()));
                }
                cx.report.push("identity", Status::of_bool(t.failed == 0 && t.checked > 0), fields);
            }
            let orientation = if cli.printed_orientation { "printed" } else { "corrected" };
            cx.report.push(
                "summary",
                Status::of_bool(r.ok()),
                [
                    ("posets", r.posets.to_string()),
                    ("grid", cli.grid.to_string()),
                    ("time_density", time_density.to_string()),
                    ("mapping_density", mapping_density.to_string()),
                    ("orientation", orientation.to_string()),
                ],
            );
        }
    }
    Ok(cx.report)
}

fn check_fibrant(cx: &mut Ctx<'_>, ws: &Workspace, names: &[String]) -> Result<(), CliError> {
    let (d, b) = (cx.cli.max_dim, cx.budget());
    for n in names_or_all(&ws.strats, names) {
        let x = resolve(&ws.strats, "stratified object", &n)?;
        let v = is_fibrant(x, d, b);
        let tier = if x.presentation().is_some() { "exact" } else { "bounded" };
        cx.report.verdict("fibrancy", vec![("object", n.clone()), ("tier", tier.into()), ("max_dim", d.to_string())], &v);
        if x.presentation().is_some() {
            // cross-check against the horn-filling tier
            let bounded = is_fibrant_bounded(x, d, b);
            let agree = bounded.is_unknown() || bounded.is_equivalent() == v.is_equivalent() || v.is_unknown();
            cx.report.push(
                "tier-agreement",
                Status::of_bool(agree),
                [("object", n.clone()), ("exact", v.outcome().to_string()), ("bounded", bounded.outcome().to_string())],
            );
        }
    }
    Ok(())
}

fn report_cert(cx: &mut Ctx<'_>, name: &str, c: &CellCertificate) {
    let r = verify_certificate(c, cx.budget());
    let base = c.start.base();
    let steps_ok = c.steps.iter().all(|s| c.kind.contains(base, &s.item));
    cx.report.push(
        "certificate",
        Status::of_bool(r.ok && steps_ok),
        [
            ("name", name.to_string()),
            ("kind", c.kind.to_string()),
            ("steps", c.steps.len().to_string()),
            ("start_cells", counts(&c.start)),
            ("end_cells", counts(&c.claimed_end)),
            ("failed_step", r.failed_step.map(|i| i.to_string()).unwrap_or_else(|| "-".into())),
            ("message", r.message),
        ],
    );
}

fn certify(cx: &mut Ctx<'_>, kind: &CertifyKind, output: Option<&Path>, name: &str) -> Result<(), CliError> {
    let b = cx.budget();
    let (what, made) = match kind {
        CertifyKind::Spine { n } => (format!("spine({n})"), spine_certificate(*n, b)),
        CertifyKind::Prism { labels, source } => {
            let (base, ids) = poset_for(source, labels)?;
            (format!("prism({})", labels_text(&base, &ids)), prism_certificate(&base, &ids, b))
        }
        CertifyKind::Cone { file, object, n } => {
            let ws = load(file)?;
            let x = resolve(&ws.strats, "stratified object", object)?;
            (format!("cone({object},{n})"), cone_certificate(x, *n, b))
        }
    };
    let Some(c) = cx.attempt("certificate", &what, made)? else { return Ok(()) };
    report_cert(cx, &what, &c);
    if let Some(path) = output {
        let mut ws = Workspace::new();
        let (start, end) = (format!("{name}_start"), format!("{name}_end"));
        let doc = (|| {
            ws.add_strat(&start, "P", &c.start)?;
            ws.add_strat(&end, "P", &c.claimed_end)?;
            ws.add_cert(name, &c, &start, &end)
        })();
        doc.map_err(|e| cx.module(format!("serializing certificate: {e}")))?;
        write_doc(path, &ws)?;
    }
    Ok(())
}

fn replace(cx: &mut Ctx<'_>, ws: &Workspace, name: &str, output: Option<&Path>) -> Result<(), CliError> {
    let x = resolve(&ws.strats, "stratified object", name)?;
    let (d, b) = (cx.cli.max_dim, cx.budget());
    let Some(r) = cx.attempt("replace", name, fibrant_replace_nv(x, d, cx.cli.max_stages, b))? else { return Ok(()) };
    let cert = verify_certificate(&r.certificate, b);
    let status = if !cert.ok {
        Status::Fail
    } else if r.saturated {
        Status::Pass
    } else {
        Status::Unknown
    };
    cx.report.push(
        "replacement",
        status,
        [
            ("object", name.to_string()),
            ("stages", r.stages.to_string()),
            ("saturated", r.saturated.to_string()),
            ("attached", r.certificate.steps.len().to_string()),
            ("source_cells", counts(x)),
            ("result_cells", counts(&r.result)),
            ("certificate", cert.message),
        ],
    );
    let base = x.base().clone();
    for p in base.elements() {
        let (Ok((a, _)), Ok((c, _))) = (x.stratum(p), r.result.stratum(p)) else {
            return Err(cx.module(format!("stratum {} could not be formed", base.name(p))));
        };
        let iso = iso_check(&a, &c, b);
        let status = match &iso {
            o if o.is_iso() => Status::Pass,
            strat_core::simplicial::IsoOutcome::NoIso(_) => Status::Fail,
            _ => Status::Unknown,
        };
        cx.report.push(
            "stratum",
            status,
            [("elem", base.name(p).to_string()), ("cells", a.cell_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))],
        );
    }
    if let Some(path) = output {
        let mut out = Workspace::new();
        let fib = format!("{name}_fib");
        let start = x.clone().forget_presentation();
        let doc = (|| {
            out.add_strat(name, "P", &start)?;
            out.add_strat(&fib, "P", &r.result)?;
            out.add_cert(&format!("{name}_cert"), &r.certificate, name, &fib)
        })();
        doc.map_err(|e| cx.module(format!("serializing result: {e}")))?;
        write_doc(path, &out)?;
    }
    Ok(())
}
