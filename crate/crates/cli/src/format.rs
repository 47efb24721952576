//! The shared line-oriented `.strat` format.
//!
//! A file is a sequence of sections. Each section starts with a header line
//! and owns the body lines up to the next header. `#` starts a comment.
//!
//! ```text
//! poset P
//! elem 0 1
//! rel 0 < 1
//!
//! sset H
//! simplex a dim 0
//! simplex b dim 0
//! simplex ab dim 1 faces b a
//!
//! sset D = simplex 2          # also: boundary n, horn n k, spine n
//!
//! strat H over P
//! label a 0
//! label b 1
//!
//! category E over P trunc 3
//! object x 0
//! arrow f x y
//! inverse f g
//! relation f.g = id_x
//!
//! map i H -> D
//! image a 0
//!
//! presheaf F over P
//! value {0} = X
//! restrict {0<1} -> {0} : a=b c=d
//!
//! presheaf G over P = constant X   # also: representable {0<1}
//!
//! cert C kind IH_P start H
//! step 2 1 labels 0,0,0 attach 0=a 1=b ...
//! end D
//! ```
//!
//! A normal form is a cell name, optionally followed by `!s<i>s<j>…` with
//! strictly decreasing degeneracy indices.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use strat_core::anodyne::{CellCertificate, CertStep};
use strat_core::decollage::Presheaf;
use strat_core::poset::{all_strings, PString, Poset};
use strat_core::simplicial::{
    make_generator, FiniteCategory, Generator, Presentation, SSetBuilder, SimplicialMap, SimplicialSet, Simplex,
};
use strat_core::stratified::{GeneratorItem, GeneratorKind, StratMap, StratSSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("line {line}: unknown {what} `{name}`")]
    Dangling { line: usize, what: &'static str, name: String },
    #[error("line {line}: duplicate {what} `{name}`")]
    Duplicate { line: usize, what: &'static str, name: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn invalid(line: usize, msg: impl std::fmt::Display) -> ParseError {
    ParseError::Invalid { line, msg: msg.to_string() }
}

/// Source form of one section, kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Poset { name: String, elems: Vec<String>, rels: Vec<(String, String)> },
    SSet { name: String, trunc: Option<usize>, cells: Vec<(String, usize, Vec<String>)> },
    SSetGen { name: String, kind: Generator },
    Category(CategorySpec),
    Strat { sset: String, poset: String, labels: Vec<(String, String)> },
    Map { name: String, source: String, target: String, images: Vec<(String, String)> },
    Presheaf { name: String, poset: String, body: PresheafBody },
    Cert(CertSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategorySpec {
    pub name: String,
    pub poset: String,
    pub trunc: usize,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, String, String)>,
    pub inverses: Vec<(String, String)>,
    pub relations: Vec<(Vec<String>, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresheafBody {
    Explicit { values: Vec<(String, String)>, restricts: Vec<(String, String, Vec<(String, String)>)> },
    Constant(String),
    Representable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertSpec {
    pub name: String,
    pub kind: GeneratorKind,
    pub start: String,
    pub steps: Vec<CertStepSpec>,
    pub end: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertStepSpec {
    pub n: usize,
    pub k: usize,
    pub labels: Vec<String>,
    pub attach: Vec<(String, String)>,
}

/// Every object of a set of `.strat` sections, validated.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub posets: BTreeMap<String, Arc<Poset>>,
    pub ssets: BTreeMap<String, Arc<SimplicialSet>>,
    pub strats: BTreeMap<String, StratSSet>,
    pub maps: BTreeMap<String, StratMap>,
    pub presheaves: BTreeMap<String, Presheaf>,
    pub certs: BTreeMap<String, CellCertificate>,
    sections: Vec<Section>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.sections == other.sections
    }
}

fn parse_nf(lookup: &dyn Fn(&str) -> Option<strat_core::simplicial::CellId>, text: &str) -> Result<Simplex, String> {
    let (name, word) = match (lookup(text), text.rsplit_once('!')) {
        (None, Some((n, w))) => (n, Some(w)),
        _ => (text, None),
    };
    let cell = lookup(name).ok_or_else(|| format!("unknown simplex `{name}`"))?;
    let mut idx = Vec::new();
    if let Some(w) = word {
        if !w.starts_with('s') {
            return Err(format!("bad degeneracy word in `{text}`"));
        }
        for part in w.split('s').skip(1) {
            idx.push(part.parse::<usize>().map_err(|_| format!("bad degeneracy word in `{text}`"))?);
        }
    }
    Simplex::from_word(cell, &idx).ok_or_else(|| format!("degeneracy indices in `{text}` must strictly decrease and fit"))
}

fn pairs(line: usize, tokens: &[&str]) -> Result<Vec<(String, String)>, ParseError> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| syntax(line, format!("expected `cell=simplex`, got `{t}`")))
        })
        .collect()
}

fn number(line: usize, t: &str) -> Result<usize, ParseError> {
    t.parse().map_err(|_| syntax(line, format!("expected a number, got `{t}`")))
}

fn images_for(
    line: usize,
    source: &Arc<SimplicialSet>,
    target: &Arc<SimplicialSet>,
    given: &[(String, String)],
) -> Result<SimplicialMap, ParseError> {
    let named: HashMap<&str, &str> = given.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    if named.len() != given.len() {
        return Err(invalid(line, "a cell is assigned twice"));
    }
    let mut images = Vec::new();
    for d in 0..=source.trunc_dim() {
        let mut level = Vec::new();
        for c in source.cells_of_dim(d) {
            let text = named.get(source.name(c)).ok_or_else(|| invalid(line, format!("no image for `{}`", source.name(c))))?;
            level.push(target.parse_simplex(text).map_err(|e| invalid(line, e))?);
        }
        images.push(level);
    }
    if named.len() != source.total_cells() {
        let unknown = given.iter().find(|(a, _)| source.lookup(a).is_none()).map(|(a, _)| a.clone()).unwrap_or_default();
        return Err(ParseError::Dangling { line, what: "source cell", name: unknown });
    }
    SimplicialMap::new(source.clone(), target.clone(), images).map_err(|e| invalid(line, e))
}

fn parse_generator(line: usize, words: &[&str]) -> Result<Generator, ParseError> {
    let n = |i: usize| -> Result<usize, ParseError> {
        number(line, words.get(i).ok_or_else(|| syntax(line, "missing dimension"))?)
    };
    let g = match words.first().copied() {
        Some("simplex") => Generator::Simplex(n(1)?),
        Some("boundary") => Generator::Boundary(n(1)?),
        Some("horn") => Generator::Horn(n(1)?, n(2)?),
        Some("spine") => Generator::Spine(n(1)?),
        _ => return Err(syntax(line, "expected simplex, boundary, horn or spine")),
    };
    let arity = if matches!(g, Generator::Horn(..)) { 3 } else { 2 };
    if words.len() != arity {
        return Err(syntax(line, "wrong number of generator arguments"));
    }
    Ok(g)
}

fn generator_text(g: Generator) -> String {
    match g {
        Generator::Simplex(n) => format!("simplex {n}"),
        Generator::Boundary(n) => format!("boundary {n}"),
        Generator::Horn(n, k) => format!("horn {n} {k}"),
        Generator::Spine(n) => format!("spine {n}"),
    }
}

type Lines<'a> = Vec<(usize, Vec<&'a str>)>;

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// Parses and validates a whole file.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut ws = Workspace::new();
        ws.extend(text)?;
        Ok(ws)
    }

    /// Adds the sections of `text`, which may refer to objects already
    /// loaded.
    pub fn extend(&mut self, text: &str) -> Result<(), ParseError> {
        let mut header: Option<(usize, Vec<&str>)> = None;
        let mut body: Lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            if matches!(words[0], "poset" | "sset" | "category" | "strat" | "map" | "presheaf" | "cert") {
                if let Some((l, h)) = header.take() {
                    self.section(l, &h, &std::mem::take(&mut body))?;
                }
                header = Some((line, words));
            } else if header.is_some() {
                body.push((line, words));
            } else {
                return Err(syntax(line, format!("`{}` outside of a section", words[0])));
            }
        }
        if let Some((l, h)) = header {
            self.section(l, &h, &body)?;
        }
        Ok(())
    }

    fn section(&mut self, line: usize, h: &[&str], body: &Lines) -> Result<(), ParseError> {
        let bad_header = |form: &str| syntax(line, format!("expected `{form}`"));
        let section = match h[0] {
            "poset" => {
                let [_, name] = h else { return Err(bad_header("poset <name>")) };
                let mut elems = Vec::new();
                let mut rels = Vec::new();
                for (l, w) in body {
                    match w.as_slice() {
                        ["elem", rest @ ..] if !rest.is_empty() => elems.extend(rest.iter().map(|s| s.to_string())),
                        ["rel", a, "<", b] => rels.push((a.to_string(), b.to_string())),
                        _ => return Err(syntax(*l, "expected `elem <id>...` or `rel <a> < <b>`")),
                    }
                }
                Section::Poset { name: name.to_string(), elems, rels }
            }
            "sset" => match h {
                [_, name, "=", rest @ ..] => {
                    if let Some((l, _)) = body.first() {
                        return Err(syntax(*l, "a generator sset has no body"));
                    }
                    Section::SSetGen { name: name.to_string(), kind: parse_generator(line, rest)? }
                }
                [_, name] | [_, name, "trunc", _] => {
                    let trunc = if h.len() == 4 { Some(number(line, h[3])?) } else { None };
                    let mut cells = Vec::new();
                    for (l, w) in body {
                        match w.as_slice() {
                            ["simplex", id, "dim", "0"] => cells.push((id.to_string(), 0, Vec::new())),
                            ["simplex", id, "dim", d, "faces", faces @ ..] => {
                                let d = number(*l, d)?;
                                cells.push((id.to_string(), d, faces.iter().map(|s| s.to_string()).collect()));
                            }
                            ["vertex", ids @ ..] if !ids.is_empty() => {
                                cells.extend(ids.iter().map(|id| (id.to_string(), 0, Vec::new())))
                            }
                            _ => return Err(syntax(*l, "expected `simplex <id> dim <n> faces <nf>...`")),
                        }
                    }
                    Section::SSet { name: name.to_string(), trunc, cells }
                }
                _ => return Err(bad_header("sset <name> [trunc <d>] | sset <name> = <generator>")),
            },
            "category" => {
                let (name, poset, trunc) = match h {
                    [_, n, "over", p] => (n, p, 3),
                    [_, n, "over", p, "trunc", t] => (n, p, number(line, t)?),
                    _ => return Err(bad_header("category <name> over <poset> [trunc <d>]")),
                };
                let mut spec = CategorySpec {
                    name: name.to_string(),
                    poset: poset.to_string(),
                    trunc,
                    objects: Vec::new(),
                    arrows: Vec::new(),
                    inverses: Vec::new(),
                    relations: Vec::new(),
                };
                for (l, w) in body {
                    match w.as_slice() {
                        ["object", o, label] => spec.objects.push((o.to_string(), label.to_string())),
                        ["arrow", g, s, t] => spec.arrows.push((g.to_string(), s.to_string(), t.to_string())),
                        ["inverse", g, inv] => spec.inverses.push((g.to_string(), inv.to_string())),
                        ["relation", lhs, "=", rhs] => {
                            let split = |s: &str| s.split('.').map(str::to_string).collect::<Vec<_>>();
                            spec.relations.push((split(lhs), split(rhs)));
                        }
                        _ => return Err(syntax(*l, "expected object, arrow, inverse or relation")),
                    }
                }
                Section::Category(spec)
            }
            "strat" => {
                let [_, sset, "over", poset] = h else { return Err(bad_header("strat <sset> over <poset>")) };
                let mut labels = Vec::new();
                for (l, w) in body {
                    match w.as_slice() {
                        ["label", v, p] => labels.push((v.to_string(), p.to_string())),
                        _ => return Err(syntax(*l, "expected `label <vertex> <elem>`")),
                    }
                }
                Section::Strat { sset: sset.to_string(), poset: poset.to_string(), labels }
            }
            "map" => {
                let [_, name, source, "->", target] = h else { return Err(bad_header("map <name> <source> -> <target>")) };
                let mut images = Vec::new();
                for (l, w) in body {
                    match w.as_slice() {
                        ["image", c, x] => images.push((c.to_string(), x.to_string())),
                        _ => return Err(syntax(*l, "expected `image <cell> <simplex>`")),
                    }
                }
                Section::Map { name: name.to_string(), source: source.to_string(), target: target.to_string(), images }
            }
            "presheaf" => {
                let (name, poset, body_kind) = match h {
                    [_, n, "over", p] => (n, p, None),
                    [_, n, "over", p, "=", "constant", x] => (n, p, Some(PresheafBody::Constant(x.to_string()))),
                    [_, n, "over", p, "=", "representable", s] => (n, p, Some(PresheafBody::Representable(s.to_string()))),
                    _ => return Err(bad_header("presheaf <name> over <poset> [= constant <sset> | = representable <string>]")),
                };
                let body = match body_kind {
                    Some(b) => {
                        if let Some((l, _)) = body.first() {
                            return Err(syntax(*l, "a constant or representable presheaf has no body"));
                        }
                        b
                    }
                    None => {
                        let mut values = Vec::new();
                        let mut restricts = Vec::new();
                        for (l, w) in body {
                            match w.as_slice() {
                                ["value", s, "=", x] => values.push((s.to_string(), x.to_string())),
                                ["restrict", o, "->", i, ":", rest @ ..] => {
                                    restricts.push((o.to_string(), i.to_string(), pairs(*l, rest)?))
                                }
                                _ => {
                                    return Err(syntax(
                                        *l,
                                        "expected `value <string> = <sset>` or `restrict <string> -> <string> : <cell>=<simplex>...`",
                                    ))
                                }
                            }
                        }
                        PresheafBody::Explicit { values, restricts }
                    }
                };
                Section::Presheaf { name: name.to_string(), poset: poset.to_string(), body }
            }
            "cert" => {
                let [_, name, "kind", kind, "start", start] = h else {
                    return Err(bad_header("cert <name> kind <kind> start <object>"));
                };
                let kind: GeneratorKind = kind.parse().map_err(|e: String| syntax(line, e))?;
                let mut steps = Vec::new();
                let mut end = None;
                for (l, w) in body {
                    match w.as_slice() {
                        ["step", n, k, "labels", labels, "attach", rest @ ..] => {
                            if end.is_some() {
                                return Err(syntax(*l, "step after `end`"));
                            }
                            steps.push(CertStepSpec {
                                n: number(*l, n)?,
                                k: number(*l, k)?,
                                labels: labels.split(',').map(str::to_string).collect(),
                                attach: pairs(*l, rest)?,
                            });
                        }
                        ["end", obj] if end.is_none() => end = Some(obj.to_string()),
                        _ => return Err(syntax(*l, "expected `step <n> <k> labels <l,...> attach <cell>=<simplex>...` or `end <object>`")),
                    }
                }
                let end = end.ok_or_else(|| syntax(line, "certificate without `end <object>`"))?;
                Section::Cert(CertSpec { name: name.to_string(), kind, start: start.to_string(), steps, end })
            }
            _ => unreachable!("headers are filtered"),
        };
        let lines: Vec<usize> = body.iter().map(|(l, _)| *l).collect();
        self.build(line, &lines, section)
    }

    fn poset(&self, line: usize, name: &str) -> Result<Arc<Poset>, ParseError> {
        self.posets.get(name).cloned().ok_or_else(|| ParseError::Dangling { line, what: "poset", name: name.into() })
    }

    fn sset(&self, line: usize, name: &str) -> Result<Arc<SimplicialSet>, ParseError> {
        self.ssets.get(name).cloned().ok_or_else(|| ParseError::Dangling { line, what: "sset", name: name.into() })
    }

    fn strat(&self, line: usize, name: &str) -> Result<StratSSet, ParseError> {
        self.strats.get(name).cloned().ok_or_else(|| ParseError::Dangling { line, what: "stratified object", name: name.into() })
    }

    fn fresh<T>(map: &BTreeMap<String, T>, line: usize, what: &'static str, name: &str) -> Result<(), ParseError> {
        if map.contains_key(name) {
            Err(ParseError::Duplicate { line, what, name: name.into() })
        } else {
            Ok(())
        }
    }

    /// Validates one section against what is loaded and records it.
    fn build(&mut self, line: usize, body: &[usize], section: Section) -> Result<(), ParseError> {
        let at = |i: usize| body.get(i).copied().unwrap_or(line);
        match &section {
            Section::Poset { name, elems, rels } => {
                Self::fresh(&self.posets, line, "poset", name)?;
                let p = Poset::new(elems.clone(), rels).map_err(|e| invalid(line, e))?;
                self.posets.insert(name.clone(), Arc::new(p));
            }
            Section::SSet { name, trunc, cells } => {
                Self::fresh(&self.ssets, line, "sset", name)?;
                let top = cells.iter().map(|c| c.1).max().unwrap_or(0);
                let mut b = SSetBuilder::new(trunc.unwrap_or(top).max(top), trunc.is_none());
                if let Some(t) = trunc {
                    if top > *t {
                        return Err(invalid(line, format!("cell of dimension {top} above truncation {t}")));
                    }
                }
                for (i, (id, dim, faces)) in cells.iter().enumerate() {
                    let l = at(i);
                    if faces.len() != if *dim == 0 { 0 } else { dim + 1 } {
                        return Err(invalid(l, format!("`{id}` of dimension {dim} needs {} faces", if *dim == 0 { 0 } else { dim + 1 })));
                    }
                    let lookup = |s: &str| b.lookup(s);
                    let fs = faces.iter().map(|f| parse_nf(&lookup, f)).collect::<Result<Vec<_>, _>>().map_err(|e| invalid(l, e))?;
                    b.add_cell(id.clone(), fs).map_err(|e| invalid(l, e))?;
                }
                let x = b.build().map_err(|e| invalid(line, format!("`{name}`: {e}")))?;
                self.ssets.insert(name.clone(), Arc::new(x));
            }
            Section::SSetGen { name, kind } => {
                Self::fresh(&self.ssets, line, "sset", name)?;
                let g = make_generator(*kind).map_err(|e| invalid(line, e))?;
                let x = if matches!(kind, Generator::Simplex(_)) { g.ambient } else { g.sset };
                self.ssets.insert(name.clone(), x);
            }
            Section::Category(spec) => {
                Self::fresh(&self.ssets, line, "sset", &spec.name)?;
                Self::fresh(&self.strats, line, "stratified object", &spec.name)?;
                let base = self.poset(line, &spec.poset)?;
                let mut pres = Presentation::new(spec.objects.iter().map(|(o, _)| o.clone()));
                for (g, s, t) in &spec.arrows {
                    pres.add_generator(g, s, t).map_err(|e| invalid(line, e))?;
                }
                for (g, inv) in &spec.inverses {
                    pres.add_inverse(g, inv).map_err(|e| invalid(line, e))?;
                }
                for (l, r) in &spec.relations {
                    let l: Vec<&str> = l.iter().map(String::as_str).collect();
                    let r: Vec<&str> = r.iter().map(String::as_str).collect();
                    pres.add_relation(&l, &r).map_err(|e| invalid(line, e))?;
                }
                let cat = FiniteCategory::from_presentation(&pres, FiniteCategory::DEFAULT_BOUND).map_err(|e| invalid(line, e))?;
                let labels = spec
                    .objects
                    .iter()
                    .map(|(_, p)| base.id(p).map_err(|e| invalid(line, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                let nerve = cat.nerve(spec.trunc);
                let x = StratSSet::from_category(nerve, base, labels).map_err(|e| invalid(line, e))?;
                self.ssets.insert(spec.name.clone(), x.total().clone());
                self.strats.insert(spec.name.clone(), x);
            }
            Section::Strat { sset, poset, labels } => {
                Self::fresh(&self.strats, line, "stratified object", sset)?;
                let total = self.sset(line, sset)?;
                let base = self.poset(line, poset)?;
                let mut lab = vec![None; total.num_cells(0)];
                for (i, (v, p)) in labels.iter().enumerate() {
                    let c = total
                        .lookup(v)
                        .filter(|c| c.dim() == 0)
                        .ok_or_else(|| ParseError::Dangling { line: at(i), what: "vertex", name: v.clone() })?;
                    if lab[c.idx()].is_some() {
                        return Err(ParseError::Duplicate { line: at(i), what: "label", name: v.clone() });
                    }
                    lab[c.idx()] = Some(base.id(p).map_err(|e| invalid(at(i), e))?);
                }
                let lab = lab
                    .iter()
                    .enumerate()
                    .map(|(v, l)| l.ok_or_else(|| invalid(line, format!("vertex `{}` has no label", total.name(strat_core::simplicial::CellId::new(0, v))))))
                    .collect::<Result<Vec<_>, _>>()?;
                let x = StratSSet::new(total, base, lab).map_err(|e| invalid(line, e))?;
                self.strats.insert(sset.clone(), x);
            }
            Section::Map { name, source, target, images } => {
                Self::fresh(&self.maps, line, "map", name)?;
                let (x, y) = (self.strat(line, source)?, self.strat(line, target)?);
                let m = images_for(line, x.total(), y.total(), images)?;
                let f = StratMap::new(x, y, m).map_err(|e| invalid(line, e))?;
                self.maps.insert(name.clone(), f);
            }
            Section::Presheaf { name, poset, body: pb } => {
                Self::fresh(&self.presheaves, line, "presheaf", name)?;
                let base = self.poset(line, poset)?;
                let f = match pb {
                    PresheafBody::Constant(x) => Presheaf::constant(base, self.sset(line, x)?).map_err(|e| invalid(line, e))?,
                    PresheafBody::Representable(s) => {
                        let t = PString::parse(&base, s).map_err(|e| invalid(line, e))?;
                        Presheaf::representable(base, &t).map_err(|e| invalid(line, e))?
                    }
                    PresheafBody::Explicit { values, restricts } => {
                        let strings = all_strings(&base);
                        let pos = |l: usize, s: &str| -> Result<usize, ParseError> {
                            let t = PString::parse(&base, s).map_err(|e| invalid(l, e))?;
                            Ok(strings.iter().position(|u| *u == t).expect("all strings"))
                        };
                        let mut vals: Vec<Option<Arc<SimplicialSet>>> = vec![None; strings.len()];
                        for (i, (s, x)) in values.iter().enumerate() {
                            let j = pos(at(i), s)?;
                            if vals[j].is_some() {
                                return Err(ParseError::Duplicate { line: at(i), what: "value", name: s.clone() });
                            }
                            vals[j] = Some(self.sset(at(i), x)?);
                        }
                        let vals = vals
                            .into_iter()
                            .enumerate()
                            .map(|(j, v)| v.ok_or_else(|| invalid(line, format!("no value at {}", strings[j].display(&base)))))
                            .collect::<Result<Vec<_>, _>>()?;
                        let mut given = HashMap::new();
                        for (i, (o, inner, imgs)) in restricts.iter().enumerate() {
                            let l = at(values.len() + i);
                            let (a, b) = (pos(l, o)?, pos(l, inner)?);
                            let m = images_for(l, &vals[a], &vals[b], imgs)?;
                            if given.insert((a, b), m).is_some() {
                                return Err(ParseError::Duplicate { line: l, what: "restriction", name: format!("{o} -> {inner}") });
                            }
                        }
                        Presheaf::new(base, vals, given).map_err(|e| invalid(line, e))?
                    }
                };
                self.presheaves.insert(name.clone(), f);
            }
            Section::Cert(spec) => {
                Self::fresh(&self.certs, line, "certificate", &spec.name)?;
                let start = self.strat(line, &spec.start)?;
                let end = self.strat(line, &spec.end)?;
                let base = start.base();
                let mut steps = Vec::new();
                for (i, s) in spec.steps.iter().enumerate() {
                    let labels = s
                        .labels
                        .iter()
                        .map(|l| base.id(l).map_err(|e| invalid(at(i), e)))
                        .collect::<Result<Vec<_>, _>>()?;
                    steps.push(CertStep { item: GeneratorItem { n: s.n, k: s.k, labels }, attach: s.attach.clone() });
                }
                let c = CellCertificate { kind: spec.kind, start, steps, claimed_end: end };
                self.certs.insert(spec.name.clone(), c);
            }
        }
        self.sections.push(section);
        Ok(())
    }

    /// Adds a poset under `name`, recording it by covering relations.
    pub fn add_poset(&mut self, name: &str, p: &Poset) -> Result<(), ParseError> {
        let elems = p.names().to_vec();
        let rels = p.covers().into_iter().map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string())).collect();
        self.build(0, &[], Section::Poset { name: name.into(), elems, rels })
    }

    /// Adds a simplicial set cell by cell.
    pub fn add_sset(&mut self, name: &str, x: &SimplicialSet) -> Result<(), ParseError> {
        let cells = x
            .all_cells()
            .map(|c| {
                let faces = x.cell(c).faces.iter().map(|f| x.format_simplex(f)).collect();
                (x.name(c).to_string(), c.dim(), faces)
            })
            .collect();
        let trunc = if x.is_complete() { None } else { Some(x.trunc_dim()) };
        self.build(0, &[], Section::SSet { name: name.into(), trunc, cells })
    }

    /// Adds `x`, its total space under the same name and its base under
    /// `poset` (which must already be present and equal, or be new).
    pub fn add_strat(&mut self, name: &str, poset: &str, x: &StratSSet) -> Result<(), ParseError> {
        match self.posets.get(poset) {
            Some(p) if **p == **x.base() => {}
            Some(_) => return Err(ParseError::Duplicate { line: 0, what: "poset", name: poset.into() }),
            None => self.add_poset(poset, x.base())?,
        }
        self.add_sset(name, x.total())?;
        let t = x.total();
        let labels = (0..t.num_cells(0))
            .map(|v| (t.name(strat_core::simplicial::CellId::new(0, v)).to_string(), x.base().name(x.label(v)).to_string()))
            .collect();
        self.build(0, &[], Section::Strat { sset: name.into(), poset: poset.into(), labels })
    }

    /// Adds a certificate whose start and end are already present.
    pub fn add_cert(&mut self, name: &str, c: &CellCertificate, start: &str, end: &str) -> Result<(), ParseError> {
        let base = c.start.base();
        let steps = c
            .steps
            .iter()
            .map(|s| CertStepSpec {
                n: s.item.n,
                k: s.item.k,
                labels: s.item.labels.iter().map(|&l| base.name(l).to_string()).collect(),
                attach: s.attach.clone(),
            })
            .collect();
        self.build(0, &[], Section::Cert(CertSpec { name: name.into(), kind: c.kind, start: start.into(), steps, end: end.into() }))
    }

    /// Canonical text of every section in load order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            write_section(&mut out, s);
        }
        out
    }
}

fn write_section(out: &mut String, s: &Section) {
    let w = &mut *out;
    match s {
        Section::Poset { name, elems, rels } => {
            let _ = writeln!(w, "poset {name}");
            if !elems.is_empty() {
                let _ = writeln!(w, "elem {}", elems.join(" "));
            }
            for (a, b) in rels {
                let _ = writeln!(w, "rel {a} < {b}");
            }
        }
        Section::SSet { name, trunc, cells } => {
            match trunc {
                Some(t) => writeln!(w, "sset {name} trunc {t}"),
                None => writeln!(w, "sset {name}"),
            }
            .ok();
            for (id, d, faces) in cells {
                if *d == 0 {
                    let _ = writeln!(w, "simplex {id} dim 0");
                } else {
                    let _ = writeln!(w, "simplex {id} dim {d} faces {}", faces.join(" "));
                }
            }
        }
        Section::SSetGen { name, kind } => {
            let _ = writeln!(w, "sset {name} = {}", generator_text(*kind));
        }
        Section::Category(c) => {
            let _ = writeln!(w, "category {} over {} trunc {}", c.name, c.poset, c.trunc);
            for (o, l) in &c.objects {
                let _ = writeln!(w, "object {o} {l}");
            }
            for (g, s, t) in &c.arrows {
                let _ = writeln!(w, "arrow {g} {s} {t}");
            }
            for (g, i) in &c.inverses {
                let _ = writeln!(w, "inverse {g} {i}");
            }
            for (l, r) in &c.relations {
                let _ = writeln!(w, "relation {} = {}", l.join("."), r.join("."));
            }
        }
        Section::Strat { sset, poset, labels } => {
            let _ = writeln!(w, "strat {sset} over {poset}");
            for (v, p) in labels {
                let _ = writeln!(w, "label {v} {p}");
            }
        }
        Section::Map { name, source, target, images } => {
            let _ = writeln!(w, "map {name} {source} -> {target}");
            for (c, x) in images {
                let _ = writeln!(w, "image {c} {x}");
            }
        }
        Section::Presheaf { name, poset, body } => match body {
            PresheafBody::Constant(x) => {
                let _ = writeln!(w, "presheaf {name} over {poset} = constant {x}");
            }
            PresheafBody::Representable(t) => {
                let _ = writeln!(w, "presheaf {name} over {poset} = representable {t}");
            }
            PresheafBody::Explicit { values, restricts } => {
                let _ = writeln!(w, "presheaf {name} over {poset}");
                for (s, x) in values {
                    let _ = writeln!(w, "value {s} = {x}");
                }
                for (o, i, imgs) in restricts {
                    let parts: Vec<String> = imgs.iter().map(|(a, b)| format!("{a}={b}")).collect();
                    let _ = writeln!(w, "restrict {o} -> {i} : {}", parts.join(" "));
                }
            }
        },
        Section::Cert(c) => {
            let _ = writeln!(w, "cert {} kind {} start {}", c.name, c.kind, c.start);
            for s in &c.steps {
                let parts: Vec<String> = s.attach.iter().map(|(a, b)| format!("{a}={b}")).collect();
                let _ = writeln!(w, "step {} {} labels {} attach {}", s.n, s.k, s.labels.join(","), parts.join(" "));
            }
            let _ = writeln!(w, "end {}", c.end);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
poset P
elem 0 1
rel 0 < 1

sset L = horn 2 0

strat L over P
label 0 0
label 1 0
label 2 1
";

    #[test]
    fn empty_input() {
        let ws = Workspace::parse("").unwrap();
        assert!(ws.posets.is_empty() && ws.sections().is_empty());
        assert_eq!(ws.serialize(), "");
    }

    #[test]
    fn loads_a_labelled_horn() {
        let ws = Workspace::parse(EXAMPLE).unwrap();
        let x = &ws.strats["L"];
        assert_eq!(x.labels(), &[0, 0, 1]);
        assert_eq!(x.total().cell_counts(), vec![3, 2]);
    }

    #[test]
    fn decreasing_edge_is_rejected_by_name() {
        let text = EXAMPLE.replace("label 0 0\nlabel 1 0\nlabel 2 1", "label 0 1\nlabel 1 0\nlabel 2 1");
        let err = Workspace::parse(&text).unwrap_err().to_string();
        assert!(err.contains("`01`"), "{err}");
    }

    #[test]
    fn locations_in_errors() {
        let err = Workspace::parse("poset P\nelem a\nrel a < b\n").unwrap_err();
        assert!(matches!(err, ParseError::Invalid { line: 1, .. }), "{err}");
        let err = Workspace::parse("strat X over P\n").unwrap_err();
        assert!(matches!(err, ParseError::Dangling { line: 1, what: "sset", .. }));
        let err = Workspace::parse("poset P\nbogus\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = Workspace::parse("poset P\nposet P\n").unwrap_err();
        assert!(matches!(err, ParseError::Duplicate { line: 2, .. }));
    }

    #[test]
    fn explicit_sets_and_degeneracies() {
        let text = "sset S\nsimplex v dim 0\nsimplex e dim 1 faces v v\nsimplex t dim 2 faces e v!s0 e\n";
        let ws = Workspace::parse(text).unwrap();
        assert_eq!(ws.ssets["S"].cell_counts(), vec![1, 1, 1]);
        let again = Workspace::parse(&ws.serialize()).unwrap();
        assert_eq!(again, ws);
        assert!(Workspace::parse("sset S\nsimplex v dim 0\nsimplex e dim 1 faces v w\n").is_err());
    }
}
