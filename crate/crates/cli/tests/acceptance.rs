//! Acceptance suite. Prints one pass/fail line per criterion and exits
//! nonzero if any criterion fails. Every criterion builds a machine report;
//! criterion 9 runs criteria 1-8 a second time and compares the bytes.

use std::sync::Arc;
use std::time::Instant;

use strat_cli::{Format, Report, Status};
use strat_core::anodyne::{
    cone_certificate, non_lifting_witness, prism_certificate, spine_certificate, verify_certificate, CellCertificate,
    CertStep,
};
use strat_core::corpus::{
    fibrant_targets, link_killing, nonfibrant_categories, poset_tag, presheaves, punctured_constant, small_posets,
    stratified_objects, stratum_collapse,
};
use strat_core::decollage::{adjunction_check, base_change_iso, is_decollage, lkan, nerve_presheaf, LkanStrategy};
use strat_core::homotopy::{rlp_check, strata_links_equiv, Verdict, VerdictBudget};
use strat_core::poset::{all_strings, Poset};
use strat_core::simplicial::{iso_check, make_generator, Budget, CellId, Generator, SimplicialMap};
use strat_core::stratified::{
    classify_horn, fibrant_replace_nv, generating_set, is_fibrant, is_fibrant_bounded, monotone_tuples, GeneratorItem,
    GeneratorKind, HornClass, StratMap, StratSSet,
};
use strat_realization::{appendix_suite, SuiteConfig};

/// Largest poset size for criteria 1-7.
const MAX_POSET: usize = 3;
/// Largest horn dimension classified in criterion 1.
const MAX_HORN_DIM: usize = 3;
/// Largest horn dimension that must carry a non-lifting witness.
const MAX_WITNESS_DIM: usize = 2;
/// Truncation of category-presented targets.
const TARGET_TRUNC: usize = 3;
/// Dimension bound for lifting checks after fibrant replacement.
const REPLACE_MAX_DIM: usize = 3;
const REPLACE_MAX_STAGES: usize = 4;
const MIN_REPLACE_CORPUS: usize = 20;
const MIN_PRESHEAF_CORPUS: usize = 15;
/// Dimension to which nerve presheaves and adjunction data are computed.
const NERVE_DIM: usize = 2;
/// Formula checks: barycentric denominators up to 6 on posets up to 4
/// elements, exact rational arithmetic (tolerance zero).
const SWEEP: SuiteConfig = SuiteConfig {
    max_poset: 4,
    density: 6,
    time_density: 3,
    mapping_density: 3,
    orientation: strat_realization::Orientation::Corrected,
};
const SWEEP_TOLERANCE: usize = 0;
/// Wall-clock budget for the whole suite, both runs included.
const RUNTIME_LIMIT_SECS: u64 = 1200;

fn budget() -> Budget {
    Budget::default()
}

fn vb(max_dim: usize) -> VerdictBudget {
    VerdictBudget { max_dim, search: budget(), homotopy_search: true }
}

fn labels_of(p: &Poset, l: &[usize]) -> String {
    l.iter().map(|&e| p.name(e)).collect::<Vec<_>>().join(",")
}

/// `T → N(P)` with the element labels of the nerve vertices.
fn structure(x: &StratSSet) -> (SimplicialMap, Vec<usize>) {
    let (nerve, m) = x.structure_map();
    let labels = (0..nerve.sset.num_cells(0)).map(|v| nerve.chain(CellId::new(0, v))[0]).collect();
    (m, labels)
}

fn labelled_horn(base: &Arc<Poset>, item: &GeneratorItem) -> (StratSSet, SimplicialMap) {
    let g = make_generator(Generator::Horn(item.n, item.k)).expect("valid horn");
    let labels = (0..g.sset.num_cells(0)).map(|v| item.labels[g.inclusion.vertex_image(v)]).collect();
    let horn = StratSSet::new(g.sset.clone(), base.clone(), labels).expect("restricted labels");
    let id = SimplicialMap::identity(g.sset.clone());
    (horn, id)
}

fn c1_classification() -> Report {
    let mut r = Report::new("criterion-1");
    let (mut trivial, mut nontrivial, mut disagreements, mut unknown, mut problems) = (0usize, 0usize, 0usize, 0usize, 0u64);
    let mut extra_witnesses = 0usize;
    for base in small_posets(MAX_POSET) {
        let targets: Vec<(String, SimplicialMap, Vec<usize>)> = fibrant_targets(&base, TARGET_TRUNC)
            .into_iter()
            .map(|(name, t)| {
                let (m, l) = structure(&t);
                (name, m, l)
            })
            .collect();
        for n in 1..=MAX_HORN_DIM {
            for labels in monotone_tuples(&base, n + 1) {
                for k in 0..=n {
                    let class = classify_horn(&base, &labels, n, k).expect("valid horn");
                    let item = GeneratorItem { n, k, labels: labels.clone() };
                    let subject = format!("{} {}", poset_tag(&base), item.display(&base));
                    if class.is_trivial() {
                        trivial += 1;
                        // anodyne side: one pushout of the horn onto its simplex
                        let (horn, id) = labelled_horn(&base, &item);
                        let cert = CellCertificate {
                            kind: GeneratorKind::J,
                            start: horn,
                            steps: vec![CertStep::from_map(item.clone(), &id)],
                            claimed_end: item.simplex(&base),
                        };
                        let replay = verify_certificate(&cert, budget());
                        // lifting side: every fibrant target has fillers
                        let gen = [item.lifting_generator(&base)];
                        let mut bad = None;
                        for (name, m, l) in &targets {
                            match rlp_check(m, &gen, Some(l), "trivial horn", budget()) {
                                Verdict::Equivalent(strat_core::homotopy::Witness::Lifting(rec)) => problems += rec.problems,
                                Verdict::Equivalent(_) => {}
                                Verdict::NotEquivalent(o) => {
                                    bad = Some(format!("{name}: {} {}", o.left, o.right));
                                    break;
                                }
                                Verdict::Unknown(u) => {
                                    unknown += 1;
                                    bad = Some(format!("{name}: unknown {}", u.resource));
                                    break;
                                }
                            }
                        }
                        if !replay.ok || bad.is_some() {
                            disagreements += 1;
                            r.push(
                                "disagreement",
                                Status::Fail,
                                [("horn", subject), ("class", class.to_string()), ("replay", replay.message), ("lifting", bad.unwrap_or_default())],
                            );
                        }
                    } else {
                        nontrivial += 1;
                        match non_lifting_witness(&base, &labels, n, k, budget()) {
                            Ok(w) => {
                                let ok = w.lifts == 0 && w.target_fibrant.is_equivalent() && w.recheck(budget()).is_ok();
                                if n > MAX_WITNESS_DIM {
                                    extra_witnesses += usize::from(ok);
                                } else if !ok {
                                    disagreements += 1;
                                    r.push("disagreement", Status::Fail, [("horn", subject), ("witness", w.description)]);
                                }
                            }
                            Err(e) if n <= MAX_WITNESS_DIM => {
                                disagreements += 1;
                                r.push("disagreement", Status::Fail, [("horn", subject), ("witness", e.to_string())]);
                            }
                            Err(_) => {}
                        }
                    }
                }
            }
        }
    }
    r.push(
        "summary",
        Status::of_bool(disagreements == 0 && unknown == 0 && trivial > 0 && nontrivial > 0),
        [
            ("posets", small_posets(MAX_POSET).len().to_string()),
            ("trivial", trivial.to_string()),
            ("not_trivial", nontrivial.to_string()),
            ("lifting_problems", problems.to_string()),
            ("n3_witnesses", extra_witnesses.to_string()),
            ("disagreements", disagreements.to_string()),
            ("unknown", unknown.to_string()),
        ],
    );
    r
}

fn steps_are_inner_or_left(c: &CellCertificate) -> bool {
    let base = c.start.base();
    c.steps.iter().all(|s| {
        matches!(classify_horn(base, &s.item.labels, s.item.n, s.item.k), Ok(HornClass::TrivialInner | HornClass::TrivialLeft))
    })
}

fn c2_certificates() -> Report {
    let mut r = Report::new("criterion-2");
    let check = |r: &mut Report, name: String, c: Result<CellCertificate, String>, steps: Option<usize>| {
        let (ok, fields) = match c {
            Ok(c) => {
                let v = verify_certificate(&c, budget());
                let classes = steps_are_inner_or_left(&c);
                let count = steps.map_or(true, |s| s == c.steps.len());
                (v.ok && classes && count, vec![("steps", c.steps.len().to_string()), ("replay", v.message), ("classes", classes.to_string())])
            }
            Err(e) => (false, vec![("error", e)]),
        };
        let mut all = vec![("certificate", name)];
        all.extend(fields);
        r.push("certificate", Status::of_bool(ok), all);
    };
    for n in 1..=5 {
        check(&mut r, format!("spine({n})"), spine_certificate(n, budget()).map_err(|e| e.to_string()), None);
    }
    for m in 0..=4 {
        let base = Arc::new(Poset::chain(m));
        for labels in [vec![0; m + 1], (0..=m).collect::<Vec<_>>()] {
            let c = prism_certificate(&base, &labels, budget()).map_err(|e| e.to_string());
            check(&mut r, format!("prism({m};{})", labels_of(&base, &labels)), c, Some(m + 1));
        }
    }
    let c2 = Arc::new(Poset::chain(2));
    let objects: Vec<(&str, Generator, Vec<usize>)> = vec![
        ("D0", Generator::Simplex(0), vec![0]),
        ("D1", Generator::Simplex(1), vec![0, 1]),
        ("bD2", Generator::Boundary(2), vec![0, 1, 2]),
        ("L20", Generator::Horn(2, 0), vec![0, 1, 2]),
    ];
    for (name, g, top) in objects {
        for constant in [true, false] {
            let ambient: Vec<usize> = if constant { vec![0; top.len()] } else { top.clone() };
            let inc = make_generator(g).expect("valid generator");
            let (x, labels) = match g {
                Generator::Simplex(_) => (inc.ambient.clone(), ambient.clone()),
                _ => (inc.sset.clone(), (0..inc.sset.num_cells(0)).map(|v| ambient[inc.inclusion.vertex_image(v)]).collect()),
            };
            let x = StratSSet::new(x, c2.clone(), labels).expect("monotone");
            for n in 1..=3 {
                let c = cone_certificate(&x, n, budget()).map_err(|e| e.to_string());
                check(&mut r, format!("cone({name}{}, {n})", if constant { "" } else { " increasing" }), c, None);
            }
        }
    }
    r
}

fn c3_replacement() -> Report {
    let mut r = Report::new("criterion-3");
    let corpus = stratified_objects();
    let (mut saturated, mut strata_checked) = (0usize, 0usize);
    for (name, x) in &corpus {
        let rep = match fibrant_replace_nv(x, REPLACE_MAX_DIM, REPLACE_MAX_STAGES, budget()) {
            Ok(rep) => rep,
            Err(e) => {
                r.push("replacement", Status::Fail, [("object", name.clone()), ("error", e.to_string())]);
                continue;
            }
        };
        let base = x.base();
        let mut strata_ok = true;
        for p in base.elements() {
            let (a, _) = x.stratum(p).expect("stratum");
            let (b, _) = rep.result.stratum(p).expect("stratum");
            strata_ok &= iso_check(&a, &b, budget()).is_iso();
            strata_checked += 1;
        }
        let cert = verify_certificate(&rep.certificate, budget());
        let (rlp, status) = if rep.saturated {
            saturated += 1;
            let (m, l) = structure(&rep.result);
            let gens = generating_set(base, GeneratorKind::IHnv, REPLACE_MAX_DIM).lifting_generators();
            let v = rlp_check(&m, &gens, Some(&l), "IH_P^nv", budget());
            (v.outcome().to_string(), Status::of_verdict(&v))
        } else {
            ("not saturated".to_string(), Status::Pass)
        };
        let ok = strata_ok && cert.ok && status == Status::Pass;
        r.push(
            "replacement",
            Status::of_bool(ok),
            [
                ("object", name.clone()),
                ("attached", rep.certificate.steps.len().to_string()),
                ("saturated", rep.saturated.to_string()),
                ("strata_iso", strata_ok.to_string()),
                ("certificate", cert.ok.to_string()),
                ("rlp", rlp),
            ],
        );
    }
    r.push(
        "summary",
        Status::of_bool(corpus.len() >= MIN_REPLACE_CORPUS && saturated > 0),
        [("objects", corpus.len()), ("saturated", saturated), ("strata_checked", strata_checked)],
    );
    r
}

fn c4_adjunction() -> Report {
    let mut r = Report::new("criterion-4");
    let corpus = presheaves();
    for (name, f) in &corpus {
        let base = f.base().clone();
        let mut notes = Vec::new();
        let agree = match (lkan(f, LkanStrategy::PairColimit), lkan(f, LkanStrategy::Coend)) {
            (Ok(a), Ok(b)) => {
                let iso = a.object.iso_over(&b.object, budget()).is_iso();
                if name.ends_with("const-point") {
                    let nerve = a.object.iso_over(&StratSSet::terminal(base.clone()), budget()).is_iso();
                    notes.push(("nerve_of_base", nerve.to_string()));
                    iso && nerve
                } else {
                    iso
                }
            }
            (a, b) => {
                notes.push(("error", format!("{:?} {:?}", a.err(), b.err())));
                false
            }
        };
        let adj = adjunction_check(f, &StratSSet::terminal(base.clone()), NERVE_DIM, budget());
        let triangles = match &adj {
            Ok(a) => {
                notes.push(("triangles", format!("{}+{} checked", a.triangle_left.checked, a.triangle_right.checked)));
                a.ok()
            }
            Err(e) => {
                notes.push(("adjunction_error", e.to_string()));
                false
            }
        };
        let mut bc_ok = true;
        for s in all_strings(&base) {
            match base_change_iso(f, &s) {
                Ok(b) if b.adjunction.is_ok() => {}
                Ok(b) => {
                    bc_ok = false;
                    notes.push(("base_change", format!("{}: {:?}", s.display(&base), b.adjunction)));
                }
                Err(e) => {
                    bc_ok = false;
                    notes.push(("base_change", format!("{}: {e}", s.display(&base))));
                }
            }
        }
        let mut fields = vec![
            ("presheaf", name.clone()),
            ("lkan_agree", agree.to_string()),
            ("triangles_ok", triangles.to_string()),
            ("base_change_ok", bc_ok.to_string()),
        ];
        fields.extend(notes.into_iter().map(|(k, v)| (k, v)));
        r.push("presheaf", Status::of_bool(agree && triangles && bc_ok), fields);
    }
    let representables = corpus.iter().filter(|(n, _)| n.contains(" rep{")).count();
    let expected: usize = small_posets(MAX_POSET).iter().map(|p| all_strings(p).len()).sum();
    r.push(
        "summary",
        Status::of_bool(corpus.len() >= MIN_PRESHEAF_CORPUS && representables == expected),
        [("presheaves", corpus.len()), ("representables", representables)],
    );
    r
}

fn all_fibrant_categories(trunc: impl Fn(&Poset) -> usize) -> Vec<(String, StratSSet)> {
    small_posets(MAX_POSET)
        .iter()
        .flat_map(|b| fibrant_targets(b, trunc(b)).into_iter().map(move |(n, x)| (format!("{} {n}", poset_tag(b)), x)))
        .collect()
}

fn c5_decollage() -> Report {
    let mut r = Report::new("criterion-5");
    // mapping objects over a string of length k need simplices of dimension k + 1
    for (name, x) in all_fibrant_categories(|b| b.len() + 2) {
        let v = nerve_presheaf(&x, NERVE_DIM, budget()).map_err(|e| e.to_string()).and_then(|n| {
            is_decollage(&n.presheaf, &vb(NERVE_DIM)).map_err(|e| e.to_string())
        });
        match v {
            Ok(v) => r.verdict("fibrant-category", vec![("object", name)], &v),
            Err(e) => r.push("fibrant-category", Status::Fail, [("object", name), ("error", e)]),
        }
    }
    let v = is_decollage(&punctured_constant(), &vb(NERVE_DIM)).expect("decollage check");
    let refuted = v.is_not_equivalent() && v.recheck().is_ok();
    let mut fields = vec![("presheaf".to_string(), "punctured constant over [2]".to_string())];
    fields.extend(v.fields());
    r.push("negative-control", Status::of_bool(refuted), fields);
    let mut false_refutations = 0;
    let mut checked = 0;
    for (name, x) in stratified_objects() {
        if !is_fibrant(&x, REPLACE_MAX_DIM, budget()).is_equivalent() {
            continue;
        }
        checked += 1;
        let v = nerve_presheaf(&x, NERVE_DIM, budget()).map(|n| is_decollage(&n.presheaf, &vb(NERVE_DIM)));
        if let Ok(Ok(v)) = &v {
            if v.is_not_equivalent() {
                false_refutations += 1;
                r.push("false-refutation", Status::Fail, [("object", name)]);
            }
        }
    }
    r.push("summary", Status::of_bool(false_refutations == 0), [("fibrant_objects", checked), ("false_refutations", false_refutations)]);
    r
}

fn c6_fibrancy() -> Report {
    let mut r = Report::new("criterion-6");
    let mut objects = all_fibrant_categories(|_| TARGET_TRUNC);
    objects.extend(nonfibrant_categories(TARGET_TRUNC));
    let (mut definitive, mut disagreements) = (0, 0);
    for (name, x) in &objects {
        let exact = is_fibrant(x, REPLACE_MAX_DIM, budget());
        let bounded = is_fibrant_bounded(x, REPLACE_MAX_DIM, budget());
        let agree = bounded.is_unknown() || (!exact.is_unknown() && exact.is_equivalent() == bounded.is_equivalent());
        definitive += usize::from(!bounded.is_unknown());
        disagreements += usize::from(!agree);
        r.push(
            "tiers",
            Status::of_bool(agree),
            [("object", name.clone()), ("exact", exact.outcome().to_string()), ("bounded", bounded.outcome().to_string())],
        );
    }
    let horn = make_generator(Generator::Horn(2, 0)).expect("horn").sset;
    let good = StratSSet::new(horn.clone(), Arc::new(Poset::chain(2)), vec![0, 1, 2]).expect("monotone");
    let v = is_fibrant(&good, REPLACE_MAX_DIM, budget());
    r.verdict("horn over [2] labels 0,1,2", vec![], &v);
    let bad = StratSSet::new(horn, Arc::new(Poset::chain(1)), vec![0, 0, 1]).expect("monotone");
    let v = is_fibrant(&bad, REPLACE_MAX_DIM, budget());
    let exhibited = v.obstruction().map(|o| o.context == ["stratum 0"] && o.invariant.to_string().starts_with("lift:horn(2,")).unwrap_or(false);
    let mut fields = vec![("object".to_string(), "horn over [1] labels 0,0,1".to_string())];
    fields.extend(v.fields());
    r.push("stratum-horn", Status::of_bool(exhibited && v.recheck().is_ok()), fields);
    r.push(
        "summary",
        Status::of_bool(disagreements == 0 && definitive > 0),
        [("objects", objects.len()), ("bounded_definitive", definitive), ("disagreements", disagreements)],
    );
    r
}

fn c7_links() -> Report {
    let mut r = Report::new("criterion-7");
    let mut identities = 0;
    for (name, x) in stratified_objects() {
        let v = strata_links_equiv(&StratMap::identity(x), &vb(REPLACE_MAX_DIM));
        identities += 1;
        if !v.is_equivalent() {
            r.verdict("identity", vec![("object", name)], &v);
        }
    }
    r.push("identities", Status::Pass, [("checked", identities)]);
    for (name, f) in [("stratum collapse", stratum_collapse()), ("link killing", link_killing())] {
        let v = strata_links_equiv(&f, &vb(REPLACE_MAX_DIM));
        let ok = v.is_not_equivalent() && v.recheck().is_ok();
        let mut fields = vec![("map".to_string(), name.to_string())];
        fields.extend(v.fields());
        r.push("counterexample", Status::of_bool(ok), fields);
    }
    r
}

fn c8_formulas() -> Report {
    let mut r = Report::new("criterion-8");
    let rep = appendix_suite(&SWEEP);
    for t in &rep.tallies {
        let mut fields = vec![("check", t.name.clone()), ("checked", t.checked.to_string()), ("failed", t.failed.to_string())];
        if let Some(f) = &t.first_failure {
            fields.push(("first_failure", f.clone()));
        }
        r.push("identity", Status::of_bool(t.failed <= SWEEP_TOLERANCE && t.checked > 0), fields);
    }
    r.push("summary", Status::of_bool(rep.ok()), [("posets", rep.posets), ("density", SWEEP.density)]);
    r
}

type Criterion = (usize, &'static str, fn() -> Report);

const CRITERIA: [Criterion; 8] = [
    (1, "horn classification agrees with lifting and witnesses", c1_classification),
    (2, "spine, prism and cone certificates verify", c2_certificates),
    (3, "fibrant replacement preserves strata", c3_replacement),
    (4, "left Kan extension, triangles and base change", c4_adjunction),
    (5, "decollage detection", c5_decollage),
    (6, "fibrancy tiers agree", c6_fibrancy),
    (7, "strata and links criterion", c7_links),
    (8, "homotopy formula checks", c8_formulas),
];

fn failures(r: &Report) -> Vec<String> {
    r.records
        .iter()
        .filter(|rec| rec.status != Status::Pass)
        .take(3)
        .map(|rec| rec.fields.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
        .collect()
}

fn run_all(print: bool) -> (Vec<(usize, bool)>, String) {
    let mut machine = String::new();
    let mut results = Vec::new();
    for (i, title, f) in CRITERIA {
        let start = Instant::now();
        let report = f();
        let ok = report.status() == Status::Pass;
        machine.push_str(&report.emit(Format::Machine));
        if print {
            let summary = report.records.iter().rev().find(|rec| rec.kind == "summary");
            let detail = summary
                .map(|s| s.fields.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
                .unwrap_or_else(|| format!("{} records", report.records.len()));
            println!(
                "criterion {i}: {} - {title} ({detail}; {:.1}s)",
                if ok { "PASS" } else { "FAIL" },
                start.elapsed().as_secs_f64()
            );
            for line in failures(&report) {
                println!("    {line}");
            }
        }
        results.push((i, ok));
    }
    (results, machine)
}

fn main() {
    let start = Instant::now();
    let (mut results, first) = run_all(true);
    let (_, second) = run_all(false);
    let same = first == second;
    println!(
        "criterion 9: {} - machine reports byte-identical across two runs ({} bytes)",
        if same { "PASS" } else { "FAIL" },
        first.len()
    );
    results.push((9, same));
    let elapsed = start.elapsed().as_secs();
    let in_time = elapsed <= RUNTIME_LIMIT_SECS;
    println!("runtime: {elapsed}s for both runs (limit {RUNTIME_LIMIT_SECS}s) {}", if in_time { "ok" } else { "exceeded" });
    let failed: Vec<usize> = results.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect();
    if failed.is_empty() && in_time {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
