use std::path::PathBuf;
use std::process::Command;

use strat_cli::report::parse_machine_line;
use strat_cli::Workspace;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn scratch(name: &str) -> String {
    std::env::temp_dir().join(format!("stratctl-{}-{name}", std::process::id())).display().to_string()
}

fn stratctl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stratctl")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

/// Records of kind `kind` as key-value maps.
fn records(stdout: &str, kind: &str) -> Vec<Vec<(String, String)>> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(parse_machine_line)
        .filter(|r| r.first().map(|(k, v)| k == "record" && v == kind).unwrap_or(false))
        .collect()
}

fn field<'a>(r: &'a [(String, String)], key: &str) -> &'a str {
    r.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).unwrap_or_else(|| panic!("no field {key} in {r:?}"))
}

#[test]
fn example_horn_is_not_fibrant() {
    let (code, out, _) = stratctl(&["--format", "machine", "check-fibrant", &fixture("mixed_horn.strat"), "--max-dim", "3"]);
    assert_eq!(code, 1, "{out}");
    let r = &records(&out, "fibrancy")[0];
    assert_eq!(field(r, "outcome"), "not-equivalent");
    assert_eq!(field(r, "context"), "stratum 0");
    assert_eq!(field(r, "invariant"), "lift:horn(2,0)");
    assert_eq!(field(r, "recheck"), "ok");
    assert!(out.ends_with("status=fail\n"));
}

#[test]
fn increasing_horn_is_fibrant() {
    let (code, out, _) = stratctl(&["check-fibrant", &fixture("fibrant_horn.strat")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.split_whitespace().eq(["outcome", "equivalent"])), "{out}");
}

#[test]
fn classify_left_horn() {
    let (code, out, _) = stratctl(&["--format", "machine", "classify-horn", "--labels", "p,p,q", "--k", "0"]);
    assert_eq!(code, 0);
    assert_eq!(field(&records(&out, "horn")[0], "class"), "TrivialLeft");
    let (_, out, _) = stratctl(&["--format", "machine", "classify-horn", "--labels", "p,q,r", "--k", "1"]);
    assert_eq!(field(&records(&out, "horn")[0], "class"), "TrivialInner");
    let (_, out, _) = stratctl(&["--format", "machine", "classify-horn", "--labels", "p,q,q", "--k", "0"]);
    assert_eq!(field(&records(&out, "horn")[0], "class"), "NotTrivial");
}

#[test]
fn written_certificate_verifies() {
    let path = scratch("spine3.strat");
    let (code, _, err) = stratctl(&["certify", "spine", "3", "--output", &path, "--name", "spine3"]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = stratctl(&["--format", "machine", "verify-cert", &path]);
    assert_eq!(code, 0, "{out}");
    let r = &records(&out, "certificate")[0];
    assert_eq!((field(r, "name"), field(r, "steps")), ("spine3", "4"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(Workspace::parse(&text).unwrap().serialize(), text);
    std::fs::remove_file(path).ok();
}

#[test]
fn tampered_certificate_fails() {
    let path = scratch("prism.strat");
    let (code, _, _) = stratctl(&["certify", "prism", "--labels", "0,1", "--output", &path]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    // drop the last step
    let last = text.lines().filter(|l| l.starts_with("step ")).last().unwrap().to_string();
    std::fs::write(&path, text.replace(&format!("{last}\n"), "")).unwrap();
    let (code, out, _) = stratctl(&["--format", "machine", "verify-cert", &path]);
    assert_eq!(code, 1, "{out}");
    assert!(field(&records(&out, "certificate")[0], "message").contains("differs"), "{out}");
    std::fs::remove_file(path).ok();
}

#[test]
fn replacement_round_trips_through_a_file() {
    let src = scratch("spine2.strat");
    std::fs::write(&src, "poset C\nelem 0 1 2\nrel 0 < 1\nrel 1 < 2\nsset S = spine 2\nstrat S over C\nlabel 0 0\nlabel 1 1\nlabel 2 2\n").unwrap();
    let out_path = scratch("spine2-fib.strat");
    let (code, out, _) = stratctl(&["--format", "machine", "replace", &src, "S", "--output", &out_path]);
    assert_eq!(code, 0, "{out}");
    let r = &records(&out, "replacement")[0];
    assert_eq!((field(r, "saturated"), field(r, "attached")), ("true", "1"));
    assert!(records(&out, "stratum").iter().all(|r| field(r, "status") == "pass"));
    let (code, _, _) = stratctl(&["verify-cert", &out_path]);
    assert_eq!(code, 0);
    let (code, _, _) = stratctl(&["check-fibrant", &out_path, "S_fib"]);
    assert_eq!(code, 0);
    std::fs::remove_file(src).ok();
    std::fs::remove_file(out_path).ok();
}

#[test]
fn strata_and_links() {
    let corpus = fixture("corpus.strat");
    let (code, out, _) = stratctl(&["--format", "machine", "links-equiv", &corpus, "collapse"]);
    assert_eq!(code, 1);
    let r = &records(&out, "links-equiv")[0];
    assert_eq!((field(r, "invariant"), field(r, "left"), field(r, "right")), ("pi0", "2", "1"));
    assert_eq!(field(r, "recheck"), "ok");
    let (code, _, _) = stratctl(&["links-equiv", &fixture("fibrant_horn.strat"), "--identity", "H"]);
    assert_eq!(code, 0);
}

#[test]
fn presheaf_commands() {
    let corpus = fixture("corpus.strat");
    for args in [
        vec!["decollage-check", &corpus, "K"],
        vec!["decollage-check", &corpus, "Chain"],
        vec!["segal", &corpus, "K", "--string", "{0<1<2}"],
        vec!["adjunction", &corpus, "K", "Chain"],
        vec!["base-change", &corpus, "R"],
        vec!["base-change", &corpus, "F"],
    ] {
        let (code, out, err) = stratctl(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
    }
}

#[test]
fn witnesses() {
    let (code, out, _) = stratctl(&["--format", "machine", "non-lift", "--labels", "0,1,2", "--k", "0"]);
    assert_eq!(code, 0, "{out}");
    let r = &records(&out, "non-lift")[0];
    assert_eq!((field(r, "lifts"), field(r, "recheck")), ("0", "ok"));
    let (code, _, err) = stratctl(&["non-lift", "--labels", "0,0,1", "--k", "0"]);
    assert_eq!(code, 1, "trivial horns have no witness");
    assert!(err.contains("TrivialLeft"), "{err}");
    let (code, out, _) = stratctl(&["base-case", "--labels", "p,p,q"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn generating_sets_and_vex() {
    let (code, out, _) = stratctl(&["--format", "machine", "gen-set", "--kind", "IH_P", "--max-n", "2", "--chain", "1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&records(&out, "summary")[0], "size"), records(&out, "item").len().to_string());
    let (code, out, _) = stratctl(&["--format", "machine", "vex", &fixture("mixed_horn.strat"), "L", "--max-dim", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, err) = stratctl(&["gen-set", "--kind", "XX"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn appendix_sweep_and_printed_orientation() {
    let small = ["--grid", "2", "appendix-eval", "--max-poset", "2", "--time-density", "2", "--mapping-density", "2"];
    let (code, out, _) = stratctl(&small);
    assert_eq!(code, 0, "{out}");
    let mut printed = vec!["--printed-orientation"];
    printed.extend(small);
    let (code, out, _) = stratctl(&printed);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("orientation      printed"));
}

#[test]
fn usage_and_parse_errors_exit_3() {
    assert_eq!(stratctl(&["no-such-command"]).0, 3);
    assert_eq!(stratctl(&["check-fibrant"]).0, 3);
    assert_eq!(stratctl(&["check-fibrant", "/no/such/file.strat"]).0, 3);
    assert_eq!(stratctl(&["--help"]).0, 0);
    let bad = scratch("bad.strat");
    std::fs::write(&bad, "poset P\nelem 0 1\nrel 0 < 1\nsset L = horn 2 0\nstrat L over P\nlabel 0 1\nlabel 1 0\nlabel 2 1\n").unwrap();
    let (code, _, err) = stratctl(&["check-fibrant", &bad]);
    assert_eq!(code, 3);
    assert!(err.contains("line 5") && err.contains("`01`"), "{err}");
    std::fs::write(&bad, "strat L over P\n").unwrap();
    let (code, _, err) = stratctl(&["check-fibrant", &bad]);
    assert_eq!(code, 3);
    assert!(err.contains("line 1: unknown sset `L`"), "{err}");
    std::fs::remove_file(bad).ok();
}

#[test]
fn exhausted_budget_is_unknown() {
    let (code, out, _) = stratctl(&["--format", "machine", "--budget", "1", "check-fibrant", &fixture("fibrant_horn.strat")]);
    assert_eq!(code, 2, "{out}");
    let r = &records(&out, "fibrancy")[0];
    assert_eq!(field(r, "outcome"), "unknown");
    assert!(!field(r, "resource").is_empty());
}

#[test]
fn machine_reports_are_deterministic() {
    let corpus = fixture("corpus.strat");
    let runs = [
        vec!["--format", "machine", "check-fibrant", corpus.as_str()],
        vec!["--format", "machine", "adjunction", corpus.as_str(), "K", "Chain"],
        vec!["--format", "machine", "base-change", corpus.as_str(), "R"],
        vec!["--format", "machine", "vex", corpus.as_str(), "Iso", "--max-dim", "2"],
    ];
    for args in runs {
        assert_eq!(stratctl(&args), stratctl(&args), "{args:?}");
    }
}

#[test]
fn fixtures_round_trip() {
    for name in ["mixed_horn.strat", "fibrant_horn.strat", "corpus.strat"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let ws = Workspace::parse(&text).unwrap();
        let once = ws.serialize();
        let again = Workspace::parse(&once).unwrap();
        assert_eq!(again, ws, "{name}");
        assert_eq!(again.serialize(), once);
    }
}
