//! Reports and their two renderings.
//!
//! The machine format is one record per line:
//!
//! ```text
//! # stratctl-report v1
//! command=check-fibrant
//! record=fibrancy status=fail object=L outcome=not-equivalent ...
//! status=fail
//! ```
//!
//! Values containing whitespace, `"`, `=` or `\` are double-quoted with
//! backslash escapes. Field names and their order are fixed per record kind.

use std::fmt::Write as _;

use strat_core::homotopy::Verdict;

pub const MACHINE_HEADER: &str = "# stratctl-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Unknown,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Unknown => "unknown",
            Status::Fail => "fail",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }

    pub fn of_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Equivalent passes, NotEquivalent fails.
    pub fn of_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::Equivalent(_) => Status::Pass,
            Verdict::NotEquivalent(_) => Status::Fail,
            Verdict::Unknown(_) => Status::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub status: Status,
    pub fields: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), records: Vec::new() }
    }

    pub fn push<K: Into<String>, V: ToString>(&mut self, kind: &str, status: Status, fields: impl IntoIterator<Item = (K, V)>) {
        let fields = fields.into_iter().map(|(k, v)| (k.into(), v.to_string())).collect();
        self.records.push(Record { kind: kind.into(), status, fields });
    }

    /// A verdict record; `extra` fields come before the verdict's own.
    pub fn verdict(&mut self, kind: &str, extra: Vec<(&str, String)>, v: &Verdict) {
        let mut fields: Vec<(String, String)> = extra.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        fields.extend(v.fields());
        if v.is_not_equivalent() {
            let check = match v.recheck() {
                Ok(()) => "ok".to_string(),
                Err(e) => format!("error: {e}"),
            };
            fields.push(("recheck".into(), check));
        }
        self.records.push(Record { kind: kind.into(), status: Status::of_verdict(v), fields });
    }

    /// Worst status over all records: any failure, else any unknown.
    pub fn status(&self) -> Status {
        self.records.iter().map(|r| r.status).max().unwrap_or(Status::Pass)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Machine => self.machine(),
        }
    }

    fn human(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for r in &self.records {
            let _ = writeln!(out, "  [{}] {}", r.status.as_str(), r.kind);
            let width = r.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &r.fields {
                let _ = writeln!(out, "      {k:<width$}  {v}");
            }
        }
        let _ = writeln!(out, "status: {}", self.status().as_str());
        out
    }

    fn machine(&self) -> String {
        let mut out = format!("{MACHINE_HEADER}\ncommand={}\n", quote(&self.command));
        for r in &self.records {
            let _ = write!(out, "record={} status={}", quote(&r.kind), r.status.as_str());
            for (k, v) in &r.fields {
                let _ = write!(out, " {k}={}", quote(v));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "status={}", self.status().as_str());
        out
    }
}

/// Quotes a machine-format value when needed.
pub fn quote(v: &str) -> String {
    if !v.is_empty() && !v.chars().any(|c| c.is_whitespace() || matches!(c, '"' | '=' | '\\')) {
        return v.to_string();
    }
    let mut s = String::with_capacity(v.len() + 2);
    s.push('"');
    for c in v.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

/// Splits one machine line into `(key, value)` pairs, undoing [`quote`].
pub fn parse_machine_line(line: &str) -> Option<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek() == Some(&' ') {
            chars.next();
        }
        if chars.peek().is_none() {
            return Some(out);
        }
        let mut key = String::new();
        for c in chars.by_ref() {
            if c == '=' {
                break;
            }
            key.push(c);
        }
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            loop {
                match chars.next()? {
                    '"' => break,
                    '\\' => match chars.next()? {
                        'n' => value.push('\n'),
                        c => value.push(c),
                    },
                    c => value.push(c),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c == ' ' {
                    break;
                }
                value.push(c);
                chars.next();
            }
        }
        out.push((key, value));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use strat_core::homotopy::UnknownRecord;

    #[test]
    fn equivalent_record() {
        let mut r = Report::new("t");
        r.verdict("v", vec![], &Verdict::Equivalent(strat_core::homotopy::Witness::Vacuous("x".into())));
        let m = r.emit(Format::Machine);
        assert!(m.starts_with(MACHINE_HEADER));
        assert!(m.contains("record=v status=pass outcome=equivalent witness=vacuous(x)"), "{m}");
        assert_eq!(r.status(), Status::Pass);
    }

    #[test]
    fn unknown_names_the_resource() {
        let mut r = Report::new("t");
        let v = Verdict::Unknown(UnknownRecord { resource: "filler search".into(), detail: "limit 10".into() });
        r.verdict("v", vec![], &v);
        r.push("other", Status::Pass, [("a", 1)]);
        let m = r.emit(Format::Machine);
        assert!(m.contains("resource=\"filler search\""), "{m}");
        assert_eq!(r.status().exit_code(), 2);
        r.push("bad", Status::Fail, Vec::<(String, String)>::new());
        assert_eq!(r.status().exit_code(), 1);
    }

    #[test]
    fn quoting_round_trips() {
        for v in ["plain", "", "two words", "a=b", "q\"uote", "back\\slash", "line\nbreak"] {
            let line = format!("k={} z=1", quote(v));
            let parsed = parse_machine_line(&line).unwrap();
            assert_eq!(parsed, vec![("k".to_string(), v.to_string()), ("z".into(), "1".into())]);
        }
    }

    #[test]
    fn human_lists_fields() {
        let mut r = Report::new("cmd");
        r.push("rec", Status::Fail, [("key", "value")]);
        let h = r.emit(Format::Human);
        assert!(h.contains("[fail] rec") && h.contains("key  value") && h.ends_with("status: fail\n"), "{h}");
    }
}
