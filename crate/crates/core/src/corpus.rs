//! Manifest-driven golden tests over `.ctt` files.
//!
//! A manifest has one case per line, fields separated by `|`:
//!
//! ```text
//! check | streams.ctt      | streams
//! check | y.ctt            | guarded-y | reconstructed
//! fail  | bad_endpoint.ctt | EndpointMismatch
//! goal  | streams.ctt      | head (cons a s) | a
//! ```
//!
//! `check` cases must type check; the third field is the topic the file
//! covers and an optional fourth field `reconstructed` marks proof terms that
//! were completed from an informal argument. `fail` cases must be rejected
//! with the given error code. `goal` cases normalize an expression in the
//! scope of a file and compare the rendering. Blank lines and lines starting
//! with `#` are ignored. Paths are relative to the manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::check::ErrorCode;
use crate::driver::{check_file, evaluate, Failure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Expectation {
    Check { topic: String, reconstructed: bool },
    Fail { code: String },
    Goal { expr: String, expected: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusCase {
    pub line: usize,
    pub path: PathBuf,
    pub expect: Expectation,
}

impl CorpusCase {
    pub fn describe(&self) -> String {
        let file = self.path.file_name().map(|f| f.to_string_lossy().to_string()).unwrap_or_default();
        match &self.expect {
            Expectation::Check { topic, .. } => format!("check {file} ({topic})"),
            Expectation::Fail { code } => format!("fail {file} with {code}"),
            Expectation::Goal { expr, expected } => format!("goal {file}: {expr} ==> {expected}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest {0}: {1}")]
    Io(String, std::io::Error),
    #[error("{file}:{line}: {message}")]
    Malformed { file: String, line: usize, message: String },
}

pub fn parse_manifest(text: &str, base: &Path, label: &str) -> Result<Vec<CorpusCase>, ManifestError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| ManifestError::Malformed {
            file: label.to_string(),
            line,
            message,
        };
        let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
        let path = base.join(fields.get(1).ok_or_else(|| bad("missing file".into()))?);
        let expect = match (fields[0], &fields[2..]) {
            ("check", [topic]) => Expectation::Check {
                topic: topic.to_string(),
                reconstructed: false,
            },
            ("check", [topic, "reconstructed"]) => Expectation::Check {
                topic: topic.to_string(),
                reconstructed: true,
            },
            ("fail", [code]) => {
                if ErrorCode::parse(code).is_none() {
                    return Err(bad(format!("unknown error code `{code}`")));
                }
                Expectation::Fail { code: code.to_string() }
            }
            ("goal", [expr, expected]) => Expectation::Goal {
                expr: expr.to_string(),
                expected: expected.to_string(),
            },
            _ => return Err(bad(format!("cannot read case `{trimmed}`"))),
        };
        out.push(CorpusCase { line, path, expect });
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<Vec<CorpusCase>, ManifestError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ManifestError::Io(label.clone(), e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base, &label)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub case: CorpusCase,
    pub passed: bool,
    pub detail: String,
}

fn failure_text(f: &Failure) -> String {
    f.diagnostic().render()
}

pub fn run_case(case: &CorpusCase) -> CaseResult {
    let (passed, detail) = match &case.expect {
        Expectation::Check { .. } => match check_file(&case.path) {
            Ok(l) => (true, format!("{} declarations", l.module.decls.len())),
            Err(f) => (false, failure_text(&f)),
        },
        Expectation::Fail { code } => match check_file(&case.path) {
            Ok(_) => (false, "checked, but a failure was expected".into()),
            Err(f) if f.diagnostic().code == *code => (true, f.diagnostic().message.clone()),
            Err(f) => (false, format!("failed with the wrong code: {}", failure_text(&f))),
        },
        Expectation::Goal { expr, expected } => match check_file(&case.path) {
            Err(f) => (false, failure_text(&f)),
            Ok(l) => match evaluate(&l, expr, false) {
                Ok(v) => {
                    let got = v.render(&l.globals);
                    (got == *expected, got)
                }
                Err(f) => (false, failure_text(&f)),
            },
        },
    };
    CaseResult {
        case: case.clone(),
        passed,
        detail,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub results: Vec<CaseResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    /// TAP version 13 text.
    pub fn tap(&self) -> String {
        let mut out = format!("TAP version 13\n1..{}\n", self.results.len());
        for (k, r) in self.results.iter().enumerate() {
            let status = if r.passed { "ok" } else { "not ok" };
            out.push_str(&format!("{status} {} - {}\n", k + 1, r.case.describe()));
            if !r.passed {
                for l in r.detail.lines() {
                    out.push_str(&format!("  # {l}\n"));
                }
            }
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Run every case, in parallel, reporting in manifest order.
pub fn run_cases(cases: &[CorpusCase]) -> Report {
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || run_case(c))).collect();
        handles
            .into_iter()
            .zip(cases)
            .map(|(h, c)| {
                h.join().unwrap_or_else(|_| CaseResult {
                    case: c.clone(),
                    passed: false,
                    detail: "the checker panicked".into(),
                })
            })
            .collect()
    });
    Report { results }
}

pub fn run_manifest(path: &Path) -> Result<Report, ManifestError> {
    Ok(run_cases(&load_manifest(path)?))
}

/// Topics every corpus must cover with at least one passing `check` case.
pub const REQUIRED_TOPICS: &[&str] = &[
    "path-types",
    "interval",
    "faces",
    "composition",
    "transport",
    "systems",
    "funext",
    "transitivity",
    "delayed-substitutions",
    "later-types",
    "later-type-equalities",
    "later-term-equalities",
    "later-ext",
    "dfix",
    "canonical-unfold",
    "unique-fixed-points",
    "streams",
    "zipwith-comm",
    "negative-recursion",
    "guarded-y",
];

/// Required topics with no `check` case in the manifest.
pub fn uncovered_topics(cases: &[CorpusCase]) -> Vec<&'static str> {
    REQUIRED_TOPICS
        .iter()
        .copied()
        .filter(|t| {
            !cases
                .iter()
                .any(|c| matches!(&c.expect, Expectation::Check { topic, .. } if topic == t))
        })
        .collect()
}
