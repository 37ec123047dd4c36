//! Regression corpus: `fixtures/<id>/{problem, expected}`.
//!
//! `expected` holds `key = value` lines:
//!
//! ```text
//! origin = worked example: uniqueness of the Moore-Penrose inverse
//! command = certify
//! args = --maxiter 10
//! exit = 0
//! certificate = 0: [(1,0,c), (d,1,1)]
//! ```
//!
//! Checks: `stdout_contains`, `stderr_contains`, `list` (as a set),
//! `list_ordered`, `list_first`, `list_contains`, `certificate`
//! (reorder-equivalent), `integer_clean`, `min_iterations`, `stage`,
//! `witness`. `budget_ms` bounds the wall time (default 10000). Every
//! proved document is also re-verified.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use opcert_core::{Algebra, Certificate, Cofactor, Polynomial};

use crate::commands::{self, Outcome};
use crate::document::{self, CertificateDocument, DocStatus};
use crate::error::{CliError, ExitCode};
use crate::problem::{parse_term, split_top_level, Problem};

pub fn default_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixtureId(pub String);

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    StdoutContains(String),
    StderrContains(String),
    List(Vec<String>),
    ListOrdered(Vec<String>),
    ListFirst(String),
    ListContains(String),
    Certificate { claim: usize, tuples: String },
    IntegerClean(bool),
    MinIterations(usize),
    Stage(usize),
    Witness { var: String, term: String },
}

#[derive(Clone, Debug)]
pub struct Expected {
    pub origin: String,
    pub command: String,
    pub args: Vec<String>,
    pub exit: i32,
    pub budget: Duration,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: FixtureId,
    pub dir: PathBuf,
    pub expected: Expected,
}

impl Fixture {
    pub fn problem_path(&self) -> PathBuf {
        self.dir.join("problem")
    }
}

fn list_items(src: &str) -> Vec<String> {
    let inner = src.trim().trim_start_matches('[').trim_end_matches(']').trim();
    if inner.is_empty() {
        return Vec::new();
    }
    split_top_level(inner).into_iter().map(|s| s.trim().to_string()).collect()
}

impl Expected {
    pub fn parse(src: &str) -> Result<Self, String> {
        let mut origin = None;
        let mut command = None;
        let mut args = Vec::new();
        let mut exit = None;
        let mut budget = Duration::from_secs(10);
        let mut checks = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| format!("line {}: {m}", i + 1);
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected `key = value`"))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            let num = |v: &str| v.parse::<usize>().map_err(|e| err(&e.to_string()));
            match k {
                "origin" => origin = Some(v),
                "command" => command = Some(v),
                "args" => args = v.split_whitespace().map(String::from).collect(),
                "exit" => exit = Some(v.parse::<i32>().map_err(|e| err(&e.to_string()))?),
                "budget_ms" => budget = Duration::from_millis(num(&v)? as u64),
                "stdout_contains" => checks.push(Check::StdoutContains(v)),
                "stderr_contains" => checks.push(Check::StderrContains(v)),
                "list" => checks.push(Check::List(list_items(&v))),
                "list_ordered" => checks.push(Check::ListOrdered(list_items(&v))),
                "list_first" => checks.push(Check::ListFirst(v)),
                "list_contains" => checks.push(Check::ListContains(v)),
                "certificate" => {
                    let (n, tuples) = v.split_once(':').ok_or_else(|| err("expected `index: [tuples]`"))?;
                    checks.push(Check::Certificate {
                        claim: num(n.trim())?,
                        tuples: tuples.trim().to_string(),
                    });
                }
                "integer_clean" => checks.push(Check::IntegerClean(v.parse().map_err(|_| err("expected a bool"))?)),
                "min_iterations" => checks.push(Check::MinIterations(num(&v)?)),
                "stage" => checks.push(Check::Stage(num(&v)?)),
                "witness" => {
                    let (var, term) = v.split_once(":=").ok_or_else(|| err("expected `var := term`"))?;
                    checks.push(Check::Witness {
                        var: var.trim().to_string(),
                        term: term.trim().to_string(),
                    });
                }
                _ => return Err(err(&format!("unknown key `{k}`"))),
            }
        }
        Ok(Expected {
            origin: origin.ok_or("missing `origin`")?,
            command: command.ok_or("missing `command`")?,
            args,
            exit: exit.ok_or("missing `exit`")?,
            budget,
            checks,
        })
    }
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> CliError {
    let path = path.to_path_buf();
    move |source| CliError::Io { path: path.clone(), source }
}

/// Fixtures under `dir` whose id matches `filter`, sorted by id.
pub fn load_fixtures(dir: &Path, filter: Option<&str>) -> Result<Vec<Fixture>, CliError> {
    let pattern = filter
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| CliError::Usage(format!("bad filter: {e}")))?;
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_error(dir))? {
        let path = entry.map_err(io_error(dir))?.path();
        if !path.is_dir() {
            continue;
        }
        let id = FixtureId(path.file_name().expect("entry name").to_string_lossy().into_owned());
        if pattern.as_ref().is_some_and(|p| !p.matches(&id.0)) {
            continue;
        }
        let exp_path = path.join("expected");
        let src = fs::read_to_string(&exp_path).map_err(io_error(&exp_path))?;
        let expected = Expected::parse(&src)
            .map_err(|m| CliError::Usage(format!("{}: {m}", exp_path.display())))?;
        out.push(Fixture { id, dir: path, expected });
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FixtureResult {
    pub id: FixtureId,
    pub origin: String,
    pub elapsed: Duration,
    pub failures: Vec<String>,
    pub code: ExitCode,
    pub stdout: String,
    pub stderr: String,
    pub document: Option<CertificateDocument>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub results: Vec<FixtureResult>,
    pub total: Duration,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(FixtureResult::passed)
    }

    pub fn get(&self, id: &str) -> Option<&FixtureResult> {
        self.results.iter().find(|r| r.id.0 == id)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {:<28} {:>8.1} ms", r.id.0, r.elapsed.as_secs_f64() * 1e3)?;
            for m in &r.failures {
                writeln!(f, "     {m}")?;
            }
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        writeln!(
            f,
            "{passed}/{} fixtures passed in {:.2} s",
            self.results.len(),
            self.total.as_secs_f64()
        )
    }
}

pub fn run_all(dir: &Path, filter: Option<&str>) -> Result<Report, CliError> {
    let start = Instant::now();
    let results = load_fixtures(dir, filter)?.iter().map(run_fixture).collect();
    Ok(Report {
        results,
        total: start.elapsed(),
    })
}

/// Runs one fixture through the command-line entry point.
pub fn run_fixture(fx: &Fixture) -> FixtureResult {
    let exp = &fx.expected;
    let mut argv: Vec<String> = vec!["opcert".into(), exp.command.clone(), fx.problem_path().display().to_string()];
    argv.extend(exp.args.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let start = Instant::now();
    let Outcome { code, document } = commands::run(&argv, &mut out, &mut err);
    let elapsed = start.elapsed();
    let mut res = FixtureResult {
        id: fx.id.clone(),
        origin: exp.origin.clone(),
        elapsed,
        failures: Vec::new(),
        code,
        stdout: String::from_utf8_lossy(&out).into_owned(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
        document,
    };
    if code.0 != exp.exit {
        res.failures.push(format!("exit code {} (expected {})", code.0, exp.exit));
    }
    if elapsed > exp.budget {
        res.failures.push(format!("took {elapsed:?}, budget {:?}", exp.budget));
    }
    // Checks other than the streams need the problem's algebra.
    match Problem::load(&fx.problem_path()) {
        Ok(p) => {
            for c in &exp.checks {
                if let Err(m) = check(c, &res, &p.algebra) {
                    res.failures.push(m);
                }
            }
            if let Some(doc) = res.document.as_ref().filter(|d| d.status == DocStatus::Proved) {
                match document::verify(&p, doc) {
                    Ok(v) if v.accepted() => {}
                    Ok(v) => res.failures.extend(v.failures.into_iter().map(|f| format!("verify: {f}"))),
                    Err(e) => res.failures.push(format!("verify: {e}")),
                }
            }
        }
        Err(e) => {
            let stream_only = exp
                .checks
                .iter()
                .all(|c| matches!(c, Check::StdoutContains(_) | Check::StderrContains(_)));
            if stream_only {
                for c in &exp.checks {
                    if let Err(m) = check(c, &res, &Algebra::new(Vec::<String>::new()).expect("empty")) {
                        res.failures.push(m);
                    }
                }
            } else {
                res.failures.push(format!("problem does not load: {e}"));
            }
        }
    }
    res
}

fn poly(src: &str, alg: &Algebra) -> Result<Polynomial, String> {
    alg.parse(src).map_err(|e| format!("`{src}`: {e}"))
}

fn printed_list(res: &FixtureResult, alg: &Algebra) -> Result<Vec<Polynomial>, String> {
    let line = res
        .stdout
        .lines()
        .find(|l| l.starts_with('['))
        .ok_or("no list on stdout")?;
    list_items(line).iter().map(|s| poly(s, alg)).collect()
}

fn parse_list(items: &[String], alg: &Algebra) -> Result<Vec<Polynomial>, String> {
    items.iter().map(|s| poly(s, alg)).collect()
}

/// `[(l,i,r), ...]` as printed by `Certificate::format_tuples`.
pub fn parse_tuples(src: &str, alg: &Algebra) -> Result<Certificate, String> {
    list_items(src)
        .iter()
        .map(|t| {
            let inner = t.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or(format!("bad tuple `{t}`"))?;
            let parts = split_top_level(inner);
            let [l, i, r] = parts.as_slice() else {
                return Err(format!("bad tuple `{t}`"));
            };
            let gen = i.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"))?;
            Ok(Cofactor::new(parse_term(l, alg)?, gen, parse_term(r, alg)?))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Certificate::new)
}

fn doc_of(res: &FixtureResult) -> Result<&CertificateDocument, String> {
    res.document.as_ref().ok_or_else(|| "no document produced".to_string())
}

fn check(c: &Check, res: &FixtureResult, alg: &Algebra) -> Result<(), String> {
    let fail = |m: String| Err(m);
    match c {
        Check::StdoutContains(s) if !res.stdout.contains(s.as_str()) => fail(format!("stdout lacks `{s}`")),
        Check::StderrContains(s) if !res.stderr.contains(s.as_str()) => fail(format!("stderr lacks `{s}`")),
        Check::StdoutContains(_) | Check::StderrContains(_) => Ok(()),
        Check::List(items) => {
            let want: BTreeSet<Polynomial> = parse_list(items, alg)?.into_iter().collect();
            let got: BTreeSet<Polynomial> = printed_list(res, alg)?.into_iter().collect();
            if want == got {
                Ok(())
            } else {
                fail(format!("list differs from [{}]", items.join(", ")))
            }
        }
        Check::ListOrdered(items) => {
            if parse_list(items, alg)? == printed_list(res, alg)? {
                Ok(())
            } else {
                fail(format!("list is not [{}]", items.join(", ")))
            }
        }
        Check::ListFirst(s) => match printed_list(res, alg)?.first() {
            Some(p) if *p == poly(s, alg)? => Ok(()),
            _ => fail(format!("list does not start with `{s}`")),
        },
        Check::ListContains(s) => {
            if printed_list(res, alg)?.contains(&poly(s, alg)?) {
                Ok(())
            } else {
                fail(format!("list lacks `{s}`"))
            }
        }
        Check::Certificate { claim, tuples } => {
            let want = parse_tuples(tuples, alg)?;
            let rec = doc_of(res)?.claims.get(*claim).ok_or(format!("no claim {claim}"))?;
            let triples = rec.certificate.as_ref().ok_or(format!("claim {claim} has no certificate"))?;
            let got = document::certificate(triples, alg, usize::MAX).map_err(|e| e.to_string())?;
            if got.reorder_equivalent(&want) {
                Ok(())
            } else {
                fail(format!("claim {claim}: certificate {} is not a reordering of {tuples}", got.format_tuples(alg)))
            }
        }
        Check::IntegerClean(b) => {
            if doc_of(res)?.claims.iter().all(|r| r.integer_clean == *b) {
                Ok(())
            } else {
                fail(format!("integer_clean is not {b} everywhere"))
            }
        }
        Check::MinIterations(n) => {
            let it = doc_of(res)?.iterations;
            if it >= *n {
                Ok(())
            } else {
                fail(format!("{it} iterations, expected at least {n}"))
            }
        }
        Check::Stage(n) => {
            let s = doc_of(res)?.iterations;
            if s == *n {
                Ok(())
            } else {
                fail(format!("proved at stage {s}, expected {n}"))
            }
        }
        Check::Witness { var, term } => {
            let want = poly(term, alg)?;
            let ok = doc_of(res)?
                .witnesses
                .iter()
                .flatten()
                .any(|w| &w.var == var && alg.parse(&w.term).is_ok_and(|p| p == want));
            if ok {
                Ok(())
            } else {
                fail(format!("no witness {var} := {term}"))
            }
        }
    }
}
