//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use opcert_core::certify::Progress;
use opcert_core::logic::{semi_decide, Budget, TermBounds, Verdict};
use opcert_core::{
    apply_left_cancellability, apply_right_cancellability, certify, find_equivalent_expression, interreduce,
    Algebra, CancelHeuristic, CancelOptions, CertifyOptions, GbOptions, Heuristic, MonomialOrder, NCIdeal,
    Polynomial, SearchSpec,
};

use crate::document::{self, CertificateDocument, ClaimRecord, DocStatus, Timing, Witness, VERSION};
use crate::error::{CliError, ExitCode};
use crate::fixtures;
use crate::problem::{parse_term, Body, Problem};

#[derive(Debug, Parser)]
#[command(name = "opcert", version, about = "Certified proofs of operator identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prove the claims by ideal membership and print the proofs.
    Certify {
        problem: PathBuf,
        #[arg(long)]
        maxiter: Option<usize>,
        #[arg(long)]
        maxdeg: Option<usize>,
        /// Fail unless the problem declares a quiver to check against.
        #[arg(long)]
        quiver_check: bool,
        #[arg(long)]
        no_criterion: bool,
        /// Write the certificate document here.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Re-check a certificate document by expansion alone.
    Verify { problem: PathBuf, document: PathBuf },
    /// Print a (partial) Groebner basis of the assumptions.
    Gb {
        problem: PathBuf,
        #[arg(long)]
        maxiter: Option<usize>,
        #[arg(long)]
        maxdeg: Option<usize>,
        #[arg(long)]
        interreduce: bool,
        /// Also print the cofactor representation of every element.
        #[arg(long)]
        proofs: bool,
    },
    /// Reduce the claims modulo the assumptions.
    Reduce {
        problem: PathBuf,
        #[arg(long)]
        maxiter: Option<usize>,
    },
    /// Search the ideal for equivalent expressions of a target.
    Find {
        problem: PathBuf,
        target: Option<String>,
        #[arg(long)]
        heuristic: Option<String>,
        #[arg(long)]
        prefix: Option<String>,
        #[arg(long)]
        suffix: Option<String>,
        #[arg(long)]
        degbound: Option<usize>,
        #[arg(long)]
        maxiter: Option<usize>,
    },
    /// Apply left or right cancellability of `a*b`.
    Cancel {
        problem: PathBuf,
        side: CancelSide,
        a: String,
        b: String,
        #[arg(long)]
        heuristic: Option<String>,
        #[arg(long)]
        degbound: Option<usize>,
        #[arg(long)]
        maxiter: Option<usize>,
    },
    /// Run the semi-decision procedure on an operator statement.
    Prove {
        problem: PathBuf,
        /// Largest word degree of witness terms.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        stages: Option<usize>,
        /// Keep enlarging the term bounds without a stage limit.
        #[arg(long, conflicts_with = "stages")]
        unbounded: bool,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Run the bundled regression fixtures.
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Glob on fixture ids.
        filter: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CancelSide {
    Left,
    Right,
}

/// Exit status plus the certificate document, if one was produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: ExitCode,
    pub document: Option<CertificateDocument>,
}

impl Outcome {
    fn code(code: ExitCode) -> Self {
        Outcome { code, document: None }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                ExitCode::INPUT
            } else {
                let _ = write!(out, "{}", e.render());
                ExitCode::SUCCESS
            };
            return Outcome::code(code);
        }
    };
    match execute(cli.command, out, err) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Outcome::code(ExitCode::INPUT)
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, CliError> {
    match cmd {
        Command::Certify {
            problem,
            maxiter,
            maxdeg,
            quiver_check,
            no_criterion,
            json,
        } => {
            let p = Problem::load(&problem)?;
            if quiver_check && p.quiver.is_none() {
                return Err(CliError::Usage("--quiver-check given but the problem has no [quiver]".into()));
            }
            let opts = CertifyOptions {
                maxiter: maxiter.or(p.options.maxiter).unwrap_or(10),
                maxdeg: maxdeg.or(p.options.maxdeg),
                criterion: !no_criterion && p.options.criterion.unwrap_or(true),
                order: Some(p.order.clone()),
                quiver: p.quiver.clone(),
            };
            let doc = cmd_certify(&p, &opts, out, err)?;
            write_document(json.as_deref(), &doc)?;
            let code = match doc.status {
                DocStatus::Proved => ExitCode::SUCCESS,
                DocStatus::Failed => ExitCode::UNKNOWN,
            };
            Ok(Outcome {
                code,
                document: Some(doc),
            })
        }
        Command::Verify { problem, document } => {
            let p = Problem::load(&problem)?;
            let src = fs::read_to_string(&document).map_err(|source| CliError::Io { path: document, source })?;
            let doc = CertificateDocument::from_json(&src)?;
            let report = document::verify(&p, &doc)?;
            for f in &report.failures {
                writeln!(out, "FAILED: {f}").ok();
            }
            if report.accepted() {
                writeln!(out, "Verified {} certificate(s) by expansion.", report.checked).ok();
                Ok(Outcome::code(ExitCode::SUCCESS))
            } else {
                Ok(Outcome::code(ExitCode::UNKNOWN))
            }
        }
        Command::Gb {
            problem,
            maxiter,
            maxdeg,
            interreduce: inter,
            proofs,
        } => {
            let p = Problem::load(&problem)?;
            let mut ideal = NCIdeal::new(p.assumptions.clone(), p.order.clone())?;
            let g = ideal.groebner_basis(&gb_options(&p, maxiter, maxdeg));
            if !ideal.is_complete() {
                writeln!(err, "Note: partial basis after {} iterations", ideal.iterations()).ok();
            }
            let g = if inter { interreduce(&g, &p.order) } else { g };
            let polys: Vec<Polynomial> = g.iter().map(|t| t.poly.clone()).collect();
            writeln!(out, "{}", format_list(&polys, &p.algebra, &p.order)).ok();
            if proofs {
                for t in &g {
                    writeln!(out, "{}", t.cert.pretty(ideal.gens(), &p.algebra, Some(&p.order))?).ok();
                }
            }
            Ok(Outcome::code(ExitCode::SUCCESS))
        }
        Command::Reduce { problem, maxiter } => {
            let p = Problem::load(&problem)?;
            let claims = need_claims(&p)?;
            let mut ideal = NCIdeal::new(p.assumptions.clone(), p.order.clone())?;
            let opts = gb_options(&p, maxiter, None);
            let reduced: Vec<Polynomial> = claims.iter().map(|c| ideal.reduced_form(c, &opts).poly).collect();
            writeln!(out, "{}", format_list(&reduced, &p.algebra, &p.order)).ok();
            Ok(Outcome::code(ExitCode::SUCCESS))
        }
        Command::Find {
            problem,
            target,
            heuristic,
            prefix,
            suffix,
            degbound,
            maxiter,
        } => {
            let p = Problem::load(&problem)?;
            let alg = &p.algebra;
            let target = match target {
                Some(t) => alg.parse(&t).map_err(|e| CliError::Usage(format!("target `{t}`: {e}")))?,
                None => match (&p.options.target, p.claims()) {
                    (Some(t), _) => t.clone(),
                    (None, Some([c])) => c.clone(),
                    _ => return Err(CliError::Usage("find needs a target".into())),
                },
            };
            let mut spec = SearchSpec::new(target);
            spec.heuristic = heuristic
                .or_else(|| p.options.heuristic.clone())
                .map(|h| h.parse::<Heuristic>())
                .transpose()?
                .unwrap_or_default();
            spec.prefix = term_arg(prefix, alg)?.or_else(|| p.options.prefix.clone());
            spec.suffix = term_arg(suffix, alg)?.or_else(|| p.options.suffix.clone());
            if let Some(d) = degbound.or(p.options.degbound) {
                spec.degbound = d;
            }
            if p.order_explicit {
                spec.order = Some(p.order.clone());
            }
            spec.gb = gb_options(&p, maxiter, None);
            spec.quiver = p.quiver.clone();
            let ideal = NCIdeal::new(p.assumptions.clone(), p.order.clone())?;
            let found = find_equivalent_expression(&ideal, &spec)?;
            let polys: Vec<Polynomial> = found.into_iter().map(|f| f.poly).collect();
            writeln!(out, "{}", format_list(&polys, alg, &p.order)).ok();
            Ok(Outcome::code(if polys.is_empty() { ExitCode::UNKNOWN } else { ExitCode::SUCCESS }))
        }
        Command::Cancel {
            problem,
            side,
            a,
            b,
            heuristic,
            degbound,
            maxiter,
        } => {
            let p = Problem::load(&problem)?;
            let alg = &p.algebra;
            let a = term_arg(Some(a), alg)?.expect("given");
            let b = term_arg(Some(b), alg)?.expect("given");
            let mut opts = CancelOptions::default();
            if let Some(h) = heuristic.or_else(|| p.options.heuristic.clone()) {
                opts.heuristic = h.parse::<CancelHeuristic>()?;
            }
            if let Some(d) = degbound.or(p.options.degbound) {
                opts.degbound = d;
            }
            opts.gb = gb_options(&p, maxiter, None);
            let ideal = NCIdeal::new(p.assumptions.clone(), p.order.clone())?;
            let found = match side {
                CancelSide::Left => apply_left_cancellability(&ideal, &a, &b, &opts)?,
                CancelSide::Right => apply_right_cancellability(&ideal, &a, &b, &opts)?,
            };
            let polys: Vec<Polynomial> = found.into_iter().map(|f| f.poly).collect();
            writeln!(out, "{}", format_list(&polys, alg, &p.order)).ok();
            Ok(Outcome::code(if polys.is_empty() { ExitCode::UNKNOWN } else { ExitCode::SUCCESS }))
        }
        Command::Prove {
            problem,
            degree,
            stages,
            unbounded,
            json,
        } => {
            let p = Problem::load(&problem)?;
            let degree = degree.or(p.options.degree).unwrap_or(3);
            let schedule: Vec<TermBounds> = (1..=degree).map(TermBounds::words).collect();
            let mut budget = if unbounded {
                Budget::unbounded(schedule)
            } else {
                Budget::bounded(schedule, stages.or(p.options.stages).unwrap_or(200))
            };
            budget.order = Some(p.order.clone());
            let doc = cmd_prove(&p, &budget, out)?;
            let code = match &doc {
                Some(d) => {
                    write_document(json.as_deref(), d)?;
                    ExitCode::SUCCESS
                }
                None => ExitCode::UNKNOWN,
            };
            Ok(Outcome { code, document: doc })
        }
        Command::Fixtures { dir, filter } => {
            let dir = dir.unwrap_or_else(fixtures::default_dir);
            let report = fixtures::run_all(&dir, filter.as_deref())?;
            write!(out, "{report}").ok();
            Ok(Outcome::code(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::UNKNOWN }))
        }
    }
}

fn need_claims(p: &Problem) -> Result<&[Polynomial], CliError> {
    p.claims().ok_or_else(|| CliError::Usage("the problem has no [claims] section".into()))
}

fn gb_options(p: &Problem, maxiter: Option<usize>, maxdeg: Option<usize>) -> GbOptions {
    let mut o = GbOptions::default();
    if let Some(m) = maxiter.or(p.options.maxiter) {
        o.maxiter = m;
    }
    o.maxdeg = maxdeg.or(p.options.maxdeg);
    if let Some(c) = p.options.criterion {
        o.criterion = c;
    }
    o
}

fn term_arg(src: Option<String>, alg: &Algebra) -> Result<Option<opcert_core::Term>, CliError> {
    src.map(|s| parse_term(&s, alg).map_err(CliError::Usage)).transpose()
}

fn write_document(path: Option<&Path>, doc: &CertificateDocument) -> Result<(), CliError> {
    if let Some(path) = path {
        fs::write(path, doc.to_json()).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

/// `[p1, p2, ...]` with every polynomial written in ascending `order`.
pub fn format_list(polys: &[Polynomial], alg: &Algebra, order: &MonomialOrder) -> String {
    let items: Vec<String> = polys
        .iter()
        .map(|p| p.display(alg).with_order(Some(order)).to_string())
        .collect();
    format!("[{}]", items.join(", "))
}

pub fn cmd_certify(
    p: &Problem,
    opts: &CertifyOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<CertificateDocument, CliError> {
    let claims = need_claims(p)?;
    let alg = &p.algebra;
    let start = Instant::now();
    let mut last = None;
    let report = certify(&p.assumptions, claims, alg.len(), opts, &mut |ev| match ev {
        Progress::Finished(_) => last = ev.message(),
        _ => {
            if let Some(m) = ev.message() {
                writeln!(err, "{m}").ok();
            }
        }
    })?;
    let seconds = start.elapsed().as_secs_f64();
    if let Some(m) = last {
        writeln!(out, "{m}").ok();
    }
    let mut records = Vec::with_capacity(claims.len());
    for (i, (claim, proof)) in claims.iter().zip(&report.proofs).enumerate() {
        match proof {
            Some(cert) => {
                writeln!(out, "{}", cert.pretty(&p.assumptions, alg, Some(&p.order))?).ok();
            }
            None => {
                writeln!(out, "claim {i} `{}`: not established", claim.display(alg).with_order(Some(&p.order))).ok();
            }
        }
        records.push(ClaimRecord {
            claim: claim.display(alg).to_string(),
            certificate: proof.as_ref().map(|c| document::records(c, alg)),
            integer_clean: report.integer_clean[i],
            generators: None,
        });
    }
    Ok(CertificateDocument {
        status: if report.proved() { DocStatus::Proved } else { DocStatus::Failed },
        claims: records,
        iterations: report.iterations_used,
        witnesses: None,
        timing: Timing { seconds },
        version: VERSION.to_string(),
    })
}

/// Prints the verdict; returns the document when proved.
pub fn cmd_prove(p: &Problem, budget: &Budget, out: &mut dyn Write) -> Result<Option<CertificateDocument>, CliError> {
    let Body::Statement(stmt) = &p.body else {
        return Err(CliError::Usage("the problem has no [statement] section".into()));
    };
    let alg = &p.algebra;
    let start = Instant::now();
    let verdict = semi_decide(stmt, alg, budget)?;
    let seconds = start.elapsed().as_secs_f64();
    let proof = match verdict {
        Verdict::Exhausted { stages } => {
            writeln!(out, "unknown: no proof within {stages} stages").ok();
            return Ok(None);
        }
        Verdict::Proved(proof) => proof,
    };
    writeln!(out, "true").ok();
    writeln!(out, "stage {}", proof.stage).ok();
    let mut witnesses = Vec::new();
    for (i, inst) in proof.witnesses.iter().enumerate() {
        if !inst.0.is_empty() {
            writeln!(out, "{inst}").ok();
        }
        witnesses.extend(inst.0.iter().map(|(v, t)| Witness {
            instance: i,
            var: v.clone(),
            term: t.to_string(),
        }));
    }
    let mut records = Vec::new();
    for c in &proof.clauses {
        writeln!(out, "{}", c.clause).ok();
        writeln!(out, "  {}", c.certificate.pretty(&c.generators, alg, Some(&p.order))?).ok();
        records.push(ClaimRecord {
            claim: c.candidate.display(alg).to_string(),
            certificate: Some(document::records(&c.certificate, alg)),
            integer_clean: c.certificate.is_integral(),
            generators: Some(c.generators.iter().map(|g| g.display(alg).to_string()).collect()),
        });
    }
    Ok(Some(CertificateDocument {
        status: DocStatus::Proved,
        claims: records,
        iterations: proof.stage,
        witnesses: Some(witnesses),
        timing: Timing { seconds },
        version: VERSION.to_string(),
    }))
}
