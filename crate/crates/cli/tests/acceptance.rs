//! Acceptance criteria 1-11, one line each. Runs without the libtest
//! harness so the report is always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Duration;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use opcert_cli::document::{self, CertificateDocument, DocStatus};
use opcert_cli::fixtures::{default_dir, FixtureResult, Report};
use opcert_cli::{run_all, Problem};
use opcert_core::certify::Progress;
use opcert_core::{
    certify, interreduce, AdjointMap, Algebra, CertifyOptions, GbOptions, MonomialOrder, NCIdeal, Polynomial,
    Quiver, Rational, Term, Var, Word,
};

const UNIQUENESS_BUDGET: Duration = Duration::from_secs(5);
const FIXTURE_BUDGET: Duration = Duration::from_secs(10);
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const RANDOM_IDEALS: u32 = 200;
const ORDER_TRIPLES: u32 = 10_000;
const ADJOINT_PAIRS: u32 = 1_000;

/// Criteria expected to stay red, with the reason. A known-red criterion
/// that starts passing fails the run so this list gets updated.
const KNOWN_RED: &[(u8, &str)] = &[(
    5,
    "the printed second range-inclusion output does not start with the requested prefix",
)];

type Outcome = Result<String, String>;

fn fixture<'r>(report: &'r Report, id: &str) -> Result<&'r FixtureResult, String> {
    let r = report.get(id).ok_or(format!("fixture {id} missing"))?;
    if r.passed() {
        Ok(r)
    } else {
        Err(format!("{id}: {}", r.failures.join("; ")))
    }
}

fn fixtures(report: &Report, ids: &[&str]) -> Result<(), String> {
    let errs: Vec<String> = ids.iter().filter_map(|id| fixture(report, id).err()).collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs.join(" | "))
    }
}

fn doc(r: &FixtureResult) -> Result<&CertificateDocument, String> {
    r.document.as_ref().ok_or(format!("{}: no document", r.id))
}

fn problem(id: &str) -> Problem {
    Problem::load(&default_dir().join(id).join("problem")).expect("fixture problem loads")
}

fn criterion_1(report: &Report) -> Outcome {
    let r = fixture(report, "mp-uniqueness")?;
    let d = doc(r)?;
    if !d.claims[0].integer_clean {
        return Err("certificate not integer clean".into());
    }
    if r.elapsed >= UNIQUENESS_BUDGET {
        return Err(format!("took {:?}", r.elapsed));
    }
    let p = problem("mp-uniqueness");
    let cert = document::certificate(d.claims[0].certificate.as_ref().unwrap(), &p.algebra, 12)
        .map_err(|e| e.to_string())?;
    let claim = p.algebra.parse("b - c").unwrap();
    if cert.expand(&p.assumptions).map_err(|e| e.to_string())? != claim {
        return Err("certificate does not expand to b - c".into());
    }
    Ok(format!("{} triples, {:.1} ms", cert.len(), r.elapsed.as_secs_f64() * 1e3))
}

fn criterion_2(report: &Report) -> Outcome {
    fixtures(report, &["groebner-basis-xy", "interreduce-xy", "reduced-form-xy"])?;
    let alg = Algebra::new(["x", "y"]).unwrap();
    let p = |s: &str| alg.parse(s).unwrap();
    let order = MonomialOrder::deglex(2);
    let mut ideal = NCIdeal::new(vec![p("x*y*x - x*y"), p("y*x*x*y - y")], order.clone()).unwrap();
    let basis = ideal.groebner_basis(&GbOptions::default());
    let monic: BTreeSet<Polynomial> = basis
        .iter()
        .map(|t| {
            let lc = order.leading_term(&t.poly).unwrap().coeff.clone();
            t.poly.scale(&(Rational::from_integer(1.into()) / lc))
        })
        .collect();
    let printed: BTreeSet<Polynomial> = [
        "x*y*x - x*y",
        "y*x^2*y - y",
        "y*x - y",
        "x*y^2 - x*y",
        "x*y^2*x - x*y",
        "y^2 - y",
        "y^3 - y",
    ]
    .iter()
    .map(|s| p(s))
    .collect();
    if monic != printed {
        return Err("basis differs from the printed seven elements".into());
    }
    let reduced: BTreeSet<Polynomial> = interreduce(&basis, &order).into_iter().map(|t| t.poly).collect();
    if reduced != BTreeSet::from([p("y*x - y"), p("y^2 - y")]) {
        return Err("interreduced basis differs".into());
    }
    if !ideal.normal_form(&p("y^2 - y")).is_zero() || ideal.normal_form(&p("y^2")) != p("y") {
        return Err("normal forms differ".into());
    }
    Ok("7-element basis, 2 after interreduction".into())
}

fn criterion_3(report: &Report) -> Outcome {
    fixtures(report, &["small-certificate", "long-claim-maxiter-10", "long-claim-maxiter-20"])?;
    let r = fixture(report, "small-certificate")?;
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    let want = squash("-d + a*b*c = (-d + a*b)*c + d*(-1 + c)");
    if !r.stdout.lines().any(|l| squash(l) == want) {
        return Err("pretty print differs".into());
    }
    Ok("tuples, pretty print, maxiter 10 fails and 20 succeeds".into())
}

fn criterion_4(report: &Report) -> Outcome {
    fixtures(report, &["mp-existence-find", "mp-existence-find-block", "mp-existence-penrose"])?;
    Ok("candidate found under both orders; Penrose identities certified".into())
}

/// Re-checks each printed element by `reduced_form`, after multiplying
/// back the cancelled factor.
fn members_reduce_to_zero(report: &Report, id: &str, wrap: &dyn Fn(&Algebra, Polynomial) -> Polynomial) -> Result<usize, String> {
    let r = report.get(id).ok_or(format!("fixture {id} missing"))?;
    let p = problem(id);
    let line = r.stdout.lines().find(|l| l.starts_with('[')).ok_or(format!("{id}: no output list"))?;
    let inner = line.trim_start_matches('[').trim_end_matches(']');
    let mut ideal = NCIdeal::new(p.assumptions.clone(), p.order.clone()).unwrap();
    let mut n = 0;
    for item in opcert_cli::problem::split_top_level(inner) {
        let f = p.algebra.parse(item).map_err(|e| e.to_string())?;
        let m = wrap(&p.algebra, f);
        if !ideal.reduced_form(&m, &GbOptions::default()).poly.is_zero() {
            return Err(format!("{id}: {} is not in the ideal", m.display(&p.algebra)));
        }
        n += 1;
    }
    Ok(n)
}

fn criterion_5(report: &Report) -> Outcome {
    let plain = |_: &Algebra, f: Polynomial| f;
    let left = |a: &Algebra, f: Polynomial| &a.parse("c").unwrap() * &f;
    let right = |a: &Algebra, f: Polynomial| &f * &a.parse("d*a").unwrap();
    type Lift<'a> = &'a dyn Fn(&Algebra, Polynomial) -> Polynomial;
    let ids: [(&str, Lift); 7] = [
        ("find-default", &plain),
        ("find-naive-suffix", &plain),
        ("find-right-ideal", &plain),
        ("cancel-left", &left),
        ("cancel-right-two-sided", &right),
        ("range-inclusion-dagger-in-adjoint", &plain),
        ("range-inclusion-adjoint-in-dagger", &plain),
    ];
    let mut checked = 0;
    for (id, wrap) in ids {
        checked += members_reduce_to_zero(report, id, wrap)?;
    }
    fixtures(report, &ids.map(|(id, _)| id))?;
    Ok(format!("{checked} outputs reproduced and re-verified"))
}

fn criterion_6(report: &Report) -> Outcome {
    fixture(report, "quiver-typo")?;
    let alg = Algebra::new(["a", "b", "c", "d"]).unwrap();
    let q = Quiver::from_triples(&[("U", "V", "a"), ("V", "W", "b"), ("W", "V", "c"), ("V", "U", "d")], &alg).unwrap();
    let p = |s: &str| alg.parse(s).unwrap();
    if q.is_compatible(&p("a*b + c*d")) || !q.is_compatible(&p("a*d + c*b")) {
        return Err("compatibility verdicts differ".into());
    }
    Ok("compatibility verdicts and typo error".into())
}

fn criterion_7(report: &Report) -> Outcome {
    fixture(report, "real-mp")?;
    let r = fixture(report, "full-rank-decomposition")?;
    let it = doc(r)?.iterations;
    if it <= 4 {
        return Err(format!("full-rank decomposition needed only {it} iterations"));
    }
    Ok(format!("full-rank decomposition after {it} iterations"))
}

fn criterion_8(report: &Report) -> Outcome {
    fixtures(report, &["mp-existence-prove", "prove-identity-witness", "prove-toy-exhausts"])?;
    let d = doc(fixture(report, "mp-existence-prove")?)?;
    if d.claims.is_empty() || d.claims.iter().any(|c| c.certificate.as_ref().is_none_or(Vec::is_empty)) {
        return Err("existence proof lacks certificates".into());
    }
    Ok(format!("existence proved at stage {} with {} certificates", d.iterations, d.claims.len()))
}

fn word(vars: u32, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..vars, 0..=len).prop_map(|v| Word::new(v.into_iter().map(Var).collect()))
}

fn poly(vars: u32, len: usize, terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..=4, 1i64..=3, word(vars, len)), 0..=terms).prop_map(|ts| {
        Polynomial::from_terms(ts.into_iter().map(|(n, d, w)| Term::new(Rational::new(n.into(), d.into()), w)))
    })
}

fn binomial() -> impl Strategy<Value = Polynomial> {
    (word(4, 4), word(4, 4), any::<bool>()).prop_filter_map("degenerate", |(a, b, mono)| {
        if a.is_one() || a == b {
            return None;
        }
        let p = Polynomial::from_word(a);
        Some(if mono { p } else { p - Polynomial::from_word(b) })
    })
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_9(_: &Report) -> Outcome {
    let ideals = (
        prop::collection::vec(binomial(), 1..=4),
        prop::collection::vec((0usize..4, word(4, 2), word(4, 2), -3i64..=3), 1..=3),
    );
    run_property(RANDOM_IDEALS, ideals, |(gens, picks)| {
        let mut ideal = NCIdeal::with_deglex(gens.clone(), 4).unwrap();
        for b in ideal.groebner_basis(&GbOptions { maxiter: 3, ..GbOptions::default() }) {
            prop_assert_eq!(b.cert.expand(&gens).unwrap(), b.poly);
        }
        for g in &gens {
            prop_assert!(ideal.normal_form(g).is_zero());
        }
        let claim: Polynomial = picks
            .iter()
            .map(|(i, l, r, c)| {
                gens[i % gens.len()]
                    .sandwich(&Term::monomial(l.clone()), &Term::monomial(r.clone()))
                    .scale(&Rational::from_integer((*c).into()))
            })
            .sum();
        let opts = CertifyOptions { maxiter: 4, ..Default::default() };
        let rep = certify(&gens, std::slice::from_ref(&claim), 4, &opts, &mut |_: Progress| {}).unwrap();
        if let Some(cert) = &rep.proofs[0] {
            prop_assert_eq!(cert.expand(&gens).unwrap(), claim);
        }
        Ok(())
    })?;

    let order = MonomialOrder::from_blocks(vec![vec![Var(2), Var(0)], vec![Var(3), Var(1)]], 4).unwrap();
    run_property(ORDER_TRIPLES, (word(4, 5), word(4, 5), word(4, 3)), |(u, v, w)| {
        let uv = order.cmp_words(&u, &v);
        prop_assert_eq!(uv.reverse(), order.cmp_words(&v, &u));
        prop_assert_eq!(uv.is_eq(), u == v);
        prop_assert_eq!(order.cmp_words(&w.concat(&u), &w.concat(&v)), uv);
        prop_assert_eq!(order.cmp_words(&u.concat(&w), &v.concat(&w)), uv);
        Ok(())
    })?;

    let alg = Algebra::new(["a", "b", "c", "a_adj", "b_adj", "c_adj"]).unwrap();
    let adj = AdjointMap::by_suffix(&alg);
    run_property(ADJOINT_PAIRS, (poly(6, 3, 4), poly(6, 3, 4)), |(p, q)| {
        let star = |x: &Polynomial| adj.adjoint(x).unwrap();
        prop_assert_eq!(star(&(&p * &q)), &star(&q) * &star(&p));
        prop_assert_eq!(star(&star(&p)), p);
        Ok(())
    })?;
    Ok(format!(
        "{RANDOM_IDEALS} ideals, {ORDER_TRIPLES} word triples, {ADJOINT_PAIRS} adjoint pairs"
    ))
}

fn criterion_10(report: &Report) -> Outcome {
    let slow: Vec<String> = report
        .results
        .iter()
        .filter(|r| r.elapsed >= FIXTURE_BUDGET)
        .map(|r| format!("{} took {:?}", r.id, r.elapsed))
        .collect();
    if !slow.is_empty() {
        return Err(slow.join("; "));
    }
    if report.total >= CORPUS_BUDGET {
        return Err(format!("corpus took {:?}", report.total));
    }
    let max = report.results.iter().map(|r| r.elapsed).max().unwrap_or_default();
    Ok(format!(
        "{} fixtures in {:.2} s, slowest {:.1} ms",
        report.results.len(),
        report.total.as_secs_f64(),
        max.as_secs_f64() * 1e3
    ))
}

fn perturb(c: &str) -> String {
    let r: Rational = c.parse().unwrap();
    (r + Rational::from_integer(1.into())).to_string()
}

fn criterion_11(report: &Report) -> Outcome {
    let mut docs = 0;
    let mut tampered = 0;
    for r in &report.results {
        let Some(d) = r.document.as_ref().filter(|d| d.status == DocStatus::Proved) else {
            continue;
        };
        let p = problem(&r.id.0);
        let v = document::verify(&p, d).map_err(|e| format!("{}: {e}", r.id))?;
        if !v.accepted() {
            return Err(format!("{}: {}", r.id, v.failures.join("; ")));
        }
        docs += 1;
        for (ci, claim) in d.claims.iter().enumerate() {
            for ti in 0..claim.certificate.as_ref().map_or(0, Vec::len) {
                for right in [false, true] {
                    let mut bad = d.clone();
                    let t = &mut bad.claims[ci].certificate.as_mut().unwrap()[ti];
                    let c = if right { &mut t.right_coeff } else { &mut t.left_coeff };
                    *c = perturb(c);
                    if document::verify(&p, &bad).map_err(|e| e.to_string())?.accepted() {
                        return Err(format!("{}: tampered claim {ci} triple {ti} accepted", r.id));
                    }
                    tampered += 1;
                }
            }
        }
        let mut bad = d.clone();
        if let Some(t) = bad.claims.iter_mut().find_map(|c| c.certificate.as_mut()?.first_mut()) {
            t.gen_index = usize::MAX;
            if document::verify(&p, &bad).is_ok() {
                return Err(format!("{}: out-of-range generator not rejected", r.id));
            }
        }
    }
    Ok(format!("{docs} documents accepted, {tampered} tampered copies rejected"))
}

fn main() -> ExitCode {
    let report = run_all(&default_dir(), None).expect("fixtures load");
    type Criterion = (u8, &'static str, fn(&Report) -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "uniqueness certificate", criterion_1),
        (2, "two-variable Groebner basis", criterion_2),
        (3, "small certificate and iteration limit", criterion_3),
        (4, "existence candidates", criterion_4),
        (5, "heuristic and cancellability outputs", criterion_5),
        (6, "quiver checks", criterion_6),
        (7, "real inverse and full-rank decomposition", criterion_7),
        (8, "semi-decision procedure", criterion_8),
        (9, "property suites", criterion_9),
        (10, "performance envelope", criterion_10),
        (11, "independent verification loop", criterion_11),
    ];
    let mut ok = true;
    for (id, name, f) in criteria {
        let outcome = f(&report);
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
        match (&outcome, known) {
            (Ok(detail), None) => println!("criterion {id:>2} PASS {name}: {detail}"),
            (Err(why), None) => {
                ok = false;
                println!("criterion {id:>2} FAIL {name}: {why}");
            }
            (Err(why), Some((_, reason))) => {
                println!("criterion {id:>2} FAIL {name}: {why} (known: {reason})");
            }
            (Ok(detail), Some(_)) => {
                ok = false;
                println!("criterion {id:>2} PASS {name}: {detail} (listed as known red; update KNOWN_RED)");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
