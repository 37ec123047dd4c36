use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use opcert_core::certify::{CertifyError, Progress};
use opcert_core::*;

fn alg(names: &[&str]) -> Algebra {
    Algebra::new(names.iter().copied()).unwrap()
}

fn quiet(_: Progress) {}

fn t(alg: &Algebra, c: i64, w: &str) -> Term {
    Term::new(Rational::from_integer(c.into()), alg.parse_word(w).unwrap())
}

fn mp_uniqueness_assumptions(alg: &Algebra) -> Vec<Polynomial> {
    let v = |n: &str| alg.gen(n).unwrap();
    let mut f = pinv(&v("a"), &v("b"), &v("a_adj"), &v("b_adj"));
    f.extend(pinv(&v("a"), &v("c"), &v("a_adj"), &v("c_adj")));
    add_adj(&f, &AdjointMap::by_suffix(alg)).unwrap()
}

#[test]
fn mp_uniqueness_matches_the_printed_certificate() {
    let alg = alg(&["a", "b", "c", "a_adj", "b_adj", "c_adj"]);
    let asm = mp_uniqueness_assumptions(&alg);
    assert_eq!(asm.len(), 12);
    let claim = alg.parse("b - c").unwrap();
    let start = Instant::now();
    let rep = certify(&asm, std::slice::from_ref(&claim), alg.len(), &CertifyOptions::default(), &mut quiet).unwrap();
    assert!(start.elapsed() < Duration::from_secs(5));
    assert!(rep.proved());
    assert_eq!(rep.integer_clean, vec![true]);
    let cert = rep.proofs[0].as_ref().unwrap();
    assert_eq!(cert.expand(&asm).unwrap(), claim);
    let printed = Certificate::new(vec![
        Cofactor::new(t(&alg, 1, "1"), 5, t(&alg, 1, "1")),
        Cofactor::new(t(&alg, 1, "b*c_adj"), 8, t(&alg, 1, "1")),
        Cofactor::new(t(&alg, -1, "b*a*c"), 2, t(&alg, 1, "1")),
        Cofactor::new(t(&alg, -1, "b"), 4, t(&alg, 1, "b")),
        Cofactor::new(t(&alg, 1, "b"), 6, t(&alg, 1, "1")),
        Cofactor::new(t(&alg, -1, "b"), 6, t(&alg, 1, "b_adj*a_adj")),
        Cofactor::new(t(&alg, -1, "1"), 1, t(&alg, 1, "1")),
        Cofactor::new(t(&alg, 1, "1"), 7, t(&alg, 1, "b*a*c")),
        Cofactor::new(t(&alg, -1, "1"), 10, t(&alg, 1, "b_adj*c")),
        Cofactor::new(t(&alg, 1, "c"), 0, t(&alg, 1, "c")),
        Cofactor::new(t(&alg, -1, "1"), 3, t(&alg, 1, "c")),
        Cofactor::new(t(&alg, 1, "a_adj*c_adj"), 3, t(&alg, 1, "c")),
    ]);
    assert_eq!(printed.expand(&asm).unwrap(), claim);
    assert!(cert.reorder_equivalent(&printed));
}

#[test]
fn small_session_certificate_and_pretty_print() {
    let alg = alg(&["a", "b", "c", "d"]);
    let asm = vec![alg.parse("a*b - d").unwrap(), alg.parse("c - 1").unwrap()];
    let claim = alg.parse("a*b*c - d").unwrap();
    let rep = certify(&asm, &[claim], 4, &CertifyOptions::default(), &mut quiet).unwrap();
    let cert = rep.proofs[0].as_ref().unwrap();
    assert_eq!(cert.format_tuples(&alg), "[(1,0,c), (d,1,1)]");
    let pretty = cert.pretty(&asm, &alg, None).unwrap();
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    assert_eq!(squash(&pretty), squash("-d + a*b*c = (-d + a*b)*c + d*(-1 + c)"));
}

#[test]
fn long_claim_fails_at_ten_and_succeeds_at_twenty() {
    let alg = alg(&["a", "b"]);
    let asm = vec![alg.parse("a*b*a - a*b").unwrap()];
    let claim = alg.parse("a*b^20*a - a*b^20").unwrap();
    let mut lines = Vec::new();
    let rep = certify(&asm, std::slice::from_ref(&claim), 2, &CertifyOptions::default(), &mut |p| lines.extend(p.message())).unwrap();
    assert!(!rep.proved());
    assert_eq!(lines.last().unwrap(), "Failed! Not all ideal memberships could be verified.");
    let opts = CertifyOptions { maxiter: 20, ..Default::default() };
    let rep = certify(&asm, std::slice::from_ref(&claim), 2, &opts, &mut quiet).unwrap();
    assert!(rep.proved());
    assert_eq!(rep.proofs[0].as_ref().unwrap().expand(&asm).unwrap(), claim);
}

#[test]
fn printed_groebner_basis_and_normal_forms() {
    let alg = alg(&["x", "y"]);
    let gens = vec![alg.parse("x*y*x - x*y").unwrap(), alg.parse("y*x*x*y - y").unwrap()];
    let order = MonomialOrder::deglex(2);
    let mut ideal = NCIdeal::new(gens.clone(), order.clone()).unwrap();
    let g = ideal.groebner_basis(&GbOptions::default());
    assert!(ideal.is_complete());
    let got: Vec<String> = g.iter().map(|p| p.poly.display(&alg).with_order(Some(&order)).to_string()).collect();
    assert_eq!(
        got,
        [
            "-x*y + x*y*x",
            "-y + y*x^2*y",
            "-y + y*x",
            "-x*y + x*y^2",
            "-x*y + x*y^2*x",
            "-y + y^2",
            "-y + y^3",
        ]
    );
    for p in &g {
        assert_eq!(p.cert.expand(&gens).unwrap(), p.poly);
    }
    let reduced: BTreeSet<String> = interreduce(&g, &order).iter().map(|p| p.poly.display(&alg).to_string()).collect();
    assert_eq!(reduced, BTreeSet::from(["-y + y*x".to_string(), "-y + y^2".to_string()]));
    let r = ideal.reduce(&alg.parse("y^2 - y").unwrap());
    assert!(r.poly.is_zero());
    assert_eq!(r.cert.len(), 5);
    assert_eq!(r.cert.expand(&gens).unwrap(), alg.parse("y^2 - y").unwrap());
    assert_eq!(ideal.reduce(&alg.parse("y^2").unwrap()).poly, alg.parse("y").unwrap());
}

#[test]
fn groebner_criterion_only_saves_iterations() {
    let alg = alg(&["x", "y"]);
    let gens = vec![alg.parse("x*y*x - x*y").unwrap(), alg.parse("y*x*x*y - y").unwrap()];
    let mut with = NCIdeal::with_deglex(gens.clone(), 2).unwrap();
    let mut without = NCIdeal::with_deglex(gens, 2).unwrap();
    let a = with.groebner_basis(&GbOptions::default());
    let b = without.groebner_basis(&GbOptions { criterion: false, ..Default::default() });
    assert!(with.iterations() < without.iterations());
    let polys = |v: &[TracedPolynomial]| v.iter().map(|p| p.poly.clone()).collect::<Vec<_>>();
    assert_eq!(polys(&a), polys(&b));
}

fn figure_quiver(alg: &Algebra) -> Quiver {
    Quiver::from_triples(&[("U", "V", "a"), ("V", "W", "b"), ("W", "V", "c"), ("V", "U", "d")], alg).unwrap()
}

#[test]
fn quiver_flags_the_typo() {
    let alg = alg(&["a", "b", "c", "d"]);
    let q = figure_quiver(&alg);
    assert!(!q.is_compatible(&alg.parse("a*b + c*d").unwrap()));
    assert!(q.is_compatible(&alg.parse("a*d + c*b").unwrap()));
    let asm = vec![alg.parse("a*d").unwrap(), alg.parse("c*b").unwrap()];
    let opts = CertifyOptions { quiver: Some(q), ..Default::default() };
    let err = certify(&asm, &[alg.parse("a*d - b*c").unwrap()], 4, &opts, &mut quiet).unwrap_err();
    assert!(matches!(err, CertifyError::QuiverIncompatible { role: "claim", .. }));
    assert_eq!(err.to_string(), "The claim a*d - b*c is not compatible with the quiver");
}

fn polys(v: &[Finding]) -> BTreeSet<Polynomial> {
    v.iter().map(|f| f.poly.clone()).collect()
}

fn parse_set(alg: &Algebra, items: &[&str]) -> BTreeSet<Polynomial> {
    items.iter().map(|s| alg.parse(s).unwrap()).collect()
}

fn heuristics_ideal() -> (Algebra, NCIdeal) {
    let alg = alg(&["a", "b", "c", "d"]);
    let gens = ["a*b*a - a", "b*a*b - b", "a*b - c*d", "b*a - d*c", "c*d*c - c", "d*c*d - d"]
        .iter()
        .map(|s| alg.parse(s).unwrap())
        .collect();
    let ideal = NCIdeal::with_deglex(gens, 4).unwrap();
    (alg, ideal)
}

fn all_members(ideal: &NCIdeal, found: &[Finding]) {
    let mut ideal = ideal.clone();
    for f in found {
        let r = ideal.reduced_form(&f.member, &GbOptions::default());
        assert!(r.poly.is_zero());
        assert_eq!(f.cert.expand(ideal.gens()).unwrap(), f.member);
    }
}

#[test]
fn heuristic_search_outputs() {
    let (alg, ideal) = heuristics_ideal();
    let p = |s: &str| alg.parse(s).unwrap();
    let w = |s: &str| Term::monomial(alg.parse_word(s).unwrap());

    let r = find_equivalent_expression(&ideal, &SearchSpec::new(p("a*b"))).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a*b + c*d"]));
    all_members(&ideal, &r);

    let spec = SearchSpec::new(p("a*b")).heuristic(Heuristic::Naive).suffix(w("b"));
    let r = find_equivalent_expression(&ideal, &spec).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["a*b - c*d*a*b"]));
    all_members(&ideal, &r);

    let spec = SearchSpec::new(p("a*b")).heuristic(Heuristic::RightIdeal).prefix(w("a*b"));
    let r = find_equivalent_expression(&ideal, &spec).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a*b + a*b*c*d", "-a*b + a*b*a*b"]));
    all_members(&ideal, &r);
}

#[test]
fn cancellability_outputs() {
    let (alg, ideal) = heuristics_ideal();
    let w = |s: &str| Term::monomial(alg.parse_word(s).unwrap());
    let r = apply_left_cancellability(&ideal, &w("c"), &w("a"), &CancelOptions::default()).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a + a*b*a", "-a^2 + a*d*c*a"]));
    all_members(&ideal, &r);

    let opts = CancelOptions {
        heuristic: CancelHeuristic::TwoSided,
        gb: GbOptions { maxiter: 5, ..Default::default() },
        ..Default::default()
    };
    let r = apply_right_cancellability(&ideal, &w("a*b"), &w("d*a"), &opts).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a*b + a*b*a*b", "-a*b + c*d*a*b"]));
    all_members(&ideal, &r);
}

#[test]
fn range_inclusions() {
    let alg = alg(&["a", "a_adj", "a_dag", "a_dag_adj"]);
    let v = |n: &str| alg.gen(n).unwrap();
    let w = |s: &str| Term::monomial(alg.parse_word(s).unwrap());
    let gens = add_adj(&pinv(&v("a"), &v("a_dag"), &v("a_adj"), &v("a_dag_adj")), &AdjointMap::by_suffix(&alg)).unwrap();
    let ideal = NCIdeal::with_deglex(gens, 4).unwrap();
    let r = find_range_factorisation(&ideal, &v("a_dag"), &w("a_adj"), Side::Prefix, Heuristic::Naive).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a_dag + a_adj*a_dag_adj*a_dag"]));
    all_members(&ideal, &r);
    // The factor through a_dag on the left.
    let r = find_range_factorisation(&ideal, &v("a_adj"), &w("a_dag"), Side::Prefix, Heuristic::Naive).unwrap();
    assert_eq!(polys(&r), parse_set(&alg, &["-a_adj + a_dag*a*a_adj"]));
    all_members(&ideal, &r);
    // Zero ideal: nothing to find.
    let empty = NCIdeal::with_deglex(vec![], 4).unwrap();
    let r = find_range_factorisation(&empty, &v("a_adj"), &w("a_dag"), Side::Prefix, Heuristic::Naive).unwrap();
    assert!(r.is_empty());
}

fn mp_existence() -> (Algebra, Vec<Polynomial>, NCIdeal) {
    let alg = alg(&["a", "p", "q", "a_adj", "p_adj", "q_adj", "x", "x_adj"]);
    let m = AdjointMap::by_suffix(&alg);
    let v = |n: &str| alg.gen(n).unwrap();
    let asm = add_adj(&[alg.parse("a - p*a_adj*a").unwrap(), alg.parse("a - a*a_adj*q").unwrap()], &m).unwrap();
    let mut gens = add_adj(&pinv(&v("a"), &v("x"), &v("a_adj"), &v("x_adj")), &m).unwrap();
    gens.extend(asm.iter().cloned());
    let ideal = NCIdeal::with_deglex(gens, 8).unwrap();
    (alg, asm, ideal)
}

#[test]
fn existence_candidates_and_penrose_identities() {
    let (alg, asm, ideal) = mp_existence();
    let x = alg.gen("x").unwrap();
    let r = find_equivalent_expression(&ideal, &SearchSpec::new(x.clone())).unwrap();
    assert!(r.iter().any(|f| f.poly == alg.parse("-x + a_adj*q*p_adj").unwrap()));
    all_members(&ideal, &r);

    let g = |n: &str| alg.var(n).unwrap();
    let block = MonomialOrder::from_blocks(
        vec![
            ["q", "q_adj", "a", "a_adj", "p", "p_adj"].iter().map(|n| g(n)).collect(),
            vec![g("x"), g("x_adj")],
        ],
        8,
    )
    .unwrap();
    let r = find_equivalent_expression(&ideal, &SearchSpec::new(x).order(block)).unwrap();
    assert_eq!(r[0].poly, alg.parse("-q_adj*a*p_adj + x").unwrap());

    let v = |n: &str| alg.parse(n).unwrap();
    let claims = pinv(&v("a"), &v("a_adj*q*p_adj"), &v("a_adj"), &v("p*q_adj*a"));
    let rep = certify(&asm, &claims, alg.len(), &CertifyOptions::default(), &mut quiet).unwrap();
    assert!(rep.proved());
    for (c, p) in claims.iter().zip(&rep.proofs) {
        assert_eq!(&p.as_ref().unwrap().expand(&asm).unwrap(), c);
    }
}
