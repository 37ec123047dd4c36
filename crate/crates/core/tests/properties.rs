use std::cmp::Ordering;

use proptest::prelude::*;

use opcert_core::certify::Progress;
use opcert_core::logic::{cnf, Formula, OpTerm, Sort, SortContext};
use opcert_core::{
    certify, AdjointMap, Algebra, CertifyOptions, GbOptions, MonomialOrder, NCIdeal, Polynomial, Rational,
    Term, Var, Word,
};

fn word(max_vars: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..max_vars, 0..=max_len).prop_map(|v| v.into_iter().map(Var).collect())
}

fn poly(max_vars: u32, max_len: usize, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..=4, 1i64..=3, word(max_vars, max_len)), 0..=max_terms).prop_map(|ts| {
        Polynomial::from_terms(
            ts.into_iter()
                .map(|(n, d, w)| Term::new(Rational::new(n.into(), d.into()), w)),
        )
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(3, 3, 4), q in poly(3, 3, 4), r in poly(3, 3, 4)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Polynomial::one(), p.clone());
    }
}

fn adjoint_algebra() -> (Algebra, AdjointMap) {
    let alg = Algebra::new(["a", "b", "c", "a_adj", "b_adj", "c_adj"]).unwrap();
    let adj = AdjointMap::by_suffix(&alg);
    (alg, adj)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn adjoint_is_an_involutive_anti_homomorphism(p in poly(6, 3, 4), q in poly(6, 3, 4)) {
        let (_, adj) = adjoint_algebra();
        let star = |x: &Polynomial| adj.adjoint(x).unwrap();
        prop_assert_eq!(star(&(&p * &q)), &star(&q) * &star(&p));
        prop_assert_eq!(star(&(&p + &q)), &star(&p) + &star(&q));
        prop_assert_eq!(star(&star(&p)), p);
    }
}

fn orders() -> Vec<MonomialOrder> {
    vec![
        MonomialOrder::deglex(4),
        MonomialOrder::from_sequence(vec![Var(2), Var(0), Var(3), Var(1)], 4).unwrap(),
        MonomialOrder::from_blocks(vec![vec![Var(0), Var(1)], vec![Var(2), Var(3)]], 4).unwrap(),
        MonomialOrder::from_blocks(vec![vec![Var(3)], vec![Var(0)], vec![Var(1), Var(2)]], 4).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn orders_are_admissible(u in word(4, 5), v in word(4, 5), w in word(4, 3), k in 0usize..4) {
        let o = &orders()[k];
        let uv = o.cmp_words(&u, &v);
        prop_assert_eq!(uv.reverse(), o.cmp_words(&v, &u));
        prop_assert_eq!(uv == Ordering::Equal, u == v);
        prop_assert_ne!(o.cmp_words(&Word::one(), &w), Ordering::Greater);
        prop_assert_eq!(o.cmp_words(&w.concat(&u), &w.concat(&v)), uv);
        prop_assert_eq!(o.cmp_words(&u.concat(&w), &v.concat(&w)), uv);
    }
}

/// `m1 - m2` or `m1` with distinct nonempty words.
fn binomial() -> impl Strategy<Value = Polynomial> {
    (word(4, 4), word(4, 4), any::<bool>()).prop_filter_map("degenerate", |(a, b, mono)| {
        if a.is_one() || a == b {
            return None;
        }
        let p = Polynomial::from_word(a);
        Some(if mono { p } else { p - Polynomial::from_word(b) })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn random_binomial_ideals_give_sound_certificates(
        gens in prop::collection::vec(binomial(), 1..=4),
        picks in prop::collection::vec((0usize..4, word(4, 2), word(4, 2), -3i64..=3), 1..=3),
    ) {
        let mut ideal = NCIdeal::with_deglex(gens.clone(), 4).unwrap();
        let basis = ideal.groebner_basis(&GbOptions { maxiter: 3, ..GbOptions::default() });
        for b in &basis {
            prop_assert_eq!(b.cert.expand(&gens).unwrap(), b.poly.clone());
        }
        for g in &gens {
            prop_assert!(ideal.normal_form(g).is_zero());
        }
        // A claim built from the generators; whatever certify reports must
        // expand back to it.
        let claim: Polynomial = picks
            .iter()
            .map(|(i, l, r, c)| {
                gens[i % gens.len()]
                    .sandwich(&Term::monomial(l.clone()), &Term::monomial(r.clone()))
                    .scale(&Rational::from_integer((*c).into()))
            })
            .sum();
        let report = certify(&gens, std::slice::from_ref(&claim), 4, &CertifyOptions { maxiter: 4, ..Default::default() }, &mut |_: Progress| {}).unwrap();
        if let Some(cert) = &report.proofs[0] {
            prop_assert_eq!(cert.expand(&gens).unwrap(), claim.clone());
        }
        let r = ideal.reduce(&claim);
        prop_assert_eq!(r.cert.expand(&gens).unwrap(), &claim - &r.poly);
    }
}

#[test]
fn generators_vanish_against_a_partial_basis() {
    let alg = Algebra::new(["a", "b", "c", "d"]).unwrap();
    let gens: Vec<Polynomial> = ["a - c*a", "a*c - 1", "a - a^2*c*b"]
        .iter()
        .map(|s| alg.parse(s).unwrap())
        .collect();
    let mut ideal = NCIdeal::with_deglex(gens.clone(), 4).unwrap();
    ideal.complete(&GbOptions { maxiter: 3, trace_cofactors: true, ..GbOptions::default() });
    for g in &gens {
        let r = ideal.reduce(g);
        assert!(r.poly.is_zero(), "{}", g.display(&alg));
        assert_eq!(&r.cert.expand(&gens).unwrap(), g);
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Atom(usize, bool),
    Not(Box<Shape>),
    And(Vec<Shape>),
    Or(Vec<Shape>),
    Implies(Box<Shape>, Box<Shape>),
}

fn formula_shape() -> impl Strategy<Value = Shape> {
    let leaf = (0usize..4, any::<bool>()).prop_map(|(i, p)| Shape::Atom(i, p));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| Shape::Not(Box::new(s))),
            prop::collection::vec(inner.clone(), 1..=3).prop_map(Shape::And),
            prop::collection::vec(inner.clone(), 1..=3).prop_map(Shape::Or),
            (inner.clone(), inner).prop_map(|(a, b)| Shape::Implies(Box::new(a), Box::new(b))),
        ]
    })
}

fn build(s: &Shape, atoms: &[(OpTerm, OpTerm)]) -> Formula {
    match s {
        Shape::Atom(i, true) => Formula::eq(atoms[*i].0.clone(), atoms[*i].1.clone()).unwrap(),
        Shape::Atom(i, false) => Formula::neq(atoms[*i].0.clone(), atoms[*i].1.clone()).unwrap(),
        Shape::Not(a) => !build(a, atoms),
        Shape::And(v) => Formula::And(v.iter().map(|x| build(x, atoms)).collect()),
        Shape::Or(v) => Formula::Or(v.iter().map(|x| build(x, atoms)).collect()),
        Shape::Implies(a, b) => Formula::implies(build(a, atoms), build(b, atoms)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn cnf_preserves_truth_values(shape in formula_shape(), truth in prop::collection::vec(any::<bool>(), 4)) {
        let ctx = SortContext::uniform(Sort::loop_at("*"));
        let v = |n: &str| OpTerm::var(&ctx, n).unwrap();
        let atoms = vec![(v("a"), v("b")), (v("b"), v("c")), (v("a"), v("c")), (v("c"), v("d"))];
        let f = build(&shape, &atoms);
        let mut value = |s: &OpTerm, t: &OpTerm| {
            let i = atoms.iter().position(|(x, y)| x == s && y == t).unwrap();
            truth[i]
        };
        let direct = f.eval(&mut value).unwrap();
        let clauses = cnf(&f).unwrap();
        let via_cnf = clauses.iter().all(|c| c.eval(&mut value));
        prop_assert_eq!(direct, via_cnf);
        for c in &clauses {
            prop_assert!(c.disequalities.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(c.equalities.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
