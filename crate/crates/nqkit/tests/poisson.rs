mod common;

use nqkit::algebra::int;
use nqkit::lie2::{q_from_data, SplitLie2Data};
use nqkit::poisson::*;
use nqkit::{is_homological, Derivation, Element, GeneratorTable, Table};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random homogeneous element with at most `max_conj` conjugates and at most
/// `cap` degree-0 base factors per term.
fn random_mv(r: &mut ChaCha8Rng, a: &MultivectorAlgebra, max_conj: usize, cap: usize) -> Element {
    let t = a.table();
    let mut target = None;
    let mut e = Element::zero(t);
    for _ in 0..4 {
        let mut m = Element::one(t);
        let nconj = r.gen_range(0..=max_conj);
        for _ in 0..nconj {
            let g = a.conj(r.gen_range(0..a.base().len()));
            m = &m * &Element::generator(t, g);
        }
        for _ in 0..r.gen_range(0..=cap + 1) {
            let g = r.gen_range(0..a.base().len());
            if a.base().degree(g) == 0 && m.terms().all(|(mm, _)| mm.factors().filter(|&g| !a.is_conj(g) && t.degree(g) == 0).count() >= cap) {
                continue;
            }
            m = &m * &Element::generator(t, g);
        }
        let Some(d) = m.degree() else { continue };
        if *target.get_or_insert(d) == d {
            e += m.scale(&int(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 }));
        }
    }
    e
}

fn mixed_table() -> Table {
    GeneratorTable::new([("x", 0), ("y", 0), ("e", 1)]).unwrap()
}

fn shifted_sign(a: &Element, b: &Element, k: i32) -> nqkit::Scalar {
    let s = |e: &Element| e.degree().unwrap_or(0) + k - 1;
    nqkit::algebra::sign((s(a) * s(b)).rem_euclid(2) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schouten_antisymmetry_and_jacobi(seed in any::<u64>(), k in -2i32..=1) {
        let a = MultivectorAlgebra::new(&mixed_table(), k).unwrap();
        let mut r = common::rng(seed);
        let x = random_mv(&mut r, &a, 2, 2);
        let y = random_mv(&mut r, &a, 2, 2);
        let z = random_mv(&mut r, &a, 2, 2);
        let br = |p: &Element, q: &Element| a.schouten(p, q).unwrap();
        let exy = shifted_sign(&x, &y, k);
        prop_assert_eq!(br(&x, &y), -br(&y, &x).scale(&exy));
        let lhs = br(&x, &br(&y, &z));
        let rhs = br(&br(&x, &y), &z) + br(&y, &br(&x, &z)).scale(&exy);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schouten_leibniz_in_second_slot(seed in any::<u64>(), k in -2i32..=1) {
        let a = MultivectorAlgebra::new(&mixed_table(), k).unwrap();
        let mut r = common::rng(seed);
        let x = random_mv(&mut r, &a, 2, 1);
        let y = random_mv(&mut r, &a, 1, 1);
        let z = random_mv(&mut r, &a, 1, 1);
        let br = |p: &Element, q: &Element| a.schouten(p, q).unwrap();
        let sx = x.degree().unwrap_or(0) + k - 1;
        let s = nqkit::algebra::sign((sx * y.degree().unwrap_or(0)).rem_euclid(2) == 1);
        prop_assert_eq!(br(&x, &(&y * &z)), &br(&x, &y) * &z + (&y * &br(&x, &z)).scale(&s));
    }

    #[test]
    fn derived_bracket_axioms_for_poisson(seed in any::<u64>()) {
        // linear brackets from a random Lie algebra on R^3 are Poisson
        let b = GeneratorTable::new([("x", 0), ("y", 0), ("z", 0)]).unwrap();
        let a = MultivectorAlgebra::new(&b, 0).unwrap();
        let mut r = common::rng(seed);
        let pi = loop {
            let v: Vec<_> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| (i, j, common::random_element(&mut r, &b, 0, 1, 0.4).filter(|m| m.len() <= 1)))
                .collect();
            let pi = Bivector::from_brackets(&a, &v).unwrap();
            if pi.self_bracket().unwrap().is_zero() {
                break pi;
            }
        };
        let f = common::random_element(&mut r, &b, 0, 2, 0.4);
        let g = common::random_element(&mut r, &b, 0, 2, 0.4);
        let h = common::random_element(&mut r, &b, 0, 2, 0.4);
        let br = |p: &Element, q: &Element| pi.bracket(p, q).unwrap();
        prop_assert_eq!(br(&f, &g), -br(&g, &f));
        prop_assert_eq!(br(&f, &(&g * &h)), &br(&f, &g) * &h + &g * &br(&f, &h));
        prop_assert_eq!(br(&f, &br(&g, &h)), br(&br(&f, &g), &h) + br(&g, &br(&f, &h)));
    }
}

#[test]
fn hand_expansion_of_a_bracket() {
    // [x p_x p_y, y]_0 = [y, x p_x p_y]_0 = x p_x [y, p_y]_0 (-1)^{-1} = x p_x
    let b = GeneratorTable::new([("x", 0), ("y", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let p = |s: &str| Element::parse(s, a.table()).unwrap();
    assert_eq!(a.schouten(&p("x*p_x*p_y"), &p("y")).unwrap(), p("x*p_x"));
    assert_eq!(a.schouten(&p("x*p_x*p_y"), &p("x")).unwrap(), p("-x*p_y"));
    // vector fields bracket as commutators: [x p_x, x^2 p_x] = x^2 p_x
    assert_eq!(a.schouten(&p("x*p_x"), &p("x^2*p_x")).unwrap(), p("x^2*p_x"));
}

#[test]
fn vector_fields_bracket_as_commutators() {
    let mut r = common::rng(5);
    for k in [-1, 0, 1] {
        let b = mixed_table();
        let a = MultivectorAlgebra::new(&b, k).unwrap();
        for trial in 0..10 {
            let x = common::random_derivation(&mut r, &b, [0, 1, -1][trial % 3], 2, 0.4);
            let y = common::random_derivation(&mut r, &b, [1, 0, 0][trial % 3], 2, 0.4);
            let (xh, yh) = (a.from_vector_field(&x).unwrap(), a.from_vector_field(&y).unwrap());
            assert_eq!(a.to_vector_field(&xh).unwrap(), x);
            let c = a.to_vector_field(&a.schouten(&xh, &yh).unwrap()).unwrap();
            let want = x.commutator(&y);
            for g in 0..b.len() {
                assert_eq!(c.image(g), want.image(g), "k {k} trial {trial}");
            }
        }
    }
}

#[test]
fn coefficient_extraction() {
    let b = GeneratorTable::new([("x", 0), ("y", 0), ("z", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let p = |s: &str| Element::parse(s, a.table()).unwrap();
    let x = p("3*x*p_x*p_y - z^2*p_y*p_z + p_x*p_z");
    // extracting along (x, y) and (y, x) recovers the coefficient up to sign
    assert_eq!(a.extract(&x, &[0, 1]).unwrap(), p("3*x"));
    assert_eq!(a.extract(&x, &[1, 0]).unwrap(), p("-3*x"));
    assert_eq!(a.extract(&x, &[2, 1]).unwrap(), p("z^2"));
    // [xi_j, .]_0 = -d/dp_j
    assert_eq!(a.extract(&x, &[0]).unwrap(), p("-3*x*p_y - p_z"));
    assert_eq!(a.extract(&x, &[0, 2]).unwrap(), p("1"));
    assert!(a.extract(&x, &[1, 1]).unwrap().is_zero());
    // a multivector field is zero iff every extraction vanishes
    let zero = p("0");
    assert!((0..3).all(|i| (0..3).all(|j| a.extract(&zero, &[i, j]).unwrap().is_zero())));
}

fn classical(f: &Element, g: &Element, pairs: &[(usize, usize)]) -> Element {
    let t = f.table();
    let mut out = Element::zero(t);
    for &(q, p) in pairs {
        let (dq, dp) = (Derivation::coordinate(t, q), Derivation::coordinate(t, p));
        out += &dq.apply(f) * &dp.apply(g) - &dq.apply(g) * &dp.apply(f);
    }
    out
}

#[test]
fn darboux_matches_classical_bracket() {
    let b2 = GeneratorTable::new([("q", 0), ("p", 0)]).unwrap();
    let b4 = GeneratorTable::new([("q1", 0), ("q2", 0), ("p1", 0), ("p2", 0)]).unwrap();
    let mut r = common::rng(11);
    for (b, pairs) in [(b2, vec![(0, 1)]), (b4, vec![(0, 2), (1, 3)])] {
        let a = MultivectorAlgebra::new(&b, 0).unwrap();
        let pi = Bivector::darboux(&a, &pairs).unwrap();
        assert!(pi.self_bracket().unwrap().is_zero());
        assert!(check_poisson(&pi).unwrap().passed());
        let (q, p) = (Element::generator(&b, pairs[0].0), Element::generator(&b, pairs[0].1));
        assert_eq!(pi.bracket(&q, &p).unwrap(), Element::one(&b));
        for _ in 0..10 {
            let f = common::random_element(&mut r, &b, 0, 2, 0.3);
            let g = common::random_element(&mut r, &b, 0, 2, 0.3);
            assert_eq!(pi.bracket(&f, &g).unwrap(), classical(&f, &g, &pairs));
        }
    }
}

#[test]
fn hamiltonian_fields() {
    let b = GeneratorTable::new([("q", 0), ("p", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let pi = Bivector::darboux(&a, &[(0, 1)]).unwrap();
    let xq = pi.hamiltonian(&Element::generator(&b, 0)).unwrap();
    assert_eq!(xq, Derivation::coordinate(&b, 1));
    assert!(pi.hamiltonian(&Element::int(&b, 7)).unwrap().is_zero());
    // Casimir of a degenerate bivector
    let b3 = GeneratorTable::new([("x", 0), ("y", 0), ("z", 0)]).unwrap();
    let a3 = MultivectorAlgebra::new(&b3, 0).unwrap();
    let pi3 = Bivector::from_brackets(&a3, &[(0, 1, Element::one(&b3))]).unwrap();
    assert!(pi3.hamiltonian(&Element::generator(&b3, 2)).unwrap().is_zero());
    assert!(pi.hamiltonian(&Element::parse("p_q", a.table()).unwrap()).is_err());
}

#[test]
fn check_poisson_examples() {
    let b = GeneratorTable::new([("x", 0), ("y", 0), ("z", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let e = |s: &str| Element::parse(s, &b).unwrap();
    // d/dx ^ d/dy + x d/dy ^ d/dz: Jacobi reduces to {z, 1} = 0
    let pi = Bivector::from_brackets(&a, &[(0, 1, e("1")), (1, 2, e("x"))]).unwrap();
    let rep = check_poisson(&pi).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    // {x,y} = y, {y,z} = x fails Jacobi
    let pi = Bivector::from_brackets(&a, &[(0, 1, e("y")), (1, 2, e("x"))]).unwrap();
    let rep = check_poisson(&pi).unwrap();
    assert!(rep.failed("[pi,pi]_k") && rep.failed("Jacobi") && !rep.failed("[pi,pi]_k and Jacobi"));
    assert!(check_poisson(&Bivector::zero(&a)).unwrap().passed());
}

#[test]
fn random_bivectors_on_r3_agree() {
    let b = GeneratorTable::new([("x", 0), ("y", 0), ("z", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let mut r = common::rng(21);
    let (mut good, mut bad) = (0, 0);
    for trial in 0..100 {
        let density = [0.2, 0.5, 0.8][trial % 3];
        let v: Vec<_> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (i, j, common::random_element(&mut r, &b, 0, 1, density)))
            .collect();
        let pi = Bivector::from_brackets(&a, &v).unwrap();
        let rep = check_poisson(&pi).unwrap();
        assert!(!rep.failed("[pi,pi]_k and Jacobi"), "trial {trial}");
        if rep.passed() {
            good += 1;
        } else {
            bad += 1;
        }
    }
    assert!(bad >= 10 && good >= 1, "good {good} bad {bad}");
}

#[test]
fn odd_k_is_measured() {
    let b = GeneratorTable::new([("x", 0), ("t", 1)]).unwrap();
    let a = MultivectorAlgebra::new(&b, -1).unwrap();
    let pi = Bivector::darboux(&a, &[(0, 1)]).unwrap();
    let rep = check_poisson(&pi).unwrap();
    assert!(rep.notes.iter().any(|n| n.contains("odd k")));
    assert!(!rep.checks.iter().any(|c| c.identity.contains("verdicts agree")));
}

fn so3() -> (Table, Derivation) {
    let mut d = SplitLie2Data::zero(&[], &["e1", "e2", "e3"], &[]).unwrap();
    let t = d.table().clone();
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        d.dull_mut().set_bracket(i, j, k, Element::one(&t)).unwrap();
    }
    let q = q_from_data(&d).unwrap();
    (t, q)
}

/// `{e_i, e_j} = sum c_ijk e_k` on g[1] with k = -1.
fn linear_pi(a: &MultivectorAlgebra, c: &[(usize, usize, usize, i64)]) -> Bivector {
    let t = a.base();
    let mut v: Vec<(usize, usize, Element)> = Vec::new();
    for &(i, j, k, s) in c {
        let e = Element::generator(t, k).scale(&int(s));
        match v.iter_mut().find(|(a, b, _)| (*a, *b) == (i, j)) {
            Some(slot) => slot.2 += e,
            None => v.push((i, j, e)),
        }
    }
    Bivector::from_brackets(a, &v).unwrap()
}

fn kirillov_kostant(a: &MultivectorAlgebra) -> Bivector {
    linear_pi(a, &[(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)])
}

/// The standard cobracket of so(3): `{e1,e3} = -e1`, `{e2,e3} = -e2`.
fn standard_bialgebra(a: &MultivectorAlgebra) -> Bivector {
    linear_pi(a, &[(0, 2, 0, -1), (1, 2, 1, -1)])
}

#[test]
fn pq_examples() {
    let (t, q) = so3();
    let a = MultivectorAlgebra::new(&t, -1).unwrap();
    let zero = Derivation::zero(&t, 1);
    let kk = kirillov_kostant(&a);
    assert!(check_poisson(&kk).unwrap().passed());
    assert!(check_pq(&zero, &kk).unwrap().passed());
    let std = standard_bialgebra(&a);
    assert!(check_poisson(&std).unwrap().passed());
    let rep = check_pq(&q, &std).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    // so(3) with the Kirillov-Kostant cobracket is not a Lie bialgebra
    let rep = check_pq(&q, &kk).unwrap();
    assert!(rep.failed("pi#") && rep.failed("Q{a,b}") && !rep.failed("sharp and direct"));
    // flipping one structure constant of the compatible bracket
    let bad = linear_pi(&a, &[(0, 2, 0, 1), (1, 2, 1, -1)]);
    let rep = check_pq(&q, &bad).unwrap();
    assert!(rep.failed("pi#") && rep.failed("Q{a,b}") && !rep.failed("sharp and direct"));
    // T*[1]R with Q = 0 and the degree -1 Darboux bracket
    let b = GeneratorTable::new([("x", 0), ("t", 1)]).unwrap();
    let a1 = MultivectorAlgebra::new(&b, -1).unwrap();
    let pi = Bivector::darboux(&a1, &[(0, 1)]).unwrap();
    assert_eq!(pi.bracket(&Element::generator(&b, 0), &Element::generator(&b, 1)).unwrap(), Element::one(&b));
    assert!(check_pq(&Derivation::zero(&b, 1), &pi).unwrap().passed());
}

fn random_lie_q(r: &mut ChaCha8Rng, t: &Table) -> Derivation {
    loop {
        let q = common::random_derivation(r, t, 1, 0, 0.35);
        if is_homological(&q).passed() {
            return q;
        }
    }
}

fn random_linear_pi(r: &mut ChaCha8Rng, a: &MultivectorAlgebra) -> Bivector {
    let t = a.base();
    let v: Vec<_> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (i, j, common::random_element(r, t, 1, 0, 0.3)))
        .collect();
    Bivector::from_brackets(a, &v).unwrap()
}

#[test]
fn pq_verdicts_agree_on_random_pairs() {
    let (t, _) = so3();
    let a = MultivectorAlgebra::new(&t, -1).unwrap();
    let mut r = common::rng(8);
    let (mut pass, mut fail) = (0, 0);
    for trial in 0..30 {
        let q = random_lie_q(&mut r, &t);
        let pi = match trial % 3 {
            0 => Bivector::zero(&a),
            _ => random_linear_pi(&mut r, &a),
        };
        let rep = check_pq(&q, &pi).unwrap();
        assert!(!rep.failed("sharp and direct"), "trial {trial}\n{}", rep.to_text());
        if rep.passed() {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    assert!(pass >= 5 && fail >= 5, "pass {pass} fail {fail}");
}

#[test]
fn poisson_weil_examples() {
    let (t, q) = so3();
    let a = MultivectorAlgebra::new(&t, -1).unwrap();
    let zero = Derivation::zero(&t, 1);
    for (qq, pi) in [
        (&q, Bivector::zero(&a)),
        (&zero, kirillov_kostant(&a)),
        (&q, standard_bialgebra(&a)),
    ] {
        let rep = poisson_weil_check(qq, &pi).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
    let rep = poisson_weil_check(&q, &kirillov_kostant(&a)).unwrap();
    assert!(rep.failed("[L_Q, (-1)^(k-1) d_pi]") && rep.failed("pi# o L_Q"));
    for (b, pairs) in [
        (GeneratorTable::new([("q", 0), ("p", 0)]).unwrap(), vec![(0, 1)]),
        (GeneratorTable::new([("q1", 0), ("q2", 0), ("p1", 0), ("p2", 0)]).unwrap(), vec![(0, 2), (1, 3)]),
    ] {
        let a = MultivectorAlgebra::new(&b, 0).unwrap();
        let pi = Bivector::darboux(&a, &pairs).unwrap();
        let rep = poisson_weil_check(&Derivation::zero(&b, 1), &pi).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn sharp_on_functions_and_forms() {
    let b = GeneratorTable::new([("q", 0), ("p", 0)]).unwrap();
    let a = MultivectorAlgebra::new(&b, 0).unwrap();
    let pi = Bivector::darboux(&a, &[(0, 1)]).unwrap();
    let w = nqkit::weil::WeilAlgebra::new(&b).unwrap();
    let f = |s: &str| Element::parse(s, w.table()).unwrap();
    let m = |s: &str| Element::parse(s, a.table()).unwrap();
    assert_eq!(pi.sharp(&w, &f("q^2")).unwrap(), m("q^2"));
    assert_eq!(pi.sharp(&w, &f("dq")).unwrap(), m("p_p"));
    assert_eq!(pi.sharp(&w, &f("p*dq*dp")).unwrap(), &m("p*p_p") * &m("-p_q"));
}

#[test]
fn classification_labels() {
    let (t, q) = so3();
    let a = MultivectorAlgebra::new(&t, -1).unwrap();
    let qh = a.from_vector_field(&q).unwrap();
    let std = standard_bialgebra(&a);
    let cls = homotopy_classify(&a, &qh).unwrap();
    assert_eq!(cls.label, "Q-manifold");
    assert!(cls.report.passed());
    let cls = homotopy_classify(&a, kirillov_kostant(&a).element()).unwrap();
    assert_eq!(cls.label, "P_k-manifold");
    assert!(cls.report.passed());
    let cls = homotopy_classify(&a, &(&qh + std.element())).unwrap();
    assert_eq!(cls.label, "PQ-manifold");
    assert!(cls.report.passed(), "{}", cls.report.to_text());
    let cls = homotopy_classify(&a, &(&qh + kirillov_kostant(&a).element())).unwrap();
    assert_eq!(cls.label, "PQ-manifold");
    assert!(cls.report.failed("2[T1,T2]"));
    // the top form is a CE 3-cocycle
    let omega = Element::parse("e1*e2*e3", a.table()).unwrap();
    let cls = homotopy_classify(&a, &(&qh + &omega)).unwrap();
    assert_eq!(cls.label, "quasi-Lie bialgebroid");
    assert!(cls.report.passed(), "{}", cls.report.to_text());
    let cls = homotopy_classify(&a, &(&(&qh + std.element()) + &omega)).unwrap();
    assert_eq!(cls.label, "quasi-Lie bialgebroid");
    assert!(cls.report.checks.iter().any(|c| c.identity == "2[T0,T2] + [T1,T1] = 0"));
    let lam = Element::parse("p_e1*p_e2*p_e3", a.table()).unwrap();
    let cls = homotopy_classify(&a, &(&lam + &qh)).unwrap();
    assert_eq!(cls.label, "Lie quasi-bialgebroid");
    assert_eq!(homotopy_classify(&a, &Element::zero(a.table())).unwrap().label, "trivial");
    assert!(homotopy_classify(&a, &Element::parse("e1", a.table()).unwrap()).is_err());
}

#[test]
fn deformations() {
    let (t, q) = so3();
    let a = MultivectorAlgebra::new(&t, -1).unwrap();
    let std = standard_bialgebra(&a);
    let zero = Element::zero(a.table());
    for mode in [DeformationMode::Infinitesimal, DeformationMode::Full] {
        assert!(deformation_check(&q, &std, &zero, mode).unwrap().passed());
    }
    let mut r = common::rng(4);
    for _ in 0..5 {
        let eta = a.from_vector_field(&common::random_derivation(&mut r, &t, 0, 0, 0.5)).unwrap();
        let th = deformation_coboundary(&q, &std, &eta).unwrap();
        let rep = deformation_check(&q, &std, &th, DeformationMode::Infinitesimal).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
    // X(e1) = e2 e3, X(e3) = e1 e3 has X^2(e1) = e1 e2 e3
    let e = |s: &str| Element::parse(s, &t).unwrap();
    let xv = Derivation::new(&t, 1, vec![e("e2*e3"), e("0"), e("e1*e3")]).unwrap();
    assert!(!xv.square_on_generators()[0].is_zero());
    // the first slot vanishes iff Q + X is homological: true for X, false for 2X
    let x = a.from_vector_field(&xv).unwrap();
    assert!(is_homological(&q.add(&xv).unwrap()).passed());
    assert!(!deformation_check(&q, &std, &x, DeformationMode::Full).unwrap().failed("L_Q X"));
    assert!(!is_homological(&q.add(&xv.scale(&int(2))).unwrap()).passed());
    let x = x.scale(&int(2));
    assert!(!a.schouten(&x, &x).unwrap().is_zero());
    let rep = deformation_check(&q, &std, &x, DeformationMode::Full).unwrap();
    assert!(rep.failed("L_Q X + 1/2 [X,X]"));
    assert!(deformation_check(&q, &std, &Element::parse("e1*e2*e3", a.table()).unwrap(), DeformationMode::Full).is_err());
}
