mod common;

use nqkit::lie2::{q_from_data, SplitLie2Data};
use nqkit::weil::WeilAlgebra;
use nqkit::{Derivation, Element, GeneratorTable};

#[test]
fn cartan_on_coordinate_fields() {
    let t = GeneratorTable::new([("x", 0), ("th", 1)]).unwrap();
    let w = WeilAlgebra::new(&t).unwrap();
    let dx = Derivation::coordinate(&t, 0);
    let rep = w.cartan_report(&dx, &dx).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    // odd and even paths: X = d/dth, Y = th d/dx
    let dth = Derivation::coordinate(&t, 1);
    let y = dx.left_mul(&Element::parse("th", &t).unwrap()).unwrap();
    let rep = w.cartan_report(&dth, &y).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let rep = w.cartan_report(&y, &dth).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn module_rule_by_expansion() {
    // L_{th d/dx} = th L_{d/dx} - dth i_{d/dx}
    let t = GeneratorTable::new([("x", 0), ("th", 1)]).unwrap();
    let w = WeilAlgebra::new(&t).unwrap();
    let p = |s: &str| Element::parse(s, w.table()).unwrap();
    let dx = Derivation::coordinate(&t, 0);
    let l = w.lie(&dx.left_mul(&Element::parse("th", &t).unwrap()).unwrap()).unwrap();
    assert_eq!(l.apply(&p("x")), p("th"));
    // on dx: i d(dx) - d(i dx) with i dx = th gives -dth
    assert_eq!(l.apply(&p("dx")), p("-dth"));
}

#[test]
fn cartan_on_random_fields() {
    let mut r = common::rng(3);
    let t = GeneratorTable::new([("x", 0), ("y", 0), ("e", 1), ("b", 2)]).unwrap();
    let w = WeilAlgebra::new(&t).unwrap();
    for trial in 0..30 {
        let x = common::random_derivation(&mut r, &t, [-1, 0, 1][trial % 3], 1, 0.4);
        let y = common::random_derivation(&mut r, &t, [0, 1, -2][trial % 3], 1, 0.4);
        let rep = w.cartan_report(&x, &y).unwrap();
        assert!(rep.passed(), "trial {trial}\n{}", rep.to_text());
    }
}

fn so3() -> SplitLie2Data {
    let mut d = SplitLie2Data::zero(&[], &["e1", "e2", "e3"], &[]).unwrap();
    let t = d.table().clone();
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        d.dull_mut().set_bracket(i, j, k, Element::one(&t)).unwrap();
    }
    d
}

#[test]
fn so3_bicomplex() {
    let d = so3();
    let q = q_from_data(&d).unwrap();
    let w = WeilAlgebra::new(d.table()).unwrap();
    assert!(w.bicomplex_check(&q).unwrap().passed());
    let p = |s: &str| Element::parse(s, w.table()).unwrap();
    // L_Q = i_Q d - d i_Q, so L_Q(d e1) = -d(Q e1) = d(e2 e3)
    let lq = w.lie(&q).unwrap();
    assert_eq!(lq.apply(&p("de1")), p("de2*e3 - e2*de3"));
    assert_eq!(w.bidegree_of(&lq.apply(&p("de1"))), Some((1, 2)));
    let zero = Derivation::zero(d.table(), 1);
    assert!(w.bicomplex_check(&zero).unwrap().passed());
}

#[test]
fn tm1_bicomplex() {
    let mut d = SplitLie2Data::zero(&["x"], &["a"], &[]).unwrap();
    let t = d.table().clone();
    d.dull_mut().set_anchor(0, 0, Element::one(&t)).unwrap();
    let q = q_from_data(&d).unwrap();
    let w = WeilAlgebra::new(&t).unwrap();
    assert!(w.bicomplex_check(&q).unwrap().passed());
    let lq = w.lie(&q).unwrap();
    let dqx = w.de_rham().apply(&w.embed(&q.apply(&Element::parse("x", &t).unwrap())).unwrap());
    assert_eq!(lq.apply(&Element::parse("dx", w.table()).unwrap()), -dqx);
}

#[test]
fn bicomplex_fails_for_non_homological() {
    // Q(e) = b, Q(b) = x e b: Q^2(e) = x e b is not zero
    let t2 = GeneratorTable::new([("x", 0), ("e", 1), ("b", 2)]).unwrap();
    let q2 = Derivation::new(&t2, 1, vec![Element::zero(&t2), Element::parse("b", &t2).unwrap(), Element::parse("x*e*b", &t2).unwrap()]).unwrap();
    let w2 = WeilAlgebra::new(&t2).unwrap();
    assert!(w2.bicomplex_check(&q2).unwrap().failed("L_Q^2"));
}
