mod common;

use nqkit::algebra::sign;
use nqkit::{Derivation, Element, Table};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

fn element(r: &mut ChaCha8Rng, t: &Table) -> (Element, i32) {
    let d = common::random_degree(r, t);
    (common::random_homogeneous(r, t, d, 2), d)
}

fn derivation(r: &mut ChaCha8Rng, t: &Table) -> Derivation {
    let d = common::random_degree(r, t) - t.degree(0);
    let images = (0..t.len()).map(|g| common::random_homogeneous(r, t, t.degree(g) + d, 2)).collect();
    Derivation::new(t, d, images).unwrap()
}

fn odd(d: i32) -> bool {
    d.rem_euclid(2) == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn associativity(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        let ((a, _), (b, _), (c, _)) = (element(&mut r, &t), element(&mut r, &t), element(&mut r, &t));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        let ((a, da), (b, db)) = (element(&mut r, &t), element(&mut r, &t));
        prop_assert_eq!(&a * &b, (&b * &a).scale(&sign(odd(da) && odd(db))));
    }

    #[test]
    fn distributivity(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        let ((a, _), (b, _), (c, _)) = (element(&mut r, &t), element(&mut r, &t), element(&mut r, &t));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn odd_squares_vanish(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        for g in (0..t.len()).filter(|&g| odd(t.degree(g))) {
            let x = Element::generator(&t, g);
            prop_assert!((&x * &x).is_zero());
        }
    }

    #[test]
    fn leibniz(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        let q = derivation(&mut r, &t);
        let ((a, da), (b, _)) = (element(&mut r, &t), element(&mut r, &t));
        let s = sign(odd(q.degree()) && odd(da));
        prop_assert_eq!(q.apply(&(&a * &b)), &(&q.apply(&a) * &b) + &(&a * &q.apply(&b)).scale(&s));
    }

    #[test]
    fn commutator_is_a_derivation(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 5, -2, 3);
        let (x, y) = (derivation(&mut r, &t), derivation(&mut r, &t));
        let c = x.commutator(&y);
        let (a, _) = element(&mut r, &t);
        let s = sign(odd(x.degree()) && odd(y.degree()));
        let direct = &x.apply(&y.apply(&a)) - &y.apply(&x.apply(&a)).scale(&s);
        prop_assert_eq!(c.apply(&a), direct);
    }

    #[test]
    fn canonical_print_parses_back(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let t = common::random_table(&mut r, 6, -2, 3);
        let (a, _) = element(&mut r, &t);
        prop_assert_eq!(Element::parse(&a.to_string(), &t).unwrap(), a.clone());
        prop_assert_eq!(Element::parse(&format!("({a}) - ({a})"), &t).unwrap(), Element::zero(&t));
    }
}
