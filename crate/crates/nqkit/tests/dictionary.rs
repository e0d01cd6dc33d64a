mod common;

use nqkit::nq::{brackets_from_q, q_from_brackets, verify_l_infinity, Bundle, SplitNManifold};
use nqkit::is_homological;

fn manifold(base: usize, r1: usize, r2: usize) -> SplitNManifold {
    let base_vars = ["x", "y"][..base].iter().map(|s| s.to_string()).collect();
    let mut bundles = vec![Bundle { name: "A1".into(), degree: 1, frame: (1..=r1).map(|i| format!("a{i}")).collect() }];
    if r2 > 0 {
        bundles.push(Bundle { name: "A2".into(), degree: 2, frame: (1..=r2).map(|i| format!("b{i}")).collect() });
    }
    SplitNManifold::new(base_vars, bundles).unwrap()
}

#[test]
fn random_round_trips_and_equivalence() {
    let mut r = common::rng(7);
    let mut agree_pass = 0;
    let mut agree_fail = 0;
    for trial in 0..200 {
        let m = manifold(trial % 3, 1 + trial % 2, (trial / 2) % 3);
        let density = [0.05, 0.1, 0.2, 0.4][trial % 4];
        let q = common::random_derivation(&mut r, m.table(), 1, 1, density);
        let b = brackets_from_q(&m, &q).unwrap();
        assert_eq!(q_from_brackets(&m, &b).unwrap(), q);
        assert_eq!(brackets_from_q(&m, &q_from_brackets(&m, &b).unwrap()).unwrap(), b);
        let l = verify_l_infinity(&m, &b).passed();
        let h = is_homological(&q).passed();
        assert_eq!(l, h, "trial {trial}: {q:?}\n{}", verify_l_infinity(&m, &b).to_text());
        if h { agree_pass += 1 } else { agree_fail += 1 }
    }
    eprintln!("pass {agree_pass} fail {agree_fail}");
    assert!(agree_pass >= 10 && agree_fail >= 10);
}
