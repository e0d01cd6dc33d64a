#![allow(dead_code)]

use nqkit::algebra::int;
use nqkit::nq::monomial_basis;
use nqkit::{Derivation, Element, Table};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random element of `degree` with base-polynomial degree at most `cap`;
/// each basis monomial is kept with probability `density`.
pub fn random_element(r: &mut ChaCha8Rng, t: &Table, degree: i32, cap: usize, density: f64) -> Element {
    let basis = monomial_basis(t, degree, cap).unwrap();
    let mut e = Element::zero(t);
    for m in basis {
        if r.gen_bool(density) {
            let c = r.gen_range(-2i64..=2);
            e.add_term(m, int(c));
        }
    }
    e
}

pub fn random_derivation(r: &mut ChaCha8Rng, t: &Table, degree: i32, cap: usize, density: f64) -> Derivation {
    let images = (0..t.len()).map(|g| random_element(r, t, t.degree(g) + degree, cap, density)).collect();
    Derivation::new(t, degree, images).unwrap()
}

/// Random table: up to `max` generators with degrees in `lo..=hi`.
pub fn random_table(r: &mut ChaCha8Rng, max: usize, lo: i32, hi: i32) -> Table {
    let n = r.gen_range(1..=max);
    nqkit::GeneratorTable::new((0..n).map(|i| (format!("g{i}"), r.gen_range(lo..=hi)))).unwrap()
}

/// Random monomial of the given degree: a product of at most `len`
/// generators, at most `cap` of them of degree 0. `None` if the search
/// misses.
pub fn random_monomial(r: &mut ChaCha8Rng, t: &Table, degree: i32, len: usize, cap: usize) -> Option<Element> {
    for _ in 0..64 {
        let mut m = Element::one(t);
        let (mut d, mut base) = (0, 0);
        for _ in 0..r.gen_range(0..=len) {
            let g = r.gen_range(0..t.len());
            if t.degree(g) == 0 {
                if base == cap {
                    continue;
                }
                base += 1;
            }
            d += t.degree(g);
            m = &m * &Element::generator(t, g);
        }
        if d == degree && !m.is_zero() {
            return Some(m);
        }
    }
    None
}

/// Random homogeneous element: up to three terms of the given degree.
pub fn random_homogeneous(r: &mut ChaCha8Rng, t: &Table, degree: i32, cap: usize) -> Element {
    let mut e = Element::zero(t);
    for _ in 0..r.gen_range(1..=3) {
        if let Some(m) = random_monomial(r, t, degree, 4, cap) {
            e += m.scale(&int(r.gen_range(-3i64..=3)));
        }
    }
    e
}

/// A degree that some short monomial of `t` has.
pub fn random_degree(r: &mut ChaCha8Rng, t: &Table) -> i32 {
    let len = r.gen_range(0..=3);
    (0..len).map(|_| t.degree(r.gen_range(0..t.len()))).sum()
}
