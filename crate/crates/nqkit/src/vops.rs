//! Coefficient vectors over the base ring: sections in a fixed frame.

use crate::algebra::{Element, Scalar, Table};

pub type Vector = Vec<Element>;

pub fn zero(t: &Table, n: usize) -> Vector {
    vec![Element::zero(t); n]
}

pub fn unit(t: &Table, n: usize, i: usize) -> Vector {
    let mut v = zero(t, n);
    v[i] = Element::one(t);
    v
}

pub fn add(a: &[Element], b: &[Element]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Element], b: &[Element]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Element]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(f: &Element, a: &[Element]) -> Vector {
    a.iter().map(|x| f * x).collect()
}

pub fn scale_by(c: &Scalar, a: &[Element]) -> Vector {
    a.iter().map(|x| x.scale(c)).collect()
}

pub fn add_assign(a: &mut [Element], b: &[Element]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

pub fn is_zero(a: &[Element]) -> bool {
    a.iter().all(Element::is_zero)
}

/// `sum_i v_i * m[i]` for a matrix given row by row.
pub fn combine(t: &Table, v: &[Element], rows: &[Vec<Element>], width: usize) -> Vector {
    let mut out = zero(t, width);
    for (c, row) in v.iter().zip(rows) {
        if !c.is_zero() {
            add_assign(&mut out, &scale(c, row));
        }
    }
    out
}
