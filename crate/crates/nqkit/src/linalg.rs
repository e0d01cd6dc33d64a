//! Exact linear algebra over the rationals and small matrices over the base ring.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{sign, Element, Monomial, Scalar, Table};

/// One solution of `a x = b` with free variables set to zero, or `None` if
/// the system is inconsistent.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Scalar::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=cols {
                    let d = &f * &m[row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Coefficients `c` with `sum_k c_k columns[k] = target`, comparing every
/// slot of the vectors monomial by monomial.
pub fn solve_combination(columns: &[Vec<Element>], target: &[Element]) -> Option<Vec<Scalar>> {
    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let key = |slot: usize, m: &Monomial, rows: &mut BTreeMap<(usize, Monomial), usize>| {
        let n = rows.len();
        *rows.entry((slot, m.clone())).or_insert(n)
    };
    let mut entries = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        for (slot, e) in col.iter().enumerate() {
            for (m, c) in e.terms() {
                entries.push((key(slot, m, &mut rows), k, c.clone()));
            }
        }
    }
    let mut rhs_entries = Vec::new();
    for (slot, e) in target.iter().enumerate() {
        for (m, c) in e.terms() {
            rhs_entries.push((key(slot, m, &mut rows), c.clone()));
        }
    }
    let n = rows.len();
    let mut a = vec![vec![Scalar::zero(); columns.len()]; n];
    let mut b = vec![Scalar::zero(); n];
    for (r, k, c) in entries {
        a[r][k] += c;
    }
    for (r, c) in rhs_entries {
        b[r] += c;
    }
    if n == 0 {
        return Some(vec![Scalar::zero(); columns.len()]);
    }
    solve(&a, &b)
}

pub fn solve_elements(columns: &[Element], target: &Element) -> Option<Vec<Scalar>> {
    let cols: Vec<Vec<Element>> = columns.iter().map(|e| vec![e.clone()]).collect();
    solve_combination(&cols, std::slice::from_ref(target))
}

/// Determinant by cofactor expansion; intended for ranks up to about eight.
pub fn det(m: &[Vec<Element>], table: &Table) -> Element {
    let n = m.len();
    let idx: Vec<usize> = (0..n).collect();
    det_minor(m, table, 0, &idx)
}

fn det_minor(m: &[Vec<Element>], table: &Table, row: usize, cols: &[usize]) -> Element {
    if cols.is_empty() {
        return Element::one(table);
    }
    let mut out = Element::zero(table);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
        let minor = det_minor(m, table, row + 1, &rest);
        out += (&m[row][c] * &minor).scale(&sign(k % 2 == 1));
    }
    out
}

/// Inverse of a matrix over the base ring whose determinant is a nonzero
/// constant; `None` otherwise.
pub fn inverse(m: &[Vec<Element>], table: &Table) -> Option<Vec<Vec<Element>>> {
    let n = m.len();
    let d = det(m, table);
    if d.is_zero() || d.terms().any(|(mono, _)| !mono.is_empty()) {
        return None;
    }
    let inv_d = Scalar::one() / d.constant_term();
    let mut out = vec![vec![Element::zero(table); n]; n];
    for i in 0..n {
        for j in 0..n {
            // cofactor of (j, i)
            let rows: Vec<Vec<Element>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let c = det(&rows, table);
            out[i][j] = c.scale(&(&inv_d * sign((i + j) % 2 == 1)));
        }
    }
    Some(out)
}
