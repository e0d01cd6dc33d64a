//! Free graded-commutative algebra over the rationals.
//!
//! A [`GeneratorTable`] fixes the generators and their integer degrees. Even
//! generators behave polynomially, odd ones exterior. Monomials are sorted
//! sequences of table positions, and the sign of a product is the parity of
//! the odd-odd inversions the sort performs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;
pub type Table = Arc<GeneratorTable>;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^n` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn is_odd(d: i32) -> bool {
    d.rem_euclid(2) == 1
}

#[derive(Debug, Clone)]
pub struct GeneratorTable {
    names: Vec<String>,
    degrees: Vec<i32>,
    index: HashMap<String, usize>,
}

impl PartialEq for GeneratorTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.degrees == other.degrees
    }
}

impl Eq for GeneratorTable {}

impl GeneratorTable {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, i32)>) -> Result<Table> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, deg) in entries {
            let name = name.into();
            if !valid_ident(&name) {
                return Err(Error::Input(format!("invalid generator name `{name}`")));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Input(format!("duplicate generator `{name}`")));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(Arc::new(GeneratorTable { names, degrees, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn odd(&self, i: usize) -> bool {
        is_odd(self.degrees[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, i32)> + '_ {
        self.names.iter().map(|s| s.as_str()).zip(self.degrees.iter().copied())
    }

    /// Positions of the degree-0 generators.
    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == 0).collect()
    }
}

pub(crate) fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sorted table positions, repeated only for even generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Monomial(vec![i as u32])
    }

    /// Caller guarantees sorted factors with no repeated odd generator.
    pub fn from_sorted(factors: Vec<u32>) -> Self {
        Monomial(factors)
    }

    pub fn factors(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, t: &GeneratorTable) -> i32 {
        self.factors().map(|i| t.degree(i)).sum()
    }

    /// Number of factors of degree 0.
    pub fn base_degree(&self, t: &GeneratorTable) -> usize {
        self.factors().filter(|&i| t.degree(i) == 0).count()
    }

    pub fn count(&self, i: usize) -> usize {
        self.0.iter().filter(|&&j| j as usize == i).count()
    }

    /// Normal-form product, `None` when an odd generator would repeat. The
    /// flag is true when the sort flips the sign.
    pub fn mul(&self, other: &Monomial, t: &GeneratorTable) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut negative = false;
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        let mut odd_left = a.iter().filter(|&&g| t.odd(g as usize)).count();
        for &g in b {
            while i < a.len() && a[i] <= g {
                if a[i] == g && t.odd(g as usize) {
                    return None;
                }
                if t.odd(a[i] as usize) {
                    odd_left -= 1;
                }
                out.push(a[i]);
                i += 1;
            }
            if t.odd(g as usize) && odd_left % 2 == 1 {
                negative = !negative;
            }
            out.push(g);
        }
        out.extend_from_slice(&a[i..]);
        Some((Monomial(out), negative))
    }

    fn fmt_with(&self, t: &GeneratorTable, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut k = 0;
        while k < self.0.len() {
            let g = self.0[k];
            let mut e = 1;
            while k + e < self.0.len() && self.0[k + e] == g {
                e += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(t.name(g as usize))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            k += e;
        }
        Ok(())
    }
}

/// Koszul sign relating `a_1...a_k` to `a_{perm(1)}...a_{perm(k)}`. `perm`
/// is one-based.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<Scalar> {
    if perm.len() != degrees.len() {
        return Err(Error::Input(format!(
            "permutation has length {} but {} degrees were given",
            perm.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p == 0 || p > perm.len() || seen[p - 1] {
            return Err(Error::Input("not a permutation of 1..k".into()));
        }
        seen[p - 1] = true;
    }
    Ok(sign(koszul_parity(perm.iter().map(|&p| p - 1), degrees)))
}

/// Parity of odd-odd inversions in the sequence `order` of zero-based slots.
pub(crate) fn koszul_parity(order: impl IntoIterator<Item = usize>, degrees: &[i32]) -> bool {
    let seq: Vec<usize> = order.into_iter().collect();
    let mut odd = false;
    for i in 0..seq.len() {
        if !is_odd(degrees[seq[i]]) {
            continue;
        }
        for j in i + 1..seq.len() {
            if seq[j] < seq[i] && is_odd(degrees[seq[j]]) {
                odd = !odd;
            }
        }
    }
    odd
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The zero element, homogeneous of every degree.
    Zero,
    Homogeneous(i32),
    Mixed,
}

impl Degree {
    /// True if an element of this degree may be used where degree `d` is required.
    pub fn fits(self, d: i32) -> bool {
        matches!(self, Degree::Zero) || self == Degree::Homogeneous(d)
    }
}

#[derive(Clone)]
pub struct Element {
    table: Table,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_table(&self.table, &other.table)
    }
}

impl Eq for Element {}

pub fn same_table(a: &Table, b: &Table) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn zero(table: &Table) -> Self {
        Element { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Table) -> Self {
        Self::constant(table, Scalar::one())
    }

    pub fn constant(table: &Table, c: Scalar) -> Self {
        Self::monomial(table, Monomial::one(), c)
    }

    pub fn int(table: &Table, n: i64) -> Self {
        Self::constant(table, int(n))
    }

    pub fn generator(table: &Table, i: usize) -> Self {
        Self::monomial(table, Monomial::generator(i), Scalar::one())
    }

    pub fn var(table: &Table, name: &str) -> Result<Self> {
        let i = table.index_of(name).ok_or_else(|| Error::UnknownIdentifier(name.into()))?;
        Ok(Self::generator(table, i))
    }

    pub fn monomial(table: &Table, m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero(table);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn from_terms(table: &Table, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = Self::zero(table);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree_of(&self) -> Degree {
        let mut it = self.terms.keys().map(|m| m.degree(&self.table));
        match it.next() {
            None => Degree::Zero,
            Some(d) => {
                if it.all(|e| e == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Mixed
                }
            }
        }
    }

    /// Degree of a homogeneous element, `None` for zero or mixed.
    pub fn degree(&self) -> Option<i32> {
        match self.degree_of() {
            Degree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }

    /// True if every monomial only involves degree-0 generators.
    pub fn is_base(&self) -> bool {
        self.terms.keys().all(|m| m.factors().all(|i| self.table.degree(i) == 0))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        Element {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let mut out = Element::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb, &self.table) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut out = Element::one(&self.table);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Keep only the terms whose monomials satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            table: self.table.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Re-express over `target`, sending generator `i` to generator `map[i]`.
    pub fn embed(&self, target: &Table, map: &[usize]) -> Element {
        self.substitute(target, &|i| Element::generator(target, map[i]))
    }

    /// Algebra morphism defined by the images of the generators.
    pub fn substitute(&self, target: &Table, image: &dyn Fn(usize) -> Element) -> Element {
        let images: Vec<Element> = (0..self.table.len()).map(image).collect();
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let mut p = Element::constant(target, c.clone());
            for g in m.factors() {
                p = &p * &images[g];
                if p.is_zero() {
                    break;
                }
            }
            out += &p;
        }
        out
    }

    /// Parse an expression over `table`.
    pub fn parse(text: &str, table: &Table) -> Result<Element> {
        crate::parse::parse_expr(text, table)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.fmt_with(&self.table, f)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("table mismatch in add")
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("table mismatch in mul")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Element> for Element {
            type Output = Element;
            fn $f(self, rhs: Element) -> Element {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Element> for Element {
            type Output = Element;
            fn $f(self, rhs: &Element) -> Element {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Element> for &'a Element {
            type Output = Element;
            fn $f(self, rhs: Element) -> Element {
                self.$f(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert!(same_table(&self.table, &rhs.table), "table mismatch in add");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Element> for Element {
    fn add_assign(&mut self, rhs: Element) {
        *self += &rhs;
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert!(same_table(&self.table, &rhs.table), "table mismatch in sub");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<Element> for Element {
    fn sub_assign(&mut self, rhs: Element) {
        *self -= &rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        GeneratorTable::new([("x", 0), ("t1", 1), ("t2", 1), ("b", 2)]).unwrap()
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[2, 1], &[1, 1]).unwrap(), int(-1));
        assert_eq!(koszul_sign(&[2, 1], &[2, 1]).unwrap(), int(1));
        assert_eq!(koszul_sign(&[3, 1, 2], &[1, 1, 1]).unwrap(), int(1));
        assert!(koszul_sign(&[1, 2], &[1]).is_err());
        assert!(koszul_sign(&[1, 1], &[1, 1]).is_err());
    }

    #[test]
    fn odd_generators_anticommute() {
        let t = table();
        let t1 = Element::generator(&t, 1);
        let t2 = Element::generator(&t, 2);
        assert_eq!(&t2 * &t1, -(&t1 * &t2));
        assert!((&t1 * &t1).is_zero());
        let b = Element::generator(&t, 3);
        let bt = &b * &t1;
        assert_eq!(bt.to_string(), "t1*b");
    }

    #[test]
    fn degrees() {
        let t = table();
        let e = Element::parse("x^2*t1", &t).unwrap();
        assert_eq!(e.degree_of(), Degree::Homogeneous(1));
        assert_eq!(Element::parse("x + t1", &t).unwrap().degree_of(), Degree::Mixed);
        assert_eq!(Element::zero(&t).degree_of(), Degree::Zero);
    }

    #[test]
    fn printing() {
        let t = table();
        let e = Element::parse("3/2*x^2*t1 - t2", &t).unwrap();
        assert_eq!(e.num_terms(), 2);
        assert_eq!(e.to_string(), "3/2*x^2*t1 - t2");
        assert_eq!(Element::parse("-1 + x", &t).unwrap().to_string(), "-1 + x");
        assert_eq!(Element::zero(&t).to_string(), "0");
    }

    #[test]
    fn embed_keeps_signs() {
        let t = table();
        let big = GeneratorTable::new([("t2", 1), ("t1", 1)]).unwrap();
        let e = Element::parse("t1*t2", &t).unwrap();
        let out = e.filter(|_| true).embed(&big, &[0, 1, 0, 0]);
        assert_eq!(out.to_string(), "-t2*t1");
    }
}
