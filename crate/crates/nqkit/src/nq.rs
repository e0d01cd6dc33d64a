//! Split [n]-manifolds and the dictionary between homological vector fields
//! and L-infinity multibrackets.
//!
//! Generators are laid out as the base variables followed by the dual frame
//! of every bundle, so frame `f` is generator `base_count + f`. Sections of
//! the bundle of degree `i` act as derivations of degree `-i`.
//!
//! Contraction convention: `evaluate(xi, (a1, ..., ak))` applies the hat of
//! `a1` first. Every dictionary sign in this crate follows from that choice.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{is_odd, koszul_parity, sign, Element, GeneratorTable, Monomial, Scalar, Table};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub name: String,
    pub degree: i32,
    /// Names of the dual-frame generators.
    pub frame: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitNManifold {
    base_vars: Vec<String>,
    bundles: Vec<Bundle>,
    table: Table,
    frame_bundle: Vec<usize>,
}

impl SplitNManifold {
    pub fn new(base_vars: Vec<String>, bundles: Vec<Bundle>) -> Result<Self> {
        if bundles.is_empty() {
            return Err(Error::Input("a split manifold needs at least one bundle".into()));
        }
        let mut entries: Vec<(String, i32)> = base_vars.iter().map(|v| (v.clone(), 0)).collect();
        let mut frame_bundle = Vec::new();
        let mut seen = Vec::new();
        for (k, b) in bundles.iter().enumerate() {
            if b.degree < 1 {
                return Err(Error::Input(format!("bundle `{}` must have degree >= 1", b.name)));
            }
            if seen.contains(&b.degree) {
                return Err(Error::Input(format!("two bundles of degree {}", b.degree)));
            }
            seen.push(b.degree);
            if b.frame.is_empty() {
                return Err(Error::Input(format!("bundle `{}` has an empty frame", b.name)));
            }
            for g in &b.frame {
                entries.push((g.clone(), b.degree));
                frame_bundle.push(k);
            }
        }
        let table = GeneratorTable::new(entries)?;
        Ok(SplitNManifold { base_vars, bundles, table, frame_bundle })
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn n(&self) -> i32 {
        self.bundles.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn base_count(&self) -> usize {
        self.base_vars.len()
    }

    pub fn frame_count(&self) -> usize {
        self.frame_bundle.len()
    }

    pub fn frame_degree(&self, f: usize) -> i32 {
        self.bundles[self.frame_bundle[f]].degree
    }

    pub fn frame_generator(&self, f: usize) -> usize {
        self.base_count() + f
    }

    pub fn frame_name(&self, f: usize) -> &str {
        self.table.name(self.frame_generator(f))
    }

    pub fn frame_of_generator(&self, g: usize) -> Option<usize> {
        g.checked_sub(self.base_count())
    }

    pub fn frame_by_name(&self, name: &str) -> Option<usize> {
        self.table.index_of(name).and_then(|g| self.frame_of_generator(g))
    }

    /// Frames of the bundle of degree `i`.
    pub fn frames_of_degree(&self, i: i32) -> Vec<usize> {
        (0..self.frame_count()).filter(|&f| self.frame_degree(f) == i).collect()
    }

    pub fn base_var(&self, s: usize) -> Element {
        Element::generator(&self.table, s)
    }

    /// `d/dx^s` on base polynomials.
    pub fn partial(&self, s: usize, f: &Element) -> Element {
        Derivation::coordinate(&self.table, s).apply(f)
    }

    /// Test polynomials used to probe Leibniz-type clauses.
    pub fn probes(&self) -> Vec<Element> {
        let mut out = Vec::new();
        for s in 0..self.base_count() {
            out.push(self.base_var(s));
        }
        for s in 0..self.base_count() {
            for t in s..self.base_count() {
                out.push(&self.base_var(s) * &self.base_var(t));
            }
        }
        out
    }

    /// Non-decreasing frame tuples of length `k`, without repeated odd frames.
    pub fn frame_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.tuples_rec(k, 0, false, &mut Vec::new(), &mut out);
        out
    }

    /// Non-decreasing frame tuples of length `k`, odd repeats allowed. Used
    /// when one slot is scaled by a probe polynomial.
    pub fn frame_multisets(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.tuples_rec(k, 0, true, &mut Vec::new(), &mut out);
        out
    }

    fn tuples_rec(&self, k: usize, start: usize, repeat_odd: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for f in start..self.frame_count() {
            if !repeat_odd && cur.last() == Some(&f) && is_odd(self.frame_degree(f)) {
                continue;
            }
            cur.push(f);
            self.tuples_rec(k, f, repeat_odd, cur, out);
            cur.pop();
        }
    }
}

/// A section, as base-polynomial coefficients over all frames.
#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    pub coeffs: Vec<Element>,
}

impl Section {
    pub fn zero(m: &SplitNManifold) -> Self {
        Section { coeffs: vec![Element::zero(m.table()); m.frame_count()] }
    }

    pub fn frame(m: &SplitNManifold, f: usize) -> Self {
        let mut s = Self::zero(m);
        s.coeffs[f] = Element::one(m.table());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Element::is_zero)
    }

    /// Bundle degree of a nonzero homogeneous section.
    pub fn degree(&self, m: &SplitNManifold) -> Option<i32> {
        let mut d = None;
        for (f, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = m.frame_degree(f);
                if d.is_some_and(|d| d != e) {
                    return None;
                }
                d = Some(e);
            }
        }
        d
    }

    pub fn scale(&self, f: &Element) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| f * c).collect() }
    }

    pub fn scale_by(&self, c: &Scalar) -> Section {
        Section { coeffs: self.coeffs.iter().map(|e| e.scale(c)).collect() }
    }

    pub fn add(&self, other: &Section) -> Section {
        Section { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn add_assign(&mut self, other: &Section) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Residual as a single element `sum_f c_f * alpha_f` for reporting.
    pub fn as_element(&self, m: &SplitNManifold) -> Element {
        let mut out = Element::zero(m.table());
        for (f, c) in self.coeffs.iter().enumerate() {
            out += c * &Element::generator(m.table(), m.frame_generator(f));
        }
        out
    }

    pub fn display(&self, m: &SplitNManifold) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, c)| {
                if c.is_one_element() {
                    format!("[{}]", m.frame_name(f))
                } else {
                    format!("({c})*[{}]", m.frame_name(f))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

trait OneCheck {
    fn is_one_element(&self) -> bool;
}

impl OneCheck for Element {
    fn is_one_element(&self) -> bool {
        self.num_terms() == 1 && self.constant_term().is_one()
    }
}

/// The derivation of degree `-i` defined by a section of the degree-`i` bundle.
pub fn hat(m: &SplitNManifold, s: &Section) -> Result<Derivation> {
    let deg = match s.degree(m) {
        Some(d) => d,
        None if s.is_zero() => 0,
        None => return Err(Error::Degree("hat needs a section of a single bundle".into())),
    };
    let mut images = vec![Element::zero(m.table()); m.table().len()];
    for (f, c) in s.coeffs.iter().enumerate() {
        images[m.frame_generator(f)] = c.clone();
    }
    Derivation::new(m.table(), -deg, images)
}

/// Contract `xi` with the tuple, first entry innermost.
pub fn evaluate(m: &SplitNManifold, xi: &Element, tuple: &[Section]) -> Result<Element> {
    let total: i32 = tuple.iter().map(|s| s.degree(m).unwrap_or(0)).sum();
    if tuple.iter().all(|s| !s.is_zero()) && !xi.degree_of().fits(total) {
        return Err(Error::Degree(format!("cannot evaluate `{xi}` on sections of total degree {total}")));
    }
    let mut out = xi.clone();
    for s in tuple {
        out = hat(m, s)?.apply(&out);
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

fn eval_frames(m: &SplitNManifold, xi: &Element, frames: &[usize]) -> Element {
    let secs: Vec<Section> = frames.iter().map(|&f| Section::frame(m, f)).collect();
    evaluate(m, xi, &secs).expect("frame tuple of matching degree")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiBrackets {
    /// `anchor[f][s]`: the `x^s` component of the anchor of frame `f`.
    pub anchor: Vec<Vec<Element>>,
    /// Brackets on sorted frame tuples, valued in sections (coefficients over all frames).
    pub brackets: BTreeMap<Vec<usize>, Vec<Element>>,
}

impl MultiBrackets {
    pub fn zero(m: &SplitNManifold) -> Self {
        MultiBrackets {
            anchor: vec![vec![Element::zero(m.table()); m.base_count()]; m.frame_count()],
            brackets: BTreeMap::new(),
        }
    }

    /// Set the bracket of a frame tuple in any order; the stored canonical
    /// entry is adjusted by the Koszul sign.
    pub fn set(&mut self, m: &SplitNManifold, tuple: &[usize], value: Vec<Element>) -> Result<()> {
        let (key, neg) = canonical(m, tuple).ok_or_else(|| Error::Input("repeated odd frame in bracket".into()))?;
        let value: Vec<Element> = value.iter().map(|e| e.scale(&sign(neg))).collect();
        if let Some(old) = self.brackets.get(&key) {
            if *old != value {
                return Err(Error::Input(format!("conflicting bracket values for {:?}", names(m, tuple))));
            }
        }
        self.brackets.insert(key, value);
        Ok(())
    }

    pub fn validate(&self, m: &SplitNManifold) -> Result<()> {
        if self.anchor.len() != m.frame_count() || self.anchor.iter().any(|r| r.len() != m.base_count()) {
            return Err(Error::Input("anchor has the wrong shape".into()));
        }
        for (f, row) in self.anchor.iter().enumerate() {
            for a in row {
                if !a.is_base() {
                    return Err(Error::Input("anchor components must be base polynomials".into()));
                }
                if !a.is_zero() && m.frame_degree(f) != 1 {
                    return Err(Error::Degree(format!("anchor on frame `{}` of degree {}", m.frame_name(f), m.frame_degree(f))));
                }
            }
        }
        for (key, value) in &self.brackets {
            if key.is_empty() || key.len() as i32 > m.n() + 1 {
                return Err(Error::Degree(format!("bracket arity {} out of range", key.len())));
            }
            if canonical(m, key).map(|(k, _)| k) != Some(key.clone()) {
                return Err(Error::Input("bracket key not canonical".into()));
            }
            if value.len() != m.frame_count() {
                return Err(Error::Input("bracket value has the wrong length".into()));
            }
            let out: i32 = key.iter().map(|&f| m.frame_degree(f)).sum::<i32>() - 1;
            for (g, c) in value.iter().enumerate() {
                if !c.is_base() {
                    return Err(Error::Input("bracket coefficients must be base polynomials".into()));
                }
                if !c.is_zero() && m.frame_degree(g) != out {
                    return Err(Error::Degree(format!(
                        "bracket of {:?} must land in degree {out}, not in `{}`",
                        names(m, key),
                        m.frame_name(g)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bracket of frames in arbitrary order.
    pub fn on_frames(&self, m: &SplitNManifold, tuple: &[usize]) -> Section {
        let Some((key, neg)) = canonical(m, tuple) else { return Section::zero(m) };
        match self.brackets.get(&key) {
            Some(v) => Section { coeffs: v.iter().map(|e| e.scale(&sign(neg))).collect() },
            None => Section::zero(m),
        }
    }

    /// `rho(s)(f)`.
    pub fn anchor_apply(&self, m: &SplitNManifold, s: &Section, f: &Element) -> Element {
        let mut out = Element::zero(m.table());
        for (fr, c) in s.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, r) in self.anchor[fr].iter().enumerate() {
                if !r.is_zero() {
                    out += c * &(r * &m.partial(x, f));
                }
            }
        }
        out
    }

    /// Bracket of general homogeneous sections: multilinear in every arity
    /// but two, where the anchor enters through Leibniz in the second slot and
    /// graded symmetry in the first.
    pub fn bracket(&self, m: &SplitNManifold, args: &[Section]) -> Section {
        if args.iter().any(Section::is_zero) || args.is_empty() {
            return Section::zero(m);
        }
        if args.len() == 2 {
            return self.bracket2(m, &args[0], &args[1]);
        }
        let mut out = Section::zero(m);
        let mut idx = vec![0usize; args.len()];
        let choices: Vec<Vec<usize>> =
            args.iter().map(|s| (0..m.frame_count()).filter(|&f| !s.coeffs[f].is_zero()).collect()).collect();
        loop {
            let frames: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let mut coeff = Element::one(m.table());
            for (a, &f) in args.iter().zip(&frames) {
                coeff = &coeff * &a.coeffs[f];
            }
            let b = self.on_frames(m, &frames);
            if !b.is_zero() {
                out.add_assign(&b.scale(&coeff));
            }
            let mut p = 0;
            loop {
                if p == idx.len() {
                    return out;
                }
                idx[p] += 1;
                if idx[p] < choices[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    fn bracket2(&self, m: &SplitNManifold, a: &Section, b: &Section) -> Section {
        let mut out = Section::zero(m);
        for (i, fi) in a.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in b.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let ksgn = sign(is_odd(m.frame_degree(i)) && is_odd(m.frame_degree(j)));
                let br = self.on_frames(m, &[i, j]);
                out.add_assign(&br.scale(&(fi * gj)));
                let ei = Section::frame(m, i);
                let ej = Section::frame(m, j);
                let rho_i_g = self.anchor_apply(m, &ei, gj);
                if !rho_i_g.is_zero() {
                    out.add_assign(&ej.scale(&(fi * &rho_i_g)));
                }
                let rho_j_f = self.anchor_apply(m, &ej, fi);
                if !rho_j_f.is_zero() {
                    out.add_assign(&ei.scale(&(gj * &rho_j_f)).scale_by(&ksgn));
                }
            }
        }
        out
    }
}

fn names(m: &SplitNManifold, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&f| m.frame_name(f).to_string()).collect()
}

/// Sorted tuple and the Koszul flip relating it to `tuple`; `None` if an odd
/// frame repeats.
fn canonical(m: &SplitNManifold, tuple: &[usize]) -> Option<(Vec<usize>, bool)> {
    let degrees: Vec<i32> = tuple.iter().map(|&f| m.frame_degree(f)).collect();
    let mut order: Vec<usize> = (0..tuple.len()).collect();
    order.sort_by_key(|&k| (tuple[k], k));
    let key: Vec<usize> = order.iter().map(|&k| tuple[k]).collect();
    for w in key.windows(2) {
        if w[0] == w[1] && is_odd(m.frame_degree(w[0])) {
            return None;
        }
    }
    // tuple = Ksgn * key when key lists the entries in `order`
    Some((key, koszul_parity(order, &degrees)))
}

fn frames_monomial(m: &SplitNManifold, tuple: &[usize]) -> Element {
    let mut e = Element::one(m.table());
    for &f in tuple {
        e = &e * &Element::generator(m.table(), m.frame_generator(f));
    }
    e
}

/// Homological-vector-field side of the dictionary.
pub fn q_from_brackets(m: &SplitNManifold, b: &MultiBrackets) -> Result<Derivation> {
    b.validate(m)?;
    let t = m.table();
    let mut images = vec![Element::zero(t); t.len()];
    for s in 0..m.base_count() {
        for f in 0..m.frame_count() {
            let r = &b.anchor[f][s];
            if !r.is_zero() {
                images[s] += r * &Element::generator(t, m.frame_generator(f));
            }
        }
    }
    for (key, value) in &b.brackets {
        let mono = frames_monomial(m, key);
        let norm = eval_frames(m, &mono, key).constant_term();
        debug_assert!(!norm.is_zero());
        let factor = -(Scalar::one() / norm);
        for (g, c) in value.iter().enumerate() {
            if !c.is_zero() {
                images[m.frame_generator(g)] += (c * &mono).scale(&factor);
            }
        }
    }
    Derivation::new(t, 1, images)
}

/// Bracket side of the dictionary.
pub fn brackets_from_q(m: &SplitNManifold, q: &Derivation) -> Result<MultiBrackets> {
    if q.degree() != 1 {
        return Err(Error::Degree(format!("expected a degree-1 derivation, got degree {}", q.degree())));
    }
    let mut b = MultiBrackets::zero(m);
    for f in m.frames_of_degree(1) {
        for s in 0..m.base_count() {
            b.anchor[f][s] = eval_frames(m, q.image(s), &[f]);
        }
    }
    for g in 0..m.frame_count() {
        let img = q.image(m.frame_generator(g));
        let mut keys: Vec<Vec<usize>> = Vec::new();
        for (mono, _) in img.terms() {
            let key: Vec<usize> = mono.factors().filter_map(|i| if i < m.base_count() { None } else { Some(i - m.base_count()) }).collect();
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        for key in keys {
            if key.is_empty() {
                return Err(Error::Input(format!("Q(`{}`) has a term without frame generators", m.frame_name(g))));
            }
            let v = -eval_frames(m, img, &key);
            let entry = b.brackets.entry(key).or_insert_with(|| vec![Element::zero(m.table()); m.frame_count()]);
            entry[g] = v;
        }
    }
    b.brackets.retain(|_, v| v.iter().any(|e| !e.is_zero()));
    b.validate(m)?;
    if q_from_brackets(m, &b)? != *q {
        return Err(Error::Input("Q is not expressible through the manifold's frames".into()));
    }
    Ok(b)
}

fn tuple_label(m: &SplitNManifold, args: &[Section]) -> String {
    let parts: Vec<String> = args.iter().map(|s| s.display(m)).collect();
    format!("({})", parts.join(", "))
}

/// The four clauses defining a split Lie n-algebroid, on frame tuples and
/// single-slot probes.
pub fn verify_l_infinity(m: &SplitNManifold, b: &MultiBrackets) -> VerificationReport {
    let mut r = VerificationReport::new("l-infinity");
    if let Err(e) = b.validate(m) {
        r.flag("well-formed", "degree-1 multibrackets", "-", false, e.to_string());
        return r;
    }
    let probes = m.probes();
    let nmax = (m.n() + 1) as usize;

    for i in 0..m.frame_count() {
        for j in 0..m.frame_count() {
            let (a, c) = (Section::frame(m, i), Section::frame(m, j));
            for f in &probes {
                let lhs = b.bracket(m, &[a.clone(), c.scale(f)]);
                let rhs = b.bracket(m, &[a.clone(), c.clone()]).scale(f).add(&c.scale(&b.anchor_apply(m, &a, f)));
                r.residual("Leibniz", "clause 1", tuple_label(m, &[a.clone(), c.scale(f)]), &lhs.sub(&rhs).as_element(m));
            }
        }
    }

    for k in 1..=nmax {
        if k == 2 {
            continue;
        }
        for tuple in m.frame_tuples(k) {
            let base: Vec<Section> = tuple.iter().map(|&f| Section::frame(m, f)).collect();
            let plain = b.bracket(m, &base);
            for p in 0..k {
                for f in &probes {
                    let mut args = base.clone();
                    args[p] = args[p].scale(f);
                    let res = b.bracket(m, &args).sub(&plain.scale(f));
                    r.residual("linearity", "clause 2", tuple_label(m, &args), &res.as_element(m));
                }
            }
        }
    }

    for k in 2..=nmax {
        for tuple in m.frame_tuples(k) {
            let degrees: Vec<i32> = tuple.iter().map(|&f| m.frame_degree(f)).collect();
            let base: Vec<Section> = tuple.iter().map(|&f| Section::frame(m, f)).collect();
            let plain = b.bracket(m, &base);
            for p in 0..k - 1 {
                let mut swapped = base.clone();
                swapped.swap(p, p + 1);
                let s = sign(is_odd(degrees[p]) && is_odd(degrees[p + 1]));
                let res = b.bracket(m, &swapped).sub(&plain.scale_by(&s));
                r.residual("alternation", "clause 3", tuple_label(m, &swapped), &res.as_element(m));
            }
        }
    }

    for k in 1..=nmax + 1 {
        for tuple in m.frame_multisets(k) {
            let total: i32 = tuple.iter().map(|&f| m.frame_degree(f)).sum();
            if total - 2 > m.n() {
                continue;
            }
            let base: Vec<Section> = tuple.iter().map(|&f| Section::frame(m, f)).collect();
            let repeats_odd = tuple.windows(2).any(|w| w[0] == w[1] && is_odd(m.frame_degree(w[0])));
            if total - 2 >= 1 && !repeats_odd {
                let res = jacobiator(m, b, &base);
                r.residual("homotopy Jacobi", "clause 4", tuple_label(m, &base), &res.as_element(m));
            }
            if total - 2 >= 0 {
                for p in 0..k {
                    for f in &probes {
                        let mut args = base.clone();
                        args[p] = args[p].scale(f);
                        let res = jacobiator(m, b, &args);
                        r.residual("homotopy Jacobi", "clause 4", tuple_label(m, &args), &res.as_element(m));
                    }
                }
            }
        }
    }
    r
}

/// Left-hand side of the strong homotopy Jacobi identity,
/// `sum_{i+j=k+1} sum_shuffles Ksgn [[a_S]_i, a_rest]_j`.
///
/// With brackets read off `Q` through `-evaluate` in every arity they are
/// graded symmetric of degree one, and `Q^2 = 0` corresponds to this sum
/// without the extra `(-1)^{i(j-1)}` of the unshifted convention.
pub fn jacobiator(m: &SplitNManifold, b: &MultiBrackets, args: &[Section]) -> Section {
    let k = args.len();
    let degrees: Vec<i32> = args.iter().map(|s| s.degree(m).unwrap_or(0)).collect();
    let nmax = (m.n() + 1) as usize;
    let mut out = Section::zero(m);
    for i in 1..=k {
        let j = k + 1 - i;
        if i > nmax || j > nmax {
            continue;
        }
        for sh in shuffles(k, i) {
            let inner_args: Vec<Section> = sh[..i].iter().map(|&p| args[p].clone()).collect();
            let inner = b.bracket(m, &inner_args);
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = vec![inner];
            outer_args.extend(sh[i..].iter().map(|&p| args[p].clone()));
            let val = b.bracket(m, &outer_args);
            if val.is_zero() {
                continue;
            }
            let s = sign(koszul_parity(sh.iter().copied(), &degrees));
            out.add_assign(&val.scale_by(&s));
        }
    }
    out
}

/// All `(i, k-i)` shuffles as sequences of zero-based positions.
pub fn shuffles(k: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(k: usize, i: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == i {
            let mut s = pick.clone();
            s.extend((0..k).filter(|p| !pick.contains(p)));
            out.push(s);
            return;
        }
        for p in start..k {
            pick.push(p);
            rec(k, i, p + 1, pick, out);
            pick.pop();
        }
    }
    rec(k, i, 0, &mut pick, &mut out);
    out
}

/// Monomials of the manifold's algebra in a given degree, with base
/// polynomial degree at most `poly_cap`. Frame generators must have
/// positive degree for the enumeration to be finite.
pub fn monomial_basis(table: &Table, degree: i32, poly_cap: usize) -> Result<Vec<Monomial>> {
    if (0..table.len()).any(|g| table.degree(g) < 0) {
        return Err(Error::Input("monomial enumeration needs nonnegative generator degrees".into()));
    }
    let base: Vec<usize> = table.base_vars();
    let graded: Vec<usize> = (0..table.len()).filter(|&g| table.degree(g) > 0).collect();
    let mut result = Vec::new();
    // graded parts of total degree exactly `degree`
    fn rec(table: &Table, gens: &[usize], start: usize, left: i32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
        }
        for k in start..gens.len() {
            let g = gens[k];
            let d = table.degree(g);
            if d > left {
                continue;
            }
            if cur.last() == Some(&g) && table.odd(g) {
                continue;
            }
            cur.push(g);
            rec(table, gens, k, left - d, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    if degree >= 0 {
        rec(table, &graded, 0, degree, &mut Vec::new(), &mut parts);
    }
    let mut base_parts: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![Vec::<usize>::new()];
    for _ in 0..poly_cap {
        let mut next = Vec::new();
        for p in &frontier {
            let start = p.last().map_or(0, |&l| base.iter().position(|&b| b == l).unwrap());
            for &b in &base[start..] {
                let mut q = p.clone();
                q.push(b);
                next.push(q);
            }
        }
        base_parts.extend(next.iter().cloned());
        frontier = next;
    }
    for g in &parts {
        for b in &base_parts {
            let mut f: Vec<u32> = b.iter().chain(g.iter()).map(|&i| i as u32).collect();
            f.sort_unstable();
            result.push(Monomial::from_sorted(f));
        }
    }
    Ok(result)
}
