//! Multivector fields on `T*[1-k]M`, the shifted Schouten bracket, derived
//! Poisson brackets and the checks built on them.
//!
//! The conjugate of a coordinate `xi` is named `p_<xi>` and has degree
//! `1 - k - |xi|`. The bracket `[X, .]_k` is the derivation of degree
//! `|X| + k - 1` fixed by `[p_i, xi_j] = delta_ij`, `[xi_i, xi_j] = 0`,
//! `[p_i, p_j] = 0`, shifted antisymmetry and the Leibniz rule in the second
//! slot. On a generator it is a left coordinate derivative of `X`, so no
//! recursion over the first argument is needed.

use std::collections::BTreeSet;

use crate::algebra::{int, is_odd, same_table, sign, Element, GeneratorTable, Monomial, Table};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::weil::WeilAlgebra;

#[derive(Debug, Clone)]
pub struct MultivectorAlgebra {
    base: Table,
    table: Table,
    k: i32,
}

fn homogeneous(e: &Element, what: &str) -> Result<Option<i32>> {
    match e.degree_of() {
        crate::Degree::Zero => Ok(None),
        crate::Degree::Homogeneous(d) => Ok(Some(d)),
        crate::Degree::Mixed => Err(Error::Degree(format!("{what} must be homogeneous, got `{e}`"))),
    }
}

impl MultivectorAlgebra {
    pub fn new(base: &Table, k: i32) -> Result<Self> {
        let mut entries: Vec<(String, i32)> = base.entries().map(|(n, d)| (n.to_string(), d)).collect();
        entries.extend(base.entries().map(|(n, d)| (format!("p_{n}"), 1 - k - d)));
        let table = GeneratorTable::new(entries)?;
        Ok(MultivectorAlgebra { base: base.clone(), table, k })
    }

    pub fn base(&self) -> &Table {
        &self.base
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    /// Index of the conjugate of base generator `g`.
    pub fn conj(&self, g: usize) -> usize {
        self.base.len() + g
    }

    pub fn is_conj(&self, g: usize) -> bool {
        g >= self.base.len()
    }

    pub fn conj_count(&self, m: &Monomial) -> usize {
        m.factors().filter(|&g| self.is_conj(g)).count()
    }

    /// The part of `e` with exactly `c` conjugate factors.
    pub fn component(&self, e: &Element, c: usize) -> Element {
        e.filter(|m| self.conj_count(m) == c)
    }

    /// Conjugate counts occurring in `e`.
    pub fn counts(&self, e: &Element) -> BTreeSet<usize> {
        e.terms().map(|(m, _)| self.conj_count(m)).collect()
    }

    pub fn embed(&self, e: &Element) -> Result<Element> {
        if !same_table(e.table(), &self.base) {
            return Err(Error::TableMismatch);
        }
        let map: Vec<usize> = (0..self.base.len()).collect();
        Ok(e.embed(&self.table, &map))
    }

    /// Back to a function on `M`; fails if a conjugate occurs.
    pub fn restrict(&self, e: &Element) -> Result<Element> {
        if !same_table(e.table(), &self.table) {
            return Err(Error::TableMismatch);
        }
        if e.terms().any(|(m, _)| self.conj_count(m) > 0) {
            return Err(Error::Input(format!("`{e}` is not a function on the base")));
        }
        let base = self.base.clone();
        Ok(e.substitute(&base, &|g| if g < base.len() { Element::generator(&base, g) } else { Element::zero(&base) }))
    }

    fn lift(&self, e: &Element) -> Result<Element> {
        if same_table(e.table(), &self.table) {
            Ok(e.clone())
        } else {
            self.embed(e)
        }
    }

    /// `|X| + k - 1`.
    fn shifted(&self, d: i32) -> i32 {
        d + self.k - 1
    }

    /// `[X, .]_k` as a derivation of the multivector algebra.
    pub fn bracket_derivation(&self, x: &Element) -> Result<Derivation> {
        let x = self.lift(x)?;
        let Some(dx) = homogeneous(&x, "first bracket argument")? else {
            return Ok(Derivation::zero(&self.table, 0));
        };
        let sx = self.shifted(dx);
        let n = self.base.len();
        let mut images = vec![Element::zero(&self.table); 2 * n];
        for j in 0..n {
            let dj = self.base.degree(j);
            // [X, xi_j] = (-1)^{s_X (|xi_j| + k - 1) + k |xi_j|} d/dp_j X
            let s = sign(is_odd(sx * self.shifted(dj) + self.k * dj));
            images[j] = Derivation::coordinate(&self.table, self.conj(j)).apply(&x).scale(&s);
            // [X, p_j] = -(-1)^{s_X |xi_j|} d/dxi_j X
            let s = -sign(is_odd(sx * dj));
            images[self.conj(j)] = Derivation::coordinate(&self.table, j).apply(&x).scale(&s);
        }
        Derivation::new(&self.table, sx, images)
    }

    /// The shifted Schouten bracket `[a, b]_k`.
    pub fn schouten(&self, a: &Element, b: &Element) -> Result<Element> {
        let b = self.lift(b)?;
        homogeneous(&b, "second bracket argument")?;
        Ok(self.bracket_derivation(a)?.apply(&b))
    }

    /// `[xi_{i_l}, ... [xi_{i_1}, X]_k ...]_k`; recovers the coefficient of
    /// `p_{i_1} ... p_{i_l}` in `X` up to sign.
    pub fn extract(&self, x: &Element, gens: &[usize]) -> Result<Element> {
        let mut out = self.lift(x)?;
        for &g in gens {
            out = self.schouten(&Element::generator(&self.table, g), &out)?;
        }
        Ok(out)
    }

    /// Vector field `X` as the conjugate-count-1 element `X^` with
    /// `[X^, xi] = X(xi)`.
    pub fn from_vector_field(&self, x: &Derivation) -> Result<Element> {
        if !same_table(x.table(), &self.base) {
            return Err(Error::TableMismatch);
        }
        let mut out = Element::zero(&self.table);
        for j in 0..self.base.len() {
            let pj = Element::generator(&self.table, self.conj(j));
            let xj = Element::generator(&self.table, j);
            for (m, c) in x.image(j).terms() {
                let term = self.embed(&Element::monomial(&self.base, m.clone(), int(1)))?;
                let cand = &term * &pj;
                let lambda = self.schouten(&cand, &xj)?.coefficient(m);
                out += cand.scale(&(c / lambda));
            }
        }
        Ok(out)
    }

    /// Inverse of `from_vector_field` on conjugate-count-1 elements.
    pub fn to_vector_field(&self, x: &Element) -> Result<Derivation> {
        let x = self.lift(x)?;
        if x.terms().any(|(m, _)| self.conj_count(m) != 1) {
            return Err(Error::Input(format!("`{x}` is not a vector field")));
        }
        let Some(d) = homogeneous(&x, "vector field")? else {
            return Ok(Derivation::zero(&self.base, 0));
        };
        let images = (0..self.base.len())
            .map(|j| self.restrict(&self.schouten(&x, &Element::generator(&self.table, j))?))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(&self.base, self.shifted(d), images)
    }
}

/// Conjugate count 2, total degree `2 - k`.
#[derive(Debug, Clone)]
pub struct Bivector {
    alg: MultivectorAlgebra,
    pi: Element,
}

impl Bivector {
    pub fn new(alg: &MultivectorAlgebra, pi: Element) -> Result<Self> {
        let pi = alg.lift(&pi)?;
        if pi.terms().any(|(m, _)| alg.conj_count(m) != 2) {
            return Err(Error::Degree(format!("bivector `{pi}` must have exactly two conjugates per term")));
        }
        if let Some(d) = homogeneous(&pi, "bivector")? {
            if d != 2 - alg.k {
                return Err(Error::Degree(format!("bivector must have degree {}, got {d}", 2 - alg.k)));
            }
        }
        Ok(Bivector { alg: alg.clone(), pi })
    }

    pub fn zero(alg: &MultivectorAlgebra) -> Self {
        Bivector { alg: alg.clone(), pi: Element::zero(&alg.table) }
    }

    /// The bivector whose derived bracket takes the values `v` on the listed
    /// generator pairs `(i, j)`, `i <= j`, and vanishes on unlisted pairs
    /// `i < j`. Pairs must be consistent with graded antisymmetry.
    pub fn from_brackets(alg: &MultivectorAlgebra, v: &[(usize, usize, Element)]) -> Result<Self> {
        let t = &alg.table;
        let mut pi = Element::zero(t);
        for (i, j, val) in v {
            let (i, j) = (*i, *j);
            if i > j || j >= alg.base.len() {
                return Err(Error::Input(format!("bracket entry ({i}, {j}) must have i <= j < {}", alg.base.len())));
            }
            let want = alg.base.degree(i) + alg.base.degree(j) + alg.k;
            let val = if same_table(val.table(), &alg.base) { val.clone() } else { alg.restrict(val)? };
            if !val.degree_of().fits(want) {
                return Err(Error::Degree(format!("bracket of generators {i}, {j} must have degree {want}, got `{val}`")));
            }
            let pp = &Element::generator(t, alg.conj(i)) * &Element::generator(t, alg.conj(j));
            for (m, c) in val.terms() {
                let f = alg.embed(&Element::monomial(&alg.base, m.clone(), int(1)))?;
                let test = Bivector { alg: alg.clone(), pi: &f * &pp };
                let lambda = if pp.is_zero() { int(0) } else { alg.restrict(&test.bracket_raw(i, j)?)?.coefficient(m) };
                if num_traits::Zero::is_zero(&lambda) {
                    return Err(Error::Input(format!(
                        "bracket of `{}` with itself must vanish",
                        alg.base.name(i)
                    )));
                }
                pi += (&f * &pp).scale(&(c / lambda));
            }
        }
        let out = Bivector::new(alg, pi)?;
        for (i, j, val) in v {
            let val = if same_table(val.table(), &alg.base) { val.clone() } else { alg.restrict(val)? };
            let got = out.bracket(&Element::generator(&alg.base, *i), &Element::generator(&alg.base, *j))?;
            if got != val {
                return Err(Error::Input(format!(
                    "bracket table is not graded antisymmetric at ({}, {}): got `{got}`, want `{val}`",
                    alg.base.name(*i),
                    alg.base.name(*j)
                )));
            }
        }
        Ok(out)
    }

    /// `{q_i, p_i} = 1` for each pair `(q_i, p_i)` of base generators.
    pub fn darboux(alg: &MultivectorAlgebra, pairs: &[(usize, usize)]) -> Result<Self> {
        let v: Vec<_> = pairs
            .iter()
            .map(|&(q, p)| {
                let one = Element::one(&alg.base);
                if q < p {
                    (q, p, one)
                } else {
                    let s = -sign(is_odd((alg.base.degree(q) + alg.k) * (alg.base.degree(p) + alg.k)));
                    (p, q, one.scale(&s))
                }
            })
            .collect();
        Self::from_brackets(alg, &v)
    }

    pub fn alg(&self) -> &MultivectorAlgebra {
        &self.alg
    }

    pub fn element(&self) -> &Element {
        &self.pi
    }

    fn bracket_raw(&self, i: usize, j: usize) -> Result<Element> {
        let t = &self.alg.table;
        let inner = self.alg.schouten(&Element::generator(t, i), &self.pi)?;
        self.alg.schouten(&inner, &Element::generator(t, j))
    }

    /// `X_xi = [xi, pi]_k` as a derivation of degree `|xi| + k`.
    pub fn hamiltonian(&self, xi: &Element) -> Result<Derivation> {
        if !same_table(xi.table(), &self.alg.base) {
            return Err(Error::Input("hamiltonian needs a function on the base".into()));
        }
        let x = self.alg.schouten(&self.alg.embed(xi)?, &self.pi)?;
        let d = self.alg.to_vector_field(&x)?;
        match homogeneous(xi, "function")? {
            Some(dx) if d.is_zero() => Ok(Derivation::zero(&self.alg.base, dx + self.alg.k)),
            _ => Ok(d),
        }
    }

    /// Derived bracket `{a, b}_k = [[a, pi]_k, b]_k`.
    pub fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        for e in [a, b] {
            if !same_table(e.table(), &self.alg.base) {
                return Err(Error::Input("derived bracket needs functions on the base".into()));
            }
        }
        let inner = self.alg.schouten(&self.alg.embed(a)?, &self.pi)?;
        self.alg.restrict(&self.alg.schouten(&inner, &self.alg.embed(b)?)?)
    }

    /// `[pi, pi]_k`.
    pub fn self_bracket(&self) -> Result<Element> {
        self.alg.schouten(&self.pi, &self.pi)
    }

    /// Image of a Weil algebra element: `xi dxi_1 ... dxi_q` goes to
    /// `(-1)^{|xi|} xi X_{xi_1} ... X_{xi_q}`.
    pub fn sharp(&self, w: &WeilAlgebra, form: &Element) -> Result<Element> {
        if !same_table(w.base(), &self.alg.base) || !same_table(form.table(), w.table()) {
            return Err(Error::TableMismatch);
        }
        let t = &self.alg.table;
        let n = self.alg.base.len();
        let hams = (0..n)
            .map(|g| self.alg.schouten(&Element::generator(t, g), &self.pi))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Element::zero(t);
        for (m, c) in form.terms() {
            let mut fdeg = 0;
            let mut p = Element::constant(t, c.clone());
            for g in m.factors() {
                if w.is_d_gen(g) {
                    p = &p * &hams[g - n];
                } else {
                    fdeg += self.alg.base.degree(g);
                    p = &p * &Element::generator(t, g);
                }
            }
            out += p.scale(&sign(is_odd(fdeg)));
        }
        Ok(out)
    }
}

fn gen_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// `[pi, pi]_k = 0`, cross-checked by the Jacobi identity of the derived
/// bracket on all generator triples.
pub fn check_poisson(pi: &Bivector) -> Result<VerificationReport> {
    let alg = pi.alg();
    let k = alg.k;
    let base = alg.base();
    let mut rep = VerificationReport::new("Poisson bivector");
    let pp = pi.self_bracket()?;
    rep.residual("[pi,pi]_k = 0", "differential equation for Poisson brackets", "pi", &pp);
    let n = base.len();
    let g = |i: usize| Element::generator(base, i);
    let mut jacobi_ok = true;
    for i in 0..n {
        for (j, l) in gen_pairs(n) {
            let (a, b, c) = (g(i), g(j), g(l));
            let s = sign(is_odd((base.degree(i) + k) * (base.degree(j) + k)));
            let lhs = pi.bracket(&a, &pi.bracket(&b, &c)?)?;
            let rhs = pi.bracket(&pi.bracket(&a, &b)?, &c)? + pi.bracket(&b, &pi.bracket(&a, &c)?)?.scale(&s);
            let r = lhs - rhs;
            jacobi_ok &= r.is_zero();
            let at = format!("({}, {}, {})", base.name(i), base.name(j), base.name(l));
            rep.residual("Jacobi of the derived bracket", "graded Jacobi identity", at, &r);
        }
    }
    let agree = jacobi_ok == pp.is_zero();
    if k % 2 == 0 {
        rep.flag("[pi,pi]_k and Jacobi verdicts agree", "differential equation for Poisson brackets", "pi", agree, if agree { "agree" } else { "disagree" });
    } else {
        rep.note(format!(
            "odd k = {k}: [pi,pi]_k {} and Jacobi {} (measured, not asserted)",
            if pp.is_zero() { "vanishes" } else { "does not vanish" },
            if jacobi_ok { "holds" } else { "fails" }
        ));
    }
    Ok(rep)
}

/// The Lie derivative `[Q, .]` on vector fields against the sharp map on
/// 1-forms, and the direct compatibility of `Q` with the bracket. Both
/// verdicts are reported together with whether they agree.
pub fn check_pq(q: &Derivation, pi: &Bivector) -> Result<VerificationReport> {
    let alg = pi.alg();
    let base = alg.base();
    if !same_table(q.table(), base) {
        return Err(Error::TableMismatch);
    }
    let k = alg.k;
    let n = base.len();
    let w = WeilAlgebra::new(base)?;
    let lq = w.lie(q)?;
    let mut rep = VerificationReport::new("PQ compatibility");
    let mut sharp_ok = true;
    let mut probe = |form: Element, at: String, rep: &mut VerificationReport| -> Result<()> {
        let x = alg.to_vector_field(&pi.sharp(&w, &form)?)?;
        let lhs = alg.to_vector_field(&pi.sharp(&w, &lq.apply(&form))?)?;
        let rhs = q.commutator(&x);
        let r: Vec<Element> = (0..n).map(|g| lhs.image(g) + rhs.image(g)).collect();
        sharp_ok &= r.iter().all(Element::is_zero);
        rep.residual_vec("pi# o L_Q = -L_Q o pi#", "sharp anti-morphism of DG modules", at, &r);
        Ok(())
    };
    for j in 0..n {
        probe(Element::generator(w.table(), w.d_gen(j)), format!("d{}", base.name(j)), &mut rep)?;
    }
    for (i, j) in gen_pairs(n) {
        let form = &Element::generator(w.table(), i) * &Element::generator(w.table(), w.d_gen(j));
        probe(form, format!("{} d{}", base.name(i), base.name(j)), &mut rep)?;
    }
    let mut direct_ok = true;
    for (i, j) in gen_pairs(n) {
        let (a, b) = (Element::generator(base, i), Element::generator(base, j));
        let s = sign(is_odd(base.degree(i) + k));
        let r = q.apply(&pi.bracket(&a, &b)?) - pi.bracket(&q.apply(&a), &b)? - pi.bracket(&a, &q.apply(&b))?.scale(&s);
        direct_ok &= r.is_zero();
        rep.residual("Q{a,b} = {Qa,b} + (-1)^(|a|+k){a,Qb}", "compatibility of Q and the bracket", format!("({}, {})", base.name(i), base.name(j)), &r);
    }
    let agree = sharp_ok == direct_ok;
    rep.flag("sharp and direct verdicts agree", "sharp anti-morphism of DG modules", "all", agree, if agree { "agree" } else { "disagree" });
    Ok(rep)
}

/// Both differentials of the Poisson-Weil double complex and the sharp map
/// from the Weil algebra.
pub fn poisson_weil_check(q: &Derivation, pi: &Bivector) -> Result<VerificationReport> {
    let alg = pi.alg();
    let base = alg.base();
    if !same_table(q.table(), base) {
        return Err(Error::TableMismatch);
    }
    let k = alg.k;
    let t = alg.table();
    let mut rep = VerificationReport::new("Poisson-Weil bicomplex");
    let qhat = alg.from_vector_field(q)?;
    let lq = alg.bracket_derivation(&qhat)?;
    let lq = if qhat.is_zero() { Derivation::zero(t, 1) } else { lq };
    let dpi = if pi.element().is_zero() { Derivation::zero(t, 1) } else { alg.bracket_derivation(pi.element())? };
    let sdpi = dpi.scale(&sign(is_odd(k - 1)));
    let delta = sdpi.add(&lq)?;
    let (dpi2, lq2, delta2) = (dpi.square_on_generators(), lq.square_on_generators(), delta.square_on_generators());
    let mixed = lq.commutator(&sdpi);
    for g in 0..t.len() {
        let at = t.name(g).to_string();
        rep.residual("d_pi^2 = 0", "Poisson-Weil double complex", at.clone(), &dpi2[g]);
        rep.residual("L_Q^2 = 0", "Poisson-Weil double complex", at.clone(), &lq2[g]);
        rep.residual("[L_Q, (-1)^(k-1) d_pi] = 0", "Poisson-Weil double complex", at.clone(), mixed.image(g));
        rep.residual("delta^2 = 0", "Poisson-Weil double complex", at, &delta2[g]);
    }
    let w = WeilAlgebra::new(base)?;
    let d = w.de_rham();
    let wl = w.lie(q)?;
    let wt = w.table();
    let mut forms: Vec<Element> = (0..wt.len()).map(|g| Element::generator(wt, g)).collect();
    for g in 0..wt.len() {
        for h in g..wt.len() {
            let f = &Element::generator(wt, g) * &Element::generator(wt, h);
            if !f.is_zero() {
                forms.push(f);
            }
        }
    }
    for f in &forms {
        let at = f.to_string();
        let img = pi.sharp(&w, f)?;
        let r = pi.sharp(&w, &d.apply(f))? + sdpi.apply(&img);
        rep.residual("pi# o d = -(-1)^(k-1) d_pi o pi#", "sharp anti-morphism of double complexes", at.clone(), &r);
        let r = pi.sharp(&w, &wl.apply(f))? + lq.apply(&img);
        rep.residual("pi# o L_Q = -L_Q o pi#", "sharp anti-morphism of double complexes", at, &r);
    }
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct HomotopyClassification {
    pub label: String,
    /// Conjugate counts present in `Theta`.
    pub components: Vec<usize>,
    pub report: VerificationReport,
}

/// Split `Theta` by conjugate count and check `[Theta, Theta]_k = 0`
/// component by component.
pub fn homotopy_classify(alg: &MultivectorAlgebra, theta: &Element) -> Result<HomotopyClassification> {
    let theta = alg.lift(theta)?;
    let k = alg.k;
    if let Some(d) = homogeneous(&theta, "Theta")? {
        if d != 2 - k {
            return Err(Error::Degree(format!("Theta must have degree {}, got {d}", 2 - k)));
        }
    }
    let counts: Vec<usize> = alg.counts(&theta).into_iter().collect();
    let parts: Vec<Element> = counts.iter().map(|&c| alg.component(&theta, c)).collect();
    let set: BTreeSet<usize> = counts.iter().copied().collect();
    let sub = |allowed: &[usize]| set.iter().all(|c| allowed.contains(c));
    let label = if set.is_empty() {
        "trivial"
    } else if sub(&[1]) {
        "Q-manifold"
    } else if sub(&[2]) {
        "P_k-manifold"
    } else if sub(&[1, 2]) {
        "PQ-manifold"
    } else if sub(&[0, 1, 2]) {
        "quasi-Lie bialgebroid"
    } else if sub(&[1, 2, 3]) {
        "Lie quasi-bialgebroid"
    } else {
        "homotopy Poisson"
    };
    let mut rep = VerificationReport::new(format!("homotopy Poisson structure ({label})"));
    let top = counts.iter().max().copied().unwrap_or(0);
    for j in 1..=2 * top {
        let mut sum = Element::zero(alg.table());
        let mut names = Vec::new();
        for (a, &p) in counts.iter().enumerate() {
            for (b, &q) in counts.iter().enumerate() {
                if p + q == j && p <= q {
                    let br = alg.schouten(&parts[a], &parts[b])?;
                    if p == q {
                        sum += br;
                        names.push(format!("[T{p},T{q}]"));
                    } else {
                        sum += br.scale(&int(2));
                        names.push(format!("2[T{p},T{q}]"));
                    }
                }
            }
        }
        if names.is_empty() {
            continue;
        }
        let identity = format!("{} = 0", names.join(" + "));
        rep.residual(&identity, "[Theta,Theta]_k = 0 by conjugate count", format!("p+q = {j}"), &sum);
    }
    Ok(HomotopyClassification { label: label.to_string(), components: counts, report: rep })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationMode {
    Infinitesimal,
    Full,
}

/// Deformation `Theta' = Lambda + X` of the PQ pair `(Q, pi)`.
pub fn deformation_check(q: &Derivation, pi: &Bivector, theta: &Element, mode: DeformationMode) -> Result<VerificationReport> {
    let alg = pi.alg();
    let theta = alg.lift(theta)?;
    let k = alg.k;
    if theta.terms().any(|(m, _)| !matches!(alg.conj_count(m), 1 | 2)) {
        return Err(Error::Degree("deformation must have conjugate counts 1 and 2 only".into()));
    }
    if let Some(d) = homogeneous(&theta, "deformation")? {
        if d != 2 - k {
            return Err(Error::Degree(format!("deformation must have degree {}, got {d}", 2 - k)));
        }
    }
    let x = alg.component(&theta, 1);
    let lam = alg.component(&theta, 2);
    let qhat = alg.from_vector_field(q)?;
    let p = pi.element();
    let br = |a: &Element, b: &Element| alg.schouten(a, b);
    let half = crate::algebra::rat(1, 2);
    let mut e1 = br(&qhat, &x)?;
    let mut e2 = br(p, &lam)?;
    let mut e3 = br(p, &x)? + br(&qhat, &lam)?;
    let full = mode == DeformationMode::Full;
    if full {
        e1 += br(&x, &x)?.scale(&half);
        e2 += br(&lam, &lam)?.scale(&half);
        e3 += br(&x, &lam)?;
    }
    let (name, anchor) = if full {
        ("Maurer-Cartan", "deformations as Maurer-Cartan elements")
    } else {
        ("cocycle", "infinitesimal deformations")
    };
    let mut rep = VerificationReport::new(format!("deformation ({name})"));
    let ids: [&str; 3] = if full {
        ["L_Q X + 1/2 [X,X] = 0", "d_pi Lambda + 1/2 [Lambda,Lambda] = 0", "d_pi X + L_Q Lambda + [X,Lambda] = 0"]
    } else {
        ["L_Q X = 0", "d_pi Lambda = 0", "d_pi X + L_Q Lambda = 0"]
    };
    for (id, r) in ids.iter().zip([e1, e2, e3]) {
        rep.residual(id, anchor, "Theta'", &r);
    }
    Ok(rep)
}

/// `[Q + pi, eta]_k` for a vector field `eta`: a trivial infinitesimal
/// deformation.
pub fn deformation_coboundary(q: &Derivation, pi: &Bivector, eta: &Element) -> Result<Element> {
    let alg = pi.alg();
    let theta = alg.from_vector_field(q)? + pi.element();
    alg.schouten(&theta, eta)
}
