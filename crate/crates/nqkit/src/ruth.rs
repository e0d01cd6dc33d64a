//! Representations up to homotopy as DG-modules `C(M) (x) Gamma(E)`.
//!
//! A module is stored by its matrix `theta`: `D(e_r) = sum_s theta[r][s] e_s`,
//! extended by `D(xi e) = Q(xi) e + (-1)^{|xi|} xi D(e)`. Coefficients always
//! sit to the left of the frame. For a split Lie 2-algebroid the components
//! of a 3-term representation are the pieces of `theta` sorted by how many
//! `tau` and `b` generators they contain.

use num_traits::One;

use crate::algebra::{is_odd, same_table, sign, Element, Monomial, Scalar, Table};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::lie2::{increasing, BasicData, LinearConnection, Sigma, SplitLie2Data};
use crate::linalg::solve_elements;
use crate::nq::{evaluate, monomial_basis, Section};
use crate::report::VerificationReport;
use crate::vops::{self, Vector};

pub type Mat = Vec<Vec<Element>>;

fn zero_mat(t: &Table, n: usize) -> Mat {
    vec![vops::zero(t, n); n]
}

/// `sum (-1)^{|m|} c m`: the parity operator.
pub fn parity(e: &Element) -> Element {
    let t = e.table();
    Element::from_terms(t, e.terms().map(|(m, c)| (m.clone(), if is_odd(m.degree(t)) { -c.clone() } else { c.clone() })))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgModule {
    q: Derivation,
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
    pub theta: Mat,
}

/// A degree-one operator with the Leibniz rule but no flatness requirement.
pub type ConnectionUpToHomotopy = DgModule;

impl DgModule {
    pub fn new(q: &Derivation, names: Vec<String>, degrees: Vec<i32>, theta: Mat) -> Result<Self> {
        let n = degrees.len();
        if names.len() != n || theta.len() != n || theta.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("module operator must be {n}x{n}")));
        }
        for r in 0..n {
            for s in 0..n {
                let e = &theta[r][s];
                if !same_table(e.table(), q.table()) {
                    return Err(Error::TableMismatch);
                }
                let want = q.degree() + degrees[r] - degrees[s];
                if !e.degree_of().fits(want) {
                    return Err(Error::Degree(format!("entry ({}, {}) must have degree {want}, got `{e}`", names[r], names[s])));
                }
            }
        }
        Ok(DgModule { q: q.clone(), names, degrees, theta })
    }

    pub fn q(&self) -> &Derivation {
        &self.q
    }

    pub fn table(&self) -> &Table {
        self.q.table()
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn frame(&self, r: usize) -> Vector {
        vops::unit(self.table(), self.rank(), r)
    }

    /// `D` on a module element given by its coefficients.
    pub fn apply(&self, v: &[Element]) -> Vector {
        let mut out: Vector = v.iter().map(|c| self.q.apply(c)).collect();
        for (r, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pc = parity(c);
            for (s, th) in self.theta[r].iter().enumerate() {
                if !th.is_zero() {
                    out[s] += &pc * th;
                }
            }
        }
        out
    }

    /// Matrix of `D^2`, which is linear over the functions.
    pub fn curvature(&self) -> Mat {
        (0..self.rank()).map(|r| self.apply(&self.theta[r])).collect()
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().iter().all(|r| vops::is_zero(r))
    }

    /// `D^2(f e_r) - f D^2(e_r)` for every generator `f` and frame.
    pub fn curvature_linearity(&self) -> VerificationReport {
        let mut rep = VerificationReport::new("D^2 is linear");
        let t = self.table();
        let r2 = self.curvature();
        for g in 0..t.len() {
            let f = Element::generator(t, g);
            for r in 0..self.rank() {
                let fe = vops::scale(&f, &self.frame(r));
                let lhs = self.apply(&self.apply(&fe));
                let rhs = vops::scale(&f, &r2[r]);
                rep.residual_vec("D^2(f e) = f D^2(e)", "curvature is tensorial", format!("({}, {})", t.name(g), self.names[r]), &vops::sub(&lhs, &rhs));
            }
        }
        rep
    }

    /// The dual module on `E*` (frames `e^r`, degrees `-d_r`), from
    /// `Q<xi, xi'> = <D*xi, xi'> + (-1)^{|xi|} <xi, D xi'>` with the pairing
    /// `<f e^r, g e_s> = (-1)^{|e^r||g|} f g delta_rs`. Then
    /// `theta*_rs = -(-1)^{|e^r|(1 + |theta_sr|)} theta_sr`.
    pub fn dual(&self) -> DgModule {
        let n = self.rank();
        let degrees: Vec<i32> = self.degrees.iter().map(|d| -d).collect();
        let mut theta = zero_mat(self.table(), n);
        for r in 0..n {
            for s in 0..n {
                let th = &self.theta[s][r];
                if th.is_zero() {
                    continue;
                }
                let k = self.q.degree() + self.degrees[s] - self.degrees[r];
                theta[r][s] = th.scale(&sign(!(is_odd(degrees[r]) && !is_odd(k))));
            }
        }
        let names = self.names.iter().map(|s| format!("{s}*")).collect();
        DgModule { q: self.q.clone(), names, degrees, theta }
    }
}

/// Matrix product of function-valued matrices, left factor first.
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let t = a[0][0].table().clone();
    let mut out = zero_mat(&t, n);
    for r in 0..n {
        for k in 0..n {
            if a[r][k].is_zero() {
                continue;
            }
            for s in 0..n {
                if !b[k][s].is_zero() {
                    out[r][s] += &a[r][k] * &b[k][s];
                }
            }
        }
    }
    out
}

/// Composition of function-linear endomorphisms of homogeneous degrees,
/// `(A o B)(e_r) = A(sum B_rs e_s) = sum (-1)^{|A||B_rs|} B_rs A_st e_t`.
pub fn compose(a: &Mat, deg_a: i32, b: &Mat) -> Mat {
    let n = a.len();
    let t = a[0][0].table().clone();
    let mut out = zero_mat(&t, n);
    for r in 0..n {
        for k in 0..n {
            let brk = &b[r][k];
            if brk.is_zero() {
                continue;
            }
            let brk = if is_odd(deg_a) { parity(brk) } else { brk.clone() };
            for s in 0..n {
                if !a[k][s].is_zero() {
                    out[r][s] += &brk * &a[k][s];
                }
            }
        }
    }
    out
}

/// `[A, B] = A o B - (-1)^{|A||B|} B o A`.
pub fn graded_commutator(a: &Mat, deg_a: i32, b: &Mat, deg_b: i32) -> Mat {
    let ab = compose(a, deg_a, b);
    let ba = compose(b, deg_b, a);
    let s = sign(is_odd(deg_a) && is_odd(deg_b));
    ab.iter().zip(&ba).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - &q.scale(&s)).collect()).collect()
}

/// Graded trace `sum_r (-1)^{d_r} Phi_rr`.
pub fn gtr(phi: &Mat, degrees: &[i32]) -> Element {
    let t = phi[0][0].table().clone();
    let mut out = Element::zero(&t);
    for (r, d) in degrees.iter().enumerate() {
        out += phi[r][r].scale(&sign(is_odd(*d)));
    }
    out
}

/// `Q(zeta) = eta` over the monomials of degree `|eta| - 1` with base
/// degree at most `poly_cap`. `Ok(None)` means no primitive within the cap.
pub fn is_exact(q: &Derivation, eta: &Element, poly_cap: usize) -> Result<Option<Element>> {
    let qe = q.apply(eta);
    if !qe.is_zero() {
        return Err(Error::Precondition(format!("Q(eta) = {qe} is not zero")));
    }
    if eta.is_zero() {
        return Ok(Some(Element::zero(q.table())));
    }
    let d = eta.degree().ok_or_else(|| Error::Degree(format!("`{eta}` is not homogeneous")))?;
    let t = q.table();
    let basis = monomial_basis(t, d - q.degree(), poly_cap)?;
    let cols: Vec<Element> = basis.iter().map(|m| q.apply(&Element::monomial(t, m.clone(), Scalar::one()))).collect();
    Ok(solve_elements(&cols, eta).map(|c| {
        let mut z = Element::zero(t);
        for (m, c) in basis.iter().zip(c) {
            z.add_term(m.clone(), c);
        }
        z
    }))
}

/// The 2-term module `E_xi`: frames `e0` (degree 0) and `e1` (degree `k-1`)
/// with `D(e1) = xi e0`.
pub fn qclosed_module(q: &Derivation, xi: &Element) -> Result<DgModule> {
    let qx = q.apply(xi);
    if !qx.is_zero() {
        return Err(Error::Precondition(format!("Q(xi) = {qx} is not zero")));
    }
    let k = match xi.degree() {
        Some(k) => k,
        None if xi.is_zero() => 0,
        None => return Err(Error::Degree(format!("`{xi}` is not homogeneous"))),
    };
    let t = q.table();
    let mut theta = zero_mat(t, 2);
    theta[1][0] = xi.clone();
    DgModule::new(q, vec!["e0".into(), "e1".into()], vec![0, k - 1], theta)
}

/// `E_xi` with its square checked, and for `xi' = xi - Q(xi'')` the
/// isomorphism `(z1, z2) -> (z1 + z2 xi'', z2)` together with its check.
pub fn qclosed_rep(q: &Derivation, xi: &Element, primitive: Option<&Element>) -> Result<(DgModule, VerificationReport, Option<RepMorphism>)> {
    let m = qclosed_module(q, xi)?;
    let mut rep = VerificationReport::new("Q-closed representation");
    for r in 0..2 {
        rep.residual_vec("D_xi^2 = 0", "square of D_xi", m.names[r].clone(), &m.curvature()[r]);
    }
    let mut iso = None;
    if let Some(x2) = primitive {
        let xi2 = xi - &q.apply(x2);
        let target = qclosed_module(q, &xi2)?;
        let t = q.table();
        let mut mat = vec![vec![Element::one(t), Element::zero(t)], vec![x2.clone(), Element::one(t)]];
        mat[0][1] = Element::zero(t);
        let mu = RepMorphism { matrix: mat, twist: None };
        rep.extend(check_module_morphism(&m, &target, &mu));
        iso = Some(mu);
    }
    Ok((m, rep, iso))
}

/// A degree-0 map `Phi(xi e_r) = F(xi) sum_s matrix[r][s] f_s`; `twist`
/// holds the images of the generators under `F` (identity when absent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMorphism {
    pub matrix: Mat,
    pub twist: Option<Vec<Element>>,
}

impl RepMorphism {
    pub fn identity(t: &Table, n: usize) -> Self {
        RepMorphism { matrix: (0..n).map(|r| vops::unit(t, n, r)).collect(), twist: None }
    }

    fn map_fn(&self, e: &Element) -> Element {
        match &self.twist {
            None => e.clone(),
            Some(img) => e.substitute(e.table(), &|g| img[g].clone()),
        }
    }

    pub fn apply(&self, v: &[Element]) -> Vector {
        let t = self.matrix[0][0].table().clone();
        let n = self.matrix[0].len();
        let mut out = vops::zero(&t, n);
        for (r, c) in v.iter().enumerate() {
            if !c.is_zero() {
                vops::add_assign(&mut out, &vops::scale(&self.map_fn(c), &self.matrix[r]));
            }
        }
        out
    }

    /// `other o self`.
    pub fn then(&self, other: &RepMorphism) -> RepMorphism {
        let matrix = self.matrix.iter().map(|row| other.apply(row)).collect();
        let twist = match (&self.twist, &other.twist) {
            (None, None) => None,
            _ => {
                let t = self.matrix[0][0].table().clone();
                Some((0..t.len()).map(|g| other.map_fn(&self.map_fn(&Element::generator(&t, g)))).collect())
            }
        };
        RepMorphism { matrix, twist }
    }

    pub fn is_identity(&self) -> bool {
        let t = self.matrix[0][0].table().clone();
        let n = self.matrix.len();
        let twist_ok = self.twist.as_ref().is_none_or(|img| img.iter().enumerate().all(|(g, e)| *e == Element::generator(&t, g)));
        twist_ok && self.matrix == RepMorphism::identity(&t, n).matrix
    }
}

/// `D_F(Phi(e_r)) - Phi(D_E(e_r))` for every frame of `E`.
pub fn check_module_morphism(a: &DgModule, b: &DgModule, mu: &RepMorphism) -> VerificationReport {
    let mut rep = VerificationReport::new("morphism");
    for r in 0..a.rank() {
        let lhs = b.apply(&mu.apply(&a.frame(r)));
        let rhs = mu.apply(&a.apply(&a.frame(r)));
        rep.residual_vec("D o mu = mu o D", "chain map", a.names[r].clone(), &vops::sub(&lhs, &rhs));
    }
    rep
}

/// A 3-term representation `E0[2] + E1[1] + E2[0]` in components. Frames
/// of all levels share one index; `X[r][s]` is the `e_s` coefficient of `X(e_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep3Data {
    pub names: Vec<String>,
    pub levels: Vec<usize>,
    pub partial: Mat,
    /// Per `Q` frame.
    pub conn: Vec<Mat>,
    pub omega2: Vec<Vec<Mat>>,
    pub omega3: Vec<Vec<Vec<Mat>>>,
    /// Per `B` frame `b^m`, i.e. evaluated on `beta_m`.
    pub phi0: Vec<Mat>,
    /// `phi1[m][a]`, evaluated on `(beta_m, q_a)`.
    pub phi1: Vec<Vec<Mat>>,
}

impl Rep3Data {
    pub fn zero(lie2: &SplitLie2Data, names: Vec<String>, levels: Vec<usize>) -> Result<Self> {
        if names.len() != levels.len() || levels.iter().any(|&l| l > 2) {
            return Err(Error::Input("every frame needs a level 0, 1 or 2".into()));
        }
        let t = lie2.table();
        let n = names.len();
        let (rq, rb) = (lie2.rank_q(), lie2.rank_b());
        let z = zero_mat(t, n);
        Ok(Rep3Data {
            names,
            levels,
            partial: z.clone(),
            conn: vec![z.clone(); rq],
            omega2: vec![vec![z.clone(); rq]; rq],
            omega3: vec![vec![vec![z.clone(); rq]; rq]; rq],
            phi0: vec![z.clone(); rb],
            phi1: vec![vec![z; rq]; rb],
        })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, r: usize) -> i32 {
        self.levels[r] as i32 - 2
    }

    pub fn degrees(&self) -> Vec<i32> {
        (0..self.rank()).map(|r| self.degree(r)).collect()
    }

    fn check_block(&self, m: &Mat, shift: i32, what: &str) -> Result<()> {
        for r in 0..self.rank() {
            for s in 0..self.rank() {
                let e = &m[r][s];
                if !e.is_zero() && (self.degree(s) - self.degree(r) != shift || !e.is_base()) {
                    return Err(Error::Input(format!("{what}: entry ({}, {}) is not allowed: `{e}`", self.names[r], self.names[s])));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self, lie2: &SplitLie2Data) -> Result<()> {
        let (rq, rb, n) = (lie2.rank_q(), lie2.rank_b(), self.rank());
        let sq = |m: &Mat| m.len() == n && m.iter().all(|r| r.len() == n);
        let ok = sq(&self.partial)
            && self.conn.len() == rq
            && self.conn.iter().all(sq)
            && self.omega2.len() == rq
            && self.omega2.iter().all(|r| r.len() == rq && r.iter().all(sq))
            && self.omega3.len() == rq
            && self.omega3.iter().all(|r| r.len() == rq && r.iter().all(|c| c.len() == rq && c.iter().all(sq)))
            && self.phi0.len() == rb
            && self.phi0.iter().all(sq)
            && self.phi1.len() == rb
            && self.phi1.iter().all(|r| r.len() == rq && r.iter().all(sq));
        if !ok {
            return Err(Error::Input("representation components do not match the bundles".into()));
        }
        self.check_block(&self.partial, 1, "partial")?;
        for m in &self.conn {
            self.check_block(m, 0, "connection")?;
        }
        for i in 0..rq {
            for j in 0..rq {
                self.check_block(&self.omega2[i][j], -1, "omega2")?;
                if self.omega2[i][j] != neg_mat(&self.omega2[j][i]) {
                    return Err(Error::Input("omega2 must be alternating".into()));
                }
                for k in 0..rq {
                    self.check_block(&self.omega3[i][j][k], -2, "omega3")?;
                    if self.omega3[i][j][k] != neg_mat(&self.omega3[j][i][k]) || self.omega3[i][j][k] != neg_mat(&self.omega3[i][k][j]) {
                        return Err(Error::Input("omega3 must be alternating".into()));
                    }
                }
            }
        }
        for m in 0..rb {
            self.check_block(&self.phi0[m], -1, "phi0")?;
            for a in 0..rq {
                self.check_block(&self.phi1[m][a], -2, "phi1")?;
            }
        }
        Ok(())
    }

    /// Sets `omega2(q_i, q_j)` and its alternate.
    pub fn set_omega2(&mut self, i: usize, j: usize, m: Mat) {
        self.omega2[j][i] = neg_mat(&m);
        self.omega2[i][j] = m;
    }

    pub fn set_omega3(&mut self, i: usize, j: usize, k: usize, m: Mat) {
        let n = neg_mat(&m);
        self.omega3[j][i][k] = n.clone();
        self.omega3[i][k][j] = n.clone();
        self.omega3[k][j][i] = n;
        self.omega3[j][k][i] = m.clone();
        self.omega3[k][i][j] = m.clone();
        self.omega3[i][j][k] = m;
    }

    /// The module operator of these components over `lie2`.
    pub fn module(&self, lie2: &SplitLie2Data) -> Result<DgModule> {
        self.validate(lie2)?;
        let t = lie2.table();
        let (rq, rb, n) = (lie2.rank_q(), lie2.rank_b(), self.rank());
        let tau = |a: usize| Element::generator(t, lie2.tau(a));
        let b = |m: usize| Element::generator(t, lie2.b(m));
        let mono = |idx: &[usize]| lie2.dull().form_monomial(idx);
        let mut theta = self.partial.clone();
        let mut add = |coef: &Element, m: &Mat| {
            for r in 0..n {
                for s in 0..n {
                    if !m[r][s].is_zero() {
                        theta[r][s] += coef * &m[r][s];
                    }
                }
            }
        };
        for a in 0..rq {
            add(&tau(a), &self.conn[a]);
        }
        for idx in increasing(rq, 2) {
            add(&mono(&idx), &self.omega2[idx[0]][idx[1]]);
        }
        for idx in increasing(rq, 3) {
            add(&mono(&idx), &self.omega3[idx[0]][idx[1]][idx[2]]);
        }
        for m in 0..rb {
            add(&b(m), &self.phi0[m]);
            for a in 0..rq {
                add(&(&tau(a) * &b(m)), &self.phi1[m][a]);
            }
        }
        DgModule::new(&q_of(lie2)?, self.names.clone(), self.degrees(), theta)
    }

    /// Reads the components back from a module operator over `lie2`.
    pub fn from_module(lie2: &SplitLie2Data, d: &DgModule, levels: Vec<usize>) -> Result<Self> {
        let mut rep = Rep3Data::zero(lie2, d.names.clone(), levels)?;
        let n = rep.rank();
        if d.rank() != n || d.degrees != rep.degrees() {
            return Err(Error::Input("module degrees do not match the levels".into()));
        }
        let (rq, rb) = (lie2.rank_q(), lie2.rank_b());
        let m = lie2.manifold();
        let q = |a: usize| Section::frame(m, a);
        let beta = |k: usize| Section::frame(m, rq + k);
        for r in 0..n {
            for s in 0..n {
                let th = &d.theta[r][s];
                if th.is_zero() {
                    continue;
                }
                let part = |p: usize, k: usize| split_component(lie2, th, p, k);
                let ev = |p: usize, k: usize, secs: &[Section]| evaluate(m, &part(p, k), secs);
                rep.partial[r][s] = part(0, 0);
                for a in 0..rq {
                    rep.conn[a][r][s] = ev(1, 0, &[q(a)])?;
                    for c in 0..rq {
                        rep.omega2[a][c][r][s] = ev(2, 0, &[q(a), q(c)])?;
                        for e in 0..rq {
                            rep.omega3[a][c][e][r][s] = ev(3, 0, &[q(a), q(c), q(e)])?;
                        }
                    }
                }
                for k in 0..rb {
                    rep.phi0[k][r][s] = ev(0, 1, &[beta(k)])?;
                    for a in 0..rq {
                        rep.phi1[k][a][r][s] = ev(1, 1, &[q(a), beta(k)])?;
                    }
                }
            }
        }
        if rep.module(lie2)?.theta != d.theta {
            return Err(Error::Input("module operator has components outside a 3-term representation".into()));
        }
        Ok(rep)
    }
}

fn neg_mat(m: &Mat) -> Mat {
    m.iter().map(|r| vops::neg(r)).collect()
}

fn q_of(lie2: &SplitLie2Data) -> Result<Derivation> {
    crate::lie2::q_from_data(lie2)
}

/// Terms of `e` with exactly `p` factors `tau` and `k` factors `b`.
fn split_component(lie2: &SplitLie2Data, e: &Element, p: usize, k: usize) -> Element {
    let t = lie2.table().clone();
    e.filter(|mono: &Monomial| {
        let (mut np, mut nk) = (0, 0);
        for g in mono.factors() {
            match t.degree(g) {
                1 => np += 1,
                2 => nk += 1,
                _ => {}
            }
        }
        np == p && nk == k
    })
}

/// Labels of the components of `D^2` by number of `tau` and `b` factors.
fn equation_label(p: usize, k: usize) -> &'static str {
    match (p, k) {
        (0, 0) => "d o d = 0",
        (1, 0) => "nabla commutes with d",
        (2, 0) => "d o omega2 + d_nabla^2 + omega2 o d = 0",
        (0, 1) => "d o phi0 + d_B o d_nabla + phi0 o d = 0",
        (3, 0) => "[d, omega3] + [d_nabla, omega2] = <omega, phi0>",
        (1, 1) => "d_nabla phi0 + [d, phi1] + d_B o omega2 = 0",
        (4, 0) => "[d_nabla, omega3] + omega2 o omega2 = <omega, phi1>",
        (2, 1) => "d_nabla phi1 + [omega2, phi0] + d_B o omega3 = 0",
        (0, 2) => "phi0 o phi0 + d_B o phi1 = 0",
        _ => "higher component",
    }
}

const COMPONENTS: [(usize, usize); 9] = [(0, 0), (1, 0), (2, 0), (0, 1), (3, 0), (1, 1), (4, 0), (2, 1), (0, 2)];

/// The structure equations of a 3-term representation: every component of
/// `D^2` on every frame.
pub fn check_rep3(lie2: &SplitLie2Data, rep: &Rep3Data) -> Result<VerificationReport> {
    let d = rep.module(lie2)?;
    let r2 = d.curvature();
    let mut out = VerificationReport::new("3-term representation");
    for r in 0..rep.rank() {
        for &(p, k) in &COMPONENTS {
            let v: Vector = r2[r].iter().map(|e| split_component(lie2, e, p, k)).collect();
            out.residual_vec(equation_label(p, k), &format!("component tau^{p} b^{k}"), rep.names[r].clone(), &v);
        }
    }
    Ok(out)
}

/// Components of `D_F o mu - mu o D_E` by number of `tau` and `b` factors.
pub fn check_morphism(lie2: &SplitLie2Data, a: &Rep3Data, b: &Rep3Data, mu: &RepMorphism) -> Result<VerificationReport> {
    check_morphism_between((lie2, a), (lie2, b), mu)
}

/// As `check_morphism`, for representations over two splittings of one
/// manifold; a twisted `mu` then carries functions across.
pub fn check_morphism_between(a: (&SplitLie2Data, &Rep3Data), b: (&SplitLie2Data, &Rep3Data), mu: &RepMorphism) -> Result<VerificationReport> {
    if !same_table(a.0.table(), b.0.table()) {
        return Err(Error::TableMismatch);
    }
    let (da, db) = (a.1.module(a.0)?, b.1.module(b.0)?);
    if mu.matrix.len() != da.rank() || mu.matrix.iter().any(|r| r.len() != db.rank()) {
        return Err(Error::Input("morphism shape does not match the representations".into()));
    }
    let mut out = VerificationReport::new("morphism of 3-term representations");
    for r in 0..da.rank() {
        let lhs = db.apply(&mu.apply(&da.frame(r)));
        let rhs = mu.apply(&da.apply(&da.frame(r)));
        let res = vops::sub(&lhs, &rhs);
        for &(p, k) in &COMPONENTS[..8] {
            let v: Vector = res.iter().map(|e| split_component(a.0, e, p, k)).collect();
            let label = match k {
                0 => "[d, mu_i] + [d_nabla, mu_{i-1}] + sum [omega_j, mu_k] = <omega, mu0b>",
                _ if p == 0 => "[d, mu0b] + [phi0, mu0] + d_B o mu1 = 0",
                _ => "d_nabla mu0b + [phi0, mu1] + [phi1, mu0] + d_B o mu2 = 0",
            };
            out.residual_vec(label, &format!("component tau^{p} b^{k}"), da.names[r].clone(), &v);
        }
    }
    Ok(out)
}

/// Components `(mu0, mu1[a], mu2[i][j], mu0b[m])` of a morphism's matrix.
pub type MorphismComponents = (Mat, Vec<Mat>, Vec<Vec<Mat>>, Vec<Mat>);

impl RepMorphism {
    pub fn components(&self, lie2: &SplitLie2Data) -> Result<MorphismComponents> {
        let m = lie2.manifold();
        let (rq, rb) = (lie2.rank_q(), lie2.rank_b());
        let q = |a: usize| Section::frame(m, a);
        let pick = |p: usize, k: usize, secs: &[Section]| -> Result<Mat> {
            self.matrix.iter().map(|row| row.iter().map(|e| evaluate(m, &split_component(lie2, e, p, k), secs)).collect()).collect()
        };
        let mu0 = pick(0, 0, &[])?;
        let mu1 = (0..rq).map(|a| pick(1, 0, &[q(a)])).collect::<Result<_>>()?;
        let mu2 = (0..rq).map(|i| (0..rq).map(|j| pick(2, 0, &[q(i), q(j)])).collect()).collect::<Result<_>>()?;
        let mu0b = (0..rb).map(|k| pick(0, 1, &[Section::frame(m, rq + k)])).collect::<Result<_>>()?;
        Ok((mu0, mu1, mu2, mu0b))
    }
}

/// Morphism from components: `mu0 + sum tau^a mu1[a] + sum tau^i tau^j mu2[i][j] + sum b^m mu0b[m]`.
pub fn morphism_from_components(lie2: &SplitLie2Data, mu0: &Mat, mu1: &[Mat], mu2: &[Vec<Mat>], mu0b: &[Mat], twist: Option<Vec<Element>>) -> RepMorphism {
    let t = lie2.table();
    let mut m = mu0.clone();
    let mut add = |c: &Element, x: &Mat| {
        for (row, xr) in m.iter_mut().zip(x) {
            for (e, v) in row.iter_mut().zip(xr) {
                if !v.is_zero() {
                    *e += c * v;
                }
            }
        }
    };
    for (a, x) in mu1.iter().enumerate() {
        add(&Element::generator(t, lie2.tau(a)), x);
    }
    for idx in increasing(lie2.rank_q(), 2) {
        add(&lie2.dull().form_monomial(&idx), &mu2[idx[0]][idx[1]]);
    }
    for (k, x) in mu0b.iter().enumerate() {
        add(&Element::generator(t, lie2.b(k)), x);
    }
    RepMorphism { matrix: m, twist }
}

/// A pair of `TM`-connections on `Q` and `B*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointConnections {
    pub on_q: LinearConnection,
    pub on_bdual: LinearConnection,
}

impl AdjointConnections {
    pub fn zero(lie2: &SplitLie2Data) -> Self {
        let m = lie2.manifold();
        AdjointConnections { on_q: LinearConnection::zero(m, lie2.rank_q()), on_bdual: LinearConnection::zero(m, lie2.rank_b()) }
    }

    pub fn validate(&self, lie2: &SplitLie2Data) -> Result<()> {
        self.on_q.validate(lie2.manifold(), lie2.rank_q())?;
        self.on_bdual.validate(lie2.manifold(), lie2.rank_b())
    }
}

/// Frame layout of the adjoint complex `B*[2] -> Q[1] -> TM[0]`.
pub struct AdjointFrames {
    pub rb: usize,
    pub rq: usize,
    pub nb: usize,
}

impl AdjointFrames {
    pub fn of(lie2: &SplitLie2Data) -> Self {
        AdjointFrames { rb: lie2.rank_b(), rq: lie2.rank_q(), nb: lie2.manifold().base_count() }
    }
    pub fn beta(&self, m: usize) -> usize {
        m
    }
    pub fn q(&self, a: usize) -> usize {
        self.rb + a
    }
    pub fn x(&self, s: usize) -> usize {
        self.rb + self.rq + s
    }
    pub fn len(&self) -> usize {
        self.rb + self.rq + self.nb
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn levels(&self) -> Vec<usize> {
        let mut v = vec![0; self.rb];
        v.extend(vec![1; self.rq]);
        v.extend(vec![2; self.nb]);
        v
    }
    pub fn names(&self, lie2: &SplitLie2Data) -> Vec<String> {
        let m = lie2.manifold();
        let mut v: Vec<String> = (0..self.rb).map(|k| format!("beta_{}", m.frame_name(self.rq + k))).collect();
        v.extend((0..self.rq).map(|a| m.frame_name(a).to_string()));
        v.extend(m.base_vars().iter().map(|x| format!("d/d{x}")));
        v
    }
}

struct Adj<'a> {
    d: &'a SplitLie2Data,
    c: &'a AdjointConnections,
}

impl Adj<'_> {
    fn m(&self) -> &crate::nq::SplitNManifold {
        self.d.manifold()
    }
    fn nq(&self, x: &[Element], q: &[Element]) -> Vector {
        self.c.on_q.apply(self.m(), x, q)
    }
    fn nb(&self, x: &[Element], b: &[Element]) -> Vector {
        self.c.on_bdual.apply(self.m(), x, b)
    }
    fn basic(&self) -> BasicData<'_> {
        BasicData { dull: self.d.dull(), nabla: &self.c.on_q }
    }
    /// `(nabla_X omega)(q1, q2, q3)`.
    fn nabla_omega(&self, x: &[Element], q1: &[Element], q2: &[Element], q3: &[Element]) -> Vector {
        let d = self.d;
        let mut v = self.nb(x, &d.omega(q1, q2, q3));
        v = vops::sub(&v, &d.omega(&self.nq(x, q1), q2, q3));
        v = vops::sub(&v, &d.omega(q1, &self.nq(x, q2), q3));
        vops::sub(&v, &d.omega(q1, q2, &self.nq(x, q3)))
    }
}

/// The adjoint representation of `lie2` for a choice of `TM`-connections.
pub fn adjoint_rep(lie2: &SplitLie2Data, conns: &AdjointConnections) -> Result<Rep3Data> {
    conns.validate(lie2)?;
    let f = AdjointFrames::of(lie2);
    let mut rep = Rep3Data::zero(lie2, f.names(lie2), f.levels())?;
    let t = lie2.table().clone();
    let (rq, rb, nb) = (f.rq, f.rb, f.nb);
    let adj = Adj { d: lie2, c: conns };
    let bas = adj.basic();
    let dull = lie2.dull();
    let q = |a: usize| lie2.q_frame(a);
    let be = |k: usize| lie2.b_frame(k);
    let x = |s: usize| vops::unit(&t, nb, s);
    let put_q = |row: &mut Vec<Element>, v: &[Element]| {
        for (a, e) in v.iter().enumerate() {
            row[f.q(a)] = e.clone();
        }
    };
    let put_b = |row: &mut Vec<Element>, v: &[Element]| {
        for (k, e) in v.iter().enumerate() {
            row[f.beta(k)] = e.clone();
        }
    };
    let put_x = |row: &mut Vec<Element>, v: &[Element]| {
        for (s, e) in v.iter().enumerate() {
            row[f.x(s)] = e.clone();
        }
    };
    // complex: -ell and rho
    for k in 0..rb {
        put_q(&mut rep.partial[f.beta(k)], &vops::neg(&lie2.ell(&be(k))));
    }
    for a in 0..rq {
        put_x(&mut rep.partial[f.q(a)], &dull.rho(&q(a)));
    }
    // connections: nabla* on B*, basic on Q and TM
    for a in 0..rq {
        for k in 0..rb {
            put_b(&mut rep.conn[a][f.beta(k)], &lie2.nabla_dual(&q(a), &be(k)));
        }
        for c in 0..rq {
            put_q(&mut rep.conn[a][f.q(c)], &bas.on_q(&q(a), &q(c)));
        }
        for s in 0..nb {
            put_x(&mut rep.conn[a][f.x(s)], &bas.on_tm(&q(a), &x(s)));
        }
    }
    // omega2(q1,q2) q3 = -omega(q1,q2,q3); omega2(q1,q2) X = -R_bas(q1,q2) X
    for idx in increasing(rq, 2) {
        let (i, j) = (idx[0], idx[1]);
        let mut m = zero_mat(&t, f.len());
        for c in 0..rq {
            put_b(&mut m[f.q(c)], &vops::neg(&lie2.omega(&q(i), &q(j), &q(c))));
        }
        for s in 0..nb {
            put_q(&mut m[f.x(s)], &vops::neg(&bas.curvature(&q(i), &q(j), &x(s))));
        }
        rep.set_omega2(i, j, m);
    }
    // omega3(q1,q2,q3) X = (nabla_X omega)(q1,q2,q3)
    for idx in increasing(rq, 3) {
        let mut m = zero_mat(&t, f.len());
        for s in 0..nb {
            put_b(&mut m[f.x(s)], &adj.nabla_omega(&x(s), &q(idx[0]), &q(idx[1]), &q(idx[2])));
        }
        rep.set_omega3(idx[0], idx[1], idx[2], m);
    }
    for k in 0..rb {
        let beta = be(k);
        // phi0(beta) X = ell(nabla_X beta) - nabla_X(ell beta); phi0(beta) q = nabla_{rho q} beta - nabla*_q beta
        for s in 0..nb {
            let v = vops::sub(&lie2.ell(&adj.nb(&x(s), &beta)), &adj.nq(&x(s), &lie2.ell(&beta)));
            put_q(&mut rep.phi0[k][f.x(s)], &v);
        }
        for a in 0..rq {
            let v = vops::sub(&adj.nb(&dull.rho(&q(a)), &beta), &lie2.nabla_dual(&q(a), &beta));
            put_b(&mut rep.phi0[k][f.q(a)], &v);
        }
        // phi1(beta, q) X = nabla_X nabla*_q beta - nabla*_q nabla_X beta - nabla*_{nabla_X q} beta + nabla_{bas_q X} beta
        for a in 0..rq {
            for s in 0..nb {
                let xs = x(s);
                let mut v = adj.nb(&xs, &lie2.nabla_dual(&q(a), &beta));
                v = vops::sub(&v, &lie2.nabla_dual(&q(a), &adj.nb(&xs, &beta)));
                v = vops::sub(&v, &lie2.nabla_dual(&adj.nq(&xs, &q(a)), &beta));
                v = vops::add(&v, &adj.nb(&bas.on_tm(&q(a), &xs), &beta));
                put_b(&mut rep.phi1[k][a][f.x(s)], &v);
            }
        }
    }
    Ok(rep)
}

/// The map `mu_nabla` on a frame of the adjoint complex: `beta -> beta^`,
/// `q -> q^`, `X -> nabla^{B*}_X + nabla^Q_X` acting through dual connections.
pub fn adjoint_module_map(lie2: &SplitLie2Data, conns: &AdjointConnections, r: usize) -> Result<Derivation> {
    let f = AdjointFrames::of(lie2);
    let m = lie2.manifold();
    let t = lie2.table();
    if r < f.rb + f.rq {
        let frame = if r < f.rb { f.rq + r } else { r - f.rb };
        return crate::nq::hat(m, &Section::frame(m, frame));
    }
    let s = r - f.rb - f.rq;
    let mut images = vec![Element::zero(t); t.len()];
    images[s] = Element::one(t);
    for a in 0..f.rq {
        let mut e = Element::zero(t);
        for c in 0..f.rq {
            e -= &conns.on_q.symbols[s][c][a] * &Element::generator(t, lie2.tau(c));
        }
        images[lie2.tau(a)] = e;
    }
    for n in 0..f.rb {
        let mut e = Element::zero(t);
        for k in 0..f.rb {
            e -= &conns.on_bdual.symbols[s][k][n] * &Element::generator(t, lie2.b(k));
        }
        images[lie2.b(n)] = e;
    }
    Derivation::new(t, 0, images)
}

/// `mu_nabla` on a module element.
pub fn adjoint_module_apply(lie2: &SplitLie2Data, conns: &AdjointConnections, v: &[Element], degree: i32) -> Result<Derivation> {
    let mut out = Derivation::zero(lie2.table(), degree);
    for (r, c) in v.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&adjoint_module_map(lie2, conns, r)?.left_mul(c)?)?;
        }
    }
    Ok(out)
}

/// `mu_nabla^{-1}` of a vector field on the graded manifold.
pub fn adjoint_module_inverse(lie2: &SplitLie2Data, conns: &AdjointConnections, y: &Derivation) -> Result<Vector> {
    let f = AdjointFrames::of(lie2);
    let t = lie2.table();
    let mut out = vops::zero(t, f.len());
    let mut rest = y.clone();
    for s in 0..f.nb {
        let c = y.image(s).clone();
        if !c.is_zero() {
            let part = adjoint_module_map(lie2, conns, f.x(s))?.left_mul(&c)?;
            rest = rest.add(&part.scale(&-Scalar::one()))?;
        }
        out[f.x(s)] = c;
    }
    for a in 0..f.rq {
        out[f.q(a)] = rest.image(lie2.tau(a)).clone();
    }
    for k in 0..f.rb {
        out[f.beta(k)] = rest.image(lie2.b(k)).clone();
    }
    Ok(out)
}

/// `D_ad = mu^{-1} o [Q, .] o mu` on frames.
pub fn adjoint_module_operator(lie2: &SplitLie2Data, conns: &AdjointConnections) -> Result<DgModule> {
    let f = AdjointFrames::of(lie2);
    let q = q_of(lie2)?;
    let mut theta = Vec::new();
    for r in 0..f.len() {
        let y = q.commutator(&adjoint_module_map(lie2, conns, r)?);
        theta.push(adjoint_module_inverse(lie2, conns, &y)?);
    }
    let levels = f.levels();
    DgModule::new(&q, f.names(lie2), levels.iter().map(|&l| l as i32 - 2).collect(), theta)
}

/// Compares the component formulas with `mu^{-1} [Q, mu(.)]` generator by generator.
pub fn check_adjoint_module_iso(lie2: &SplitLie2Data, conns: &AdjointConnections) -> Result<VerificationReport> {
    let rep = adjoint_rep(lie2, conns)?;
    let dm = rep.module(lie2)?;
    let q = dm.q().clone();
    let mut out = VerificationReport::new("adjoint module isomorphism");
    for r in 0..rep.rank() {
        let deg = rep.degree(r);
        let lhs = q.commutator(&adjoint_module_map(lie2, conns, r)?);
        let rhs = adjoint_module_apply(lie2, conns, &dm.apply(&dm.frame(r)), deg + 1)?;
        let diff: Vec<Element> = lhs.images().iter().zip(rhs.images()).map(|(a, b)| a - b).collect();
        out.residual_vec("L_Q mu(v) = mu(D_ad v)", "adjoint module vs adjoint representation", rep.names[r].clone(), &diff);
    }
    Ok(out)
}

/// Dual representation on `E2* [2] + E1* [1] + E0* [0]`.
pub fn dual_rep(lie2: &SplitLie2Data, rep: &Rep3Data) -> Result<Rep3Data> {
    let d = rep.module(lie2)?.dual();
    let n = rep.rank();
    // order frames by new level 0, 1, 2 (old level 2, 1, 0)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&r| (2 - rep.levels[r], r));
    let levels: Vec<usize> = order.iter().map(|&r| 2 - rep.levels[r]).collect();
    let theta: Mat = order.iter().map(|&r| order.iter().map(|&s| d.theta[r][s].clone()).collect()).collect();
    let names = order.iter().map(|&r| d.names[r].clone()).collect();
    // an even shift by -2 leaves the operator unchanged
    let degrees = levels.iter().map(|&l| l as i32 - 2).collect();
    let shifted = DgModule::new(d.q(), names, degrees, theta)?;
    Rep3Data::from_module(lie2, &shifted, levels)
}

/// Morphism between modules obtained by transporting frames through two
/// identifications with vector fields, `mu_b^{-1} o conj o mu_a`.
fn transported(a: (&SplitLie2Data, &AdjointConnections), b: (&SplitLie2Data, &AdjointConnections), conj: &dyn Fn(&Derivation) -> Derivation, twist: Option<Vec<Element>>) -> Result<RepMorphism> {
    let f = AdjointFrames::of(a.0);
    let mut matrix = Vec::new();
    for r in 0..f.len() {
        let y = conj(&adjoint_module_map(a.0, a.1, r)?);
        matrix.push(adjoint_module_inverse(b.0, b.1, &y)?);
    }
    Ok(RepMorphism { matrix, twist })
}

/// Conjugation `phi o X o phi^{-1}` of a derivation by an algebra automorphism.
fn conjugate(x: &Derivation, phi: &dyn Fn(&Element) -> Element, phi_inv: &dyn Fn(&Element) -> Element) -> Derivation {
    let t = x.table();
    let images = (0..t.len()).map(|g| phi(&x.apply(&phi_inv(&Element::generator(t, g))))).collect();
    Derivation::new(t, x.degree(), images).expect("conjugate keeps degrees")
}

/// `sigma` change-of-splitting automorphism and its images on generators.
fn sigma_twist(lie2: &SplitLie2Data, sigma: &Sigma) -> Vec<Element> {
    let phi = crate::lie2::splitting_automorphism(lie2, sigma, false);
    let t = lie2.table();
    (0..t.len()).map(|g| phi(&Element::generator(t, g))).collect()
}

/// The connection-change morphism `ad_nabla -> ad_nabla'` and the
/// splitting-change morphism `ad_nabla -> ad_nabla` of the new splitting.
pub fn canonical_isos(lie2: &SplitLie2Data, c: &AdjointConnections, c2: &AdjointConnections, sigma: &Sigma) -> Result<(RepMorphism, RepMorphism)> {
    c.validate(lie2)?;
    c2.validate(lie2)?;
    let f = AdjointFrames::of(lie2);
    let t = lie2.table().clone();
    let (rq, rb, nb) = (f.rq, f.rb, f.nb);
    let n = f.len();
    let id = RepMorphism::identity(&t, n).matrix;
    let xs = |s: usize| vops::unit(&t, nb, s);
    // mu = id + (nabla' - nabla)
    let mut mu1 = vec![zero_mat(&t, n); rq];
    let mut mu0b = vec![zero_mat(&t, n); rb];
    for s in 0..nb {
        for a in 0..rq {
            let dq = vops::sub(&c2.on_q.apply(lie2.manifold(), &xs(s), &lie2.q_frame(a)), &c.on_q.apply(lie2.manifold(), &xs(s), &lie2.q_frame(a)));
            for (b, e) in dq.iter().enumerate() {
                mu1[a][f.x(s)][f.q(b)] = e.clone();
            }
        }
        for k in 0..rb {
            let db = vops::sub(&c2.on_bdual.apply(lie2.manifold(), &xs(s), &lie2.b_frame(k)), &c.on_bdual.apply(lie2.manifold(), &xs(s), &lie2.b_frame(k)));
            for (l, e) in db.iter().enumerate() {
                mu0b[k][f.x(s)][f.beta(l)] = e.clone();
            }
        }
    }
    let mu2 = vec![vec![zero_mat(&t, n); rq]; rq];
    let conn_iso = morphism_from_components(lie2, &id, &mu1, &mu2, &mu0b, None);
    // mu^sigma = id + sigma - nabla sigma
    let mut s1 = vec![zero_mat(&t, n); rq];
    let mut s2 = vec![vec![zero_mat(&t, n); rq]; rq];
    let sg = |u: &[Element], v: &[Element]| -> Vector {
        let mut out = vops::zero(&t, rb);
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if !ui.is_zero() && !vj.is_zero() {
                    vops::add_assign(&mut out, &vops::scale(&(ui * vj), &sigma[i][j]));
                }
            }
        }
        out
    };
    for a in 0..rq {
        for b in 0..rq {
            let v = sg(&lie2.q_frame(a), &lie2.q_frame(b));
            for (k, e) in v.iter().enumerate() {
                s1[a][f.q(b)][f.beta(k)] = e.clone();
            }
        }
    }
    let m = lie2.manifold();
    for i in 0..rq {
        for j in 0..rq {
            for s in 0..nb {
                let (qi, qj) = (lie2.q_frame(i), lie2.q_frame(j));
                // mu2(q1,q2) X = -(nabla_X sigma)(q1,q2)
                let mut v = vops::neg(&c.on_bdual.apply(m, &xs(s), &sg(&qi, &qj)));
                v = vops::add(&v, &sg(&c.on_q.apply(m, &xs(s), &qi), &qj));
                v = vops::add(&v, &sg(&qi, &c.on_q.apply(m, &xs(s), &qj)));
                for (k, e) in v.iter().enumerate() {
                    s2[i][j][f.x(s)][f.beta(k)] = e.clone();
                }
            }
        }
    }
    let zero_b = vec![zero_mat(&t, n); rb];
    let split_iso = morphism_from_components(lie2, &id, &s1, &s2, &zero_b, Some(sigma_twist(lie2, sigma)));
    Ok((conn_iso, split_iso))
}

/// The same two morphisms computed by transport through vector fields.
pub fn canonical_isos_by_transport(lie2: &SplitLie2Data, c: &AdjointConnections, c2: &AdjointConnections, sigma: &Sigma) -> Result<(RepMorphism, RepMorphism)> {
    let conn = transported((lie2, c), (lie2, c2), &|x| x.clone(), None)?;
    let other = crate::lie2::change_of_splitting_transform(lie2, sigma)?;
    let phi = crate::lie2::splitting_automorphism(lie2, sigma, false);
    let phi_inv = crate::lie2::splitting_automorphism(lie2, sigma, true);
    let split = transported((lie2, c), (&other, c), &|x| conjugate(x, &phi, &phi_inv), Some(sigma_twist(lie2, sigma)))?;
    Ok((conn, split))
}

/// `R_D = D^2`, `gtr(R_D^k)` for `k <= kmax`, their `Q`-closedness and the
/// Bianchi identity `[D, R_D] = 0`.
pub fn curvature_and_gtr(d: &ConnectionUpToHomotopy, kmax: usize) -> (VerificationReport, Vec<Element>) {
    let mut rep = VerificationReport::new("curvature and traces");
    rep.extend(d.curvature_linearity());
    let r = d.curvature();
    let n = d.rank();
    for row in 0..n {
        let mut lhs = d.apply(&r[row]);
        for (s, th) in d.theta[row].iter().enumerate() {
            if th.is_zero() {
                continue;
            }
            for (t, rr) in r[s].iter().enumerate() {
                lhs[t] -= th * rr;
            }
        }
        rep.residual_vec("[D, R_D] = 0", "Bianchi identity", d.names[row].clone(), &lhs);
    }
    let mut traces = Vec::new();
    let mut power = r.clone();
    for k in 1..=kmax {
        if k > 1 {
            power = mat_mul(&power, &r);
        }
        let g = gtr(&power, &d.degrees);
        rep.residual(&format!("Q(gtr(R_D^{k})) = 0"), "traces are Q-closed", format!("k = {k}"), &d.q().apply(&g));
        traces.push(g);
    }
    (rep, traces)
}

impl DgModule {
    /// `D = d_nabla + Theta`: the `tau`-linear degree-preserving part as
    /// symbols per `Q` frame, and the remaining matrix.
    pub fn split_connection(&self, lie2: &SplitLie2Data) -> Result<(Vec<Mat>, Mat)> {
        let m = lie2.manifold();
        let n = self.rank();
        let t = self.table();
        let mut symbols = vec![zero_mat(t, n); lie2.rank_q()];
        let mut tail = self.theta.clone();
        for r in 0..n {
            for s in 0..n {
                if self.degrees[r] != self.degrees[s] {
                    continue;
                }
                let lin = split_component(lie2, &self.theta[r][s], 1, 0);
                for (a, sym) in symbols.iter_mut().enumerate() {
                    sym[r][s] = evaluate(m, &lin, &[Section::frame(m, a)])?;
                }
                tail[r][s] -= &lin;
            }
        }
        Ok((symbols, tail))
    }
}

/// `d_nabla` on a bundle with `Q`-connection symbols `gamma[a][r][s]` as a
/// connection up to homotopy over a split Lie 2-algebroid.
pub fn connection_operator(lie2: &SplitLie2Data, gamma: &[Mat], degrees: Vec<i32>) -> Result<ConnectionUpToHomotopy> {
    let t = lie2.table();
    let n = degrees.len();
    let mut theta = zero_mat(t, n);
    for (a, g) in gamma.iter().enumerate() {
        let tau = Element::generator(t, lie2.tau(a));
        for r in 0..n {
            for s in 0..n {
                if !g[r][s].is_zero() {
                    theta[r][s] += &tau * &g[r][s];
                }
            }
        }
    }
    let names = (0..n).map(|r| format!("e{}", r + 1)).collect();
    DgModule::new(&q_of(lie2)?, names, degrees, theta)
}
