//! Courant algebroids on framed bundles over a polynomial base, the split
//! Lie 2-algebroid attached to a metric connection, and the cubic
//! Hamiltonian of a quadratic Lie algebra.
//!
//! Sections are coefficient vectors in the frame `e_1..e_n`. The bracket is
//! stored on frames; on general sections it is extended by
//! `[[f e_a, g e_b]] = f g [[e_a, e_b]] + f rho(e_a)(g) e_b - g rho(e_b)(f) e_a + g <e_a, e_b> D f`.

use crate::algebra::{Element, GeneratorTable, Table};
use crate::error::{Error, Result};
use crate::lie2::{increasing, LinearConnection, SplitLie2Data};
use crate::linalg;
use crate::poisson::{Bivector, MultivectorAlgebra};
use crate::report::VerificationReport;
use crate::vops::{self, Vector};

#[derive(Debug, Clone)]
pub struct CourantData {
    base: Table,
    names: Vec<String>,
    pairing: Vec<Vec<Element>>,
    inverse: Vec<Vec<Element>>,
    /// `anchor[a][s]`: `d/dx^s` component of `rho(e_a)`.
    anchor: Vec<Vector>,
    /// `bracket[a][b][c]`: `e_c` component of `[[e_a, e_b]]`.
    bracket: Vec<Vec<Vector>>,
}

fn base_only(e: &Element, base: &Table, what: &str) -> Result<()> {
    if !crate::algebra::same_table(e.table(), base) {
        return Err(Error::TableMismatch);
    }
    if !e.is_base() {
        return Err(Error::Input(format!("{what} must be a base polynomial, got `{e}`")));
    }
    Ok(())
}

impl CourantData {
    /// Zero anchor and bracket. The pairing must be symmetric with a nonzero
    /// constant determinant.
    pub fn new(base_vars: &[&str], names: &[&str], pairing: Vec<Vec<Element>>) -> Result<Self> {
        let base = GeneratorTable::new(base_vars.iter().map(|s| (*s, 0)))?;
        Self::on(&base, names, pairing)
    }

    pub fn on(base: &Table, names: &[&str], pairing: Vec<Vec<Element>>) -> Result<Self> {
        let n = names.len();
        if base.entries().any(|(_, d)| d != 0) {
            return Err(Error::Input("the base of a Courant algebroid has degree-0 coordinates only".into()));
        }
        if pairing.len() != n || pairing.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("pairing must be {n}x{n}")));
        }
        for (i, row) in pairing.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                base_only(g, base, "pairing entry")?;
                if *g != pairing[j][i] {
                    return Err(Error::Input(format!("pairing is not symmetric at ({}, {})", names[i], names[j])));
                }
            }
        }
        let inverse = linalg::inverse(&pairing, base)
            .ok_or_else(|| Error::Precondition("pairing must have a nonzero constant determinant".into()))?;
        Ok(CourantData {
            base: base.clone(),
            names: names.iter().map(|s| s.to_string()).collect(),
            pairing,
            inverse,
            anchor: vec![vops::zero(base, base.len()); n],
            bracket: vec![vec![vops::zero(base, n); n]; n],
        })
    }

    pub fn base(&self) -> &Table {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pairing_matrix(&self) -> &[Vec<Element>] {
        &self.pairing
    }

    pub fn anchor_table(&self) -> &[Vector] {
        &self.anchor
    }

    pub fn bracket_table(&self) -> &[Vec<Vector>] {
        &self.bracket
    }

    pub fn set_anchor(&mut self, a: usize, s: usize, e: Element) -> Result<()> {
        base_only(&e, &self.base, "anchor component")?;
        self.anchor[a][s] = e;
        Ok(())
    }

    /// Sets the `e_c` component of `[[e_a, e_b]]` only; the bracket is not
    /// assumed skew.
    pub fn set_bracket(&mut self, a: usize, b: usize, c: usize, e: Element) -> Result<()> {
        base_only(&e, &self.base, "bracket component")?;
        self.bracket[a][b][c] = e;
        Ok(())
    }

    pub fn frame(&self, a: usize) -> Vector {
        vops::unit(&self.base, self.rank(), a)
    }

    /// `rho(u)` as a vector field on the base.
    pub fn rho(&self, u: &[Element]) -> Vector {
        vops::combine(&self.base, u, &self.anchor, self.base.len())
    }

    pub fn rho_apply(&self, u: &[Element], f: &Element) -> Element {
        vf_apply(&self.base, &self.rho(u), f)
    }

    pub fn pair(&self, u: &[Element], v: &[Element]) -> Element {
        let mut out = Element::zero(&self.base);
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                if !ua.is_zero() && !vb.is_zero() {
                    out += &(ua * vb) * &self.pairing[a][b];
                }
            }
        }
        out
    }

    /// The section `P^{-1}(alpha)` for a covector `alpha_c = alpha(e_c)`.
    pub fn raise(&self, alpha: &[Element]) -> Vector {
        vops::combine(&self.base, alpha, &self.inverse, self.rank())
    }

    /// `D f` with `<D f, e> = rho(e) f`.
    pub fn d_op(&self, f: &Element) -> Vector {
        let alpha: Vector = (0..self.rank()).map(|c| self.rho_apply(&self.frame(c), f)).collect();
        self.raise(&alpha)
    }

    /// `rho^*` of the 1-form with components `theta[s]`.
    pub fn rho_star(&self, theta: &[Element]) -> Vector {
        let alpha: Vector = (0..self.rank())
            .map(|c| {
                let mut e = Element::zero(&self.base);
                for (s, th) in theta.iter().enumerate() {
                    e += th * &self.anchor[c][s];
                }
                e
            })
            .collect();
        self.raise(&alpha)
    }

    pub fn bracket(&self, u: &[Element], v: &[Element]) -> Vector {
        let n = self.rank();
        let mut out = vops::zero(&self.base, n);
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            let dua = self.d_op(ua);
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                vops::add_assign(&mut out, &vops::scale(&(ua * vb), &self.bracket[a][b]));
                out[b] += ua * &self.rho_apply(&self.frame(a), vb);
                out[a] -= vb * &self.rho_apply(&self.frame(b), ua);
                vops::add_assign(&mut out, &vops::scale(&(vb * &self.pairing[a][b]), &dua));
            }
        }
        out
    }
}

pub fn vf_apply(base: &Table, x: &[Element], f: &Element) -> Element {
    let mut out = Element::zero(base);
    for (s, xs) in x.iter().enumerate() {
        if !xs.is_zero() {
            out += xs * &crate::Derivation::coordinate(base, s).apply(f);
        }
    }
    out
}

fn vf_bracket(base: &Table, x: &[Element], y: &[Element]) -> Vector {
    (0..base.len()).map(|s| vf_apply(base, x, &y[s]) - vf_apply(base, y, &x[s])).collect()
}

/// The five axioms on frame tuples, with the probe `f = 1 + x_1` in the
/// Leibniz rule and in one slot of the pairing axioms.
pub fn check_courant(data: &CourantData) -> VerificationReport {
    let mut r = VerificationReport::new("Courant algebroid");
    let t = &data.base;
    let n = data.rank();
    let e = |a: usize| data.frame(a);
    let name = |a: usize| data.names[a].clone();
    let probe = if t.is_empty() { Element::one(t) } else { Element::one(t) + Element::generator(t, 0) };
    let fe = |a: usize| vops::scale(&probe, &e(a));
    let fname = |a: usize| format!("({probe})*{}", data.names[a]);
    for a in 0..n {
        for b in 0..n {
            let at = format!("({}, {})", name(a), name(b));
            let lhs = data.rho(&data.bracket(&e(a), &e(b)));
            let rhs = vf_bracket(t, &data.rho(&e(a)), &data.rho(&e(b)));
            r.residual_vec("rho[[e1,e2]] = [rho e1, rho e2]", "axiom 1", at.clone(), &vops::sub(&lhs, &rhs));
            let lhs = data.bracket(&e(a), &fe(b));
            let rhs = vops::add(&vops::scale(&data.rho_apply(&e(a), &probe), &e(b)), &vops::scale(&probe, &data.bracket(&e(a), &e(b))));
            r.residual_vec("[[e1, f e2]] = rho(e1)f e2 + f [[e1,e2]]", "axiom 2", fname(b), &vops::sub(&lhs, &rhs));
            for (u, v, lab) in [(e(a), e(b), at.clone()), (fe(a), e(b), format!("({}, {})", fname(a), name(b)))] {
                let lhs = vops::add(&data.bracket(&u, &v), &data.bracket(&v, &u));
                let rhs = data.d_op(&data.pair(&u, &v));
                r.residual_vec("[[e1,e2]] + [[e2,e1]] = D<e1,e2>", "axiom 5", lab, &vops::sub(&lhs, &rhs));
            }
            for c in 0..n {
                let at = format!("({}, {}, {})", name(a), name(b), name(c));
                let lhs = data.bracket(&e(a), &data.bracket(&e(b), &e(c)));
                let rhs = vops::add(&data.bracket(&data.bracket(&e(a), &e(b)), &e(c)), &data.bracket(&e(b), &data.bracket(&e(a), &e(c))));
                r.residual_vec("[[e1,[[e2,e3]]]] = [[[[e1,e2]],e3]] + [[e2,[[e1,e3]]]]", "axiom 3", at.clone(), &vops::sub(&lhs, &rhs));
                for (u, lab) in [(e(a), at.clone()), (fe(a), format!("({}, {}, {})", fname(a), name(b), name(c)))] {
                    let lhs = data.rho_apply(&u, &data.pair(&e(b), &e(c)));
                    let rhs = data.pair(&data.bracket(&u, &e(b)), &e(c)) + data.pair(&e(b), &data.bracket(&u, &e(c)));
                    r.residual("rho(e1)<e2,e3> = <[[e1,e2]],e3> + <e2,[[e1,e3]]>", "axiom 4", lab, &(lhs - rhs));
                }
            }
        }
    }
    r
}

/// Courant data over a point.
#[derive(Debug, Clone)]
pub struct QuadraticLieAlgebra {
    data: CourantData,
}

impl QuadraticLieAlgebra {
    /// `structure[a][b][c]`: `e_c` component of `[e_a, e_b]`.
    pub fn new(names: &[&str], pairing: Vec<Vec<i64>>, structure: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let base = GeneratorTable::new(Vec::<(String, i32)>::new())?;
        let g = pairing.iter().map(|r| r.iter().map(|&v| Element::int(&base, v)).collect()).collect();
        let mut data = CourantData::on(&base, names, g)?;
        for &(a, b, c, v) in structure {
            let cur = data.bracket[a][b][c].clone();
            data.set_bracket(a, b, c, cur + Element::int(&base, v))?;
        }
        Self::from_data(data)
    }

    pub fn from_data(data: CourantData) -> Result<Self> {
        if !data.base.is_empty() {
            return Err(Error::Input("a quadratic Lie algebra lives over a point".into()));
        }
        Ok(QuadraticLieAlgebra { data })
    }

    pub fn data(&self) -> &CourantData {
        &self.data
    }
}

fn nabla_apply(data: &CourantData, nabla: &LinearConnection, x: &[Element], e: &[Element]) -> Vector {
    let t = &data.base;
    let mut out: Vector = e.iter().map(|c| vf_apply(t, x, c)).collect();
    for (s, xs) in x.iter().enumerate() {
        for (i, ei) in e.iter().enumerate() {
            if xs.is_zero() || ei.is_zero() {
                continue;
            }
            vops::add_assign(&mut out, &vops::scale(&(xs * ei), &nabla.symbols[s][i]));
        }
    }
    out
}

/// `nabla_X` preserves the pairing.
fn check_metric(data: &CourantData, nabla: &LinearConnection) -> Result<()> {
    let t = &data.base;
    let n = data.rank();
    if nabla.symbols.len() != t.len() || nabla.symbols.iter().any(|s| s.len() != n || s.iter().any(|r| r.len() != n)) {
        return Err(Error::Input(format!("connection symbols must have shape {}x{n}x{n}", t.len())));
    }
    for e in nabla.symbols.iter().flatten().flatten() {
        base_only(e, t, "Christoffel symbol")?;
    }
    for s in 0..t.len() {
        let x = vops::unit(t, t.len(), s);
        for a in 0..n {
            for b in a..n {
                let (ea, eb) = (data.frame(a), data.frame(b));
                let lhs = vf_apply(t, &x, &data.pair(&ea, &eb));
                let rhs = data.pair(&nabla_apply(data, nabla, &x, &ea), &eb) + data.pair(&ea, &nabla_apply(data, nabla, &x, &eb));
                if lhs != rhs {
                    return Err(Error::Precondition(format!(
                        "connection is not metric at ({}, {}) along {}",
                        data.names[a],
                        data.names[b],
                        t.name(s)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `E[1] + T*M[2]` as a split Lie 2-algebroid for a metric connection.
/// The degree-2 generators are named `b_<x>`.
pub fn split_symplectic_lie2(data: &CourantData, nabla: &LinearConnection) -> Result<SplitLie2Data> {
    check_metric(data, nabla)?;
    let t = &data.base;
    let (n, dim) = (data.rank(), t.len());
    let base_names: Vec<&str> = t.entries().map(|(s, _)| s).collect();
    let q_names: Vec<&str> = data.names.iter().map(String::as_str).collect();
    let b_owned: Vec<String> = base_names.iter().map(|s| format!("b_{s}")).collect();
    let b_names: Vec<&str> = b_owned.iter().map(String::as_str).collect();
    let mut out = SplitLie2Data::zero(&base_names, &q_names, &b_names)?;
    let ot = out.table().clone();
    let map: Vec<usize> = (0..dim).collect();
    let up = |e: &Element| e.embed(&ot, &map);
    let e = |a: usize| data.frame(a);
    let dx = |s: usize| vops::unit(t, dim, s);
    let nab = |x: &[Element], u: &[Element]| nabla_apply(data, nabla, x, u);
    // basic connection on TM
    let bas = |u: &[Element], x: &[Element]| vops::add(&vf_bracket(t, &data.rho(u), x), &data.rho(&nab(x, u)));
    for a in 0..n {
        for s in 0..dim {
            out.dull_mut().set_anchor(a, s, up(&data.anchor[a][s]))?;
        }
    }
    // [e, e'] = [[e, e']] - rho^* <nabla_. e, e'>
    for i in 0..n {
        for j in i + 1..n {
            let theta: Vector = (0..dim).map(|s| data.pair(&nab(&dx(s), &e(i)), &e(j))).collect();
            let v = vops::sub(&data.bracket(&e(i), &e(j)), &data.rho_star(&theta));
            for (k, c) in v.iter().enumerate() {
                out.dull_mut().set_bracket(i, j, k, up(c))?;
            }
        }
    }
    // ell = rho^*
    for m in 0..dim {
        let v = data.rho_star(&dx(m));
        for (k, c) in v.iter().enumerate() {
            out.set_ell(m, k, up(c))?;
        }
    }
    // nabla^bas on the frame d/dx^m of TM; its dual acts on T*M
    for a in 0..n {
        for m in 0..dim {
            for (k, c) in bas(&e(a), &dx(m)).iter().enumerate() {
                out.set_nabla(a, m, k, up(c))?;
            }
        }
    }
    let omega_nabla = |u: &[Element], v: &[Element], x: &[Element]| -> Vector {
        let mut w = vops::neg(&nab(x, &data.bracket(u, v)));
        vops::add_assign(&mut w, &data.bracket(&nab(x, u), v));
        vops::add_assign(&mut w, &data.bracket(u, &nab(x, v)));
        vops::add_assign(&mut w, &nab(&bas(v, x), u));
        w = vops::sub(&w, &nab(&bas(u, x), v));
        let alpha: Vector = (0..n).map(|c| data.pair(&nab(&bas(&e(c), x), u), v)).collect();
        vops::sub(&w, &data.raise(&alpha))
    };
    for idx in increasing(n, 3) {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        for m in 0..dim {
            let c = data.pair(&omega_nabla(&e(i), &e(j), &dx(m)), &e(k));
            out.set_omega(i, j, k, m, up(&c))?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PointRealization {
    pub alg: MultivectorAlgebra,
    pub pi: Bivector,
    pub theta: Element,
    pub report: VerificationReport,
}

/// `{e_k, ... {e_1, xi}}` for sections given as degree-1 functions.
pub fn upsilon(pi: &Bivector, xi: &Element, sections: &[Element]) -> Result<Element> {
    if let Some(d) = xi.degree() {
        if d as usize != sections.len() || d < 0 {
            return Err(Error::Degree(format!("upsilon of a degree-{d} function takes {d} sections, got {}", sections.len())));
        }
    }
    let mut out = xi.clone();
    for s in sections {
        out = pi.bracket(s, &out)?;
    }
    Ok(out)
}

/// The degree -2 bracket `{e_i, e_j} = <e_i, e_j>` on the odd coordinates
/// `e_i`, and the cubic `Theta` solving
/// `upsilon(Theta)(e_i, e_j, e_l) = <[[e_i, e_j]], e_l>`. Fails when no
/// cubic solves the system, i.e. when the bracket is not invariant.
pub fn cubic_hamiltonian(qla: &QuadraticLieAlgebra) -> Result<(MultivectorAlgebra, Bivector, Element)> {
    let data = qla.data();
    let n = data.rank();
    let names: Vec<(String, i32)> = data.names.iter().map(|s| (s.clone(), 1)).collect();
    let t = GeneratorTable::new(names)?;
    let alg = MultivectorAlgebra::new(&t, -2)?;
    let gen = |a: usize| Element::generator(&t, a);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            entries.push((i, j, Element::constant(&t, data.pairing[i][j].constant_term())));
        }
    }
    let pi = Bivector::from_brackets(&alg, &entries)?;
    // upsilon of a cubic is alternating, so solve on increasing triples and verify on all
    let basis = increasing(n, 3);
    let cubic = |idx: &[usize]| &(&gen(idx[0]) * &gen(idx[1])) * &gen(idx[2]);
    let args = |idx: &[usize]| [gen(idx[0]), gen(idx[1]), gen(idx[2])];
    let columns = basis
        .iter()
        .map(|col| basis.iter().map(|row| upsilon(&pi, &cubic(col), &args(row))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let target: Vec<Element> = basis.iter().map(|r| Element::constant(&t, structure_form(data, r[0], r[1], r[2]))).collect();
    let none = || Error::Precondition("no cubic function reproduces the bracket; the pairing is not invariant".into());
    let coeffs = linalg::solve_combination(&columns, &target).ok_or_else(none)?;
    let mut theta = Element::zero(&t);
    for (idx, c) in basis.iter().zip(&coeffs) {
        theta += cubic(idx).scale(c);
    }
    for (i, j, l) in triples(n) {
        if upsilon(&pi, &theta, &args(&[i, j, l]))? != Element::constant(&t, structure_form(data, i, j, l)) {
            return Err(none());
        }
    }
    Ok((alg, pi, theta))
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |l| (i, j, l)))).collect()
}

/// `<[[e_i, e_j]], e_l>` over a point.
fn structure_form(data: &CourantData, i: usize, j: usize, l: usize) -> crate::Scalar {
    data.pair(&data.bracket(&data.frame(i), &data.frame(j)), &data.frame(l)).constant_term()
}

/// Symplectic degree-2 realization of a quadratic Lie algebra, certified by
/// the master equation and by recovering pairing, bracket and anchor as
/// derived brackets.
pub fn point_realization(qla: &QuadraticLieAlgebra) -> Result<PointRealization> {
    let data = qla.data();
    let pre = check_courant(data);
    if !pre.passed() {
        return Err(Error::Precondition(format!("not a quadratic Lie algebra:\n{}", pre.to_text())));
    }
    let (alg, pi, theta) = cubic_hamiltonian(qla)?;
    let t = alg.base().clone();
    let n = data.rank();
    let gen = |a: usize| Element::generator(&t, a);
    let mut report = VerificationReport::new("Courant algebroid over a point");
    for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
        let at = format!("({}, {})", data.names[i], data.names[j]);
        let r = pi.bracket(&gen(i), &gen(j))? - Element::constant(&t, data.pairing[i][j].constant_term());
        report.residual("{e1,e2} = <e1,e2>", "degree -2 symplectic bracket", at.clone(), &r);
        // {e2, {e1, Theta}} = -{{e1, Theta}, e2} by graded antisymmetry
        let got = pi.bracket(&gen(j), &pi.bracket(&gen(i), &theta)?)?;
        let mut want = Element::zero(&t);
        for (c, v) in data.bracket(&data.frame(i), &data.frame(j)).iter().enumerate() {
            want += gen(c).scale(&v.constant_term());
        }
        report.residual("{e2,{e1,Theta}} = [[e1,e2]]", "derived bracket recovery", at.clone(), &(got - want));
        let rho = pi.bracket(&pi.bracket(&gen(i), &theta)?, &Element::one(&t))?;
        report.residual("{{e,Theta},f} = rho(e)f", "derived bracket recovery", format!("({}, 1)", data.names[i]), &rho);
    }
    for (i, j, l) in triples(n) {
        let r = upsilon(&pi, &theta, &[gen(i), gen(j), gen(l)])? - Element::constant(&t, structure_form(data, i, j, l));
        report.residual("upsilon(Theta)(e1,e2,e3) = <[[e1,e2]],e3>", "cubic Hamiltonian", format!("({}, {}, {})", data.names[i], data.names[j], data.names[l]), &r);
    }
    report.residual("{Theta,Theta} = 0", "master equation", "Theta", &master_equation(&pi, &theta)?);
    Ok(PointRealization { alg, pi, theta, report })
}

/// `{Theta, Theta}` for a cubic function with respect to the degree -2
/// bracket of `pi`.
pub fn master_equation(pi: &Bivector, theta: &Element) -> Result<Element> {
    pi.bracket(theta, theta)
}
