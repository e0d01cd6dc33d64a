//! Split Lie 2-algebroids `Q[1] + B*[2]` in geometric form.
//!
//! Everything is written in the frames `q_a` of `Q` and `b^m` of `B`, with
//! `beta_m` the dual frame of `B*`. The graded manifold carries the degree-1
//! generators `tau^a` (dual to `q_a`) and the degree-2 generators `b^m`.
//! Sections, vector fields and forms-on-frames are coefficient vectors over
//! the base polynomial ring (see [`crate::vops`]).

use crate::algebra::{sign, Element, Table};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::nq::{evaluate, Bundle, Section, SplitNManifold};
use crate::report::VerificationReport;
use crate::vops::{self, Vector};

fn require_base(e: &Element, what: &str) -> Result<()> {
    if e.is_base() {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} must be a base polynomial, got `{e}`")))
    }
}

/// Vector field `X` applied to a base function.
pub fn vf_apply(m: &SplitNManifold, x: &[Element], f: &Element) -> Element {
    let mut out = Element::zero(m.table());
    for (s, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out += c * &m.partial(s, f);
        }
    }
    out
}

pub fn vf_bracket(m: &SplitNManifold, x: &[Element], y: &[Element]) -> Vector {
    (0..m.base_count()).map(|s| vf_apply(m, x, &y[s]) - vf_apply(m, y, &x[s])).collect()
}

/// A `TM`-connection on a framed bundle: `nabla_{d/dx^s} e_i = sum_k symbols[s][i][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConnection {
    pub symbols: Vec<Vec<Vec<Element>>>,
}

impl LinearConnection {
    pub fn zero(m: &SplitNManifold, rank: usize) -> Self {
        let t = m.table();
        LinearConnection { symbols: vec![vec![vops::zero(t, rank); rank]; m.base_count()] }
    }

    pub fn rank(&self) -> usize {
        self.symbols.first().map_or(0, |s| s.len())
    }

    pub fn validate(&self, m: &SplitNManifold, rank: usize) -> Result<()> {
        if self.symbols.len() != m.base_count() || self.symbols.iter().any(|s| s.len() != rank || s.iter().any(|r| r.len() != rank)) {
            return Err(Error::Input(format!("connection symbols must have shape {}x{rank}x{rank}", m.base_count())));
        }
        for e in self.symbols.iter().flatten().flatten() {
            require_base(e, "Christoffel symbol")?;
        }
        Ok(())
    }

    pub fn apply(&self, m: &SplitNManifold, x: &[Element], e: &[Element]) -> Vector {
        let mut out: Vector = e.iter().map(|c| vf_apply(m, x, c)).collect();
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (i, ei) in e.iter().enumerate() {
                if ei.is_zero() {
                    continue;
                }
                let f = xs * ei;
                for (k, g) in self.symbols[s][i].iter().enumerate() {
                    if !g.is_zero() {
                        out[k] += &f * g;
                    }
                }
            }
        }
        out
    }
}

/// Anchored bundle `Q` with a skew-symmetric dull bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DullAlgebroid {
    m: SplitNManifold,
    rq: usize,
    /// `anchor[a][s]`: `x^s` component of `rho(q_a)`.
    anchor: Vec<Vector>,
    /// `bracket[i][j][k]`: `q_k` component of `[q_i, q_j]`.
    bracket: Vec<Vec<Vector>>,
}

impl DullAlgebroid {
    /// The zero structure on `Q` over the given base, on its own manifold `Q[1]`.
    pub fn zero(base_vars: &[&str], q_names: &[&str]) -> Result<Self> {
        let m = SplitNManifold::new(
            base_vars.iter().map(|s| s.to_string()).collect(),
            vec![Bundle { name: "Q".into(), degree: 1, frame: q_names.iter().map(|s| s.to_string()).collect() }],
        )?;
        Ok(Self::on(m))
    }

    /// Zero structure on the degree-1 bundle of `m`, whose frames come first.
    fn on(m: SplitNManifold) -> Self {
        let rq = m.frames_of_degree(1).len();
        let t = m.table().clone();
        DullAlgebroid {
            anchor: vec![vops::zero(&t, m.base_count()); rq],
            bracket: vec![vec![vops::zero(&t, rq); rq]; rq],
            rq,
            m,
        }
    }

    pub fn manifold(&self) -> &SplitNManifold {
        &self.m
    }

    pub fn table(&self) -> &Table {
        self.m.table()
    }

    pub fn rank(&self) -> usize {
        self.rq
    }

    pub fn anchor(&self) -> &[Vector] {
        &self.anchor
    }

    pub fn bracket_table(&self) -> &[Vec<Vector>] {
        &self.bracket
    }

    pub fn set_anchor(&mut self, a: usize, s: usize, e: Element) -> Result<()> {
        require_base(&e, "anchor component")?;
        self.anchor[a][s] = e;
        Ok(())
    }

    /// Sets `[q_i, q_j]_k = e` and `[q_j, q_i]_k = -e`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, e: Element) -> Result<()> {
        require_base(&e, "bracket constant")?;
        if i == j {
            if e.is_zero() {
                return Ok(());
            }
            return Err(Error::Input("the dull bracket is skew-symmetric: [q_i, q_i] = 0".into()));
        }
        self.bracket[j][i][k] = -&e;
        self.bracket[i][j][k] = e;
        Ok(())
    }

    pub fn frame(&self, a: usize) -> Vector {
        vops::unit(self.table(), self.rq, a)
    }

    pub fn zero_section(&self) -> Vector {
        vops::zero(self.table(), self.rq)
    }

    pub fn rho(&self, q: &[Element]) -> Vector {
        vops::combine(self.table(), q, &self.anchor, self.m.base_count())
    }

    /// `[u, v] = sum u_i v_j [q_i, q_j] + rho(u)(v) - rho(v)(u)`.
    pub fn bracket(&self, u: &[Element], v: &[Element]) -> Vector {
        let t = self.table();
        let mut out = vops::zero(t, self.rq);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    vops::add_assign(&mut out, &vops::scale(&(ui * vj), &self.bracket[i][j]));
                }
            }
        }
        let ru = self.rho(u);
        let rv = self.rho(v);
        for k in 0..self.rq {
            out[k] += vf_apply(&self.m, &ru, &v[k]) - vf_apply(&self.m, &rv, &u[k]);
        }
        out
    }

    /// `[q1,[q2,q3]] - [[q1,q2],q3] - [q2,[q1,q3]]`.
    pub fn jacobiator(&self, a: &[Element], b: &[Element], c: &[Element]) -> Vector {
        let x = self.bracket(a, &self.bracket(b, c));
        let y = self.bracket(&self.bracket(a, b), c);
        let z = self.bracket(b, &self.bracket(a, c));
        vops::sub(&vops::sub(&x, &y), &z)
    }

    /// `rho[q_i, q_j] - [rho q_i, rho q_j]` on frames.
    pub fn anchor_defect(&self, i: usize, j: usize) -> Vector {
        let lhs = self.rho(&self.bracket(&self.frame(i), &self.frame(j)));
        let rhs = vf_bracket(&self.m, &self.anchor[i], &self.anchor[j]);
        vops::sub(&lhs, &rhs)
    }

    /// The `q_k` frame tuple as sections of the manifold, for contraction.
    fn as_section(&self, q: &[Element]) -> Section {
        let mut s = Section::zero(&self.m);
        s.coeffs[..self.rq].clone_from_slice(q);
        s
    }

    /// Value of a `Q`-form on a tuple of `Q`-sections.
    pub fn form_value(&self, form: &Element, args: &[Vector]) -> Result<Element> {
        let secs: Vec<Section> = args.iter().map(|q| self.as_section(q)).collect();
        evaluate(&self.m, form, &secs)
    }

    /// `tau^{i_0} ... tau^{i_k}` for an increasing index tuple.
    pub fn form_monomial(&self, idx: &[usize]) -> Element {
        let t = self.table();
        let mut e = Element::one(t);
        for &i in idx {
            e = &e * &Element::generator(t, self.m.frame_generator(i));
        }
        e
    }

    /// Degree of a `Q`-form, checking it only involves base and `tau` generators.
    fn form_degree(&self, form: &Element) -> Result<usize> {
        for (mono, _) in form.terms() {
            if mono.factors().any(|g| g >= self.m.base_count() + self.rq) {
                return Err(Error::Input(format!("`{form}` is not a Q-form")));
            }
        }
        match form.degree() {
            Some(d) => Ok(d as usize),
            None if form.is_zero() => Ok(0),
            None => Err(Error::Degree(format!("`{form}` is not homogeneous"))),
        }
    }

    /// Koszul differential of a `Q`-form.
    pub fn differential(&self, form: &Element) -> Result<Element> {
        let k = self.form_degree(form)?;
        let t = self.table();
        let mut out = Element::zero(t);
        if form.is_zero() {
            return Ok(out);
        }
        for idx in increasing(self.rq, k + 1) {
            let qs: Vec<Vector> = idx.iter().map(|&i| self.frame(i)).collect();
            let mut v = Element::zero(t);
            for i in 0..=k {
                let rest: Vec<Vector> = drop_indices(&qs, &[i]);
                let val = self.form_value(form, &rest)?;
                v += vf_apply(&self.m, &self.anchor[idx[i]], &val).scale(&sign(i % 2 == 1));
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let mut args = vec![self.bracket(&qs[i], &qs[j])];
                    args.extend(drop_indices(&qs, &[i, j]));
                    v += self.form_value(form, &args)?.scale(&sign((i + j) % 2 == 1));
                }
            }
            if !v.is_zero() {
                out += &v * &self.form_monomial(&idx);
            }
        }
        Ok(out)
    }
}

/// Increasing index tuples of length `k` from `0..n`.
pub fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn drop_indices<T: Clone>(v: &[T], skip: &[usize]) -> Vec<T> {
    v.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, x)| x.clone()).collect()
}

/// `d_Q` on a `Q`-form written in the `tau` generators.
pub fn dull_differential(dull: &DullAlgebroid, form: &Element) -> Result<Element> {
    dull.differential(form)
}

/// The basic connections and basic curvature of a `TM`-connection on `Q`.
pub struct BasicData<'a> {
    pub dull: &'a DullAlgebroid,
    pub nabla: &'a LinearConnection,
}

impl BasicData<'_> {
    fn m(&self) -> &SplitNManifold {
        &self.dull.m
    }

    /// `[q1,q2] + nabla_{rho(q2)} q1`.
    pub fn on_q(&self, q1: &[Element], q2: &[Element]) -> Vector {
        let d = self.dull;
        vops::add(&d.bracket(q1, q2), &self.nabla.apply(self.m(), &d.rho(q2), q1))
    }

    /// `[rho(q), X] + rho(nabla_X q)`.
    pub fn on_tm(&self, q: &[Element], x: &[Element]) -> Vector {
        let d = self.dull;
        vops::add(&vf_bracket(self.m(), &d.rho(q), x), &d.rho(&self.nabla.apply(self.m(), x, q)))
    }

    pub fn curvature(&self, q1: &[Element], q2: &[Element], x: &[Element]) -> Vector {
        let d = self.dull;
        let m = self.m();
        let n = |x: &[Element], q: &[Element]| self.nabla.apply(m, x, q);
        let mut out = vops::neg(&n(x, &d.bracket(q1, q2)));
        vops::add_assign(&mut out, &d.bracket(q1, &n(x, q2)));
        vops::add_assign(&mut out, &d.bracket(&n(x, q1), q2));
        vops::add_assign(&mut out, &n(&self.on_tm(q2, x), q1));
        out = vops::sub(&out, &n(&self.on_tm(q1, x), q2));
        out
    }

    /// Curvature of the basic connection on `Q`.
    pub fn curvature_q(&self, q1: &[Element], q2: &[Element], q3: &[Element]) -> Vector {
        let a = self.on_q(q1, &self.on_q(q2, q3));
        let b = self.on_q(q2, &self.on_q(q1, q3));
        let c = self.on_q(&self.dull.bracket(q1, q2), q3);
        vops::sub(&vops::sub(&a, &b), &c)
    }

    /// Curvature of the basic connection on `TM`.
    pub fn curvature_tm(&self, q1: &[Element], q2: &[Element], x: &[Element]) -> Vector {
        let a = self.on_tm(q1, &self.on_tm(q2, x));
        let b = self.on_tm(q2, &self.on_tm(q1, x));
        let c = self.on_tm(&self.dull.bracket(q1, q2), x);
        vops::sub(&vops::sub(&a, &b), &c)
    }

    /// The three compatibility equations on frames and coordinate fields.
    pub fn report(&self) -> VerificationReport {
        let d = self.dull;
        let m = self.m();
        let t = d.table();
        let mut r = VerificationReport::new("basic");
        let coords: Vec<Vector> = (0..m.base_count()).map(|s| vops::unit(t, m.base_count(), s)).collect();
        let q = |a: usize| d.frame(a);
        for a in 0..d.rq {
            for b in 0..d.rq {
                let lhs = self.on_tm(&q(a), &d.rho(&q(b)));
                let rhs = d.rho(&self.on_q(&q(a), &q(b)));
                r.residual_vec("bas TM o rho = rho o bas Q", "basic connections intertwine the anchor", format!("({}, {})", m.frame_name(a), m.frame_name(b)), &vops::sub(&lhs, &rhs));
            }
        }
        for a in 0..d.rq {
            for b in a + 1..d.rq {
                for (s, x) in coords.iter().enumerate() {
                    let lhs = d.rho(&self.curvature(&q(a), &q(b), x));
                    let rhs = self.curvature_tm(&q(a), &q(b), x);
                    r.residual_vec("rho o R_bas = R_bas,TM", "anchor of basic curvature", format!("({}, {}, d/d{})", m.frame_name(a), m.frame_name(b), m.base_vars()[s]), &vops::sub(&lhs, &rhs));
                }
                for c in 0..d.rq {
                    let lhs = vops::add(&self.curvature(&q(a), &q(b), &d.rho(&q(c))), &d.jacobiator(&q(a), &q(b), &q(c)));
                    let rhs = self.curvature_q(&q(a), &q(b), &q(c));
                    r.residual_vec("R_bas o rho + Jac = R_bas,Q", "basic curvature and Jacobiator", format!("({}, {}, {})", m.frame_name(a), m.frame_name(b), m.frame_name(c)), &vops::sub(&lhs, &rhs));
                }
            }
        }
        r
    }
}

/// Basic connections of `nabla` together with their compatibility report.
pub fn basic_data<'a>(dull: &'a DullAlgebroid, nabla: &'a LinearConnection) -> Result<(BasicData<'a>, VerificationReport)> {
    nabla.validate(&dull.m, dull.rq)?;
    let b = BasicData { dull, nabla };
    let r = b.report();
    Ok((b, r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitLie2Data {
    dull: DullAlgebroid,
    rb: usize,
    /// `ell[m][k]`: `q_k` component of `ell(beta_m)`.
    ell: Vec<Vector>,
    /// `nabla[a][m][n]`: `b^n` component of `nabla_{q_a} b^m`.
    nabla: Vec<Vec<Vector>>,
    /// `omega[i][j][k][m]`: `beta_m` component of `omega(q_i, q_j, q_k)`.
    omega: Vec<Vec<Vec<Vector>>>,
}

impl SplitLie2Data {
    /// Zero data; the manifold has generators `base`, then `tau` of degree 1,
    /// then `b` of degree 2 (omitted when `B` has rank zero).
    pub fn zero(base_vars: &[&str], q_names: &[&str], b_names: &[&str]) -> Result<Self> {
        let mut bundles = vec![Bundle { name: "Q".into(), degree: 1, frame: q_names.iter().map(|s| s.to_string()).collect() }];
        if !b_names.is_empty() {
            bundles.push(Bundle { name: "B*".into(), degree: 2, frame: b_names.iter().map(|s| s.to_string()).collect() });
        }
        let m = SplitNManifold::new(base_vars.iter().map(|s| s.to_string()).collect(), bundles)?;
        Ok(Self::on(m))
    }

    fn on(m: SplitNManifold) -> Self {
        let dull = DullAlgebroid::on(m);
        let rq = dull.rq;
        let rb = dull.m.frame_count() - rq;
        let t = dull.table().clone();
        SplitLie2Data {
            ell: vec![vops::zero(&t, rq); rb],
            nabla: vec![vec![vops::zero(&t, rb); rb]; rq],
            omega: vec![vec![vec![vops::zero(&t, rb); rq]; rq]; rq],
            rb,
            dull,
        }
    }

    /// Data whose dull part is `dull` and whose `B` has the given frame.
    pub fn from_dull(dull: &DullAlgebroid, b_names: &[&str]) -> Result<Self> {
        let base: Vec<&str> = dull.m.base_vars().iter().map(String::as_str).collect();
        let q: Vec<&str> = (0..dull.rq).map(|a| dull.m.frame_name(a)).collect();
        let mut d = Self::zero(&base, &q, b_names)?;
        let t = d.table().clone();
        let map: Vec<usize> = (0..dull.table().len()).collect();
        for a in 0..dull.rq {
            for s in 0..dull.m.base_count() {
                d.dull.anchor[a][s] = dull.anchor[a][s].embed(&t, &map);
            }
            for b in 0..dull.rq {
                for k in 0..dull.rq {
                    d.dull.bracket[a][b][k] = dull.bracket[a][b][k].embed(&t, &map);
                }
            }
        }
        Ok(d)
    }

    pub fn manifold(&self) -> &SplitNManifold {
        &self.dull.m
    }

    pub fn table(&self) -> &Table {
        self.dull.table()
    }

    pub fn dull(&self) -> &DullAlgebroid {
        &self.dull
    }

    pub fn dull_mut(&mut self) -> &mut DullAlgebroid {
        &mut self.dull
    }

    pub fn rank_q(&self) -> usize {
        self.dull.rq
    }

    pub fn rank_b(&self) -> usize {
        self.rb
    }

    pub fn ell_table(&self) -> &[Vector] {
        &self.ell
    }

    pub fn nabla_table(&self) -> &[Vec<Vector>] {
        &self.nabla
    }

    pub fn omega_table(&self) -> &[Vec<Vec<Vector>>] {
        &self.omega
    }

    /// Generator index of `tau^a`.
    pub fn tau(&self, a: usize) -> usize {
        self.dull.m.frame_generator(a)
    }

    /// Generator index of `b^m`.
    pub fn b(&self, m: usize) -> usize {
        self.dull.m.frame_generator(self.dull.rq + m)
    }

    pub fn set_ell(&mut self, m: usize, k: usize, e: Element) -> Result<()> {
        require_base(&e, "ell component")?;
        self.ell[m][k] = e;
        Ok(())
    }

    pub fn set_nabla(&mut self, a: usize, m: usize, n: usize, e: Element) -> Result<()> {
        require_base(&e, "connection component")?;
        self.nabla[a][m][n] = e;
        Ok(())
    }

    /// Sets `omega(q_i, q_j, q_k)_m = e` and its alternating images.
    pub fn set_omega(&mut self, i: usize, j: usize, k: usize, m: usize, e: Element) -> Result<()> {
        require_base(&e, "omega component")?;
        if i == j || j == k || i == k {
            if e.is_zero() {
                return Ok(());
            }
            return Err(Error::Input("omega is alternating: repeated slots must vanish".into()));
        }
        let perms = [([i, j, k], false), ([j, k, i], false), ([k, i, j], false), ([j, i, k], true), ([i, k, j], true), ([k, j, i], true)];
        for (p, odd) in perms {
            self.omega[p[0]][p[1]][p[2]][m] = e.scale(&sign(odd));
        }
        Ok(())
    }

    pub fn q_frame(&self, a: usize) -> Vector {
        self.dull.frame(a)
    }

    pub fn b_frame(&self, m: usize) -> Vector {
        vops::unit(self.table(), self.rb, m)
    }

    pub fn ell(&self, beta: &[Element]) -> Vector {
        vops::combine(self.table(), beta, &self.ell, self.dull.rq)
    }

    /// `nabla_q b` on a section of `B`.
    pub fn nabla_b(&self, q: &[Element], b: &[Element]) -> Vector {
        let m = &self.dull.m;
        let rq = self.dull.rho(q);
        let mut out: Vector = b.iter().map(|c| vf_apply(m, &rq, c)).collect();
        for (a, qa) in q.iter().enumerate() {
            for (mm, bm) in b.iter().enumerate() {
                if !qa.is_zero() && !bm.is_zero() {
                    vops::add_assign(&mut out, &vops::scale(&(qa * bm), &self.nabla[a][mm]));
                }
            }
        }
        out
    }

    /// Dual connection on `B*`: `<nabla*_q beta, b^m> = rho(q)(beta_m) - <beta, nabla_q b^m>`.
    pub fn nabla_dual(&self, q: &[Element], beta: &[Element]) -> Vector {
        let m = &self.dull.m;
        let rq = self.dull.rho(q);
        let mut out: Vector = beta.iter().map(|c| vf_apply(m, &rq, c)).collect();
        for (a, qa) in q.iter().enumerate() {
            if qa.is_zero() {
                continue;
            }
            for (mm, o) in out.iter_mut().enumerate() {
                for (n, bn) in beta.iter().enumerate() {
                    let g = &self.nabla[a][mm][n];
                    if !g.is_zero() && !bn.is_zero() {
                        *o -= &(qa * bn) * g;
                    }
                }
            }
        }
        out
    }

    pub fn omega(&self, u: &[Element], v: &[Element], w: &[Element]) -> Vector {
        let t = self.table();
        let mut out = vops::zero(t, self.rb);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui * vj;
                for (k, wk) in w.iter().enumerate() {
                    if !wk.is_zero() {
                        vops::add_assign(&mut out, &vops::scale(&(&uv * wk), &self.omega[i][j][k]));
                    }
                }
            }
        }
        out
    }

    /// `R_{nabla*}(q1, q2) beta`.
    pub fn curvature_dual(&self, q1: &[Element], q2: &[Element], beta: &[Element]) -> Vector {
        let a = self.nabla_dual(q1, &self.nabla_dual(q2, beta));
        let b = self.nabla_dual(q2, &self.nabla_dual(q1, beta));
        let c = self.nabla_dual(&self.dull.bracket(q1, q2), beta);
        vops::sub(&vops::sub(&a, &b), &c)
    }

    /// `d_{nabla*}` of a `B*`-valued 3-form given as a function of three sections.
    pub fn koszul3(&self, form: &dyn Fn(&[Element], &[Element], &[Element]) -> Vector, qs: &[Vector; 4]) -> Vector {
        let mut out = vops::zero(self.table(), self.rb);
        for i in 0..4 {
            for j in i + 1..4 {
                let br = self.dull.bracket(&qs[i], &qs[j]);
                let rest = drop_indices(qs, &[i, j]);
                let v = form(&br, &rest[0], &rest[1]);
                // (-1)^{i+j} with 1-based slots
                vops::add_assign(&mut out, &vops::scale_by(&sign((i + j) % 2 == 1), &v));
            }
        }
        for i in 0..4 {
            let rest = drop_indices(qs, &[i]);
            let v = self.nabla_dual(&qs[i], &form(&rest[0], &rest[1], &rest[2]));
            vops::add_assign(&mut out, &vops::scale_by(&sign(i % 2 == 1), &v));
        }
        out
    }

    /// `d_{nabla*}` of a `B*`-valued 2-form.
    pub fn koszul2(&self, form: &dyn Fn(&[Element], &[Element]) -> Vector, qs: &[Vector; 3]) -> Vector {
        let mut out = vops::zero(self.table(), self.rb);
        for i in 0..3 {
            for j in i + 1..3 {
                let br = self.dull.bracket(&qs[i], &qs[j]);
                let rest = drop_indices(qs, &[i, j]);
                vops::add_assign(&mut out, &vops::scale_by(&sign((i + j) % 2 == 1), &form(&br, &rest[0])));
            }
        }
        for i in 0..3 {
            let rest = drop_indices(qs, &[i]);
            let v = self.nabla_dual(&qs[i], &form(&rest[0], &rest[1]));
            vops::add_assign(&mut out, &vops::scale_by(&sign(i % 2 == 1), &v));
        }
        out
    }

    fn probe(&self) -> Option<Element> {
        let m = &self.dull.m;
        (m.base_count() > 0).then(|| Element::one(self.table()) + m.base_var(0))
    }

    /// Validates shapes and base-ring entries of every table.
    pub fn validate(&self) -> Result<()> {
        let (rq, rb) = (self.dull.rq, self.rb);
        let bad = self.ell.len() != rb
            || self.ell.iter().any(|v| v.len() != rq)
            || self.nabla.len() != rq
            || self.nabla.iter().any(|a| a.len() != rb || a.iter().any(|v| v.len() != rb));
        if bad {
            return Err(Error::Input("structure tables have inconsistent shapes".into()));
        }
        Ok(())
    }
}

/// The five defining identities plus anchor compatibility, on frames and a
/// Leibniz probe `f = 1 + x_1` in the `Q` slot of the `ell`-equivariance.
pub fn check_axioms(d: &SplitLie2Data) -> VerificationReport {
    let mut r = VerificationReport::new("split Lie 2-algebroid");
    let m = d.manifold();
    let dull = &d.dull;
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let q = |a: usize| d.q_frame(a);
    let be = |n: usize| d.b_frame(n);
    let qn = |a: usize| m.frame_name(a).to_string();
    let bn = |n: usize| m.frame_name(rq + n).to_string();
    for i in 0..rq {
        for j in i + 1..rq {
            r.residual_vec("rho[q1,q2] = [rho q1, rho q2]", "anchored dull bracket", format!("({}, {})", qn(i), qn(j)), &dull.anchor_defect(i, j));
        }
    }
    for m1 in 0..rb {
        for m2 in m1..rb {
            let v = vops::add(&d.nabla_dual(&d.ell(&be(m1)), &be(m2)), &d.nabla_dual(&d.ell(&be(m2)), &be(m1)));
            r.residual_vec("(i) nabla*_{l b1} b2 + nabla*_{l b2} b1", "(i)", format!("({}, {})", bn(m1), bn(m2)), &v);
        }
    }
    let probe = d.probe();
    for a in 0..rq {
        for n in 0..rb {
            let mut qs = vec![(q(a), qn(a))];
            if let Some(f) = &probe {
                qs.push((vops::scale(f, &q(a)), format!("({f})*{}", qn(a))));
            }
            for (qq, label) in qs {
                let lhs = dull.bracket(&qq, &d.ell(&be(n)));
                let rhs = d.ell(&d.nabla_dual(&qq, &be(n)));
                r.residual_vec("(ii) [q, l b] = l(nabla*_q b)", "(ii)", format!("({label}, {})", bn(n)), &vops::sub(&lhs, &rhs));
            }
        }
    }
    for i in 0..rq {
        for j in i + 1..rq {
            for k in j + 1..rq {
                // d_Q^2 tau = -<Jac, tau> for the Koszul differential, so Q^2 = 0 on tau forces the minus sign
                let v = vops::add(&dull.jacobiator(&q(i), &q(j), &q(k)), &d.ell(&d.omega(&q(i), &q(j), &q(k))));
                r.residual_vec("(iii) Jac = -l o omega", "(iii)", format!("({}, {}, {})", qn(i), qn(j), qn(k)), &v);
            }
            for n in 0..rb {
                let v = vops::add(&d.curvature_dual(&q(i), &q(j), &be(n)), &d.omega(&q(i), &q(j), &d.ell(&be(n))));
                r.residual_vec("(iv) R_{nabla*}(q1,q2) b = -omega(q1,q2,l b)", "(iv)", format!("({}, {}, {})", qn(i), qn(j), bn(n)), &v);
            }
        }
    }
    let om = |u: &[Element], v: &[Element], w: &[Element]| d.omega(u, v, w);
    for idx in increasing(rq, 4) {
        let qs = [q(idx[0]), q(idx[1]), q(idx[2]), q(idx[3])];
        let v = d.koszul3(&om, &qs);
        let at: Vec<String> = idx.iter().map(|&i| qn(i)).collect();
        r.residual_vec("(v) d_{nabla*} omega = 0", "(v)", format!("({})", at.join(", ")), &v);
    }
    r
}

/// `Q(x) = rho* dx`, `Q(tau) = d_Q tau + ell* tau`, `Q(b) = d_nabla b - <omega, b>`.
pub fn q_from_data(d: &SplitLie2Data) -> Result<Derivation> {
    d.validate()?;
    let m = d.manifold();
    let t = d.table();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let gen = |g: usize| Element::generator(t, g);
    let mut images = vec![Element::zero(t); t.len()];
    for s in 0..m.base_count() {
        for a in 0..rq {
            images[s] += &d.dull.anchor[a][s] * &gen(d.tau(a));
        }
    }
    for k in 0..rq {
        let mut e = d.dull.differential(&gen(d.tau(k)))?;
        for n in 0..rb {
            e += &d.ell[n][k] * &gen(d.b(n));
        }
        images[d.tau(k)] = e;
    }
    for mm in 0..rb {
        let mut e = Element::zero(t);
        for a in 0..rq {
            for n in 0..rb {
                let g = &d.nabla[a][mm][n];
                if !g.is_zero() {
                    e += g * &(&gen(d.tau(a)) * &gen(d.b(n)));
                }
            }
        }
        for idx in increasing(rq, 3) {
            let w = &d.omega[idx[0]][idx[1]][idx[2]][mm];
            if !w.is_zero() {
                e -= w * &d.dull.form_monomial(&idx);
            }
        }
        images[d.b(mm)] = e;
    }
    Derivation::new(t, 1, images)
}

/// Inverse of [`q_from_data`] on the manifold of `template`.
pub fn data_from_q(template: &SplitLie2Data, q: &Derivation) -> Result<SplitLie2Data> {
    if q.degree() != 1 {
        return Err(Error::Degree(format!("expected a degree-1 derivation, got degree {}", q.degree())));
    }
    let mut d = SplitLie2Data::on(template.manifold().clone());
    if !crate::algebra::same_table(q.table(), d.table()) {
        return Err(Error::TableMismatch);
    }
    let m = d.manifold().clone();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let sec = |f: usize| Section::frame(&m, f);
    let ev = |e: &Element, fs: &[usize]| -> Result<Element> {
        let secs: Vec<Section> = fs.iter().map(|&f| sec(f)).collect();
        evaluate(&m, e, &secs)
    };
    for s in 0..m.base_count() {
        for a in 0..rq {
            d.dull.anchor[a][s] = ev(q.image(s), &[a])?;
        }
    }
    for k in 0..rq {
        let img = q.image(d.tau(k));
        for i in 0..rq {
            for j in 0..rq {
                if i != j {
                    d.dull.bracket[i][j][k] = -ev(img, &[i, j])?;
                }
            }
        }
        for n in 0..rb {
            d.ell[n][k] = ev(img, &[rq + n])?;
        }
    }
    for mm in 0..rb {
        let img = q.image(d.b(mm));
        for a in 0..rq {
            for n in 0..rb {
                d.nabla[a][mm][n] = ev(img, &[a, rq + n])?;
            }
        }
        for i in 0..rq {
            for j in 0..rq {
                for k in 0..rq {
                    if i != j && j != k && i != k {
                        d.omega[i][j][k][mm] = -ev(img, &[i, j, k])?;
                    }
                }
            }
        }
    }
    if q_from_data(&d)? != *q {
        return Err(Error::Input("Q has components outside the split Lie 2-algebroid form".into()));
    }
    Ok(d)
}

/// An alternating `B*`-valued 2-form on `Q`: `sigma[i][j][m]`.
pub type Sigma = Vec<Vec<Vector>>;

pub fn sigma_zero(d: &SplitLie2Data) -> Sigma {
    vec![vec![vops::zero(d.table(), d.rank_b()); d.rank_q()]; d.rank_q()]
}

fn sigma_apply(d: &SplitLie2Data, sigma: &Sigma, u: &[Element], v: &[Element]) -> Vector {
    let mut out = vops::zero(d.table(), d.rank_b());
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if !ui.is_zero() && !vj.is_zero() {
                vops::add_assign(&mut out, &vops::scale(&(ui * vj), &sigma[i][j]));
            }
        }
    }
    out
}

/// New data after changing the splitting by `sigma`:
/// `[q1,q2]' = [q1,q2] - ell sigma(q1,q2)`,
/// `nabla'_q b = nabla_q b + ell*( sigma(q, .)^* b )`, and
/// `omega' = omega + d_{nabla*} sigma` computed with the new bracket.
pub fn change_of_splitting_transform(d: &SplitLie2Data, sigma: &Sigma) -> Result<SplitLie2Data> {
    let (rq, rb) = (d.rank_q(), d.rank_b());
    if sigma.len() != rq || sigma.iter().any(|r| r.len() != rq || r.iter().any(|v| v.len() != rb)) {
        return Err(Error::Input(format!("sigma must have shape {rq}x{rq}x{rb}")));
    }
    for i in 0..rq {
        for j in 0..rq {
            for mm in 0..rb {
                require_base(&sigma[i][j][mm], "sigma component")?;
                if sigma[i][j][mm] != -&sigma[j][i][mm] {
                    return Err(Error::Input("sigma must be alternating".into()));
                }
            }
        }
    }
    let mut out = d.clone();
    for i in 0..rq {
        for j in 0..rq {
            let corr = d.ell(&sigma[i][j]);
            out.dull.bracket[i][j] = vops::sub(&d.dull.bracket[i][j], &corr);
        }
    }
    for a in 0..rq {
        for mm in 0..rb {
            for n in 0..rb {
                let mut e = d.nabla[a][mm][n].clone();
                for k in 0..rq {
                    e += &d.ell[n][k] * &sigma[a][k][mm];
                }
                out.nabla[a][mm][n] = e;
            }
        }
    }
    // d_{nabla*} sigma with the new bracket and the old dual connection
    let mut mixed = out.clone();
    mixed.nabla = d.nabla.clone();
    let sg = |u: &[Element], v: &[Element]| sigma_apply(d, sigma, u, v);
    for idx in increasing(rq, 3) {
        let qs = [d.q_frame(idx[0]), d.q_frame(idx[1]), d.q_frame(idx[2])];
        let ds = mixed.koszul2(&sg, &qs);
        for mm in 0..rb {
            let e = &d.omega[idx[0]][idx[1]][idx[2]][mm] + &ds[mm];
            out.set_omega(idx[0], idx[1], idx[2], mm, e)?;
        }
    }
    Ok(out)
}

/// Algebra automorphism `b^m -> b^m + sum_{i<j} sigma_ij^m tau^i tau^j`
/// (and `-sigma` for the inverse) relating the two splittings.
pub fn splitting_automorphism(d: &SplitLie2Data, sigma: &Sigma, inverse: bool) -> impl Fn(&Element) -> Element {
    let t = d.table().clone();
    let rq = d.rank_q();
    let s = sign(inverse);
    let mut images: Vec<Element> = (0..t.len()).map(|g| Element::generator(&t, g)).collect();
    for mm in 0..d.rank_b() {
        for idx in increasing(rq, 2) {
            let c = &sigma[idx[0]][idx[1]][mm];
            if !c.is_zero() {
                images[d.b(mm)] += (c * &d.dull.form_monomial(&idx)).scale(&s);
            }
        }
    }
    move |e: &Element| e.substitute(&t, &|g| images[g].clone())
}

fn dotted(name: &str) -> String {
    format!("{name}_dot")
}

/// Tangent prolongation over `Q[x, x_dot]`, with frames `Tq_a` (dual to
/// `tau^a`) and `q_a^dagger` (dual to `tau^a_dot`), likewise for `B*`.
///
/// Built by lifting `Q`: with `delta` the degree-0 derivation `xi -> xi_dot`,
/// `Q_T(xi) = Q(xi)` and `Q_T(xi_dot) = delta(Q(xi))`.
pub fn tangent_prolongation(d: &SplitLie2Data) -> Result<SplitLie2Data> {
    let m = d.manifold();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let names = |r: std::ops::Range<usize>, all: &dyn Fn(usize) -> String| -> Vec<String> {
        let mut v: Vec<String> = r.clone().map(all).collect();
        v.extend(r.map(|i| dotted(&all(i))));
        v
    };
    let base = names(0..m.base_count(), &|s| m.base_vars()[s].clone());
    let qn = names(0..rq, &|a| m.frame_name(a).to_string());
    let bn = names(0..rb, &|n| m.frame_name(rq + n).to_string());
    let as_refs = |v: &[String]| -> Vec<String> { v.to_vec() };
    let (base, qn, bn) = (as_refs(&base), as_refs(&qn), as_refs(&bn));
    let b_ref: Vec<&str> = base.iter().map(String::as_str).collect();
    let q_ref: Vec<&str> = qn.iter().map(String::as_str).collect();
    let bb_ref: Vec<&str> = bn.iter().map(String::as_str).collect();
    let out = SplitLie2Data::zero(&b_ref, &q_ref, &bb_ref)?;
    let t = out.table().clone();
    let nb = m.base_count();
    // old generator -> (plain index, dotted index) in the new table
    let lift = |g: usize| -> (usize, usize) {
        if g < nb {
            (g, nb + g)
        } else if g < nb + rq {
            let a = g - nb;
            (out.tau(a), out.tau(rq + a))
        } else {
            let n = g - nb - rq;
            (out.b(n), out.b(rb + n))
        }
    };
    let plain: Vec<usize> = (0..d.table().len()).map(|g| lift(g).0).collect();
    let mut delta_images = vec![Element::zero(&t); t.len()];
    for g in 0..d.table().len() {
        let (p, dt) = lift(g);
        delta_images[p] = Element::generator(&t, dt);
    }
    let delta = Derivation::new(&t, 0, delta_images)?;
    let q = q_from_data(d)?;
    let mut images = vec![Element::zero(&t); t.len()];
    for g in 0..d.table().len() {
        let (p, dt) = lift(g);
        let img = q.image(g).embed(&t, &plain);
        images[dt] = delta.apply(&img);
        images[p] = img;
    }
    let qt = Derivation::new(&t, 1, images)?;
    data_from_q(&out, &qt)
}

/// `T u = sum u_a Tq_a + (u_a)_dot q_a^dagger` for a section on the original base.
pub fn tangent_lift(d: &SplitLie2Data, prolonged: &SplitLie2Data, u: &[Element]) -> Vector {
    let t = prolonged.table();
    let nb = d.manifold().base_count();
    let map: Vec<usize> = (0..d.table().len()).collect();
    let mut delta_images = vec![Element::zero(t); t.len()];
    for s in 0..nb {
        delta_images[s] = Element::generator(t, nb + s);
    }
    let delta = Derivation::new(t, 0, delta_images).expect("degree-0 base derivation");
    let rq = d.rank_q();
    let mut out = vops::zero(t, 2 * rq);
    for (a, c) in u.iter().enumerate() {
        let c = c.embed(t, &map);
        out[rq + a] = delta.apply(&c);
        out[a] = c;
    }
    out
}

/// `u^dagger`: the core lift of a section on the original base.
pub fn core_lift(d: &SplitLie2Data, prolonged: &SplitLie2Data, u: &[Element]) -> Vector {
    let t = prolonged.table();
    let map: Vec<usize> = (0..d.table().len()).collect();
    let rq = d.rank_q();
    let mut out = vops::zero(t, 2 * rq);
    for (a, c) in u.iter().enumerate() {
        out[rq + a] = c.embed(t, &map);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, t: &Table) -> Element {
        Element::parse(s, t).unwrap()
    }

    pub(crate) fn so3(b_names: &[&str]) -> SplitLie2Data {
        let mut d = SplitLie2Data::zero(&[], &["e1", "e2", "e3"], b_names).unwrap();
        let t = d.table().clone();
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            d.dull_mut().set_bracket(i, j, k, Element::one(&t)).unwrap();
        }
        d
    }

    #[test]
    fn so3_differential_and_q() {
        let d = so3(&[]);
        let t = d.table().clone();
        assert_eq!(dull_differential(d.dull(), &p("e1", &t)).unwrap(), p("-e2*e3", &t));
        let q = q_from_data(&d).unwrap();
        assert_eq!(q.image(0), &p("-e2*e3", &t));
        assert_eq!(q.image(1), &p("e1*e3", &t));
        assert!(check_axioms(&d).passed());
        assert_eq!(data_from_q(&d, &q).unwrap(), d);
    }

    #[test]
    fn differential_on_functions_is_anchor_dual() {
        let mut dull = DullAlgebroid::zero(&["x"], &["a"]).unwrap();
        let t = dull.table().clone();
        dull.set_anchor(0, 0, Element::one(&t)).unwrap();
        assert_eq!(dull.differential(&p("x^2", &t)).unwrap(), p("2*x*a", &t));
        assert!(dull.differential(&p("a", &t)).unwrap().is_zero());
    }

    #[test]
    fn ell_only() {
        let mut d = SplitLie2Data::zero(&[], &["t"], &["b"]).unwrap();
        let t = d.table().clone();
        d.set_ell(0, 0, Element::one(&t)).unwrap();
        let q = q_from_data(&d).unwrap();
        assert_eq!(q.image(0), &p("b", &t));
        assert!(q.image(1).is_zero());
        assert!(check_axioms(&d).passed());
        assert_eq!(data_from_q(&d, &q).unwrap(), d);
    }

    #[test]
    fn omega_must_alternate() {
        let mut d = SplitLie2Data::zero(&["x"], &["q1", "q2"], &["b"]).unwrap();
        let t = d.table().clone();
        assert!(d.set_omega(0, 0, 1, 0, Element::one(&t)).is_err());
        assert!(d.dull_mut().set_bracket(1, 1, 0, Element::one(&t)).is_err());
        assert!(d.set_ell(0, 0, p("q1", &t)).is_err());
    }

    #[test]
    fn basic_data_tm1() {
        let mut dull = DullAlgebroid::zero(&["x"], &["a"]).unwrap();
        let t = dull.table().clone();
        dull.set_anchor(0, 0, Element::one(&t)).unwrap();
        let mut nabla = LinearConnection::zero(dull.manifold(), 1);
        nabla.symbols[0][0][0] = p("x", &t);
        let (b, r) = basic_data(&dull, &nabla).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        // nabla^bas_a a = nabla_{d/dx} a = x a ; nabla^bas_a d/dx = rho(x a) = x d/dx
        assert_eq!(b.on_q(&dull.frame(0), &dull.frame(0)), vec![p("x", &t)]);
        assert_eq!(b.on_tm(&dull.frame(0), &[Element::one(&t)]), vec![p("x", &t)]);
    }

    #[test]
    fn basic_identity_without_anchor_reduces_to_jacobi() {
        // rho = 0: the basic connection on Q is the bracket and the basic
        // curvature term drops, so the Jacobiator is the curvature of ad
        let mut dull = DullAlgebroid::zero(&[], &["u", "v", "w"]).unwrap();
        let t = dull.table().clone();
        dull.set_bracket(0, 1, 2, Element::one(&t)).unwrap();
        dull.set_bracket(1, 2, 2, Element::one(&t)).unwrap();
        dull.set_bracket(0, 2, 0, Element::one(&t)).unwrap();
        let nabla = LinearConnection::zero(dull.manifold(), 3);
        let (b, r) = basic_data(&dull, &nabla).unwrap();
        assert!(r.passed());
        let (q0, q1, q2) = (dull.frame(0), dull.frame(1), dull.frame(2));
        assert_eq!(dull.jacobiator(&q0, &q1, &q2), b.curvature_q(&q0, &q1, &q2));
        assert!(!vops::is_zero(&dull.jacobiator(&q0, &q1, &q2)));
    }

    #[test]
    fn prolongation_of_so3() {
        let d = so3(&[]);
        let tp = tangent_prolongation(&d).unwrap();
        assert_eq!(tp.rank_q(), 6);
        assert!(check_axioms(&tp).passed());
        // [Tq1, q2^dagger] = [q1, q2]^dagger and [q1^dagger, q2^dagger] = 0
        let (a, b) = (d.q_frame(0), d.q_frame(1));
        let lhs = tp.dull().bracket(&tangent_lift(&d, &tp, &a), &core_lift(&d, &tp, &b));
        assert_eq!(lhs, core_lift(&d, &tp, &d.dull().bracket(&a, &b)));
        assert!(vops::is_zero(&tp.dull().bracket(&core_lift(&d, &tp, &a), &core_lift(&d, &tp, &b))));
    }
}
