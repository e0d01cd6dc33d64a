//! The Weil algebra `W(M) = C(T[1]M)`: the generators of `M` together with
//! one `d`-generator per original generator, one degree higher.

use crate::algebra::{same_table, Element, GeneratorTable, Monomial, Table};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

#[derive(Debug, Clone)]
pub struct WeilAlgebra {
    base: Table,
    table: Table,
}

impl WeilAlgebra {
    /// Names the new generators `d<name>`.
    pub fn new(base: &Table) -> Result<Self> {
        let mut entries: Vec<(String, i32)> = base.entries().map(|(n, d)| (n.to_string(), d)).collect();
        entries.extend(base.entries().map(|(n, d)| (format!("d{n}"), d + 1)));
        let table = GeneratorTable::new(entries)?;
        Ok(WeilAlgebra { base: base.clone(), table })
    }

    pub fn base(&self) -> &Table {
        &self.base
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Index of `d xi` for the base generator `g`.
    pub fn d_gen(&self, g: usize) -> usize {
        self.base.len() + g
    }

    pub fn is_d_gen(&self, g: usize) -> bool {
        g >= self.base.len()
    }

    /// A function on `M` as a 0-form.
    pub fn embed(&self, e: &Element) -> Result<Element> {
        if !same_table(e.table(), &self.base) {
            return Err(Error::TableMismatch);
        }
        let map: Vec<usize> = (0..self.base.len()).collect();
        Ok(e.embed(&self.table, &map))
    }

    /// `(p, q)` with `p` the number of `d`-factors and `p + q` the total degree.
    pub fn bidegree(&self, m: &Monomial) -> (usize, i32) {
        let p = m.factors().filter(|&g| self.is_d_gen(g)).count();
        (p, m.degree(&self.table) - p as i32)
    }

    /// `Some((p, q))` when every term of `e` has the same bidegree.
    pub fn bidegree_of(&self, e: &Element) -> Option<(usize, i32)> {
        let mut it = e.terms().map(|(m, _)| self.bidegree(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    fn lift_check(&self, x: &Derivation) -> Result<()> {
        if !same_table(x.table(), &self.base) {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    /// `d(xi) = d xi`, `d(d xi) = 0`.
    pub fn de_rham(&self) -> Derivation {
        let n = self.base.len();
        let images = (0..self.table.len())
            .map(|g| if g < n { Element::generator(&self.table, n + g) } else { Element::zero(&self.table) })
            .collect();
        Derivation::new(&self.table, 1, images).expect("de Rham degrees")
    }

    /// `i_X(xi) = 0`, `i_X(d xi) = X(xi)`.
    pub fn iota(&self, x: &Derivation) -> Result<Derivation> {
        self.lift_check(x)?;
        let n = self.base.len();
        let mut images = vec![Element::zero(&self.table); self.table.len()];
        for g in 0..n {
            images[n + g] = self.embed(x.image(g))?;
        }
        Derivation::new(&self.table, x.degree() - 1, images)
    }

    /// `L_X = [i_X, d]`.
    pub fn lie(&self, x: &Derivation) -> Result<Derivation> {
        Ok(self.iota(x)?.commutator(&self.de_rham()))
    }

    /// The Cartan identities for `X`, `Y`, and the module rules for
    /// `xi X` with `xi` running over the generators of `M`.
    pub fn cartan_report(&self, x: &Derivation, y: &Derivation) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new("Cartan calculus");
        let d = self.de_rham();
        let (ix, iy, lx, ly) = (self.iota(x)?, self.iota(y)?, self.lie(x)?, self.lie(y)?);
        let xy = x.commutator(y);
        let mut put = |identity: &str, lhs: &Derivation, rhs: &Derivation| {
            for g in 0..self.table.len() {
                let r = lhs.image(g) - rhs.image(g);
                rep.residual(identity, "Cartan identities", self.table.name(g).to_string(), &r);
            }
        };
        let zero = Derivation::zero(&self.table, 0);
        put("[i_X, i_Y] = 0", &ix.commutator(&iy), &zero);
        put("[L_X, i_Y] = i_[X,Y]", &lx.commutator(&iy), &self.iota(&xy)?);
        put("[L_X, L_Y] = L_[X,Y]", &lx.commutator(&ly), &self.lie(&xy)?);
        put("[d, L_X] = 0", &d.commutator(&lx), &zero);
        put("[d, d] = 0", &d.commutator(&d), &zero);
        for g in 0..self.base.len() {
            let xi = Element::generator(&self.base, g);
            let xi_x = x.left_mul(&xi)?;
            let wxi = self.embed(&xi)?;
            put(&format!("i_(xi X) = xi i_X, xi = {}", self.base.name(g)), &self.iota(&xi_x)?, &ix.left_mul(&wxi)?);
            // L_{xi X} = xi L_X + (-1)^{|xi| + |X|} d xi i_X
            let dxi = Element::generator(&self.table, self.d_gen(g));
            let s = crate::algebra::sign(crate::algebra::is_odd(self.base.degree(g) + x.degree()));
            let rhs = lx.left_mul(&wxi)?.add(&ix.left_mul(&dxi)?.scale(&s))?;
            put(&format!("L_(xi X) = xi L_X + (-1)^(|xi|+|X|) dxi i_X, xi = {}", self.base.name(g)), &self.lie(&xi_x)?, &rhs);
        }
        Ok(rep)
    }

    /// `L_Q^2 = 0`, `d^2 = 0` and `[L_Q, d] = 0` on generators.
    pub fn bicomplex_check(&self, q: &Derivation) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new("Weil bicomplex");
        let d = self.de_rham();
        let lq = self.lie(q)?;
        let lq2 = lq.square_on_generators();
        let d2 = d.square_on_generators();
        let mixed = lq.commutator(&d);
        for g in 0..self.table.len() {
            let at = self.table.name(g).to_string();
            rep.residual("L_Q^2 = 0", "double complex", at.clone(), &lq2[g]);
            rep.residual("d^2 = 0", "double complex", at.clone(), &d2[g]);
            rep.residual("[L_Q, d] = 0", "double complex", at, mixed.image(g));
        }
        Ok(rep)
    }
}
