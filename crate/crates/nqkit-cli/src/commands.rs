//! Command dispatch: one input document in, reports and constructed data out.

use nqkit::courant::{check_courant, point_realization, split_symplectic_lie2, CourantData, QuadraticLieAlgebra};
use nqkit::lie2::{check_axioms, increasing, q_from_data, tangent_prolongation, LinearConnection, SplitLie2Data};
use nqkit::nq::{brackets_from_q, q_from_brackets, verify_l_infinity, MultiBrackets, SplitNManifold};
use nqkit::poisson::{check_poisson, check_pq, deformation_check, homotopy_classify, poisson_weil_check, Bivector, DeformationMode, MultivectorAlgebra};
use nqkit::ruth::{adjoint_rep, check_adjoint_module_iso, check_morphism, check_rep3, curvature_and_gtr, is_exact, AdjointConnections, Mat, Rep3Data, RepMorphism};
use nqkit::weil::WeilAlgebra;
use nqkit::{is_homological, Derivation, Element, Table, VerificationReport};
use serde_json::{json, Map, Value};

use crate::doc::{array, at, entries, err, expr, field, index, int, join, lookup, matrix, object, string, vector, DResult, Doc, DocError};

pub const COMMANDS: [&str; 20] = [
    "check q2",
    "check linfty",
    "check lie2",
    "build q",
    "extract brackets",
    "build adjoint",
    "check rep3",
    "check morphism",
    "check poisson",
    "check pq",
    "check poisson-weil",
    "classify homotopy",
    "check deformation",
    "check courant",
    "realize courant-point",
    "build split-symplectic",
    "suite cartan",
    "suite bicomplex",
    "tangent-prolong",
    "is-exact",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub poly_cap: usize,
    pub kmax: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { poly_cap: 2, kmax: 2 }
    }
}

/// Reports plus command-specific data.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub data: Map<String, Value>,
    /// Verdicts that are not identities (e.g. exactness).
    pub verdicts: Vec<(String, bool)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed) && self.verdicts.iter().all(|(_, ok)| *ok)
    }

    fn report(mut self, r: VerificationReport) -> Self {
        self.reports.push(r);
        self
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.data.insert(key.to_string(), v);
        self
    }

    pub fn to_json(&self, command: &str) -> Value {
        let reports: Vec<Value> = self
            .reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("report serializes");
                v["status"] = json!(status(r.passed()));
                v
            })
            .collect();
        let mut out = Map::new();
        out.insert("format".into(), json!(1));
        out.insert("command".into(), json!(command));
        out.insert("status".into(), json!(status(self.passed())));
        out.insert("reports".into(), Value::Array(reports));
        if !self.verdicts.is_empty() {
            let v: Map<String, Value> = self.verdicts.iter().map(|(k, ok)| (k.clone(), json!(status(*ok)))).collect();
            out.insert("verdicts".into(), Value::Object(v));
        }
        for (k, v) in &self.data {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    pub fn to_text(&self, command: &str) -> String {
        let mut s = format!("{command}: {}\n", status(self.passed()));
        for r in &self.reports {
            s.push_str(&r.to_text());
        }
        for (k, ok) in &self.verdicts {
            s.push_str(&format!("{k}: {}\n", status(*ok)));
        }
        for (k, v) in &self.data {
            s.push_str(&format!("{k}: {}\n", serde_json::to_string_pretty(v).expect("json")));
        }
        s
    }
}

pub fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn run(command: &str, doc: &Doc, opts: &Options) -> DResult<Outcome> {
    match command {
        "check q2" => check_q2(doc),
        "check linfty" => check_linfty(doc),
        "check lie2" => Ok(Outcome::default().report(check_axioms(&lie2(doc)?))),
        "build q" => build_q(doc),
        "extract brackets" => extract_brackets(doc),
        "build adjoint" => build_adjoint(doc, opts),
        "check rep3" => check_rep3_cmd(doc, opts),
        "check morphism" => check_morphism_cmd(doc),
        "check poisson" => {
            let (_, pi) = bivector(doc)?;
            Ok(Outcome::default().report(at("$", check_poisson(&pi))?))
        }
        "check pq" => {
            let (_, pi) = bivector(doc)?;
            let q = derivation(doc, "q", pi.alg().base(), 1)?;
            Ok(Outcome::default().report(at("$", check_pq(&q, &pi))?))
        }
        "check poisson-weil" => {
            let (_, pi) = bivector(doc)?;
            let q = derivation(doc, "q", pi.alg().base(), 1)?;
            Ok(Outcome::default().report(at("$", poisson_weil_check(&q, &pi))?))
        }
        "classify homotopy" => classify(doc),
        "check deformation" => deformation(doc),
        "check courant" => Ok(Outcome::default().report(check_courant(&courant(doc)?))),
        "realize courant-point" => realize(doc),
        "build split-symplectic" => split_symplectic(doc),
        "suite cartan" => cartan(doc),
        "suite bicomplex" => {
            let t = doc.table()?;
            let q = derivation(doc, "q", &t, 1)?;
            let w = at("$", WeilAlgebra::new(&t))?;
            Ok(Outcome::default().report(at("$.q", w.bicomplex_check(&q))?))
        }
        "tangent-prolong" => prolong(doc),
        "is-exact" => exact(doc, opts),
        other => err("command", format!("unknown command `{other}`; expected one of: {}", COMMANDS.join(", "))),
    }
}

fn names_of(t: &Table) -> Vec<String> {
    t.entries().map(|(n, _)| n.to_string()).collect()
}

/// `{generator: expr}` images of a derivation of the given degree.
fn derivation(doc: &Doc, key: &str, t: &Table, degree: i32) -> DResult<Derivation> {
    let path = Doc::path(key);
    let images = vector(doc.require(key)?, &path, &names_of(t), "generator", t)?;
    at(&path, Derivation::new(t, degree, images))
}

fn derivation_json(q: &Derivation) -> Value {
    let t = q.table();
    let m: Map<String, Value> = (0..t.len()).filter(|&g| !q.image(g).is_zero()).map(|g| (t.name(g).to_string(), json!(q.image(g).to_string()))).collect();
    Value::Object(m)
}

fn check_q2(doc: &Doc) -> DResult<Outcome> {
    let t = doc.table()?;
    let q = derivation(doc, "q", &t, 1)?;
    Ok(Outcome::default().report(is_homological(&q)))
}

/// `anchor: {frame: {x: expr}}`, `brackets: [{args, value: {frame: expr}}]`.
fn multibrackets(doc: &Doc, m: &SplitNManifold) -> DResult<MultiBrackets> {
    let t = m.table();
    let frames: Vec<String> = (0..m.frame_count()).map(|f| m.frame_name(f).to_string()).collect();
    let mut b = MultiBrackets::zero(m);
    if let Some(a) = doc.get("anchor") {
        b.anchor = matrix(a, "$.anchor", &frames, m.base_vars(), "frame or base variable", t)?;
    }
    if let Some(v) = doc.get("brackets") {
        for (args, value, p) in entries(v, "$.brackets", &frames, "frame")? {
            let val = vector(value, &p, &frames, "frame", t)?;
            at(&p, b.set(m, &args, val))?;
        }
    }
    at("$.brackets", b.validate(m))?;
    Ok(b)
}

fn multibrackets_json(m: &SplitNManifold, b: &MultiBrackets) -> Value {
    let frames: Vec<String> = (0..m.frame_count()).map(|f| m.frame_name(f).to_string()).collect();
    let mut anchor = Map::new();
    for (f, row) in b.anchor.iter().enumerate() {
        let r: Map<String, Value> =
            row.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(s, e)| (m.base_vars()[s].clone(), json!(e.to_string()))).collect();
        if !r.is_empty() {
            anchor.insert(frames[f].clone(), Value::Object(r));
        }
    }
    let brackets: Vec<Value> = b
        .brackets
        .iter()
        .filter(|(_, v)| v.iter().any(|e| !e.is_zero()))
        .map(|(key, v)| {
            let val: Map<String, Value> =
                v.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(f, e)| (frames[f].clone(), json!(e.to_string()))).collect();
            json!({"args": key.iter().map(|&f| frames[f].clone()).collect::<Vec<_>>(), "value": val})
        })
        .collect();
    json!({"anchor": anchor, "brackets": brackets})
}

fn check_linfty(doc: &Doc) -> DResult<Outcome> {
    let m = doc.manifold()?;
    let b = multibrackets(doc, &m)?;
    let q = at("$.brackets", q_from_brackets(&m, &b))?;
    Ok(Outcome::default().report(verify_l_infinity(&m, &b)).report(is_homological(&q)))
}

fn build_q(doc: &Doc) -> DResult<Outcome> {
    if doc.get("q_frame").is_some() {
        let d = lie2(doc)?;
        let q = at("$", q_from_data(&d))?;
        return Ok(Outcome::default().report(is_homological(&q)).with("q", derivation_json(&q)));
    }
    let m = doc.manifold()?;
    let b = multibrackets(doc, &m)?;
    let q = at("$.brackets", q_from_brackets(&m, &b))?;
    Ok(Outcome::default().report(is_homological(&q)).with("q", derivation_json(&q)))
}

fn extract_brackets(doc: &Doc) -> DResult<Outcome> {
    let m = doc.manifold()?;
    let q = derivation(doc, "q", m.table(), 1)?;
    let b = at("$.q", brackets_from_q(&m, &q))?;
    let back = at("$.q", q_from_brackets(&m, &b))?;
    let mut rt = VerificationReport::new("bracket dictionary round trip");
    for g in 0..m.table().len() {
        rt.residual("q_from_brackets(brackets_from_q(Q)) = Q", "bracket dictionary", m.table().name(g), &(back.image(g) - q.image(g)));
    }
    Ok(Outcome::default().report(rt).report(verify_l_infinity(&m, &b)).with("brackets", multibrackets_json(&m, &b)))
}

/// Split Lie 2-algebroid data: `base_vars`, `q_frame`, `b_frame`, `anchor`,
/// `bracket`, `ell`, `nabla`, `omega`.
pub fn lie2(doc: &Doc) -> DResult<SplitLie2Data> {
    let base = doc.strings("base_vars")?;
    let qn = doc.strings("q_frame")?;
    if doc.get("q_frame").is_none() {
        return err("$", "missing field \"q_frame\"");
    }
    let bn = doc.strings("b_frame")?;
    let mut d = at("$", SplitLie2Data::zero(&strs(&base), &strs(&qn), &strs(&bn)))?;
    let t = d.table().clone();
    if let Some(a) = doc.get("anchor") {
        let mat = matrix(a, "$.anchor", &qn, &base, "frame or base variable", &t)?;
        for (i, row) in mat.into_iter().enumerate() {
            for (s, e) in row.into_iter().enumerate() {
                at("$.anchor", d.dull_mut().set_anchor(i, s, e))?;
            }
        }
    }
    if let Some(v) = doc.get("bracket") {
        for (args, value, p) in entries(v, "$.bracket", &qn, "Q frame")? {
            if args.len() != 2 {
                return err(&p, "the dull bracket takes two arguments");
            }
            for (k, e) in vector(value, &p, &qn, "Q frame", &t)?.into_iter().enumerate() {
                if !e.is_zero() {
                    at(&p, d.dull_mut().set_bracket(args[0], args[1], k, e))?;
                }
            }
        }
    }
    if let Some(v) = doc.get("ell") {
        for (m, row) in matrix(v, "$.ell", &bn, &qn, "frame", &t)?.into_iter().enumerate() {
            for (k, e) in row.into_iter().enumerate() {
                at("$.ell", d.set_ell(m, k, e))?;
            }
        }
    }
    if let Some(v) = doc.get("nabla") {
        for (qa, inner) in object(v, "$.nabla")? {
            let p = join("$.nabla", qa);
            let a = lookup(qa, &qn, "Q frame", &p)?;
            for (m, row) in matrix(inner, &p, &bn, &bn, "B frame", &t)?.into_iter().enumerate() {
                for (n, e) in row.into_iter().enumerate() {
                    at(&p, d.set_nabla(a, m, n, e))?;
                }
            }
        }
    }
    if let Some(v) = doc.get("omega") {
        for (args, value, p) in entries(v, "$.omega", &qn, "Q frame")? {
            if args.len() != 3 {
                return err(&p, "omega takes three arguments");
            }
            for (m, e) in vector(value, &p, &bn, "B frame", &t)?.into_iter().enumerate() {
                if !e.is_zero() {
                    at(&p, d.set_omega(args[0], args[1], args[2], m, e))?;
                }
            }
        }
    }
    at("$", d.validate())?;
    Ok(d)
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn sparse(v: &[Element], names: &[String]) -> Map<String, Value> {
    v.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (names[i].clone(), json!(e.to_string()))).collect()
}

/// The inverse of [`lie2`]: an input document for the same data.
pub fn lie2_json(d: &SplitLie2Data) -> Value {
    let m = d.manifold();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let base = m.base_vars().to_vec();
    let qn: Vec<String> = (0..rq).map(|a| m.frame_name(a).to_string()).collect();
    let bn: Vec<String> = (0..rb).map(|n| m.frame_name(rq + n).to_string()).collect();
    let mut anchor = Map::new();
    for (a, row) in d.dull().anchor().iter().enumerate() {
        let r = sparse(row, &base);
        if !r.is_empty() {
            anchor.insert(qn[a].clone(), Value::Object(r));
        }
    }
    let mut bracket = Vec::new();
    for idx in increasing(rq, 2) {
        let r = sparse(&d.dull().bracket_table()[idx[0]][idx[1]], &qn);
        if !r.is_empty() {
            bracket.push(json!({"args": [qn[idx[0]], qn[idx[1]]], "value": r}));
        }
    }
    let mut ell = Map::new();
    for (m_, row) in d.ell_table().iter().enumerate() {
        let r = sparse(row, &qn);
        if !r.is_empty() {
            ell.insert(bn[m_].clone(), Value::Object(r));
        }
    }
    let mut nabla = Map::new();
    for (a, rows) in d.nabla_table().iter().enumerate() {
        let mut inner = Map::new();
        for (m_, row) in rows.iter().enumerate() {
            let r = sparse(row, &bn);
            if !r.is_empty() {
                inner.insert(bn[m_].clone(), Value::Object(r));
            }
        }
        if !inner.is_empty() {
            nabla.insert(qn[a].clone(), Value::Object(inner));
        }
    }
    let mut omega = Vec::new();
    for idx in increasing(rq, 3) {
        let r = sparse(&d.omega_table()[idx[0]][idx[1]][idx[2]], &bn);
        if !r.is_empty() {
            omega.push(json!({"args": [qn[idx[0]], qn[idx[1]], qn[idx[2]]], "value": r}));
        }
    }
    json!({
        "format": 1,
        "base_vars": base,
        "q_frame": qn,
        "b_frame": bn,
        "anchor": anchor,
        "bracket": bracket,
        "ell": ell,
        "nabla": nabla,
        "omega": omega,
    })
}

/// `{x: {row: {col: expr}}}` connection symbols.
fn connection(v: Option<&Value>, path: &str, base: &[String], frame: &[String], t: &Table) -> DResult<LinearConnection> {
    let mut symbols = vec![vec![vec![Element::zero(t); frame.len()]; frame.len()]; base.len()];
    if let Some(v) = v {
        for (x, inner) in object(v, path)? {
            let p = join(path, x);
            let s = lookup(x, base, "base variable", &p)?;
            symbols[s] = matrix(inner, &p, frame, frame, "frame", t)?;
        }
    }
    Ok(LinearConnection { symbols })
}

fn adjoint_connections(doc: &Doc, d: &SplitLie2Data) -> DResult<AdjointConnections> {
    let m = d.manifold();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let qn: Vec<String> = (0..rq).map(|a| m.frame_name(a).to_string()).collect();
    let bn: Vec<String> = (0..rb).map(|n| m.frame_name(rq + n).to_string()).collect();
    let c = doc.get("connections");
    let part = |key: &str| c.and_then(|c| c.get(key));
    let on_q = connection(part("on_q"), "$.connections.on_q", m.base_vars(), &qn, d.table())?;
    let on_bdual = connection(part("on_bdual"), "$.connections.on_bdual", m.base_vars(), &bn, d.table())?;
    let conns = AdjointConnections { on_q, on_bdual };
    at("$.connections", conns.validate(d))?;
    Ok(conns)
}

fn rep_json(d: &SplitLie2Data, rep: &Rep3Data) -> Value {
    let m = d.manifold();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let qn: Vec<String> = (0..rq).map(|a| m.frame_name(a).to_string()).collect();
    let bn: Vec<String> = (0..rb).map(|n| m.frame_name(rq + n).to_string()).collect();
    let mat = |x: &Mat| -> Value {
        let mut o = Map::new();
        for (r, row) in x.iter().enumerate() {
            let s = sparse(row, &rep.names);
            if !s.is_empty() {
                o.insert(rep.names[r].clone(), Value::Object(s));
            }
        }
        Value::Object(o)
    };
    let nonzero = |x: &Mat| x.iter().flatten().any(|e| !e.is_zero());
    let conn: Map<String, Value> = rep.conn.iter().enumerate().filter(|(_, x)| nonzero(x)).map(|(a, x)| (qn[a].clone(), mat(x))).collect();
    let mut omega2 = Vec::new();
    for idx in increasing(rq, 2) {
        let x = &rep.omega2[idx[0]][idx[1]];
        if nonzero(x) {
            omega2.push(json!({"args": [qn[idx[0]], qn[idx[1]]], "value": mat(x)}));
        }
    }
    let mut omega3 = Vec::new();
    for idx in increasing(rq, 3) {
        let x = &rep.omega3[idx[0]][idx[1]][idx[2]];
        if nonzero(x) {
            omega3.push(json!({"args": [qn[idx[0]], qn[idx[1]], qn[idx[2]]], "value": mat(x)}));
        }
    }
    let phi0: Map<String, Value> = rep.phi0.iter().enumerate().filter(|(_, x)| nonzero(x)).map(|(n, x)| (bn[n].clone(), mat(x))).collect();
    let mut phi1 = Vec::new();
    for (n, row) in rep.phi1.iter().enumerate() {
        for (a, x) in row.iter().enumerate() {
            if nonzero(x) {
                phi1.push(json!({"args": [bn[n], qn[a]], "value": mat(x)}));
            }
        }
    }
    let frames: Vec<Value> = rep.names.iter().zip(&rep.levels).map(|(n, l)| json!({"name": n, "level": l})).collect();
    json!({
        "frames": frames,
        "partial": mat(&rep.partial),
        "conn": conn,
        "omega2": omega2,
        "omega3": omega3,
        "phi0": phi0,
        "phi1": phi1,
    })
}

/// A 3-term representation: `frames: [{name, level}]`, `partial`, `conn`,
/// `omega2`, `omega3`, `phi0`, `phi1`; matrices as `{row: {col: expr}}`
/// where row `r`, column `s` is the `e_s` coefficient of `X(e_r)`.
fn rep3(v: &Value, path: &str, d: &SplitLie2Data) -> DResult<Rep3Data> {
    let m = d.manifold();
    let (rq, rb) = (d.rank_q(), d.rank_b());
    let qn: Vec<String> = (0..rq).map(|a| m.frame_name(a).to_string()).collect();
    let bn: Vec<String> = (0..rb).map(|n| m.frame_name(rq + n).to_string()).collect();
    let o = object(v, path)?;
    let fp = join(path, "frames");
    let mut names = Vec::new();
    let mut levels = Vec::new();
    for (i, f) in array(field(o, "frames", path)?, &fp)?.iter().enumerate() {
        let p = index(&fp, i);
        let fo = object(f, &p)?;
        names.push(string(field(fo, "name", &p)?, &join(&p, "name"))?.to_string());
        levels.push(int(field(fo, "level", &p)?, &join(&p, "level"))? as usize);
    }
    let t = d.table();
    let mut rep = at(&fp, Rep3Data::zero(d, names.clone(), levels))?;
    let mat = |v: &Value, p: &str| matrix(v, p, &names, &names, "representation frame", t);
    if let Some(v) = o.get("partial") {
        rep.partial = mat(v, &join(path, "partial"))?;
    }
    if let Some(v) = o.get("conn") {
        let p = join(path, "conn");
        for (qa, x) in object(v, &p)? {
            let pp = join(&p, qa);
            rep.conn[lookup(qa, &qn, "Q frame", &pp)?] = mat(x, &pp)?;
        }
    }
    if let Some(v) = o.get("omega2") {
        for (args, x, p) in entries(v, &join(path, "omega2"), &qn, "Q frame")? {
            if args.len() != 2 {
                return err(&p, "omega2 takes two Q frames");
            }
            rep.set_omega2(args[0], args[1], mat(x, &p)?);
        }
    }
    if let Some(v) = o.get("omega3") {
        for (args, x, p) in entries(v, &join(path, "omega3"), &qn, "Q frame")? {
            if args.len() != 3 {
                return err(&p, "omega3 takes three Q frames");
            }
            rep.set_omega3(args[0], args[1], args[2], mat(x, &p)?);
        }
    }
    if let Some(v) = o.get("phi0") {
        let p = join(path, "phi0");
        for (b, x) in object(v, &p)? {
            let pp = join(&p, b);
            rep.phi0[lookup(b, &bn, "B frame", &pp)?] = mat(x, &pp)?;
        }
    }
    if let Some(v) = o.get("phi1") {
        let p = join(path, "phi1");
        for (i, e) in array(v, &p)?.iter().enumerate() {
            let pp = index(&p, i);
            let eo = object(e, &pp)?;
            let args = crate::doc::strings(field(eo, "args", &pp)?, &join(&pp, "args"))?;
            if args.len() != 2 {
                return err(&pp, "phi1 takes a B frame and a Q frame");
            }
            let n = lookup(&args[0], &bn, "B frame", &pp)?;
            let a = lookup(&args[1], &qn, "Q frame", &pp)?;
            rep.phi1[n][a] = mat(field(eo, "value", &pp)?, &join(&pp, "value"))?;
        }
    }
    at(path, rep.validate(d))?;
    Ok(rep)
}

fn cocycles(d: &SplitLie2Data, rep: &Rep3Data, kmax: usize) -> DResult<(VerificationReport, Value)> {
    let module = at("$.rep", rep.module(d))?;
    let (r, traces) = curvature_and_gtr(&module, kmax);
    let v: Vec<Value> = traces.iter().map(|e| json!(e.to_string())).collect();
    Ok((r, Value::Array(v)))
}

fn build_adjoint(doc: &Doc, opts: &Options) -> DResult<Outcome> {
    let d = lie2(doc)?;
    let conns = adjoint_connections(doc, &d)?;
    let rep = at("$", adjoint_rep(&d, &conns))?;
    let r = at("$", check_rep3(&d, &rep))?;
    let iso = at("$", check_adjoint_module_iso(&d, &conns))?;
    Ok(Outcome::default().report(r).report(iso).with("rep", rep_json(&d, &rep)).with("kmax", json!(opts.kmax)))
}

fn check_rep3_cmd(doc: &Doc, opts: &Options) -> DResult<Outcome> {
    let d = lie2(doc)?;
    let rep = rep3(doc.require("rep")?, "$.rep", &d)?;
    let out = Outcome::default().report(at("$.rep", check_rep3(&d, &rep))?);
    if opts.kmax == 0 {
        return Ok(out);
    }
    let (r, traces) = cocycles(&d, &rep, opts.kmax)?;
    Ok(out.report(r).with("gtr", traces))
}

fn check_morphism_cmd(doc: &Doc) -> DResult<Outcome> {
    let d = lie2(doc)?;
    let a = rep3(doc.require("source")?, "$.source", &d)?;
    let b = rep3(doc.require("target")?, "$.target", &d)?;
    let matrix_ = matrix(doc.require("morphism")?, "$.morphism", &a.names, &b.names, "representation frame", d.table())?;
    let mu = RepMorphism { matrix: matrix_, twist: None };
    Ok(Outcome::default().report(at("$.morphism", check_morphism(&d, &a, &b, &mu))?))
}

/// `k` and a bivector given by `poisson_brackets: [{args: [a, b], value}]`,
/// `darboux: [[q, p]]` or `pi: expr` on the multivector table.
fn bivector(doc: &Doc) -> DResult<(Table, Bivector)> {
    let t = doc.table()?;
    let alg = multivectors(doc, &t)?;
    match bivector_on(doc, &alg, &t)? {
        Some(pi) => Ok((t, pi)),
        None => err("$", "a bivector needs one of \"darboux\", \"pi\", \"poisson_brackets\""),
    }
}

fn multivectors(doc: &Doc, t: &Table) -> DResult<MultivectorAlgebra> {
    let k = doc.int("k")? as i32;
    at("$.k", MultivectorAlgebra::new(t, k))
}

fn bivector_on(doc: &Doc, alg: &MultivectorAlgebra, t: &Table) -> DResult<Option<Bivector>> {
    let names = names_of(t);
    let pi = if let Some(v) = doc.get("darboux") {
        let mut pairs = Vec::new();
        for (i, p) in array(v, "$.darboux")?.iter().enumerate() {
            let pp = index("$.darboux", i);
            let pair = crate::doc::strings(p, &pp)?;
            if pair.len() != 2 {
                return err(&pp, "a Darboux pair is [q, p]");
            }
            pairs.push((lookup(&pair[0], &names, "generator", &pp)?, lookup(&pair[1], &names, "generator", &pp)?));
        }
        at("$.darboux", Bivector::darboux(alg, &pairs))?
    } else if let Some(v) = doc.get("pi") {
        let e = expr(v, "$.pi", alg.table())?;
        at("$.pi", Bivector::new(alg, e))?
    } else if let Some(v) = doc.get("poisson_brackets") {
        let mut list = Vec::new();
        for (args, value, p) in entries(v, "$.poisson_brackets", &names, "generator")? {
            if args.len() != 2 {
                return err(&p, "a bracket entry has two arguments");
            }
            if args[0] >= args[1] {
                return err(&p, "give brackets {a, b} with a listed before b");
            }
            list.push((args[0], args[1], expr(value, &p, t)?));
        }
        at("$.poisson_brackets", Bivector::from_brackets(alg, &list))?
    } else {
        return Ok(None);
    };
    Ok(Some(pi))
}

/// `Theta` is the sum of the optional `q` (as a multivector), the optional
/// bivector and the optional `theta` expression.
fn classify(doc: &Doc) -> DResult<Outcome> {
    let t = doc.table()?;
    let alg = multivectors(doc, &t)?;
    let mut theta = Element::zero(alg.table());
    if doc.get("q").is_some() {
        let q = derivation(doc, "q", &t, 1)?;
        theta += at("$.q", alg.from_vector_field(&q))?;
    }
    if let Some(pi) = bivector_on(doc, &alg, &t)? {
        theta += pi.element().clone();
    }
    if doc.get("theta").is_some() {
        theta += doc.expr("theta", alg.table())?;
    }
    let c = at("$", homotopy_classify(&alg, &theta))?;
    Ok(Outcome::default()
        .with("theta", json!(theta.to_string()))
        .with("label", json!(c.label))
        .with("components", json!(c.components))
        .report(c.report))
}

fn deformation(doc: &Doc) -> DResult<Outcome> {
    let (t, pi) = bivector(doc)?;
    let q = derivation(doc, "q", &t, 1)?;
    let theta = doc.expr("deformation", pi.alg().table())?;
    let mode = match doc.string("mode")?.as_str() {
        "infinitesimal" => DeformationMode::Infinitesimal,
        "full" => DeformationMode::Full,
        other => return err("$.mode", format!("mode must be \"infinitesimal\" or \"full\", not `{other}`")),
    };
    Ok(Outcome::default().report(at("$.deformation", deformation_check(&q, &pi, &theta, mode))?))
}

/// `base_vars`, `frame`, `pairing: {a: {b: expr}}` (one triangle suffices),
/// `anchor: {a: {x: expr}}`, `bracket: [{args: [a, b], value: {c: expr}}]`
/// (not antisymmetrized).
fn courant(doc: &Doc) -> DResult<CourantData> {
    let base = doc.strings("base_vars")?;
    let frame = doc.strings("frame")?;
    if frame.is_empty() {
        return err("$.frame", "a Courant algebroid needs a nonempty frame");
    }
    let bt = at("$.base_vars", nqkit::GeneratorTable::new(base.iter().map(|s| (s.as_str(), 0))))?;
    let mut g = matrix(doc.require("pairing")?, "$.pairing", &frame, &frame, "frame", &bt)?;
    let n = frame.len();
    for i in 0..n {
        for j in 0..n {
            if g[i][j].is_zero() && !g[j][i].is_zero() {
                g[i][j] = g[j][i].clone();
            }
        }
    }
    let mut d = at("$.pairing", CourantData::on(&bt, &strs(&frame), g))?;
    if let Some(a) = doc.get("anchor") {
        for (i, row) in matrix(a, "$.anchor", &frame, &base, "frame or base variable", &bt)?.into_iter().enumerate() {
            for (s, e) in row.into_iter().enumerate() {
                at("$.anchor", d.set_anchor(i, s, e))?;
            }
        }
    }
    if let Some(v) = doc.get("bracket") {
        for (args, value, p) in entries(v, "$.bracket", &frame, "frame")? {
            if args.len() != 2 {
                return err(&p, "the bracket takes two arguments");
            }
            for (c, e) in vector(value, &p, &frame, "frame", &bt)?.into_iter().enumerate() {
                at(&p, d.set_bracket(args[0], args[1], c, e))?;
            }
        }
    }
    Ok(d)
}

fn realize(doc: &Doc) -> DResult<Outcome> {
    let d = courant(doc)?;
    let pre = check_courant(&d);
    if !pre.passed() {
        return Ok(Outcome::default().with("master_equation", json!("fail")).report(pre));
    }
    let qla = at("$.base_vars", QuadraticLieAlgebra::from_data(d))?;
    let r = at("$", point_realization(&qla))?;
    let me = !r.report.failed("{Theta,Theta}");
    let recovery = !r.report.failed("{e2,{e1,Theta}}") && !r.report.failed("{{e,Theta},f}");
    Ok(Outcome::default()
        .with("theta", json!(r.theta.to_string()))
        .with("pi", json!(r.pi.element().to_string()))
        .with("master_equation", json!(status(me)))
        .with("bracket_recovery", json!(status(recovery)))
        .report(r.report))
}

fn split_symplectic(doc: &Doc) -> DResult<Outcome> {
    let d = courant(doc)?;
    let pre = check_courant(&d);
    if !pre.passed() {
        return Ok(Outcome::default().report(pre));
    }
    let base = names_of(d.base());
    let nabla = connection(doc.get("connection"), "$.connection", &base, d.names(), d.base())?;
    let out = at("$.connection", split_symplectic_lie2(&d, &nabla))?;
    let q = at("$", q_from_data(&out))?;
    Ok(Outcome::default().report(pre).report(check_axioms(&out)).report(is_homological(&q)).with("lie2", lie2_json(&out)))
}

/// `vector_fields: [{name, degree, images: {generator: expr}}]`; every
/// ordered pair is checked.
fn cartan(doc: &Doc) -> DResult<Outcome> {
    let t = doc.table()?;
    let names = names_of(&t);
    let w = at("$", WeilAlgebra::new(&t))?;
    let path = "$.vector_fields";
    let mut fields = Vec::new();
    for (i, f) in array(doc.require("vector_fields")?, path)?.iter().enumerate() {
        let p = index(path, i);
        let o = object(f, &p)?;
        let name = string(field(o, "name", &p)?, &join(&p, "name"))?.to_string();
        let degree = int(field(o, "degree", &p)?, &join(&p, "degree"))? as i32;
        let images = vector(field(o, "images", &p)?, &join(&p, "images"), &names, "generator", &t)?;
        fields.push((name, at(&p, Derivation::new(&t, degree, images))?));
    }
    let mut out = Outcome::default();
    for (nx, x) in &fields {
        for (ny, y) in &fields {
            let mut r = at(path, w.cartan_report(x, y))?;
            r.name = format!("Cartan calculus (X = {nx}, Y = {ny})");
            out.reports.push(r);
        }
    }
    Ok(out)
}

fn prolong(doc: &Doc) -> DResult<Outcome> {
    let d = lie2(doc)?;
    let tp = at("$", tangent_prolongation(&d))?;
    let mut before = check_axioms(&d);
    before.name = "split Lie 2-algebroid (input)".into();
    let mut after = check_axioms(&tp);
    after.name = "split Lie 2-algebroid (tangent prolongation)".into();
    Ok(Outcome::default().report(before).report(after).with("lie2", lie2_json(&tp)))
}

fn exact(doc: &Doc, opts: &Options) -> DResult<Outcome> {
    let t = doc.table()?;
    let q = derivation(doc, "q", &t, 1)?;
    let eta = doc.expr("eta", &t)?;
    let mut closed = VerificationReport::new("closedness");
    closed.residual("Q eta = 0", "exactness requires a cocycle", "eta", &q.apply(&eta));
    let prim = at("$.eta", is_exact(&q, &eta, opts.poly_cap))?;
    let mut out = Outcome::default().report(closed).with("poly_cap", json!(opts.poly_cap));
    out.verdicts.push(("exact".into(), prim.is_some()));
    if let Some(p) = prim {
        out = out.with("primitive", json!(p.to_string()));
    }
    Ok(out)
}

/// Run and map every input problem to a [`DocError`].
pub fn run_text(command: &str, text: &str, opts: &Options) -> Result<Outcome, DocError> {
    let doc = Doc::parse(text)?;
    run(command, &doc, opts)
}
