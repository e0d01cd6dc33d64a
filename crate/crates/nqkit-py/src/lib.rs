//! Python module `nqkit`: the JSON command front end and a small algebra API.

use ::nqkit::{is_homological as homological, Derivation, Element, GeneratorTable, Table};
use nqkit_cli::{run_text, Options, COMMANDS};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Names of the commands accepted by `run`.
#[pyfunction]
fn commands() -> Vec<&'static str> {
    COMMANDS.to_vec()
}

/// Run one command on a JSON document; returns `(passed, report_json)`.
/// Input errors raise `ValueError` with the JSON path of the problem.
#[pyfunction]
#[pyo3(signature = (command, document, poly_cap = 2, kmax = 2))]
fn run(command: &str, document: &str, poly_cap: usize, kmax: usize) -> PyResult<(bool, String)> {
    let out = run_text(command, document, &Options { poly_cap, kmax }).map_err(value_error)?;
    Ok((out.passed(), out.to_json(command).to_string()))
}

/// Free graded-commutative algebra on named generators of given degrees.
#[pyclass(module = "nqkit", frozen)]
struct Algebra {
    table: Table,
}

#[pymethods]
impl Algebra {
    #[new]
    fn new(generators: Vec<(String, i32)>) -> PyResult<Self> {
        Ok(Algebra { table: GeneratorTable::new(generators).map_err(value_error)? })
    }

    fn generators(&self) -> Vec<(String, i32)> {
        self.table.entries().map(|(n, d)| (n.to_string(), d)).collect()
    }

    /// Canonical form of an expression.
    fn canonical(&self, expr: &str) -> PyResult<String> {
        Ok(self.parse(expr)?.to_string())
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        Ok((&self.parse(a)? * &self.parse(b)?).to_string())
    }

    /// Degree of a homogeneous expression, `None` for zero.
    fn degree(&self, expr: &str) -> PyResult<Option<i32>> {
        let e = self.parse(expr)?;
        if e.is_zero() {
            return Ok(None);
        }
        e.degree().map(Some).ok_or_else(|| value_error(format!("`{expr}` is not homogeneous")))
    }

    /// Apply the derivation with the given images (missing generators map to 0).
    fn apply(&self, degree: i32, images: Vec<(String, String)>, expr: &str) -> PyResult<String> {
        Ok(self.derivation(degree, images)?.apply(&self.parse(expr)?).to_string())
    }

    /// `Q^2` on every generator, as canonical strings.
    fn q_squared(&self, images: Vec<(String, String)>) -> PyResult<Vec<(String, String)>> {
        let q = self.derivation(1, images)?;
        Ok(q.square_on_generators().iter().enumerate().map(|(g, e)| (self.table.name(g).to_string(), e.to_string())).collect())
    }

    fn is_homological(&self, images: Vec<(String, String)>) -> PyResult<bool> {
        Ok(homological(&self.derivation(1, images)?).passed())
    }
}

impl Algebra {
    fn parse(&self, expr: &str) -> PyResult<Element> {
        Element::parse(expr, &self.table).map_err(value_error)
    }

    fn derivation(&self, degree: i32, images: Vec<(String, String)>) -> PyResult<Derivation> {
        let mut dense = vec![Element::zero(&self.table); self.table.len()];
        for (name, image) in images {
            let g = self.table.index_of(&name).ok_or_else(|| value_error(format!("unknown generator `{name}`")))?;
            dense[g] = self.parse(&image)?;
        }
        Derivation::new(&self.table, degree, dense).map_err(value_error)
    }
}

#[pymodule]
fn nqkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(commands, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_class::<Algebra>()?;
    Ok(())
}
