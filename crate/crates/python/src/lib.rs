// SPDX-License-Identifier: Apache-2.0
//! Python bindings: systems, posets and mappings, read from the text
//! formats, plus the command-line entry point.

use std::path::Path;

use isw::appmap::ApproxMap;
use isw::constructions::product;
use isw::domconv::{isw_from_poset, roundtrip_check};
use isw::finposet::FinPoset;
use isw::format::{self, Document};
use isw::system::{Condition, Isw};
use isw::tokenset::TokenSet;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(pyisw, IswError, PyException);

fn py_err(e: isw::Error) -> PyErr {
    IswError::new_err(e.to_string())
}

fn kind_err(expected: &str, found: &Document) -> PyErr {
    py_err(isw::Error::KindMismatch {
        expected: expected.into(),
        found: found.kind().into(),
    })
}

fn condition(name: &str) -> PyResult<Condition> {
    Condition::ALL
        .into_iter()
        .find(|c| c.label().eq_ignore_ascii_case(name))
        .ok_or_else(|| IswError::new_err(format!("unknown condition `{name}`")))
}

fn names(tokens: &[String], x: TokenSet) -> Vec<String> {
    x.iter().map(|t| tokens[t.index()].clone()).collect()
}

fn set_of(tokens: &[String], xs: &[String]) -> PyResult<TokenSet> {
    xs.iter()
        .map(|n| {
            tokens
                .iter()
                .position(|t| t == n)
                .map(isw::tokenset::Token)
                .ok_or_else(|| IswError::new_err(format!("unknown token `{n}`")))
        })
        .collect()
}

/// An information system with witnesses.
#[pyclass(name = "System", frozen)]
pub struct PySystem {
    inner: Isw,
}

impl PySystem {
    fn from_doc(doc: Document) -> PyResult<Self> {
        match doc {
            Document::Isw(s) => Ok(PySystem { inner: s }),
            other => Err(kind_err("isw", &other)),
        }
    }
}

#[pymethods]
impl PySystem {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Self::from_doc(format::parse(text).map_err(py_err)?)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_doc(format::load(Path::new(path)).map_err(py_err)?)
    }

    #[getter]
    fn tokens(&self) -> Vec<String> {
        self.inner.tokens().to_vec()
    }

    #[getter]
    fn delta(&self) -> String {
        self.inner.name(self.inner.delta()).to_string()
    }

    fn to_text(&self) -> String {
        format::write_isw(&self.inner)
    }

    /// `(valid, report)` for the ten axioms.
    fn validate(&self) -> PyResult<(bool, String)> {
        let r = self.inner.validate().map_err(py_err)?;
        Ok((r.is_valid(), r.render(&self.inner)))
    }

    /// Whether `BC`, `ALG`, `SALG` or `ALG+` holds.
    fn check(&self, name: &str) -> PyResult<bool> {
        let r = self.inner.check_condition(condition(name)?).map_err(py_err)?;
        Ok(r.holds())
    }

    fn states(&self) -> Vec<Vec<String>> {
        let t = self.inner.tokens();
        self.inner.enumerate_states().into_iter().map(|x| names(t, x)).collect()
    }

    fn is_state(&self, tokens: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_state(set_of(self.inner.tokens(), &tokens)?))
    }

    /// The states ordered by inclusion.
    fn domain(&self) -> PyResult<PyPoset> {
        let sp = self.inner.state_poset().map_err(py_err)?;
        Ok(PyPoset { inner: sp.poset })
    }

    fn product(&self, other: &PySystem) -> PyResult<PySystem> {
        let p = product(&self.inner, &other.inner).map_err(py_err)?;
        Ok(PySystem { inner: p.product })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PySystem) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("System(tokens={:?}, con={})", self.inner.tokens(), self.inner.con_len())
    }
}

/// A finite poset.
#[pyclass(name = "Poset", frozen)]
pub struct PyPoset {
    inner: FinPoset,
}

impl PyPoset {
    fn from_doc(doc: Document) -> PyResult<Self> {
        match doc {
            Document::Poset(p) => Ok(PyPoset { inner: p }),
            other => Err(kind_err("poset", &other)),
        }
    }

    fn index(&self, name: &str) -> PyResult<usize> {
        self.inner
            .index_of(name)
            .ok_or_else(|| IswError::new_err(format!("unknown element `{name}`")))
    }
}

#[pymethods]
impl PyPoset {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Self::from_doc(format::parse(text).map_err(py_err)?)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_doc(format::load(Path::new(path)).map_err(py_err)?)
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.leq(self.index(a)?, self.index(b)?))
    }

    fn covers(&self) -> Vec<(String, String)> {
        let n = |x| self.inner.name(x).to_string();
        self.inner.covers().into_iter().map(|(a, b)| (n(a), n(b))).collect()
    }

    fn is_l_domain(&self) -> bool {
        self.inner.analyze().l_domain()
    }

    fn is_bounded_complete(&self) -> bool {
        self.inner.analyze().bounded_complete()
    }

    /// The system of the domain, with the elements as tokens.
    fn to_system(&self) -> PyResult<PySystem> {
        Ok(PySystem {
            inner: isw_from_poset(&self.inner).map_err(py_err)?,
        })
    }

    /// Each element with the state it corresponds to.
    fn roundtrip(&self) -> PyResult<Vec<(String, Vec<String>)>> {
        let r = roundtrip_check(&self.inner).map_err(py_err)?;
        let t = r.bridge.system.tokens();
        Ok(self
            .inner
            .elems()
            .map(|a| (self.inner.name(a).to_string(), names(t, r.state_poset.states[r.iso[a]])))
            .collect())
    }

    fn to_dot(&self) -> String {
        format::write_dot(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// An approximable mapping between two systems.
#[pyclass(name = "Map", frozen)]
pub struct PyMap {
    inner: ApproxMap,
}

#[pymethods]
impl PyMap {
    /// Reads a map file; its system paths are relative to the file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let m = format::load_map(Path::new(path)).map_err(py_err)?;
        Ok(PyMap { inner: m.map })
    }

    #[getter]
    fn source(&self) -> PySystem {
        PySystem {
            inner: self.inner.source().clone(),
        }
    }

    #[getter]
    fn target(&self) -> PySystem {
        PySystem {
            inner: self.inner.target().clone(),
        }
    }

    fn validate(&self) -> (bool, String) {
        let r = self.inner.validate();
        (r.is_valid(), r.render(&self.inner))
    }

    fn apply(&self, state: Vec<String>) -> PyResult<Vec<String>> {
        let x = set_of(self.inner.source().tokens(), &state)?;
        let y = self.inner.apply(x).map_err(py_err)?;
        Ok(names(self.inner.target().tokens(), y))
    }

    /// `self` first, then `other`.
    fn then(&self, other: &PyMap) -> PyResult<PyMap> {
        Ok(PyMap {
            inner: self.inner.then(&other.inner).map_err(py_err)?,
        })
    }
}

/// Runs the command-line tool; returns `(exit_code, output)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    isw::cli::run(std::iter::once("isw".to_string()).chain(args))
}

#[pymodule]
fn pyisw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyPoset>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("IswError", m.py().get_type::<IswError>())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_names() {
        assert_eq!(condition("alg+").unwrap(), Condition::AlgPlus);
        assert_eq!(condition("BC").unwrap(), Condition::Bc);
    }

    #[test]
    fn token_names_round_trip() {
        let t = vec!["a".to_string(), "b".to_string()];
        let x = set_of(&t, &["b".to_string()]).unwrap();
        assert_eq!(names(&t, x), vec!["b".to_string()]);
    }
}
