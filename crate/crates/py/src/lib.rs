//! Python bindings. Every function returns a JSON string with the same shape
//! as the CLI's JSON output.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

use girthlab_core::checks::{run_corpus as run_checks, Section};
use girthlab_core::corpus::{default_dir, Corpus};
use girthlab_core::dsl::{parse_spec, Spec};
use girthlab_core::girth::{certify_no_short_relation, girth_exact, GirthQuery, Target};
use girthlab_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::UnknownSymbol(_) | Error::InvalidTable(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn target(text: &str) -> Result<Target, Error> {
    Ok(match parse_spec(text)? {
        Spec::Group(g) => Target::Base(g),
        Spec::Hnn(p) => Target::Hnn(p),
        Spec::Amalgam(p) => Target::Amalgam(p),
        Spec::Subgroup(_) => return Err(Error::Validation("expected a group, hnn or amalgam spec".into())),
    })
}

/// Canonical form and kind of a spec.
#[pyfunction]
fn parse(spec: &str) -> PyResult<String> {
    let s = parse_spec(spec).map_err(to_py)?;
    Ok(json!({ "kind": s.kind_name(), "canonical": s.describe() }).to_string())
}

/// Normal form of a word in the target.
#[pyfunction]
fn reduce(target_spec: &str, word: &str) -> PyResult<String> {
    let normal = (|| -> Result<String, Error> {
        Ok(match parse_spec(target_spec)? {
            Spec::Group(g) => g.format_element(&g.parse_element(word)?),
            Spec::Hnn(p) => p.format(&p.britton_reduce(&p.parse_element(word)?)?),
            Spec::Amalgam(p) => p.format(&p.normalize(&p.parse_element(word)?)?),
            Spec::Subgroup(_) => return Err(Error::Validation("cannot reduce in a subgroup spec".into())),
        })
    })()
    .map_err(to_py)?;
    Ok(json!({ "input": word, "normal_form": normal, "is_identity": normal == "1" }).to_string())
}

/// Girth certificate for `gens` (separated by `;`) up to `cap`.
#[pyfunction]
#[pyo3(signature = (target_spec, gens, cap=None))]
fn girth(target_spec: &str, gens: &str, cap: Option<usize>) -> PyResult<String> {
    let cert = (|| {
        let t = target(target_spec)?;
        let words = GirthQuery::parse_gens(&t, gens)?;
        girth_exact(&GirthQuery::new(t, words, cap)?)
    })()
    .map_err(to_py)?;
    Ok(serde_json::to_string(&cert).expect("serializable"))
}

/// Certificate that no relation among `gens` has length below `r`.
#[pyfunction]
#[pyo3(signature = (target_spec, gens, r, cap=None))]
fn certify(target_spec: &str, gens: &str, r: usize, cap: Option<usize>) -> PyResult<String> {
    let cert = (|| {
        let t = target(target_spec)?;
        let words = GirthQuery::parse_gens(&t, gens)?;
        certify_no_short_relation(t, words, r, cap.unwrap_or(r))
    })()
    .map_err(to_py)?;
    Ok(serde_json::to_string(&cert).expect("serializable"))
}

/// Run the corpus checks, optionally one section, and return the manifest.
#[pyfunction]
#[pyo3(signature = (only=None, corpus_dir=None))]
fn run_corpus(only: Option<&str>, corpus_dir: Option<PathBuf>) -> PyResult<String> {
    let only = only.map(|s| s.parse::<Section>()).transpose().map_err(to_py)?;
    let corpus = Corpus::load(&corpus_dir.unwrap_or_else(default_dir)).map_err(to_py)?;
    Ok(serde_json::to_string(&run_checks(&corpus, only)).expect("serializable"))
}

#[pymodule]
fn girthlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(girth, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    Ok(())
}
