//! Python bindings for the CAEX toolchain: map documents to RDF and run the
//! role, flow, and validation queries from Python. The module exposes a
//! `Graph` class produced by `map_file` plus a standalone structural check.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::path::Path;

use amlgraph::query::{
    default_port_class, flow_graph, select_by_role, Degree, FlowMode, RoleSelectionSpec,
};
use amlgraph::rdf::{serialize_ntriples, serialize_turtle};
use amlgraph::validation::{check_structural, load_rules, validate, Violation};
use amlgraph::{iri_safe, map_full, parse_document, scan_document, Iri, MappingConfig, Vocabulary};

fn iri(raw: &str) -> PyResult<Iri> {
    Iri::new(raw).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn read(path: &str) -> PyResult<(Vec<u8>, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| PyIOError::new_err(format!("cannot read {path}: {e}")))?;
    let name = Path::new(path)
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_string());
    Ok((bytes, name))
}

fn default_base(path: &str) -> String {
    let stem = Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "document".to_string());
    format!("urn:aml:{}/", iri_safe(&stem))
}

fn violation_dict(py: Python<'_>, violation: &Violation) -> PyResult<PyObject> {
    let dict = PyDict::new(py);
    dict.set_item("rule_id", &violation.rule_id)?;
    dict.set_item("focus_node", violation.focus_node.as_str())?;
    dict.set_item("observed", &violation.observed)?;
    dict.set_item("message", &violation.message)?;
    Ok(dict.into_any().unbind())
}

/// A mapped RDF graph bound to its vocabulary, ready for queries.
#[pyclass(name = "Graph")]
struct PyGraph {
    graph: amlgraph::Graph,
    voc: Vocabulary,
    /// Warnings collected while parsing and mapping, one string each.
    #[pyo3(get)]
    warnings: Vec<String>,
}

#[pymethods]
impl PyGraph {
    fn __len__(&self) -> usize {
        self.graph.len()
    }

    fn __repr__(&self) -> String {
        format!("Graph({} triples)", self.graph.len())
    }

    /// Canonical N-Triples serialization: one sorted, deduplicated line per
    /// triple.
    fn ntriples(&self) -> String {
        serialize_ntriples(&self.graph)
    }

    /// Turtle serialization with the standard prefixes.
    fn turtle(&self) -> String {
        serialize_turtle(&self.graph)
    }

    /// IRIs of the InternalElements requiring the role. `degree` is one of
    /// "exact", "direct", or "transitive".
    #[pyo3(signature = (role, degree = "exact"))]
    fn select_by_role(&self, role: &str, degree: &str) -> PyResult<Vec<String>> {
        let degree = match degree {
            "exact" => Degree::Exact,
            "direct" => Degree::DirectBase,
            "transitive" => Degree::Transitive,
            other => return Err(PyValueError::new_err(format!("unknown degree {other:?}"))),
        };
        let spec = RoleSelectionSpec { target_role: iri(role)?, degree };
        Ok(select_by_role(&self.graph, &self.voc, &spec)
            .into_iter()
            .map(|element| element.as_str().to_owned())
            .collect())
    }

    /// Directed material-flow edges as (source, target) IRI pairs. `mode` is
    /// "bidirectional" or "valve-state"; `port_class` defaults to the base
    /// Port interface class found in the graph.
    #[pyo3(signature = (mode = "bidirectional", port_class = None))]
    fn flow_edges(&self, mode: &str, port_class: Option<&str>) -> PyResult<Vec<(String, String)>> {
        let mode = match mode {
            "bidirectional" => FlowMode::Bidirectional,
            "valve-state" => FlowMode::ValveState,
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        let port = match port_class {
            Some(raw) => Some(iri(raw)?),
            None => default_port_class(&self.graph, &self.voc),
        };
        let Some(port) = port else { return Ok(Vec::new()) };
        Ok(flow_graph(&self.graph, &self.voc, &port, mode)
            .edges
            .into_iter()
            .map(|(source, target)| (source.as_str().to_owned(), target.as_str().to_owned()))
            .collect())
    }

    /// Check shape rules given as text; returns a list of violation dicts
    /// with rule_id, focus_node, observed, and message keys. An empty list
    /// means the graph conforms.
    fn validate_rules(&self, py: Python<'_>, rules: &str) -> PyResult<Vec<PyObject>> {
        let rules =
            load_rules(rules.as_bytes()).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let report = validate(&self.graph, &self.voc, &rules);
        report.violations.iter().map(|v| violation_dict(py, v)).collect()
    }
}

/// Parse a CAEX file and map it to an RDF graph. `base_iri` must end with
/// '/' or '#' and defaults to "urn:aml:<file stem>/".
#[pyfunction]
#[pyo3(signature = (path, base_iri = None, ontology_ns = None))]
fn map_file(path: &str, base_iri: Option<&str>, ontology_ns: Option<&str>) -> PyResult<PyGraph> {
    let (bytes, name) = read(path)?;
    let (doc, parse_diags) =
        parse_document(&bytes, &name).map_err(|e| PyValueError::new_err(e.to_string()))?;

    let base = base_iri.map(str::to_owned).unwrap_or_else(|| default_base(path));
    let mut config =
        MappingConfig::new(iri(&base)?).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if let Some(ns) = ontology_ns {
        config.ontology_ns = iri(ns)?;
    }

    let (graph, map_diags) =
        map_full(&doc, &config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let warnings =
        parse_diags.iter().chain(map_diags.iter()).map(|d| d.to_string()).collect();
    Ok(PyGraph { graph, voc: Vocabulary::new(&config.ontology_ns), warnings })
}

/// Structural checks on the document itself (mandatory IDs, uniqueness,
/// dangling references), tolerating the very problems it reports. Returns a
/// list of violation dicts; an empty list means the document is sound.
#[pyfunction]
fn structural_report(py: Python<'_>, path: &str) -> PyResult<Vec<PyObject>> {
    let (bytes, name) = read(path)?;
    let (doc, _) =
        scan_document(&bytes, &name).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = check_structural(&doc);
    report.violations.iter().map(|v| violation_dict(py, v)).collect()
}

#[pymodule]
fn amlgraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(map_file, m)?)?;
    m.add_function(wrap_pyfunction!(structural_report, m)?)?;
    Ok(())
}
