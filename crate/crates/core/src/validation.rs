//! Shape rules (cardinality and connection constraints) over mapped graphs,
//! plus structural checks straight off the document model.
//!
//! Rules come from a line-oriented plain-text file:
//!
//! ```text
//! rule <id> target <iri> <cardinality|connection> path <iri> [class <iri>] [min <n>] [max <n>]
//! ```
//!
//! Lines starting with `#` are comments; `#` elsewhere is ordinary content so
//! fragment IRIs survive. Target selection and value-class checks respect the
//! subclass hierarchy of the graph.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::caex::Document;
use crate::diagnostics::Location;
use crate::parser::structural_diagnostics;
use crate::query::transitive_closure;
use crate::rdf::{iri_safe, Graph, Iri, Term};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Bounds the number of path successors (optionally restricted to a
    /// value class) per focus node.
    Cardinality,
    /// Requires every path successor to be an instance of the value class.
    Connection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeRule {
    pub rule_id: String,
    pub target_class: Iri,
    pub kind: RuleKind,
    pub path: Iri,
    pub value_class: Option<Iri>,
    pub min_count: Option<u32>,
    pub max_count: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub rule_id: String,
    pub focus_node: Iri,
    /// The observed count (cardinality) or offending value (connection).
    pub observed: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub conforms: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// Builds a report; violations are sorted by (rule_id, focus_node).
    pub fn new(mut violations: Vec<Violation>) -> ValidationReport {
        violations.sort();
        violations.dedup();
        ValidationReport { conforms: violations.is_empty(), violations }
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule file line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn malformed(line: usize, message: impl Into<String>) -> RuleError {
    RuleError::Malformed { line, message: message.into() }
}

/// Parses the rule file format. Every returned rule satisfies the kind's
/// invariants (cardinality: at least one bound; connection: a value class).
pub fn load_rules(input: &[u8]) -> Result<Vec<ShapeRule>, RuleError> {
    let text = std::str::from_utf8(input)
        .map_err(|e| malformed(0, format!("rule file is not valid UTF-8: {e}")))?;
    let mut rules = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rules.push(parse_rule(line, line_no)?);
    }
    Ok(rules)
}

struct Tokens<'a> {
    tokens: Vec<&'a str>,
    cursor: usize,
    line_no: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, RuleError> {
        let token = self
            .tokens
            .get(self.cursor)
            .ok_or_else(|| malformed(self.line_no, format!("missing {what}")))?;
        self.cursor += 1;
        Ok(token)
    }

    fn try_next(&mut self) -> Option<&'a str> {
        let token = self.tokens.get(self.cursor)?;
        self.cursor += 1;
        Some(token)
    }

    fn expect(&mut self, keyword: &str) -> Result<(), RuleError> {
        match self.next(&format!("{keyword:?}"))? {
            token if token == keyword => Ok(()),
            token => Err(malformed(self.line_no, format!("expected {keyword:?}, found {token:?}"))),
        }
    }
}

fn parse_rule(line: &str, line_no: usize) -> Result<ShapeRule, RuleError> {
    let mut tokens = Tokens { tokens: line.split_whitespace().collect(), cursor: 0, line_no };

    tokens.expect("rule")?;
    let rule_id = tokens.next("rule id")?.to_string();
    tokens.expect("target")?;
    let target_class = parse_iri(tokens.next("target IRI")?, line_no)?;
    let kind = match tokens.next("rule kind")? {
        "cardinality" => RuleKind::Cardinality,
        "connection" => RuleKind::Connection,
        other => {
            return Err(malformed(
                line_no,
                format!("expected \"cardinality\" or \"connection\", found {other:?}"),
            ))
        }
    };
    tokens.expect("path")?;
    let path = parse_iri(tokens.next("path IRI")?, line_no)?;

    let mut value_class = None;
    let mut min_count = None;
    let mut max_count = None;
    while let Some(keyword) = tokens.try_next() {
        match keyword {
            "class" => value_class = Some(parse_iri(tokens.next("class IRI")?, line_no)?),
            "min" => min_count = Some(parse_count(tokens.next("min count")?, line_no)?),
            "max" => max_count = Some(parse_count(tokens.next("max count")?, line_no)?),
            other => return Err(malformed(line_no, format!("unknown keyword {other:?}"))),
        }
    }
    match kind {
        RuleKind::Cardinality if min_count.is_none() && max_count.is_none() => {
            return Err(malformed(line_no, "cardinality rule needs min or max"));
        }
        RuleKind::Connection if value_class.is_none() => {
            return Err(malformed(line_no, "connection rule needs a class"));
        }
        _ => {}
    }
    Ok(ShapeRule { rule_id, target_class, kind, path, value_class, min_count, max_count })
}

fn parse_iri(token: &str, line_no: usize) -> Result<Iri, RuleError> {
    let bare = token.strip_prefix('<').and_then(|t| t.strip_suffix('>')).unwrap_or(token);
    Iri::new(bare).map_err(|e| malformed(line_no, e.to_string()))
}

fn parse_count(token: &str, line_no: usize) -> Result<u32, RuleError> {
    token.parse().map_err(|_| malformed(line_no, format!("invalid count {token:?}")))
}

/// Evaluates every rule against the graph. Rules with zero target
/// instances conform vacuously.
pub fn validate(graph: &Graph, voc: &Vocabulary, rules: &[ShapeRule]) -> ValidationReport {
    let mut violations = Vec::new();
    for rule in rules {
        let focus_nodes = instances_of(graph, voc, &rule.target_class);
        for focus in focus_nodes {
            match rule.kind {
                RuleKind::Cardinality => check_cardinality(graph, voc, rule, &focus, &mut violations),
                RuleKind::Connection => check_connection(graph, voc, rule, &focus, &mut violations),
            }
        }
    }
    ValidationReport::new(violations)
}

/// All instances of `class`, including instances of its subclasses.
fn instances_of(graph: &Graph, voc: &Vocabulary, class: &Iri) -> BTreeSet<Iri> {
    let mut instances = BTreeSet::new();
    for triple in graph.matching(None, Some(&voc.rdf_type), None) {
        if let Term::Iri(direct) = &triple.object {
            if direct == class
                || transitive_closure(graph, &voc.rdfs_sub_class_of, direct).contains(class)
            {
                instances.insert(triple.subject.clone());
            }
        }
    }
    instances
}

fn is_instance(graph: &Graph, voc: &Vocabulary, node: &Iri, class: &Iri) -> bool {
    graph.objects_of(node, &voc.rdf_type).into_iter().any(|t| match t {
        Term::Iri(direct) => {
            direct == class || transitive_closure(graph, &voc.rdfs_sub_class_of, direct).contains(class)
        }
        Term::Literal(_) => false,
    })
}

fn check_cardinality(
    graph: &Graph,
    voc: &Vocabulary,
    rule: &ShapeRule,
    focus: &Iri,
    violations: &mut Vec<Violation>,
) {
    let successors = graph.objects_of(focus, &rule.path);
    let count = successors
        .into_iter()
        .filter(|term| match &rule.value_class {
            Some(class) => term.as_iri().is_some_and(|iri| is_instance(graph, voc, iri, class)),
            None => true,
        })
        .count();
    let of_class = rule
        .value_class
        .as_ref()
        .map(|c| format!(" of class <{c}>"))
        .unwrap_or_default();
    if let Some(min) = rule.min_count {
        if count < min as usize {
            violations.push(Violation {
                rule_id: rule.rule_id.clone(),
                focus_node: focus.clone(),
                observed: count.to_string(),
                message: format!("expected at least {min} <{}> successors{of_class}, found {count}", rule.path),
            });
        }
    }
    if let Some(max) = rule.max_count {
        if count > max as usize {
            violations.push(Violation {
                rule_id: rule.rule_id.clone(),
                focus_node: focus.clone(),
                observed: count.to_string(),
                message: format!("expected at most {max} <{}> successors{of_class}, found {count}", rule.path),
            });
        }
    }
}

fn check_connection(
    graph: &Graph,
    voc: &Vocabulary,
    rule: &ShapeRule,
    focus: &Iri,
    violations: &mut Vec<Violation>,
) {
    let class = rule.value_class.as_ref().expect("connection rules carry a value class");
    for term in graph.objects_of(focus, &rule.path) {
        let conforming = term.as_iri().is_some_and(|iri| is_instance(graph, voc, iri, class));
        if !conforming {
            let observed = match term {
                Term::Iri(iri) => iri.as_str().to_string(),
                Term::Literal(literal) => literal.lexical().to_string(),
            };
            violations.push(Violation {
                rule_id: rule.rule_id.clone(),
                focus_node: focus.clone(),
                observed: observed.clone(),
                message: format!("<{}> successor {observed} is not an instance of <{class}>", rule.path),
            });
        }
    }
}

/// Structural well-formedness (mandatory IDs, ID/name uniqueness, dangling
/// references) re-exposed in report form so every validation tier shares
/// one interface. Focus nodes are urn:caex: IRIs built from element paths.
pub fn check_structural(doc: &Document) -> ValidationReport {
    let violations = structural_diagnostics(doc)
        .into_iter()
        .map(|diagnostic| {
            let (focus_node, observed) = match &diagnostic.location {
                Location::Path(path) => (caex_urn(path), path.clone()),
                other => (
                    Iri::new("urn:caex:document").expect("constant IRI is valid"),
                    other.to_string(),
                ),
            };
            Violation {
                rule_id: diagnostic.code.as_str().to_string(),
                focus_node,
                observed,
                message: diagnostic.message,
            }
        })
        .collect();
    ValidationReport::new(violations)
}

fn caex_urn(path: &str) -> Iri {
    let safe: Vec<String> = path.split('/').map(iri_safe).collect();
    Iri::new(format!("urn:caex:{}", safe.join("/"))).expect("escaped path is a valid IRI")
}
