//! Role-based selection and material-flow queries over mapped graphs.
//!
//! Both query families run over the enriched graph produced by
//! [`crate::mapping::map_full`]: selection needs role-requirement and
//! subclass triples, flow extraction needs interface types, links and
//! attribute values.

use std::collections::{BTreeMap, BTreeSet};

use crate::rdf::{Graph, Iri, Literal, Term, Triple};
use crate::vocab::Vocabulary;

/// How far up the role hierarchy a selection may look.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The required role is the target itself.
    Exact,
    /// The required role is the target or a direct subclass of it.
    DirectBase,
    /// The required role reaches the target through any number of
    /// subclass steps (reflexive-transitive).
    Transitive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleSelectionSpec {
    pub target_role: Iri,
    pub degree: Degree,
}

/// InternalElements whose required role matches the spec's target under the
/// requested degree. Unknown roles yield the empty set.
pub fn select_by_role(graph: &Graph, voc: &Vocabulary, spec: &RoleSelectionSpec) -> BTreeSet<Iri> {
    let mut selected = BTreeSet::new();
    for triple in graph.matching(None, Some(&voc.has_role_requirement), None) {
        let Term::Iri(role) = &triple.object else { continue };
        if !is_a(graph, voc, &triple.subject, &voc.internal_element) {
            continue;
        }
        let matched = match spec.degree {
            Degree::Exact => role == &spec.target_role,
            Degree::DirectBase => {
                role == &spec.target_role
                    || graph.contains(&Triple::new(
                        role.clone(),
                        voc.rdfs_sub_class_of.clone(),
                        Term::Iri(spec.target_role.clone()),
                    ))
            }
            Degree::Transitive => {
                transitive_closure(graph, &voc.rdfs_sub_class_of, role).contains(&spec.target_role)
            }
        };
        if matched {
            selected.insert(triple.subject.clone());
        }
    }
    selected
}

/// Reflexive-transitive closure of `predicate` starting at `start`.
/// Visited-set traversal, so cyclic graphs terminate.
pub fn transitive_closure(graph: &Graph, predicate: &Iri, start: &Iri) -> BTreeSet<Iri> {
    let mut visited = BTreeSet::new();
    let mut frontier = vec![start.clone()];
    while let Some(node) = frontier.pop() {
        if !visited.insert(node.clone()) {
            continue;
        }
        for term in graph.objects_of(&node, predicate) {
            if let Term::Iri(next) = term {
                if !visited.contains(next) {
                    frontier.push(next.clone());
                }
            }
        }
    }
    visited
}

/// Directed material-flow graph between InternalElements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowGraph {
    pub edges: BTreeSet<(Iri, Iri)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    /// Every link contributes the edge in both directions.
    Bidirectional,
    /// Directional (link side A to side B); edges leaving an element whose
    /// ValveState attribute holds a value other than "true" are dropped.
    /// Elements without a valued ValveState attribute always pass.
    ValveState,
}

/// Derives the flow graph: an edge (s, o) for every link between
/// port-typed interfaces owned by s and o respectively. Port-typed means
/// an interface whose type is `port_class` or reaches it via subClassOf.
pub fn flow_graph(graph: &Graph, voc: &Vocabulary, port_class: &Iri, mode: FlowMode) -> FlowGraph {
    let mut closure_cache: BTreeMap<Iri, bool> = BTreeMap::new();
    let mut is_port_type = |class: &Iri| -> bool {
        if let Some(hit) = closure_cache.get(class) {
            return *hit;
        }
        let hit = transitive_closure(graph, &voc.rdfs_sub_class_of, class).contains(port_class);
        closure_cache.insert(class.clone(), hit);
        hit
    };
    let port_interface = |graph: &Graph, iface: &Iri, is_port_type: &mut dyn FnMut(&Iri) -> bool| {
        graph.objects_of(iface, &voc.rdf_type).into_iter().any(|t| match t {
            Term::Iri(class) => is_port_type(class),
            Term::Literal(_) => false,
        })
    };

    let mut base: BTreeSet<(Iri, Iri)> = BTreeSet::new();
    for triple in graph.matching(None, Some(&voc.is_linked), None) {
        let Term::Iri(target_iface) = &triple.object else { continue };
        let source_iface = &triple.subject;
        if !port_interface(graph, source_iface, &mut is_port_type)
            || !port_interface(graph, target_iface, &mut is_port_type)
        {
            continue;
        }
        for source in owners(graph, voc, source_iface) {
            for target in owners(graph, voc, target_iface) {
                base.insert((source.clone(), target.clone()));
            }
        }
    }

    let edges = match mode {
        FlowMode::Bidirectional => {
            let mut edges = base.clone();
            edges.extend(base.iter().map(|(s, o)| (o.clone(), s.clone())));
            edges
        }
        FlowMode::ValveState => {
            base.into_iter().filter(|(source, _)| valve_open(graph, voc, source)).collect()
        }
    };
    FlowGraph { edges }
}

/// InternalElements owning an interface via hasInterface.
fn owners(graph: &Graph, voc: &Vocabulary, iface: &Iri) -> Vec<Iri> {
    let iface_term = Term::Iri(iface.clone());
    graph
        .subjects_of(&voc.has_interface, &iface_term)
        .into_iter()
        .filter(|owner| is_a(graph, voc, owner, &voc.internal_element))
        .cloned()
        .collect()
}

/// Unbound-or-true filter: an element blocks flow only when it owns at
/// least one valued attribute typed as a "ValveState" attribute type and
/// none of those values reads "true" (lexical comparison).
fn valve_open(graph: &Graph, voc: &Vocabulary, element: &Iri) -> bool {
    let mut values: Vec<String> = Vec::new();
    for term in graph.objects_of(element, &voc.has_attribute) {
        let Term::Iri(attribute) = term else { continue };
        let is_valve_state = graph.objects_of(attribute, &voc.rdf_type).into_iter().any(|t| {
            t.as_iri().is_some_and(|class| {
                graph
                    .objects_of(class, &voc.has_name)
                    .into_iter()
                    .any(|n| n.as_literal().is_some_and(|l| l.lexical() == "ValveState"))
            })
        });
        if !is_valve_state {
            continue;
        }
        for value in graph.objects_of(attribute, &voc.has_attribute_value) {
            if let Term::Literal(literal) = value {
                values.push(literal.lexical().to_string());
            }
        }
    }
    values.is_empty() || values.iter().any(|v| v == "true")
}

/// Picks the port base class when the caller does not name one: an
/// InterfaceClass named "Port", preferring one minted inside an
/// AutomationML base library, otherwise the lexicographically first.
pub fn default_port_class(graph: &Graph, voc: &Vocabulary) -> Option<Iri> {
    let port_name = Term::Literal(Literal::string("Port"));
    let candidates: Vec<&Iri> = graph
        .subjects_of(&voc.has_name, &port_name)
        .into_iter()
        .filter(|c| is_a(graph, voc, c, &voc.interface_class))
        .collect();
    candidates
        .iter()
        .find(|c| c.as_str().contains("AutomationML"))
        .or_else(|| candidates.first())
        .map(|c| (*c).clone())
}

/// Serializable form of a flow graph: one `flows` triple per edge.
pub fn export_flow_graph(flow: &FlowGraph, voc: &Vocabulary) -> Graph {
    let mut graph = Graph::new();
    graph.add_prefix("aml", voc.ns.clone());
    for (source, target) in &flow.edges {
        graph.insert(Triple::new(source.clone(), voc.flows.clone(), Term::Iri(target.clone())));
    }
    graph
}

fn is_a(graph: &Graph, voc: &Vocabulary, node: &Iri, class: &Iri) -> bool {
    graph.contains(&Triple::new(node.clone(), voc.rdf_type.clone(), Term::Iri(class.clone())))
}
