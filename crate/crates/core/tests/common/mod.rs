//! Shared machinery for the integration suites.
//!
//! Everything here is deliberately independent of the production code paths
//! it checks: the N-Triples reader is a character-level parser that never
//! touches the serializer, and the oracles are naive brute-force evaluators
//! that quantify the mapping rules, the flow derivation and the shape rules
//! over every node tuple instead of using indexes. A seeded generator
//! produces small random documents for the equivalence suites.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use amlgraph::caex::{
    Attribute, AttributeType, ExternalInterface, InstanceHierarchy, InterfaceClass,
    InternalElement, InternalLink, Library, RoleClass, SystemUnitClass,
};
use amlgraph::query::FlowMode;
use amlgraph::rdf::XSD_NS;
use amlgraph::validation::{RuleKind, ShapeRule};
use amlgraph::MappingConfig;
use amlgraph::{Document, Graph, Iri, Literal, RefPath, Term, Triple, Vocabulary};

// ── Fixtures ────────────────────────────────────────────────────────────

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    let path = fixture_dir().join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read fixture {}: {e}", path.display()))
}

pub fn fixture_text(name: &str) -> String {
    String::from_utf8(fixture_bytes(name)).expect("fixture is UTF-8")
}

pub fn parse_fixture(name: &str) -> Document {
    amlgraph::parse_document(&fixture_bytes(name), name)
        .unwrap_or_else(|e| panic!("fixture {name} does not parse: {e}"))
        .0
}

pub fn config(base: &str) -> MappingConfig {
    MappingConfig::new(Iri::new(base).expect("base IRI is well-formed")).expect("base IRI accepted")
}

pub fn vocabulary() -> Vocabulary {
    Vocabulary::default()
}

pub fn map_fixture(name: &str, base: &str) -> Graph {
    let doc = parse_fixture(name);
    amlgraph::map_full(&doc, &config(base))
        .unwrap_or_else(|e| panic!("fixture {name} does not map: {e}"))
        .0
}

// ── Independent N-Triples reader ────────────────────────────────────────
//
// A line-oriented character scanner for the N-Triples grammar subset the
// toolkit emits (IRI subjects/predicates, IRI or literal objects, string
// escapes, `^^` datatypes, `@` language tags, `#` comment lines). Plain
// literals are read as xsd:string per RDF 1.1.

pub fn read_ntriples(text: &str) -> Result<Vec<Triple>, String> {
    let mut triples = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        triples.push(read_line(line).map_err(|e| format!("line {line_no}: {e}"))?);
    }
    Ok(triples)
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl Scanner<'_> {
    fn new(line: &str) -> Scanner<'_> {
        Scanner { chars: line.chars().peekable() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(' ' | '\t')) {
            self.chars.next();
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), String> {
        match self.chars.next() {
            Some(c) if c == expected => Ok(()),
            Some(c) => Err(format!("expected {expected:?}, found {c:?}")),
            None => Err(format!("expected {expected:?}, found end of line")),
        }
    }

    fn iri(&mut self) -> Result<Iri, String> {
        self.expect('<')?;
        let mut text = String::new();
        loop {
            match self.chars.next() {
                Some('>') => break,
                Some(c) => text.push(c),
                None => return Err("unterminated IRI".to_string()),
            }
        }
        Iri::new(&text).map_err(|e| e.to_string())
    }

    fn unicode_escape(&mut self, digits: usize) -> Result<char, String> {
        let mut code = String::new();
        for _ in 0..digits {
            code.push(self.chars.next().ok_or("truncated \\u escape")?);
        }
        let value = u32::from_str_radix(&code, 16).map_err(|e| e.to_string())?;
        char::from_u32(value).ok_or_else(|| format!("invalid code point U+{code}"))
    }

    fn literal(&mut self) -> Result<Literal, String> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.chars.next() {
                Some('"') => break,
                Some('\\') => match self.chars.next() {
                    Some('\\') => lexical.push('\\'),
                    Some('"') => lexical.push('"'),
                    Some('n') => lexical.push('\n'),
                    Some('r') => lexical.push('\r'),
                    Some('t') => lexical.push('\t'),
                    Some('u') => lexical.push(self.unicode_escape(4)?),
                    Some('U') => lexical.push(self.unicode_escape(8)?),
                    other => return Err(format!("unknown escape {other:?}")),
                },
                Some(c) => lexical.push(c),
                None => return Err("unterminated literal".to_string()),
            }
        }
        match self.chars.peek() {
            Some('^') => {
                self.expect('^')?;
                self.expect('^')?;
                let datatype = self.iri()?;
                Ok(Literal::typed(&lexical, datatype))
            }
            Some('@') => {
                self.chars.next();
                let mut tag = String::new();
                while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '-')
                {
                    tag.push(self.chars.next().expect("peeked"));
                }
                if tag.is_empty() {
                    return Err("empty language tag".to_string());
                }
                Ok(Literal::lang(&lexical, &tag))
            }
            _ => Ok(Literal::string(&lexical)),
        }
    }

    fn end(&mut self) -> Result<(), String> {
        self.skip_ws();
        self.expect('.')?;
        self.skip_ws();
        match self.chars.next() {
            None => Ok(()),
            Some(c) => Err(format!("trailing content {c:?}")),
        }
    }
}

fn read_line(line: &str) -> Result<Triple, String> {
    let mut scanner = Scanner::new(line);
    let subject = scanner.iri()?;
    scanner.skip_ws();
    let predicate = scanner.iri()?;
    scanner.skip_ws();
    let object: Term = match scanner.chars.peek() {
        Some('<') => Term::Iri(scanner.iri()?),
        Some('"') => Term::Literal(scanner.literal()?),
        other => return Err(format!("expected IRI or literal object, found {other:?}")),
    };
    scanner.end()?;
    Ok(Triple::new(subject, predicate, object))
}

// ── Brute-force mapping-rule oracles ────────────────────────────────────
//
// Each oracle evaluates one derivation rule by instantiating its variables
// over every IRI (or IRI pair/triple) in the graph and testing the body via
// `Graph::contains`. The result is the expected delta: rule heads not
// already present in the pre-state.

/// Every IRI occurring in subject or object position.
pub fn node_universe(graph: &Graph) -> BTreeSet<Iri> {
    let mut universe = BTreeSet::new();
    for triple in graph.iter() {
        universe.insert(triple.subject.clone());
        if let Term::Iri(object) = &triple.object {
            universe.insert(object.clone());
        }
    }
    universe
}

fn holds(graph: &Graph, s: &Iri, p: &Iri, o: &Iri) -> bool {
    graph.contains(&Triple::new(s.clone(), p.clone(), Term::Iri(o.clone())))
}

fn typed_as(graph: &Graph, voc: &Vocabulary, node: &Iri, class: &Iri) -> bool {
    holds(graph, node, &voc.rdf_type, class)
}

fn delta(pre: &Graph, heads: BTreeSet<Triple>) -> BTreeSet<Triple> {
    heads.into_iter().filter(|t| !pre.contains(t)).collect()
}

/// Instance typing via hasRefAttributeType / hasRefBaseClass /
/// hasRefBaseSystemUnitClass, plus the punning class declaration on the
/// referenced class. An InternalElement target is a mirror, not a class.
pub fn oracle_instance_types(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            let implied = (typed_as(pre, voc, a, &voc.attribute)
                && holds(pre, a, &voc.has_ref_attribute_type, b))
                || (typed_as(pre, voc, a, &voc.external_interface)
                    && holds(pre, a, &voc.has_ref_base_class, b))
                || (typed_as(pre, voc, a, &voc.internal_element)
                    && typed_as(pre, voc, b, &voc.system_unit_class)
                    && holds(pre, a, &voc.has_ref_base_system_unit_class, b));
            if implied {
                heads.insert(Triple::new(a.clone(), voc.rdf_type.clone(), Term::Iri(b.clone())));
                heads.insert(Triple::new(
                    b.clone(),
                    voc.rdf_type.clone(),
                    Term::Iri(voc.owl_class.clone()),
                ));
            }
        }
    }
    delta(pre, heads)
}

/// Role typing via hasSupportedRoleClass; hasRoleRequirement never types.
pub fn oracle_role_types(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            if (typed_as(pre, voc, a, &voc.internal_element)
                || typed_as(pre, voc, a, &voc.system_unit_class))
                && holds(pre, a, &voc.has_supported_role_class, b)
            {
                heads.insert(Triple::new(a.clone(), voc.rdf_type.clone(), Term::Iri(b.clone())));
                heads.insert(Triple::new(
                    b.clone(),
                    voc.rdf_type.clone(),
                    Term::Iri(voc.owl_class.clone()),
                ));
            }
        }
    }
    delta(pre, heads)
}

/// Subclass edges from same-family base references.
pub fn oracle_subclass(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            let class_base = (typed_as(pre, voc, a, &voc.system_unit_class)
                || typed_as(pre, voc, a, &voc.role_class)
                || typed_as(pre, voc, a, &voc.interface_class))
                && holds(pre, a, &voc.has_ref_base_class, b);
            let type_base = typed_as(pre, voc, a, &voc.attribute_type)
                && holds(pre, a, &voc.has_ref_attribute_type, b);
            if class_base || type_base {
                heads.insert(Triple::new(
                    a.clone(),
                    voc.rdfs_sub_class_of.clone(),
                    Term::Iri(b.clone()),
                ));
            }
        }
    }
    delta(pre, heads)
}

/// Directional isLinked edges from InternalLink partner sides.
pub fn oracle_links(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for link in &universe {
        if !typed_as(pre, voc, link, &voc.internal_link) {
            continue;
        }
        for a in &universe {
            for b in &universe {
                if holds(pre, link, &voc.has_ref_partner_side_a, a)
                    && holds(pre, link, &voc.has_ref_partner_side_b, b)
                    && typed_as(pre, voc, a, &voc.external_interface)
                    && typed_as(pre, voc, b, &voc.external_interface)
                {
                    heads.insert(Triple::new(
                        a.clone(),
                        voc.is_linked.clone(),
                        Term::Iri(b.clone()),
                    ));
                }
            }
        }
    }
    delta(pre, heads)
}

/// Master/mirror pairs from InternalElement-to-InternalElement base refs.
pub fn oracle_mirrors(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            if typed_as(pre, voc, a, &voc.internal_element)
                && typed_as(pre, voc, b, &voc.internal_element)
                && holds(pre, a, &voc.has_ref_base_system_unit_class, b)
            {
                heads.insert(Triple::new(
                    a.clone(),
                    voc.has_master_object.clone(),
                    Term::Iri(b.clone()),
                ));
                heads.insert(Triple::new(
                    b.clone(),
                    voc.has_mirror_object.clone(),
                    Term::Iri(a.clone()),
                ));
            }
        }
    }
    delta(pre, heads)
}

fn name_of(graph: &Graph, voc: &Vocabulary, node: &Iri) -> Option<String> {
    graph
        .objects_of(node, &voc.has_name)
        .into_iter()
        .filter_map(Term::as_literal)
        .map(|l| l.lexical().to_string())
        .next()
}

/// Role classes with the given name sitting under a RoleClassLib whose name
/// starts with "AutomationML", found by walking hasPart edges upward.
fn base_library_roles(graph: &Graph, voc: &Vocabulary, name: &str) -> BTreeSet<Iri> {
    let universe = node_universe(graph);
    let mut roles = BTreeSet::new();
    for candidate in &universe {
        if !typed_as(graph, voc, candidate, &voc.role_class)
            || name_of(graph, voc, candidate).as_deref() != Some(name)
        {
            continue;
        }
        let mut frontier = vec![candidate.clone()];
        let mut seen = BTreeSet::new();
        let mut hit = false;
        while let Some(node) = frontier.pop() {
            if !seen.insert(node.clone()) {
                continue;
            }
            if typed_as(graph, voc, &node, &voc.role_class_lib)
                && name_of(graph, voc, &node).is_some_and(|n| n.starts_with("AutomationML"))
            {
                hit = true;
                break;
            }
            for parent in &universe {
                if holds(graph, parent, &voc.has_part, &node) {
                    frontier.push(parent.clone());
                }
            }
        }
        if hit {
            roles.insert(candidate.clone());
        }
    }
    roles
}

/// Facet/Group typing and hasFacet/hasGroup edges from role requirements on
/// child InternalElements.
pub fn oracle_facets_groups(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let facet_roles = base_library_roles(pre, voc, "Facet");
    let group_roles = base_library_roles(pre, voc, "Group");
    let mut heads = BTreeSet::new();
    for child in &universe {
        if !typed_as(pre, voc, child, &voc.internal_element) {
            continue;
        }
        for role in &universe {
            if !holds(pre, child, &voc.has_role_requirement, role) {
                continue;
            }
            let (class, property) = if facet_roles.contains(role) {
                (&voc.facet, &voc.has_facet)
            } else if group_roles.contains(role) {
                (&voc.group, &voc.has_group)
            } else {
                continue;
            };
            for parent in &universe {
                if holds(pre, parent, &voc.has_part, child)
                    && (typed_as(pre, voc, parent, &voc.internal_element)
                        || typed_as(pre, voc, parent, &voc.system_unit_class))
                {
                    heads.insert(Triple::new(
                        child.clone(),
                        voc.rdf_type.clone(),
                        Term::Iri(class.clone()),
                    ));
                    heads.insert(Triple::new(
                        parent.clone(),
                        property.clone(),
                        Term::Iri(child.clone()),
                    ));
                }
            }
        }
    }
    delta(pre, heads)
}

/// Member inheritance down same-family subclass edges with name-based
/// override, run round by round to a fixpoint. Returns the accumulated
/// delta; a subclass cycle within one class family is an error.
pub fn oracle_inheritance(pre: &Graph, voc: &Vocabulary) -> Result<BTreeSet<Triple>, String> {
    let universe = node_universe(pre);
    let family = |node: &Iri| {
        [&voc.system_unit_class, &voc.role_class, &voc.interface_class, &voc.attribute_type]
            .iter()
            .position(|k| typed_as(pre, voc, node, k))
    };
    let mut edges: Vec<(Iri, Iri)> = Vec::new();
    for child in &universe {
        for base in &universe {
            if holds(pre, child, &voc.rdfs_sub_class_of, base) {
                match (family(child), family(base)) {
                    (Some(a), Some(b)) if a == b => edges.push((child.clone(), base.clone())),
                    _ => {}
                }
            }
        }
    }

    // Cycle test: repeated edge relaxation; a node reaching itself is cyclic.
    let mut reach: BTreeSet<(Iri, Iri)> = edges.iter().cloned().collect();
    loop {
        let mut next = reach.clone();
        for (a, b) in &reach {
            for (c, d) in &reach {
                if b == c {
                    next.insert((a.clone(), d.clone()));
                }
            }
        }
        if next == reach {
            break;
        }
        reach = next;
    }
    if let Some((node, _)) = reach.iter().find(|(a, b)| a == b) {
        return Err(format!("subclass cycle through {node}"));
    }

    let mut work = pre.clone();
    let mut added = BTreeSet::new();
    loop {
        let mut heads = BTreeSet::new();
        for (child, base) in &edges {
            for prop in [&voc.has_attribute, &voc.has_interface] {
                let owned: BTreeSet<String> = universe
                    .iter()
                    .filter(|m| holds(&work, child, prop, m))
                    .filter_map(|m| name_of(&work, voc, m))
                    .collect();
                for member in &universe {
                    if !holds(&work, base, prop, member) {
                        continue;
                    }
                    let Some(name) = name_of(&work, voc, member) else { continue };
                    if !owned.contains(&name) {
                        heads.insert(Triple::new(
                            child.clone(),
                            (*prop).clone(),
                            Term::Iri(member.clone()),
                        ));
                    }
                }
            }
        }
        let fresh: BTreeSet<Triple> = heads.into_iter().filter(|t| !work.contains(t)).collect();
        if fresh.is_empty() {
            return Ok(added);
        }
        for triple in fresh {
            work.insert(triple.clone());
            added.insert(triple);
        }
    }
}

/// Name-equality mapping objects between an element's members and its
/// required role's members (attribute/attribute and interface/interface).
pub fn oracle_mappings(pre: &Graph, voc: &Vocabulary) -> BTreeSet<Triple> {
    let universe = node_universe(pre);
    let mut heads = BTreeSet::new();
    for element in &universe {
        if !typed_as(pre, voc, element, &voc.internal_element) {
            continue;
        }
        for role in &universe {
            if !holds(pre, element, &voc.has_role_requirement, role)
                || !typed_as(pre, voc, role, &voc.role_class)
            {
                continue;
            }
            for (prop, member_class) in [
                (&voc.has_attribute, &voc.attribute),
                (&voc.has_interface, &voc.external_interface),
            ] {
                for c in &universe {
                    if !holds(pre, element, prop, c) || !typed_as(pre, voc, c, member_class) {
                        continue;
                    }
                    let Some(c_name) = name_of(pre, voc, c) else { continue };
                    for d in &universe {
                        if holds(pre, role, prop, d)
                            && typed_as(pre, voc, d, member_class)
                            && name_of(pre, voc, d).as_deref() == Some(&c_name)
                        {
                            heads.insert(Triple::new(
                                c.clone(),
                                voc.has_mapping_object.clone(),
                                Term::Iri(d.clone()),
                            ));
                        }
                    }
                }
            }
        }
    }
    delta(pre, heads)
}

// ── Query oracles ───────────────────────────────────────────────────────

fn closure_up(graph: &Graph, voc: &Vocabulary, start: &Iri) -> BTreeSet<Iri> {
    let universe = node_universe(graph);
    let mut visited = BTreeSet::new();
    let mut frontier = vec![start.clone()];
    while let Some(node) = frontier.pop() {
        if !visited.insert(node.clone()) {
            continue;
        }
        for next in &universe {
            if holds(graph, &node, &voc.rdfs_sub_class_of, next) && !visited.contains(next) {
                frontier.push(next.clone());
            }
        }
    }
    visited
}

/// Brute-force flow edges: every isLinked pair of port-typed interfaces
/// becomes an owner-to-owner edge, then the mode keeps both directions or
/// filters on the source's valve state.
pub fn oracle_flow_edges(
    graph: &Graph,
    voc: &Vocabulary,
    port_class: &Iri,
    mode: FlowMode,
) -> BTreeSet<(Iri, Iri)> {
    let universe = node_universe(graph);
    // One closure computation per distinct class keeps the quadratic edge
    // enumeration below affordable on the larger fixtures.
    let mut reaches_port: std::collections::BTreeMap<Iri, bool> = Default::default();
    let mut is_port = |iface: &Iri| {
        universe.iter().any(|class| {
            if !typed_as(graph, voc, iface, class) {
                return false;
            }
            if let Some(hit) = reaches_port.get(class) {
                return *hit;
            }
            let hit = closure_up(graph, voc, class).contains(port_class);
            reaches_port.insert(class.clone(), hit);
            hit
        })
    };
    let owners = |iface: &Iri| -> Vec<Iri> {
        universe
            .iter()
            .filter(|owner| {
                holds(graph, owner, &voc.has_interface, iface)
                    && typed_as(graph, voc, owner, &voc.internal_element)
            })
            .cloned()
            .collect()
    };
    let mut base = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            if !holds(graph, a, &voc.is_linked, b) || !is_port(a) || !is_port(b) {
                continue;
            }
            for s in owners(a) {
                for o in owners(b) {
                    base.insert((s.clone(), o.clone()));
                }
            }
        }
    }
    match mode {
        FlowMode::Bidirectional => {
            let mut edges = base.clone();
            edges.extend(base.iter().map(|(s, o)| (o.clone(), s.clone())));
            edges
        }
        FlowMode::ValveState => {
            base.into_iter().filter(|(s, _)| oracle_valve_open(graph, voc, s)).collect()
        }
    }
}

fn oracle_valve_open(graph: &Graph, voc: &Vocabulary, element: &Iri) -> bool {
    let universe = node_universe(graph);
    let mut values = Vec::new();
    for attribute in &universe {
        if !holds(graph, element, &voc.has_attribute, attribute) {
            continue;
        }
        let valve_typed = universe.iter().any(|class| {
            typed_as(graph, voc, attribute, class)
                && name_of(graph, voc, class).as_deref() == Some("ValveState")
        });
        if !valve_typed {
            continue;
        }
        for term in graph.objects_of(attribute, &voc.has_attribute_value) {
            if let Term::Literal(literal) = term {
                values.push(literal.lexical().to_string());
            }
        }
    }
    values.is_empty() || values.iter().any(|v| v == "true")
}

// ── Validation oracle ───────────────────────────────────────────────────

/// Brute-force rule evaluation. Violations are reported as
/// (rule id, focus node, observed) tuples.
pub fn oracle_validate(
    graph: &Graph,
    voc: &Vocabulary,
    rules: &[ShapeRule],
) -> BTreeSet<(String, Iri, String)> {
    let universe = node_universe(graph);
    let instance_of = |node: &Iri, class: &Iri| {
        universe.iter().any(|direct| {
            typed_as(graph, voc, node, direct)
                && (direct == class || closure_up(graph, voc, direct).contains(class))
        })
    };
    let mut violations = BTreeSet::new();
    for rule in rules {
        for focus in universe.iter().filter(|f| instance_of(f, &rule.target_class)) {
            match rule.kind {
                RuleKind::Cardinality => {
                    let count = graph
                        .objects_of(focus, &rule.path)
                        .into_iter()
                        .filter(|term| match &rule.value_class {
                            Some(class) => {
                                term.as_iri().is_some_and(|iri| instance_of(iri, class))
                            }
                            None => true,
                        })
                        .count();
                    let min_broken = rule.min_count.is_some_and(|min| count < min as usize);
                    let max_broken = rule.max_count.is_some_and(|max| count > max as usize);
                    if min_broken || max_broken {
                        violations.insert((rule.rule_id.clone(), focus.clone(), count.to_string()));
                    }
                }
                RuleKind::Connection => {
                    let class = rule.value_class.as_ref().expect("connection rule has class");
                    for term in graph.objects_of(focus, &rule.path) {
                        let conforming =
                            term.as_iri().is_some_and(|iri| instance_of(iri, class));
                        if !conforming {
                            let observed = match term {
                                Term::Iri(iri) => iri.as_str().to_string(),
                                Term::Literal(literal) => literal.lexical().to_string(),
                            };
                            violations.insert((rule.rule_id.clone(), focus.clone(), observed));
                        }
                    }
                }
            }
        }
    }
    violations
}

// ── Random document generator ───────────────────────────────────────────
//
// Builds small but feature-dense documents directly as typed structures:
// class hierarchies in all four libraries (base refs always point at
// earlier siblings, so they are acyclic), supported/required roles, facet
// and group requirements, mirrors, interface links, typed attributes and a
// deliberate share of dangling references. Sibling names stay unique so
// path-minted IRIs never collide.

// A small pool keeps same-name collisions across elements frequent, which
// is what exercises attribute mappings and inheritance overrides.
const MEMBER_NAMES: &[&str] = &["Length", "Width", "State", "Level"];

pub struct DocumentBuilder {
    rng: ChaCha8Rng,
    element_budget: usize,
    next_id: usize,
    interface_ids: Vec<String>,
    role_paths: Vec<String>,
    suc_paths: Vec<String>,
    ic_paths: Vec<String>,
    at_paths: Vec<String>,
    ie_ids: Vec<String>,
    facet_path: Option<String>,
    group_path: Option<String>,
}

pub fn random_document(seed: u64) -> Document {
    DocumentBuilder::new(seed).build()
}

impl DocumentBuilder {
    fn new(seed: u64) -> DocumentBuilder {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let element_budget = rng.gen_range(14..=20);
        DocumentBuilder {
            rng,
            element_budget,
            next_id: 0,
            interface_ids: Vec::new(),
            role_paths: Vec::new(),
            suc_paths: Vec::new(),
            ic_paths: Vec::new(),
            at_paths: Vec::new(),
            ie_ids: Vec::new(),
            facet_path: None,
            group_path: None,
        }
    }

    fn take(&mut self, count: usize) -> bool {
        if self.element_budget >= count {
            self.element_budget -= count;
            true
        } else {
            false
        }
    }

    fn fresh_id(&mut self) -> String {
        let id = format!("e{}", self.next_id);
        self.next_id += 1;
        id
    }

    fn chance(&mut self, percent: u32) -> bool {
        self.rng.gen_range(0..100) < percent
    }

    fn ref_path(&mut self, pool: &[String]) -> Option<RefPath> {
        if pool.is_empty() || self.chance(20) {
            return RefPath::parse("Nowhere/Else");
        }
        let pick = pool[self.rng.gen_range(0..pool.len())].clone();
        RefPath::parse(&pick)
    }

    fn member_attributes(&mut self, max: usize) -> Vec<Attribute> {
        let mut picked: Vec<&str> = MEMBER_NAMES.to_vec();
        let count = self.rng.gen_range(0..=max);
        let mut attributes = Vec::new();
        for _ in 0..count {
            if picked.is_empty() || !self.take(1) {
                break;
            }
            let name = picked.remove(self.rng.gen_range(0..picked.len()));
            let mut attribute = Attribute::named(name);
            if self.chance(50) {
                let (value, data_type) = match self.rng.gen_range(0..3) {
                    0 => ("true", Some("xs:boolean")),
                    1 => ("150", Some("xs:double")),
                    _ => ("plain", None),
                };
                attribute.value = Some(value.to_string());
                attribute.data_type = data_type.map(str::to_string);
            }
            if self.chance(55) {
                attribute.ref_attribute_type = self.ref_path(&self.at_paths.clone());
            }
            attributes.push(attribute);
        }
        attributes
    }

    fn member_interface(&mut self, label: usize) -> Option<ExternalInterface> {
        if !self.take(1) {
            return None;
        }
        let id = self.fresh_id();
        self.interface_ids.push(id.clone());
        let mut interface = ExternalInterface::default();
        interface.id = amlgraph::ElementId(id);
        // A three-name pool keeps cross-element name collisions frequent,
        // which is what drives interface mappings and overrides.
        interface.name = format!("P{}", label % 3);
        if self.chance(60) {
            interface.ref_base_class = self.ref_path(&self.ic_paths.clone());
        }
        Some(interface)
    }

    fn build(mut self) -> Document {
        let mut doc = Document::default();
        doc.source_name = "generated".to_string();

        // Links are appended last; reserve their budget up front so the
        // element loop cannot starve them.
        let reserved_links = self.rng.gen_range(0..=2usize);
        let reserved_links = if self.take(reserved_links) { reserved_links } else { 0 };

        // Libraries spend first, so hold back a share of the budget for the
        // instance hierarchy or most documents end up with bare libraries.
        let ih_reserve = self.rng.gen_range(5..=8).min(self.element_budget);
        self.element_budget -= ih_reserve;

        if self.chance(55) && self.take(4) {
            let facet = RoleClass { name: "Facet".to_string(), ..RoleClass::default() };
            let group = RoleClass { name: "Group".to_string(), ..RoleClass::default() };
            let base = RoleClass {
                name: "AutomationMLBaseRole".to_string(),
                children: vec![facet, group],
                ..RoleClass::default()
            };
            self.facet_path =
                Some("AutomationMLBaseRoleClassLib/AutomationMLBaseRole/Facet".to_string());
            self.group_path =
                Some("AutomationMLBaseRoleClassLib/AutomationMLBaseRole/Group".to_string());
            doc.rc_libs.push(Library {
                name: "AutomationMLBaseRoleClassLib".to_string(),
                elements: vec![base],
            });
        }

        if self.chance(80) && self.take(1) {
            let mut lib = Library::<RoleClass> { name: "Roles".to_string(), elements: Vec::new() };
            let count = self.rng.gen_range(2..=3);
            for i in 0..count {
                if !self.take(1) {
                    break;
                }
                let mut rc = RoleClass { name: format!("R{i}"), ..RoleClass::default() };
                if self.chance(60) && !self.role_paths.is_empty() {
                    rc.ref_base_class = self.ref_path(&self.role_paths.clone());
                }
                rc.attributes = self.member_attributes(2);
                if self.chance(50) {
                    if let Some(interface) = self.member_interface(i) {
                        rc.external_interfaces.push(interface);
                    }
                }
                self.role_paths.push(format!("Roles/{}", rc.name));
                lib.elements.push(rc);
            }
            doc.rc_libs.push(lib);
        }

        if self.chance(50) && self.take(1) {
            let mut lib =
                Library::<InterfaceClass> { name: "Ifaces".to_string(), elements: Vec::new() };
            let count = self.rng.gen_range(1..=2);
            for i in 0..count {
                if !self.take(1) {
                    break;
                }
                let mut ic = InterfaceClass { name: format!("I{i}"), ..InterfaceClass::default() };
                if self.chance(40) && !self.ic_paths.is_empty() {
                    ic.ref_base_class = self.ref_path(&self.ic_paths.clone());
                }
                self.ic_paths.push(format!("Ifaces/{}", ic.name));
                lib.elements.push(ic);
            }
            doc.ic_libs.push(lib);
        }

        if self.chance(50) && self.take(1) {
            let mut lib =
                Library::<AttributeType> { name: "Types".to_string(), elements: Vec::new() };
            let count = self.rng.gen_range(1..=2);
            for i in 0..count {
                if !self.take(1) {
                    break;
                }
                let mut at = AttributeType { name: format!("T{i}"), ..AttributeType::default() };
                if self.chance(40) && !self.at_paths.is_empty() {
                    at.ref_attribute_type = self.ref_path(&self.at_paths.clone());
                }
                self.at_paths.push(format!("Types/{}", at.name));
                lib.elements.push(at);
            }
            doc.at_libs.push(lib);
        }

        if self.chance(60) && self.take(1) {
            let mut lib =
                Library::<SystemUnitClass> { name: "Units".to_string(), elements: Vec::new() };
            let count = self.rng.gen_range(1..=2);
            for i in 0..count {
                if !self.take(1) {
                    break;
                }
                let mut suc =
                    SystemUnitClass { name: format!("U{i}"), ..SystemUnitClass::default() };
                if self.chance(60) && !self.suc_paths.is_empty() {
                    suc.ref_base_class = self.ref_path(&self.suc_paths.clone());
                }
                suc.attributes = self.member_attributes(1);
                if self.chance(30) {
                    if let Some(interface) = self.member_interface(i) {
                        suc.external_interfaces.push(interface);
                    }
                }
                if self.chance(40) {
                    if let Some(path) = self.ref_path(&self.role_paths.clone()) {
                        suc.supported_role_classes.push(path);
                    }
                }
                self.suc_paths.push(format!("Units/{}", suc.name));
                lib.elements.push(suc);
            }
            doc.suc_libs.push(lib);
        }

        self.element_budget += ih_reserve;
        let mut hierarchy =
            InstanceHierarchy { name: "Plant".to_string(), internal_elements: Vec::new() };
        self.take(1);
        let mut serial = 0usize;
        while self.element_budget > 0 {
            let Some(element) = self.internal_element(serial, true) else { break };
            hierarchy.internal_elements.push(element);
            serial += 1;
        }

        // Links go on the last element once every interface ID exists,
        // consuming the budget reserved earlier.
        if let Some(owner) = hierarchy.internal_elements.last_mut() {
            let mut link_no = 0;
            let mut attempts = 0;
            while self.interface_ids.len() >= 2 && link_no < reserved_links && attempts < 8 {
                attempts += 1;
                let a = self.interface_ids[self.rng.gen_range(0..self.interface_ids.len())].clone();
                let mut b =
                    self.interface_ids[self.rng.gen_range(0..self.interface_ids.len())].clone();
                if self.chance(15) {
                    b = "missing-partner".to_string();
                }
                if a == b {
                    continue;
                }
                owner.internal_links.push(InternalLink {
                    name: format!("L{link_no}"),
                    ref_partner_side_a: amlgraph::ElementId(a),
                    ref_partner_side_b: amlgraph::ElementId(b),
                });
                link_no += 1;
            }
        }

        doc.instance_hierarchies.push(hierarchy);
        doc
    }

    fn internal_element(&mut self, serial: usize, allow_children: bool) -> Option<InternalElement> {
        if !self.take(1) {
            return None;
        }
        let id = self.fresh_id();
        self.ie_ids.push(id.clone());
        let mut ie = InternalElement::named(id, format!("E{serial}"));

        if self.chance(45) {
            let roll = self.rng.gen_range(0..100);
            ie.ref_base_system_unit_path = if roll < 45 {
                self.ref_path(&self.suc_paths.clone())
            } else if roll < 85 && self.ie_ids.len() > 1 {
                let pick = self.rng.gen_range(0..self.ie_ids.len() - 1);
                RefPath::parse(&self.ie_ids[pick].clone())
            } else {
                RefPath::parse("Nowhere/Else")
            };
        }

        ie.attributes = self.member_attributes(2);
        let interfaces = self.rng.gen_range(0..=2);
        for i in 0..interfaces {
            if let Some(interface) = self.member_interface(serial * 3 + i) {
                ie.external_interfaces.push(interface);
            }
        }

        let nested = !allow_children && self.facet_path.is_some();
        let rr_chance = if nested { 75 } else { 55 };
        if self.chance(rr_chance) {
            // Facet and Group requirements only produce heads on nested
            // elements (the parent must itself be an element), so children
            // lean heavily toward them while top-level elements take roles.
            let target = if nested && self.chance(70) {
                let pick = if self.chance(50) {
                    self.facet_path.clone()
                } else {
                    self.group_path.clone()
                };
                pick.and_then(|p| RefPath::parse(&p))
            } else if self.chance(80) {
                self.ref_path(&self.role_paths.clone())
            } else {
                RefPath::parse("Nowhere/Else")
            };
            if let Some(path) = target {
                ie.role_requirements.push(path);
            }
        }
        if self.chance(30) {
            if let Some(path) = self.ref_path(&self.role_paths.clone()) {
                ie.supported_role_classes.push(path);
            }
        }

        let child_chance = if self.facet_path.is_some() { 70 } else { 30 };
        if allow_children && self.chance(child_chance) {
            if let Some(child) = self.internal_element(serial + 100, false) {
                ie.children.push(child);
            }
        }
        Some(ie)
    }
}

/// Random small RDF graphs plus random shape rules for the validation
/// equivalence suite. Graphs mix class hierarchies (possibly cyclic),
/// instance typing, IRI-valued and literal-valued path edges.
pub fn random_validation_case(seed: u64) -> (Graph, Vec<ShapeRule>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let voc = vocabulary();
    let node = |n: usize| Iri::new(format!("http://example.org/v/n{n}")).expect("valid IRI");
    let class = |n: usize| Iri::new(format!("http://example.org/v/C{n}")).expect("valid IRI");
    let path = |n: usize| Iri::new(format!("http://example.org/v/p{n}")).expect("valid IRI");

    let mut graph = Graph::new();
    let classes = rng.gen_range(2..=4);
    for c in 0..classes {
        if rng.gen_range(0..100) < 60 {
            let base = rng.gen_range(0..classes);
            graph.insert(Triple::new(
                class(c),
                voc.rdfs_sub_class_of.clone(),
                Term::Iri(class(base)),
            ));
        }
    }
    let nodes = rng.gen_range(3..=8);
    for n in 0..nodes {
        for _ in 0..rng.gen_range(0..=2) {
            graph.insert(Triple::new(
                node(n),
                voc.rdf_type.clone(),
                Term::Iri(class(rng.gen_range(0..classes))),
            ));
        }
        for p in 0..2 {
            for _ in 0..rng.gen_range(0..=3) {
                let object = if rng.gen_range(0..100) < 75 {
                    Term::Iri(node(rng.gen_range(0..nodes)))
                } else {
                    Term::Literal(Literal::string("tag"))
                };
                graph.insert(Triple::new(node(n), path(p), object));
            }
        }
    }

    let mut rules = Vec::new();
    for r in 0..rng.gen_range(1..=3) {
        let target_class = class(rng.gen_range(0..classes));
        let rule_path = path(rng.gen_range(0..2));
        if rng.gen_range(0..100) < 55 {
            let (min_count, max_count) = match rng.gen_range(0..3) {
                0 => (Some(rng.gen_range(0..=2)), None),
                1 => (None, Some(rng.gen_range(0..=2))),
                _ => (Some(0), Some(rng.gen_range(0..=2))),
            };
            rules.push(ShapeRule {
                rule_id: format!("card-{r}"),
                target_class,
                kind: RuleKind::Cardinality,
                path: rule_path,
                value_class: rng.gen_bool(0.5).then(|| class(rng.gen_range(0..classes))),
                min_count,
                max_count,
            });
        } else {
            rules.push(ShapeRule {
                rule_id: format!("conn-{r}"),
                target_class,
                kind: RuleKind::Connection,
                path: rule_path,
                value_class: Some(class(rng.gen_range(0..classes))),
                min_count: None,
                max_count: None,
            });
        }
    }
    (graph, rules)
}

/// Shorthand for a typed xsd literal IRI.
pub fn xsd(local: &str) -> Iri {
    Iri::new(format!("{XSD_NS}{local}")).expect("xsd IRI is valid")
}
