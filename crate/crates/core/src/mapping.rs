//! Document-to-graph lowering and rule-based enrichment.
//!
//! Mapping runs in two phases. [`map_structure`] lowers the typed document
//! directly: every element gets an IRI, a metaclass triple, its name, its
//! containment edges and its reference/value triples. The `enrich_*`
//! operations then derive the implied semantics (instance types, the class
//! hierarchy, interface links, mirror pairs, facets/groups, inherited class
//! members and name-based mapping objects). [`map_full`] chains both phases
//! in a fixed order.
//!
//! Class-family elements are punned: the same IRI carries a class
//! declaration and participates in instance-level triples.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::caex::{
    Attribute, AttributeType, Document, ElementKind, ExternalInterface, InterfaceClass,
    InternalElement, MappingKind, RefPath, RoleClass, SystemUnitClass,
};
use crate::diagnostics::{Code, Diagnostic, Location};
use crate::parser::{index_document, NodeId, ResolverIndex};
use crate::rdf::{iri_safe, Graph, Iri, Literal, Term, Triple, XSD_NS};
use crate::vocab::{Vocabulary, DEFAULT_ONTOLOGY_NS, OWL_NS, RDFS_NS, RDF_NS};

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("base IRI must end with '/' or '#', got {0:?}")]
    InvalidBaseIri(String),
    /// The subClassOf hierarchy contains a cycle; member inheritance has no
    /// defined semantics there, so mapping aborts.
    #[error("CYCLIC_HIERARCHY: {0}")]
    CyclicHierarchy(String),
}

/// Namespaces and switches for one mapping run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingConfig {
    /// Namespace for minted element IRIs; must end with '/' or '#'.
    pub base_iri: Iri,
    /// Namespace of the vocabulary (classes and properties).
    pub ontology_ns: Iri,
    /// Emit a standard label triple next to every hasName triple.
    pub emit_labels: bool,
}

impl MappingConfig {
    pub fn new(base_iri: Iri) -> Result<MappingConfig, MappingError> {
        let config = MappingConfig {
            base_iri,
            ontology_ns: Iri::new(DEFAULT_ONTOLOGY_NS).expect("default namespace is valid"),
            emit_labels: true,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), MappingError> {
        if self.base_iri.as_str().ends_with('/') || self.base_iri.as_str().ends_with('#') {
            Ok(())
        } else {
            Err(MappingError::InvalidBaseIri(self.base_iri.as_str().to_string()))
        }
    }
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig::new(Iri::new("urn:aml:document/").expect("default base is valid"))
            .expect("default config is valid")
    }
}

/// Mints the IRI for one indexed element.
///
/// ID-bearing elements (InternalElement, ExternalInterface) become
/// `base + iri_safe(id)`. Everything else hangs off its parent:
/// `parent-IRI + "/" + iri_safe(name)`, with top-level elements rooted at
/// the base IRI. Sibling-name and ID uniqueness make this injective.
pub fn assign_iri(node: NodeId, index: &ResolverIndex, config: &MappingConfig) -> Iri {
    let info = index.node(node);
    if let Some(id) = info.id.as_ref().filter(|id| !id.is_empty()) {
        return config.base_iri.join_raw(&iri_safe(id.as_str()));
    }
    match info.parent {
        Some(parent) => {
            let parent_iri = assign_iri(parent, index, config);
            parent_iri.join_raw(&format!("/{}", iri_safe(&info.name)))
        }
        None => config.base_iri.join_raw(&iri_safe(&info.name)),
    }
}

/// Phase one: direct structural lowering of a document.
///
/// Unresolvable references do not fail the mapping; the triple is omitted
/// and a DANGLING_REF diagnostic is recorded.
pub fn map_structure(doc: &Document, config: &MappingConfig) -> (Graph, Vec<Diagnostic>) {
    let index = index_document(doc);
    let voc = Vocabulary::new(&config.ontology_ns);
    let mut lowering = Lowering {
        index: &index,
        voc,
        config,
        iris: BTreeMap::new(),
        graph: Graph::new(),
        diagnostics: Vec::new(),
    };
    lowering.run(doc);
    (lowering.graph, lowering.diagnostics)
}

/// Phase one plus all enrichment operations, in the fixed order:
/// instance types, role types, subclass, links, mirrors, facets/groups,
/// inheritance, name mappings.
pub fn map_full(doc: &Document, config: &MappingConfig) -> Result<(Graph, Vec<Diagnostic>), MappingError> {
    config.validate()?;
    let (mut graph, diagnostics) = map_structure(doc, config);
    let voc = Vocabulary::new(&config.ontology_ns);
    enrich_instance_types(&mut graph, &voc);
    enrich_role_types(&mut graph, &voc);
    enrich_subclass(&mut graph, &voc);
    enrich_links(&mut graph, &voc);
    enrich_mirrors(&mut graph, &voc);
    enrich_facets_groups(&mut graph, &voc);
    enrich_inheritance(&mut graph, &voc)?;
    enrich_mappings(&mut graph, &voc);
    Ok((graph, diagnostics))
}

struct Lowering<'a> {
    index: &'a ResolverIndex,
    voc: Vocabulary,
    config: &'a MappingConfig,
    iris: BTreeMap<NodeId, Iri>,
    graph: Graph,
    diagnostics: Vec<Diagnostic>,
}

impl Lowering<'_> {
    fn run(&mut self, doc: &Document) {
        self.graph.add_prefix("aml", self.config.ontology_ns.clone());
        self.graph.add_prefix("doc", self.config.base_iri.clone());
        self.graph.add_prefix("rdf", Iri::new(RDF_NS).expect("valid"));
        self.graph.add_prefix("rdfs", Iri::new(RDFS_NS).expect("valid"));
        self.graph.add_prefix("owl", Iri::new(OWL_NS).expect("valid"));
        self.graph.add_prefix("xsd", Iri::new(XSD_NS).expect("valid"));

        self.emit_skeleton();
        for ih in &doc.instance_hierarchies {
            let path = RefPath::root(&ih.name);
            for ie in &ih.internal_elements {
                self.internal_element(ie, &path);
            }
        }
        for lib in &doc.suc_libs {
            let path = RefPath::root(&lib.name);
            for suc in &lib.elements {
                self.system_unit_class(suc, &path);
            }
        }
        for lib in &doc.rc_libs {
            let path = RefPath::root(&lib.name);
            for rc in &lib.elements {
                self.role_class(rc, &path);
            }
        }
        for lib in &doc.ic_libs {
            let path = RefPath::root(&lib.name);
            for ic in &lib.elements {
                self.interface_class(ic, &path);
            }
        }
        for lib in &doc.at_libs {
            let path = RefPath::root(&lib.name);
            for at in &lib.elements {
                self.attribute_type(at, &path);
            }
        }
    }

    fn iri(&mut self, node: NodeId) -> Iri {
        if let Some(iri) = self.iris.get(&node) {
            return iri.clone();
        }
        let iri = assign_iri(node, self.index, self.config);
        self.iris.insert(node, iri.clone());
        iri
    }

    fn iri_at(&mut self, path: &RefPath) -> Option<Iri> {
        self.index.resolve_path(path).map(|node| self.iri(node))
    }

    fn add(&mut self, subject: Iri, predicate: Iri, object: impl Into<Term>) {
        self.graph.insert(Triple::new(subject, predicate, object));
    }

    /// Metaclass, name, label and containment triples for every indexed
    /// element; model traversal below adds references and values.
    fn emit_skeleton(&mut self) {
        let nodes: Vec<NodeId> = self.index.iter().map(|(id, _)| id).collect();
        for node in nodes {
            let iri = self.iri(node);
            let info = self.index.node(node).clone();
            let metaclass = match info.kind {
                ElementKind::InstanceHierarchy => &self.voc.instance_hierarchy,
                ElementKind::InternalElement => &self.voc.internal_element,
                ElementKind::ExternalInterface => &self.voc.external_interface,
                ElementKind::Attribute => &self.voc.attribute,
                ElementKind::InternalLink => &self.voc.internal_link,
                ElementKind::SystemUnitClass => &self.voc.system_unit_class,
                ElementKind::RoleClass => &self.voc.role_class,
                ElementKind::InterfaceClass => &self.voc.interface_class,
                ElementKind::AttributeType => &self.voc.attribute_type,
                ElementKind::SystemUnitClassLib => &self.voc.system_unit_class_lib,
                ElementKind::RoleClassLib => &self.voc.role_class_lib,
                ElementKind::InterfaceClassLib => &self.voc.interface_class_lib,
                ElementKind::AttributeTypeLib => &self.voc.attribute_type_lib,
            }
            .clone();
            self.add(iri.clone(), self.voc.rdf_type.clone(), Term::Iri(metaclass));
            if is_class_kind(info.kind) {
                self.add(
                    iri.clone(),
                    self.voc.rdf_type.clone(),
                    Term::Iri(self.voc.owl_class.clone()),
                );
            }
            self.add(iri.clone(), self.voc.has_name.clone(), Literal::string(&info.name));
            if self.config.emit_labels {
                self.add(iri.clone(), self.voc.rdfs_label.clone(), Literal::string(&info.name));
            }
            if let Some(parent) = info.parent {
                let parent_iri = self.iri(parent);
                let containment = match info.kind {
                    ElementKind::Attribute => self.voc.has_attribute.clone(),
                    ElementKind::ExternalInterface => self.voc.has_interface.clone(),
                    _ => self.voc.has_part.clone(),
                };
                self.add(parent_iri, containment, Term::Iri(iri));
            }
        }
    }

    /// Emits one reference triple, or a diagnostic if the target is unknown.
    fn reference(&mut self, subject: &Iri, owner: &RefPath, predicate: Iri, target: &RefPath, what: &str) {
        match self.index.resolve_ref_path(target) {
            Some(node) => {
                let object = self.iri(node);
                self.add(subject.clone(), predicate, Term::Iri(object));
            }
            None => self.diagnostics.push(Diagnostic::warning(
                Code::DanglingRef,
                Location::Path(owner.joined()),
                format!("omitted {what} triple: {:?} does not resolve", target.joined()),
            )),
        }
    }

    fn internal_element(&mut self, ie: &InternalElement, parent: &RefPath) {
        let path = parent.child(&ie.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &ie.ref_base_system_unit_path {
            self.reference(
                &iri,
                &path,
                self.voc.has_ref_base_system_unit_class.clone(),
                target,
                "hasRefBaseSystemUnitClass",
            );
        }
        for role in &ie.supported_role_classes {
            self.reference(&iri, &path, self.voc.has_supported_role_class.clone(), role, "hasSupportedRoleClass");
        }
        for role in &ie.role_requirements {
            self.reference(&iri, &path, self.voc.has_role_requirement.clone(), role, "hasRoleRequirement");
        }
        for attribute in &ie.attributes {
            self.attribute(attribute, &path);
        }
        for interface in &ie.external_interfaces {
            self.external_interface(interface, &path);
        }
        for link in &ie.internal_links {
            let link_path = path.child(&link.name);
            let Some(link_iri) = self.iri_at(&link_path) else { continue };
            for (predicate, what, token) in [
                (self.voc.has_ref_partner_side_a.clone(), "hasRefPartnerSideA", &link.ref_partner_side_a),
                (self.voc.has_ref_partner_side_b.clone(), "hasRefPartnerSideB", &link.ref_partner_side_b),
            ] {
                match self.index.resolve_partner(token) {
                    Some(node) => {
                        let object = self.iri(node);
                        self.add(link_iri.clone(), predicate, Term::Iri(object));
                    }
                    None => self.diagnostics.push(Diagnostic::warning(
                        Code::DanglingRef,
                        Location::Path(link_path.joined()),
                        format!("omitted {what} triple: {token} does not resolve"),
                    )),
                }
            }
        }
        self.explicit_mappings(ie, &path, &iri);
        for child in &ie.children {
            self.internal_element(child, &path);
        }
    }

    /// Lowers the file's explicit AttributeNameMapping/InterfaceNameMapping
    /// entries; name-equality mappings are derived later by
    /// [`enrich_mappings`].
    fn explicit_mappings(&mut self, ie: &InternalElement, path: &RefPath, _iri: &Iri) {
        for mapping in &ie.explicit_mappings {
            let member_kind = match mapping.kind {
                MappingKind::Attribute => ElementKind::Attribute,
                MappingKind::Interface => ElementKind::ExternalInterface,
            };
            let element_member = self
                .index
                .resolve_path(&path.child(&mapping.element_member))
                .filter(|n| self.index.node(*n).kind == member_kind);
            let role_member = self
                .index
                .resolve_ref_path(&mapping.role)
                .and_then(|role| self.resolve_role_member(role, member_kind, &mapping.role_member));
            match (element_member, role_member) {
                (Some(c), Some(d)) => {
                    let subject = self.iri(c);
                    let object = self.iri(d);
                    self.add(subject, self.voc.has_mapping_object.clone(), Term::Iri(object));
                }
                _ => self.diagnostics.push(Diagnostic::warning(
                    Code::DanglingRef,
                    Location::Path(path.joined()),
                    format!(
                        "omitted hasMappingObject triple: {:?} -> {:?} of role {:?} does not resolve",
                        mapping.element_member,
                        mapping.role_member,
                        mapping.role.joined()
                    ),
                )),
            }
        }
    }

    /// Looks up a named member on a role class, following its base-class
    /// chain (explicit mappings may point at inherited members).
    fn resolve_role_member(&self, role: NodeId, kind: ElementKind, member: &str) -> Option<NodeId> {
        let mut current = Some(role);
        let mut seen = BTreeSet::new();
        while let Some(node) = current {
            if !seen.insert(node) {
                break;
            }
            let found = self
                .index
                .iter()
                .find(|(_, info)| info.parent == Some(node) && info.kind == kind && info.name == member);
            if let Some((id, _)) = found {
                return Some(id);
            }
            current = self
                .index
                .node(node)
                .base_ref
                .as_ref()
                .and_then(|base| self.index.resolve_ref_path(base));
        }
        None
    }

    fn attribute(&mut self, attribute: &Attribute, parent: &RefPath) {
        let path = parent.child(&attribute.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &attribute.ref_attribute_type {
            self.reference(&iri, &path, self.voc.has_ref_attribute_type.clone(), target, "hasRefAttributeType");
        }
        if let Some(value) = &attribute.value {
            let literal = match attribute.data_type.as_deref().and_then(xsd_datatype) {
                Some(datatype) => Literal::typed(value, datatype),
                None => Literal::string(value),
            };
            self.add(iri.clone(), self.voc.has_attribute_value.clone(), literal);
        }
        if let Some(unit) = &attribute.unit {
            self.add(iri.clone(), self.voc.has_unit.clone(), Literal::string(unit));
        }
        if let Some(description) = &attribute.description {
            self.add(iri.clone(), self.voc.has_description.clone(), Literal::string(description));
        }
        for child in &attribute.children {
            self.attribute(child, &path);
        }
    }

    fn external_interface(&mut self, interface: &ExternalInterface, parent: &RefPath) {
        let path = parent.child(&interface.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &interface.ref_base_class {
            self.reference(&iri, &path, self.voc.has_ref_base_class.clone(), target, "hasRefBaseClass");
        }
        for attribute in &interface.attributes {
            self.attribute(attribute, &path);
        }
        for child in &interface.children {
            self.external_interface(child, &path);
        }
    }

    fn system_unit_class(&mut self, suc: &SystemUnitClass, parent: &RefPath) {
        let path = parent.child(&suc.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &suc.ref_base_class {
            self.reference(&iri, &path, self.voc.has_ref_base_class.clone(), target, "hasRefBaseClass");
        }
        for role in &suc.supported_role_classes {
            self.reference(&iri, &path, self.voc.has_supported_role_class.clone(), role, "hasSupportedRoleClass");
        }
        for attribute in &suc.attributes {
            self.attribute(attribute, &path);
        }
        for interface in &suc.external_interfaces {
            self.external_interface(interface, &path);
        }
        for ie in &suc.internal_elements {
            self.internal_element(ie, &path);
        }
        for child in &suc.children {
            self.system_unit_class(child, &path);
        }
    }

    fn role_class(&mut self, rc: &RoleClass, parent: &RefPath) {
        let path = parent.child(&rc.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &rc.ref_base_class {
            self.reference(&iri, &path, self.voc.has_ref_base_class.clone(), target, "hasRefBaseClass");
        }
        for attribute in &rc.attributes {
            self.attribute(attribute, &path);
        }
        for interface in &rc.external_interfaces {
            self.external_interface(interface, &path);
        }
        for child in &rc.children {
            self.role_class(child, &path);
        }
    }

    fn interface_class(&mut self, ic: &InterfaceClass, parent: &RefPath) {
        let path = parent.child(&ic.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &ic.ref_base_class {
            self.reference(&iri, &path, self.voc.has_ref_base_class.clone(), target, "hasRefBaseClass");
        }
        for attribute in &ic.attributes {
            self.attribute(attribute, &path);
        }
        for child in &ic.children {
            self.interface_class(child, &path);
        }
    }

    fn attribute_type(&mut self, at: &AttributeType, parent: &RefPath) {
        let path = parent.child(&at.name);
        let Some(iri) = self.iri_at(&path) else { return };
        if let Some(target) = &at.ref_attribute_type {
            self.reference(&iri, &path, self.voc.has_ref_attribute_type.clone(), target, "hasRefAttributeType");
        }
        for attribute in &at.attributes {
            self.attribute(attribute, &path);
        }
        for child in &at.children {
            self.attribute_type(child, &path);
        }
    }
}

fn is_class_kind(kind: ElementKind) -> bool {
    matches!(
        kind,
        ElementKind::SystemUnitClass
            | ElementKind::RoleClass
            | ElementKind::InterfaceClass
            | ElementKind::AttributeType
    )
}

/// Maps a CAEX AttributeDataType token ("xs:double", "xsd:string", ...) to
/// an XML Schema datatype IRI; unknown tokens fall back to plain strings.
fn xsd_datatype(token: &str) -> Option<Iri> {
    const KNOWN: &[&str] = &[
        "string", "boolean", "decimal", "integer", "int", "long", "short", "byte",
        "nonNegativeInteger", "nonPositiveInteger", "negativeInteger", "positiveInteger",
        "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte", "float", "double",
        "duration", "dateTime", "time", "date", "anyURI",
    ];
    let local = token.rsplit(':').next().unwrap_or(token);
    if KNOWN.contains(&local) {
        Some(Iri::new(format!("{XSD_NS}{local}")).expect("xsd datatype IRI is valid"))
    } else {
        None
    }
}

fn is_a(graph: &Graph, voc: &Vocabulary, node: &Iri, class: &Iri) -> bool {
    graph.contains(&Triple::new(node.clone(), voc.rdf_type.clone(), Term::Iri(class.clone())))
}

fn insert_new(graph: &mut Graph, added: &mut Vec<Triple>, triple: Triple) {
    if graph.insert(triple.clone()) {
        added.push(triple);
    }
}

/// Instance typing: an Attribute referencing an AttributeType, an
/// ExternalInterface referencing an InterfaceClass, or an InternalElement
/// referencing a SystemUnitClass becomes an instance of the referenced
/// class. An InternalElement referencing another InternalElement is a
/// mirror, not an instance (see [`enrich_mirrors`]). Referenced classes
/// additionally get a punning class declaration.
pub fn enrich_instance_types(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_ref_attribute_type), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.attribute) {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    for triple in graph.matching(None, Some(&voc.has_ref_base_class), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.external_interface) {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    for triple in graph.matching(None, Some(&voc.has_ref_base_system_unit_class), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.internal_element)
                && is_a(graph, voc, object, &voc.system_unit_class)
            {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    let mut added = Vec::new();
    for (instance, class) in pending {
        insert_new(graph, &mut added, Triple::new(instance, voc.rdf_type.clone(), Term::Iri(class.clone())));
        insert_new(graph, &mut added, Triple::new(class, voc.rdf_type.clone(), Term::Iri(voc.owl_class.clone())));
    }
    added
}

/// Role typing: a supported role class makes the element an instance of the
/// role. A role requirement deliberately does not.
pub fn enrich_role_types(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_supported_role_class), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.internal_element)
                || is_a(graph, voc, &triple.subject, &voc.system_unit_class)
            {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    let mut added = Vec::new();
    for (instance, class) in pending {
        insert_new(graph, &mut added, Triple::new(instance, voc.rdf_type.clone(), Term::Iri(class.clone())));
        insert_new(graph, &mut added, Triple::new(class, voc.rdf_type.clone(), Term::Iri(voc.owl_class.clone())));
    }
    added
}

/// Class hierarchy: base-class references between classes of the same
/// family become subClassOf edges.
pub fn enrich_subclass(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_ref_base_class), None) {
        if let Term::Iri(object) = &triple.object {
            let subject = &triple.subject;
            if is_a(graph, voc, subject, &voc.system_unit_class)
                || is_a(graph, voc, subject, &voc.role_class)
                || is_a(graph, voc, subject, &voc.interface_class)
            {
                pending.push((subject.clone(), object.clone()));
            }
        }
    }
    for triple in graph.matching(None, Some(&voc.has_ref_attribute_type), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.attribute_type) {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    let mut added = Vec::new();
    for (class, base) in pending {
        insert_new(graph, &mut added, Triple::new(class, voc.rdfs_sub_class_of.clone(), Term::Iri(base)));
    }
    added
}

/// Interface links: each InternalLink connects its side-A interface to its
/// side-B interface. The triple is directional, side A to side B.
pub fn enrich_links(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let link_class = Term::Iri(voc.internal_link.clone());
    let links: Vec<Iri> = graph
        .subjects_of(&voc.rdf_type, &link_class)
        .into_iter()
        .cloned()
        .collect();
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for link in links {
        let side_a: Vec<Iri> = graph
            .objects_of(&link, &voc.has_ref_partner_side_a)
            .into_iter()
            .filter_map(Term::as_iri)
            .cloned()
            .collect();
        let side_b: Vec<Iri> = graph
            .objects_of(&link, &voc.has_ref_partner_side_b)
            .into_iter()
            .filter_map(Term::as_iri)
            .cloned()
            .collect();
        for a in &side_a {
            for b in &side_b {
                if is_a(graph, voc, a, &voc.external_interface)
                    && is_a(graph, voc, b, &voc.external_interface)
                {
                    pending.push((a.clone(), b.clone()));
                }
            }
        }
    }
    let mut added = Vec::new();
    for (a, b) in pending {
        insert_new(graph, &mut added, Triple::new(a, voc.is_linked.clone(), Term::Iri(b)));
    }
    added
}

/// Mirror pairs: an InternalElement whose base-system-unit reference
/// resolves to another InternalElement is a mirror of that master.
pub fn enrich_mirrors(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_ref_base_system_unit_class), None) {
        if let Term::Iri(object) = &triple.object {
            if is_a(graph, voc, &triple.subject, &voc.internal_element)
                && is_a(graph, voc, object, &voc.internal_element)
            {
                pending.push((triple.subject.clone(), object.clone()));
            }
        }
    }
    let mut added = Vec::new();
    for (mirror, master) in pending {
        insert_new(graph, &mut added, Triple::new(mirror.clone(), voc.has_master_object.clone(), Term::Iri(master.clone())));
        insert_new(graph, &mut added, Triple::new(master, voc.has_mirror_object.clone(), Term::Iri(mirror)));
    }
    added
}

/// Facets and groups: a child InternalElement whose role requirement is the
/// base library's Facet (or Group) role becomes a Facet (Group) of its
/// parent.
pub fn enrich_facets_groups(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let facet_roles = base_library_roles(graph, voc, "Facet");
    let group_roles = base_library_roles(graph, voc, "Group");
    let mut pending: Vec<Triple> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_role_requirement), None) {
        let child = &triple.subject;
        let Term::Iri(role) = &triple.object else { continue };
        if !is_a(graph, voc, child, &voc.internal_element) {
            continue;
        }
        let (class, property) = if facet_roles.contains(role) {
            (&voc.facet, &voc.has_facet)
        } else if group_roles.contains(role) {
            (&voc.group, &voc.has_group)
        } else {
            continue;
        };
        let child_term = Term::Iri(child.clone());
        for parent in graph.subjects_of(&voc.has_part, &child_term) {
            if is_a(graph, voc, parent, &voc.internal_element)
                || is_a(graph, voc, parent, &voc.system_unit_class)
            {
                pending.push(Triple::new(child.clone(), voc.rdf_type.clone(), Term::Iri(class.clone())));
                pending.push(Triple::new(parent.clone(), property.clone(), child_term.clone()));
            }
        }
    }
    let mut added = Vec::new();
    for triple in pending {
        insert_new(graph, &mut added, triple);
    }
    added
}

/// Role classes named `name` that sit inside an AutomationML base role
/// class library (a RoleClassLib whose name starts with "AutomationML").
fn base_library_roles(graph: &Graph, voc: &Vocabulary, name: &str) -> BTreeSet<Iri> {
    let mut roles = BTreeSet::new();
    let name_term = Term::Literal(Literal::string(name));
    for candidate in graph.subjects_of(&voc.has_name, &name_term) {
        if !is_a(graph, voc, candidate, &voc.role_class) {
            continue;
        }
        let mut frontier = vec![candidate.clone()];
        let mut seen = BTreeSet::new();
        let mut in_base_lib = false;
        while let Some(node) = frontier.pop() {
            if !seen.insert(node.clone()) {
                continue;
            }
            if is_a(graph, voc, &node, &voc.role_class_lib)
                && graph.objects_of(&node, &voc.has_name).iter().any(|term| {
                    term.as_literal().is_some_and(|l| l.lexical().starts_with("AutomationML"))
                })
            {
                in_base_lib = true;
                break;
            }
            let node_term = Term::Iri(node);
            frontier.extend(graph.subjects_of(&voc.has_part, &node_term).into_iter().cloned());
        }
        if in_base_lib {
            roles.insert(candidate.clone());
        }
    }
    roles
}

/// Member inheritance: every class receives its base class's attributes and
/// interfaces unless it owns a member of the same name (override). Runs to
/// a fixpoint over multi-level hierarchies; a subClassOf cycle aborts with
/// [`MappingError::CyclicHierarchy`].
pub fn enrich_inheritance(graph: &mut Graph, voc: &Vocabulary) -> Result<Vec<Triple>, MappingError> {
    let class_kinds = [
        &voc.system_unit_class,
        &voc.role_class,
        &voc.interface_class,
        &voc.attribute_type,
    ];
    let kind_of = |node: &Iri| class_kinds.iter().position(|k| is_a(graph, voc, node, k));

    // Same-family subclass edges, child -> base.
    let mut edges: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for triple in graph.matching(None, Some(&voc.rdfs_sub_class_of), None) {
        if let Term::Iri(base) = &triple.object {
            match (kind_of(&triple.subject), kind_of(base)) {
                (Some(a), Some(b)) if a == b => {
                    edges.entry(triple.subject.clone()).or_default().insert(base.clone());
                }
                _ => {}
            }
        }
    }
    detect_cycle(&edges)?;

    let member_props = [&voc.has_attribute, &voc.has_interface];
    let mut added = Vec::new();
    loop {
        let mut pending: Vec<Triple> = Vec::new();
        for (class, bases) in &edges {
            for prop in member_props {
                let owned_names: BTreeSet<String> = graph
                    .objects_of(class, prop)
                    .into_iter()
                    .filter_map(Term::as_iri)
                    .filter_map(|m| member_name(graph, voc, m))
                    .collect();
                for base in bases {
                    for member in graph.objects_of(base, prop).into_iter().filter_map(Term::as_iri) {
                        let Some(name) = member_name(graph, voc, member) else { continue };
                        if !owned_names.contains(&name) {
                            pending.push(Triple::new(class.clone(), (*prop).clone(), Term::Iri(member.clone())));
                        }
                    }
                }
            }
        }
        let before = added.len();
        for triple in pending {
            insert_new(graph, &mut added, triple);
        }
        if added.len() == before {
            break;
        }
    }
    Ok(added)
}

fn member_name(graph: &Graph, voc: &Vocabulary, member: &Iri) -> Option<String> {
    graph
        .objects_of(member, &voc.has_name)
        .into_iter()
        .filter_map(Term::as_literal)
        .map(|l| l.lexical().to_string())
        .next()
}

fn detect_cycle(edges: &BTreeMap<Iri, BTreeSet<Iri>>) -> Result<(), MappingError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        node: &Iri,
        edges: &BTreeMap<Iri, BTreeSet<Iri>>,
        marks: &mut BTreeMap<Iri, Mark>,
        trail: &mut Vec<Iri>,
    ) -> Result<(), MappingError> {
        match marks.get(node) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => {
                let start = trail.iter().position(|n| n == node).unwrap_or(0);
                let mut cycle: Vec<&str> =
                    trail[start..].iter().map(|iri| iri.as_str()).collect();
                cycle.push(node.as_str());
                return Err(MappingError::CyclicHierarchy(cycle.join(" -> ")));
            }
            None => {}
        }
        marks.insert(node.clone(), Mark::Visiting);
        trail.push(node.clone());
        if let Some(targets) = edges.get(node) {
            for target in targets {
                visit(target, edges, marks, trail)?;
            }
        }
        trail.pop();
        marks.insert(node.clone(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for node in edges.keys() {
        visit(node, edges, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

/// Name-based mapping objects: for each element/required-role pair, members
/// with equal names (attributes with attributes, interfaces with
/// interfaces) are mapped onto each other. Expects inheritance to have
/// materialized role members first.
pub fn enrich_mappings(graph: &mut Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut pending: Vec<(Iri, Iri)> = Vec::new();
    for triple in graph.matching(None, Some(&voc.has_role_requirement), None) {
        let element = &triple.subject;
        let Term::Iri(role) = &triple.object else { continue };
        if !is_a(graph, voc, element, &voc.internal_element) || !is_a(graph, voc, role, &voc.role_class) {
            continue;
        }
        for (prop, member_class) in [
            (&voc.has_attribute, &voc.attribute),
            (&voc.has_interface, &voc.external_interface),
        ] {
            let element_members: Vec<(Iri, String)> = named_members(graph, voc, element, prop, member_class);
            let role_members: Vec<(Iri, String)> = named_members(graph, voc, role, prop, member_class);
            for (c, c_name) in &element_members {
                for (d, d_name) in &role_members {
                    if c_name == d_name {
                        pending.push((c.clone(), d.clone()));
                    }
                }
            }
        }
    }
    let mut added = Vec::new();
    for (c, d) in pending {
        insert_new(graph, &mut added, Triple::new(c, voc.has_mapping_object.clone(), Term::Iri(d)));
    }
    added
}

fn named_members(
    graph: &Graph,
    voc: &Vocabulary,
    owner: &Iri,
    prop: &Iri,
    member_class: &Iri,
) -> Vec<(Iri, String)> {
    graph
        .objects_of(owner, prop)
        .into_iter()
        .filter_map(Term::as_iri)
        .filter(|m| is_a(graph, voc, m, member_class))
        .filter_map(|m| member_name(graph, voc, m).map(|name| (m.clone(), name)))
        .collect()
}
