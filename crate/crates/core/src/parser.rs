//! CAEX 3.0 XML ingestion and the resolver index.
//!
//! Element matching is namespace-agnostic (local names only), since files in
//! the wild ship both with and without the CAEX namespace. The strict entry
//! point [`parse_document`] rejects documents with structural errors; the
//! lenient [`scan_document`] keeps a best-effort model so that structural
//! validation can report on broken files.

use std::collections::BTreeMap;

use roxmltree::Node;
use thiserror::Error;

use crate::caex::{
    Attribute, AttributeType, Document, ElementId, ElementKind, ExternalInterface,
    InstanceHierarchy, InterfaceClass, InternalElement, InternalLink, Library, MappingKind,
    NameMapping, RefPath, RoleClass, SystemUnitClass,
};
use crate::diagnostics::{Code, Diagnostic, Location};

pub const SUPPORTED_SCHEMA_VERSION: &str = "3.0";

#[derive(Debug, Error)]
pub enum ParseError {
    /// The input is not well-formed XML (or not UTF-8).
    #[error("malformed XML: {0}")]
    Xml(String),
    /// The XML was readable but the document violates model invariants.
    /// Carries every diagnostic gathered, warnings included.
    #[error("document rejected: {}", summarize_errors(.0))]
    Rejected(Vec<Diagnostic>),
}

fn summarize_errors(diagnostics: &[Diagnostic]) -> String {
    let errors: Vec<String> =
        diagnostics.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
    errors.join("; ")
}

/// Strict parse: returns the document and its warnings, or rejects the input
/// if any error-level diagnostic was produced.
pub fn parse_document(input: &[u8], source_name: &str) -> Result<(Document, Vec<Diagnostic>), ParseError> {
    let (doc, diagnostics) = scan_document(input, source_name)?;
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(ParseError::Rejected(diagnostics));
    }
    Ok((doc, diagnostics))
}

/// Lenient scan: builds a best-effort model and reports every problem as a
/// diagnostic instead of failing. Only malformed XML is fatal here.
pub fn scan_document(input: &[u8], source_name: &str) -> Result<(Document, Vec<Diagnostic>), ParseError> {
    let text = std::str::from_utf8(input)
        .map_err(|e| ParseError::Xml(format!("input is not valid UTF-8: {e}")))?;
    let xml = roxmltree::Document::parse(text).map_err(|e| ParseError::Xml(e.to_string()))?;

    let mut scanner = Scanner { xml: &xml, diagnostics: Vec::new() };
    let mut doc = scanner.scan_file(xml.root_element());
    doc.source_name = source_name.to_string();
    let mut diagnostics = scanner.diagnostics;

    let (index, mut index_diags) = index_document_checked(&doc);
    diagnostics.append(&mut index_diags);
    diagnostics.extend(missing_id_diagnostics(&doc));
    diagnostics.extend(dangling_ref_diagnostics(&doc, &index));
    Ok((doc, diagnostics))
}

/// Structural checks re-derivable from the model alone: mandatory IDs,
/// ID/name uniqueness, dangling references. Used by the parser gate and by
/// structural validation.
pub fn structural_diagnostics(doc: &Document) -> Vec<Diagnostic> {
    let (index, mut diagnostics) = index_document_checked(doc);
    diagnostics.extend(missing_id_diagnostics(doc));
    diagnostics.extend(dangling_ref_diagnostics(doc, &index));
    diagnostics
}

struct Scanner<'a, 'input> {
    xml: &'a roxmltree::Document<'input>,
    diagnostics: Vec<Diagnostic>,
}

impl Scanner<'_, '_> {
    fn pos(&self, node: Node) -> Location {
        let pos = self.xml.text_pos_at(node.range().start);
        Location::LineCol { line: pos.row, col: pos.col }
    }

    fn error(&mut self, code: Code, node: Node, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(code, self.pos(node), message));
    }

    fn warn(&mut self, code: Code, node: Node, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::warning(code, self.pos(node), message));
    }

    fn warn_unknown(&mut self, node: Node, context: &str) {
        let name = node.tag_name().name().to_string();
        self.warn(Code::UnknownElement, node, format!("dropping unknown element <{name}> inside {context}"));
    }

    /// XML attribute by local name, namespace-agnostic.
    fn attr<'n>(&self, node: Node<'n, 'n>, name: &str) -> Option<&'n str> {
        node.attributes().find(|a| a.name() == name).map(|a| a.value())
    }

    fn required_name(&mut self, node: Node) -> String {
        match self.attr(node, "Name") {
            Some(name) if !name.is_empty() => {
                if name.contains('/') {
                    // Names are path segments; a slash would make reference
                    // paths ambiguous.
                    let tag = node.tag_name().name().to_string();
                    self.error(Code::MalformedXml, node, format!("<{tag}> Name {name:?} contains '/'"));
                }
                name.to_string()
            }
            _ => {
                let tag = node.tag_name().name().to_string();
                self.error(Code::MalformedXml, node, format!("<{tag}> is missing a Name"));
                String::new()
            }
        }
    }

    fn ref_path(&mut self, node: Node, attr_name: &str) -> Option<RefPath> {
        let raw = self.attr(node, attr_name)?;
        if raw.is_empty() {
            return None;
        }
        let parsed = RefPath::parse(raw);
        if parsed.is_none() {
            self.warn(Code::DanglingRef, node, format!("malformed reference path {raw:?} in {attr_name}"));
        }
        parsed
    }

    fn elements<'n>(&self, node: Node<'n, 'n>) -> impl Iterator<Item = Node<'n, 'n>> {
        node.children().filter(|c| c.is_element())
    }

    fn scan_file(&mut self, root: Node) -> Document {
        let mut doc = Document::default();
        if root.tag_name().name() != "CAEXFile" {
            self.error(
                Code::MalformedXml,
                root,
                format!("expected <CAEXFile> root, found <{}>", root.tag_name().name()),
            );
            return doc;
        }
        match self.attr(root, "SchemaVersion") {
            Some(SUPPORTED_SCHEMA_VERSION) => {}
            Some(other) => self.warn(
                Code::VersionMismatch,
                root,
                format!("SchemaVersion is {other:?}, expected {SUPPORTED_SCHEMA_VERSION:?}; mapping proceeds best-effort"),
            ),
            None => self.warn(Code::VersionMismatch, root, "CAEXFile has no SchemaVersion"),
        }
        for child in self.elements(root) {
            match child.tag_name().name() {
                "InstanceHierarchy" => {
                    let ih = self.scan_instance_hierarchy(child);
                    doc.instance_hierarchies.push(ih);
                }
                "SystemUnitClassLib" => {
                    let name = self.required_name(child);
                    let elements = self
                        .elements(child)
                        .filter_map(|c| self.scan_lib_child(c, "SystemUnitClassLib", "SystemUnitClass"))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .map(|n| self.scan_system_unit_class(n))
                        .collect();
                    doc.suc_libs.push(Library { name, elements });
                }
                "RoleClassLib" => {
                    let name = self.required_name(child);
                    let elements = self
                        .elements(child)
                        .filter_map(|c| self.scan_lib_child(c, "RoleClassLib", "RoleClass"))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .map(|n| self.scan_role_class(n))
                        .collect();
                    doc.rc_libs.push(Library { name, elements });
                }
                "InterfaceClassLib" => {
                    let name = self.required_name(child);
                    let elements = self
                        .elements(child)
                        .filter_map(|c| self.scan_lib_child(c, "InterfaceClassLib", "InterfaceClass"))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .map(|n| self.scan_interface_class(n))
                        .collect();
                    doc.ic_libs.push(Library { name, elements });
                }
                "AttributeTypeLib" => {
                    let name = self.required_name(child);
                    let elements = self
                        .elements(child)
                        .filter_map(|c| self.scan_lib_child(c, "AttributeTypeLib", "AttributeType"))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .map(|n| self.scan_attribute_type(n))
                        .collect();
                    doc.at_libs.push(Library { name, elements });
                }
                _ => self.warn_unknown(child, "CAEXFile"),
            }
        }
        doc
    }

    fn scan_lib_child<'n>(&mut self, node: Node<'n, 'n>, lib: &str, expected: &str) -> Option<Node<'n, 'n>> {
        if node.tag_name().name() == expected {
            Some(node)
        } else {
            self.warn_unknown(node, lib);
            None
        }
    }

    fn scan_instance_hierarchy(&mut self, node: Node) -> InstanceHierarchy {
        let name = self.required_name(node);
        let mut internal_elements = Vec::new();
        for child in self.elements(node) {
            match child.tag_name().name() {
                "InternalElement" => internal_elements.push(self.scan_internal_element(child)),
                _ => self.warn_unknown(child, "InstanceHierarchy"),
            }
        }
        InstanceHierarchy { name, internal_elements }
    }

    fn scan_internal_element(&mut self, node: Node) -> InternalElement {
        let name = self.required_name(node);
        let id = ElementId(self.attr(node, "ID").unwrap_or_default().to_string());
        let mut ie = InternalElement::named(id.0, name);
        ie.ref_base_system_unit_path = self.ref_path(node, "RefBaseSystemUnitPath");
        for child in self.elements(node) {
            match child.tag_name().name() {
                "InternalElement" => ie.children.push(self.scan_internal_element(child)),
                "Attribute" => ie.attributes.push(self.scan_attribute(child)),
                "ExternalInterface" => ie.external_interfaces.push(self.scan_external_interface(child)),
                "InternalLink" => {
                    if let Some(link) = self.scan_internal_link(child) {
                        ie.internal_links.push(link);
                    }
                }
                "SupportedRoleClass" => {
                    if let Some(path) = self.ref_path(child, "RefRoleClassPath") {
                        ie.supported_role_classes.push(path);
                    }
                }
                "RoleRequirements" => {
                    self.scan_role_requirements(child, &mut ie.role_requirements, &mut ie.explicit_mappings);
                }
                _ => self.warn_unknown(child, "InternalElement"),
            }
        }
        ie
    }

    fn scan_role_requirements(
        &mut self,
        node: Node,
        role_requirements: &mut Vec<RefPath>,
        explicit_mappings: &mut Vec<NameMapping>,
    ) {
        let Some(role) = self.ref_path(node, "RefBaseRoleClassPath") else {
            self.warn(Code::DanglingRef, node, "RoleRequirements without RefBaseRoleClassPath");
            return;
        };
        role_requirements.push(role.clone());
        for child in self.elements(node) {
            match child.tag_name().name() {
                "MappingObject" => {
                    for entry in self.elements(child) {
                        self.scan_name_mapping(entry, &role, explicit_mappings);
                    }
                }
                "AttributeNameMapping" | "InterfaceNameMapping" => {
                    self.scan_name_mapping(child, &role, explicit_mappings);
                }
                _ => self.warn_unknown(child, "RoleRequirements"),
            }
        }
    }

    fn scan_name_mapping(&mut self, node: Node, role: &RefPath, out: &mut Vec<NameMapping>) {
        let (kind, element_attr, role_attr) = match node.tag_name().name() {
            "AttributeNameMapping" => (MappingKind::Attribute, "SystemUnitAttributeName", "RoleAttributeName"),
            "InterfaceNameMapping" => (MappingKind::Interface, "SystemUnitInterfaceName", "RoleInterfaceName"),
            _ => {
                self.warn_unknown(node, "MappingObject");
                return;
            }
        };
        let element_member = self.attr(node, element_attr).unwrap_or_default();
        let role_member = self.attr(node, role_attr).unwrap_or_default();
        if element_member.is_empty() || role_member.is_empty() {
            self.error(
                Code::MalformedXml,
                node,
                format!("<{}> needs {element_attr} and {role_attr}", node.tag_name().name()),
            );
            return;
        }
        out.push(NameMapping {
            role: role.clone(),
            kind,
            element_member: element_member.to_string(),
            role_member: role_member.to_string(),
        });
    }

    fn scan_attribute(&mut self, node: Node) -> Attribute {
        let mut attribute = Attribute::named(self.required_name(node));
        attribute.ref_attribute_type = self.ref_path(node, "RefAttributeType");
        attribute.data_type = self.attr(node, "AttributeDataType").map(str::to_string);
        attribute.unit = self.attr(node, "Unit").map(str::to_string);
        for child in self.elements(node) {
            match child.tag_name().name() {
                "Value" => attribute.value = Some(child.text().unwrap_or_default().to_string()),
                "Description" => {
                    attribute.description = Some(child.text().unwrap_or_default().to_string())
                }
                "Attribute" => {
                    let nested = self.scan_attribute(child);
                    attribute.children.push(nested);
                }
                _ => self.warn_unknown(child, "Attribute"),
            }
        }
        attribute
    }

    fn scan_external_interface(&mut self, node: Node) -> ExternalInterface {
        let name = self.required_name(node);
        let id = ElementId(self.attr(node, "ID").unwrap_or_default().to_string());
        let mut interface = ExternalInterface {
            id,
            name,
            ref_base_class: self.ref_path(node, "RefBaseClassPath"),
            children: Vec::new(),
            attributes: Vec::new(),
        };
        for child in self.elements(node) {
            match child.tag_name().name() {
                "ExternalInterface" => interface.children.push(self.scan_external_interface(child)),
                "Attribute" => interface.attributes.push(self.scan_attribute(child)),
                _ => self.warn_unknown(child, "ExternalInterface"),
            }
        }
        interface
    }

    fn scan_internal_link(&mut self, node: Node) -> Option<InternalLink> {
        let name = self.required_name(node);
        let side_a = self.attr(node, "RefPartnerSideA").unwrap_or_default().to_string();
        let side_b = self.attr(node, "RefPartnerSideB").unwrap_or_default().to_string();
        if side_a.is_empty() || side_b.is_empty() {
            self.error(Code::MalformedXml, node, "InternalLink needs RefPartnerSideA and RefPartnerSideB");
            return None;
        }
        if side_a == side_b {
            self.error(Code::MalformedXml, node, "InternalLink partner sides must differ");
            return None;
        }
        Some(InternalLink {
            name,
            ref_partner_side_a: ElementId(side_a),
            ref_partner_side_b: ElementId(side_b),
        })
    }

    fn scan_system_unit_class(&mut self, node: Node) -> SystemUnitClass {
        let mut suc = SystemUnitClass {
            name: self.required_name(node),
            ref_base_class: self.ref_path(node, "RefBaseClassPath"),
            children: Vec::new(),
            attributes: Vec::new(),
            external_interfaces: Vec::new(),
            internal_elements: Vec::new(),
            supported_role_classes: Vec::new(),
        };
        for child in self.elements(node) {
            match child.tag_name().name() {
                "SystemUnitClass" => suc.children.push(self.scan_system_unit_class(child)),
                "Attribute" => suc.attributes.push(self.scan_attribute(child)),
                "ExternalInterface" => suc.external_interfaces.push(self.scan_external_interface(child)),
                "InternalElement" => suc.internal_elements.push(self.scan_internal_element(child)),
                "SupportedRoleClass" => {
                    if let Some(path) = self.ref_path(child, "RefRoleClassPath") {
                        suc.supported_role_classes.push(path);
                    }
                }
                _ => self.warn_unknown(child, "SystemUnitClass"),
            }
        }
        suc
    }

    fn scan_role_class(&mut self, node: Node) -> RoleClass {
        let mut rc = RoleClass {
            name: self.required_name(node),
            ref_base_class: self.ref_path(node, "RefBaseClassPath"),
            children: Vec::new(),
            attributes: Vec::new(),
            external_interfaces: Vec::new(),
        };
        for child in self.elements(node) {
            match child.tag_name().name() {
                "RoleClass" => rc.children.push(self.scan_role_class(child)),
                "Attribute" => rc.attributes.push(self.scan_attribute(child)),
                "ExternalInterface" => rc.external_interfaces.push(self.scan_external_interface(child)),
                _ => self.warn_unknown(child, "RoleClass"),
            }
        }
        rc
    }

    fn scan_interface_class(&mut self, node: Node) -> InterfaceClass {
        let mut ic = InterfaceClass {
            name: self.required_name(node),
            ref_base_class: self.ref_path(node, "RefBaseClassPath"),
            children: Vec::new(),
            attributes: Vec::new(),
        };
        for child in self.elements(node) {
            match child.tag_name().name() {
                "InterfaceClass" => ic.children.push(self.scan_interface_class(child)),
                "Attribute" => ic.attributes.push(self.scan_attribute(child)),
                _ => self.warn_unknown(child, "InterfaceClass"),
            }
        }
        ic
    }

    fn scan_attribute_type(&mut self, node: Node) -> AttributeType {
        let mut at = AttributeType {
            name: self.required_name(node),
            ref_attribute_type: self.ref_path(node, "RefAttributeType"),
            children: Vec::new(),
            attributes: Vec::new(),
        };
        for child in self.elements(node) {
            match child.tag_name().name() {
                "AttributeType" => at.children.push(self.scan_attribute_type(child)),
                "Attribute" => at.attributes.push(self.scan_attribute(child)),
                _ => self.warn_unknown(child, "AttributeType"),
            }
        }
        at
    }
}

/// Dense handle into a [`ResolverIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

/// Flat descriptor of one document element: enough to mint its IRI and to
/// resolve references against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub kind: ElementKind,
    pub name: String,
    /// Set for InternalElements and ExternalInterfaces (may be empty on
    /// leniently scanned documents).
    pub id: Option<ElementId>,
    pub path: RefPath,
    pub parent: Option<NodeId>,
    /// Base-class reference of class-family elements, for inheritance walks.
    pub base_ref: Option<RefPath>,
}

/// Bidirectional lookup from IDs and canonical paths to elements.
#[derive(Debug, Clone, Default)]
pub struct ResolverIndex {
    nodes: Vec<NodeInfo>,
    by_id: BTreeMap<String, NodeId>,
    by_path: BTreeMap<String, NodeId>,
}

impl ResolverIndex {
    pub fn resolve_path(&self, path: &RefPath) -> Option<NodeId> {
        self.by_path.get(&path.joined()).copied()
    }

    pub fn resolve_id(&self, id: &ElementId) -> Option<NodeId> {
        self.by_id.get(id.as_str()).copied()
    }

    /// Resolves a reference-path field: path lookup first, ID second (the
    /// second case covers mirror objects, whose RefBaseSystemUnitPath holds
    /// the master's ID).
    pub fn resolve_ref_path(&self, path: &RefPath) -> Option<NodeId> {
        let joined = path.joined();
        self.by_path.get(&joined).or_else(|| self.by_id.get(&joined)).copied()
    }

    /// Resolves an InternalLink partner token: ID lookup first, path second.
    pub fn resolve_partner(&self, token: &ElementId) -> Option<NodeId> {
        self.by_id.get(token.as_str()).or_else(|| self.by_path.get(token.as_str())).copied()
    }

    pub fn node(&self, id: NodeId) -> &NodeInfo {
        &self.nodes[id.0 as usize]
    }

    pub fn path_of(&self, id: NodeId) -> &RefPath {
        &self.node(id).path
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &NodeInfo)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn id_count(&self) -> usize {
        self.by_id.len()
    }

    fn push(
        &mut self,
        info: NodeInfo,
        diagnostics: &mut Vec<Diagnostic>,
    ) -> NodeId {
        let node_id = NodeId(self.nodes.len() as u32);
        let key = info.path.joined();
        if let Some(existing) = self.by_path.get(&key) {
            let other = &self.nodes[existing.0 as usize];
            diagnostics.push(Diagnostic::error(
                Code::DuplicateName,
                Location::Path(key.clone()),
                format!(
                    "name {:?} is not unique at its level ({:?} vs {:?})",
                    info.name, other.kind, info.kind
                ),
            ));
        } else {
            self.by_path.insert(key, node_id);
        }
        if let Some(id) = &info.id {
            if !id.is_empty() {
                if let Some(existing) = self.by_id.get(id.as_str()) {
                    let other = &self.nodes[existing.0 as usize];
                    diagnostics.push(Diagnostic::error(
                        Code::DuplicateId,
                        Location::Path(info.path.joined()),
                        format!("ID {id} already used by {}", other.path),
                    ));
                } else {
                    self.by_id.insert(id.as_str().to_string(), node_id);
                }
            }
        }
        self.nodes.push(info);
        node_id
    }
}

/// Builds the resolver index over a parsed document.
pub fn index_document(doc: &Document) -> ResolverIndex {
    index_document_checked(doc).0
}

/// Index construction that also reports uniqueness violations (duplicate IDs,
/// duplicate sibling names).
pub fn index_document_checked(doc: &Document) -> (ResolverIndex, Vec<Diagnostic>) {
    let mut index = ResolverIndex::default();
    let mut diagnostics = Vec::new();
    let mut walker = Walker { index: &mut index, diagnostics: &mut diagnostics };

    for ih in &doc.instance_hierarchies {
        let root = walker.root(ElementKind::InstanceHierarchy, &ih.name);
        for ie in &ih.internal_elements {
            walker.internal_element(ie, root);
        }
    }
    for lib in &doc.suc_libs {
        let root = walker.root(ElementKind::SystemUnitClassLib, &lib.name);
        for suc in &lib.elements {
            walker.system_unit_class(suc, root);
        }
    }
    for lib in &doc.rc_libs {
        let root = walker.root(ElementKind::RoleClassLib, &lib.name);
        for rc in &lib.elements {
            walker.role_class(rc, root);
        }
    }
    for lib in &doc.ic_libs {
        let root = walker.root(ElementKind::InterfaceClassLib, &lib.name);
        for ic in &lib.elements {
            walker.interface_class(ic, root);
        }
    }
    for lib in &doc.at_libs {
        let root = walker.root(ElementKind::AttributeTypeLib, &lib.name);
        for at in &lib.elements {
            walker.attribute_type(at, root);
        }
    }
    (index, diagnostics)
}

struct Walker<'a> {
    index: &'a mut ResolverIndex,
    diagnostics: &'a mut Vec<Diagnostic>,
}

impl Walker<'_> {
    fn root(&mut self, kind: ElementKind, name: &str) -> NodeId {
        self.index.push(
            NodeInfo {
                kind,
                name: name.to_string(),
                id: None,
                path: RefPath::root(name),
                parent: None,
                base_ref: None,
            },
            self.diagnostics,
        )
    }

    fn child(
        &mut self,
        kind: ElementKind,
        name: &str,
        id: Option<&ElementId>,
        base_ref: Option<&RefPath>,
        parent: NodeId,
    ) -> NodeId {
        let path = self.index.node(parent).path.child(name);
        self.index.push(
            NodeInfo {
                kind,
                name: name.to_string(),
                id: id.cloned(),
                path,
                parent: Some(parent),
                base_ref: base_ref.cloned(),
            },
            self.diagnostics,
        )
    }

    fn internal_element(&mut self, ie: &InternalElement, parent: NodeId) {
        let node =
            self.child(ElementKind::InternalElement, &ie.name, Some(&ie.id), None, parent);
        for attribute in &ie.attributes {
            self.attribute(attribute, node);
        }
        for interface in &ie.external_interfaces {
            self.external_interface(interface, node);
        }
        for link in &ie.internal_links {
            self.child(ElementKind::InternalLink, &link.name, None, None, node);
        }
        for nested in &ie.children {
            self.internal_element(nested, node);
        }
    }

    fn attribute(&mut self, attribute: &Attribute, parent: NodeId) {
        let node = self.child(
            ElementKind::Attribute,
            &attribute.name,
            None,
            attribute.ref_attribute_type.as_ref(),
            parent,
        );
        for nested in &attribute.children {
            self.attribute(nested, node);
        }
    }

    fn external_interface(&mut self, interface: &ExternalInterface, parent: NodeId) {
        let node = self.child(
            ElementKind::ExternalInterface,
            &interface.name,
            Some(&interface.id),
            None,
            parent,
        );
        for attribute in &interface.attributes {
            self.attribute(attribute, node);
        }
        for nested in &interface.children {
            self.external_interface(nested, node);
        }
    }

    fn system_unit_class(&mut self, suc: &SystemUnitClass, parent: NodeId) {
        let node = self.child(
            ElementKind::SystemUnitClass,
            &suc.name,
            None,
            suc.ref_base_class.as_ref(),
            parent,
        );
        for attribute in &suc.attributes {
            self.attribute(attribute, node);
        }
        for interface in &suc.external_interfaces {
            self.external_interface(interface, node);
        }
        for ie in &suc.internal_elements {
            self.internal_element(ie, node);
        }
        for nested in &suc.children {
            self.system_unit_class(nested, node);
        }
    }

    fn role_class(&mut self, rc: &RoleClass, parent: NodeId) {
        let node =
            self.child(ElementKind::RoleClass, &rc.name, None, rc.ref_base_class.as_ref(), parent);
        for attribute in &rc.attributes {
            self.attribute(attribute, node);
        }
        for interface in &rc.external_interfaces {
            self.external_interface(interface, node);
        }
        for nested in &rc.children {
            self.role_class(nested, node);
        }
    }

    fn interface_class(&mut self, ic: &InterfaceClass, parent: NodeId) {
        let node = self.child(
            ElementKind::InterfaceClass,
            &ic.name,
            None,
            ic.ref_base_class.as_ref(),
            parent,
        );
        for attribute in &ic.attributes {
            self.attribute(attribute, node);
        }
        for nested in &ic.children {
            self.interface_class(nested, node);
        }
    }

    fn attribute_type(&mut self, at: &AttributeType, parent: NodeId) {
        let node = self.child(
            ElementKind::AttributeType,
            &at.name,
            None,
            at.ref_attribute_type.as_ref(),
            parent,
        );
        for attribute in &at.attributes {
            self.attribute(attribute, node);
        }
        for nested in &at.children {
            self.attribute_type(nested, node);
        }
    }
}

fn missing_id_diagnostics(doc: &Document) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    fn check_interface(interface: &ExternalInterface, path: &RefPath, out: &mut Vec<Diagnostic>) {
        let path = path.child(&interface.name);
        if interface.id.is_empty() {
            out.push(Diagnostic::error(
                Code::MissingMandatoryId,
                Location::Path(path.joined()),
                format!("ExternalInterface {:?} has no ID", interface.name),
            ));
        }
        for nested in &interface.children {
            check_interface(nested, &path, out);
        }
    }
    fn check_ie(ie: &InternalElement, path: &RefPath, out: &mut Vec<Diagnostic>) {
        let path = path.child(&ie.name);
        if ie.id.is_empty() {
            out.push(Diagnostic::error(
                Code::MissingMandatoryId,
                Location::Path(path.joined()),
                format!("InternalElement {:?} has no ID", ie.name),
            ));
        }
        for interface in &ie.external_interfaces {
            check_interface(interface, &path, out);
        }
        for nested in &ie.children {
            check_ie(nested, &path, out);
        }
    }
    fn check_suc(suc: &SystemUnitClass, path: &RefPath, out: &mut Vec<Diagnostic>) {
        let path = path.child(&suc.name);
        for interface in &suc.external_interfaces {
            check_interface(interface, &path, out);
        }
        for ie in &suc.internal_elements {
            check_ie(ie, &path, out);
        }
        for nested in &suc.children {
            check_suc(nested, &path, out);
        }
    }
    fn check_rc(rc: &RoleClass, path: &RefPath, out: &mut Vec<Diagnostic>) {
        let path = path.child(&rc.name);
        for interface in &rc.external_interfaces {
            check_interface(interface, &path, out);
        }
        for nested in &rc.children {
            check_rc(nested, &path, out);
        }
    }
    for ih in &doc.instance_hierarchies {
        let path = RefPath::root(&ih.name);
        for ie in &ih.internal_elements {
            check_ie(ie, &path, &mut diagnostics);
        }
    }
    for lib in &doc.suc_libs {
        let path = RefPath::root(&lib.name);
        for suc in &lib.elements {
            check_suc(suc, &path, &mut diagnostics);
        }
    }
    for lib in &doc.rc_libs {
        let path = RefPath::root(&lib.name);
        for rc in &lib.elements {
            check_rc(rc, &path, &mut diagnostics);
        }
    }
    diagnostics
}

fn dangling_ref_diagnostics(doc: &Document, index: &ResolverIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut check = |path: Option<&RefPath>, owner: &RefPath, what: &str, out: &mut Vec<Diagnostic>| {
        if let Some(target) = path {
            if index.resolve_ref_path(target).is_none() {
                out.push(Diagnostic::warning(
                    Code::DanglingRef,
                    Location::Path(owner.joined()),
                    format!("{what} {:?} does not resolve", target.joined()),
                ));
            }
        }
    };

    fn attrs(attributes: &[Attribute], owner: &RefPath, index: &ResolverIndex, out: &mut Vec<Diagnostic>) {
        for attribute in attributes {
            let path = owner.child(&attribute.name);
            if let Some(target) = &attribute.ref_attribute_type {
                if index.resolve_ref_path(target).is_none() {
                    out.push(Diagnostic::warning(
                        Code::DanglingRef,
                        Location::Path(path.joined()),
                        format!("RefAttributeType {:?} does not resolve", target.joined()),
                    ));
                }
            }
            attrs(&attribute.children, &path, index, out);
        }
    }

    fn interfaces(
        list: &[ExternalInterface],
        owner: &RefPath,
        index: &ResolverIndex,
        out: &mut Vec<Diagnostic>,
    ) {
        for interface in list {
            let path = owner.child(&interface.name);
            if let Some(target) = &interface.ref_base_class {
                if index.resolve_ref_path(target).is_none() {
                    out.push(Diagnostic::warning(
                        Code::DanglingRef,
                        Location::Path(path.joined()),
                        format!("RefBaseClassPath {:?} does not resolve", target.joined()),
                    ));
                }
            }
            attrs(&interface.attributes, &path, index, out);
            interfaces(&interface.children, &path, index, out);
        }
    }

    fn ies(
        list: &[InternalElement],
        owner: &RefPath,
        index: &ResolverIndex,
        check: &mut impl FnMut(Option<&RefPath>, &RefPath, &str, &mut Vec<Diagnostic>),
        out: &mut Vec<Diagnostic>,
    ) {
        for ie in list {
            let path = owner.child(&ie.name);
            check(ie.ref_base_system_unit_path.as_ref(), &path, "RefBaseSystemUnitPath", out);
            for role in &ie.supported_role_classes {
                check(Some(role), &path, "SupportedRoleClass", out);
            }
            for role in &ie.role_requirements {
                check(Some(role), &path, "RoleRequirements", out);
            }
            attrs(&ie.attributes, &path, index, out);
            interfaces(&ie.external_interfaces, &path, index, out);
            for link in &ie.internal_links {
                let link_path = path.child(&link.name);
                for (side, token) in [
                    ("RefPartnerSideA", &link.ref_partner_side_a),
                    ("RefPartnerSideB", &link.ref_partner_side_b),
                ] {
                    if index.resolve_partner(token).is_none() {
                        out.push(Diagnostic::warning(
                            Code::DanglingRef,
                            Location::Path(link_path.joined()),
                            format!("{side} {token:?} does not resolve"),
                        ));
                    }
                }
            }
            ies(&ie.children, &path, index, check, out);
        }
    }

    fn sucs(
        list: &[SystemUnitClass],
        owner: &RefPath,
        index: &ResolverIndex,
        check: &mut impl FnMut(Option<&RefPath>, &RefPath, &str, &mut Vec<Diagnostic>),
        out: &mut Vec<Diagnostic>,
    ) {
        for suc in list {
            let path = owner.child(&suc.name);
            check(suc.ref_base_class.as_ref(), &path, "RefBaseClassPath", out);
            for role in &suc.supported_role_classes {
                check(Some(role), &path, "SupportedRoleClass", out);
            }
            attrs(&suc.attributes, &path, index, out);
            interfaces(&suc.external_interfaces, &path, index, out);
            ies(&suc.internal_elements, &path, index, check, out);
            sucs(&suc.children, &path, index, check, out);
        }
    }

    fn rcs(
        list: &[RoleClass],
        owner: &RefPath,
        index: &ResolverIndex,
        check: &mut impl FnMut(Option<&RefPath>, &RefPath, &str, &mut Vec<Diagnostic>),
        out: &mut Vec<Diagnostic>,
    ) {
        for rc in list {
            let path = owner.child(&rc.name);
            check(rc.ref_base_class.as_ref(), &path, "RefBaseClassPath", out);
            attrs(&rc.attributes, &path, index, out);
            interfaces(&rc.external_interfaces, &path, index, out);
            rcs(&rc.children, &path, index, check, out);
        }
    }

    fn ics(
        list: &[InterfaceClass],
        owner: &RefPath,
        index: &ResolverIndex,
        check: &mut impl FnMut(Option<&RefPath>, &RefPath, &str, &mut Vec<Diagnostic>),
        out: &mut Vec<Diagnostic>,
    ) {
        for ic in list {
            let path = owner.child(&ic.name);
            check(ic.ref_base_class.as_ref(), &path, "RefBaseClassPath", out);
            attrs(&ic.attributes, &path, index, out);
            ics(&ic.children, &path, index, check, out);
        }
    }

    fn ats(
        list: &[AttributeType],
        owner: &RefPath,
        index: &ResolverIndex,
        check: &mut impl FnMut(Option<&RefPath>, &RefPath, &str, &mut Vec<Diagnostic>),
        out: &mut Vec<Diagnostic>,
    ) {
        for at in list {
            let path = owner.child(&at.name);
            check(at.ref_attribute_type.as_ref(), &path, "RefAttributeType", out);
            attrs(&at.attributes, &path, index, out);
            ats(&at.children, &path, index, check, out);
        }
    }

    for ih in &doc.instance_hierarchies {
        ies(&ih.internal_elements, &RefPath::root(&ih.name), index, &mut check, &mut out);
    }
    for lib in &doc.suc_libs {
        sucs(&lib.elements, &RefPath::root(&lib.name), index, &mut check, &mut out);
    }
    for lib in &doc.rc_libs {
        rcs(&lib.elements, &RefPath::root(&lib.name), index, &mut check, &mut out);
    }
    for lib in &doc.ic_libs {
        ics(&lib.elements, &RefPath::root(&lib.name), index, &mut check, &mut out);
    }
    for lib in &doc.at_libs {
        ats(&lib.elements, &RefPath::root(&lib.name), index, &mut check, &mut out);
    }
    out
}
