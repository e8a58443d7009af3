//! Typed in-memory model of a CAEX 3.0 document.
//!
//! The model covers the five pillars (InstanceHierarchy plus the four class
//! libraries) and the reference mechanisms between them: document-wide unique
//! IDs for InternalElements and ExternalInterfaces, and slash-joined name
//! paths for everything else. It is immutable after parsing; there is no
//! editing API.

use std::fmt;

/// Opaque ID token (GUID-like). Mandatory for InternalElements and
/// ExternalInterfaces, unique document-wide.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub String);

impl ElementId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Slash-joined name path, e.g. "MyAtLib/Dimensions/Length". Segments are
/// compared case-sensitively and must be non-empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefPath {
    segments: Vec<String>,
}

impl RefPath {
    pub fn parse(text: &str) -> Option<RefPath> {
        if text.is_empty() {
            return None;
        }
        let segments: Vec<String> = text.split('/').map(str::to_string).collect();
        if segments.iter().any(String::is_empty) {
            return None;
        }
        Some(RefPath { segments })
    }

    pub fn root(name: impl Into<String>) -> RefPath {
        RefPath { segments: vec![name.into()] }
    }

    /// Extends a path by one child name.
    pub fn child(&self, name: impl Into<String>) -> RefPath {
        let mut segments = self.segments.clone();
        segments.push(name.into());
        RefPath { segments }
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn last(&self) -> &str {
        self.segments.last().expect("RefPath has at least one segment")
    }

    pub fn joined(&self) -> String {
        self.segments.join("/")
    }
}

impl fmt::Display for RefPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.segments.join("/"))
    }
}

/// The element kinds that can appear in a document tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    InstanceHierarchy,
    InternalElement,
    ExternalInterface,
    Attribute,
    InternalLink,
    SystemUnitClassLib,
    RoleClassLib,
    InterfaceClassLib,
    AttributeTypeLib,
    SystemUnitClass,
    RoleClass,
    InterfaceClass,
    AttributeType,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub ref_attribute_type: Option<RefPath>,
    pub value: Option<String>,
    pub data_type: Option<String>,
    pub unit: Option<String>,
    pub description: Option<String>,
    pub children: Vec<Attribute>,
}

impl Attribute {
    pub fn named(name: impl Into<String>) -> Attribute {
        Attribute {
            name: name.into(),
            ref_attribute_type: None,
            value: None,
            data_type: None,
            unit: None,
            description: None,
            children: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExternalInterface {
    pub id: ElementId,
    pub name: String,
    pub ref_base_class: Option<RefPath>,
    pub children: Vec<ExternalInterface>,
    pub attributes: Vec<Attribute>,
}

/// ID-based connection between two ExternalInterfaces. The direction runs
/// from side A to side B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalLink {
    pub name: String,
    pub ref_partner_side_a: ElementId,
    pub ref_partner_side_b: ElementId,
}

/// Which member kind an explicit name mapping connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MappingKind {
    Attribute,
    Interface,
}

/// Explicit AttributeNameMapping/InterfaceNameMapping entry found under a
/// RoleRequirements element: pairs a member of the owning element with a
/// member of the required role class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameMapping {
    pub role: RefPath,
    pub kind: MappingKind,
    pub element_member: String,
    pub role_member: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InternalElement {
    pub id: ElementId,
    pub name: String,
    pub ref_base_system_unit_path: Option<RefPath>,
    pub children: Vec<InternalElement>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<ExternalInterface>,
    pub internal_links: Vec<InternalLink>,
    pub supported_role_classes: Vec<RefPath>,
    pub role_requirements: Vec<RefPath>,
    pub explicit_mappings: Vec<NameMapping>,
}

impl InternalElement {
    pub fn named(id: impl Into<String>, name: impl Into<String>) -> InternalElement {
        InternalElement {
            id: ElementId(id.into()),
            name: name.into(),
            ref_base_system_unit_path: None,
            children: Vec::new(),
            attributes: Vec::new(),
            external_interfaces: Vec::new(),
            internal_links: Vec::new(),
            supported_role_classes: Vec::new(),
            role_requirements: Vec::new(),
            explicit_mappings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemUnitClass {
    pub name: String,
    pub ref_base_class: Option<RefPath>,
    pub children: Vec<SystemUnitClass>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<ExternalInterface>,
    pub internal_elements: Vec<InternalElement>,
    pub supported_role_classes: Vec<RefPath>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoleClass {
    pub name: String,
    pub ref_base_class: Option<RefPath>,
    pub children: Vec<RoleClass>,
    pub attributes: Vec<Attribute>,
    pub external_interfaces: Vec<ExternalInterface>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterfaceClass {
    pub name: String,
    pub ref_base_class: Option<RefPath>,
    pub children: Vec<InterfaceClass>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeType {
    pub name: String,
    pub ref_attribute_type: Option<RefPath>,
    pub children: Vec<AttributeType>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceHierarchy {
    pub name: String,
    pub internal_elements: Vec<InternalElement>,
}

/// A top-level class library: name plus its root class elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Library<T> {
    pub name: String,
    pub elements: Vec<T>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub source_name: String,
    pub instance_hierarchies: Vec<InstanceHierarchy>,
    pub suc_libs: Vec<Library<SystemUnitClass>>,
    pub rc_libs: Vec<Library<RoleClass>>,
    pub ic_libs: Vec<Library<InterfaceClass>>,
    pub at_libs: Vec<Library<AttributeType>>,
}
