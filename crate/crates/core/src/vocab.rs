//! Fixed IRI vocabulary for the mapped graphs.
//!
//! All CAEX class and property IRIs share one ontology namespace. The set is
//! closed; the mapping never invents vocabulary terms at runtime.

use crate::rdf::Iri;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";

/// Namespace of the published AutomationML ontology.
pub const DEFAULT_ONTOLOGY_NS: &str = "https://w3id.org/hsu-aut/AutomationML#";

/// All class and property IRIs used by the mapping, bound to one namespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub ns: Iri,

    // classes
    pub instance_hierarchy: Iri,
    pub internal_element: Iri,
    pub external_interface: Iri,
    pub attribute: Iri,
    pub internal_link: Iri,
    pub system_unit_class: Iri,
    pub role_class: Iri,
    pub interface_class: Iri,
    pub attribute_type: Iri,
    pub system_unit_class_lib: Iri,
    pub role_class_lib: Iri,
    pub interface_class_lib: Iri,
    pub attribute_type_lib: Iri,
    pub facet: Iri,
    pub group: Iri,

    // object properties
    pub has_part: Iri,
    pub has_attribute: Iri,
    pub has_interface: Iri,
    pub has_ref_base_class: Iri,
    pub has_ref_attribute_type: Iri,
    pub has_ref_base_system_unit_class: Iri,
    pub has_role_requirement: Iri,
    pub has_supported_role_class: Iri,
    pub has_ref_partner_side_a: Iri,
    pub has_ref_partner_side_b: Iri,
    pub is_linked: Iri,
    pub has_master_object: Iri,
    pub has_mirror_object: Iri,
    pub has_mapping_object: Iri,
    pub has_facet: Iri,
    pub has_group: Iri,
    pub flows: Iri,

    // data properties
    pub has_name: Iri,
    pub has_attribute_value: Iri,
    pub has_unit: Iri,
    pub has_description: Iri,

    // standard vocabulary
    pub rdf_type: Iri,
    pub rdfs_sub_class_of: Iri,
    pub rdfs_label: Iri,
    pub owl_class: Iri,
}

impl Vocabulary {
    pub fn new(ns: &Iri) -> Vocabulary {
        let term = |local: &str| ns.join_raw(local);
        Vocabulary {
            ns: ns.clone(),
            instance_hierarchy: term("InstanceHierarchy"),
            internal_element: term("InternalElement"),
            external_interface: term("ExternalInterface"),
            attribute: term("Attribute"),
            internal_link: term("InternalLink"),
            system_unit_class: term("SystemUnitClass"),
            role_class: term("RoleClass"),
            interface_class: term("InterfaceClass"),
            attribute_type: term("AttributeType"),
            system_unit_class_lib: term("SystemUnitClassLib"),
            role_class_lib: term("RoleClassLib"),
            interface_class_lib: term("InterfaceClassLib"),
            attribute_type_lib: term("AttributeTypeLib"),
            facet: term("Facet"),
            group: term("Group"),
            has_part: term("hasPart"),
            has_attribute: term("hasAttribute"),
            has_interface: term("hasInterface"),
            has_ref_base_class: term("hasRefBaseClass"),
            has_ref_attribute_type: term("hasRefAttributeType"),
            has_ref_base_system_unit_class: term("hasRefBaseSystemUnitClass"),
            has_role_requirement: term("hasRoleRequirement"),
            has_supported_role_class: term("hasSupportedRoleClass"),
            has_ref_partner_side_a: term("hasRefPartnerSideA"),
            has_ref_partner_side_b: term("hasRefPartnerSideB"),
            is_linked: term("isLinked"),
            has_master_object: term("hasMasterObject"),
            has_mirror_object: term("hasMirrorObject"),
            has_mapping_object: term("hasMappingObject"),
            has_facet: term("hasFacet"),
            has_group: term("hasGroup"),
            flows: term("flows"),
            has_name: term("hasName"),
            has_attribute_value: term("hasAttributeValue"),
            has_unit: term("hasUnit"),
            has_description: term("hasDescription"),
            rdf_type: Iri::new(RDF_TYPE).expect("well-formed"),
            rdfs_sub_class_of: Iri::new(RDFS_SUB_CLASS_OF).expect("well-formed"),
            rdfs_label: Iri::new(RDFS_LABEL).expect("well-formed"),
            owl_class: Iri::new(OWL_CLASS).expect("well-formed"),
        }
    }
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::new(&Iri::new(DEFAULT_ONTOLOGY_NS).expect("well-formed"))
    }
}
