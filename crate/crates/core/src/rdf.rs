//! Labeled directed multigraph with IRI and literal nodes.
//!
//! Triples live in a sorted set, so graph equality is order-independent and
//! serialization is deterministic. No blank nodes: every resource in the
//! mapping gets a full IRI.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: String },
}

/// Absolute IRI. Construction validates the scheme and rejects characters
/// that the N-Triples grammar forbids inside an IRIREF.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        let err = |reason: &str| RdfError::InvalidIri { iri: value.clone(), reason: reason.into() };
        let scheme_len = value.find(':').ok_or_else(|| err("missing scheme"))?;
        if scheme_len == 0 {
            return Err(err("empty scheme"));
        }
        let scheme = &value[..scheme_len];
        let mut chars = scheme.chars();
        if !chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            || !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        {
            return Err(err("scheme must be ALPHA *(ALPHA / DIGIT / '+' / '-' / '.')"));
        }
        if let Some(bad) = value
            .chars()
            .find(|&c| c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') || c == '\u{7f}')
        {
            return Err(err(&format!("forbidden character {bad:?}")));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Appends a raw suffix. The caller is responsible for the suffix being
    /// IRI-safe (see [`iri_safe`]); minted IRIs stay valid by construction.
    pub fn join_raw(&self, suffix: &str) -> Iri {
        Iri(format!("{}{}", self.0, suffix))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Percent-encodes everything outside the RFC 3987 unreserved set.
///
/// Already-encoded triplets with uppercase hex digits are kept as they are,
/// which makes the function idempotent. On inputs free of such triplets it is
/// also injective. Non-ASCII characters pass through unchanged (IRIs allow
/// them directly).
pub fn iri_safe(segment: &str) -> String {
    let mut out = String::with_capacity(segment.len());
    let bytes = segment.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'%'
            && i + 2 < bytes.len()
            && is_upper_hex(bytes[i + 1])
            && is_upper_hex(bytes[i + 2])
        {
            out.push_str(&segment[i..i + 3]);
            i += 3;
        } else if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
            i += 1;
        } else if b.is_ascii() {
            out.push_str(&format!("%{b:02X}"));
            i += 1;
        } else {
            // Start of a multi-byte UTF-8 sequence: copy the whole character.
            let ch_len = utf8_len(b);
            out.push_str(&segment[i..i + ch_len]);
            i += ch_len;
        }
    }
    out
}

fn is_upper_hex(b: u8) -> bool {
    b.is_ascii_digit() || (b'A'..=b'F').contains(&b)
}

fn utf8_len(first: u8) -> usize {
    match first {
        0xf0..=0xf7 => 4,
        0xe0..=0xef => 3,
        _ => 2,
    }
}

/// RDF literal: lexical form plus either a datatype or a language tag.
/// Language-tagged literals implicitly have the rdf:langString datatype.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// Plain string literal (datatype xsd:string).
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri(XSD_STRING.to_string()),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal { lexical: lexical.into(), datatype, language: None }
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri(RDF_LANG_STRING.to_string()),
            language: Some(tag.into()),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// Object position of a triple: IRI or literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Iri(_) => None,
            Term::Literal(lit) => Some(lit),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }
}

/// Triple set with set semantics plus a prefix table for Turtle output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Inserts a triple; returns true if it was not present before.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        self.triples.extend(triples);
    }

    /// All objects o with (subject, predicate, o) in the graph.
    pub fn objects_of(&self, subject: &Iri, predicate: &Iri) -> BTreeSet<&Term> {
        self.triples
            .iter()
            .filter(|t| &t.subject == subject && &t.predicate == predicate)
            .map(|t| &t.object)
            .collect()
    }

    /// All subjects s with (s, predicate, object) in the graph.
    pub fn subjects_of(&self, predicate: &Iri, object: &Term) -> BTreeSet<&Iri> {
        self.triples
            .iter()
            .filter(|t| &t.predicate == predicate && &t.object == object)
            .map(|t| &t.subject)
            .collect()
    }

    /// Triples matching the given pattern; None matches anything.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&'a Iri>,
        predicate: Option<&'a Iri>,
        object: Option<&'a Term>,
    ) -> impl Iterator<Item = &'a Triple> {
        self.triples.iter().filter(move |t| {
            subject.is_none_or(|s| &t.subject == s)
                && predicate.is_none_or(|p| &t.predicate == p)
                && object.is_none_or(|o| &t.object == o)
        })
    }

    pub fn add_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(prefix.into(), namespace);
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph { triples: iter.into_iter().collect(), prefixes: BTreeMap::new() }
    }
}

fn escape_literal(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
}

fn write_term_ntriples(term: &Term, out: &mut String) {
    match term {
        Term::Iri(iri) => {
            out.push('<');
            out.push_str(iri.as_str());
            out.push('>');
        }
        Term::Literal(lit) => {
            out.push('"');
            escape_literal(lit.lexical(), out);
            out.push('"');
            if let Some(tag) = lit.language() {
                out.push('@');
                out.push_str(tag);
            } else if lit.datatype().as_str() != XSD_STRING {
                out.push_str("^^<");
                out.push_str(lit.datatype().as_str());
                out.push('>');
            }
        }
    }
}

/// One triple per line, lines sorted lexicographically. Equal graphs produce
/// byte-identical output. xsd:string literals are written in their plain form.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| {
            let mut line = String::new();
            line.push('<');
            line.push_str(t.subject.as_str());
            line.push_str("> <");
            line.push_str(t.predicate.as_str());
            line.push_str("> ");
            write_term_ntriples(&t.object, &mut line);
            line.push_str(" .");
            line
        })
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

const RDF_TYPE_IRI: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Compresses an IRI to a CURIE if a prefix matches and the local part fits
/// the safe subset of Turtle's PN_LOCAL grammar.
fn compress(iri: &Iri, prefixes: &BTreeMap<String, Iri>) -> Option<String> {
    for (prefix, ns) in prefixes {
        if let Some(local) = iri.as_str().strip_prefix(ns.as_str()) {
            if local.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
                && !local.ends_with('.')
                && local
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            {
                return Some(format!("{prefix}:{local}"));
            }
        }
    }
    None
}

fn write_term_turtle(term: &Term, prefixes: &BTreeMap<String, Iri>, out: &mut String) {
    match term {
        Term::Iri(iri) => match compress(iri, prefixes) {
            Some(curie) => out.push_str(&curie),
            None => {
                out.push('<');
                out.push_str(iri.as_str());
                out.push('>');
            }
        },
        Term::Literal(lit) => {
            out.push('"');
            escape_literal(lit.lexical(), out);
            out.push('"');
            if let Some(tag) = lit.language() {
                out.push('@');
                out.push_str(tag);
            } else if lit.datatype().as_str() != XSD_STRING {
                out.push_str("^^");
                write_term_turtle(&Term::Iri(lit.datatype().clone()), prefixes, out);
            }
        }
    }
}

/// Turtle output: prefix header, then triples grouped by subject with sorted
/// predicates and objects. Deterministic for equal graphs.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    let mut current_subject: Option<&Iri> = None;
    for triple in graph.iter() {
        if current_subject != Some(&triple.subject) {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            out.push('\n');
            write_term_turtle(&Term::Iri(triple.subject.clone()), graph.prefixes(), &mut out);
        } else {
            out.push_str(" ;");
        }
        out.push_str("\n    ");
        if triple.predicate.as_str() == RDF_TYPE_IRI {
            out.push('a');
        } else {
            write_term_turtle(&Term::Iri(triple.predicate.clone()), graph.prefixes(), &mut out);
        }
        out.push(' ');
        write_term_turtle(&triple.object, graph.prefixes(), &mut out);
        current_subject = Some(&triple.subject);
    }
    if current_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}
