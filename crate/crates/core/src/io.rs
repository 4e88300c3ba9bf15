//! JSON lattice documents, DOT export, and census report formats.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;
use crate::census::CensusRecord;
use crate::involution::{BrouwerError, BzLattice, InvolutionError, InvolutionLattice};
use crate::lattice::{FiniteLattice, LatticeError, MAX_ELEMENTS};

pub const FORMAT_VERSION: u32 = 1;
pub const TRIVIAL_TAG: &str = "trivial";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BrouwerField {
    Tag(String),
    Map(BTreeMap<String, String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub format_version: u32,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brouwer: Option<BrouwerField>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Brouwer(#[from] BrouwerError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid structure: {0}")]
    Validation(#[from] ValidationError),
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// A parsed document at the richest kind its fields describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Lattice(FiniteLattice),
    Involution(InvolutionLattice),
    Bz(BzLattice),
}

impl Structure {
    pub fn lattice(&self) -> &FiniteLattice {
        match self {
            Structure::Lattice(l) => l,
            Structure::Involution(il) => il.lattice(),
            Structure::Bz(bz) => bz.lattice(),
        }
    }

    pub fn involution(&self) -> Option<&InvolutionLattice> {
        match self {
            Structure::Lattice(_) => None,
            Structure::Involution(il) => Some(il),
            Structure::Bz(bz) => Some(bz.base()),
        }
    }

    pub fn bz(&self) -> Option<&BzLattice> {
        match self {
            Structure::Bz(bz) => Some(bz),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Involution(_) => "i-lattice",
            Structure::Bz(_) => "BZ-lattice",
        }
    }
}

impl From<FiniteLattice> for Structure {
    fn from(l: FiniteLattice) -> Self {
        Structure::Lattice(l)
    }
}

impl From<InvolutionLattice> for Structure {
    fn from(il: InvolutionLattice) -> Self {
        Structure::Involution(il)
    }
}

impl From<BzLattice> for Structure {
    fn from(bz: BzLattice) -> Self {
        Structure::Bz(bz)
    }
}

/// Reads a document and validates the structure it describes.
pub fn parse(text: &str) -> Result<Structure, IoError> {
    let doc: LatticeDocument = serde_json::from_str(text).map_err(|e| {
        parse_error(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    from_document(&doc)
}

pub fn from_document(doc: &LatticeDocument) -> Result<Structure, IoError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(parse_error(
            "format_version",
            format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                doc.format_version
            ),
        ));
    }
    let n = doc.elements.len();
    if n == 0 {
        return Err(parse_error("elements", "no elements"));
    }
    if n > MAX_ELEMENTS {
        return Err(parse_error(
            "elements",
            format!("{n} elements, at most {MAX_ELEMENTS} supported"),
        ));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, label) in doc.elements.iter().enumerate() {
        if index.insert(label.as_str(), i).is_some() {
            return Err(parse_error(
                format!("elements[{i}]"),
                format!("duplicate label {label:?}"),
            ));
        }
    }
    let lookup = |loc: String, label: &str| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| parse_error(loc, format!("unknown label {label:?}")))
    };

    let mut edges = Vec::with_capacity(doc.covers.len());
    for (i, (lo, hi)) in doc.covers.iter().enumerate() {
        let a = lookup(format!("covers[{i}][0]"), lo)?;
        let b = lookup(format!("covers[{i}][1]"), hi)?;
        if a == b {
            return Err(parse_error(
                format!("covers[{i}]"),
                format!("self-loop on {lo:?}"),
            ));
        }
        edges.push((a, b));
    }
    let mut reach: Vec<u64> = (0..n).map(bits::bit).collect();
    for &(a, b) in &edges {
        reach[a] |= bits::bit(b);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let next = bits::iter(reach[x]).fold(reach[x], |m, y| m | reach[y]);
            if next != reach[x] {
                reach[x] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if bits::contains(reach[b], a) {
            return Err(parse_error(
                format!("covers[{i}]"),
                format!(
                    "cycle through {:?} and {:?}",
                    doc.elements[a], doc.elements[b]
                ),
            ));
        }
    }
    let lattice = FiniteLattice::from_edges(n, &edges)
        .and_then(|l| l.with_labels(doc.elements.iter().cloned()))
        .map_err(ValidationError::from)?;

    let Some(map) = &doc.involution else {
        if doc.brouwer.is_some() {
            return Err(parse_error(
                "brouwer",
                "a Brouwer complement needs an involution",
            ));
        }
        return Ok(Structure::Lattice(lattice));
    };
    let inv = read_map(map, n, &lookup, "involution", true)?;
    let il = InvolutionLattice::attach(lattice, inv).map_err(ValidationError::from)?;
    match &doc.brouwer {
        None => Ok(Structure::Involution(il)),
        Some(BrouwerField::Tag(tag)) if tag == TRIVIAL_TAG => Ok(Structure::Bz(
            BzLattice::trivial(il).map_err(ValidationError::from)?,
        )),
        Some(BrouwerField::Tag(tag)) => Err(parse_error(
            "brouwer",
            format!("expected a map or {TRIVIAL_TAG:?}, got {tag:?}"),
        )),
        Some(BrouwerField::Map(m)) => {
            let br = read_map(m, n, &lookup, "brouwer", false)?;
            Ok(Structure::Bz(
                BzLattice::attach(il, br).map_err(ValidationError::from)?,
            ))
        }
    }
}

/// Resolves a label map to an index map. An involution may list each pair
/// in one direction only; the other direction is filled in.
fn read_map(
    map: &BTreeMap<String, String>,
    n: usize,
    lookup: &dyn Fn(String, &str) -> Result<usize, IoError>,
    field: &str,
    symmetric: bool,
) -> Result<Vec<usize>, IoError> {
    let mut out: Vec<Option<usize>> = vec![None; n];
    let mut set = |x: usize, y: usize, key: &str| -> Result<(), IoError> {
        match out[x] {
            Some(z) if z != y => Err(parse_error(format!("{field}.{key}"), "conflicting images")),
            _ => {
                out[x] = Some(y);
                Ok(())
            }
        }
    };
    for (k, v) in map {
        let x = lookup(format!("{field}.{k}"), k)?;
        let y = lookup(format!("{field}.{k}"), v)?;
        set(x, y, k)?;
        if symmetric {
            set(y, x, k)?;
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| parse_error(field.to_string(), format!("no image for element {x}")))
        })
        .collect()
}

/// The document describing a structure; labels default to indices.
pub fn to_document(s: &Structure) -> LatticeDocument {
    let l = s.lattice();
    let labels = l.label_list();
    let covers = l
        .covers()
        .into_iter()
        .map(|(a, b)| (labels[a].clone(), labels[b].clone()))
        .collect();
    let involution = s.involution().map(|il| {
        (0..l.len())
            .map(|x| (labels[x].clone(), labels[il.inv(x)].clone()))
            .collect()
    });
    let brouwer = s.bz().map(|bz| {
        if bz.has_trivial_brouwer() {
            BrouwerField::Tag(TRIVIAL_TAG.to_string())
        } else {
            BrouwerField::Map(
                (0..l.len())
                    .map(|x| (labels[x].clone(), labels[bz.brouwer(x)].clone()))
                    .collect(),
            )
        }
    });
    LatticeDocument {
        format_version: FORMAT_VERSION,
        elements: labels,
        covers,
        involution,
        brouwer,
    }
}

/// Pretty JSON, newline-terminated.
pub fn emit(s: &Structure) -> String {
    let mut out = serde_json::to_string_pretty(&to_document(s)).expect("documents serialize");
    out.push('\n');
    out
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram in DOT, bottom to top, one rank per height.
pub fn emit_dot(s: &Structure, show_involution: bool) -> String {
    let l = s.lattice();
    let labels = l.label_list();
    let heights = l.heights();
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    let max_h = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=max_h {
        let level: Vec<String> = (0..l.len())
            .filter(|&x| heights[x] == h)
            .map(|x| quote(&labels[x]))
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", level.join("; "));
    }
    for (a, b) in l.covers() {
        let _ = writeln!(out, "  {} -> {};", quote(&labels[a]), quote(&labels[b]));
    }
    if show_involution {
        if let Some(il) = s.involution() {
            for x in 0..l.len() {
                let y = il.inv(x);
                if x < y {
                    let _ = writeln!(
                        out,
                        "  {} -> {} [style=dashed, dir=none, constraint=false];",
                        quote(&labels[x]),
                        quote(&labels[y])
                    );
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn census_json(record: &CensusRecord) -> String {
    let mut out = serde_json::to_string_pretty(record).expect("records serialize");
    out.push('\n');
    out
}

pub fn census_from_json(text: &str) -> Result<CensusRecord, IoError> {
    serde_json::from_str(text).map_err(|e| {
        parse_error(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// `n,congruences,classes` rows from the `|Con_I|` histogram.
pub fn census_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from("n,congruences,classes\n");
    for r in records {
        for (c, k) in &r.histogram {
            let _ = writeln!(out, "{},{c},{k}", r.n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as cons;

    #[test]
    fn two_element_document() {
        let text = r#"{"format_version":1,"elements":["0","1"],"covers":[["0","1"]],"involution":{"0":"1"}}"#;
        let Structure::Involution(il) = parse(text).unwrap() else {
            panic!("expected an i-lattice")
        };
        assert_eq!(il.involution(), &[1, 0]);
    }

    #[test]
    fn cycle_is_a_parse_error() {
        let text = r#"{"format_version":1,"elements":["a","b","c"],"covers":[["a","b"],["b","c"],["c","a"]]}"#;
        assert!(matches!(parse(text), Err(IoError::Parse { .. })));
    }

    #[test]
    fn unknown_label_and_bad_json() {
        let text = r#"{"format_version":1,"elements":["a"],"covers":[["a","z"]]}"#;
        let Err(IoError::Parse { location, .. }) = parse(text) else {
            panic!()
        };
        assert_eq!(location, "covers[0][1]");
        assert!(matches!(parse("{"), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse(r#"{"format_version":1,"elements":[],"covers":[],"x":1}"#),
            Err(IoError::Parse { .. })
        ));
    }

    #[test]
    fn validation_errors_pass_through() {
        let text =
            r#"{"format_version":1,"elements":["0","a","b"],"covers":[["0","a"],["0","b"]]}"#;
        assert!(matches!(
            parse(text),
            Err(IoError::Validation(ValidationError::Lattice(_)))
        ));
        let text = r#"{"format_version":1,"elements":["0","1"],"covers":[["0","1"]],"involution":{"0":"0","1":"1"}}"#;
        assert!(matches!(
            parse(text),
            Err(IoError::Validation(ValidationError::Involution(_)))
        ));
    }

    #[test]
    fn trivial_brouwer_tag() {
        let s = Structure::Bz(BzLattice::trivial(cons::chain(5).unwrap()).unwrap());
        let text = emit(&s);
        assert!(text.contains("\"trivial\""));
        assert_eq!(emit(&parse(&text).unwrap()), text);
    }

    #[test]
    fn b6_dot() {
        let s = Structure::Involution(cons::b6());
        let dot = emit_dot(&s, true);
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert_eq!(dot.matches("dashed").count(), 3);
        assert_eq!(dot, emit_dot(&s, true));
        assert_eq!(emit_dot(&s, false).matches("dashed").count(), 0);
    }

    #[test]
    fn csv_rows() {
        let r = crate::census::survey(4, 9).unwrap().record();
        assert_eq!(census_csv(&[r]), "n,congruences,classes\n4,2,1\n4,4,2\n");
    }
}
