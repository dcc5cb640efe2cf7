//! Instance files.
//!
//! ```text
//! {"r": 2,
//!  "classes": [{"weights": ["1/2", "1/2"]}, {"weights": ["1"]}, {"weights": ["1"]}],
//!  "edges": [[[0,0],[1,0]], [[1,0],[2,0]]]}
//! ```
//!
//! Rationals are `"p/q"` strings (`"p"` when the denominator is 1). Edges are
//! lists of `[class, local]` pairs. The writer emits edges in canonical order
//! so that `write(read(f))` is the canonical form of `f`.
//!
//! Errors found while parsing carry the line and column reported by the JSON
//! reader. When `edges` precedes `r` or `classes` in the document the edge
//! checks run after parsing and report the edge index instead.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hypergraph::{Edge, PartiteHypergraph, VertexId};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Text { line: usize, column: usize },
    Item(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Text { line, column } => write!(f, "line {line} column {column}"),
            Self::Item(path) => f.write_str(path),
        }
    }
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at {at}: {message}")]
    Json { at: Location, message: String },
    #[error("bad rational at {at}: {message}")]
    BadRational { at: Location, message: String },
    #[error("non-positive weight at {at}: {message}")]
    NonPositiveWeight { at: Location, message: String },
    #[error("non-partite edge at {at}: {message}")]
    NonPartiteEdge { at: Location, message: String },
    #[error("duplicate edge at {at}: {message}")]
    DuplicateEdge { at: Location, message: String },
    #[error("invalid instance at {at}: {message}")]
    Invalid { at: Location, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Rational,
    Weight,
    Partite,
    Duplicate,
    Invalid,
}

impl Kind {
    const ALL: [Kind; 5] = [Kind::Rational, Kind::Weight, Kind::Partite, Kind::Duplicate, Kind::Invalid];

    fn tag(self) -> &'static str {
        match self {
            Kind::Rational => "[bad-rational] ",
            Kind::Weight => "[non-positive-weight] ",
            Kind::Partite => "[non-partite-edge] ",
            Kind::Duplicate => "[duplicate-edge] ",
            Kind::Invalid => "[invalid-instance] ",
        }
    }

    fn error(self, at: Location, message: String) -> InstanceError {
        match self {
            Kind::Rational => InstanceError::BadRational { at, message },
            Kind::Weight => InstanceError::NonPositiveWeight { at, message },
            Kind::Partite => InstanceError::NonPartiteEdge { at, message },
            Kind::Duplicate => InstanceError::DuplicateEdge { at, message },
            Kind::Invalid => InstanceError::Invalid { at, message },
        }
    }
}

fn tagged<E: de::Error>(kind: Kind, message: impl fmt::Display) -> E {
    E::custom(format!("{}{message}", kind.tag()))
}

fn classify(err: serde_json::Error) -> InstanceError {
    let at = Location::Text {
        line: err.line(),
        column: err.column(),
    };
    let full = err.to_string();
    let suffix = format!(" at line {} column {}", err.line(), err.column());
    let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
    for kind in Kind::ALL {
        if let Some(rest) = message.strip_prefix(kind.tag()) {
            return kind.error(at, rest.to_string());
        }
    }
    InstanceError::Json { at, message }
}

/// Edge validation shared by the streaming and post-parse paths.
fn check_raw_edge(
    r: Option<usize>,
    sizes: Option<&[usize]>,
    raw: &[(usize, usize)],
) -> Result<Edge, (Kind, String)> {
    let vertices: Vec<VertexId> = raw.iter().map(|&p| VertexId::from(p)).collect();
    if let Some(r) = r {
        if vertices.len() != r {
            return Err((Kind::Invalid, format!("edge has {} vertices, expected r = {r}", vertices.len())));
        }
    }
    if let Some(sizes) = sizes {
        if let Some(v) = vertices
            .iter()
            .find(|v| v.class >= sizes.len() || v.local >= sizes[v.class])
        {
            return Err((Kind::Invalid, format!("vertex {v} does not exist")));
        }
    }
    Edge::new(vertices).map_err(|e| (Kind::Partite, e.to_string()))
}

struct WeightStr(Rational);

impl<'de> Deserialize<'de> for WeightStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let q = parse_rational(&text).map_err(|e| tagged::<D::Error>(Kind::Rational, e))?;
        if q <= Rational::from_integer(0.into()) {
            return Err(tagged(Kind::Weight, format!("weight {text:?} must be strictly positive")));
        }
        Ok(WeightStr(q))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassSpec {
    weights: Vec<WeightStr>,
}

struct EdgesSeed<'a> {
    r: Option<usize>,
    sizes: Option<&'a [usize]>,
}

impl<'de> DeserializeSeed<'de> for EdgesSeed<'_> {
    type Value = Vec<Edge>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for EdgesSeed<'_> {
    type Value = Vec<Edge>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of edges")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        while let Some(raw) = seq.next_element::<Vec<(usize, usize)>>()? {
            let edge = check_raw_edge(self.r, self.sizes, &raw)
                .map_err(|(kind, msg)| tagged::<A::Error>(kind, format!("edges[{}]: {msg}", edges.len())))?;
            if !seen.insert(edge.clone()) {
                return Err(tagged(Kind::Duplicate, format!("edges[{}]: {edge} repeats an earlier edge", edges.len())));
            }
            edges.push(edge);
        }
        Ok(edges)
    }
}

struct RawInstance {
    r: usize,
    classes: Vec<Vec<Rational>>,
    edges: Vec<Edge>,
    /// Edges were read before `r`/`classes` and still need checking.
    unchecked: Option<Vec<Vec<(usize, usize)>>>,
}

struct InstanceVisitor;

impl<'de> Visitor<'de> for InstanceVisitor {
    type Value = RawInstance;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an instance object with keys r, classes, edges")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
        let mut r: Option<usize> = None;
        let mut classes: Option<Vec<Vec<Rational>>> = None;
        let mut edges: Option<Vec<Edge>> = None;
        let mut unchecked = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "r" => {
                    if r.is_some() {
                        return Err(de::Error::duplicate_field("r"));
                    }
                    let value: usize = map.next_value()?;
                    if value < 2 {
                        return Err(tagged(Kind::Invalid, format!("r = {value} must be at least 2")));
                    }
                    r = Some(value);
                }
                "classes" => {
                    if classes.is_some() {
                        return Err(de::Error::duplicate_field("classes"));
                    }
                    let specs: Vec<ClassSpec> = map.next_value()?;
                    classes = Some(
                        specs
                            .into_iter()
                            .map(|c| c.weights.into_iter().map(|w| w.0).collect())
                            .collect(),
                    );
                }
                "edges" => {
                    if edges.is_some() || unchecked.is_some() {
                        return Err(de::Error::duplicate_field("edges"));
                    }
                    if let (Some(_), Some(cs)) = (r, classes.as_ref()) {
                        let sizes: Vec<usize> = cs.iter().map(Vec::len).collect();
                        edges = Some(map.next_value_seed(EdgesSeed {
                            r,
                            sizes: Some(&sizes),
                        })?);
                    } else {
                        unchecked = Some(map.next_value::<Vec<Vec<(usize, usize)>>>()?);
                    }
                }
                other => return Err(de::Error::unknown_field(other, &["r", "classes", "edges"])),
            }
        }
        let r = r.ok_or_else(|| de::Error::missing_field("r"))?;
        let classes = classes.ok_or_else(|| de::Error::missing_field("classes"))?;
        if classes.len() < r {
            return Err(tagged(
                Kind::Invalid,
                format!("{} classes is fewer than r = {r}", classes.len()),
            ));
        }
        if edges.is_none() && unchecked.is_none() {
            return Err(de::Error::missing_field("edges"));
        }
        Ok(RawInstance {
            r,
            classes,
            edges: edges.unwrap_or_default(),
            unchecked,
        })
    }
}

fn finish(raw: RawInstance) -> Result<PartiteHypergraph, InstanceError> {
    let RawInstance {
        r,
        classes,
        mut edges,
        unchecked,
    } = raw;
    if let Some(list) = unchecked {
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let mut seen = HashSet::new();
        for (i, raw) in list.iter().enumerate() {
            let at = Location::Item(format!("edges[{i}]"));
            let edge = check_raw_edge(Some(r), Some(&sizes), raw).map_err(|(k, m)| k.error(at.clone(), m))?;
            if !seen.insert(edge.clone()) {
                return Err(Kind::Duplicate.error(at, format!("{edge} repeats an earlier edge")));
            }
            edges.push(edge);
        }
    }
    Ok(PartiteHypergraph::from_canonical(r, classes, edges))
}

pub fn from_str(text: &str) -> Result<PartiteHypergraph, InstanceError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw = de.deserialize_map(InstanceVisitor).map_err(classify)?;
    de.end().map_err(classify)?;
    finish(raw)
}

pub fn from_value(value: serde_json::Value) -> Result<PartiteHypergraph, InstanceError> {
    from_str(&value.to_string())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<PartiteHypergraph, InstanceError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_str(&text)
}

/// Canonical text: keys in order `r`, `classes`, `edges`; one edge per line.
pub fn to_string(g: &PartiteHypergraph) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"r\": {},\n", g.r()));
    out.push_str("  \"classes\": [");
    for (c, ws) in g.classes().iter().enumerate() {
        let weights: Vec<String> = ws.iter().map(|w| format!("\"{}\"", format_rational(w))).collect();
        out.push_str(if c == 0 { "\n" } else { ",\n" });
        out.push_str(&format!("    {{\"weights\": [{}]}}", weights.join(", ")));
    }
    out.push_str(if g.num_classes() == 0 { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"edges\": [");
    for (i, e) in g.edges().iter().enumerate() {
        let vs: Vec<String> = e
            .vertices()
            .iter()
            .map(|v| format!("[{},{}]", v.class, v.local))
            .collect();
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&format!("    [{}]", vs.join(",")));
    }
    out.push_str(if g.num_edges() == 0 { "]\n" } else { "\n  ]\n" });
    out.push_str("}\n");
    out
}

pub fn write_instance(g: &PartiteHypergraph, path: impl AsRef<Path>) -> Result<(), InstanceError> {
    let path = path.as_ref();
    std::fs::write(path, to_string(g)).map_err(|source| InstanceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct WeightsRef<'a>(&'a [Rational]);

impl Serialize for WeightsRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        let texts: Vec<String> = self.0.iter().map(format_rational).collect();
        m.serialize_entry("weights", &texts)?;
        m.end()
    }
}

struct ClassesRef<'a>(&'a [Vec<Rational>]);

impl Serialize for ClassesRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for ws in self.0 {
            seq.serialize_element(&WeightsRef(ws))?;
        }
        seq.end()
    }
}

impl Serialize for PartiteHypergraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("r", &self.r())?;
        m.serialize_entry("classes", &ClassesRef(self.classes()))?;
        m.serialize_entry("edges", self.edges())?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for PartiteHypergraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = d.deserialize_map(InstanceVisitor)?;
        finish(raw).map_err(de::Error::custom)
    }
}
