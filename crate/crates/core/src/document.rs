//! JSON graph documents and 17-significant-digit number formatting.
//!
//! ```json
//! {"version": 1,
//!  "vertices": [{"id": "a", "m": 1}, {"id": "b", "m": 1, "c": 0.5}],
//!  "edges": [{"u": "a", "v": "b", "b": 1}],
//!  "dirichlet": ["a"],
//!  "p": 2}
//! ```

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, ProblemSpec, VertexRecord, WeightedGraph};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub m: f64,
    #[serde(default)]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub b: f64,
}

fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default)]
    pub dirichlet: Vec<String>,
    #[serde(default = "default_p")]
    pub p: f64,
}

/// Formats like C's `%.17g`, which round-trips every finite `f64`.
/// Non-finite values have no JSON form and become `null`.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest.replace('.', "")),
        None => ("", mantissa.replace('.', "")),
    };
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if (-5..17).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let point = exp as usize + 1;
            if digits.len() <= point {
                format!("{}{}", digits, "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        };
        format!("{sign}{body}")
    } else {
        let frac = if digits.len() > 1 { format!(".{}", &digits[1..]) } else { String::new() };
        format!("{sign}{}{frac}e{exp}", &digits[..1])
    }
}

/// An `f64` serialized through [`fmt17`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        RawValue::from_string(fmt17(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

#[derive(Serialize)]
struct VertexOut<'a> {
    id: &'a str,
    m: Num,
    c: Num,
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    u: &'a str,
    v: &'a str,
    b: Num,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    version: u32,
    vertices: Vec<VertexOut<'a>>,
    edges: Vec<EdgeOut<'a>>,
    dirichlet: Vec<&'a str>,
    p: Num,
}

impl GraphDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn into_spec(self) -> Result<ProblemSpec<f64>> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Schema(format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                self.version
            )));
        }
        let vertices: Vec<VertexRecord<f64>> = self
            .vertices
            .into_iter()
            .map(|v| VertexRecord::new(v.id, v.m, v.c))
            .collect();
        let edges: Vec<EdgeRecord<f64>> = self
            .edges
            .into_iter()
            .map(|e| EdgeRecord::new(e.u, e.v, e.b))
            .collect();
        let graph = WeightedGraph::build(&vertices, &edges)?;
        if let Some(bad) = self.dirichlet.iter().find(|id| graph.index_of(id).is_err()) {
            return Err(Error::Schema(format!("dirichlet: unknown vertex `{bad}`")));
        }
        ProblemSpec::new(graph, &self.dirichlet, self.p)
    }
}

pub fn parse_graph(text: &str) -> Result<ProblemSpec<f64>> {
    GraphDocument::from_json(text)?.into_spec()
}

/// Pretty-printed document; parallel edges appear merged.
pub fn emit_graph(spec: &ProblemSpec<f64>) -> String {
    let g = spec.graph();
    let dirichlet = spec.dirichlet_indices().into_iter().map(|i| g.id(i)).collect();
    let doc = DocumentOut {
        version: FORMAT_VERSION,
        vertices: (0..g.len())
            .map(|i| VertexOut {
                id: g.id(i),
                m: Num(*g.measure(i)),
                c: Num(*g.potential(i)),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(i, j, b)| EdgeOut {
                u: g.id(i),
                v: g.id(j),
                b: Num(*b),
            })
            .collect(),
        dirichlet,
        p: Num(*spec.p()),
    };
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(14.0), "14");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(-2.5), "-2.5");
        assert_eq!(fmt17(1e-7), "9.9999999999999995e-8");
        assert_eq!(fmt17(1e20), "1e20");
        assert_eq!(fmt17(123456.0), "123456");
        assert_eq!(fmt17(f64::NAN), "null");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02e23, 5e-324, f64::MAX, 0.000123] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn minimal_document() {
        let spec = parse_graph(
            r#"{"version":1,"vertices":[{"id":"a","m":1},{"id":"b","m":1}],
                "edges":[{"u":"a","v":"b","b":1}],"dirichlet":["a"],"p":2}"#,
        )
        .unwrap();
        assert_eq!(spec.len(), 2);
        assert_eq!(spec.dirichlet_ids(), vec!["a".to_string()]);
    }

    #[test]
    fn schema_errors() {
        let unknown = r#"{"version":1,"vertices":[{"id":"a","m":1}],"edges":[],"dirichlet":["z"]}"#;
        assert!(matches!(parse_graph(unknown), Err(Error::Schema(_))));
        let extra = r#"{"version":1,"vertices":[{"id":"a","m":1,"q":3}],"edges":[]}"#;
        assert!(matches!(parse_graph(extra), Err(Error::Schema(_))));
        let version = r#"{"version":2,"vertices":[{"id":"a","m":1}],"edges":[]}"#;
        assert!(matches!(parse_graph(version), Err(Error::Schema(_))));
        let mass = r#"{"version":1,"vertices":[{"id":"a","m":0}],"edges":[]}"#;
        assert!(matches!(parse_graph(mass), Err(Error::NonpositiveMass { .. })));
    }

    #[test]
    fn parallel_edges_merge() {
        let spec = parse_graph(
            r#"{"version":1,"vertices":[{"id":"a","m":1},{"id":"b","m":1}],
                "edges":[{"u":"a","v":"b","b":1},{"u":"b","v":"a","b":0.5}]}"#,
        )
        .unwrap();
        assert_eq!(spec.graph().weight(0, 1), 1.5);
        assert_eq!(*spec.p(), 2.0);
        assert!(!spec.has_dirichlet());
    }
}
