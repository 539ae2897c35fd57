//! JSON instance and representation files.
//!
//! Instance:
//!
//! ```json
//! {"epsilon": "1", "layers": [["3"], ["1", "1", "1"]], "up_neighbors": [[[0, 2]], [null, null, null]]}
//! ```
//!
//! Widths and epsilon are decimal strings (`"1.5"`), rational strings (`"3/2"`) or
//! JSON integers. The top layer's `up_neighbors` row may be omitted.
//!
//! Representation:
//!
//! ```json
//! {"epsilon": "1", "x": [["0,0", "0"], ["1,0", "0"], ["1,1", "1"]]}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Interval, LayeredGraph, Representation, VertexId};
use crate::Q;

/// A graph together with the contact threshold it should be solved with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: LayeredGraph,
    pub epsilon: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Text(String),
}

impl RawNumber {
    fn parse(&self, what: &str) -> Result<Q> {
        match self {
            RawNumber::Int(i) => Ok(Q::from_integer(*i)),
            RawNumber::Text(s) => parse_rational(s).map_err(|e| Error::Parse(format!("{what}: {e}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<RawNumber>,
    layers: Vec<Vec<RawNumber>>,
    #[serde(default)]
    up_neighbors: Vec<Vec<Option<[usize; 2]>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepresentation {
    epsilon: RawNumber,
    x: Vec<(String, RawNumber)>,
}

/// Parses `"3"`, `"-2"`, `"1.25"` or `"7/3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Q::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(format!("bad number {s:?}"));
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("bad number {s:?}"));
    }
    let digits = format!("{int}{frac}");
    let num: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| format!("number {s:?} out of range"))? };
    let den = 10i64
        .checked_pow(frac.len() as u32)
        .ok_or_else(|| format!("too many decimals in {s:?}"))?;
    let v = Q::new(num, den);
    Ok(if neg { -v } else { v })
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn json_error(what: &str, src: &str, e: serde_json::Error) -> Error {
    let line = src.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
    Error::Parse(format!("{what}: {e} (line {}: {})", e.line(), line.trim()))
}

impl Instance {
    pub fn new(graph: LayeredGraph, epsilon: Q) -> Self {
        Instance { graph, epsilon }
    }

    /// Parses an instance; structural invariants are not checked here.
    pub fn from_json(src: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(src).map_err(|e| json_error("instance", src, e))?;
        let epsilon = match &raw.epsilon {
            Some(e) => e.parse("epsilon")?,
            None => Q::one(),
        };
        let mut widths = Vec::with_capacity(raw.layers.len());
        for (i, row) in raw.layers.iter().enumerate() {
            let row = row
                .iter()
                .enumerate()
                .map(|(j, w)| w.parse(&format!("layers[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?;
            widths.push(row);
        }
        let mut up: Vec<Vec<Option<Interval>>> = raw
            .up_neighbors
            .iter()
            .map(|row| row.iter().map(|iv| iv.map(|[a, b]| Interval::new(a, b))).collect())
            .collect();
        if up.len() + 1 == widths.len() {
            up.push(vec![None; widths.last().map_or(0, Vec::len)]);
        }
        let graph = LayeredGraph::new(widths, up)?;
        Ok(Instance { graph, epsilon })
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            epsilon: Some(RawNumber::Text(format_rational(&self.epsilon))),
            layers: self
                .graph
                .widths()
                .iter()
                .map(|row| row.iter().map(|w| RawNumber::Text(format_rational(w))).collect())
                .collect(),
            up_neighbors: self
                .graph
                .up_intervals()
                .iter()
                .map(|row| row.iter().map(|iv| iv.map(|iv| [iv.first, iv.last])).collect())
                .collect(),
        };
        serde_json::to_string(&raw).expect("instance serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)?;
        Instance::from_json(&src).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Serializes a representation with keys `"i,j"` in `(layer, pos)` order.
pub fn representation_to_json(r: &Representation) -> String {
    let x = r
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, x)| (format!("{i},{j}"), RawNumber::Text(format_rational(x))))
        })
        .collect();
    let raw = RawRepresentation { epsilon: RawNumber::Text(format_rational(&r.epsilon)), x };
    serde_json::to_string(&raw).expect("representation serializes")
}

/// Parses a representation file; every `(layer, pos)` between 0 and the largest
/// index must be present.
pub fn representation_from_json(src: &str) -> Result<Representation> {
    let raw: RawRepresentation =
        serde_json::from_str(src).map_err(|e| json_error("representation", src, e))?;
    let epsilon = raw.epsilon.parse("epsilon")?;
    if !epsilon.is_positive() {
        return Err(Error::Parse("epsilon must be positive".into()));
    }
    let mut coords = BTreeMap::new();
    for (key, value) in &raw.x {
        let (i, j) = key
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad vertex key {key:?}, expected \"i,j\"")))?;
        let i: usize = i.trim().parse().map_err(|_| Error::Parse(format!("bad layer in {key:?}")))?;
        let j: usize = j.trim().parse().map_err(|_| Error::Parse(format!("bad position in {key:?}")))?;
        let v = VertexId::new(i, j);
        if coords.insert(v, value.parse(key)?).is_some() {
            return Err(Error::Parse(format!("duplicate vertex {key:?}")));
        }
    }
    let layers = coords.keys().map(|v| v.layer + 1).max().unwrap_or(0);
    let mut rows = vec![Vec::new(); layers];
    for (v, x) in coords {
        if v.pos != rows[v.layer].len() {
            return Err(Error::MissingCoordinate(VertexId::new(v.layer, rows[v.layer].len())));
        }
        rows[v.layer].push(x);
    }
    Ok(Representation::new(epsilon, rows))
}

/// Lowest common denominator of a set of rationals.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()))
}

/// `q * scale` as an integer; panics if it is not one.
pub(crate) fn scaled(q: &Q, scale: i64) -> i64 {
    let s = *q * Q::from_integer(scale);
    debug_assert!(s.is_integer(), "{q} is not a multiple of 1/{scale}");
    s.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), Q::from_integer(3));
        assert_eq!(parse_rational("1.25").unwrap(), Q::new(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), Q::new(-1, 2));
        assert_eq!(parse_rational("7/3").unwrap(), Q::new(7, 3));
        assert_eq!(parse_rational(".5").unwrap(), Q::new(1, 2));
        for bad in ["", "1/0", "x", "1.2.3", "--1", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&Q::new(6, 4)), "3/2");
        assert_eq!(format_rational(&Q::from_integer(-2)), "-2");
    }

    #[test]
    fn instance_round_trip() {
        let src = r#"{"epsilon": "1/2", "layers": [[3], ["1", "1.5", "1"]], "up_neighbors": [[[0, 2]]]}"#;
        let inst = Instance::from_json(src).unwrap();
        assert_eq!(inst.epsilon, Q::new(1, 2));
        assert_eq!(inst.graph.layer_len(1), 3);
        assert!(inst.graph.validate().is_empty());
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn garbled_instance_reports_line() {
        let err = Instance::from_json("{\n\"layers\": [[1]],\n\"up_neighbors\": [[[0]]]\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        let err = Instance::from_json(r#"{"layers": [["abc"]]}"#).unwrap_err();
        assert!(err.to_string().contains("layers[0][0]"));
    }

    #[test]
    fn representation_round_trip() {
        let r = Representation::new(
            Q::from_integer(1),
            vec![vec![Q::from_integer(0)], vec![Q::new(-1, 2), Q::from_integer(1)]],
        );
        let text = representation_to_json(&r);
        assert!(text.contains("\"1,0\",\"-1/2\""));
        assert_eq!(representation_from_json(&text).unwrap(), r);
        let missing = r#"{"epsilon": "1", "x": [["0,0", "0"], ["0,2", "1"]]}"#;
        assert!(matches!(representation_from_json(missing), Err(Error::MissingCoordinate(_))));
    }
}
