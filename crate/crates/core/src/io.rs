//! Geometry JSON, Wavefront OBJ, and (n)OFF import/export.
//!
//! Geometry JSON:
//!
//! ```json
//! {"n": 3, "dim": 1, "vertices": [[0,0,0],[1,0,0]], "simplices": [[0,1]],
//!  "tags": {"exceptional": [0]}}
//! ```
//!
//! `tags` maps a tag name to the indices of the simplices carrying it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialSet, Tag};
use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryFile {
    pub n: usize,
    pub dim: i32,
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub tags: BTreeMap<String, Vec<usize>>,
}

impl From<&SimplicialSet> for GeometryFile {
    fn from(x: &SimplicialSet) -> Self {
        let mut tags: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, s) in x.simplices().iter().enumerate() {
            for t in &s.tags {
                tags.entry(t.to_string()).or_default().push(i);
            }
        }
        GeometryFile {
            n: x.ambient_dim(),
            dim: x.dim(),
            vertices: x.vertices().iter().map(|p| p.coords().to_vec()).collect(),
            simplices: x.simplices().iter().map(|s| s.vertices.to_vec()).collect(),
            tags,
        }
    }
}

impl TryFrom<GeometryFile> for SimplicialSet {
    type Error = Error;

    fn try_from(g: GeometryFile) -> Result<Self> {
        let vertices = g
            .vertices
            .into_iter()
            .map(Point::try_new)
            .collect::<Result<Vec<_>>>()?;
        let mut simplices: Vec<Simplex> = g.simplices.into_iter().map(Simplex::new).collect();
        for (name, idx) in g.tags {
            let tag: Tag = name.parse()?;
            for i in idx {
                let s = simplices.get_mut(i).ok_or_else(|| {
                    Error::InvalidGeometry(format!("tag {name} references missing simplex {i}"))
                })?;
                s.tags.insert(tag.clone());
            }
        }
        SimplicialSet::new(g.n, g.dim, vertices, simplices)
    }
}

impl Serialize for SimplicialSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GeometryFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GeometryFile::deserialize(d)?;
        SimplicialSet::try_from(g).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(x: &SimplicialSet) -> String {
    serde_json::to_string_pretty(x).expect("geometry serializes")
}

pub fn from_json(text: &str) -> Result<SimplicialSet> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Wavefront OBJ for sets in R^3: `p` points, `l` segments, `f` triangles.
pub fn to_obj(x: &SimplicialSet) -> Result<String> {
    if x.ambient_dim() != 3 {
        return Err(Error::Unsupported(format!(
            "OBJ export needs n = 3, got {}",
            x.ambient_dim()
        )));
    }
    let mut out = String::new();
    for v in x.vertices() {
        writeln!(out, "v {:?} {:?} {:?}", v[0], v[1], v[2]).unwrap();
    }
    for s in x.simplices() {
        let idx: Vec<String> = s.vertices.iter().map(|i| (i + 1).to_string()).collect();
        let kind = match s.dim() {
            0 => "p",
            1 => "l",
            2 => "f",
            d => return Err(Error::Unsupported(format!("OBJ export of a {d}-simplex"))),
        };
        writeln!(out, "{kind} {}", idx.join(" ")).unwrap();
    }
    Ok(out)
}

/// Parses `v`, `p`, `l`, and `f` records; faces with more than three
/// vertices are fanned, and polylines are split into segments.
pub fn from_obj(text: &str) -> Result<SimplicialSet> {
    let mut vertices = Vec::new();
    let mut simplices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        let mut parts = line.split_whitespace();
        let Some(kind) = parts.next() else { continue };
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
        match kind {
            "v" => {
                let c: Vec<f64> = parts
                    .take(3)
                    .map(|t| t.parse::<f64>().map_err(|_| bad("bad coordinate")))
                    .collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(bad("vertex needs three coordinates"));
                }
                vertices.push(Point::try_new(c)?);
            }
            "p" | "l" | "f" => {
                let idx: Vec<usize> = parts
                    .map(|t| {
                        let first = t.split('/').next().unwrap();
                        let i: i64 = first.parse().map_err(|_| bad("bad index"))?;
                        let resolved = if i < 0 { vertices.len() as i64 + i } else { i - 1 };
                        usize::try_from(resolved).map_err(|_| bad("index out of range"))
                    })
                    .collect::<Result<_>>()?;
                match kind {
                    "p" => simplices.extend(idx.into_iter().map(|i| Simplex::new([i]))),
                    "l" => simplices.extend(idx.windows(2).map(|w| Simplex::new([w[0], w[1]]))),
                    _ => {
                        if idx.len() < 3 {
                            return Err(bad("face needs three vertices"));
                        }
                        simplices.extend(
                            (1..idx.len() - 1).map(|k| Simplex::new([idx[0], idx[k], idx[k + 1]])),
                        );
                    }
                }
            }
            _ => {}
        }
    }
    SimplicialSet::from_parts(3, vertices, simplices)
}

/// OFF for `n = 3`, `nOFF` otherwise. Each simplex is written as a face
/// record; points and segments are faces with one or two vertices.
pub fn to_off(x: &SimplicialSet) -> String {
    let n = x.ambient_dim();
    let mut out = String::new();
    if n == 3 {
        out.push_str("OFF\n");
    } else {
        writeln!(out, "nOFF\n{n}").unwrap();
    }
    writeln!(out, "{} {} 0", x.vertices().len(), x.simplices().len()).unwrap();
    for v in x.vertices() {
        let c: Vec<String> = v.coords().iter().map(|c| format!("{c:?}")).collect();
        writeln!(out, "{}", c.join(" ")).unwrap();
    }
    for s in x.simplices() {
        let idx: Vec<String> = s.vertices.iter().map(|i| i.to_string()).collect();
        writeln!(out, "{} {}", idx.len(), idx.join(" ")).unwrap();
    }
    out
}

pub fn from_off(text: &str) -> Result<SimplicialSet> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap())
        .flat_map(str::split_whitespace);
    let bad = |what: &str| Error::Parse(format!("OFF: {what}"));
    let header = tokens.next().ok_or_else(|| bad("empty file"))?;
    let n = match header {
        "OFF" => 3,
        "nOFF" => tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("missing dimension"))?,
        _ => return Err(bad("missing OFF header")),
    };
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(what))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let _ne = next_usize("edge count")?;
    let mut rest = tokens;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let c: Vec<f64> = (0..n)
            .map(|_| {
                rest.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad("bad coordinate"))
            })
            .collect::<Result<_>>()?;
        vertices.push(Point::try_new(c)?);
    }
    let mut simplices = Vec::with_capacity(nf);
    for _ in 0..nf {
        let k: usize = rest
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("bad face size"))?;
        let idx: Vec<usize> = (0..k)
            .map(|_| {
                rest.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad("bad face index"))
            })
            .collect::<Result<_>>()?;
        simplices.push(Simplex::new(idx));
    }
    SimplicialSet::from_parts(n, vertices, simplices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn json_round_trip_keeps_tags() {
        let mut c = shapes::circle(&[0.1, 0.2, 0.3], 0.7, 9, (0, 2));
        c.simplices_mut()[2].tags.insert(Tag::Exceptional);
        c.simplices_mut()[4].tags.insert(Tag::OriginWall(1));
        let back = from_json(&to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn obj_and_off_round_trip() {
        let c = shapes::circle(&[0.0, 0.0, 0.0], 1.0 / 3.0, 7, (0, 1));
        let back = from_obj(&to_obj(&c).unwrap()).unwrap();
        assert_eq!(back.vertices(), c.vertices());
        let back = from_off(&to_off(&c)).unwrap();
        assert_eq!(back.vertices(), c.vertices());
        let sq = shapes::square(&[0.0, 0.0], 0.1);
        let back = from_off(&to_off(&sq)).unwrap();
        assert_eq!(back.ambient_dim(), 2);
        assert_eq!(back.simplices().len(), 2);
    }

    #[test]
    fn malformed_json() {
        assert!(from_json("{\"n\": 2,").is_err());
        assert!(from_json(r#"{"n":2,"dim":1,"vertices":[[0,0]],"simplices":[[0,3]]}"#).is_err());
    }
}
