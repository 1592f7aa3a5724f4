//! JSON documents for matroids, fans and maps.
//!
//! Matroid:
//! `{"schema": "matroid/v1", "ground": n, "kind": "matrix" | "bases" | "circuits", "field": "Q" | "GF(p)", "data": ...}`.
//! For `matrix`, `data` is a list of rows of canonical entry strings and
//! `field` is required; for `bases` and `circuits` it is a list of integer
//! lists and `field` is omitted. `schema` may be omitted on input.
//!
//! Fan: `{"schema": "fan/v1", "n": n, "lineality_dim": d, "rays": [[ints]], "cones": [{"rays", "chains", "bases"}]}`.
//!
//! Map: `{"schema": "map/v1", "n": n, "matrix": [[ints]], "chart": bool, "transpose": bool, "lambda": any}`.
//! With `chart` the matrix is `(n-1) x (n-1)` and is lifted by
//! [`IntegerLinearMap::from_chart`]. `lambda` is carried but never used.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::endo::IntegerLinearMap;
use crate::error::{Error, Result};
use crate::fan::{Fan, FanCone};
use crate::linalg::{ExactMatrix, FieldKind};
use crate::matroid::Matroid;
use crate::subset::{GroundSet, Limits, Subset};
use crate::tropical::QuotientVector;

pub const MATROID_SCHEMA: &str = "matroid/v1";
pub const FAN_SCHEMA: &str = "fan/v1";
pub const MAP_SCHEMA: &str = "map/v1";

fn check_schema(found: &Option<String>, expected: &str) -> Result<()> {
    match found {
        Some(s) if s != expected => Err(Error::Parse(format!("expected schema {expected:?}, found {s:?}"))),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidData {
    Matrix(ExactMatrix),
    Bases(Vec<Subset>),
    Circuits(Vec<Subset>),
}

/// A parsed matroid file; [`MatroidDoc::to_matroid`] builds the matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidDoc {
    pub ground: usize,
    pub data: MatroidData,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatroid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    ground: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    data: Value,
}

impl MatroidDoc {
    pub fn matrix(m: ExactMatrix) -> Self {
        MatroidDoc { ground: m.ncols(), data: MatroidData::Matrix(m) }
    }

    pub fn bases(m: &Matroid) -> Self {
        MatroidDoc { ground: m.size(), data: MatroidData::Bases(m.bases().to_vec()) }
    }

    pub fn to_matroid(&self, limits: Limits) -> Result<Matroid> {
        let ground = GroundSet::with_limits(self.ground, limits)?;
        match &self.data {
            MatroidData::Matrix(a) => Matroid::from_matrix_with(a, limits),
            MatroidData::Bases(b) => Matroid::from_bases(ground, b.iter().copied()),
            MatroidData::Circuits(c) => Matroid::from_circuits(ground, c.iter().copied()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawMatroid = serde_json::from_str(text)?;
        check_schema(&raw.schema, MATROID_SCHEMA)?;
        let data = match raw.kind.as_str() {
            "matrix" => {
                let field: FieldKind = raw.field.as_deref().ok_or_else(|| Error::Parse("matrix input needs a \"field\"".into()))?.parse()?;
                let rows: Vec<Vec<String>> = serde_json::from_value(raw.data)?;
                let m = ExactMatrix::from_strings(field, &rows)?;
                if m.ncols() != raw.ground {
                    return Err(Error::DimensionMismatch(format!("ground is {} but the matrix has {} columns", raw.ground, m.ncols())));
                }
                MatroidData::Matrix(m)
            }
            kind @ ("bases" | "circuits") => {
                if raw.field.is_some() {
                    return Err(Error::Parse(format!("\"field\" is only meaningful for matrix input, not {kind}")));
                }
                let sets: Vec<Subset> = serde_json::from_value(raw.data)?;
                if kind == "bases" {
                    MatroidData::Bases(sets)
                } else {
                    MatroidData::Circuits(sets)
                }
            }
            other => return Err(Error::Parse(format!("unknown matroid kind {other:?}"))),
        };
        Ok(MatroidDoc { ground: raw.ground, data })
    }

    pub fn to_json(&self) -> String {
        let (kind, field, data) = match &self.data {
            MatroidData::Matrix(m) => ("matrix", Some(m.field().to_string()), serde_json::to_value(m.to_strings())),
            MatroidData::Bases(b) => ("bases", None, serde_json::to_value(b)),
            MatroidData::Circuits(c) => ("circuits", None, serde_json::to_value(c)),
        };
        let raw = RawMatroid {
            schema: Some(MATROID_SCHEMA.into()),
            ground: self.ground,
            kind: kind.into(),
            field,
            data: data.expect("plain data serializes"),
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    n: usize,
    lineality_dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<RawCone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    rays: Vec<usize>,
    chains: Vec<Vec<Subset>>,
    bases: Vec<Subset>,
}

/// Recovers `F` from the normalized class of `v_F`: the coordinates take two
/// values and `F` is where the larger one is attained.
fn flat_of_ray(ray: &[i64]) -> Result<Subset> {
    let max = *ray.iter().max().ok_or_else(|| Error::Parse("empty ray".into()))?;
    let min = *ray.iter().min().expect("nonempty");
    if max - min != 1 || ray[0] != 0 || ray.iter().any(|&x| x != max && x != min) {
        return Err(Error::Parse(format!("{ray:?} is not a normalized flat ray")));
    }
    Ok((0..ray.len()).filter(|&i| ray[i] == max).collect())
}

pub fn fan_to_json(fan: &Fan) -> String {
    let rays = fan
        .ray_vectors()
        .iter()
        .map(|v: &QuotientVector| v.to_i64().expect("flat rays are integral"))
        .collect();
    let cones = fan.cones.iter().map(|c| RawCone { rays: c.rays.clone(), chains: c.chains.clone(), bases: c.bases.clone() }).collect();
    let raw = RawFan { schema: Some(FAN_SCHEMA.into()), n: fan.size, lineality_dim: fan.lineality_dim, rays, cones };
    serde_json::to_string(&raw).expect("plain data serializes")
}

pub fn fan_from_json(text: &str) -> Result<Fan> {
    let raw: RawFan = serde_json::from_str(text)?;
    check_schema(&raw.schema, FAN_SCHEMA)?;
    let mut ray_flats = Vec::with_capacity(raw.rays.len());
    for r in &raw.rays {
        if r.len() != raw.n {
            return Err(Error::DimensionMismatch(format!("ray {r:?} does not have {} coordinates", raw.n)));
        }
        ray_flats.push(flat_of_ray(r)?);
    }
    let cones = raw
        .cones
        .into_iter()
        .map(|c| {
            if let Some(&bad) = c.rays.iter().find(|&&i| i >= ray_flats.len()) {
                return Err(Error::Parse(format!("cone refers to missing ray {bad}")));
            }
            Ok(FanCone { rays: c.rays, chains: c.chains, bases: c.bases })
        })
        .collect::<Result<_>>()?;
    Ok(Fan { size: raw.n, lineality_dim: raw.lineality_dim, ray_flats, cones })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub chart: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transpose: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Value>,
}

impl MapDoc {
    pub fn from_map(a: &IntegerLinearMap) -> Self {
        MapDoc { schema: Some(MAP_SCHEMA.into()), n: a.size(), matrix: a.matrix().to_vec(), chart: false, transpose: false, lambda: None }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: MapDoc = serde_json::from_str(text)?;
        check_schema(&doc.schema, MAP_SCHEMA)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn to_map(&self) -> Result<IntegerLinearMap> {
        let expected = if self.chart { self.n.saturating_sub(1) } else { self.n };
        if self.matrix.len() != expected || self.matrix.iter().any(|r| r.len() != expected) {
            return Err(Error::DimensionMismatch(format!("expected a {expected}x{expected} matrix for n = {}", self.n)));
        }
        if self.chart {
            IntegerLinearMap::from_chart(&self.matrix, self.transpose)
        } else if self.transpose {
            let t = (0..self.n).map(|i| (0..self.n).map(|j| self.matrix[j][i]).collect()).collect();
            IntegerLinearMap::new(t)
        } else {
            IntegerLinearMap::new(self.matrix.clone())
        }
    }
}
