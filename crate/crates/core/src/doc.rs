//! JSON document schemas.
//!
//! Matroids travel as `{ "elements": [...], "by": "...", "data": ... }`
//! with sources `rank_table`, `bases`, `circuits`, `graph` and `matrix`;
//! oriented matroids as `{ "elements": [...], "by": "...", "data": [...] }`
//! with sources `topes`, `signed_circuits`, `covectors` and `matrix`; and
//! phase structures as `{ "matroid": ..., "mode": ..., "facets": [ {
//! "chain": [[labels]], "space": { "basepoint": "0101", "basis": [...] } }
//! ] }`. Parsing is split in two stages: a syntactic stage that reports
//! schema violations with JSON-pointer paths, and a semantic build stage
//! whose failures carry the library's own error types.

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fan::{ChainOfFlats, FanMode};
use crate::gf2::AffineSubspaceGF2;
use crate::matroid::{parse_rational, Matroid, MatroidError};
use crate::oriented::{OrientedError, OrientedMatroid, SignVector, SignedCircuitSet};
use crate::phase::{PhaseError, RealPhaseStructure};

/// A schema violation, with the JSON pointer of the offending value.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("{pointer}: {message}")]
pub struct DocError {
    pub pointer: String,
    pub message: String,
}

fn err(pointer: &str, message: impl Into<String>) -> DocError {
    DocError {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn as_object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>, DocError> {
    v.as_object().ok_or_else(|| err(at, "expected an object"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, DocError> {
    obj.get(key)
        .ok_or_else(|| err(&format!("{at}/{key}"), "missing field"))
}

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, DocError> {
    v.as_array().ok_or_else(|| err(at, "expected an array"))
}

fn as_str<'a>(v: &'a Value, at: &str) -> Result<&'a str, DocError> {
    v.as_str().ok_or_else(|| err(at, "expected a string"))
}

// ----------------------------------------------------------------------
// Matroid documents
// ----------------------------------------------------------------------

/// Syntactically parsed matroid document; built separately.
#[derive(Debug, Clone)]
pub struct MatroidInput {
    pub labels: Vec<String>,
    pub source: MatroidSource,
}

#[derive(Debug, Clone)]
pub enum MatroidSource {
    RankTable(Vec<u8>),
    Bases(Vec<u32>),
    Circuits(Vec<u32>),
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Matrix(Vec<Vec<BigRational>>),
}

impl MatroidInput {
    pub fn build(&self) -> Result<Matroid, MatroidError> {
        match &self.source {
            MatroidSource::RankTable(t) => Matroid::from_rank_table(self.labels.clone(), t.clone()),
            MatroidSource::Bases(b) => Matroid::from_bases(self.labels.clone(), b),
            MatroidSource::Circuits(c) => Matroid::from_circuits(self.labels.clone(), c),
            MatroidSource::Graph { vertices, edges } => {
                Matroid::from_graph(self.labels.clone(), *vertices, edges)
            }
            MatroidSource::Matrix(m) => Matroid::from_matrix(self.labels.clone(), m),
        }
    }
}

fn parse_labels(obj: &Map<String, Value>, at: &str) -> Result<Vec<String>, DocError> {
    let arr = as_array(get(obj, "elements", at)?, &format!("{at}/elements"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            let at = format!("{at}/elements/{i}");
            Ok(match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(err(&at, "label must be a string or number")),
            })
        })
        .collect()
}

fn label_mask(labels: &[String], names: &[Value], at: &str) -> Result<u32, DocError> {
    let mut mask = 0u32;
    for (i, v) in names.iter().enumerate() {
        let here = format!("{at}/{i}");
        let name = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(err(&here, "label must be a string or number")),
        };
        let idx = labels
            .iter()
            .position(|l| *l == name)
            .ok_or_else(|| err(&here, format!("unknown element label {name:?}")))?;
        mask |= 1 << idx;
    }
    Ok(mask)
}

pub fn parse_matroid(v: &Value, at: &str) -> Result<MatroidInput, DocError> {
    let obj = as_object(v, at)?;
    let labels = parse_labels(obj, at)?;
    let by = as_str(get(obj, "by", at)?, &format!("{at}/by"))?;
    let data = get(obj, "data", at)?;
    let data_at = format!("{at}/data");
    let source = match by {
        "rank_table" => {
            let arr = as_array(data, &data_at)?;
            let table = arr
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_u64()
                        .map(|x| x as u8)
                        .ok_or_else(|| err(&format!("{data_at}/{i}"), "expected a rank"))
                })
                .collect::<Result<Vec<u8>, _>>()?;
            MatroidSource::RankTable(table)
        }
        "bases" | "circuits" => {
            let arr = as_array(data, &data_at)?;
            let masks = arr
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let here = format!("{data_at}/{i}");
                    label_mask(&labels, as_array(v, &here)?, &here)
                })
                .collect::<Result<Vec<u32>, _>>()?;
            if by == "bases" {
                MatroidSource::Bases(masks)
            } else {
                MatroidSource::Circuits(masks)
            }
        }
        "graph" => {
            let gobj = as_object(data, &data_at)?;
            let vertices = get(gobj, "vertices", &data_at)?
                .as_u64()
                .ok_or_else(|| err(&format!("{data_at}/vertices"), "expected a count"))?
                as usize;
            let earr = as_array(get(gobj, "edges", &data_at)?, &format!("{data_at}/edges"))?;
            let edges = earr
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let here = format!("{data_at}/edges/{i}");
                    let pair = as_array(v, &here)?;
                    if pair.len() != 2 {
                        return Err(err(&here, "edge must be a pair of vertex indices"));
                    }
                    let u = pair[0]
                        .as_u64()
                        .ok_or_else(|| err(&here, "expected vertex index"))?;
                    let w = pair[1]
                        .as_u64()
                        .ok_or_else(|| err(&here, "expected vertex index"))?;
                    Ok((u as usize, w as usize))
                })
                .collect::<Result<Vec<_>, _>>()?;
            MatroidSource::Graph { vertices, edges }
        }
        "matrix" => MatroidSource::Matrix(parse_matrix(data, &data_at)?),
        other => {
            return Err(err(
                &format!("{at}/by"),
                format!("unknown matroid source {other:?}"),
            ))
        }
    };
    Ok(MatroidInput { labels, source })
}

fn parse_matrix(v: &Value, at: &str) -> Result<Vec<Vec<BigRational>>, DocError> {
    as_array(v, at)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let row_at = format!("{at}/{r}");
            as_array(row, &row_at)?
                .iter()
                .enumerate()
                .map(|(c, entry)| {
                    let here = format!("{row_at}/{c}");
                    let text = match entry {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(err(&here, "expected an integer or \"p/q\" string")),
                    };
                    parse_rational(&text)
                        .ok_or_else(|| err(&here, format!("cannot parse rational {text:?}")))
                })
                .collect()
        })
        .collect()
}

/// Emits a matroid as a rank-table document (the canonical exact form).
pub fn matroid_to_value(m: &Matroid) -> Value {
    json!({
        "elements": m.labels(),
        "by": "rank_table",
        "data": m.rank_table(),
    })
}

// ----------------------------------------------------------------------
// Oriented matroid documents
// ----------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OmInput {
    pub labels: Vec<String>,
    pub source: OmSource,
}

#[derive(Debug, Clone)]
pub enum OmSource {
    Topes(Vec<SignVector>),
    SignedCircuits(Vec<SignVector>),
    Covectors(Vec<SignVector>),
    Matrix(Vec<Vec<BigRational>>),
}

impl OmInput {
    pub fn build(&self) -> Result<OrientedMatroid, OrientedError> {
        match &self.source {
            OmSource::Topes(t) => OrientedMatroid::from_topes(self.labels.clone(), t),
            OmSource::SignedCircuits(c) => {
                let set = SignedCircuitSet::normalize(self.labels.len(), c);
                OrientedMatroid::from_signed_circuits(self.labels.clone(), &set)
            }
            OmSource::Covectors(c) => {
                OrientedMatroid::from_covectors(self.labels.clone(), c.iter().copied())
            }
            OmSource::Matrix(m) => OrientedMatroid::from_matrix(self.labels.clone(), m),
        }
    }
}

pub fn parse_om(v: &Value, at: &str) -> Result<OmInput, DocError> {
    let obj = as_object(v, at)?;
    let labels = parse_labels(obj, at)?;
    let by = as_str(get(obj, "by", at)?, &format!("{at}/by"))?;
    let data = get(obj, "data", at)?;
    let data_at = format!("{at}/data");
    let parse_signs = |v: &Value| -> Result<Vec<SignVector>, DocError> {
        as_array(v, &data_at)?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let here = format!("{data_at}/{i}");
                let text = as_str(s, &here)?;
                if text.len() != labels.len() {
                    return Err(err(&here, "sign vector length must match the ground set"));
                }
                text.parse::<SignVector>()
                    .map_err(|e| err(&here, e.to_string()))
            })
            .collect()
    };
    let source = match by {
        "topes" => OmSource::Topes(parse_signs(data)?),
        "signed_circuits" => OmSource::SignedCircuits(parse_signs(data)?),
        "covectors" => OmSource::Covectors(parse_signs(data)?),
        "matrix" => OmSource::Matrix(parse_matrix(data, &data_at)?),
        other => {
            return Err(err(
                &format!("{at}/by"),
                format!("unknown oriented source {other:?}"),
            ))
        }
    };
    Ok(OmInput { labels, source })
}

/// Emits an oriented matroid as a covector document.
pub fn om_to_value(om: &OrientedMatroid) -> Value {
    let covectors: Vec<String> = om.covectors().iter().map(|c| c.to_string()).collect();
    json!({
        "elements": om.labels(),
        "by": "covectors",
        "data": covectors,
    })
}

/// Emits an oriented matroid as a signed-circuit document (canonical
/// representatives, sorted by support).
pub fn om_to_signed_circuits_value(om: &OrientedMatroid) -> Value {
    signed_circuits_to_value(om.labels(), &om.signed_circuits())
}

pub fn signed_circuits_to_value(labels: &[String], set: &SignedCircuitSet) -> Value {
    let circuits: Vec<String> = set.circuits.iter().map(|c| c.to_string()).collect();
    json!({
        "elements": labels,
        "by": "signed_circuits",
        "data": circuits,
    })
}

// ----------------------------------------------------------------------
// Phase structure documents
// ----------------------------------------------------------------------

/// Parses a phase document. Schema errors carry pointers; semantic errors
/// (bad matroid, non-facet chains, partial assignments) come from the
/// build stage in the inner result.
pub fn parse_phase(
    v: &Value,
    at: &str,
) -> Result<Result<RealPhaseStructure, PhaseError>, DocError> {
    let obj = as_object(v, at)?;
    let matroid_input = parse_matroid(get(obj, "matroid", at)?, &format!("{at}/matroid"))?;
    let matroid = match matroid_input.build() {
        Ok(m) => m,
        Err(e) => return Ok(Err(e.into())),
    };
    let mode = parse_mode(get(obj, "mode", at)?, &format!("{at}/mode"))?;
    let facets_at = format!("{at}/facets");
    let facets = as_array(get(obj, "facets", at)?, &facets_at)?;
    let mut assignment = Vec::with_capacity(facets.len());
    for (i, entry) in facets.iter().enumerate() {
        let here = format!("{facets_at}/{i}");
        let eobj = as_object(entry, &here)?;
        let chain_at = format!("{here}/chain");
        let chain_arr = as_array(get(eobj, "chain", &here)?, &chain_at)?;
        let mut flats = Vec::with_capacity(chain_arr.len());
        for (j, flat) in chain_arr.iter().enumerate() {
            let flat_at = format!("{chain_at}/{j}");
            flats.push(label_mask(
                &matroid_input.labels,
                as_array(flat, &flat_at)?,
                &flat_at,
            )?);
        }
        let chain = match ChainOfFlats::new(&matroid, flats) {
            Ok(c) => c,
            Err(e) => return Ok(Err(e.into())),
        };
        let space = parse_space(get(eobj, "space", &here)?, &format!("{here}/space"))?;
        assignment.push((chain, space));
    }
    Ok(RealPhaseStructure::from_assignment(
        matroid, mode, assignment,
    ))
}

pub fn parse_mode(v: &Value, at: &str) -> Result<FanMode, DocError> {
    match as_str(v, at)? {
        "affine" => Ok(FanMode::Affine),
        "projective" => Ok(FanMode::Projective),
        other => Err(err(
            at,
            format!("mode must be \"affine\" or \"projective\", got {other:?}"),
        )),
    }
}

pub fn parse_space(v: &Value, at: &str) -> Result<AffineSubspaceGF2, DocError> {
    let obj = as_object(v, at)?;
    let base_at = format!("{at}/basepoint");
    let base = as_str(get(obj, "basepoint", at)?, &base_at)?
        .parse()
        .map_err(|e: crate::gf2::Gf2Error| err(&base_at, e.to_string()))?;
    let basis_at = format!("{at}/basis");
    let basis = as_array(get(obj, "basis", at)?, &basis_at)?
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let here = format!("{basis_at}/{i}");
            as_str(g, &here)?
                .parse()
                .map_err(|e: crate::gf2::Gf2Error| err(&here, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    AffineSubspaceGF2::canonicalize(base, &basis).map_err(|e| err(at, e.to_string()))
}

pub fn space_to_value(space: &AffineSubspaceGF2) -> Value {
    json!({
        "basepoint": space.base().to_string(),
        "basis": space.tangent().basis().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    })
}

pub fn chain_to_value(m: &Matroid, chain: &ChainOfFlats) -> Value {
    let flats: Vec<Vec<String>> = chain
        .flats()
        .iter()
        .map(|&f| {
            (0..m.n())
                .filter(|&i| f >> i & 1 == 1)
                .map(|i| m.labels()[i].clone())
                .collect()
        })
        .collect();
    json!(flats)
}

pub fn mode_to_value(mode: FanMode) -> Value {
    match mode {
        FanMode::Affine => json!("affine"),
        FanMode::Projective => json!("projective"),
    }
}

/// Canonical serialization of a phase structure: the carrier as a rank
/// table, facets in canonical order, spaces in the mode representation.
pub fn phase_to_value(e: &RealPhaseStructure) -> Value {
    let m = e.matroid();
    let facets: Vec<Value> = e
        .facets()
        .iter()
        .map(|chain| {
            json!({
                "chain": chain_to_value(m, chain),
                "space": space_to_value(&e.display_space(chain).unwrap()),
            })
        })
        .collect();
    json!({
        "matroid": matroid_to_value(m),
        "mode": mode_to_value(e.mode()),
        "facets": facets,
    })
}

pub fn ordering_to_value(m: &Matroid, ordering: &crate::phase::NecklaceOrdering) -> Value {
    Value::Array(
        ordering
            .facets()
            .iter()
            .map(|c| chain_to_value(m, c))
            .collect(),
    )
}
