//! Input parsers and JSON report builders.
//!
//! Inputs:
//! * distance CSV: first row is the point identifiers in total order, then one
//!   row per point (optionally led by its identifier); entries are numbers or `inf`.
//! * points CSV: `id,x1,x2,...` per row, optional header row.
//! * neighborhood JSON: `{points, neighbors: {x: [y..]}, weights?: {x: [w..]}}`.
//! * inclusion CSV: `x_id,y_id` per row.
//!
//! Every JSON object is built from `serde_json::Map`, which keeps keys sorted.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::dist::ExtDist;
use crate::epmetric::EpMetric;
use crate::error::{Error, Result};
use crate::injection::Injection;
use crate::neighborhood::NeighborhoodSystem;
use crate::partition::Partition;
use crate::rips::{BettiReport, Filtration};
use crate::scalar::Scalar;
use crate::stability::InterleavingCertificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointMetric {
    Euclidean,
    Manhattan,
}

fn csv_rows(text: &str) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Format(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

pub fn parse_distance_csv<S: Scalar>(text: &str) -> Result<EpMetric<S>> {
    let rows = csv_rows(text)?;
    let Some((header, body)) = rows.split_first() else {
        return Err(Error::Format("distance matrix file is empty".into()));
    };
    let points = header.clone();
    let n = points.len();
    let mut matrix = Vec::with_capacity(n);
    for (i, row) in body.iter().enumerate() {
        let entries = match row.len() {
            len if len == n => row.as_slice(),
            len if len == n + 1 && i < n && row[0] == points[i] => &row[1..],
            len => {
                return Err(Error::Format(format!("row {} has {len} entries, expected {n}", i + 2)));
            }
        };
        let parsed = entries
            .iter()
            .map(|e| ExtDist::parse(e).map_err(|_| Error::Format(format!("bad distance `{e}` in row {}", i + 2))))
            .collect::<Result<Vec<_>>>()?;
        matrix.push(parsed);
    }
    EpMetric::new(points, matrix)
}

pub fn parse_points_csv<S: Scalar>(text: &str, metric: PointMetric) -> Result<EpMetric<S>> {
    let rows = csv_rows(text)?;
    let mut ids = Vec::new();
    let mut coords: Vec<Vec<S>> = Vec::new();
    for (line, row) in rows.iter().enumerate() {
        let parsed: std::result::Result<Vec<S>, _> = row[1..].iter().map(|c| S::parse(c)).collect();
        match parsed {
            Ok(c) => {
                ids.push(row[0].clone());
                coords.push(c);
            }
            Err(_) if line == 0 && row[1..].iter().all(|c| ExtDist::<S>::parse(c).is_err()) => {}
            Err(_) => {
                return Err(Error::Format(format!(
                    "row {} of the points file has a non-finite or non-numeric coordinate",
                    line + 1
                )))
            }
        }
    }
    if let Some(dim) = coords.first().map(Vec::len) {
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::Format("points have different dimensions".into()));
        }
    }
    if metric == PointMetric::Euclidean && S::zero().sqrt().is_none() {
        return Err(Error::Parameter(format!(
            "euclidean distances are not available in {} mode; use manhattan",
            S::MODE
        )));
    }
    EpMetric::from_fn(ids, |i, j| {
        let diffs = coords[i].iter().zip(&coords[j]).map(|(a, b)| {
            let d = a.sub(b);
            if d.is_negative_value() {
                S::zero().sub(&d)
            } else {
                d
            }
        });
        let d = match metric {
            PointMetric::Manhattan => diffs.fold(S::zero(), |acc, d| acc.add(&d)),
            PointMetric::Euclidean => diffs
                .fold(S::zero(), |acc, d| acc.add(&d.mul(&d)))
                .sqrt()
                .expect("float mode"),
        };
        ExtDist::Finite(d)
    })
}

fn json_scalar<S: Scalar>(value: &Value) -> Result<S> {
    match value {
        Value::Number(n) => S::parse(&n.to_string()),
        Value::String(s) => S::parse(s),
        other => Err(Error::Format(format!("expected a number, found {other}"))),
    }
}

/// Neighborhood system from JSON; `weights` may be absent.
pub fn parse_neighborhood_json<S: Scalar>(text: &str) -> Result<NeighborhoodSystem<S>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let points: Vec<String> = value
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing `points` array".into()))?
        .iter()
        .map(|p| match p {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(Error::Format(format!("bad point identifier {other}"))),
        })
        .collect::<Result<_>>()?;
    let index = |id: &str| {
        points
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::Format(format!("unknown point `{id}`")))
    };
    let neighbors_obj = value
        .get("neighbors")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing `neighbors` object".into()))?;
    for key in neighbors_obj.keys() {
        index(key)?;
    }
    let mut neighbors = Vec::with_capacity(points.len());
    for p in &points {
        let list = match neighbors_obj.get(p) {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => index(s),
                    Value::Number(n) => index(&n.to_string()),
                    other => Err(Error::Format(format!("bad neighbor {other}"))),
                })
                .collect::<Result<Vec<_>>>()?,
            Some(other) => return Err(Error::Format(format!("neighbors of `{p}` must be a list, found {other}"))),
        };
        neighbors.push(list);
    }
    let ns = NeighborhoodSystem::new(points.clone(), neighbors)?;
    let Some(weights_value) = value.get("weights") else {
        return Ok(ns);
    };
    let weights_obj = weights_value
        .as_object()
        .ok_or_else(|| Error::Format("`weights` must be an object".into()))?;
    let mut weights = Vec::with_capacity(points.len());
    for (x, p) in points.iter().enumerate() {
        let list = match weights_obj.get(p) {
            None if ns.neighbors(x).is_empty() => Vec::new(),
            None => return Err(Error::Format(format!("missing weights for `{p}`"))),
            Some(Value::Array(items)) => items.iter().map(json_scalar).collect::<Result<Vec<S>>>()?,
            Some(other) => return Err(Error::Format(format!("weights of `{p}` must be a list, found {other}"))),
        };
        weights.push(list);
    }
    ns.with_weights(weights)
}

/// Two-column CSV `x_id,y_id` mapping source identifiers into target identifiers.
pub fn parse_inclusion_csv(text: &str, source: &[String], target: &[String]) -> Result<Injection> {
    let mut map = vec![None; source.len()];
    for row in csv_rows(text)? {
        if row.len() != 2 {
            return Err(Error::Format(format!("inclusion rows need two columns, got {row:?}")));
        }
        let Some(x) = source.iter().position(|p| *p == row[0]) else {
            if map.iter().all(Option::is_none) && !target.contains(&row[1]) {
                continue; // header
            }
            return Err(Error::Format(format!("unknown source point `{}`", row[0])));
        };
        let y = target
            .iter()
            .position(|p| *p == row[1])
            .ok_or_else(|| Error::Format(format!("unknown target point `{}`", row[1])))?;
        if map[x].replace(y).is_some() {
            return Err(Error::Format(format!("source point `{}` mapped twice", row[0])));
        }
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| Error::Format(format!("source point `{}` has no image", source[x]))))
        .collect::<Result<Vec<_>>>()?;
    Injection::new(map, target.len())
}

pub fn neighborhood_json<S: Scalar>(ns: &NeighborhoodSystem<S>) -> Value {
    let ids = ns.points();
    let mut neighbors = Map::new();
    let mut weights = Map::new();
    for (x, id) in ids.iter().enumerate() {
        neighbors.insert(id.clone(), ns.neighbors(x).iter().map(|&y| Value::from(ids[y].clone())).collect());
        if let Some(ws) = ns.weights(x) {
            weights.insert(id.clone(), ws.iter().map(Scalar::to_json).collect());
        }
    }
    let mut out = Map::new();
    out.insert("points".into(), ids.iter().cloned().map(Value::from).collect());
    out.insert("neighbors".into(), Value::Object(neighbors));
    if ns.is_weighted() {
        out.insert("weights".into(), Value::Object(weights));
    }
    Value::Object(out)
}

fn blocks_json(p: &Partition, ids: &[String]) -> Value {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&i| Value::from(ids[i].clone())).collect::<Vec<Value>>())
        .collect()
}

pub fn dendrogram_json<S: Scalar>(f: &Filtration<S>, ids: &[String]) -> Value {
    let merges: Vec<Value> = f
        .merges()
        .iter()
        .map(|m| json!({ "s": m.scale.to_json(), "absorbed": ids[m.absorbed], "into": ids[m.into] }))
        .collect();
    let roots: Vec<Value> = f.roots().into_iter().map(|r| Value::from(ids[r].clone())).collect();
    json!({ "merges": merges, "roots": roots })
}

pub fn partition_report_json<S: Scalar>(f: &Filtration<S>, ids: &[String]) -> Value {
    let mut levels: Vec<Value> = vec![json!({ "s": S::zero().to_json(), "blocks": blocks_json(&f.partition_at(&ExtDist::zero()), ids) })];
    for (c, p) in f.critical_values().iter().zip(f.partitions()) {
        if c.is_zero_value() {
            levels[0] = json!({ "s": c.to_json(), "blocks": blocks_json(p, ids) });
        } else {
            levels.push(json!({ "s": c.to_json(), "blocks": blocks_json(p, ids) }));
        }
    }
    Value::Array(levels)
}

pub fn betti_json(b: &BettiReport) -> Value {
    json!({
        "chi": b.euler_characteristic,
        "betti": b.betti,
        "cells": b.cell_counts,
        "complete": b.complete,
    })
}

/// Certificate with source and target points named by identifier.
pub fn certificate_json<S: Scalar>(
    cert: &InterleavingCertificate<S>,
    source_ids: &[String],
    target_ids: &[String],
) -> Value {
    let mut theta = Map::new();
    for (y, &x) in cert.theta.iter().enumerate() {
        if let (Some(y_id), Some(x_id)) = (target_ids.get(y), source_ids.get(x)) {
            theta.insert(y_id.clone(), Value::from(x_id.clone()));
        }
    }
    let scales: Vec<Value> = cert
        .scales
        .iter()
        .map(|rec| {
            let mut obj = Map::new();
            obj.insert("s".into(), rec.scale.to_json());
            obj.insert("shifted".into(), rec.shifted.to_json());
            obj.insert("upper_ok".into(), rec.upper_ok().into());
            obj.insert("lower_ok".into(), rec.lower_ok().into());
            obj.insert("transport_ok".into(), rec.transport_ok.into());
            obj.insert("diagonal_ok".into(), (rec.colimit.diagonal_ok && rec.wedge.is_none_or(|w| w.diagonal_ok)).into());
            if let Some(e) = rec.excision_ok {
                obj.insert("excision_ok".into(), e.into());
            }
            Value::Object(obj)
        })
        .collect();
    let violations: Vec<Value> = cert
        .bound_violations
        .iter()
        .map(|&(a, b)| json!([target_ids[a], target_ids[b]]))
        .collect();
    json!({
        "m": cert.m.to_json(),
        "r": cert.r.to_json(),
        "theta": theta,
        "scales": scales,
        "retraction_ok": cert.retraction_ok,
        "radius_ok": cert.radius_ok,
        "bound_violations": violations,
        "radius_convention": cert.radius_convention,
        "verdict": cert.verdict(),
    })
}

/// Pretty JSON with a trailing newline, written to a sibling temp file and renamed.
pub fn write_json_atomic(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}
