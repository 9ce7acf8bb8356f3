//! File formats.
//!
//! Instances and solutions are JSON documents with 1-based buyer/seller
//! indices. Weights are written in shortest round-trip decimal form, so
//! `read(write(x)) == x` bit for bit.
//!
//! Instance:
//!
//! ```json
//! {"version":1,"m":2,"n":2,
//!  "edges":[[1,1,4.0],[2,2,3.0]],
//!  "degree_bounds":{"buyers":[1,1],"sellers":[1,1]},
//!  "conflicts":[[1,2]],
//!  "conflict_thresholds":[0,0]}
//! ```
//!
//! Solution:
//!
//! ```json
//! {"version":1,"method":"greedy","selected":[[1,1]],"objective":4.0}
//! ```
//!
//! with optional `elapsed_s` and `upper_bound` fields.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{validate, Edge, Instance, Method, Recommendation};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct BoundsDoc {
    buyers: Vec<u32>,
    sellers: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    version: u32,
    m: usize,
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    degree_bounds: BoundsDoc,
    conflicts: Vec<(usize, usize)>,
    conflict_thresholds: Vec<u32>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: Option<u32>,
}

fn check_version(text: &str) -> Result<()> {
    let probe: VersionProbe =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    match probe.version {
        Some(FORMAT_VERSION) => Ok(()),
        Some(found) => Err(Error::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        }),
        None => Err(Error::Malformed("missing `version` field".into())),
    }
}

// File index 0 has no 0-based counterpart; map it past any valid range so
// validation reports it.
fn from_file_index(i: usize) -> usize {
    i.wrapping_sub(1)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let doc = InstanceDoc {
        version: FORMAT_VERSION,
        m: inst.buyers,
        n: inst.sellers,
        edges: inst
            .edges
            .iter()
            .map(|e| (e.buyer + 1, e.seller + 1, e.weight))
            .collect(),
        degree_bounds: BoundsDoc {
            buyers: inst.buyer_bounds.clone(),
            sellers: inst.seller_bounds.clone(),
        },
        conflicts: inst.conflicts.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
        conflict_thresholds: inst.thresholds.clone(),
    };
    let mut s = serde_json::to_string(&doc).expect("instance serializes");
    s.push('\n');
    s
}

/// Parses an instance document without checking instance invariants.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    check_version(text)?;
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(Instance {
        buyers: doc.m,
        sellers: doc.n,
        edges: doc
            .edges
            .into_iter()
            .map(|(b, s, w)| Edge {
                buyer: from_file_index(b),
                seller: from_file_index(s),
                weight: w,
            })
            .collect(),
        buyer_bounds: doc.degree_bounds.buyers,
        seller_bounds: doc.degree_bounds.sellers,
        conflicts: doc
            .conflicts
            .into_iter()
            .map(|(a, b)| (from_file_index(a), from_file_index(b)))
            .collect(),
        thresholds: doc.conflict_thresholds,
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads an instance and rejects it if any invariant is broken.
pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let inst = read_instance_unchecked(path)?;
    let v = validate(&inst);
    if v.is_empty() {
        Ok(inst)
    } else {
        Err(Error::Invalid(v))
    }
}

/// Reads an instance, leaving invariant checks to the caller.
pub fn read_instance_unchecked(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&read_text(path.as_ref())?)
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, instance_to_json(inst)).map_err(|e| Error::io(path, e))
}

/// On-disk form of a solution. `selected` holds 1-based `(buyer, seller)`
/// pairs in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub version: u32,
    pub method: Method,
    pub selected: Vec<(usize, usize)>,
    pub objective: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<f64>,
}

impl SolutionDoc {
    pub fn new(inst: &Instance, rec: &Recommendation, method: Method) -> Self {
        SolutionDoc {
            version: FORMAT_VERSION,
            method,
            selected: rec
                .pairs(inst)
                .into_iter()
                .map(|(b, s)| (b + 1, s + 1))
                .collect(),
            objective: rec.objective(),
            elapsed_s: None,
            upper_bound: None,
        }
    }

    /// Maps the pairs back onto edges of `inst` and checks the stated
    /// objective against the recomputed one (relative tolerance 1e-9).
    pub fn to_recommendation(&self, inst: &Instance) -> Result<Recommendation> {
        let lookup: std::collections::HashMap<(usize, usize), usize> = inst
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| ((e.buyer, e.seller), k))
            .collect();
        let mut ids = Vec::with_capacity(self.selected.len());
        for &(b, s) in &self.selected {
            let key = (from_file_index(b), from_file_index(s));
            match lookup.get(&key) {
                Some(&k) => ids.push(k),
                None => return Err(Error::UnknownEdge { buyer: b, seller: s }),
            }
        }
        let rec = Recommendation::from_edges(inst, ids);
        let recomputed = rec.objective();
        if (recomputed - self.objective).abs() > 1e-9 * recomputed.abs().max(1.0) {
            return Err(Error::ObjectiveMismatch {
                stated: self.objective,
                recomputed,
            });
        }
        Ok(rec)
    }
}

pub fn solution_to_json(doc: &SolutionDoc) -> String {
    let mut s = serde_json::to_string(doc).expect("solution serializes");
    s.push('\n');
    s
}

pub fn solution_from_json(text: &str) -> Result<SolutionDoc> {
    check_version(text)?;
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn write_solution(doc: &SolutionDoc, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, solution_to_json(doc)).map_err(|e| Error::io(path, e))
}

/// Reads a solution for `inst`, returning both the selection and the raw
/// document.
pub fn read_solution(
    path: impl AsRef<Path>,
    inst: &Instance,
) -> Result<(Recommendation, SolutionDoc)> {
    let doc = solution_from_json(&read_text(path.as_ref())?)?;
    let rec = doc.to_recommendation(inst)?;
    Ok((rec, doc))
}

/// Values the CSV formats cannot express.
#[derive(Debug, Clone, Default)]
pub struct CsvDefaults {
    pub buyer_bound: u32,
    pub seller_bound: u32,
    pub threshold: u32,
    /// Overrides the buyer count, otherwise the largest index seen.
    pub buyers: Option<usize>,
    pub sellers: Option<usize>,
}

fn csv_records(
    src: &mut dyn Read,
    columns: usize,
) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(src);
    let mut out = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Malformed(e.to_string()))?;
        if rec.len() != columns {
            return Err(Error::Malformed(format!(
                "csv row {}: expected {columns} columns, found {}",
                row + 1,
                rec.len()
            )));
        }
        // A leading row whose first cell is not an index is a header.
        if row == 0 && rec[0].parse::<usize>().is_err() {
            continue;
        }
        out.push(rec);
    }
    Ok(out)
}

fn parse_cell<T: std::str::FromStr>(rec: &csv::StringRecord, col: usize) -> Result<T> {
    rec[col]
        .parse()
        .map_err(|_| Error::Malformed(format!("csv: cannot parse `{}`", &rec[col])))
}

/// Builds an instance from a `buyer,seller,weight` edge CSV and an optional
/// `buyer,buyer` conflict CSV (1-based indices, optional header row).
pub fn import_csv(
    edges: &mut dyn Read,
    conflicts: Option<&mut dyn Read>,
    defaults: &CsvDefaults,
) -> Result<Instance> {
    let mut edge_list = Vec::new();
    for rec in csv_records(edges, 3)? {
        edge_list.push(Edge {
            buyer: from_file_index(parse_cell(&rec, 0)?),
            seller: from_file_index(parse_cell(&rec, 1)?),
            weight: parse_cell(&rec, 2)?,
        });
    }
    let mut pairs = Vec::new();
    if let Some(src) = conflicts {
        for rec in csv_records(src, 2)? {
            let a: usize = from_file_index(parse_cell(&rec, 0)?);
            let b: usize = from_file_index(parse_cell(&rec, 1)?);
            pairs.push((a.min(b), a.max(b)));
        }
    }
    let max_buyer = edge_list
        .iter()
        .map(|e| e.buyer.wrapping_add(1))
        .chain(pairs.iter().map(|p| p.1.wrapping_add(1)))
        .max()
        .unwrap_or(0);
    let max_seller = edge_list
        .iter()
        .map(|e| e.seller.wrapping_add(1))
        .max()
        .unwrap_or(0);
    let buyers = defaults.buyers.unwrap_or(max_buyer);
    let sellers = defaults.sellers.unwrap_or(max_seller);
    let inst = Instance {
        buyers,
        sellers,
        edges: edge_list,
        buyer_bounds: vec![defaults.buyer_bound; buyers],
        seller_bounds: vec![defaults.seller_bound; sellers],
        conflicts: pairs,
        thresholds: vec![defaults.threshold; sellers],
    };
    let v = validate(&inst);
    if v.is_empty() {
        Ok(inst)
    } else {
        Err(Error::Invalid(v))
    }
}
