//! Deterministic serialization: canonical JSON for cycles and reports,
//! DOT export for trees and curve skeletons.
//!
//! Integers and rationals are encoded as decimal strings so that the
//! interchange stays exact at any size; monomials are keyed by their
//! exponent tuple.  All maps are ordered, so output is byte-identical
//! across runs.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::CycleClass;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::trees::{mask_to_labels, LabeledTree};
use crate::tropical::{ImageVal, TropicalCell, TropicalHurwitzCycle};
use crate::{Int, Rat};

pub fn int_to_string(v: &Int) -> String {
    v.to_string()
}

pub fn int_from_string(s: &str) -> Result<Int> {
    Int::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad integer '{}': {}", s, e)))
}

pub fn rat_to_string(v: &Rat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    match s.split_once('/') {
        None => Ok(Rat::from_integer(int_from_string(s)?)),
        Some((p, q)) => {
            let num = int_from_string(p)?;
            let den = int_from_string(q)?;
            if den == Int::from(0) {
                return Err(Error::InvalidArgument("zero denominator".into()));
            }
            Ok(Rat::new(num, den))
        }
    }
}

fn split_to_labels(mask: u32) -> Vec<usize> {
    mask_to_labels(mask).into_iter().map(|i| i + 1).collect()
}

fn labels_to_split(labels: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    for &l in labels {
        if l == 0 || l > 16 {
            return Err(Error::InvalidArgument(format!("bad end label {}", l)));
        }
        mask |= 1 << (l - 1);
    }
    Ok(mask)
}

fn poly_to_map(p: &IntPolynomial<Int>) -> BTreeMap<String, String> {
    p.terms()
        .iter()
        .map(|(e, c)| {
            let key = e
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, int_to_string(c))
        })
        .collect()
}

fn poly_from_map(n: usize, m: &BTreeMap<String, String>) -> Result<IntPolynomial<Int>> {
    let mut terms = Vec::new();
    for (k, v) in m {
        let exps: Vec<u16> = k
            .split(',')
            .map(|s| {
                s.parse::<u16>()
                    .map_err(|e| Error::InvalidArgument(format!("bad exponent '{}': {}", s, e)))
            })
            .collect::<Result<_>>()?;
        if exps.len() != n {
            return Err(Error::InvalidArgument("exponent arity mismatch".into()));
        }
        terms.push((exps, int_from_string(v)?));
    }
    Ok(IntPolynomial::from_terms(n, terms))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ClassicalTermDoc {
    pub splits: Vec<Vec<usize>>,
    pub coeff: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCycleDoc {
    pub n: usize,
    pub k: usize,
    pub terms: Vec<ClassicalTermDoc>,
}

pub fn classical_to_doc(c: &CycleClass) -> ClassicalCycleDoc {
    ClassicalCycleDoc {
        n: c.n(),
        k: c.k(),
        terms: c
            .terms()
            .iter()
            .map(|(t, p)| ClassicalTermDoc {
                splits: t.splits().iter().map(|&s| split_to_labels(s)).collect(),
                coeff: poly_to_map(p),
            })
            .collect(),
    }
}

pub fn classical_from_doc(doc: &ClassicalCycleDoc) -> Result<CycleClass> {
    let mut out = CycleClass::zero(doc.n, doc.k);
    for term in &doc.terms {
        let splits: Vec<u32> = term
            .splits
            .iter()
            .map(|l| labels_to_split(l))
            .collect::<Result<_>>()?;
        let tree = LabeledTree::new(doc.n, splits)?;
        let coeff = poly_from_map(doc.n, &term.coeff)?;
        out.insert_term(tree, coeff)?;
    }
    Ok(out)
}

pub fn classical_to_json(c: &CycleClass) -> String {
    serde_json::to_string_pretty(&classical_to_doc(c)).expect("serializable")
}

pub fn classical_from_json(s: &str) -> Result<CycleClass> {
    let doc: ClassicalCycleDoc = serde_json::from_str(s)
        .map_err(|e| Error::InvalidArgument(format!("bad classical cycle json: {}", e)))?;
    classical_from_doc(&doc)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TropicalCellDoc {
    #[serde(rename = "type")]
    pub tree: Vec<Vec<usize>>,
    pub moving: Vec<usize>,
    pub order: Vec<usize>,
    pub weight: String,
    /// vertex index -> image value; moving vertices are absent.
    pub vertex_images: BTreeMap<String, String>,
    pub moving_vectors: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TropicalCycleDoc {
    pub n: usize,
    pub k: usize,
    pub x: Vec<String>,
    pub branch_points: Vec<String>,
    pub cells: Vec<TropicalCellDoc>,
}

fn cell_to_doc(cell: &TropicalCell) -> TropicalCellDoc {
    let mut vertex_images = BTreeMap::new();
    for (v, iv) in cell.config.images.iter().enumerate() {
        if let ImageVal::Pinned(p) = iv {
            vertex_images.insert(v.to_string(), rat_to_string(p));
        }
    }
    TropicalCellDoc {
        tree: cell
            .config
            .tree
            .splits()
            .iter()
            .map(|&s| split_to_labels(s))
            .collect(),
        moving: cell.moving.iter().copied().collect(),
        order: cell.order.clone(),
        weight: int_to_string(&cell.weight),
        vertex_images,
        moving_vectors: cell
            .moving_vectors
            .iter()
            .map(|v| v.iter().map(int_to_string).collect())
            .collect(),
    }
}

pub fn tropical_to_doc(cycle: &TropicalHurwitzCycle) -> TropicalCycleDoc {
    let mut cells: Vec<TropicalCellDoc> = cycle.cells.iter().map(cell_to_doc).collect();
    cells.sort_by(|a, b| (&a.tree, &a.moving, &a.order).cmp(&(&b.tree, &b.moving, &b.order)));
    TropicalCycleDoc {
        n: cycle.n,
        k: cycle.k,
        x: cycle.x.iter().map(int_to_string).collect(),
        branch_points: cycle
            .branch_values
            .iter()
            .filter(|p| !num_traits::Zero::is_zero(*p))
            .map(rat_to_string)
            .collect(),
        cells,
    }
}

pub fn tropical_to_json(cycle: &TropicalHurwitzCycle) -> String {
    serde_json::to_string_pretty(&tropical_to_doc(cycle)).expect("serializable")
}

/// Parse a tropical cycle document and rebuild the cycle it describes;
/// the rebuilt cycle must reproduce the document exactly.
pub fn tropical_from_json(s: &str) -> Result<TropicalHurwitzCycle> {
    let doc: TropicalCycleDoc = serde_json::from_str(s)
        .map_err(|e| Error::InvalidArgument(format!("bad tropical cycle json: {}", e)))?;
    let x = crate::chamber::RamificationVector::new(
        doc.x
            .iter()
            .map(|v| int_from_string(v))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let points = doc
        .branch_points
        .iter()
        .map(|p| rat_from_string(p))
        .collect::<Result<Vec<_>>>()?;
    let bp = crate::tropical::BranchPoints::new(points)?;
    let cycle = crate::tropical::build_tropical_cycle(&x, doc.k, &bp)?;
    let roundtrip = tropical_to_doc(&cycle);
    if roundtrip != doc {
        return Err(Error::Verification(
            "tropical cycle document does not match its rebuild".into(),
        ));
    }
    Ok(cycle)
}

/// DOT rendering of the trees of a classical cycle, one component per
/// stratum, edges labelled with their weight polynomials.
pub fn classical_to_dot(c: &CycleClass, chamber: &crate::chamber::Chamber) -> Result<String> {
    let mut out = String::from("graph classical_cycle {\n");
    for (ti, (tree, coeff)) in c.terms().iter().enumerate() {
        let dt = crate::directed::balance(tree, chamber)?;
        let s = dt.structure();
        out.push_str(&format!(
            "  subgraph cluster_{} {{\n    label=\"coeff: {}\";\n",
            ti, coeff
        ));
        for (vi, _) in s.vertices.iter().enumerate() {
            out.push_str(&format!("    t{}_v{} [shape=point];\n", ti, vi));
        }
        for end in 0..tree.n() {
            let v = s.vertex_of_end(end);
            out.push_str(&format!(
                "    t{}_e{} [shape=plaintext, label=\"{}\"];\n    t{}_e{} -- t{}_v{};\n",
                ti,
                end,
                end + 1,
                ti,
                end,
                ti,
                v
            ));
        }
        for (ei, _) in s.edges.iter().enumerate() {
            let (tail, head) = dt.direction(ei);
            out.push_str(&format!(
                "    t{}_v{} -- t{}_v{} [label=\"{}\"];\n",
                ti,
                tail,
                ti,
                head,
                dt.weight_form(ei)
            ));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    Ok(out)
}

/// DOT rendering of the zero- and one-dimensional faces of a tropical
/// cycle: vertices are points, one-cells become edges labelled with their
/// weights, unbounded directions get arrow stubs.
pub fn tropical_to_dot(cycle: &TropicalHurwitzCycle) -> String {
    let mut out = String::from("graph tropical_cycle {\n");
    if cycle.k == 0 {
        for (ci, cell) in cycle.cells.iter().enumerate() {
            out.push_str(&format!(
                "  p{} [shape=point, xlabel=\"w={}\"];\n",
                ci, cell.weight
            ));
        }
        out.push_str("}\n");
        return out;
    }
    let vertices = &cycle.faces[0];
    for (fi, face) in vertices.iter().enumerate() {
        let label: Vec<String> = face.geom.relint_point.iter().map(rat_to_string).collect();
        out.push_str(&format!(
            "  v{} [shape=point, xlabel=\"({})\"];\n",
            fi,
            label.join(",")
        ));
    }
    // one-cells: for a curve these are the cells themselves, otherwise the
    // dimension-one faces (unweighted)
    if cycle.k == 1 {
        let mut stub = 0usize;
        for cell in &cycle.cells {
            let ends: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|(_, f)| f.geom.vertices.iter().all(|v| cell_has_vertex(cell, v)))
                .map(|(i, _)| i)
                .collect();
            match ends.len() {
                2 => out.push_str(&format!(
                    "  v{} -- v{} [label=\"{}\"];\n",
                    ends[0], ends[1], cell.weight
                )),
                1 => {
                    out.push_str(&format!(
                        "  s{} [shape=none, label=\"\"];\n  v{} -- s{} [label=\"{}\", style=dashed];\n",
                        stub, ends[0], stub, cell.weight
                    ));
                    stub += 1;
                }
                _ => {}
            }
        }
    }
    out.push_str("}\n");
    out
}

fn cell_has_vertex(cell: &TropicalCell, v: &[Rat]) -> bool {
    cell.geom.vertices.iter().any(|w| w == v)
}
