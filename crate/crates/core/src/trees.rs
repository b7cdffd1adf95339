//! Trees on labeled ends, encoded as compatible split systems.
//!
//! A tree with `n` labeled ends and internal vertices of valence at least
//! three is determined by the set of bipartitions of the end set induced by
//! its internal edges.  Storing that split system in a canonical form (the
//! side not containing the largest label, sorted) makes label-fixing
//! isomorphism a structural equality, with no graph isomorphism search.
//!
//! Ends are 0-based `0..n` internally; the CLI and serializers translate to
//! the 1-based labels used everywhere in output.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub fn full_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// Canonical representative of a split: the side not containing the
/// largest end label.
pub fn normalize_split(n: usize, mask: u32) -> u32 {
    if mask & (1 << (n - 1)) != 0 {
        full_mask(n) & !mask
    } else {
        mask
    }
}

pub fn is_valid_split(n: usize, mask: u32) -> bool {
    let c = mask.count_ones() as usize;
    c >= 2 && c <= n - 2 && (mask & !full_mask(n)) == 0
}

/// Two splits are compatible when one of the four pairwise intersections
/// of their sides is empty.  For canonical representatives (both avoiding
/// the top label) this reduces to nesting or disjointness.
pub fn compatible(a: u32, b: u32) -> bool {
    let i = a & b;
    i == 0 || i == a || i == b
}

pub fn mask_to_labels(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn labels_to_mask(labels: &[usize]) -> u32 {
    labels.iter().fold(0u32, |m, &i| m | (1 << i))
}

/// Render a mask with 1-based labels, e.g. `{1,3}`.
pub fn mask_display(mask: u32) -> String {
    let inner = mask_to_labels(mask)
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{}}}", inner)
}

/// A tree on `n` labeled ends given by its canonical split system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    n: usize,
    splits: Vec<u32>,
}

/// One item incident to a vertex: either an end or an internal edge,
/// together with the set of ends reachable through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    End(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub items: Vec<(Item, u32)>,
}

impl Vertex {
    pub fn valence(&self) -> usize {
        self.items.len()
    }
    pub fn ends(&self) -> Vec<usize> {
        self.items
            .iter()
            .filter_map(|(it, _)| match it {
                Item::End(i) => Some(*i),
                _ => None,
            })
            .collect()
    }
    pub fn edge_indices(&self) -> Vec<usize> {
        self.items
            .iter()
            .filter_map(|(it, _)| match it {
                Item::Edge(e) => Some(*e),
                _ => None,
            })
            .collect()
    }
    /// Deterministic vertex signature: the sorted reachable-end masks of
    /// its items; distinct vertices of a tree always differ here.
    pub fn signature(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.items.iter().map(|(_, m)| *m).collect();
        s.sort_unstable();
        s
    }
}

/// An internal edge: the canonical split, and the vertices on the split
/// side (`inside`) and on the complement side (`outside`).
#[derive(Clone, Debug)]
pub struct Edge {
    pub split: u32,
    pub inside: usize,
    pub outside: usize,
}

/// The expanded vertex/edge structure of a [`LabeledTree`]; construction
/// order is deterministic, so vertex indices are reproducible.
#[derive(Clone, Debug)]
pub struct TreeStructure {
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl LabeledTree {
    /// Build from splits in any representative form; validates pairwise
    /// compatibility.
    pub fn new(n: usize, splits: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n < 3 || n > 16 {
            return Err(Error::InvalidArgument(format!(
                "end count {} out of range 3..=16",
                n
            )));
        }
        let mut set = BTreeSet::new();
        for raw in splits {
            let s = normalize_split(n, raw);
            if !is_valid_split(n, s) {
                return Err(Error::InvalidArgument(format!(
                    "invalid split {} for n={}",
                    mask_display(raw),
                    n
                )));
            }
            set.insert(s);
        }
        let splits: Vec<u32> = set.into_iter().collect();
        for (i, &a) in splits.iter().enumerate() {
            for &b in &splits[i + 1..] {
                if !compatible(a, b) {
                    return Err(Error::InvalidArgument(format!(
                        "incompatible splits {} and {}",
                        mask_display(a),
                        mask_display(b)
                    )));
                }
            }
        }
        Ok(LabeledTree { n, splits })
    }

    pub fn star(n: usize) -> Self {
        LabeledTree { n, splits: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[u32] {
        &self.splits
    }

    pub fn num_internal_edges(&self) -> usize {
        self.splits.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.splits.len() + 1
    }

    pub fn is_trivalent(&self) -> bool {
        self.num_vertices() == self.n - 2
    }

    pub fn has_split(&self, raw: u32) -> bool {
        self.splits.binary_search(&normalize_split(self.n, raw)).is_ok()
    }

    /// Does `other` arise from `self` by contracting internal edges?
    pub fn is_contraction_of(&self, other: &LabeledTree) -> bool {
        self.n == other.n && self.splits.iter().all(|s| other.has_split(*s))
    }

    /// Expand the split system into vertices and edges.
    pub fn structure(&self) -> TreeStructure {
        let n = self.n;
        let mut vertices = vec![Vertex {
            items: (0..n).map(|i| (Item::End(i), 1u32 << i)).collect(),
        }];
        let mut edges: Vec<Edge> = Vec::new();
        for &s in &self.splits {
            let mut host = None;
            for (vi, v) in vertices.iter().enumerate() {
                let mut inside = 0usize;
                let mut outside = 0usize;
                let mut clean = true;
                for (_, m) in &v.items {
                    if m & s == *m {
                        inside += 1;
                    } else if m & s == 0 {
                        outside += 1;
                    } else {
                        clean = false;
                        break;
                    }
                }
                if clean && inside > 0 && outside > 0 {
                    host = Some(vi);
                    break;
                }
            }
            let vi = host.expect("compatible split system must admit an insertion vertex");
            let eid = edges.len();
            let (inside_items, outside_items): (Vec<_>, Vec<_>) = vertices[vi]
                .items
                .drain(..)
                .partition(|(_, m)| m & s == *m);
            let new_vi = vertices.len();
            // Edge items that migrate to the new vertex keep their edge
            // records pointing at the old host; repoint them.
            for (it, _) in &inside_items {
                if let Item::Edge(e) = it {
                    if edges[*e].inside == vi {
                        edges[*e].inside = new_vi;
                    } else if edges[*e].outside == vi {
                        edges[*e].outside = new_vi;
                    }
                }
            }
            let mut inside_vertex = Vertex {
                items: inside_items,
            };
            inside_vertex
                .items
                .push((Item::Edge(eid), full_mask(n) & !s));
            vertices.push(inside_vertex);
            vertices[vi].items = outside_items;
            vertices[vi].items.push((Item::Edge(eid), s));
            edges.push(Edge {
                split: s,
                inside: new_vi,
                outside: vi,
            });
        }
        TreeStructure { n, vertices, edges }
    }

    /// Valences of all vertices.
    pub fn valences(&self) -> Vec<usize> {
        self.structure()
            .vertices
            .iter()
            .map(|v| v.valence())
            .collect()
    }

    /// Contract a set of internal edges (by split).
    pub fn contract(&self, remove: &BTreeSet<u32>) -> LabeledTree {
        LabeledTree {
            n: self.n,
            splits: self
                .splits
                .iter()
                .copied()
                .filter(|s| !remove.contains(s))
                .collect(),
        }
    }

    /// Relabel ends by `perm` (new label of end `i` is `perm[i]`) and
    /// re-canonicalize.
    pub fn relabel(&self, perm: &[usize]) -> LabeledTree {
        assert_eq!(perm.len(), self.n);
        let mut splits: Vec<u32> = self
            .splits
            .iter()
            .map(|&s| {
                let mut m = 0u32;
                for i in mask_to_labels(s) {
                    m |= 1 << perm[i];
                }
                normalize_split(self.n, m)
            })
            .collect();
        splits.sort_unstable();
        LabeledTree { n: self.n, splits }
    }
}

impl TreeStructure {
    pub fn vertex_of_end(&self, end: usize) -> usize {
        self.vertices
            .iter()
            .position(|v| v.items.iter().any(|(it, _)| *it == Item::End(end)))
            .expect("end must be attached")
    }

    /// The two vertex endpoints of edge `e` as `(inside, outside)`.
    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        (self.edges[e].inside, self.edges[e].outside)
    }

    /// Vertex path between two vertices (inclusive).
    pub fn vertex_path(&self, from: usize, to: usize) -> Vec<usize> {
        // DFS on the (small) tree.
        let adj: Vec<Vec<(usize, usize)>> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(vi, v)| {
                v.edge_indices()
                    .into_iter()
                    .map(|e| {
                        let (a, b) = self.edge_vertices(e);
                        (e, if a == vi { b } else { a })
                    })
                    .collect()
            })
            .collect();
        let mut stack = vec![vec![from]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if last == to {
                return path;
            }
            for &(_, nb) in &adj[last] {
                if path.len() < 2 || path[path.len() - 2] != nb {
                    let mut np = path.clone();
                    np.push(nb);
                    stack.push(np);
                }
            }
        }
        unreachable!("tree is connected")
    }

    /// Edges along the vertex path, each flagged with `true` when
    /// traversed from `outside` to `inside`.
    pub fn edge_path(&self, from: usize, to: usize) -> Vec<(usize, bool)> {
        let vp = self.vertex_path(from, to);
        let mut out = Vec::new();
        for w in vp.windows(2) {
            let e = self.vertices[w[0]]
                .edge_indices()
                .into_iter()
                .find(|&e| {
                    let (a, b) = self.edge_vertices(e);
                    (a == w[0] && b == w[1]) || (a == w[1] && b == w[0])
                })
                .unwrap();
            out.push((e, self.edges[e].inside == w[1]));
        }
        out
    }
}

/// All isomorphism classes (fixing end labels) of trees with `n` labeled
/// ends and exactly `v` internal vertices, every valence at least three.
/// Results come in canonical sorted order.
pub fn enumerate_trees(n: usize, v: usize) -> Result<Vec<LabeledTree>> {
    if n < 3 || n > 16 {
        return Err(Error::InvalidArgument(format!(
            "end count {} out of range 3..=16",
            n
        )));
    }
    if v < 1 || v > n - 2 {
        return Err(Error::InvalidArgument(format!(
            "vertex count {} out of range 1..={}",
            v,
            n - 2
        )));
    }
    let candidates: Vec<u32> = (0..(1u32 << (n - 1)))
        .filter(|&m| is_valid_split(n, m))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::with_capacity(v - 1);
    fn dfs(
        candidates: &[u32],
        start: usize,
        need: usize,
        n: usize,
        chosen: &mut Vec<u32>,
        out: &mut Vec<LabeledTree>,
    ) {
        if need == 0 {
            let t = LabeledTree {
                n,
                splits: chosen.clone(),
            };
            if t.valences().iter().all(|&val| val >= 3) {
                out.push(t);
            }
            return;
        }
        for i in start..candidates.len() {
            if candidates.len() - i < need {
                break;
            }
            let c = candidates[i];
            if chosen.iter().all(|&s| compatible(s, c)) {
                chosen.push(c);
                dfs(candidates, i + 1, need - 1, n, chosen, out);
                chosen.pop();
            }
        }
    }
    dfs(&candidates, 0, v - 1, n, &mut chosen, &mut out);
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial(n: usize) -> usize {
        // (2n-5)!!
        let mut p = 1usize;
        let mut k = 2 * n as i64 - 5;
        while k > 1 {
            p *= k as usize;
            k -= 2;
        }
        p
    }

    #[test]
    fn star_tree_is_unique() {
        let ts = enumerate_trees(3, 1).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].num_internal_edges(), 0);
        assert_eq!(enumerate_trees(5, 1).unwrap().len(), 1);
    }

    #[test]
    fn trivalent_counts_match_double_factorial() {
        for n in 3..=7 {
            let ts = enumerate_trees(n, n - 2).unwrap();
            assert_eq!(ts.len(), double_factorial(n), "n={}", n);
            assert!(ts.iter().all(|t| t.is_trivalent()));
        }
    }

    #[test]
    fn intermediate_vertex_counts() {
        // Exactly two internal vertices means exactly one split.
        assert_eq!(enumerate_trees(4, 2).unwrap().len(), 3);
        assert_eq!(enumerate_trees(5, 2).unwrap().len(), 10);
        // n=6: one split: (2^6-2-12)/2 = 25
        assert_eq!(enumerate_trees(6, 2).unwrap().len(), 25);
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(enumerate_trees(2, 1).is_err());
        assert!(enumerate_trees(5, 0).is_err());
        assert!(enumerate_trees(5, 4).is_err());
    }

    #[test]
    fn canonical_encoding_is_injective_and_stable() {
        let ts = enumerate_trees(5, 3).unwrap();
        for (i, a) in ts.iter().enumerate() {
            for b in &ts[i + 1..] {
                assert_ne!(a, b);
            }
        }
        // relabel and restore is the identity
        let perm = vec![3usize, 0, 4, 1, 2];
        let mut inv = vec![0usize; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        for t in &ts {
            assert_eq!(&t.relabel(&perm).relabel(&inv), t);
        }
    }

    #[test]
    fn structure_roundtrip() {
        let t = LabeledTree::new(5, [0b00011, 0b00111]).unwrap();
        let s = t.structure();
        assert_eq!(s.vertices.len(), 3);
        assert_eq!(s.edges.len(), 2);
        let vals = t.valences();
        assert_eq!(vals.iter().sum::<usize>(), 2 * 2 + 5);
        // caterpillar: ends 1,2 at one vertex, 3 in the middle, 4,5 at the end
        let v12 = s.vertex_of_end(0);
        assert_eq!(v12, s.vertex_of_end(1));
        let v45 = s.vertex_of_end(3);
        assert_eq!(v45, s.vertex_of_end(4));
        let path = s.vertex_path(v12, v45);
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn compatibility_edge_cases() {
        assert!(compatible(0b0011, 0b0111));
        assert!(compatible(0b0011, 0b1100));
        assert!(!compatible(0b0011, 0b0110));
    }
}
