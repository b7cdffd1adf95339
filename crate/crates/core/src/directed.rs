//! Balancing-induced orientations, edge weights, vertex orders and the
//! polynomial `phi`.
//!
//! Given a tree and a chamber, imposing the balancing condition at every
//! vertex determines a unique positive weight and direction for each
//! internal edge: the edge with split `(I, I^c)` carries the form
//! `±sum_{i in I} x_i`, signed so that its value at the chamber sample is
//! positive, and points from the side with positive net inflow to the
//! other side.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::chamber::Chamber;
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, LinearForm};
use crate::trees::{mask_display, LabeledTree, TreeStructure};
use crate::Int;

/// A tree together with its balancing data in a fixed chamber.
#[derive(Clone, Debug)]
pub struct DirectedTree {
    tree: LabeledTree,
    structure: TreeStructure,
    /// Per internal edge: (tail vertex, head vertex).
    directions: Vec<(usize, usize)>,
    /// Per internal edge: weight form, positive at the chamber sample.
    weight_forms: Vec<LinearForm<Int>>,
    /// Weight values at the sample; strictly positive.
    weight_values: Vec<Int>,
    /// Transitive reachability between vertices along directed edges.
    reach: Vec<Vec<bool>>,
}

impl DirectedTree {
    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn structure(&self) -> &TreeStructure {
        &self.structure
    }

    pub fn num_vertices(&self) -> usize {
        self.structure.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.structure.edges.len()
    }

    /// (tail, head) of edge `e`.
    pub fn direction(&self, e: usize) -> (usize, usize) {
        self.directions[e]
    }

    pub fn weight_form(&self, e: usize) -> &LinearForm<Int> {
        &self.weight_forms[e]
    }

    pub fn weight_value(&self, e: usize) -> &Int {
        &self.weight_values[e]
    }

    pub fn weight_values(&self) -> &[Int] {
        &self.weight_values
    }

    /// Does a directed path run from `u` to `v`?
    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.reach[u][v]
    }

    /// Edges at `v` as (edge index, outgoing?).
    pub fn edges_at(&self, v: usize) -> Vec<(usize, bool)> {
        self.structure.vertices[v]
            .edge_indices()
            .into_iter()
            .map(|e| (e, self.directions[e].0 == v))
            .collect()
    }

    /// Number of linear extensions of the orientation-induced partial
    /// order restricted to the vertices outside `moving`.
    pub fn count_orderings(&self, moving: &BTreeSet<usize>) -> u64 {
        let fixed: Vec<usize> = (0..self.num_vertices())
            .filter(|v| !moving.contains(v))
            .collect();
        let k = fixed.len();
        if k == 0 {
            return 1;
        }
        assert!(k <= 16, "ordering count limited to 16 fixed vertices");
        // less[i][j]: fixed[i] must precede fixed[j]
        let less: Vec<Vec<bool>> = fixed
            .iter()
            .map(|&u| fixed.iter().map(|&v| u != v && self.reach[u][v]).collect())
            .collect();
        let mut dp = vec![0u64; 1 << k];
        dp[0] = 1;
        for s in 1usize..(1 << k) {
            for i in 0..k {
                if s & (1 << i) == 0 {
                    continue;
                }
                // i can come last in s if no j in s must come after i
                let mut ok = true;
                for j in 0..k {
                    if s & (1 << j) != 0 && less[i][j] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    dp[s] += dp[s & !(1 << i)];
                }
            }
        }
        dp[(1 << k) - 1]
    }

    /// All total orders of the non-moving vertices compatible with the
    /// orientation, in lexicographic vertex order.
    pub fn compatible_orders(&self, moving: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let fixed: Vec<usize> = (0..self.num_vertices())
            .filter(|v| !moving.contains(v))
            .collect();
        let mut out = Vec::new();
        let mut order = Vec::with_capacity(fixed.len());
        let mut used = vec![false; fixed.len()];
        self.orders_dfs(&fixed, &mut used, &mut order, &mut out);
        out
    }

    fn orders_dfs(
        &self,
        fixed: &[usize],
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if order.len() == fixed.len() {
            out.push(order.clone());
            return;
        }
        for (i, &v) in fixed.iter().enumerate() {
            if used[i] {
                continue;
            }
            // v may come next if no unused fixed vertex must precede it
            let ok = fixed
                .iter()
                .enumerate()
                .all(|(j, &u)| used[j] || u == v || !self.reach[u][v]);
            if ok {
                used[i] = true;
                order.push(v);
                self.orders_dfs(fixed, used, order, out);
                order.pop();
                used[i] = false;
            }
        }
    }

    /// The product of the weight forms of all internal edges.
    pub fn phi(&self) -> IntPolynomial<Int> {
        let mut p = IntPolynomial::one(self.tree.n());
        for f in &self.weight_forms {
            p = p.mul_linear(f);
        }
        p
    }

    /// Product of the weight values at the sample.
    pub fn phi_value(&self) -> Int {
        self.weight_values
            .iter()
            .fold(Int::from(1), |a, b| a * b.clone())
    }
}

/// Orient and weight a tree in the given chamber.
pub fn balance(tree: &LabeledTree, chamber: &Chamber) -> Result<DirectedTree> {
    if tree.n() != chamber.n() {
        return Err(Error::InvalidArgument(
            "tree and chamber end counts differ".into(),
        ));
    }
    let structure = tree.structure();
    balance_with_values(tree, structure, |mask| {
        LinearForm::subset_sum(tree.n(), mask).eval(chamber.x())
    })
}

/// Generic balancing driver: `split_value` gives the exact value of
/// `sum_{i in S} x_i` for the canonical split mask.  Used both by
/// [`balance`] and by the cover types with contracted ends.
pub fn balance_with_values(
    tree: &LabeledTree,
    structure: TreeStructure,
    split_value: impl Fn(u32) -> Int,
) -> Result<DirectedTree> {
    Ok(balance_directed(tree, structure, |mask| {
        let v = split_value(mask);
        let toward_outside = v.is_positive();
        (toward_outside, if toward_outside { v } else { -v })
    })?
    .0)
}

/// Balancing where the orientation and the magnitudes come from different
/// data: `edge_data(mask)` yields `(toward_outside, signed_value)` where
/// the direction flag says the edge points from the split side to the
/// complement side and `signed_value` is the edge value measured along
/// that direction (negative exactly for a special edge evaluated across
/// its wall).  Returns the tree (weights are the absolute values) and the
/// per-edge signed values.
pub fn balance_directed(
    tree: &LabeledTree,
    structure: TreeStructure,
    edge_data: impl Fn(u32) -> (bool, Int),
) -> Result<(DirectedTree, Vec<Int>)> {
    let n = tree.n();
    let mut directions = Vec::with_capacity(structure.edges.len());
    let mut weight_forms = Vec::with_capacity(structure.edges.len());
    let mut weight_values = Vec::with_capacity(structure.edges.len());
    let mut signed_values = Vec::with_capacity(structure.edges.len());
    for e in &structure.edges {
        let form = LinearForm::subset_sum(n, e.split);
        let (toward_outside, signed) = edge_data(e.split);
        if signed.is_zero() {
            return Err(Error::OnWall {
                wall: format!("W{}", mask_display(e.split)),
            });
        }
        if toward_outside {
            directions.push((e.inside, e.outside));
            weight_forms.push(form);
        } else {
            directions.push((e.outside, e.inside));
            weight_forms.push(form.neg());
        }
        weight_values.push(signed.abs());
        signed_values.push(signed);
    }
    let nv = structure.vertices.len();
    let mut reach = vec![vec![false; nv]; nv];
    for &(t, h) in &directions {
        reach[t][h] = true;
    }
    for m in 0..nv {
        for a in 0..nv {
            if reach[a][m] {
                for b in 0..nv {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    Ok((
        DirectedTree {
            tree: tree.clone(),
            structure,
            directions,
            weight_forms,
            weight_values,
            reach,
        },
        signed_values,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::{chamber_of, RamificationVector};
    use crate::trees::enumerate_trees;

    fn chamber(x: &[i64]) -> Chamber {
        chamber_of(&RamificationVector::from_i64(x).unwrap()).unwrap()
    }

    #[test]
    fn star_is_vacuously_balanced() {
        let t = LabeledTree::star(3);
        let c = chamber(&[2, 1, -3]);
        let dt = balance(&t, &c).unwrap();
        assert_eq!(dt.num_edges(), 0);
        assert_eq!(dt.phi(), IntPolynomial::one(3));
    }

    #[test]
    fn cut_edge_weight_and_direction() {
        let c = chamber(&[3, 1, -2, -2]);
        let t12 = LabeledTree::new(4, [0b0011]).unwrap();
        let dt = balance(&t12, &c).unwrap();
        assert_eq!(dt.weight_value(0), &Int::from(4));
        // oriented from the {1,2}-vertex to the {3,4}-vertex
        let s = dt.structure();
        let v12 = s.vertex_of_end(0);
        assert_eq!(dt.direction(0).0, v12);
        let t13 = LabeledTree::new(4, [0b0101]).unwrap();
        let dt13 = balance(&t13, &c).unwrap();
        assert_eq!(dt13.weight_value(0), &Int::from(1));
    }

    #[test]
    fn phi_caterpillar() {
        let c = chamber(&[5, 3, -2, -2, -4]);
        let t = LabeledTree::new(5, [0b00011, 0b00111]).unwrap();
        let dt = balance(&t, &c).unwrap();
        let expected = LinearForm::subset_sum(5, 0b00011)
            .to_polynomial()
            .mul(&LinearForm::subset_sum(5, 0b00111).to_polynomial());
        assert_eq!(dt.phi(), expected);
        assert_eq!(dt.phi_value(), Int::from(48));
        assert_eq!(dt.phi().homogeneous_degree(), Some(2));
    }

    #[test]
    fn ordering_counts() {
        let c = chamber(&[5, 3, -2, -2, -4]);
        // caterpillar is totally ordered by the orientation
        let t = LabeledTree::new(5, [0b00011, 0b00111]).unwrap();
        let dt = balance(&t, &c).unwrap();
        assert_eq!(dt.count_orderings(&BTreeSet::new()), 1);
        let all: BTreeSet<usize> = (0..dt.num_vertices()).collect();
        assert_eq!(dt.count_orderings(&all), 1);
    }

    #[test]
    fn ordering_count_matches_enumeration() {
        let c = chamber(&[5, 3, -2, -2, -4]);
        for t in enumerate_trees(5, 3).unwrap() {
            let dt = balance(&t, &c).unwrap();
            for moving_mask in 0u32..(1 << dt.num_vertices()) {
                let moving: BTreeSet<usize> = (0..dt.num_vertices())
                    .filter(|v| moving_mask & (1 << v) != 0)
                    .collect();
                let counted = dt.count_orderings(&moving);
                let listed = dt.compatible_orders(&moving).len() as u64;
                assert_eq!(counted, listed);
            }
        }
    }

    #[test]
    fn balanced_weight_is_absolute_subset_sum() {
        let samples = [
            vec![3i64, 1, -2, -2],
            vec![5, 3, -2, -2, -4],
            vec![9, 2, -3, -4, -4],
        ];
        for x in &samples {
            let c = chamber(x);
            let n = x.len();
            for t in enumerate_trees(n, n - 2).unwrap() {
                let dt = balance(&t, &c).unwrap();
                for (e, edge) in dt.structure().edges.iter().enumerate() {
                    let raw: i64 = crate::trees::mask_to_labels(edge.split)
                        .iter()
                        .map(|&i| x[i])
                        .sum();
                    assert_eq!(dt.weight_value(e), &Int::from(raw.abs()));
                }
            }
        }
    }
}
