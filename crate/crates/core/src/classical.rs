//! Classical Hurwitz cycles: polynomial-weighted formal sums of boundary
//! strata, the gluing product, and the wall-crossing formula.
//!
//! In a fixed chamber the k-dimensional Hurwitz cycle is
//! `sum_G m(G) phi(G) prod_v (val(v)-2) . Delta_G` over trees `G` with
//! `n` ends and `r - k` internal vertices; every coefficient is a
//! homogeneous polynomial of degree `n - 3 - k`.  Crossing the wall
//! `sum_{i in I} x_i = 0` changes the cycle by
//! `eps * sum_j C(r-k, |I|-1-j) H_j(x_I, -eps) ⊠ H_{k-j}(x_{I^c}, eps)`.

use std::collections::BTreeMap;

use crate::chamber::{chamber_of, check_adjacent, Chamber, RamificationVector, Wall};
use crate::directed::balance;
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, LinearForm};
use crate::scalar::binomial;
use crate::trees::{enumerate_trees, mask_to_labels, normalize_split, LabeledTree};
use crate::Int;

/// A formal sum of boundary strata with exact polynomial coefficients.
/// Tree keys are canonical, zero coefficients are pruned, so equality is
/// map equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    n: usize,
    k: usize,
    terms: BTreeMap<LabeledTree, IntPolynomial<Int>>,
}

impl CycleClass {
    pub fn zero(n: usize, k: usize) -> Self {
        CycleClass {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<LabeledTree, IntPolynomial<Int>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, tree: LabeledTree, coeff: IntPolynomial<Int>) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(tree) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&coeff);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Add a stratum with validation of the stratum dimension and the
    /// coefficient arity.
    pub fn insert_term(&mut self, tree: LabeledTree, coeff: IntPolynomial<Int>) -> Result<()> {
        if tree.n() != self.n || coeff.n() != self.n {
            return Err(Error::InvalidArgument("term arity mismatch".into()));
        }
        if tree.num_internal_edges() != self.n.saturating_sub(3 + self.k) {
            return Err(Error::InvalidArgument(format!(
                "stratum {:?} has the wrong codimension for k={}",
                tree.splits(),
                self.k
            )));
        }
        self.add_term(tree, coeff);
        Ok(())
    }

    pub fn add(&self, other: &CycleClass) -> CycleClass {
        assert_eq!((self.n, self.k), (other.n, other.k));
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CycleClass) -> CycleClass {
        assert_eq!((self.n, self.k), (other.n, other.k));
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Int) -> CycleClass {
        let mut out = CycleClass::zero(self.n, self.k);
        for (t, p) in &self.terms {
            out.add_term(t.clone(), p.scale(c));
        }
        out
    }

    pub fn mul_linear(&self, f: &LinearForm<Int>) -> CycleClass {
        let mut out = CycleClass::zero(self.n, self.k);
        for (t, p) in &self.terms {
            out.add_term(t.clone(), p.mul_linear(f));
        }
        out
    }

    /// Evaluate every coefficient at a lattice point.
    pub fn evaluate(&self, x: &[Int]) -> BTreeMap<LabeledTree, Int> {
        self.terms
            .iter()
            .map(|(t, p)| (t.clone(), p.eval(x)))
            .collect()
    }
}

/// The k-dimensional Hurwitz cycle in the given chamber.
pub fn hurwitz_cycle(chamber: &Chamber, k: usize) -> Result<CycleClass> {
    let n = chamber.n();
    if k + 3 > n {
        return Err(Error::InvalidArgument(format!(
            "dimension k={} out of range 0..={}",
            k,
            n - 3
        )));
    }
    let r = n - 2;
    let mut out = CycleClass::zero(n, k);
    for tree in enumerate_trees(n, r - k)? {
        let dt = balance(&tree, chamber)?;
        let m = dt.count_orderings(&Default::default());
        if m == 0 {
            continue;
        }
        let val_factor: Int = tree
            .valences()
            .iter()
            .map(|&v| Int::from(v as i64 - 2))
            .product();
        let coeff = dt.phi().scale(&(Int::from(m) * val_factor));
        out.add_term(tree, coeff);
    }
    Ok(out)
}

/// The double Hurwitz number `H_0(x)` under the marked-preimages
/// convention: the degree of the 0-dimensional Hurwitz cycle at `x`.
pub fn double_hurwitz_number(x: &RamificationVector) -> Result<Int> {
    let chamber = chamber_of(x)?;
    let cycle = hurwitz_cycle(&chamber, 0)?;
    Ok(cycle
        .evaluate(x.entries())
        .values()
        .fold(Int::from(0), |a, b| a + b))
}

/// End bookkeeping for the gluing product: where the non-distinguished
/// ends of each factor go in `0..n`, and the subset cut out by the glued
/// edge.  The distinguished end of each factor is always its
/// highest-numbered end.
#[derive(Clone, Debug)]
pub struct GluingSpec {
    pub left_labels: Vec<usize>,
    pub right_labels: Vec<usize>,
}

impl GluingSpec {
    /// Canonical spec for a wall: left factor carries the sorted labels of
    /// `I`, right factor the sorted labels of the complement.
    pub fn for_wall(wall: &Wall) -> GluingSpec {
        let n = wall.n();
        let left = mask_to_labels(wall.mask());
        let right: Vec<usize> = (0..n).filter(|i| wall.mask() & (1 << i) == 0).collect();
        GluingSpec {
            left_labels: left,
            right_labels: right,
        }
    }

    fn n(&self) -> usize {
        self.left_labels.len() + self.right_labels.len()
    }

    fn validate(&self, a: &CycleClass, b: &CycleClass) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &l in self.left_labels.iter().chain(&self.right_labels) {
            if l >= n || seen[l] {
                return Err(Error::InvalidArgument(
                    "gluing labels must partition the glued end set".into(),
                ));
            }
            seen[l] = true;
        }
        if a.n() != self.left_labels.len() + 1 || b.n() != self.right_labels.len() + 1 {
            return Err(Error::InvalidArgument(
                "factor arity does not match gluing spec".into(),
            ));
        }
        Ok(())
    }

    fn left_mask(&self) -> u32 {
        self.left_labels.iter().fold(0, |m, &i| m | (1 << i))
    }
}

fn translate_tree(
    tree: &LabeledTree,
    labels: &[usize],
    extra_side_mask: u32,
    n: usize,
) -> Vec<u32> {
    // Factor trees have their distinguished end as the highest label, so
    // canonical factor splits never contain it; map the remaining ends.
    tree.splits()
        .iter()
        .map(|&s| {
            let mut m = 0u32;
            for i in mask_to_labels(s) {
                m |= 1 << labels[i];
            }
            debug_assert_eq!(m & extra_side_mask, m);
            normalize_split(n, m)
        })
        .collect()
}

/// Push forward the product of two classes along the gluing of their
/// distinguished ends.  Coefficients multiply after substituting the end
/// relabeling; the distinguished variables become `-eps` resp. `eps`
/// where `eps` is the subset sum over the left labels.
pub fn boxtimes(a: &CycleClass, b: &CycleClass, spec: &GluingSpec) -> Result<CycleClass> {
    spec.validate(a, b)?;
    let n = spec.n();
    let left_mask = spec.left_mask();
    let eps = LinearForm::<Int>::subset_sum(n, left_mask);
    let mut a_images: Vec<LinearForm<Int>> = spec
        .left_labels
        .iter()
        .map(|&l| LinearForm::variable(n, l))
        .collect();
    a_images.push(eps.neg());
    let mut b_images: Vec<LinearForm<Int>> = spec
        .right_labels
        .iter()
        .map(|&l| LinearForm::variable(n, l))
        .collect();
    b_images.push(eps.clone());

    let mut out = CycleClass::zero(n, a.k() + b.k());
    for (ta, ca) in a.terms() {
        let ca_sub = ca.substitute_linear(&a_images);
        for (tb, cb) in b.terms() {
            let cb_sub = cb.substitute_linear(&b_images);
            let mut splits = translate_tree(ta, &spec.left_labels, left_mask, n);
            splits.extend(translate_tree(
                tb,
                &spec.right_labels,
                !left_mask,
                n,
            ));
            splits.push(normalize_split(n, left_mask));
            let glued = LabeledTree::new(n, splits)?;
            out.add_term(glued, ca_sub.mul(&cb_sub));
        }
    }
    Ok(out)
}

/// A wall-crossing class: the difference of the Hurwitz cycles in two
/// adjacent chambers, tagged with the wall and the chamber pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossingClass {
    pub wall: Wall,
    pub class: CycleClass,
}

/// Termwise difference `H_k(c+) - H_k(c-)` after validating adjacency.
pub fn wall_crossing_direct(
    wall: &Wall,
    k: usize,
    plus: &Chamber,
    minus: &Chamber,
) -> Result<WallCrossingClass> {
    check_adjacent(plus, minus, wall)?;
    let hp = hurwitz_cycle(plus, k)?;
    let hm = hurwitz_cycle(minus, k)?;
    Ok(WallCrossingClass {
        wall: *wall,
        class: hp.sub(&hm),
    })
}

/// The inductive wall-crossing formula evaluated in the plus chamber.
pub fn wall_crossing_formula(wall: &Wall, k: usize, plus: &Chamber) -> Result<WallCrossingClass> {
    let n = wall.n();
    if plus.n() != n {
        return Err(Error::InvalidArgument("wall/chamber end counts differ".into()));
    }
    if k + 3 > n {
        return Err(Error::InvalidArgument(format!(
            "dimension k={} out of range 0..={}",
            k,
            n - 3
        )));
    }
    let r = n as i64 - 2;
    let size_i = wall.size() as i64;
    let r1 = size_i - 1;
    let r2 = (n as i64 - size_i) - 1;
    let eps_form = wall.form();
    let eps_value = eps_form.eval(plus.x());
    if !num_traits::Signed::is_positive(&eps_value) {
        return Err(Error::InvalidArgument(format!(
            "chamber must lie on the positive side of {}",
            wall.display()
        )));
    }
    let spec = GluingSpec::for_wall(wall);
    let mut total = CycleClass::zero(n, k);
    let lo = 0i64.max(1 + k as i64 - r2);
    let hi = (k as i64).min(r1 - 1);
    for j in lo..=hi {
        // Factor samples inherit genericity from the big chamber.
        let mut xa: Vec<Int> = spec
            .left_labels
            .iter()
            .map(|&i| plus.x()[i].clone())
            .collect();
        xa.push(-eps_value.clone());
        let mut xb: Vec<Int> = spec
            .right_labels
            .iter()
            .map(|&i| plus.x()[i].clone())
            .collect();
        xb.push(eps_value.clone());
        let ca = chamber_of(&RamificationVector::new(xa)?)?;
        let cb = chamber_of(&RamificationVector::new(xb)?)?;
        let ha = hurwitz_cycle(&ca, j as usize)?;
        let hb = hurwitz_cycle(&cb, k - j as usize)?;
        let glued = boxtimes(&ha, &hb, &spec)?;
        let coeff: Int = binomial(r - k as i64, size_i - 1 - j);
        total = total.add(&glued.scale(&coeff));
    }
    Ok(WallCrossingClass {
        wall: *wall,
        class: total.mul_linear(&eps_form),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::{adjacent_sample_pair, walls};
    use crate::oracle;

    fn chamber(x: &[i64]) -> Chamber {
        chamber_of(&RamificationVector::from_i64(x).unwrap()).unwrap()
    }

    #[test]
    fn n3_cycle_is_one_point() {
        let c = chamber(&[2, 1, -3]);
        let h = hurwitz_cycle(&c, 0).unwrap();
        assert_eq!(h.terms().len(), 1);
        let (t, p) = h.terms().iter().next().unwrap();
        assert_eq!(t.num_internal_edges(), 0);
        assert_eq!(p, &IntPolynomial::one(3));
    }

    #[test]
    fn n4_k0_coefficients() {
        let c = chamber(&[3, 1, -2, -2]);
        let h = hurwitz_cycle(&c, 0).unwrap();
        assert_eq!(h.terms().len(), 3);
        for (t, p) in h.terms() {
            assert_eq!(p.homogeneous_degree(), Some(1));
            let expected = LinearForm::subset_sum(4, t.splits()[0]);
            // sign chosen positive at the sample
            let v = expected.eval(c.x());
            let want = if num_traits::Signed::is_positive(&v) {
                expected.to_polynomial()
            } else {
                expected.neg().to_polynomial()
            };
            assert_eq!(p, &want);
        }
        let values: Vec<Int> = h.evaluate(c.x()).values().cloned().collect();
        let total: Int = values.iter().fold(Int::from(0), |a, b| a + b.clone());
        assert_eq!(total, Int::from(6));
    }

    #[test]
    fn n4_k1_top_class() {
        let c = chamber(&[3, 1, -2, -2]);
        let h = hurwitz_cycle(&c, 1).unwrap();
        assert_eq!(h.terms().len(), 1);
        let (t, p) = h.terms().iter().next().unwrap();
        assert_eq!(t.num_internal_edges(), 0);
        assert_eq!(p, &IntPolynomial::constant(4, Int::from(2)));
        assert_eq!(p.homogeneous_degree(), Some(0));
    }

    #[test]
    fn double_hurwitz_matches_oracle() {
        let x = RamificationVector::from_i64(&[3, 1, -2, -2]).unwrap();
        let h = double_hurwitz_number(&x).unwrap();
        assert_eq!(h, Int::from(6));
        assert!(oracle::reconcile(&x, &h).unwrap().ok);
        let y = RamificationVector::from_i64(&[1, 2, -3]).unwrap();
        assert_eq!(double_hurwitz_number(&y).unwrap(), Int::from(1));
    }

    #[test]
    fn boxtimes_stars() {
        // Two 3-end stars glue to the single n=4 tree with split {1,3}.
        let ca = chamber(&[3, -2, -1]); // (x1, x3, -eps) at x=(3,1,-2,-2), I={1,3}
        let cb = chamber(&[1, -2, 1]); // (x2, x4, eps)
        let a = hurwitz_cycle(&ca, 0).unwrap();
        let b = hurwitz_cycle(&cb, 0).unwrap();
        let wall = Wall::new(4, 0b0101).unwrap();
        let spec = GluingSpec::for_wall(&wall);
        let glued = boxtimes(&a, &b, &spec).unwrap();
        assert_eq!(glued.terms().len(), 1);
        let (t, p) = glued.terms().iter().next().unwrap();
        assert_eq!(t.splits(), &[0b0101]);
        assert_eq!(p, &IntPolynomial::one(4));
    }

    #[test]
    fn wall_crossing_n4_closed_form() {
        let wall = Wall::new(4, 0b0101).unwrap();
        let (xp, xm) = adjacent_sample_pair(&wall).unwrap();
        let cp = chamber_of(&xp).unwrap();
        let cm = chamber_of(&xm).unwrap();
        let direct = wall_crossing_direct(&wall, 0, &cp, &cm).unwrap();
        let formula = wall_crossing_formula(&wall, 0, &cp).unwrap();
        assert_eq!(direct, formula);
        // single term 2(x1+x3) on the {1,3}|{2,4} tree
        assert_eq!(direct.class.terms().len(), 1);
        let (t, p) = direct.class.terms().iter().next().unwrap();
        assert_eq!(t.splits(), &[0b0101]);
        let expected = LinearForm::subset_sum(4, 0b0101)
            .to_polynomial()
            .scale(&Int::from(2));
        assert_eq!(p, &expected);
    }

    #[test]
    fn top_dimension_crossing_vanishes() {
        let wall = Wall::new(5, 0b00011).unwrap();
        let (xp, xm) = adjacent_sample_pair(&wall).unwrap();
        let cp = chamber_of(&xp).unwrap();
        let cm = chamber_of(&xm).unwrap();
        let direct = wall_crossing_direct(&wall, 2, &cp, &cm).unwrap();
        assert!(direct.class.is_zero());
        let formula = wall_crossing_formula(&wall, 2, &cp).unwrap();
        assert!(formula.class.is_zero());
    }

    #[test]
    fn singleton_wall_crossing_vanishes() {
        let wall = Wall::new(5, 0b00001).unwrap();
        let (xp, xm) = adjacent_sample_pair(&wall).unwrap();
        let cp = chamber_of(&xp).unwrap();
        let cm = chamber_of(&xm).unwrap();
        for k in 0..=1 {
            let direct = wall_crossing_direct(&wall, k, &cp, &cm).unwrap();
            let formula = wall_crossing_formula(&wall, k, &cp).unwrap();
            assert!(formula.class.is_zero());
            assert_eq!(direct, formula);
        }
    }

    #[test]
    fn wall_crossing_theorem_n5() {
        for wall in walls(5) {
            let (xp, xm) = adjacent_sample_pair(&wall).unwrap();
            let cp = chamber_of(&xp).unwrap();
            let cm = chamber_of(&xm).unwrap();
            for k in 0..=2usize {
                let direct = wall_crossing_direct(&wall, k, &cp, &cm).unwrap();
                let formula = wall_crossing_formula(&wall, k, &cp).unwrap();
                assert_eq!(direct, formula, "wall {} k={}", wall.display(), k);
            }
        }
    }

    #[test]
    fn non_adjacent_rejected() {
        let wall = Wall::new(4, 0b0101).unwrap();
        let c1 = chamber(&[3, 1, -2, -2]);
        // flip more than one wall sign
        let c2 = chamber(&[-3, -1, 2, 2]);
        match wall_crossing_direct(&wall, 0, &c1, &c2) {
            Err(Error::NotAdjacent { disagreements, .. }) => {
                assert!(!disagreements.is_empty());
            }
            other => panic!("expected adjacency error, got {:?}", other),
        }
    }

    #[test]
    fn homogeneity_and_positivity() {
        for (x, kmax) in [(vec![5i64, 3, -2, -2, -4], 2usize), (vec![3, 1, -2, -2], 1)] {
            let c = chamber(&x);
            let n = x.len();
            for k in 0..=kmax {
                let h = hurwitz_cycle(&c, k).unwrap();
                for p in h.terms().values() {
                    assert_eq!(p.homogeneous_degree(), Some(n - 3 - k));
                    assert_eq!(p.sign_at(c.x()), 1);
                }
            }
        }
    }
}
