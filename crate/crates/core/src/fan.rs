//! The fan of rational tropical curves with N marked ends, its ray
//! lattice, rational functions, divisor products, Psi classes, forgetful
//! pullbacks, and evaluation matrices of covers.
//!
//! Curves embed into `R^(C(N,2) - N)` by the distance map modulo the
//! per-leaf shift vectors.  The ray `v_I` is the image of the tree with a
//! single bounded edge of length one separating `I` from its complement,
//! and the ambient lattice is the one generated by all `v_I` — primitive
//! vectors and intersection multiplicities are always taken with respect
//! to that lattice, not the standard one.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::directed::{balance_with_values, DirectedTree};
use crate::error::{Error, Result};
use crate::linalg;
use crate::trees::{enumerate_trees, mask_display, mask_to_labels, normalize_split, LabeledTree};
use crate::{Int, Rat};

/// Lattice coordinates of a point of the ambient space (integral entries
/// exactly for lattice points).
pub type LVec = Vec<Int>;
pub type QVec = Vec<Rat>;

pub fn qvec_of(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// The distance-map quotient of marked-curve space with its `v_I` lattice.
#[derive(Clone, Debug)]
pub struct AmbientSpace {
    n: usize,
    /// Reduced row echelon form of the shift-vector span and its pivots.
    rref: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    kept: Vec<usize>,
    /// Common denominator scaling reduced coordinates to integers.
    scale: Int,
    /// Basis of the v_I lattice (rows) in scaled reduced coordinates.
    basis: Vec<Vec<Int>>,
    basis_inv: Vec<Vec<Rat>>,
    /// Lattice coordinates of every canonical split's ray.
    rays: BTreeMap<u32, LVec>,
}

impl AmbientSpace {
    pub fn new(n: usize) -> Result<AmbientSpace> {
        if !(3..=8).contains(&n) {
            return Err(Error::Resource(format!(
                "ambient space guard: N={} outside 3..=8",
                n
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let m = pairs.len();
        // Shift vectors: b_i has a one at every pair containing i.
        let shifts: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                pairs
                    .iter()
                    .map(|&(a, b)| {
                        if a == i || b == i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let (rref, pivots) = rref_of(&shifts);
        let kept: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
        let dim = kept.len();

        // Raw distance vector of each split, reduced.
        let mut raw_reduced: BTreeMap<u32, Vec<Rat>> = BTreeMap::new();
        for mask in 0u32..(1 << (n - 1)) {
            let c = mask.count_ones() as usize;
            if c < 2 || c > n - 2 {
                continue;
            }
            let raw: Vec<Rat> = pairs
                .iter()
                .map(|&(a, b)| {
                    let ia = mask & (1 << a) != 0;
                    let ib = mask & (1 << b) != 0;
                    if ia != ib {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            raw_reduced.insert(mask, reduce_with(&rref, &pivots, &kept, &raw));
        }

        // Scale to integers and extract a lattice basis by Hermite
        // reduction of the transposed generator matrix.
        let mut scale = Int::one();
        for v in raw_reduced.values() {
            for x in v {
                scale = num_integer::lcm(scale.clone(), x.denom().clone());
            }
        }
        let gens: Vec<Vec<Int>> = raw_reduced
            .values()
            .map(|v| {
                v.iter()
                    .map(|x| (x.clone() * Rat::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut basis: Vec<Vec<Int>> = Vec::new();
        if dim > 0 {
            let gens_t: Vec<Vec<Int>> = (0..dim)
                .map(|c| gens.iter().map(|r| r[c].clone()).collect())
                .collect();
            let (h, _) = linalg::col_hermite(&gens_t);
            for c in 0..gens.len() {
                let col: Vec<Int> = (0..dim).map(|r| h[r][c].clone()).collect();
                if col.iter().any(|x| !x.is_zero()) {
                    basis.push(col);
                }
            }
            if basis.len() != dim {
                return Err(Error::Degenerate(
                    "ray lattice does not have full rank".into(),
                ));
            }
        }
        let basis_inv = invert(&basis);

        let mut space = AmbientSpace {
            n,
            rref,
            pivots,
            kept,
            scale,
            basis,
            basis_inv,
            rays: BTreeMap::new(),
        };
        let mut rays = BTreeMap::new();
        for (mask, red) in &raw_reduced {
            let q = space.lattice_coords_reduced(red);
            let v: LVec = q
                .into_iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect();
            rays.insert(*mask, v);
        }
        space.rays = rays;
        Ok(space)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the ray lattice, `C(N,2) - N`.
    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    fn lattice_coords_reduced(&self, reduced: &[Rat]) -> QVec {
        let scaled: Vec<Rat> = reduced
            .iter()
            .map(|x| x.clone() * Rat::from_integer(self.scale.clone()))
            .collect();
        (0..self.dim())
            .map(|j| {
                let mut acc = Rat::zero();
                for (i, s) in scaled.iter().enumerate() {
                    acc += s.clone() * self.basis_inv[i][j].clone();
                }
                acc
            })
            .collect()
    }

    /// Ray of a split in lattice coordinates; the zero vector for sides of
    /// size below 2 or above N-2.
    pub fn ray(&self, mask: u32) -> LVec {
        let c = mask.count_ones() as usize;
        if c < 2 || c > self.n - 2 {
            return vec![Int::zero(); self.dim()];
        }
        self.rays[&normalize_split(self.n, mask)].clone()
    }

    pub fn zero(&self) -> LVec {
        vec![Int::zero(); self.dim()]
    }
}

fn rref_of(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let piv = (r..nrows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for j in 0..ncols {
            m[r][j] = m[r][j].clone() / inv.clone();
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn reduce_with(rref: &[Vec<Rat>], pivots: &[usize], kept: &[usize], raw: &[Rat]) -> Vec<Rat> {
    let mut v = raw.to_vec();
    for (row, &pc) in rref.iter().zip(pivots) {
        let f = v[pc].clone();
        if !f.is_zero() {
            for (x, r) in v.iter_mut().zip(row) {
                *x -= f.clone() * r.clone();
            }
        }
    }
    kept.iter().map(|&c| v[c].clone()).collect()
}

fn invert(basis: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    let d = basis.len();
    let mut m: Vec<Vec<Rat>> = basis
        .iter()
        .map(|r| {
            let mut row: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
            row.extend((0..d).map(|_| Rat::zero()));
            row
        })
        .collect();
    for i in 0..d {
        m[i][d + i] = Rat::one();
    }
    for c in 0..d {
        let piv = (c..d).find(|&i| !m[i][c].is_zero()).expect("invertible");
        m.swap(c, piv);
        let inv = m[c][c].clone();
        for j in 0..2 * d {
            m[c][j] = m[c][j].clone() / inv.clone();
        }
        for i in 0..d {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * d {
                    let t = m[c][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[d..].to_vec()).collect()
}

/// The fan of tropical curves: all cones (= combinatorial types) by
/// dimension, over a shared ambient space.
#[derive(Clone, Debug)]
pub struct ModuliFan {
    pub ambient: AmbientSpace,
    /// `cones_by_dim[d]` = trees with `d` internal edges.
    pub cones_by_dim: Vec<Vec<LabeledTree>>,
}

/// Build the full fan; top cones all carry weight one.
pub fn build_moduli_fan(n: usize) -> Result<ModuliFan> {
    let ambient = AmbientSpace::new(n)?;
    let mut cones_by_dim = Vec::new();
    for d in 0..=(n - 3) {
        if d == 0 {
            cones_by_dim.push(vec![LabeledTree::star(n)]);
        } else {
            cones_by_dim.push(enumerate_trees(n, d + 1)?);
        }
    }
    Ok(ModuliFan {
        ambient,
        cones_by_dim,
    })
}

impl ModuliFan {
    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    /// The fan itself as a weight-one cycle of top dimension.
    pub fn fundamental_cycle(&self) -> FanCycle {
        let top = self.cones_by_dim.last().unwrap();
        FanCycle {
            n: self.n(),
            dim: self.cones_by_dim.len() - 1,
            weights: top.iter().map(|t| (t.clone(), Int::one())).collect(),
        }
    }

    /// The Psi class of end `i`: all cones where end `i` is adjacent to a
    /// four-valent vertex, each with weight one.
    pub fn psi_class(&self, i: usize) -> Result<FanCycle> {
        let mut exps = vec![0u32; self.n()];
        exps[i] = 1;
        self.psi_product(&exps)
    }

    /// Product of Psi classes with the given exponents: cones where every
    /// vertex has valence 3 plus the sum of its ends' exponents, weighted
    /// by the per-vertex multinomials.
    pub fn psi_product(&self, exponents: &[u32]) -> Result<FanCycle> {
        let n = self.n();
        if exponents.len() != n {
            return Err(Error::InvalidArgument("psi exponent arity".into()));
        }
        let total: u32 = exponents.iter().sum();
        if total as usize > n - 3 {
            return Err(Error::InvalidArgument(format!(
                "psi exponent sum {} exceeds fan dimension {}",
                total,
                n - 3
            )));
        }
        let dim = n - 3 - total as usize;
        let mut weights = BTreeMap::new();
        for tree in &self.cones_by_dim[dim] {
            let structure = tree.structure();
            let mut w = Int::one();
            let mut ok = true;
            for v in &structure.vertices {
                let ks: Vec<u32> = v.ends().iter().map(|&e| exponents[e]).collect();
                let s: u32 = ks.iter().sum();
                if v.valence() != 3 + s as usize {
                    ok = false;
                    break;
                }
                let mut vw = crate::scalar::factorial::<Int>(s as u64);
                for k in ks {
                    vw = vw / crate::scalar::factorial::<Int>(k as u64);
                }
                w *= vw;
            }
            if ok {
                weights.insert(tree.clone(), w);
            }
        }
        Ok(FanCycle { n, dim, weights })
    }
}

/// A weighted collection of cones of one fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCycle {
    n: usize,
    dim: usize,
    weights: BTreeMap<LabeledTree, Int>,
}

impl FanCycle {
    pub fn new(n: usize, dim: usize, weights: BTreeMap<LabeledTree, Int>) -> Self {
        let mut w = weights;
        w.retain(|_, v| !v.is_zero());
        FanCycle { n, dim, weights: w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &BTreeMap<LabeledTree, Int> {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_of(&self, t: &LabeledTree) -> Int {
        self.weights.get(t).cloned().unwrap_or_else(Int::zero)
    }
}

/// A rational function on the fan given by integer values on the rays and
/// extended cone-wise linearly; zero on unnamed rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwlFunction {
    n: usize,
    values: BTreeMap<u32, Int>,
}

impl PwlFunction {
    pub fn zero(n: usize) -> Self {
        PwlFunction {
            n,
            values: BTreeMap::new(),
        }
    }

    /// The boundary function of a subset: one on `v_I`, zero on every
    /// other ray.
    pub fn boundary(n: usize, subset: u32) -> Result<Self> {
        let mask = normalize_split(n, subset);
        let c = mask.count_ones() as usize;
        if c < 2 || c > n - 2 {
            return Err(Error::InvalidArgument(format!(
                "boundary divisor needs 2 <= |I| <= N-2, got {}",
                mask_display(subset)
            )));
        }
        let mut values = BTreeMap::new();
        values.insert(mask, Int::one());
        Ok(PwlFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value_on_ray(&self, mask: u32) -> Int {
        let c = mask.count_ones() as usize;
        if c < 2 || c > self.n - 2 {
            return Int::zero();
        }
        self.values
            .get(&normalize_split(self.n, mask))
            .cloned()
            .unwrap_or_else(Int::zero)
    }

    /// Pull back along the forgetful map dropping the last end: again a
    /// ray-valued function, one end bigger.
    pub fn pullback_forget_last(&self) -> PwlFunction {
        let big = self.n + 1;
        let mut values = BTreeMap::new();
        for mask in 0u32..(1 << (big - 1)) {
            let c = mask.count_ones() as usize;
            if c < 2 || c > big - 2 {
                continue;
            }
            // canonical splits of the big fan never contain the last end;
            // forgetting it keeps the side but may trivialize the split
            let v = if c <= self.n - 2 {
                self.value_on_ray(normalize_split(self.n, mask))
            } else {
                Int::zero()
            };
            if !v.is_zero() {
                values.insert(mask, v);
            }
        }
        PwlFunction { n: big, values }
    }

    /// Evaluate the linear extension on the cone spanned by `splits` at a
    /// lattice vector lying in the span of that cone.
    pub fn eval_on_cone(&self, ambient: &AmbientSpace, splits: &[u32], u: &[Int]) -> Rat {
        self.eval_on_cone_checked(ambient, splits, u)
            .expect("vector must lie in the span of the cone")
    }

    fn eval_on_cone_checked(
        &self,
        ambient: &AmbientSpace,
        splits: &[u32],
        u: &[Int],
    ) -> Result<Rat> {
        if u.iter().all(|x| x.is_zero()) {
            return Ok(Rat::zero());
        }
        let rays: Vec<Vec<Rat>> = splits.iter().map(|&s| qvec_of(&ambient.ray(s))).collect();
        let target = qvec_of(u);
        let coeffs = linalg::solve_combination(&rays, &target).ok_or_else(|| {
            Error::Verification(
                "weighted normal sum leaves the face span: input cycle is not balanced".into(),
            )
        })?;
        let mut acc = Rat::zero();
        for (c, &s) in coeffs.iter().zip(splits) {
            acc += c.clone() * Rat::from_integer(self.value_on_ray(s));
        }
        Ok(acc)
    }
}

/// Saturated lattice basis of the span of the given splits' rays.
fn cone_saturation(ambient: &AmbientSpace, splits: &[u32]) -> Vec<LVec> {
    let rows: Vec<LVec> = splits.iter().map(|&s| ambient.ray(s)).collect();
    linalg::saturate_rowspan(&rows)
}

/// Primitive normal vector of `sigma = tau + extra` modulo `tau`, in the
/// ray lattice, pointing into `sigma`.
pub fn primitive_normal(ambient: &AmbientSpace, tau: &[u32], extra: u32) -> LVec {
    let v = ambient.ray(extra);
    if tau.is_empty() {
        let sat = linalg::saturate_rowspan(&[v.clone()]);
        let basis = &sat[0];
        let coeffs = linalg::solve_combination(
            &linalg::to_rat_rows(&[basis.clone()]),
            &qvec_of(&v),
        )
        .expect("ray lies in its own span");
        let sign = if coeffs[0].is_negative() {
            -Int::one()
        } else {
            Int::one()
        };
        return basis.iter().map(|x| x.clone() * sign.clone()).collect();
    }
    let tau_sat = cone_saturation(ambient, tau);
    let mut sigma_splits = tau.to_vec();
    sigma_splits.push(extra);
    let sigma_sat = cone_saturation(ambient, &sigma_splits);
    let (u, _) = linalg::quotient_generator(&tau_sat, &sigma_sat, &v);
    u
}

/// The divisor of a rational function on a cycle: weights on the
/// codimension-one faces computed from primitive normal vectors, with
/// zero-weight faces pruned.
pub fn divisor(phi: &PwlFunction, x: &FanCycle, ambient: &AmbientSpace) -> Result<FanCycle> {
    if x.dim == 0 {
        return Err(Error::InvalidArgument(
            "cannot take the divisor on a zero-dimensional cycle".into(),
        ));
    }
    if phi.n() != x.n() {
        return Err(Error::InvalidArgument(
            "function/cycle arity mismatch".into(),
        ));
    }
    let mut stars: BTreeMap<LabeledTree, Vec<(LabeledTree, u32)>> = BTreeMap::new();
    for sigma in x.weights.keys() {
        for &drop in sigma.splits() {
            let tau = sigma.contract(&std::iter::once(drop).collect());
            stars.entry(tau).or_default().push((sigma.clone(), drop));
        }
    }
    let mut weights = BTreeMap::new();
    for (tau, incident) in stars {
        let tau_splits = tau.splits().to_vec();
        let mut acc = Rat::zero();
        let mut total = vec![Int::zero(); ambient.dim()];
        for (sigma, extra) in &incident {
            let w = x.weight_of(sigma);
            let u = primitive_normal(ambient, &tau_splits, *extra);
            acc += Rat::from_integer(w.clone()) * phi.eval_on_cone(ambient, sigma.splits(), &u);
            for (t, ui) in total.iter_mut().zip(&u) {
                *t += w.clone() * ui.clone();
            }
        }
        acc -= phi.eval_on_cone_checked(ambient, &tau_splits, &total)?;
        assert!(acc.is_integer(), "divisor weight must be an integer");
        let w = acc.to_integer();
        if !w.is_zero() {
            weights.insert(tau, w);
        }
    }
    Ok(FanCycle {
        n: x.n,
        dim: x.dim - 1,
        weights,
    })
}

/// Iterated divisor product.
pub fn divisor_chain(
    phis: &[PwlFunction],
    x: &FanCycle,
    ambient: &AmbientSpace,
) -> Result<FanCycle> {
    let mut cur = x.clone();
    for phi in phis {
        cur = divisor(phi, &cur, ambient)?;
    }
    Ok(cur)
}

/// Independent balancing verification: around every codimension-one face
/// of the support, the weighted primitive normals must sum into the span
/// of the face.  Returns offending faces.
pub fn check_fan_balancing(x: &FanCycle, ambient: &AmbientSpace) -> Vec<LabeledTree> {
    if x.dim == 0 {
        return Vec::new();
    }
    let mut stars: BTreeMap<LabeledTree, Vec<(LabeledTree, u32)>> = BTreeMap::new();
    for sigma in x.weights.keys() {
        for &drop in sigma.splits() {
            let tau = sigma.contract(&std::iter::once(drop).collect());
            stars.entry(tau).or_default().push((sigma.clone(), drop));
        }
    }
    let mut bad = Vec::new();
    for (tau, incident) in stars {
        let mut total = vec![Int::zero(); ambient.dim()];
        for (sigma, extra) in &incident {
            let w = x.weight_of(sigma);
            let u = primitive_normal(ambient, tau.splits(), *extra);
            for (t, ui) in total.iter_mut().zip(&u) {
                *t += w.clone() * ui.clone();
            }
        }
        let tau_rays: Vec<LVec> = tau.splits().iter().map(|&s| ambient.ray(s)).collect();
        if !linalg::in_rowspan(&tau_rays, &total) {
            bad.push(tau);
        }
    }
    bad
}

/// Functions cutting out the cone of `tree` with weight one: for each
/// vertex of valence `w >= 4` with incident end-sets `A_1 <= ... <= A_w`,
/// the boundary functions of `A_1 ∪ A_2`, ..., `A_1 ∪ ... ∪ A_{w-2}`.
pub fn cone_cut_functions(n: usize, tree: &LabeledTree) -> Vec<PwlFunction> {
    let structure = tree.structure();
    let mut out = Vec::new();
    for v in &structure.vertices {
        let w = v.valence();
        if w <= 3 {
            continue;
        }
        let mut parts: Vec<u32> = v.items.iter().map(|(_, m)| *m).collect();
        parts.sort_unstable();
        let mut acc = parts[0];
        for part in parts.iter().take(w - 2).skip(1) {
            acc |= part;
            out.push(PwlFunction::boundary(n, acc).expect("valid union split"));
        }
    }
    out
}

/// A combinatorial type of a cover: a tree whose ends `n_regular..` are
/// contracted (weight zero) marked points; the reference contracted end
/// `n_regular` is mapped to 0.
#[derive(Clone, Debug)]
pub struct CoverType {
    pub tree: LabeledTree,
    pub n_regular: usize,
}

impl CoverType {
    pub fn new(tree: LabeledTree, n_regular: usize) -> Result<Self> {
        if n_regular >= tree.n() {
            return Err(Error::InvalidArgument(
                "cover type needs at least one contracted end".into(),
            ));
        }
        let structure = tree.structure();
        let mut seen = std::collections::BTreeSet::new();
        for e in n_regular..tree.n() {
            let v = structure.vertex_of_end(e);
            if !seen.insert(v) {
                return Err(Error::Degenerate(
                    "contracted ends must be adjacent to distinct vertices".into(),
                ));
            }
        }
        Ok(CoverType { tree, n_regular })
    }

    /// Balance the underlying map: split values ignore contracted ends.
    pub fn balance(&self, x: &[Int]) -> Result<DirectedTree> {
        assert_eq!(x.len(), self.n_regular);
        let structure = self.tree.structure();
        let n_regular = self.n_regular;
        balance_with_values(&self.tree, structure, |mask| {
            let mut acc = Int::zero();
            for i in mask_to_labels(mask) {
                if i < n_regular {
                    acc += x[i].clone();
                }
            }
            acc
        })
        .map_err(|e| match e {
            Error::OnWall { wall } => Error::Degenerate(format!(
                "bounded edge {} has weight zero",
                wall
            )),
            other => other,
        })
    }

    /// Evaluation matrix in the local edge-length coordinates: one row per
    /// contracted end beyond the reference, one column per bounded edge,
    /// entries the signed edge weights along the path from the reference.
    pub fn evaluation_matrix(&self, x: &[Int]) -> Result<Vec<Vec<Int>>> {
        let dt = self.balance(x)?;
        let structure = dt.structure().clone();
        let ref_vertex = structure.vertex_of_end(self.n_regular);
        let mut rows = Vec::new();
        for end in self.n_regular + 1..self.tree.n() {
            let target = structure.vertex_of_end(end);
            let mut row = vec![Int::zero(); structure.edges.len()];
            for (e, into_inside) in structure.edge_path(ref_vertex, target) {
                // positive when the path follows the balancing direction
                let (tail, _) = dt.direction(e);
                let follows = if into_inside {
                    tail == structure.edges[e].outside
                } else {
                    tail == structure.edges[e].inside
                };
                row[e] = if follows {
                    dt.weight_value(e).clone()
                } else {
                    -dt.weight_value(e).clone()
                };
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn evaluation_determinant(&self, x: &[Int]) -> Result<Int> {
        let m = self.evaluation_matrix(x)?;
        if m.len() != self.tree.num_internal_edges() {
            return Err(Error::InvalidArgument(
                "evaluation matrix is not square".into(),
            ));
        }
        Ok(linalg::det(&m).abs())
    }

    /// gcd of the absolute values of the maximal minors: the intersection
    /// weight of the evaluation conditions.
    pub fn evaluation_minor_gcd(&self, x: &[Int]) -> Result<Int> {
        Ok(linalg::gcd_maximal_minors(&self.evaluation_matrix(x)?))
    }
}

/// The moving vector of vertex `v`: the lattice direction deforming the
/// curve when the vertex image slides by the product of its bounded-edge
/// weights.  Out-edges contribute `-prod_{e' != e} w(e') v_{split(e)}`,
/// in-edges the same with a positive sign.
pub fn moving_vector(ambient: &AmbientSpace, dt: &DirectedTree, v: usize) -> Result<LVec> {
    let edges = dt.edges_at(v);
    if edges.is_empty() {
        return Err(Error::Degenerate(format!(
            "vertex {} has no bounded edges",
            v
        )));
    }
    let mut out = ambient.zero();
    for &(e, outgoing) in &edges {
        let mut coeff = Int::one();
        for &(e2, _) in &edges {
            if e2 != e {
                coeff *= dt.weight_value(e2).clone();
            }
        }
        if outgoing {
            coeff = -coeff;
        }
        let split = dt.structure().edges[e].split;
        for (o, r) in out.iter_mut().zip(ambient.ray(split)) {
            *o += coeff.clone() * r;
        }
    }
    Ok(out)
}


#[cfg(test)]
mod balancing_identity {
    use super::*;

    /// The six-neighbor identity at a moving-fixed merge: with one edge of
    /// weight a = b + c + d pointing in and three pointing out, the
    /// weighted sum of the six resolutions' moving vectors reduces to
    /// 2abcd (v_ab + v_ac + v_bc - v_a - v_b - v_c - v_abc) = 0.
    #[test]
    fn six_neighbor_sum_vanishes() {
        let n = 7usize;
        let amb = AmbientSpace::new(n).unwrap();
        // reachable end sets of the four edges at the merged vertex
        let sets: [u32; 4] = [0b0000011, 0b0001100, 0b0010000, 0b1100000];
        let (sa, sb, sc, sd) = (sets[0], sets[1], sets[2], sets[3]);
        for (a, b, c, d) in [(9i64, 4, 3, 2), (7, 1, 2, 4), (12, 5, 6, 1)] {
            assert_eq!(a, b + c + d);
            let ray = |m: u32| amb.ray(m);
            let scale = |v: &LVec, s: i64| -> LVec {
                v.iter().map(|x| x.clone() * Int::from(s)).collect()
            };
            let addv = |x: &LVec, y: &LVec| -> LVec {
                x.iter().zip(y).map(|(p, q)| p.clone() + q.clone()).collect()
            };
            let sub = |x: &LVec, y: &LVec| -> LVec {
                x.iter().zip(y).map(|(p, q)| p.clone() - q.clone()).collect()
            };
            let zero = amb.zero();
            let mut total = zero.clone();
            // the six neighbors pair the in-edge with one out-edge or two
            // out-edges together; each contributes its weight times the
            // moving vector of the resolved vertex
            let term = |w: i64, v: LVec| scale(&v, w);
            let v_ab = ray(sa | sb);
            let v_ac = ray(sa | sc);
            let v_ad = ray(sa | sd);
            let v_a = ray(sa);
            let v_b = ray(sb);
            let v_c = ray(sc);
            let v_d = ray(sd);
            // ab | cd
            total = addv(
                &total,
                &term(
                    a * b,
                    sub(&sub(&scale(&v_ab, c * d), &scale(&v_c, (a - b) * d)), &scale(&v_d, (a - b) * c)),
                ),
            );
            total = sub(
                &total,
                &term(
                    c * d,
                    addv(
                        &sub(&scale(&v_a, (a - b) * b), &scale(&v_b, (a - b) * a)),
                        &scale(&v_ab, -a * b),
                    ),
                ),
            );
            // ac | bd
            total = addv(
                &total,
                &term(
                    a * c,
                    sub(&sub(&scale(&v_ac, b * d), &scale(&v_b, (a - c) * d)), &scale(&v_d, (a - c) * b)),
                ),
            );
            total = sub(
                &total,
                &term(
                    b * d,
                    addv(
                        &sub(&scale(&v_a, (a - c) * c), &scale(&v_c, (a - c) * a)),
                        &scale(&v_ac, -a * c),
                    ),
                ),
            );
            // ad | bc
            total = addv(
                &total,
                &term(
                    a * d,
                    sub(&sub(&scale(&v_ad, b * c), &scale(&v_b, (a - d) * c)), &scale(&v_c, (a - d) * b)),
                ),
            );
            total = sub(
                &total,
                &term(
                    b * c,
                    addv(
                        &sub(&scale(&v_a, (a - d) * d), &scale(&v_d, (a - d) * a)),
                        &scale(&v_ad, -a * d),
                    ),
                ),
            );
            assert!(total.iter().all(|x| x.is_zero()), "a={} b={} c={} d={}", a, b, c, d);
        }
    }
}
