//! Tropical Hurwitz cycles: weighted balanced polyhedral complexes of
//! covers with fixed branch points.
//!
//! A top cell is a trivalent type together with a choice of k moving
//! vertices and an orientation-compatible total order of the remaining
//! vertices; the fixed vertices map to the branch values, the moving ones
//! slide, and the cell weight is the gcd, over all ways of shrinking the
//! moving vertices into distinct fixed ones, of the products of the
//! surviving bounded-edge weights.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::chamber::{chamber_of, RamificationVector};
use crate::directed::{balance_directed, DirectedTree};
use crate::error::{Error, Result};
use crate::fan::{moving_vector, qvec_of, AmbientSpace, LVec, QVec};
use crate::linalg;
use crate::poly::LinearForm;
use crate::trees::{enumerate_trees, normalize_split, Item, LabeledTree};
use crate::{Int, Rat};

/// Branch values `p_{n+2} < ... < p_{n+r-k}`, all nonzero: the images of
/// the marked simple branch points besides the reference at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoints {
    points: Vec<Rat>,
}

impl BranchPoints {
    pub fn new(points: Vec<Rat>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(
                    "branch points must be strictly increasing".into(),
                ));
            }
        }
        if points.iter().any(|p| p.is_zero()) {
            return Err(Error::InvalidArgument(
                "branch points must avoid 0, the image of the reference end".into(),
            ));
        }
        Ok(BranchPoints { points })
    }

    /// Default generic choice: `1, 2, ..., r-k-1`.
    pub fn default_for(n: usize, k: usize) -> Self {
        let r = n - 2;
        BranchPoints {
            points: (1..r - k)
                .map(|i| Rat::from_integer(Int::from(i as i64)))
                .collect(),
        }
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    /// All pinned values including the reference 0, sorted increasingly.
    pub fn values(&self) -> Vec<Rat> {
        let mut v = self.points.clone();
        v.push(Rat::zero());
        v.sort();
        v
    }
}

/// Canonical identity of a vertex inside a fixed tree: the sorted
/// reachable-end masks of its items.
pub type VertexSig = Vec<u32>;

/// An affine expression `c + sum a_i t_i` over the cell parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffExpr {
    pub constant: Rat,
    pub coeffs: Vec<Rat>,
}

impl AffExpr {
    fn eval(&self, t: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (a, ti) in self.coeffs.iter().zip(t) {
            acc += a.clone() * ti.clone();
        }
        acc
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Exact geometry of a cell or face: edge-length expressions over the
/// mobile parameters, and the polytope signature (sorted vertices plus
/// primitive recession rays) used for set equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGeom {
    pub params: usize,
    /// (canonical split, length expression), sorted by split.
    pub lengths: Vec<(u32, AffExpr)>,
    pub vertices: Vec<QVec>,
    pub rays: Vec<LVec>,
    pub relint_point: QVec,
}

/// Image of a vertex: pinned at a branch value or a free parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageVal {
    Pinned(Rat),
    Param(usize),
}

/// A configuration: a (possibly contracted) type with orientations, exact
/// magnitudes, signed weight values and vertex images.
#[derive(Clone, Debug)]
pub struct Config {
    pub tree: LabeledTree,
    pub dt: DirectedTree,
    /// Signed value of each oriented edge; the magnitude equals the
    /// directed-tree weight, the sign is negative exactly for a special
    /// edge evaluated across its wall.
    pub signed: Vec<Int>,
    pub images: Vec<ImageVal>,
}

impl Config {
    /// Every directed path between pinned vertices must respect images.
    pub fn feasible(&self) -> bool {
        let nv = self.dt.num_vertices();
        for u in 0..nv {
            for v in 0..nv {
                if u == v || !self.dt.reaches(u, v) {
                    continue;
                }
                if let (ImageVal::Pinned(a), ImageVal::Pinned(b)) =
                    (&self.images[u], &self.images[v])
                {
                    if a >= b {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn num_params(&self) -> usize {
        self.images
            .iter()
            .filter(|i| matches!(i, ImageVal::Param(_)))
            .count()
    }

    /// A parameter assignment in the relative interior: every mobile
    /// vertex strictly between its transitive pinned bounds.
    pub fn relint_params(&self) -> Vec<Rat> {
        let nv = self.dt.num_vertices();
        let mut assigned: Vec<Option<Rat>> = self
            .images
            .iter()
            .map(|iv| match iv {
                ImageVal::Pinned(p) => Some(p.clone()),
                ImageVal::Param(_) => None,
            })
            .collect();
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by_key(|&v| (0..nv).filter(|&u| self.dt.reaches(u, v)).count());
        let two = Rat::from_integer(Int::from(2));
        for &v in &order {
            if assigned[v].is_some() {
                continue;
            }
            let mut lb: Option<Rat> = None;
            let mut ub: Option<Rat> = None;
            for u in 0..nv {
                if self.dt.reaches(u, v) {
                    if let Some(a) = &assigned[u] {
                        lb = Some(match lb {
                            None => a.clone(),
                            Some(l) => l.max(a.clone()),
                        });
                    }
                }
                if self.dt.reaches(v, u) {
                    if let ImageVal::Pinned(b) = &self.images[u] {
                        ub = Some(match ub {
                            None => b.clone(),
                            Some(x) => x.min(b.clone()),
                        });
                    }
                }
            }
            let value = match (lb, ub) {
                (Some(l), Some(u)) => {
                    debug_assert!(l < u, "relint needs feasibility");
                    (l + u) / two.clone()
                }
                (Some(l), None) => l + Rat::one(),
                (None, Some(u)) => u - Rat::one(),
                (None, None) => Rat::zero(),
            };
            assigned[v] = Some(value);
        }
        let mut out = vec![Rat::zero(); self.num_params()];
        for (v, iv) in self.images.iter().enumerate() {
            if let ImageVal::Param(i) = iv {
                out[*i] = assigned[v].clone().unwrap();
            }
        }
        out
    }

    fn image_expr(&self, v: usize, nparams: usize) -> AffExpr {
        match &self.images[v] {
            ImageVal::Pinned(p) => AffExpr {
                constant: p.clone(),
                coeffs: vec![Rat::zero(); nparams],
            },
            ImageVal::Param(i) => {
                let mut coeffs = vec![Rat::zero(); nparams];
                coeffs[*i] = Rat::one();
                AffExpr {
                    constant: Rat::zero(),
                    coeffs,
                }
            }
        }
    }

    /// Length of every edge as an affine expression: image gap divided by
    /// the (positive) weight magnitude.
    pub fn length_exprs(&self) -> Vec<(u32, AffExpr)> {
        let m = self.num_params();
        let structure = self.dt.structure();
        let mut out = Vec::new();
        for (e, edge) in structure.edges.iter().enumerate() {
            let (tail, head) = self.dt.direction(e);
            let ht = self.image_expr(head, m);
            let tl = self.image_expr(tail, m);
            let w = Rat::from_integer(self.dt.weight_value(e).clone());
            let constant = (ht.constant - tl.constant) / w.clone();
            let coeffs = ht
                .coeffs
                .iter()
                .zip(&tl.coeffs)
                .map(|(a, b)| (a.clone() - b.clone()) / w.clone())
                .collect();
            out.push((edge.split, AffExpr { constant, coeffs }));
        }
        out.sort_by_key(|(s, _)| *s);
        out
    }

    /// Full geometry with the polytope signature.
    pub fn geometry(&self, ambient: &AmbientSpace) -> CellGeom {
        let lengths = self.length_exprs();
        let m = self.num_params();
        let dim = ambient.dim();
        let mut base = vec![Rat::zero(); dim];
        let mut cols = vec![vec![Rat::zero(); dim]; m];
        for (split, expr) in &lengths {
            let ray = ambient.ray(*split);
            for (i, r) in ray.iter().enumerate() {
                let rq = Rat::from_integer(r.clone());
                base[i] += expr.constant.clone() * rq.clone();
                for (j, a) in expr.coeffs.iter().enumerate() {
                    cols[j][i] += a.clone() * rq.clone();
                }
            }
        }
        let constraints: Vec<AffExpr> = lengths.iter().map(|(_, e)| e.clone()).collect();
        let (tverts, trays) = polytope_vertices_rays(&constraints, m);
        let embed = |t: &[Rat]| -> QVec {
            let mut p = base.clone();
            for (j, tj) in t.iter().enumerate() {
                for (i, c) in cols[j].iter().enumerate() {
                    p[i] += tj.clone() * c.clone();
                }
            }
            p
        };
        let mut vertices: Vec<QVec> = tverts.iter().map(|t| embed(t)).collect();
        vertices.sort();
        vertices.dedup();
        let mut rays: Vec<LVec> = trays
            .iter()
            .map(|d| {
                let mut dir = vec![Rat::zero(); dim];
                for (j, dj) in d.iter().enumerate() {
                    for (i, c) in cols[j].iter().enumerate() {
                        dir[i] += dj.clone() * c.clone();
                    }
                }
                primitive_direction(&dir)
            })
            .collect();
        rays.sort();
        rays.dedup();
        let relint = self.relint_params();
        let relint_point = embed(&relint);
        CellGeom {
            params: m,
            lengths,
            vertices,
            rays,
            relint_point,
        }
    }

    /// Moving vectors of the mobile vertices, in parameter order.
    pub fn mobile_directions(&self, ambient: &AmbientSpace) -> Result<Vec<LVec>> {
        let mut named: Vec<(usize, usize)> = self
            .images
            .iter()
            .enumerate()
            .filter_map(|(v, iv)| match iv {
                ImageVal::Param(i) => Some((*i, v)),
                _ => None,
            })
            .collect();
        named.sort();
        named
            .into_iter()
            .map(|(_, v)| moving_vector(ambient, &self.dt, v))
            .collect()
    }

    /// Per-split edge data (direction flag, signed value) for rebuilding
    /// contracted configurations.
    fn edge_data_by_split(&self) -> BTreeMap<u32, (bool, Int)> {
        let structure = self.dt.structure();
        let mut out = BTreeMap::new();
        for (e, edge) in structure.edges.iter().enumerate() {
            let (tail, _) = self.dt.direction(e);
            out.insert(edge.split, (tail == edge.inside, self.signed[e].clone()));
        }
        out
    }

    /// Contract one edge, merging its endpoints.  Returns `None` when both
    /// endpoints are pinned or the contracted system is infeasible.
    pub fn contract_edge(&self, e: usize) -> Result<Option<Config>> {
        let structure = self.dt.structure().clone();
        let (a, b) = structure.edge_vertices(e);
        let merged_image = match (&self.images[a], &self.images[b]) {
            (ImageVal::Pinned(_), ImageVal::Pinned(_)) => return Ok(None),
            (ImageVal::Pinned(p), _) | (_, ImageVal::Pinned(p)) => ImageVal::Pinned(p.clone()),
            _ => ImageVal::Param(usize::MAX),
        };
        let split = structure.edges[e].split;
        let data = self.edge_data_by_split();
        let new_tree = self.tree.contract(&std::iter::once(split).collect());
        let new_structure = new_tree.structure();
        let (new_dt, new_signed) =
            balance_directed(&new_tree, new_structure, |mask| data[&mask].clone())?;
        let ns = new_dt.structure().clone();
        let map_vertex = |w: usize| -> usize {
            for (it, mask) in &structure.vertices[w].items {
                match it {
                    Item::End(i) => return ns.vertex_of_end(*i),
                    Item::Edge(e2) => {
                        if *e2 == e {
                            continue;
                        }
                        let s2 = structure.edges[*e2].split;
                        let ne = ns
                            .edges
                            .iter()
                            .position(|ed| ed.split == s2)
                            .expect("surviving edge");
                        return if *mask == s2 {
                            ns.edges[ne].outside
                        } else {
                            ns.edges[ne].inside
                        };
                    }
                }
            }
            unreachable!("vertex must have an item");
        };
        let mut images = vec![None::<ImageVal>; ns.vertices.len()];
        for w in 0..structure.vertices.len() {
            let nw = map_vertex(w);
            let iv = if w == a || w == b {
                merged_image.clone()
            } else {
                self.images[w].clone()
            };
            match &images[nw] {
                None => images[nw] = Some(iv),
                Some(_) => {
                    debug_assert!(w == a || w == b);
                }
            }
        }
        let mut mobiles: Vec<(VertexSig, usize)> = images
            .iter()
            .enumerate()
            .filter_map(|(v, iv)| match iv {
                Some(ImageVal::Param(_)) => Some((ns.vertices[v].signature(), v)),
                _ => None,
            })
            .collect();
        mobiles.sort();
        let mut final_images: Vec<ImageVal> = images
            .into_iter()
            .map(|iv| iv.expect("all new vertices mapped"))
            .collect();
        for (i, (_, v)) in mobiles.into_iter().enumerate() {
            final_images[v] = ImageVal::Param(i);
        }
        let config = Config {
            tree: new_tree,
            dt: new_dt,
            signed: new_signed,
            images: final_images,
        };
        if config.feasible() {
            Ok(Some(config))
        } else {
            Ok(None)
        }
    }

    pub fn pinned_list(&self) -> Vec<(VertexSig, Rat)> {
        let s = self.dt.structure();
        let mut out: Vec<(VertexSig, Rat)> = self
            .images
            .iter()
            .enumerate()
            .filter_map(|(v, iv)| match iv {
                ImageVal::Pinned(p) => Some((s.vertices[v].signature(), p.clone())),
                _ => None,
            })
            .collect();
        out.sort();
        out
    }

    pub fn mobile_sigs(&self) -> Vec<VertexSig> {
        let s = self.dt.structure();
        let mut out: Vec<VertexSig> = self
            .images
            .iter()
            .enumerate()
            .filter_map(|(v, iv)| match iv {
                ImageVal::Param(_) => Some(s.vertices[v].signature()),
                _ => None,
            })
            .collect();
        out.sort();
        out
    }
}

fn primitive_direction(dir: &[Rat]) -> LVec {
    let mut denom = Int::one();
    for d in dir {
        denom = num_integer::lcm(denom, d.denom().clone());
    }
    let ints: Vec<Int> = dir
        .iter()
        .map(|d| (d.clone() * Rat::from_integer(denom.clone())).to_integer())
        .collect();
    let g = crate::scalar::gcd_all(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / g.clone()).collect()
}

/// Vertices and extreme rays of `{ t : every constraint >= 0 }` for up to
/// two parameters.  Cells are nonempty and pointed by construction.
fn polytope_vertices_rays(constraints: &[AffExpr], m: usize) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    match m {
        0 => (vec![vec![]], vec![]),
        1 => {
            let mut lb: Option<Rat> = None;
            let mut ub: Option<Rat> = None;
            for c in constraints {
                let a = &c.coeffs[0];
                if a.is_zero() {
                    continue;
                }
                let bound = -c.constant.clone() / a.clone();
                if a.is_positive() {
                    lb = Some(match lb {
                        None => bound,
                        Some(l) => l.max(bound),
                    });
                } else {
                    ub = Some(match ub {
                        None => bound,
                        Some(u) => u.min(bound),
                    });
                }
            }
            let mut verts = Vec::new();
            let mut rays = Vec::new();
            match lb {
                Some(l) => verts.push(vec![l]),
                None => rays.push(vec![-Rat::one()]),
            }
            match ub {
                Some(u) => verts.push(vec![u]),
                None => rays.push(vec![Rat::one()]),
            }
            verts.dedup();
            (verts, rays)
        }
        2 => {
            let rows: Vec<&AffExpr> = constraints.iter().filter(|c| !c.is_constant()).collect();
            let feasible = |t: &[Rat]| constraints.iter().all(|c| !c.eval(t).is_negative());
            let mut verts: Vec<Vec<Rat>> = Vec::new();
            for (i, ci) in rows.iter().enumerate() {
                for cj in rows.iter().skip(i + 1) {
                    let det = ci.coeffs[0].clone() * cj.coeffs[1].clone()
                        - ci.coeffs[1].clone() * cj.coeffs[0].clone();
                    if det.is_zero() {
                        continue;
                    }
                    let t0 = (-ci.constant.clone() * cj.coeffs[1].clone()
                        + cj.constant.clone() * ci.coeffs[1].clone())
                        / det.clone();
                    let t1 = (-cj.constant.clone() * ci.coeffs[0].clone()
                        + ci.constant.clone() * cj.coeffs[0].clone())
                        / det.clone();
                    let t = vec![t0, t1];
                    if feasible(&t) && !verts.contains(&t) {
                        verts.push(t);
                    }
                }
            }
            let rec_ok = |d: &[Rat]| {
                rows.iter().all(|c| {
                    let v =
                        c.coeffs[0].clone() * d[0].clone() + c.coeffs[1].clone() * d[1].clone();
                    !v.is_negative()
                })
            };
            let mut rays: Vec<Vec<Rat>> = Vec::new();
            for c in &rows {
                for d in [
                    vec![-c.coeffs[1].clone(), c.coeffs[0].clone()],
                    vec![c.coeffs[1].clone(), -c.coeffs[0].clone()],
                ] {
                    if d.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if rec_ok(&d) {
                        let norm = normalize_ray2(&d);
                        if !rays.contains(&norm) {
                            rays.push(norm);
                        }
                    }
                }
            }
            verts.sort();
            (verts, rays)
        }
        _ => panic!("cells of dimension {} not supported at desk scale", m),
    }
}

fn normalize_ray2(d: &[Rat]) -> Vec<Rat> {
    let scale = d
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.clone().abs())
        .unwrap();
    d.iter().map(|x| x.clone() / scale.clone()).collect()
}

/// A top-dimensional cell of a tropical Hurwitz cycle.
#[derive(Clone, Debug)]
pub struct TropicalCell {
    pub config: Config,
    /// Moving vertex indices in the trivalent type.
    pub moving: BTreeSet<usize>,
    /// Fixed vertices in image order.
    pub order: Vec<usize>,
    /// Signed cell weight (negative only under the across-the-wall
    /// convention).
    pub weight: Int,
    pub geom: CellGeom,
    pub moving_vectors: Vec<LVec>,
}

impl TropicalCell {
    pub fn tree(&self) -> &LabeledTree {
        &self.config.tree
    }

    pub fn key(&self) -> CellKey {
        CellKey {
            splits: self.config.tree.splits().to_vec(),
            pinned: self.config.pinned_list(),
            mobile: self.config.mobile_sigs(),
            vertices: self.geom.vertices.clone(),
            rays: self.geom.rays.clone(),
        }
    }
}

/// Canonical key of a cell or face: combinatorial data plus the polytope
/// signature of its realization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellKey {
    pub splits: Vec<u32>,
    pub pinned: Vec<(VertexSig, Rat)>,
    pub mobile: Vec<VertexSig>,
    pub vertices: Vec<QVec>,
    pub rays: Vec<LVec>,
}

/// A face of the complex, with incidence into the next level up.
#[derive(Clone, Debug)]
pub struct FaceNode {
    pub config: Config,
    pub geom: CellGeom,
    /// Indices one level up; for the highest face level these point into
    /// the cell list.
    pub parents: Vec<usize>,
}

impl FaceNode {
    pub fn key(&self) -> CellKey {
        CellKey {
            splits: self.config.tree.splits().to_vec(),
            pinned: self.config.pinned_list(),
            mobile: self.config.mobile_sigs(),
            vertices: self.geom.vertices.clone(),
            rays: self.geom.rays.clone(),
        }
    }
}

/// A built tropical Hurwitz cycle: weighted top cells plus the face
/// lattice down to dimension zero.
#[derive(Clone, Debug)]
pub struct TropicalHurwitzCycle {
    pub n: usize,
    pub k: usize,
    pub x: Vec<Int>,
    pub branch_values: Vec<Rat>,
    pub ambient: AmbientSpace,
    pub cells: Vec<TropicalCell>,
    /// `faces[d]` are the faces of dimension d for d in 0..k.
    pub faces: Vec<Vec<FaceNode>>,
}

/// The signed weight of a cell: gcd over all admissible shrinkings of the
/// products of the surviving signed edge values; negative exactly when
/// some product is negative.
pub fn cell_weight_signed(
    tree: &LabeledTree,
    dt: &DirectedTree,
    moving: &BTreeSet<usize>,
    signed: &[Int],
) -> Result<Int> {
    let k = moving.len();
    let edges = dt.structure().edges.len();
    let mut products: Vec<Int> = Vec::new();
    let mut choose = vec![false; edges];
    admissible_products(dt, moving, signed, &mut choose, 0, k, &mut products);
    if products.is_empty() {
        return Err(Error::Degenerate(format!(
            "no admissible shrinking for moving set {:?} on {:?}",
            moving,
            tree.splits()
        )));
    }
    let negative = products.iter().any(|p| p.is_negative());
    let abs: Vec<Int> = products.into_iter().map(|p| p.abs()).collect();
    let g = crate::scalar::gcd_all(&abs);
    Ok(if negative { -g } else { g })
}

fn admissible_products(
    dt: &DirectedTree,
    moving: &BTreeSet<usize>,
    signed: &[Int],
    choose: &mut Vec<bool>,
    from: usize,
    remaining: usize,
    out: &mut Vec<Int>,
) {
    let edges = dt.structure().edges.len();
    if remaining == 0 {
        if contraction_admissible(dt, moving, choose) {
            let mut p = Int::one();
            for (e, &c) in choose.iter().enumerate() {
                if !c {
                    p *= signed[e].clone();
                }
            }
            out.push(p);
        }
        return;
    }
    if from + remaining > edges {
        return;
    }
    for e in from..edges {
        choose[e] = true;
        admissible_products(dt, moving, signed, choose, e + 1, remaining - 1, out);
        choose[e] = false;
    }
}

/// Does contracting the chosen edges merge every moving vertex into a
/// component with exactly one fixed vertex, and no two fixed together?
fn contraction_admissible(dt: &DirectedTree, moving: &BTreeSet<usize>, choose: &[bool]) -> bool {
    let nv = dt.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for (e, &c) in choose.iter().enumerate() {
        if c {
            let (a, b) = dt.structure().edge_vertices(e);
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut fixed_in = vec![0usize; nv];
    let mut moving_in = vec![0usize; nv];
    for v in 0..nv {
        let r = find(&mut parent, v);
        if moving.contains(&v) {
            moving_in[r] += 1;
        } else {
            fixed_in[r] += 1;
        }
    }
    for v in 0..nv {
        if find(&mut parent, v) == v {
            if fixed_in[v] > 1 {
                return false;
            }
            if moving_in[v] > 0 && fixed_in[v] == 0 {
                return false;
            }
        }
    }
    true
}

/// Build context: the orientation point fixes directions and admissible
/// orders, the value point fixes magnitudes and signs.  For an honest
/// cycle both are the same x.
pub struct BuildCtx {
    pub n: usize,
    pub orientation_x: Vec<Int>,
    pub value_x: Vec<Int>,
    pub branch_values: Vec<Rat>,
}

impl BuildCtx {
    pub fn honest(x: &RamificationVector, branch_values: Vec<Rat>) -> Self {
        BuildCtx {
            n: x.n(),
            orientation_x: x.entries().to_vec(),
            value_x: x.entries().to_vec(),
            branch_values,
        }
    }

    fn edge_data(&self, mask: u32) -> (bool, Int) {
        let f = LinearForm::<Int>::subset_sum(self.n, mask);
        let orient = f.eval(&self.orientation_x);
        let value = f.eval(&self.value_x);
        if orient.is_positive() {
            (true, value)
        } else {
            (false, -value)
        }
    }
}

/// Enumerate the top cells over every trivalent type.
pub fn build_cells(ctx: &BuildCtx, k: usize, ambient: &AmbientSpace) -> Result<Vec<TropicalCell>> {
    let n = ctx.n;
    let r = n - 2;
    if k + 3 > n {
        return Err(Error::InvalidArgument(format!(
            "dimension k={} out of range 0..={}",
            k,
            n - 3
        )));
    }
    if ctx.branch_values.len() != r - k {
        return Err(Error::InvalidArgument(format!(
            "need {} branch values, got {}",
            r - k,
            ctx.branch_values.len()
        )));
    }
    let mut cells = Vec::new();
    for tree in enumerate_trees(n, r)? {
        let structure = tree.structure();
        let (dt, signed) = balance_directed(&tree, structure, |mask| ctx.edge_data(mask))?;
        let nv = dt.num_vertices();
        for moving_mask in subsets_of_size(nv, k) {
            let moving: BTreeSet<usize> = (0..nv).filter(|v| moving_mask & (1 << v) != 0).collect();
            let weight = cell_weight_signed(&tree, &dt, &moving, &signed)?;
            for order in dt.compatible_orders(&moving) {
                let mut images = vec![ImageVal::Param(usize::MAX); nv];
                for (pos, &v) in order.iter().enumerate() {
                    images[v] = ImageVal::Pinned(ctx.branch_values[pos].clone());
                }
                let mut mobiles: Vec<(VertexSig, usize)> = moving
                    .iter()
                    .map(|&v| (dt.structure().vertices[v].signature(), v))
                    .collect();
                mobiles.sort();
                for (i, (_, v)) in mobiles.into_iter().enumerate() {
                    images[v] = ImageVal::Param(i);
                }
                let config = Config {
                    tree: tree.clone(),
                    dt: dt.clone(),
                    signed: signed.clone(),
                    images,
                };
                if !config.feasible() {
                    // defensive geometric prune; compatible orders are
                    // always realizable
                    continue;
                }
                let geom = config.geometry(ambient);
                let moving_vectors = config.mobile_directions(ambient)?;
                cells.push(TropicalCell {
                    config,
                    moving: moving.clone(),
                    order,
                    weight: weight.clone(),
                    geom,
                    moving_vectors,
                });
            }
        }
    }
    Ok(cells)
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

/// Build the cycle with its full face lattice.
pub fn build_tropical_cycle(
    x: &RamificationVector,
    k: usize,
    p: &BranchPoints,
) -> Result<TropicalHurwitzCycle> {
    chamber_of(x)?;
    let n = x.n();
    let r = n - 2;
    if k + 3 > n {
        return Err(Error::InvalidArgument(format!(
            "dimension k={} out of range 0..={}",
            k,
            n - 3
        )));
    }
    if p.points().len() != r - k - 1 {
        return Err(Error::InvalidArgument(format!(
            "need {} branch points for n={}, k={}",
            r - k - 1,
            n,
            k
        )));
    }
    let ambient = AmbientSpace::new(n)?;
    let ctx = BuildCtx::honest(x, p.values());
    let cells = build_cells(&ctx, k, &ambient)?;
    let faces = build_face_lattice(&cells, &ambient);
    Ok(TropicalHurwitzCycle {
        n,
        k,
        x: x.entries().to_vec(),
        branch_values: p.values(),
        ambient,
        cells,
        faces,
    })
}

/// The face lattice below the cells: levels k-1 down to 0, glued by the
/// canonical cell keys.
pub fn build_face_lattice(cells: &[TropicalCell], ambient: &AmbientSpace) -> Vec<Vec<FaceNode>> {
    let k = match cells.first() {
        None => return Vec::new(),
        Some(c) => c.geom.params,
    };
    if k == 0 {
        return Vec::new();
    }
    let mut levels: Vec<Vec<FaceNode>> = Vec::new();
    let mut current: Vec<FaceNode> = Vec::new();
    let mut index: BTreeMap<CellKey, usize> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        for e in 0..cell.config.dt.num_edges() {
            if let Some(cfg) = cell.config.contract_edge(e).expect("contract") {
                let geom = cfg.geometry(ambient);
                let node = FaceNode {
                    config: cfg,
                    geom,
                    parents: vec![ci],
                };
                let key = node.key();
                match index.get(&key) {
                    Some(&i) => {
                        if !current[i].parents.contains(&ci) {
                            current[i].parents.push(ci);
                        }
                    }
                    None => {
                        index.insert(key, current.len());
                        current.push(node);
                    }
                }
            }
        }
    }
    levels.push(current);
    for _ in 0..k.saturating_sub(1) {
        let upper = levels.last().unwrap();
        let mut next: Vec<FaceNode> = Vec::new();
        let mut idx: BTreeMap<CellKey, usize> = BTreeMap::new();
        for (ui, up) in upper.iter().enumerate() {
            for e in 0..up.config.dt.num_edges() {
                if let Some(cfg) = up.config.contract_edge(e).expect("contract") {
                    let geom = cfg.geometry(ambient);
                    let node = FaceNode {
                        config: cfg,
                        geom,
                        parents: vec![ui],
                    };
                    let key = node.key();
                    match idx.get(&key) {
                        Some(&i) => {
                            if !next[i].parents.contains(&ui) {
                                next[i].parents.push(ui);
                            }
                        }
                        None => {
                            idx.insert(key, next.len());
                            next.push(node);
                        }
                    }
                }
            }
        }
        levels.push(next);
    }
    levels.reverse();
    levels
}

impl TropicalHurwitzCycle {
    pub fn num_faces(&self, dim: usize) -> usize {
        if dim == self.k {
            self.cells.len()
        } else {
            self.faces.get(dim).map_or(0, |l| l.len())
        }
    }

    /// Total weighted degree for k = 0: the sum of all point weights.
    pub fn degree(&self) -> Int {
        self.cells
            .iter()
            .fold(Int::zero(), |acc, c| acc + c.weight.clone())
    }
}

/// Primitive generator of the direction quotient of an affine facet,
/// oriented to the same side as `v`.
fn facet_normal(tau_dirs: &[LVec], sigma_dirs: &[LVec], v: &LVec) -> LVec {
    let sigma_sat = linalg::saturate_rowspan(sigma_dirs);
    if tau_dirs.is_empty() {
        let basis = &sigma_sat[0];
        let c = linalg::solve_combination(&linalg::to_rat_rows(&[basis.clone()]), &qvec_of(v))
            .expect("direction lies in the cell span");
        let sign = if c[0].is_negative() {
            -Int::one()
        } else {
            Int::one()
        };
        return basis.iter().map(|x| x.clone() * sign.clone()).collect();
    }
    let tau_sat = linalg::saturate_rowspan(tau_dirs);
    let (u, _) = linalg::quotient_generator(&tau_sat, &sigma_sat, v);
    u
}

fn scaled_int_vector(q: &[Rat]) -> LVec {
    let mut denom = Int::one();
    for x in q {
        denom = num_integer::lcm(denom, x.denom().clone());
    }
    q.iter()
        .map(|x| (x.clone() * Rat::from_integer(denom.clone())).to_integer())
        .collect()
}

/// Balancing report: the offending codimension-one faces; empty exactly
/// when the cycle is balanced.
pub fn check_balancing(cycle: &TropicalHurwitzCycle) -> Vec<String> {
    let weights: Vec<Int> = cycle.cells.iter().map(|c| c.weight.clone()).collect();
    check_balancing_weighted(cycle, &weights)
}

/// Balancing with explicit cell weights (for mutation tests).
pub fn check_balancing_weighted(cycle: &TropicalHurwitzCycle, weights: &[Int]) -> Vec<String> {
    if cycle.k == 0 {
        return Vec::new();
    }
    let facets = match cycle.faces.last() {
        None => return Vec::new(),
        Some(f) => f,
    };
    let mut bad = Vec::new();
    for (fi, facet) in facets.iter().enumerate() {
        let tau_dirs: Vec<LVec> = facet
            .config
            .mobile_directions(&cycle.ambient)
            .expect("facet directions");
        let mut total = vec![Int::zero(); cycle.ambient.dim()];
        for &ci in &facet.parents {
            let cell = &cycle.cells[ci];
            let diff: Vec<Rat> = cell
                .geom
                .relint_point
                .iter()
                .zip(&facet.geom.relint_point)
                .map(|(a, b)| a.clone() - b.clone())
                .collect();
            let v = scaled_int_vector(&diff);
            let u = facet_normal(&tau_dirs, &cell.moving_vectors, &v);
            for (t, ui) in total.iter_mut().zip(&u) {
                *t += weights[ci].clone() * ui.clone();
            }
        }
        if !linalg::in_rowspan(&tau_dirs, &total) {
            bad.push(format!(
                "face {} of type {:?} unbalanced (residual {:?})",
                fi,
                facet.config.tree.splits(),
                total
            ));
        }
    }
    bad
}

/// Edge taxonomy of Hurwitz curves (k = 1 cells), by the moving vertex's
/// incident edge pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveCellClass {
    ConstantEnd,
    LinearEnd,
    LinearEdge,
    QuadraticEdge,
}

/// Classify a k = 1 cell and return the class together with the predicted
/// moving vector of its class formula.
pub fn classify_cell_k1(
    cell: &TropicalCell,
    ambient: &AmbientSpace,
) -> Result<(CurveCellClass, LVec)> {
    if cell.moving.len() != 1 {
        return Err(Error::InvalidArgument("classification needs k = 1".into()));
    }
    let v = *cell.moving.iter().next().unwrap();
    let dt = &cell.config.dt;
    let structure = dt.structure();
    let edges = dt.edges_at(v);
    let reach_mask = |e: usize| -> u32 {
        structure.vertices[v]
            .items
            .iter()
            .find_map(|(it, m)| match it {
                Item::Edge(e2) if *e2 == e => Some(*m),
                _ => None,
            })
            .unwrap()
    };
    match edges.len() {
        1 => {
            let s = structure.edges[edges[0].0].split;
            Ok((CurveCellClass::ConstantEnd, ambient.ray(s)))
        }
        2 => {
            let (e1, out1) = edges[0];
            let (e2, out2) = edges[1];
            let w1 = dt.weight_value(e1).clone();
            let w2 = dt.weight_value(e2).clone();
            let m1 = reach_mask(e1);
            let m2 = reach_mask(e2);
            let s1 = if out1 { -Int::one() } else { Int::one() };
            let s2 = if out2 { -Int::one() } else { Int::one() };
            let mut vec = vec![Int::zero(); ambient.dim()];
            for (i, r) in ambient.ray(m1).iter().enumerate() {
                vec[i] += s1.clone() * w2.clone() * r.clone();
            }
            for (i, r) in ambient.ray(m2).iter().enumerate() {
                vec[i] += s2.clone() * w1.clone() * r.clone();
            }
            let class = if out1 == out2 {
                CurveCellClass::LinearEnd
            } else {
                CurveCellClass::LinearEdge
            };
            Ok((class, vec))
        }
        3 => {
            let mut vec = vec![Int::zero(); ambient.dim()];
            for &(e, out) in &edges {
                let mut coeff = Int::one();
                for &(e2, _) in &edges {
                    if e2 != e {
                        coeff *= dt.weight_value(e2).clone();
                    }
                }
                if out {
                    coeff = -coeff;
                }
                for (i, r) in ambient.ray(reach_mask(e)).iter().enumerate() {
                    vec[i] += coeff.clone() * r.clone();
                }
            }
            Ok((CurveCellClass::QuadraticEdge, vec))
        }
        _ => Err(Error::Degenerate("trivalent type expected".into())),
    }
}

/// Intersect the cycle with a codimension-k skeleton cone: apply the
/// boundary functions cutting the cone as iterated divisors over the face
/// lattice and keep the resulting points in its relative interior.
pub fn skeleton_intersect(
    cycle: &TropicalHurwitzCycle,
    cone: &LabeledTree,
) -> Result<Vec<(QVec, Int)>> {
    let k = cycle.k;
    if cone.n() != cycle.n {
        return Err(Error::InvalidArgument("cone arity mismatch".into()));
    }
    let excess: usize = cone.valences().iter().map(|v| v - 3).sum();
    if excess != k {
        return Err(Error::InvalidArgument(format!(
            "cone has codimension {}, cycle has dimension {}",
            excess, k
        )));
    }
    let functions = crate::fan::cone_cut_functions(cycle.n, cone);
    debug_assert_eq!(functions.len(), k);
    let mut level = k;
    let mut weights: Vec<Int> = cycle.cells.iter().map(|c| c.weight.clone()).collect();
    for phi in &functions {
        let lower = &cycle.faces[level - 1];
        let mut new_weights = vec![Int::zero(); lower.len()];
        for (ti, tau) in lower.iter().enumerate() {
            let tau_dirs = tau.config.mobile_directions(&cycle.ambient)?;
            let mut acc = Rat::zero();
            let mut total = vec![Int::zero(); cycle.ambient.dim()];
            for &pi in &tau.parents {
                let w = weights[pi].clone();
                if w.is_zero() {
                    continue;
                }
                let (sigma_dirs, sigma_splits, sigma_pt) = if level == k {
                    let c = &cycle.cells[pi];
                    (
                        c.moving_vectors.clone(),
                        c.config.tree.splits().to_vec(),
                        c.geom.relint_point.clone(),
                    )
                } else {
                    let f = &cycle.faces[level][pi];
                    (
                        f.config.mobile_directions(&cycle.ambient)?,
                        f.config.tree.splits().to_vec(),
                        f.geom.relint_point.clone(),
                    )
                };
                let diff: Vec<Rat> = sigma_pt
                    .iter()
                    .zip(&tau.geom.relint_point)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect();
                let v = scaled_int_vector(&diff);
                let u = facet_normal(&tau_dirs, &sigma_dirs, &v);
                acc += Rat::from_integer(w.clone())
                    * phi.eval_on_cone(&cycle.ambient, &sigma_splits, &u);
                for (t, ui) in total.iter_mut().zip(&u) {
                    *t += w.clone() * ui.clone();
                }
            }
            if !total.iter().all(|x| x.is_zero()) {
                acc -= phi.eval_on_cone(&cycle.ambient, tau.config.tree.splits(), &total);
            }
            assert!(acc.is_integer(), "affine divisor weight must be integral");
            new_weights[ti] = acc.to_integer();
        }
        weights = new_weights;
        level -= 1;
    }
    let mut out = Vec::new();
    if k == 0 {
        for (ci, cell) in cycle.cells.iter().enumerate() {
            if !weights[ci].is_zero() && &cell.config.tree == cone {
                out.push((cell.geom.relint_point.clone(), weights[ci].clone()));
            }
        }
        return Ok(out);
    }
    for (fi, face) in cycle.faces[0].iter().enumerate() {
        if weights[fi].is_zero() {
            continue;
        }
        if &face.config.tree == cone {
            out.push((face.geom.relint_point.clone(), weights[fi].clone()));
        }
    }
    Ok(out)
}

/// One row of the tropical-classical correspondence: a tropical face and
/// the boundary-stratum data it maps to (tree plus marked-vertex order;
/// positions of moving vertices are forgotten).
#[derive(Clone, Debug)]
pub struct CorrespondenceRow {
    pub dim: usize,
    pub tree: LabeledTree,
    pub pinned_order: Vec<VertexSig>,
}

#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub rows: Vec<CorrespondenceRow>,
    /// Per (dim, tree): tropical face count and classical datum count.
    pub counts: Vec<(usize, LabeledTree, usize, usize)>,
    pub incidence_ok: bool,
}

/// The bijection between i-dimensional tropical faces and classical
/// stratum data: trees with `r - k + i` vertices carrying a compatible
/// order of the `r - k` marked vertices, moving vertices unordered.
pub fn correspondence_report(cycle: &TropicalHurwitzCycle) -> Result<CorrespondenceReport> {
    let x = RamificationVector::new(cycle.x.clone())?;
    let chamber = chamber_of(&x)?;
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    for dim in 0..=cycle.k {
        let mut by_tree: BTreeMap<LabeledTree, usize> = BTreeMap::new();
        if dim == cycle.k {
            for cell in &cycle.cells {
                *by_tree.entry(cell.config.tree.clone()).or_default() += 1;
                rows.push(CorrespondenceRow {
                    dim,
                    tree: cell.config.tree.clone(),
                    pinned_order: pinned_in_image_order(&cell.config),
                });
            }
        } else {
            for face in &cycle.faces[dim] {
                *by_tree.entry(face.config.tree.clone()).or_default() += 1;
                rows.push(CorrespondenceRow {
                    dim,
                    tree: face.config.tree.clone(),
                    pinned_order: pinned_in_image_order(&face.config),
                });
            }
        }
        let n = cycle.n;
        let r = n - 2;
        for tree in enumerate_trees(n, r - cycle.k + dim)? {
            let dt = crate::directed::balance(&tree, &chamber)?;
            let nv = dt.num_vertices();
            let mut classical = 0usize;
            for mask in subsets_of_size(nv, dim) {
                let moving: BTreeSet<usize> =
                    (0..nv).filter(|v| mask & (1 << v) != 0).collect();
                classical += dt.count_orderings(&moving) as usize;
            }
            let tropical = by_tree.get(&tree).copied().unwrap_or(0);
            counts.push((dim, tree, tropical, classical));
        }
    }
    let mut incidence_ok = true;
    for dim in 0..cycle.k {
        for face in &cycle.faces[dim] {
            for &pi in &face.parents {
                let parent_tree = if dim + 1 == cycle.k {
                    &cycle.cells[pi].config.tree
                } else {
                    &cycle.faces[dim + 1][pi].config.tree
                };
                if !face.config.tree.is_contraction_of(parent_tree) {
                    incidence_ok = false;
                }
            }
        }
    }
    Ok(CorrespondenceReport {
        rows,
        counts,
        incidence_ok,
    })
}

fn pinned_in_image_order(config: &Config) -> Vec<VertexSig> {
    let s = config.dt.structure();
    let mut pairs: Vec<(Rat, VertexSig)> = config
        .images
        .iter()
        .enumerate()
        .filter_map(|(v, iv)| match iv {
            ImageVal::Pinned(p) => Some((p.clone(), s.vertices[v].signature())),
            _ => None,
        })
        .collect();
    pairs.sort();
    pairs.into_iter().map(|(_, sig)| sig).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex_m05_vector() -> RamificationVector {
        // x1, x2 > 0 > x3, x4, x5 with x1 > |xi + xj| and x2 < -xi
        RamificationVector::from_i64(&[9, 2, -3, -4, -4]).unwrap()
    }

    #[test]
    fn branch_point_validation() {
        assert!(BranchPoints::new(vec![crate::rat(1), crate::rat(2)]).is_ok());
        assert!(BranchPoints::new(vec![crate::rat(2), crate::rat(1)]).is_err());
        assert!(BranchPoints::new(vec![crate::rat(0)]).is_err());
        let d = BranchPoints::default_for(5, 1);
        assert_eq!(d.points().len(), 1);
        assert_eq!(d.values(), vec![crate::rat(0), crate::rat(1)]);
    }

    #[test]
    fn k0_cycle_degree_matches_tree_formula() {
        let x = RamificationVector::from_i64(&[3, 1, -2, -2]).unwrap();
        let cycle = build_tropical_cycle(&x, 0, &BranchPoints::default_for(4, 0)).unwrap();
        assert_eq!(cycle.degree(), Int::from(6));
        for cell in &cycle.cells {
            assert_eq!(cell.geom.params, 0);
            assert_eq!(cell.geom.vertices.len(), 1);
        }
    }

    #[test]
    fn m05_example_cell_structure() {
        let x = ex_m05_vector();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        // cone spanned by v12 and v34: two constant ends, one linear edge
        let t1234 = LabeledTree::new(5, [0b00011u32, 0b01100]).unwrap();
        let in_cone: Vec<&TropicalCell> =
            cycle.cells.iter().filter(|c| c.config.tree == t1234).collect();
        assert_eq!(in_cone.len(), 3);
        let mut classes: Vec<CurveCellClass> = in_cone
            .iter()
            .map(|c| classify_cell_k1(c, &cycle.ambient).unwrap().0)
            .collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                CurveCellClass::ConstantEnd,
                CurveCellClass::ConstantEnd,
                CurveCellClass::LinearEdge
            ]
        );
        // cone spanned by v23 and v45: two constant and two linear ends
        let t2345 = LabeledTree::new(5, [0b00110u32, 0b11000]).unwrap();
        let in_cone2: Vec<&TropicalCell> =
            cycle.cells.iter().filter(|c| c.config.tree == t2345).collect();
        assert_eq!(in_cone2.len(), 4);
        let mut classes2: Vec<CurveCellClass> = in_cone2
            .iter()
            .map(|c| classify_cell_k1(c, &cycle.ambient).unwrap().0)
            .collect();
        classes2.sort();
        assert_eq!(
            classes2,
            vec![
                CurveCellClass::ConstantEnd,
                CurveCellClass::ConstantEnd,
                CurveCellClass::LinearEnd,
                CurveCellClass::LinearEnd
            ]
        );
    }

    #[test]
    fn predicted_moving_vectors_match_generic() {
        let x = ex_m05_vector();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        for cell in &cycle.cells {
            let (_, predicted) = classify_cell_k1(cell, &cycle.ambient).unwrap();
            let generic = &cell.moving_vectors[0];
            let neg: LVec = generic.iter().map(|v| -v.clone()).collect();
            assert!(predicted == *generic || predicted == neg);
        }
    }

    #[test]
    fn cell_counts_match_ordering_sums() {
        let x = ex_m05_vector();
        let chamber = chamber_of(&x).unwrap();
        for k in 0..=2usize {
            let cycle = build_tropical_cycle(&x, k, &BranchPoints::default_for(5, k)).unwrap();
            for tree in enumerate_trees(5, 3).unwrap() {
                let dt = crate::directed::balance(&tree, &chamber).unwrap();
                let expected: u64 = subsets_of_size(dt.num_vertices(), k)
                    .into_iter()
                    .map(|mask| {
                        let moving: BTreeSet<usize> = (0..dt.num_vertices())
                            .filter(|v| mask & (1 << v) != 0)
                            .collect();
                        dt.count_orderings(&moving)
                    })
                    .sum();
                let got = cycle.cells.iter().filter(|c| c.config.tree == tree).count() as u64;
                assert_eq!(got, expected, "k={} tree={:?}", k, tree);
            }
        }
    }

    #[test]
    fn hurwitz_curve_is_balanced_and_six_valent() {
        let x = ex_m05_vector();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        assert!(check_balancing(&cycle).is_empty());
        for face in &cycle.faces[0] {
            assert_eq!(face.parents.len(), 6, "curve vertices are six-valent");
        }
        let mut weights: Vec<Int> = cycle.cells.iter().map(|c| c.weight.clone()).collect();
        weights[0] += Int::one();
        assert!(!check_balancing_weighted(&cycle, &weights).is_empty());
    }

    #[test]
    fn parallelism_of_cells_with_same_moving_set() {
        let x = ex_m05_vector();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        let mut by_key: BTreeMap<(Vec<u32>, Vec<usize>), Vec<&TropicalCell>> = BTreeMap::new();
        for c in &cycle.cells {
            by_key
                .entry((
                    c.config.tree.splits().to_vec(),
                    c.moving.iter().copied().collect(),
                ))
                .or_default()
                .push(c);
        }
        for group in by_key.values() {
            for pair in group.windows(2) {
                assert_eq!(pair[0].moving_vectors, pair[1].moving_vectors);
            }
        }
    }

    #[test]
    fn p_invariance_of_type_weight_multiset() {
        let x = ex_m05_vector();
        let p1 = BranchPoints::default_for(5, 1);
        let p2 = BranchPoints::new(vec![crate::rat(7)]).unwrap();
        let c1 = build_tropical_cycle(&x, 1, &p1).unwrap();
        let c2 = build_tropical_cycle(&x, 1, &p2).unwrap();
        let sig = |c: &TropicalHurwitzCycle| {
            let mut v: Vec<(Vec<u32>, Vec<usize>, Vec<usize>, Int)> = c
                .cells
                .iter()
                .map(|cell| {
                    (
                        cell.config.tree.splits().to_vec(),
                        cell.moving.iter().copied().collect(),
                        cell.order.clone(),
                        cell.weight.clone(),
                    )
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(sig(&c1), sig(&c2));
    }

    #[test]
    fn skeleton_points_on_m05_curve() {
        let x = ex_m05_vector();
        let chamber = chamber_of(&x).unwrap();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        for cone in enumerate_trees(5, 2).unwrap() {
            let pts = skeleton_intersect(&cycle, &cone).unwrap();
            let dt = crate::directed::balance(&cone, &chamber).unwrap();
            let m = dt.count_orderings(&Default::default());
            assert_eq!(pts.len(), m as usize, "cone {:?}", cone);
            let val_factor: Int = cone
                .valences()
                .iter()
                .map(|&v| Int::from(v as i64 - 2))
                .product();
            let expected = val_factor * dt.phi_value();
            for (_, w) in &pts {
                assert_eq!(w, &expected, "cone {:?}", cone);
            }
        }
    }

    #[test]
    fn correspondence_counts_and_incidence() {
        let x = ex_m05_vector();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        let report = correspondence_report(&cycle).unwrap();
        assert!(report.incidence_ok);
        for (dim, tree, tropical, classical) in &report.counts {
            assert_eq!(tropical, classical, "dim={} tree={:?}", dim, tree);
        }
    }
}

#[cfg(test)]
mod correspondence_worked_case {
    use super::*;

    /// The worked one-dimensional case: inside the constant-end cell whose
    /// moving vertex carries ends 4 and 5, the image order of the moving
    /// vertex against the pinned vertex at 1 switches exactly where the
    /// length of the {4,5}-edge equals -1/(x4+x5).  The two sides are the
    /// two boundary-stratum refinements joined through the order-collision
    /// configuration.
    #[test]
    fn strata_switch_inside_a_cell() {
        let x = RamificationVector::from_i64(&[9, 2, -3, -4, -4]).unwrap();
        let cycle = build_tropical_cycle(&x, 1, &BranchPoints::default_for(5, 1)).unwrap();
        let cone = LabeledTree::new(5, [0b00110u32, 0b11000]).unwrap();
        let cell = cycle
            .cells
            .iter()
            .find(|c| {
                c.config.tree == cone && {
                    let v = *c.moving.iter().next().unwrap();
                    let ends = c.config.dt.structure().vertices[v].ends();
                    ends.contains(&3) && ends.contains(&4)
                }
            })
            .expect("constant end with moving ends 4,5");
        // the moving vertex ranges over (0, inf); it crosses the second
        // pinned image at t = 1
        let crossing = vec![crate::rat(1)];
        let split_45 = normalize_split(5, 0b11000);
        let (_, expr) = cell
            .geom
            .lengths
            .iter()
            .find(|(s, _)| *s == split_45)
            .unwrap();
        let ell = expr.eval(&crossing);
        // -1/(x4+x5) at x is 1/8
        let form = LinearForm::<Int>::subset_sum(5, 0b11000);
        let expected = -Rat::new(Int::from(1), form.eval(x.entries()));
        assert_eq!(ell, expected);
        // on the two sides of the crossing the image order differs: the
        // moving image sits below the pinned value 1 on one side and
        // above it on the other, giving the two stratum refinements
        let below = expr.eval(&vec![crate::rat(1) / crate::rat(2)]);
        let above = expr.eval(&vec![crate::rat(2)]);
        assert!(below < ell && ell < above);
    }
}

#[cfg(test)]
mod degree_bridge {
    use super::*;
    use crate::classical::double_hurwitz_number;
    use crate::oracle;

    /// k = 0 degrees match the marked-cover count, which reconciles with
    /// the factorization oracle.
    #[test]
    fn k0_degree_reconciles_with_oracle() {
        for x in [
            vec![3i64, 1, -2, -2],
            vec![2, 2, -1, -3],
            vec![2, 1, -3],
            vec![1, 1, 2, -2, -2],
        ] {
            let rv = RamificationVector::from_i64(&x).unwrap();
            if chamber_of(&rv).is_err() {
                continue;
            }
            let n = rv.n();
            let cycle = build_tropical_cycle(&rv, 0, &BranchPoints::default_for(n, 0)).unwrap();
            let classical = double_hurwitz_number(&rv).unwrap();
            assert_eq!(cycle.degree(), classical, "x={:?}", x);
            let rec = oracle::reconcile(&rv, &classical).unwrap();
            assert!(rec.ok, "x={:?}", x);
        }
    }
}
