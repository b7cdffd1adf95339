//! Brute-force double Hurwitz numbers by counting transitive transposition
//! factorizations in the symmetric group.
//!
//! This is the independent check for the tree formula: the genus-0 count
//! of degree-d covers with profiles `lambda+` over 0 and `lambda-` over
//! infinity and `r = n - 2` simple branch points equals
//! `(1/d!) #{(s, t_1..t_r) : s of type lambda+, t_i transpositions,
//! t_r...t_1 s of type lambda-, all together transitive}`.
//! The count weights each cover by `1/|Aut|`, so it is a rational number;
//! the tree formula counts covers with marked preimages and reconciles
//! with the oracle after multiplying by `|Aut(x+)| * |Aut(x-)|`.

use num_traits::Signed;

use crate::chamber::RamificationVector;
use crate::error::{Error, Result};
use crate::scalar::factorial;
use crate::{Int, Rat};

/// Default degree guard; the CLI can override via `HURWITZ_MAX_DEGREE`.
pub const DEFAULT_MAX_DEGREE: u32 = 8;
/// Guard on the raw enumeration size `C(d,2)^r`.
const MAX_ENUMERATION: u64 = 2_000_000_000;

/// The combinatorial data of a factorization count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationInstance {
    pub degree: u32,
    pub lambda_plus: Vec<u32>,
    pub lambda_minus: Vec<u32>,
    pub transpositions: usize,
}

impl FactorizationInstance {
    pub fn from_vector(x: &RamificationVector) -> Result<Self> {
        let mut lp: Vec<u32> = Vec::new();
        let mut lm: Vec<u32> = Vec::new();
        for v in x.entries() {
            let a = i64::try_from(v.abs())
                .map_err(|_| Error::Resource("ramification entry exceeds i64".into()))?
                as u32;
            if v.is_positive() {
                lp.push(a);
            } else {
                lm.push(a);
            }
        }
        if lp.is_empty() || lm.is_empty() {
            return Err(Error::InvalidArgument(
                "both ramification profiles must be nonempty".into(),
            ));
        }
        lp.sort_unstable_by(|a, b| b.cmp(a));
        lm.sort_unstable_by(|a, b| b.cmp(a));
        let d: u32 = lp.iter().sum();
        debug_assert_eq!(d, lm.iter().sum::<u32>());
        Ok(FactorizationInstance {
            degree: d,
            lambda_plus: lp,
            lambda_minus: lm,
            transpositions: x.r(),
        })
    }
}

type Perm = Vec<u8>;

fn perm_of_cycle_type(d: u32, parts: &[u32]) -> Perm {
    let mut p: Perm = (0..d as u8).collect();
    let mut base = 0u8;
    for &part in parts {
        for i in 0..part as u8 {
            p[(base + i) as usize] = base + (i + 1) % part as u8;
        }
        base += part as u8;
    }
    p
}

fn cycle_type(p: &Perm) -> Vec<u32> {
    let d = p.len();
    let mut seen = vec![false; d];
    let mut parts = Vec::new();
    for s in 0..d {
        if seen[s] {
            continue;
        }
        let mut len = 0u32;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Size of the conjugacy class of cycle type `parts` in S_d.
fn class_size(d: u32, parts: &[u32]) -> Int {
    // d! / (prod parts * prod multiplicity!)
    let mut z = Int::from(1);
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        let mult = (j - i) as u64;
        z *= factorial::<Int>(mult);
        for _ in i..j {
            z *= Int::from(parts[i]);
        }
        i = j;
    }
    factorial::<Int>(d as u64) / z
}

struct DfsState {
    d: usize,
    target: Vec<u32>,
    transpositions: Vec<(u8, u8)>,
    sigma_cycles: Vec<(u8, u8)>,
    path: Vec<(u8, u8)>,
    count: u64,
}

impl DfsState {
    fn transitive(&self) -> bool {
        let mut parent: Vec<u8> = (0..self.d as u8).collect();
        fn find(parent: &mut Vec<u8>, i: u8) -> u8 {
            if parent[i as usize] != i {
                let r = find(parent, parent[i as usize]);
                parent[i as usize] = r;
            }
            parent[i as usize]
        }
        let mut components = self.d;
        let unite = |parent: &mut Vec<u8>, a: u8, b: u8, components: &mut usize| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra != rb {
                parent[ra as usize] = rb;
                *components -= 1;
            }
        };
        for &(a, b) in self.sigma_cycles.iter().chain(self.path.iter()) {
            unite(&mut parent, a, b, &mut components);
        }
        components == 1
    }

    fn dfs(&mut self, current: &Perm, depth: usize) {
        if depth == 0 {
            if cycle_type(current) == self.target && self.transitive() {
                self.count += 1;
            }
            return;
        }
        let transpositions = self.transpositions.clone();
        for &(a, b) in &transpositions {
            // next = (a b) ∘ current
            let mut next = current.clone();
            for v in next.iter_mut() {
                if *v == a {
                    *v = b;
                } else if *v == b {
                    *v = a;
                }
            }
            self.path.push((a, b));
            self.dfs(&next, depth - 1);
            self.path.pop();
        }
    }
}

/// The orbifold double Hurwitz number of `x`: covers weighted by
/// `1/|Aut|`, i.e. the transitive factorization count divided by `d!`.
pub fn oracle_count(x: &RamificationVector) -> Result<Rat> {
    oracle_count_guarded(x, DEFAULT_MAX_DEGREE)
}

pub fn oracle_count_guarded(x: &RamificationVector, max_degree: u32) -> Result<Rat> {
    let inst = FactorizationInstance::from_vector(x)?;
    if inst.degree > max_degree {
        return Err(Error::Resource(format!(
            "degree {} exceeds guard {}",
            inst.degree, max_degree
        )));
    }
    let d = inst.degree;
    let pairs = (d as u64) * (d as u64 - 1) / 2;
    let size = pairs.checked_pow(inst.transpositions as u32);
    match size {
        Some(s) if s <= MAX_ENUMERATION => {}
        _ => {
            return Err(Error::Resource(format!(
                "enumeration of {}^{} factorizations exceeds guard",
                pairs, inst.transpositions
            )))
        }
    }
    // Conjugating a factorization tuple by any permutation preserves all
    // conditions, so it suffices to fix one representative of lambda+ and
    // scale by the class size.
    let sigma = perm_of_cycle_type(d, &inst.lambda_plus);
    let mut sigma_cycles = Vec::new();
    let mut base = 0u8;
    for &part in &inst.lambda_plus {
        for i in 0..part.saturating_sub(1) as u8 {
            sigma_cycles.push((base + i, base + i + 1));
        }
        base += part as u8;
    }
    let transpositions: Vec<(u8, u8)> = (0..d as u8)
        .flat_map(|a| (a + 1..d as u8).map(move |b| (a, b)))
        .collect();
    let mut state = DfsState {
        d: d as usize,
        target: inst.lambda_minus.clone(),
        transpositions,
        sigma_cycles,
        path: Vec::new(),
        count: 0,
    };
    state.dfs(&sigma, inst.transpositions);
    let total = Int::from(state.count) * class_size(d, &inst.lambda_plus);
    Ok(Rat::new(total, factorial::<Int>(d as u64)))
}

/// Outcome of comparing the tree formula against the oracle under the
/// marked-preimages convention.
#[derive(Clone, Debug)]
pub struct Reconciliation {
    pub tree_value: Int,
    pub orbifold_count: Rat,
    pub aut_factor: Int,
    pub ok: bool,
}

/// The tree formula counts covers with all preimages of 0 and infinity
/// marked; the oracle weights unmarked covers by `1/|Aut|`.  They agree
/// after scaling the oracle by `|Aut(x+)| * |Aut(x-)|`.
pub fn reconcile(x: &RamificationVector, tree_value: &Int) -> Result<Reconciliation> {
    let orbifold = oracle_count(x)?;
    let aut = x.aut_factor();
    let scaled = orbifold.clone() * Rat::from_integer(aut.clone());
    let ok = scaled == Rat::from_integer(tree_value.clone());
    Ok(Reconciliation {
        tree_value: tree_value.clone(),
        orbifold_count: orbifold,
        aut_factor: aut,
        ok,
    })
}


#[cfg(test)]
mod integrality {
    use super::*;

    #[test]
    fn distinct_entries_give_integral_counts() {
        for x in [
            vec![3i64, 1, -2, -2], // aut 2: orbifold integral here too
            vec![4, 1, -2, -3],    // all distinct: aut 1
            vec![3, 2, -1, -4],
        ] {
            let rv = RamificationVector::from_i64(&x).unwrap();
            let c = oracle_count(&rv).unwrap();
            if rv.aut_factor() == Int::from(1) {
                assert!(
                    c.is_integer(),
                    "distinct-labeled count must be integral: {:?} -> {}",
                    x,
                    c
                );
            }
        }
        // degenerate two-entry input is rejected before the oracle runs
        assert!(RamificationVector::from_i64(&[2, -2]).is_err());
    }
}
