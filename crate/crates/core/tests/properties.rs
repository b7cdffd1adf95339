//! Property tests for the structural invariants: canonical encodings,
//! balancing, ordering counts, oracle symmetries, and serialization.

use std::collections::BTreeSet;

use proptest::prelude::*;

use hurwitz_cycles::chamber::{chamber_of, RamificationVector};
use hurwitz_cycles::classical::hurwitz_cycle;
use hurwitz_cycles::directed::balance;
use hurwitz_cycles::oracle;
use hurwitz_cycles::poly::{IntPolynomial, LinearForm};
use hurwitz_cycles::serialize::{classical_from_json, classical_to_json};
use hurwitz_cycles::trees::{enumerate_trees, mask_to_labels, LabeledTree};
use hurwitz_cycles::Int;

fn off_wall_vector(n: usize) -> impl Strategy<Value = RamificationVector> {
    proptest::collection::vec(-6i64..=6, n - 1).prop_filter_map("off-wall", move |mut v| {
        let last: i64 = -v.iter().sum::<i64>();
        v.push(last);
        let rv = RamificationVector::from_i64(&v).ok()?;
        chamber_of(&rv).ok()?;
        Some(rv)
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabel_restore_is_identity(
        idx in 0usize..15,
        perm in permutation(5),
    ) {
        let trees = enumerate_trees(5, 3).unwrap();
        let t = &trees[idx % trees.len()];
        let mut inv = vec![0usize; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        prop_assert_eq!(&t.relabel(&perm).relabel(&inv), t);
    }

    #[test]
    fn balanced_weights_are_absolute_subset_sums(
        x in off_wall_vector(5),
        idx in 0usize..15,
    ) {
        let chamber = chamber_of(&x).unwrap();
        let trees = enumerate_trees(5, 3).unwrap();
        let t = &trees[idx % trees.len()];
        let dt = balance(t, &chamber).unwrap();
        for (e, edge) in dt.structure().edges.iter().enumerate() {
            let raw: Int = mask_to_labels(edge.split)
                .iter()
                .map(|&i| x.entries()[i].clone())
                .fold(Int::from(0), |a, b| a + b);
            prop_assert_eq!(dt.weight_value(e), &num_traits::sign::abs(raw));
            prop_assert_eq!(dt.weight_form(e).eval(x.entries()), dt.weight_value(e).clone());
        }
        // phi is homogeneous of degree = number of internal edges and
        // positive at the sample
        let phi = dt.phi();
        prop_assert_eq!(phi.homogeneous_degree(), Some(t.num_internal_edges()));
        prop_assert_eq!(phi.sign_at(x.entries()), 1);
    }

    #[test]
    fn ordering_count_equals_bruteforce(
        x in off_wall_vector(6),
        idx in 0usize..105,
        moving_mask in 0u32..16,
    ) {
        let chamber = chamber_of(&x).unwrap();
        let trees = enumerate_trees(6, 4).unwrap();
        let t = &trees[idx % trees.len()];
        let dt = balance(t, &chamber).unwrap();
        let moving: BTreeSet<usize> = (0..dt.num_vertices())
            .filter(|v| moving_mask & (1 << v) != 0)
            .collect();
        let fixed: Vec<usize> = (0..dt.num_vertices())
            .filter(|v| !moving.contains(v))
            .collect();
        // brute force over all permutations of the fixed vertices
        let mut brute = 0u64;
        let mut perm: Vec<usize> = (0..fixed.len()).collect();
        loop {
            let order: Vec<usize> = perm.iter().map(|&i| fixed[i]).collect();
            let ok = (0..order.len()).all(|a| {
                (a + 1..order.len()).all(|b| !dt.reaches(order[b], order[a]))
            });
            if ok {
                brute += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        prop_assert_eq!(dt.count_orderings(&moving), brute);
    }

    #[test]
    fn oracle_symmetries(
        x in off_wall_vector(4).prop_filter("degree guard", |x| x.degree() <= Int::from(6)),
        perm in permutation(4),
    ) {
        let base = oracle::oracle_count(&x).unwrap();
        let permuted: Vec<Int> = perm.iter().map(|&i| x.entries()[i].clone()).collect();
        let negated: Vec<Int> = x.entries().iter().map(|v| -v.clone()).collect();
        let xp = RamificationVector::new(permuted).unwrap();
        let xn = RamificationVector::new(negated).unwrap();
        prop_assert_eq!(oracle::oracle_count(&xp).unwrap(), base.clone());
        prop_assert_eq!(oracle::oracle_count(&xn).unwrap(), base);
    }

    #[test]
    fn polynomial_evaluation_homomorphism(
        a_mask in 1u32..15,
        b_mask in 1u32..15,
        x in off_wall_vector(5),
    ) {
        let p = LinearForm::<Int>::subset_sum(5, a_mask).to_polynomial();
        let q = LinearForm::<Int>::subset_sum(5, b_mask).to_polynomial();
        let at = |f: &IntPolynomial<Int>| f.eval(x.entries());
        prop_assert_eq!(at(&p.add(&q)), at(&p) + at(&q));
        prop_assert_eq!(at(&p.mul(&q)), at(&p) * at(&q));
        prop_assert_eq!(at(&p.sub(&p)), Int::from(0));
    }

    #[test]
    fn classical_serialization_roundtrip(
        x in off_wall_vector(5),
        k in 0usize..3,
    ) {
        let chamber = chamber_of(&x).unwrap();
        let h = hurwitz_cycle(&chamber, k).unwrap();
        let json = classical_to_json(&h);
        let back = classical_from_json(&json).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(classical_to_json(&back), json);
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The tree count for every valence profile matches brute force over
/// compatible split systems of the right size.
#[test]
fn enumeration_matches_bruteforce_split_systems() {
    for n in 4..=6usize {
        for v in 1..=n - 2 {
            let trees = enumerate_trees(n, v).unwrap();
            let brute = brute_force_count(n, v);
            assert_eq!(trees.len(), brute, "n={} v={}", n, v);
        }
    }
    // pinned values from the double factorial and direct counts
    assert_eq!(enumerate_trees(5, 3).unwrap().len(), 15);
    assert_eq!(enumerate_trees(6, 4).unwrap().len(), 105);
    assert_eq!(enumerate_trees(7, 5).unwrap().len(), 945);
    assert_eq!(enumerate_trees(5, 2).unwrap().len(), 10);
    assert_eq!(enumerate_trees(5, 1).unwrap().len(), 1);
}

fn brute_force_count(n: usize, v: usize) -> usize {
    // choose v-1 pairwise-compatible canonical splits, then keep systems
    // whose tree has all valences at least three
    let candidates: Vec<u32> = (0..(1u32 << (n - 1)))
        .filter(|&m| {
            let c = m.count_ones() as usize;
            c >= 2 && c <= n - 2
        })
        .collect();
    let mut count = 0usize;
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == v - 1 {
            if LabeledTree::new(n, chosen.iter().copied())
                .map(|t| t.valences().iter().all(|&x| x >= 3))
                .unwrap_or(false)
            {
                count += 1;
            }
            continue;
        }
        for i in start..candidates.len() {
            let c = candidates[i];
            if chosen
                .iter()
                .all(|&s| s & c == 0 || s & c == s || s & c == c)
            {
                let mut next = chosen.clone();
                next.push(c);
                stack.push((i + 1, next));
            }
        }
    }
    count
}
