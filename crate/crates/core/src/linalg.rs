//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is sized for desk scale (dimensions below ~25): Bareiss
//! determinants, gcds of maximal minors, column Hermite reduction for
//! saturated integer kernels, and primitive generators of rank-one lattice
//! quotients.  The latter is what makes balancing checks and divisor
//! weights honest with respect to the ray lattice rather than the standard
//! integer lattice.

use itertools::Itertools;
use num_rational::Ratio;
use num_traits::Zero;

use crate::scalar::Scalar;

pub type Row<S> = Vec<S>;

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn det<S: Scalar>(a: &[Row<S>]) -> S {
    let n = a.len();
    if n == 0 {
        return S::one();
    }
    assert!(a.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    let mut m: Vec<Row<S>> = a.to_vec();
    let mut sign = S::one();
    let mut prev = S::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][k] = S::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// gcd of the absolute values of all maximal minors (size = min(rows, cols)).
/// Returns zero when the matrix has deficient rank, and one for a matrix
/// with zero rows (the empty minor).
pub fn gcd_maximal_minors<S: Scalar>(a: &[Row<S>]) -> S {
    let rows = a.len();
    if rows == 0 {
        return S::one();
    }
    let cols = a[0].len();
    let k = rows.min(cols);
    let mut g = S::zero();
    if k == rows {
        for combo in (0..cols).combinations(k) {
            let sub: Vec<Row<S>> = a
                .iter()
                .map(|r| combo.iter().map(|&j| r[j].clone()).collect())
                .collect();
            g = g.gcd(&det(&sub));
            if g.is_one() {
                return g;
            }
        }
    } else {
        for combo in (0..rows).combinations(k) {
            let sub: Vec<Row<S>> = combo.iter().map(|&i| a[i].clone()).collect();
            g = g.gcd(&det(&sub));
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

/// Column Hermite reduction `A * U = H` with `U` unimodular; `H` is in
/// column echelon form.  Returns `(h, u)`.
pub fn col_hermite<S: Scalar>(a: &[Row<S>]) -> (Vec<Row<S>>, Vec<Row<S>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Row<S>> = a.to_vec();
    // u starts as the identity on columns
    let mut u: Vec<Row<S>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // Euclid over the entries h[r][pivot_col..]
        loop {
            let mut min_col = None;
            for c in pivot_col..cols {
                if !h[r][c].is_zero() {
                    min_col = match min_col {
                        None => Some(c),
                        Some(mc) if h[r][c].abs() < h[r][mc].abs() => Some(c),
                        keep => keep,
                    };
                }
            }
            let mc = match min_col {
                None => break,
                Some(mc) => mc,
            };
            // bring the minimal column to the pivot position
            if mc != pivot_col {
                for row in h.iter_mut() {
                    row.swap(mc, pivot_col);
                }
                for row in u.iter_mut() {
                    row.swap(mc, pivot_col);
                }
            }
            let mut done = true;
            let pivot = h[r][pivot_col].clone();
            for c in pivot_col + 1..cols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&h[r][c], &pivot);
                if !q.is_zero() {
                    for row in h.iter_mut() {
                        let t = row[pivot_col].clone() * q.clone();
                        row[c] = row[c].clone() - t;
                    }
                    for row in u.iter_mut() {
                        let t = row[pivot_col].clone() * q.clone();
                        row[c] = row[c].clone() - t;
                    }
                }
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    (h, u)
}

/// Basis (as rows) of the saturated kernel lattice `{ w : A w = 0 }`.
pub fn integer_kernel<S: Scalar>(a: &[Row<S>]) -> Vec<Row<S>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        // kernel of the empty map is everything
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
    }
    let (h, u) = col_hermite(a);
    let mut kernel = Vec::new();
    for c in 0..cols {
        if (0..rows).all(|r| h[r][c].is_zero()) {
            kernel.push((0..cols).map(|r| u[r][c].clone()).collect());
        }
    }
    kernel
}

/// Basis of the saturation `span_Q(rows) ∩ Z^D`, as rows.
pub fn saturate_rowspan<S: Scalar>(rows: &[Row<S>]) -> Vec<Row<S>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let k = integer_kernel(rows);
    if k.is_empty() {
        // full rank: saturation is all of Z^D
        let d = rows[0].len();
        return (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
    }
    integer_kernel(&k)
}

/// Rank over the rationals.
pub fn rank<S: Scalar>(a: &[Row<S>]) -> usize {
    let rows: Vec<Vec<Ratio<S>>> = a
        .iter()
        .map(|r| r.iter().map(|v| Ratio::from_integer(v.clone())).collect())
        .collect();
    rank_rat(&rows)
}

pub fn rank_rat<S: Scalar>(a: &[Vec<Ratio<S>>]) -> usize {
    let mut m = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / inv.clone();
                for j in c..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solve `sum_i c_i rows_i = target` over the rationals; `None` if the
/// target is outside the row span.  Rows need not be independent; one
/// valid coefficient vector is returned.
pub fn solve_combination<S: Scalar>(
    rows: &[Vec<Ratio<S>>],
    target: &[Ratio<S>],
) -> Option<Vec<Ratio<S>>> {
    let k = rows.len();
    let d = target.len();
    // Augmented system over the transpose: columns are the rows.
    let mut m: Vec<Vec<Ratio<S>>> = (0..d)
        .map(|j| {
            let mut row: Vec<Ratio<S>> = (0..k).map(|i| rows[i][j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..k {
        let piv = (r..d).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for i in 0..d {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / inv.clone();
                for j in c..=k {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == d {
            break;
        }
    }
    // Consistency: rows below r must have zero rhs.
    for row in m.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut coeffs = vec![Ratio::from_integer(S::zero()); k];
    for &(pr, pc) in &pivots {
        coeffs[pc] = m[pr][k].clone() / m[pr][pc].clone();
    }
    Some(coeffs)
}

pub fn to_rat_rows<S: Scalar>(rows: &[Row<S>]) -> Vec<Vec<Ratio<S>>> {
    rows.iter()
        .map(|r| r.iter().map(|v| Ratio::from_integer(v.clone())).collect())
        .collect()
}

/// Is `v` inside the rational row span?
pub fn in_rowspan<S: Scalar>(rows: &[Row<S>], v: &[S]) -> bool {
    let rr = to_rat_rows(rows);
    let tv: Vec<Ratio<S>> = v.iter().map(|x| Ratio::from_integer(x.clone())).collect();
    solve_combination(&rr, &tv).is_some()
}

/// Extended gcd: returns `(g, a, b)` with `a*x + b*y = g >= 0`.
pub fn egcd<S: Scalar>(x: &S, y: &S) -> (S, S, S) {
    if y.is_zero() {
        if x.is_negative() {
            return (-x.clone(), -S::one(), S::zero());
        }
        return (x.clone(), S::one(), S::zero());
    }
    let (q, r) = x.div_rem(y);
    let (g, a, b) = egcd(y, &r);
    // g = a*y + b*(x - q*y) = b*x + (a - b*q)*y
    let na = b.clone();
    let nb = a - b * q;
    (g, na, nb)
}

/// An integer vector `u` with `f · u = 1`, for primitive `f`.
pub fn bezout_solve<S: Scalar>(f: &[S]) -> Vec<S> {
    let mut g = S::zero();
    let mut coeffs = vec![S::zero(); f.len()];
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        let (ng, a, b) = egcd(&g, fi);
        for c in coeffs.iter_mut() {
            *c = c.clone() * a.clone();
        }
        coeffs[i] = coeffs[i].clone() + b;
        g = ng;
        if g.is_one() {
            break;
        }
    }
    assert!(g.is_one(), "bezout_solve needs a primitive functional");
    coeffs
}

/// Primitive generator of the rank-one quotient `L_sigma / L_tau`,
/// oriented to the same side as `v`.
///
/// `tau_sat` and `sigma_sat` are saturated lattice bases (rows) with
/// `rank(sigma) = rank(tau) + 1`, and `v` lies in `L_sigma` but not in
/// `span(tau)`.  Returns `(u, index_of_v)` where `u` generates the
/// quotient and `index_of_v = [L_sigma : L_tau + Z v] > 0`.
pub fn quotient_generator<S: Scalar>(
    tau_sat: &[Row<S>],
    sigma_sat: &[Row<S>],
    v: &[S],
) -> (Row<S>, S) {
    let m = sigma_sat.len();
    assert_eq!(tau_sat.len() + 1, m, "quotient must have rank one");
    let sigma_rat = to_rat_rows(sigma_sat);
    // Express tau basis and v in sigma coordinates; all must be integral.
    let to_coords = |w: &[S]| -> Row<S> {
        let tv: Vec<Ratio<S>> = w.iter().map(|x| Ratio::from_integer(x.clone())).collect();
        let c = solve_combination(&sigma_rat, &tv).expect("vector must lie in span(sigma)");
        c.into_iter()
            .map(|r| {
                assert!(r.is_integer(), "vector must lie in the sigma lattice");
                r.to_integer()
            })
            .collect()
    };
    let tau_g: Vec<Row<S>> = tau_sat.iter().map(|t| to_coords(t)).collect();
    let v_g = to_coords(v);
    // Primitive functional vanishing on tau.
    let f_basis = integer_kernel(&tau_g);
    assert_eq!(f_basis.len(), 1, "tau must have corank one in sigma");
    let mut f = f_basis.into_iter().next().unwrap();
    let mut s = f
        .iter()
        .zip(&v_g)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    assert!(!s.is_zero(), "v must not lie in span(tau)");
    if s.is_negative() {
        for c in f.iter_mut() {
            *c = -c.clone();
        }
        s = -s;
    }
    let u_g = bezout_solve(&f);
    // Map back to ambient coordinates.
    let d = sigma_sat[0].len();
    let mut u = vec![S::zero(); d];
    for (ci, row) in u_g.iter().zip(sigma_sat) {
        for (uj, rj) in u.iter_mut().zip(row) {
            *uj = uj.clone() + ci.clone() * rj.clone();
        }
    }
    (u, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = vec![vec![2i64, 3], vec![1, 4]];
        assert_eq!(det(&m), 5);
        let m3 = vec![vec![1i64, 2, 3], vec![4, 5, 6], vec![7, 8, 10]];
        assert_eq!(det(&m3), -3);
        assert_eq!(det::<i64>(&[]), 1);
    }

    #[test]
    fn minors_gcd() {
        let m = vec![vec![2i64, 0, 4], vec![0, 6, 2]];
        // minors: det[[2,0],[0,6]]=12, det[[2,4],[0,2]]=4, det[[0,4],[6,2]]=-24
        assert_eq!(gcd_maximal_minors(&m), 4);
        let deficient = vec![vec![1i64, 2], vec![2, 4]];
        assert_eq!(gcd_maximal_minors(&deficient), 0);
    }

    #[test]
    fn kernel_and_saturation() {
        // x + 2y + 3z = 0 has saturated kernel of rank 2
        let a = vec![vec![1i64, 2, 3]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for w in &k {
            assert_eq!(w[0] + 2 * w[1] + 3 * w[2], 0);
        }
        // saturation of span{(2,4)} is span{(1,2)}
        let sat = saturate_rowspan(&[vec![2i64, 4]]);
        assert_eq!(sat.len(), 1);
        assert_eq!(sat[0][0].abs() * 2, sat[0][1].abs());
        assert_eq!(sat[0][0].abs(), 1);
    }

    #[test]
    fn combination_solver() {
        let rows = to_rat_rows(&[vec![1i64, 0, 1], vec![0, 1, 1]]);
        let t: Vec<Ratio<i64>> = vec![
            Ratio::new(3, 1),
            Ratio::new(-2, 1),
            Ratio::new(1, 1),
        ];
        let c = solve_combination(&rows, &t).unwrap();
        assert_eq!(c[0], Ratio::new(3, 1));
        assert_eq!(c[1], Ratio::new(-2, 1));
        let bad: Vec<Ratio<i64>> = vec![Ratio::new(1, 1), Ratio::new(0, 1), Ratio::new(0, 1)];
        assert!(solve_combination(&rows, &bad).is_none());
    }

    #[test]
    fn quotient_generator_rank_one() {
        // sigma = Z^2, tau = Z(1,0); v = (3, 2) has index 2.
        let sigma = vec![vec![1i64, 0], vec![0, 1]];
        let tau = vec![vec![1i64, 0]];
        let (u, idx) = quotient_generator(&tau, &sigma, &[3, 2]);
        assert_eq!(idx, 2);
        assert_eq!(u[1], 1); // generator points to the v side
    }

    #[test]
    fn egcd_basics() {
        let (g, a, b) = egcd(&12i64, &18);
        assert_eq!(g, 6);
        assert_eq!(a * 12 + b * 18, 6);
        let u = bezout_solve(&[4i64, 7, 0]);
        assert_eq!(4 * u[0] + 7 * u[1], 1);
    }
}
