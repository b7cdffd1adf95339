//! Exact linear forms and sparse multivariate polynomials in `x_1..x_n`.
//!
//! All coefficients of Hurwitz cycles are polynomials on the lattice
//! `H = { x : sum x_i = 0 }`, where linear representatives are only
//! well-defined modulo that relation.  To make equality of classes a plain
//! map comparison, every form and polynomial is kept in a normal form with
//! the last variable eliminated via `x_n = -(x_1 + ... + x_{n-1})`.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{signum_i8, Scalar};

/// An integer linear form `c_1 x_1 + ... + c_n x_n`, stored in normal form:
/// the coefficient of the last variable is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> LinearForm<S> {
    pub fn zero(n: usize) -> Self {
        LinearForm {
            coeffs: vec![S::zero(); n],
        }
    }

    /// The form `sum_{i in mask} x_i` reduced to normal form.  `mask` is a
    /// bitmask over 0-based end indices.
    pub fn subset_sum(n: usize, mask: u32) -> Self {
        let mut coeffs = vec![S::zero(); n];
        if mask & (1 << (n - 1)) == 0 {
            for (i, c) in coeffs.iter_mut().enumerate().take(n - 1) {
                if mask & (1 << i) != 0 {
                    *c = S::one();
                }
            }
        } else {
            // sum_{i in S} x_i = -sum_{i notin S} x_i  on the lattice
            for (i, c) in coeffs.iter_mut().enumerate().take(n - 1) {
                if mask & (1 << i) == 0 {
                    *c = -S::one();
                }
            }
        }
        LinearForm { coeffs }
    }

    /// The single variable `x_i` in normal form.
    pub fn variable(n: usize, i: usize) -> Self {
        Self::subset_sum(n, 1 << i)
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.coeffs.len());
        let mut acc = S::zero();
        for (c, xi) in self.coeffs.iter().zip(x) {
            acc = acc + c.clone() * xi.clone();
        }
        acc
    }

    pub fn neg(&self) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_polynomial(&self) -> IntPolynomial<S> {
        let mut p = IntPolynomial::zero(self.n());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u16; self.n()];
                exps[i] = 1;
                p.terms.insert(exps, c.clone());
            }
        }
        p
    }
}

/// A sparse multivariate polynomial with exact integer coefficients; the
/// monomial key is the exponent vector.  No zero coefficients are stored,
/// and the normal form of [`LinearForm`] is preserved by all operations,
/// so structural equality is equality of functions on the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial<S> {
    n: usize,
    terms: BTreeMap<Vec<u16>, S>,
}

impl<S: Scalar> IntPolynomial<S> {
    pub fn zero(n: usize) -> Self {
        IntPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0u16; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Vec<u16>, S)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u16>, c: S) {
        assert_eq!(exps.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        IntPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_linear(&self, l: &LinearForm<S>) -> Self {
        self.mul(&l.to_polynomial())
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.n);
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    m = m * x[i].clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Total degree of each monomial if they all agree, i.e. the polynomial
    /// is homogeneous; `None` otherwise.  The zero polynomial is homogeneous
    /// of every degree; we report `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: usize = e.iter().map(|&p| p as usize).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Substitute each variable by a linear form over `m` new variables.
    /// The forms are expected in normal form, so the result is too.
    pub fn substitute_linear(&self, images: &[LinearForm<S>]) -> IntPolynomial<S> {
        assert_eq!(images.len(), self.n);
        let m = if images.is_empty() {
            0
        } else {
            images[0].n()
        };
        let mut out = IntPolynomial::zero(m);
        for (e, c) in &self.terms {
            let mut term = IntPolynomial::constant(m, c.clone());
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul_linear(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Sign of the value at a point, for positivity assertions.
    pub fn sign_at(&self, x: &[S]) -> i8 {
        signum_i8(&self.eval(x))
    }
}

impl<S: Scalar> fmt::Display for IntPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if p > 1 {
                    write!(f, "*x{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for LinearForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}
