//! Sparse multivariate polynomials over the rationals and matrices of them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Default size cap for [`symbolic_determinant`].
pub const DEFAULT_SYMBOLIC_LIMIT: usize = 12;

type Exponents = Vec<u32>;

/// Polynomial in a fixed, ordered list of variables. Terms are keyed by
/// exponent vectors; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exponents, Rational>,
}

impl SparsePolynomial {
    pub fn zero(vars: Arc<Vec<String>>) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<Vec<String>>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The polynomial consisting of the single variable `index`.
    pub fn variable(vars: Arc<Vec<String>>, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn from_terms(vars: Arc<Vec<String>>, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    ///
    /// Uses lexicographic order on exponent vectors; for an exact division the
    /// leading term of every intermediate remainder is divisible by the
    /// divisor's leading term.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_vars(divisor);
        let (lead_e, lead_c) = divisor.terms.iter().next_back()?;
        if divisor.terms.len() == 1 {
            let mut q = Self::zero(self.vars.clone());
            for (e, c) in &self.terms {
                let qe = e
                    .iter()
                    .zip(lead_e)
                    .map(|(a, b)| a.checked_sub(*b))
                    .collect::<Option<Vec<_>>>()?;
                q.terms.insert(qe, c / lead_c);
            }
            return Some(q);
        }
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.vars.clone());
        while let Some((re, rc)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponents = re
                .iter()
                .zip(lead_e)
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<Vec<_>>>()?;
            let qc = &rc / lead_c;
            for (de, dc) in &divisor.terms {
                let e = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(e, -(dc * &qc));
            }
            quotient.add_term(qe, qc);
        }
        Some(quotient)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Maximum exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.vars.len()];
        for e in self.terms.keys() {
            for (m, &k) in d.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        d
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Dense matrix of polynomials sharing one variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Arc<Vec<String>>,
    entries: Vec<SparsePolynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, vars: Arc<Vec<String>>) -> Self {
        Self {
            rows,
            cols,
            entries: vec![SparsePolynomial::zero(vars.clone()); rows * cols],
            vars,
        }
    }

    pub fn from_rational(m: &RationalMatrix, vars: Arc<Vec<String>>) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols(), vars.clone());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, SparsePolynomial::constant(vars.clone(), m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SparsePolynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn eval(&self, point: &[Rational]) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(point))
    }
}

/// Exact determinant of a square polynomial matrix by fraction-free
/// (Bareiss) elimination. Refuses matrices larger than `limit`.
///
/// A zero result certifies that the determinant vanishes identically.
pub fn symbolic_determinant(m: &PolyMatrix, limit: usize) -> Result<SparsePolynomial> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n > limit {
        return Err(Error::SymbolicLimitExceeded(format!(
            "{n}x{n} matrix exceeds the symbolic limit {limit}"
        )));
    }
    let vars = m.vars.clone();
    if n == 0 {
        return Ok(SparsePolynomial::constant(vars, Rational::one()));
    }
    let mut a: Vec<Vec<SparsePolynomial>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut negate = false;
    let mut prev = SparsePolynomial::constant(vars.clone(), Rational::one());
    for k in 0..n {
        // Smallest nonzero pivot keeps intermediate expressions short.
        let Some(p) = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].num_terms())
        else {
            return Ok(SparsePolynomial::zero(vars));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = if lead.is_zero() {
                    pivot_row[k].mul(&row[j])
                } else {
                    pivot_row[k].mul(&row[j]).sub(&lead.mul(&pivot_row[j]))
                };
                row[j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[k] = SparsePolynomial::zero(vars.clone());
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}
