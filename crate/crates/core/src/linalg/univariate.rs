//! Univariate polynomials over the rationals: characteristic polynomials and a
//! desk-scale factorization (squarefree split, rational roots, Kronecker search).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::RationalMatrix;
use super::rational::{common_denominator, format_rational, rat, Rational};
use crate::error::{Error, Result};

/// Largest residual degree handed to the Kronecker factor search.
pub const KRONECKER_MAX_DEGREE: usize = 8;
/// Integers above this bound are not factored by trial division.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;
const KRONECKER_MAX_CANDIDATES: usize = 2_000_000;

/// Dense polynomial, coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `t - root`
    pub fn linear(root: Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &RationalMatrix) -> RationalMatrix {
        let n = m.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &RationalMatrix::identity(n).scale(c);
        }
        acc
    }

    /// Primitive integer polynomial with positive leading coefficient.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let d = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(d.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let body = if mono.is_empty() {
                format_rational(&c.abs())
            } else if c.abs().is_one() {
                mono
            } else {
                format!("{}*{}", format_rational(&c.abs()), mono)
            };
            parts.push((c.is_negative(), body));
        }
        for (k, (neg, body)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(tI - M)` by the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &RationalMatrix) -> Result<UniPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = RationalMatrix::zeros(n, n);
    let id = RationalMatrix::identity(n);
    for k in 1..=n {
        let prev_c = coeffs[n - k + 1].clone();
        mk = &(m * &mk) + &id.scale(&prev_c);
        let am = m * &mk;
        coeffs[n - k] = -am.trace() / rat(k as i64);
    }
    Ok(UniPoly::new(coeffs))
}

/// Factorization into monic factors with multiplicities. `complete` is false
/// when some factor exceeded the desk-scale search and may be reducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(UniPoly, usize)>,
    pub complete: bool,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::one(), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }
}

/// Splits the characteristic polynomial of `m` into irreducible factors over
/// the rationals.
pub fn char_poly_rational_split(m: &RationalMatrix) -> Result<Factorization> {
    Ok(factor(&char_poly(m)?))
}

/// Factors a nonzero polynomial into monic irreducibles.
pub fn factor(p: &UniPoly) -> Factorization {
    let mut factors = Vec::new();
    let mut complete = true;
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        let (irr, done) = factor_squarefree(&part);
        complete &= done;
        factors.extend(irr.into_iter().map(|f| (f, mult)));
    }
    factors.sort_by_key(|a| (a.0.degree(), a.0.to_string()));
    Factorization { factors, complete }
}

/// Yun's algorithm: monic `p = prod a_i^i` with squarefree, pairwise coprime `a_i`.
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    let dp = p.derivative();
    let mut a = p.gcd(&dp);
    let mut b = p.div_rem(&a).0;
    let mut c = dp.div_rem(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.monic(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

fn factor_squarefree(p: &UniPoly) -> (Vec<UniPoly>, bool) {
    let mut rest = p.monic();
    let mut out = Vec::new();
    if rest.degree() == 0 {
        return (out, true);
    }
    let (roots, roots_ok) = rational_roots(&rest);
    for r in roots {
        let lin = UniPoly::linear(r);
        rest = rest.div_rem(&lin).0;
        out.push(lin);
    }
    if rest.degree() == 0 {
        return (out, roots_ok);
    }
    if rest.degree() <= 3 && roots_ok {
        // Without rational roots a cubic or quadratic is irreducible.
        out.push(rest.monic());
        return (out, true);
    }
    if rest.degree() > KRONECKER_MAX_DEGREE {
        out.push(rest.monic());
        return (out, false);
    }
    let (mut parts, ok) = kronecker(&rest);
    out.append(&mut parts);
    (out, ok && roots_ok)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > TRIAL_DIVISION_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

fn rational_roots(p: &UniPoly) -> (Vec<Rational>, bool) {
    let mut roots = Vec::new();
    let mut work = p.clone();
    while work.degree() > 0 && work.coeffs[0].is_zero() {
        roots.push(Rational::zero());
        work = work.div_rem(&UniPoly::linear(Rational::zero())).0;
    }
    if work.degree() == 0 {
        return (roots, true);
    }
    let ints = work.primitive_integer();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return (roots, false);
    };
    for q in &qs {
        for pp in &ps {
            for sign in [1, -1] {
                let cand = Rational::new(pp * BigInt::from(sign), q.clone());
                if work.degree() > 0 && work.eval(&cand).is_zero() {
                    work = work.div_rem(&UniPoly::linear(cand.clone())).0;
                    roots.push(cand);
                }
            }
        }
    }
    (roots, true)
}

/// Kronecker's method on a squarefree polynomial with no rational roots.
fn kronecker(p: &UniPoly) -> (Vec<UniPoly>, bool) {
    let mut rest = p.monic();
    let mut found = Vec::new();
    let mut complete = true;
    let mut d = 2;
    while 2 * d <= rest.degree() {
        match kronecker_factor_of_degree(&rest, d) {
            Some(Some(g)) => {
                rest = rest.div_rem(&g).0.monic();
                found.push(g);
            }
            Some(None) => d += 1,
            None => {
                complete = false;
                d += 1;
            }
        }
    }
    found.push(rest);
    (found, complete)
}

/// `Some(Some(g))`: a monic factor of degree `d`; `Some(None)`: none exists;
/// `None`: the search was abandoned.
fn kronecker_factor_of_degree(p: &UniPoly, d: usize) -> Option<Option<UniPoly>> {
    let ints = p.primitive_integer();
    let prim = UniPoly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    // Interpolation nodes with the smallest nonzero values.
    let mut nodes: Vec<(i64, BigInt)> = (-20i64..=20)
        .map(|x| (x, prim.eval(&rat(x)).to_integer()))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    nodes.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.abs().cmp(&b.0.abs())));
    nodes.truncate(d + 1);
    if nodes.len() < d + 1 {
        return None;
    }
    let mut choices: Vec<Vec<BigInt>> = Vec::new();
    for (k, (_, v)) in nodes.iter().enumerate() {
        let divs = divisors(v)?;
        let signed: Vec<BigInt> = if k == 0 {
            divs
        } else {
            divs.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
        };
        choices.push(signed);
    }
    let total: usize = choices.iter().map(Vec::len).product();
    if total > KRONECKER_MAX_CANDIDATES {
        return None;
    }
    let xs: Vec<Rational> = nodes.iter().map(|(x, _)| rat(*x)).collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<Rational> = idx
            .iter()
            .zip(&choices)
            .map(|(&i, c)| Rational::from_integer(c[i].clone()))
            .collect();
        let g = interpolate(&xs, &ys);
        if g.degree() == d && g.coeffs.iter().all(|c| c.is_integer()) {
            let (_, r) = prim.div_rem(&g);
            if r.is_zero() {
                return Some(Some(g.monic()));
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Some(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::one();
        let mut denom = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::linear(xj.clone()));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::poly::{symbolic_determinant, PolyMatrix, SparsePolynomial};
    use proptest::prelude::*;
    use std::sync::Arc;

    #[test]
    fn diagonal_splits_into_linear_factors() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let f = char_poly_rational_split(&m).unwrap();
        assert!(f.complete);
        let mut got = f.factors.clone();
        got.sort_by_key(|(p, _)| p.eval(&rat(0)));
        assert_eq!(
            got,
            vec![(UniPoly::from_i64(&[-2, 1]), 1), (UniPoly::from_i64(&[-1, 1]), 1)]
        );
    }

    #[test]
    fn nilpotent_block_is_t_squared() {
        let m = RationalMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let f = char_poly_rational_split(&m).unwrap();
        assert_eq!(f.factors, vec![(UniPoly::from_i64(&[0, 1]), 2)]);
    }

    #[test]
    fn rotation_is_irreducible_quadratic() {
        let m = RationalMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
        let f = char_poly_rational_split(&m).unwrap();
        assert_eq!(f.factors, vec![(UniPoly::from_i64(&[1, 0, 1]), 1)]);
        assert!(f.complete);
    }

    #[test]
    fn kronecker_splits_product_of_quadratics() {
        // (t^2 + 1)(t^2 - 2)(t^2 + t + 1)
        let p = UniPoly::from_i64(&[1, 0, 1])
            .mul(&UniPoly::from_i64(&[-2, 0, 1]))
            .mul(&UniPoly::from_i64(&[1, 1, 1]));
        let f = factor(&p);
        assert!(f.complete);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().all(|(g, k)| g.degree() == 2 && *k == 1));
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn quartic_without_factors_is_irreducible() {
        let p = UniPoly::from_i64(&[-2, 0, 0, 0, 1]);
        let f = factor(&p);
        assert_eq!(f.factors, vec![(p, 1)]);
        assert!(f.complete);
    }

    #[test]
    fn rational_roots_with_fractions() {
        // (2t - 1)(3t + 2)(t^2 + 1)
        let p = UniPoly::from_i64(&[-1, 2])
            .mul(&UniPoly::from_i64(&[2, 3]))
            .mul(&UniPoly::from_i64(&[1, 0, 1]));
        let f = factor(&p);
        assert_eq!(f.expand(), p.monic());
        assert_eq!(f.factors.iter().filter(|(g, _)| g.degree() == 1).count(), 2);
    }

    /// Oracle: det(tI - M) expanded symbolically with a single variable.
    fn char_poly_by_expansion(m: &RationalMatrix) -> UniPoly {
        let n = m.rows();
        let vars = Arc::new(vec!["t".to_string()]);
        let mut pm = PolyMatrix::zeros(n, n, vars.clone());
        for i in 0..n {
            for j in 0..n {
                let mut e = SparsePolynomial::constant(vars.clone(), -m.get(i, j).clone());
                if i == j {
                    e = e.add(&SparsePolynomial::variable(vars.clone(), 0));
                }
                pm.set(i, j, e);
            }
        }
        let det = symbolic_determinant(&pm, 12).unwrap();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (e, c) in det.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        UniPoly::new(coeffs)
    }

    proptest! {
        #[test]
        fn factor_product_matches_expansion(n in 1usize..=5, v in prop::collection::vec(-3i64..=3, 25)) {
            let m = RationalMatrix::from_fn(n, n, |i, j| rat(v[i * 5 + j]));
            let oracle = char_poly_by_expansion(&m);
            prop_assert_eq!(char_poly(&m).unwrap(), oracle.clone());
            let f = char_poly_rational_split(&m).unwrap();
            prop_assert_eq!(f.expand(), oracle);
        }
    }
}
