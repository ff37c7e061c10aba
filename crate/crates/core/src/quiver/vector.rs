use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// An integer vector indexed by the vertices of a quiver (dimension vectors
/// and weights share this type).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerVector(pub Vec<i64>);

impl IntegerVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, x: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[x] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Entries at the given positions, in order.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        Self(positions.iter().map(|&i| self.0[i]).collect())
    }

    /// Inverse of [`restrict`](Self::restrict): zero outside `positions`.
    pub fn extend(&self, positions: &[usize], n: usize) -> Self {
        let mut out = Self::zeros(n);
        for (k, &i) in positions.iter().enumerate() {
            out.0[i] = self.0[k];
        }
        out
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::default());
        }
        text.split(',')
            .map(|f| {
                f.trim().parse::<i64>().map_err(|_| Error::Syntax {
                    line: 0,
                    message: format!("invalid integer `{}` in vector `{text}`", f.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl FromStr for IntegerVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl From<Vec<i64>> for IntegerVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl From<&[i64]> for IntegerVector {
    fn from(v: &[i64]) -> Self {
        Self(v.to_vec())
    }
}

impl Index<usize> for IntegerVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntegerVector {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}

impl Add for &IntegerVector {
    type Output = IntegerVector;

    fn add(self, rhs: Self) -> IntegerVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        IntegerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntegerVector {
    type Output = IntegerVector;

    fn sub(self, rhs: Self) -> IntegerVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        IntegerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntegerVector {
    type Output = IntegerVector;

    fn neg(self) -> IntegerVector {
        self.scale(-1)
    }
}

impl fmt::Display for IntegerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
