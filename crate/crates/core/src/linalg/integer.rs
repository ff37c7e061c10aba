//! Fraction-free elimination over the integers and rank/determinant modulo a
//! fixed 61-bit prime.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Mersenne prime 2^61 - 1.
pub const PRIME: u64 = (1 << 61) - 1;

/// Bareiss determinant of a square integer matrix given as rows.
pub fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Rank by fraction-free elimination.
pub fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Bareiss determinant in `i128`; `None` on overflow.
pub fn det_i128(m: &mut [i128], n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = false;
    let mut prev: i128 = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r * n + k] != 0) else {
            return Some(0);
        };
        if p != k {
            for j in 0..n {
                m.swap(p * n + j, k * n + j);
            }
            sign = !sign;
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let lead = m[i * n + k];
            for j in k + 1..n {
                let a = pivot.checked_mul(m[i * n + j])?;
                let b = lead.checked_mul(m[k * n + j])?;
                m[i * n + j] = a.checked_sub(b)? / prev;
            }
            m[i * n + k] = 0;
        }
        prev = pivot;
    }
    let det = m[n * n - 1];
    Some(if sign { -det } else { det })
}

/// Exact test for a vanishing integer determinant, using `i128` when it fits.
pub fn det_is_zero_i128(entries: &[i128], n: usize) -> bool {
    let mut work = entries.to_vec();
    match det_i128(&mut work, n) {
        Some(d) => d == 0,
        None => {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(entries[i * n + j])).collect())
                .collect();
            det_bigint(rows).is_zero()
        }
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

pub fn reduce_i64(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

pub fn reduce_bigint(v: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let mut r = v % &p;
    if r.is_negative() {
        r += &p;
    }
    r.to_u64().expect("residue fits in u64")
}

/// Row echelon elimination modulo [`PRIME`]; returns the rank.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(p, rank);
        let inv = inv_mod(m[rank][c]);
        let pivot_row: Vec<u64> = m[rank][c..].iter().map(|&v| mul_mod(v, inv)).collect();
        for i in rank + 1..rows {
            let f = m[i][c];
            if f == 0 {
                continue;
            }
            let row = &mut m[i];
            for (off, pv) in pivot_row.iter().enumerate() {
                let j = c + off;
                let sub = mul_mod(f, *pv);
                row[j] = if row[j] >= sub {
                    row[j] - sub
                } else {
                    row[j] + PRIME - sub
                };
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant modulo [`PRIME`] of a square matrix.
pub fn det_mod_p(mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = (PRIME - det) % PRIME;
        }
        det = mul_mod(det, m[c][c]);
        let inv = inv_mod(m[c][c]);
        for i in c + 1..n {
            let f = mul_mod(m[i][c], inv);
            if f == 0 {
                continue;
            }
            for j in c..n {
                let sub = mul_mod(f, m[c][j]);
                m[i][j] = (m[i][j] + PRIME - sub) % PRIME;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = big(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 4*5) + 1(1*-2 - 0) = -52 - 2 = -54
        assert_eq!(det_bigint(m), BigInt::from(-54));
    }

    #[test]
    fn zero_pivot_requires_row_swap() {
        let m = big(&[&[0, 1], &[-1, 0]]);
        assert_eq!(det_bigint(m), BigInt::from(1));
        let mut flat = vec![0i128, 1, -1, 0];
        assert_eq!(det_i128(&mut flat, 2), Some(1));
    }

    #[test]
    fn modular_and_exact_agree() {
        let rows = big(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_bigint(rows.clone()), 2);
        let modp: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(reduce_bigint).collect()).collect();
        assert_eq!(rank_mod_p(modp.clone()), 2);
        assert_eq!(det_mod_p(modp), 0);
        assert_eq!(det_mod_p(vec![vec![reduce_i64(-3)]]), PRIME - 3);
    }

    #[test]
    fn i128_overflow_falls_back() {
        let big_entry = 1i128 << 100;
        let entries = vec![big_entry, 1, 1, big_entry];
        assert!(!det_is_zero_i128(&entries, 2));
        let singular = vec![big_entry, big_entry, big_entry, big_entry];
        assert!(det_is_zero_i128(&singular, 2));
    }
}
