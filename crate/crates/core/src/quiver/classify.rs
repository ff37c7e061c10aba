//! Representation type of a connected quiver: Dynkin, Euclidean or wild.
//!
//! Two independent procedures are implemented. One inspects the symmetrized
//! Tits form, the other matches the underlying graph against the simply laced
//! Dynkin and extended Dynkin lists. [`classify_quiver`] runs both and insists
//! that they agree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Quiver;
use crate::error::{Error, Result};
use crate::linalg::integer::det_bigint;
use crate::linalg::{rat, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuiverClass {
    Dynkin(Family, usize),
    /// Extended diagram; the index is the usual subscript (vertex count minus one).
    Euclidean(Family, usize),
    Wild,
}

impl QuiverClass {
    pub fn tag(&self) -> &'static str {
        match self {
            QuiverClass::Dynkin(..) => "Dynkin",
            QuiverClass::Euclidean(..) => "Euclidean",
            QuiverClass::Wild => "Wild",
        }
    }

    /// Diagram label such as `A3` or `Ã1`; `None` for wild quivers.
    pub fn label(&self) -> Option<String> {
        match *self {
            QuiverClass::Dynkin(f, n) => Some(format!("{f:?}{n}")),
            QuiverClass::Euclidean(f, n) => {
                let head = match f {
                    Family::A => "\u{c3}",
                    Family::D => "D\u{303}",
                    Family::E => "\u{1ebc}",
                };
                Some(format!("{head}{n}"))
            }
            QuiverClass::Wild => None,
        }
    }
}

impl fmt::Display for QuiverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(label) => write!(f, "{} {}", self.tag(), label),
            None => write!(f, "{}", self.tag()),
        }
    }
}

/// Classifies a connected quiver, cross-checking both procedures.
pub fn classify_quiver(q: &Quiver) -> Result<QuiverClass> {
    let by_form = classify_by_definiteness(q)?;
    let by_graph = classify_by_graph(q)?;
    assert_eq!(
        by_form,
        by_graph,
        "Tits form and graph matching disagree on\n{}",
        q.to_text()
    );
    Ok(by_form)
}

/// `B = E + E^T`, twice the symmetrized Tits form (the Cartan matrix for simple graphs).
fn symmetrized(q: &Quiver) -> Vec<Vec<i64>> {
    let e = q.euler_matrix();
    let n = e.len();
    (0..n).map(|i| (0..n).map(|j| e[i][j] + e[j][i]).collect()).collect()
}

fn minor(b: &[Vec<i64>], idx: &[usize]) -> BigInt {
    let m = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| BigInt::from(b[i][j])).collect())
        .collect();
    det_bigint(m)
}

/// Positive semidefiniteness by symmetric elimination over the rationals.
fn is_psd_by_elimination(b: &[Vec<i64>]) -> bool {
    let n = b.len();
    let mut m = RationalMatrix::from_fn(n, n, |i, j| rat(b[i][j]));
    let mut alive: Vec<usize> = (0..n).collect();
    while let Some(pos) = alive.iter().position(|&i| m.get(i, i).is_positive()) {
        let p = alive.remove(pos);
        let pivot = m.get(p, p).clone();
        for &i in &alive {
            let f = m.get(i, p) / &pivot;
            for &j in &alive {
                let v = m.get(i, j) - &f * m.get(p, j);
                m.set(i, j, v);
            }
        }
    }
    // No positive diagonal remains: the rest must vanish identically.
    alive.iter().all(|&i| alive.iter().all(|&j| m.get(i, j).is_zero()))
}

fn is_psd(b: &[Vec<i64>]) -> bool {
    let n = b.len();
    if n > 12 {
        return is_psd_by_elimination(b);
    }
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        !minor(b, &idx).is_negative()
    })
}

pub fn classify_by_definiteness(q: &Quiver) -> Result<QuiverClass> {
    if !q.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = q.num_vertices();
    let b = symmetrized(q);
    let leading_positive = (1..=n).all(|k| minor(&b, &(0..k).collect::<Vec<_>>()).is_positive());
    if leading_positive {
        // B is the Cartan matrix; its determinant and size pin down the type.
        let det = minor(&b, &(0..n).collect::<Vec<_>>()).to_i64().unwrap_or(0);
        let family = match (n, det) {
            (_, d) if d == n as i64 + 1 => Family::A,
            (n, 4) if n >= 4 => Family::D,
            (6, 3) | (7, 2) | (8, 1) => Family::E,
            _ => unreachable!("positive definite simply laced form with det {det} on {n} vertices"),
        };
        return Ok(QuiverClass::Dynkin(family, n));
    }
    let bm = RationalMatrix::from_fn(n, n, |i, j| rat(b[i][j]));
    if bm.rank() + 1 != n || !is_psd(&b) {
        return Ok(QuiverClass::Wild);
    }
    // The radical is spanned by the minimal imaginary root; its largest
    // entry separates the extended families.
    let kernel = bm.kernel();
    let column = kernel.column(0);
    let (rows, _) = RationalMatrix::from_fn(1, n, |_, j| column[j].clone()).integer_rows();
    let g = rows[0]
        .iter()
        .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    let largest = rows[0].iter().map(|x| (x / &g).abs()).max().unwrap_or_default();
    let family = match largest.to_i64() {
        Some(1) => Family::A,
        Some(2) => Family::D,
        Some(3) | Some(4) | Some(6) => Family::E,
        _ => unreachable!("semidefinite form with unexpected radical"),
    };
    Ok(QuiverClass::Euclidean(family, n - 1))
}

pub fn classify_by_graph(q: &Quiver) -> Result<QuiverClass> {
    if !q.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = q.num_vertices();
    let m = q.num_arrows();
    let mut adj = vec![vec![0usize; n]; n];
    for a in q.arrows() {
        adj[a.tail][a.head] += 1;
        adj[a.head][a.tail] += 1;
    }
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().sum()).collect();
    let multi = adj.iter().flatten().any(|&k| k > 1);

    if multi {
        return Ok(if n == 2 && m == 2 {
            QuiverClass::Euclidean(Family::A, 1)
        } else {
            QuiverClass::Wild
        });
    }
    if m == n {
        // Connected with one independent cycle: extended A only if it is the cycle.
        return Ok(if degree.iter().all(|&d| d == 2) {
            QuiverClass::Euclidean(Family::A, n - 1)
        } else {
            QuiverClass::Wild
        });
    }
    if m > n {
        return Ok(QuiverClass::Wild);
    }

    // A tree from here on.
    let branches: Vec<usize> = (0..n).filter(|&x| degree[x] >= 3).collect();
    let arm_lengths = |center: usize| -> Vec<usize> {
        let mut lengths = Vec::new();
        for start in (0..n).filter(|&y| adj[center][y] > 0) {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            while degree[cur] == 2 {
                let next = (0..n).find(|&y| adj[cur][y] > 0 && y != prev).expect("path continues");
                prev = cur;
                cur = next;
                len += 1;
            }
            // An arm ending at another branch vertex is not a plain arm.
            lengths.push(if degree[cur] == 1 { len } else { usize::MAX });
        }
        lengths.sort_unstable();
        lengths
    };

    Ok(match branches.as_slice() {
        [] => QuiverClass::Dynkin(Family::A, n),
        [c] if degree[*c] == 4 => {
            if arm_lengths(*c) == [1, 1, 1, 1] {
                QuiverClass::Euclidean(Family::D, 4)
            } else {
                QuiverClass::Wild
            }
        }
        [c] if degree[*c] == 3 => match arm_lengths(*c).as_slice() {
            [1, 1, _] => QuiverClass::Dynkin(Family::D, n),
            [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => QuiverClass::Dynkin(Family::E, n),
            [2, 2, 2] | [1, 3, 3] | [1, 2, 5] => QuiverClass::Euclidean(Family::E, n - 1),
            _ => QuiverClass::Wild,
        },
        [c1, c2] if degree[*c1] == 3 && degree[*c2] == 3 => {
            let pendant = |c: usize| (0..n).filter(|&y| adj[c][y] > 0 && degree[y] == 1).count();
            if pendant(*c1) == 2 && pendant(*c2) == 2 {
                QuiverClass::Euclidean(Family::D, n - 1)
            } else {
                QuiverClass::Wild
            }
        }
        _ => QuiverClass::Wild,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;
    use proptest::prelude::*;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Quiver {
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| Arrow {
                name: format!("a{k}"),
                tail: t,
                head: h,
            })
            .collect();
        Quiver::new((0..n).map(|x| x.to_string()).collect(), arrows).unwrap()
    }

    fn star(arms: &[usize]) -> Quiver {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((next, prev));
                prev = next;
                next += 1;
            }
        }
        tree(next, &edges)
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            classify_quiver(&Quiver::path(3)).unwrap(),
            QuiverClass::Dynkin(Family::A, 3)
        );
        let theta2 = classify_quiver(&Quiver::kronecker(2)).unwrap();
        assert_eq!(theta2, QuiverClass::Euclidean(Family::A, 1));
        assert_eq!(theta2.to_string(), "Euclidean Ã1");
        assert_eq!(classify_quiver(&Quiver::kronecker(3)).unwrap(), QuiverClass::Wild);
        assert_eq!(QuiverClass::Wild.label(), None);
    }

    #[test]
    fn star_shaped_diagrams() {
        let cases = [
            (vec![1, 1, 1], QuiverClass::Dynkin(Family::D, 4)),
            (vec![1, 1, 4], QuiverClass::Dynkin(Family::D, 7)),
            (vec![1, 2, 2], QuiverClass::Dynkin(Family::E, 6)),
            (vec![1, 2, 3], QuiverClass::Dynkin(Family::E, 7)),
            (vec![1, 2, 4], QuiverClass::Dynkin(Family::E, 8)),
            (vec![1, 1, 1, 1], QuiverClass::Euclidean(Family::D, 4)),
            (vec![2, 2, 2], QuiverClass::Euclidean(Family::E, 6)),
            (vec![1, 3, 3], QuiverClass::Euclidean(Family::E, 7)),
            (vec![1, 2, 5], QuiverClass::Euclidean(Family::E, 8)),
            (vec![2, 2, 3], QuiverClass::Wild),
            (vec![1, 1, 1, 1, 1], QuiverClass::Wild),
        ];
        for (arms, expected) in cases {
            assert_eq!(classify_quiver(&star(&arms)).unwrap(), expected, "arms {arms:?}");
        }
    }

    #[test]
    fn extended_d_and_cycles() {
        // Two branch points joined by a path of length 2.
        let d6 = tree(7, &[(0, 2), (1, 2), (2, 3), (3, 4), (5, 4), (6, 4)]);
        assert_eq!(classify_quiver(&d6).unwrap(), QuiverClass::Euclidean(Family::D, 6));
        let a2 = tree(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(classify_quiver(&a2).unwrap(), QuiverClass::Euclidean(Family::A, 2));
        let lollipop = tree(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(classify_quiver(&lollipop).unwrap(), QuiverClass::Wild);
    }

    #[test]
    fn large_tree_uses_elimination() {
        let long = star(&[1, 1, 12]);
        assert_eq!(classify_quiver(&long).unwrap(), QuiverClass::Dynkin(Family::D, 15));
        let b = symmetrized(&star(&[1, 1, 1, 1]));
        assert!(is_psd_by_elimination(&b));
        assert!(!is_psd_by_elimination(&symmetrized(&star(&[1, 1, 1, 1, 1]))));
    }

    #[test]
    fn disconnected_rejected() {
        let q = tree(2, &[]);
        assert_eq!(classify_quiver(&q), Err(Error::Disconnected));
    }

    /// Random connected graph on up to 9 vertices (spanning tree plus a few
    /// extra edges) and two vertex rankings used to orient it acyclically.
    fn connected_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<usize>, Vec<usize>)> {
        (2usize..=9).prop_flat_map(|n| {
            let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            (
                Just(n),
                prop::collection::vec(any::<prop::sample::Index>(), n - 1),
                prop::collection::vec((0..n, 0..n), 0..3),
                perm.clone(),
                perm,
            )
                .prop_map(|(n, parents, extra, r1, r2)| {
                    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1].index(v), v)).collect();
                    edges.extend(extra.into_iter().filter(|(a, b)| a != b));
                    (n, edges, r1, r2)
                })
        })
    }

    fn orient(n: usize, edges: &[(usize, usize)], rank: &[usize]) -> Quiver {
        let oriented: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| if rank[a] < rank[b] { (a, b) } else { (b, a) })
            .collect();
        tree(n, &oriented)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn methods_agree((n, edges, r1, _r2) in connected_graph()) {
            let q = orient(n, &edges, &r1);
            prop_assert_eq!(classify_by_definiteness(&q).unwrap(), classify_by_graph(&q).unwrap());
        }

        #[test]
        fn orientation_is_irrelevant((n, edges, r1, r2) in connected_graph()) {
            let a = classify_quiver(&orient(n, &edges, &r1)).unwrap();
            let b = classify_quiver(&orient(n, &edges, &r2)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
