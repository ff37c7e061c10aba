//! Krull-Schmidt decomposition over the rationals.
//!
//! Each split is exact: a summand is cut out either by the generalized
//! eigenspaces of an endomorphism or by an idempotent found as a linear
//! solve. Only the decision to stop splitting is probabilistic, except when
//! the endomorphism algebra is one-dimensional.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::interaction::{interaction_matrix, InteractionShape};
use super::Representation;
use crate::error::Result;
use crate::linalg::univariate::factor;
use crate::linalg::{char_poly, rat, RationalMatrix, UniPoly};
use crate::quiver::IntegerVector;

/// Rounds without progress before a summand is declared indecomposable.
pub const MAX_FAILED_ROUNDS: usize = 16;

#[derive(Clone, Debug)]
pub struct Summand {
    pub rep: Representation,
    /// Per vertex, the columns spanning this summand inside the input.
    pub basis: Vec<RationalMatrix>,
    /// Endomorphism algebra is one-dimensional, so indecomposability is proven.
    pub certified: bool,
    /// Degree of the residue field of the endomorphism algebra as observed
    /// from random endomorphisms; above 1 the summand splits further over an
    /// algebraic closure into this many pieces.
    pub splitting_degree: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn dims(&self) -> Vec<IntegerVector> {
        self.summands.iter().map(|s| s.rep.dim().clone()).collect()
    }

    /// Checks the change of basis exhibiting `v` as the direct sum of the summands.
    pub fn verify(&self, v: &Representation) -> bool {
        let q = v.quiver();
        let n = q.num_vertices();
        let p: Vec<RationalMatrix> = (0..n)
            .map(|x| {
                let blocks: Vec<&RationalMatrix> = self.summands.iter().map(|s| &s.basis[x]).collect();
                RationalMatrix::hstack(&blocks, v.dim_at(x))
            })
            .collect();
        if p.iter().any(|m| !m.is_square() || m.inverse().is_none()) {
            return false;
        }
        q.arrows().iter().enumerate().all(|(a, arrow)| {
            let blocks: Vec<RationalMatrix> = self.summands.iter().map(|s| s.rep.map(a).clone()).collect();
            let sum = RationalMatrix::block_diagonal(&blocks);
            &v.map(a).clone() * &p[arrow.tail] == &p[arrow.head] * &sum
        })
    }
}

/// Splits `v` into indecomposable summands. Deterministic for a fixed seed.
pub fn decompose(v: &Representation, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = v.quiver().num_vertices();
    let identity: Vec<RationalMatrix> = (0..n).map(|x| RationalMatrix::identity(v.dim_at(x))).collect();
    let mut pending = vec![(v.clone(), identity)];
    let mut summands = Vec::new();
    while let Some((u, basis)) = pending.pop() {
        if u.dim().is_zero() {
            continue;
        }
        let end = endomorphisms(&u)?;
        if end.len() == 1 {
            summands.push(Summand {
                rep: u,
                basis,
                certified: true,
                splitting_degree: 1,
            });
            continue;
        }
        let mut residue_degree = 1;
        let mut parts = None;
        for _ in 0..MAX_FAILED_ROUNDS {
            let phi = random_combination(&end, &mut rng);
            match eigen_split(&u, &phi) {
                Split::Parts(p) => {
                    parts = Some(p);
                    break;
                }
                Split::Single(e) => residue_degree = residue_degree.max(e),
            }
            if let Some(p) = idempotent_split(&u, &end, &mut rng) {
                parts = Some(p);
                break;
            }
        }
        match parts {
            Some(parts) => {
                for c in parts {
                    let sub = sub_representation(&u, &c);
                    let b = basis.iter().zip(&c).map(|(b, c)| b * c).collect();
                    pending.push((sub, b));
                }
            }
            None => summands.push(Summand {
                rep: u,
                basis,
                certified: false,
                splitting_degree: residue_degree,
            }),
        }
    }
    summands.sort_by(|a, b| a.rep.dim().cmp(b.rep.dim()));
    Ok(Decomposition { summands })
}

/// Basis of `End(u)` as per-vertex matrix tuples.
pub(crate) fn endomorphisms(u: &Representation) -> Result<Vec<Vec<RationalMatrix>>> {
    let d = interaction_matrix(u, u)?;
    let shape = InteractionShape::new(u.quiver(), u.dim(), u.dim());
    let kernel = d.row_reduce().kernel_basis;
    Ok(kernel
        .into_iter()
        .map(|vec| {
            (0..u.quiver().num_vertices())
                .map(|x| {
                    let k = u.dim_at(x);
                    let off = shape.col_offsets[x];
                    RationalMatrix::from_fn(k, k, |i, j| vec[off + i * k + j].clone())
                })
                .collect()
        })
        .collect())
}

fn random_combination(basis: &[Vec<RationalMatrix>], rng: &mut impl Rng) -> Vec<RationalMatrix> {
    let coeffs: Vec<i64> = loop {
        let c: Vec<i64> = (0..basis.len()).map(|_| rng.gen_range(-10..=10)).collect();
        if c.iter().any(|&x| x != 0) {
            break c;
        }
    };
    (0..basis[0].len())
        .map(|x| {
            let k = basis[0][x].rows();
            basis
                .iter()
                .zip(&coeffs)
                .fold(RationalMatrix::zeros(k, k), |acc, (b, &c)| &acc + &b[x].scale(&rat(c)))
        })
        .collect()
}

enum Split {
    Parts(Vec<Vec<RationalMatrix>>),
    /// One coprime factor only; carries its degree.
    Single(usize),
}

/// Splits along pairwise coprime factors of the characteristic polynomials of `phi`.
fn eigen_split(u: &Representation, phi: &[RationalMatrix]) -> Split {
    let mut factors: Vec<UniPoly> = Vec::new();
    for m in phi.iter().filter(|m| m.rows() > 0) {
        let cp = char_poly(m).expect("square");
        for (f, _) in factor(&cp).factors {
            factors.push(f.monic());
        }
    }
    let factors = coprime_refinement(factors);
    if factors.len() < 2 {
        return Split::Single(factors.first().map_or(1, UniPoly::degree));
    }
    let parts = factors
        .iter()
        .map(|f| {
            phi.iter()
                .enumerate()
                .map(|(x, m)| {
                    let k = u.dim_at(x);
                    if k == 0 {
                        return RationalMatrix::zeros(0, 0);
                    }
                    f.eval_matrix(m).pow(k as u32).kernel()
                })
                .collect()
        })
        .collect();
    Split::Parts(parts)
}

/// Replaces a list of monic polynomials by pairwise coprime ones generating
/// the same multiplicative structure.
fn coprime_refinement(mut fs: Vec<UniPoly>) -> Vec<UniPoly> {
    fs.retain(|f| f.degree() > 0);
    fs.dedup();
    loop {
        let mut changed = false;
        'outer: for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                if fs[i] == fs[j] {
                    fs.remove(j);
                    changed = true;
                    break 'outer;
                }
                let g = fs[i].gcd(&fs[j]);
                if g.degree() > 0 {
                    let (a, _) = fs[i].div_rem(&g);
                    let (b, _) = fs[j].div_rem(&g);
                    fs.remove(j);
                    fs.remove(i);
                    fs.extend([g, a.monic(), b.monic()].into_iter().filter(|p| p.degree() > 0));
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return fs;
        }
    }
}

/// Closure of a random vector under the arrow maps; splits if the generated
/// subrepresentation admits an idempotent endomorphism projecting onto it.
fn idempotent_split(
    u: &Representation,
    end: &[Vec<RationalMatrix>],
    rng: &mut impl Rng,
) -> Option<Vec<Vec<RationalMatrix>>> {
    let q = u.quiver();
    let n = q.num_vertices();
    let support: Vec<usize> = (0..n).filter(|&x| u.dim_at(x) > 0).collect();
    let start = support[rng.gen_range(0..support.len())];
    let mut gens: Vec<Vec<Vec<crate::linalg::Rational>>> = vec![Vec::new(); n];
    gens[start].push((0..u.dim_at(start)).map(|_| rat(rng.gen_range(-10..=10))).collect());
    // Close up in topological order; one pass suffices on an acyclic quiver.
    for &x in q.topological_order() {
        if gens[x].is_empty() {
            continue;
        }
        let span = RationalMatrix::from_columns(u.dim_at(x), &gens[x]).column_space();
        for a in q.outgoing(x) {
            let h = q.arrow(a).head;
            let img = u.map(a) * &span;
            for c in 0..img.cols() {
                gens[h].push(img.column(c));
            }
        }
    }
    let s: Vec<RationalMatrix> = (0..n)
        .map(|x| RationalMatrix::from_columns(u.dim_at(x), &gens[x]).column_space())
        .collect();
    let total: usize = s.iter().map(|m| m.cols()).sum();
    let full: usize = (0..n).map(|x| u.dim_at(x)).sum();
    if total == 0 || total == full {
        return None;
    }
    // Unknown coefficients c with pi = sum c_k E_k, pi|S = id and im pi in S.
    let k = end.len();
    let mut rows: Vec<Vec<crate::linalg::Rational>> = Vec::new();
    let mut rhs: Vec<crate::linalg::Rational> = Vec::new();
    for x in 0..n {
        let d = u.dim_at(x);
        if d == 0 {
            continue;
        }
        let sx = &s[x];
        let annihilator = sx.transpose().kernel().transpose();
        let restricted: Vec<RationalMatrix> = end.iter().map(|e| &e[x] * sx).collect();
        for i in 0..d {
            for j in 0..sx.cols() {
                rows.push((0..k).map(|t| restricted[t].get(i, j).clone()).collect());
                rhs.push(sx.get(i, j).clone());
            }
        }
        let projected: Vec<RationalMatrix> = end.iter().map(|e| &annihilator * &e[x]).collect();
        for i in 0..annihilator.rows() {
            for j in 0..d {
                rows.push((0..k).map(|t| projected[t].get(i, j).clone()).collect());
                rhs.push(rat(0));
            }
        }
    }
    let system = RationalMatrix::from_fn(rows.len(), k, |i, j| rows[i][j].clone());
    let b = RationalMatrix::from_fn(rhs.len(), 1, |i, _| rhs[i].clone());
    let c = system.solve(&b)?;
    let pi: Vec<RationalMatrix> = (0..n)
        .map(|x| {
            let d = u.dim_at(x);
            end.iter().enumerate().fold(RationalMatrix::zeros(d, d), |acc, (t, e)| {
                &acc + &e[x].scale(c.get(t, 0))
            })
        })
        .collect();
    let complement: Vec<RationalMatrix> = pi
        .iter()
        .map(|p| {
            let d = p.rows();
            (&RationalMatrix::identity(d) - p).column_space()
        })
        .collect();
    Some(vec![s, complement])
}

/// The subrepresentation spanned per vertex by the columns of `c`.
pub(crate) fn sub_representation(u: &Representation, c: &[RationalMatrix]) -> Representation {
    let q = u.quiver();
    let dim = IntegerVector((0..q.num_vertices()).map(|x| c[x].cols() as i64).collect());
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let image = u.map(a) * &c[arrow.tail];
            c[arrow.head]
                .solve(&image)
                .expect("subspace is invariant under the arrow maps")
        })
        .collect();
    Representation::new(q.clone(), dim, maps).expect("sizes follow the chosen bases")
}
