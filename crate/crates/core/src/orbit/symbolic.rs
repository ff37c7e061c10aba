//! Exact decision of whether `V -> det d^V_W` vanishes identically on
//! `Rep(Q, alpha)`.
//!
//! Small matrices get a polynomial determinant with one indeterminate per
//! entry of `V`. Larger ones are first cut down to a slice meeting every
//! generic orbit: along a spanning forest each tree arrow is put in echelon
//! form using the group at its newly reached endpoint. Because `det d^V_W`
//! transforms by a character under the group, it vanishes on `Rep(Q, alpha)`
//! exactly when it vanishes on the slice. On the slice the determinant has
//! degree at most `d_i` in variable `i`, so vanishing on the grid
//! `{0..=d_1} x ... x {0..=d_k}` proves vanishing everywhere.
//!
//! When that grid is too large, a rigid `V0` (one with `Ext(V0, V0) = 0`)
//! still decides the question: its orbit is dense, so the determinant
//! vanishes identically exactly when it vanishes at `V0`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::integer::det_is_zero_i128;
use crate::linalg::rational::common_denominator;
use crate::linalg::{rat, symbolic_determinant, PolyMatrix, Rational, RationalMatrix, SparsePolynomial};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::{
    for_each_interaction_entry, hom_ext, interaction_matrix, EntrySource, InteractionShape, Representation,
};

/// How a vanishing determinant was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolicMethod {
    /// Polynomial determinant with one indeterminate per entry.
    Bareiss,
    /// Exhaustive evaluation on a degree-bounded grid over a slice.
    Grid,
    /// Evaluation at a rigid representation, whose orbit is dense.
    DenseOrbit,
}

impl fmt::Display for SymbolicMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolicMethod::Bareiss => "bareiss",
            SymbolicMethod::Grid => "grid",
            SymbolicMethod::DenseOrbit => "dense-orbit",
        })
    }
}

#[derive(Clone, Debug)]
pub enum SymbolicOutcome {
    Vanishes(SymbolicMethod),
    /// A representation of dimension `alpha` with nonzero determinant.
    Witness(Representation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SliceEntry {
    Const(i64),
    Var(usize),
}

/// Matrices with some entries fixed and the rest free.
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    pub num_vars: usize,
    /// Row-major entries per arrow.
    pub maps: Vec<Vec<SliceEntry>>,
    pub names: Vec<String>,
}

impl Slice {
    /// Every entry is its own variable.
    pub fn full(q: &Quiver, alpha: &IntegerVector) -> Self {
        let mut names = Vec::new();
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (alpha[a.head] as usize, alpha[a.tail] as usize);
                (0..r * c)
                    .map(|e| {
                        names.push(format!("{}_{}{}", a.name, e / c + 1, e % c + 1));
                        SliceEntry::Var(names.len() - 1)
                    })
                    .collect()
            })
            .collect();
        Self {
            num_vars: names.len(),
            maps,
            names,
        }
    }

    /// Tree arrows of a spanning forest in echelon normal form.
    pub fn normalized(q: &Quiver, alpha: &IntegerVector) -> Self {
        let n = q.num_vertices();
        let mut fixed: Vec<Option<Vec<SliceEntry>>> = vec![None; q.num_arrows()];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for (i, a) in q.arrows().iter().enumerate() {
                    let other = if a.tail == x {
                        a.head
                    } else if a.head == x {
                        a.tail
                    } else {
                        continue;
                    };
                    if seen[other] {
                        continue;
                    }
                    seen[other] = true;
                    queue.push_back(other);
                    let (r, c) = (alpha[a.head] as usize, alpha[a.tail] as usize);
                    let by_rows = other == a.head;
                    fixed[i] = Some(echelon_form(r, c, by_rows));
                }
            }
        }
        let mut names = Vec::new();
        let maps = q
            .arrows()
            .iter()
            .zip(fixed)
            .map(|(a, f)| {
                let c = alpha[a.tail] as usize;
                let r = alpha[a.head] as usize;
                let pattern = f.unwrap_or_else(|| vec![SliceEntry::Var(usize::MAX); r * c]);
                pattern
                    .into_iter()
                    .enumerate()
                    .map(|(e, entry)| match entry {
                        SliceEntry::Var(_) => {
                            names.push(format!("{}_{}{}", a.name, e / c.max(1) + 1, e % c.max(1) + 1));
                            SliceEntry::Var(names.len() - 1)
                        }
                        fixed => fixed,
                    })
                    .collect()
            })
            .collect();
        Self {
            num_vars: names.len(),
            maps,
            names,
        }
    }

    pub fn eval(&self, point: &[i64]) -> Vec<Vec<i64>> {
        self.maps
            .iter()
            .map(|m| {
                m.iter()
                    .map(|e| match *e {
                        SliceEntry::Const(c) => c,
                        SliceEntry::Var(i) => point[i],
                    })
                    .collect()
            })
            .collect()
    }

    pub fn representation(&self, q: Arc<Quiver>, alpha: &IntegerVector, point: &[i64]) -> Representation {
        let maps = self
            .eval(point)
            .into_iter()
            .zip(q.arrows())
            .map(|(entries, a)| {
                let (r, c) = (alpha[a.head] as usize, alpha[a.tail] as usize);
                RationalMatrix::new(r, c, entries.into_iter().map(rat).collect()).expect("entry count")
            })
            .collect();
        Representation::new(q, alpha.clone(), maps).expect("slice matches alpha")
    }
}

/// Echelon normal form of a generic `r x c` matrix under row operations
/// (`by_rows`) or column operations. Free entries are marked `Var`.
fn echelon_form(r: usize, c: usize, by_rows: bool) -> Vec<SliceEntry> {
    let free = SliceEntry::Var(usize::MAX);
    let mut m = vec![SliceEntry::Const(0); r * c];
    let k = r.min(c);
    for i in 0..r {
        for j in 0..c {
            m[i * c + j] = if i < k && j < k {
                SliceEntry::Const((i == j) as i64)
            } else if by_rows && r < c {
                // [I | *]
                free
            } else if !by_rows && c < r {
                // [I ; *]
                free
            } else {
                SliceEntry::Const(0)
            };
        }
    }
    m
}

fn poly_interaction(q: &Quiver, alpha: &IntegerVector, w: &Representation, slice: &Slice) -> PolyMatrix {
    let vars = Arc::new(slice.names.clone());
    let shape = InteractionShape::new(q, alpha, w.dim());
    let mut m = PolyMatrix::zeros(shape.rows, shape.cols, vars.clone());
    for_each_interaction_entry(q, alpha, w.dim(), |r, c, src| {
        let term = match src {
            EntrySource::V { arrow, k, l } => {
                let cols = alpha[q.arrow(arrow).tail] as usize;
                match slice.maps[arrow][k * cols + l] {
                    SliceEntry::Const(v) => SparsePolynomial::constant(vars.clone(), rat(v)),
                    SliceEntry::Var(i) => SparsePolynomial::variable(vars.clone(), i),
                }
            }
            EntrySource::W { arrow, i, j } => SparsePolynomial::constant(vars.clone(), -w.map(arrow).get(i, j)),
        };
        let sum = m.get(r, c).add(&term);
        m.set(r, c, sum);
    });
    m
}

/// Decides vanishing of `V -> det d^V_W` on `Rep(Q, alpha)`; `w` must live on `Q`
/// and the interaction matrix must be square.
pub fn decide_symbolic(
    w: &Representation,
    alpha: &IntegerVector,
    symbolic_limit: usize,
    grid_budget: u64,
) -> Result<SymbolicOutcome> {
    let q = w.quiver().clone();
    let shape = InteractionShape::new(&q, alpha, w.dim());
    if shape.rows != shape.cols {
        return Err(Error::EulerNonzero(shape.cols as i64 - shape.rows as i64));
    }
    if shape.rows <= symbolic_limit {
        let slice = Slice::full(&q, alpha);
        let det = symbolic_determinant(&poly_interaction(&q, alpha, w, &slice), symbolic_limit)?;
        if det.is_zero() {
            return Ok(SymbolicOutcome::Vanishes(SymbolicMethod::Bareiss));
        }
        let bounds: Vec<u64> = det.degrees().iter().map(|&d| d as u64).collect();
        let point = grid_points(&bounds)
            .find(|p| !det.eval(&p.iter().map(|&x| rat(x)).collect::<Vec<_>>()).is_zero())
            .expect("a nonzero polynomial is nonzero somewhere on its degree grid");
        return Ok(SymbolicOutcome::Witness(slice.representation(q, alpha, &point)));
    }
    let slice = Slice::normalized(&q, alpha);
    match grid_search(&q, alpha, w, &slice, grid_budget) {
        Ok(None) => Ok(SymbolicOutcome::Vanishes(SymbolicMethod::Grid)),
        Ok(Some(point)) => Ok(SymbolicOutcome::Witness(slice.representation(q, alpha, &point))),
        Err(e @ Error::SymbolicLimitExceeded(_)) => dense_orbit(w, alpha)?.ok_or(e),
        Err(e) => Err(e),
    }
}

/// Random draws tried when looking for a rigid representation.
const RIGID_ATTEMPTS: u64 = 4;

/// Decides vanishing at a rigid representation of dimension `alpha`, if a
/// random one turns out rigid. `det d^{gV}_W` is `det d^V_W` times a
/// nonzero character value, so a dense orbit settles every `V`.
fn dense_orbit(w: &Representation, alpha: &IntegerVector) -> Result<Option<SymbolicOutcome>> {
    let q = w.quiver().clone();
    for attempt in 0..RIGID_ATTEMPTS {
        let v0 = Representation::random(q.clone(), alpha, attempt, 10)?;
        if hom_ext(&v0, &v0)?.ext != 0 {
            continue;
        }
        return Ok(Some(if interaction_matrix(&v0, w)?.determinant()?.is_zero() {
            SymbolicOutcome::Vanishes(SymbolicMethod::DenseOrbit)
        } else {
            SymbolicOutcome::Witness(v0)
        }));
    }
    Ok(None)
}

/// Per-variable degree bound: a variable of `V(a)` meets `dim W(ha)` rows.
fn degree_bounds(q: &Quiver, w: &Representation, slice: &Slice) -> Vec<u64> {
    let mut bounds = vec![0u64; slice.num_vars];
    for (a, m) in slice.maps.iter().enumerate() {
        for e in m {
            if let SliceEntry::Var(i) = *e {
                bounds[i] = w.dim_at(q.arrow(a).head) as u64;
            }
        }
    }
    bounds
}

fn grid_points(bounds: &[u64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total: u64 = bounds.iter().map(|b| b + 1).product();
    (0..total).map(move |idx| decode_point(idx, bounds))
}

fn decode_point(mut idx: u64, bounds: &[u64]) -> Vec<i64> {
    bounds
        .iter()
        .map(|&b| {
            let digit = idx % (b + 1);
            idx /= b + 1;
            digit as i64
        })
        .collect()
}

/// Evaluates the scaled interaction matrix on every grid point; returns the
/// first point (in grid order) with nonzero determinant.
/// Random points tried when the grid is too large to enumerate.
const OVER_BUDGET_SAMPLES: usize = 16;

fn grid_search(
    q: &Quiver,
    alpha: &IntegerVector,
    w: &Representation,
    slice: &Slice,
    budget: u64,
) -> Result<Option<Vec<i64>>> {
    let bounds = degree_bounds(q, w, slice);
    let total = bounds
        .iter()
        .try_fold(1u64, |acc, b| acc.checked_mul(b + 1))
        .filter(|&t| t <= budget);

    // Clear denominators of W; V stays integral on the grid.
    let scale: BigInt = common_denominator(w.maps().iter().flat_map(|m| m.entries().iter()));
    let shape = InteractionShape::new(q, alpha, w.dim());
    let n = shape.rows;
    let mut base = vec![BigInt::zero(); n * n];
    let mut v_positions: Vec<(usize, SliceEntry)> = Vec::new();
    for_each_interaction_entry(q, alpha, w.dim(), |r, c, src| match src {
        EntrySource::V { arrow, k, l } => {
            let cols = alpha[q.arrow(arrow).tail] as usize;
            v_positions.push((r * n + c, slice.maps[arrow][k * cols + l]));
        }
        EntrySource::W { arrow, i, j } => {
            let scaled: Rational = w.map(arrow).get(i, j) * Rational::from_integer(scale.clone());
            base[r * n + c] -= scaled.to_integer();
        }
    });
    let fits = base.iter().all(|b| b.to_i128().is_some()) && scale.to_i128().is_some();
    let scale_small = scale.to_i128().unwrap_or(1);

    let nonzero_at = |point: &[i64]| -> bool {
        let value = |e: SliceEntry| match e {
            SliceEntry::Const(c) => c,
            SliceEntry::Var(i) => point[i],
        };
        if fits {
            let mut m: Vec<i128> = base.iter().map(|b| b.to_i128().expect("checked")).collect();
            for &(pos, e) in &v_positions {
                m[pos] += scale_small * value(e) as i128;
            }
            !det_is_zero_i128(&m, n)
        } else {
            let mut m = base.clone();
            for &(pos, e) in &v_positions {
                m[pos] += &scale * BigInt::from(value(e));
            }
            let rows = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
            !crate::linalg::integer::det_bigint(rows).is_zero()
        }
    };
    let Some(total) = total else {
        // Too large to certify vanishing; a nonzero value at a random point
        // still proves the opposite.
        let mut rng = ChaCha8Rng::seed_from_u64(slice.num_vars as u64);
        let samples: Vec<Vec<i64>> = (0..OVER_BUDGET_SAMPLES)
            .map(|_| (0..slice.num_vars).map(|_| rng.gen_range(-1000..=1000)).collect())
            .collect();
        if let Some(point) = samples.into_par_iter().find_first(|p| nonzero_at(p)) {
            return Ok(Some(point));
        }
        return Err(Error::SymbolicLimitExceeded(format!(
            "evaluation grid over {} variables exceeds budget {budget}",
            slice.num_vars
        )));
    };
    let hit = (0..total)
        .into_par_iter()
        .find_first(|&idx| nonzero_at(&decode_point(idx, &bounds)));
    Ok(hit.map(|idx| decode_point(idx, &bounds)))
}
