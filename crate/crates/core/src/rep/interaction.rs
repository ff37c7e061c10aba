//! The map `d^V_W(phi) = (phi(ha) V(a) - W(a) phi(ta))_a` and what it measures.
//!
//! Basis order, fixed once and for all:
//! * columns (source space) run over vertices in declaration order; inside
//!   vertex `x` the entry `phi(x)[i][k]` sits at offset `i * dim V(x) + k`;
//! * rows (target space) run over arrows in declaration order; inside arrow
//!   `a` the entry `(i, l)` of the `dim W(ha) x dim V(ta)` block sits at offset
//!   `i * dim V(ta) + l`.

use std::sync::Arc;

use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{
    symbolic_determinant, PolyMatrix, Rational, RationalMatrix, SparsePolynomial, DEFAULT_SYMBOLIC_LIMIT,
};
use crate::quiver::{IntegerVector, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomExt {
    pub hom: usize,
    pub ext: usize,
}

impl HomExt {
    pub fn is_orthogonal(&self) -> bool {
        self.hom == 0 && self.ext == 0
    }
}

/// Row and column offsets of the interaction matrix for dimension vectors
/// `alpha` (source) and `beta` (target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionShape {
    pub col_offsets: Vec<usize>,
    pub row_offsets: Vec<usize>,
    pub cols: usize,
    pub rows: usize,
}

impl InteractionShape {
    pub fn new(q: &Quiver, alpha: &IntegerVector, beta: &IntegerVector) -> Self {
        let mut col_offsets = Vec::with_capacity(q.num_vertices());
        let mut cols = 0;
        for x in 0..q.num_vertices() {
            col_offsets.push(cols);
            cols += (alpha[x] * beta[x]) as usize;
        }
        let mut row_offsets = Vec::with_capacity(q.num_arrows());
        let mut rows = 0;
        for a in q.arrows() {
            row_offsets.push(rows);
            rows += (beta[a.head] * alpha[a.tail]) as usize;
        }
        Self {
            col_offsets,
            row_offsets,
            cols,
            rows,
        }
    }
}

/// Where a nonzero entry of `d^V_W` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntrySource {
    /// `+V(a)[k][l]`
    V { arrow: usize, k: usize, l: usize },
    /// `-W(a)[i][j]`
    W { arrow: usize, i: usize, j: usize },
}

/// Visits every structurally nonzero position `(row, col)` of `d^V_W`.
/// The rational, modular and polynomial versions of the matrix are all
/// assembled from this single description.
pub fn for_each_interaction_entry(
    q: &Quiver,
    alpha: &IntegerVector,
    beta: &IntegerVector,
    mut visit: impl FnMut(usize, usize, EntrySource),
) -> InteractionShape {
    let shape = InteractionShape::new(q, alpha, beta);
    for (ai, a) in q.arrows().iter().enumerate() {
        let (vt, vh) = (alpha[a.tail] as usize, alpha[a.head] as usize);
        let (wt, wh) = (beta[a.tail] as usize, beta[a.head] as usize);
        let r0 = shape.row_offsets[ai];
        for i in 0..wh {
            for l in 0..vt {
                let row = r0 + i * vt + l;
                for k in 0..vh {
                    let col = shape.col_offsets[a.head] + i * vh + k;
                    visit(row, col, EntrySource::V { arrow: ai, k, l });
                }
                for j in 0..wt {
                    let col = shape.col_offsets[a.tail] + j * vt + l;
                    visit(row, col, EntrySource::W { arrow: ai, i, j });
                }
            }
        }
    }
    shape
}

pub fn interaction_matrix(v: &Representation, w: &Representation) -> Result<RationalMatrix> {
    v.same_quiver(w)?;
    let shape = InteractionShape::new(v.quiver(), v.dim(), w.dim());
    let mut m = RationalMatrix::zeros(shape.rows, shape.cols);
    for_each_interaction_entry(v.quiver(), v.dim(), w.dim(), |r, c, src| {
        let add = match src {
            EntrySource::V { arrow, k, l } => v.map(arrow).get(k, l).clone(),
            EntrySource::W { arrow, i, j } => -w.map(arrow).get(i, j),
        };
        let cur = m.get(r, c) + add;
        m.set(r, c, cur);
    });
    Ok(m)
}

pub fn hom_ext(v: &Representation, w: &Representation) -> Result<HomExt> {
    let d = interaction_matrix(v, w)?;
    let rank = d.rank();
    Ok(HomExt {
        hom: d.cols() - rank,
        ext: d.rows() - rank,
    })
}

/// `c(V, W) = det d^V_W`; requires `<dim V, dim W> = 0`.
pub fn schofield_eval(v: &Representation, w: &Representation) -> Result<Rational> {
    v.same_quiver(w)?;
    let e = v.quiver().euler_form(v.dim(), w.dim())?;
    if e != 0 {
        return Err(Error::EulerNonzero(e));
    }
    interaction_matrix(v, w)?.determinant()
}

/// `det(t_1 W(a_1) + ... + t_m W(a_m))` for `W` on a Kronecker quiver with
/// equal dimensions at both vertices.
pub fn functional_determinant(w: &Representation) -> Result<SparsePolynomial> {
    let q = w.quiver();
    let kronecker = q.num_vertices() == 2
        && q.num_arrows() > 0
        && q.arrows()
            .iter()
            .all(|a| (a.tail, a.head) == (q.arrow(0).tail, q.arrow(0).head));
    if !kronecker {
        return Err(Error::Precondition(
            "functional determinant needs a Kronecker quiver".into(),
        ));
    }
    if w.dim()[0] != w.dim()[1] {
        return Err(Error::Precondition(format!(
            "functional determinant needs equal dimensions, found {}",
            w.dim()
        )));
    }
    let n = w.dim_at(0);
    let vars: Arc<Vec<String>> = Arc::new((1..=q.num_arrows()).map(|i| format!("t{i}")).collect());
    let mut m = PolyMatrix::zeros(n, n, vars.clone());
    for i in 0..n {
        for j in 0..n {
            let mut entry = SparsePolynomial::zero(vars.clone());
            for (a, map) in w.maps().iter().enumerate() {
                let term = SparsePolynomial::variable(vars.clone(), a).scale(map.get(i, j));
                entry = entry.add(&term);
            }
            m.set(i, j, entry);
        }
    }
    symbolic_determinant(&m, n.max(DEFAULT_SYMBOLIC_LIMIT))
}

/// Whether `S_x` splits off: the joint kernel of the maps leaving `x` is not
/// contained in the span of the images of the maps entering `x`.
pub fn has_simple_summand(v: &Representation, x: usize) -> Result<bool> {
    let q = v.quiver();
    if x >= q.num_vertices() {
        return Err(Error::UnknownVertex(format!("#{x}")));
    }
    let d = v.dim_at(x);
    if d == 0 {
        return Ok(false);
    }
    let outgoing: Vec<&RationalMatrix> = q.outgoing(x).map(|a| v.map(a)).collect();
    let kernel = if outgoing.is_empty() {
        RationalMatrix::identity(d)
    } else {
        RationalMatrix::vstack(&outgoing, d).kernel()
    };
    if kernel.cols() == 0 {
        return Ok(false);
    }
    let incoming: Vec<&RationalMatrix> = q.incoming(x).map(|a| v.map(a)).collect();
    let image = RationalMatrix::hstack(&incoming, d);
    let base = image.rank();
    Ok(RationalMatrix::hstack(&[&image, &kernel], d).rank() > base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn arc(q: Quiver) -> Arc<Quiver> {
        Arc::new(q)
    }

    fn scalars(q: &Arc<Quiver>, dim: &[i64], values: &[i64]) -> Representation {
        let maps = values.iter().map(|&v| RationalMatrix::from_i64_rows(&[&[v]])).collect();
        Representation::new(q.clone(), IntegerVector::from(dim), maps).unwrap()
    }

    fn a2_identity(q: &Arc<Quiver>) -> Representation {
        scalars(q, &[1, 1], &[1])
    }

    #[test]
    fn a2_simples() {
        let q = arc(Quiver::path(2));
        let (s1, s2) = (
            Representation::simple(q.clone(), 0),
            Representation::simple(q.clone(), 1),
        );
        let d = interaction_matrix(&s1, &s2).unwrap();
        assert_eq!((d.rows(), d.cols()), (1, 0));
        assert_eq!(hom_ext(&s1, &s2).unwrap(), HomExt { hom: 0, ext: 1 });
        assert_eq!(schofield_eval(&s2, &s1).unwrap(), rat(1));
        let p = a2_identity(&q);
        assert_eq!(hom_ext(&p, &p).unwrap(), HomExt { hom: 1, ext: 0 });
        let zero = Representation::zero(q, IntegerVector::zeros(2)).unwrap();
        assert_eq!(hom_ext(&p, &zero).unwrap(), HomExt { hom: 0, ext: 0 });
    }

    #[test]
    fn theta2_scalars() {
        let q = arc(Quiver::kronecker(2));
        let v = scalars(&q, &[1, 1], &[1, 0]);
        let w = scalars(&q, &[1, 1], &[0, 1]);
        let d = interaction_matrix(&v, &w).unwrap();
        assert_eq!((d.rows(), d.cols()), (2, 2));
        assert_eq!(schofield_eval(&v, &w).unwrap().abs(), rat(1));
        // General scalars: det = +-(v_a w_b - v_b w_a).
        let v = scalars(&q, &[1, 1], &[2, 3]);
        let w = scalars(&q, &[1, 1], &[5, 7]);
        assert_eq!(schofield_eval(&v, &w).unwrap().abs(), rat(1));
        let w = scalars(&q, &[1, 1], &[4, 6]);
        assert_eq!(schofield_eval(&v, &w).unwrap(), rat(0));
    }

    #[test]
    fn euler_nonzero_rejected() {
        let q = arc(Quiver::path(2));
        let s1 = Representation::simple(q.clone(), 0);
        assert_eq!(schofield_eval(&s1, &s1), Err(Error::EulerNonzero(1)));
    }

    #[test]
    fn functional_determinants() {
        let q = arc(Quiver::kronecker(2));
        let w = scalars(&q, &[1, 1], &[1, 1]);
        let f = functional_determinant(&w).unwrap();
        assert_eq!(f.to_string(), "t1 + t2");
        assert!(functional_determinant(&Representation::simple(arc(Quiver::path(3)), 0)).is_err());
    }

    #[test]
    fn simple_summands() {
        let q = arc(Quiver::path(2));
        let p = a2_identity(&q);
        assert!(!has_simple_summand(&p, 0).unwrap());
        assert!(!has_simple_summand(&p, 1).unwrap());
        let s1 = Representation::simple(q.clone(), 0);
        assert!(has_simple_summand(&s1, 0).unwrap());
        assert!(has_simple_summand(&s1.direct_sum(&p).unwrap(), 0).unwrap());
        assert!(!has_simple_summand(&s1.direct_sum(&p).unwrap(), 1).unwrap());
    }

    fn small_quiver() -> impl Strategy<Value = Quiver> {
        prop_oneof![
            Just(Quiver::path(2)),
            Just(Quiver::path(3)),
            Just(Quiver::kronecker(2)),
            Just(Quiver::kronecker(3)),
            Just(Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "3"), ("c", "2", "3")]).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn euler_identity(q in small_quiver(), seed in any::<u64>(), a in prop::collection::vec(0i64..3, 3), b in prop::collection::vec(0i64..3, 3)) {
            let q = arc(q);
            let n = q.num_vertices();
            let (a, b) = (IntegerVector::from(&a[..n]), IntegerVector::from(&b[..n]));
            let v = Representation::random(q.clone(), &a, seed, 3).unwrap();
            let w = Representation::random(q.clone(), &b, seed ^ 1, 3).unwrap();
            let he = hom_ext(&v, &w).unwrap();
            prop_assert_eq!(he.hom as i64 - he.ext as i64, q.euler_form(&a, &b).unwrap());
        }

        #[test]
        fn schofield_nonzero_iff_orthogonal(seed in any::<u64>(), bound in 1i64..3) {
            let q = arc(Quiver::kronecker(3));
            let v = Representation::random(q.clone(), &IntegerVector::from(vec![1, 2]), seed, bound).unwrap();
            let w = Representation::random(q.clone(), &IntegerVector::from(vec![3, 3]), seed ^ 9, bound).unwrap();
            let c = schofield_eval(&v, &w).unwrap();
            prop_assert_eq!(c != rat(0), hom_ext(&v, &w).unwrap().is_orthogonal());
        }

        #[test]
        fn simple_summand_of_direct_sum(q in small_quiver(), seed in any::<u64>(), a in prop::collection::vec(0i64..3, 3), x in 0usize..3) {
            let q = arc(q);
            let n = q.num_vertices();
            let x = x % n;
            let v = Representation::random(q.clone(), &IntegerVector::from(&a[..n]), seed, 3).unwrap();
            let vs = v.direct_sum(&Representation::simple(q.clone(), x)).unwrap();
            prop_assert!(has_simple_summand(&vs, x).unwrap());
        }
    }
}
