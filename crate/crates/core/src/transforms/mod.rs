//! Reductions between quivers: reflections at sinks and sources, shrinking
//! a path through a vertex to single arrows, and exceptional sequences.

mod exceptional;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::quiver::{Arrow, IntegerVector, Quiver};
use crate::rep::Representation;

pub use exceptional::{epsilon_quiver, validate_exceptional_sequence, ExceptionalSequence, PairCheck, RootCheck};

/// `s_x(Q)` and `s_x(alpha)`, where
/// `s_x(alpha)(x) = sum_{ha=x} alpha(ta) + sum_{ta=x} alpha(ha) - alpha(x)`.
pub fn reflect_dim(q: &Quiver, x: usize, alpha: &IntegerVector) -> Result<(Quiver, IntegerVector)> {
    check_vertex(q, x)?;
    if alpha.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: alpha.len(),
        });
    }
    if !q.is_sink(x) && !q.is_source(x) {
        return Err(Error::Precondition(format!(
            "vertex {} is neither a sink nor a source",
            q.vertex_name(x)
        )));
    }
    let mut out = alpha.clone();
    let incoming: i64 = q.incoming(x).map(|a| alpha[q.arrow(a).tail]).sum();
    let outgoing: i64 = q.outgoing(x).map(|a| alpha[q.arrow(a).head]).sum();
    out.0[x] = incoming + outgoing - alpha[x];
    Ok((q.reverse_at(x), out))
}

fn check_vertex(q: &Quiver, x: usize) -> Result<()> {
    if x >= q.num_vertices() {
        return Err(Error::UnknownVertex(format!("#{x}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Kernel construction at a sink.
    Plus,
    /// Cokernel construction at a source.
    Minus,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Direction::Plus),
            "minus" | "-" => Ok(Direction::Minus),
            _ => Err(Error::Precondition(format!(
                "direction must be plus or minus, not `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "plus",
            Direction::Minus => "minus",
        })
    }
}

/// Reflection functor at `x`, over `s_x(Q)` with the arrow order of `Q`.
///
/// `Plus` needs a sink: the new space is `ker(sum V(ta) -> V(x))` with basis
/// the kernel columns from reduced row echelon form, and the reversed arrows
/// act by the coordinate projections. `Minus` needs a source: the new space
/// is `coker(V(x) -> sum V(ha))`, realized as the row space of a basis of the
/// left kernel, and the reversed arrows act by the corresponding column blocks.
pub fn reflect_rep(v: &Representation, x: usize, direction: Direction) -> Result<Representation> {
    let q = v.quiver();
    check_vertex(q, x)?;
    let new_q = Arc::new(q.reverse_at(x));
    let mut maps = v.maps().to_vec();
    let mut dim = v.dim().clone();
    match direction {
        Direction::Plus => {
            if !q.is_sink(x) {
                return Err(Error::Precondition(format!(
                    "vertex {} is not a sink",
                    q.vertex_name(x)
                )));
            }
            let arrows: Vec<usize> = q.incoming(x).collect();
            let blocks: Vec<&RationalMatrix> = arrows.iter().map(|&a| v.map(a)).collect();
            let phi = RationalMatrix::hstack(&blocks, v.dim_at(x));
            let k = phi.kernel();
            dim.0[x] = k.cols() as i64;
            let mut row = 0;
            for &a in &arrows {
                let d = v.dim_at(q.arrow(a).tail);
                maps[a] = k.submatrix(row..row + d, 0..k.cols());
                row += d;
            }
        }
        Direction::Minus => {
            if !q.is_source(x) {
                return Err(Error::Precondition(format!(
                    "vertex {} is not a source",
                    q.vertex_name(x)
                )));
            }
            let arrows: Vec<usize> = q.outgoing(x).collect();
            let blocks: Vec<&RationalMatrix> = arrows.iter().map(|&a| v.map(a)).collect();
            let psi = RationalMatrix::vstack(&blocks, v.dim_at(x));
            let p = psi.transpose().kernel().transpose();
            dim.0[x] = p.rows() as i64;
            let mut col = 0;
            for &a in &arrows {
                let d = v.dim_at(q.arrow(a).head);
                maps[a] = p.submatrix(0..p.rows(), col..col + d);
                col += d;
            }
        }
    }
    Representation::new(new_q, dim, maps)
}

/// Whether `g` (one invertible matrix per vertex) is an isomorphism `a -> b`.
pub fn is_isomorphism(a: &Representation, b: &Representation, g: &[RationalMatrix]) -> bool {
    if a.quiver().as_ref() != b.quiver().as_ref() || a.dim() != b.dim() || g.len() != a.quiver().num_vertices() {
        return false;
    }
    if g.iter()
        .enumerate()
        .any(|(x, m)| m.rows() != a.dim_at(x) || m.cols() != a.dim_at(x) || m.inverse().is_none())
    {
        return false;
    }
    a.quiver()
        .arrows()
        .iter()
        .enumerate()
        .all(|(i, arrow)| &g[arrow.head] * a.map(i) == b.map(i) * &g[arrow.tail])
}

/// An explicit isomorphism from `V` to `C^-_x C^+_x V` for a sink `x`, or
/// `None` when `S_x` splits off `V` and the round trip loses it.
pub fn round_trip_isomorphism(v: &Representation, x: usize) -> Result<Option<(Representation, Vec<RationalMatrix>)>> {
    let back = reflect_rep(&reflect_rep(v, x, Direction::Plus)?, x, Direction::Minus)?;
    if back.dim() != v.dim() {
        return Ok(None);
    }
    let q = v.quiver();
    // phi = M * P with P the cokernel projection; M maps back to V(x).
    let arrows: Vec<usize> = q.incoming(x).collect();
    let phi = RationalMatrix::hstack(&arrows.iter().map(|&a| v.map(a)).collect::<Vec<_>>(), v.dim_at(x));
    let p = RationalMatrix::hstack(&arrows.iter().map(|&a| back.map(a)).collect::<Vec<_>>(), back.dim_at(x));
    let Some(mt) = p.transpose().solve(&phi.transpose()) else {
        return Ok(None);
    };
    let Some(m_inv) = mt.transpose().inverse() else {
        return Ok(None);
    };
    let g: Vec<RationalMatrix> = (0..q.num_vertices())
        .map(|y| {
            if y == x {
                m_inv.clone()
            } else {
                RationalMatrix::identity(v.dim_at(y))
            }
        })
        .collect();
    Ok(is_isomorphism(v, &back, &g).then_some((back, g)))
}

/// Result of replacing the vertex `v0` by composed arrows.
#[derive(Clone, Debug)]
pub struct Shrunk {
    pub quiver: Arc<Quiver>,
    pub beta: IntegerVector,
    pub rep: Option<Representation>,
    pub sigma: Option<IntegerVector>,
    /// Old vertex index of each new vertex.
    pub vertex_map: Vec<usize>,
}

/// Removes `v0`, which has exactly one outgoing arrow `b: v0 -> w` and at
/// least one incoming arrow `a_i`, replacing the path `b a_i` by a single
/// arrow with map `W(b) W(a_i)`. The mirror configuration (one incoming
/// arrow `b: w -> v0`, composites `a_i b`) is accepted as well. Requires
/// `beta(v0) >= beta(w)` and, when a weight is given, `sigma(v0) = 0`.
pub fn shrink(
    q: &Arc<Quiver>,
    v0: usize,
    beta: &IntegerVector,
    w: Option<&Representation>,
    sigma: Option<&IntegerVector>,
) -> Result<Shrunk> {
    check_vertex(q, v0)?;
    if beta.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: beta.len(),
        });
    }
    let incoming: Vec<usize> = q.incoming(v0).collect();
    let outgoing: Vec<usize> = q.outgoing(v0).collect();
    // (b, others, forward): forward means b leaves v0.
    let (b, others, forward) = if outgoing.len() == 1 && !incoming.is_empty() {
        (outgoing[0], incoming, true)
    } else if incoming.len() == 1 && !outgoing.is_empty() {
        (incoming[0], outgoing, false)
    } else {
        return Err(Error::Precondition(format!(
            "vertex {} needs exactly one arrow on one side and at least one on the other",
            q.vertex_name(v0)
        )));
    };
    let far = if forward { q.arrow(b).head } else { q.arrow(b).tail };
    let mut problems = Vec::new();
    if beta[v0] < beta[far] {
        problems.push(format!(
            "beta({}) = {} is smaller than beta({}) = {}",
            q.vertex_name(v0),
            beta[v0],
            q.vertex_name(far),
            beta[far]
        ));
    }
    if let Some(s) = sigma {
        if s.len() != q.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: q.num_vertices(),
                found: s.len(),
            });
        }
        if s[v0] != 0 {
            problems.push(format!("sigma({}) = {} is not zero", q.vertex_name(v0), s[v0]));
        }
    }
    if let Some(w) = w {
        if w.quiver().as_ref() != q.as_ref() {
            return Err(Error::QuiverMismatch);
        }
        if w.dim() != beta {
            problems.push(format!("representation has dimension {} rather than {beta}", w.dim()));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }

    let vertex_map: Vec<usize> = (0..q.num_vertices()).filter(|&x| x != v0).collect();
    let mut new_index = vec![usize::MAX; q.num_vertices()];
    for (i, &x) in vertex_map.iter().enumerate() {
        new_index[x] = i;
    }
    let mut arrows = Vec::new();
    let mut sources = Vec::new();
    for (i, a) in q.arrows().iter().enumerate() {
        if a.tail != v0 && a.head != v0 {
            arrows.push(Arrow {
                name: a.name.clone(),
                tail: new_index[a.tail],
                head: new_index[a.head],
            });
            sources.push((i, None));
        }
    }
    let bname = &q.arrow(b).name;
    for &a in &others {
        let arrow = q.arrow(a);
        let (name, tail, head) = if forward {
            (format!("{bname}{}", arrow.name), arrow.tail, far)
        } else {
            (format!("{}{bname}", arrow.name), far, arrow.head)
        };
        arrows.push(Arrow {
            name,
            tail: new_index[tail],
            head: new_index[head],
        });
        sources.push((a, Some(b)));
    }
    let names: Vec<String> = vertex_map.iter().map(|&x| q.vertex_name(x).to_string()).collect();
    let new_q = Arc::new(Quiver::new(names, arrows)?);
    let rep = w
        .map(|w| {
            let maps = sources
                .iter()
                .map(|&(a, via)| match via {
                    None => w.map(a).clone(),
                    Some(b) if forward => w.map(b) * w.map(a),
                    Some(b) => w.map(a) * w.map(b),
                })
                .collect();
            Representation::new(new_q.clone(), beta.restrict(&vertex_map), maps)
        })
        .transpose()?;
    Ok(Shrunk {
        quiver: new_q,
        beta: beta.restrict(&vertex_map),
        rep,
        sigma: sigma.map(|s| s.restrict(&vertex_map)),
        vertex_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{decompose, has_simple_summand, hom_ext};

    fn v(x: &[i64]) -> IntegerVector {
        IntegerVector::from(x.to_vec())
    }

    fn a2_indecomposable() -> Representation {
        let q = Arc::new(Quiver::path(2));
        Representation::new(q, v(&[1, 1]), vec![RationalMatrix::identity(1)]).unwrap()
    }

    #[test]
    fn reflect_dim_examples() {
        let a2 = Quiver::path(2);
        assert_eq!(reflect_dim(&a2, 1, &v(&[1, 1])).unwrap().1, v(&[1, 0]));
        let k3 = Quiver::kronecker(3);
        assert_eq!(reflect_dim(&k3, 1, &v(&[1, 1])).unwrap().1, v(&[1, 2]));
        let a3 = Quiver::path(3);
        assert_eq!(reflect_dim(&a3, 2, &v(&[1, 0, 0])).unwrap().1, v(&[1, 0, 0]));
        assert!(reflect_dim(&a3, 7, &v(&[1, 0, 0])).is_err());
        let a2t = Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap();
        assert!(matches!(
            reflect_dim(&a2t, 1, &v(&[1, 1, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reflection_of_simple_and_a2() {
        let q = Arc::new(Quiver::path(2));
        let s2 = Representation::simple(q.clone(), 1);
        assert!(reflect_rep(&s2, 1, Direction::Plus).unwrap().dim().is_zero());
        let u = a2_indecomposable();
        let r = reflect_rep(&u, 1, Direction::Plus).unwrap();
        assert_eq!(r.dim(), &v(&[1, 0]));
        let (back, g) = round_trip_isomorphism(&u, 1).unwrap().unwrap();
        assert!(is_isomorphism(&u, &back, &g));
        assert!(round_trip_isomorphism(&s2, 1).unwrap().is_none());
        assert!(reflect_rep(&u, 0, Direction::Plus).is_err());
        assert!(reflect_rep(&u, 1, Direction::Minus).is_err());
    }

    #[test]
    fn reflection_preserves_orthogonality_data() {
        let q = Arc::new(Quiver::kronecker(2));
        for seed in 0..6 {
            let a = Representation::random(q.clone(), &v(&[1, 2]), seed, 9).unwrap();
            let b = Representation::random(q.clone(), &v(&[2, 3]), seed + 100, 9).unwrap();
            if has_simple_summand(&a, 1).unwrap() || has_simple_summand(&b, 1).unwrap() {
                continue;
            }
            let ra = reflect_rep(&a, 1, Direction::Plus).unwrap();
            let rb = reflect_rep(&b, 1, Direction::Plus).unwrap();
            assert_eq!(hom_ext(&a, &b).unwrap(), hom_ext(&ra, &rb).unwrap());
            for s in decompose(&a, seed).unwrap().summands {
                let expect = reflect_dim(&q, 1, s.rep.dim()).unwrap().1;
                assert_eq!(reflect_rep(&s.rep, 1, Direction::Plus).unwrap().dim(), &expect);
            }
        }
    }

    #[test]
    fn shrink_path_of_identities() {
        let q = Arc::new(Quiver::path(3));
        let w = Representation::new(q.clone(), v(&[1, 1, 1]), vec![RationalMatrix::identity(1); 2]).unwrap();
        let s = shrink(&q, 1, w.dim(), Some(&w), Some(&v(&[1, 0, -1]))).unwrap();
        assert!(s.quiver.is_isomorphic_to(&Quiver::path(2)));
        assert_eq!(s.rep.unwrap().map(0), &RationalMatrix::identity(1));
        assert_eq!(s.sigma.unwrap(), v(&[1, -1]));
        let err = shrink(&q, 1, &v(&[1, 0, 1]), None, None).unwrap_err();
        assert!(err.to_string().contains("smaller"));
        let err = shrink(&q, 1, &v(&[1, 1, 1]), None, Some(&v(&[1, 1, -2]))).unwrap_err();
        assert!(err.to_string().contains("not zero"));
        assert!(shrink(&q, 0, &v(&[1, 1, 1]), None, None).is_err());
    }

    #[test]
    fn shrink_mirror_configuration() {
        let q = Arc::new(
            Quiver::from_names(
                &["w", "v", "x", "y"],
                &[("b", "w", "v"), ("p", "v", "x"), ("r", "v", "y")],
            )
            .unwrap(),
        );
        let beta = v(&[1, 2, 1, 1]);
        let w = Representation::random(q.clone(), &beta, 3, 5).unwrap();
        let s = shrink(&q, 1, &beta, Some(&w), None).unwrap();
        let rep = s.rep.unwrap();
        assert_eq!(s.quiver.num_arrows(), 2);
        assert_eq!(s.quiver.arrow(0).name, "pb");
        assert_eq!(rep.map(0), &(w.map(1) * w.map(0)));
    }
}
