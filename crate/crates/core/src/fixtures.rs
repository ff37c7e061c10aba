//! Named example data shipped with the library.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::Representation;

pub const KRON3_QUIVER: &str = include_str!("../fixtures/kron3.quiver");
pub const THETA2_QUIVER: &str = include_str!("../fixtures/theta2.quiver");
pub const SKEW_REP: &str = include_str!("../fixtures/skew.rep");
pub const ZWARA_REP: &str = include_str!("../fixtures/zwara.rep");

/// Fixture names, in the order they are reported.
pub const NAMES: [&str; 7] = ["kron3", "b", "c", "d", "e", "f", "g"];

/// A wild quiver together with an exceptional sequence reducing it toward
/// the three-arrow Kronecker quiver.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub quiver: Arc<Quiver>,
    /// Empty for `kron3`, which needs no reduction.
    pub sequence: Vec<IntegerVector>,
    /// Applied to `Q(eps)` when that is a three-vertex quiver, in its vertex order.
    pub second_stage: Vec<IntegerVector>,
}

fn vecs(rows: &[&[i64]]) -> Vec<IntegerVector> {
    rows.iter().map(|r| IntegerVector::from(r.to_vec())).collect()
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, text, sequence, second): (&'static str, &str, Vec<IntegerVector>, Vec<IntegerVector>) = match name {
        "kron3" => ("kron3", KRON3_QUIVER, vec![], vec![]),
        "b" => (
            "b",
            include_str!("../fixtures/b.quiver"),
            vecs(&[&[0, 0, 1], &[2, 3, 0]]),
            vec![],
        ),
        // vertices b c d e f g
        "c" => (
            "c",
            include_str!("../fixtures/c.quiver"),
            vecs(&[&[1, 3, 1, 1, 1, 0], &[0, 0, 0, 0, 0, 1]]),
            vec![],
        ),
        // vertices a b c d e f
        "d" => (
            "d",
            include_str!("../fixtures/d.quiver"),
            vecs(&[&[0, 0, 0, 1, 0, 0], &[2, 1, 1, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
            vecs(&[&[2, 3, 0], &[0, 0, 1]]),
        ),
        // vertices a b c d e f h i
        "e" => (
            "e",
            include_str!("../fixtures/e.quiver"),
            vecs(&[
                &[3, 2, 1, 0, 1, 2, 0, 2],
                &[0, 0, 0, 0, 0, 0, 1, 0],
                &[0, 0, 0, 1, 0, 0, 0, 0],
            ]),
            vecs(&[&[3, 2, 0], &[0, 0, 1]]),
        ),
        // vertices h d c b a i e f j
        "f" => (
            "f",
            include_str!("../fixtures/f.quiver"),
            vecs(&[&[0, 3, 5, 7, 9, 3, 5, 7, 5], &[1, 0, 0, 0, 0, 0, 0, 0, 0]]),
            vec![],
        ),
        // vertices k g h d c b a e f i
        "g" => (
            "g",
            include_str!("../fixtures/g.quiver"),
            vecs(&[&[0, 3, 5, 7, 9, 11, 13, 5, 9, 7], &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]]),
            vec![],
        ),
        other => {
            return Err(Error::Precondition(format!(
                "unknown fixture `{other}`; expected one of {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(Fixture {
        name,
        quiver: Arc::new(Quiver::parse(text)?),
        sequence,
        second_stage: second,
    })
}

pub fn kron3() -> Arc<Quiver> {
    Arc::new(Quiver::parse(KRON3_QUIVER).expect("bundled quiver parses"))
}

pub fn theta2() -> Arc<Quiver> {
    Arc::new(Quiver::parse(THETA2_QUIVER).expect("bundled quiver parses"))
}

/// The skew-symmetric triple on `kron3`.
pub fn skew() -> Representation {
    Representation::parse(SKEW_REP, kron3())
        .expect("bundled representation parses")
        .0
}

/// The `(3,3)` pair on the Kronecker quiver with vanishing functional determinant.
pub fn zwara() -> Representation {
    Representation::parse(ZWARA_REP, theta2())
        .expect("bundled representation parses")
        .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::transforms::validate_exceptional_sequence;

    #[test]
    fn bundled_data_parses() {
        for name in NAMES {
            let f = fixture(name).unwrap();
            for r in f.sequence.iter() {
                assert_eq!(r.len(), f.quiver.num_vertices(), "{name}");
            }
        }
        assert!(fixture("h").is_err());
        let s = skew();
        assert_eq!(
            s.map(0),
            &RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]])
        );
        assert_eq!(zwara().dim().0, vec![3, 3]);
    }

    #[test]
    fn small_fixtures_reduce_to_kron3() {
        for name in ["b", "c"] {
            let f = fixture(name).unwrap();
            let seq = validate_exceptional_sequence(&f.quiver, &f.sequence, 2, 7).unwrap();
            assert!(seq.is_valid(), "{name}: {:?}", seq.failures());
            assert!(seq.derived.unwrap().is_isomorphic_to(&Quiver::kronecker(3)));
        }
    }
}
