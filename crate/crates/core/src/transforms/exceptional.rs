//! Exceptional sequences and the quiver `Q(eps)` they span.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::orbit::{derive_seed, generic_hom_ext};
use crate::quiver::{Arrow, IntegerVector, Quiver};
use crate::rep::HomExt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCheck {
    pub euler_one: bool,
    /// Generic `(hom, ext)` from the root to itself; `(1, 0)` for a real Schur root.
    pub generic: HomExt,
}

impl RootCheck {
    pub fn passed(&self) -> bool {
        self.euler_one && self.generic == HomExt { hom: 1, ext: 0 }
    }
}

/// Conditions on a pair `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// Generic `(hom, ext)` from `eps_i` to `eps_j`.
    pub forward: HomExt,
    /// `<eps_j, eps_i>`.
    pub backward_euler: i64,
}

impl PairCheck {
    pub fn orthogonal(&self) -> bool {
        self.forward.is_orthogonal()
    }

    pub fn quiver_condition(&self) -> bool {
        self.backward_euler <= 0
    }
}

#[derive(Clone, Debug)]
pub struct ExceptionalSequence {
    pub quiver: Arc<Quiver>,
    pub roots: Vec<IntegerVector>,
    pub root_checks: Vec<RootCheck>,
    pub pair_checks: Vec<PairCheck>,
    pub length_ok: bool,
    /// Present exactly when every check passes.
    pub derived: Option<Quiver>,
}

impl ExceptionalSequence {
    pub fn is_valid(&self) -> bool {
        self.length_ok
            && self.root_checks.iter().all(RootCheck::passed)
            && self.pair_checks.iter().all(|p| p.orthogonal() && p.quiver_condition())
    }

    /// Human-readable list of failed conditions.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.length_ok {
            out.push(format!(
                "{} roots on {} vertices",
                self.roots.len(),
                self.quiver.num_vertices()
            ));
        }
        for (i, c) in self.root_checks.iter().enumerate() {
            if !c.euler_one {
                out.push(format!("<eps{0}, eps{0}> != 1", i + 1));
            }
            if c.generic != (HomExt { hom: 1, ext: 0 }) {
                out.push(format!(
                    "eps{} generic self hom/ext = ({}, {})",
                    i + 1,
                    c.generic.hom,
                    c.generic.ext
                ));
            }
        }
        for p in &self.pair_checks {
            if !p.orthogonal() {
                out.push(format!(
                    "hom/ext(eps{}, eps{}) = ({}, {})",
                    p.i + 1,
                    p.j + 1,
                    p.forward.hom,
                    p.forward.ext
                ));
            }
            if !p.quiver_condition() {
                out.push(format!("<eps{}, eps{}> = {} > 0", p.j + 1, p.i + 1, p.backward_euler));
            }
        }
        out
    }
}

/// Checks every condition and builds `Q(eps)` when all hold. Euler values
/// are exact; generic hom and ext are minima over `trials` random pairs.
pub fn validate_exceptional_sequence(
    q: &Arc<Quiver>,
    roots: &[IntegerVector],
    trials: usize,
    seed: u64,
) -> Result<ExceptionalSequence> {
    for r in roots {
        if r.len() != q.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: q.num_vertices(),
                found: r.len(),
            });
        }
    }
    let mut root_checks = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        root_checks.push(RootCheck {
            euler_one: q.euler_form(r, r)? == 1,
            generic: generic_hom_ext(q, r, r, trials, derive_seed(seed, &[i as i64]))?,
        });
    }
    let mut pair_checks = Vec::new();
    for j in 0..roots.len() {
        for i in 0..j {
            pair_checks.push(PairCheck {
                i,
                j,
                forward: generic_hom_ext(
                    q,
                    &roots[i],
                    &roots[j],
                    trials,
                    derive_seed(seed, &[i as i64, j as i64]),
                )?,
                backward_euler: q.euler_form(&roots[j], &roots[i])?,
            });
        }
    }
    let mut seq = ExceptionalSequence {
        quiver: q.clone(),
        roots: roots.to_vec(),
        root_checks,
        pair_checks,
        length_ok: roots.len() <= q.num_vertices(),
        derived: None,
    };
    if seq.is_valid() {
        seq.derived = Some(epsilon_quiver(&seq)?);
    }
    Ok(seq)
}

/// Vertices `1..r`, and `-<eps_j, eps_i>` arrows `j -> i` for `i < j`.
pub fn epsilon_quiver(seq: &ExceptionalSequence) -> Result<Quiver> {
    if !seq.is_valid() {
        return Err(Error::Precondition(format!(
            "sequence is not a quiver exceptional sequence: {}",
            seq.failures().join(", ")
        )));
    }
    let vertices: Vec<String> = (1..=seq.roots.len()).map(|k| k.to_string()).collect();
    let mut arrows = Vec::new();
    for p in &seq.pair_checks {
        for k in 0..(-p.backward_euler) as usize {
            arrows.push(Arrow {
                name: format!("e{}{}_{}", p.j + 1, p.i + 1, k + 1),
                tail: p.j,
                head: p.i,
            });
        }
    }
    Quiver::new(vertices, arrows)
}
