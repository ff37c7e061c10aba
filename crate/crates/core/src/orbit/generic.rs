//! Generic behaviour of representation spaces: hom and ext between generic
//! representations, canonical decompositions and the rule for multiples.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::membership::derive_seed;
use crate::error::{Error, Result};
use crate::linalg::integer::{rank_mod_p, PRIME};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::{decompose, for_each_interaction_entry, EntrySource, HomExt, Representation};

/// Entry bound for the representations fed to the exact decomposition.
const DECOMPOSITION_BOUND: i64 = 50;

fn check_dimension_vector(q: &Quiver, v: &IntegerVector) -> Result<()> {
    if v.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: v.len(),
        });
    }
    if !v.is_nonnegative() {
        return Err(Error::NegativeDimension(v.to_string()));
    }
    Ok(())
}

type ModpRep = Vec<Vec<u64>>;

fn random_modp(q: &Quiver, dim: &IntegerVector, rng: &mut impl Rng) -> ModpRep {
    q.arrows()
        .iter()
        .map(|a| {
            (0..dim[a.head] * dim[a.tail])
                .map(|_| rng.gen_range(0..PRIME))
                .collect()
        })
        .collect()
}

/// `dim ker d^V_W` over the prime field for maps given row-major.
fn hom_modp(q: &Quiver, alpha: &IntegerVector, v: &ModpRep, beta: &IntegerVector, w: &ModpRep) -> usize {
    let mut m: Vec<Vec<u64>> = Vec::new();
    let shape = for_each_interaction_entry(q, alpha, beta, |_, _, _| {});
    m.resize(shape.rows, vec![0; shape.cols]);
    for_each_interaction_entry(q, alpha, beta, |r, c, src| {
        let add = match src {
            EntrySource::V { arrow, k, l } => v[arrow][k * alpha[q.arrow(arrow).tail] as usize + l],
            EntrySource::W { arrow, i, j } => PRIME - w[arrow][i * beta[q.arrow(arrow).tail] as usize + j],
        };
        m[r][c] = (m[r][c] + add) % PRIME;
    });
    shape.cols - rank_mod_p(m)
}

/// Generic hom and ext from `alpha` to `beta`: the minimum of `hom` over
/// independent random pairs, with `ext = hom - <alpha, beta>`. Every sample
/// bounds the generic value from above, so the answer can only be too large,
/// and then only with negligible probability.
pub fn generic_hom_ext(
    q: &Quiver,
    alpha: &IntegerVector,
    beta: &IntegerVector,
    trials: usize,
    seed: u64,
) -> Result<HomExt> {
    check_dimension_vector(q, alpha)?;
    check_dimension_vector(q, beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hom = usize::MAX;
    for _ in 0..trials.max(1) {
        let v = random_modp(q, alpha, &mut rng);
        let w = random_modp(q, beta, &mut rng);
        hom = hom.min(hom_modp(q, alpha, &v, beta, &w));
    }
    hom_ext_from(q, alpha, beta, hom)
}

fn hom_ext_from(q: &Quiver, alpha: &IntegerVector, beta: &IntegerVector, hom: usize) -> Result<HomExt> {
    let ext = hom as i64 - q.euler_form(alpha, beta)?;
    debug_assert!(ext >= 0);
    Ok(HomExt { hom, ext: ext as usize })
}

/// Generic dimension of `End(V)` for `V` of dimension `alpha`; equals one
/// exactly when `alpha` is a Schur root.
pub fn generic_endomorphism_dim(q: &Quiver, alpha: &IntegerVector, trials: usize, seed: u64) -> Result<usize> {
    check_dimension_vector(q, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = usize::MAX;
    for _ in 0..trials.max(1) {
        let v = random_modp(q, alpha, &mut rng);
        best = best.min(hom_modp(q, alpha, &v, alpha, &v));
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootClass {
    Real,
    Isotropic,
    Imaginary,
}

impl fmt::Display for RootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootClass::Real => "real",
            RootClass::Isotropic => "isotropic",
            RootClass::Imaginary => "imaginary",
        })
    }
}

/// Sign of `<alpha, alpha>`; values above one belong to no root.
pub fn classify_root(q: &Quiver, alpha: &IntegerVector) -> Result<RootClass> {
    match q.euler_form(alpha, alpha)? {
        1 => Ok(RootClass::Real),
        0 => Ok(RootClass::Isotropic),
        e if e < 0 => Ok(RootClass::Imaginary),
        e => Err(Error::Precondition(format!(
            "<{alpha}, {alpha}> = {e} is not a root class"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPart {
    pub dim: IntegerVector,
    pub multiplicity: usize,
    pub class: RootClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub total: IntegerVector,
    pub parts: Vec<CanonicalPart>,
}

impl CanonicalDecomposition {
    /// `sum multiplicity * dim` reproduces the decomposed vector.
    pub fn is_consistent(&self) -> bool {
        let mut sum = IntegerVector::zeros(self.total.len());
        for p in &self.parts {
            sum = &sum + &p.dim.scale(p.multiplicity as i64);
        }
        sum == self.total
    }
}

impl fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let items: Vec<String> = self
            .parts
            .iter()
            .map(|p| format!("({})^{} [{}]", p.dim, p.multiplicity, p.class))
            .collect();
        f.write_str(&items.join(" + "))
    }
}

/// Summand dimension vectors of one random representation, over an algebraic
/// closure: a summand whose endomorphism ring has residue degree `e` counts
/// as `e` copies of `dim / e`.
fn generic_summands(q: &Arc<Quiver>, alpha: &IntegerVector, seed: u64) -> Result<BTreeMap<IntegerVector, usize>> {
    let v = Representation::random(q.clone(), alpha, seed, DECOMPOSITION_BOUND)?;
    let dec = decompose(&v, derive_seed(seed, &[1]))?;
    let mut out = BTreeMap::new();
    for s in dec.summands {
        let e = s.splitting_degree.max(1);
        let d = s.rep.dim();
        if d.iter().any(|x| x % e as i64 != 0) {
            return Err(Error::Unstable(format!(
                "summand {d} has residue degree {e} not dividing it"
            )));
        }
        let piece = IntegerVector(d.iter().map(|x| x / e as i64).collect());
        *out.entry(piece).or_insert(0) += e;
    }
    Ok(out)
}

/// Canonical decomposition of `alpha`, estimated by decomposing one random
/// representation per seed. Disagreement between seeds is an error, never
/// resolved by vote. Each part must pass the generic Schur test.
pub fn canonical_decomposition(
    q: &Arc<Quiver>,
    alpha: &IntegerVector,
    seeds: &[u64],
) -> Result<CanonicalDecomposition> {
    check_dimension_vector(q, alpha)?;
    if seeds.is_empty() {
        return Err(Error::Precondition("at least one seed is required".into()));
    }
    let first = generic_summands(q, alpha, seeds[0])?;
    for &s in &seeds[1..] {
        let other = generic_summands(q, alpha, s)?;
        if other != first {
            return Err(Error::Unstable(format!(
                "seeds {} and {s} give different summands: {} vs {}",
                seeds[0],
                describe(&first),
                describe(&other)
            )));
        }
    }
    let mut parts = Vec::new();
    for (dim, multiplicity) in first {
        if generic_endomorphism_dim(q, &dim, 3, derive_seed(seeds[0], &dim.0))? != 1 {
            return Err(Error::Unstable(format!("part {dim} is not a Schur root")));
        }
        parts.push(CanonicalPart {
            class: classify_root(q, &dim)?,
            dim,
            multiplicity,
        });
    }
    Ok(CanonicalDecomposition {
        total: alpha.clone(),
        parts,
    })
}

fn describe(m: &BTreeMap<IntegerVector, usize>) -> String {
    let items: Vec<String> = m.iter().map(|(d, c)| format!("({d})^{c}")).collect();
    items.join(" + ")
}

#[derive(Clone, Debug)]
pub struct MultipleRuleReport {
    pub base: CanonicalDecomposition,
    pub expected: Vec<(IntegerVector, usize)>,
    pub observed: CanonicalDecomposition,
    pub passed: bool,
}

/// Compares the canonical decomposition of `m * alpha` with the prediction
/// from that of `alpha`: real and isotropic parts repeat `m` times as often,
/// imaginary parts are scaled by `m`.
pub fn verify_multiple_rule(
    q: &Arc<Quiver>,
    alpha: &IntegerVector,
    m: u32,
    seeds: &[u64],
) -> Result<MultipleRuleReport> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let base = canonical_decomposition(q, alpha, seeds)?;
    let mut predicted: BTreeMap<IntegerVector, usize> = BTreeMap::new();
    for p in &base.parts {
        let (dim, count) = match p.class {
            RootClass::Real | RootClass::Isotropic => (p.dim.clone(), p.multiplicity * m as usize),
            RootClass::Imaginary => (p.dim.scale(m as i64), p.multiplicity),
        };
        *predicted.entry(dim).or_insert(0) += count;
    }
    let observed = canonical_decomposition(q, &alpha.scale(m as i64), seeds)?;
    let seen: BTreeMap<IntegerVector, usize> = observed.parts.iter().map(|p| (p.dim.clone(), p.multiplicity)).collect();
    Ok(MultipleRuleReport {
        passed: seen == predicted,
        expected: predicted.into_iter().collect(),
        base,
        observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntegerVector {
        IntegerVector::from(x.to_vec())
    }

    #[test]
    fn generic_hom_ext_small_cases() {
        let a2 = Quiver::path(2);
        assert_eq!(
            generic_hom_ext(&a2, &v(&[1, 0]), &v(&[0, 1]), 3, 1).unwrap(),
            HomExt { hom: 0, ext: 1 }
        );
        assert_eq!(
            generic_hom_ext(&a2, &v(&[1, 1]), &v(&[1, 1]), 3, 1).unwrap(),
            HomExt { hom: 1, ext: 0 }
        );
        let k3 = Quiver::kronecker(3);
        assert_eq!(
            generic_hom_ext(&k3, &v(&[1, 2]), &v(&[3, 3]), 3, 1).unwrap(),
            HomExt { hom: 0, ext: 0 }
        );
    }

    #[test]
    fn root_classes() {
        assert_eq!(classify_root(&Quiver::path(2), &v(&[1, 1])).unwrap(), RootClass::Real);
        assert_eq!(
            classify_root(&Quiver::kronecker(2), &v(&[1, 1])).unwrap(),
            RootClass::Isotropic
        );
        assert_eq!(
            classify_root(&Quiver::kronecker(3), &v(&[1, 1])).unwrap(),
            RootClass::Imaginary
        );
        assert!(classify_root(&Quiver::path(2), &v(&[2, 0])).is_err());
    }

    #[test]
    fn canonical_decompositions() {
        let seeds = [1, 2, 3];
        let a2 = Arc::new(Quiver::path(2));
        let c = canonical_decomposition(&a2, &v(&[2, 2]), &seeds).unwrap();
        assert_eq!(c.parts.len(), 1);
        assert_eq!((c.parts[0].dim.0.clone(), c.parts[0].multiplicity), (vec![1, 1], 2));
        let k2 = Arc::new(Quiver::kronecker(2));
        let c = canonical_decomposition(&k2, &v(&[2, 2]), &seeds).unwrap();
        assert_eq!((c.parts[0].dim.0.clone(), c.parts[0].multiplicity), (vec![1, 1], 2));
        assert_eq!(c.parts[0].class, RootClass::Isotropic);
        let k3 = Arc::new(Quiver::kronecker(3));
        let c = canonical_decomposition(&k3, &v(&[2, 2]), &seeds).unwrap();
        assert_eq!((c.parts[0].dim.0.clone(), c.parts[0].multiplicity), (vec![2, 2], 1));
        assert!(c.is_consistent());
    }

    #[test]
    fn multiple_rule_examples() {
        let seeds = [5, 6];
        let k2 = Arc::new(Quiver::kronecker(2));
        let r = verify_multiple_rule(&k2, &v(&[1, 1]), 3, &seeds).unwrap();
        assert!(r.passed, "{}", r.observed);
        assert_eq!(r.expected, vec![(v(&[1, 1]), 3)]);
        let k3 = Arc::new(Quiver::kronecker(3));
        let r = verify_multiple_rule(&k3, &v(&[1, 1]), 2, &seeds).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected, vec![(v(&[2, 2]), 1)]);
        let a2 = Arc::new(Quiver::path(2));
        let r = verify_multiple_rule(&a2, &v(&[1, 0]), 5, &seeds).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected, vec![(v(&[1, 0]), 5)]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(generic_hom_ext(&Quiver::path(2), &v(&[1]), &v(&[1, 1]), 1, 0).is_err());
        assert!(canonical_decomposition(&Arc::new(Quiver::path(2)), &v(&[1, -1]), &[1]).is_err());
    }
}
