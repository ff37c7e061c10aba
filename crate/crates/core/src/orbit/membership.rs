//! Deciding `sigma in S(W)`: is there `V` of dimension `alpha` with
//! `det d^V_W != 0`, where `sigma = <alpha, .>` on the support of `W`?

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::symbolic::{decide_symbolic, SymbolicMethod, SymbolicOutcome};
use crate::error::{Error, Result};
use crate::linalg::integer::{det_mod_p, inv_mod, reduce_bigint, reduce_i64, PRIME};
use crate::linalg::{rat, RationalMatrix, DEFAULT_SYMBOLIC_LIMIT};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::{for_each_interaction_entry, schofield_eval, EntrySource, InteractionShape, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Randomized,
    Symbolic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randomized" => Ok(Mode::Randomized),
            "symbolic" => Ok(Mode::Symbolic),
            _ => Err(Error::Precondition(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipConfig {
    pub mode: Mode,
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
    /// Largest interaction matrix handled by a polynomial determinant.
    pub symbolic_limit: usize,
    /// Largest evaluation grid tried beyond the symbolic limit.
    pub grid_budget: u64,
    /// Degrade to the randomized verdict instead of failing when the
    /// symbolic route is out of budget.
    pub allow_fallback: bool,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Randomized,
            trials: 8,
            bound: 1_000_000,
            seed: 0,
            symbolic_limit: DEFAULT_SYMBOLIC_LIMIT,
            grid_budget: 1 << 20,
            allow_fallback: false,
        }
    }
}

impl MembershipConfig {
    pub fn symbolic() -> Self {
        Self {
            mode: Mode::Symbolic,
            ..Self::default()
        }
    }
}

/// Why `sigma` is certainly not in `S(W)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofTag {
    /// `alpha` has a negative entry, so no representation has that dimension.
    NegativeAlpha,
    /// `<alpha, dim W> != 0`: scalars act on the weight space by a nontrivial power.
    EulerMismatch,
    /// `det d^V_W` vanishes identically in the entries of `V`.
    ZeroSymbolicDeterminant(SymbolicMethod),
    /// No admissible nonnegative flow (thin representations).
    InfeasibleFlow,
}

impl ProofTag {
    pub fn parse(text: &str) -> Result<Self> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields.as_slice() {
            ["negative-alpha"] => Ok(ProofTag::NegativeAlpha),
            ["euler-mismatch"] => Ok(ProofTag::EulerMismatch),
            ["infeasible-flow"] => Ok(ProofTag::InfeasibleFlow),
            ["zero-symbolic-determinant", "bareiss"] => Ok(ProofTag::ZeroSymbolicDeterminant(SymbolicMethod::Bareiss)),
            ["zero-symbolic-determinant", "grid"] => Ok(ProofTag::ZeroSymbolicDeterminant(SymbolicMethod::Grid)),
            ["zero-symbolic-determinant", "dense-orbit"] => {
                Ok(ProofTag::ZeroSymbolicDeterminant(SymbolicMethod::DenseOrbit))
            }
            _ => Err(Error::Syntax {
                line: 0,
                message: format!("unknown proof tag `{text}`"),
            }),
        }
    }
}

impl fmt::Display for ProofTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofTag::NegativeAlpha => f.write_str("negative-alpha"),
            ProofTag::EulerMismatch => f.write_str("euler-mismatch"),
            ProofTag::ZeroSymbolicDeterminant(m) => write!(f, "zero-symbolic-determinant {m}"),
            ProofTag::InfeasibleFlow => f.write_str("infeasible-flow"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MembershipStatus {
    Member,
    NotMember,
    ProbablyNotMember,
}

impl fmt::Display for MembershipStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MembershipStatus::Member => "Member",
            MembershipStatus::NotMember => "NotMember",
            MembershipStatus::ProbablyNotMember => "ProbablyNotMember",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    /// For `Member`: a representation of the full quiver, zero off the support of `W`.
    pub witness: Option<Representation>,
    pub proof: Option<ProofTag>,
    /// `alpha` on the support of `W`, extended by zero.
    pub alpha: IntegerVector,
    /// Side length of the interaction matrix (0 when not square).
    pub matrix_size: usize,
    pub trials: usize,
    pub bound: i64,
    /// Upper bound on the chance that a `ProbablyNotMember` verdict is wrong.
    pub error_bound: Option<f64>,
    /// Set when a symbolic request fell back to the randomized verdict.
    pub notice: Option<String>,
}

impl MembershipVerdict {
    fn new(status: MembershipStatus, alpha: IntegerVector) -> Self {
        Self {
            status,
            witness: None,
            proof: None,
            alpha,
            matrix_size: 0,
            trials: 0,
            bound: 0,
            error_bound: None,
            notice: None,
        }
    }

    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }

    /// Certified (non-probabilistic) non-membership.
    pub fn is_certified_non_member(&self) -> bool {
        self.status == MembershipStatus::NotMember
    }

    pub fn summary(&self) -> String {
        match (self.status, self.proof) {
            (MembershipStatus::NotMember, Some(ProofTag::ZeroSymbolicDeterminant(_))) => {
                "NotMember (certified: zero polynomial)".to_string()
            }
            (MembershipStatus::NotMember, Some(tag)) => format!("NotMember (certified: {tag})"),
            (MembershipStatus::ProbablyNotMember, _) => format!(
                "ProbablyNotMember (trials {}, bound {}, error <= {:.3e})",
                self.trials,
                self.bound,
                self.error_bound.unwrap_or(1.0)
            ),
            (status, _) => status.to_string(),
        }
    }
}

/// The data every membership question reduces to: `W` restricted to its
/// support and the dimension vector `alpha` there.
pub(crate) struct Reduced {
    pub w: Representation,
    pub map: Vec<usize>,
    pub alpha: IntegerVector,
    pub full_alpha: IntegerVector,
}

pub(crate) fn reduce(w: &Representation, sigma: &IntegerVector) -> Result<Reduced> {
    let q = w.quiver();
    if sigma.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: sigma.len(),
        });
    }
    let (sub, map) = q.support_restrict(w.dim())?;
    let sub = Arc::new(sub);
    let alpha = sub.alpha_of_weight(&sigma.restrict(&map))?;
    let full_alpha = alpha.extend(&map, q.num_vertices());
    let wr = w.restrict(sub, &map)?;
    Ok(Reduced {
        w: wr,
        map,
        alpha,
        full_alpha,
    })
}

/// Structural exclusion, if any.
pub(crate) fn quick_proof(r: &Reduced) -> Result<Option<ProofTag>> {
    if !r.alpha.is_nonnegative() {
        return Ok(Some(ProofTag::NegativeAlpha));
    }
    if r.w.quiver().euler_form(&r.alpha, r.w.dim())? != 0 {
        return Ok(Some(ProofTag::EulerMismatch));
    }
    Ok(None)
}

pub fn membership(w: &Representation, sigma: &IntegerVector, cfg: &MembershipConfig) -> Result<MembershipVerdict> {
    let r = reduce(w, sigma)?;
    if let Some(tag) = quick_proof(&r)? {
        let mut v = MembershipVerdict::new(MembershipStatus::NotMember, r.full_alpha);
        v.proof = Some(tag);
        return Ok(v);
    }
    let size = InteractionShape::new(r.w.quiver(), &r.alpha, r.w.dim()).rows;
    if r.alpha.is_zero() {
        // Constant semi-invariants: the empty determinant is 1.
        let mut v = MembershipVerdict::new(MembershipStatus::Member, r.full_alpha.clone());
        v.witness = Some(Representation::zero(w.quiver().clone(), r.full_alpha)?);
        return Ok(v);
    }
    let mut verdict = randomized(&r, w.quiver(), size, cfg)?;
    if verdict.is_member() || cfg.mode == Mode::Randomized {
        return Ok(verdict);
    }
    match decide_symbolic(&r.w, &r.alpha, cfg.symbolic_limit, cfg.grid_budget) {
        Ok(SymbolicOutcome::Vanishes(method)) => {
            let mut v = MembershipVerdict::new(MembershipStatus::NotMember, r.full_alpha);
            v.proof = Some(ProofTag::ZeroSymbolicDeterminant(method));
            v.matrix_size = size;
            Ok(v)
        }
        Ok(SymbolicOutcome::Witness(sub)) => {
            let mut v = MembershipVerdict::new(MembershipStatus::Member, r.full_alpha);
            v.witness = Some(sub.extend_by_zero(w.quiver().clone(), &r.map)?);
            v.matrix_size = size;
            Ok(v)
        }
        Err(Error::SymbolicLimitExceeded(msg)) if cfg.allow_fallback => {
            verdict.notice = Some(format!("symbolic route skipped: {msg}"));
            Ok(verdict)
        }
        Err(e) => Err(e),
    }
}

/// Derives an independent stream seed from a master seed and labels.
pub fn derive_seed(master: u64, labels: &[i64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    labels.iter().fold(mix(master), |acc, &l| mix(acc ^ (l as u64)))
}

/// Residues of the entries of `W` modulo the working prime; `None` if some
/// denominator vanishes there.
fn residues(w: &Representation) -> Option<Vec<Vec<u64>>> {
    w.maps()
        .iter()
        .map(|m| {
            m.entries()
                .iter()
                .map(|q| {
                    let d = reduce_bigint(q.denom());
                    (d != 0).then(|| crate::linalg::integer::mul_mod(reduce_bigint(q.numer()), inv_mod(d)))
                })
                .collect()
        })
        .collect()
}

/// `det d^V_W mod p` for integer `V`.
pub(crate) fn det_mod_prime(v: &Representation, w_res: &[Vec<u64>], w: &Representation) -> u64 {
    let q = v.quiver();
    let shape = InteractionShape::new(q, v.dim(), w.dim());
    let n = shape.rows;
    let mut m = vec![vec![0u64; n]; n];
    for_each_interaction_entry(q, v.dim(), w.dim(), |r, c, src| {
        let add = match src {
            EntrySource::V { arrow, k, l } => reduce_i64(v.map(arrow).get(k, l).to_integer().try_into().unwrap_or(0)),
            EntrySource::W { arrow, i, j } => {
                let cols = w.dim_at(q.arrow(arrow).tail);
                (PRIME - w_res[arrow][i * cols + j]) % PRIME
            }
        };
        m[r][c] = (m[r][c] + add) % PRIME;
    });
    det_mod_p(m)
}

fn randomized(r: &Reduced, full: &Arc<Quiver>, size: usize, cfg: &MembershipConfig) -> Result<MembershipVerdict> {
    let res = residues(&r.w);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.trials {
        let v = random_integer_rep(r.w.quiver().clone(), &r.alpha, &mut rng, cfg.bound);
        let nonzero = match &res {
            Some(res) => det_mod_prime(&v, res, &r.w) != 0,
            None => !schofield_eval(&v, &r.w)?.is_zero(),
        };
        // A nonzero residue forces a nonzero rational determinant; the exact
        // check below makes the witness self-verifying regardless.
        if nonzero && !schofield_eval(&v, &r.w)?.is_zero() {
            let mut verdict = MembershipVerdict::new(MembershipStatus::Member, r.full_alpha.clone());
            verdict.witness = Some(v.extend_by_zero(full.clone(), &r.map)?);
            verdict.matrix_size = size;
            verdict.trials = cfg.trials;
            verdict.bound = cfg.bound;
            return Ok(verdict);
        }
    }
    let mut verdict = MembershipVerdict::new(MembershipStatus::ProbablyNotMember, r.full_alpha.clone());
    verdict.matrix_size = size;
    verdict.trials = cfg.trials;
    verdict.bound = cfg.bound;
    verdict.error_bound = Some(error_bound(size, cfg.bound, cfg.trials));
    Ok(verdict)
}

/// Schwartz-Zippel bound per trial, plus the chance that a nonzero
/// determinant vanishes modulo the prime.
pub fn error_bound(size: usize, bound: i64, trials: usize) -> f64 {
    let per = (size as f64 / (2.0 * bound as f64 + 1.0) + size as f64 / PRIME as f64).min(1.0);
    per.powi(trials as i32)
}

pub(crate) fn random_integer_rep(
    q: Arc<Quiver>,
    alpha: &IntegerVector,
    rng: &mut impl Rng,
    bound: i64,
) -> Representation {
    let maps = q
        .arrows()
        .iter()
        .map(|a| {
            RationalMatrix::from_fn(alpha[a.head] as usize, alpha[a.tail] as usize, |_, _| {
                rat(rng.gen_range(-bound..=bound))
            })
        })
        .collect();
    Representation::new(q, alpha.clone(), maps).expect("alpha is a dimension vector")
}
