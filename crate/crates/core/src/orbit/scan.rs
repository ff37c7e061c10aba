//! Searching a box of weights for refutations of saturation.

use std::fmt;

use rayon::prelude::*;

use super::certificate::SaturationCertificate;
use super::membership::{
    derive_seed, membership, quick_proof, reduce, MembershipConfig, MembershipStatus, Mode, ProofTag,
};
use crate::error::{Error, Result};
use crate::quiver::IntegerVector;
use crate::rep::Representation;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Inclusive per-vertex range of weights.
    pub weight_box: Vec<(i64, i64)>,
    pub n_max: u32,
    /// Mode, trials, bound and master seed. In symbolic mode every weight
    /// that is not found to be a member receives a certified verdict.
    pub membership: MembershipConfig,
    /// Trials spent on each multiple `n sigma`. A missed member there can
    /// only hide a certificate, never create a false one.
    pub multiple_trials: usize,
}

impl ScanConfig {
    pub fn cube(vertices: usize, radius: i64, n_max: u32, membership: MembershipConfig) -> Self {
        Self {
            weight_box: vec![(-radius, radius); vertices],
            n_max,
            membership,
            multiple_trials: 2,
        }
    }
}

/// What the scan established about one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightStatus {
    Member,
    NotMember(ProofTag),
    ProbablyNotMember,
}

impl fmt::Display for WeightStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightStatus::Member => f.write_str("Member"),
            WeightStatus::NotMember(tag) => write!(f, "NotMember {tag}"),
            WeightStatus::ProbablyNotMember => f.write_str("ProbablyNotMember"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightOutcome {
    pub weight: IntegerVector,
    pub status: WeightStatus,
    /// Smallest multiple found in `S(W)` when the weight itself is not.
    pub multiple: Option<u32>,
}

#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub certificates: Vec<SaturationCertificate>,
    pub weights: Vec<WeightOutcome>,
}

impl ScanReport {
    pub fn members(&self) -> impl Iterator<Item = &WeightOutcome> {
        self.weights.iter().filter(|o| o.status == WeightStatus::Member)
    }
}

/// All weights of the box in lexicographic order.
pub fn box_weights(weight_box: &[(i64, i64)]) -> Vec<IntegerVector> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in weight_box {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(IntegerVector).collect()
}

/// Tests every weight of the box. A weight whose randomized test fails but
/// some multiple of which is found in `S(W)` is certified symbolically; a
/// certified non-member then yields a certificate. Results are independent
/// of thread scheduling: each weight draws from its own derived seed.
pub fn saturation_scan(w: &Representation, cfg: &ScanConfig) -> Result<ScanReport> {
    if cfg.n_max < 2 {
        return Err(Error::Precondition("n_max must be at least 2".into()));
    }
    if cfg.weight_box.len() != w.quiver().num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: w.quiver().num_vertices(),
            found: cfg.weight_box.len(),
        });
    }
    let weights = box_weights(&cfg.weight_box);
    let results = weights
        .par_iter()
        .map(|sigma| scan_weight(w, sigma, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::default();
    for (outcome, cert) in results {
        report.weights.push(outcome);
        report.certificates.extend(cert);
    }
    Ok(report)
}

fn scan_weight(
    w: &Representation,
    sigma: &IntegerVector,
    cfg: &ScanConfig,
) -> Result<(WeightOutcome, Option<SaturationCertificate>)> {
    let outcome = |status, multiple| WeightOutcome {
        weight: sigma.clone(),
        status,
        multiple,
    };
    let r = reduce(w, sigma)?;
    if let Some(tag) = quick_proof(&r)? {
        // Both conditions are invariant under positive scaling.
        return Ok((outcome(WeightStatus::NotMember(tag), None), None));
    }
    let mut base = cfg.membership.clone();
    base.mode = Mode::Randomized;
    base.seed = derive_seed(cfg.membership.seed, &with_label(sigma, 1));
    if membership(w, sigma, &base)?.is_member() {
        return Ok((outcome(WeightStatus::Member, None), None));
    }
    for n in 2..=cfg.n_max {
        let mut mcfg = base.clone();
        mcfg.trials = cfg.multiple_trials;
        mcfg.seed = derive_seed(cfg.membership.seed, &with_label(sigma, n as i64));
        let multiple = membership(w, &sigma.scale(n as i64), &mcfg)?;
        if !multiple.is_member() {
            continue;
        }
        let mut sym = cfg.membership.clone();
        sym.mode = Mode::Symbolic;
        sym.seed = base.seed;
        let verdict = membership(w, sigma, &sym)?;
        return Ok(match (verdict.status, verdict.proof) {
            (MembershipStatus::NotMember, Some(proof)) => (
                outcome(WeightStatus::NotMember(proof), Some(n)),
                Some(SaturationCertificate {
                    weight: sigma.clone(),
                    multiple: n,
                    witness: multiple.witness.expect("members carry witnesses"),
                    proof,
                }),
            ),
            (MembershipStatus::Member, _) => (outcome(WeightStatus::Member, None), None),
            _ => (outcome(WeightStatus::ProbablyNotMember, Some(n)), None),
        });
    }
    if cfg.membership.mode == Mode::Symbolic {
        let mut sym = cfg.membership.clone();
        sym.seed = base.seed;
        let verdict = membership(w, sigma, &sym)?;
        let status = match (verdict.status, verdict.proof) {
            (MembershipStatus::NotMember, Some(proof)) => WeightStatus::NotMember(proof),
            (MembershipStatus::Member, _) => WeightStatus::Member,
            _ => WeightStatus::ProbablyNotMember,
        };
        return Ok((outcome(status, None), None));
    }
    Ok((outcome(WeightStatus::ProbablyNotMember, None), None))
}

fn with_label(sigma: &IntegerVector, n: i64) -> Vec<i64> {
    let mut labels = sigma.0.clone();
    labels.push(n);
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::quiver::Quiver;
    use std::sync::Arc;

    fn skew() -> Representation {
        let q = Arc::new(Quiver::kronecker(3));
        let maps = vec![
            RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]),
            RationalMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]]),
            RationalMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 0, 1], &[0, -1, 0]]),
        ];
        Representation::new(q, IntegerVector::from(vec![3, 3]), maps).unwrap()
    }

    #[test]
    fn box_order_is_lexicographic() {
        let ws = box_weights(&[(-1, 1), (0, 1)]);
        let flat: Vec<Vec<i64>> = ws.into_iter().map(|v| v.0).collect();
        assert_eq!(
            flat,
            vec![vec![-1, 0], vec![-1, 1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(box_weights(&[]).len(), 1);
    }

    #[test]
    fn skew_scan_finds_certificate() {
        let w = skew();
        let cfg = ScanConfig::cube(2, 2, 4, MembershipConfig::default());
        let report = saturation_scan(&w, &cfg).unwrap();
        assert_eq!(report.certificates.len(), 1);
        let cert = &report.certificates[0];
        assert_eq!(cert.weight.0, vec![1, -1]);
        assert_eq!(cert.multiple, 2);
        assert!(cert.verify(&w, &MembershipConfig::symbolic()).unwrap().passed());
        let text = cert.to_text("theta3.txt");
        let back = SaturationCertificate::parse_all(&text, w.quiver().clone()).unwrap();
        assert_eq!(back.len(), 1);
        assert!(back[0].verify(&w, &MembershipConfig::symbolic()).unwrap().passed());
    }

    #[test]
    fn zero_representation_has_no_certificates() {
        let q = Arc::new(Quiver::kronecker(3));
        let w = Representation::zero(q, IntegerVector::zeros(2)).unwrap();
        let report = saturation_scan(&w, &ScanConfig::cube(2, 2, 3, MembershipConfig::default())).unwrap();
        assert!(report.certificates.is_empty());
        assert_eq!(report.members().count(), 25);
    }

    #[test]
    fn tampered_certificate_fails() {
        let w = skew();
        let report = saturation_scan(&w, &ScanConfig::cube(2, 1, 2, MembershipConfig::default())).unwrap();
        let mut cert = report.certificates[0].clone();
        cert.weight = IntegerVector::from(vec![2, -2]);
        let check = cert.verify(&w, &MembershipConfig::symbolic()).unwrap();
        assert!(!check.passed());
    }
}
