//! Orbit semigroups: membership, saturation scans and certificates, generic
//! hom/ext and canonical decompositions.

mod certificate;
mod generic;
mod membership;
mod scan;
mod symbolic;

pub use certificate::{verify_proof, verify_witness, CertificateCheck, SaturationCertificate};
pub use generic::{
    canonical_decomposition, classify_root, generic_endomorphism_dim, generic_hom_ext, verify_multiple_rule,
    CanonicalDecomposition, CanonicalPart, MultipleRuleReport, RootClass,
};
pub use membership::{
    derive_seed, error_bound, membership, MembershipConfig, MembershipStatus, MembershipVerdict, Mode, ProofTag,
};
pub use scan::{box_weights, saturation_scan, ScanConfig, ScanReport, WeightOutcome, WeightStatus};
pub use symbolic::{decide_symbolic, SymbolicMethod, SymbolicOutcome};
