//! Saturation certificates: `n sigma in S(W)` with a witness, `sigma not in S(W)`
//! with a proof, in a line format meant for independent re-checking.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;

use super::membership::{quick_proof, reduce, MembershipConfig, ProofTag};
use super::symbolic::{decide_symbolic, SymbolicOutcome};
use crate::error::{Error, Result};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::{schofield_eval, Representation};

#[derive(Clone, Debug)]
pub struct SaturationCertificate {
    pub weight: IntegerVector,
    pub multiple: u32,
    /// Representation of the full quiver with `det d^V_W != 0` and weight `multiple * weight`.
    pub witness: Representation,
    pub proof: ProofTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub witness_ok: bool,
    pub proof_ok: bool,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.witness_ok && self.proof_ok
    }
}

impl SaturationCertificate {
    pub fn to_text(&self, quiver_file: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate");
        let _ = writeln!(out, "weight {}", self.weight);
        let _ = writeln!(out, "multiple {}", self.multiple);
        let _ = writeln!(out, "witness");
        out.push_str(&self.witness.to_text(quiver_file));
        let _ = writeln!(out, "proof {}", self.proof);
        let _ = writeln!(out, "end");
        out
    }

    /// Parses every certificate block in `text`.
    pub fn parse_all(text: &str, quiver: Arc<Quiver>) -> Result<Vec<Self>> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let (ln, line) = lines[i];
            if line != "certificate" {
                return Err(Error::Syntax {
                    line: ln,
                    message: format!("expected `certificate`, found `{line}`"),
                });
            }
            let field = |k: usize, key: &str| -> Result<&str> {
                let (l, text) = *lines.get(k).ok_or(Error::Syntax {
                    line: ln,
                    message: format!("truncated certificate, missing `{key}`"),
                })?;
                text.strip_prefix(key).map(str::trim).ok_or_else(|| Error::Syntax {
                    line: l,
                    message: format!("expected `{key} ...`, found `{text}`"),
                })
            };
            let weight = IntegerVector::parse(field(i + 1, "weight")?)?;
            let multiple: u32 = field(i + 2, "multiple")?.parse().map_err(|_| Error::Syntax {
                line: lines[i + 2].0,
                message: "multiple must be a positive integer".into(),
            })?;
            field(i + 3, "witness")?;
            let proof_at = (i + 4..lines.len())
                .find(|&k| lines[k].1.starts_with("proof"))
                .ok_or(Error::Syntax {
                    line: ln,
                    message: "certificate without `proof` line".into(),
                })?;
            let rep_text: String = lines[i + 4..proof_at].iter().map(|(_, l)| format!("{l}\n")).collect();
            let (witness, _) = Representation::parse(&rep_text, quiver.clone())?;
            let proof = ProofTag::parse(field(proof_at, "proof")?)?;
            if field(proof_at + 1, "end").is_err() {
                return Err(Error::Syntax {
                    line: lines[proof_at].0,
                    message: "certificate block must close with `end`".into(),
                });
            }
            out.push(Self {
                weight,
                multiple,
                witness,
                proof,
            });
            i = proof_at + 2;
        }
        Ok(out)
    }

    /// Re-checks both halves against `w` from scratch.
    pub fn verify(&self, w: &Representation, cfg: &MembershipConfig) -> Result<CertificateCheck> {
        Ok(CertificateCheck {
            witness_ok: self.multiple >= 2
                && verify_witness(w, &self.weight.scale(self.multiple as i64), &self.witness)?,
            proof_ok: verify_proof(w, &self.weight, self.proof, cfg)?,
        })
    }
}

/// `witness` has the dimension vector prescribed by `sigma` on the support
/// of `W`, vanishes off it, and `det d^V_W != 0`.
pub fn verify_witness(w: &Representation, sigma: &IntegerVector, witness: &Representation) -> Result<bool> {
    if witness.quiver().as_ref() != w.quiver().as_ref() {
        return Err(Error::QuiverMismatch);
    }
    let r = reduce(w, sigma)?;
    if witness.dim() != &r.full_alpha {
        return Ok(false);
    }
    if w.quiver().euler_form(witness.dim(), w.dim())? != 0 {
        return Ok(false);
    }
    Ok(!schofield_eval(witness, w)?.is_zero())
}

/// Recomputes the non-membership proof named by `tag`.
pub fn verify_proof(w: &Representation, sigma: &IntegerVector, tag: ProofTag, cfg: &MembershipConfig) -> Result<bool> {
    let r = reduce(w, sigma)?;
    let quick = quick_proof(&r)?;
    Ok(match tag {
        ProofTag::NegativeAlpha | ProofTag::EulerMismatch => quick == Some(tag),
        ProofTag::ZeroSymbolicDeterminant(_) => {
            quick.is_none()
                && !r.alpha.is_zero()
                && matches!(
                    decide_symbolic(&r.w, &r.alpha, cfg.symbolic_limit, cfg.grid_budget)?,
                    SymbolicOutcome::Vanishes(_)
                )
        }
        ProofTag::InfeasibleFlow => {
            w.is_thin()
                && matches!(
                    crate::thin::thin_membership(w, sigma)?.status,
                    super::MembershipStatus::NotMember
                )
        }
    })
}
