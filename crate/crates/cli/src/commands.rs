use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use orbitsat_core::checks::{self, CheckInputs};
use orbitsat_core::fixtures;
use orbitsat_core::orbit::{
    canonical_decomposition, derive_seed, generic_hom_ext, membership, saturation_scan, verify_multiple_rule,
    MembershipConfig, MembershipStatus, Mode, SaturationCertificate, ScanConfig, WeightStatus,
};
use orbitsat_core::quiver::{classify_quiver, IntegerVector, Quiver};
use orbitsat_core::rep::{functional_determinant, hom_ext, schofield_eval, Representation};
use orbitsat_core::thin::{fiber_count, thin_membership, thin_saturation_check};
use orbitsat_core::transforms::{reflect_dim, reflect_rep, shrink, validate_exceptional_sequence, Direction};
use orbitsat_core::Error;

use crate::{Command, Inputs, OrbitCommand, Randomness, ThinCommand};

pub struct CommandResult {
    pub code: u8,
    pub report: String,
    pub error: Option<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::Syntax { .. }
                | Error::DuplicateName { .. }
                | Error::DanglingEndpoint { .. }
                | Error::OrientedCycle(_)
                | Error::UnknownVertex(_)
                | Error::UnknownArrow(_)
                | Error::DimensionMismatch { .. }
                | Error::QuiverMismatch => 2,
                _ => 3,
            },
        }
    }
}

type Outcome = std::result::Result<(u8, String), CliError>;

pub fn run(command: Command) -> CommandResult {
    match dispatch(command) {
        Ok((code, report)) => CommandResult {
            code,
            report,
            error: None,
        },
        Err(e) => CommandResult {
            code: e.code(),
            report: String::new(),
            error: Some(e.to_string()),
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_vector(text: &str) -> Result<IntegerVector, CliError> {
    Ok(IntegerVector::parse(text)?)
}

/// The quiver from `--fixture`, `--quiver`, or the header of the first `--rep`,
/// together with the file name used in representation headers.
fn load_quiver(inputs: &Inputs) -> Result<(Arc<Quiver>, String), CliError> {
    if let Some(name) = &inputs.fixture {
        return Ok((fixtures::fixture(name)?.quiver, format!("{name}.quiver")));
    }
    let path = match (&inputs.quiver, inputs.rep.first()) {
        (Some(p), _) => p.clone(),
        (None, Some(rep)) => {
            let text = read(rep)?;
            let header = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'))
                .unwrap_or("");
            let file = header
                .split_whitespace()
                .nth(1)
                .ok_or_else(|| CliError::Usage(format!("{}: no quiver named in header", rep.display())))?;
            rep.parent().unwrap_or(Path::new(".")).join(file)
        }
        (None, None) => return Err(CliError::Usage("a quiver is required: --quiver or --fixture".into())),
    };
    let q = Quiver::parse(&read(&path)?)?;
    let label = path
        .file_name()
        .map_or("quiver.txt".into(), |n| n.to_string_lossy().into_owned());
    Ok((Arc::new(q), label))
}

fn load_reps(inputs: &Inputs, q: &Arc<Quiver>) -> Result<Vec<Representation>, CliError> {
    inputs
        .rep
        .iter()
        .map(|p| Ok(Representation::parse(&read(p)?, q.clone())?.0))
        .collect()
}

fn one_rep(inputs: &Inputs, q: &Arc<Quiver>) -> Result<Representation, CliError> {
    let mut reps = load_reps(inputs, q)?;
    if reps.len() != 1 {
        return Err(CliError::Usage(format!("expected one --rep, got {}", reps.len())));
    }
    Ok(reps.remove(0))
}

/// Header name for a representation of a transformed quiver.
fn derived_label(label: &str, suffix: &str) -> String {
    let stem = label.strip_suffix(".quiver").unwrap_or(label);
    format!("{stem}-{suffix}.quiver")
}

fn vertex(q: &Quiver, name: &str) -> Result<usize, CliError> {
    Ok(q.vertex_index(name)?)
}

/// `r` for a cube of radius `r`, or `lo:hi,lo:hi,...` per vertex.
fn parse_box(text: &str, n: usize) -> Result<Vec<(i64, i64)>, CliError> {
    if let Ok(r) = text.trim().parse::<i64>() {
        if r < 0 {
            return Err(CliError::Usage("box radius must be nonnegative".into()));
        }
        return Ok(vec![(-r, r); n]);
    }
    let ranges = text
        .split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("box entry `{part}` is not lo:hi")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::Usage(format!("box bound `{s}` is not an integer")))
            };
            Ok((parse(lo)?, parse(hi)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if ranges.len() != n {
        return Err(CliError::Usage(format!(
            "box has {} ranges for {n} vertices",
            ranges.len()
        )));
    }
    Ok(ranges)
}

fn membership_config(r: &Randomness) -> Result<MembershipConfig, CliError> {
    let mode: Mode = r.mode.parse::<Mode>()?;
    Ok(MembershipConfig {
        mode,
        trials: r.trials,
        bound: r.bound,
        seed: r.seed,
        ..MembershipConfig::default()
    })
}

fn dispatch(command: Command) -> Outcome {
    let mut out = String::new();
    match command {
        Command::Classify { inputs } => {
            let (q, _) = load_quiver(&inputs)?;
            let _ = writeln!(out, "{}", classify_quiver(&q)?);
        }
        Command::Homext {
            inputs,
            alpha,
            beta,
            seed,
            trials,
        } => {
            let (q, _) = load_quiver(&inputs)?;
            let (he, a, b) = match (alpha, beta) {
                (Some(a), Some(b)) => {
                    let (a, b) = (parse_vector(&a)?, parse_vector(&b)?);
                    (generic_hom_ext(&q, &a, &b, trials, seed)?, a, b)
                }
                (None, None) => {
                    let reps = load_reps(&inputs, &q)?;
                    if reps.len() != 2 {
                        return Err(CliError::Usage("give two --rep files or --alpha and --beta".into()));
                    }
                    (
                        hom_ext(&reps[0], &reps[1])?,
                        reps[0].dim().clone(),
                        reps[1].dim().clone(),
                    )
                }
                _ => return Err(CliError::Usage("--alpha and --beta go together".into())),
            };
            let _ = writeln!(out, "hom {}\next {}\neuler {}", he.hom, he.ext, q.euler_form(&a, &b)?);
        }
        Command::Semiinv { inputs } => {
            let (q, _) = load_quiver(&inputs)?;
            let reps = load_reps(&inputs, &q)?;
            match reps.as_slice() {
                [w] => {
                    let _ = writeln!(out, "functional determinant {}", functional_determinant(w)?);
                }
                [v, w] => {
                    let _ = writeln!(out, "c(V,W) {}", schofield_eval(v, w)?);
                }
                _ => return Err(CliError::Usage("give one or two --rep files".into())),
            }
        }
        Command::Orbit { command } => return orbit(command),
        Command::Reflect {
            inputs,
            vertex: name,
            alpha,
            direction,
        } => {
            let (q, label) = load_quiver(&inputs)?;
            let x = vertex(&q, &name)?;
            let direction = direction.parse::<Direction>()?;
            if let Some(alpha) = alpha {
                let (rq, ra) = reflect_dim(&q, x, &parse_vector(&alpha)?)?;
                let _ = write!(out, "{}", rq.to_text());
                let _ = writeln!(out, "alpha {ra}");
            } else {
                let r = reflect_rep(&one_rep(&inputs, &q)?, x, direction)?;
                let _ = write!(out, "{}", r.quiver().to_text());
                let _ = write!(out, "{}", r.to_text(&derived_label(&label, "reflected")));
            }
        }
        Command::Shrink {
            inputs,
            vertex: name,
            alpha,
            weight,
        } => {
            let (q, label) = load_quiver(&inputs)?;
            let v0 = vertex(&q, &name)?;
            let rep = if inputs.rep.is_empty() {
                None
            } else {
                Some(one_rep(&inputs, &q)?)
            };
            let beta = match (&alpha, &rep) {
                (Some(a), _) => parse_vector(a)?,
                (None, Some(r)) => r.dim().clone(),
                (None, None) => return Err(CliError::Usage("give --alpha or --rep".into())),
            };
            let sigma = weight.as_deref().map(parse_vector).transpose()?;
            let s = shrink(&q, v0, &beta, rep.as_ref(), sigma.as_ref())?;
            let _ = write!(out, "{}", s.quiver.to_text());
            let _ = writeln!(out, "beta {}", s.beta);
            if let Some(sigma) = &s.sigma {
                let _ = writeln!(out, "weight {sigma}");
            }
            if let Some(r) = &s.rep {
                let _ = write!(out, "{}", r.to_text(&derived_label(&label, "shrunk")));
            }
        }
        Command::Exceptional {
            inputs,
            alpha,
            seed,
            trials,
        } => return exceptional(&inputs, &alpha, seed, trials),
        Command::Candecomp {
            inputs,
            alpha,
            seed,
            trials,
            nmax,
        } => {
            let (q, _) = load_quiver(&inputs)?;
            let alpha = parse_vector(&alpha)?;
            let seeds: Vec<u64> = (0..trials.max(1) as i64).map(|k| derive_seed(seed, &[k])).collect();
            let c = canonical_decomposition(&q, &alpha, &seeds)?;
            let _ = writeln!(out, "{c}");
            let mut code = 0;
            for m in 2..=nmax.unwrap_or(1) {
                let r = verify_multiple_rule(&q, &alpha, m, &seeds)?;
                let expected: Vec<String> = r.expected.iter().map(|(d, c)| format!("({d})^{c}")).collect();
                let _ = writeln!(
                    out,
                    "m={m} {}: expected {}, observed {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    expected.join(" + "),
                    r.observed
                );
                if !r.passed {
                    code = 1;
                }
            }
            return Ok((code, out));
        }
        Command::Thin { command } => return thin(command),
        Command::VerifyPaper { only, rep, seed } => {
            let mut inputs = CheckInputs {
                seed,
                ..CheckInputs::default()
            };
            if let Some(path) = rep {
                inputs.skew = Representation::parse(&read(&path)?, fixtures::kron3())?.0;
            }
            let outcomes = checks::run_all(&inputs, &only)?;
            let mut failed = 0;
            for o in &outcomes {
                if !o.passed {
                    failed += 1;
                }
                let _ = writeln!(
                    out,
                    "{} {} ({:.1}s): {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.elapsed.as_secs_f64(),
                    o.detail
                );
            }
            let _ = writeln!(out, "{} of {} items passed", outcomes.len() - failed, outcomes.len());
            return Ok((u8::from(failed > 0), out));
        }
    }
    Ok((0, out))
}

fn orbit(command: OrbitCommand) -> Outcome {
    let mut out = String::new();
    match command {
        OrbitCommand::Member {
            inputs,
            weight,
            randomness,
            escalate,
        } => {
            let (q, label) = load_quiver(&inputs)?;
            let w = one_rep(&inputs, &q)?;
            let sigma = parse_vector(&weight)?;
            let cfg = membership_config(&randomness)?;
            let mut verdict = membership(&w, &sigma, &cfg)?;
            if escalate && verdict.status == MembershipStatus::ProbablyNotMember {
                let exact = MembershipConfig {
                    mode: Mode::Symbolic,
                    ..cfg
                };
                verdict = membership(&w, &sigma, &exact)?;
            }
            let _ = writeln!(out, "{}", verdict.summary());
            let _ = writeln!(out, "alpha {}", verdict.alpha);
            if verdict.matrix_size > 0 {
                let _ = writeln!(out, "matrix {0}x{0}", verdict.matrix_size);
            }
            if let Some(notice) = &verdict.notice {
                let _ = writeln!(out, "notice {notice}");
            }
            if let Some(witness) = &verdict.witness {
                let _ = writeln!(out, "witness");
                let _ = write!(out, "{}", witness.to_text(&label));
            }
        }
        OrbitCommand::Scan {
            inputs,
            weight_box,
            nmax,
            randomness,
            cert,
        } => {
            let (q, label) = load_quiver(&inputs)?;
            let w = one_rep(&inputs, &q)?;
            let cfg = ScanConfig {
                weight_box: parse_box(&weight_box, q.num_vertices())?,
                n_max: nmax,
                membership: membership_config(&randomness)?,
                multiple_trials: 2,
            };
            let report = saturation_scan(&w, &cfg)?;
            let count = |f: fn(&WeightStatus) -> bool| report.weights.iter().filter(|o| f(&o.status)).count();
            let _ = writeln!(
                out,
                "scanned {} weights: {} members, {} certified non-members, {} probable non-members",
                report.weights.len(),
                count(|s| *s == WeightStatus::Member),
                count(|s| matches!(s, WeightStatus::NotMember(_))),
                count(|s| *s == WeightStatus::ProbablyNotMember),
            );
            let _ = writeln!(out, "certificates {}", report.certificates.len());
            let blocks: String = report.certificates.iter().map(|c| c.to_text(&label)).collect();
            out.push_str(&blocks);
            if let Some(path) = cert {
                fs::write(&path, &blocks).map_err(|source| CliError::Io { path, source })?;
            }
        }
        OrbitCommand::VerifyCertificate { inputs, cert } => {
            let (q, _) = load_quiver(&inputs)?;
            let w = one_rep(&inputs, &q)?;
            let certs = SaturationCertificate::parse_all(&read(&cert)?, q.clone())?;
            if certs.is_empty() {
                let _ = writeln!(out, "no certificates found");
                return Ok((1, out));
            }
            let mut failed = 0;
            for (k, c) in certs.iter().enumerate() {
                let check = c.verify(&w, &MembershipConfig::symbolic())?;
                if !check.passed() {
                    failed += 1;
                }
                let _ = writeln!(
                    out,
                    "certificate {} weight {} multiple {}: witness {}, proof {} {}",
                    k + 1,
                    c.weight,
                    c.multiple,
                    if check.witness_ok { "ok" } else { "FAIL" },
                    c.proof,
                    if check.proof_ok { "ok" } else { "FAIL" }
                );
            }
            return Ok((u8::from(failed > 0), out));
        }
    }
    Ok((0, out))
}

fn exceptional(inputs: &Inputs, alpha: &[String], seed: u64, trials: usize) -> Outcome {
    let mut out = String::new();
    let (q, _) = load_quiver(inputs)?;
    let fixture = inputs.fixture.as_deref().map(fixtures::fixture).transpose()?;
    let roots: Vec<IntegerVector> = if alpha.is_empty() {
        fixture.as_ref().map(|f| f.sequence.clone()).unwrap_or_default()
    } else {
        alpha.iter().map(|a| parse_vector(a)).collect::<Result<_, _>>()?
    };
    if roots.is_empty() {
        let _ = writeln!(out, "empty sequence; Q(eps) is empty");
        return Ok((0, out));
    }
    let mut stages = vec![(q, roots)];
    if alpha.is_empty() {
        if let Some(f) = fixture.as_ref().filter(|f| !f.second_stage.is_empty()) {
            stages.push((Arc::new(Quiver::new(vec![], vec![])?), f.second_stage.clone()));
        }
    }
    let mut previous: Option<Arc<Quiver>> = None;
    for (k, (q, roots)) in stages.into_iter().enumerate() {
        let q = previous.take().unwrap_or(q);
        if k > 0 {
            let _ = writeln!(out, "stage {}", k + 1);
        }
        let seq = validate_exceptional_sequence(&q, &roots, trials, seed)?;
        for (i, c) in seq.root_checks.iter().enumerate() {
            let _ = writeln!(
                out,
                "eps{} {}: <e,e>=1 {}, generic hom/ext ({}, {})",
                i + 1,
                roots[i],
                c.euler_one,
                c.generic.hom,
                c.generic.ext
            );
        }
        for p in &seq.pair_checks {
            let _ = writeln!(
                out,
                "pair ({}, {}): hom/ext ({}, {}), <eps{}, eps{}> = {}",
                p.i + 1,
                p.j + 1,
                p.forward.hom,
                p.forward.ext,
                p.j + 1,
                p.i + 1,
                p.backward_euler
            );
        }
        match &seq.derived {
            Some(d) => {
                let _ = writeln!(out, "valid");
                let _ = write!(out, "{}", d.to_text());
                previous = Some(Arc::new(d.clone()));
            }
            None => {
                let _ = writeln!(out, "invalid: {}", seq.failures().join(", "));
                return Ok((1, out));
            }
        }
    }
    if let Some(last) = previous {
        if last.is_isomorphic_to(&Quiver::kronecker(3)) {
            let _ = writeln!(out, "terminal quiver: three-arrow Kronecker");
        }
    }
    Ok((0, out))
}

fn thin(command: ThinCommand) -> Outcome {
    let mut out = String::new();
    match command {
        ThinCommand::Member { inputs, weight } => {
            let (q, _) = load_quiver(&inputs)?;
            let w = one_rep(&inputs, &q)?;
            let v = thin_membership(&w, &parse_vector(&weight)?)?;
            match (&v.flow, &v.monomial, &v.value) {
                (Some(flow), Some(mono), Some(value)) => {
                    let _ = writeln!(out, "Member\nflow {flow}\nmonomial {mono}\nvalue {value}");
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "NotMember (certified: {})",
                        v.proof.map_or("none".into(), |p| p.to_string())
                    );
                }
            }
        }
        ThinCommand::Count { inputs, weight } => {
            let (q, _) = load_quiver(&inputs)?;
            let _ = writeln!(out, "{}", fiber_count(&q, &parse_vector(&weight)?)?);
        }
        ThinCommand::Saturation { inputs, weight_box } => {
            let (q, _) = load_quiver(&inputs)?;
            let w = one_rep(&inputs, &q)?;
            let r = thin_saturation_check(&w, &parse_box(&weight_box, q.num_vertices())?)?;
            let _ = writeln!(out, "checked {} weights, {} violations", r.checked, r.violations.len());
            for (sigma, n) in &r.violations {
                let _ = writeln!(out, "violation weight {sigma} multiple {n}");
            }
            return Ok((u8::from(!r.violations.is_empty()), out));
        }
    }
    Ok((0, out))
}
