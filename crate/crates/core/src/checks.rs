//! Reference checks: the worked examples and structural properties that the
//! library is expected to reproduce, each with pinned parameters and a
//! pass/fail outcome. Used by the command line tool and the test suite.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::orbit::{
    derive_seed, membership, saturation_scan, verify_multiple_rule, MembershipConfig, MembershipStatus, Mode, ProofTag,
    ScanConfig, SymbolicMethod, WeightStatus,
};
use crate::quiver::{Arrow, IntegerVector, Quiver};
use crate::rep::{decompose, functional_determinant, has_simple_summand, hom_ext, Representation};
use crate::thin::{boundary, fiber_count, thin_membership, thin_saturation_check, FlowVector};
use crate::transforms::{
    reflect_dim, reflect_rep, round_trip_isomorphism, shrink, validate_exceptional_sequence, Direction,
};

/// Check names in execution order.
pub const ITEMS: [&str; 9] = [
    "kron3",
    "zwara",
    "saturation",
    "euler",
    "reflection",
    "multiple",
    "exceptional",
    "thin",
    "shrink",
];

pub const SATURATION_REPS: usize = 20;
pub const SATURATION_MAX_DIM: i64 = 4;
pub const SATURATION_RADIUS: i64 = 3;
pub const SATURATION_N_MAX: u32 = 3;
pub const EULER_PAIRS: usize = 500;
pub const REFLECTION_PAIRS: usize = 100;
pub const ROUND_TRIPS: usize = 50;
pub const MULTIPLE_SEEDS: usize = 5;
pub const THIN_QUIVERS: usize = 30;
pub const THIN_REPS: usize = 50;
pub const SHRINK_INSTANCES: usize = 20;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

/// Inputs that a caller may swap out, e.g. to run a negative control.
#[derive(Clone, Debug)]
pub struct CheckInputs {
    pub skew: Representation,
    pub zwara: Representation,
    pub seed: u64,
}

impl Default for CheckInputs {
    fn default() -> Self {
        Self {
            skew: fixtures::skew(),
            zwara: fixtures::zwara(),
            seed: 2024,
        }
    }
}

pub fn run_all(inputs: &CheckInputs, only: &[String]) -> Result<Vec<CheckOutcome>> {
    for name in only {
        if !ITEMS.contains(&name.as_str()) {
            return Err(Error::Precondition(format!(
                "unknown check `{name}`; expected one of {}",
                ITEMS.join(", ")
            )));
        }
    }
    ITEMS
        .iter()
        .filter(|n| only.is_empty() || only.iter().any(|o| o == *n))
        .map(|n| run_check(n, inputs))
        .collect()
}

pub fn run_check(name: &str, inputs: &CheckInputs) -> Result<CheckOutcome> {
    let start = Instant::now();
    let (name, (passed, detail)) = match name {
        "kron3" => ("kron3", check_kron3(&inputs.skew, inputs.seed)?),
        "zwara" => ("zwara", check_zwara(&inputs.zwara, inputs.seed)?),
        "saturation" => ("saturation", check_saturation(inputs.seed)?),
        "euler" => ("euler", check_euler(inputs.seed)?),
        "reflection" => ("reflection", check_reflection(inputs.seed)?),
        "multiple" => ("multiple", check_multiple(inputs.seed)?),
        "exceptional" => ("exceptional", check_exceptional(inputs.seed)?),
        "thin" => ("thin", check_thin(inputs.seed)?),
        "shrink" => ("shrink", check_shrink(inputs.seed)?),
        other => return Err(Error::Precondition(format!("unknown check `{other}`"))),
    };
    Ok(CheckOutcome {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    })
}

fn v(x: &[i64]) -> IntegerVector {
    IntegerVector::from(x.to_vec())
}

/// Small quivers used across the checks, by name.
pub fn standard_quiver(name: &str) -> Result<Arc<Quiver>> {
    let q = match name {
        "A2" => Quiver::path(2),
        "A3" => Quiver::path(3),
        "D4" => Quiver::from_names(
            &["0", "1", "2", "3"],
            &[("a", "1", "0"), ("b", "2", "0"), ("c", "3", "0")],
        )?,
        "theta2" => Quiver::kronecker(2),
        "theta3" => Quiver::kronecker(3),
        "A2~" => Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")])?,
        other => return Err(Error::Precondition(format!("unknown standard quiver `{other}`"))),
    };
    Ok(Arc::new(q))
}

/// A random acyclic quiver: arrows go from lower to higher index.
pub fn random_acyclic_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_arrows);
    let arrows = (0..m)
        .map(|k| {
            let t = rng.gen_range(0..n - 1);
            let h = rng.gen_range(t + 1..n);
            Arrow {
                name: format!("a{k}"),
                tail: t,
                head: h,
            }
        })
        .collect();
    Quiver::new((1..=n).map(|k| k.to_string()).collect(), arrows).expect("forward arrows are acyclic")
}

fn random_dim(rng: &mut impl Rng, n: usize, max: i64) -> IntegerVector {
    IntegerVector((0..n).map(|_| rng.gen_range(0..=max)).collect())
}

fn check_kron3(skew: &Representation, seed: u64) -> Result<(bool, String)> {
    let sigma = v(&[1, -1]);
    let cfg = MembershipConfig {
        seed,
        ..MembershipConfig::symbolic()
    };
    let verdict = membership(skew, &sigma, &cfg)?;
    let certified = verdict.status == MembershipStatus::NotMember
        && verdict.proof == Some(ProofTag::ZeroSymbolicDeterminant(SymbolicMethod::Bareiss))
        && verdict.matrix_size == 9;
    let scan = saturation_scan(
        skew,
        &ScanConfig::cube(
            2,
            2,
            4,
            MembershipConfig {
                seed,
                ..Default::default()
            },
        ),
    )?;
    let cert = scan.certificates.iter().find(|c| c.weight == sigma);
    let cert_ok = match cert {
        Some(c) => c.multiple == 2 && c.verify(skew, &cfg)?.passed(),
        None => false,
    };
    Ok((
        certified && cert_ok,
        format!(
            "(1,-1): {} [{}x{}]; certificate: {}",
            verdict.summary(),
            verdict.matrix_size,
            verdict.matrix_size,
            match cert {
                Some(c) => format!("n={} verified={cert_ok}", c.multiple),
                None => "none".into(),
            }
        ),
    ))
}

fn check_zwara(w: &Representation, seed: u64) -> Result<(bool, String)> {
    let det = functional_determinant(w)?;
    let cfg = ScanConfig::cube(
        2,
        3,
        2,
        MembershipConfig {
            seed,
            ..MembershipConfig::symbolic()
        },
    );
    let report = saturation_scan(w, &cfg)?;
    let nonzero_members: Vec<String> = report
        .members()
        .filter(|o| !o.weight.is_zero())
        .map(|o| o.weight.to_string())
        .collect();
    let uncertified = report
        .weights
        .iter()
        .filter(|o| o.status == WeightStatus::ProbablyNotMember)
        .count();
    Ok((
        det.is_zero() && nonzero_members.is_empty() && uncertified == 0,
        format!(
            "functional determinant = {det}; nonzero members: [{}]; uncertified weights: {uncertified}",
            nonzero_members.join(" ")
        ),
    ))
}

fn check_saturation(seed: u64) -> Result<(bool, String)> {
    let mut certificates = 0;
    let mut weights = 0;
    let (mut members, mut certified, mut probable) = (0, 0, 0);
    let mut parts = Vec::new();
    for name in ["A2", "A3", "D4", "theta2", "A2~"] {
        let q = standard_quiver(name)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[3, name.len() as i64]));
        let mut found = 0;
        for k in 0..SATURATION_REPS {
            let dim = random_dim(&mut rng, q.num_vertices(), SATURATION_MAX_DIM);
            let w = Representation::random_with(q.clone(), &dim, &mut rng, 2)?;
            let cfg = ScanConfig::cube(
                q.num_vertices(),
                SATURATION_RADIUS,
                SATURATION_N_MAX,
                MembershipConfig {
                    seed: derive_seed(seed, &[k as i64]),
                    allow_fallback: true,
                    ..MembershipConfig::symbolic()
                },
            );
            let report = saturation_scan(&w, &cfg)?;
            weights += report.weights.len();
            found += report.certificates.len();
            for o in &report.weights {
                match o.status {
                    WeightStatus::Member => members += 1,
                    WeightStatus::NotMember(_) => certified += 1,
                    WeightStatus::ProbablyNotMember => probable += 1,
                }
            }
        }
        certificates += found;
        parts.push(format!("{name}: {found}"));
    }
    Ok((
        certificates == 0 && probable == 0,
        format!(
            "certificates per quiver {}; {weights} weights: {members} members, {certified} certified non-members, \
             {probable} probable non-members",
            parts.join(", ")
        ),
    ))
}

fn check_euler(seed: u64) -> Result<(bool, String)> {
    let names = ["A3", "D4", "theta2", "theta3", "A2~"];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[4]));
    let mut failures = 0;
    for k in 0..EULER_PAIRS {
        let q = standard_quiver(names[k % names.len()])?;
        let a = random_dim(&mut rng, q.num_vertices(), 3);
        let b = random_dim(&mut rng, q.num_vertices(), 3);
        let va = Representation::random_with(q.clone(), &a, &mut rng, 3)?;
        let wb = Representation::random_with(q.clone(), &b, &mut rng, 3)?;
        let he = hom_ext(&va, &wb)?;
        if he.hom as i64 - he.ext as i64 != q.euler_form(&a, &b)? {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{EULER_PAIRS} pairs, {failures} failures")))
}

fn check_reflection(seed: u64) -> Result<(bool, String)> {
    let cases = [("A3", 2usize), ("D4", 0), ("theta2", 1), ("A2~", 2), ("theta3", 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[5]));
    let (mut pairs, mut dim_fail, mut hom_fail, mut dims_checked) = (0, 0, 0, 0);
    let (mut trips, mut trip_fail) = (0, 0);
    let mut attempts = 0;
    while pairs < REFLECTION_PAIRS {
        attempts += 1;
        if attempts > 50 * REFLECTION_PAIRS {
            return Ok((false, format!("only {pairs} admissible pairs found")));
        }
        let (name, x) = cases[attempts % cases.len()];
        let q = standard_quiver(name)?;
        let a = random_dim(&mut rng, q.num_vertices(), 3);
        let b = random_dim(&mut rng, q.num_vertices(), 3);
        let va = Representation::random_with(q.clone(), &a, &mut rng, 3)?;
        let wb = Representation::random_with(q.clone(), &b, &mut rng, 3)?;
        if has_simple_summand(&va, x)? || has_simple_summand(&wb, x)? {
            continue;
        }
        pairs += 1;
        let (ra, rb) = (
            reflect_rep(&va, x, Direction::Plus)?,
            reflect_rep(&wb, x, Direction::Plus)?,
        );
        if hom_ext(&va, &wb)? != hom_ext(&ra, &rb)? {
            hom_fail += 1;
        }
        for s in decompose(&va, rng.gen())?.summands {
            if s.rep.dim() == &IntegerVector::unit(q.num_vertices(), x) {
                continue;
            }
            dims_checked += 1;
            let expect = reflect_dim(&q, x, s.rep.dim())?.1;
            if reflect_rep(&s.rep, x, Direction::Plus)?.dim() != &expect {
                dim_fail += 1;
            }
            if trips < ROUND_TRIPS {
                trips += 1;
                if round_trip_isomorphism(&s.rep, x)?.is_none() {
                    trip_fail += 1;
                }
            }
        }
    }
    Ok((
        dim_fail == 0 && hom_fail == 0 && trip_fail == 0 && trips == ROUND_TRIPS,
        format!(
            "{pairs} pairs: hom/ext mismatches {hom_fail}; {dims_checked} summands: dimension mismatches {dim_fail}; \
             {trips} round trips: failures {trip_fail}"
        ),
    ))
}

fn check_multiple(seed: u64) -> Result<(bool, String)> {
    let seeds: Vec<u64> = (0..MULTIPLE_SEEDS as i64).map(|k| derive_seed(seed, &[6, k])).collect();
    let mut failures = Vec::new();
    let mut runs = 0;
    for (name, m_max) in [("A2", 4u32), ("theta2", 4), ("theta3", 3)] {
        let q = standard_quiver(name)?;
        for m in 1..=m_max {
            runs += 1;
            match verify_multiple_rule(&q, &v(&[1, 1]), m, &seeds) {
                Ok(r) if r.passed => {}
                Ok(r) => failures.push(format!("{name} m={m}: got {}", r.observed)),
                Err(e) => failures.push(format!("{name} m={m}: {e}")),
            }
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("{runs} cases agree over {MULTIPLE_SEEDS} seeds")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_exceptional(seed: u64) -> Result<(bool, String)> {
    let kron3 = Quiver::kronecker(3);
    let mut parts = Vec::new();
    let mut ok = true;
    for name in fixtures::NAMES {
        let f = fixtures::fixture(name)?;
        let (passed, note) = if f.sequence.is_empty() {
            (
                f.quiver.is_isomorphic_to(&kron3),
                "already the three-arrow Kronecker quiver".to_string(),
            )
        } else {
            let seq = validate_exceptional_sequence(&f.quiver, &f.sequence, 2, derive_seed(seed, &[7]))?;
            match seq.derived.clone() {
                None => (false, format!("invalid: {}", seq.failures().join(", "))),
                Some(derived) if f.second_stage.is_empty() => {
                    let three = seq.pair_checks.iter().any(|p| p.backward_euler == -3);
                    (
                        three && derived.is_isomorphic_to(&kron3),
                        format!("Q(eps) has {} arrows", derived.num_arrows()),
                    )
                }
                Some(derived) => {
                    let derived = Arc::new(derived);
                    let second = validate_exceptional_sequence(&derived, &f.second_stage, 2, derive_seed(seed, &[8]))?;
                    let three = second.pair_checks.iter().any(|p| p.backward_euler == -3);
                    match second.derived {
                        Some(d) => (
                            three && d.is_isomorphic_to(&kron3),
                            format!(
                                "via a {}-vertex quiver with {} arrows",
                                derived.num_vertices(),
                                derived.num_arrows()
                            ),
                        ),
                        None => (false, format!("second stage invalid: {}", second.failures().join(", "))),
                    }
                }
            }
        };
        ok &= passed;
        parts.push(format!("{name} {} ({note})", if passed { "ok" } else { "FAIL" }));
    }
    Ok((ok, parts.join("; ")))
}

/// Counts nonnegative flows by boundary, enumerating every flow whose
/// entries are at most `cap`.
pub fn flow_histogram(q: &Quiver, cap: i64) -> HashMap<IntegerVector, u64> {
    let m = q.num_arrows();
    let mut hist = HashMap::new();
    let mut flow = vec![0i64; m];
    loop {
        let b = boundary(q, &FlowVector(flow.clone())).expect("flow fits the quiver");
        *hist.entry(b).or_insert(0) += 1;
        let mut k = 0;
        while k < m && flow[k] == cap {
            flow[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
        flow[k] += 1;
    }
    hist
}

fn check_thin(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[9]));
    let radius = 3;
    let mut fiber_fail = 0;
    let mut fibers = 0;
    for _ in 0..THIN_QUIVERS {
        let q = random_acyclic_quiver(&mut rng, 5, 7);
        let n = q.num_vertices() as i64;
        // On an acyclic quiver no arrow carries more than the positive part of the boundary.
        let cap = radius * (n / 2).max(1);
        let hist = flow_histogram(&q, cap);
        for sigma in crate::orbit::box_weights(&vec![(-radius, radius); q.num_vertices()]) {
            fibers += 1;
            if fiber_count(&q, &sigma)? != hist.get(&sigma).copied().unwrap_or(0) {
                fiber_fail += 1;
            }
        }
    }
    let (mut violations, mut agree_fail, mut compared) = (0, 0, 0);
    for k in 0..THIN_REPS {
        let q = Arc::new(random_acyclic_quiver(&mut rng, 5, 7));
        let maps = q
            .arrows()
            .iter()
            .map(|_| {
                let s = if rng.gen_bool(0.25) {
                    0
                } else {
                    rng.gen_range(1..=5) * if rng.gen() { 1 } else { -1 }
                };
                crate::linalg::RationalMatrix::from_i64_rows(&[&[s]])
            })
            .collect();
        let w = Representation::new(q.clone(), IntegerVector(vec![1; q.num_vertices()]), maps)?;
        violations += thin_saturation_check(&w, &vec![(-2, 2); q.num_vertices()])?
            .violations
            .len();
        let cfg = MembershipConfig {
            seed: derive_seed(seed, &[10, k as i64]),
            mode: Mode::Symbolic,
            ..MembershipConfig::default()
        };
        for sigma in crate::orbit::box_weights(&vec![(-1, 1); q.num_vertices()]) {
            compared += 1;
            if thin_membership(&w, &sigma)?.status != membership(&w, &sigma, &cfg)?.status {
                agree_fail += 1;
            }
        }
    }
    Ok((
        fiber_fail == 0 && violations == 0 && agree_fail == 0,
        format!(
            "{fibers} fibers: {fiber_fail} mismatches; {THIN_REPS} thin representations: {violations} violations; \
             {compared} weights: {agree_fail} disagreements with general membership"
        ),
    ))
}

fn check_shrink(seed: u64) -> Result<(bool, String)> {
    // (quiver, v0, w): v0 has one arrow to or from w.
    let templates: Vec<(Arc<Quiver>, usize, usize)> = vec![
        (standard_quiver("A3")?, 1, 2),
        (
            Arc::new(Quiver::from_names(
                &["x", "y", "v", "w"],
                &[("a", "x", "v"), ("c", "y", "v"), ("b", "v", "w")],
            )?),
            2,
            3,
        ),
        (
            Arc::new(Quiver::from_names(
                &["w", "v", "x", "y"],
                &[("b", "w", "v"), ("a", "v", "x"), ("c", "v", "y")],
            )?),
            1,
            0,
        ),
        (
            Arc::new(Quiver::from_names(
                &["u", "v", "w"],
                &[("a", "u", "v"), ("c", "u", "v"), ("b", "v", "w")],
            )?),
            1,
            2,
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[11]));
    let (mut compared, mut mismatches) = (0, 0);
    for k in 0..SHRINK_INSTANCES {
        let (q, v0, far) = &templates[k % templates.len()];
        let mut beta = random_dim(&mut rng, q.num_vertices(), 3);
        if beta[*v0] < beta[*far] {
            beta.0.swap(*v0, *far);
        }
        let w = Representation::random_with(q.clone(), &beta, &mut rng, 2)?;
        let mut weight_box = vec![(-2, 2); q.num_vertices()];
        weight_box[*v0] = (0, 0);
        let cfg = MembershipConfig {
            seed: derive_seed(seed, &[12, k as i64]),
            ..MembershipConfig::symbolic()
        };
        for sigma in crate::orbit::box_weights(&weight_box) {
            let s = shrink(q, *v0, &beta, Some(&w), Some(&sigma))?;
            let before = membership(&w, &sigma, &cfg)?.status;
            let after = membership(
                s.rep.as_ref().expect("representation given"),
                s.sigma.as_ref().expect("weight given"),
                &cfg,
            )?
            .status;
            compared += 1;
            if before != after {
                mismatches += 1;
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{SHRINK_INSTANCES} instances, {compared} weights, {mismatches} status mismatches"),
    ))
}
