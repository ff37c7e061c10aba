//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails. Each criterion runs the library check with
//! its pinned parameters and, where a value can be recomputed independently,
//! an oracle written here from first principles.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use orbitsat_core::checks::{self, CheckInputs};
use orbitsat_core::fixtures;
use orbitsat_core::orbit::{box_weights, canonical_decomposition, membership, MembershipConfig, MembershipStatus};
use orbitsat_core::quiver::{IntegerVector, Quiver};
use orbitsat_core::rep::Representation;
use orbitsat_core::thin::fiber_count;
use orbitsat_core::transforms::{reflect_dim, shrink};

/// Runtime ceilings, in seconds, for the criteria that have one.
const KRON3_SECONDS: f64 = 30.0;
const SATURATION_SECONDS: f64 = 600.0;
/// Exact criteria compare with zero tolerance.
const EXACT_TOLERANCE: i64 = 0;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    d
}

fn entry(m: &orbitsat_core::linalg::RationalMatrix, i: usize, j: usize) -> BigRational {
    m.get(i, j).clone()
}

/// `phi -> (phi(ha) V(a) - W(a) phi(ta))_a` written out directly, with its
/// own basis order (vertex blocks row-major in `phi(x)`, arrow blocks
/// row-major in the `W(ha) x V(ta)` matrix).
fn oracle_interaction(v: &Representation, w: &Representation) -> Vec<Vec<BigRational>> {
    let quiver = v.quiver();
    let mut col = HashMap::new();
    let mut cols = 0;
    for x in 0..quiver.num_vertices() {
        for i in 0..w.dim_at(x) {
            for k in 0..v.dim_at(x) {
                col.insert((x, i, k), cols);
                cols += 1;
            }
        }
    }
    let mut rows = Vec::new();
    for (ai, a) in quiver.arrows().iter().enumerate() {
        for i in 0..w.dim_at(a.head) {
            for l in 0..v.dim_at(a.tail) {
                let mut row = vec![BigRational::zero(); cols];
                for k in 0..v.dim_at(a.head) {
                    row[col[&(a.head, i, k)]] += entry(v.map(ai), k, l);
                }
                for j in 0..w.dim_at(a.tail) {
                    row[col[&(a.tail, j, l)]] -= entry(w.map(ai), i, j);
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn oracle_euler(quiver: &Quiver, a: &IntegerVector, b: &IntegerVector) -> i64 {
    let diag: i64 = (0..quiver.num_vertices()).map(|x| a[x] * b[x]).sum();
    diag - quiver.arrows().iter().map(|e| a[e.tail] * b[e.head]).sum::<i64>()
}

/// Fiber sizes from the generating function `prod_a 1/(1 - x_ta / x_ha)`,
/// expanded arrow by arrow with states pruned once a vertex is complete.
fn oracle_fibers(quiver: &Quiver, radius: i64) -> HashMap<Vec<i64>, u64> {
    let n = quiver.num_vertices();
    let cap = radius * (n as i64 / 2).max(1);
    let last_touch: Vec<Option<usize>> = (0..n)
        .map(|x| quiver.arrows().iter().rposition(|a| a.tail == x || a.head == x))
        .collect();
    let mut states: HashMap<Vec<i64>, u64> = HashMap::from([(vec![0; n], 1)]);
    for (k, a) in quiver.arrows().iter().enumerate() {
        let mut next: HashMap<Vec<i64>, u64> = HashMap::new();
        for (s, c) in &states {
            for l in 0..=cap {
                let mut t = s.clone();
                t[a.tail] += l;
                t[a.head] -= l;
                let done = |x: usize| last_touch[x].is_none_or(|p| p <= k);
                if [a.tail, a.head].iter().any(|&x| done(x) && t[x].abs() > radius) {
                    continue;
                }
                *next.entry(t).or_insert(0) += c;
            }
        }
        states = next;
    }
    states.retain(|s, _| s.iter().all(|x| x.abs() <= radius));
    states
}

struct Line {
    index: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn criterion(index: usize, name: &'static str, inputs: &CheckInputs, extra: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let outcome = checks::run_check(name, inputs).unwrap_or_else(|e| panic!("{name}: {e}"));
    let (oracle_ok, oracle_detail) = extra();
    let secs = start.elapsed().as_secs_f64();
    let ceiling = match name {
        "kron3" => Some(KRON3_SECONDS),
        "saturation" => Some(SATURATION_SECONDS),
        _ => None,
    };
    let in_time = ceiling.is_none_or(|c| secs <= c);
    Line {
        index,
        name,
        passed: outcome.passed && oracle_ok && in_time,
        detail: format!(
            "{}; oracle: {oracle_detail}; {secs:.1}s{}",
            outcome.detail,
            ceiling.map_or(String::new(), |c| format!(" (limit {c:.0}s)"))
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let inputs = CheckInputs::default();
    let mut lines = Vec::new();

    lines.push(criterion(1, "kron3", &inputs, || {
        let w = fixtures::skew();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut nonzero = 0;
        for _ in 0..100 {
            let v = Representation::random_with(w.quiver().clone(), &IntegerVector::from(vec![1, 2]), &mut rng, 1000)
                .unwrap();
            let m = oracle_interaction(&v, &w);
            assert_eq!((m.len(), m[0].len()), (9, 9));
            if !det(m).is_zero() {
                nonzero += 1;
            }
        }
        let mut found = false;
        for _ in 0..20 {
            let v = Representation::random_with(w.quiver().clone(), &IntegerVector::from(vec![2, 4]), &mut rng, 1000)
                .unwrap();
            if !det(oracle_interaction(&v, &w)).is_zero() {
                found = true;
                break;
            }
        }
        (
            nonzero <= EXACT_TOLERANCE && found,
            format!("9x9 determinant nonzero at {nonzero}/100 points; 18x18 witness for (2,-2) found: {found}"),
        )
    }));

    lines.push(criterion(2, "zwara", &inputs, || {
        let w = fixtures::zwara();
        let mut nonzero = 0;
        for t1 in -3..=3 {
            for t2 in -3..=3 {
                let m = (0..3)
                    .map(|i| {
                        (0..3)
                            .map(|j| q(t1) * entry(w.map(0), i, j) + q(t2) * entry(w.map(1), i, j))
                            .collect()
                    })
                    .collect();
                if !det(m).is_zero() {
                    nonzero += 1;
                }
            }
        }
        (
            nonzero == 0,
            format!("det(t1 W(a) + t2 W(b)) nonzero at {nonzero}/49 points (degree 3 in each variable)"),
        )
    }));

    lines.push(criterion(3, "saturation", &inputs, || {
        // Re-derive verdicts on a smaller scan: witnesses must have a nonzero
        // oracle determinant, certified non-members a zero one at random points.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut checked, mut bad) = (0, 0);
        for name in ["A2", "theta2", "A2~"] {
            let quiver = checks::standard_quiver(name).unwrap();
            for k in 0..2 {
                let dim = IntegerVector((0..quiver.num_vertices()).map(|_| rng.gen_range(1..=3)).collect());
                let w = Representation::random_with(quiver.clone(), &dim, &mut rng, 2).unwrap();
                let cfg = MembershipConfig {
                    seed: k,
                    ..MembershipConfig::symbolic()
                };
                for sigma in box_weights(&vec![(-2, 2); quiver.num_vertices()]) {
                    let verdict = membership(&w, &sigma, &cfg).unwrap();
                    let alpha = &verdict.alpha;
                    if alpha.0.iter().any(|&x| x < 0) || oracle_euler(&quiver, alpha, &dim) != 0 {
                        continue;
                    }
                    checked += 1;
                    let ok = match verdict.status {
                        MembershipStatus::Member => verdict
                            .witness
                            .as_ref()
                            .is_some_and(|v| !det(oracle_interaction(v, &w)).is_zero()),
                        _ => (0..3).all(|_| {
                            let v = Representation::random_with(quiver.clone(), alpha, &mut rng, 1000).unwrap();
                            det(oracle_interaction(&v, &w)).is_zero()
                        }),
                    };
                    if !ok {
                        bad += 1;
                    }
                }
            }
        }
        (
            bad == 0,
            format!("{checked} square weights re-evaluated by oracle determinant: {bad} disagreements"),
        )
    }));

    lines.push(criterion(4, "euler", &inputs, || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut bad = 0;
        for k in 0..100 {
            let name = ["A3", "D4", "theta2", "theta3", "A2~"][k % 5];
            let quiver = checks::standard_quiver(name).unwrap();
            let a = IntegerVector((0..quiver.num_vertices()).map(|_| rng.gen_range(0..=3)).collect());
            let b = IntegerVector((0..quiver.num_vertices()).map(|_| rng.gen_range(0..=3)).collect());
            let v = Representation::random_with(quiver.clone(), &a, &mut rng, 3).unwrap();
            let w = Representation::random_with(quiver.clone(), &b, &mut rng, 3).unwrap();
            let m = oracle_interaction(&v, &w);
            let cols = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum::<i64>() as usize;
            let rank = rank(m);
            let (hom, ext) = (cols - rank, oracle_rows(&quiver, &a, &b) - rank);
            if hom as i64 - ext as i64 != oracle_euler(&quiver, &a, &b) {
                bad += 1;
            }
        }
        (
            bad == 0,
            format!("independent rank computation on 100 pairs: {bad} failures"),
        )
    }));

    lines.push(criterion(5, "reflection", &inputs, || {
        // s_x(alpha)(x) = sum over arrows at x of alpha(other end) - alpha(x).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut bad = 0;
        for k in 0..200 {
            let quiver = checks::standard_quiver(["A3", "D4", "theta2", "theta3", "A2~"][k % 5]).unwrap();
            let n = quiver.num_vertices();
            let alpha = IntegerVector((0..n).map(|_| rng.gen_range(0..=4)).collect());
            let x = rng.gen_range(0..n);
            if !quiver.is_sink(x) && !quiver.is_source(x) {
                if reflect_dim(&quiver, x, &alpha).is_ok() {
                    bad += 1;
                }
                continue;
            }
            let mut expect = alpha.clone();
            expect.0[x] = -alpha[x];
            for a in quiver.arrows() {
                if a.head == x && a.tail != x {
                    expect.0[x] += alpha[a.tail];
                }
                if a.tail == x && a.head != x {
                    expect.0[x] += alpha[a.head];
                }
            }
            match reflect_dim(&quiver, x, &alpha) {
                Ok((_, got)) if got == expect => {}
                _ => bad += 1,
            }
        }
        (
            bad == 0,
            format!("reflection formula on 200 dimension vectors: {bad} mismatches"),
        )
    }));

    lines.push(criterion(6, "multiple", &inputs, || {
        // Classify (1,1) by the Tits form and predict m(1,1) directly.
        let mut bad = Vec::new();
        for (name, arrows, m_max) in [("A2", 1i64, 4i64), ("theta2", 2, 4), ("theta3", 3, 3)] {
            let quiver = checks::standard_quiver(name).unwrap();
            let tits = 2 - arrows;
            for m in 1..=m_max {
                // Real and isotropic roots split into m copies; imaginary ones stay whole.
                let expected: Vec<(Vec<i64>, usize)> = if tits >= 0 {
                    vec![(vec![1, 1], m as usize)]
                } else {
                    vec![(vec![m, m], 1)]
                };
                let got = canonical_decomposition(&quiver, &IntegerVector::from(vec![m, m]), &[11, 12, 13]).unwrap();
                let got: Vec<(Vec<i64>, usize)> = got.parts.iter().map(|p| (p.dim.0.clone(), p.multiplicity)).collect();
                if got != expected {
                    bad.push(format!("{name} m={m}: {got:?}"));
                }
            }
        }
        (
            bad.is_empty(),
            format!("Tits-form prediction on 11 multiples: mismatches {bad:?}"),
        )
    }));

    lines.push(criterion(7, "exceptional", &inputs, || {
        // <eps2, eps1> on the two-stage fixtures, by hand from the formula.
        let mut values = Vec::new();
        for name in ["b", "c", "f", "g"] {
            let f = fixtures::fixture(name).unwrap();
            values.push(oracle_euler(&f.quiver, &f.sequence[1], &f.sequence[0]));
        }
        (
            values.iter().all(|&e| e == -3),
            format!("<eps2, eps1> for b, c, f, g = {values:?}"),
        )
    }));

    lines.push(criterion(8, "thin", &inputs, || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut bad = 0;
        let mut total = 0;
        for _ in 0..10 {
            let quiver = checks::random_acyclic_quiver(&mut rng, 5, 7);
            let fibers = oracle_fibers(&quiver, 3);
            for sigma in orbitsat_core::orbit::box_weights(&vec![(-3, 3); quiver.num_vertices()]) {
                total += 1;
                let expect = fibers.get(&sigma.0).copied().unwrap_or(0);
                if fiber_count(&quiver, &sigma).unwrap() != expect {
                    bad += 1;
                }
            }
        }
        (
            bad == 0,
            format!("generating-function fibers on 10 quivers, {total} weights: {bad} mismatches"),
        )
    }));

    lines.push(criterion(9, "shrink", &inputs, || {
        // Every new arrow `xy` must carry W(x) W(y); old arrows keep their maps.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let templates = [
            (checks::standard_quiver("A3").unwrap(), 1usize, 2usize),
            (
                Arc::new(
                    Quiver::from_names(
                        &["x", "y", "v", "w"],
                        &[("a", "x", "v"), ("c", "y", "v"), ("b", "v", "w")],
                    )
                    .unwrap(),
                ),
                2,
                3,
            ),
            (
                Arc::new(
                    Quiver::from_names(
                        &["w", "v", "x", "y"],
                        &[("b", "w", "v"), ("a", "v", "x"), ("c", "v", "y")],
                    )
                    .unwrap(),
                ),
                1,
                0,
            ),
        ];
        let (mut arrows, mut bad) = (0, 0);
        for k in 0..30 {
            let (quiver, v0, far) = &templates[k % templates.len()];
            let mut beta = IntegerVector((0..quiver.num_vertices()).map(|_| rng.gen_range(0..=3)).collect());
            if beta[*v0] < beta[*far] {
                beta.0.swap(*v0, *far);
            }
            let w = Representation::random_with(quiver.clone(), &beta, &mut rng, 5).unwrap();
            let s = shrink(quiver, *v0, &beta, Some(&w), None).unwrap();
            let rep = s.rep.unwrap();
            for (i, a) in s.quiver.arrows().iter().enumerate() {
                arrows += 1;
                let got = to_big(rep.map(i));
                let expect = match quiver.arrow_index(&a.name) {
                    Ok(j) => to_big(w.map(j)),
                    Err(_) => (1..a.name.len())
                        .find_map(|cut| {
                            let (x, y) = a.name.split_at(cut);
                            Some(mat_mul(
                                w.map(quiver.arrow_index(x).ok()?),
                                w.map(quiver.arrow_index(y).ok()?),
                            ))
                        })
                        .unwrap_or_default(),
                };
                if got != expect {
                    bad += 1;
                }
            }
        }
        (
            bad == 0,
            format!("composite maps on 30 shrinks, {arrows} arrows: {bad} mismatches"),
        )
    }));

    for l in &lines {
        println!(
            "criterion {} {:<12} {} {}",
            l.index,
            l.name,
            if l.passed { "PASS" } else { "FAIL" },
            l.detail
        );
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.index).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

fn to_big(m: &orbitsat_core::linalg::RationalMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| entry(m, i, j)).collect())
        .collect()
}

fn mat_mul(
    a: &orbitsat_core::linalg::RationalMatrix,
    b: &orbitsat_core::linalg::RationalMatrix,
) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).fold(BigRational::zero(), |acc, k| acc + entry(a, i, k) * entry(b, k, j)))
                .collect()
        })
        .collect()
}

fn oracle_rows(quiver: &Quiver, a: &IntegerVector, b: &IntegerVector) -> usize {
    quiver.arrows().iter().map(|e| (b[e.head] * a[e.tail]) as usize).sum()
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let sub = &f * &m[r][k];
                m[i][k] -= sub;
            }
        }
        r += 1;
    }
    r
}

#[test]
fn skew_negative_control_fails() {
    let mut inputs = CheckInputs::default();
    let sym =
        "rep kron3.quiver dim 3,3\nm a\n0 1 0\n1 0 0\n0 0 0\nm b\n0 0 1\n0 0 0\n1 0 0\nm c\n0 0 0\n0 0 1\n0 1 0\n";
    inputs.skew = Representation::parse(sym, fixtures::kron3()).unwrap().0;
    let outcome = checks::run_check("kron3", &inputs).unwrap();
    assert!(!outcome.passed, "{}", outcome.detail);
}
