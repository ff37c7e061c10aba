//! Thin representations: one-dimensional spaces and scalar maps. Their
//! semi-invariants are monomials indexed by nonnegative integer flows.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, Rational, SparsePolynomial};
use crate::orbit::{MembershipStatus, ProofTag};
use crate::quiver::{IntegerVector, Quiver};
use crate::rep::Representation;

/// Nonnegative integer per arrow, in declared arrow order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlowVector(pub Vec<i64>);

impl fmt::Display for FlowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        IntegerVector(self.0.clone()).fmt(f)
    }
}

/// `I(lambda)_x = sum_{ta=x} lambda(a) - sum_{ha=x} lambda(a)`.
pub fn boundary(q: &Quiver, lambda: &FlowVector) -> Result<IntegerVector> {
    if lambda.0.len() != q.num_arrows() {
        return Err(Error::DimensionMismatch {
            expected: q.num_arrows(),
            found: lambda.0.len(),
        });
    }
    if lambda.0.iter().any(|&l| l < 0) {
        return Err(Error::Precondition(format!("flow {lambda} has a negative entry")));
    }
    let mut out = IntegerVector::zeros(q.num_vertices());
    for (a, &l) in q.arrows().iter().zip(&lambda.0) {
        out.0[a.tail] += l;
        out.0[a.head] -= l;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ThinVerdict {
    pub status: MembershipStatus,
    pub proof: Option<ProofTag>,
    /// A flow on the full quiver, zero wherever `W` vanishes.
    pub flow: Option<FlowVector>,
    /// `f_lambda = prod t(a)^lambda(a)` in variables named after the arrows.
    pub monomial: Option<SparsePolynomial>,
    /// `f_lambda(W)`.
    pub value: Option<Rational>,
}

impl ThinVerdict {
    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }
}

fn scalar(w: &Representation, a: usize) -> Rational {
    let m = w.map(a);
    if m.rows() == 1 && m.cols() == 1 {
        m.get(0, 0).clone()
    } else {
        Rational::zero()
    }
}

/// Decides `sigma in S(W)` for thin `W` by integer flow feasibility: a flow
/// with boundary `sigma` on the support of `W` using only arrows with
/// nonzero scalar. Vertices outside the support impose no condition.
pub fn thin_membership(w: &Representation, sigma: &IntegerVector) -> Result<ThinVerdict> {
    let q = w.quiver();
    if !w.is_thin() {
        return Err(Error::Precondition(
            "thin membership needs every space of dimension at most one".into(),
        ));
    }
    if sigma.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: sigma.len(),
        });
    }
    let allowed: Vec<usize> = (0..q.num_arrows()).filter(|&a| !scalar(w, a).is_zero()).collect();
    let support: Vec<usize> = (0..q.num_vertices()).filter(|&x| w.dim_at(x) == 1).collect();
    let mut eqs = Vec::new();
    for &x in &support {
        let mut row = vec![Rational::zero(); allowed.len() + 1];
        for (k, &a) in allowed.iter().enumerate() {
            let arrow = q.arrow(a);
            if arrow.tail == x {
                row[k] += Rational::one();
            }
            if arrow.head == x {
                row[k] -= Rational::one();
            }
        }
        row[allowed.len()] = rat(sigma[x]);
        eqs.push(row);
    }
    let Some(solution) = integer_point(allowed.len(), eqs) else {
        return Ok(ThinVerdict {
            status: MembershipStatus::NotMember,
            proof: Some(ProofTag::InfeasibleFlow),
            flow: None,
            monomial: None,
            value: None,
        });
    };
    let mut flow = vec![0; q.num_arrows()];
    for (k, &a) in allowed.iter().enumerate() {
        flow[a] = solution[k];
    }
    let flow = FlowVector(flow);
    let monomial = flow_monomial(q, &flow);
    let point: Vec<Rational> = (0..q.num_arrows()).map(|a| scalar(w, a)).collect();
    let value = monomial.eval(&point);
    Ok(ThinVerdict {
        status: MembershipStatus::Member,
        proof: None,
        flow: Some(flow),
        monomial: Some(monomial),
        value: Some(value),
    })
}

/// `prod_a t_a^lambda(a)`, one variable per arrow.
pub fn flow_monomial(q: &Quiver, flow: &FlowVector) -> SparsePolynomial {
    let vars: Arc<Vec<String>> = Arc::new(q.arrows().iter().map(|a| format!("t_{}", a.name)).collect());
    let mut out = SparsePolynomial::constant(vars.clone(), Rational::one());
    for (a, &l) in flow.0.iter().enumerate() {
        let t = SparsePolynomial::variable(vars.clone(), a);
        for _ in 0..l {
            out = out.mul(&t);
        }
    }
    out
}

/// Elimination record for one variable.
enum Step {
    /// The variable equals `-(sum of other terms) / coefficient` by this equation.
    Solved(usize, Vec<Rational>),
    /// Bounds on the variable from these inequalities.
    Bounded(usize, Vec<Vec<Rational>>),
}

/// Finds an integer point of `{x >= 0, E x = b}` (rows `[E | b]`) for a
/// totally unimodular `E` by exact elimination: equations are used as
/// substitutions, inequalities are projected by Fourier-Motzkin. Because
/// every fiber over integer values of already chosen coordinates is again a
/// system of the same kind, back-substitution can always pick an integer.
fn integer_point(n: usize, mut eqs: Vec<Vec<Rational>>) -> Option<Vec<i64>> {
    // Inequalities `c x <= b`; start with `-x_k <= 0`.
    let mut ineqs: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            let mut r = vec![Rational::zero(); n + 1];
            r[k] = -Rational::one();
            r
        })
        .collect();
    let mut steps = Vec::with_capacity(n);
    for x in (0..n).rev() {
        if let Some(pos) = eqs.iter().position(|r| !r[x].is_zero()) {
            let pivot = eqs.swap_remove(pos);
            for r in eqs.iter_mut().chain(ineqs.iter_mut()) {
                eliminate(r, &pivot, x);
            }
            steps.push(Step::Solved(x, pivot));
        } else {
            let (with, without): (Vec<_>, Vec<_>) = ineqs.into_iter().partition(|r| !r[x].is_zero());
            let (upper, lower): (Vec<_>, Vec<_>) = with.iter().cloned().partition(|r| r[x].is_positive());
            let mut seen: HashSet<Vec<Rational>> = without.iter().cloned().collect();
            let mut next = without;
            for u in &upper {
                for l in &lower {
                    let mut r = combine(u, l, x);
                    normalize(&mut r);
                    if r[..n].iter().all(Zero::is_zero) {
                        if r[n].is_negative() {
                            return None;
                        }
                        continue;
                    }
                    if seen.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            ineqs = next;
            steps.push(Step::Bounded(x, with));
        }
    }
    for r in &eqs {
        if !r[n].is_zero() {
            return None;
        }
    }
    for r in &ineqs {
        if r[n].is_negative() {
            return None;
        }
    }
    let mut value = vec![Rational::zero(); n];
    for step in steps.into_iter().rev() {
        match step {
            Step::Solved(x, row) => {
                let rest: Rational = (0..n).filter(|&k| k != x).map(|k| &row[k] * &value[k]).sum();
                let v = (&row[n] - rest) / &row[x];
                debug_assert!(v.is_integer());
                value[x] = v;
            }
            Step::Bounded(x, rows) => {
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for row in rows {
                    let rest: Rational = (0..n).filter(|&k| k != x).map(|k| &row[k] * &value[k]).sum();
                    let bound = (&row[n] - rest) / &row[x];
                    if row[x].is_positive() {
                        hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
                    } else {
                        lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
                    }
                }
                let v = lo.unwrap_or_else(Rational::zero).ceil();
                debug_assert!(hi.is_none_or(|h| v <= h));
                value[x] = v;
            }
        }
    }
    value.iter().map(|v| i64::try_from(v.to_integer()).ok()).collect()
}

fn eliminate(r: &mut [Rational], pivot: &[Rational], x: usize) {
    if r[x].is_zero() {
        return;
    }
    let f = &r[x] / &pivot[x];
    for (a, p) in r.iter_mut().zip(pivot) {
        *a -= &f * p;
    }
}

/// Positive combination of an upper and a lower bound cancelling `x`.
fn combine(u: &[Rational], l: &[Rational], x: usize) -> Vec<Rational> {
    let fu = -&l[x];
    let fl = u[x].clone();
    u.iter().zip(l).map(|(a, b)| &fu * a + &fl * b).collect()
}

fn normalize(r: &mut [Rational]) {
    let n = r.len() - 1;
    if let Some(lead) = r[..n].iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
        for c in r.iter_mut() {
            *c /= &lead;
        }
    }
}

/// `|I^{-1}(sigma) cap Z_{>=0}^{Q_1}|` by depth-first search: vertices in
/// topological order, where the flow leaving a vertex is fixed by `sigma`
/// and the already assigned incoming flow, and is split among the outgoing
/// arrows in every possible way.
pub fn fiber_count(q: &Quiver, sigma: &IntegerVector) -> Result<u64> {
    if sigma.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: sigma.len(),
        });
    }
    if sigma.total() != 0 {
        return Ok(0);
    }
    let order = q.topological_order().to_vec();
    let outgoing: Vec<Vec<usize>> = (0..q.num_vertices()).map(|x| q.outgoing(x).collect()).collect();
    let mut inflow = vec![0i64; q.num_vertices()];
    Ok(count_from(q, sigma, &order, &outgoing, 0, &mut inflow))
}

fn count_from(
    q: &Quiver,
    sigma: &IntegerVector,
    order: &[usize],
    outgoing: &[Vec<usize>],
    pos: usize,
    inflow: &mut [i64],
) -> u64 {
    let Some(&x) = order.get(pos) else {
        return 1;
    };
    let out = sigma[x] + inflow[x];
    if out < 0 {
        return 0;
    }
    let arrows = &outgoing[x];
    if arrows.is_empty() {
        return u64::from(out == 0) * count_from(q, sigma, order, outgoing, pos + 1, inflow);
    }
    split(q, sigma, order, outgoing, pos, inflow, arrows, 0, out)
}

#[allow(clippy::too_many_arguments)]
fn split(
    q: &Quiver,
    sigma: &IntegerVector,
    order: &[usize],
    outgoing: &[Vec<usize>],
    pos: usize,
    inflow: &mut [i64],
    arrows: &[usize],
    k: usize,
    left: i64,
) -> u64 {
    let head = q.arrow(arrows[k]).head;
    if k + 1 == arrows.len() {
        inflow[head] += left;
        let c = count_from(q, sigma, order, outgoing, pos + 1, inflow);
        inflow[head] -= left;
        return c;
    }
    let mut total = 0;
    for l in 0..=left {
        inflow[head] += l;
        total += split(q, sigma, order, outgoing, pos, inflow, arrows, k + 1, left - l);
        inflow[head] -= l;
    }
    total
}

#[derive(Clone, Debug, Default)]
pub struct ThinSaturationReport {
    pub checked: usize,
    /// `(sigma, n)` with `n sigma` a member and `sigma` not.
    pub violations: Vec<(IntegerVector, u32)>,
}

/// Checks `n sigma in S(W) => sigma in S(W)` for `n = 2..=4` over the box.
pub fn thin_saturation_check(w: &Representation, weight_box: &[(i64, i64)]) -> Result<ThinSaturationReport> {
    let mut report = ThinSaturationReport::default();
    if weight_box.iter().any(|(lo, hi)| lo > hi) {
        return Ok(report);
    }
    for sigma in crate::orbit::box_weights(weight_box) {
        report.checked += 1;
        if thin_membership(w, &sigma)?.is_member() {
            continue;
        }
        for n in 2..=4 {
            if thin_membership(w, &sigma.scale(n as i64))?.is_member() {
                report.violations.push((sigma.clone(), n));
                break;
            }
        }
    }
    Ok(report)
}
