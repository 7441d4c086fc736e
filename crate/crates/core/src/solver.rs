//! Picard iteration for generalized Chatterjea type mappings.
//!
//! When a map has no points of prime period 2 and its generalized
//! Chatterjea constant `gamma` is below 1/3, every orbit reaches a fixed
//! point and there are at most two fixed points. Along an orbit
//! `x_0, x_1 = T x_0, ...` with consecutive distances
//! `a_n = d(x_{n-1}, x_n)` and `alpha = 2 gamma / (1 - gamma)`, the
//! following bounds hold while three consecutive iterates are pairwise
//! distinct and not fixed:
//!
//! ```text
//! a_{n+2}       <= alpha * max(a_n, a_{n+1})                     (step)
//! a_n           <= alpha^(n/2 - 1) * a,        a = max(a_1, a_2)  (n >= 3)
//! d(x_n, x_n+p) <= a * alpha^((n-1)/2) * (1 - sqrt(alpha)^p) / (1 - sqrt(alpha))
//! ```
//!
//! [`audit_rate_bounds`] re-checks all three along a concrete orbit, with
//! [`crate::scalar::REL_TOL`] slack on floats and exactly on rationals.

use serde::Serialize;
use thiserror::Error;

use crate::classify::{min_constant, ClassifyError, Constant, ContractionClass};
use crate::metric::FiniteMetricSpace;
use crate::scalar::{ser_scalar, ser_scalar_opt, ser_scalar_vec, Scalar};
use crate::selfmap::{fixed_points, prime_period_two_witness, SelfMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("start point {start} is out of range for {n} points")]
    StartOutOfRange { start: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("the orbit ends in a cycle, not a fixed point")]
    CycleTrace,
    #[error("generalized Chatterjea constant is not below 1/3")]
    HypothesesNotMet,
    #[error("orbit fixes before three pairwise distinct non-fixed iterates exist")]
    NotApplicable,
}

/// The two hypotheses of the fixed point theorem for a given map.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Hypotheses<S> {
    /// Condition (i): no point of prime period 2.
    pub no_prime_period_two: bool,
    pub period_two_witness: Option<usize>,
    /// Condition (ii): generalized Chatterjea constant below 1/3.
    pub generalized_chatterjea: bool,
    pub gamma: Constant<S>,
    pub gamma_argmax: Vec<usize>,
}

impl<S: Scalar> Hypotheses<S> {
    pub fn hold(&self) -> bool {
        self.no_prime_period_two && self.generalized_chatterjea
    }
}

pub fn check_hypotheses<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
) -> Result<Hypotheses<S>, ClassifyError> {
    let class = ContractionClass::GeneralizedChatterjea;
    let (gamma, gamma_argmax) = min_constant(space, f, class)?;
    let witness = prime_period_two_witness(f);
    Ok(Hypotheses {
        no_prime_period_two: witness.is_none(),
        period_two_witness: witness,
        generalized_chatterjea: gamma.below(&class.threshold()),
        gamma,
        gamma_argmax,
    })
}

/// `2 gamma / (1 - gamma)`, defined for finite `gamma < 1`.
pub fn rate_from_gamma<S: Scalar>(gamma: &Constant<S>) -> Option<S> {
    let g = gamma.finite()?;
    let one = S::one();
    if *g >= one {
        return None;
    }
    let two = one.clone() + one.clone();
    Some(two * g.clone() / (one - g.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    FixedPointReached,
    CycleDetected,
}

/// A Picard orbit with its consecutive distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct OrbitTrace<S> {
    pub start: usize,
    /// `x_0, x_1, ...`; ends at the first fixed point, or at the first
    /// repeated index for cycles.
    pub iterates: Vec<usize>,
    /// `a[k-1] = a_k = d(x_{k-1}, x_k)`.
    #[serde(serialize_with = "ser_scalar_vec")]
    pub a: Vec<S>,
    pub gamma: Constant<S>,
    #[serde(serialize_with = "ser_scalar_opt")]
    pub alpha: Option<S>,
    /// `max(a_1, a_2)` over the distances that exist.
    #[serde(serialize_with = "ser_scalar_opt")]
    pub a_cap: Option<S>,
    pub terminated: Termination,
}

impl<S: Scalar> OrbitTrace<S> {
    /// `a_k` for `k >= 1`.
    pub fn a(&self, k: usize) -> &S {
        &self.a[k - 1]
    }

    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepAudit {
    /// Index `n` of the triple `x_{n-1}, x_n, x_{n+1}`; the checks concern
    /// `a_{n+2}`.
    pub n: usize,
    /// `a_{n+2} <= alpha * max(a_n, a_{n+1})`.
    pub step_bound: bool,
    /// `a_{n+2} <= alpha^((n+2)/2 - 1) * a`.
    pub power_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyAudit {
    pub n: usize,
    pub p: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct RateAudit<S> {
    #[serde(serialize_with = "ser_scalar")]
    pub alpha: S,
    #[serde(serialize_with = "ser_scalar")]
    pub a_cap: S,
    pub steps: Vec<StepAudit>,
    pub cauchy: Vec<CauchyAudit>,
}

impl<S: Scalar> RateAudit<S> {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.step_bound && s.power_bound)
            && self.cauchy.iter().all(|c| c.holds)
    }

    pub fn check_count(&self) -> usize {
        2 * self.steps.len() + self.cauchy.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct SolveReport<S> {
    pub hypotheses: Hypotheses<S>,
    pub trace: OrbitTrace<S>,
    pub fixed_point: Option<usize>,
    pub steps: usize,
    /// Present when both hypotheses hold and the orbit is long enough.
    pub bound_audit: Option<RateAudit<S>>,
}

/// Iterates `f` from `start` until a fixed point or a repeated index.
pub fn picard_orbit<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    start: usize,
    gamma: Constant<S>,
) -> OrbitTrace<S> {
    let mut seen = vec![false; f.len()];
    let mut iterates = vec![start];
    let mut a = Vec::new();
    let mut x = start;
    seen[x] = true;
    let terminated = loop {
        if f.is_fixed(x) {
            break Termination::FixedPointReached;
        }
        let y = f.apply(x);
        a.push(space.dist(x, y).clone());
        iterates.push(y);
        if seen[y] {
            break Termination::CycleDetected;
        }
        seen[y] = true;
        x = y;
    };
    let a_cap = match a.as_slice() {
        [] => None,
        [a1] => Some(a1.clone()),
        [a1, a2, ..] => Some(S::max_of(a1, a2)),
    };
    let alpha = rate_from_gamma(&gamma);
    OrbitTrace { start, iterates, a, gamma, alpha, a_cap, terminated }
}

/// Runs Picard iteration from `start`, reporting the hypotheses and, when
/// they hold, the rate-bound audit along the orbit.
pub fn picard_solve<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    start: usize,
) -> Result<SolveReport<S>, SolveError> {
    let hypotheses = check_hypotheses(space, f)?;
    if start >= space.len() {
        return Err(SolveError::StartOutOfRange { start, n: space.len() });
    }
    let trace = picard_orbit(space, f, start, hypotheses.gamma.clone());
    let fixed_point = match trace.terminated {
        Termination::FixedPointReached => trace.iterates.last().copied(),
        Termination::CycleDetected => None,
    };
    let bound_audit = if hypotheses.hold() { audit_rate_bounds(space, &trace).ok() } else { None };
    Ok(SolveReport { steps: trace.steps(), hypotheses, fixed_point, trace, bound_audit })
}

/// `alpha^(e/2)` written as `base + coeff * sqrt(alpha)` scaled by `scale`.
fn half_power_form<S: Scalar>(alpha: &S, half_exp: u32, scale: &S) -> (S, S) {
    let p = alpha.powi(half_exp / 2) * scale.clone();
    if half_exp.is_multiple_of(2) {
        (p, S::zero())
    } else {
        (S::zero(), p)
    }
}

/// Checks the step, power and Cauchy bounds along a trace that ends in a
/// fixed point, on the prefix where `x_{n-1}, x_n, x_{n+1}` are pairwise
/// distinct and none is fixed.
pub fn audit_rate_bounds<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    trace: &OrbitTrace<S>,
) -> Result<RateAudit<S>, AuditError> {
    if trace.terminated == Termination::CycleDetected {
        return Err(AuditError::CycleTrace);
    }
    let threshold: S = ContractionClass::GeneralizedChatterjea.threshold();
    if !trace.gamma.below(&threshold) {
        return Err(AuditError::HypothesesNotMet);
    }
    let alpha = trace.alpha.clone().ok_or(AuditError::HypothesesNotMet)?;
    // Iterates x_0..x_{m-1} are non-fixed, x_m is the fixed point.
    let m = trace.steps();
    let x = &trace.iterates;
    let qualifying = |n: usize| {
        n + 1 < m && x[n - 1] != x[n] && x[n] != x[n + 1] && x[n - 1] != x[n + 1]
    };
    let last_n = (1..).take_while(|&n| qualifying(n)).last().ok_or(AuditError::NotApplicable)?;
    let a_cap = trace.a_cap.clone().expect("m >= 3 implies distances");

    let steps = (1..=last_n)
        .map(|n| {
            let k = n + 2;
            let a_k = trace.a(k);
            let step_rhs = alpha.clone() * S::max_of(trace.a(n), trace.a(n + 1));
            let (base, coeff) = half_power_form(&alpha, (k - 2) as u32, &a_cap);
            StepAudit {
                n,
                step_bound: a_k.le_tol(&step_rhs),
                power_bound: a_k.le_sqrt_form(&base, &coeff, &alpha),
            }
        })
        .collect();

    // The power bound covers a_3..a_{last_n + 2}; the Cauchy sum uses
    // a_{n+1}..a_{n+p}.
    let last_k = last_n + 2;
    let mut cauchy = Vec::new();
    for n in 3..last_k {
        for p in 2..=last_k - n {
            let mut base = S::zero();
            let mut coeff = S::zero();
            for j in 0..p {
                let (b, c) = half_power_form(&alpha, (n - 1 + j) as u32, &a_cap);
                base = base + b;
                coeff = coeff + c;
            }
            let holds = space.dist(x[n], x[n + p]).le_sqrt_form(&base, &coeff, &alpha);
            cauchy.push(CauchyAudit { n, p, holds });
        }
    }
    Ok(RateAudit { alpha, a_cap, steps, cauchy })
}

/// `true` unless both hypotheses hold and there are three or more fixed
/// points.
pub fn verify_fixed_point_count<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
) -> Result<bool, ClassifyError> {
    let h = check_hypotheses(space, f)?;
    Ok(!h.hold() || fixed_points(f).len() <= 2)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use num_traits::Signed;

    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::from_ratio(num, den)
    }

    fn example() -> (FiniteMetricSpace<BigRational>, SelfMap) {
        let r = |v: [i64; 3]| v.iter().map(|&x| q(x, 1)).collect::<Vec<_>>();
        let s = FiniteMetricSpace::from_rows(vec![r([0, 1, 4]), r([1, 0, 4]), r([4, 4, 0])], 0.0)
            .unwrap();
        (s, SelfMap::new(vec![0, 1, 1]).unwrap())
    }

    /// Points 1, r, r^2, ..., r^(n-2) and 0 on a line, each mapped to the
    /// next one; 0 is fixed.
    fn chain(n: usize, r: BigRational) -> (FiniteMetricSpace<BigRational>, SelfMap) {
        let mut pos: Vec<BigRational> = (0..n - 1).map(|i| r.powi(i as u32)).collect();
        pos.push(q(0, 1));
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (pos[i].clone() - pos[j].clone()).abs()).collect())
            .collect();
        let s = FiniteMetricSpace::from_rows(rows, 0.0).unwrap();
        let f = SelfMap::new((0..n).map(|i| (i + 1).min(n - 1)).collect()).unwrap();
        (s, f)
    }

    #[test]
    fn example_hypotheses() {
        let (s, f) = example();
        let h = check_hypotheses(&s, &f).unwrap();
        assert!(h.no_prime_period_two && h.generalized_chatterjea);
        assert_eq!(h.gamma, Constant::Finite(q(2, 11)));
        let swap = SelfMap::new(vec![1, 0, 2]).unwrap();
        assert!(!check_hypotheses(&s, &swap).unwrap().no_prime_period_two);
        let id = check_hypotheses(&s, &SelfMap::identity(3)).unwrap();
        assert!(!id.generalized_chatterjea);
        assert_eq!(id.gamma, Constant::Finite(q(1, 2)));
    }

    #[test]
    fn example_solve() {
        let (s, f) = example();
        let r = picard_solve(&s, &f, 2).unwrap();
        assert_eq!((r.fixed_point, r.steps), (Some(1), 1));
        assert_eq!(r.trace.iterates, vec![2, 1]);
        assert!(r.bound_audit.is_none());
        assert_eq!(audit_rate_bounds(&s, &r.trace).unwrap_err(), AuditError::NotApplicable);
        let r = picard_solve(&s, &f, 0).unwrap();
        assert_eq!((r.fixed_point, r.steps), (Some(0), 0));
    }

    #[test]
    fn cycle_is_detected() {
        let (s, _) = example();
        let r = picard_solve(&s, &SelfMap::cyclic_shift(3), 0).unwrap();
        assert_eq!(r.trace.terminated, Termination::CycleDetected);
        assert_eq!(r.fixed_point, None);
        assert_eq!(r.trace.iterates, vec![0, 1, 2, 0]);
        assert!(!r.hypotheses.hold());
    }

    #[test]
    fn alpha_from_gamma() {
        assert_eq!(rate_from_gamma(&Constant::Finite(q(2, 11))), Some(q(4, 9)));
        assert_eq!(rate_from_gamma(&Constant::Finite(q(1, 3))), Some(q(1, 1)));
        assert_eq!(rate_from_gamma::<BigRational>(&Constant::Infinite), None);
    }

    #[test]
    fn fixed_point_count() {
        let (s, f) = example();
        assert!(verify_fixed_point_count(&s, &f).unwrap());
        assert_eq!(fixed_points(&f).len(), 2);
        assert!(verify_fixed_point_count(&s, &SelfMap::constant(3, 0)).unwrap());
        assert!(verify_fixed_point_count(&s, &SelfMap::identity(3)).unwrap());
    }

    #[test]
    fn chain_orbit_is_audited_exactly() {
        let (s, f) = chain(7, q(1, 10));
        let h = check_hypotheses(&s, &f).unwrap();
        assert!(h.hold(), "gamma = {}", h.gamma);
        let r = picard_solve(&s, &f, 0).unwrap();
        assert_eq!(r.fixed_point, Some(6));
        let audit = r.bound_audit.expect("long orbit");
        assert_eq!(audit.steps.len(), 4);
        assert!(!audit.cauchy.is_empty());
        assert!(audit.all_hold(), "{audit:?}");
    }

    #[test]
    fn audit_rejects_cycles_and_large_gamma() {
        let (s, _) = example();
        let cyc = picard_orbit(&s, &SelfMap::cyclic_shift(3), 0, Constant::Finite(q(1, 10)));
        assert_eq!(audit_rate_bounds(&s, &cyc).unwrap_err(), AuditError::CycleTrace);
        let (s, f) = chain(6, q(1, 10));
        let t = picard_orbit(&s, &f, 0, Constant::Finite(q(1, 2)));
        assert_eq!(audit_rate_bounds(&s, &t).unwrap_err(), AuditError::HypothesesNotMet);
    }

    #[test]
    fn audit_detects_violations() {
        // Same orbit, but pretend gamma is tiny: the step bound must fail.
        let (s, f) = chain(6, q(1, 10));
        let t = picard_orbit(&s, &f, 0, Constant::Finite(q(1, 1000)));
        let audit = audit_rate_bounds(&s, &t).unwrap();
        assert!(!audit.all_hold());
    }
}
