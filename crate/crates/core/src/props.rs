//! Randomized checks of the class implications and the fixed point theorem.
//!
//! Every instance of a seeded corpus is run through each property; the
//! suite summary counts how often each antecedent fired, so a run that
//! passes vacuously is visible as such.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::classify::{classify_all, membership_oracle, ClassificationReport, Constant, ContractionClass};
use crate::corpus::{self, Instance};
use crate::io::{map_to_json, space_to_json};
use crate::metric::{FiniteMetricSpace, DEFAULT_TRIANGLE_TOL};
use crate::parallel;
use crate::scalar::Scalar;
use crate::selfmap::{fixed_points, is_asymptotically_regular, prime_period, SelfMap};
use crate::solver::{audit_rate_bounds, check_hypotheses, picard_solve, AuditError};

/// Gamma grid for the oracle cross-check: `j / 10` for `j = 0..20`.
pub const ORACLE_GAMMAS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    /// `c_C < 1/3` implies `c_G <= c_C`.
    ChatterjeaImpliesGeneralized,
    /// `c_P < 1/2` implies `c_G <= c_P / (1 - c_P)`.
    PerimeterImpliesGeneralized,
    /// `c_K < 1` implies `c_G <= c_K / (2 (1 - c_K))`.
    GeneralizedKannanImpliesGeneralized,
    /// Asymptotically regular maps have no periodic points of prime period
    /// two or more.
    RegularHasNoCycles,
    /// Under both hypotheses every orbit fixes within `n` steps and there
    /// are at most two fixed points.
    FixedPointTheorem,
    /// Step, power and Cauchy bounds along audited orbits.
    RateBounds,
    /// The tuple-by-tuple oracle agrees with the max-ratio constant.
    OracleConsistency,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::ChatterjeaImpliesGeneralized,
        Property::PerimeterImpliesGeneralized,
        Property::GeneralizedKannanImpliesGeneralized,
        Property::RegularHasNoCycles,
        Property::FixedPointTheorem,
        Property::RateBounds,
        Property::OracleConsistency,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Property::ChatterjeaImpliesGeneralized => "chatterjea-implies-generalized",
            Property::PerimeterImpliesGeneralized => "perimeter-implies-generalized",
            Property::GeneralizedKannanImpliesGeneralized => "gen-kannan-implies-generalized",
            Property::RegularHasNoCycles => "regular-has-no-cycles",
            Property::FixedPointTheorem => "fixed-point-theorem",
            Property::RateBounds => "rate-bounds",
            Property::OracleConsistency => "oracle-consistency",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Per-instance tallies. Adding two tallies gives the tally of the union.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub instances: u64,
    /// Instances where `c_C < 1/3`.
    pub chatterjea_antecedent: u64,
    /// Instances where `c_P < 1/2`.
    pub perimeter_antecedent: u64,
    /// Instances with `1/4 <= c_P < 1/2`.
    pub perimeter_quarter_band: u64,
    /// Instances in that band with `c_G >= 1/3`.
    pub perimeter_band_not_generalized: u64,
    /// Instances where `c_K < 1`.
    pub gen_kannan_antecedent: u64,
    pub asymptotically_regular: u64,
    /// Instances satisfying both fixed point hypotheses.
    pub hypotheses_hold: u64,
    pub orbits_solved: u64,
    pub orbits_audited: u64,
    pub audit_checks: u64,
    pub oracle_checks: u64,
}

impl Tally {
    fn add(&mut self, o: &Tally) {
        self.instances += o.instances;
        self.chatterjea_antecedent += o.chatterjea_antecedent;
        self.perimeter_antecedent += o.perimeter_antecedent;
        self.perimeter_quarter_band += o.perimeter_quarter_band;
        self.perimeter_band_not_generalized += o.perimeter_band_not_generalized;
        self.gen_kannan_antecedent += o.gen_kannan_antecedent;
        self.asymptotically_regular += o.asymptotically_regular;
        self.hypotheses_hold += o.hypotheses_hold;
        self.orbits_solved += o.orbits_solved;
        self.orbits_audited += o.orbits_audited;
        self.audit_checks += o.audit_checks;
        self.oracle_checks += o.oracle_checks;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub property: Property,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Outcome {
    pub tally: Tally,
    pub findings: Vec<Finding>,
}

fn q<S: Scalar>(num: i64, den: i64) -> S {
    S::from_ratio(num, den)
}

/// `c_G <= bound(c)` whenever `c` is finite and below `antecedent`.
fn implication<S: Scalar>(
    c: &Constant<S>,
    c_g: &Constant<S>,
    antecedent: &S,
    bound: impl Fn(&S) -> S,
) -> Option<bool> {
    let c = c.finite().filter(|&c| c.below_threshold(antecedent))?;
    let rhs = bound(c);
    Some(match c_g.finite() {
        Some(g) => g.le_tol(&rhs),
        None => false,
    })
}

/// Runs every property on one `(space, map)` pair.
pub fn check_instance<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap) -> Outcome {
    use ContractionClass as C;
    let mut out = Outcome::default();
    out.tally.instances = 1;
    let mut fail = |property: Property, detail: String| out.findings.push(Finding { property, detail });

    let report = match classify_all(space, f) {
        Ok(r) => r,
        Err(e) => {
            fail(Property::OracleConsistency, format!("classification failed: {e}"));
            return out;
        }
    };
    let c_g = report.constant(C::GeneralizedChatterjea);
    let one = S::one();
    let two = one.clone() + one.clone();

    match implication(report.constant(C::Chatterjea), c_g, &q(1, 3), |c| c.clone()) {
        Some(true) => out.tally.chatterjea_antecedent += 1,
        Some(false) => {
            out.tally.chatterjea_antecedent += 1;
            fail(
                Property::ChatterjeaImpliesGeneralized,
                format!("c_C = {}, c_G = {c_g}", report.constant(C::Chatterjea)),
            );
        }
        None => {}
    }

    let c_p = report.constant(C::PerimeterContracting);
    if let Some(ok) = implication(c_p, c_g, &q(1, 2), |a| a.clone() / (one.clone() - a.clone())) {
        out.tally.perimeter_antecedent += 1;
        if !ok {
            fail(Property::PerimeterImpliesGeneralized, format!("c_P = {c_p}, c_G = {c_g}"));
        }
        let a = c_p.finite().expect("antecedent needs a finite constant");
        if *a >= q(1, 4) {
            out.tally.perimeter_quarter_band += 1;
            if !c_g.below(&q(1, 3)) {
                out.tally.perimeter_band_not_generalized += 1;
            }
        }
    }

    let c_k = report.constant(C::GeneralizedKannan);
    let kannan_bound = |l: &S| l.clone() / (two.clone() * (one.clone() - l.clone()));
    if let Some(ok) = implication(c_k, c_g, &one, kannan_bound) {
        out.tally.gen_kannan_antecedent += 1;
        if !ok {
            fail(Property::GeneralizedKannanImpliesGeneralized, format!("c_K = {c_k}, c_G = {c_g}"));
        }
    }

    if is_asymptotically_regular(f) {
        out.tally.asymptotically_regular += 1;
        if let Some(i) = (0..f.len()).find(|&i| prime_period(f, i).is_some_and(|p| p >= 2)) {
            fail(Property::RegularHasNoCycles, format!("point {i} has prime period >= 2"));
        }
    }

    check_fixed_point_theorem(space, f, &mut out);
    check_oracle(space, f, &report, &mut out);
    out
}

fn check_fixed_point_theorem<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap, out: &mut Outcome) {
    let n = space.len();
    let Ok(h) = check_hypotheses(space, f) else { return };
    if !h.hold() {
        return;
    }
    out.tally.hypotheses_hold += 1;
    let fixed = fixed_points(f);
    if fixed.len() > 2 {
        out.findings.push(Finding {
            property: Property::FixedPointTheorem,
            detail: format!("{} fixed points {fixed:?}", fixed.len()),
        });
    }
    for start in 0..n {
        out.tally.orbits_solved += 1;
        let report = match picard_solve(space, f, start) {
            Ok(r) => r,
            Err(e) => {
                out.findings.push(Finding {
                    property: Property::FixedPointTheorem,
                    detail: format!("start {start}: {e}"),
                });
                continue;
            }
        };
        if report.fixed_point.is_none() || report.steps > n {
            out.findings.push(Finding {
                property: Property::FixedPointTheorem,
                detail: format!("start {start}: orbit {:?} does not fix within {n} steps", report.trace.iterates),
            });
            continue;
        }
        match audit_rate_bounds(space, &report.trace) {
            Ok(audit) => {
                out.tally.orbits_audited += 1;
                out.tally.audit_checks += audit.check_count() as u64;
                if !audit.all_hold() {
                    out.findings.push(Finding {
                        property: Property::RateBounds,
                        detail: format!(
                            "start {start}: orbit {:?}, alpha {}, failed steps {:?}, failed cauchy {:?}",
                            report.trace.iterates,
                            audit.alpha,
                            audit.steps.iter().filter(|s| !(s.step_bound && s.power_bound)).collect::<Vec<_>>(),
                            audit.cauchy.iter().filter(|c| !c.holds).collect::<Vec<_>>(),
                        ),
                    });
                }
            }
            Err(AuditError::NotApplicable) => {}
            Err(e) => out.findings.push(Finding {
                property: Property::RateBounds,
                detail: format!("start {start}: unexpected audit error: {e}"),
            }),
        }
    }
}

fn check_oracle<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    report: &ClassificationReport<S>,
    out: &mut Outcome,
) {
    for v in report.verdicts() {
        for j in 0..ORACLE_GAMMAS {
            let gamma: S = q(j as i64, 10);
            out.tally.oracle_checks += 1;
            let by_constant = v.constant.admits(&gamma);
            match membership_oracle(space, f, v.class, &gamma) {
                Ok(by_oracle) if by_oracle == by_constant => {}
                other => out.findings.push(Finding {
                    property: Property::OracleConsistency,
                    detail: format!(
                        "{} at gamma {gamma}: constant {} says {by_constant}, oracle says {other:?}",
                        v.class, v.constant
                    ),
                }),
            }
        }
    }
}

/// A failing instance after shrinking, with its reproducer files once
/// written.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub corpus: &'static str,
    pub index: u64,
    pub family: String,
    pub property: Property,
    pub detail: String,
    /// Minimized space in file format.
    pub space: Value,
    pub map: SelfMap,
    pub files: Vec<String>,
}

impl Violation {
    /// Writes `<stem>-space.json` and `<stem>-map.json` into `dir`.
    pub fn write_reproducer(&mut self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let stem = format!("{}-{}-{}", self.property.slug(), self.corpus, self.index);
        let space_path = dir.join(format!("{stem}-space.json"));
        let map_path = dir.join(format!("{stem}-map.json"));
        fs::write(&space_path, format!("{}\n", self.space))?;
        fs::write(&map_path, format!("{}\n", map_to_json(&self.map)))?;
        self.files = [space_path, map_path].iter().map(|p| p.display().to_string()).collect();
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: u64,
    pub exact_trials: u64,
    pub float: Tally,
    pub exact: Tally,
    pub violations: Vec<Violation>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation_count(&self, property: Property) -> usize {
        self.violations.iter().filter(|v| v.property == property).count()
    }
}

/// Removes `p` and relabels the rest; `None` if another point maps to `p`.
fn remove_point<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap, p: usize) -> Option<(FiniteMetricSpace<S>, SelfMap)> {
    let n = space.len();
    if (0..n).any(|i| i != p && f.apply(i) == p) {
        return None;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let new_index = |i: usize| keep.iter().position(|&k| k == i).expect("kept point");
    let rows = keep.iter().map(|&i| keep.iter().map(|&j| space.dist(i, j).clone()).collect()).collect();
    let labels = space.labels().map(|l| keep.iter().map(|&i| l[i].clone()).collect());
    let sub = FiniteMetricSpace::from_rows(rows, DEFAULT_TRIANGLE_TOL).ok()?.with_labels(labels).ok()?;
    let map = SelfMap::new(keep.iter().map(|&i| new_index(f.apply(i))).collect()).ok()?;
    Some((sub, map))
}

/// Greedily drops points outside the image of the others while
/// `property` still fails, keeping at least three points.
pub fn minimize<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    property: Property,
) -> (FiniteMetricSpace<S>, SelfMap) {
    let mut cur = (space.clone(), f.clone());
    'outer: while cur.0.len() > 3 {
        for p in 0..cur.0.len() {
            if let Some(smaller) = remove_point(&cur.0, &cur.1, p) {
                if check_instance(&smaller.0, &smaller.1).findings.iter().any(|x| x.property == property) {
                    cur = smaller;
                    continue 'outer;
                }
            }
        }
        break;
    }
    cur
}

fn record<S: Scalar, F: fmt::Debug>(corpus: &'static str, inst: &Instance<S, F>, finding: Finding) -> Violation {
    let (space, map) = minimize(&inst.space, &inst.map, finding.property);
    Violation {
        corpus,
        index: inst.index,
        family: format!("{:?}", inst.family),
        property: finding.property,
        detail: finding.detail,
        space: space_to_json(&space),
        map,
        files: Vec::new(),
    }
}

fn run_corpus<S: Scalar, F: fmt::Debug + Send>(
    name: &'static str,
    count: u64,
    make: impl Fn(u64) -> Instance<S, F> + Sync,
) -> (Tally, Vec<Violation>) {
    let outcomes: Vec<(Outcome, u64)> = parallel::install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let inst = make(i);
                (check_instance(&inst.space, &inst.map), i)
            })
            .collect()
    });
    let mut tally = Tally::default();
    let mut violations = Vec::new();
    for (o, i) in outcomes {
        tally.add(&o.tally);
        if !o.findings.is_empty() {
            let inst = make(i);
            violations.extend(o.findings.into_iter().map(|f| record(name, &inst, f)));
        }
    }
    (tally, violations)
}

/// Runs `trials` float instances and `exact_trials` exact instances of the
/// corpus seeded by `seed`. The result does not depend on thread count.
pub fn run_suite(seed: u64, trials: u64, exact_trials: u64) -> SuiteSummary {
    let (float, mut violations) = run_corpus("float", trials, |i| corpus::instance(seed, i));
    let (exact, v) = run_corpus("exact", exact_trials, |i| corpus::exact_instance(seed, i));
    violations.extend(v);
    SuiteSummary { seed, trials, exact_trials, float, exact, violations }
}
