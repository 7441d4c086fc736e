//! Goal-driven search for witnesses on small spaces.
//!
//! Exhaustive search walks every metric on a grid of rational distances and
//! every self-map of it, in a fixed order. Randomized search draws seeded
//! exact instances. Both evaluate in exact arithmetic and attach a
//! certificate of tuple inequalities to each witness, which
//! [`verify_witness`] re-checks from scratch.

use std::collections::HashSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::classify::{
    classify_all, membership_oracle, ratio, tuples, ClassificationReport, ContractionClass,
};
use crate::io::space_to_json;
use crate::metric::{
    self, enumerate_grid_spaces, gen_lattice_cloud, metric_repair, FiniteMetricSpace, MetricError,
    DEFAULT_GRID_CEILING, MAX_GRID_POINTS,
};
use crate::parallel;
use crate::scalar::{ser_scalar, Scalar};
use crate::selfmap::{all_maps, fixed_points, has_prime_period_two, SelfMap};

type Q = BigRational;

fn q(num: i64, den: i64) -> Q {
    Q::from_ratio(num, den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GoalKind {
    /// Generalized Chatterjea but not Chatterjea: `c_G < 1/3 <= 1/2 <= c_C`.
    SeparateGenCFromC,
    /// Chatterjea with constant in `[1/3, 1/2)` but not generalized
    /// Chatterjea.
    OpenProblem,
    /// Both fixed point hypotheses and exactly two fixed points.
    TwoFixedPoints,
    /// Perimeter constant in `[1/4, 1/2)`.
    PerimeterDiscrepancy,
}

impl GoalKind {
    pub const ALL: [GoalKind; 4] = [
        GoalKind::SeparateGenCFromC,
        GoalKind::OpenProblem,
        GoalKind::TwoFixedPoints,
        GoalKind::PerimeterDiscrepancy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GoalKind::SeparateGenCFromC => "SeparateGenCFromC",
            GoalKind::OpenProblem => "OpenProblem",
            GoalKind::TwoFixedPoints => "TwoFixedPoints",
            GoalKind::PerimeterDiscrepancy => "PerimeterDiscrepancy",
        }
    }

    /// The ratio claims that make up the goal.
    pub fn claims(self) -> Vec<Claim> {
        use ContractionClass as C;
        use Relation::{AtLeast, Below};
        let claim = |class, relation, num, den| Claim { class, relation, bound: q(num, den) };
        match self {
            GoalKind::SeparateGenCFromC => {
                vec![claim(C::GeneralizedChatterjea, Below, 1, 3), claim(C::Chatterjea, AtLeast, 1, 2)]
            }
            GoalKind::OpenProblem => vec![
                claim(C::Chatterjea, AtLeast, 1, 3),
                claim(C::Chatterjea, Below, 1, 2),
                claim(C::GeneralizedChatterjea, AtLeast, 1, 3),
            ],
            GoalKind::TwoFixedPoints => vec![claim(C::GeneralizedChatterjea, Below, 1, 3)],
            GoalKind::PerimeterDiscrepancy => vec![
                claim(C::PerimeterContracting, AtLeast, 1, 4),
                claim(C::PerimeterContracting, Below, 1, 2),
            ],
        }
    }
}

impl fmt::Display for GoalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GoalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        GoalKind::ALL
            .into_iter()
            .find(|g| g.name().to_lowercase() == key)
            .ok_or_else(|| {
                let names: Vec<_> = GoalKind::ALL.iter().map(|g| g.name()).collect();
                format!("unknown goal {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Instance distribution for randomized search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// Shortest-path closure of random integer matrices.
    Repaired,
    /// Lattice point clouds under L1 or L-infinity.
    Lattice,
    /// The two above on even and odd trials.
    Alternating,
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "repaired" => Ok(Generator::Repaired),
            "lattice" => Ok(Generator::Lattice),
            "alternating" => Ok(Generator::Alternating),
            _ => Err(format!("unknown generator {s:?}; expected repaired, lattice or alternating")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Strategy {
    Exhaustive {
        #[serde(serialize_with = "ser_grid")]
        grid: Vec<Q>,
    },
    Randomized { seed: u64, trials: u64, generator: Generator },
}

fn ser_grid<Z: Serializer>(grid: &[Q], s: Z) -> Result<Z::Ok, Z::Error> {
    let v: Vec<Value> = grid.iter().map(Scalar::to_json).collect();
    v.serialize(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchGoal {
    pub kind: GoalKind,
    pub n_range: RangeInclusive<usize>,
    pub strategy: Strategy,
}

impl Serialize for SearchGoal {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut s = serializer.serialize_struct("SearchGoal", 3)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("n_range", &[self.n_range.start(), self.n_range.end()])?;
        s.serialize_field("strategy", &self.strategy)?;
        s.end()
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("point range {0}..={1} is empty or starts below 3")]
    BadRange(usize, usize),
    #[error("exhaustive search supports at most {MAX_GRID_POINTS} points")]
    TooManyPoints,
    #[error(transparent)]
    Grid(#[from] MetricError),
}

/// Whether the report and map meet the goal.
pub fn goal_predicate<S: Scalar>(report: &ClassificationReport<S>, f: &SelfMap, kind: GoalKind) -> bool {
    use ContractionClass as C;
    let c = |class| report.constant(class);
    let below = |class: ContractionClass, num, den| c(class).below(&S::from_ratio(num, den));
    match kind {
        GoalKind::SeparateGenCFromC => below(C::GeneralizedChatterjea, 1, 3) && !below(C::Chatterjea, 1, 2),
        GoalKind::OpenProblem => {
            !below(C::Chatterjea, 1, 3) && below(C::Chatterjea, 1, 2) && !below(C::GeneralizedChatterjea, 1, 3)
        }
        GoalKind::TwoFixedPoints => {
            below(C::GeneralizedChatterjea, 1, 3) && !has_prime_period_two(f) && fixed_points(f).len() == 2
        }
        GoalKind::PerimeterDiscrepancy => {
            !below(C::PerimeterContracting, 1, 4) && below(C::PerimeterContracting, 1, 2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `LHS / RHS < bound` under the ratio convention.
    Below,
    /// `LHS / RHS >= bound`; a positive LHS over zero RHS qualifies.
    AtLeast,
}

/// A statement about one class constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub class: ContractionClass,
    pub relation: Relation,
    #[serde(serialize_with = "ser_scalar")]
    pub bound: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum CertificateLine {
    /// One tuple inequality. A `Below` claim needs a line for every tuple
    /// of its class, an `AtLeast` claim needs one.
    Ratio {
        class: ContractionClass,
        tuple: Vec<usize>,
        #[serde(serialize_with = "ser_scalar")]
        lhs: Q,
        #[serde(serialize_with = "ser_scalar")]
        rhs: Q,
        relation: Relation,
        #[serde(serialize_with = "ser_scalar")]
        bound: Q,
    },
    FixedPoints { points: Vec<usize> },
    NoPrimePeriodTwo,
}

fn relation_holds(lhs: &Q, rhs: &Q, relation: Relation, bound: &Q) -> bool {
    let r = ratio(lhs, rhs);
    match relation {
        Relation::Below => r.below(bound),
        Relation::AtLeast => !r.below(bound),
    }
}

/// Certificate lines for `kind`, assuming the predicate holds.
pub fn certificate(space: &FiniteMetricSpace<Q>, f: &SelfMap, report: &ClassificationReport<Q>, kind: GoalKind) -> Vec<CertificateLine> {
    let mut lines = Vec::new();
    for claim in kind.claims() {
        let all = tuples(space.len(), claim.class.arity());
        let chosen = match claim.relation {
            Relation::Below => all,
            Relation::AtLeast => vec![report.get(claim.class).argmax.clone()],
        };
        for tuple in chosen {
            let (lhs, rhs) = claim.class.terms(space, f, &tuple);
            lines.push(CertificateLine::Ratio {
                class: claim.class,
                tuple,
                lhs,
                rhs,
                relation: claim.relation,
                bound: claim.bound.clone(),
            });
        }
    }
    if kind == GoalKind::TwoFixedPoints {
        lines.push(CertificateLine::FixedPoints { points: fixed_points(f) });
        lines.push(CertificateLine::NoPrimePeriodTwo);
    }
    lines
}

/// Re-checks every certificate line against the space and map, and that
/// the lines cover every claim of `kind`.
pub fn verify_certificate(space: &FiniteMetricSpace<Q>, f: &SelfMap, kind: GoalKind, lines: &[CertificateLine]) -> bool {
    for line in lines {
        let ok = match line {
            CertificateLine::Ratio { class, tuple, lhs, rhs, relation, bound } => {
                let distinct = tuple.iter().enumerate().all(|(a, x)| !tuple[..a].contains(x));
                tuple.len() == class.arity()
                    && distinct
                    && tuple.iter().all(|&i| i < space.len())
                    && class.terms(space, f, tuple) == (lhs.clone(), rhs.clone())
                    && relation_holds(lhs, rhs, *relation, bound)
            }
            CertificateLine::FixedPoints { points } => {
                *points == (0..f.len()).filter(|&i| f.apply(i) == i).collect::<Vec<_>>()
            }
            CertificateLine::NoPrimePeriodTwo => (0..f.len()).all(|i| f.apply(f.apply(i)) != i || f.apply(i) == i),
        };
        if !ok {
            return false;
        }
    }
    let covered = |claim: &Claim| {
        let matching: Vec<&Vec<usize>> = lines
            .iter()
            .filter_map(|l| match l {
                CertificateLine::Ratio { class, tuple, relation, bound, .. }
                    if *class == claim.class && *relation == claim.relation && *bound == claim.bound =>
                {
                    Some(tuple)
                }
                _ => None,
            })
            .collect();
        match claim.relation {
            Relation::AtLeast => !matching.is_empty(),
            Relation::Below => {
                let mut seen: Vec<Vec<usize>> = matching
                    .iter()
                    .map(|t| {
                        let mut t = (*t).clone();
                        t.sort_unstable();
                        t
                    })
                    .collect();
                seen.sort();
                seen.dedup();
                seen == tuples(space.len(), claim.class.arity())
            }
        }
    };
    let extra_ok = match kind {
        GoalKind::TwoFixedPoints => {
            lines.iter().any(|l| matches!(l, CertificateLine::FixedPoints { points } if points.len() == 2))
                && lines.iter().any(|l| matches!(l, CertificateLine::NoPrimePeriodTwo))
        }
        _ => true,
    };
    kind.claims().iter().all(covered) && extra_ok
}

/// A certified instance meeting a goal.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRecord {
    pub goal: GoalKind,
    pub space: FiniteMetricSpace<Q>,
    pub map: SelfMap,
    pub report: ClassificationReport<Q>,
    pub certificate: Vec<CertificateLine>,
    /// Position in the search stream.
    pub instance: u64,
}

impl Serialize for WitnessRecord {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut s = serializer.serialize_struct("WitnessRecord", 6)?;
        s.serialize_field("goal", &self.goal)?;
        s.serialize_field("instance", &self.instance)?;
        s.serialize_field("space", &space_to_json(&self.space))?;
        s.serialize_field("map", &self.map)?;
        s.serialize_field("report", &self.report)?;
        s.serialize_field("certificate", &self.certificate)?;
        s.end()
    }
}

/// Full re-check of a witness: the stored report is reproduced, the goal
/// holds, and the certificate verifies. Open-problem witnesses are also
/// cross-checked with the membership oracle in both directions.
pub fn verify_witness(w: &WitnessRecord) -> bool {
    use ContractionClass as C;
    let Ok(report) = classify_all(&w.space, &w.map) else { return false };
    if report != w.report || !goal_predicate(&report, &w.map, w.goal) {
        return false;
    }
    if !verify_certificate(&w.space, &w.map, w.goal, &w.certificate) {
        return false;
    }
    if w.goal == GoalKind::OpenProblem {
        let Some(c_c) = report.constant(C::Chatterjea).finite() else { return false };
        let accepts = membership_oracle(&w.space, &w.map, C::Chatterjea, c_c).unwrap_or(false);
        let rejects_all = (0..20).all(|j| {
            !membership_oracle(&w.space, &w.map, C::GeneralizedChatterjea, &q(j, 60)).unwrap_or(true)
        });
        return accepts && rejects_all;
    }
    true
}

/// Lexicographically least `(map images, distance matrix)` over all
/// simultaneous relabelings, after scaling the least distance to 1. The
/// sorted distance multiset leads the key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DedupeKey {
    pub multiset: Vec<Q>,
    pub map: Vec<usize>,
    pub matrix: Vec<Q>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

pub fn dedupe_key(space: &FiniteMetricSpace<Q>, f: &SelfMap) -> DedupeKey {
    let space = space.normalized();
    let n = space.len();
    let (map, matrix) = permutations(n)
        .into_iter()
        .map(|perm| {
            let g = f.permuted(&perm);
            let s = space.permuted(&perm);
            let matrix: Vec<Q> = s.rows().into_iter().flatten().collect();
            (g.images().to_vec(), matrix)
        })
        .min()
        .expect("at least one permutation");
    DedupeKey { multiset: space.distance_multiset(), map, matrix }
}

/// Keeps the first record of each relabeling-and-scaling class.
pub fn dedupe(witnesses: Vec<WitnessRecord>) -> Vec<WitnessRecord> {
    let mut seen = HashSet::new();
    witnesses.into_iter().filter(|w| seen.insert(dedupe_key(&w.space, &w.map))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub goal: SearchGoal,
    pub budget: u64,
    pub spaces_scanned: u64,
    pub instances_scanned: u64,
    pub witnesses_found: u64,
    /// Witness count after [`dedupe`], when requested.
    pub distinct_witnesses: Option<u64>,
    /// Exhaustive search visited every instance of the slice.
    pub exhaustive_complete: bool,
    /// Completed exhaustive slice with no witness.
    pub certified_witness_free: bool,
    /// Why the search stopped early, if it did.
    pub incomplete_reason: Option<String>,
}

/// How many spaces' worth of instances are evaluated per parallel batch.
const BATCH_INSTANCES: usize = 4096;

fn evaluate(kind: GoalKind, space: &FiniteMetricSpace<Q>, f: &SelfMap, instance: u64) -> Option<WitnessRecord> {
    let report = classify_all(space, f).ok()?;
    if !goal_predicate(&report, f, kind) {
        return None;
    }
    let certificate = certificate(space, f, &report, kind);
    Some(WitnessRecord { goal: kind, space: space.clone(), map: f.clone(), report, certificate, instance })
}

/// Randomized instance `trial`: a seeded exact space and a random map.
pub fn random_instance(seed: u64, trial: u64, n_range: &RangeInclusive<usize>, generator: Generator) -> (FiniteMetricSpace<Q>, SelfMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = rng.gen_range(n_range.clone());
    let repaired = match generator {
        Generator::Repaired => true,
        Generator::Lattice => false,
        Generator::Alternating => trial.is_multiple_of(2),
    };
    let space = if repaired {
        let raw = metric::random_integer_matrix(n, 8, rng.gen());
        metric_repair(raw).expect("positive symmetric input")
    } else {
        let k = rng.gen_range(1..=3);
        gen_lattice_cloud(k, n, if k == 1 { 16 } else { 5 }, rng.gen_bool(0.5), rng.gen())
    };
    let map = SelfMap::new((0..n).map(|_| rng.gen_range(0..n)).collect()).expect("in range");
    (space, map)
}

/// Runs the search, handing each witness to `emit` in stream order, and
/// returns the summary. Output is independent of the worker count.
pub fn run_search(
    goal: &SearchGoal,
    budget: u64,
    dedupe_witnesses: bool,
    mut emit: impl FnMut(&WitnessRecord),
) -> Result<SearchSummary, SearchError> {
    if budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let (lo, hi) = (*goal.n_range.start(), *goal.n_range.end());
    if lo < 3 || lo > hi {
        return Err(SearchError::BadRange(lo, hi));
    }
    let mut summary = SearchSummary {
        goal: goal.clone(),
        budget,
        spaces_scanned: 0,
        instances_scanned: 0,
        witnesses_found: 0,
        distinct_witnesses: None,
        exhaustive_complete: false,
        certified_witness_free: false,
        incomplete_reason: None,
    };
    let mut seen = HashSet::new();
    let mut distinct = 0u64;
    let mut handle = |w: WitnessRecord, summary: &mut SearchSummary| {
        summary.witnesses_found += 1;
        if dedupe_witnesses {
            if !seen.insert(dedupe_key(&w.space, &w.map)) {
                return;
            }
            distinct += 1;
        }
        emit(&w);
    };

    match &goal.strategy {
        Strategy::Exhaustive { grid } => {
            if hi > MAX_GRID_POINTS {
                return Err(SearchError::TooManyPoints);
            }
            // Validate every slice up front so a bad grid fails before output.
            for n in lo..=hi {
                enumerate_grid_spaces(n, grid, DEFAULT_GRID_CEILING)?;
            }
            'slices: for n in lo..=hi {
                let maps: Vec<SelfMap> = all_maps(n).collect();
                let mut spaces = enumerate_grid_spaces(n, grid, DEFAULT_GRID_CEILING)?.peekable();
                while spaces.peek().is_some() {
                    let remaining = budget - summary.instances_scanned;
                    if remaining == 0 {
                        summary.incomplete_reason =
                            Some(format!("budget of {budget} instances exhausted at n = {n}"));
                        break 'slices;
                    }
                    let per_batch = (BATCH_INSTANCES / maps.len()).max(1);
                    let batch: Vec<FiniteMetricSpace<Q>> = spaces.by_ref().take(per_batch).collect();
                    let jobs: Vec<(usize, usize)> = (0..batch.len())
                        .flat_map(|s| (0..maps.len()).map(move |m| (s, m)))
                        .take(remaining.min(usize::MAX as u64) as usize)
                        .collect();
                    let first = summary.instances_scanned;
                    let found: Vec<Option<WitnessRecord>> = parallel::install(|| {
                        jobs.par_iter()
                            .enumerate()
                            .map(|(k, &(s, m))| evaluate(goal.kind, &batch[s], &maps[m], first + k as u64))
                            .collect()
                    });
                    summary.instances_scanned += jobs.len() as u64;
                    summary.spaces_scanned += jobs.last().map_or(0, |&(s, m)| {
                        if m + 1 == maps.len() { s as u64 + 1 } else { s as u64 }
                    });
                    for w in found.into_iter().flatten() {
                        handle(w, &mut summary);
                    }
                    if jobs.len() < batch.len() * maps.len() {
                        summary.incomplete_reason =
                            Some(format!("budget of {budget} instances exhausted at n = {n}"));
                        break 'slices;
                    }
                }
            }
            summary.exhaustive_complete = summary.incomplete_reason.is_none();
            summary.certified_witness_free = summary.exhaustive_complete && summary.witnesses_found == 0;
        }
        Strategy::Randomized { seed, trials, generator } => {
            let count = (*trials).min(budget);
            let found: Vec<Option<WitnessRecord>> = parallel::install(|| {
                (0..count)
                    .into_par_iter()
                    .map(|t| {
                        let (space, f) = random_instance(*seed, t, &goal.n_range, *generator);
                        evaluate(goal.kind, &space, &f, t)
                    })
                    .collect()
            });
            summary.instances_scanned = count;
            summary.spaces_scanned = count;
            if count < *trials {
                summary.incomplete_reason = Some(format!("budget of {budget} instances below {trials} trials"));
            }
            for w in found.into_iter().flatten() {
                handle(w, &mut summary);
            }
        }
    }
    if dedupe_witnesses {
        summary.distinct_witnesses = Some(distinct);
    }
    Ok(summary)
}

/// Every witness `goal` yields within `budget`, without dedupe.
pub fn collect_witnesses(goal: &SearchGoal, budget: u64) -> Result<(Vec<WitnessRecord>, SearchSummary), SearchError> {
    let mut out = Vec::new();
    let summary = run_search(goal, budget, false, |w| out.push(w.clone()))?;
    Ok((out, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[[i64; 3]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    fn example() -> (FiniteMetricSpace<Q>, SelfMap) {
        let s = FiniteMetricSpace::from_rows(int_rows(&[[0, 1, 4], [1, 0, 4], [4, 4, 0]]), 0.0).unwrap();
        (s, SelfMap::new(vec![0, 1, 1]).unwrap())
    }

    fn exhaustive(kind: GoalKind, grid: &[i64]) -> SearchGoal {
        SearchGoal {
            kind,
            n_range: 3..=3,
            strategy: Strategy::Exhaustive { grid: grid.iter().map(|&v| q(v, 1)).collect() },
        }
    }

    #[test]
    fn predicates_on_example_and_constant_map() {
        let (s, f) = example();
        let r = classify_all(&s, &f).unwrap();
        assert!(goal_predicate(&r, &f, GoalKind::SeparateGenCFromC));
        assert!(goal_predicate(&r, &f, GoalKind::TwoFixedPoints));
        assert!(!goal_predicate(&r, &f, GoalKind::OpenProblem));
        let c = SelfMap::constant(3, 0);
        let rc = classify_all(&s, &c).unwrap();
        for kind in GoalKind::ALL {
            assert!(!goal_predicate(&rc, &c, kind), "{kind}");
        }
    }

    #[test]
    fn certificates_verify_and_detect_tampering() {
        let (s, f) = example();
        let r = classify_all(&s, &f).unwrap();
        for kind in [GoalKind::SeparateGenCFromC, GoalKind::TwoFixedPoints] {
            let lines = certificate(&s, &f, &r, kind);
            assert!(verify_certificate(&s, &f, kind, &lines));
            // Dropping a line or changing a stored value breaks it.
            assert!(!verify_certificate(&s, &f, kind, &lines[1..]));
            let mut bad = lines.clone();
            if let CertificateLine::Ratio { lhs, .. } = &mut bad[0] {
                *lhs = lhs.clone() + q(1, 1);
            }
            assert!(!verify_certificate(&s, &f, kind, &bad));
        }
    }

    #[test]
    fn example_relabelings_share_one_key() {
        let (s, f) = example();
        let key = dedupe_key(&s, &f);
        let witnesses: Vec<WitnessRecord> = permutations(3)
            .into_iter()
            .map(|p| {
                let (s, f) = (s.permuted(&p), f.permuted(&p));
                assert_eq!(dedupe_key(&s, &f), key);
                evaluate(GoalKind::SeparateGenCFromC, &s, &f, 0).unwrap()
            })
            .collect();
        assert_eq!(witnesses.len(), 6);
        assert_eq!(dedupe(witnesses).len(), 1);
        // Scaling does not change the key.
        let scaled = FiniteMetricSpace::from_rows(int_rows(&[[0, 2, 8], [2, 0, 8], [8, 8, 0]]), 0.0).unwrap();
        assert_eq!(dedupe_key(&scaled, &f), key);
        let other = FiniteMetricSpace::from_rows(int_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]), 0.0).unwrap();
        assert_ne!(dedupe_key(&other, &f), key);
    }

    #[test]
    fn exhaustive_slice_contains_example() {
        let (s, f) = example();
        let key = dedupe_key(&s, &f);
        let (ws, summary) = collect_witnesses(&exhaustive(GoalKind::SeparateGenCFromC, &[1, 4]), 1_000_000).unwrap();
        assert!(summary.exhaustive_complete);
        assert_eq!(summary.instances_scanned, 5 * 27);
        assert!(ws.iter().all(verify_witness));
        assert!(ws.iter().any(|w| dedupe_key(&w.space, &w.map) == key));
    }

    #[test]
    fn equilateral_slice_has_no_open_problem_witness() {
        let (ws, summary) = collect_witnesses(&exhaustive(GoalKind::OpenProblem, &[1]), 1000).unwrap();
        assert!(ws.is_empty());
        assert!(summary.certified_witness_free);
        assert_eq!(summary.instances_scanned, 27);
    }

    #[test]
    fn budget_stops_early() {
        let (_, summary) = collect_witnesses(&exhaustive(GoalKind::TwoFixedPoints, &[1, 4]), 40).unwrap();
        assert_eq!(summary.instances_scanned, 40);
        assert!(!summary.exhaustive_complete);
        assert!(!summary.certified_witness_free);
        assert!(summary.incomplete_reason.is_some());
    }

    #[test]
    fn randomized_is_deterministic() {
        let goal = SearchGoal {
            kind: GoalKind::PerimeterDiscrepancy,
            n_range: 3..=5,
            strategy: Strategy::Randomized { seed: 9, trials: 400, generator: Generator::Alternating },
        };
        let (a, sa) = collect_witnesses(&goal, 10_000).unwrap();
        let (b, sb) = collect_witnesses(&goal, 10_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&sa).unwrap(), serde_json::to_string(&sb).unwrap());
        assert!(a.iter().all(verify_witness));
    }

    #[test]
    fn goal_names_parse() {
        assert_eq!("open-problem".parse::<GoalKind>().unwrap(), GoalKind::OpenProblem);
        assert_eq!("TwoFixedPoints".parse::<GoalKind>().unwrap(), GoalKind::TwoFixedPoints);
        assert!("nope".parse::<GoalKind>().is_err());
    }
}
