use std::collections::BTreeSet;

use contraction_lab::num_rational::{BigRational, Rational64};
use contraction_lab::search::{collect_witnesses, dedupe_key, verify_certificate, Generator};
use contraction_lab::{dedupe, run_search, verify_witness, FiniteMetricSpace, GoalKind, SearchGoal, SelfMap, Strategy};

fn grid(values: &[i64]) -> Vec<BigRational> {
    values.iter().map(|&v| BigRational::from_integer(v.into())).collect()
}

fn exhaustive(kind: GoalKind, n: usize, values: &[i64]) -> SearchGoal {
    SearchGoal { kind, n_range: n..=n, strategy: Strategy::Exhaustive { grid: grid(values) } }
}

fn keys(ws: &[contraction_lab::WitnessRecord]) -> BTreeSet<contraction_lab::search::DedupeKey> {
    ws.iter().map(|w| dedupe_key(&w.space, &w.map)).collect()
}

/// Every constant in `[c < t]` form: each tuple has `lhs == 0` or `lhs < t * rhs`.
fn all_below(tuples: &[(i64, i64)], t: Rational64) -> bool {
    tuples.iter().all(|&(l, r)| l == 0 || Rational64::from_integer(l) < t * r)
}

/// (image distance, cross sum) over ordered pairs of distinct points.
fn chatterjea_terms(d: &[[i64; 3]; 3], f: [usize; 3]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            if x != y {
                out.push((d[f[x]][f[y]], d[x][f[y]] + d[y][f[x]]));
            }
        }
    }
    out
}

/// (image perimeter, six cross distances) for the single unordered triple.
fn generalized_terms(d: &[[i64; 3]; 3], f: [usize; 3]) -> Vec<(i64, i64)> {
    let (x, y, z) = (0, 1, 2);
    let lhs = d[f[x]][f[y]] + d[f[y]][f[z]] + d[f[x]][f[z]];
    let rhs = d[x][f[y]] + d[x][f[z]] + d[y][f[x]] + d[y][f[z]] + d[z][f[x]] + d[z][f[y]];
    vec![(lhs, rhs)]
}

/// Counts separating instances on three points straight from the definitions.
fn brute_separating_count(values: &[i64]) -> (u64, u64) {
    let (mut spaces, mut hits) = (0, 0);
    for &a in values {
        for &b in values {
            for &c in values {
                // Slots in order (0,1), (0,2), (1,2).
                if a > b + c || b > a + c || c > a + b {
                    continue;
                }
                spaces += 1;
                let d = [[0, a, b], [a, 0, c], [b, c, 0]];
                for code in 0..27 {
                    let f = [code % 3, code / 3 % 3, code / 9];
                    let gen_ok = all_below(&generalized_terms(&d, f), Rational64::new(1, 3));
                    let c_ok = all_below(&chatterjea_terms(&d, f), Rational64::new(1, 2));
                    if gen_ok && !c_ok {
                        hits += 1;
                    }
                }
            }
        }
    }
    (spaces, hits)
}

#[test]
fn exhaustive_counts_agree_with_brute_force() {
    for values in [&[1, 4][..], &[1, 2], &[1, 2, 3], &[2, 3, 5, 7]] {
        let (ws, summary) = collect_witnesses(&exhaustive(GoalKind::SeparateGenCFromC, 3, values), 1_000_000).unwrap();
        let (spaces, hits) = brute_separating_count(values);
        assert_eq!(summary.spaces_scanned, spaces, "{values:?}");
        assert_eq!(summary.instances_scanned, spaces * 27, "{values:?}");
        assert_eq!(summary.witnesses_found, hits, "{values:?}");
        assert_eq!(ws.len() as u64, hits);
        assert!(summary.exhaustive_complete);
    }
}

#[test]
fn grid_order_does_not_change_the_deduped_classes() {
    for kind in [GoalKind::SeparateGenCFromC, GoalKind::TwoFixedPoints] {
        let (a, _) = collect_witnesses(&exhaustive(kind, 3, &[1, 4]), 1_000_000).unwrap();
        let (b, _) = collect_witnesses(&exhaustive(kind, 3, &[4, 1]), 1_000_000).unwrap();
        assert_eq!(keys(&a), keys(&b), "{kind}");
        assert_eq!(keys(&dedupe(a)), keys(&dedupe(b)), "{kind}");
    }
}

#[test]
fn separating_slice_contains_the_one_four_four_instance() {
    let (ws, _) = collect_witnesses(&exhaustive(GoalKind::SeparateGenCFromC, 3, &[1, 4]), 1_000_000).unwrap();
    let target = FiniteMetricSpace::from_rows(
        vec![grid(&[0, 1, 4]), grid(&[1, 0, 4]), grid(&[4, 4, 0])],
        0.0,
    )
    .unwrap();
    let key = dedupe_key(&target, &SelfMap::new(vec![0, 1, 1]).unwrap());
    assert!(keys(&ws).contains(&key));
}

#[test]
fn every_witness_and_certificate_verifies() {
    for kind in GoalKind::ALL {
        let (ws, _) = collect_witnesses(&exhaustive(kind, 3, &[1, 2, 4]), 1_000_000).unwrap();
        for w in &ws {
            assert!(verify_witness(w), "{kind}: {:?}", w.map);
            assert!(verify_certificate(&w.space, &w.map, kind, &w.certificate));
        }
    }
}

#[test]
fn dropping_a_certificate_line_breaks_verification() {
    let (ws, _) = collect_witnesses(&exhaustive(GoalKind::SeparateGenCFromC, 3, &[1, 4]), 1_000_000).unwrap();
    let w = &ws[0];
    let mut lines = w.certificate.clone();
    lines.remove(0);
    assert!(!verify_certificate(&w.space, &w.map, GoalKind::SeparateGenCFromC, &lines));
}

#[test]
fn equilateral_slice_has_no_open_problem_witness() {
    let (ws, summary) = collect_witnesses(&exhaustive(GoalKind::OpenProblem, 3, &[1]), 1_000_000).unwrap();
    assert!(ws.is_empty());
    assert_eq!(summary.instances_scanned, 27);
    assert!(summary.exhaustive_complete && summary.certified_witness_free);
}

#[test]
fn relabeled_copies_collapse_to_one() {
    let space = FiniteMetricSpace::from_rows(vec![grid(&[0, 2, 3]), grid(&[2, 0, 4]), grid(&[3, 4, 0])], 0.0).unwrap();
    let map = SelfMap::new(vec![1, 1, 0]).unwrap();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let base = dedupe_key(&space, &map);
    for p in perms {
        let scaled = FiniteMetricSpace::from_rows(
            space.permuted(&p).rows().into_iter().map(|r| r.into_iter().map(|v| v * BigRational::from_integer(5.into())).collect()).collect(),
            0.0,
        )
        .unwrap();
        assert_eq!(dedupe_key(&scaled, &map.permuted(&p)), base, "{p:?}");
    }
    let other = SelfMap::new(vec![1, 0, 0]).unwrap();
    assert_ne!(dedupe_key(&space, &other), base);
    let stretched = FiniteMetricSpace::from_rows(vec![grid(&[0, 2, 3]), grid(&[2, 0, 5]), grid(&[3, 5, 0])], 0.0).unwrap();
    assert_ne!(dedupe_key(&stretched, &map), base);
}

#[test]
fn exhaustive_runs_are_deterministic_and_budgeted() {
    let goal = exhaustive(GoalKind::PerimeterDiscrepancy, 3, &[1, 2, 3]);
    let (a, sa) = collect_witnesses(&goal, 1_000_000).unwrap();
    let (b, sb) = collect_witnesses(&goal, 1_000_000).unwrap();
    assert_eq!(sa, sb);
    assert_eq!(a.iter().map(|w| w.instance).collect::<Vec<_>>(), b.iter().map(|w| w.instance).collect::<Vec<_>>());

    let mut seen = 0;
    let cut = run_search(&goal, 100, false, |_| seen += 1).unwrap();
    assert!(cut.instances_scanned <= 100);
    assert!(!cut.exhaustive_complete && !cut.certified_witness_free);
    assert!(cut.incomplete_reason.is_some());
    assert_eq!(seen, cut.witnesses_found);
}

#[test]
fn randomized_runs_repeat_by_seed() {
    for generator in [Generator::Repaired, Generator::Lattice, Generator::Alternating] {
        let goal = SearchGoal {
            kind: GoalKind::TwoFixedPoints,
            n_range: 3..=5,
            strategy: Strategy::Randomized { seed: 11, trials: 400, generator },
        };
        let (a, sa) = collect_witnesses(&goal, 1_000_000).unwrap();
        let (b, sb) = collect_witnesses(&goal, 1_000_000).unwrap();
        assert_eq!(sa, sb);
        assert_eq!(sa.instances_scanned, 400);
        assert!(!sa.certified_witness_free);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().all(verify_witness));
    }
}

#[test]
fn bad_goals_are_rejected() {
    assert!(run_search(&exhaustive(GoalKind::OpenProblem, 3, &[1]), 0, false, |_| {}).is_err());
    assert!(run_search(&exhaustive(GoalKind::OpenProblem, 2, &[1]), 10, false, |_| {}).is_err());
    assert!(run_search(&exhaustive(GoalKind::OpenProblem, 6, &[1]), 10, false, |_| {}).is_err());
    assert!(run_search(&exhaustive(GoalKind::OpenProblem, 3, &[0, 1]), 10, false, |_| {}).is_err());
}
