//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; every tolerance here is exact dyadic or exact rational
//! arithmetic, and every randomized check runs under a fixed seed.

use gencayley_core::dyadic::Dyadic;
use gencayley_core::graph::InverseSystem;
use gencayley_core::group::{self, default_window};
use gencayley_core::metric::{self, four_point_check, rho};
use gencayley_core::sample::{self, Rng};
use gencayley_core::sequence::{
    complete, formally_equivalent, projection_sequence, reduce_sequence, stabilize, WordSequence,
};
use gencayley_core::suites::{self, SuiteOutcome};
use gencayley_core::word::{self, Word};
use gencayley_core::{spaces, Result};

const SEED: u64 = 0x5eed;

fn report(number: u32, description: &str, outcome: std::result::Result<(), String>) {
    match outcome {
        Ok(()) => println!("criterion {number}: PASS - {description}"),
        Err(detail) => {
            println!("criterion {number}: FAIL - {description}: {detail}");
            panic!("criterion {number} failed: {detail}");
        }
    }
}

fn fixtures(depth: u32) -> Vec<InverseSystem> {
    vec![
        spaces::interval(depth, 2).unwrap(),
        spaces::hawaiian(depth).unwrap(),
        spaces::ladder(depth).unwrap(),
        spaces::figure2_fixture().unwrap(),
    ]
}

fn suite_outcomes_to_result(
    outcomes: Vec<(String, SuiteOutcome)>,
) -> std::result::Result<(), String> {
    for (system, outcome) in outcomes {
        if !outcome.passed() {
            return Err(format!(
                "{system}/{}: {}",
                outcome.name,
                outcome.failures.join("; ")
            ));
        }
    }
    Ok(())
}

fn interval_pair(
    sys: &InverseSystem,
    endpoint: u64,
    short_form: bool,
) -> Result<(WordSequence, WordSequence)> {
    let depth = sys.depth();
    let level = sys.level(depth);
    let path = |stop: u64| -> Vec<_> {
        (0..=stop)
            .map(|i| level.vertex(&format!("v{i}")).unwrap())
            .collect()
    };
    let terminating = Word::plain(depth, path(endpoint));
    let sibling = if short_form {
        // Stops just short of the endpoint.
        Word::slashed(
            depth,
            path(endpoint - 1),
            level.vertex(&format!("v{endpoint}")).unwrap(),
        )
    } else {
        // Runs past the endpoint.
        Word::slashed(
            depth,
            path(endpoint),
            level.vertex(&format!("v{}", endpoint + 1)).unwrap(),
        )
    };
    Ok((
        projection_sequence(sys, &terminating)?,
        projection_sequence(sys, &sibling)?,
    ))
}

fn stabilized_petal(sys: &InverseSystem, petal: u32) -> WordSequence {
    let depth = sys.depth();
    let word = spaces::hawaiian_petal_loop(sys, depth, petal).unwrap();
    let reduced = reduce_sequence(sys, &projection_sequence(sys, &word).unwrap()).unwrap();
    stabilize(sys, &reduced, default_window(depth)).unwrap().0
}

#[test]
fn criterion_01_figure2_projections() {
    let outcome = (|| -> std::result::Result<(), String> {
        let sys = spaces::figure2_fixture().map_err(|e| e.to_string())?;
        let parse = |level, text| Word::parse_in(&sys, level, text).map_err(|e| e.to_string());
        let plain = parse(2, "D E G H K L N P O M J I")?;
        let projected = word::phi(&sys, &plain).map_err(|e| e.to_string())?;
        if projected != parse(1, "A B C B")? {
            return Err(format!(
                "plain projection gave `{}`",
                projected.display(&sys)
            ));
        }
        let slashed = parse(2, "D E G H K L N P O M J I G F")?;
        let projected = word::phi(&sys, &slashed).map_err(|e| e.to_string())?;
        if projected != parse(1, "A B C B / A")? {
            return Err(format!(
                "running projection gave `{}`",
                projected.display(&sys)
            ));
        }
        Ok(())
    })();
    report(1, "fig2 fixture projections, exact", outcome);
}

#[test]
fn criterion_02_reduction_confluence() {
    let mut rng = Rng::new(SEED);
    let mut outcomes = Vec::new();
    for sys in fixtures(4) {
        let outcome = suites::reduction_confluence(&sys, &mut rng, 200, 4).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    report(
        2,
        "reduction confluence and idempotence, 200 words per level per fixture",
        suite_outcomes_to_result(outcomes),
    );
}

#[test]
fn criterion_03_free_group_and_homomorphism_laws() {
    let mut rng = Rng::new(SEED + 1);
    let mut outcomes = Vec::new();
    for sys in fixtures(4) {
        let outcome = suites::level_group_laws(&sys, &mut rng, 500).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    report(
        3,
        "per-level free group laws and projection homomorphism, 500 samples per level",
        suite_outcomes_to_result(outcomes),
    );
}

#[test]
fn criterion_04_stabilize_reduce_round_trip() {
    let mut rng = Rng::new(SEED + 2);
    let mut outcomes = Vec::new();
    for sys in fixtures(5) {
        let outcome = suites::sequence_round_trip(&sys, &mut rng, 60).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    report(
        4,
        "stabilization round trip; reduced projections validate under reduced coherence",
        suite_outcomes_to_result(outcomes),
    );
}

#[test]
fn criterion_05_weight_bounds() {
    let mut rng = Rng::new(SEED + 3);
    let mut outcomes = Vec::new();
    for sys in fixtures(5) {
        let outcome = suites::weight_bounds(&sys, &mut rng, 100).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    report(
        5,
        "letter weight bounds and strictly decreasing lengths, 100 sequences per fixture",
        suite_outcomes_to_result(outcomes),
    );
}

#[test]
fn criterion_06_length_sandwich() {
    let mut rng = Rng::new(SEED + 4);
    let mut outcomes = Vec::new();
    for sys in fixtures(5) {
        let outcome = suites::length_sandwich(&sys, &mut rng, 100).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    report(
        6,
        "length bounds sandwich the limit and tighten monotonically with depth",
        suite_outcomes_to_result(outcomes),
    );
}

#[test]
fn criterion_07_distance_degeneracy() {
    let outcome = (|| -> std::result::Result<(), String> {
        let interval = spaces::interval(6, 2).map_err(|e| e.to_string())?;
        // Even endpoints keep the terminating side plain on the two deepest
        // levels, which is what makes the equivalence visible at this depth.
        let mut pairs = Vec::new();
        for p in 1..=10u64 {
            pairs.push(interval_pair(&interval, 2 * p, false).map_err(|e| e.to_string())?);
        }
        for p in 1..=10u64 {
            pairs.push(interval_pair(&interval, 2 * p, true).map_err(|e| e.to_string())?);
        }
        for (i, (a, b)) in pairs.iter().enumerate() {
            if !formally_equivalent(&interval, a, b).map_err(|e| e.to_string())? {
                return Err(format!("pair {i} is not equivalent"));
            }
            let d = rho(&interval, a, b, false).map_err(|e| e.to_string())?;
            if !d.contains_zero() {
                return Err(format!("pair {i} separated: [{}, {})", d.lo, d.hi));
            }
        }

        let hawaiian = spaces::hawaiian(8).map_err(|e| e.to_string())?;
        let mut checked = 0;
        'outer: for i in 1..=8u32 {
            for j in i + 1..=8 {
                if checked == 20 {
                    break 'outer;
                }
                let a = stabilized_petal(&hawaiian, i);
                let b = stabilized_petal(&hawaiian, j);
                let d = rho(&hawaiian, &a, &b, false).map_err(|e| e.to_string())?;
                if !d.lo.is_positive() {
                    return Err(format!(
                        "petals {i},{j} not separated: [{}, {})",
                        d.lo, d.hi
                    ));
                }
                checked += 1;
            }
        }
        if checked < 20 {
            return Err(format!("only {checked} distinct pairs checked"));
        }
        Ok(())
    })();
    report(
        7,
        "distance interval contains 0 for 20 equivalent pairs; separates 20 distinct pairs",
        outcome,
    );
}

#[test]
fn criterion_08_four_point_condition() {
    let outcome = (|| -> std::result::Result<(), String> {
        let mut rng = Rng::new(SEED + 5);
        for sys in [
            spaces::interval(8, 2).map_err(|e| e.to_string())?,
            spaces::hawaiian(8).map_err(|e| e.to_string())?,
        ] {
            let mut points = Vec::new();
            for _ in 0..10 {
                let (p, _) = sample::random_stabilized_sequence(&sys, &mut rng, 8, 14, 2)
                    .map_err(|e| e.to_string())?;
                points.push(p);
            }
            let mut subsets = 0;
            while subsets < 25 {
                let mut picks = Vec::new();
                while picks.len() < 4 {
                    let i = rng.below(points.len());
                    if !picks.contains(&i) {
                        picks.push(i);
                    }
                }
                let subset: Vec<WordSequence> = picks.iter().map(|&i| points[i].clone()).collect();
                let reportv = four_point_check(&sys, &subset, false).map_err(|e| e.to_string())?;
                if !reportv.all_within_slack {
                    return Err(format!(
                        "{}: defect {} exceeds slack {}",
                        sys.name(),
                        reportv.max_defect,
                        reportv.slack_at_max
                    ));
                }
                subsets += 1;
            }
        }
        Ok(())
    })();
    report(
        8,
        "four-point defect within interval slack on 50 random quadruples at depth 8",
        outcome,
    );
}

#[test]
fn criterion_09_ladder_completion() {
    let outcome = (|| -> std::result::Result<(), String> {
        let sys = spaces::ladder(6).map_err(|e| e.to_string())?;
        let depth = sys.depth();
        let walk = spaces::ladder_arc_walk(&sys, depth).map_err(|e| e.to_string())?;
        let spelled = word::spell_word(&sys, depth, &walk, None).map_err(|e| e.to_string())?;
        let spelled_seq = projection_sequence(&sys, &spelled).map_err(|e| e.to_string())?;
        let reduced = reduce_sequence(&sys, &spelled_seq).map_err(|e| e.to_string())?;
        let (stab, verdict) = stabilize(&sys, &reduced, 2).map_err(|e| e.to_string())?;
        if !verdict.is_stable() {
            return Err("arc sequence did not stabilize".to_string());
        }
        for n in 1..=depth {
            let top = sys.level(n).vertex("t").unwrap();
            if stab.word(n).proper().contains(&top) {
                return Err(format!(
                    "stabilized word at level {n} contains the top vertex"
                ));
            }
        }
        let (completed, trust) = complete(&sys, &stab).map_err(|e| e.to_string())?;
        for n in 1..=completed.depth() {
            let top = sys.level(n).vertex("t").unwrap();
            if !completed.word(n).proper().contains(&top) {
                return Err(format!("completed word at level {n} misses the top vertex"));
            }
        }
        for n in 1..=depth - 3 {
            if !trust.trusted_at(n) {
                return Err(format!("completion untrusted at level {n}"));
            }
        }
        let (twice, trust2) = complete(&sys, &completed).map_err(|e| e.to_string())?;
        for n in 1..=twice.depth() {
            if trust.trusted_at(n) && trust2.trusted_at(n) && twice.word(n) != completed.word(n) {
                return Err(format!("completion not idempotent at level {n}"));
            }
        }
        Ok(())
    })();
    report(
        9,
        "ladder arc: stabilization omits the limit vertex, completion restores it, idempotent",
        outcome,
    );
}

#[test]
fn criterion_10_group_laws_at_truncation() {
    let mut rng = Rng::new(SEED + 6);
    let sys = spaces::hawaiian(6).unwrap();
    let outcome = suites::group_laws(&sys, &mut rng, 100).unwrap();
    report(
        10,
        "group laws, action compatibility and freeness probe on 100 random triples",
        suite_outcomes_to_result(vec![(sys.name().to_string(), outcome)]),
    );
}

#[test]
fn criterion_11_essential_multiplicity() {
    let outcome = (|| -> std::result::Result<(), String> {
        let fig2 = spaces::figure2_fixture().map_err(|e| e.to_string())?;
        let report = group::essential_multiplicity(&fig2, 1, "C", 2).map_err(|e| e.to_string())?;
        if report.counts != vec![2] {
            return Err(format!("c_2(C) = {:?}", report.counts));
        }
        let interval = spaces::interval(5, 2).map_err(|e| e.to_string())?;
        for n in 1..5u32 {
            for v in interval.level(n).vertices() {
                let name = interval.level(n).name(v).to_string();
                let report = group::essential_multiplicity(&interval, n, &name, 5)
                    .map_err(|e| e.to_string())?;
                if report.counts.iter().any(|&c| c != 1) {
                    return Err(format!("interval c_k({name}) = {:?}", report.counts));
                }
            }
        }
        for sys in fixtures(5) {
            let outcome = suites::multiplicity_monotone(&sys).map_err(|e| e.to_string())?;
            if !outcome.passed() {
                return Err(outcome.failures.join("; "));
            }
        }
        Ok(())
    })();
    report(
        11,
        "essential multiplicities: fig2 count, interval counts, monotonicity",
        outcome,
    );
}

#[test]
fn extra_equivalent_completions_and_metric_axioms() {
    // End-equivalent sequences complete identically on trusted levels, and
    // the distance behaves like a pseudo-metric within slack.
    let interval = spaces::interval(6, 2).unwrap();
    let pairs: Vec<(WordSequence, WordSequence)> = (1..=8u64)
        .map(|p| interval_pair(&interval, 2 * p, p % 2 == 0).unwrap())
        .collect();
    let outcome = suites::equivalent_completions(&interval, &pairs).unwrap();
    assert!(outcome.passed(), "{:?}", outcome.failures);

    let mut rng = Rng::new(SEED + 9);
    for sys in [
        spaces::interval(6, 2).unwrap(),
        spaces::hawaiian(6).unwrap(),
    ] {
        let outcome = suites::metric_axioms(&sys, &mut rng, 8).unwrap();
        assert!(outcome.passed(), "{}: {:?}", sys.name(), outcome.failures);
    }
}

#[test]
fn extra_deep_batteries() {
    // The whole invariant battery at the deepest fixture scale.
    for sys in [spaces::hawaiian(8).unwrap(), spaces::ladder(8).unwrap()] {
        for outcome in suites::standard_battery(&sys, SEED + 11).unwrap() {
            assert!(
                outcome.passed(),
                "{}/{}: {:?}",
                sys.name(),
                outcome.name,
                outcome.failures
            );
        }
    }
}

#[test]
fn extra_radial_tree_checks() {
    // Not a numbered criterion, but ties the tree export to the metric: the
    // radial coordinate grows along arcs of every fixture tree.
    let mut outcomes = Vec::new();
    for sys in fixtures(4) {
        let level = sys.depth().min(3);
        let outcome = suites::tree_radial_monotone(&sys, level, 3_000).unwrap();
        outcomes.push((sys.name().to_string(), outcome));
    }
    // The interval tree at each level is a path: one child per node.
    let sys = spaces::interval(4, 2).unwrap();
    let ball = metric::tree_ball(&sys, 4, None, 1_000).unwrap();
    assert_eq!(ball.nodes.len(), sys.level(4).vertex_count());
    assert!(suite_outcomes_to_result(outcomes).is_ok());
    // Truncation by radius keeps the root only.
    let tiny = metric::tree_ball(&sys, 2, Some(&Dyadic::half_pow(2)), 1_000).unwrap();
    assert_eq!(tiny.nodes.len(), 1);
}
