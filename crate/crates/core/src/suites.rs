//! Invariant suites: seeded, self-contained checks of the algebraic laws
//! the calculus promises. The CLI `check` command runs these; the
//! acceptance tests drive them with their own sample counts.

use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::graph::InverseSystem;
use crate::group::{self, default_window};
use crate::metric::{self, within_upper_weight_bound};
use crate::sample::{self, Rng};
use crate::sequence::{
    complete, formally_equivalent, projection_sequence, reduce_sequence, stabilize, SequenceKind,
};
use crate::word::{self, Word};

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(detail());
        } else if !ok {
            self.failures
                .push("(further failures suppressed)".to_string());
        }
    }
}

fn sample_levels(sys: &InverseSystem) -> Vec<u32> {
    (1..=sys.depth()).collect()
}

/// Serialize, reparse, compare.
pub fn system_round_trip(sys: &InverseSystem) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("system round trip");
    let reparsed = InverseSystem::parse(&sys.serialize())?;
    outcome.check(reparsed == *sys, || {
        "serialized system reparsed differently".to_string()
    });
    Ok(outcome)
}

/// An order-oblivious rewriter used as the oracle for reduction: applies
/// randomly chosen applicable rules until none applies. Intentionally
/// independent of the one-pass implementation in [`word::reduce`].
fn reduce_random_order(rng: &mut Rng, input: &Word) -> Word {
    let mut letters = input.proper().to_vec();
    let mut tail = input.tail();
    loop {
        let mut moves: Vec<usize> = Vec::new();
        for i in 0..letters.len().saturating_sub(2) {
            if letters[i] == letters[i + 2] {
                moves.push(i);
            }
        }
        let tail_move =
            matches!(tail, Some(t) if letters.len() >= 2 && letters[letters.len() - 2] == t);
        let total = moves.len() + usize::from(tail_move);
        if total == 0 {
            return match tail {
                Some(t) => Word::slashed(input.level(), letters, t),
                None => Word::plain(input.level(), letters),
            };
        }
        let pick = rng.below(total);
        if pick < moves.len() {
            let i = moves[pick];
            letters.remove(i + 1);
            letters.remove(i + 1);
        } else {
            let new_tail = letters.pop().unwrap();
            tail = Some(new_tail);
        }
    }
}

/// Reduction is confluent (any application order gives the one-pass normal
/// form) and idempotent.
pub fn reduction_confluence(
    sys: &InverseSystem,
    rng: &mut Rng,
    words_per_level: usize,
    orders_per_word: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("reduction confluence");
    for level in sample_levels(sys) {
        for _ in 0..words_per_level {
            let word = sample::random_based_word_maybe_slashed(sys, rng, level, 14);
            let normal = word::reduce(&word);
            outcome.check(word::reduce(&normal) == normal, || {
                format!("reduce not idempotent on `{}`", word.display(sys))
            });
            for _ in 0..orders_per_word {
                let shuffled = reduce_random_order(rng, &word);
                outcome.check(shuffled == normal, || {
                    format!(
                        "order-dependent normal form for `{}`: `{}` vs `{}`",
                        word.display(sys),
                        shuffled.display(sys),
                        normal.display(sys)
                    )
                });
            }
        }
    }
    Ok(outcome)
}

/// `reduce(phi(w)) = reduce(phi(reduce(w)))`, and projection preserves
/// based and returning words.
pub fn projection_compatibility(
    sys: &InverseSystem,
    rng: &mut Rng,
    samples_per_level: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("projection compatibility");
    for level in 2..=sys.depth() {
        for _ in 0..samples_per_level {
            let w = sample::random_based_word_maybe_slashed(sys, rng, level, 14);
            let left = word::reduce(&word::phi(sys, &w)?);
            let right = word::reduce(&word::phi(sys, &word::reduce(&w))?);
            outcome.check(left == right, || {
                format!(
                    "projection/reduction mismatch on `{}`: `{}` vs `{}`",
                    w.display(sys),
                    left.display(sys),
                    right.display(sys)
                )
            });
            let projected = word::phi(sys, &w)?;
            outcome.check(projected.based(sys), || {
                format!("projection of based `{}` is not based", w.display(sys))
            });

            let r = sample::random_returning_word(sys, rng, level, 10);
            let projected = word::drc(sys, &r)?;
            outcome.check(projected.returning(sys), || {
                format!(
                    "projection of returning `{}` is not returning",
                    r.display(sys)
                )
            });
            outcome.check(word::phi(sys, &r)? == projected, || {
                format!("phi and drc disagree on returning `{}`", r.display(sys))
            });
        }
    }
    Ok(outcome)
}

/// Concatenation is associative.
pub fn concat_associativity(
    sys: &InverseSystem,
    rng: &mut Rng,
    samples_per_level: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("concatenation associativity");
    for level in sample_levels(sys) {
        for _ in 0..samples_per_level {
            let a = sample::random_returning_word(sys, rng, level, 8);
            let b = sample::random_returning_word(sys, rng, level, 8);
            let c = sample::random_based_word_maybe_slashed(sys, rng, level, 8);
            let left = word::concat(sys, &word::concat(sys, &a, &b)?, &c)?;
            let right = word::concat(sys, &a, &word::concat(sys, &b, &c)?)?;
            outcome.check(left == right, || {
                format!(
                    "associativity failed at level {level}: `{}` vs `{}`",
                    left.display(sys),
                    right.display(sys)
                )
            });
        }
    }
    Ok(outcome)
}

/// Reductions of coherent sequences validate as reduced sequences, reduced
/// sequences stabilize back to their coherent forms, and stabilization
/// agrees with the original on the levels the verdict vouches for.
pub fn sequence_round_trip(
    sys: &InverseSystem,
    rng: &mut Rng,
    samples: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("stabilize/reduce round trip");
    let depth = sys.depth();
    let window = default_window(depth);
    for _ in 0..samples {
        let top = sample::random_based_word_maybe_slashed(sys, rng, depth, 12);
        let coherent = projection_sequence(sys, &top)?;
        let reduced = reduce_sequence(sys, &coherent)?;
        outcome.check(reduced.kind() == SequenceKind::ReducedR, || {
            "reduction did not produce a reduced sequence".to_string()
        });
        let returning_top = sample::random_returning_word(sys, rng, depth, 12);
        let returning_reduced = reduce_sequence(sys, &projection_sequence(sys, &returning_top)?)?;
        outcome.check(returning_reduced.returning(), || {
            "reduction of a returning sequence lost the returning property".to_string()
        });

        let (stab, verdict) = stabilize(sys, &reduced, window)?;
        let re_reduced = reduce_sequence(sys, &stab)?;
        outcome.check(re_reduced.words() == reduced.words(), || {
            "reducing a stabilization did not reproduce the reduced sequence".to_string()
        });
        for n in 1..=depth {
            if verdict.stable_at(n) {
                let again = stabilize(sys, &re_reduced, window)?.0;
                outcome.check(again.word(n) == stab.word(n), || {
                    format!("restabilization moved a stable level {n}")
                });
            }
        }
    }
    Ok(outcome)
}

/// Per-letter weight bounds: the first letter of the level-`n` word weighs
/// exactly `1/2^n`, consecutive weights drop by at most the level factor,
/// the upper bound `(1/2)(3/4)^(n-1)` holds, and lengths strictly decrease.
pub fn weight_bounds(sys: &InverseSystem, rng: &mut Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("weight bounds");
    let depth = sys.depth();
    for _ in 0..samples {
        let top = sample::random_based_word_maybe_slashed(sys, rng, depth, 12);
        let seq = projection_sequence(sys, &top)?;
        let weighted = metric::assign_weights(sys, &seq)?;
        for n in 1..=depth {
            let weights = weighted.weights(n);
            outcome.check(weights[0] == Dyadic::half_pow(u64::from(n)), || {
                format!("first letter at level {n} weighs {}", weights[0])
            });
            for i in 1..weights.len() {
                let floor = weights[i - 1].shr(u64::from(n));
                outcome.check(floor <= weights[i], || {
                    format!(
                        "lower weight bound failed at level {n} position {i}: {} < {floor}",
                        weights[i]
                    )
                });
                outcome.check(within_upper_weight_bound(&weights[i], n), || {
                    format!(
                        "upper weight bound failed at level {n} position {i}: {}",
                        weights[i]
                    )
                });
                outcome.check(weights[i].is_positive(), || {
                    format!("non-positive weight at level {n} position {i}")
                });
            }
            if n < depth {
                outcome.check(weighted.length(n + 1) < weighted.length(n), || {
                    format!("length did not decrease from level {n}")
                });
            }
        }
    }
    Ok(outcome)
}

/// `lo <= hi` with the documented gap, and deepening the truncation tightens
/// the bound from both sides.
pub fn length_sandwich(sys: &InverseSystem, rng: &mut Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("length sandwich");
    let depth = sys.depth();
    for _ in 0..samples {
        let top = sample::random_based_word_maybe_slashed(sys, rng, depth, 12);
        let seq = projection_sequence(sys, &top)?;
        let mut previous: Option<metric::LengthBound> = None;
        for m in 1..=depth {
            let truncated = seq.truncated(sys, m)?;
            let bound = metric::sequence_length(sys, &truncated)?;
            outcome.check(bound.lo <= bound.hi, || {
                format!("inverted bound {bound} at depth {m}")
            });
            let weighted = metric::assign_weights(sys, &truncated)?;
            let weights = weighted.weights(m);
            if weights.len() >= 2 {
                let gap = weights[weights.len() - 1].add(&weights[weights.len() - 2]);
                outcome.check(bound.width() == gap, || {
                    format!("bound width differs from the last two weights at depth {m}")
                });
            }
            if let Some(prev) = &previous {
                outcome.check(bound.hi <= prev.hi, || {
                    format!("upper bound grew when deepening to {m}")
                });
                outcome.check(bound.lo >= prev.lo, || {
                    format!("lower bound shrank when deepening to {m}")
                });
            }
            previous = Some(bound);
        }
    }
    Ok(outcome)
}

/// Free-group laws for single-level multiplication and the homomorphism law
/// for the reduced projection.
pub fn level_group_laws(
    sys: &InverseSystem,
    rng: &mut Rng,
    samples_per_level: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("per-level free group laws");
    for level in sample_levels(sys) {
        let unit = Word::plain(level, vec![sys.level(level).basepoint()]);
        for _ in 0..samples_per_level {
            let a = word::reduce(&sample::random_returning_word(sys, rng, level, 8));
            let b = word::reduce(&sample::random_returning_word(sys, rng, level, 8));
            let c = word::reduce(&sample::random_returning_word(sys, rng, level, 8));
            let ab_c = group::level_multiply(sys, &group::level_multiply(sys, &a, &b)?, &c)?;
            let a_bc = group::level_multiply(sys, &a, &group::level_multiply(sys, &b, &c)?)?;
            outcome.check(ab_c == a_bc, || {
                format!("associativity failed at level {level}")
            });
            outcome.check(group::level_multiply(sys, &a, &unit)? == a, || {
                format!("right identity failed at level {level}")
            });
            outcome.check(
                group::level_multiply(sys, &a, &a.reversed().unwrap())? == unit,
                || format!("inverse failed at level {level}"),
            );
            if level >= 2 {
                let project = |w: &Word| -> Result<Word> { Ok(word::reduce(&word::phi(sys, w)?)) };
                let hom_left = project(&group::level_multiply(sys, &a, &b)?)?;
                let hom_right = group::level_multiply(sys, &project(&a)?, &project(&b)?)?;
                outcome.check(hom_left == hom_right, || {
                    format!("homomorphism law failed from level {level}")
                });
            }
        }
    }
    Ok(outcome)
}

/// Group laws of the stabilized calculus, compared level-wise on the levels
/// both verdicts vouch for, plus the action compatibility and a freeness
/// probe.
pub fn group_laws(sys: &InverseSystem, rng: &mut Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("stabilized group laws");
    let depth = sys.depth();
    let window = default_window(depth);
    let e = group::identity(sys, depth)?;
    for _ in 0..samples {
        let a = sample::random_group_element(sys, rng, depth, 10, window)?;
        let b = sample::random_group_element(sys, rng, depth, 10, window)?;
        let c = sample::random_group_element(sys, rng, depth, 10, window)?;

        let a_e = group::multiply(sys, &a, &e, window)?;
        outcome.check(a_e.sequence().words() == a.sequence().words(), || {
            "right identity failed".to_string()
        });
        let a_ainv = group::multiply(sys, &a, &group::inverse(sys, &a)?, window)?;
        outcome.check(a_ainv.is_identity(), || "inverse failed".to_string());

        let ab_c = group::multiply(sys, &group::multiply(sys, &a, &b, window)?, &c, window)?;
        let a_bc = group::multiply(sys, &a, &group::multiply(sys, &b, &c, window)?, window)?;
        for n in 1..=depth {
            if ab_c.verdict().stable_at(n) && a_bc.verdict().stable_at(n) {
                outcome.check(ab_c.sequence().word(n) == a_bc.sequence().word(n), || {
                    format!("associativity differs at level {n}")
                });
            }
        }

        let (hp, hp_verdict) = group::act(sys, &b, c.sequence(), window)?;
        let (g_hp, ghp_verdict) = group::act(sys, &a, &hp, window)?;
        let (gh_p, ghp2_verdict) = group::act(
            sys,
            &group::multiply(sys, &a, &b, window)?,
            c.sequence(),
            window,
        )?;
        let _ = hp_verdict;
        for n in 1..=depth {
            if ghp_verdict.stable_at(n) && ghp2_verdict.stable_at(n) {
                outcome.check(g_hp.word(n) == gh_p.word(n), || {
                    format!("action compatibility differs at level {n}")
                });
            }
        }

        // Freeness probe: a non-identity element must move every point.
        // Vacuous when the top level is a tree and the group is trivial.
        if let Some(g) = sample::random_nontrivial_element(sys, rng, depth, 10, window)? {
            let p = sample::random_stabilized_sequence(sys, rng, depth, 10, window)?.0;
            let (moved, _) = group::act(sys, &g, &p, window)?;
            outcome.check(moved.words() != p.words(), || {
                "freeness probe found a fixed point".to_string()
            });
        }
    }
    Ok(outcome)
}

/// `b` arises from `a` by closing an open ending: the tail letter is
/// dropped, absorbed, or absorbed with a turnaround. These are the only
/// ways a completion may move an ending, and a repeated completion, run
/// from two fewer levels of data, may take them where the first run could
/// still see the ending stay open.
fn is_ending_closure(a: &Word, b: &Word) -> bool {
    let Some(tail) = a.tail() else {
        return false;
    };
    let letters = a.proper();
    if b.is_plain() && b.proper() == letters {
        return true;
    }
    let mut closed = letters.to_vec();
    closed.push(tail);
    if b.is_plain() && b.proper() == closed {
        return true;
    }
    b.is_slashed() && b.proper() == closed && b.tail() == letters.last().copied()
}

/// Completion invariants that hold on every system: completing twice agrees
/// on trusted levels up to ending closure, end-equivalent sequences
/// complete identically, and for terminating sequences completion changes
/// nothing after reduction.
pub fn completion_laws(sys: &InverseSystem, rng: &mut Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("completion laws");
    let depth = sys.depth();
    if depth < 6 {
        // Idempotence needs room: completing twice costs four levels.
        return Ok(outcome);
    }
    for _ in 0..samples {
        let top = sample::random_based_word_maybe_slashed(sys, rng, depth, 10);
        let seq = projection_sequence(sys, &top)?;
        let (completed, report) = complete(sys, &seq)?;
        let (twice, report2) = complete(sys, &completed)?;
        for n in 1..=twice.depth() {
            if report.trusted_at(n) && report2.trusted_at(n) {
                let same = twice.word(n) == completed.word(n)
                    || is_ending_closure(completed.word(n), twice.word(n));
                outcome.check(same, || format!("completion not idempotent at level {n}"));
            }
        }
        if seq.terminating_type() {
            let reduced_completed = reduce_sequence(sys, &completed)?;
            let reduced = reduce_sequence(sys, &seq)?;
            for n in 1..=completed.depth() {
                if report.trusted_at(n) {
                    outcome.check(reduced_completed.word(n) == reduced.word(n), || {
                        format!("terminating completion changed the reduction at level {n}")
                    });
                }
            }
        }
    }
    Ok(outcome)
}

/// End-equivalent sequences have identical completions on trusted levels.
pub fn equivalent_completions(
    sys: &InverseSystem,
    pairs: &[(crate::sequence::WordSequence, crate::sequence::WordSequence)],
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("equivalent completions");
    for (a, b) in pairs {
        if !formally_equivalent(sys, a, b)? {
            outcome.check(false, || "pair is not equivalent".to_string());
            continue;
        }
        let (ca, ra) = complete(sys, a)?;
        let (cb, rb) = complete(sys, b)?;
        for n in 1..=ca.depth() {
            if ra.trusted_at(n) && rb.trusted_at(n) {
                outcome.check(ca.word(n) == cb.word(n), || {
                    format!("equivalent sequences complete differently at level {n}")
                });
            }
        }
    }
    Ok(outcome)
}

/// Pseudo-metric axioms for the radial distance, on interval midpoints:
/// symmetry is exact, the triangle inequality holds within the accumulated
/// interval slack.
pub fn metric_axioms(sys: &InverseSystem, rng: &mut Rng, triples: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("pseudo-metric axioms");
    let depth = sys.depth();
    if depth < 4 {
        return Ok(outcome);
    }
    let window = default_window(depth);
    for _ in 0..triples {
        let a = sample::random_stabilized_sequence(sys, rng, depth, 10, window)?.0;
        let b = sample::random_stabilized_sequence(sys, rng, depth, 10, window)?.0;
        let c = sample::random_stabilized_sequence(sys, rng, depth, 10, window)?.0;
        let ab = metric::rho(sys, &a, &b, false)?;
        let ba = metric::rho(sys, &b, &a, false)?;
        outcome.check(ab.lo == ba.lo && ab.hi == ba.hi, || {
            "distance is not symmetric".to_string()
        });
        let ac = metric::rho(sys, &a, &c, false)?;
        let bc = metric::rho(sys, &b, &c, false)?;
        let lhs = ac.midpoint();
        let rhs = ab
            .midpoint()
            .add(&bc.midpoint())
            .add(&ab.half_width())
            .add(&bc.half_width())
            .add(&ac.half_width());
        outcome.check(lhs <= rhs, || {
            format!("triangle inequality failed beyond slack: {lhs} > {rhs}")
        });
    }
    Ok(outcome)
}

/// Multiplicity counts never decrease with depth.
pub fn multiplicity_monotone(sys: &InverseSystem) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("multiplicity monotone");
    let depth = sys.depth();
    for n in 1..depth {
        for v in sys.level(n).vertices() {
            let name = sys.level(n).name(v).to_string();
            let report = group::essential_multiplicity(sys, n, &name, depth)?;
            outcome.check(report.monotone, || {
                format!("multiplicity of `{name}` at level {n} decreased")
            });
        }
    }
    Ok(outcome)
}

/// Radial coordinates never decrease along tree edges and strictly increase
/// across three extensions.
pub fn tree_radial_monotone(
    sys: &InverseSystem,
    level: u32,
    budget: usize,
) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome::new("tree radial monotone");
    let ball = metric::tree_ball(sys, level, None, budget)?;
    for (i, node) in ball.nodes.iter().enumerate() {
        if let Some(parent) = node.parent {
            outcome.check(node.radial >= ball.nodes[parent].radial, || {
                format!("radial coordinate dropped along edge to node {i}")
            });
            let grand = ball.nodes[parent].parent;
            let great = grand.and_then(|g| ball.nodes[g].parent);
            if let Some(ancestor) = great {
                outcome.check(node.radial > ball.nodes[ancestor].radial, || {
                    format!("radial coordinate flat across three extensions at node {i}")
                });
            }
        }
    }
    Ok(outcome)
}

/// The standard battery on one system.
pub fn standard_battery(sys: &InverseSystem, seed: u64) -> Result<Vec<SuiteOutcome>> {
    let mut rng = Rng::new(seed);
    let mut outcomes = vec![
        system_round_trip(sys)?,
        reduction_confluence(sys, &mut rng, 40, 3)?,
        projection_compatibility(sys, &mut rng, 40)?,
        concat_associativity(sys, &mut rng, 40)?,
        sequence_round_trip(sys, &mut rng, 20)?,
        weight_bounds(sys, &mut rng, 20)?,
        length_sandwich(sys, &mut rng, 20)?,
        level_group_laws(sys, &mut rng, 40)?,
        group_laws(sys, &mut rng, 10)?,
        multiplicity_monotone(sys)?,
    ];
    let tree_level = sys.depth().min(3);
    outcomes.push(tree_radial_monotone(sys, tree_level, 2_000)?);
    outcomes.push(completion_laws(sys, &mut rng, 6)?);
    outcomes.push(metric_axioms(sys, &mut rng, 6)?);
    Ok(outcomes)
}
