//! JSON renderings of the crate's value types. Words are rendered with
//! their letter names, so every function here takes the system the value
//! belongs to. Dyadic values are rendered as their exact `p/2^e` strings,
//! never as floats.

use serde_json::{json, Value};

use crate::dyadic::Dyadic;
use crate::graph::InverseSystem;
use crate::group::{GroupElement, MultiplicityReport};
use crate::metric::{FourPointReport, LengthBound, RhoResult, TreeBall};
use crate::sequence::{CompletionReport, StabilityVerdict, WordSequence};
use crate::suites::SuiteOutcome;
use crate::word::Word;

pub fn dyadic(value: &Dyadic) -> Value {
    Value::String(value.to_string())
}

pub fn word(sys: &InverseSystem, w: &Word) -> Value {
    let level = sys.level(w.level());
    json!({
        "level": w.level(),
        "letters": w.proper().iter().map(|&v| level.name(v)).collect::<Vec<_>>(),
        "slash_tail": w.tail().map(|v| level.name(v)),
    })
}

/// A sequence renders as the array of its word objects, shallowest first.
pub fn sequence(sys: &InverseSystem, seq: &WordSequence) -> Value {
    Value::Array(seq.words().iter().map(|w| word(sys, w)).collect())
}

pub fn verdict(v: &StabilityVerdict) -> Value {
    json!({
        "window": v.window,
        "stable": v.is_stable(),
        "first_unstable": v.first_unstable,
        "constancy": v.constancy,
    })
}

pub fn completion_report(r: &CompletionReport) -> Value {
    json!({
        "source_depth": r.source_depth,
        "trusted": r.trusted,
        "ending_unstable": r.ending_unstable,
    })
}

pub fn length_bound(b: &LengthBound) -> Value {
    json!({
        "lo": b.lo.to_string(),
        "hi": b.hi.to_string(),
    })
}

pub fn rho(r: &RhoResult) -> Value {
    json!({
        "lo": r.lo.to_string(),
        "hi": r.hi.to_string(),
        "verdict": r.verdict.to_string(),
        "depth": r.depth,
    })
}

pub fn four_point(r: &FourPointReport) -> Value {
    json!({
        "max_defect": r.max_defect.to_string(),
        "slack_at_max": r.slack_at_max.to_string(),
        "all_within_slack": r.all_within_slack,
        "quadruples": r.quadruples,
    })
}

pub fn element(sys: &InverseSystem, g: &GroupElement) -> Value {
    json!({
        "sequence": sequence(sys, g.sequence()),
        "reduced": sequence(sys, g.reduced()),
        "verdict": verdict(g.verdict()),
    })
}

pub fn multiplicity(r: &MultiplicityReport) -> Value {
    json!({
        "level": r.level,
        "vertex": r.vertex,
        "counts": r.counts,
        "monotone": r.monotone,
        "plateau": r.plateau,
    })
}

pub fn tree(sys: &InverseSystem, ball: &TreeBall) -> Value {
    json!({
        "level": ball.level,
        "budget_exhausted": ball.budget_exhausted,
        "nodes": ball
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                json!({
                    "id": i,
                    "word": word(sys, &node.word),
                    "radial": node.radial.to_string(),
                    "parent": node.parent,
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn suite(outcome: &SuiteOutcome) -> Value {
    json!({
        "name": outcome.name,
        "passed": outcome.passed(),
        "checks": outcome.checks,
        "failures": outcome.failures,
    })
}
