//! Dyadic letter weights, word and sequence lengths, the radial
//! pseudo-metric on stabilized sequences, tree neighborhoods of the
//! basepoint, and a four-point (0-hyperbolicity) checker.
//!
//! Weights are assigned recursively. The letters of the level-1 word get
//! `1/2, 1/4, ..., 1/2^s`. Once the letters of level `n` carry weights
//! `a_1..a_k`, the level-`n+1` word is cut into the maximal blocks that
//! project onto single level-`n` letters; block `t` of length `L` gets
//! `a_t/2, a_t/4, ..., a_t/2^L`, and the first letter of every block after
//! the first additionally carries over the final term of the previous
//! block. Summing telescopes: each level's length is the previous one minus
//! the last block's final term, so lengths strictly decrease and squeeze
//! the limit length of the sequence into an explicit dyadic interval.

use std::fmt;

use num_bigint::BigInt;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::graph::{InverseSystem, SubdividedVertex, VertexId};
use crate::sequence::{
    self, complete, projection_sequence, stable_initial_match, SequenceKind, WordSequence,
};
use crate::word::Word;

/// A coherent sequence with one weight per proper letter and the resulting
/// per-level lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSequence {
    weights: Vec<Vec<Dyadic>>,
    lengths: Vec<Dyadic>,
}

impl WeightedSequence {
    /// Weights of the proper letters of the level-`n` word.
    pub fn weights(&self, n: u32) -> &[Dyadic] {
        &self.weights[n as usize - 1]
    }

    /// Length of the level-`n` word (sum of its letter weights).
    pub fn length(&self, n: u32) -> &Dyadic {
        &self.lengths[n as usize - 1]
    }

    pub fn depth(&self) -> u32 {
        self.lengths.len() as u32
    }
}

/// Two-sided bound `lo <= ||seq|| < hi` on the limit length of a sequence,
/// read off its deepest weighted word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthBound {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl LengthBound {
    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }

    pub fn half_width(&self) -> Dyadic {
        self.width().halve()
    }
}

impl fmt::Display for LengthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Assigns the recursive weights to every level of a coherent sequence.
pub fn assign_weights(sys: &InverseSystem, seq: &WordSequence) -> Result<WeightedSequence> {
    if seq.kind() != SequenceKind::CoherentW {
        return Err(Error::Precondition(
            "weights are defined for coherent sequences".to_string(),
        ));
    }
    let depth = seq.depth();
    let first_len = seq.word(1).len();
    let mut weights: Vec<Vec<Dyadic>> = Vec::with_capacity(depth as usize);
    weights.push((1..=first_len as u64).map(Dyadic::half_pow).collect());
    let mut lengths = vec![Dyadic::sum(&weights[0])];

    for n in 1..depth {
        let lower = seq.word(n);
        let upper = seq.word(n + 1);
        let blocks = cut_blocks(sys, n, lower, upper)?;
        let lower_weights = &weights[n as usize - 1];
        let mut level_weights = Vec::with_capacity(upper.len());
        for (t, &block_len) in blocks.iter().enumerate() {
            let a = &lower_weights[t];
            for j in 1..=block_len as u64 {
                let mut w = a.shr(j);
                if j == 1 && t > 0 {
                    let carry = lower_weights[t - 1].shr(blocks[t - 1] as u64);
                    w = w.add(&carry);
                }
                level_weights.push(w);
            }
        }
        let length = Dyadic::sum(&level_weights);
        let residual = lower_weights
            .last()
            .expect("based words are nonempty")
            .shr(*blocks.last().unwrap() as u64);
        let expected = lengths.last().unwrap().sub(&residual);
        if length != expected {
            return Err(Error::Internal(format!(
                "weight telescoping failed at level {}: {length} != {expected}",
                n + 1
            )));
        }
        weights.push(level_weights);
        lengths.push(length);
    }
    Ok(WeightedSequence { weights, lengths })
}

/// Lengths of the maximal blocks of the upper word projecting onto single
/// letters of the lower word.
fn cut_blocks(
    sys: &InverseSystem,
    lower_level: u32,
    lower: &Word,
    upper: &Word,
) -> Result<Vec<usize>> {
    let map = sys.map_to(lower_level);
    // A letter contributes a new lower letter when its image is a vertex
    // different from the previous surviving image.
    let mut contributors: Vec<usize> = Vec::new();
    let mut previous: Option<VertexId> = None;
    for (j, &u) in upper.proper().iter().enumerate() {
        if let SubdividedVertex::Original(w) = map.image(u) {
            if previous != Some(w) {
                if contributors.len() == lower.len() || lower.proper()[contributors.len()] != w {
                    return Err(Error::Internal(format!(
                        "projection of level {} does not spell the level-{} word",
                        lower_level + 1,
                        lower_level
                    )));
                }
                contributors.push(j);
            }
            previous = Some(w);
        }
    }
    if contributors.len() != lower.len() {
        return Err(Error::Internal(format!(
            "projection of level {} spells {} letters, expected {}",
            lower_level + 1,
            contributors.len(),
            lower.len()
        )));
    }
    let m = upper.len();
    let mut blocks = Vec::with_capacity(contributors.len());
    for (t, &start) in contributors.iter().enumerate() {
        let end = contributors.get(t + 1).copied().unwrap_or(m);
        blocks.push(end - start);
    }
    Ok(blocks)
}

/// Interval `lo <= ||seq|| < hi`: the deepest word length bounds the limit
/// from above, and dropping its last two letter weights bounds it from
/// below (for a single-letter word the lower bound is 0).
pub fn sequence_length(sys: &InverseSystem, seq: &WordSequence) -> Result<LengthBound> {
    let weighted = assign_weights(sys, seq)?;
    Ok(length_bound_of(&weighted))
}

fn length_bound_of(weighted: &WeightedSequence) -> LengthBound {
    let depth = weighted.depth();
    let hi = weighted.length(depth).clone();
    let top = weighted.weights(depth);
    let lo = if top.len() >= 2 {
        hi.sub(&top[top.len() - 1]).sub(&top[top.len() - 2])
    } else {
        Dyadic::zero()
    };
    LengthBound { lo, hi }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    /// The sequences are end-equivalent; the true distance is 0.
    Equal,
    /// The interval excludes 0; the sequences name different points.
    Distinct,
    /// The interval contains 0 but equivalence is not established at this
    /// depth.
    Undecided,
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Separation::Equal => "equal",
            Separation::Distinct => "distinct",
            Separation::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoResult {
    /// Exact dyadic interval `[lo, hi)` containing the distance.
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub verdict: Separation,
    /// Depth at which the completed sequences were compared.
    pub depth: u32,
}

impl RhoResult {
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive()
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }

    pub fn half_width(&self) -> Dyadic {
        self.hi.sub(&self.lo).halve()
    }
}

/// Radial distance between two stabilized sequences:
/// `||a|| + ||b|| - 2 ||a meet b||`, all three lengths taken on the
/// completed sequences and combined by exact interval arithmetic.
///
/// With `completed = false` the inputs are stabilized sequences and are
/// completed here first (losing two levels); with `completed = true` they
/// are taken as already completed.
pub fn rho(
    sys: &InverseSystem,
    a: &WordSequence,
    b: &WordSequence,
    completed: bool,
) -> Result<RhoResult> {
    if a.depth() != b.depth() {
        return Err(Error::Precondition(format!(
            "sequences have different depths {} and {}",
            a.depth(),
            b.depth()
        )));
    }
    let verdict_equal = a.words() == b.words() || sequence::formally_equivalent(sys, a, b)?;
    let (ca, cb) = if completed {
        (a.clone(), b.clone())
    } else {
        if !sequence::is_stabilized(sys, a)? || !sequence::is_stabilized(sys, b)? {
            return Err(Error::Precondition(
                "rho expects stabilized sequences (or already completed ones)".to_string(),
            ));
        }
        (complete(sys, a)?.0, complete(sys, b)?.0)
    };
    let result = rho_completed(sys, &ca, &cb)?;
    let verdict = if verdict_equal {
        Separation::Equal
    } else if result.lo.is_positive() {
        Separation::Distinct
    } else {
        Separation::Undecided
    };
    Ok(RhoResult { verdict, ..result })
}

fn rho_completed(sys: &InverseSystem, ca: &WordSequence, cb: &WordSequence) -> Result<RhoResult> {
    let meet = stable_initial_match(sys, ca, cb)?;
    let la = sequence_length(sys, ca)?;
    let lb = sequence_length(sys, cb)?;
    let lm = sequence_length(sys, &meet)?;
    let lo = la.lo.add(&lb.lo).sub(&lm.hi.double());
    let hi = la.hi.add(&lb.hi).sub(&lm.lo.double());
    Ok(RhoResult {
        lo,
        hi,
        verdict: Separation::Undecided,
        depth: ca.depth(),
    })
}

/// One node of a tree neighborhood: a reduced based plain word together
/// with the length of its own level in its projection sequence (its radial
/// coordinate).
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub word: Word,
    pub radial: Dyadic,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct TreeBall {
    pub level: u32,
    pub nodes: Vec<TreeNode>,
    /// Set when the node budget cut the enumeration short.
    pub budget_exhausted: bool,
}

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Breadth-first enumeration of reduced based plain words at one level,
/// rooted at the basepoint word, each node joined to its one-letter
/// extensions. Nodes whose radial coordinate exceeds `max_len` are pruned;
/// the enumeration also stops once `budget` nodes exist.
pub fn tree_ball(
    sys: &InverseSystem,
    n: u32,
    max_len: Option<&Dyadic>,
    budget: usize,
) -> Result<TreeBall> {
    let level = sys.try_level(n)?;
    if budget == 0 {
        return Err(Error::Precondition(
            "node budget must be positive".to_string(),
        ));
    }
    let root = Word::plain(n, vec![level.basepoint()]);
    let root_radial = radial_coordinate(sys, &root)?;
    let mut nodes = Vec::new();
    let mut budget_exhausted = false;
    if max_len.is_none_or(|cap| root_radial <= *cap) {
        nodes.push(TreeNode {
            word: root,
            radial: root_radial,
            parent: None,
        });
    }
    let mut cursor = 0;
    while cursor < nodes.len() {
        let (word, parent_radial) = {
            let node = &nodes[cursor];
            (node.word.clone(), node.radial.clone())
        };
        let letters = word.proper();
        let last = *letters.last().unwrap();
        let before_last = letters.len().checked_sub(2).map(|i| letters[i]);
        for &u in level.neighbors(last) {
            // Appending the previous letter would create a backtrack.
            if Some(u) == before_last {
                continue;
            }
            let mut extended = letters.to_vec();
            extended.push(u);
            let child = Word::plain(n, extended);
            let radial = radial_coordinate(sys, &child)?;
            if let Some(cap) = max_len {
                if radial > *cap {
                    continue;
                }
            }
            if radial < parent_radial {
                return Err(Error::Internal(format!(
                    "radial coordinate decreased along an edge at level {n}"
                )));
            }
            if nodes.len() >= budget {
                budget_exhausted = true;
                break;
            }
            nodes.push(TreeNode {
                word: child,
                radial,
                parent: Some(cursor),
            });
        }
        if budget_exhausted {
            break;
        }
        cursor += 1;
    }
    Ok(TreeBall {
        level: n,
        nodes,
        budget_exhausted,
    })
}

/// Radial coordinate of a based plain word: project it down to level 1,
/// weight the resulting sequence, and take the length at the word's own
/// level.
pub fn radial_coordinate(sys: &InverseSystem, word: &Word) -> Result<Dyadic> {
    let seq = projection_sequence(sys, word)?;
    let weighted = assign_weights(sys, &seq)?;
    Ok(weighted.length(word.level()).clone())
}

impl TreeBall {
    /// DOT rendering; node labels carry the word and its exact radial
    /// coordinate.
    pub fn to_dot(&self, sys: &InverseSystem) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "graph tree_level_{} {{", self.level);
        let _ = writeln!(out, "  node [shape=box fontname=\"monospace\"];");
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\\n{}\"];",
                i,
                node.word.display(sys),
                node.radial
            );
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(parent) = node.parent {
                let _ = writeln!(out, "  n{parent} -- n{i};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone)]
pub struct FourPointReport {
    /// Largest defect of the four-point condition over all quadruples,
    /// computed from interval midpoints.
    pub max_defect: Dyadic,
    /// Interval slack accompanying the worst quadruple: the sum of the
    /// half-widths of its six pairwise distance intervals.
    pub slack_at_max: Dyadic,
    /// Whether every quadruple's defect stayed within its slack.
    pub all_within_slack: bool,
    pub quadruples: usize,
}

/// Checks the four-point condition: in a 0-hyperbolic space, among the
/// three pairings of any four points, the two largest sums of opposite
/// distances agree. The defect is measured on interval midpoints and
/// compared against the accumulated interval slack, so truncation noise is
/// distinguishable from a genuine violation.
pub fn four_point_check(
    sys: &InverseSystem,
    points: &[WordSequence],
    completed: bool,
) -> Result<FourPointReport> {
    if points.len() < 4 {
        return Err(Error::Precondition(
            "the four-point check needs at least four points".to_string(),
        ));
    }
    let completed_points: Vec<WordSequence> = if completed {
        points.to_vec()
    } else {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            if !sequence::is_stabilized(sys, p)? {
                return Err(Error::Precondition(
                    "four-point check expects stabilized sequences".to_string(),
                ));
            }
            out.push(complete(sys, p)?.0);
        }
        out
    };

    let n = completed_points.len();
    let mut mid = vec![vec![Dyadic::zero(); n]; n];
    let mut half = vec![vec![Dyadic::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rho_completed(sys, &completed_points[i], &completed_points[j])?;
            let m = d.midpoint();
            let h = d.half_width();
            mid[i][j] = m.clone();
            mid[j][i] = m;
            half[i][j] = h.clone();
            half[j][i] = h;
        }
    }

    let mut max_defect = Dyadic::zero();
    let mut slack_at_max = Dyadic::zero();
    let mut all_within = true;
    let mut quadruples = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    quadruples += 1;
                    let mut sums = [
                        mid[a][b].add(&mid[c][d]),
                        mid[a][c].add(&mid[b][d]),
                        mid[a][d].add(&mid[b][c]),
                    ];
                    sums.sort();
                    let defect = sums[2].sub(&sums[1]);
                    let slack = half[a][b]
                        .add(&half[c][d])
                        .add(&half[a][c])
                        .add(&half[b][d])
                        .add(&half[a][d])
                        .add(&half[b][c]);
                    if defect > slack {
                        all_within = false;
                    }
                    if defect > max_defect || quadruples == 1 {
                        max_defect = defect;
                        slack_at_max = slack;
                    }
                }
            }
        }
    }
    Ok(FourPointReport {
        max_defect,
        slack_at_max,
        all_within_slack: all_within,
        quadruples,
    })
}

/// Upper weight bound `(1/2) (3/4)^(n-1)` compared exactly against a dyadic:
/// `w <= 3^(n-1) / 2^(2n-1)` by cross-multiplication.
pub fn within_upper_weight_bound(weight: &Dyadic, n: u32) -> bool {
    if weight.is_negative() || weight.is_zero() {
        return true;
    }
    let mut pow3 = BigInt::from(1);
    for _ in 1..n {
        pow3 *= 3;
    }
    let lhs = weight.numerator() << (2 * u64::from(n) - 1);
    let rhs = pow3 << weight.exponent();
    lhs <= rhs
}
