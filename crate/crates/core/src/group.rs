//! The group of stabilized returning sequences, its action on based
//! sequences, single-level multiplication, and essential vertex
//! multiplicities.
//!
//! The binary operation is concatenate term-wise, reduce term-wise,
//! restabilize. Inverses are taken by reversing every word: reversal
//! commutes with deletion, replacement and compression, hence with the
//! projections, and it preserves reducedness of returning words; the
//! coherence of the reversed sequence is still checked at run time rather
//! than assumed.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{InverseSystem, VertexId};
use crate::sequence::{
    self, check_coherent, complete, reduce_sequence, stabilize, CompletionReport, SequenceKind,
    StabilityVerdict, WordSequence,
};
use crate::word::{self, Word};

#[derive(Debug, Clone)]
pub struct GroupElement {
    stabilized: WordSequence,
    reduced: WordSequence,
    verdict: StabilityVerdict,
}

impl GroupElement {
    /// The stabilized coherent sequence representing the element.
    pub fn sequence(&self) -> &WordSequence {
        &self.stabilized
    }

    /// The term-wise reduction of the element.
    pub fn reduced(&self) -> &WordSequence {
        &self.reduced
    }

    pub fn verdict(&self) -> &StabilityVerdict {
        &self.verdict
    }

    pub fn depth(&self) -> u32 {
        self.stabilized.depth()
    }

    pub fn is_identity(&self) -> bool {
        self.stabilized.words().iter().all(|w| w.len() == 1)
    }

    /// Wraps a returning reduced sequence by stabilizing it.
    pub fn from_reduced(
        sys: &InverseSystem,
        reduced: WordSequence,
        window: u32,
    ) -> Result<GroupElement> {
        if !reduced.returning() {
            return Err(Error::Precondition(
                "group elements are returning sequences".to_string(),
            ));
        }
        let (stabilized, verdict) = stabilize(sys, &reduced, window)?;
        Ok(GroupElement {
            stabilized,
            reduced,
            verdict,
        })
    }

    /// Wraps a coherent returning sequence, verifying that it really is
    /// stabilized: restabilizing its reduction must reproduce it on every
    /// level the verdict vouches for.
    pub fn from_sequence(
        sys: &InverseSystem,
        seq: WordSequence,
        window: u32,
    ) -> Result<GroupElement> {
        if !seq.returning() {
            return Err(Error::Precondition(
                "group elements are returning sequences".to_string(),
            ));
        }
        let reduced = reduce_sequence(sys, &seq)?;
        let (restabilized, verdict) = stabilize(sys, &reduced, window)?;
        for n in 1..=seq.depth() {
            if verdict.stable_at(n) && restabilized.word(n) != seq.word(n) {
                return Err(Error::Precondition(format!(
                    "sequence is not stabilized at level {n}: restabilization gives `{}`",
                    restabilized.word(n).display(sys)
                )));
            }
        }
        Ok(GroupElement {
            stabilized: seq,
            reduced,
            verdict,
        })
    }
}

/// The identity: the constant basepoint sequence.
pub fn identity(sys: &InverseSystem, depth: u32) -> Result<GroupElement> {
    sys.try_level(depth)?;
    if depth < 2 {
        return Err(Error::Precondition("identity needs depth >= 2".to_string()));
    }
    let words: Vec<Word> = (1..=depth)
        .map(|n| Word::plain(n, vec![sys.level(n).basepoint()]))
        .collect();
    let seq = check_coherent(sys, words, SequenceKind::ReducedR)?;
    GroupElement::from_reduced(sys, seq, default_window(depth))
}

pub fn default_window(depth: u32) -> u32 {
    sequence::DEFAULT_WINDOW.min(depth - 1).max(1)
}

/// Term-wise concatenation of a returning sequence with a based one.
fn concat_sequences(
    sys: &InverseSystem,
    left: &WordSequence,
    right: &WordSequence,
) -> Result<WordSequence> {
    if left.depth() != right.depth() {
        return Err(Error::Precondition(format!(
            "sequences have different depths {} and {}",
            left.depth(),
            right.depth()
        )));
    }
    let words: Vec<Word> = (1..=left.depth())
        .map(|n| word::concat(sys, left.word(n), right.word(n)))
        .collect::<Result<_>>()?;
    check_coherent(sys, words, SequenceKind::CoherentW)
}

/// Product of two elements: concatenate, reduce, restabilize. An unsettled
/// stabilization shows up in the verdict of the result, never as an error.
pub fn multiply(
    sys: &InverseSystem,
    a: &GroupElement,
    b: &GroupElement,
    window: u32,
) -> Result<GroupElement> {
    let cat = concat_sequences(sys, a.sequence(), b.sequence())?;
    let reduced = reduce_sequence(sys, &cat)?;
    GroupElement::from_reduced(sys, reduced, window)
}

/// Inverse by word reversal.
pub fn inverse(sys: &InverseSystem, a: &GroupElement) -> Result<GroupElement> {
    let words: Vec<Word> = a
        .sequence()
        .words()
        .iter()
        .map(Word::reversed)
        .collect::<Result<_>>()?;
    let seq = check_coherent(sys, words, SequenceKind::CoherentW)
        .map_err(|e| Error::Internal(format!("reversal broke coherence: {e}")))?;
    GroupElement::from_sequence(sys, seq, a.verdict().window)
}

/// Action of a group element on a stabilized based sequence: the same
/// pipeline as multiplication without the returning requirement on the
/// point.
pub fn act(
    sys: &InverseSystem,
    g: &GroupElement,
    point: &WordSequence,
    window: u32,
) -> Result<(WordSequence, StabilityVerdict)> {
    if !sequence::is_stabilized(sys, point)? {
        return Err(Error::Precondition(
            "the action is defined on stabilized sequences".to_string(),
        ));
    }
    let cat = concat_sequences(sys, g.sequence(), point)?;
    let reduced = reduce_sequence(sys, &cat)?;
    stabilize(sys, &reduced, window)
}

/// The completed difference of two elements: the word sequence spelled by
/// the arc from `a` to `b`.
pub fn difference_word(
    sys: &InverseSystem,
    a: &GroupElement,
    b: &GroupElement,
    window: u32,
) -> Result<(WordSequence, CompletionReport)> {
    let product = multiply(sys, &inverse(sys, a)?, b, window)?;
    complete(sys, product.sequence())
}

/// Single-level multiplication of reduced returning words: concatenate and
/// reduce. Each level's reduced returning words form a free group under
/// this operation.
pub fn level_multiply(sys: &InverseSystem, left: &Word, right: &Word) -> Result<Word> {
    for w in [left, right] {
        if !w.returning(sys) {
            return Err(Error::Precondition(
                "level multiplication takes returning words".to_string(),
            ));
        }
        if !word::is_reduced(w) {
            return Err(Error::Precondition(
                "level multiplication takes reduced words".to_string(),
            ));
        }
    }
    Ok(word::reduce(&word::concat(sys, left, right)?))
}

/// How the preimage classes of one vertex grow with depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub level: u32,
    pub vertex: String,
    /// `counts[i]` is the class count at level `level + 1 + i`.
    pub counts: Vec<u32>,
    pub monotone: bool,
    /// Length of the constant run at the end of `counts`.
    pub plateau: u32,
}

/// Counts, for each level `k` up to `upto`, the equivalence classes of
/// vertices of level `k` lying over `v`: two are equivalent when a path
/// connects them through vertices whose iterated images never touch a
/// vertex other than `v`. Such a path projects to the single letter `v`, so
/// the classes are the components of the subgraph induced on the vertices
/// with image `v` or an interior image, restricted to components actually
/// containing a vertex over `v`.
pub fn essential_multiplicity(
    sys: &InverseSystem,
    n: u32,
    vertex_name: &str,
    upto: u32,
) -> Result<MultiplicityReport> {
    let level = sys.try_level(n)?;
    let v = level
        .vertex(vertex_name)
        .ok_or_else(|| Error::UnknownVertex {
            level: n,
            name: vertex_name.to_string(),
        })?;
    if upto <= n || upto > sys.depth() {
        return Err(Error::Precondition(format!(
            "multiplicity track range must satisfy {n} < upto <= {}, found {upto}",
            sys.depth()
        )));
    }

    let mut counts = Vec::new();
    for k in n + 1..=upto {
        counts.push(class_count(sys, n, v, k));
    }
    let monotone = counts.windows(2).all(|pair| pair[0] <= pair[1]);
    let last = *counts.last().unwrap();
    let plateau = counts.iter().rev().take_while(|&&c| c == last).count() as u32;
    Ok(MultiplicityReport {
        level: n,
        vertex: vertex_name.to_string(),
        counts,
        monotone,
        plateau,
    })
}

fn class_count(sys: &InverseSystem, n: u32, v: VertexId, k: u32) -> u32 {
    let level = sys.level(k);
    let count = level.vertex_count();
    // in_set: image is `v` itself or some interior point; over_v: image is
    // exactly `v`.
    let mut in_set = vec![false; count];
    let mut over_v = vec![false; count];
    for u in level.vertices() {
        match sys.composed_original_image(k, u, n) {
            Some(w) if w == v => {
                in_set[u as usize] = true;
                over_v[u as usize] = true;
            }
            Some(_) => {}
            None => in_set[u as usize] = true,
        }
    }
    let mut seen = vec![false; count];
    let mut classes = 0;
    for start in level.vertices() {
        if !over_v[start as usize] || seen[start as usize] {
            continue;
        }
        classes += 1;
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(u) = queue.pop_front() {
            for &w in level.neighbors(u) {
                if in_set[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::reduced_projection_sequence;
    use crate::spaces;

    fn petal_element(sys: &InverseSystem, petal: u32) -> GroupElement {
        let depth = sys.depth();
        let word = spaces::hawaiian_petal_loop(sys, depth, petal).unwrap();
        let reduced = reduced_projection_sequence(sys, &word).unwrap();
        GroupElement::from_reduced(sys, reduced, default_window(depth)).unwrap()
    }

    #[test]
    fn identity_laws() {
        let sys = spaces::hawaiian(4).unwrap();
        let e = identity(&sys, 4).unwrap();
        assert!(e.is_identity());
        let g = petal_element(&sys, 2);
        let left = multiply(&sys, &e, &g, 2).unwrap();
        let right = multiply(&sys, &g, &e, 2).unwrap();
        assert_eq!(left.sequence().words(), g.sequence().words());
        assert_eq!(right.sequence().words(), g.sequence().words());
        let squared = multiply(&sys, &e, &e, 2).unwrap();
        assert!(squared.is_identity());
    }

    #[test]
    fn inverse_cancels() {
        let sys = spaces::hawaiian(4).unwrap();
        let g = petal_element(&sys, 1);
        let ginv = inverse(&sys, &g).unwrap();
        let product = multiply(&sys, &g, &ginv, 2).unwrap();
        assert!(product.is_identity());
        let back = inverse(&sys, &ginv).unwrap();
        assert_eq!(back.sequence().words(), g.sequence().words());
    }

    #[test]
    fn product_of_distinct_petals_concatenates_without_cancellation() {
        let sys = spaces::hawaiian(4).unwrap();
        let g1 = petal_element(&sys, 1);
        let g2 = petal_element(&sys, 2);
        let product = multiply(&sys, &g1, &g2, 2).unwrap();
        for n in 1..=4u32 {
            let cat =
                crate::word::concat(&sys, g1.sequence().word(n), g2.sequence().word(n)).unwrap();
            assert_eq!(product.sequence().word(n), &cat);
        }
        assert!(product.verdict().is_stable());
    }

    #[test]
    fn action_of_identity_fixes_points() {
        let sys = spaces::hawaiian(4).unwrap();
        let e = identity(&sys, 4).unwrap();
        let p = petal_element(&sys, 2);
        let (moved, verdict) = act(&sys, &e, p.sequence(), 2).unwrap();
        assert!(verdict.is_stable());
        assert_eq!(moved.words(), p.sequence().words());
    }

    #[test]
    fn level_multiply_laws() {
        let sys = spaces::hawaiian(3).unwrap();
        let x = Word::plain(3, vec![sys.level(3).basepoint()]);
        let w = spaces::hawaiian_petal_loop(&sys, 3, 2).unwrap();
        assert_eq!(level_multiply(&sys, &w, &x).unwrap(), w);
        assert_eq!(level_multiply(&sys, &x, &w).unwrap(), w);
        let winv = w.reversed().unwrap();
        assert_eq!(level_multiply(&sys, &w, &winv).unwrap(), x);
    }

    #[test]
    fn difference_of_an_element_with_itself_is_trivial() {
        let sys = spaces::hawaiian(5).unwrap();
        let g = petal_element(&sys, 3);
        let (diff, _) = difference_word(&sys, &g, &g, 2).unwrap();
        assert!(diff.words().iter().all(|w| w.len() == 1));
    }

    #[test]
    fn difference_from_identity_is_the_completion() {
        let sys = spaces::hawaiian(5).unwrap();
        let e = identity(&sys, 5).unwrap();
        let b = petal_element(&sys, 2);
        let (diff, _) = difference_word(&sys, &e, &b, 2).unwrap();
        let (completed, _) = complete(&sys, b.sequence()).unwrap();
        assert_eq!(diff.words(), completed.words());
    }

    #[test]
    fn figure2_multiplicity() {
        let sys = spaces::figure2_fixture().unwrap();
        let report = essential_multiplicity(&sys, 1, "C", 2).unwrap();
        assert_eq!(report.counts, vec![2]);
        assert!(report.monotone);
        let report_b = essential_multiplicity(&sys, 1, "B", 2).unwrap();
        assert!(report_b.monotone);
    }

    #[test]
    fn interval_multiplicity_is_always_one() {
        let sys = spaces::interval(5, 2).unwrap();
        for n in 1..5u32 {
            for v in sys.level(n).vertices() {
                let name = sys.level(n).name(v).to_string();
                let report = essential_multiplicity(&sys, n, &name, 5).unwrap();
                assert!(report.counts.iter().all(|&c| c == 1));
            }
        }
    }
}
