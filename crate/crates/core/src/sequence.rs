//! Depth-truncated sequences of words, one per level, and the operations
//! that move between their coherent, reduced, stabilized and completed
//! forms.
//!
//! Two coherence laws appear. A sequence of kind [`SequenceKind::CoherentW`]
//! satisfies `phi(w[n+1]) = w[n]` on the nose; a sequence of kind
//! [`SequenceKind::ReducedR`] consists of reduced words with
//! `reduce(phi(w[n+1])) = w[n]`. Working at a finite depth `M`, anything the
//! infinite theory phrases as "eventually" is replaced by an explicit window
//! or trust report: stabilization carries a per-level constancy table,
//! completion returns two fewer levels than it consumes and marks which of
//! them were confirmed by two independent top levels.

use crate::error::{Error, Result};
use crate::graph::{InverseSystem, VertexId};
use crate::word::{self, Word};

/// Default lookback window for stabilization checks.
pub const DEFAULT_WINDOW: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    CoherentW,
    ReducedR,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSequence {
    kind: SequenceKind,
    words: Vec<Word>,
    returning: bool,
}

impl WordSequence {
    pub(crate) fn from_parts(kind: SequenceKind, words: Vec<Word>, returning: bool) -> Self {
        WordSequence {
            kind,
            words,
            returning,
        }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn depth(&self) -> u32 {
        self.words.len() as u32
    }

    /// The level-`n` word, 1-based.
    pub fn word(&self, n: u32) -> &Word {
        &self.words[n as usize - 1]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn top(&self) -> &Word {
        self.words.last().expect("sequences are never empty")
    }

    pub fn returning(&self) -> bool {
        self.returning
    }

    /// A sequence is of terminating type when its words are eventually
    /// plain; since a slashed word can only project to a slashed word, at
    /// finite depth this is visible at the top level.
    pub fn terminating_type(&self) -> bool {
        self.top().is_plain()
    }

    /// The same sequence cut down to depth `m`.
    pub fn truncated(&self, sys: &InverseSystem, m: u32) -> Result<WordSequence> {
        if m == 0 || m > self.depth() {
            return Err(Error::Precondition(format!(
                "cannot truncate a depth-{} sequence to depth {m}",
                self.depth()
            )));
        }
        let words = self.words[..m as usize].to_vec();
        let returning = words.iter().all(|w| w.returning(sys));
        Ok(WordSequence {
            kind: self.kind,
            words,
            returning,
        })
    }

    pub fn display(&self, sys: &InverseSystem) -> String {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}: {}", i + 1, w.display(sys)))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Parses the `n: <word>` line format.
    pub fn parse_in(sys: &InverseSystem, kind: SequenceKind, text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((level, body)) = line.split_once(':') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected `<level>: <word>`".to_string(),
                });
            };
            let level: u32 = level.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad level number `{}`", level.trim()),
            })?;
            words.push(Word::parse_in(sys, level, body)?);
        }
        words.sort_by_key(Word::level);
        check_coherent(sys, words, kind)
    }
}

/// Validates a list of words (levels `1..=M`) as a sequence of the given
/// kind.
pub fn check_coherent(
    sys: &InverseSystem,
    words: Vec<Word>,
    kind: SequenceKind,
) -> Result<WordSequence> {
    if words.is_empty() {
        return Err(Error::Precondition(
            "a word sequence needs at least one level".to_string(),
        ));
    }
    for (i, w) in words.iter().enumerate() {
        let expected = i as u32 + 1;
        if w.level() != expected {
            return Err(Error::Precondition(format!(
                "word {} should live at level {expected}, found level {}",
                i + 1,
                w.level()
            )));
        }
        w.validate(sys)?;
        if !w.based(sys) {
            return Err(Error::InvalidWord {
                level: expected,
                message: format!(
                    "sequence words must start at the basepoint, found `{}`",
                    w.display(sys)
                ),
            });
        }
        if kind == SequenceKind::ReducedR && !word::is_reduced(w) {
            return Err(Error::InvalidWord {
                level: expected,
                message: format!("word `{}` is not reduced", w.display(sys)),
            });
        }
    }
    for n in 1..words.len() as u32 {
        let projected = word::phi(sys, &words[n as usize])?;
        let projected = match kind {
            SequenceKind::CoherentW => projected,
            SequenceKind::ReducedR => word::reduce(&projected),
        };
        if projected != words[n as usize - 1] {
            return Err(Error::Coherence {
                level: n,
                expected: projected.display(sys),
                found: words[n as usize - 1].display(sys),
            });
        }
    }
    let returning = words.iter().all(|w| w.returning(sys));
    Ok(WordSequence {
        kind,
        words,
        returning,
    })
}

/// Term-wise reduction of a coherent sequence; the result satisfies the
/// reduced coherence law.
pub fn reduce_sequence(sys: &InverseSystem, seq: &WordSequence) -> Result<WordSequence> {
    require_kind(seq, SequenceKind::CoherentW, "reduce_sequence")?;
    let words: Vec<Word> = seq.words.iter().map(word::reduce).collect();
    check_coherent(sys, words, SequenceKind::ReducedR)
}

/// The coherent sequence obtained by projecting a single top word down to
/// level 1.
pub fn projection_sequence(sys: &InverseSystem, top: &Word) -> Result<WordSequence> {
    top.validate(sys)?;
    if !top.based(sys) {
        return Err(Error::Precondition(
            "projection sequences start from a based word".to_string(),
        ));
    }
    let mut words = vec![top.clone()];
    let mut current = top.clone();
    for _ in (1..top.level()).rev() {
        current = word::phi(sys, &current)?;
        words.push(current.clone());
    }
    words.reverse();
    let returning = words.iter().all(|w| w.returning(sys));
    Ok(WordSequence::from_parts(
        SequenceKind::CoherentW,
        words,
        returning,
    ))
}

/// The reduced sequence obtained by reducing a based top word and projecting
/// with reduction after every step.
pub fn reduced_projection_sequence(sys: &InverseSystem, top: &Word) -> Result<WordSequence> {
    top.validate(sys)?;
    if !top.based(sys) {
        return Err(Error::Precondition(
            "projection sequences start from a based word".to_string(),
        ));
    }
    let mut current = word::reduce(top);
    let mut words = vec![current.clone()];
    for _ in (1..top.level()).rev() {
        current = word::reduce(&word::phi(sys, &current)?);
        words.push(current.clone());
    }
    words.reverse();
    let returning = words.iter().all(|w| w.returning(sys));
    Ok(WordSequence::from_parts(
        SequenceKind::ReducedR,
        words,
        returning,
    ))
}

/// Outcome of a stabilization: the lookback window used, a per-level
/// constancy table, and the first level (if any) whose projections still
/// moved inside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub window: u32,
    pub constancy: Vec<bool>,
    pub first_unstable: Option<u32>,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.first_unstable.is_none()
    }

    pub fn stable_at(&self, n: u32) -> bool {
        self.constancy[n as usize - 1]
    }
}

/// Projects every word of a reduced sequence down from the top without
/// reducing, which recovers the coherent sequence the reduced data stands
/// for. Whether the projections have settled is judged by recomputing them
/// from the `window + 1` deepest levels and comparing.
pub fn stabilize(
    sys: &InverseSystem,
    seq: &WordSequence,
    window: u32,
) -> Result<(WordSequence, StabilityVerdict)> {
    require_kind(seq, SequenceKind::ReducedR, "stabilize")?;
    let depth = seq.depth();
    if window == 0 || window >= depth {
        return Err(Error::Precondition(format!(
            "stabilization window must satisfy 1 <= w < {depth}, found {window}"
        )));
    }

    // chains[j] holds the un-reduced projections of the reduced word at
    // level k = depth - window + j, indexed chains[j][n-1] for n <= k.
    let lowest_top = depth - window;
    let mut chains: Vec<Vec<Word>> = Vec::new();
    for k in lowest_top..=depth {
        let mut chain = vec![seq.word(k).clone()];
        let mut current = seq.word(k).clone();
        for _ in (1..k).rev() {
            current = word::phi(sys, &current)?;
            chain.push(current.clone());
        }
        chain.reverse();
        chains.push(chain);
    }

    let final_chain = chains.last().unwrap();
    let mut constancy = Vec::with_capacity(depth as usize);
    let mut first_unstable = None;
    for n in 1..=depth {
        let reference = &final_chain[n as usize - 1];
        let mut constant = true;
        for (j, chain) in chains.iter().enumerate() {
            let k = lowest_top + j as u32;
            if k > n && chain[n as usize - 1] != *reference {
                constant = false;
            }
        }
        constancy.push(constant);
        if !constant && first_unstable.is_none() {
            first_unstable = Some(n);
        }
    }

    let words = final_chain.clone();
    let returning = words.iter().all(|w| w.returning(sys));
    Ok((
        WordSequence::from_parts(SequenceKind::CoherentW, words, returning),
        StabilityVerdict {
            window,
            constancy,
            first_unstable,
        },
    ))
}

/// Whether the sequence equals the stabilization of its own reduction, which
/// is the membership test for inputs of the metric operations.
pub fn is_stabilized(sys: &InverseSystem, seq: &WordSequence) -> Result<bool> {
    require_kind(seq, SequenceKind::CoherentW, "is_stabilized")?;
    let window = DEFAULT_WINDOW.min(seq.depth() - 1).max(1);
    let (restab, _) = stabilize(sys, &reduce_sequence(sys, seq)?, window)?;
    Ok(restab.words == seq.words)
}

/// Deep projection of the proper letters of a level-`k` word directly to
/// level `n <= k - 2`, keeping letters that a neighbor can anchor.
///
/// A letter whose iterated image falls inside an edge is normally deleted;
/// here it survives if some graph neighbor has a vertex image, and it is
/// renamed to that image. All anchoring neighbors must agree on the image
/// letter, which the two-level gap guarantees for valid systems; a
/// disagreement is reported as an error rather than resolved silently.
pub fn drc_kn(sys: &InverseSystem, n: u32, k: u32, w: &Word) -> Result<Word> {
    if w.is_slashed() {
        return Err(Error::Precondition(
            "the deep projection takes plain words; pass the proper letters".to_string(),
        ));
    }
    if w.level() != k {
        return Err(Error::Precondition(format!(
            "word lives at level {}, expected {k}",
            w.level()
        )));
    }
    let (letters, _) = drc_kn_letters(sys, n, k, w.proper())?;
    Ok(Word::plain(n, letters))
}

/// Core of [`drc_kn`]: also reports which input positions survived the
/// deletion step.
fn drc_kn_letters(
    sys: &InverseSystem,
    n: u32,
    k: u32,
    letters: &[VertexId],
) -> Result<(Vec<VertexId>, Vec<bool>)> {
    sys.try_level(k)?;
    sys.try_level(n)?;
    if k < n + 2 {
        return Err(Error::Precondition(format!(
            "deep projection needs a gap of at least two levels, found {k} -> {n}"
        )));
    }
    let level = sys.level(k);
    let mut out: Vec<VertexId> = Vec::new();
    let mut kept = Vec::with_capacity(letters.len());
    for &v in letters {
        let image = match sys.composed_original_image(k, v, n) {
            Some(w) => Some(w),
            None => {
                let mut anchored: Option<VertexId> = None;
                let mut ambiguous: Vec<VertexId> = Vec::new();
                for &u in level.neighbors(v) {
                    if let Some(w) = sys.composed_original_image(k, u, n) {
                        match anchored {
                            None => anchored = Some(w),
                            Some(prev) if prev == w => {}
                            Some(prev) => {
                                if ambiguous.is_empty() {
                                    ambiguous.push(prev);
                                }
                                ambiguous.push(w);
                            }
                        }
                    }
                }
                if !ambiguous.is_empty() {
                    return Err(Error::AmbiguousInsertion {
                        level: k,
                        vertex: level.name(v).to_string(),
                        images: ambiguous
                            .iter()
                            .map(|&w| sys.level(n).name(w).to_string())
                            .collect(),
                    });
                }
                anchored
            }
        };
        match image {
            Some(w) => {
                kept.push(true);
                if out.last() != Some(&w) {
                    out.push(w);
                }
            }
            None => kept.push(false),
        }
    }
    Ok((out, kept))
}

/// Per-level trust attached to a completed sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionReport {
    /// Depth of the sequence the completion was computed from.
    pub source_depth: u32,
    /// Level `n` is confirmed when the deep projections from the two top
    /// levels agree about it.
    pub trusted: Vec<bool>,
    /// Levels where the two top levels disagree about whether the word ends
    /// on its last proper letter or keeps going; the deeper outcome is used.
    pub ending_unstable: Vec<bool>,
}

impl CompletionReport {
    pub fn trusted_at(&self, n: u32) -> bool {
        self.trusted[n as usize - 1]
    }
}

/// Completion: reinserts letters whose vertices the words only approach in
/// the limit. Level `n` of the result is computed from the deepest level
/// through the anchored projection, so the result is two levels shorter
/// than the input.
pub fn complete(
    sys: &InverseSystem,
    seq: &WordSequence,
) -> Result<(WordSequence, CompletionReport)> {
    require_kind(seq, SequenceKind::CoherentW, "complete")?;
    let depth = seq.depth();
    if depth < 4 {
        return Err(Error::Precondition(format!(
            "completion needs depth at least 4, found {depth}"
        )));
    }

    let mut words = Vec::new();
    let mut trusted = Vec::new();
    let mut ending_unstable = Vec::new();
    for n in 1..=depth - 2 {
        let (word_deep, open_deep) = complete_level(sys, seq, n, depth)?;
        let confirm = if n + 3 <= depth {
            Some(complete_level(sys, seq, n, depth - 1)?)
        } else {
            None
        };
        let (is_trusted, flip) = match &confirm {
            Some((word_prev, open_prev)) => (word_prev == &word_deep, open_prev != &open_deep),
            None => (false, false),
        };
        trusted.push(is_trusted);
        ending_unstable.push(flip);
        words.push(word_deep);
    }

    let completed = check_coherent(sys, words, SequenceKind::CoherentW)
        .map_err(|e| Error::Internal(format!("completion produced an incoherent sequence: {e}")))?;
    Ok((
        completed,
        CompletionReport {
            source_depth: depth,
            trusted,
            ending_unstable,
        },
    ))
}

/// One level of the completion, computed from level `k`. The boolean records
/// whether the deep word ran past its last surviving letter (an "open"
/// ending), which decides the slash bookkeeping below.
fn complete_level(sys: &InverseSystem, seq: &WordSequence, n: u32, k: u32) -> Result<(Word, bool)> {
    let deep = seq.word(k);
    let (letters, kept) = drc_kn_letters(sys, n, k, deep.proper())?;
    if letters.is_empty() {
        return Err(Error::Internal(format!(
            "deep projection of a based word to level {n} came out empty"
        )));
    }
    let last_kept = kept
        .iter()
        .rposition(|&kept| kept)
        .ok_or_else(|| Error::Internal("no letter survived the deep projection".to_string()))?;
    let open = last_kept + 1 < kept.len();

    let own = seq.word(n);
    let word = match own.tail() {
        None => Word::plain(n, letters),
        Some(tail) => {
            let last_proper = *own.proper().last().expect("based words are nonempty");
            if open {
                let last = *letters.last().unwrap();
                if last == tail {
                    Word::slashed(n, letters, last_proper)
                } else if last == last_proper {
                    Word::slashed(n, letters, tail)
                } else {
                    return Err(Error::Internal(format!(
                        "deep projection ends in `{}`, expected `{}` or `{}`",
                        sys.level(n).name(last),
                        sys.level(n).name(last_proper),
                        sys.level(n).name(tail)
                    )));
                }
            } else {
                Word::plain(n, letters)
            }
        }
    };
    Ok((word, open))
}

/// Longest common initial run of two words of one level, slash placed as in
/// whichever input stops earlier.
pub fn word_cap(a: &Word, b: &Word) -> Word {
    debug_assert_eq!(a.level(), b.level());
    let la = a.letters_with_tail();
    let lb = b.letters_with_tail();
    let shared = la.iter().zip(lb.iter()).take_while(|(x, y)| x == y).count();
    let shorter = if a.reach() <= b.reach() { a } else { b };
    let slashed = shared >= 2 && shorter.is_slashed() && shorter.len() == shared - 1;
    let mut letters = la[..shared].to_vec();
    if slashed {
        let tail = letters.pop().unwrap();
        Word::slashed(a.level(), letters, tail)
    } else {
        Word::plain(a.level(), letters)
    }
}

/// The containment a deeper match provably satisfies against a shallower
/// one: its proper letters are a prefix of the shallower word's letters.
/// (The full word need not be contained: a bonding map can fold a structure
/// born at a deep level onto an older edge, and the alias lets the deeper
/// match creep past the shallower one by a slashed ending for a level or
/// two before the projections settle.)
fn is_initial_segment(a: &Word, b: &Word) -> bool {
    let lb = b.letters_with_tail();
    a.proper().len() <= lb.len() && a.proper() == &lb[..a.proper().len()]
}

/// Stable initial match of two coherent sequences of the same depth: the
/// per-level cap of the deepest words, projected down. The projections of
/// the deepest cap are checked against those of the second-deepest one.
pub fn stable_initial_match(
    sys: &InverseSystem,
    a: &WordSequence,
    b: &WordSequence,
) -> Result<WordSequence> {
    require_kind(a, SequenceKind::CoherentW, "stable_initial_match")?;
    require_kind(b, SequenceKind::CoherentW, "stable_initial_match")?;
    let depth = a.depth();
    if depth != b.depth() {
        return Err(Error::Precondition(format!(
            "sequences have different depths {} and {}",
            depth,
            b.depth()
        )));
    }
    let top_cap = word_cap(a.top(), b.top());
    let result = projection_sequence(sys, &top_cap)?;
    if depth >= 2 {
        let prev_cap = word_cap(a.word(depth - 1), b.word(depth - 1));
        let prev = projection_sequence(sys, &prev_cap)?;
        for n in 1..depth {
            if !is_initial_segment(result.word(n), prev.word(n)) {
                return Err(Error::Internal(format!(
                    "match from level {depth} is not an initial segment of the match from level \
                     {} at level {n}: `{}` vs `{}`",
                    depth - 1,
                    result.word(n).display(sys),
                    prev.word(n).display(sys)
                )));
            }
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EndingPattern {
    /// The slashed word stops just short of the plain word's last letter.
    Short,
    /// The slashed word runs past the plain word's last letter.
    Past,
    Mismatch,
}

fn classify_ending(plain: &Word, slashed: &Word) -> EndingPattern {
    if plain.is_slashed() || slashed.is_plain() {
        return EndingPattern::Mismatch;
    }
    let p = plain.proper();
    let s = slashed.proper();
    if s.len() + 1 == p.len() && *s == p[..s.len()] && slashed.tail() == Some(p[p.len() - 1]) {
        EndingPattern::Short
    } else if s == p {
        EndingPattern::Past
    } else {
        EndingPattern::Mismatch
    }
}

/// End-equivalence of two sequences: equal, or one terminating and one
/// non-terminating with a consistent ending pattern on the deepest levels.
///
/// The pattern must hold on at least the two deepest levels; a single-level
/// match says nothing, because the top word of the terminating side alone
/// always realizes one of the two patterns. Two levels is the strongest
/// requirement the data supports: a deeper tower can still overturn the
/// verdict either way, which is why this predicate reports what is visible
/// rather than the limit.
pub fn formally_equivalent(
    sys: &InverseSystem,
    a: &WordSequence,
    b: &WordSequence,
) -> Result<bool> {
    require_kind(a, SequenceKind::CoherentW, "formally_equivalent")?;
    require_kind(b, SequenceKind::CoherentW, "formally_equivalent")?;
    let depth = a.depth();
    sys.try_level(depth)?;
    if depth != b.depth() {
        return Err(Error::Precondition(format!(
            "sequences have different depths {} and {}",
            depth,
            b.depth()
        )));
    }
    if a.words == b.words {
        return Ok(true);
    }
    let (terminating, non_terminating) = match (a.terminating_type(), b.terminating_type()) {
        (true, false) => (a, b),
        (false, true) => (b, a),
        _ => return Ok(false),
    };
    if depth < 2 {
        return Ok(false);
    }
    let top = classify_ending(terminating.word(depth), non_terminating.word(depth));
    if top == EndingPattern::Mismatch {
        return Ok(false);
    }
    let mut run = 1;
    for n in (1..depth).rev() {
        if classify_ending(terminating.word(n), non_terminating.word(n)) == top {
            run += 1;
        } else {
            break;
        }
    }
    Ok(run >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalOutcome {
    AlreadyTerminating,
    Replaced,
    NotDetected,
}

/// Swaps a non-terminating sequence for the terminating member of its
/// end-equivalence class when that member is visible at this depth. The two
/// candidate top words either absorb the tail letter or drop it; a candidate
/// counts only if its projections are equivalent to the input.
pub fn canonicalize(
    sys: &InverseSystem,
    seq: &WordSequence,
) -> Result<(WordSequence, CanonicalOutcome)> {
    require_kind(seq, SequenceKind::CoherentW, "canonicalize")?;
    if seq.terminating_type() {
        return Ok((seq.clone(), CanonicalOutcome::AlreadyTerminating));
    }
    let top = seq.top();
    let mut candidates = Vec::new();
    {
        let mut letters = top.proper().to_vec();
        letters.push(top.tail().expect("non-terminating tops are slashed"));
        candidates.push(Word::plain(top.level(), letters));
    }
    if !top.is_empty() {
        candidates.push(Word::plain(top.level(), top.proper().to_vec()));
    }
    for candidate in candidates {
        if candidate.validate(sys).is_err() {
            continue;
        }
        let projected = projection_sequence(sys, &candidate)?;
        if formally_equivalent(sys, &projected, seq)? {
            return Ok((projected, CanonicalOutcome::Replaced));
        }
    }
    Ok((seq.clone(), CanonicalOutcome::NotDetected))
}

fn require_kind(seq: &WordSequence, kind: SequenceKind, operation: &str) -> Result<()> {
    if seq.kind != kind {
        return Err(Error::Precondition(format!(
            "{operation} expects a {kind:?} sequence, found {:?}",
            seq.kind
        )));
    }
    Ok(())
}
