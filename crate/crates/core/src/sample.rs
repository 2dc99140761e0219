//! Seeded random words, sequences and group elements for the invariant
//! suites. The generator is a self-contained splitmix64 so runs are
//! reproducible across platforms from a single seed.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{InverseSystem, VertexId};
use crate::group::GroupElement;
use crate::sequence::{reduced_projection_sequence, stabilize, StabilityVerdict, WordSequence};
use crate::word::Word;

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.next_u64() % denominator < numerator
    }
}

/// Random walk from the basepoint; backtracking is allowed and wanted,
/// since it feeds the reduction tests.
pub fn random_based_word(sys: &InverseSystem, rng: &mut Rng, level: u32, steps: usize) -> Word {
    let graph = sys.level(level);
    let mut letters = vec![graph.basepoint()];
    for _ in 0..steps {
        let here = *letters.last().unwrap();
        let neighbors = graph.neighbors(here);
        letters.push(neighbors[rng.below(neighbors.len())]);
    }
    Word::plain(level, letters)
}

/// As [`random_based_word`], but roughly half the samples end inside an
/// edge.
pub fn random_based_word_maybe_slashed(
    sys: &InverseSystem,
    rng: &mut Rng,
    level: u32,
    steps: usize,
) -> Word {
    let word = random_based_word(sys, rng, level, steps);
    if rng.chance(1, 2) {
        let graph = sys.level(level);
        let last = *word.proper().last().unwrap();
        let neighbors = graph.neighbors(last);
        let tail = neighbors[rng.below(neighbors.len())];
        Word::slashed(level, word.proper().to_vec(), tail)
    } else {
        word
    }
}

/// Random walk that comes home along a shortest path.
pub fn random_returning_word(sys: &InverseSystem, rng: &mut Rng, level: u32, steps: usize) -> Word {
    let graph = sys.level(level);
    let out = random_based_word(sys, rng, level, steps);
    let mut letters = out.proper().to_vec();
    let back = shortest_path(sys, level, *letters.last().unwrap(), graph.basepoint());
    letters.extend(back.into_iter().skip(1));
    Word::plain(level, letters)
}

fn shortest_path(sys: &InverseSystem, level: u32, from: VertexId, to: VertexId) -> Vec<VertexId> {
    let graph = sys.level(level);
    let mut previous: Vec<Option<VertexId>> = vec![None; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    let mut queue = VecDeque::from([from]);
    seen[from as usize] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &u in graph.neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                previous[u as usize] = Some(v);
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![to];
    let mut cursor = to;
    while cursor != from {
        cursor = previous[cursor as usize].expect("levels are connected");
        path.push(cursor);
    }
    path.reverse();
    path
}

/// A reduced sequence sampled by reducing the projections of a random based
/// (possibly slashed) top word.
pub fn random_reduced_sequence(
    sys: &InverseSystem,
    rng: &mut Rng,
    depth: u32,
    steps: usize,
) -> Result<WordSequence> {
    let top = random_based_word_maybe_slashed(sys, rng, depth, steps);
    reduced_projection_sequence(sys, &top)
}

/// A stabilized sequence together with its verdict.
pub fn random_stabilized_sequence(
    sys: &InverseSystem,
    rng: &mut Rng,
    depth: u32,
    steps: usize,
    window: u32,
) -> Result<(WordSequence, StabilityVerdict)> {
    let reduced = random_reduced_sequence(sys, rng, depth, steps)?;
    stabilize(sys, &reduced, window)
}

/// A random group element: a returning walk, reduced, projected, stabilized.
pub fn random_group_element(
    sys: &InverseSystem,
    rng: &mut Rng,
    depth: u32,
    steps: usize,
    window: u32,
) -> Result<GroupElement> {
    let top = random_returning_word(sys, rng, depth, steps);
    let reduced = reduced_projection_sequence(sys, &top)?;
    GroupElement::from_reduced(sys, reduced, window)
}

/// A returning word tracing a fundamental cycle of the level, when the
/// level has one: basepoint to one end of a non-tree edge, across it, and
/// home. Such a word stays nontrivial under reduction. `None` when the
/// level is a tree.
pub fn essential_loop(sys: &InverseSystem, level: u32) -> Option<Word> {
    let graph = sys.level(level);
    let base = graph.basepoint();
    // BFS tree; the first edge joining two settled vertices closes a cycle.
    let mut parent: Vec<Option<VertexId>> = vec![None; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    let mut queue = VecDeque::from([base]);
    seen[base as usize] = true;
    let mut chord = None;
    'search: while let Some(v) = queue.pop_front() {
        for &u in graph.neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                parent[u as usize] = Some(v);
                queue.push_back(u);
            } else if parent[v as usize] != Some(u) && parent[u as usize] != Some(v) {
                chord = Some((v, u));
                break 'search;
            }
        }
    }
    let (v, u) = chord?;
    let tree_path = |mut w: VertexId| {
        let mut path = vec![w];
        while let Some(p) = parent[w as usize] {
            path.push(p);
            w = p;
        }
        path
    };
    let mut letters: Vec<VertexId> = tree_path(v);
    letters.reverse();
    letters.push(u);
    letters.extend(tree_path(u).into_iter().skip(1));
    Some(Word::plain(level, letters))
}

/// A non-identity element, or `None` when the top level is a tree and the
/// truncated group is trivial.
pub fn random_nontrivial_element(
    sys: &InverseSystem,
    rng: &mut Rng,
    depth: u32,
    steps: usize,
    window: u32,
) -> Result<Option<GroupElement>> {
    for bump in 0..8 {
        let g = random_group_element(sys, rng, depth, steps + bump * 4, window)?;
        if !g.is_identity() {
            return Ok(Some(g));
        }
    }
    match essential_loop(sys, depth) {
        Some(word) => {
            let reduced = reduced_projection_sequence(sys, &word)?;
            let g = GroupElement::from_reduced(sys, reduced, window)?;
            Ok(Some(g))
        }
        None => Ok(None),
    }
}
