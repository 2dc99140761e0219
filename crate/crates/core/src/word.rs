//! Edge-path words over the vertex alphabet of one level, the one-step
//! projection to the previous level, reduction and concatenation.
//!
//! A word lists the vertices an edge-path visits, without stagnation
//! (consecutive letters differ). A *slashed* word `v1 .. vk / u` encodes a
//! path that passes `vk` and ends strictly inside the edge `{vk, u}`; the
//! letter after the slash carries no weight and is called the tail, the
//! letters before it the proper letters.

use crate::error::{Error, Result};
use crate::graph::{InverseSystem, SubdividedVertex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    level: u32,
    letters: Vec<VertexId>,
    tail: Option<VertexId>,
}

impl Word {
    pub fn plain(level: u32, letters: Vec<VertexId>) -> Word {
        Word {
            level,
            letters,
            tail: None,
        }
    }

    pub fn slashed(level: u32, letters: Vec<VertexId>, tail: VertexId) -> Word {
        Word {
            level,
            letters,
            tail: Some(tail),
        }
    }

    pub fn empty(level: u32) -> Word {
        Word::plain(level, Vec::new())
    }

    /// Builds a word and checks it is a valid (possibly empty) edge-path
    /// word of the level.
    pub fn checked(
        sys: &InverseSystem,
        level: u32,
        letters: Vec<VertexId>,
        tail: Option<VertexId>,
    ) -> Result<Word> {
        let word = Word {
            level,
            letters,
            tail,
        };
        word.validate(sys)?;
        Ok(word)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn proper(&self) -> &[VertexId] {
        &self.letters
    }

    pub fn tail(&self) -> Option<VertexId> {
        self.tail
    }

    pub fn is_plain(&self) -> bool {
        self.tail.is_none()
    }

    pub fn is_slashed(&self) -> bool {
        self.tail.is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Proper letters followed by the tail, if any.
    pub fn letters_with_tail(&self) -> Vec<VertexId> {
        let mut all = self.letters.clone();
        all.extend(self.tail);
        all
    }

    /// How far along its path the word reaches, in half-steps: a plain word
    /// with `k` proper letters reaches `2k`, its slashed extension `2k + 1`.
    /// Useful to compare a word with the sibling that goes one letter
    /// further.
    pub fn reach(&self) -> usize {
        2 * self.letters.len() + usize::from(self.tail.is_some())
    }

    pub fn validate(&self, sys: &InverseSystem) -> Result<()> {
        let level = sys.try_level(self.level)?;
        let bad = |message: String| Error::InvalidWord {
            level: self.level,
            message,
        };
        for &v in self.letters.iter().chain(self.tail.iter()) {
            if v as usize >= level.vertex_count() {
                return Err(bad(format!("letter #{v} is not a vertex of the level")));
            }
        }
        for pair in self.letters.windows(2) {
            if pair[0] == pair[1] {
                return Err(bad(format!("stagnating letter `{}`", level.name(pair[0]))));
            }
            if !level.adjacent(pair[0], pair[1]) {
                return Err(bad(format!(
                    "letters `{}` and `{}` are not adjacent",
                    level.name(pair[0]),
                    level.name(pair[1])
                )));
            }
        }
        if let Some(tail) = self.tail {
            let Some(&last) = self.letters.last() else {
                return Err(bad("slashed word with no proper letters".to_string()));
            };
            if !level.adjacent(last, tail) {
                return Err(bad(format!(
                    "tail `{}` is not adjacent to the last letter `{}`",
                    level.name(tail),
                    level.name(last)
                )));
            }
        }
        Ok(())
    }

    /// Whether the word starts at the basepoint of its level.
    pub fn based(&self, sys: &InverseSystem) -> bool {
        self.letters.first() == Some(&sys.level(self.level).basepoint())
    }

    /// Plain, based, and ending at the basepoint again.
    pub fn returning(&self, sys: &InverseSystem) -> bool {
        self.is_plain()
            && self.based(sys)
            && self.letters.last() == Some(&sys.level(self.level).basepoint())
    }

    /// Letter-order reversal of a plain word. A returning reduced word stays
    /// returning and reduced under reversal.
    pub fn reversed(&self) -> Result<Word> {
        if self.is_slashed() {
            return Err(Error::Precondition(
                "only plain words can be reversed".to_string(),
            ));
        }
        let mut letters = self.letters.clone();
        letters.reverse();
        Ok(Word::plain(self.level, letters))
    }

    pub fn display(&self, sys: &InverseSystem) -> String {
        let level = sys.level(self.level);
        let mut parts: Vec<&str> = self.letters.iter().map(|&v| level.name(v)).collect();
        if let Some(tail) = self.tail {
            parts.push("/");
            parts.push(level.name(tail));
        }
        if parts.is_empty() {
            "(empty)".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Parses the space-separated rendering, e.g. `A B C B / A`.
    pub fn parse_in(sys: &InverseSystem, level_index: u32, text: &str) -> Result<Word> {
        let level = sys.try_level(level_index)?;
        let mut letters = Vec::new();
        let mut tail = None;
        let mut after_slash = false;
        for token in text.split_whitespace() {
            if token == "/" {
                if after_slash {
                    return Err(Error::InvalidWord {
                        level: level_index,
                        message: "more than one `/`".to_string(),
                    });
                }
                after_slash = true;
                continue;
            }
            let v = level.vertex(token).ok_or_else(|| Error::UnknownVertex {
                level: level_index,
                name: token.to_string(),
            })?;
            if after_slash {
                if tail.is_some() {
                    return Err(Error::InvalidWord {
                        level: level_index,
                        message: "more than one letter after `/`".to_string(),
                    });
                }
                tail = Some(v);
            } else {
                letters.push(v);
            }
        }
        if after_slash && tail.is_none() {
            return Err(Error::InvalidWord {
                level: level_index,
                message: "`/` must be followed by a letter".to_string(),
            });
        }
        if letters.is_empty() {
            return Err(Error::InvalidWord {
                level: level_index,
                message: "empty word".to_string(),
            });
        }
        Word::checked(sys, level_index, letters, tail)
    }
}

/// Delete-replace-compress projection of the proper letters: drop letters
/// whose image is interior, rename the survivors, and merge stagnating runs.
fn drc_letters(sys: &InverseSystem, target: u32, letters: &[VertexId]) -> Vec<VertexId> {
    let map = sys.map_to(target);
    let mut out: Vec<VertexId> = Vec::with_capacity(letters.len());
    for &v in letters {
        if let SubdividedVertex::Original(w) = map.image(v) {
            if out.last() != Some(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// One-step projection of a plain word from level `n + 1` to level `n`.
pub fn drc(sys: &InverseSystem, word: &Word) -> Result<Word> {
    if word.is_slashed() {
        return Err(Error::Precondition(
            "drc takes a plain word; use phi for slashed words".to_string(),
        ));
    }
    let target = projection_target(sys, word)?;
    Ok(Word::plain(target, drc_letters(sys, target, word.proper())))
}

fn projection_target(sys: &InverseSystem, word: &Word) -> Result<u32> {
    sys.try_level(word.level())?;
    if word.level() < 2 {
        return Err(Error::Precondition(
            "cannot project below level 1".to_string(),
        ));
    }
    Ok(word.level() - 1)
}

/// Full one-step projection, covering both plain and slashed words.
///
/// A plain word whose path ends on a vertex image projects to its
/// delete-replace-compress word; a path that ends inside an edge instead
/// records the approached vertex after a slash. The approached vertex is
/// read off the image of the letter following the last letter with a vertex
/// image.
pub fn phi(sys: &InverseSystem, word: &Word) -> Result<Word> {
    let target = projection_target(sys, word)?;
    let map = sys.map_to(target);
    let letters = word.proper();
    let core = drc_letters(sys, target, letters);

    let slash_after = |j: usize, next: VertexId, core: Vec<VertexId>| -> Result<Word> {
        // `next` has an interior image; its edge must contain the image of
        // the last surviving letter as an endpoint, and the far endpoint is
        // the approached vertex.
        let SubdividedVertex::Interior { edge, .. } = map.image(next) else {
            return Err(Error::Internal(format!(
                "letter after position {j} should have an interior image"
            )));
        };
        let SubdividedVertex::Original(anchor) = map.image(letters[j]) else {
            return Err(Error::Internal(format!(
                "letter at position {j} should have a vertex image"
            )));
        };
        let (u, v) = sys.level(target).edge(edge);
        let tail = if anchor == u {
            v
        } else if anchor == v {
            u
        } else {
            return Err(Error::Internal(
                "interior image does not lie on an edge at the last vertex image".to_string(),
            ));
        };
        Ok(Word::slashed(target, core, tail))
    };

    match word.tail() {
        None => {
            if letters.is_empty() || core.is_empty() {
                return Ok(Word::empty(target));
            }
            let last = *letters.last().unwrap();
            if map.image(last).is_original() {
                return Ok(Word::plain(target, core));
            }
            let j = (0..letters.len() - 1)
                .rev()
                .find(|&i| map.image(letters[i]).is_original())
                .ok_or_else(|| {
                    Error::Internal("nonempty projection without a vertex image".to_string())
                })?;
            slash_after(j, letters[j + 1], core)
        }
        Some(tail) => {
            if core.is_empty() {
                return Ok(Word::empty(target));
            }
            let j = (0..letters.len())
                .rev()
                .find(|&i| map.image(letters[i]).is_original())
                .ok_or_else(|| {
                    Error::Internal("nonempty projection without a vertex image".to_string())
                })?;
            let next = if j + 1 < letters.len() {
                letters[j + 1]
            } else {
                tail
            };
            slash_after(j, next, core)
        }
    }
}

/// Normal form under backtrack cancellation: `u v u -> u` on proper letters
/// and `u v / u -> u / v` at a slashed ending. The scan is leftmost, one
/// pass, with the ending rule replayed until it settles; the result does not
/// depend on the application order (see the confluence suite).
pub fn reduce(word: &Word) -> Word {
    let mut stack: Vec<VertexId> = Vec::with_capacity(word.len());
    for &v in word.proper() {
        if stack.len() >= 2 && stack[stack.len() - 2] == v {
            stack.pop();
        } else {
            stack.push(v);
        }
    }
    let mut tail = word.tail();
    if let Some(mut t) = tail {
        while stack.len() >= 2 && stack[stack.len() - 2] == t {
            t = stack.pop().unwrap();
        }
        tail = Some(t);
    }
    Word {
        level: word.level(),
        letters: stack,
        tail,
    }
}

pub fn is_reduced(word: &Word) -> bool {
    reduce(word) == *word
}

/// Concatenation of a returning word with a based word of the same level:
/// the returning word's final basepoint letter is identified with the based
/// word's first letter.
pub fn concat(sys: &InverseSystem, left: &Word, right: &Word) -> Result<Word> {
    if left.level() != right.level() {
        return Err(Error::Precondition(format!(
            "concat needs words of one level, found {} and {}",
            left.level(),
            right.level()
        )));
    }
    if !left.returning(sys) {
        return Err(Error::Precondition(
            "left factor of a concatenation must be returning".to_string(),
        ));
    }
    if !right.based(sys) {
        return Err(Error::Precondition(
            "right factor of a concatenation must be based".to_string(),
        ));
    }
    let mut letters: Vec<VertexId> = left.proper()[..left.len() - 1].to_vec();
    for &v in right.proper() {
        if letters.last() == Some(&v) {
            letters.pop();
        } else {
            letters.push(v);
        }
    }
    Ok(Word {
        level: left.level(),
        letters,
        tail: right.tail(),
    })
}

/// The word spelled by a walk: stagnation is merged away and an optional
/// final stop strictly inside the edge `{last, stop}` becomes a slashed
/// ending.
pub fn spell_word(
    sys: &InverseSystem,
    level_index: u32,
    walk: &[VertexId],
    stop: Option<VertexId>,
) -> Result<Word> {
    let level = sys.try_level(level_index)?;
    let bad = |message: String| Error::InvalidWord {
        level: level_index,
        message,
    };
    if walk.is_empty() {
        return Err(bad("a walk needs at least one vertex".to_string()));
    }
    if walk[0] != level.basepoint() {
        return Err(bad(format!(
            "walk must start at the basepoint `{}`",
            level.name(level.basepoint())
        )));
    }
    let mut letters = vec![walk[0]];
    for pair in walk.windows(2) {
        if pair[0] == pair[1] {
            continue;
        }
        if !level.adjacent(pair[0], pair[1]) {
            return Err(bad(format!(
                "walk step `{}` -> `{}` is not an edge",
                level.name(pair[0]),
                level.name(pair[1])
            )));
        }
        letters.push(pair[1]);
    }
    Word::checked(sys, level_index, letters, stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces;

    fn w(sys: &InverseSystem, level: u32, text: &str) -> Word {
        Word::parse_in(sys, level, text).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let sys = spaces::figure2_fixture().unwrap();
        assert_eq!(reduce(&w(&sys, 1, "A B C B")), w(&sys, 1, "A B"));
        assert_eq!(reduce(&w(&sys, 1, "A B A B / A")), w(&sys, 1, "A / B"));
        let reduced = w(&sys, 1, "A B C");
        assert_eq!(reduce(&reduced), reduced);
        // Cascading ending rule.
        assert_eq!(reduce(&w(&sys, 1, "A B C B / C")), w(&sys, 1, "A B / C"));
    }

    #[test]
    fn reduce_is_idempotent_on_interval_words() {
        let sys = spaces::interval(3, 2).unwrap();
        let word = w(&sys, 3, "v0 v1 v2 v1 v2 v3 v2 v1");
        let once = reduce(&word);
        assert_eq!(reduce(&once), once);
        assert!(is_reduced(&once));
    }

    #[test]
    fn drc_on_tiny_interval() {
        let sys = spaces::interval(2, 2).unwrap();
        // Level 2 is v0-v1-v2 over the single level-1 edge; v1 sits inside.
        let word = w(&sys, 2, "v0 v1 v2");
        let projected = drc(&sys, &word).unwrap();
        assert_eq!(projected, w(&sys, 1, "v0 v1"));
    }

    #[test]
    fn phi_slashed_case_on_tiny_interval() {
        let sys = spaces::interval(2, 2).unwrap();
        let word = w(&sys, 2, "v0 v1 / v2");
        assert_eq!(phi(&sys, &word).unwrap(), w(&sys, 1, "v0 / v1"));
    }

    #[test]
    fn phi_of_basepoint_is_basepoint() {
        let sys = spaces::interval(3, 2).unwrap();
        let word = w(&sys, 3, "v0");
        assert_eq!(phi(&sys, &word).unwrap(), w(&sys, 2, "v0"));
    }

    #[test]
    fn phi_equals_drc_on_returning_words() {
        let sys = spaces::hawaiian(3).unwrap();
        let word = spaces::hawaiian_petal_loop(&sys, 3, 1).unwrap();
        assert!(word.returning(&sys));
        assert_eq!(phi(&sys, &word).unwrap(), drc(&sys, &word).unwrap());
    }

    #[test]
    fn concat_identities() {
        let sys = spaces::hawaiian(2).unwrap();
        let x = w(&sys, 2, "o");
        let loop2 = spaces::hawaiian_petal_loop(&sys, 2, 2).unwrap();
        assert_eq!(concat(&sys, &x, &loop2).unwrap(), loop2);
        assert_eq!(concat(&sys, &loop2, &x).unwrap(), loop2);
    }

    #[test]
    fn concat_splices_at_the_basepoint() {
        // Out-and-back along two different basepoint edges: the shared
        // basepoint letter is written once.
        let sys = spaces::hawaiian(2).unwrap();
        let left = w(&sys, 2, "o p1_1 o");
        let right = w(&sys, 2, "o p2_1 o");
        assert_eq!(
            concat(&sys, &left, &right).unwrap(),
            w(&sys, 2, "o p1_1 o p2_1 o")
        );
    }

    #[test]
    fn concat_rejects_non_returning_left() {
        let sys = spaces::interval(2, 2).unwrap();
        let a = w(&sys, 2, "v0 v1");
        let b = w(&sys, 2, "v0 v1 v2");
        assert!(matches!(concat(&sys, &a, &b), Err(Error::Precondition(_))));
    }

    #[test]
    fn spell_compresses_stagnation() {
        let sys = spaces::interval(2, 2).unwrap();
        let v0 = sys.level(2).vertex("v0").unwrap();
        let v1 = sys.level(2).vertex("v1").unwrap();
        let word = spell_word(&sys, 2, &[v0, v0, v1, v1], None).unwrap();
        assert_eq!(word, w(&sys, 2, "v0 v1"));
        let v2 = sys.level(2).vertex("v2").unwrap();
        let stopped = spell_word(&sys, 2, &[v0, v1], Some(v2)).unwrap();
        assert_eq!(stopped, w(&sys, 2, "v0 v1 / v2"));
        let single = spell_word(&sys, 2, &[v0], None).unwrap();
        assert_eq!(single, w(&sys, 2, "v0"));
    }

    #[test]
    fn word_validation_catches_breaks() {
        let sys = spaces::interval(2, 2).unwrap();
        let v0 = sys.level(2).vertex("v0").unwrap();
        let v2 = sys.level(2).vertex("v2").unwrap();
        assert!(Word::checked(&sys, 2, vec![v0, v2], None).is_err());
        assert!(Word::checked(&sys, 2, vec![v0, v0], None).is_err());
        assert!(Word::checked(&sys, 2, vec![], Some(v0)).is_err());
    }
}
