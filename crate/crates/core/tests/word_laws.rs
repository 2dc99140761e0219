//! Property tests for the word calculus: confluence of reduction against an
//! order-exhausting oracle, compatibility of reduction with projection, and
//! the algebra of concatenation and matches.

use proptest::prelude::*;

use gencayley_core::graph::{InverseSystem, VertexId};
use gencayley_core::sequence::word_cap;
use gencayley_core::spaces;
use gencayley_core::word::{self, Word};

fn system() -> InverseSystem {
    spaces::hawaiian(3).unwrap()
}

/// Turns direction choices into a based walk word, optionally slashed.
fn walk_word(sys: &InverseSystem, level: u32, steps: &[u8], slash: Option<u8>) -> Word {
    let graph = sys.level(level);
    let mut letters = vec![graph.basepoint()];
    for &step in steps {
        let here = *letters.last().unwrap();
        let neighbors = graph.neighbors(here);
        letters.push(neighbors[step as usize % neighbors.len()]);
    }
    match slash {
        None => Word::plain(level, letters),
        Some(step) => {
            let here = *letters.last().unwrap();
            let neighbors = graph.neighbors(here);
            let tail = neighbors[step as usize % neighbors.len()];
            Word::slashed(level, letters, tail)
        }
    }
}

fn returning_word(sys: &InverseSystem, level: u32, steps: &[u8]) -> Word {
    let out = walk_word(sys, level, steps, None);
    let mut letters = out.proper().to_vec();
    let back: Vec<VertexId> = letters.iter().rev().skip(1).copied().collect();
    letters.extend(back);
    Word::plain(level, letters)
}

/// Applies every applicable rule at every position, recursively; all end
/// results must coincide for the normal form to be well-defined.
fn all_normal_forms(word: &Word, out: &mut Vec<Word>) {
    let letters = word.proper();
    let mut applied = false;
    for i in 0..letters.len().saturating_sub(2) {
        if letters[i] == letters[i + 2] {
            applied = true;
            let mut next = letters.to_vec();
            next.remove(i + 1);
            next.remove(i + 1);
            let next = match word.tail() {
                Some(t) => Word::slashed(word.level(), next, t),
                None => Word::plain(word.level(), next),
            };
            all_normal_forms(&next, out);
        }
    }
    if let Some(t) = word.tail() {
        if letters.len() >= 2 && letters[letters.len() - 2] == t {
            applied = true;
            let mut next = letters.to_vec();
            let new_tail = next.pop().unwrap();
            all_normal_forms(&Word::slashed(word.level(), next, new_tail), out);
        }
    }
    if !applied {
        out.push(word.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reduction_is_the_unique_normal_form(steps in prop::collection::vec(0u8..8, 0..9), slash in prop::option::of(0u8..8)) {
        let sys = system();
        let word = walk_word(&sys, 3, &steps, slash);
        let normal = word::reduce(&word);
        prop_assert_eq!(word::reduce(&normal), normal.clone());
        let mut forms = Vec::new();
        all_normal_forms(&word, &mut forms);
        for form in forms {
            prop_assert_eq!(&form, &normal);
        }
    }

    #[test]
    fn projection_commutes_with_reduction(steps in prop::collection::vec(0u8..8, 0..12), slash in prop::option::of(0u8..8)) {
        let sys = system();
        let word = walk_word(&sys, 3, &steps, slash);
        let left = word::reduce(&word::phi(&sys, &word).unwrap());
        let right = word::reduce(&word::phi(&sys, &word::reduce(&word)).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn concatenation_associates(a in prop::collection::vec(0u8..8, 0..6),
                                b in prop::collection::vec(0u8..8, 0..6),
                                c in prop::collection::vec(0u8..8, 0..6),
                                slash in prop::option::of(0u8..8)) {
        let sys = system();
        let x = returning_word(&sys, 2, &a);
        let y = returning_word(&sys, 2, &b);
        let z = walk_word(&sys, 2, &c, slash);
        let left = word::concat(&sys, &word::concat(&sys, &x, &y).unwrap(), &z).unwrap();
        let right = word::concat(&sys, &x, &word::concat(&sys, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reversal_commutes_with_reduction(steps in prop::collection::vec(0u8..8, 0..12)) {
        let sys = system();
        let word = returning_word(&sys, 3, &steps);
        let left = word::reduce(&word.reversed().unwrap());
        let right = word::reduce(&word).reversed().unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn word_match_is_symmetric_and_initial(a in prop::collection::vec(0u8..8, 0..8),
                                           b in prop::collection::vec(0u8..8, 0..8),
                                           sa in prop::option::of(0u8..8),
                                           sb in prop::option::of(0u8..8)) {
        let sys = system();
        let x = walk_word(&sys, 2, &a, sa);
        let y = walk_word(&sys, 2, &b, sb);
        let cap = word_cap(&x, &y);
        prop_assert_eq!(&cap, &word_cap(&y, &x));
        prop_assert_eq!(&word_cap(&x, &x), &x);
        // The match letters are a common prefix of both inputs.
        let lx = x.letters_with_tail();
        let ly = y.letters_with_tail();
        let lc = cap.letters_with_tail();
        prop_assert!(lc.len() <= lx.len() && lc == lx[..lc.len()]);
        prop_assert!(lc.len() <= ly.len() && lc == ly[..lc.len()]);
        // And it never reaches past either input.
        prop_assert!(cap.reach() <= x.reach());
        prop_assert!(cap.reach() <= y.reach());
    }
}
