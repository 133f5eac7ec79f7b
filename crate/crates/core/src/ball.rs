//! Balls of group elements by word length, with approximate lookup.

use alloc::vec::Vec;

use crate::index::PointIndex;
use crate::moebius::Isometry;
use crate::orbifold::Word;
use crate::Complex;

/// Generic point whose orbit separates the elements of the groups we build.
pub(crate) const PROBE: Complex = Complex::new(0.012_345_67, 0.009_876_54);

const PROBE_TOL: f64 = 1e-7;

/// Equality of group elements with a tolerance scaled to the entry size, so
/// long products do not fail on accumulated rounding.
pub(crate) fn same_element(a: &Isometry, b: &Isometry) -> bool {
    let scale = a.max_abs_entry().max(b.max_abs_entry()).max(1.0);
    a.distance_to(b) <= 1e-8 * scale
}

/// Unit letters of a generating set; involutions only appear with exponent 1.
pub(crate) fn letters_for(gens: &[Isometry]) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        out.push((i, 1));
        if !g.compose(g).is_identity(1e-9) {
            out.push((i, -1));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub(crate) struct Ball {
    pub words: Vec<Word>,
    pub elements: Vec<Isometry>,
    pub lengths: Vec<usize>,
    pub truncated: bool,
    index: PointIndex,
}

impl Ball {
    /// All distinct elements of word length at most `max_len`, in order of
    /// first appearance; each is stored with a shortest word.
    pub fn new(gens: &[Isometry], max_len: usize, cap: usize) -> Ball {
        let letters = letters_for(gens);
        let mut ball = Ball {
            words: Vec::new(),
            elements: Vec::new(),
            lengths: Vec::new(),
            truncated: false,
            index: PointIndex::new(PROBE_TOL),
        };
        ball.push(Word::identity(), Isometry::IDENTITY, 0);
        let mut frontier = alloc::vec![0usize];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for &i in &frontier {
                for &(g, e) in &letters {
                    let el = ball.elements[i].compose(&gens[g].pow(e));
                    if ball.find(&el).is_some() {
                        continue;
                    }
                    let w = ball.words[i].concat(&Word::power(g, e));
                    next.push(ball.push(w, el, len));
                    if ball.elements.len() >= cap {
                        ball.truncated = true;
                        return ball;
                    }
                }
            }
            frontier = next;
        }
        ball
    }

    fn push(&mut self, w: Word, el: Isometry, len: usize) -> usize {
        self.index.insert(el.apply(PROBE));
        self.words.push(w);
        self.elements.push(el);
        self.lengths.push(len);
        self.elements.len() - 1
    }

    pub fn find(&self, target: &Isometry) -> Option<usize> {
        self.index
            .near(target.apply(PROBE), PROBE_TOL)
            .into_iter()
            .find(|&i| same_element(&self.elements[i], target))
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.elements.len()
    }
}

/// Meet-in-the-middle search for a shortest word of length at most
/// `max_len` over the ball's generators that evaluates to `target`. The ball
/// must have radius at least `ceil(max_len / 2)`.
pub(crate) fn express(ball: &Ball, target: &Isometry, max_len: usize) -> Option<Word> {
    let mut best: Option<(usize, Word)> = None;
    for (i, u) in ball.elements.iter().enumerate() {
        let lu = ball.lengths[i];
        if lu > max_len {
            break;
        }
        if let Some((bl, _)) = &best {
            if lu >= *bl {
                break;
            }
        }
        let rest = u.inverse().compose(target);
        if let Some(j) = ball.find(&rest) {
            let total = lu + ball.lengths[j];
            if total <= max_len && best.as_ref().is_none_or(|(bl, _)| total < *bl) {
                best = Some((total, ball.words[i].concat(&ball.words[j])));
            }
        }
    }
    best.map(|(_, w)| w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::evaluate_word;
    use alloc::vec;
    use core::f64::consts::TAU;

    fn triangle_rotations() -> Vec<Isometry> {
        // rotations of order 2 and 3 about the ends of a segment of length s
        // with cosh s chosen so that the product has order 7
        let (a, b, c) = (2.0f64, 3.0f64, 7.0f64);
        let pi = core::f64::consts::PI;
        let cosh_s =
            ((pi / c).cos() + (pi / a).cos() * (pi / b).cos()) / ((pi / a).sin() * (pi / b).sin());
        let s = cosh_s.acosh();
        let p = Complex::new((s / 2.0).tanh(), 0.0);
        vec![
            Isometry::rotation_about(Complex::new(0.0, 0.0), TAU / 2.0).unwrap(),
            Isometry::rotation_about(p, TAU / 3.0).unwrap(),
        ]
    }

    #[test]
    fn ball_dedups_relations() {
        let gens = triangle_rotations();
        let ball = Ball::new(&gens, 3, 10_000);
        // words of length <= 3 in a (order 2) and b (order 3): 1, a, b, B, ab, aB, ba, Ba, aba, abA.., etc.
        let expected = 1 + 3 + 4 + 6;
        assert_eq!(ball.len(), expected);
        for (w, g) in ball.words.iter().zip(&ball.elements) {
            assert!(same_element(&evaluate_word(w, &gens).unwrap(), g));
        }
    }

    #[test]
    fn meet_in_the_middle_finds_long_words() {
        let gens = triangle_rotations();
        let ball = Ball::new(&gens, 4, 10_000);
        let w = Word::from_letters([(0, 1), (1, 1), (0, 1), (1, -1), (0, 1), (1, 1), (0, 1)]);
        let target = evaluate_word(&w, &gens).unwrap();
        let found = express(&ball, &target, 8).unwrap();
        assert!(found.length() <= 7);
        assert!(same_element(&evaluate_word(&found, &gens).unwrap(), &target));
        assert!(express(&ball, &target, 2).is_none());
    }
}
