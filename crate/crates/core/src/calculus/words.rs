//! The vector-field classes `𝒫_i` and `𝒫̄_i`.
//!
//! `𝒫_{2j+2}` holds the products `∂_r V_1 ∂_r V_2 ⋯ ∂_r V_{j+1}` and
//! `𝒫_{2j+1}` the products `V_{j+1} ∂_r V_1 ⋯ ∂_r V_j`, with every
//! `V_k ∈ {D_r, 1/r}`. The barred classes append a rightmost `∂_r`.

use std::fmt;

use super::grid::GridFunction;
use crate::error::{Error, Result};

/// One letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Partial,
    Dr,
    InvR,
}

impl Letter {
    fn apply(self, f: &GridFunction) -> GridFunction {
        match self {
            Letter::Partial => f.partial(),
            Letter::Dr => f.dr(),
            Letter::InvR => f.over_r(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordClass {
    P,
    PBar,
}

/// A member of `𝒫_i` or `𝒫̄_i`, letters written left to right as in the
/// operator product, so the rightmost letter acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFieldWord {
    pub class: WordClass,
    pub order: usize,
    pub letters: Vec<Letter>,
}

impl VectorFieldWord {
    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        self.letters.iter().rev().fold(f.clone(), |acc, l| l.apply(&acc))
    }
}

impl fmt::Display for VectorFieldWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<&str> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Partial => "∂_r",
                Letter::Dr => "D_r",
                Letter::InvR => "(1/r)",
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Largest order accepted by [`enumerate_p`].
pub const MAX_WORD_ORDER: usize = 6;

/// All distinct words of `𝒫_i` (class `P`) or `𝒫̄_i` (class `PBar`).
pub fn enumerate_p(i: usize, class: WordClass) -> Result<Vec<VectorFieldWord>> {
    if i > MAX_WORD_ORDER {
        return Err(Error::OrderTooHigh { order: i, max: MAX_WORD_ORDER });
    }
    let letters = match class {
        WordClass::P => p_letters(i),
        WordClass::PBar => {
            if i == 0 {
                vec![vec![]]
            } else {
                p_letters(i - 1)
                    .into_iter()
                    .map(|mut w| {
                        w.push(Letter::Partial);
                        w
                    })
                    .collect()
            }
        }
    };
    Ok(letters
        .into_iter()
        .map(|letters| VectorFieldWord { class, order: i, letters })
        .collect())
}

fn p_letters(i: usize) -> Vec<Vec<Letter>> {
    if i == 0 {
        return vec![vec![]];
    }
    let pairs = i / 2;
    let lead = i % 2 == 1;
    let slots = pairs + usize::from(lead);
    let mut out = Vec::with_capacity(1 << slots);
    for mask in 0..(1usize << slots) {
        let pick = |k: usize| if mask >> k & 1 == 0 { Letter::Dr } else { Letter::InvR };
        let mut w = Vec::with_capacity(i);
        let mut slot = 0;
        if lead {
            w.push(pick(slot));
            slot += 1;
        }
        for _ in 0..pairs {
            w.push(Letter::Partial);
            w.push(pick(slot));
            slot += 1;
        }
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_classes() {
        let p0 = enumerate_p(0, WordClass::P).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(p0[0].letters.is_empty());

        let p1 = enumerate_p(1, WordClass::P).unwrap();
        assert_eq!(p1.len(), 2);
        assert_eq!(p1[0].letters, vec![Letter::Dr]);
        assert_eq!(p1[1].letters, vec![Letter::InvR]);

        let p2 = enumerate_p(2, WordClass::P).unwrap();
        assert_eq!(p2.len(), 2);
        assert_eq!(p2[0].letters, vec![Letter::Partial, Letter::Dr]);
        assert_eq!(p2[1].letters, vec![Letter::Partial, Letter::InvR]);
    }

    #[test]
    fn word_lengths_match_order() {
        for i in 0..=MAX_WORD_ORDER {
            for class in [WordClass::P, WordClass::PBar] {
                for w in enumerate_p(i, class).unwrap() {
                    assert_eq!(w.letters.len(), i);
                }
            }
            assert_eq!(enumerate_p(i, WordClass::P).unwrap().len(), 1 << i.div_ceil(2));
        }
    }

    #[test]
    fn barred_words_end_with_partial() {
        let w = enumerate_p(3, WordClass::PBar).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|w| *w.letters.last().unwrap() == Letter::Partial));
    }

    #[test]
    fn rejects_high_orders() {
        assert!(enumerate_p(7, WordClass::P).is_err());
    }

    #[test]
    fn first_word_is_the_d_operator() {
        use crate::calculus::{GridFunction, Parity, RadialGrid};
        let g = RadialGrid::new(64, 4).unwrap();
        let f = GridFunction::from_fn(&g, Parity::Odd, |r| r.sin());
        for i in 1..=4 {
            let w = &enumerate_p(i, WordClass::P).unwrap()[0];
            assert!((w.apply(&f) - f.di(i).unwrap()).max_abs() < 1e-12);
        }
    }
}
