//! Words in the free group on `a, b` and Brown's criterion for characters of
//! two-generator one-relator groups.
//!
//! For a cyclically reduced relator `w` and a character `χ: ⟨a, b⟩ → ℤ` with
//! `χ(w) = 0`, walk along `w` recording the partial sums of `χ`. Over one
//! period this visits `|w|` heights. `χ` and `−χ` both lie in the BNS
//! invariant, so `ker χ` is finitely generated and the associated class
//! fibers, when the minimum and the maximum height are each attained exactly
//! once. Counting over a period makes the test invariant under cyclic
//! permutation of `w`.

use std::fmt;

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A generator (`0` for `a`, `1` for `b`) with exponent `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u8,
    pub exponent: i8,
}

impl Letter {
    pub const A: Self = Self { generator: 0, exponent: 1 };
    pub const A_INV: Self = Self { generator: 0, exponent: -1 };
    pub const B: Self = Self { generator: 1, exponent: 1 };
    pub const B_INV: Self = Self { generator: 1, exponent: -1 };

    pub fn inverse(self) -> Self {
        Self {
            exponent: -self.exponent,
            ..self
        }
    }

    fn as_char(self) -> char {
        match (self.generator, self.exponent) {
            (0, 1) => 'a',
            (0, _) => 'A',
            (_, 1) => 'b',
            _ => 'B',
        }
    }
}

/// A freely reduced word. Upper-case letters denote inverses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

/// Relator of the two-generator presentation of the census manifold x064.
pub const X064_RELATOR: &str = "a^2bab^-2a^-1b^2a^-1ba^-1b^-2";

impl Word {
    /// Builds and freely reduces.
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut w = Self { letters };
        w.reduce();
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cancels adjacent inverse pairs.
    pub fn reduce(&mut self) {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        self.letters = out;
    }

    /// Also cancels inverse pairs across the ends (conjugation).
    pub fn cyclic_reduce(&mut self) {
        self.reduce();
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        if k > 0 {
            self.letters = self.letters[k..n - k].to_vec();
        }
    }

    pub fn cyclically_reduced(&self) -> Self {
        let mut w = self.clone();
        w.cyclic_reduce();
        w
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, o: &Self) -> Self {
        Self::new(self.letters.iter().chain(&o.letters).copied().collect())
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Self::new(letters)
    }

    /// A freely reduced random word built from `len` uniformly chosen letters.
    pub fn random(len: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let all = [Letter::A, Letter::A_INV, Letter::B, Letter::B_INV];
        Self::new((0..len).map(|_| all[rng.random_range(0..4usize)]).collect())
    }
}

/// Parses letters `a`, `b`, `A = a⁻¹`, `B = b⁻¹`, each optionally followed by
/// `^n` for a signed integer `n`. Whitespace is ignored.
pub fn parse_word(s: &str) -> Result<Word> {
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let base = match c {
            'a' => Letter::A,
            'A' => Letter::A_INV,
            'b' => Letter::B,
            'B' => Letter::B_INV,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        i += 1;
        let mut power: i64 = 1;
        if i < chars.len() && chars[i].1 == '^' {
            let start = chars[i].0;
            i += 1;
            let mut digits = String::new();
            if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                digits.push(chars[i].1);
                i += 1;
            }
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                digits.push(chars[i].1);
                i += 1;
            }
            power = digits.parse().map_err(|_| Error::Parse {
                pos: start,
                msg: "expected an integer exponent after '^'".into(),
            })?;
        }
        let l = if power < 0 { base.inverse() } else { base };
        letters.extend(std::iter::repeat_n(l, power.unsigned_abs() as usize));
    }
    Ok(Word::new(letters))
}

/// `(Σ exponents of a, Σ exponents of b)`.
pub fn exponent_sums(w: &Word) -> (i64, i64) {
    w.letters.iter().fold((0, 0), |(sa, sb), l| match l.generator {
        0 => (sa + i64::from(l.exponent), sb),
        _ => (sa, sb + i64::from(l.exponent)),
    })
}

/// A nonzero character `a ↦ p, b ↦ q` with its primitive representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub p: i64,
    pub q: i64,
    pub primitive: (i64, i64),
}

impl Character {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(domain("Character::new", "zero character"));
        }
        let g = p.gcd(&q);
        Ok(Self {
            p,
            q,
            primitive: (p / g, q / g),
        })
    }

    pub fn is_primitive(&self) -> bool {
        (self.p, self.q) == self.primitive
    }

    pub fn eval(&self, w: &Word) -> i64 {
        let (sa, sb) = exponent_sums(w);
        self.p * sa + self.q * sb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrownStatus {
    BothDirections,
    OneDirection,
    Neither,
    NotApplicable,
}

/// Heights of the `χ`-walk over one period of the cyclic word.
pub fn walk(relator: &Word, chi: (i64, i64)) -> Vec<i64> {
    let mut h = 0;
    relator
        .letters
        .iter()
        .map(|l| {
            let here = h;
            h += i64::from(l.exponent) * if l.generator == 0 { chi.0 } else { chi.1 };
            here
        })
        .collect()
}

/// Brown's criterion for `χ = (p, q)` on the cyclic reduction of `relator`.
/// The zero character and characters not vanishing on the relator are
/// reported as `NotApplicable`.
pub fn brown_status(relator: &Word, chi: (i64, i64)) -> Result<BrownStatus> {
    let w = relator.cyclically_reduced();
    if w.is_empty() {
        return Err(domain("brown_status", "empty relator"));
    }
    if chi == (0, 0) {
        return Ok(BrownStatus::NotApplicable);
    }
    let (sa, sb) = exponent_sums(&w);
    if chi.0 * sa + chi.1 * sb != 0 {
        return Ok(BrownStatus::NotApplicable);
    }
    let heights = walk(&w, chi);
    let lo = *heights.iter().min().expect("nonempty");
    let hi = *heights.iter().max().expect("nonempty");
    let once = |v: i64| heights.iter().filter(|&&h| h == v).count() == 1;
    Ok(match (once(lo), once(hi)) {
        (true, true) => BrownStatus::BothDirections,
        (false, false) => BrownStatus::Neither,
        _ => BrownStatus::OneDirection,
    })
}

/// Primitive characters with `|p|, |q| ≤ bound` satisfying Brown's criterion
/// in both directions, ordered by `(p, q)`.
pub fn fibered_characters(relator: &Word, bound: i64) -> Result<Vec<Character>> {
    if bound < 1 {
        return Err(domain("fibered_characters", format!("bound must be at least 1, got {bound}")));
    }
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            if (p, q) == (0, 0) || p.gcd(&q) != 1 {
                continue;
            }
            if brown_status(relator, (p, q))? == BrownStatus::BothDirections {
                out.push(Character::new(p, q)?);
            }
        }
    }
    Ok(out)
}
