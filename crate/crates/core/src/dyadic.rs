//! Binary words (addresses in Cantor space) and dyadic rationals in `[0,1)`.
//!
//! A dyadic rational is stored as its binary expansion with trailing zeros
//! stripped, so `3/8` is the word `011`. Lexicographic order on such words
//! coincides with the order of the reals they denote.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// A finite word over {0,1}; `false` is a left edge, `true` a right edge.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Word(bits.into_iter().collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("`{text}` is not a binary word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, bit: bool) -> Word {
        let mut bits = self.0.clone();
        bits.push(bit);
        Word(bits)
    }

    pub fn concat(&self, tail: &[bool]) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(tail);
        Word(bits)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Word with the last letter removed; `None` for the empty word.
    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<bool> {
        self.0.last().copied()
    }

    /// The word read as a binary integer.
    pub fn as_integer(&self) -> BigUint {
        let mut n = BigUint::default();
        for &b in &self.0 {
            n <<= 1u32;
            if b {
                n += 1u32;
            }
        }
        n
    }

    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// An element of `Z[1/2] ∩ [0,1)`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic {
    word: Word,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic::default()
    }

    /// The point `w·000…` of Cantor space.
    pub fn from_word(word: &Word) -> Self {
        let end = word.0.iter().rposition(|&b| b).map_or(0, |i| i + 1);
        Dyadic {
            word: Word(word.0[..end].to_vec()),
        }
    }

    /// `num / 2^exp`, reduced. Fails unless `num < 2^exp`.
    pub fn new(num: u128, exp: u32) -> Result<Self> {
        if exp > 127 || num >> exp != 0 {
            return Err(Error::Parse(format!("{num}/2^{exp} is not in [0,1)")));
        }
        let bits = (0..exp).map(|i| (num >> (exp - 1 - i)) & 1 == 1);
        Ok(Dyadic::from_word(&Word::from_bits(bits)))
    }

    /// `num / 2^exp` for an arbitrary-precision numerator.
    pub fn from_big(num: &BigUint, exp: usize) -> Result<Self> {
        if num.bits() as usize > exp {
            return Err(Error::Parse(format!("{num}/2^{exp} is not in [0,1)")));
        }
        let bits = (0..exp).map(|i| num.bit((exp - 1 - i) as u64));
        Ok(Dyadic::from_word(&Word::from_bits(bits)))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn is_zero(&self) -> bool {
        self.word.is_empty()
    }

    /// `b` in the reduced form `a/2^b`.
    pub fn exponent(&self) -> usize {
        self.word.len()
    }

    pub fn numerator(&self) -> BigUint {
        self.word.as_integer()
    }

    /// The `i`-th binary digit after the point (zero past the stored word).
    pub fn bit(&self, i: usize) -> bool {
        self.word.0.get(i).copied().unwrap_or(false)
    }

    /// Does the standard dyadic interval with address `w` contain this point?
    pub fn lies_in(&self, w: &Word) -> bool {
        w.0.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }

    /// Binary digits after the first `n`, trailing zeros stripped.
    pub fn tail(&self, n: usize) -> &[bool] {
        if n >= self.word.len() {
            &[]
        } else {
            &self.word.0[n..]
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/2^{}", self.numerator(), self.exponent())
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `0`, `a/2^b`, and `a/d` with `d` a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a dyadic rational in [0,1)"));
        if s == "0" {
            return Ok(Dyadic::zero());
        }
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let num: BigUint = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        let exp = if let Some(e) = den.strip_prefix("2^") {
            e.parse::<usize>().map_err(|_| bad())?
        } else {
            let d: BigUint = den.parse().map_err(|_| bad())?;
            if d.count_ones() != 1 {
                return Err(bad());
            }
            d.trailing_zeros().unwrap_or(0) as usize
        };
        Dyadic::from_big(&num, exp).map_err(|_| bad())
    }
}
