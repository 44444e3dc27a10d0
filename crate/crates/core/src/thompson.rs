//! Thompson's groups `F ⊂ T ⊂ V` as reduced tree-pair diagrams.
//!
//! An element is a list of pieces `(d_i, r_i)`: the standard dyadic interval
//! with address `d_i` is mapped affinely onto the one with address `r_i`,
//! i.e. `d_i·u ↦ r_i·u` on Cantor space. The domain addresses are the leaves
//! of the domain tree in order; `perm[i]` is the range leaf receiving piece `i`.

use std::fmt;
use std::str::FromStr;

use crate::dyadic::{Dyadic, Word};
use crate::error::{Error, Result};
use crate::forest::{join_words, Tree};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VElement {
    domain: Tree,
    range: Tree,
    /// 0-based: domain leaf `i` goes to range leaf `perm[i]`.
    perm: Vec<usize>,
}

/// Membership class of an element of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VClass {
    F,
    TMinusF,
    VMinusT,
}

impl fmt::Display for VClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VClass::F => "F",
            VClass::TMinusF => "T\\F",
            VClass::VMinusT => "V\\T",
        })
    }
}

impl VElement {
    pub fn identity() -> VElement {
        VElement {
            domain: Tree::trivial(),
            range: Tree::trivial(),
            perm: vec![0],
        }
    }

    /// Builds and reduces `(domain, range, perm)` with a 0-based `perm`.
    pub fn new(domain: Tree, range: Tree, perm: Vec<usize>) -> Result<VElement> {
        let n = domain.leaf_count();
        if range.leaf_count() != n || perm.len() != n {
            return Err(Error::Arity(format!(
                "{} domain leaves, {} range leaves, {} images",
                n,
                range.leaf_count(),
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotBijective(format!("{perm:?}")));
            }
        }
        let pieces = domain
            .leaves()
            .iter()
            .zip(&perm)
            .map(|(d, &p)| (d.clone(), range.leaves()[p].clone()))
            .collect();
        Ok(VElement::from_pieces_unchecked(pieces))
    }

    /// Pieces must be sorted by domain address and both sides must be
    /// complete prefix codes.
    fn from_pieces_unchecked(mut pieces: Vec<(Word, Word)>) -> VElement {
        reduce_pieces(&mut pieces);
        let domain_leaves: Vec<Word> = pieces.iter().map(|p| p.0.clone()).collect();
        let mut range_leaves: Vec<Word> = pieces.iter().map(|p| p.1.clone()).collect();
        range_leaves.sort();
        let perm = pieces
            .iter()
            .map(|(_, r)| range_leaves.binary_search(r).expect("range leaf present"))
            .collect();
        VElement {
            domain: Tree::from_leaves(domain_leaves).expect("domain is a tree"),
            range: Tree::from_leaves(range_leaves).expect("range is a tree"),
            perm,
        }
    }

    /// Builds an element from pieces `(d_i, r_i)` in any order.
    pub fn from_pieces(mut pieces: Vec<(Word, Word)>) -> Result<VElement> {
        pieces.sort();
        Tree::from_leaves(pieces.iter().map(|p| p.0.clone()).collect())?;
        let mut r: Vec<Word> = pieces.iter().map(|p| p.1.clone()).collect();
        r.sort();
        Tree::from_leaves(r)?;
        Ok(VElement::from_pieces_unchecked(pieces))
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    /// 0-based leaf bijection.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn leaf_count(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.len() == 1
    }

    /// `(domain address, range address)` in domain order.
    pub fn pieces(&self) -> Vec<(Word, Word)> {
        self.domain
            .leaves()
            .iter()
            .zip(&self.perm)
            .map(|(d, &p)| (d.clone(), self.range.leaves()[p].clone()))
            .collect()
    }

    pub fn inverse(&self) -> VElement {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        VElement {
            domain: self.range.clone(),
            range: self.domain.clone(),
            perm: inv,
        }
    }

    /// The composite `self ∘ other` (apply `other` first).
    pub fn multiply(&self, other: &VElement) -> VElement {
        let w = other.pieces();
        let v = self.pieces();
        let mid_v: Vec<Word> = v.iter().map(|p| p.0.clone()).collect();
        let mut mid_w: Vec<Word> = w.iter().map(|p| p.1.clone()).collect();
        mid_w.sort();
        let common = join_words(&mid_w, &mid_v);
        let mut pieces = Vec::with_capacity(common.len());
        for t in &common {
            let (wd, wr) = w.iter().find(|(_, r)| r.is_prefix_of(t)).expect("refines range of w");
            let (vd, vr) = v.iter().find(|(d, _)| d.is_prefix_of(t)).expect("refines domain of v");
            pieces.push((
                wd.concat(&t.bits()[wr.len()..]),
                vr.concat(&t.bits()[vd.len()..]),
            ));
        }
        pieces.sort();
        VElement::from_pieces_unchecked(pieces)
    }

    pub fn pow(&self, k: i64) -> VElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(VElement::identity(), |acc, _| acc.multiply(&base))
    }

    /// `φ v φ⁻¹`.
    pub fn conjugate(phi: &VElement, v: &VElement) -> VElement {
        phi.multiply(v).multiply(&phi.inverse())
    }

    fn piece_of(&self, x: &Dyadic) -> usize {
        self.domain.leaf_containing(x)
    }

    /// Prefix replacement on the piece containing `x`.
    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        let i = self.piece_of(x);
        let d = &self.domain.leaves()[i];
        let r = &self.range.leaves()[self.perm[i]];
        Dyadic::from_word(&r.concat(x.tail(d.len())))
    }

    /// `log₂ v′(x)`, the right-hand slope at `x`.
    pub fn slope_at(&self, x: &Dyadic) -> i64 {
        let i = self.piece_of(x);
        self.domain.leaves()[i].len() as i64 - self.range.leaves()[self.perm[i]].len() as i64
    }

    /// `ℓ_v(x) = log₂ v′(v⁻¹x)`.
    pub fn ell_at(&self, x: &Dyadic) -> i64 {
        let j = self.range.leaf_containing(x);
        let i = self.perm.iter().position(|&p| p == j).expect("perm is onto");
        self.domain.leaves()[i].len() as i64 - self.range.leaves()[j].len() as i64
    }

    /// `x ↦ log₂ v′(x)`, on the domain partition (then coarsened).
    pub fn slope_function(&self) -> SlopeFunction {
        SlopeFunction::from_pieces(
            self.pieces()
                .into_iter()
                .map(|(d, r)| {
                    let s = d.len() as i64 - r.len() as i64;
                    (d, s)
                })
                .collect(),
        )
        .expect("domain is a partition")
    }

    /// `ℓ_v`, on the range partition (then coarsened).
    pub fn ell_function(&self) -> SlopeFunction {
        SlopeFunction::from_pieces(
            self.pieces()
                .into_iter()
                .map(|(d, r)| {
                    let s = d.len() as i64 - r.len() as i64;
                    (r, s)
                })
                .collect(),
        )
        .expect("range is a partition")
    }

    pub fn class(&self) -> VClass {
        let n = self.perm.len();
        if self.perm.iter().enumerate().all(|(i, &p)| p == i) {
            VClass::F
        } else if self.perm.iter().enumerate().all(|(i, &p)| p == (i + self.perm[0]) % n) {
            VClass::TMinusF
        } else {
            VClass::VMinusT
        }
    }

    /// Deepest leaf of either tree.
    pub fn depth(&self) -> usize {
        self.domain.depth().max(self.range.depth())
    }

    /// The generator `x₀` of `F`: `[0,1/2) → [0,1/4)`, `[1/2,3/4) → [1/4,1/2)`,
    /// `[3/4,1) → [1/2,1)`.
    pub fn x0() -> VElement {
        "10100:11000:1,2,3".parse().expect("valid literal")
    }

    /// Exchanges the two halves of `[0,1)`.
    pub fn swap() -> VElement {
        "100:100:2,1".parse().expect("valid literal")
    }

    /// An element fixing `x` with `log₂ v′(x) = s`.
    ///
    /// Built from `g_n`, which maps `[0,1)` onto itself with slope `2^n` at 0,
    /// transplanted into the sdi whose address is the binary word of `x`.
    pub fn find_in_stabilizer(x: &Dyadic, s: i64) -> VElement {
        if s == 0 {
            return VElement::identity();
        }
        let n = s.unsigned_abs() as usize;
        // domain 0, 10, 110, …, 1ⁿ0, 1ⁿ⁺¹ ; range 0ⁿ⁺¹, 0ⁿ1, …, 01, 1.
        let mut dom = Vec::with_capacity(n + 2);
        let mut ran = Vec::with_capacity(n + 2);
        for k in 0..=n {
            dom.push(Word::from_bits((0..k).map(|_| true).chain([false])));
        }
        dom.push(Word::from_bits((0..=n).map(|_| true)));
        ran.push(Word::from_bits((0..=n).map(|_| false)));
        for k in (0..=n).rev() {
            ran.push(Word::from_bits((0..k).map(|_| false).chain([true])));
        }
        // g maps 0 into 0ⁿ⁺¹: slope 2^{1-(n+1)} = 2^{-n}
        let mut pieces: Vec<(Word, Word)> = dom.into_iter().zip(ran).collect();
        if s > 0 {
            pieces = pieces.into_iter().map(|(d, r)| (r, d)).collect();
        }
        let prefix = x.word();
        let mut all: Vec<(Word, Word)> = pieces
            .into_iter()
            .map(|(d, r)| (prefix.concat(d.bits()), prefix.concat(r.bits())))
            .collect();
        all.extend(complement(prefix).into_iter().map(|w| (w.clone(), w)));
        VElement::from_pieces(all).expect("well-formed stabilizer witness")
    }

    /// An element mapping `x` to `y`.
    ///
    /// Pads both words with zeros to a common length `L`, then uses the path
    /// trees with `L+1` leaves, sending leaf `x` to leaf `y` and the others in
    /// order.
    pub fn find_transitive(x: &Dyadic, y: &Dyadic) -> VElement {
        let len = x.exponent().max(y.exponent()).max(1);
        let pad = |z: &Dyadic| Word::from_bits((0..len).map(|i| z.bit(i)));
        let (wx, wy) = (pad(x), pad(y));
        let mut dom = complement(&wx);
        dom.push(wx.clone());
        dom.sort();
        let mut ran = complement(&wy);
        ran.push(wy.clone());
        ran.sort();
        let xi = dom.iter().position(|w| *w == wx).unwrap();
        let yi = ran.iter().position(|w| *w == wy).unwrap();
        let mut rest: Vec<Word> = ran.iter().enumerate().filter(|(i, _)| *i != yi).map(|(_, w)| w.clone()).collect();
        rest.reverse();
        let pieces = dom
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let r = if i == xi { ran[yi].clone() } else { rest.pop().unwrap() };
                (d.clone(), r)
            })
            .collect();
        VElement::from_pieces(pieces).expect("well-formed transitivity witness")
    }
}

/// The siblings along the path to `w`: together with `w` a complete prefix code.
fn complement(w: &Word) -> Vec<Word> {
    (0..w.len())
        .map(|k| Word::from_bits(w.bits()[..k].iter().copied().chain([!w.bits()[k]])))
        .collect()
}

/// Cancels sibling domain pairs `w0,w1` sent onto sibling range pairs `u0,u1`.
fn reduce_pieces(pieces: &mut Vec<(Word, Word)>) {
    loop {
        let hit = pieces.windows(2).position(|p| {
            let (d0, r0) = &p[0];
            let (d1, r1) = &p[1];
            d0.last() == Some(false)
                && d1.last() == Some(true)
                && d0.parent() == d1.parent()
                && r0.last() == Some(false)
                && r1.last() == Some(true)
                && r0.parent() == r1.parent()
        });
        match hit {
            Some(i) => {
                let d = pieces[i].0.parent().unwrap();
                let r = pieces[i].1.parent().unwrap();
                pieces.splice(i..i + 2, [(d, r)]);
            }
            None => break,
        }
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "{}:{}:{}", self.domain, self.range, perm.join(","))
    }
}

impl fmt::Debug for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({self})")
    }
}

impl FromStr for VElement {
    type Err = Error;

    /// `domainTree:rangeTree:p1,...,pn` with a 1-based permutation.
    fn from_str(s: &str) -> Result<VElement> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [d, r, p] = parts.as_slice() else {
            return Err(Error::Parse(format!("`{s}` is not domain:range:perm")));
        };
        let perm = p
            .split(',')
            .map(|x| match x.trim().parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Parse(format!("bad permutation entry `{x}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        VElement::new(Tree::parse(d)?, Tree::parse(r)?, perm)
    }
}

/// A locally constant `Z`-valued function on Cantor space, constant on the
/// intervals of a standard dyadic partition. Stored in its coarsest form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SlopeFunction {
    pieces: Vec<(Word, i64)>,
}

impl SlopeFunction {
    pub fn constant(c: i64) -> SlopeFunction {
        SlopeFunction {
            pieces: vec![(Word::empty(), c)],
        }
    }

    pub fn from_pieces(mut pieces: Vec<(Word, i64)>) -> Result<SlopeFunction> {
        pieces.sort();
        Tree::from_leaves(pieces.iter().map(|p| p.0.clone()).collect())?;
        loop {
            let hit = pieces.windows(2).position(|p| {
                p[0].1 == p[1].1
                    && p[0].0.last() == Some(false)
                    && p[1].0.last() == Some(true)
                    && p[0].0.parent() == p[1].0.parent()
            });
            match hit {
                Some(i) => {
                    let merged = (pieces[i].0.parent().unwrap(), pieces[i].1);
                    pieces.splice(i..i + 2, [merged]);
                }
                None => break,
            }
        }
        Ok(SlopeFunction { pieces })
    }

    pub fn pieces(&self) -> &[(Word, i64)] {
        &self.pieces
    }

    pub fn eval(&self, x: &Dyadic) -> i64 {
        self.pieces
            .iter()
            .find(|(w, _)| x.lies_in(w))
            .map(|p| p.1)
            .expect("pieces cover [0,1)")
    }

    fn refined(&self, words: &[Word]) -> Vec<i64> {
        words
            .iter()
            .map(|t| self.pieces.iter().find(|(w, _)| w.is_prefix_of(t)).unwrap().1)
            .collect()
    }

    pub fn add(&self, other: &SlopeFunction) -> SlopeFunction {
        let a: Vec<Word> = self.pieces.iter().map(|p| p.0.clone()).collect();
        let b: Vec<Word> = other.pieces.iter().map(|p| p.0.clone()).collect();
        let common = join_words(&a, &b);
        let x = self.refined(&common);
        let y = other.refined(&common);
        let pieces = common.into_iter().zip(x.iter().zip(&y).map(|(p, q)| p + q)).collect();
        SlopeFunction::from_pieces(pieces).expect("join is a partition")
    }

    /// `x ↦ self(v⁻¹x)`.
    pub fn push_forward(&self, v: &VElement) -> SlopeFunction {
        let words: Vec<Word> = self.pieces.iter().map(|p| p.0.clone()).collect();
        let vd: Vec<Word> = v.domain().leaves().to_vec();
        let common = join_words(&words, &vd);
        let labels = self.refined(&common);
        let vp = v.pieces();
        let pieces = common
            .into_iter()
            .zip(labels)
            .map(|(t, l)| {
                let (d, r) = vp.iter().find(|(d, _)| d.is_prefix_of(&t)).unwrap();
                (r.concat(&t.bits()[d.len()..]), l)
            })
            .collect();
        SlopeFunction::from_pieces(pieces).expect("image of a partition")
    }
}

impl fmt::Display for SlopeFunction {
    /// `tree|l1,l2,...` with one label per leaf.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tree = Tree::from_leaves(self.pieces.iter().map(|p| p.0.clone()).collect()).unwrap();
        let labels: Vec<String> = self.pieces.iter().map(|p| p.1.to_string()).collect();
        write!(f, "{}|{}", tree, labels.join(","))
    }
}

impl fmt::Debug for SlopeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlopeFunction({self})")
    }
}

impl FromStr for SlopeFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<SlopeFunction> {
        let (t, l) = s
            .trim()
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("`{s}` is not tree|labels")))?;
        let tree = Tree::parse(t)?;
        let labels = l
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad label `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        if labels.len() != tree.leaf_count() {
            return Err(Error::Arity(format!("{} labels for {} leaves", labels.len(), tree.leaf_count())));
        }
        SlopeFunction::from_pieces(tree.leaves().iter().cloned().zip(labels).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VElement {
        s.parse().unwrap()
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn reduction() {
        assert_eq!(v("100:100:1,2"), VElement::identity());
        assert_eq!(v("100:100:2,1").to_string(), "100:100:2,1");
        assert_eq!(VElement::x0().to_string(), "10100:11000:1,2,3");
        assert_eq!(v("1100100:1100100:1,2,3,4"), VElement::identity());
        assert!("100:0:1,2".parse::<VElement>().is_err());
        assert!("100:100:1,1".parse::<VElement>().is_err());
    }

    #[test]
    fn inverse_and_products() {
        let x0 = VElement::x0();
        assert_eq!(x0.inverse().to_string(), "11000:10100:1,2,3");
        assert_eq!(x0.multiply(&x0.inverse()), VElement::identity());
        assert_eq!(VElement::swap().multiply(&VElement::swap()), VElement::identity());
        assert_eq!(VElement::swap().inverse(), VElement::swap());
    }

    #[test]
    fn action_and_slopes() {
        let x0 = VElement::x0();
        assert_eq!(x0.apply(&d("1/2")), d("1/4"));
        assert_eq!(VElement::swap().apply(&d("1/4")), d("3/4"));
        assert_eq!(x0.slope_at(&d("0")), -1);
        assert_eq!(x0.slope_at(&d("7/8")), 1);
        assert_eq!(x0.slope_function().to_string(), "10100|-1,0,1");
        assert_eq!(VElement::identity().slope_function(), SlopeFunction::constant(0));
    }

    #[test]
    fn classes() {
        assert_eq!(VElement::x0().class(), VClass::F);
        assert_eq!(VElement::swap().class(), VClass::TMinusF);
        assert_eq!(v("10100:10100:1,3,2").class(), VClass::VMinusT);
    }

    #[test]
    fn witnesses() {
        assert_eq!(VElement::find_in_stabilizer(&d("0"), 1), VElement::x0().inverse());
        assert_eq!(VElement::find_in_stabilizer(&d("0"), -1), VElement::x0());
        let w = VElement::find_in_stabilizer(&d("1/2"), -3);
        assert_eq!(w.apply(&d("1/2")), d("1/2"));
        assert_eq!(w.slope_at(&d("1/2")), -3);
        assert_eq!(VElement::find_transitive(&d("0"), &d("1/2")), VElement::swap());
        assert_eq!(VElement::find_transitive(&d("1/4"), &d("7/8")).apply(&d("1/4")), d("7/8"));
        assert_eq!(VElement::find_transitive(&d("3/8"), &d("3/8")), VElement::identity());
    }
}
