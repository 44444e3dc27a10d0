//! The category of binary forests and its dictionary with standard dyadic
//! partitions of `[0,1)`.
//!
//! A tree is stored by its leaf addresses, left to right. The preorder
//! encoding (`1` internal, `0` leaf) is derived on demand.

use std::fmt;
use std::str::FromStr;

use crate::dyadic::{Dyadic, Word};
use crate::error::{Error, Result};

/// A finite rooted ordered binary tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    leaves: Vec<Word>,
}

impl Tree {
    pub fn trivial() -> Tree {
        Tree {
            leaves: vec![Word::empty()],
        }
    }

    /// The single caret `Y`.
    pub fn caret() -> Tree {
        Tree {
            leaves: vec![Word::parse("0").unwrap(), Word::parse("1").unwrap()],
        }
    }

    /// Checks that `leaves` is a complete prefix code listed left to right.
    pub fn from_leaves(leaves: Vec<Word>) -> Result<Tree> {
        fn check(prefix: &Word, leaves: &[Word]) -> bool {
            match leaves {
                [] => false,
                [only] if only == prefix => true,
                _ => {
                    let split = leaves.partition_point(|w| w.len() > prefix.len() && !w.bits()[prefix.len()]);
                    let (left, right) = leaves.split_at(split);
                    let d = prefix.len();
                    left.iter().all(|w| w.len() > d && prefix.is_prefix_of(w))
                        && right.iter().all(|w| w.len() > d && prefix.is_prefix_of(w) && w.bits()[d])
                        && check(&prefix.child(false), left)
                        && check(&prefix.child(true), right)
                }
            }
        }
        if check(&Word::empty(), &leaves) {
            Ok(Tree { leaves })
        } else {
            let shown: Vec<String> = leaves.iter().map(|w| w.to_string()).collect();
            Err(Error::MalformedTree(format!("leaf set {{{}}}", shown.join(","))))
        }
    }

    /// Parses a preorder word, validating it with the running counter.
    pub fn parse(text: &str) -> Result<Tree> {
        let bad = || Error::MalformedTree(text.to_string());
        let mut c: i64 = 1;
        for (i, ch) in text.chars().enumerate() {
            if c <= 0 {
                return Err(bad());
            }
            match ch {
                '1' => c += 1,
                '0' => c -= 1,
                _ => return Err(bad()),
            }
            if c == 0 && i + 1 != text.len() {
                return Err(bad());
            }
        }
        if c != 0 {
            return Err(bad());
        }
        let mut leaves = Vec::new();
        let mut stack = vec![Word::empty()];
        for ch in text.chars() {
            let node = stack.pop().ok_or_else(bad)?;
            if ch == '1' {
                stack.push(node.child(true));
                stack.push(node.child(false));
            } else {
                leaves.push(node);
            }
        }
        Ok(Tree { leaves })
    }

    pub fn encode(&self) -> String {
        // Walk leaves in order: each leaf is preceded by the carets opened
        // since the previous leaf, i.e. its trailing run of 0-edges.
        let mut out = String::new();
        for leaf in &self.leaves {
            let zeros = leaf.bits().iter().rev().take_while(|b| !**b).count();
            for _ in 0..zeros {
                out.push('1');
            }
            out.push('0');
        }
        out
    }

    pub fn leaves(&self) -> &[Word] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.leaves.iter().map(Word::len).collect()
    }

    pub fn depth(&self) -> usize {
        self.leaves.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.leaves.len() == 1
    }

    /// Replaces leaf `i` by the tree `subtrees[i]`.
    pub fn graft(&self, subtrees: &[Tree]) -> Result<Tree> {
        if subtrees.len() != self.leaves.len() {
            return Err(Error::Arity(format!(
                "grafting {} trees onto {} leaves",
                subtrees.len(),
                self.leaves.len()
            )));
        }
        let leaves = self
            .leaves
            .iter()
            .zip(subtrees)
            .flat_map(|(leaf, sub)| sub.leaves.iter().map(move |w| leaf.concat(w.bits())))
            .collect();
        Ok(Tree { leaves })
    }

    /// The smallest tree refining both (union of the two leaf sets, minus
    /// words that have a strict extension in the other set).
    pub fn join(&self, other: &Tree) -> Tree {
        Tree {
            leaves: join_words(&self.leaves, &other.leaves),
        }
    }

    /// Is every leaf of `self` below some leaf of `coarser`?
    pub fn refines(&self, coarser: &Tree) -> bool {
        self.leaves
            .iter()
            .all(|w| coarser.leaves.iter().any(|c| c.is_prefix_of(w)))
    }

    /// Index of the leaf whose interval contains `x`.
    pub fn leaf_containing(&self, x: &Dyadic) -> usize {
        self.leaves
            .iter()
            .position(|w| x.lies_in(w))
            .expect("leaves of a tree cover [0,1)")
    }

    /// The tree with every leaf at depth `n`.
    pub fn complete(n: usize) -> Tree {
        let leaves = (0..1usize << n)
            .map(|i| Word::from_bits((0..n).map(|k| (i >> (n - 1 - k)) & 1 == 1)))
            .collect();
        Tree { leaves }
    }

    pub fn to_sdp(&self) -> Sdp {
        Sdp {
            intervals: self.leaves.iter().cloned().map(Sdi::new).collect(),
        }
    }
}

/// Union of two complete prefix codes' refinements, sorted.
pub(crate) fn join_words(a: &[Word], b: &[Word]) -> Vec<Word> {
    let keep = |w: &Word, other: &[Word]| !other.iter().any(|o| o.len() > w.len() && w.is_prefix_of(o));
    let mut out: Vec<Word> = a
        .iter()
        .filter(|w| keep(w, b))
        .chain(b.iter().filter(|w| keep(w, a)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.encode())
    }
}

impl FromStr for Tree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tree> {
        Tree::parse(s.trim())
    }
}

/// A morphism of the category of forests: an ordered list of trees.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Forest {
        Forest { trees }
    }

    pub fn identity(n: usize) -> Forest {
        Forest {
            trees: vec![Tree::trivial(); n],
        }
    }

    /// `f_{j,n}`: `n` roots, a caret on root `j` (1-based), trivial elsewhere.
    pub fn generator(j: usize, n: usize) -> Result<Forest> {
        if j == 0 || j > n {
            return Err(Error::GeneratorIndex { j, n });
        }
        let mut trees = vec![Tree::trivial(); n];
        trees[j - 1] = Tree::caret();
        Ok(Forest { trees })
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn roots(&self) -> usize {
        self.trees.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.trees.iter().map(Tree::leaf_count).sum()
    }

    /// `top ∘ bottom`: tree `i` of `top` is grafted onto leaf `i` of `bottom`.
    pub fn compose(top: &Forest, bottom: &Forest) -> Result<Forest> {
        if top.roots() != bottom.leaf_count() {
            return Err(Error::Arity(format!(
                "top has {} roots, bottom has {} leaves",
                top.roots(),
                bottom.leaf_count()
            )));
        }
        let mut rest = top.trees.as_slice();
        let mut trees = Vec::with_capacity(bottom.roots());
        for t in &bottom.trees {
            let (mine, tail) = rest.split_at(t.leaf_count());
            trees.push(t.graft(mine)?);
            rest = tail;
        }
        Ok(Forest { trees })
    }

    pub fn tensor(left: &Forest, right: &Forest) -> Forest {
        let mut trees = left.trees.clone();
        trees.extend(right.trees.iter().cloned());
        Forest { trees }
    }

    /// Generators `(j, n)` in order of application, so that composing them
    /// (first one at the bottom) rebuilds `self`.
    pub fn decompose(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut layer: Vec<Tree> = self.trees.clone();
        while let Some(i) = layer.iter().position(|t| !t.is_trivial()) {
            let n = layer.len();
            let t = layer.remove(i);
            let (left, right): (Vec<Word>, Vec<Word>) =
                t.leaves.into_iter().partition(|w| !w.bits()[0]);
            let strip = |ws: Vec<Word>| Tree {
                leaves: ws.iter().map(|w| Word::from_bits(w.bits()[1..].iter().copied())).collect(),
            };
            layer.insert(i, strip(right));
            layer.insert(i, strip(left));
            out.push((i + 1, n));
        }
        out
    }

    /// Composes generators listed in order of application onto `n` roots.
    pub fn from_generators(n: usize, gens: &[(usize, usize)]) -> Result<Forest> {
        let mut acc = Forest::identity(n);
        for &(j, m) in gens {
            acc = Forest::compose(&Forest::generator(j, m)?, &acc)?;
        }
        Ok(acc)
    }

    pub fn parse(text: &str) -> Result<Forest> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Forest::default());
        }
        text.split(',').map(Tree::parse).collect::<Result<_>>().map(Forest::new)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.trees.iter().map(Tree::encode).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest[{self}]")
    }
}

/// Standard dyadic interval `[a/2^b, (a+1)/2^b)` with address `m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sdi {
    word: Word,
}

impl Sdi {
    pub fn new(word: Word) -> Sdi {
        Sdi { word }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn left_endpoint(&self) -> Dyadic {
        Dyadic::from_word(&self.word)
    }

    /// `b` with width `2^{-b}`.
    pub fn width_exponent(&self) -> usize {
        self.word.len()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        x.lies_in(&self.word)
    }

    pub fn is_subset_of(&self, other: &Sdi) -> bool {
        other.word.is_prefix_of(&self.word)
    }
}

impl fmt::Display for Sdi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.word.len();
        let right = self.word.as_integer() + 1u32;
        if right.bits() as usize > b {
            write!(f, "[{},1)", self.left_endpoint())
        } else {
            write!(f, "[{},{})", self.left_endpoint(), Dyadic::from_big(&right, b).expect("below 1"))
        }
    }
}

/// Standard dyadic partition: sdis ordered left to right covering `[0,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sdp {
    intervals: Vec<Sdi>,
}

impl Sdp {
    pub fn new(intervals: Vec<Sdi>) -> Result<Sdp> {
        let tree = Tree::from_leaves(intervals.iter().map(|i| i.word.clone()).collect())?;
        Ok(tree.to_sdp())
    }

    pub fn intervals(&self) -> &[Sdi] {
        &self.intervals
    }

    pub fn to_tree(&self) -> Tree {
        Tree {
            leaves: self.intervals.iter().map(|i| i.word.clone()).collect(),
        }
    }

    /// Every interval of `coarser` is a union of intervals of `self`.
    pub fn refines(&self, coarser: &Sdp) -> bool {
        self.to_tree().refines(&coarser.to_tree())
    }
}
