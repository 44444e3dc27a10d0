//! Seeded generators for random trees, group elements and test inputs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automorphism::NormalizerMap;
use crate::decorated::DecoratedMorphism;
use crate::dyadic::{Dyadic, Word};
use crate::forest::{Forest, Tree};
use crate::fraction::{GElement, KElement, TreeRepresentative};
use crate::group::FiniteGroup;
use crate::thompson::VElement;

/// An independent stream for trial `stream` under `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A tree with exactly `leaves` leaves, grown by splitting uniform leaves.
pub fn tree(rng: &mut impl Rng, leaves: usize) -> Tree {
    let mut ws = vec![Word::empty()];
    while ws.len() < leaves.max(1) {
        let i = rng.gen_range(0..ws.len());
        let w = ws.remove(i);
        ws.push(w.child(false));
        ws.push(w.child(true));
    }
    ws.sort();
    Tree::from_leaves(ws).expect("split leaves form a tree")
}

/// A random element of `V` with at most `max_leaves` leaves before reduction.
pub fn v_element(rng: &mut impl Rng, max_leaves: usize) -> VElement {
    let n = rng.gen_range(1..=max_leaves.max(1));
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    VElement::new(tree(rng, n), tree(rng, n), perm).expect("matching sizes")
}

/// A random element of `F`.
pub fn f_element(rng: &mut impl Rng, max_leaves: usize) -> VElement {
    let n = rng.gen_range(1..=max_leaves.max(1));
    VElement::new(tree(rng, n), tree(rng, n), (0..n).collect()).expect("matching sizes")
}

/// Exponent uniform in `0..=max_exp`, then a uniform odd numerator.
pub fn dyadic(rng: &mut impl Rng, max_exp: usize) -> Dyadic {
    let b = rng.gen_range(0..=max_exp);
    if b == 0 {
        return Dyadic::zero();
    }
    let mut bits: Vec<bool> = (0..b - 1).map(|_| rng.gen()).collect();
    bits.push(true);
    Dyadic::from_word(&Word::from_bits(bits))
}

pub fn element(rng: &mut impl Rng, g: &FiniteGroup) -> usize {
    rng.gen_range(0..g.order())
}

pub fn k_element(rng: &mut impl Rng, g: &FiniteGroup, max_support: usize, max_exp: usize) -> KElement {
    let n = rng.gen_range(0..=max_support);
    KElement::from_pairs((0..n).map(|_| (dyadic(rng, max_exp), element(rng, g))))
}

pub fn g_element(rng: &mut impl Rng, g: &FiniteGroup, max_leaves: usize) -> GElement {
    GElement::new(k_element(rng, g, 4, 6), v_element(rng, max_leaves))
}

pub fn tree_representative(rng: &mut impl Rng, g: &FiniteGroup, max_leaves: usize) -> TreeRepresentative {
    let n = rng.gen_range(1..=max_leaves.max(1));
    let values = (0..n).map(|_| element(rng, g)).collect();
    TreeRepresentative::new(tree(rng, n), values).expect("matching sizes")
}

/// A forest on `roots` roots with `extra` carets spread uniformly.
pub fn forest(rng: &mut impl Rng, roots: usize, extra: usize) -> Forest {
    let mut sizes = vec![1usize; roots];
    for _ in 0..extra {
        if roots > 0 {
            sizes[rng.gen_range(0..roots)] += 1;
        }
    }
    Forest::new(sizes.into_iter().map(|n| tree(rng, n)).collect())
}

pub fn decorated(rng: &mut impl Rng, g: &FiniteGroup, roots: usize, extra: usize) -> DecoratedMorphism {
    let f = forest(rng, roots, extra);
    let n = f.leaf_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let decorations = (0..n).map(|_| element(rng, g)).collect();
    DecoratedMorphism::new(f, perm, decorations).expect("matching sizes")
}

/// A representable normaliser map; indicator factors are drawn from the
/// central involutions of `g`.
pub fn normalizer_map(rng: &mut impl Rng, g: &Arc<FiniteGroup>) -> NormalizerMap {
    let involutions: Vec<usize> = g.center().into_iter().filter(|&z| z != 0 && g.mul(z, z) == 0).collect();
    let mut indicators = Vec::new();
    if !involutions.is_empty() && rng.gen_bool(0.5) {
        indicators.push(*involutions.choose(rng).unwrap());
    }
    NormalizerMap::new(g.clone(), element(rng, g), k_element(rng, g, 3, 5), indicators).expect("valid parts")
}
