//! Isomorphism of fraction groups over finite coefficients.
//!
//! `G_α ≅ G_{α̃}` iff, after passing to the limit pairs, some isomorphism
//! `β: lim Γ → lim Γ̃` and `h ∈ lim Γ̃` satisfy `α̃ = ad(h)∘β∘α∘β⁻¹`. For a
//! finite `Γ` the limit is the eventual image of `α`, on which `α` is
//! bijective. The infinite groups themselves are never built.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{enumerate_isomorphisms, FiniteGroup, GroupMap};

/// `(lim Γ, lim α)` realised inside `Γ`.
#[derive(Clone, Debug)]
pub struct LimPair {
    pub group: Arc<FiniteGroup>,
    /// `α` restricted to the eventual image.
    pub auto: GroupMap,
    /// First `n` with `αⁿ(Γ) = αⁿ⁺¹(Γ)`.
    pub n0: usize,
    /// `embedding[i]` is the element of `Γ` behind index `i` of `group`.
    pub embedding: Vec<usize>,
}

pub fn limit_pair(alpha: &GroupMap) -> Result<LimPair> {
    if !alpha.is_endomorphism() {
        return Err(Error::NotHomomorphism("α must be an endomorphism".into()));
    }
    let g = alpha.source();
    let mut image: Vec<usize> = g.elements().collect();
    let mut n0 = 0;
    loop {
        let mut next: Vec<usize> = image.iter().map(|&x| alpha.apply(x)).collect();
        next.sort_unstable();
        next.dedup();
        if next == image {
            break;
        }
        image = next;
        n0 += 1;
    }
    let group = Arc::new(g.subgroup(&image)?);
    let images = image
        .iter()
        .map(|&x| image.binary_search(&alpha.apply(x)).expect("image is stable"))
        .collect();
    let auto = GroupMap::new(group.clone(), group.clone(), images)?;
    Ok(LimPair {
        group,
        auto,
        n0,
        embedding: image,
    })
}

/// `α̃ = ad(h)∘β∘α∘β⁻¹` on the limit groups; `h` indexes `lim Γ̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub beta: GroupMap,
    pub h: usize,
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = (self.beta.source(), self.beta.target());
        let pairs: Vec<String> = s
            .elements()
            .map(|x| format!("{}->{}", s.name(x), t.name(self.beta.apply(x))))
            .collect();
        write!(f, "beta: {}; h: {}", pairs.join(" "), t.name(self.h))
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub isomorphic: bool,
    pub witness: Option<IsoWitness>,
    pub left: LimPair,
    pub right: LimPair,
}

fn satisfies(left: &LimPair, right: &LimPair, beta: &GroupMap, h: usize) -> bool {
    let t = &right.group;
    let hinv = t.inv(h);
    left.group.elements().all(|y| {
        let lhs = right.auto.apply(beta.apply(y));
        let rhs = t.mul(t.mul(h, beta.apply(left.auto.apply(y))), hinv);
        lhs == rhs
    })
}

/// Exhaustive search in the order (β image tuple, h index); the first hit is
/// returned.
pub fn decide_iso(alpha: &GroupMap, alpha2: &GroupMap) -> Result<Decision> {
    let left = limit_pair(alpha)?;
    let right = limit_pair(alpha2)?;
    let betas = enumerate_isomorphisms(&left.group, &right.group);
    let witness = betas.par_iter().find_map_first(|beta| {
        right
            .group
            .elements()
            .find(|&h| satisfies(&left, &right, beta, h))
            .map(|h| IsoWitness { beta: beta.clone(), h })
    });
    Ok(Decision {
        isomorphic: witness.is_some(),
        witness,
        left,
        right,
    })
}

pub fn check_witness(alpha: &GroupMap, alpha2: &GroupMap, w: &IsoWitness) -> Result<bool> {
    let left = limit_pair(alpha)?;
    let right = limit_pair(alpha2)?;
    let shapes_match = w.beta.source().order() == left.group.order()
        && w.beta.target().order() == right.group.order()
        && w.beta.is_bijective()
        && right.group.contains(w.h);
    if !shapes_match {
        return Ok(false);
    }
    // re-seat β on the freshly computed limit groups before comparing
    let beta = match GroupMap::new(left.group.clone(), right.group.clone(), w.beta.images().to_vec()) {
        Ok(b) => b,
        Err(_) => return Ok(false),
    };
    Ok(satisfies(&left, &right, &beta, w.h))
}
