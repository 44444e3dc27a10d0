//! Reference computations used to check the main algorithms: brute-force
//! scans over all dyadics up to a fixed exponent, the tree-level Jones
//! action, and a union-find model of the direct limit along `α`.
//!
//! Nothing outside tests and the `verify` battery calls into this module.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::dyadic::{Dyadic, Word};
use crate::fraction::{TreeRepresentative, Twist};
use crate::forest::Tree;
use crate::group::{FiniteGroup, GroupMap};
use crate::thompson::VElement;

/// Exponent bound of the scans.
pub const SCAN_EXPONENT: usize = 12;

/// Every dyadic `a/2^b` with `b ≤ max_exp`.
pub fn all_dyadics(max_exp: usize) -> impl Iterator<Item = Dyadic> {
    (0u128..1u128 << max_exp).map(move |a| Dyadic::new(a, max_exp as u32).expect("below 1"))
}

/// 2-adic valuation from the rational `a/2^b`, with `ν(0) = 0`.
pub fn valuation(x: &Dyadic) -> i64 {
    let a = x.numerator();
    if a == BigUint::default() {
        0
    } else {
        a.trailing_zeros().unwrap() as i64 - x.exponent() as i64
    }
}

/// `x = (4k+1)/2^n` for some integers `k, n`.
pub fn in_y(x: &Dyadic) -> bool {
    let a = x.numerator();
    if a == BigUint::default() {
        return false;
    }
    let odd = &a >> a.trailing_zeros().unwrap();
    (odd % 4u32) == BigUint::from(1u32)
}

/// `p_v(x) = log₂ v′(v⁻¹x) − ν(x) + ν(v⁻¹x)` at every scanned point.
pub fn p_cocycle_scan(v: &VElement, max_exp: usize) -> BTreeMap<Dyadic, i64> {
    let vi = v.inverse();
    all_dyadics(max_exp)
        .filter_map(|x| {
            let y = vi.apply(&x);
            let p = -vi.slope_at(&x) - valuation(&x) + valuation(&y);
            (p != 0).then_some((x, p))
        })
        .collect()
}

/// Scanned points with `log₂ v′(x) ≠ ν(vx) − ν(x)`.
pub fn exception_scan(v: &VElement, max_exp: usize) -> BTreeSet<Dyadic> {
    all_dyadics(max_exp)
        .filter(|x| v.slope_at(x) != valuation(&v.apply(x)) - valuation(x))
        .collect()
}

/// Scanned points of `Y Δ vY`.
pub fn y_defect_scan(v: &VElement, max_exp: usize) -> BTreeSet<Dyadic> {
    let vi = v.inverse();
    all_dyadics(max_exp)
        .filter(|x| in_y(x) != in_y(&vi.apply(x)))
        .collect()
}

/// A bound making the scans exhaustive for `v`: exceptions sit at piece
/// endpoints and midpoints of depth at most `v.depth() + 1`.
pub fn scan_bound(v: &VElement) -> usize {
    SCAN_EXPONENT.max(v.depth() + 1)
}

/// `γ_φ(x) = log₂ φ′(φ⁻¹0) − log₂ φ′(φ⁻¹x)` by the chain rule.
pub fn gamma_closed(phi: &VElement, x: &Dyadic) -> i64 {
    let pi = phi.inverse();
    phi.slope_at(&pi.apply(&Dyadic::zero())) - phi.slope_at(&pi.apply(x))
}

/// The Jones action on tree representatives: refine the tree until `v` is
/// affine on each leaf (a caret sends `g` to `(α(g), e)`), then move each
/// leaf value to the image leaf.
pub fn jones_by_trees(tw: &Twist, v: &VElement, rep: &TreeRepresentative) -> TreeRepresentative {
    let mut leaves: Vec<(Word, usize)> = rep
        .tree
        .leaves()
        .iter()
        .cloned()
        .zip(rep.values.iter().copied())
        .collect();
    loop {
        let split = leaves.iter().position(|(w, _)| {
            !v.domain().leaves().iter().any(|d| d.is_prefix_of(w))
        });
        let Some(i) = split else { break };
        let (w, g) = leaves.remove(i);
        leaves.insert(i, (w.child(true), 0));
        leaves.insert(i, (w.child(false), tw.alpha().apply(g)));
    }
    let pieces = v.pieces();
    let mut moved: Vec<(Word, usize)> = leaves
        .into_iter()
        .map(|(w, g)| {
            let (d, r) = pieces.iter().find(|(d, _)| d.is_prefix_of(&w)).unwrap();
            (r.concat(&w.bits()[d.len()..]), g)
        })
        .collect();
    moved.sort();
    let tree = Tree::from_leaves(moved.iter().map(|m| m.0.clone()).collect()).expect("image of a tree");
    TreeRepresentative {
        tree,
        values: moved.into_iter().map(|m| m.1).collect(),
    }
}

/// Direct limit of `Γ → Γ → …` along `α`, modelled on levels `0..=levels`
/// by union-find over pairs `(g, n)` with `(g, n) ~ (α(g), n+1)`.
///
/// Classes meeting some level `n ≤ levels − stable` are the elements of the
/// limit; each such class has exactly one member on the top level.
pub struct LimitModel {
    pub levels: usize,
    /// Top-level representatives of the limit elements, sorted.
    pub top: Vec<usize>,
}

impl LimitModel {
    pub fn build(alpha: &GroupMap, stable: usize) -> LimitModel {
        let g = alpha.source();
        let n = g.order();
        let levels = 2 * stable + 1;
        let id = |x: usize, lvl: usize| lvl * n + x;
        let mut parent: Vec<usize> = (0..n * (levels + 1)).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for lvl in 0..levels {
            for x in g.elements() {
                let a = find(&mut parent, id(x, lvl));
                let b = find(&mut parent, id(alpha.apply(x), lvl + 1));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut classes: BTreeMap<usize, usize> = BTreeMap::new();
        for x in g.elements() {
            let root = find(&mut parent, id(x, levels));
            classes.insert(root, x);
        }
        let mut live = BTreeSet::new();
        for lvl in 0..=(levels - stable) {
            for x in g.elements() {
                let root = find(&mut parent, id(x, lvl));
                live.insert(classes[&root]);
            }
        }
        LimitModel {
            levels,
            top: live.into_iter().collect(),
        }
    }

    /// Checks that `embedding` (limit index → Γ index) with `auto` realises
    /// this model: the map `[h, top] ↦ auto^{-levels}(h)` is a bijection onto
    /// the embedded subgroup, multiplicative, and intertwines `α` with `auto`.
    pub fn agrees_with(&self, g: &FiniteGroup, alpha: &GroupMap, embedding: &[usize], auto: &GroupMap) -> bool {
        if self.top.len() != embedding.len() {
            return false;
        }
        let Ok(back) = auto.power(-(self.levels as i64)) else {
            return false;
        };
        let index = |h: usize| embedding.iter().position(|&e| e == h);
        let mut psi = BTreeMap::new();
        for &h in &self.top {
            let Some(i) = index(h) else { return false };
            psi.insert(h, back.apply(i));
        }
        let images: BTreeSet<usize> = psi.values().copied().collect();
        if images.len() != embedding.len() {
            return false;
        }
        self.top.iter().all(|&a| {
            let pa = psi[&a];
            let mult = self.top.iter().all(|&b| {
                let ab = g.mul(a, b);
                psi.get(&ab) == Some(&auto.target().mul(pa, psi[&b]))
            });
            mult && psi.get(&alpha.apply(a)) == Some(&auto.apply(pa))
        })
    }
}
