//! The decorated category `C_Φ`: forests followed by a leaf permutation and
//! one group element per leaf, for a pair of endomorphisms `(α₀, α₁)`.
//!
//! A morphism `(f, σ, g)` means `g ∘ σ ∘ f`: grow the forest, send leaf `k`
//! to position `σ(k)`, then decorate position `j` by `g_j`. Decorations are
//! pushed through a caret by `g ↦ (α₀(g), α₁(g))`.

use std::sync::Arc;

use crate::dyadic::Word;
use crate::error::{Error, Result};
use crate::forest::{Forest, Tree};
use crate::fraction::{theta_t, GElement, TreeRepresentative, Twist};
use crate::group::{FiniteGroup, GroupMap};
use crate::thompson::VElement;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedMorphism {
    pub forest: Forest,
    /// 0-based: forest leaf `k` goes to position `perm[k]`.
    pub perm: Vec<usize>,
    /// Indexed by position after the permutation.
    pub decorations: Vec<usize>,
}

impl DecoratedMorphism {
    pub fn new(forest: Forest, perm: Vec<usize>, decorations: Vec<usize>) -> Result<DecoratedMorphism> {
        let n = forest.leaf_count();
        if perm.len() != n || decorations.len() != n {
            return Err(Error::Arity(format!(
                "{} leaves, {} permutation entries, {} decorations",
                n,
                perm.len(),
                decorations.len()
            )));
        }
        let mut seen = vec![false; n];
        if perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::NotBijective(format!("{perm:?}")));
        }
        Ok(DecoratedMorphism {
            forest,
            perm,
            decorations,
        })
    }

    /// A bare forest with identity permutation and trivial decorations.
    pub fn from_forest(forest: Forest) -> DecoratedMorphism {
        let n = forest.leaf_count();
        DecoratedMorphism {
            forest,
            perm: (0..n).collect(),
            decorations: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> DecoratedMorphism {
        DecoratedMorphism::from_forest(Forest::identity(n))
    }

    pub fn roots(&self) -> usize {
        self.forest.roots()
    }

    pub fn leaf_count(&self) -> usize {
        self.perm.len()
    }
}

/// `C_Φ` for a group and a pair `(α₀, α₁)` of endomorphisms.
#[derive(Clone, Debug)]
pub struct DecoratedCategory {
    group: Arc<FiniteGroup>,
    alpha0: GroupMap,
    alpha1: GroupMap,
}

impl DecoratedCategory {
    pub fn new(alpha0: GroupMap, alpha1: GroupMap) -> Result<DecoratedCategory> {
        if !alpha0.is_endomorphism() || alpha0.source() != alpha1.source() || !alpha1.is_endomorphism() {
            return Err(Error::Arity("α₀ and α₁ must be endomorphisms of one group".into()));
        }
        Ok(DecoratedCategory {
            group: alpha0.source().clone(),
            alpha0,
            alpha1,
        })
    }

    /// `(α, ε)`: the pair the fraction groups `G_α` come from.
    pub fn twisted(alpha: GroupMap) -> Result<DecoratedCategory> {
        let eps = GroupMap::trivial(alpha.source());
        DecoratedCategory::new(alpha, eps)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `g` carried from a root down the edge path `path`.
    fn push_down(&self, g: usize, path: &Word) -> usize {
        path.bits().iter().fold(g, |acc, &b| {
            if b {
                self.alpha1.apply(acc)
            } else {
                self.alpha0.apply(acc)
            }
        })
    }

    /// `m2 ∘ m1`.
    pub fn compose(&self, m2: &DecoratedMorphism, m1: &DecoratedMorphism) -> Result<DecoratedMorphism> {
        if m2.roots() != m1.leaf_count() {
            return Err(Error::Arity(format!(
                "{} roots on top of {} leaves",
                m2.roots(),
                m1.leaf_count()
            )));
        }
        let g = &self.group;
        let f2 = m2.forest.trees();
        // m1's decorations pushed through f2, indexed by f2's leaves.
        let mut pushed = Vec::with_capacity(m2.leaf_count());
        for (root, tree) in f2.iter().enumerate() {
            for leaf in tree.leaves() {
                pushed.push(self.push_down(m1.decorations[root], leaf));
            }
        }
        let decorations: Vec<usize> = {
            let mut moved = vec![0; pushed.len()];
            for (k, &d) in pushed.iter().enumerate() {
                moved[m2.perm[k]] = d;
            }
            moved
                .iter()
                .zip(&m2.decorations)
                .map(|(&low, &high)| g.mul(high, low))
                .collect()
        };
        // f2 ∘ σ1 = (block permutation) ∘ f2' with f2' tree k = f2 tree σ1(k).
        let mut offsets = Vec::with_capacity(f2.len());
        let mut acc = 0;
        for t in f2 {
            offsets.push(acc);
            acc += t.leaf_count();
        }
        let mut reordered = vec![Tree::trivial(); f2.len()];
        let mut block = Vec::with_capacity(acc);
        for k in 0..f2.len() {
            let src = m1.perm[k];
            reordered[k] = f2[src].clone();
            block.extend((0..f2[src].leaf_count()).map(|i| offsets[src] + i));
        }
        let forest = Forest::compose(&Forest::new(reordered), &m1.forest)?;
        let perm = block.iter().map(|&b| m2.perm[b]).collect();
        DecoratedMorphism::new(forest, perm, decorations)
    }

    /// Inverse of an automorphism `(identity forest, σ, g)` of an object.
    pub fn invert_automorphism(&self, m: &DecoratedMorphism) -> Result<DecoratedMorphism> {
        if m.forest.leaf_count() != m.forest.roots() {
            return Err(Error::Arity("only permutation-decoration morphisms are invertible".into()));
        }
        let n = m.perm.len();
        let mut inv = vec![0; n];
        for (k, &p) in m.perm.iter().enumerate() {
            inv[p] = k;
        }
        // σ⁻¹ ∘ g⁻¹: the value g_j⁻¹ at position j travels to σ⁻¹(j).
        let mut decorations = vec![0; n];
        for j in 0..n {
            decorations[inv[j]] = self.group.inv(m.decorations[j]);
        }
        DecoratedMorphism::new(m.forest.clone(), inv, decorations)
    }
}

/// A fraction `num/den` of two morphisms out of the object 1; it stands for
/// `num⁻¹ ∘ den`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedFraction {
    pub num: DecoratedMorphism,
    pub den: DecoratedMorphism,
}

impl DecoratedFraction {
    pub fn new(num: DecoratedMorphism, den: DecoratedMorphism) -> Result<DecoratedFraction> {
        if num.roots() != 1 || den.roots() != 1 || num.leaf_count() != den.leaf_count() {
            return Err(Error::Arity("fraction needs two trees with equal leaf counts".into()));
        }
        Ok(DecoratedFraction { num, den })
    }
}

/// The forest `q` with `q ∘ s = fine` for a tree `fine` refining `s`.
fn expansion(s: &Tree, fine: &Tree) -> Forest {
    Forest::new(
        s.leaves()
            .iter()
            .map(|l| {
                let below = fine
                    .leaves()
                    .iter()
                    .filter(|w| l.is_prefix_of(w))
                    .map(|w| Word::from_bits(w.bits()[l.len()..].iter().copied()))
                    .collect();
                Tree::from_leaves(below).expect("subtree of a refinement")
            })
            .collect(),
    )
}

impl DecoratedCategory {
    /// `(N₁/D₁)(N₂/D₂) = (p∘N₁)/(p′∘D₂)` for `p∘D₁ = p′∘N₂`.
    pub fn fraction_multiply(&self, a: &DecoratedFraction, b: &DecoratedFraction) -> Result<DecoratedFraction> {
        let d1 = &a.den;
        let n2 = &b.num;
        let s1 = &d1.forest.trees()[0];
        let s2 = &n2.forest.trees()[0];
        let common = s1.join(s2);
        let strip = |m: &DecoratedMorphism| DecoratedMorphism {
            forest: Forest::identity(m.leaf_count()),
            perm: m.perm.clone(),
            decorations: m.decorations.clone(),
        };
        let p = self.compose(
            &DecoratedMorphism::from_forest(expansion(s1, &common)),
            &self.invert_automorphism(&strip(d1))?,
        )?;
        let p2 = self.compose(
            &DecoratedMorphism::from_forest(expansion(s2, &common)),
            &self.invert_automorphism(&strip(n2))?,
        )?;
        DecoratedFraction::new(self.compose(&p, &a.num)?, self.compose(&p2, &b.den)?)
    }

    /// The isomorphism onto `K ⋊ V` (needs `α₁` trivial, `α₀` bijective).
    ///
    /// Rewrites `(g∘τ∘t)/(h∘σ∘s)` as `t/(h′∘σ′∘s)`, which is
    /// `θ_t(h′, t) · v` with `v` sending leaf `k` of `s` to leaf `σ′(k)` of `t`.
    pub fn fraction_to_semidirect(&self, frac: &DecoratedFraction) -> Result<GElement> {
        if self.alpha1.images().iter().any(|&x| x != 0) {
            return Err(Error::Unsupported("α₁ must be the trivial endomorphism".into()));
        }
        let tw = Twist::new(self.alpha0.clone())?;
        let num = &frac.num;
        let top = DecoratedMorphism {
            forest: Forest::identity(num.leaf_count()),
            perm: num.perm.clone(),
            decorations: num.decorations.clone(),
        };
        let den = self.compose(&self.invert_automorphism(&top)?, &frac.den)?;
        let t = num.forest.trees()[0].clone();
        let s = den.forest.trees()[0].clone();
        let k = theta_t(&tw, &TreeRepresentative::new(t.clone(), den.decorations.clone())?);
        let v = VElement::new(s, t, den.perm.clone())?;
        Ok(GElement::new(k, v))
    }
}
