//! The limit group `K = ⊕_{Q₂} Γ`, the twisted Jones action of `V` on it,
//! and the semidirect product `G = K ⋊ V` in wreath form.
//!
//! `V` acts by `π_v(a)(vx) = α^{log₂ v′(x)}(a(x))`. Group elements are
//! pairs `(a, v)` standing for `a·v`, multiplied by
//! `(a,v)(b,w) = (a·π_v(b), vw)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::dyadic::{Dyadic, Word};
use crate::error::{Error, Result};
use crate::forest::Tree;
use crate::group::{FiniteGroup, GroupMap};
use crate::thompson::VElement;

/// A coefficient pair `(Γ, α)` with `α` an automorphism, with its powers
/// cached over one period.
#[derive(Clone, Debug)]
pub struct Twist {
    alpha: GroupMap,
    cycle: Vec<Vec<usize>>,
}

impl Twist {
    pub fn new(alpha: GroupMap) -> Result<Twist> {
        if !alpha.is_endomorphism() {
            return Err(Error::Arity("twist must be an endomorphism".into()));
        }
        if !alpha.is_bijective() {
            return Err(Error::NotBijective("twisting endomorphism must be an automorphism".into()));
        }
        let g = alpha.source().clone();
        let mut cycle = vec![g.elements().collect::<Vec<_>>()];
        loop {
            let next: Vec<usize> = cycle.last().unwrap().iter().map(|&x| alpha.apply(x)).collect();
            if next.iter().enumerate().all(|(i, &y)| i == y) {
                break;
            }
            cycle.push(next);
        }
        Ok(Twist { alpha, cycle })
    }

    pub fn untwisted(g: &Arc<FiniteGroup>) -> Twist {
        Twist::new(GroupMap::identity(g)).expect("identity is an automorphism")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.alpha.source()
    }

    pub fn alpha(&self) -> &GroupMap {
        &self.alpha
    }

    /// `α^k(g)` for any integer `k`.
    pub fn pow(&self, k: i64, g: usize) -> usize {
        let m = self.cycle.len() as i64;
        self.cycle[k.rem_euclid(m) as usize][g]
    }
}

/// A finitely supported map `Q₂ → Γ`; absent keys carry the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct KElement {
    values: BTreeMap<Dyadic, usize>,
}

impl KElement {
    pub fn neutral() -> KElement {
        KElement::default()
    }

    pub fn single(x: Dyadic, g: usize) -> KElement {
        KElement::from_pairs([(x, g)])
    }

    /// Later pairs overwrite earlier ones at the same point.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Dyadic, usize)>) -> KElement {
        let mut values = BTreeMap::new();
        for (x, g) in pairs {
            if g == 0 {
                values.remove(&x);
            } else {
                values.insert(x, g);
            }
        }
        KElement { values }
    }

    pub fn get(&self, x: &Dyadic) -> usize {
        self.values.get(x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Dyadic> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Dyadic, usize)> {
        self.values.iter().map(|(x, &g)| (x, g))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_neutral(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise product `(ab)(x) = a(x)b(x)`.
    pub fn mul(&self, other: &KElement, g: &FiniteGroup) -> KElement {
        let keys: std::collections::BTreeSet<&Dyadic> = self.values.keys().chain(other.values.keys()).collect();
        KElement::from_pairs(keys.into_iter().map(|x| (x.clone(), g.mul(self.get(x), other.get(x)))))
    }

    pub fn inv(&self, g: &FiniteGroup) -> KElement {
        self.map_values(|x| g.inv(x))
    }

    /// Applies `f` to every stored value; `f` must fix the identity.
    pub fn map_values(&self, f: impl Fn(usize) -> usize) -> KElement {
        KElement::from_pairs(self.values.iter().map(|(x, &g)| (x.clone(), f(g))))
    }

    /// Moves the value at `x` to `h(x)`; `h` must be injective on the support.
    pub fn relocate(&self, h: impl Fn(&Dyadic) -> Dyadic) -> KElement {
        KElement::from_pairs(self.values.iter().map(|(x, &g)| (h(x), g)))
    }

    /// `x1=g1;x2=g2;...` with element indices or names; empty text is neutral.
    pub fn parse(text: &str, g: &FiniteGroup) -> Result<KElement> {
        let mut pairs = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("`{part}` is not point=element")))?;
            let x: Dyadic = x.parse()?;
            if pairs.iter().any(|(y, _)| *y == x) {
                return Err(Error::Parse(format!("point {x} listed twice")));
            }
            pairs.push((x, g.element(v)?));
        }
        Ok(KElement::from_pairs(pairs))
    }

    /// Text form using the group's element names.
    pub fn format(&self, g: &FiniteGroup) -> String {
        let parts: Vec<String> = self.values.iter().map(|(x, &v)| format!("{x}={}", g.name(v))).collect();
        parts.join(";")
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(x, v)| format!("{x}={v}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{{{self}}}")
    }
}

/// An element `a·v` of `K ⋊ V`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GElement {
    pub k: KElement,
    pub v: VElement,
}

impl GElement {
    pub fn new(k: KElement, v: VElement) -> GElement {
        GElement { k, v }
    }

    pub fn identity() -> GElement {
        GElement::new(KElement::neutral(), VElement::identity())
    }

    pub fn from_k(k: KElement) -> GElement {
        GElement::new(k, VElement::identity())
    }

    pub fn from_v(v: VElement) -> GElement {
        GElement::new(KElement::neutral(), v)
    }

    /// `K * V`; the `K` part may be empty.
    pub fn parse(text: &str, g: &FiniteGroup) -> Result<GElement> {
        let (k, v) = text
            .split_once('*')
            .ok_or_else(|| Error::Parse(format!("`{text}` is not `K * V`")))?;
        Ok(GElement::new(KElement::parse(k, g)?, v.parse()?))
    }

    pub fn format(&self, g: &FiniteGroup) -> String {
        let k = self.k.format(g);
        if k.is_empty() {
            format!("* {}", self.v)
        } else {
            format!("{k} * {}", self.v)
        }
    }
}

/// `π_v(a)`: the point `x` moves to `v(x)` and its value is twisted by
/// `α^{log₂ v′(x)}`.
pub fn jones_act(tw: &Twist, v: &VElement, a: &KElement) -> KElement {
    KElement::from_pairs(a.iter().map(|(x, g)| (v.apply(x), tw.pow(v.slope_at(x), g))))
}

pub fn g_multiply(tw: &Twist, g1: &GElement, g2: &GElement) -> GElement {
    let moved = jones_act(tw, &g1.v, &g2.k);
    GElement::new(g1.k.mul(&moved, tw.group()), g1.v.multiply(&g2.v))
}

pub fn g_invert(tw: &Twist, g: &GElement) -> GElement {
    let vi = g.v.inverse();
    GElement::new(jones_act(tw, &vi, &g.k.inv(tw.group())), vi)
}

/// `(g, t)`: one group element per leaf of `t`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeRepresentative {
    pub tree: Tree,
    pub values: Vec<usize>,
}

impl TreeRepresentative {
    pub fn new(tree: Tree, values: Vec<usize>) -> Result<TreeRepresentative> {
        if tree.leaf_count() != values.len() {
            return Err(Error::Arity(format!(
                "{} values for {} leaves",
                values.len(),
                tree.leaf_count()
            )));
        }
        Ok(TreeRepresentative { tree, values })
    }

    /// `tree|g1,g2,...` with names or indices.
    pub fn parse(text: &str, g: &FiniteGroup) -> Result<TreeRepresentative> {
        let (t, vals) = text
            .trim()
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("`{text}` is not tree|values")))?;
        let values = vals.split(',').map(|v| g.element(v)).collect::<Result<Vec<_>>>()?;
        TreeRepresentative::new(Tree::parse(t)?, values)
    }

    pub fn format(&self, g: &FiniteGroup) -> String {
        let vals: Vec<String> = self.values.iter().map(|&v| g.name(v)).collect();
        format!("{}|{}", self.tree, vals.join(","))
    }
}

/// `θ_t(g)(r_ℓ) = α^{-depth(ℓ)}(g_ℓ)` at the left endpoint `r_ℓ` of each leaf.
pub fn theta_t(tw: &Twist, rep: &TreeRepresentative) -> KElement {
    KElement::from_pairs(
        rep.tree
            .leaves()
            .iter()
            .zip(&rep.values)
            .map(|(w, &g)| (Dyadic::from_word(w), tw.pow(-(w.len() as i64), g))),
    )
}

/// The smallest tree whose leaf left-endpoints contain the support of `a`,
/// with the values making `theta_t` return `a`.
pub fn theta_inverse(tw: &Twist, a: &KElement) -> TreeRepresentative {
    fn build(w: Word, pts: &[&Dyadic], out: &mut Vec<Word>) {
        let start = Dyadic::from_word(&w);
        if pts.iter().all(|p| **p == start) {
            out.push(w);
            return;
        }
        let (left, right): (Vec<&Dyadic>, Vec<&Dyadic>) =
            pts.iter().partition(|p| !p.bit(w.len()));
        build(w.child(false), &left, out);
        build(w.child(true), &right, out);
    }
    let pts: Vec<&Dyadic> = a.support().collect();
    let mut leaves = Vec::new();
    build(Word::empty(), &pts, &mut leaves);
    let values = leaves
        .iter()
        .map(|w| tw.pow(w.len() as i64, a.get(&Dyadic::from_word(w))))
        .collect();
    let tree = Tree::from_leaves(leaves).expect("recursive splitting yields a tree");
    TreeRepresentative { tree, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn z4_inversion() -> Twist {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        Twist::new(GroupMap::inversion(&z4).unwrap()).unwrap()
    }

    #[test]
    fn jones_examples() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let id = Twist::untwisted(&z4);
        let a = KElement::single(d("1/4"), 2);
        assert_eq!(jones_act(&id, &VElement::swap(), &a), KElement::single(d("3/4"), 2));
        let tw = z4_inversion();
        let a = KElement::single(d("0"), 1);
        assert_eq!(jones_act(&tw, &VElement::x0().inverse(), &a), KElement::single(d("0"), 3));
        assert_eq!(jones_act(&tw, &VElement::identity(), &a), a);
        let mul2 = GroupMap::power_map(&z4, 2).unwrap();
        assert!(Twist::new(mul2).is_err());
    }

    #[test]
    fn theta_example() {
        let tw = z4_inversion();
        let rep = TreeRepresentative::new(Tree::parse("10100").unwrap(), vec![1, 1, 2]).unwrap();
        let k = theta_t(&tw, &rep);
        assert_eq!(k.to_string(), "0=3;1/2^1=1;3/2^2=2");
        assert_eq!(theta_inverse(&tw, &k), rep);
    }

    #[test]
    fn theta_inverse_minimal() {
        let tw = z4_inversion();
        let neutral = theta_inverse(&tw, &KElement::neutral());
        assert_eq!(neutral.tree, Tree::trivial());
        assert_eq!(neutral.values, vec![0]);
        let at0 = theta_inverse(&tw, &KElement::single(Dyadic::zero(), 2));
        assert_eq!(at0.tree, Tree::trivial());
        assert_eq!(at0.values, vec![2]);
    }

    #[test]
    fn group_law_basics() {
        let tw = z4_inversion();
        let g = GElement::new(KElement::from_pairs([(d("1/2"), 1), (d("3/8"), 2)]), VElement::x0());
        let e = g_multiply(&tw, &g, &g_invert(&tw, &g));
        assert_eq!(e, GElement::identity());
        let a = GElement::from_k(KElement::single(d("1/2"), 1));
        let b = GElement::from_k(KElement::from_pairs([(d("1/2"), 2), (d("0"), 1)]));
        assert_eq!(g_multiply(&tw, &a, &b).k.to_string(), "0=1;1/2^1=3");
    }

    #[test]
    fn text_round_trip() {
        let s3 = FiniteGroup::symmetric3();
        let g = GElement::parse("1/2=(12);3/8=(123) * 10100:11000:1,2,3", &s3).unwrap();
        assert_eq!(GElement::parse(&g.format(&s3), &s3).unwrap(), g);
        assert_eq!(GElement::parse(" * 0:0:1", &s3).unwrap(), GElement::identity());
    }
}
