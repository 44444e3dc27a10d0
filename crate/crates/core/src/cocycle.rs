//! The dyadic valuation `ν`, the finitely supported cocycle `p_v`, slope
//! cocycles and the decomposition of abelian-valued cocycles of `V ↷ Q₂`.
//!
//! Inside a piece `d·u ↦ r·u` of `v` with `u` nonempty the last `1` of the
//! word moves with the piece, so `ν(vx) − ν(x)` is exactly the slope. Only
//! the left endpoints `d·000…` can be exceptions, which makes `p_v` and
//! `F_v` exactly computable from the pieces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::thompson::{SlopeFunction, VElement};

/// `ν(x)` with `ν(0) = 0`: the exponent of 2 in `x`.
pub fn nu(x: &Dyadic) -> i64 {
    if x.is_zero() {
        0
    } else {
        -(x.exponent() as i64)
    }
}

/// `ν(p/q)` for an arbitrary rational, with `ν(0) = 0`.
pub fn nu_rational(p: i128, q: i128) -> Result<i64> {
    if q == 0 {
        return Err(Error::Parse("zero denominator".into()));
    }
    if p == 0 {
        return Ok(0);
    }
    Ok(p.trailing_zeros() as i64 - q.trailing_zeros() as i64)
}

/// A finitely supported map `Q₂ → Z`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ZMap {
    values: BTreeMap<Dyadic, i64>,
}

impl ZMap {
    /// Values at repeated points are added.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Dyadic, i64)>) -> ZMap {
        let mut values: BTreeMap<Dyadic, i64> = BTreeMap::new();
        for (x, n) in pairs {
            *values.entry(x).or_default() += n;
        }
        values.retain(|_, n| *n != 0);
        ZMap { values }
    }

    pub fn get(&self, x: &Dyadic) -> i64 {
        self.values.get(x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Dyadic, i64)> {
        self.values.iter().map(|(x, &n)| (x, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Dyadic> {
        self.values.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &ZMap) -> ZMap {
        ZMap::from_pairs(self.iter().chain(other.iter()).map(|(x, n)| (x.clone(), n)))
    }

    pub fn neg(&self) -> ZMap {
        ZMap::from_pairs(self.iter().map(|(x, n)| (x.clone(), -n)))
    }

    /// `x ↦ self(v⁻¹x)`.
    pub fn push_forward(&self, v: &VElement) -> ZMap {
        ZMap::from_pairs(self.iter().map(|(x, n)| (v.apply(x), n)))
    }

    pub fn sum(&self) -> i64 {
        self.values.values().sum()
    }

    pub fn as_map(&self) -> &BTreeMap<Dyadic, i64> {
        &self.values
    }
}

impl fmt::Display for ZMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(x, n)| format!("{x}={n}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for ZMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{{{self}}}")
    }
}

/// `(left endpoint of piece, its image, slope)` for each piece of `v`.
fn endpoints(v: &VElement) -> impl Iterator<Item = (Dyadic, Dyadic, i64)> + '_ {
    v.pieces().into_iter().map(|(d, r)| {
        let s = d.len() as i64 - r.len() as i64;
        (Dyadic::from_word(&d), Dyadic::from_word(&r), s)
    })
}

/// `p_v(x) = log₂ v′(v⁻¹x) − ν(x) + ν(v⁻¹x)`.
pub fn p_cocycle(v: &VElement) -> ZMap {
    ZMap::from_pairs(endpoints(v).map(|(a, b, s)| {
        let p = s - nu(&b) + nu(&a);
        (b, p)
    }))
}

/// `F_v = {x : log₂ v′(x) ≠ ν(vx) − ν(x)}`.
pub fn exception_set(v: &VElement) -> BTreeSet<Dyadic> {
    endpoints(v)
        .filter(|(a, b, s)| *s != nu(b) - nu(a))
        .map(|(a, _, _)| a)
        .collect()
}

/// `s(ζ)_v = ζ^{ℓ_v}`, kept as the exponent function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeCocycleValue {
    pub zeta: usize,
    pub exponents: SlopeFunction,
}

impl SlopeCocycleValue {
    pub fn eval(&self, group: &FiniteGroup, x: &Dyadic) -> usize {
        group.pow(self.zeta, self.exponents.eval(x))
    }
}

pub fn slope_cocycle(group: &FiniteGroup, zeta: usize, v: &VElement) -> Result<SlopeCocycleValue> {
    group.check(zeta)?;
    if !group.is_central(zeta) {
        return Err(Error::NotCentral(zeta));
    }
    Ok(SlopeCocycleValue {
        zeta,
        exponents: v.ell_function(),
    })
}

/// A cocycle `v ↦ c_v` for `V ↷ ∏_{Q₂} Λ`, probed pointwise.
pub trait Cocycle: Sync {
    fn group(&self) -> &Arc<FiniteGroup>;
    fn eval(&self, v: &VElement, x: &Dyadic) -> usize;
}

/// `c_v = ζ^{ℓ_v} · f · (f∘v⁻¹)⁻¹` for a given `f`.
pub struct CoboundaryCocycle<F> {
    pub group: Arc<FiniteGroup>,
    pub zeta: usize,
    pub f: F,
}

impl<F: Fn(&Dyadic) -> usize + Sync> Cocycle for CoboundaryCocycle<F> {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn eval(&self, v: &VElement, x: &Dyadic) -> usize {
        let g = &self.group;
        let s = g.pow(self.zeta, v.ell_at(x));
        let fx = (self.f)(x);
        let fy = (self.f)(&v.inverse().apply(x));
        g.mul(g.mul(s, fx), g.inv(fy))
    }
}

/// `c_v = ζ^{p_v}`.
pub struct PCocycle {
    pub group: Arc<FiniteGroup>,
    pub zeta: usize,
}

impl Cocycle for PCocycle {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn eval(&self, v: &VElement, x: &Dyadic) -> usize {
        self.group.pow(self.zeta, p_cocycle(v).get(x))
    }
}

/// Elements and points on which `decompose_cocycle` checks its input.
pub fn probe_set() -> (Vec<VElement>, Vec<Dyadic>) {
    let x0 = VElement::x0();
    let elems = [
        "0:0:1",
        "10100:11000:1,2,3",
        "11000:10100:1,2,3",
        "100:100:2,1",
        "10100:10100:1,3,2",
        "10100:10100:2,3,1",
        "1101000:1011000:4,1,3,2",
        "110100100:101101000:2,5,1,4,3",
    ];
    let mut vs: Vec<VElement> = elems.iter().map(|s| s.parse().expect("valid literal")).collect();
    vs.push(VElement::conjugate(&VElement::swap(), &x0));
    let pts = ["0", "1/2", "1/4", "3/4", "3/8", "5/8", "7/8", "13/16"]
        .iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect();
    (vs, pts)
}

/// `ζ` and `f` with `c_v = s(ζ)_v · f · (f^v)⁻¹`, normalised by `f(0) = e`.
pub struct Decomposition<'a> {
    cocycle: &'a dyn Cocycle,
    pub zeta: usize,
}

impl<'a> Decomposition<'a> {
    /// `f(x) = c_v(x) ζ^{-ℓ_v(x)}` for a `v` sending 0 to `x`.
    pub fn f(&self, x: &Dyadic) -> usize {
        let g = self.cocycle.group();
        let v = VElement::find_transitive(&Dyadic::zero(), x);
        let d = |v: &VElement, x: &Dyadic| g.mul(self.cocycle.eval(v, x), g.pow(self.zeta, -v.ell_at(x)));
        let f0 = d(&VElement::identity(), &Dyadic::zero());
        g.mul(d(&v, x), g.inv(f0))
    }

    /// `s(ζ)_v(x) · f(x) · f(v⁻¹x)⁻¹`.
    pub fn reconstruct(&self, v: &VElement, x: &Dyadic) -> usize {
        let g = self.cocycle.group();
        let s = g.pow(self.zeta, v.ell_at(x));
        g.mul(g.mul(s, self.f(x)), g.inv(self.f(&v.inverse().apply(x))))
    }
}

/// Splits a cocycle into its slope part and a coboundary. The cocycle
/// identity and centrality are checked on `probe_set()`.
pub fn decompose_cocycle(c: &dyn Cocycle) -> Result<Decomposition<'_>> {
    let g = c.group();
    let (vs, pts) = probe_set();
    for v in &vs {
        for x in &pts {
            let cv = c.eval(v, x);
            if !g.is_central(cv) {
                return Err(Error::NotCentral(cv));
            }
            for w in &vs {
                let lhs = c.eval(&v.multiply(w), x);
                let rhs = g.mul(cv, c.eval(w, &v.inverse().apply(x)));
                if lhs != rhs {
                    return Err(Error::CocycleIdentity(format!("v = {v}, w = {w}, x = {x}")));
                }
            }
        }
    }
    let u = VElement::find_in_stabilizer(&Dyadic::zero(), 1);
    Ok(Decomposition {
        cocycle: c,
        zeta: c.eval(&u, &Dyadic::zero()),
    })
}

/// `γ_φ(x) = log₂((φ⁻¹vφ)′(φ⁻¹0)) − log₂ v′(0)` for the given `v` with `v(0) = x`.
pub fn gamma_with(phi: &VElement, v: &VElement) -> i64 {
    let pi = phi.inverse();
    let conj = pi.multiply(v).multiply(phi);
    conj.slope_at(&pi.apply(&Dyadic::zero())) - v.slope_at(&Dyadic::zero())
}

pub fn gamma(phi: &VElement, x: &Dyadic) -> i64 {
    gamma_with(phi, &VElement::find_transitive(&Dyadic::zero(), x))
}

/// `μ_φ = γ_φ − ν∘φ⁻¹ + ν`.
pub fn mu(phi: &VElement, x: &Dyadic) -> i64 {
    gamma(phi, x) - nu(&phi.inverse().apply(x)) + nu(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(nu(&d("0")), 0);
        assert_eq!(nu(&d("1/2")), -1);
        assert_eq!(nu(&d("3/8")), -3);
        assert_eq!(nu_rational(12, 1).unwrap(), 2);
        assert_eq!(nu_rational(3, 40).unwrap(), -3);
        assert_eq!(nu_rational(0, 7).unwrap(), 0);
    }

    #[test]
    fn p_examples() {
        assert!(p_cocycle(&VElement::identity()).is_empty());
        assert_eq!(p_cocycle(&VElement::x0().inverse()).to_string(), "0=1;1/2^1=-1");
        let f: Vec<String> = exception_set(&VElement::x0()).iter().map(|x| x.to_string()).collect();
        assert_eq!(f, ["0", "1/2^1"]);
        assert!(exception_set(&VElement::identity()).is_empty());
    }

    #[test]
    fn slope_cocycle_example() {
        let z4 = FiniteGroup::cyclic(4);
        let s = slope_cocycle(&z4, 1, &VElement::x0()).unwrap();
        assert_eq!(s.eval(&z4, &d("0")), 3);
        assert_eq!(slope_cocycle(&z4, 0, &VElement::x0()).unwrap().eval(&z4, &d("0")), 0);
        assert!(slope_cocycle(&FiniteGroup::symmetric3(), 1, &VElement::x0()).is_err());
    }

    #[test]
    fn gamma_mu_examples() {
        let x0 = VElement::x0();
        assert_eq!(gamma(&x0, &d("0")), 0);
        assert_eq!(gamma(&x0, &d("1/2")), -2);
        assert_eq!(mu(&x0, &d("1/2")), -1);
    }

    #[test]
    fn decomposition_examples() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let c = CoboundaryCocycle {
            group: z4.clone(),
            zeta: 1,
            f: |x: &Dyadic| if *x == "1/2".parse::<Dyadic>().unwrap() { 3 } else { 0 },
        };
        let dec = decompose_cocycle(&c).unwrap();
        assert_eq!(dec.zeta, 1);
        assert_eq!(dec.f(&d("1/2")), 3);
        assert_eq!(dec.f(&d("3/4")), 0);
        let p = PCocycle { group: z4.clone(), zeta: 1 };
        let dec = decompose_cocycle(&p).unwrap();
        assert_eq!(dec.zeta, 1);
        for x in ["0", "1/2", "3/8", "5/16"] {
            let x = d(x);
            assert_eq!(dec.f(&x), z4.pow(1, -nu(&x)));
        }
        let trivial = CoboundaryCocycle { group: z4.clone(), zeta: 0, f: |_: &Dyadic| 0 };
        let dec = decompose_cocycle(&trivial).unwrap();
        assert_eq!(dec.zeta, 0);
        assert_eq!(dec.f(&d("3/8")), 0);
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        struct Bad(Arc<FiniteGroup>);
        impl Cocycle for Bad {
            fn group(&self) -> &Arc<FiniteGroup> {
                &self.0
            }
            fn eval(&self, v: &VElement, _: &Dyadic) -> usize {
                v.leaf_count() % 4
            }
        }
        let bad = Bad(Arc::new(FiniteGroup::cyclic(4)));
        assert!(matches!(decompose_cocycle(&bad), Err(Error::CocycleIdentity(_))));
    }
}
