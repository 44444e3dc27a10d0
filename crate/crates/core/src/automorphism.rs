//! Automorphisms of the untwisted group `G = K ⋊ V` and the two elementary
//! isomorphisms between twisted ones.
//!
//! * `E_ζ(av) = a·ζ^{p_v}·v` for central `ζ`;
//! * `ad(f)(av) = f·av·f⁻¹ = (f a (f∘v⁻¹)⁻¹)·v` for `f` normalising `G`;
//! * `A_{φ,β}(av) = β(a∘φ⁻¹)·φvφ⁻¹`;
//! * `Ξ(ζ, f, φ, β) = E_ζ ∘ ad(f) ∘ A_{φ,β}`.
//!
//! Maps `f: Q₂ → Γ` are not finitely supported in general. They are given by
//! the [`Normalizer`] trait: pointwise evaluation plus a finite set outside
//! which `f(x) = f(v⁻¹x)` is guaranteed.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::cocycle::{exception_set, mu, nu, p_cocycle};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fraction::{GElement, KElement, Twist};
use crate::group::{FiniteGroup, GroupMap};
use crate::thompson::VElement;

/// `x ∈ Y = {(4k+1)/2^n} ∩ [0,1)`: the odd part of the numerator is 1 mod 4,
/// i.e. the binary word is `1` or ends in `01`.
pub fn in_y(x: &Dyadic) -> bool {
    let b = x.word().bits();
    match b.len() {
        0 => false,
        1 => true,
        n => !b[n - 2],
    }
}

/// A map `Q₂ → Γ` in the normaliser of `G`, probed pointwise.
pub trait Normalizer: Sync {
    fn group(&self) -> &Arc<FiniteGroup>;
    fn eval(&self, x: &Dyadic) -> usize;
    /// A finite set containing every `y` with `f(y) ≠ f(v⁻¹y)`.
    fn defect_candidates(&self, v: &VElement) -> BTreeSet<Dyadic>;
}

/// `y ↦ f(y)·f(v⁻¹y)⁻¹`, finitely supported.
pub fn defect(f: &dyn Normalizer, v: &VElement) -> KElement {
    let g = f.group();
    let vi = v.inverse();
    KElement::from_pairs(
        f.defect_candidates(v)
            .into_iter()
            .map(|y| {
                let d = g.mul(f.eval(&y), g.inv(f.eval(&vi.apply(&y))));
                (y, d)
            }),
    )
}

/// `g · (finite part) · ∏ ζ_i^{χ_Y}` with each `ζ_i` central of order ≤ 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalizerMap {
    group: Arc<FiniteGroup>,
    pub constant: usize,
    pub finite: KElement,
    pub indicators: Vec<usize>,
}

impl NormalizerMap {
    pub fn new(group: Arc<FiniteGroup>, constant: usize, finite: KElement, indicators: Vec<usize>) -> Result<Self> {
        group.check(constant)?;
        for (_, v) in finite.iter() {
            group.check(v)?;
        }
        for &z in &indicators {
            group.check(z)?;
            if !group.is_central(z) {
                return Err(Error::NotCentral(z));
            }
            if group.mul(z, z) != 0 {
                return Err(Error::NotInvolution(z));
            }
        }
        Ok(NormalizerMap {
            group,
            constant,
            finite,
            indicators,
        })
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        NormalizerMap::new(group.clone(), 0, KElement::neutral(), vec![]).unwrap()
    }

    pub fn constant(group: &Arc<FiniteGroup>, g: usize) -> Result<Self> {
        NormalizerMap::new(group.clone(), g, KElement::neutral(), vec![])
    }

    pub fn finite(group: &Arc<FiniteGroup>, a: KElement) -> Result<Self> {
        NormalizerMap::new(group.clone(), 0, a, vec![])
    }

    pub fn chi_y(group: &Arc<FiniteGroup>, zeta: usize) -> Result<Self> {
        NormalizerMap::new(group.clone(), 0, KElement::neutral(), vec![zeta])
    }

    /// `const:g`, `finite:K` and `chiY:ζ` factors joined by `*`.
    pub fn parse(text: &str, group: &Arc<FiniteGroup>) -> Result<Self> {
        let mut constant = 0;
        let mut finite = KElement::neutral();
        let mut indicators = Vec::new();
        for part in text.split('*').map(str::trim).filter(|p| !p.is_empty()) {
            let (kind, body) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("`{part}` is not kind:value")))?;
            match kind.trim() {
                "const" => constant = group.mul(constant, group.element(body)?),
                "finite" => finite = finite.mul(&KElement::parse(body, group)?, group),
                "chiY" => indicators.push(group.element(body)?),
                other => return Err(Error::Parse(format!("unknown factor `{other}`"))),
            }
        }
        NormalizerMap::new(group.clone(), constant, finite, indicators)
    }

    pub fn format(&self) -> String {
        let g = &self.group;
        let mut parts = Vec::new();
        if self.constant != 0 {
            parts.push(format!("const:{}", g.name(self.constant)));
        }
        if !self.finite.is_neutral() {
            parts.push(format!("finite:{}", self.finite.format(g)));
        }
        for &z in &self.indicators {
            parts.push(format!("chiY:{}", g.name(z)));
        }
        if parts.is_empty() {
            "const:".to_string() + &g.name(0)
        } else {
            parts.join(" * ")
        }
    }
}

impl fmt::Display for NormalizerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Left endpoints and midpoints of the pieces of `v`, pushed forward: the
/// only places where a point and its preimage can disagree about `Y`.
fn y_candidates(v: &VElement) -> BTreeSet<Dyadic> {
    let mut out = BTreeSet::new();
    for (_, r) in v.pieces() {
        out.insert(Dyadic::from_word(&r));
        out.insert(Dyadic::from_word(&r.child(true)));
    }
    out
}

impl Normalizer for NormalizerMap {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn eval(&self, x: &Dyadic) -> usize {
        let g = &self.group;
        let mut acc = g.mul(self.constant, self.finite.get(x));
        if in_y(x) {
            for &z in &self.indicators {
                acc = g.mul(acc, z);
            }
        }
        acc
    }

    fn defect_candidates(&self, v: &VElement) -> BTreeSet<Dyadic> {
        let mut out: BTreeSet<Dyadic> = self.finite.support().cloned().collect();
        out.extend(self.finite.support().map(|x| v.apply(x)));
        if !self.indicators.is_empty() {
            out.extend(y_candidates(v));
        }
        out
    }
}

fn require_central(group: &FiniteGroup, zeta: usize) -> Result<()> {
    group.check(zeta)?;
    if group.is_central(zeta) {
        Ok(())
    } else {
        Err(Error::NotCentral(zeta))
    }
}

/// `E_ζ(av) = a·ζ^{p_v}·v`.
pub fn e_apply(group: &FiniteGroup, zeta: usize, g: &GElement) -> Result<GElement> {
    require_central(group, zeta)?;
    let c = KElement::from_pairs(p_cocycle(&g.v).iter().map(|(x, n)| (x.clone(), group.pow(zeta, n))));
    Ok(GElement::new(g.k.mul(&c, group), g.v.clone()))
}

/// `ad(f)(av) = (f a (f∘v⁻¹)⁻¹)·v`.
pub fn ad_apply(f: &dyn Normalizer, g: &GElement) -> GElement {
    let grp = f.group();
    let d = defect(f, &g.v);
    let points: BTreeSet<&Dyadic> = g.k.support().chain(d.support()).collect();
    let k = KElement::from_pairs(points.into_iter().map(|y| {
        let fy = f.eval(y);
        let conj = grp.mul(grp.mul(fy, g.k.get(y)), grp.inv(fy));
        (y.clone(), grp.mul(conj, d.get(y)))
    }));
    GElement::new(k, g.v.clone())
}

fn require_automorphism(beta: &GroupMap) -> Result<()> {
    if beta.is_endomorphism() && beta.is_bijective() {
        Ok(())
    } else {
        Err(Error::NotBijective("β must be an automorphism".into()))
    }
}

/// `A_{φ,β}(av) = β(a∘φ⁻¹)·φvφ⁻¹`.
pub fn a_apply(phi: &VElement, beta: &GroupMap, g: &GElement) -> Result<GElement> {
    require_automorphism(beta)?;
    let k = KElement::from_pairs(g.k.iter().map(|(x, v)| (phi.apply(x), beta.apply(v))));
    Ok(GElement::new(k, VElement::conjugate(phi, &g.v)))
}

/// `(ζ, f, φ, β)`.
#[derive(Clone, Debug)]
pub struct AutTuple {
    pub zeta: usize,
    pub f: NormalizerMap,
    pub phi: VElement,
    pub beta: GroupMap,
}

impl AutTuple {
    pub fn new(zeta: usize, f: NormalizerMap, phi: VElement, beta: GroupMap) -> Result<AutTuple> {
        require_central(f.group(), zeta)?;
        require_automorphism(&beta)?;
        if beta.source() != f.group() {
            return Err(Error::Arity("β and f live on different groups".into()));
        }
        Ok(AutTuple { zeta, f, phi, beta })
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> AutTuple {
        AutTuple {
            zeta: 0,
            f: NormalizerMap::trivial(group),
            phi: VElement::identity(),
            beta: GroupMap::identity(group),
        }
    }
}

/// `E_ζ ∘ ad(f) ∘ A_{φ,β}` for any normaliser `f`.
pub fn xi_apply_with(zeta: usize, f: &dyn Normalizer, phi: &VElement, beta: &GroupMap, g: &GElement) -> Result<GElement> {
    let a = a_apply(phi, beta, g)?;
    e_apply(f.group(), zeta, &ad_apply(f, &a))
}

pub fn xi_apply(t: &AutTuple, g: &GElement) -> Result<GElement> {
    xi_apply_with(t.zeta, &t.f, &t.phi, &t.beta, g)
}

/// `f′ = β(f∘φ⁻¹)·ζ′^{μ_φ}` with `ζ′ = β(ζ)`.
#[derive(Clone, Debug)]
pub struct TransportedNormalizer {
    pub inner: NormalizerMap,
    pub phi: VElement,
    pub beta: GroupMap,
    pub zeta: usize,
    phi_inv: VElement,
}

impl Normalizer for TransportedNormalizer {
    fn group(&self) -> &Arc<FiniteGroup> {
        self.inner.group()
    }

    fn eval(&self, x: &Dyadic) -> usize {
        let g = self.group();
        let base = self.beta.apply(self.inner.eval(&self.phi_inv.apply(x)));
        g.mul(base, g.pow(self.zeta, mu(&self.phi, x)))
    }

    /// With `u = φ⁻¹vφ`: `β(f∘φ⁻¹)` can only jump at `φ` of `f`'s candidates
    /// for `u`, and `μ_φ − μ_φ∘v⁻¹` equals `p_u∘φ⁻¹ − p_v`.
    fn defect_candidates(&self, v: &VElement) -> BTreeSet<Dyadic> {
        let u = self.phi_inv.multiply(v).multiply(&self.phi);
        let mut out: BTreeSet<Dyadic> = self
            .inner
            .defect_candidates(&u)
            .iter()
            .map(|x| self.phi.apply(x))
            .collect();
        if self.zeta != 0 {
            out.extend(p_cocycle(v).support().cloned());
            out.extend(p_cocycle(&u).support().map(|x| self.phi.apply(x)));
        }
        out
    }
}

/// `σ(φ, β)(ζ, f) = (β(ζ), β(f)^φ · β(ζ)^{μ_φ})`, the second entry up to
/// constants.
pub fn sigma_act(phi: &VElement, beta: &GroupMap, zeta: usize, f: &NormalizerMap) -> Result<(usize, TransportedNormalizer)> {
    require_automorphism(beta)?;
    require_central(f.group(), zeta)?;
    let z = beta.apply(zeta);
    Ok((
        z,
        TransportedNormalizer {
            inner: f.clone(),
            phi: phi.clone(),
            beta: beta.clone(),
            zeta: z,
            phi_inv: phi.inverse(),
        },
    ))
}

/// `av ↦ β(a)·v`, from `G_α` onto `G_{βαβ⁻¹}`.
pub fn isomone_apply(beta: &GroupMap, g: &GElement) -> Result<GElement> {
    if !beta.is_bijective() {
        return Err(Error::NotBijective("β must be an isomorphism".into()));
    }
    Ok(GElement::new(g.k.map_values(|x| beta.apply(x)), g.v.clone()))
}

/// The isomorphism `G_α → G_{ad(k)∘α}` built from the family
/// `k_0 = e`, `k_{n+1} = k_n α^n(k)`, `k_{-(m+1)} = k_{-m} α^{-(m+1)}(k⁻¹)`,
/// which satisfies `k_n α^n(k_m) = k_{n+m}`.
#[derive(Clone, Debug)]
pub struct IsomTwo {
    source: Twist,
    target: Twist,
    k: usize,
}

impl IsomTwo {
    pub fn new(source: Twist, k: usize) -> Result<IsomTwo> {
        let g = source.group().clone();
        g.check(k)?;
        let target = Twist::new(GroupMap::inner(&g, k).compose(source.alpha())?)?;
        Ok(IsomTwo { source, target, k })
    }

    pub fn source(&self) -> &Twist {
        &self.source
    }

    /// `(Γ, ad(k)∘α)`.
    pub fn target(&self) -> &Twist {
        &self.target
    }

    pub fn k_n(&self, n: i64) -> usize {
        let g = self.source.group();
        let mut acc = 0;
        if n >= 0 {
            for i in 0..n {
                acc = g.mul(acc, self.source.pow(i, self.k));
            }
        } else {
            let kinv = g.inv(self.k);
            for m in 0..-n {
                acc = g.mul(acc, self.source.pow(-(m + 1), kinv));
            }
        }
        acc
    }

    /// `f(x) = k_{ν(x)}`.
    pub fn f(&self, x: &Dyadic) -> usize {
        self.k_n(nu(x))
    }

    /// `(f c_v π̃_v(f⁻¹))(vx) = f(vx) · k_n⁻¹ · α̃^n(f(x))⁻¹` with
    /// `n = log₂ v′(x)`, keyed by the source point `x`. Nonidentity values can
    /// only occur on `F_v`, so only piece endpoints are evaluated.
    pub fn defect_by_source(&self, v: &VElement) -> KElement {
        KElement::from_pairs(v.pieces().into_iter().map(|(d, _)| {
            let x = Dyadic::from_word(&d);
            (x.clone(), self.defect_at(v, &x))
        }))
    }

    /// The defect at `vx`, evaluated directly.
    pub fn defect_at(&self, v: &VElement, x: &Dyadic) -> usize {
        let g = self.source.group();
        let n = v.slope_at(x);
        let fvx = self.f(&v.apply(x));
        let c = g.inv(self.k_n(n));
        let twisted = g.inv(self.target.pow(n, self.f(x)));
        g.mul(g.mul(fvx, c), twisted)
    }

    pub fn apply(&self, g: &GElement) -> Result<GElement> {
        let grp = self.source.group();
        let by_source = self.defect_by_source(&g.v);
        let f_v = exception_set(&g.v);
        if let Some(x) = by_source.support().find(|x| !f_v.contains(*x)) {
            return Err(Error::Unsupported(format!("defect at v({x}) outside F_v")));
        }
        let d = by_source.relocate(|x| g.v.apply(x));
        let points: BTreeSet<&Dyadic> = g.k.support().chain(d.support()).collect();
        let k = KElement::from_pairs(points.into_iter().map(|y| {
            let fy = self.f(y);
            let conj = grp.mul(grp.mul(fy, g.k.get(y)), grp.inv(fy));
            (y.clone(), grp.mul(conj, d.get(y)))
        }));
        Ok(GElement::new(k, g.v.clone()))
    }
}
