//! Finite groups given by Cayley tables, and maps between them.
//!
//! Elements are indices `0..N` with `0` the identity.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates closure, identity at index 0, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("entry out of range".into()));
        }
        if let Some(ns) = &names {
            if ns.len() != n {
                return Err(Error::InvalidGroup(format!("{} names for {} elements", ns.len(), n)));
            }
            let mut sorted = ns.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::InvalidGroup("duplicate element names".into()));
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let m = |a: usize, b: usize| table[a * n + b];
        for x in 0..n {
            if m(0, x) != x || m(x, 0) != x {
                return Err(Error::InvalidGroup("index 0 is not an identity".into()));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| m(x, y) == 0 && m(y, x) == 0) {
                Some(y) => inverses[x] = y,
                None => return Err(Error::InvalidGroup(format!("element {x} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            table,
            inverses,
            names,
        })
    }

    /// Reads `order N`, `N` rows of `N` indices, then optionally `names ...`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<FiniteGroup> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
        let n: usize = header
            .strip_prefix("order")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `order N`, found `{header}`")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing table row {i}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad table entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let mut names = None;
        if let Some(line) = lines.next() {
            let rest = line
                .strip_prefix("names")
                .ok_or_else(|| Error::Parse(format!("unexpected line `{line}`")))?;
            names = Some(rest.split_whitespace().map(String::from).collect());
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected line `{extra}`")));
        }
        FiniteGroup::from_table(rows, names)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if let Some(ns) = &self.names {
            out.push_str("names ");
            out.push_str(&ns.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let e = (k.unsigned_abs() % self.element_order(a) as u64) as usize;
        (0..e).fold(0, |acc, _| self.mul(acc, base))
    }

    /// `a b a⁻¹`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.order
    }

    pub fn check(&self, a: usize) -> Result<usize> {
        if a < self.order {
            Ok(a)
        } else {
            Err(Error::ElementRange(a))
        }
    }

    pub fn is_central(&self, a: usize) -> bool {
        self.elements().all(|g| self.mul(a, g) == self.mul(g, a))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.is_central(z)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(ns) => ns[a].clone(),
            None => a.to_string(),
        }
    }

    /// Looks an element up by name, falling back to its index.
    pub fn element(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        if let Some(ns) = &self.names {
            if let Some(i) = ns.iter().position(|n| n == token) {
                return Ok(i);
            }
        }
        match token.parse::<usize>() {
            Ok(i) if i < self.order => Ok(i),
            _ => Err(Error::Parse(format!("unknown element `{token}`"))),
        }
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    /// The subgroup generated by `gens`, as a sorted index list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: scan elements by index, keep those not yet generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![0];
        for x in self.elements() {
            if sub.binary_search(&x).is_err() {
                gens.push(x);
                sub = self.closure(&gens);
            }
        }
        gens
    }

    /// The subgroup on a sorted index set containing 0, re-indexed in that
    /// order. Names are carried over.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        if elements.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must list the identity first".into()));
        }
        let rows = elements
            .iter()
            .map(|&a| {
                elements
                    .iter()
                    .map(|&b| {
                        pos.get(&self.mul(a, b))
                            .copied()
                            .ok_or_else(|| Error::InvalidGroup("subset is not closed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let names = self
            .names
            .as_ref()
            .map(|ns| elements.iter().map(|&x| ns[x].clone()).collect());
        FiniteGroup::from_table(rows, names)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(rows, None).expect("cyclic table")
    }

    /// `G × H`, index `(g, h) ↦ g·|H| + h`, names `(g,h)`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let m = h.order;
        let n = g.order * m;
        let rows = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m))
                    .collect()
            })
            .collect();
        let names = (0..n).map(|a| format!("({},{})", g.name(a / m), h.name(a % m))).collect();
        FiniteGroup::from_table(rows, Some(names)).expect("product table")
    }

    /// The permutation group generated by `gens` (images of `0..degree`),
    /// elements sorted by one-line notation, named in cycle notation on
    /// points `1..=degree`. Composition is `(στ)(i) = σ(τ(i))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
        let id: Vec<usize> = (0..degree).collect();
        let compose = |s: &[usize], t: &[usize]| -> Vec<usize> { t.iter().map(|&i| s[i]).collect() };
        let mut elems = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(g, &x);
                if !elems.contains(&y) {
                    elems.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        elems.sort();
        let index = |p: &[usize]| elems.iter().position(|e| e == p).unwrap();
        let rows = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&compose(a, b))).collect())
            .collect();
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(rows, Some(names)).expect("permutation group table")
    }

    pub fn symmetric3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Symmetries of a square with vertices `1,2,3,4` in cyclic order.
    pub fn dihedral4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]])
    }

    pub fn alternating4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// Quaternion group, elements `1,-1,i,-i,j,-j,k,-k`.
    pub fn quaternion() -> FiniteGroup {
        // unit (0..4 for 1,i,j,k) and sign
        let basis = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let rows = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = basis(a / 2, b / 2);
                        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                        2 * u + sign as usize
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
        FiniteGroup::from_table(rows, Some(names)).expect("quaternion table")
    }

    /// `Z2, Z3, ..., Zn`, `Z2xZ2`, `S3`, `D4`, `Q8`, `A4`.
    pub fn builtin(name: &str) -> Option<FiniteGroup> {
        match name {
            "Z2xZ2" | "V4" => Some(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
            "S3" => Some(FiniteGroup::symmetric3()),
            "D4" => Some(FiniteGroup::dihedral4()),
            "Q8" => Some(FiniteGroup::quaternion()),
            "A4" => Some(FiniteGroup::alternating4()),
            _ => {
                let n: usize = name.strip_prefix('Z')?.parse().ok()?;
                (n >= 1).then(|| FiniteGroup::cyclic(n))
            }
        }
    }

    /// Names of the groups `builtin` knows beyond the cyclic family.
    pub const BUNDLED: [&'static str; 9] = ["Z2", "Z3", "Z4", "Z6", "Z2xZ2", "S3", "D4", "Q8", "A4"];
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// A homomorphism given by its image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupMap {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<GroupMap> {
        if images.len() != source.order() {
            return Err(Error::Arity(format!(
                "{} images for a group of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= target.order()) {
            return Err(Error::ElementRange(bad));
        }
        if images[0] != 0 {
            return Err(Error::NotHomomorphism("identity not sent to identity".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotHomomorphism(format!("fails on ({a}, {b})")));
                }
            }
        }
        Ok(GroupMap { source, target, images })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> GroupMap {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().collect(),
        }
    }

    /// The trivial endomorphism sending everything to `e`.
    pub fn trivial(g: &Arc<FiniteGroup>) -> GroupMap {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            images: vec![0; g.order()],
        }
    }

    /// `ad(a): x ↦ a x a⁻¹`.
    pub fn inner(g: &Arc<FiniteGroup>, a: usize) -> GroupMap {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().map(|x| g.conj(a, x)).collect(),
        }
    }

    /// `x ↦ x^k`; a homomorphism when `G` is abelian.
    pub fn power_map(g: &Arc<FiniteGroup>, k: i64) -> Result<GroupMap> {
        GroupMap::new(g.clone(), g.clone(), g.elements().map(|x| g.pow(x, k)).collect())
    }

    /// `x ↦ x⁻¹`; a homomorphism when `G` is abelian.
    pub fn inversion(g: &Arc<FiniteGroup>) -> Result<GroupMap> {
        GroupMap::power_map(g, -1)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.images.len() == self.target.order() && self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y) && self.source == self.target
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMap) -> Result<GroupMap> {
        if other.target != self.source {
            return Err(Error::Arity("maps are not composable".into()));
        }
        Ok(GroupMap {
            source: other.source.clone(),
            target: self.target.clone(),
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Result<GroupMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective("map is not invertible".into()));
        }
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Ok(GroupMap {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        })
    }

    /// `α^k`; negative `k` needs `α` bijective.
    pub fn power(&self, k: i64) -> Result<GroupMap> {
        if !self.is_endomorphism() {
            return Err(Error::Arity("power of a map between different groups".into()));
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = GroupMap::identity(&self.source);
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Reads `map i0 i1 ...` with indices or element names of `target`.
    pub fn parse(text: &str, source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Result<GroupMap> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse("empty map file".into()))?;
        let rest = line
            .strip_prefix("map")
            .ok_or_else(|| Error::Parse(format!("expected `map ...`, found `{line}`")))?;
        let images = rest
            .split_whitespace()
            .map(|t| target.element(t))
            .collect::<Result<Vec<_>>>()?;
        GroupMap::new(source.clone(), target.clone(), images)
    }
}

impl fmt::Display for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "map {}", parts.join(" "))
    }
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupMap({self})")
    }
}

/// All homomorphisms `G → H` (only bijective ones if `bijective`), sorted
/// lexicographically by image tuple.
pub fn enumerate_homomorphisms(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, bijective: bool) -> Vec<GroupMap> {
    if bijective && (g.order() != h.order() || g.order_profile() != h.order_profile()) {
        return Vec::new();
    }
    let gens = g.generating_set();
    // x = parent·gen, in breadth-first order from the identity.
    let mut spanning: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                spanning.push((y, x, k));
                queue.push_back(y);
            }
        }
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            h.elements()
                .filter(|&t| {
                    let ot = h.element_order(t);
                    if bijective {
                        ot == o
                    } else {
                        o.is_multiple_of(ot)
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if candidates.iter().all(|c| !c.is_empty()) {
            let imgs: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            let mut images = vec![0usize; g.order()];
            for &(y, x, k) in &spanning {
                images[y] = h.mul(images[x], imgs[k]);
            }
            if let Ok(m) = GroupMap::new(g.clone(), h.clone(), images) {
                if !bijective || m.is_bijective() {
                    out.push(m);
                }
            }
        } else {
            break;
        }
        // odometer over generator images
        let mut i = gens.len();
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.images.cmp(&b.images));
                out.dedup();
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    out
}

pub fn enumerate_isomorphisms(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Vec<GroupMap> {
    enumerate_homomorphisms(g, h, true)
}

pub fn enumerate_automorphisms(g: &Arc<FiniteGroup>) -> Vec<GroupMap> {
    enumerate_homomorphisms(g, g, true)
}

pub fn enumerate_endomorphisms(g: &Arc<FiniteGroup>) -> Vec<GroupMap> {
    enumerate_homomorphisms(g, g, false)
}
