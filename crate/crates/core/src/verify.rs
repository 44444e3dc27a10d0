//! Seeded invariant battery. Trial `i` of a run with seed `s` draws from
//! stream `i` of the generator seeded with `s`, so reports do not depend on
//! how trials are scheduled.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::automorphism::{a_apply, ad_apply, e_apply, sigma_act, xi_apply_with, IsomTwo};
use crate::classify::{check_witness, decide_iso};
use crate::cocycle::p_cocycle;
use crate::fraction::{g_multiply, jones_act, theta_t, Twist};
use crate::group::{enumerate_automorphisms, enumerate_endomorphisms, FiniteGroup, GroupMap};
use crate::oracle::jones_by_trees;
use crate::{random, Forest, VElement};

pub const SUITES: &[&str] = &["forest", "v", "cocycle", "fraction", "automorphism", "classify"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub suite: String,
    pub seed: u64,
    pub trial: u64,
    pub inputs: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub wall_time: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Trial = fn(&mut ChaCha8Rng) -> std::result::Result<(), String>;

fn check(ok: bool, inputs: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(inputs())
    }
}

fn forest_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let roots = rng.gen_range(1..=3);
    let extra: [usize; 3] = std::array::from_fn(|_| rng.gen_range(0..4));
    let a = random::forest(rng, roots, extra[0]);
    let b = random::forest(rng, a.leaf_count(), extra[1]);
    let c = random::forest(rng, b.leaf_count(), extra[2]);
    let left = Forest::compose(&c, &Forest::compose(&b, &a).unwrap()).unwrap();
    let right = Forest::compose(&Forest::compose(&c, &b).unwrap(), &a).unwrap();
    check(left == right, || format!("associativity a={a} b={b} c={c}"))?;
    let rebuilt = Forest::from_generators(a.roots(), &a.decompose()).unwrap();
    check(rebuilt == a, || format!("decomposition {a}"))
}

fn v_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let u = random::v_element(rng, 10);
    let v = random::v_element(rng, 10);
    let w = random::v_element(rng, 10);
    let inputs = || format!("u={u} v={v} w={w}");
    check(u.multiply(&v).multiply(&w) == u.multiply(&v.multiply(&w)), inputs)?;
    check(u.multiply(&u.inverse()).is_identity(), inputs)?;
    let uv = u.multiply(&v);
    for _ in 0..20 {
        let x = random::dyadic(rng, 10);
        check(uv.apply(&x) == u.apply(&v.apply(&x)), inputs)?;
        check(uv.slope_at(&x) == u.slope_at(&v.apply(&x)) + v.slope_at(&x), inputs)?;
    }
    Ok(())
}

fn cocycle_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let v = random::v_element(rng, 10);
    let w = random::v_element(rng, 10);
    let lhs = p_cocycle(&v.multiply(&w));
    let rhs = p_cocycle(&v).add(&p_cocycle(&w).push_forward(&v));
    check(lhs == rhs && lhs.sum() == 0, || format!("v={v} w={w}"))
}

fn coefficient_twists() -> Vec<Twist> {
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    let s3 = Arc::new(FiniteGroup::symmetric3());
    vec![
        Twist::untwisted(&z4),
        Twist::new(GroupMap::inversion(&z4).unwrap()).unwrap(),
        Twist::untwisted(&s3),
        Twist::new(GroupMap::inner(&s3, s3.element("(12)").unwrap())).unwrap(),
    ]
}

fn fraction_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let tw = coefficient_twists().choose(rng).unwrap().clone();
    let g = tw.group().clone();
    let v = random::v_element(rng, 8);
    let rep = random::tree_representative(rng, &g, 8);
    let by_trees = theta_t(&tw, &jones_by_trees(&tw, &v, &rep));
    let by_formula = jones_act(&tw, &v, &theta_t(&tw, &rep));
    check(by_trees == by_formula, || format!("alpha={} v={v} rep={}", tw.alpha(), rep.format(&g)))?;
    let a = random::g_element(rng, &g, 8);
    let b = random::g_element(rng, &g, 8);
    let c = random::g_element(rng, &g, 8);
    let left = g_multiply(&tw, &g_multiply(&tw, &a, &b), &c);
    let right = g_multiply(&tw, &a, &g_multiply(&tw, &b, &c));
    check(left == right, || {
        format!("alpha={} a={} b={} c={}", tw.alpha(), a.format(&g), b.format(&g), c.format(&g))
    })
}

fn automorphism_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let name = *["Z4", "D4", "Z2xZ2", "S3"].choose(rng).unwrap();
    let g = Arc::new(FiniteGroup::builtin(name).unwrap());
    let tw = Twist::untwisted(&g);
    let centre = g.center();
    let zeta = *centre.choose(rng).unwrap();
    let f = random::normalizer_map(rng, &g);
    let phi = random::v_element(rng, 6);
    let autos = enumerate_automorphisms(&g);
    let beta = autos.choose(rng).unwrap();
    let a = random::g_element(rng, &g, 6);
    let b = random::g_element(rng, &g, 6);
    let inputs = || {
        format!(
            "group={name} zeta={} f={f} phi={phi} beta={beta} a={} b={}",
            g.name(zeta),
            a.format(&g),
            b.format(&g)
        )
    };
    let xi = |x: &crate::GElement| xi_apply_with(zeta, &f, &phi, beta, x).unwrap();
    check(xi(&g_multiply(&tw, &a, &b)) == g_multiply(&tw, &xi(&a), &xi(&b)), inputs)?;

    let (z2, f2) = sigma_act(&phi, beta, zeta, &f).unwrap();
    let lhs = a_apply(&phi.inverse(), &beta.inverse().unwrap(), &a).unwrap();
    let lhs = a_apply(&phi, beta, &e_apply(&g, zeta, &ad_apply(&f, &lhs)).unwrap()).unwrap();
    let rhs = xi_apply_with(z2, &f2, &VElement::identity(), &GroupMap::identity(&g), &a).unwrap();
    check(lhs == rhs, inputs)?;

    if name == "S3" {
        let k = random::element(rng, &g);
        let iso = IsomTwo::new(tw.clone(), k).unwrap();
        let th = |x: &crate::GElement| iso.apply(x).unwrap();
        let ok = th(&g_multiply(&tw, &a, &b)) == g_multiply(iso.target(), &th(&a), &th(&b));
        check(ok, || format!("{} k={}", inputs(), g.name(k)))?;
    }
    Ok(())
}

fn classify_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let pick = |rng: &mut ChaCha8Rng| {
        let name = *["Z2", "Z3", "Z4", "Z6", "Z2xZ2", "S3", "D4"].choose(rng).unwrap();
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        enumerate_endomorphisms(&g).choose(rng).unwrap().clone()
    };
    let a = pick(rng);
    let b = pick(rng);
    let inputs = || format!("a=({} on order {}) b=({} on order {})", a, a.source().order(), b, b.source().order());
    let d = decide_iso(&a, &b).unwrap();
    check(d.isomorphic == decide_iso(&b, &a).unwrap().isomorphic, inputs)?;
    if let Some(w) = &d.witness {
        check(check_witness(&a, &b, w).unwrap(), inputs)?;
    }
    check(decide_iso(&a, &a).unwrap().isomorphic, inputs)
}

fn trial_fn(suite: &str) -> Option<Trial> {
    Some(match suite {
        "forest" => forest_trial,
        "v" => v_trial,
        "cocycle" => cocycle_trial,
        "fraction" => fraction_trial,
        "automorphism" => automorphism_trial,
        "classify" => classify_trial,
        _ => return None,
    })
}

/// Runs `trials` trials of `suite` (or of every suite for `all`); `None`
/// for an unknown suite name.
pub fn run(suite: &str, seed: u64, trials: u64) -> Option<VerifyReport> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![SUITES.iter().copied().find(|s| *s == suite)?]
    };
    let start = Instant::now();
    let mut failures = Vec::new();
    for (offset, name) in names.iter().enumerate() {
        let f = trial_fn(name)?;
        // streams are disjoint across suites of an `all` run
        let base = (offset as u64) << 40;
        let found: Vec<Failure> = (0..trials)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = random::rng(seed, base + t);
                f(&mut rng).err().map(|inputs| Failure {
                    suite: name.to_string(),
                    seed,
                    trial: t,
                    inputs,
                })
            })
            .collect();
        failures.extend(found);
    }
    Some(VerifyReport {
        suite: suite.to_string(),
        seed,
        trials,
        failures,
        wall_time: start.elapsed(),
    })
}
