use std::sync::Arc;

use vfrac::fraction::{g_invert, g_multiply, jones_act, theta_inverse, theta_t, GElement, Twist};
use vfrac::oracle::jones_by_trees;
use vfrac::{random, DecoratedCategory, DecoratedFraction, Forest, FiniteGroup, GroupMap};

fn twists() -> Vec<Twist> {
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    let s3 = Arc::new(FiniteGroup::symmetric3());
    let t = s3.element("(12)").unwrap();
    vec![
        Twist::untwisted(&z4),
        Twist::new(GroupMap::inversion(&z4).unwrap()).unwrap(),
        Twist::untwisted(&s3),
        Twist::new(GroupMap::inner(&s3, t)).unwrap(),
    ]
}

#[test]
fn fraction_product_matches_semidirect_product() {
    for (i, tw) in twists().into_iter().enumerate() {
        let cat = DecoratedCategory::twisted(tw.alpha().clone()).unwrap();
        let g = tw.group().clone();
        let mut rng = random::rng(11, i as u64);
        for _ in 0..200 {
            let mut frac = || {
                let num = random::decorated(&mut rng, &g, 1, 4);
                let n = num.leaf_count();
                let mut den = random::decorated(&mut rng, &g, 1, n - 1);
                while den.leaf_count() != n {
                    den = random::decorated(&mut rng, &g, 1, n - 1);
                }
                DecoratedFraction::new(num, den).unwrap()
            };
            let (a, b) = (frac(), frac());
            let prod = cat.fraction_multiply(&a, &b).unwrap();
            let lhs = cat.fraction_to_semidirect(&prod).unwrap();
            let rhs = g_multiply(
                &tw,
                &cat.fraction_to_semidirect(&a).unwrap(),
                &cat.fraction_to_semidirect(&b).unwrap(),
            );
            assert_eq!(lhs, rhs, "{a:?} {b:?}");
        }
    }
}

#[test]
fn wreath_action_matches_tree_action() {
    for (i, tw) in twists().into_iter().enumerate() {
        let mut rng = random::rng(5, i as u64);
        for _ in 0..200 {
            let v = random::v_element(&mut rng, 8);
            let rep = random::tree_representative(&mut rng, tw.group(), 8);
            let by_trees = theta_t(&tw, &jones_by_trees(&tw, &v, &rep));
            assert_eq!(by_trees, jones_act(&tw, &v, &theta_t(&tw, &rep)));
        }
    }
}

#[test]
fn semidirect_axioms() {
    for (i, tw) in twists().into_iter().enumerate() {
        let g = tw.group().clone();
        let mut rng = random::rng(9, i as u64);
        for _ in 0..100 {
            let a = random::g_element(&mut rng, &g, 8);
            let b = random::g_element(&mut rng, &g, 8);
            let c = random::g_element(&mut rng, &g, 8);
            let ab_c = g_multiply(&tw, &g_multiply(&tw, &a, &b), &c);
            let a_bc = g_multiply(&tw, &a, &g_multiply(&tw, &b, &c));
            assert_eq!(ab_c, a_bc);
            assert_eq!(g_multiply(&tw, &a, &g_invert(&tw, &a)), GElement::identity());
            assert_eq!(g_multiply(&tw, &GElement::identity(), &a), a);
            let w = random::v_element(&mut rng, 8);
            let lhs = jones_act(&tw, &a.v.multiply(&w), &b.k);
            let rhs = jones_act(&tw, &a.v, &jones_act(&tw, &w, &b.k));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn theta_round_trip_and_expansion() {
    for (i, tw) in twists().into_iter().enumerate() {
        let g = tw.group().clone();
        let cat = DecoratedCategory::twisted(tw.alpha().clone()).unwrap();
        let mut rng = random::rng(3, i as u64);
        for _ in 0..200 {
            let k = random::k_element(&mut rng, &g, 5, 7);
            assert_eq!(theta_t(&tw, &theta_inverse(&tw, &k)), k);
            let rep = random::tree_representative(&mut rng, &g, 6);
            let f = random::forest(&mut rng, rep.tree.leaf_count(), 4);
            // Φ(f) on decorations: compose f on top of (t, id, g).
            let base = vfrac::DecoratedMorphism::new(
                Forest::new(vec![rep.tree.clone()]),
                (0..rep.values.len()).collect(),
                rep.values.clone(),
            )
            .unwrap();
            let grown = cat.compose(&vfrac::DecoratedMorphism::from_forest(f), &base).unwrap();
            assert!(grown.perm.iter().enumerate().all(|(i, &p)| i == p));
            let rep2 = vfrac::TreeRepresentative::new(grown.forest.trees()[0].clone(), grown.decorations).unwrap();
            assert_eq!(theta_t(&tw, &rep2), theta_t(&tw, &rep));
        }
    }
}
