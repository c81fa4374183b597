//! Randomized invariants over generated trees, networks and walks.

use patrol_core::decomposition::{extremity_set, subtree_decomposition};
use patrol_core::ebd::{GridCuts, RootedSubtree};
use patrol_core::engine::{evaluate, interception_probability, Method, PreparedPatrol};
use patrol_core::network::generators::{random_connected, random_tree, sample_tree};
use patrol_core::rational::{int, one, rat, to_f64, zero};
use patrol_core::strategy::{e_patrolling, tree_attack_strategy, PatrolComponent, PatrolStrategy, Phase};
use patrol_core::{Network, Point, Rational, Region};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::random_walk_patrol;

fn random_point(net: &Network, rng: &mut ChaCha8Rng) -> Point {
    let a = patrol_core::ArcId(rng.random_range(0..net.arc_count()));
    net.point(a, net.length(a) * rat(rng.random_range(0..=12), 12)).unwrap()
}

fn tree_and_alpha(seed: u64) -> (Network, Rational, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = rng.random_range(1..=8);
    let t = random_tree(&mut rng, arcs, 8, 2);
    let alpha = int(2) * t.total_length() * rat(rng.random_range(1..=24), 24);
    (t, alpha, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distance_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = rng.random_range(2..=6);
        let net = random_connected(&mut rng, nodes, 3, 6, 3);
        let (a, b, c) = (random_point(&net, &mut rng), random_point(&net, &mut rng), random_point(&net, &mut rng));
        prop_assert_eq!(net.distance(&a, &a), zero());
        prop_assert_eq!(net.distance(&a, &b), net.distance(&b, &a));
        prop_assert!(net.distance(&a, &b) >= zero());
        prop_assert!(net.distance(&a, &c) <= net.distance(&a, &b) + net.distance(&b, &c));
    }

    #[test]
    fn removal_components_partition_the_tree(seed in any::<u64>()) {
        let (t, _, mut rng) = tree_and_alpha(seed);
        let x = random_point(&t, &mut rng);
        let parts = t.components_after_removal(&x).unwrap();
        prop_assert_eq!(parts.iter().map(|p| p.1).sum::<Rational>(), t.total_length());
        let expect = match x { Point::Node(n) => t.node_degree(n), _ => 2 };
        prop_assert_eq!(parts.len(), expect);
    }

    #[test]
    fn extremity_sets_grow_with_alpha(seed in any::<u64>()) {
        let (t, a1, mut rng) = tree_and_alpha(seed);
        let a2 = a1 + (int(2) * t.total_length() - a1) * rat(rng.random_range(0..=8), 8);
        let (e1, e2) = (extremity_set(&t, a1).unwrap(), extremity_set(&t, a2).unwrap());
        prop_assert_eq!(e1.region.intersection_measure(&e2.region), e1.measure);
    }

    #[test]
    fn extremity_set_matches_dense_sampling(seed in any::<u64>()) {
        let (t, alpha, _) = tree_and_alpha(seed);
        let e = extremity_set(&t, alpha).unwrap();
        for a in t.arc_ids() {
            for k in 1..1000 {
                let x = t.point(a, t.length(a) * rat(k, 1000)).unwrap();
                let smaller = t.components_after_removal(&x).unwrap().iter().map(|p| p.1).min().unwrap();
                // the boundary itself is where the two sides meet alpha / 2
                if smaller * int(2) < alpha {
                    prop_assert!(e.region.contains(&t, &x));
                } else if smaller * int(2) > alpha {
                    prop_assert!(!e.region.contains(&t, &x));
                }
            }
        }
    }

    #[test]
    fn decomposition_is_complete(seed in any::<u64>()) {
        let (t, alpha, _) = tree_and_alpha(seed);
        let d = subtree_decomposition(&t, alpha).unwrap();
        let parts: Rational = d.components.iter().map(|c| c.measure).sum();
        prop_assert_eq!(parts, d.extremity_measure);
        prop_assert_eq!(d.core.measure() + parts, t.total_length());
        for c in &d.components {
            prop_assert!(c.measure * int(2) <= alpha);
            prop_assert!(c.region.contains(&t, &c.root));
        }
        for leaf in t.leaf_nodes() {
            prop_assert!(!d.core.contains(&t, &Point::Node(leaf)) || t.arc_count() == 0);
        }
    }

    #[test]
    fn tree_attack_masses_sum_to_one(seed in any::<u64>()) {
        let (t, alpha, _) = tree_and_alpha(seed);
        let a = tree_attack_strategy(&t, alpha, int(10)).unwrap();
        prop_assert_eq!(a.spatial.total_mass(), one());
    }

    #[test]
    fn component_density_bound(seed in any::<u64>()) {
        let (t, alpha, _) = tree_and_alpha(seed);
        let d = subtree_decomposition(&t, alpha).unwrap();
        let a = tree_attack_strategy(&t, alpha, int(10)).unwrap();
        let bound = int(2) / (d.total_length + d.extremity_measure);
        for c in &d.components {
            let sub = RootedSubtree::new(&t, c.region.clone(), c.root).unwrap();
            let cuts = GridCuts::new(&t, &sub, &c.root, 4).unwrap();
            if cuts.count() > 50_000 {
                continue;
            }
            let mut worst = zero();
            cuts.for_each(|z| {
                let r = Region::from_segments(z.iter().copied());
                let rho = a.spatial.mass_of(&t, &r) / r.measure();
                if rho > worst {
                    worst = rho;
                }
            });
            prop_assert!(worst <= bound, "{} > {}", worst, bound);
        }
    }

    #[test]
    fn unrolling_does_not_change_values(seed in any::<u64>()) {
        let (t, alpha, mut rng) = tree_and_alpha(seed);
        let p = random_walk_patrol(&t, &mut rng);
        let c = &p.components()[0];
        let twice = c.walk.then(&t, &c.walk).unwrap();
        let thrice = twice.then(&t, &c.walk).unwrap();
        let unrolled = PatrolStrategy::pure(thrice, c.phase).unwrap();
        let attack = tree_attack_strategy(&t, alpha, int(7)).unwrap();
        let x = random_point(&t, &mut rng);
        let time = rat(rng.random_range(0..40), 3);
        prop_assert_eq!(
            interception_probability(&t, &p, &x, time, alpha),
            interception_probability(&t, &unrolled, &x, time, alpha)
        );
        prop_assert_eq!(
            PreparedPatrol::new(&t, &p).evaluate_exact(&t, &attack, alpha),
            PreparedPatrol::new(&t, &unrolled).evaluate_exact(&t, &attack, alpha)
        );
    }

    #[test]
    fn phase_unions_are_subadditive(seed in any::<u64>()) {
        let (t, alpha, mut rng) = tree_and_alpha(seed);
        let mut p = random_walk_patrol(&t, &mut rng);
        if p.components()[0].phase != Phase::Uniform {
            p = PatrolStrategy::new(vec![PatrolComponent { phase: Phase::Uniform, ..p.components()[0].clone() }]).unwrap();
        }
        let w = &p.components()[0].walk;
        let period = w.duration();
        let x = random_point(&t, &mut rng);
        // pass times within one period; one visit at the start and the end
        let mut times: Vec<Rational> = w.visit_times(&t, &x).iter().map(|v| v.bounds().0).collect();
        if times.len() > 1 && times.last().unwrap() - times[0] == period {
            times.pop();
        }
        let k = int(times.len() as i128);
        let cap = if k * alpha / period > one() { one() } else { k * alpha / period };
        let got = interception_probability(&t, &p, &x, zero(), alpha);
        prop_assert!(got <= cap);
        let mut gaps: Vec<Rational> = times.windows(2).map(|w| w[1] - w[0]).collect();
        if let (Some(f), Some(l)) = (times.first(), times.last()) {
            gaps.push(*f + period - *l);
        }
        if !times.is_empty() && gaps.iter().all(|g| *g >= alpha) {
            prop_assert_eq!(got, cap);
        }
    }
}

/// Monte Carlo intervals cover the exact value at close to the nominal
/// rate. With 100 repetitions, 93 covers is about two standard errors
/// below 95.
#[test]
fn monte_carlo_covers_exact_values() {
    let t = sample_tree();
    let alpha = int(4);
    let p = e_patrolling(&t, alpha).unwrap();
    let a = tree_attack_strategy(&t, alpha, int(240)).unwrap();
    let exact = to_f64(&evaluate(&t, &p, &a, alpha, Method::Exact).unwrap().exact.unwrap());
    let covered = (0..100u64)
        .filter(|&seed| {
            let r = evaluate(&t, &p, &a, alpha, Method::MonteCarlo { trials: 100_000, seed, jobs: None }).unwrap();
            (r.probability - exact).abs() <= r.ci_halfwidth.unwrap()
        })
        .count();
    assert!(covered >= 93, "covered {covered} of 100");
}
