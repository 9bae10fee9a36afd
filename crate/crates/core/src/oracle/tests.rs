use super::*;
use crate::cost::{Cost, Eta};
use crate::error::Error;
use crate::instance::{generate_tiny, Instance};
use crate::solution::validate;

fn eta() -> Eta {
    Eta::new(1, 10).unwrap()
}

fn t2() -> Instance {
    Instance::manhattan("t2", &[(0, 0), (5, 0), (6, 0)], &[1, 1], 1, Some(2), 2, eta()).unwrap()
}

#[test]
fn tiny_examples() {
    let t1 = Instance::manhattan("t1", &[(0, 0), (1, 0), (-1, 0)], &[1, 1], 1, Some(2), 2, eta()).unwrap();
    let (sol, cost) = brute_force_opt(&t1).unwrap();
    assert_eq!(t1.fmt_cost(cost), "4.0");
    assert!(validate(&sol, &t1).ok());

    let t2 = t2();
    let (sol, cost) = brute_force_opt(&t2).unwrap();
    assert_eq!(t2.fmt_cost(cost), "21.0");
    assert!(validate(&sol, &t2).ok());
    assert_eq!(t2.fmt_cost(brute_force_vrp(&t2).unwrap()), "22.0");
}

#[test]
fn t2_bounds() {
    let inst = t2();
    let b = theorem1_bounds(brute_force_vrp(&inst).unwrap(), inst.eta(), inst.max_platoon()).unwrap();
    assert_eq!(b.lower_decimal(), "19.8");
    assert!(b.contains(brute_force_opt(&inst).unwrap().1));
}

#[test]
fn size_guard() {
    let big = generate_tiny(1, 9, 3, 2, eta()).unwrap();
    assert!(matches!(brute_force_opt(&big), Err(Error::InstanceTooLarge(_))));
    let fleet = generate_tiny(1, 4, 4, 2, eta()).unwrap();
    assert!(matches!(brute_force_vrp(&fleet), Err(Error::InstanceTooLarge(_))));
}

#[test]
fn flat_eta_matches_vrp() {
    for seed in 0..15 {
        let inst = generate_tiny(seed, 5, 3, 3, Eta::zero()).unwrap();
        assert_eq!(brute_force_opt(&inst).unwrap().1, brute_force_vrp(&inst).unwrap(), "seed {seed}");
    }
}

#[test]
fn single_platoon_limit_is_vrp() {
    for seed in 0..10 {
        let inst = generate_tiny(seed, 5, 3, 1, eta()).unwrap();
        assert_eq!(brute_force_opt(&inst).unwrap().1, brute_force_vrp(&inst).unwrap(), "seed {seed}");
    }
}

#[test]
fn sandwich_and_monotone() {
    for seed in 0..20 {
        let base = generate_tiny(100 + seed, 5, 3, 1, eta()).unwrap();
        let vrp = brute_force_vrp(&base).unwrap();
        let mut prev = Cost(i64::MAX);
        for l in 1..=3 {
            let inst = base.with_max_platoon(l).unwrap();
            let (sol, cost) = brute_force_opt(&inst).unwrap();
            assert!(validate(&sol, &inst).ok());
            assert_eq!(sol.cost(), cost);
            assert!(cost <= prev, "seed {seed} l {l}");
            prev = cost;
            let b = theorem1_bounds(vrp, inst.eta(), l).unwrap();
            if l > 1 {
                assert!(b.contains(cost), "seed {seed} l {l}");
            } else {
                assert_eq!(cost, vrp);
            }
        }
    }
}

#[test]
fn oracle_never_beaten_by_random_solutions() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let inst = generate_tiny(seed, 5, 3, 2 + (seed % 2) as usize, eta()).unwrap();
        let (_, opt) = brute_force_opt(&inst).unwrap();
        for _ in 0..20 {
            if let Some(sol) = crate::neighborhood::tests::random_solution(&inst, &mut rng) {
                assert!(sol.cost() >= opt);
            }
        }
    }
}
