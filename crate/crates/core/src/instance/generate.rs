//! Synthetic CVRP base instances in the style of the Augerat A and B sets.
//!
//! Set A scatters customers uniformly on a 100 x 100 grid; set B groups them
//! around a few cluster centres. Demands are uniform in 1..=30 and the
//! capacity is 100, as in the classic files. These stand in for the original
//! benchmark files, which the derivation pipeline also accepts unchanged.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Instance, InstanceSpec, Metric, Point};
use crate::cost::Eta;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugeratSet {
    A,
    B,
}

impl AugeratSet {
    pub fn letter(&self) -> char {
        match self {
            AugeratSet::A => 'A',
            AugeratSet::B => 'B',
        }
    }
}

/// Generates a CVRP base instance with `nodes` nodes (depot included).
pub fn generate_augerat_like(set: AugeratSet, nodes: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((set.letter() as u64) << 56));
    let mut points = Vec::with_capacity(nodes);
    let mut demands = Vec::with_capacity(nodes);
    points.push(Point::new(rng.gen_range(1..=100) as f64, rng.gen_range(1..=100) as f64));
    demands.push(0);
    let centres: Vec<(i32, i32)> = match set {
        AugeratSet::A => Vec::new(),
        AugeratSet::B => {
            let k = rng.gen_range(2..=6);
            (0..k).map(|_| (rng.gen_range(10..=90), rng.gen_range(10..=90))).collect()
        }
    };
    for _ in 1..nodes {
        let (x, y) = match set {
            AugeratSet::A => (rng.gen_range(1..=100), rng.gen_range(1..=100)),
            AugeratSet::B => {
                let (cx, cy) = centres[rng.gen_range(0..centres.len())];
                let dx = rng.gen_range(-6..=6) + rng.gen_range(-6..=6);
                let dy = rng.gen_range(-6..=6) + rng.gen_range(-6..=6);
                ((cx + dx).clamp(1, 100), (cy + dy).clamp(1, 100))
            }
        };
        points.push(Point::new(x as f64, y as f64));
        demands.push(rng.gen_range(1..=30));
    }
    let total: u32 = demands.iter().sum();
    let trucks = total.div_ceil(100);
    Instance::new(InstanceSpec {
        name: format!("G{}-n{}-k{}-s{}", set.letter(), nodes, trucks, seed),
        comment: format!("Augerat-style set {} layout, seed {}", set.letter(), seed),
        points,
        demands,
        capacity: 100,
        fleet_size: Some(trucks as usize),
        max_platoon: 1,
        eta: Eta::zero(),
        metric: Metric::EuclideanRounded,
    })
}

/// Small random Manhattan instance on a 0..=10 grid, for exact comparisons.
/// Demands are 1..=5 with capacity 10, so several customers fit per vehicle.
pub fn generate_tiny(seed: u64, customers: usize, fleet_size: usize, max_platoon: usize, eta: Eta) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<(i64, i64)> = (0..=customers).map(|_| (rng.gen_range(0..=10), rng.gen_range(0..=10))).collect();
    let mut demands: Vec<u32> = (0..customers).map(|_| rng.gen_range(1..=5)).collect();
    // keep the fleet able to carry everything
    while demands.iter().sum::<u32>() > 10 * fleet_size as u32 {
        let i = demands.iter().enumerate().max_by_key(|x| x.1).unwrap().0;
        demands[i] -= 1;
    }
    Instance::manhattan(
        &format!("tiny-n{}-k{}-l{}-s{}", customers + 1, fleet_size, max_platoon, seed),
        &coords,
        &demands,
        10,
        Some(fleet_size),
        max_platoon,
        eta,
    )
}
