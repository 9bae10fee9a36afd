//! Perturbation: pull vehicles out of platoons into stand-alone routes.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::solution::{MvId, Segment, Solution, Visit};

/// Vehicles that share at least one segment with another vehicle.
pub fn platoon_mvs(sol: &Solution) -> Vec<MvId> {
    let mut out: Vec<MvId> = sol
        .used_mvs()
        .filter(|&k| sol.paths()[k].iter().any(|&s| sol.segments()[s].mvs.len() > 1))
        .collect();
    out.sort_unstable();
    out
}

/// Extracts `count` distinct platoon vehicles, chosen uniformly, each into a
/// single-brunch route serving exactly its own customers in their current
/// order.
pub fn shake<R: Rng>(sol: &Solution, count: usize, rng: &mut R, inst: &Instance) -> Result<Solution> {
    let pool = platoon_mvs(sol);
    if pool.is_empty() {
        return Err(Error::NothingToShake);
    }
    let count = count.clamp(1, pool.len());
    let mut chosen: Vec<MvId> = sample(rng, pool.len(), count).into_iter().map(|i| pool[i]).collect();
    chosen.sort_unstable();
    let mut segments: Vec<Segment> = sol.segments().to_vec();
    let mut paths = sol.paths().to_vec();
    for &k in &chosen {
        let mut own: Vec<Visit> = Vec::new();
        for &s in &paths[k] {
            for v in &segments[s].visits {
                if v.server == Some(k) {
                    own.push(*v);
                }
            }
        }
        for &s in &paths[k] {
            segments[s].visits.retain(|v| v.server != Some(k));
            segments[s].mvs.remove(k);
            if segments[s].mvs.is_empty() {
                segments[s].visits.clear();
            }
        }
        if own.is_empty() {
            paths[k].clear();
        } else {
            segments.push(Segment {
                mvs: Default::default(),
                visits: own,
            });
            paths[k] = vec![segments.len() - 1];
        }
    }
    Solution::from_parts(segments, paths, inst)
}
