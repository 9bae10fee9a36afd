use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cost::Eta;
use crate::instance::generate_tiny;
use crate::solution::validate;

fn eta() -> Eta {
    Eta::new(1, 10).unwrap()
}

fn t2(q: u32) -> Instance {
    Instance::manhattan("t2", &[(0, 0), (5, 0), (6, 0)], &[1, 1], q, Some(2), 2, eta()).unwrap()
}

fn t1() -> Instance {
    Instance::manhattan("t1", &[(0, 0), (1, 0), (-1, 0)], &[1, 1], 1, Some(2), 2, eta()).unwrap()
}

fn singletons(inst: &Instance) -> Solution {
    let routes: Vec<_> = (1..inst.dimension()).map(|c| vec![(c, true)]).collect();
    Solution::from_mv_routes(inst, &routes).unwrap()
}

fn seg_of(sol: &Solution, node: NodeId) -> usize {
    sol.segments().iter().position(|s| s.visits.iter().any(|v| v.node == node)).unwrap()
}

fn no_tabu() -> TabuState {
    TabuState::new(10)
}

#[test]
fn serial_merge_t2() {
    let inst = t2(2);
    let sol = singletons(&inst);
    assert_eq!(inst.fmt_cost(sol.cost()), "22.0");
    let (r, s) = (seg_of(&sol, 2), seg_of(&sol, 1));
    let mv = serial_merge(&sol, r, s, 1, &inst, &no_tabu(), sol.cost()).unwrap();
    assert_eq!(inst.fmt_cost(mv.delta), "-10.0");
    let next = apply(&sol, &mv);
    assert_eq!(inst.fmt_cost(next.cost()), "12.0");
    assert!(validate(&next, &inst).ok());
    assert_eq!(next.segments().len(), 1);
    assert!(!mv.touched_arcs.is_empty());
}

#[test]
fn serial_merge_infeasible_when_full() {
    let inst = t2(1);
    let base = Solution::from_mv_routes(&inst, &[vec![(1, true)], vec![(1, false), (2, true)]]).unwrap();
    // the two-vehicle segment is full and cannot pair with anything
    let inst3 = Instance::manhattan("t", &[(0, 0), (5, 0), (6, 0), (0, 5)], &[1, 1, 1], 1, Some(3), 2, eta()).unwrap();
    let sol = Solution::from_mv_routes(&inst3, &[vec![(1, true)], vec![(1, false), (2, true)], vec![(3, true)]]).unwrap();
    let r = seg_of(&sol, 3);
    let s = seg_of(&sol, 1);
    let err = serial_merge(&sol, r, s, 1, &inst3, &no_tabu(), sol.cost()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
    assert!(validate(&base, &inst).ok());
}

#[test]
fn parallel_merge_t2() {
    let inst = t2(1);
    let sol = singletons(&inst);
    let (r, s) = (seg_of(&sol, 2), seg_of(&sol, 1));
    let mv = parallel_merge(&sol, r, s, 1, 2, &inst, &no_tabu(), sol.cost()).unwrap();
    assert_eq!(inst.fmt_cost(mv.delta), "-1.0");
    let next = apply(&sol, &mv);
    assert_eq!(inst.fmt_cost(next.cost()), "21.0");
    assert!(validate(&next, &inst).ok());
}

#[test]
fn parallel_merge_overflow_is_infeasible() {
    let inst = t2(1).with_max_platoon(1).unwrap();
    let sol = singletons(&inst);
    let (r, s) = (seg_of(&sol, 2), seg_of(&sol, 1));
    let err = parallel_merge(&sol, r, s, 1, 2, &inst, &no_tabu(), sol.cost()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
}

#[test]
fn t1_merges_never_help() {
    let inst = t1();
    let sol = singletons(&inst);
    assert_eq!(inst.fmt_cost(sol.cost()), "4.0");
    let cfg = NeighborhoodConfig {
        relocate: false,
        merges: true,
    };
    let cands = candidates(&sol, &inst, cfg);
    assert!(!cands.is_empty());
    assert!(cands.iter().all(|c| c.delta >= Cost::ZERO));
}

#[test]
fn t2_neighborhood_picks_parallel_merge() {
    let inst = t2(1);
    let sol = singletons(&inst);
    let mv = enumerate_neighborhood(&sol, &inst, &no_tabu(), sol.cost(), NeighborhoodConfig::default()).unwrap();
    assert_eq!(mv.kind, MoveKind::ParallelMerge);
    assert_eq!(inst.fmt_cost(mv.delta), "-1.0");
}

#[test]
fn relocate_example() {
    let coords = [(0, 0), (2, 0), (2, 2), (4, 0), (2, 4)];
    let inst = Instance::manhattan("r", &coords, &[1, 1, 1, 1], 10, Some(2), 1, Eta::zero()).unwrap();
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true), (2, true), (3, true)], vec![(4, true)]]).unwrap();
    assert_eq!(inst.fmt_cost(sol.cost()), "24.0");
    let t = seg_of(&sol, 4);
    let server = sol.segments()[t].mvs.iter().next().unwrap();
    let target = RelocateTarget {
        segment: Some(t),
        position: 1,
        server,
    };
    let mv = relocate(&sol, 2, target, &inst, &no_tabu(), sol.cost()).unwrap();
    assert_eq!(inst.fmt_cost(mv.delta), "-4.0");
    assert_eq!(mv.kind, MoveKind::RelocateInterMv);
    let next = apply(&sol, &mv);
    assert_eq!(inst.fmt_cost(next.cost()), "20.0");
    assert!(validate(&next, &inst).ok());
}

#[test]
fn relocate_in_place_is_free() {
    let coords = [(0, 0), (2, 0), (2, 2), (4, 0)];
    let inst = Instance::manhattan("r", &coords, &[1, 1, 1], 10, Some(1), 1, Eta::zero()).unwrap();
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true), (2, true), (3, true)]]).unwrap();
    let target = RelocateTarget {
        segment: Some(0),
        position: 1,
        server: 0,
    };
    let mv = relocate(&sol, 2, target, &inst, &no_tabu(), sol.cost()).unwrap();
    assert_eq!(mv.delta, Cost::ZERO);
    assert_eq!(mv.kind, MoveKind::RelocateIntraSegment);
    assert_eq!(mv.result, sol);
}

#[test]
fn relocate_over_capacity_is_infeasible() {
    let coords = [(0, 0), (2, 0), (2, 2), (4, 0)];
    let inst = Instance::manhattan("r", &coords, &[5, 5, 5], 10, Some(2), 1, Eta::zero()).unwrap();
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true), (2, true)], vec![(3, true)]]).unwrap();
    let t = seg_of(&sol, 1);
    let server = sol.segments()[t].mvs.iter().next().unwrap();
    let target = RelocateTarget {
        segment: Some(t),
        position: 0,
        server,
    };
    let err = relocate(&sol, 3, target, &inst, &no_tabu(), sol.cost()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
}

#[test]
fn attach_path_examples() {
    // target next to the source: internal 4 plus incident arc 6 = 10
    let inst = Instance::manhattan("a", &[(0, 0), (6, 0), (10, 0)], &[1, 1], 10, Some(3), 2, eta()).unwrap();
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true), (2, true)]]).unwrap();
    let p = cheapest_attach_path(&sol, 0, Direction::FromSource, &inst).unwrap();
    assert_eq!(inst.fmt_cost(p.cost), "8.0");
    assert_eq!(p.segments, vec![0]);

    let full = Solution::from_mv_routes(&inst, &[vec![(1, true), (2, true)], vec![(1, false), (2, false)]]).unwrap();
    assert_eq!(cheapest_attach_path(&full, 0, Direction::ToSink, &inst), Err(Error::NoFeasiblePath));

    let flat = inst.with_eta(Eta::zero()).unwrap();
    let sol = Solution::from_mv_routes(&flat, &[vec![(1, true), (2, true)]]).unwrap();
    let p = cheapest_attach_path(&sol, 0, Direction::ToSink, &flat).unwrap();
    assert_eq!(p.cost, Cost(4 + 10));
}

#[test]
fn fully_tabu_neighborhood() {
    let inst = t2(1);
    let sol = singletons(&inst);
    let mut tabu = TabuState::new(100);
    let mut arcs = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            arcs.push((a, b));
        }
    }
    tabu.record(TabuList::Merge, &arcs);
    tabu.record(TabuList::Relocate, &arcs);
    let err = enumerate_neighborhood(&sol, &inst, &tabu, Cost(i64::MIN / 2), NeighborhoodConfig::default()).unwrap_err();
    assert_eq!(err, Error::NoAdmissibleMove);
    // aspiration lets an improving tabu move through
    let mv = enumerate_neighborhood(&sol, &inst, &tabu, sol.cost(), NeighborhoodConfig::default()).unwrap();
    assert!(mv.is_tabu(&tabu));
}

/// Random solution with platoons: random service assignment and orders, and
/// vehicles tagging along through customers of others.
pub(crate) fn random_solution(inst: &Instance, rng: &mut ChaCha8Rng) -> Option<Solution> {
    let k = inst.fleet_size();
    let mut routes: Vec<Vec<(NodeId, bool)>> = vec![Vec::new(); k];
    let mut loads = vec![0u32; k];
    let mut custs: Vec<NodeId> = (1..inst.dimension()).collect();
    custs.shuffle(rng);
    for c in custs {
        let opts: Vec<usize> = (0..k).filter(|&m| loads[m] + inst.demand(c) <= inst.capacity()).collect();
        let m = *opts.choose(rng)?;
        loads[m] += inst.demand(c);
        routes[m].push((c, true));
    }
    for m in 0..k {
        if rng.gen_bool(0.5) {
            let extra = rng.gen_range(1..inst.dimension());
            if !routes[m].iter().any(|x| x.0 == extra) {
                let at = rng.gen_range(0..=routes[m].len());
                routes[m].insert(at, (extra, false));
            }
        }
    }
    let sol = Solution::from_mv_routes(inst, &routes).ok()?;
    validate(&sol, inst).ok().then_some(sol)
}

#[test]
fn every_priced_move_is_exact_and_valid() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = 2 + (seed % 2) as usize;
        let inst = generate_tiny(seed, 5, 3, l, eta()).unwrap();
        let Some(mut sol) = random_solution(&inst, &mut rng) else { continue };
        for _ in 0..4 {
            let cands = candidates(&sol, &inst, NeighborhoodConfig::default());
            for c in &cands {
                let mv = materialize(&sol, &inst, c).unwrap();
                let report = validate(&mv.result, &inst);
                assert!(report.ok(), "{:?} -> {:?}", c, report);
                assert_eq!(mv.result.cost(), sol.cost() + c.delta);
                checked += 1;
            }
            let Some(c) = cands.get(rng.gen_range(0..cands.len().max(1))) else { break };
            sol = materialize(&sol, &inst, c).unwrap().result;
        }
    }
    assert!(checked > 1000, "only {checked} moves checked");
}

#[test]
fn destroyed_arcs_are_recorded() {
    let inst = t2(1);
    let sol = singletons(&inst);
    let mv = enumerate_neighborhood(&sol, &inst, &no_tabu(), sol.cost(), NeighborhoodConfig::default()).unwrap();
    let before = node_arcs(&sol);
    let after = node_arcs(&mv.result);
    for a in &mv.touched_arcs {
        assert!(before.contains(a) && !after.contains(a));
    }
    for a in &mv.created_arcs {
        assert!(after.contains(a) && !before.contains(a));
    }
}
