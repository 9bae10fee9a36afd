use super::*;
use crate::cost::Eta;

fn eta() -> Eta {
    Eta::new(1, 10).unwrap()
}

fn t2(q: u32) -> Instance {
    Instance::manhattan("t2", &[(0, 0), (5, 0), (6, 0)], &[1, 1], q, Some(2), 2, eta()).unwrap()
}

fn t2_opt(inst: &Instance) -> Solution {
    Solution::from_mv_routes(inst, &[vec![(1, true)], vec![(1, false), (2, true)]]).unwrap()
}

#[test]
fn empty_solution_costs_nothing() {
    let inst = t2(1);
    let sol = Solution::empty(&inst);
    assert_eq!(sol.cost(), Cost::ZERO);
    assert_eq!(sol.total_cost(&inst).unwrap(), Cost::ZERO);
}

#[test]
fn single_route_cost() {
    let inst = Instance::manhattan("one", &[(0, 0), (5, 0)], &[1], 10, Some(1), 2, eta()).unwrap();
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true)]]).unwrap();
    assert_eq!(inst.fmt_cost(sol.cost()), "10.0");
    assert!(validate(&sol, &inst).ok());
    assert!(sol.is_single_brunch(0));
}

#[test]
fn t2_platoon_then_split() {
    let inst = t2(1);
    let sol = t2_opt(&inst);
    assert_eq!(inst.fmt_cost(sol.cost()), "21.0");
    assert_eq!(sol.total_cost(&inst).unwrap(), sol.cost());
    assert_eq!(sol.segments().len(), 2);
    assert_eq!(sol.segments()[0].mvs.len(), 2);
    assert!(validate(&sol, &inst).ok(), "{:?}", validate(&sol, &inst));

    let routes = mv_routes(&sol);
    let mut lists: Vec<_> = routes.values().cloned().collect();
    lists.sort();
    assert_eq!(lists, vec![vec![1], vec![1, 2]]);

    let vrp = drop_repeats(&routes, &sol.serving(&inst));
    let mut kept: Vec<_> = vrp.routes.values().cloned().collect();
    kept.sort();
    assert_eq!(kept, vec![vec![1], vec![2]]);
    assert_eq!(vrp.distance(&inst), 22);
    assert!(validate_vrp_routes(&vrp, &inst).is_ok());
}

#[test]
fn both_serving_one_customer_is_flagged() {
    let inst = t2(1);
    let sol = Solution::from_mv_routes(&inst, &[vec![(1, true)], vec![(1, true), (2, false)]]).unwrap();
    let codes = validate(&sol, &inst).codes();
    assert!(codes.contains(&ViolationCode::MultiServedCustomer));
    assert!(codes.contains(&ViolationCode::UnservedCustomer));
}

#[test]
fn oversized_segment_is_flagged() {
    let inst = t2(1);
    let mut doc = t2_opt(&inst).to_doc(&inst);
    // add a third vehicle id to the shared segment
    doc.segments[0].mvs.push(5);
    let codes = validate_doc(&doc, &inst).codes();
    assert!(codes.contains(&ViolationCode::GanttMismatch));
    let inst3 = Instance::manhattan("t2", &[(0, 0), (5, 0), (6, 0)], &[1, 1], 1, Some(3), 2, eta()).unwrap();
    let mut doc = t2_opt(&inst3).to_doc(&inst3);
    doc.segments[0].mvs.push(2);
    doc.mv_paths.insert(2, vec![0, 1, 0]);
    doc.dag_arcs.push([1, 0]);
    doc.cost = inst3.fmt_cost(doc_cost(&doc, &inst3).unwrap());
    assert_eq!(validate_doc(&doc, &inst3).codes(), vec![ViolationCode::PlatoonOverflow]);
}

#[test]
fn json_round_trip() {
    let inst = t2(1);
    let sol = t2_opt(&inst);
    let text = sol.to_doc(&inst).to_json();
    let doc = SolutionDoc::from_json(&text).unwrap();
    assert!(validate_doc(&doc, &inst).ok());
    assert_eq!(doc.to_solution(&inst).unwrap(), sol);
    assert!(text.contains("\"cost\": \"21.0\""));
}

#[test]
fn chains_merge_into_one_segment() {
    let inst = Instance::manhattan("c", &[(0, 0), (1, 0), (2, 0), (3, 0)], &[1, 1, 1], 10, Some(2), 2, eta()).unwrap();
    let segs = (1..=3)
        .map(|v| Segment {
            mvs: MvSet::EMPTY,
            visits: vec![Visit::served(v, 1)],
        })
        .collect();
    let sol = Solution::from_parts(segs, vec![vec![], vec![0, 1, 2]], &inst).unwrap();
    assert_eq!(sol.segments().len(), 1);
    assert_eq!(sol.paths()[0], vec![0]);
    assert_eq!(sol.paths()[1], Vec::<usize>::new());
    assert_eq!(sol.segments()[0].visits.iter().map(|v| v.server).collect::<Vec<_>>(), vec![Some(0); 3]);
    assert_eq!(inst.fmt_cost(sol.cost()), "6.0");
}

#[test]
fn relabelling_is_canonical() {
    let inst = t2(1);
    let a = Solution::from_mv_routes(&inst, &[vec![(1, true)], vec![(1, false), (2, true)]]).unwrap();
    let b = Solution::from_mv_routes(&inst, &[vec![(1, false), (2, true)], vec![(1, true)]]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn crowded_node_splits_groups() {
    // three vehicles meet at c1 but only two may travel together
    let inst = Instance::manhattan(
        "crowd",
        &[(0, 0), (5, 0), (6, 0), (5, 1), (4, 0)],
        &[1, 1, 1, 1],
        10,
        Some(3),
        2,
        eta(),
    )
    .unwrap();
    let routes = vec![
        vec![(4, true), (1, true)],
        vec![(4, false), (1, false), (2, true)],
        vec![(1, false), (3, true)],
    ];
    let sol = Solution::from_mv_routes(&inst, &routes).unwrap();
    let report = validate(&sol, &inst);
    assert!(report.ok(), "{report:?}");
    assert_eq!(sol.total_cost(&inst).unwrap(), sol.cost());
}

#[test]
fn node_arcs_include_depot_links() {
    let inst = t2(1);
    let arcs = node_arcs(&t2_opt(&inst));
    assert_eq!(arcs, vec![(0, 1), (1, 0), (1, 2), (2, 0)]);
}
