//! Line-oriented instance files in the TSPLIB/CVRP keyword style.
//!
//! ```text
//! NAME : T2
//! TYPE : MVRP
//! DIMENSION : 3
//! METRIC : MANHATTAN
//! CAPACITY : 1
//! FLEET_SIZE : 2
//! MAX_PLATOON : 2
//! ETA : 0.1
//! NODE_COORD_SECTION
//! 1 0 0
//! 2 5 0
//! 3 6 0
//! DEMAND_SECTION
//! 1 0
//! 2 1
//! 3 1
//! DEPOT_SECTION
//! 1
//! -1
//! EOF
//! ```
//!
//! File ids run 1..=DIMENSION. The depot (first DEPOT_SECTION entry, default 1)
//! becomes node 0 and the remaining ids become customers 1..=N in ascending
//! order. Plain CVRP files (`TYPE : CVRP`, `EDGE_WEIGHT_TYPE : EUC_2D`) are
//! accepted too; they default to `MAX_PLATOON : 1` and `ETA : 0`.

use std::fmt::Write as _;

use super::{Instance, InstanceSpec, Metric, Point, DEPOT};
use crate::cost::Eta;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Demands,
    Depot,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| syntax(line, format!("bad {}: {:?}", what, s)))
}

fn parse_metric(line: usize, s: &str) -> Result<Metric> {
    match s {
        "MANHATTAN" | "MAN_2D" => Ok(Metric::Manhattan),
        "EUC_2D" => Ok(Metric::EuclideanRounded),
        other => Err(syntax(line, format!("unsupported metric {}", other))),
    }
}

/// Parses an instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut name = None;
    let mut comment = String::new();
    let mut kind_cvrp = false;
    let mut dimension: Option<usize> = None;
    let mut metric = None;
    let mut capacity: Option<u32> = None;
    let mut fleet: Option<usize> = None;
    let mut max_platoon: Option<usize> = None;
    let mut eta: Option<Eta> = None;
    let mut coords: Vec<Option<Point>> = Vec::new();
    let mut demands: Vec<Option<u32>> = Vec::new();
    let mut depot_id: Option<usize> = None;
    let mut seen_coords = false;
    let mut seen_demands = false;
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let first = line.split([' ', '\t', ':']).next().unwrap_or("");
        let is_keyword = first.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if is_keyword {
            let value = line[first.len()..].trim_start().trim_start_matches(':').trim();
            match first {
                "NAME" => name = Some(value.to_string()),
                "COMMENT" => comment = value.to_string(),
                "TYPE" => match value {
                    "MVRP" => kind_cvrp = false,
                    "CVRP" => kind_cvrp = true,
                    other => return Err(syntax(line_no, format!("unsupported TYPE {}", other))),
                },
                "DIMENSION" => {
                    let d: usize = parse_num(line_no, value, "DIMENSION")?;
                    if d == 0 {
                        return Err(syntax(line_no, "DIMENSION must be positive"));
                    }
                    dimension = Some(d);
                    coords = vec![None; d];
                    demands = vec![None; d];
                }
                "METRIC" | "EDGE_WEIGHT_TYPE" => metric = Some(parse_metric(line_no, value)?),
                "CAPACITY" => capacity = Some(parse_num(line_no, value, "CAPACITY")?),
                "FLEET_SIZE" => fleet = Some(parse_num(line_no, value, "FLEET_SIZE")?),
                "MAX_PLATOON" => max_platoon = Some(parse_num(line_no, value, "MAX_PLATOON")?),
                "ETA" => eta = Some(Eta::parse(value)?),
                "NODE_COORD_SECTION" => {
                    dimension.ok_or(Error::MissingKeyword("DIMENSION"))?;
                    section = Section::Coords;
                    seen_coords = true;
                }
                "DEMAND_SECTION" => {
                    dimension.ok_or(Error::MissingKeyword("DIMENSION"))?;
                    section = Section::Demands;
                    seen_demands = true;
                }
                "DEPOT_SECTION" => section = Section::Depot,
                "EOF" => break,
                other => return Err(Error::UnknownKeyword(other.to_string())),
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                return Err(syntax(line_no, "data outside of a section"));
            }
            Section::Coords => {
                if fields.len() != 3 {
                    return Err(syntax(line_no, "expected `id x y`"));
                }
                let id: usize = parse_num(line_no, fields[0], "node id")?;
                let x: f64 = parse_num(line_no, fields[1], "coordinate")?;
                let y: f64 = parse_num(line_no, fields[2], "coordinate")?;
                let slot = id
                    .checked_sub(1)
                    .and_then(|i| coords.get_mut(i))
                    .ok_or_else(|| syntax(line_no, format!("node id {} outside 1..=DIMENSION", id)))?;
                if slot.is_some() {
                    return Err(Error::DuplicateNodeId(id));
                }
                *slot = Some(Point::new(x, y));
            }
            Section::Demands => {
                if fields.len() != 2 {
                    return Err(syntax(line_no, "expected `id demand`"));
                }
                let id: usize = parse_num(line_no, fields[0], "node id")?;
                let q: u32 = parse_num(line_no, fields[1], "demand")?;
                let slot = id
                    .checked_sub(1)
                    .and_then(|i| demands.get_mut(i))
                    .ok_or_else(|| syntax(line_no, format!("node id {} outside 1..=DIMENSION", id)))?;
                if slot.is_some() {
                    return Err(Error::DuplicateNodeId(id));
                }
                *slot = Some(q);
            }
            Section::Depot => {
                for f in fields {
                    let v: i64 = parse_num(line_no, f, "depot id")?;
                    if v == -1 {
                        continue;
                    }
                    if depot_id.is_some() {
                        return Err(syntax(line_no, "only a single depot is supported"));
                    }
                    depot_id = Some(v as usize);
                }
            }
        }
    }

    let name = name.ok_or(Error::MissingKeyword("NAME"))?;
    let dimension = dimension.ok_or(Error::MissingKeyword("DIMENSION"))?;
    let capacity = capacity.ok_or(Error::MissingKeyword("CAPACITY"))?;
    if !seen_coords {
        return Err(Error::MissingKeyword("NODE_COORD_SECTION"));
    }
    if !seen_demands {
        return Err(Error::MissingKeyword("DEMAND_SECTION"));
    }
    let (max_platoon, eta) = if kind_cvrp {
        (max_platoon.unwrap_or(1), eta.unwrap_or_else(Eta::zero))
    } else {
        (
            max_platoon.ok_or(Error::MissingKeyword("MAX_PLATOON"))?,
            eta.ok_or(Error::MissingKeyword("ETA"))?,
        )
    };
    let metric = metric.unwrap_or(if kind_cvrp { Metric::EuclideanRounded } else { Metric::Manhattan });
    let depot_file_id = depot_id.unwrap_or(1);
    if depot_file_id == 0 || depot_file_id > dimension {
        return Err(syntax(0, format!("depot id {} outside 1..=DIMENSION", depot_file_id)));
    }
    if let Some(missing) = coords.iter().position(|c| c.is_none()) {
        return Err(syntax(0, format!("no coordinates for node {}", missing + 1)));
    }
    if let Some(missing) = demands.iter().position(|c| c.is_none()) {
        return Err(syntax(0, format!("no demand for node {}", missing + 1)));
    }
    let mut order = vec![depot_file_id - 1];
    order.extend((0..dimension).filter(|&i| i != depot_file_id - 1));
    let points = order.iter().map(|&i| coords[i].unwrap()).collect();
    let mut dem: Vec<u32> = order.iter().map(|&i| demands[i].unwrap()).collect();
    if dem[DEPOT] != 0 {
        return Err(syntax(0, "depot demand must be 0"));
    }
    // report customers with their file ids
    for (k, &q) in dem.iter().enumerate().skip(1) {
        if q > capacity {
            return Err(Error::DemandExceedsCapacity {
                customer: order[k] + 1,
                demand: q,
                capacity,
            });
        }
    }
    dem[DEPOT] = 0;
    Instance::new(InstanceSpec {
        name,
        comment,
        points,
        demands: dem,
        capacity,
        fleet_size: fleet,
        max_platoon,
        eta,
        metric,
    })
}

/// Writes an instance in the format read by [`parse_instance`].
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", inst.name());
    let _ = writeln!(out, "TYPE : MVRP");
    if !inst.comment().is_empty() {
        let _ = writeln!(out, "COMMENT : {}", inst.comment());
    }
    let _ = writeln!(out, "DIMENSION : {}", inst.dimension());
    let _ = writeln!(out, "METRIC : {}", inst.metric().keyword());
    let _ = writeln!(out, "CAPACITY : {}", inst.capacity());
    let _ = writeln!(out, "FLEET_SIZE : {}", inst.fleet_size());
    let _ = writeln!(out, "MAX_PLATOON : {}", inst.max_platoon());
    let _ = writeln!(out, "ETA : {}", inst.eta());
    out.push_str("NODE_COORD_SECTION\n");
    for (i, p) in inst.points().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", i + 1, p.x, p.y);
    }
    out.push_str("DEMAND_SECTION\n");
    for (i, q) in inst.demands().iter().enumerate() {
        let _ = writeln!(out, "{} {}", i + 1, q);
    }
    out.push_str("DEPOT_SECTION\n1\n-1\nEOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "NAME : min\nTYPE : MVRP\nDIMENSION : 2\nCAPACITY : 70\nMAX_PLATOON : 2\nETA : 0.1\n\
NODE_COORD_SECTION\n1 0 0\n2 3 4\nDEMAND_SECTION\n1 0\n2 10\nDEPOT_SECTION\n1\n-1\nEOF\n";

    #[test]
    fn minimal_file() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.customers(), 1);
        assert_eq!(inst.capacity(), 70);
        assert_eq!(inst.max_platoon(), 2);
        assert_eq!(inst.metric(), Metric::Manhattan);
        assert_eq!(inst.dist(0, 1), 7);
        assert_eq!(inst.fleet_size(), 3);
    }

    #[test]
    fn demand_over_capacity() {
        let text = MINIMAL.replace("2 10", "2 80");
        assert_eq!(
            parse_instance(&text).unwrap_err(),
            Error::DemandExceedsCapacity {
                customer: 2,
                demand: 80,
                capacity: 70
            }
        );
    }

    #[test]
    fn missing_and_unknown_keywords() {
        let text = MINIMAL.replace("ETA : 0.1\n", "");
        assert_eq!(parse_instance(&text).unwrap_err(), Error::MissingKeyword("ETA"));
        let text = MINIMAL.replace("CAPACITY : 70\n", "");
        assert_eq!(parse_instance(&text).unwrap_err(), Error::MissingKeyword("CAPACITY"));
        let text = MINIMAL.replace("ETA : 0.1\n", "ETA : 0.1\nWEIRD : 3\n");
        assert_eq!(parse_instance(&text).unwrap_err(), Error::UnknownKeyword("WEIRD".into()));
    }

    #[test]
    fn duplicate_node() {
        let text = MINIMAL.replace("2 3 4\n", "2 3 4\n2 5 5\n");
        assert_eq!(parse_instance(&text).unwrap_err(), Error::DuplicateNodeId(2));
    }

    #[test]
    fn bad_eta() {
        let text = MINIMAL.replace("ETA : 0.1", "ETA : 0.5").replace("MAX_PLATOON : 2", "MAX_PLATOON : 4");
        assert!(matches!(parse_instance(&text).unwrap_err(), Error::BadEta(_)));
    }

    #[test]
    fn cvrp_file_defaults() {
        let text = "NAME : A-n4\nCOMMENT : (toy)\nTYPE : CVRP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 100\n\
NODE_COORD_SECTION\n 1 82 76\n 2 96 44\n 3 50 5\n 4 49 8\nDEMAND_SECTION\n1 0\n2 19\n3 21\n4 6\nDEPOT_SECTION\n 1\n -1\nEOF\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.customers(), 3);
        assert_eq!(inst.max_platoon(), 1);
        assert_eq!(inst.eta(), Eta::zero());
        assert_eq!(inst.metric(), Metric::EuclideanRounded);
        assert_eq!(inst.dist(0, 1), 35);
    }

    #[test]
    fn depot_need_not_be_first() {
        let text = MINIMAL.replace("DEPOT_SECTION\n1\n", "DEPOT_SECTION\n2\n").replace("1 0\n2 10", "1 10\n2 0");
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.point(0), Point::new(3.0, 4.0));
        assert_eq!(inst.demand(1), 10);
    }

    proptest! {
        #[test]
        fn parse_serialize_round_trip(
            pts in proptest::collection::vec((-100i32..100, -100i32..100, 0u32..30), 1..12),
            cap in 30u32..60,
            l in 1usize..4,
            euclid in any::<bool>(),
        ) {
            let mut points = vec![Point::new(0.0, 0.0)];
            let mut demands = vec![0];
            for (x, y, q) in &pts {
                points.push(Point::new(*x as f64, *y as f64));
                demands.push(*q);
            }
            let inst = Instance::new(InstanceSpec {
                name: "rt".into(),
                comment: "round trip".into(),
                points,
                demands,
                capacity: cap,
                fleet_size: None,
                max_platoon: l,
                eta: Eta::parse("0.1").unwrap(),
                metric: if euclid { Metric::EuclideanRounded } else { Metric::Manhattan },
            }).unwrap();
            let back = parse_instance(&serialize_instance(&inst)).unwrap();
            prop_assert_eq!(back.name(), inst.name());
            prop_assert_eq!(back.comment(), inst.comment());
            prop_assert_eq!(back.points(), inst.points());
            prop_assert_eq!(back.demands(), inst.demands());
            prop_assert_eq!(back.capacity(), inst.capacity());
            prop_assert_eq!(back.fleet_size(), inst.fleet_size());
            prop_assert_eq!(back.max_platoon(), inst.max_platoon());
            prop_assert_eq!(back.eta(), inst.eta());
            prop_assert_eq!(back.metric(), inst.metric());
        }
    }
}
