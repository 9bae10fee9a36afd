//! Problem instances: nodes, demands, fleet and platoon parameters.

mod format;
mod generate;

pub use format::{parse_instance, serialize_instance};
pub use generate::{generate_augerat_like, generate_tiny, AugeratSet};

use crate::cost::{CostModel, Eta};
use crate::error::{Error, Result};

pub type NodeId = usize;

/// Node 0 is the depot; the return depot 0' shares its coordinates.
pub const DEPOT: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Manhattan,
    EuclideanRounded,
}

impl Metric {
    pub fn keyword(&self) -> &'static str {
        match self {
            Metric::Manhattan => "MANHATTAN",
            Metric::EuclideanRounded => "EUC_2D",
        }
    }
}

/// Integer arc length between two points.
pub fn distance(a: Point, b: Point, metric: Metric) -> i64 {
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    match metric {
        Metric::Manhattan => (dx + dy).round() as i64,
        Metric::EuclideanRounded => (dx * dx + dy * dy).sqrt().round() as i64,
    }
}

/// Default fleet size: enough vehicles to carry every demand, plus two.
pub fn default_fleet(total_demand: u64, capacity: u32) -> usize {
    (total_demand.div_ceil(capacity as u64) + 2) as usize
}

/// Largest fleet the solution representation supports.
pub const MAX_FLEET: usize = 128;

/// An MVRP instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    comment: String,
    points: Vec<Point>,
    demands: Vec<u32>,
    capacity: u32,
    fleet_size: usize,
    max_platoon: usize,
    eta: Eta,
    metric: Metric,
    dist: Vec<i64>,
    costs: CostModel,
}

/// Parameters for [`Instance::new`].
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub name: String,
    pub comment: String,
    /// Index 0 is the depot, then customers 1..=N.
    pub points: Vec<Point>,
    /// Customer demands, index-aligned with `points` (the depot entry is ignored).
    pub demands: Vec<u32>,
    pub capacity: u32,
    /// `None` picks [`default_fleet`].
    pub fleet_size: Option<usize>,
    pub max_platoon: usize,
    pub eta: Eta,
    pub metric: Metric,
}

impl Instance {
    pub fn new(spec: InstanceSpec) -> Result<Self> {
        let InstanceSpec {
            name,
            comment,
            points,
            mut demands,
            capacity,
            fleet_size,
            max_platoon,
            eta,
            metric,
        } = spec;
        if points.is_empty() {
            return Err(Error::InvariantViolation("instance needs a depot".into()));
        }
        if demands.len() != points.len() {
            return Err(Error::InvariantViolation(format!(
                "{} demands for {} nodes",
                demands.len(),
                points.len()
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvariantViolation("coordinates must be finite".into()));
        }
        if capacity == 0 {
            return Err(Error::InvariantViolation("capacity must be positive".into()));
        }
        if max_platoon == 0 {
            return Err(Error::InvariantViolation("max platoon size must be positive".into()));
        }
        demands[DEPOT] = 0;
        for (i, &q) in demands.iter().enumerate().skip(1) {
            if q > capacity {
                return Err(Error::DemandExceedsCapacity {
                    customer: i,
                    demand: q,
                    capacity,
                });
            }
        }
        let costs = CostModel::new(eta, max_platoon)?;
        let total: u64 = demands.iter().map(|&q| q as u64).sum();
        let fleet_size = fleet_size.unwrap_or_else(|| default_fleet(total, capacity));
        if fleet_size == 0 || fleet_size > MAX_FLEET {
            return Err(Error::InvariantViolation(format!(
                "fleet size {} outside 1..={}",
                fleet_size, MAX_FLEET
            )));
        }
        if total > fleet_size as u64 * capacity as u64 {
            return Err(Error::InvariantViolation(format!(
                "total demand {} exceeds fleet capacity {}",
                total,
                fleet_size as u64 * capacity as u64
            )));
        }
        let n = points.len();
        let mut dist = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = distance(points[i], points[j], metric);
            }
        }
        Ok(Self {
            name,
            comment,
            points,
            demands,
            capacity,
            fleet_size,
            max_platoon,
            eta,
            metric,
            dist,
            costs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comment(&self) -> &str {
        &self.comment
    }

    /// Number of customers N.
    pub fn customers(&self) -> usize {
        self.points.len() - 1
    }

    /// Number of nodes including the depot.
    pub fn dimension(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, node: NodeId) -> Point {
        self.points[node]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn demand(&self, node: NodeId) -> u32 {
        self.demands[node]
    }

    pub fn demands(&self) -> &[u32] {
        &self.demands
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().map(|&q| q as u64).sum()
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn max_platoon(&self) -> usize {
        self.max_platoon
    }

    pub fn eta(&self) -> Eta {
        self.eta
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn costs(&self) -> &CostModel {
        &self.costs
    }

    /// Arc length; the depot doubles as 0'.
    #[inline]
    pub fn dist(&self, a: NodeId, b: NodeId) -> i64 {
        self.dist[a * self.points.len() + b]
    }

    /// Formats a cost with this instance's fixed-point denominator.
    pub fn fmt_cost(&self, cost: crate::cost::Cost) -> String {
        cost.to_decimal(self.eta.den())
    }

    pub fn spec(&self) -> InstanceSpec {
        InstanceSpec {
            name: self.name.clone(),
            comment: self.comment.clone(),
            points: self.points.clone(),
            demands: self.demands.clone(),
            capacity: self.capacity,
            fleet_size: Some(self.fleet_size),
            max_platoon: self.max_platoon,
            eta: self.eta,
            metric: self.metric,
        }
    }

    /// Same instance with a different maximum platoon size.
    pub fn with_max_platoon(&self, max_platoon: usize) -> Result<Self> {
        Self::new(InstanceSpec {
            max_platoon,
            ..self.spec()
        })
    }

    /// Same instance with a different eta.
    pub fn with_eta(&self, eta: Eta) -> Result<Self> {
        Self::new(InstanceSpec { eta, ..self.spec() })
    }

    /// Manhattan instance from integer coordinates; `coords[0]` is the depot
    /// and `demands` lists customers 1..=N.
    pub fn manhattan(
        name: &str,
        coords: &[(i64, i64)],
        demands: &[u32],
        capacity: u32,
        fleet_size: Option<usize>,
        max_platoon: usize,
        eta: Eta,
    ) -> Result<Self> {
        let mut all = vec![0];
        all.extend_from_slice(demands);
        Self::new(InstanceSpec {
            name: name.to_string(),
            comment: String::new(),
            points: coords.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect(),
            demands: all,
            capacity,
            fleet_size,
            max_platoon,
            eta,
            metric: Metric::Manhattan,
        })
    }
}

/// Overrides applied by [`derive_instance`].
#[derive(Debug, Clone)]
pub struct DeriveParams {
    pub name: String,
    pub capacity: u32,
    pub max_platoon: usize,
    pub eta: Eta,
    /// `None` picks [`default_fleet`] for the kept demand.
    pub fleet_size: Option<usize>,
    pub metric: Metric,
}

/// Builds a sub-instance keeping only the listed customers. Kept customers are
/// renumbered 1..=|keep| in their original relative order; the depot is kept.
pub fn derive_instance(base: &Instance, keep: &[NodeId], params: &DeriveParams) -> Result<Instance> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvariantViolation(format!("customer {} kept twice", w[0])));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&c| c == DEPOT || c > base.customers()) {
        return Err(Error::UnknownCustomer(bad));
    }
    let mut points = vec![base.point(DEPOT)];
    let mut demands = vec![0];
    for &c in &sorted {
        points.push(base.point(c));
        demands.push(base.demand(c));
    }
    let spec = InstanceSpec {
        name: params.name.clone(),
        comment: format!("derived from {} keeping {} customers", base.name(), sorted.len()),
        points,
        demands,
        capacity: params.capacity,
        fleet_size: params.fleet_size,
        max_platoon: params.max_platoon,
        eta: params.eta,
        metric: params.metric,
    };
    Instance::new(spec).map_err(|e| match e {
        Error::DemandExceedsCapacity { .. } | Error::BadEta(_) | Error::InvariantViolation(_) => {
            Error::InvariantViolation(e.to_string())
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tiny() -> Instance {
        Instance::new(InstanceSpec {
            name: "t".into(),
            comment: String::new(),
            points: vec![Point::new(0.0, 0.0), Point::new(5.0, 0.0), Point::new(6.0, 0.0), Point::new(1.0, 4.0)],
            demands: vec![0, 3, 4, 5],
            capacity: 10,
            fleet_size: None,
            max_platoon: 2,
            eta: Eta::parse("0.1").unwrap(),
            metric: Metric::Manhattan,
        })
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = Point::new(0.0, 0.0);
        let p = Point::new(3.0, 4.0);
        assert_eq!(distance(o, p, Metric::Manhattan), 7);
        assert_eq!(distance(o, p, Metric::EuclideanRounded), 5);
        let q = Point::new(2.0, 2.0);
        assert_eq!(distance(q, q, Metric::Manhattan), 0);
        assert_eq!(distance(q, q, Metric::EuclideanRounded), 0);
    }

    #[test]
    fn default_fleet_has_slack() {
        let inst = tiny();
        assert_eq!(inst.total_demand(), 12);
        assert_eq!(inst.fleet_size(), 4);
        assert_eq!(inst.dist(0, 0), 0);
    }

    #[test]
    fn derive_identity_subset() {
        let base = tiny();
        let params = DeriveParams {
            name: "t".into(),
            capacity: 10,
            max_platoon: 2,
            eta: base.eta(),
            fleet_size: Some(base.fleet_size()),
            metric: Metric::Manhattan,
        };
        let d = derive_instance(&base, &[1, 2, 3], &params).unwrap();
        assert_eq!(d.points(), base.points());
        assert_eq!(d.demands(), base.demands());
        assert_eq!(d.fleet_size(), base.fleet_size());
    }

    #[test]
    fn derive_renumbers_in_order() {
        let base = tiny();
        let params = DeriveParams {
            name: "sub".into(),
            capacity: 6,
            max_platoon: 3,
            eta: base.eta(),
            fleet_size: None,
            metric: Metric::Manhattan,
        };
        let d = derive_instance(&base, &[3, 1], &params).unwrap();
        assert_eq!(d.customers(), 2);
        assert_eq!(d.point(1), base.point(1));
        assert_eq!(d.point(2), base.point(3));
        assert_eq!(d.demand(2), 5);
        assert_eq!(d.fleet_size(), default_fleet(8, 6));
    }

    #[test]
    fn derive_errors() {
        let base = tiny();
        let mut params = DeriveParams {
            name: "sub".into(),
            capacity: 10,
            max_platoon: 2,
            eta: base.eta(),
            fleet_size: None,
            metric: Metric::Manhattan,
        };
        assert_eq!(derive_instance(&base, &[1, 9], &params).unwrap_err(), Error::UnknownCustomer(9));
        params.capacity = 4;
        assert!(matches!(
            derive_instance(&base, &[1, 3], &params),
            Err(Error::InvariantViolation(_))
        ));
    }

    proptest! {
        #[test]
        fn manhattan_is_a_metric(
            a in (-50i32..50, -50i32..50),
            b in (-50i32..50, -50i32..50),
            c in (-50i32..50, -50i32..50),
        ) {
            let p = |t: (i32, i32)| Point::new(t.0 as f64, t.1 as f64);
            let (a, b, c) = (p(a), p(b), p(c));
            let d = |x, y| distance(x, y, Metric::Manhattan);
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert!(d(a, c) <= d(a, b) + d(b, c));
            prop_assert_eq!(distance(a, b, Metric::EuclideanRounded), distance(b, a, Metric::EuclideanRounded));
        }
    }
}
