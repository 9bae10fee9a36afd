//! Platoon-saving bounds relative to the classical VRP optimum.

use crate::cost::{Cost, Eta};
use crate::error::{Error, Result};

/// `lower < c(MVRP*) <= upper` for an instance whose VRP optimum is `upper`.
///
/// Costs are in units of `1 / den`; the lower bound carries one extra factor
/// of `den` so it stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundPair {
    /// Exclusive lower bound in units of `1 / den^2`.
    pub lower_fine: i128,
    pub upper: Cost,
    /// Per-vehicle unit cost in a full platoon, in units of `1 / den`.
    pub c_min: i64,
    /// Per-vehicle unit cost alone, in units of `1 / den`.
    pub c_max: i64,
    pub den: u64,
}

impl BoundPair {
    pub fn above_lower(&self, cost: Cost) -> bool {
        cost.0 as i128 * self.den as i128 > self.lower_fine
    }

    pub fn contains(&self, cost: Cost) -> bool {
        self.above_lower(cost) && cost <= self.upper
    }

    /// Lower bound as a decimal string.
    pub fn lower_decimal(&self) -> String {
        let d2 = self.den as i128 * self.den as i128;
        match i64::try_from(self.lower_fine).ok().zip(u64::try_from(d2).ok()) {
            Some((v, d)) => {
                let s = Cost(v).to_decimal(d);
                match s.split_once('.') {
                    Some((i, f)) => {
                        let f = f.trim_end_matches('0');
                        format!("{}.{}", i, if f.is_empty() { "0" } else { f })
                    }
                    None => s,
                }
            }
            None => format!("{}/{}", self.lower_fine, d2),
        }
    }

    /// Largest relative saving the bound allows, `1 - c_min / c_max`.
    pub fn max_reduction(&self) -> f64 {
        1.0 - self.c_min as f64 / self.c_max as f64
    }
}

/// Bounds `(1 - eta (L - 1)) * vrp_cost < c(MVRP*) <= vrp_cost`; `vrp_cost`
/// must be scaled by the denominator of `eta`.
pub fn theorem1_bounds(vrp_cost: Cost, eta: Eta, max_platoon: usize) -> Result<BoundPair> {
    if !eta.admits(max_platoon) {
        return Err(Error::BadEta(format!("eta {} with max platoon {}", eta, max_platoon)));
    }
    let den = eta.den();
    let c_max = den as i64;
    let c_min = c_max - (eta.num() * (max_platoon as u64 - 1)) as i64;
    Ok(BoundPair {
        lower_fine: vrp_cost.0 as i128 * c_min as i128,
        upper: vrp_cost,
        c_min,
        c_max,
        den,
    })
}
