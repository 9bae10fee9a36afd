//! Exact fixed-point platoon costs.
//!
//! A platoon of `l` modular vehicles pays `d * l * (1 - eta * (l - 1))` on an
//! arc of length `d`. With `eta = num / den` every cost is an integer multiple
//! of `1 / den`, so costs are stored as scaled integers and compared exactly.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Cost-saving rate as a reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Eta {
    num: u64,
    den: u64,
}

impl Eta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadEta("zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Parses a non-negative decimal (`0.1`) or a fraction (`1/10`).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = n.trim().parse::<u64>().map_err(|_| Error::BadEta(t.into()))?;
            let d = d.trim().parse::<u64>().map_err(|_| Error::BadEta(t.into()))?;
            return Self::new(n, d);
        }
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 12
        {
            return Err(Error::BadEta(t.into()));
        }
        let den = 10u64.pow(frac.len() as u32);
        let int_val = if int.is_empty() { 0 } else { int.parse::<u64>().map_err(|_| Error::BadEta(t.into()))? };
        let frac_val = if frac.is_empty() { 0 } else { frac.parse::<u64>().unwrap() };
        Self::new(int_val * den + frac_val, den)
    }

    /// True when `eta * (max_platoon - 1) < 1`, i.e. every allowed platoon has
    /// a positive cost factor.
    pub fn admits(&self, max_platoon: usize) -> bool {
        max_platoon >= 1 && self.num * (max_platoon as u64 - 1) < self.den
    }

    /// Scaled factor `l * (den - num * (l - 1))`; `d * factor` is the platoon
    /// cost of an arc of length `d`, in units of `1 / den`.
    pub fn factor(&self, l: usize) -> i64 {
        if l == 0 {
            return 0;
        }
        let l = l as i64;
        l * (self.den as i64 - self.num as i64 * (l - 1))
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match decimal_digits(self.den) {
            Some(digits) => write!(f, "{}", format_scaled(self.num as i128, self.den as i128, digits.max(1))),
            None => write!(f, "{}/{}", self.num, self.den),
        }
    }
}

/// Exact cost in units of `1 / den`, where `den` is the denominator of the
/// instance's eta.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(pub i64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub fn scaled(self) -> i64 {
        self.0
    }

    /// Renders the cost as a decimal string, e.g. `21.0` for `210` with `den = 10`.
    pub fn to_decimal(self, den: u64) -> String {
        match decimal_digits(den) {
            Some(digits) => format_scaled(self.0 as i128, den as i128, digits.max(1)),
            None => format!("{}/{}", self.0, den),
        }
    }

    /// Parses a decimal string produced by [`Cost::to_decimal`]. Returns `None`
    /// when the value is not an exact multiple of `1 / den`.
    pub fn parse_decimal(text: &str, den: u64) -> Option<Cost> {
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        if frac.len() > 18 {
            return None;
        }
        let pow = 10i128.pow(frac.len() as u32);
        let int_val: i128 = int.parse().ok()?;
        let frac_val: i128 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let value = int_val * pow + frac_val;
        let num = value * den as i128;
        if num % pow != 0 {
            return None;
        }
        let scaled = i64::try_from(num / pow).ok()?;
        Some(Cost(if neg { -scaled } else { scaled }))
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        Cost(self.0 - rhs.0)
    }
}

impl SubAssign for Cost {
    fn sub_assign(&mut self, rhs: Cost) {
        self.0 -= rhs.0;
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        Cost(-self.0)
    }
}

impl std::iter::Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        Cost(iter.map(|c| c.0).sum())
    }
}

/// Platoon cost function bound to an instance's eta and maximum platoon size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub eta: Eta,
    pub max_platoon: usize,
}

impl CostModel {
    pub fn new(eta: Eta, max_platoon: usize) -> Result<Self> {
        if !eta.admits(max_platoon) {
            return Err(Error::BadEta(format!(
                "eta {} with max platoon {} gives a non-positive platoon cost",
                eta, max_platoon
            )));
        }
        Ok(Self { eta, max_platoon })
    }

    pub fn den(&self) -> u64 {
        self.eta.den
    }

    fn check(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.max_platoon || self.eta.factor(l) <= 0 {
            return Err(Error::PlatoonTooLarge {
                size: l,
                max: self.max_platoon,
            });
        }
        Ok(())
    }

    /// Cost of a platoon of `l` vehicles over an arc of length `d`.
    pub fn arc_cost(&self, d: i64, l: usize) -> Result<Cost> {
        self.check(l)?;
        Ok(Cost(d * self.eta.factor(l)))
    }

    /// Extra cost of growing a platoon from `l` to `l + 1` vehicles on an arc
    /// of length `d`: `d * (1 - 2 * eta * l)`.
    pub fn marginal_add_cost(&self, d: i64, l: usize) -> Result<Cost> {
        self.check(l)?;
        self.check(l + 1)?;
        Ok(Cost(d * (self.eta.den as i64 - 2 * self.eta.num as i64 * l as i64)))
    }

    /// Unchecked platoon cost; `l` may exceed the limit (used when auditing
    /// solutions that violate it).
    #[inline]
    pub fn raw(&self, d: i64, l: usize) -> Cost {
        Cost(d * self.eta.factor(l))
    }

    /// Unchecked cost of growing a platoon from `l` to `l + g` vehicles.
    #[inline]
    pub fn raw_grow(&self, d: i64, l: usize, g: usize) -> Cost {
        Cost(d * (self.eta.factor(l + g) - self.eta.factor(l)))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Smallest `k` with `den | 10^k`, if any.
fn decimal_digits(den: u64) -> Option<u32> {
    let mut pow: u128 = 1;
    for k in 0..=18 {
        if pow % den as u128 == 0 {
            return Some(k);
        }
        pow *= 10;
    }
    None
}

fn format_scaled(value: i128, den: i128, digits: u32) -> String {
    let pow = 10i128.pow(digits);
    // callers guarantee den | 10^digits
    let scaled = value * (pow / den);
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    format!("{}{}.{:0width$}", sign, abs / pow, abs % pow, width = digits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(l: usize) -> CostModel {
        CostModel::new(Eta::parse("0.1").unwrap(), l).unwrap()
    }

    #[test]
    fn eta_parsing() {
        let eta = Eta::parse("0.1").unwrap();
        assert_eq!((eta.num(), eta.den()), (1, 10));
        assert_eq!(Eta::parse("0.25").unwrap().den(), 4);
        assert_eq!(Eta::parse("1/20").unwrap().den(), 20);
        assert_eq!(Eta::parse("0").unwrap(), Eta::zero());
        assert!(Eta::parse("-0.1").is_err());
        assert!(Eta::parse("abc").is_err());
        assert_eq!(Eta::parse("0.1").unwrap().to_string(), "0.1");
    }

    #[test]
    fn arc_cost_examples() {
        let m = model(3);
        assert_eq!(m.arc_cost(10, 1).unwrap().to_decimal(10), "10.0");
        assert_eq!(m.arc_cost(10, 2).unwrap().to_decimal(10), "18.0");
        assert_eq!(m.arc_cost(10, 3).unwrap().to_decimal(10), "24.0");
        assert!(matches!(m.arc_cost(10, 4), Err(Error::PlatoonTooLarge { .. })));
        assert!(m.arc_cost(10, 0).is_err());
    }

    #[test]
    fn marginal_examples() {
        let m = model(3);
        assert_eq!(m.marginal_add_cost(10, 1).unwrap().to_decimal(10), "8.0");
        assert_eq!(m.marginal_add_cost(10, 2).unwrap().to_decimal(10), "6.0");
        assert!(m.marginal_add_cost(10, 3).is_err());
        let flat = CostModel::new(Eta::zero(), 4).unwrap();
        for d in [0, 3, 17] {
            for l in 1..4 {
                assert_eq!(flat.marginal_add_cost(d, l).unwrap(), Cost(d));
            }
        }
    }

    #[test]
    fn bad_eta_rejected() {
        assert!(CostModel::new(Eta::parse("0.5").unwrap(), 3).is_err());
        assert!(CostModel::new(Eta::parse("0.5").unwrap(), 2).is_ok());
        assert!(CostModel::new(Eta::parse("0.1").unwrap(), 0).is_err());
    }

    #[test]
    fn decimal_round_trip() {
        assert_eq!(Cost(210).to_decimal(10), "21.0");
        assert_eq!(Cost(-5).to_decimal(10), "-0.5");
        assert_eq!(Cost(7).to_decimal(1), "7.0");
        assert_eq!(Cost(5).to_decimal(4), "1.25");
        assert_eq!(Cost::parse_decimal("21.0", 10), Some(Cost(210)));
        assert_eq!(Cost::parse_decimal("21", 10), Some(Cost(210)));
        assert_eq!(Cost::parse_decimal("21.05", 10), None);
        assert_eq!(Cost::parse_decimal("-0.5", 10), Some(Cost(-5)));
        assert_eq!(Cost::parse_decimal("x", 10), None);
    }
}
