//! LP-format export of the three-index arc-flow model.
//!
//! Nodes: depot `0`, customers `1..=N`, end depot `N+1`. Arcs: `0->j`,
//! `i->j` between distinct customers, `i->N+1`, and `0->N+1` (an idle
//! vehicle). Variables: `x_k_i_j` (vehicle on arc), `y_l_i_j` (platoon of
//! size l on arc), `u_i` (visit order), `w_k_i` (k serves customer i),
//! `d_k_i` (load of k after i). The idle arc is exempt from the platoon rows.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::instance::Instance;

/// Column and row counts of an exported model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MilpCounts {
    pub x: usize,
    pub y: usize,
    pub u: usize,
    pub w: usize,
    pub d: usize,
    pub constraints: usize,
}

impl MilpCounts {
    pub fn variables(&self) -> usize {
        self.x + self.y + self.u + self.w + self.d
    }

    /// Closed-form counts for `n` customers, `k` vehicles, platoons up to `l`.
    pub fn expected(n: usize, k: usize, l: usize) -> Self {
        let arcs = n * n + n + 1;
        let rows = n // visit
            + k * n // flow
            + 2 * k // leave / return
            + k * arcs // order
            + k * n * n // load growth
            + k * arcs // load carry
            + n // one server
            + k * n // server arrives
            + 3 * (arcs - 1) // platoon limit, size lower bound, size upper bound
            + (l - 1) * (arcs - 1);
        Self {
            x: k * arcs,
            y: l * arcs,
            u: n + 2,
            w: k * n,
            d: k * (n + 2),
            constraints: rows,
        }
    }
}

impl std::fmt::Display for MilpCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "variables {} (x:{} y:{} u:{} w:{} d:{}) constraints {}",
            self.variables(),
            self.x,
            self.y,
            self.u,
            self.w,
            self.d,
            self.constraints
        )
    }
}

/// Linear expression builder that prints `+ 3 x - y` style terms.
#[derive(Default)]
struct Expr(String, usize);

impl Expr {
    fn term(&mut self, coef: i64, var: &str) -> &mut Self {
        self.term_str(coef < 0, &coef.unsigned_abs().to_string(), var)
    }

    fn term_str(&mut self, negative: bool, magnitude: &str, var: &str) -> &mut Self {
        if self.1 > 0 && self.1 % 8 == 0 {
            self.0.push_str("\n  ");
        }
        let sign = if negative { "-" } else if self.1 == 0 { "" } else { "+" };
        let sep = if self.1 == 0 { "" } else { " " };
        if magnitude == "1" {
            let _ = write!(self.0, "{}{}{}{}", sep, sign, if sign.is_empty() { "" } else { " " }, var);
        } else {
            let _ = write!(self.0, "{}{}{}{} {}", sep, sign, if sign.is_empty() { "" } else { " " }, magnitude, var);
        }
        self.1 += 1;
        self
    }
}

struct Model {
    n: usize,
    k: usize,
    l: usize,
    arcs: Vec<(usize, usize)>,
    rows: String,
}

impl Model {
    fn end(&self) -> usize {
        self.n + 1
    }

    fn idle(&self) -> (usize, usize) {
        (0, self.end())
    }

    fn row(&mut self, name: String, e: &Expr, rel: &str, rhs: i64) {
        let _ = writeln!(self.rows, " {}: {} {} {}", name, e.0, rel, rhs);
    }
}

fn x(k: usize, (i, j): (usize, usize)) -> String {
    format!("x_{}_{}_{}", k, i, j)
}

/// Writes the model as LP text with deterministic row and column order.
pub fn export_milp(inst: &Instance) -> String {
    let n = inst.customers();
    let (kk, ll) = (inst.fleet_size(), inst.max_platoon());
    let cap = inst.capacity() as i64;
    let end = n + 1;
    let mut arcs = Vec::new();
    for j in 1..=n {
        arcs.push((0, j));
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                arcs.push((i, j));
            }
        }
    }
    for i in 1..=n {
        arcs.push((i, end));
    }
    arcs.push((0, end));
    let mut m = Model {
        n,
        k: kk,
        l: ll,
        arcs,
        rows: String::new(),
    };
    let node = |v: usize| if v == end { 0 } else { v };
    let q = |v: usize| if v == 0 || v == end { 0 } else { inst.demand(v) as i64 };
    let ks = 1..=m.k;
    let arcs = m.arcs.clone();
    let customer_arcs_into = |j: usize| arcs.iter().copied().filter(move |a| a.1 == j);

    let mut out = String::new();
    let _ = writeln!(out, "\\ modular vehicle routing model for {}", inst.name());
    let _ = writeln!(out, "\\ {}", MilpCounts::expected(n, kk, ll));
    out.push_str("Minimize\n obj: ");
    let mut obj = Expr::default();
    for l in 1..=m.l {
        for &a in &arcs {
            let c = inst.costs().raw(inst.dist(node(a.0), node(a.1)), l);
            obj.term_str(c.0 < 0, &crate::cost::Cost(c.0.abs()).to_decimal(inst.eta().den()), &format!("y_{}_{}_{}", l, a.0, a.1));
        }
    }
    out.push_str(&obj.0);
    out.push_str("\nSubject To\n");

    for j in 1..=n {
        let mut e = Expr::default();
        for k in ks.clone() {
            for a in customer_arcs_into(j) {
                e.term(1, &x(k, a));
            }
        }
        m.row(format!("visit_{}", j), &e, ">=", 1);
    }
    for k in ks.clone() {
        for j in 1..=n {
            let mut e = Expr::default();
            for a in customer_arcs_into(j) {
                e.term(1, &x(k, a));
            }
            for a in arcs.iter().copied().filter(|a| a.0 == j) {
                e.term(-1, &x(k, a));
            }
            m.row(format!("flow_{}_{}", k, j), &e, "=", 0);
        }
    }
    for k in ks.clone() {
        let mut e = Expr::default();
        for a in arcs.iter().copied().filter(|a| a.0 == 0) {
            e.term(1, &x(k, a));
        }
        m.row(format!("leave_{}", k), &e, "=", 1);
        let mut e = Expr::default();
        for a in arcs.iter().copied().filter(|a| a.1 == end) {
            e.term(1, &x(k, a));
        }
        m.row(format!("return_{}", k), &e, "=", 1);
    }
    let big_u = n as i64;
    for k in ks.clone() {
        for &a in &arcs {
            let mut e = Expr::default();
            e.term(1, &format!("u_{}", a.0)).term(-1, &format!("u_{}", a.1)).term(big_u, &x(k, a));
            m.row(format!("order_{}_{}_{}", k, a.0, a.1), &e, "<=", big_u - 1);
        }
    }
    for k in ks.clone() {
        for &a in arcs.iter().filter(|a| a.1 != end) {
            let big = cap + q(a.0);
            let mut e = Expr::default();
            e.term(1, &format!("d_{}_{}", k, a.0))
                .term(-1, &format!("d_{}_{}", k, a.1))
                .term(big, &x(k, a))
                .term(big, &format!("w_{}_{}", k, a.1));
            m.row(format!("grow_{}_{}_{}", k, a.0, a.1), &e, "<=", 2 * big - q(a.1));
        }
    }
    for k in ks.clone() {
        for &a in &arcs {
            let mut e = Expr::default();
            e.term(1, &format!("d_{}_{}", k, a.0)).term(-1, &format!("d_{}_{}", k, a.1)).term(cap, &x(k, a));
            m.row(format!("carry_{}_{}_{}", k, a.0, a.1), &e, "<=", cap);
        }
    }
    for i in 1..=n {
        let mut e = Expr::default();
        for k in ks.clone() {
            e.term(1, &format!("w_{}_{}", k, i));
        }
        m.row(format!("server_{}", i), &e, "=", 1);
    }
    for k in ks.clone() {
        for j in 1..=n {
            let mut e = Expr::default();
            for a in customer_arcs_into(j) {
                e.term(1, &x(k, a));
            }
            e.term(-1, &format!("w_{}_{}", k, j));
            m.row(format!("arrive_{}_{}", k, j), &e, ">=", 0);
        }
    }
    let platoon_arcs: Vec<_> = arcs.iter().copied().filter(|&a| a != m.idle()).collect();
    let big_l = m.l as i64;
    for &a in &platoon_arcs {
        let mut e = Expr::default();
        for k in ks.clone() {
            e.term(1, &x(k, a));
        }
        m.row(format!("limit_{}_{}", a.0, a.1), &e, "<=", big_l);
    }
    for &a in &platoon_arcs {
        let mut e = Expr::default();
        for l in 1..=m.l {
            e.term(big_l, &format!("y_{}_{}_{}", l, a.0, a.1));
        }
        for k in ks.clone() {
            e.term(-1, &x(k, a));
        }
        m.row(format!("size_lo_{}_{}", a.0, a.1), &e, ">=", 0);
    }
    for l in 1..=m.l {
        for &a in &platoon_arcs {
            let mut e = Expr::default();
            e.term(big_l, &format!("y_{}_{}_{}", l, a.0, a.1));
            for k in ks.clone() {
                e.term(1, &x(k, a));
            }
            m.row(format!("size_hi_{}_{}_{}", l, a.0, a.1), &e, "<=", big_l + l as i64);
        }
    }
    out.push_str(&m.rows);

    out.push_str("Bounds\n");
    for i in 0..=end {
        let _ = writeln!(out, " 0 <= u_{} <= {}", i, end);
    }
    for k in ks.clone() {
        for i in 0..=end {
            let _ = writeln!(out, " 0 <= d_{}_{} <= {}", k, i, cap);
        }
    }
    out.push_str("Binaries\n");
    for k in ks.clone() {
        for &a in &arcs {
            let _ = writeln!(out, " {}", x(k, a));
        }
    }
    for l in 1..=m.l {
        for &a in &arcs {
            let _ = writeln!(out, " y_{}_{}_{}", l, a.0, a.1);
        }
    }
    for k in ks {
        for i in 1..=n {
            let _ = writeln!(out, " w_{}_{}", k, i);
        }
    }
    out.push_str("End\n");
    out
}

/// Counts the columns (declared in the bounds and binaries sections) and
/// rows of LP text produced by [`export_milp`].
pub fn parse_lp_counts(text: &str) -> MilpCounts {
    #[derive(PartialEq)]
    enum Sec {
        Head,
        Rows,
        Cols,
    }
    let mut sec = Sec::Head;
    let mut counts = MilpCounts::default();
    let mut cols = BTreeSet::new();
    for line in text.lines() {
        let t = line.trim();
        match t.to_ascii_lowercase().as_str() {
            "subject to" | "st" | "s.t." => {
                sec = Sec::Rows;
                continue;
            }
            "bounds" | "binaries" | "binary" | "generals" => {
                sec = Sec::Cols;
                continue;
            }
            "end" => break,
            _ => {}
        }
        match sec {
            Sec::Head => {}
            Sec::Rows => {
                if t.split_once(':').is_some_and(|(name, _)| !name.is_empty() && !name.contains(' ')) {
                    counts.constraints += 1;
                }
            }
            Sec::Cols => {
                for tok in t.split_whitespace().filter(|w| w.starts_with(|c: char| c.is_ascii_alphabetic())) {
                    cols.insert(tok.to_string());
                }
            }
        }
    }
    for c in cols {
        match c.split('_').next() {
            Some("x") => counts.x += 1,
            Some("y") => counts.y += 1,
            Some("u") => counts.u += 1,
            Some("w") => counts.w += 1,
            Some("d") => counts.d += 1,
            _ => {}
        }
    }
    counts
}
