//! Exact translations between Max2XOR, QUBO and Ising models, plus energy
//! gaps, range normalization, Landau–Zener reporting and chain embedding.
//!
//! Spin convention: boolean `true` is spin `+1`, `false` is spin `−1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::max2xor::{parse_rational_value, Max2XorProblem, Scope, XorConstraint};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum ConvertError {
    #[error("model has no non-zero coefficient")]
    ZeroModel,
    #[error("invalid range [{lo}, {hi}]: it must contain 0")]
    BadRange { lo: Rational, hi: Rational },
    #[error("a {sign} coefficient cannot be scaled into [{lo}, {hi}]")]
    RangeExcludesSign {
        sign: &'static str,
        lo: Rational,
        hi: Rational,
    },
    #[error("Landau–Zener requires c > 0 and delta ≥ 0 (got delta={delta}, c={c})")]
    LandauZenerDomain { delta: f64, c: f64 },
    #[error("QUBO text line {line}: {msg}")]
    QuboSyntax { line: usize, msg: String },
    #[error("Ising JSON: {0}")]
    IsingJson(String),
    #[error("coupling graph line {line}: {msg}")]
    GraphSyntax { line: usize, msg: String },
    #[error("placement: {0}")]
    Placement(String),
    #[error("{} constraint(s) could not be embedded: {}", .0.len(), .0.join("; "))]
    Unembeddable(Vec<String>),
}

type Pair = (u32, u32);

fn ordered(u: u32, v: u32) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, delta: &Rational) {
    let e = map.entry(key).or_default();
    *e += delta;
}

fn drop_zeros<K: Ord>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, v| !v.is_zero());
}

/// `Σ a_i x_i + Σ_{i<j} b_ij x_i x_j + offset` over `x ∈ {0,1}`, minimized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuboModel {
    pub num_vars: u32,
    pub linear: BTreeMap<u32, Rational>,
    pub quadratic: BTreeMap<Pair, Rational>,
    pub offset: Rational,
}

/// `Σ h_i z_i + Σ_{i<j} J_ij z_i z_j + offset` over `z ∈ {−1,+1}`, minimized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsingModel {
    pub num_vars: u32,
    pub h: BTreeMap<u32, Rational>,
    pub j: BTreeMap<Pair, Rational>,
    pub offset: Rational,
}

impl QuboModel {
    pub fn new(num_vars: u32) -> Self {
        QuboModel {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add_linear(&mut self, i: u32, a: &Rational) {
        self.num_vars = self.num_vars.max(i);
        add_to(&mut self.linear, i, a);
    }

    pub fn add_quadratic(&mut self, i: u32, j: u32, b: &Rational) {
        assert!(i != j, "quadratic term needs distinct variables");
        self.num_vars = self.num_vars.max(i).max(j);
        add_to(&mut self.quadratic, ordered(i, j), b);
    }

    fn cleaned(mut self) -> Self {
        drop_zeros(&mut self.linear);
        drop_zeros(&mut self.quadratic);
        self
    }

    pub fn value_bits(&self, bits: u64) -> Rational {
        let on = |i: u32| bits >> (i - 1) & 1 == 1;
        let mut v = self.offset.clone();
        for (&i, a) in &self.linear {
            if on(i) {
                v += a;
            }
        }
        for (&(i, j), b) in &self.quadratic {
            if on(i) && on(j) {
                v += b;
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.linear.is_empty() && self.quadratic.is_empty()
    }
}

/// Objective value including the offset; `x[i]` is variable `i + 1`.
pub fn qubo_value(q: &QuboModel, x: &[bool]) -> Rational {
    let bits = x
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
    q.value_bits(bits)
}

impl IsingModel {
    pub fn new(num_vars: u32) -> Self {
        IsingModel {
            num_vars,
            ..Default::default()
        }
    }

    fn cleaned(mut self) -> Self {
        drop_zeros(&mut self.h);
        drop_zeros(&mut self.j);
        self
    }

    /// Energy of the spin state encoding `bits` (bit set means spin `+1`).
    pub fn energy_bits(&self, bits: u64) -> Rational {
        let s = |i: u32| bits >> (i - 1) & 1 == 1;
        let mut e = self.offset.clone();
        for (&i, h) in &self.h {
            if s(i) {
                e += h;
            } else {
                e -= h;
            }
        }
        for (&(i, j), c) in &self.j {
            if s(i) == s(j) {
                e += c;
            } else {
                e -= c;
            }
        }
        e
    }

    /// Energy without the offset.
    pub fn coupling_energy_bits(&self, bits: u64) -> Rational {
        self.energy_bits(bits) - &self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_empty() && self.j.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.h.values().chain(self.j.values())
    }

    pub fn scaled(&self, s: &Rational) -> IsingModel {
        IsingModel {
            num_vars: self.num_vars,
            h: self.h.iter().map(|(k, v)| (*k, v * s)).collect(),
            j: self.j.iter().map(|(k, v)| (*k, v * s)).collect(),
            offset: &self.offset * s,
        }
        .cleaned()
    }

    pub fn to_json(&self) -> Value {
        let h: Vec<Value> = self
            .h
            .iter()
            .map(|(i, v)| json!([i, v.to_string()]))
            .collect();
        let j: Vec<Value> = self
            .j
            .iter()
            .map(|((a, b), v)| json!([a, b, v.to_string()]))
            .collect();
        json!({
            "num_vars": self.num_vars,
            "offset": self.offset.to_string(),
            "h": h,
            "J": j,
            "spin_convention": "true=+1",
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConvertError> {
        let err = |m: &str| ConvertError::IsingJson(m.to_string());
        let v: Value =
            serde_json::from_str(s).map_err(|e| ConvertError::IsingJson(e.to_string()))?;
        if let Some(conv) = v.get("spin_convention") {
            if conv != "true=+1" {
                return Err(err("unsupported spin convention"));
            }
        }
        let num_vars = v["num_vars"].as_u64().ok_or_else(|| err("num_vars"))? as u32;
        let mut m = IsingModel::new(num_vars);
        m.offset = match &v["offset"] {
            Value::Null => Rational::zero(),
            o => parse_rational_value(o).ok_or_else(|| err("offset"))?,
        };
        let var = |x: &Value| {
            x.as_u64()
                .filter(|&i| i >= 1 && i <= num_vars as u64)
                .map(|i| i as u32)
                .ok_or_else(|| err("variable index"))
        };
        for row in v["h"].as_array().ok_or_else(|| err("h"))? {
            let row = row
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| err("h entry"))?;
            let c = parse_rational_value(&row[1]).ok_or_else(|| err("h value"))?;
            add_to(&mut m.h, var(&row[0])?, &c);
        }
        for row in v["J"].as_array().ok_or_else(|| err("J"))? {
            let row = row
                .as_array()
                .filter(|r| r.len() == 3)
                .ok_or_else(|| err("J entry"))?;
            let (a, b) = (var(&row[0])?, var(&row[1])?);
            if a == b {
                return Err(err("self coupling"));
            }
            let c = parse_rational_value(&row[2]).ok_or_else(|| err("J value"))?;
            add_to(&mut m.j, ordered(a, b), &c);
        }
        Ok(m.cleaned())
    }
}

/// Energy including the offset; `z[i] ∈ {−1, +1}` is the spin of variable `i + 1`.
pub fn ising_energy(m: &IsingModel, z: &[i8]) -> Rational {
    let bits = z.iter().enumerate().fold(0u64, |acc, (i, &s)| {
        assert!(s == 1 || s == -1, "spins are ±1");
        acc | ((s == 1) as u64) << i
    });
    m.energy_bits(bits)
}

/// QUBO whose value is the falsified weight `Ī(P)` of every assignment.
pub fn max2xor_to_qubo(p: &Max2XorProblem) -> QuboModel {
    let mut q = QuboModel::new(p.num_vars);
    for c in &p.constraints {
        let w = &c.weight;
        let two_w = w + w;
        match (c.scope, c.rhs) {
            (Scope::Unary(i), false) => q.add_linear(i, w),
            (Scope::Unary(i), true) => {
                q.offset += w;
                q.add_linear(i, &-w);
            }
            (Scope::Pair(i, j), false) => {
                q.add_linear(i, w);
                q.add_linear(j, w);
                q.add_quadratic(i, j, &-&two_w);
            }
            (Scope::Pair(i, j), true) => {
                q.offset += w;
                q.add_linear(i, &-w);
                q.add_linear(j, &-w);
                q.add_quadratic(i, j, &two_w);
            }
        }
    }
    q.cleaned()
}

/// Max2XOR problem whose falsified weight differs from the QUBO value by a
/// constant. Linear terms absorb half of each incident quadratic term.
pub fn qubo_to_max2xor(q: &QuboModel) -> Max2XorProblem {
    ising_to_max2xor(&qubo_to_ising(q))
}

/// `h > 0 ↦ {2h: x=0}`, `h < 0 ↦ {−2h: x=1}`, `J > 0 ↦ {2J: x⊕y=1}`,
/// `J < 0 ↦ {−2J: x⊕y=0}`.
pub fn ising_to_max2xor(m: &IsingModel) -> Max2XorProblem {
    let two = Rational::from_integer(2);
    let mut p = Max2XorProblem::new(m.num_vars);
    for (&i, h) in &m.h {
        p.constraints
            .push(XorConstraint::unary(i, h.is_negative(), h.abs() * &two));
    }
    for (&(i, j), c) in &m.j {
        p.constraints
            .push(XorConstraint::pair(i, j, c.is_positive(), c.abs() * &two));
    }
    p.canonicalize();
    p
}

pub fn qubo_to_ising(q: &QuboModel) -> IsingModel {
    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);
    let mut m = IsingModel::new(q.num_vars);
    m.offset = q.offset.clone();
    for (&i, a) in &q.linear {
        add_to(&mut m.h, i, &(a * &half));
        m.offset += a * &half;
    }
    for (&(i, j), b) in &q.quadratic {
        let b4 = b * &quarter;
        add_to(&mut m.h, i, &b4);
        add_to(&mut m.h, j, &b4);
        add_to(&mut m.j, (i, j), &b4);
        m.offset += &b4;
    }
    m.cleaned()
}

pub fn ising_to_qubo(m: &IsingModel) -> QuboModel {
    let two = Rational::from_integer(2);
    let four = Rational::from_integer(4);
    let mut q = QuboModel::new(m.num_vars);
    q.offset = m.offset.clone();
    for (&i, h) in &m.h {
        q.add_linear(i, &(h * &two));
        q.offset -= h;
    }
    for (&(i, j), c) in &m.j {
        let m2 = -(c * &two);
        q.add_linear(i, &m2);
        q.add_linear(j, &m2);
        q.add_quadratic(i, j, &(c * &four));
        q.offset += c;
    }
    q.num_vars = m.num_vars;
    q.cleaned()
}

/// Direct Max2XOR to Ising translation. The coupling energy of every state is
/// `Weight(P)/2 − I(P)`; the offset `Weight(P)/2` makes the total `Ī(P)`.
pub fn max2xor_to_ising(p: &Max2XorProblem) -> IsingModel {
    let half = Rational::new(1, 2);
    let mut m = IsingModel::new(p.num_vars);
    for c in &p.constraints {
        let hw = &c.weight * &half;
        match (c.scope, c.rhs) {
            (Scope::Unary(i), false) => add_to(&mut m.h, i, &hw),
            (Scope::Unary(i), true) => add_to(&mut m.h, i, &-&hw),
            (Scope::Pair(i, j), true) => add_to(&mut m.j, (i, j), &hw),
            (Scope::Pair(i, j), false) => add_to(&mut m.j, (i, j), &-&hw),
        }
    }
    m.offset = p.weight() * &half;
    m.cleaned()
}

/// `min 1/|c|` over the non-zero biases and couplings.
pub fn energy_gap_ising(m: &IsingModel) -> Result<Rational, ConvertError> {
    m.coefficients()
        .map(|c| c.abs())
        .max()
        .map(|c| c.recip())
        .ok_or(ConvertError::ZeroModel)
}

/// `min 2/w` over the constraints of the simplified problem.
pub fn energy_gap_max2xor(p: &Max2XorProblem) -> Result<Rational, ConvertError> {
    let s = if p.is_simplified() {
        p.clone()
    } else {
        p.simplify()
    };
    s.constraints
        .iter()
        .map(|c| c.weight.clone())
        .max()
        .map(|w| Rational::from_integer(2) / w)
        .ok_or(ConvertError::ZeroModel)
}

/// Largest `s` with every `s·h_i` in `h_range` and every `s·J_ij` in
/// `j_range`, and the model scaled by it (offset included).
pub fn normalize_to_ranges(
    m: &IsingModel,
    h_range: (Rational, Rational),
    j_range: (Rational, Rational),
) -> Result<(IsingModel, Rational), ConvertError> {
    for (lo, hi) in [&h_range, &j_range] {
        if lo.is_positive() || hi.is_negative() {
            return Err(ConvertError::BadRange {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
    }
    if m.is_zero() {
        return Err(ConvertError::ZeroModel);
    }
    let headroom =
        |c: &Rational, (lo, hi): &(Rational, Rational)| -> Result<Rational, ConvertError> {
            let (bound, sign) = if c.is_positive() {
                (hi, "positive")
            } else {
                (lo, "negative")
            };
            if bound.is_zero() {
                return Err(ConvertError::RangeExcludesSign {
                    sign,
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
            Ok(bound / c)
        };
    let mut scale: Option<Rational> = None;
    for c in m.h.values() {
        let s = headroom(c, &h_range)?;
        scale = Some(scale.map_or(s.clone(), |x| x.min(s)));
    }
    for c in m.j.values() {
        let s = headroom(c, &j_range)?;
        scale = Some(scale.map_or(s.clone(), |x| x.min(s)));
    }
    let scale = scale.expect("non-zero model");
    Ok((m.scaled(&scale), scale))
}

/// The symmetric default ranges `[−1, 1]` for both biases and couplings.
pub fn unit_ranges() -> ((Rational, Rational), (Rational, Rational)) {
    let r = (Rational::from_integer(-1), Rational::one());
    (r.clone(), r)
}

/// `1 − exp(−π δ² / (4c))`, the single-avoided-crossing success probability.
pub fn landau_zener_success(delta: f64, c: f64) -> Result<f64, ConvertError> {
    if !(c.is_finite() && c > 0.0 && delta.is_finite() && delta >= 0.0) {
        return Err(ConvertError::LandauZenerDomain { delta, c });
    }
    Ok(-(-std::f64::consts::PI * delta * delta / (4.0 * c)).exp_m1())
}

/// Writes the QUBO text format. Node `i` in the file is variable `i + 1`.
pub fn write_qubo(q: &QuboModel, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    if !q.offset.is_zero() {
        let _ = writeln!(out, "c offset {}", q.offset);
    }
    let _ = writeln!(
        out,
        "p qubo 0 {} {} {}",
        q.num_vars,
        q.linear.len(),
        q.quadratic.len()
    );
    for (i, a) in &q.linear {
        let _ = writeln!(out, "{} {} {}", i - 1, i - 1, a);
    }
    for ((i, j), b) in &q.quadratic {
        let _ = writeln!(out, "{} {} {}", i - 1, j - 1, b);
    }
    out
}

/// Reads the QUBO text format, honouring an optional `c offset` line.
pub fn read_qubo(text: &str) -> Result<QuboModel, ConvertError> {
    let mut q: Option<QuboModel> = None;
    let mut offset = Rational::zero();
    let mut counts = (0usize, 0usize);
    let mut seen = (0usize, 0usize);
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: &str| ConvertError::QuboSyntax {
            line: line_no,
            msg: msg.to_string(),
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("offset") {
                offset = v.trim().parse().map_err(|_| err("bad offset"))?;
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts[0] == "p" {
            if parts.len() != 6 || parts[1] != "qubo" || q.is_some() {
                return Err(err("bad header"));
            }
            let n: u32 = parts[3].parse().map_err(|_| err("bad max_node"))?;
            counts = (
                parts[4].parse().map_err(|_| err("bad linear count"))?,
                parts[5].parse().map_err(|_| err("bad quadratic count"))?,
            );
            q = Some(QuboModel::new(n));
            continue;
        }
        let model = q.as_mut().ok_or_else(|| err("entry before header"))?;
        if parts.len() != 3 {
            return Err(err("expected `i j value`"));
        }
        let i: u32 = parts[0].parse().map_err(|_| err("bad node"))?;
        let j: u32 = parts[1].parse().map_err(|_| err("bad node"))?;
        let v: Rational = parts[2].parse().map_err(|_| err("bad coefficient"))?;
        if i.max(j) >= model.num_vars {
            return Err(err("node exceeds max_node"));
        }
        if i == j {
            model.add_linear(i + 1, &v);
            seen.0 += 1;
        } else {
            model.add_quadratic(i + 1, j + 1, &v);
            seen.1 += 1;
        }
    }
    let mut q = q.ok_or(ConvertError::QuboSyntax {
        line: 0,
        msg: "missing header".into(),
    })?;
    if seen != counts {
        return Err(ConvertError::QuboSyntax {
            line: 0,
            msg: "entry counts disagree with header".into(),
        });
    }
    q.offset = offset;
    Ok(q.cleaned())
}

/// Undirected simple graph over qubit ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CouplingGraph {
    adj: BTreeMap<u32, BTreeSet<u32>>,
}

impl CouplingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: u32) {
        self.adj.entry(v).or_default();
    }

    /// Panics on a self-loop.
    pub fn add_edge(&mut self, u: u32, v: u32) {
        assert!(u != v, "self-loops are not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn from_edges(edges: &[(u32, u32)]) -> Self {
        let mut g = Self::new();
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// `w × h` grid, qubit `r·w + c`.
    pub fn grid(w: u32, h: u32) -> Self {
        let mut g = Self::new();
        for r in 0..h {
            for c in 0..w {
                let q = r * w + c;
                g.add_vertex(q);
                if c + 1 < w {
                    g.add_edge(q, q + 1);
                }
                if r + 1 < h {
                    g.add_edge(q, q + w);
                }
            }
        }
        g
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.adj.keys().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// One `u v` edge per line; `#` and `c` lines are comments.
    pub fn parse(text: &str) -> Result<Self, ConvertError> {
        let mut g = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let err = |msg: &str| ConvertError::GraphSyntax {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err("expected `u v`"));
            }
            let u: u32 = parts[0].parse().map_err(|_| err("bad vertex"))?;
            let v: u32 = parts[1].parse().map_err(|_| err("bad vertex"))?;
            if u == v {
                return Err(err("self-loop"));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&u, ns) in &self.adj {
            for &v in ns.range(u + 1..) {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        out
    }

    /// Shortest path from `s` to `t` whose interior avoids `blocked`. BFS
    /// visits neighbours in increasing id order, so ties go to smaller ids.
    fn shortest_free_path(&self, s: u32, t: u32, blocked: &BTreeSet<u32>) -> Option<Vec<u32>> {
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        parent.insert(s, s);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[&u] {
                if parent.contains_key(&v) {
                    continue;
                }
                if v == t {
                    let mut path = vec![t, u];
                    let mut x = u;
                    while x != s {
                        x = parent[&x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(path);
                }
                if blocked.contains(&v) {
                    continue;
                }
                parent.insert(v, u);
                queue.push_back(v);
            }
        }
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    /// Qubits used as chain copies.
    pub extra_qubits: Vec<u32>,
    /// Equality constraints inserted.
    pub added_constraints: usize,
    /// One entry per rerouted constraint: original text and qubit path.
    pub chains: Vec<(String, Vec<u32>)>,
    /// Rerouted constraints whose weight exceeds the chain weight.
    pub weak_chains: Vec<String>,
}

/// Places `p` on qubits and routes non-adjacent pairs through chains of
/// equality constraints over free qubits. In the output, qubit `q` is
/// variable `q + 1`.
pub fn chain_rewrite(
    p: &Max2XorProblem,
    placement: &BTreeMap<u32, u32>,
    g: &CouplingGraph,
    chain_weight: &Rational,
) -> Result<(Max2XorProblem, ChainReport), ConvertError> {
    if !chain_weight.is_positive() {
        return Err(ConvertError::Placement(
            "chain weight must be positive".into(),
        ));
    }
    let mut used = BTreeSet::new();
    for c in &p.constraints {
        for v in c.scope.vars() {
            let q = placement
                .get(&v)
                .ok_or_else(|| ConvertError::Placement(format!("variable {v} is not placed")))?;
            if !g.has_vertex(*q) {
                return Err(ConvertError::Placement(format!(
                    "qubit {q} is not in the graph"
                )));
            }
        }
    }
    for (v, q) in placement {
        if !used.insert(*q) {
            return Err(ConvertError::Placement(format!(
                "qubit {q} is assigned twice (variable {v})"
            )));
        }
    }
    let max_q = g.vertices().max().unwrap_or(0);
    let mut out = Max2XorProblem::new(max_q + 1);
    out.offset = p.offset.clone();
    let mut report = ChainReport::default();
    let mut failures = Vec::new();
    let var = |q: u32| q + 1;
    for c in &p.constraints {
        match c.scope {
            Scope::Unary(v) => out.push(XorConstraint::unary(
                var(placement[&v]),
                c.rhs,
                c.weight.clone(),
            )),
            Scope::Pair(u, v) => {
                let (qu, qv) = (placement[&u], placement[&v]);
                if g.adjacent(qu, qv) {
                    out.push(XorConstraint::pair(
                        var(qu),
                        var(qv),
                        c.rhs,
                        c.weight.clone(),
                    ));
                    continue;
                }
                let Some(path) = g.shortest_free_path(qu, qv, &used) else {
                    failures.push(c.to_string());
                    continue;
                };
                let last = path[path.len() - 2];
                for w in path[..path.len() - 1].windows(2) {
                    out.push(XorConstraint::pair(
                        var(w[0]),
                        var(w[1]),
                        false,
                        chain_weight.clone(),
                    ));
                    report.added_constraints += 1;
                }
                out.push(XorConstraint::pair(
                    var(last),
                    var(qv),
                    c.rhs,
                    c.weight.clone(),
                ));
                for &q in &path[1..path.len() - 1] {
                    used.insert(q);
                    report.extra_qubits.push(q);
                }
                if chain_weight < &c.weight {
                    report.weak_chains.push(c.to_string());
                }
                report.chains.push((c.to_string(), path));
            }
        }
    }
    if !failures.is_empty() {
        return Err(ConvertError::Unembeddable(failures));
    }
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::max2xor::tests::arb_problem;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn worked_example() -> Max2XorProblem {
        Max2XorProblem::from_constraints(
            2,
            vec![
                XorConstraint::unary(1, false, r(1, 1)),
                XorConstraint::pair(1, 2, false, r(1, 1)),
            ],
        )
    }

    fn direct_gadget() -> Max2XorProblem {
        Max2XorProblem::from_constraints(
            2,
            vec![
                XorConstraint::unary(1, true, r(1, 2)),
                XorConstraint::unary(2, true, r(1, 2)),
                XorConstraint::pair(1, 2, true, r(1, 2)),
            ],
        )
    }

    #[test]
    fn worked_example_through_all_forms() {
        let q = max2xor_to_qubo(&worked_example());
        assert_eq!(q.linear, BTreeMap::from([(1, r(2, 1)), (2, r(1, 1))]));
        assert_eq!(q.quadratic, BTreeMap::from([((1, 2), r(-2, 1))]));
        assert!(q.offset.is_zero());
        let m = qubo_to_ising(&q);
        assert_eq!(m.h, BTreeMap::from([(1, r(1, 2))]));
        assert_eq!(m.j, BTreeMap::from([((1, 2), r(-1, 2))]));
        assert_eq!(max2xor_to_ising(&worked_example()), m);
        assert_eq!(qubo_to_max2xor(&q), worked_example());
        let energies: Vec<Rational> = (0..4).map(|b| m.coupling_energy_bits(b)).collect();
        assert_eq!(energies, vec![r(-1, 1), r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(ising_energy(&m, &[-1, -1]) - &m.offset, r(-1, 1));
    }

    #[test]
    fn single_term_formulas() {
        let p = Max2XorProblem::from_constraints(1, vec![XorConstraint::unary(1, true, r(3, 1))]);
        assert_eq!(max2xor_to_qubo(&p).linear[&1], r(-3, 1));
        assert_eq!(max2xor_to_ising(&p).h[&1], r(-3, 2));
        let p = Max2XorProblem::from_constraints(2, vec![XorConstraint::pair(1, 2, true, r(1, 2))]);
        let q = max2xor_to_qubo(&p);
        assert_eq!(
            (q.linear[&1].clone(), q.linear[&2].clone()),
            (r(-1, 2), r(-1, 2))
        );
        assert_eq!(q.quadratic[&(1, 2)], r(1, 1));
    }

    #[test]
    fn zero_models() {
        let q = QuboModel::new(3);
        assert!(qubo_to_ising(&q).is_zero());
        assert!(qubo_to_max2xor(&q).is_empty());
        assert_eq!(
            energy_gap_ising(&IsingModel::new(2)),
            Err(ConvertError::ZeroModel)
        );
        let mut m = IsingModel::new(1);
        m.offset = r(5, 2);
        assert_eq!(ising_energy(&m, &[1]), r(5, 2));
    }

    #[test]
    fn gaps() {
        assert_eq!(energy_gap_max2xor(&worked_example()).unwrap(), r(2, 1));
        assert_eq!(
            energy_gap_ising(&max2xor_to_ising(&worked_example())).unwrap(),
            r(2, 1)
        );
        assert_eq!(energy_gap_max2xor(&direct_gadget()).unwrap(), r(4, 1));
        assert!(energy_gap_max2xor(&Max2XorProblem::new(1)).is_err());
    }

    #[test]
    fn normalization() {
        let m = max2xor_to_ising(&direct_gadget());
        assert_eq!(m.h, BTreeMap::from([(1, r(-1, 4)), (2, r(-1, 4))]));
        assert_eq!(m.j, BTreeMap::from([((1, 2), r(1, 4))]));
        let (h, j) = unit_ranges();
        let (n, s) = normalize_to_ranges(&m, h.clone(), j.clone()).unwrap();
        assert_eq!(s, r(4, 1));
        assert_eq!(n.j[&(1, 2)], r(1, 1));
        let (_, s) = normalize_to_ranges(&n, h.clone(), j).unwrap();
        assert_eq!(s, r(1, 1));

        let mut a = IsingModel::new(3);
        a.j.insert((1, 2), r(-1, 2));
        a.j.insert((2, 3), r(1, 4));
        let (_, s) = normalize_to_ranges(&a, h, (r(-2, 1), r(1, 1))).unwrap();
        assert_eq!(s, r(4, 1));
        assert!(normalize_to_ranges(&a, unit_ranges().0, (r(1, 1), r(2, 1))).is_err());
    }

    #[test]
    fn landau_zener() {
        assert_eq!(landau_zener_success(0.0, 1.0).unwrap(), 0.0);
        let p = landau_zener_success(2.0, std::f64::consts::PI).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!(landau_zener_success(1.0, 0.0).is_err());
        assert!(landau_zener_success(1.0, -1.0).is_err());
        let mut prev = -1.0;
        for i in 0..50 {
            let p = landau_zener_success(i as f64 * 0.1, 2.0).unwrap();
            assert!(p >= prev);
            prev = p;
        }
        assert!(landau_zener_success(1.0, 1e12).unwrap() < 1e-9);
    }

    #[test]
    fn qubo_text_round_trip() {
        let q = max2xor_to_qubo(&direct_gadget());
        let text = write_qubo(&q, &["direct gadget"]);
        assert!(text.contains("p qubo 0 2 2 1\n"));
        assert!(text.contains("c offset 3/2\n"));
        assert_eq!(read_qubo(&text).unwrap(), q);
        let worked = write_qubo(&max2xor_to_qubo(&worked_example()), &[]);
        assert_eq!(worked, "p qubo 0 2 2 1\n0 0 2\n1 1 1\n0 1 -2\n");
        assert!(read_qubo("p qubo 0 2 1 0\n0 0 1\n1 1 1\n").is_err());
        assert!(read_qubo("0 0 1\n").is_err());
    }

    #[test]
    fn ising_json_round_trip() {
        let m = max2xor_to_ising(&direct_gadget());
        let s = m.to_json_string();
        assert!(s.contains("\"spin_convention\": \"true=+1\""));
        assert_eq!(IsingModel::from_json_str(&s).unwrap(), m);
        assert!(IsingModel::from_json_str(r#"{"num_vars":1,"h":[[2,"1"]],"J":[]}"#).is_err());
    }

    #[test]
    fn chains() {
        let g = CouplingGraph::from_edges(&[(0, 1), (1, 2), (2, 3)]);
        let p = Max2XorProblem::from_constraints(2, vec![XorConstraint::pair(1, 2, true, r(1, 2))]);
        let adjacent = BTreeMap::from([(1, 0), (2, 1)]);
        let (out, rep) = chain_rewrite(&p, &adjacent, &g, &Rational::one()).unwrap();
        assert_eq!(
            out.constraints,
            vec![XorConstraint::pair(1, 2, true, r(1, 2))]
        );
        assert!(rep.extra_qubits.is_empty());

        let apart = BTreeMap::from([(1, 0), (2, 2)]);
        let (out, rep) = chain_rewrite(&p, &apart, &g, &Rational::one()).unwrap();
        assert_eq!(rep.extra_qubits, vec![1]);
        assert_eq!(rep.added_constraints, 1);
        assert_eq!(
            out.constraints,
            vec![
                XorConstraint::pair(1, 2, false, r(1, 1)),
                XorConstraint::pair(2, 3, true, r(1, 2))
            ]
        );

        let blocked = BTreeMap::from([(1, 0), (2, 2), (3, 1)]);
        let mut p3 = p.clone();
        p3.num_vars = 3;
        p3.push(XorConstraint::unary(3, true, r(1, 1)));
        match chain_rewrite(&p3, &blocked, &g, &Rational::one()) {
            Err(ConvertError::Unembeddable(list)) => assert_eq!(list.len(), 1),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn graph_text() {
        let g = CouplingGraph::parse("# square\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g.num_edges(), 4);
        assert_eq!(CouplingGraph::parse(&g.to_text()).unwrap(), g);
        assert!(CouplingGraph::parse("1 1\n").is_err());
        assert_eq!(CouplingGraph::grid(3, 2).num_edges(), 7);
    }

    proptest! {
        #[test]
        fn diagram_commutes_and_energies_match(p in arb_problem(6)) {
            let s = p.simplify();
            let q = max2xor_to_qubo(&s);
            let m = max2xor_to_ising(&s);
            prop_assert_eq!(&qubo_to_ising(&q), &m);
            prop_assert_eq!(&ising_to_qubo(&m), &q);
            prop_assert_eq!(energy_gap_ising(&m).ok(), energy_gap_max2xor(&s).ok());
            let back = qubo_to_max2xor(&q);
            prop_assert_eq!(back.simplify().constraints, s.constraints.clone());
            let half = Rational::new(1, 2);
            for bits in 0..1u64 << s.num_vars {
                let e = s.evaluate(&crate::max2xor::Assignment::from_bits(s.num_vars, bits)).unwrap();
                prop_assert_eq!(q.value_bits(bits), e.falsified.clone());
                prop_assert_eq!(m.energy_bits(bits), e.falsified.clone());
                prop_assert_eq!(
                    m.coupling_energy_bits(bits),
                    s.weight() * &half - (e.satisfied - &s.offset)
                );
            }
        }
    }
}
