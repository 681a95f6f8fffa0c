//! Weighted parity constraints of arity at most two.
//!
//! Assignments are bit-packed into a `u64`: variable `i` lives in bit `i - 1`.
//! [`Assignment`] is the unpacked form used at API boundaries.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::rational::{common_denominator, scaled_integer, Rational};

/// One or two distinct variables, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Unary(u32),
    Pair(u32, u32),
}

impl Scope {
    /// Builds a pair scope in sorted order. Panics on `u == v`.
    pub fn pair(u: u32, v: u32) -> Self {
        assert!(u != v, "pair scope needs distinct variables");
        if u < v {
            Scope::Pair(u, v)
        } else {
            Scope::Pair(v, u)
        }
    }

    pub fn vars(&self) -> Vec<u32> {
        match *self {
            Scope::Unary(v) => vec![v],
            Scope::Pair(u, v) => vec![u, v],
        }
    }

    pub fn max_var(&self) -> u32 {
        match *self {
            Scope::Unary(v) => v,
            Scope::Pair(_, v) => v,
        }
    }

    pub fn contains(&self, var: u32) -> bool {
        match *self {
            Scope::Unary(v) => v == var,
            Scope::Pair(u, v) => u == var || v == var,
        }
    }

    /// Bit mask of the scope variables.
    pub fn mask(&self) -> u64 {
        match *self {
            Scope::Unary(v) => 1 << (v - 1),
            Scope::Pair(u, v) => (1 << (u - 1)) | (1 << (v - 1)),
        }
    }

    /// Parity of the scope variables under a bit-packed assignment.
    pub fn parity_bits(&self, bits: u64) -> bool {
        (bits & self.mask()).count_ones() % 2 == 1
    }

    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Scope {
        match *self {
            Scope::Unary(v) => Scope::Unary(f(v)),
            Scope::Pair(u, v) => Scope::pair(f(u), f(v)),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Unary(v) => write!(f, "x{v}"),
            Scope::Pair(u, v) => write!(f, "x{u}⊕x{v}"),
        }
    }
}

/// `weight : ⊕scope = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XorConstraint {
    pub scope: Scope,
    pub rhs: bool,
    pub weight: Rational,
}

impl XorConstraint {
    pub fn new(scope: Scope, rhs: bool, weight: Rational) -> Self {
        assert!(weight.is_positive(), "constraint weight must be positive");
        XorConstraint { scope, rhs, weight }
    }

    pub fn unary(v: u32, rhs: bool, weight: Rational) -> Self {
        Self::new(Scope::Unary(v), rhs, weight)
    }

    pub fn pair(u: u32, v: u32, rhs: bool, weight: Rational) -> Self {
        Self::new(Scope::pair(u, v), rhs, weight)
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        let parity = self
            .scope
            .vars()
            .iter()
            .fold(false, |acc, &v| acc ^ assignment[v as usize - 1]);
        parity == self.rhs
    }

    pub fn is_satisfied_bits(&self, bits: u64) -> bool {
        self.scope.parity_bits(bits) == self.rhs
    }

    fn canonical_key(&self) -> (Scope, bool) {
        (self.scope, self.rhs)
    }
}

impl fmt::Display for XorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}={}", self.weight, self.scope, self.rhs as u8)
    }
}

/// An assignment to variables `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn from_bits(num_vars: u32, bits: u64) -> Self {
        Assignment((0..num_vars).map(|i| (bits >> i) & 1 == 1).collect())
    }

    /// Packs into a `u64`. Panics past 64 variables.
    pub fn to_bits(&self) -> u64 {
        assert!(self.0.len() <= 64, "assignment too long to pack");
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn get(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Max2XorError {
    #[error("assignment covers {got} variables but the problem has {need}")]
    AssignmentTooShort { got: usize, need: u32 },
    #[error("{num_vars} variables exceed the enumeration bound {bound}")]
    TooManyVars { num_vars: u32, bound: u32 },
    #[error("constraint mentions variable {var} beyond num_vars {num_vars}")]
    VarOutOfRange { var: u32, num_vars: u32 },
    #[error("malformed problem JSON: {0}")]
    Json(String),
}

/// Satisfied and falsified weight of one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    /// `I(P)`, offset included.
    pub satisfied: Rational,
    /// `Ī(P)`.
    pub falsified: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub opt: Rational,
    pub cost: Rational,
    /// Optimal assignments in ascending integer order, at most the cap.
    pub witnesses: Vec<Assignment>,
    /// Total number of optimal assignments, including those past the cap.
    pub num_optimal: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub max_vars: u32,
    pub witness_cap: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_vars: 30,
            witness_cap: 64,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Max2XorProblem {
    pub num_vars: u32,
    pub constraints: Vec<XorConstraint>,
    pub offset: Rational,
}

impl Max2XorProblem {
    pub fn new(num_vars: u32) -> Self {
        Max2XorProblem {
            num_vars,
            constraints: Vec::new(),
            offset: Rational::zero(),
        }
    }

    pub fn from_constraints(num_vars: u32, constraints: Vec<XorConstraint>) -> Self {
        let p = Max2XorProblem {
            num_vars,
            constraints,
            offset: Rational::zero(),
        };
        p.check_vars().expect("constraint outside variable range");
        p
    }

    pub fn check_vars(&self) -> Result<(), Max2XorError> {
        for c in &self.constraints {
            if c.scope.max_var() > self.num_vars {
                return Err(Max2XorError::VarOutOfRange {
                    var: c.scope.max_var(),
                    num_vars: self.num_vars,
                });
            }
        }
        Ok(())
    }

    pub fn push(&mut self, c: XorConstraint) {
        self.num_vars = self.num_vars.max(c.scope.max_var());
        self.constraints.push(c);
    }

    /// Appends all constraints and the offset of `other`.
    pub fn extend(&mut self, other: &Max2XorProblem) {
        self.num_vars = self.num_vars.max(other.num_vars);
        self.constraints.extend(other.constraints.iter().cloned());
        self.offset += &other.offset;
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Sum of the stored constraint weights, offset excluded.
    pub fn weight(&self) -> Rational {
        self.constraints.iter().map(|c| &c.weight).sum()
    }

    /// `weight() + offset`: what `satisfied + falsified` always equals.
    pub fn total_weight(&self) -> Rational {
        self.weight() + &self.offset
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<Evaluation, Max2XorError> {
        if assignment.len() < self.num_vars as usize {
            return Err(Max2XorError::AssignmentTooShort {
                got: assignment.len(),
                need: self.num_vars,
            });
        }
        let mut sat = self.offset.clone();
        let mut fal = Rational::zero();
        for c in &self.constraints {
            if c.is_satisfied(&assignment.0) {
                sat += &c.weight;
            } else {
                fal += &c.weight;
            }
        }
        Ok(Evaluation {
            satisfied: sat,
            falsified: fal,
        })
    }

    /// Satisfied weight (offset included) of a bit-packed assignment.
    pub fn satisfied_bits(&self, bits: u64) -> Rational {
        let mut sat = self.offset.clone();
        for c in &self.constraints {
            if c.is_satisfied_bits(bits) {
                sat += &c.weight;
            }
        }
        sat
    }

    /// Merges equal `(scope, rhs)` entries, cancels opposite polarities into
    /// the offset and sorts canonically.
    pub fn simplify(&self) -> Max2XorProblem {
        let mut merged: BTreeMap<Scope, [Rational; 2]> = BTreeMap::new();
        for c in &self.constraints {
            merged.entry(c.scope).or_default()[c.rhs as usize] += &c.weight;
        }
        let mut out = Max2XorProblem::new(self.num_vars);
        out.offset = self.offset.clone();
        for (scope, [w0, w1]) in merged {
            let common = w0.clone().min(w1.clone());
            out.offset += &common;
            let (w0, w1) = (w0 - &common, w1 - &common);
            if w0.is_positive() {
                out.constraints.push(XorConstraint::new(scope, false, w0));
            }
            if w1.is_positive() {
                out.constraints.push(XorConstraint::new(scope, true, w1));
            }
        }
        out
    }

    pub fn is_simplified(&self) -> bool {
        self.constraints.windows(2).all(|w| w[0].scope < w[1].scope)
    }

    /// Sorts constraints canonically without merging.
    pub fn canonicalize(&mut self) {
        self.constraints.sort_by(|a, b| {
            a.canonical_key()
                .cmp(&b.canonical_key())
                .then(a.weight.cmp(&b.weight))
        });
    }

    /// Renames variables through `f`; `num_vars` becomes `new_num_vars`.
    pub fn relabel(&self, new_num_vars: u32, f: impl Fn(u32) -> u32) -> Max2XorProblem {
        let constraints = self
            .constraints
            .iter()
            .map(|c| XorConstraint::new(c.scope.map_vars(&f), c.rhs, c.weight.clone()))
            .collect();
        Max2XorProblem {
            num_vars: new_num_vars,
            constraints,
            offset: self.offset.clone(),
        }
    }

    /// Every weight multiplied by `factor > 0`, offset included.
    pub fn scaled(&self, factor: &Rational) -> Max2XorProblem {
        assert!(factor.is_positive());
        Max2XorProblem {
            num_vars: self.num_vars,
            constraints: self
                .constraints
                .iter()
                .map(|c| XorConstraint::new(c.scope, c.rhs, &c.weight * factor))
                .collect(),
            offset: &self.offset * factor,
        }
    }

    pub fn exhaustive_opt(&self) -> Result<OptResult, Max2XorError> {
        self.exhaustive_opt_with(EnumOptions::default())
    }

    /// Exact `Opt`/`Cost` by enumerating all `2^num_vars` assignments.
    ///
    /// Ties are resolved towards smaller assignment integers, and the result
    /// does not depend on how the work is split across threads.
    pub fn exhaustive_opt_with(&self, opts: EnumOptions) -> Result<OptResult, Max2XorError> {
        let bound = opts.max_vars.min(62);
        if self.num_vars > bound {
            return Err(Max2XorError::TooManyVars {
                num_vars: self.num_vars,
                bound,
            });
        }
        self.check_vars()?;
        let (best_bits, num_optimal, opt) = match IntegerForm::new(self) {
            Some(form) => {
                let (val, count, wit) = form.enumerate_max(self.num_vars, opts.witness_cap);
                let opt = Rational::new(val, form.scale) + &self.offset;
                (wit, count, opt)
            }
            None => self.enumerate_rational(opts.witness_cap),
        };
        let cost = self.total_weight() - &opt;
        Ok(OptResult {
            witnesses: best_bits
                .into_iter()
                .map(|b| Assignment::from_bits(self.num_vars, b))
                .collect(),
            num_optimal,
            opt,
            cost,
        })
    }

    fn enumerate_rational(&self, cap: usize) -> (Vec<u64>, u64, Rational) {
        let mut best: Option<Rational> = None;
        let mut wit = Vec::new();
        let mut count = 0;
        for bits in 0u64..1 << self.num_vars {
            let v = self.satisfied_bits(bits);
            match best.as_ref().map(|b| v.cmp(b)) {
                Some(Ordering::Less) => continue,
                Some(Ordering::Equal) => {
                    count += 1;
                    if wit.len() < cap {
                        wit.push(bits);
                    }
                }
                _ => {
                    best = Some(v);
                    count = 1;
                    wit.clear();
                    if cap > 0 {
                        wit.push(bits);
                    }
                }
            }
        }
        (wit, count, best.unwrap_or_default())
    }

    pub fn to_json(&self) -> Value {
        let mut sorted = self.clone();
        sorted.canonicalize();
        let constraints: Vec<Value> = sorted
            .constraints
            .iter()
            .map(|c| {
                let mut row: Vec<Value> = c.scope.vars().into_iter().map(Value::from).collect();
                row.push(Value::from(c.rhs as u8));
                row.push(Value::from(c.weight.to_string()));
                Value::Array(row)
            })
            .collect();
        json!({
            "num_vars": self.num_vars,
            "offset": self.offset.to_string(),
            "constraints": constraints,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(v: &Value) -> Result<Self, Max2XorError> {
        let err = |m: &str| Max2XorError::Json(m.to_string());
        let num_vars = v["num_vars"].as_u64().ok_or_else(|| err("num_vars"))? as u32;
        let offset = match &v["offset"] {
            Value::Null => Rational::zero(),
            o => parse_rational_value(o).ok_or_else(|| err("offset"))?,
        };
        let rows = v["constraints"]
            .as_array()
            .ok_or_else(|| err("constraints"))?;
        let mut constraints = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| err("constraint row"))?;
            if row.len() != 3 && row.len() != 4 {
                return Err(err("constraint row length"));
            }
            let n = row.len();
            let var = |x: &Value| {
                x.as_u64()
                    .filter(|&v| v >= 1)
                    .map(|v| v as u32)
                    .ok_or_else(|| err("variable index"))
            };
            let scope = if n == 3 {
                Scope::Unary(var(&row[0])?)
            } else {
                let (a, b) = (var(&row[0])?, var(&row[1])?);
                if a == b {
                    return Err(err("repeated variable in scope"));
                }
                Scope::pair(a, b)
            };
            let rhs = match row[n - 2].as_u64() {
                Some(0) => false,
                Some(1) => true,
                _ => return Err(err("rhs")),
            };
            let weight = parse_rational_value(&row[n - 1]).ok_or_else(|| err("weight"))?;
            if !weight.is_positive() {
                return Err(err("non-positive weight"));
            }
            constraints.push(XorConstraint::new(scope, rhs, weight));
        }
        let p = Max2XorProblem {
            num_vars,
            constraints,
            offset,
        };
        p.check_vars()?;
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self, Max2XorError> {
        let v: Value = serde_json::from_str(s).map_err(|e| Max2XorError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// Accepts `"p/q"` strings and plain JSON integers.
pub(crate) fn parse_rational_value(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => s.parse().ok(),
        Value::Number(n) => n.as_i64().map(Rational::from_integer),
        _ => None,
    }
}

impl fmt::Display for Max2XorProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Max2XOR over {} vars, offset {}",
            self.num_vars, self.offset
        )?;
        for c in &self.constraints {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// Integer-scaled copy of a problem's constraints for fast enumeration.
#[derive(Clone, Debug)]
pub(crate) struct IntegerForm {
    /// Common denominator; integer weight `w` stands for `w / scale`.
    pub scale: i64,
    pub masks: Vec<u64>,
    pub rhs: Vec<bool>,
    pub weights: Vec<i64>,
    /// Constraint indices touching each variable (index `v - 1`).
    by_var: Vec<Vec<usize>>,
}

impl IntegerForm {
    /// `None` when the scaled weights do not fit comfortably in `i64`.
    pub fn new(p: &Max2XorProblem) -> Option<Self> {
        let scale = common_denominator(p.constraints.iter().map(|c| &c.weight))?;
        let mut weights = Vec::with_capacity(p.constraints.len());
        let mut total: i64 = 0;
        for c in &p.constraints {
            let w = scaled_integer(&c.weight, scale)?;
            total = total.checked_add(w)?;
            weights.push(w);
        }
        if total > i64::MAX / 4 {
            return None;
        }
        let mut by_var = vec![Vec::new(); p.num_vars as usize];
        for (i, c) in p.constraints.iter().enumerate() {
            for v in c.scope.vars() {
                by_var[v as usize - 1].push(i);
            }
        }
        Some(IntegerForm {
            scale,
            masks: p.constraints.iter().map(|c| c.scope.mask()).collect(),
            rhs: p.constraints.iter().map(|c| c.rhs).collect(),
            weights,
            by_var,
        })
    }

    #[inline]
    pub fn value(&self, bits: u64) -> i64 {
        let mut v = 0;
        for i in 0..self.masks.len() {
            if ((bits & self.masks[i]).count_ones() & 1 == 1) == self.rhs[i] {
                v += self.weights[i];
            }
        }
        v
    }

    /// Change in value when flipping variable `var` (0-based) from `bits`.
    #[inline]
    fn flip_delta(&self, bits: u64, var: usize) -> i64 {
        let mut d = 0;
        for &i in &self.by_var[var] {
            let sat = ((bits & self.masks[i]).count_ones() & 1 == 1) == self.rhs[i];
            d += if sat {
                -self.weights[i]
            } else {
                self.weights[i]
            };
        }
        d
    }

    /// Max value over all assignments of `n` variables, with the number of
    /// maximizers and the `cap` smallest of them in ascending order.
    pub fn enumerate_max(&self, n: u32, cap: usize) -> (i64, u64, Vec<u64>) {
        let high = if n >= 16 { (n - 12).min(10) } else { 0 };
        let low = n - high;
        let chunks: Vec<(i64, u64, Vec<u64>)> = (0u64..1 << high)
            .into_par_iter()
            .map(|h| self.scan_chunk(h << low, low, cap))
            .collect();
        let best = chunks.iter().map(|c| c.0).max().unwrap_or(0);
        let mut count = 0;
        let mut wit = Vec::new();
        for (v, c, w) in chunks {
            if v == best {
                count += c;
                wit.extend(w);
            }
        }
        wit.sort_unstable();
        wit.truncate(cap);
        (best, count, wit)
    }

    fn scan_chunk(&self, base: u64, low: u32, cap: usize) -> (i64, u64, Vec<u64>) {
        let mut bits = base;
        let mut val = self.value(bits);
        let mut best = val;
        let mut count = 1u64;
        let mut heap = BinaryHeap::new();
        if cap > 0 {
            heap.push(bits);
        }
        for i in 1u64..1 << low {
            let var = i.trailing_zeros() as usize;
            val += self.flip_delta(bits, var);
            bits ^= 1 << var;
            match val.cmp(&best) {
                Ordering::Less => {}
                Ordering::Equal => {
                    count += 1;
                    push_capped(&mut heap, bits, cap);
                }
                Ordering::Greater => {
                    best = val;
                    count = 1;
                    heap.clear();
                    push_capped(&mut heap, bits, cap);
                }
            }
        }
        (best, count, heap.into_vec())
    }
}

/// Keeps the `cap` smallest values in a max-heap.
fn push_capped(heap: &mut BinaryHeap<u64>, x: u64, cap: usize) {
    if heap.len() < cap {
        heap.push(x);
    } else if let Some(&top) = heap.peek() {
        if x < top {
            heap.pop();
            heap.push(x);
        }
    }
}
