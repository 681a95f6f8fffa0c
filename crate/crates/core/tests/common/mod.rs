//! Brute-force oracles used by the integration tests. They work on plain
//! tuples and `Rational64` and share no evaluation code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Signed;
use sat2xor::formula::CnfFormula;
use sat2xor::max2xor::Max2XorProblem;
use sat2xor::Rational;

/// `(variables, rhs, weight)`.
pub type Xor = (Vec<u32>, bool, Rational64);

pub fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

pub fn to_q(r: &Rational) -> Rational64 {
    let (n, d) = r.as_small().expect("small rational");
    Rational64::new(n, d)
}

pub fn xors(p: &Max2XorProblem) -> Vec<Xor> {
    p.constraints
        .iter()
        .map(|c| (c.scope.vars(), c.rhs, to_q(&c.weight)))
        .collect()
}

pub fn bit(x: u64, var: u32) -> bool {
    x >> (var - 1) & 1 == 1
}

pub fn satisfied(cs: &[Xor], x: u64) -> Rational64 {
    let mut total = q(0, 1);
    for (vars, rhs, w) in cs {
        let parity = vars.iter().fold(false, |acc, &v| acc ^ bit(x, v));
        if parity == *rhs {
            total += w;
        }
    }
    total
}

pub fn total_weight(cs: &[Xor]) -> Rational64 {
    cs.iter().map(|c| c.2).sum()
}

/// Energy gap after merging constraints on the same scope.
pub fn delta_e(cs: &[Xor]) -> Option<Rational64> {
    let mut net: BTreeMap<Vec<u32>, Rational64> = BTreeMap::new();
    for (vars, rhs, w) in cs {
        let mut key = vars.clone();
        key.sort();
        let signed = if *rhs { *w } else { -*w };
        *net.entry(key).or_insert(q(0, 1)) += signed;
    }
    net.values()
        .filter(|v| **v != q(0, 1))
        .map(|v| v.abs())
        .max()
        .map(|m| q(2, 1) / m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub strict_all: bool,
    pub strict_some: bool,
    pub gap: Rational64,
    pub delta_e: Option<Rational64>,
}

/// Certifies `cs` over inputs `1..=k` and auxiliaries `k+1..=k+aux`.
pub fn certify(
    cs: &[Xor],
    k: u32,
    aux: u32,
    source: impl Fn(u64) -> bool,
) -> Result<Oracle, String> {
    let mut best = Vec::new();
    for x in 0u64..1 << k {
        let mut m: Option<Rational64> = None;
        for b in 0u64..1 << aux {
            let v = satisfied(cs, x | b << k);
            m = Some(m.map_or(v, |c| c.max(v)));
        }
        best.push(m.unwrap());
    }
    let sat: Vec<_> = (0..best.len())
        .filter(|&x| source(x as u64))
        .map(|x| best[x])
        .collect();
    let fal: Vec<_> = (0..best.len())
        .filter(|&x| !source(x as u64))
        .map(|x| best[x])
        .collect();
    let alpha = sat[0];
    if sat.iter().any(|v| *v != alpha) {
        return Err("satisfying inputs disagree".into());
    }
    let one = q(1, 1);
    if fal.iter().any(|v| *v > alpha - one) {
        return Err("falsifying input too high".into());
    }
    Ok(Oracle {
        alpha,
        beta: total_weight(cs),
        strict_all: fal.iter().all(|v| *v == alpha - one),
        strict_some: fal.iter().any(|v| *v == alpha - one),
        gap: alpha - fal.iter().copied().max().unwrap(),
        delta_e: delta_e(cs),
    })
}

pub fn or_source(k: u32) -> impl Fn(u64) -> bool {
    move |x| x & ((1 << k) - 1) != 0
}

/// Minimum number of falsified clauses.
pub fn min_falsified(f: &CnfFormula) -> usize {
    (0u64..1 << f.num_vars)
        .map(|x| {
            f.clauses
                .iter()
                .filter(|c| !c.literals.iter().any(|l| bit(x, l.var) != l.negated))
                .count()
        })
        .min()
        .unwrap_or(0)
}

pub fn scaled_rows(cs: &[Xor]) -> (i64, Vec<(u64, bool, i64)>) {
    let den = cs
        .iter()
        .fold(1i64, |d, c| num_integer::lcm(d, *c.2.denom()));
    let rows = cs
        .iter()
        .map(|(vs, r, w)| {
            (
                vs.iter().fold(0u64, |m, &v| m | 1 << (v - 1)),
                *r,
                (w * den).to_integer(),
            )
        })
        .collect();
    (den, rows)
}

/// Satisfied weight of integer rows `(mask, rhs, weight)`.
pub fn satisfied_int(rows: &[(u64, bool, i64)], x: u64) -> i64 {
    rows.iter()
        .filter(|(m, r, _)| ((x & m).count_ones() % 2 == 1) == *r)
        .map(|c| c.2)
        .sum()
}

/// `(max satisfied, min falsified)` weight by enumeration.
pub fn opt_cost(cs: &[Xor], n: u32) -> (Rational64, Rational64) {
    let (den, rows) = scaled_rows(cs);
    let total: i64 = rows.iter().map(|r| r.2).sum();
    let mut best = 0i64;
    for x in 0u64..1 << n {
        let s: i64 = rows
            .iter()
            .filter(|(m, r, _)| ((x & m).count_ones() % 2 == 1) == *r)
            .map(|c| c.2)
            .sum();
        best = best.max(s);
    }
    (q(best, den), q(total - best, den))
}

/// Minimum falsified weight by enumeration.
pub fn min_falsified_weight(cs: &[Xor], n: u32) -> Rational64 {
    opt_cost(cs, n).1
}
