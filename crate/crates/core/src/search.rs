//! Search for Max2XOR gadgets of the positive `k`-clause with the largest
//! energy gap.
//!
//! Weights are written as `v_s = p_s − n_s` per scope, so a positive `v_s` is
//! the constraint `parity_s = 1` and a negative one is `parity_s = 0`. With
//! `|v_s| ≤ 1` the LP maximizes the separation `g` between satisfying and
//! falsifying inputs, then minimizes `Σ|v_s|`. Scaling the result to unit
//! separation gives `ΔE = 2g`.
//!
//! The exact method branches on the witness extension of each input, fixing
//! the matching row to equality in a warm-started rational LP.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::Clause;
use crate::gadgets::{GadgetApplication, GadgetParams};
use crate::lp::{LexLp, LpError, Row};
use crate::max2xor::{Max2XorProblem, Scope, XorConstraint};
use crate::rational::Rational;
use crate::verify::{certificate_json, certify_gadget, GadgetCertificate, VerifyError};

pub const MAX_K: usize = 5;
pub const MAX_AUX: usize = 3;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(
        "search supports 1 ≤ k ≤ {MAX_K} and at most {MAX_AUX} auxiliaries, got k={k}, aux={aux}"
    )]
    TooLarge { k: usize, aux: usize },
    #[error("no gadget exists for k={k} with {aux} auxiliaries")]
    Infeasible { k: usize, aux: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("found gadget fails certification: {0}")]
    Certification(#[from] VerifyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchProblem {
    pub k: usize,
    pub num_aux: usize,
    /// Require every falsifying input to reach `α − 1`.
    pub strict_required: bool,
}

impl SearchProblem {
    pub fn new(k: usize, num_aux: usize) -> Self {
        SearchProblem {
            k,
            num_aux,
            strict_required: true,
        }
    }

    pub fn non_strict(mut self) -> Self {
        self.strict_required = false;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.k + self.num_aux
    }

    /// All unary and pairwise scopes over inputs and auxiliaries.
    pub fn scopes(&self) -> Vec<Scope> {
        let n = self.num_vars() as u32;
        let mut out: Vec<Scope> = (1..=n).map(Scope::Unary).collect();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Scope::Pair(i, j));
            }
        }
        out
    }

    /// Number of candidate constraints, counting both right-hand sides.
    pub fn pool_size(&self) -> usize {
        2 * self.scopes().len()
    }

    fn check(&self) -> Result<(), SearchError> {
        if self.k == 0 || self.k > MAX_K || self.num_aux > MAX_AUX {
            return Err(SearchError::TooLarge {
                k: self.k,
                aux: self.num_aux,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exact,
    /// Alternates witness selection and LP solves from seeded random starts.
    Heuristic {
        starts: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub lp_pivots: u64,
    pub incumbents: u64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub problem: SearchProblem,
    pub gadget: GadgetApplication,
    pub alpha: Rational,
    pub beta: Rational,
    pub delta_e: Rational,
    /// Proven optimal by the exact method.
    pub optimal: bool,
    pub certificate: GadgetCertificate,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        let mut v = certificate_json(&self.gadget, &self.certificate);
        v["search"] = json!({
            "k": self.problem.k,
            "num_aux": self.problem.num_aux,
            "strict_required": self.problem.strict_required,
            "optimal": self.optimal,
            "stats": self.stats,
        });
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified,
    /// The exact optimum differs from the claim; `None` when no gadget exists.
    Refuted {
        optimum: Option<Rational>,
    },
    /// Heuristic search cannot prove optimality.
    Unknown,
}

impl Certification {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Certification::Certified => Some(true),
            Certification::Refuted { .. } => Some(false),
            Certification::Unknown => None,
        }
    }
}

/// Exact search.
pub fn search_gadget(problem: &SearchProblem) -> Result<SearchResult, SearchError> {
    search_gadget_with(problem, SearchMethod::Exact)
}

pub fn search_gadget_with(
    problem: &SearchProblem,
    method: SearchMethod,
) -> Result<SearchResult, SearchError> {
    problem.check()?;
    let model = Model::new(problem)?;
    let mut state = State::default();
    match method {
        SearchMethod::Exact => model.exact(&mut state)?,
        SearchMethod::Heuristic { starts, seed } => model.heuristic(&mut state, starts, seed)?,
    }
    let Some(best) = state.best.take() else {
        return Err(SearchError::Infeasible {
            k: problem.k,
            aux: problem.num_aux,
        });
    };
    model.result(problem, best, method == SearchMethod::Exact, state.stats)
}

/// Whether the optimal `ΔE` for `problem` equals `claimed`.
pub fn certify_optimality(
    problem: &SearchProblem,
    claimed: &Rational,
    method: SearchMethod,
) -> Result<Certification, SearchError> {
    if let SearchMethod::Heuristic { .. } = method {
        problem.check()?;
        return Ok(Certification::Unknown);
    }
    match search_gadget(problem) {
        Ok(r) if &r.delta_e == claimed => Ok(Certification::Certified),
        Ok(r) => Ok(Certification::Refuted {
            optimum: Some(r.delta_e),
        }),
        Err(SearchError::Infeasible { .. }) => Ok(Certification::Refuted { optimum: None }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug)]
struct Solution {
    v: Vec<Rational>,
    alpha: Rational,
    g: Rational,
    beta: Rational,
}

#[derive(Default)]
struct State {
    best: Option<Solution>,
    stats: SearchStats,
}

impl State {
    fn improves(&self, g: &Rational, beta: &Rational) -> bool {
        match &self.best {
            None => g.is_positive(),
            Some(b) => g > &b.g || (g == &b.g && beta < &b.beta),
        }
    }

    fn offer(&mut self, sol: Solution) {
        if self.improves(&sol.g, &sol.beta) {
            self.stats.incumbents += 1;
            self.best = Some(sol);
        }
    }
}

struct Model {
    k: usize,
    aux: usize,
    strict: bool,
    masks: Vec<u64>,
    root: LexLp,
}

impl Model {
    fn new(problem: &SearchProblem) -> Result<Self, SearchError> {
        let (k, aux) = (problem.k, problem.num_aux);
        let masks: Vec<u64> = problem.scopes().iter().map(Scope::mask).collect();
        let s = masks.len();
        let (alpha_pos, alpha_neg, g) = (2 * s, 2 * s + 1, 2 * s + 2);
        let one = Rational::one;
        let mut rows = Vec::new();
        for a in 0u64..1 << k {
            for b in 0u64..1 << aux {
                let x = a | b << k;
                let mut coefs = Vec::new();
                for (i, m) in masks.iter().enumerate() {
                    if (x & m).count_ones() % 2 == 1 {
                        coefs.push((i, one()));
                        coefs.push((s + i, -one()));
                    }
                }
                coefs.push((alpha_pos, -one()));
                coefs.push((alpha_neg, one()));
                if a == 0 {
                    coefs.push((g, one()));
                }
                rows.push(Row {
                    coefs,
                    rhs: Rational::zero(),
                });
            }
        }
        for i in 0..s {
            rows.push(Row {
                coefs: vec![(i, one()), (s + i, one())],
                rhs: one(),
            });
        }
        // Any gadget with unit-bounded weights separates by at most 2·|pool|.
        rows.push(Row {
            coefs: vec![(g, one())],
            rhs: Rational::from(2 * s),
        });
        let separation = vec![(g, -one())];
        let beta = (0..2 * s).map(|i| (i, one())).collect();
        let mut root = LexLp::new(2 * s + 3, &rows, &[separation, beta])?;
        root.optimize()?;
        Ok(Model {
            k,
            aux,
            strict: problem.strict_required,
            masks,
            root,
        })
    }

    fn slack(&self, lp: &LexLp, a: u64, b: u64) -> usize {
        lp.slack((a << self.aux | b) as usize)
    }

    fn needs_witness(&self, a: u64) -> bool {
        a != 0 || self.strict
    }

    fn solution(&self, lp: &LexLp) -> Solution {
        let s = self.masks.len();
        Solution {
            v: (0..s).map(|i| lp.value(i) - lp.value(s + i)).collect(),
            alpha: lp.value(2 * s) - lp.value(2 * s + 1),
            g: lp.value(2 * s + 2),
            beta: lp.objective(1).clone(),
        }
    }

    fn value(&self, sol: &Solution, a: u64, b: u64) -> Rational {
        let x = a | b << self.k;
        self.masks
            .iter()
            .zip(&sol.v)
            .filter(|(m, v)| !v.is_zero() && (x & **m).count_ones() % 2 == 1)
            .map(|(_, v)| v)
            .sum()
    }

    fn target(&self, sol: &Solution, a: u64) -> Rational {
        if a == 0 {
            &sol.alpha - &sol.g
        } else {
            sol.alpha.clone()
        }
    }

    /// Extensions of `a` ordered by decreasing value, then index.
    fn ranked(&self, sol: &Solution, a: u64, from: u64) -> Vec<u64> {
        let mut bs: Vec<(Rational, u64)> = (from..1 << self.aux)
            .map(|b| (self.value(sol, a, b), b))
            .collect();
        bs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        bs.into_iter().map(|(_, b)| b).collect()
    }

    fn fix(
        &self,
        lp: &LexLp,
        a: u64,
        b: u64,
        stats: &mut SearchStats,
    ) -> Result<Option<LexLp>, SearchError> {
        let mut child = lp.clone();
        let before = child.pivots();
        let res = child.fix_zero(self.slack(&child, a, b));
        stats.lp_pivots += child.pivots() - before;
        match res {
            Ok(()) => Ok(Some(child)),
            Err(LpError::Infeasible) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Inputs whose witnesses are ordered by symmetry, and the first of them.
    fn singleton_order(&self) -> (Vec<u64>, Option<u64>) {
        let singles: Vec<u64> = (0..self.k).map(|i| 1u64 << i).collect();
        if self.strict {
            (singles, None)
        } else {
            (singles[1..].to_vec(), Some(singles[0]))
        }
    }

    fn exact(&self, state: &mut State) -> Result<(), SearchError> {
        let mut fixed = vec![None; 1 << self.k];
        let root_input = if self.strict { 0 } else { 1 };
        fixed[root_input as usize] = Some(0);
        let Some(lp) = self.fix(&self.root, root_input, 0, &mut state.stats)? else {
            return Ok(());
        };
        self.branch(lp, &mut fixed, state)
    }

    fn branch(
        &self,
        lp: LexLp,
        fixed: &mut Vec<Option<u64>>,
        state: &mut State,
    ) -> Result<(), SearchError> {
        state.stats.nodes += 1;
        let sol = self.solution(&lp);
        if !state.improves(&sol.g, &sol.beta) {
            return Ok(());
        }
        let (order, _) = self.singleton_order();
        let next_single = order.iter().position(|&a| fixed[a as usize].is_none());
        let (a, from) = match next_single {
            Some(i) => {
                let lo = if i > 0 {
                    fixed[order[i - 1] as usize].unwrap_or(0)
                } else {
                    0
                };
                (order[i], lo)
            }
            None => {
                let mut worst: Option<(Rational, u64)> = None;
                for a in 0u64..1 << self.k {
                    if fixed[a as usize].is_some() || !self.needs_witness(a) {
                        continue;
                    }
                    let best = (0u64..1 << self.aux)
                        .map(|b| self.value(&sol, a, b))
                        .max()
                        .expect("nonempty");
                    let gap = self.target(&sol, a) - best;
                    if gap.is_positive() && worst.as_ref().is_none_or(|(w, _)| &gap > w) {
                        worst = Some((gap, a));
                    }
                }
                match worst {
                    None => {
                        state.offer(sol);
                        return Ok(());
                    }
                    Some((_, a)) => (a, 0),
                }
            }
        };
        for b in self.ranked(&sol, a, from) {
            if let Some(child) = self.fix(&lp, a, b, &mut state.stats)? {
                fixed[a as usize] = Some(b);
                self.branch(child, fixed, state)?;
                fixed[a as usize] = None;
            }
        }
        Ok(())
    }

    fn heuristic(&self, state: &mut State, starts: usize, seed: u64) -> Result<(), SearchError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs: Vec<u64> = (0u64..1 << self.k)
            .filter(|&a| self.needs_witness(a))
            .collect();
        for _ in 0..starts.max(1) {
            let mut sol = Solution {
                v: (0..self.masks.len())
                    .map(|_| Rational::new(rng.gen_range(-4..=4), 4))
                    .collect(),
                alpha: Rational::zero(),
                g: Rational::zero(),
                beta: Rational::zero(),
            };
            let mut witnesses: Vec<u64> =
                inputs.iter().map(|&a| self.ranked(&sol, a, 0)[0]).collect();
            for _ in 0..32 {
                state.stats.nodes += 1;
                let mut lp = Some(self.root.clone());
                for (&a, &b) in inputs.iter().zip(&witnesses) {
                    lp = match lp {
                        Some(l) => self.fix(&l, a, b, &mut state.stats)?,
                        None => None,
                    };
                }
                let Some(lp) = lp else { break };
                sol = self.solution(&lp);
                state.offer(sol.clone());
                let next: Vec<u64> = inputs
                    .iter()
                    .zip(&witnesses)
                    .map(|(&a, &w)| {
                        let best = (0u64..1 << self.aux)
                            .map(|b| self.value(&sol, a, b))
                            .max()
                            .expect("nonempty");
                        if self.value(&sol, a, w) == best {
                            w
                        } else {
                            self.ranked(&sol, a, 0)[0]
                        }
                    })
                    .collect();
                if next == witnesses {
                    break;
                }
                witnesses = next;
            }
        }
        Ok(())
    }

    fn result(
        &self,
        problem: &SearchProblem,
        sol: Solution,
        optimal: bool,
        stats: SearchStats,
    ) -> Result<SearchResult, SearchError> {
        let n = (self.k + self.aux) as u32;
        let scopes = problem.scopes();
        let mut constraints = Vec::new();
        let mut negative = Rational::zero();
        for (scope, v) in scopes.into_iter().zip(&sol.v) {
            if v.is_zero() {
                continue;
            }
            if v.is_negative() {
                negative -= v;
            }
            constraints.push(XorConstraint::new(scope, v.is_positive(), v.abs() / &sol.g));
        }
        let alpha = (&sol.alpha + &negative) / &sol.g;
        let beta = &sol.beta / &sol.g;
        let delta_e = &sol.g * Rational::from(2);
        let clause = Clause::positive(self.k as u32);
        let name = format!("search-k{}-a{}", self.k, self.aux);
        let params = GadgetParams::new(
            &name,
            alpha.clone(),
            beta.clone(),
            Some(delta_e.clone()),
            self.aux as u32,
            problem.strict_required,
            &format!("{}SAT", self.k),
            "Max2XOR",
        );
        let mut gadget = GadgetApplication {
            constraints: Max2XorProblem::from_constraints(n, constraints),
            clause_vars: clause.vars(),
            aux_vars: (self.k as u32 + 1..=n).collect(),
            params,
            paper_claimed: None,
        };
        let certificate = certify_gadget(&gadget, &clause)?;
        debug_assert_eq!((&certificate.alpha, &certificate.beta), (&alpha, &beta));
        gadget.params.strict = certificate.strict;
        Ok(SearchResult {
            problem: problem.clone(),
            gadget,
            alpha,
            beta,
            delta_e,
            optimal,
            certificate,
            stats,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn pool_size_counts_both_polarities() {
        let p = SearchProblem::new(3, 1);
        assert_eq!(p.pool_size(), 2 * (4 + 6));
        assert_eq!(SearchProblem::new(5, 3).pool_size(), 2 * (8 + 28));
    }

    #[test]
    fn three_one_matches_tree() {
        let res = search_gadget(&SearchProblem::new(3, 1)).unwrap();
        assert_eq!(
            (res.alpha.clone(), res.beta.clone(), res.delta_e.clone()),
            (r(2, 1), r(3, 1), r(4, 1))
        );
        assert!(res.optimal && res.certificate.strict);
        assert_eq!(res.certificate.delta_e, Some(r(4, 1)));
    }

    #[test]
    fn small_widths() {
        let res = search_gadget(&SearchProblem::new(2, 0)).unwrap();
        assert_eq!(
            (res.alpha, res.beta, res.delta_e),
            (r(1, 1), r(3, 2), r(4, 1))
        );
        let res = search_gadget(&SearchProblem::new(1, 0)).unwrap();
        assert_eq!(
            (res.alpha, res.beta, res.delta_e),
            (r(1, 1), r(1, 1), r(2, 1))
        );
        assert!(matches!(
            search_gadget(&SearchProblem::new(3, 0)),
            Err(SearchError::Infeasible { .. })
        ));
    }

    #[test]
    fn certification_outcomes() {
        let p = SearchProblem::new(3, 1);
        assert_eq!(
            certify_optimality(&p, &r(4, 1), SearchMethod::Exact).unwrap(),
            Certification::Certified
        );
        assert_eq!(
            certify_optimality(&p, &r(5, 1), SearchMethod::Exact).unwrap(),
            Certification::Refuted {
                optimum: Some(r(4, 1))
            }
        );
        let h = SearchMethod::Heuristic { starts: 2, seed: 1 };
        assert_eq!(certify_optimality(&p, &r(4, 1), h).unwrap().as_bool(), None);
    }

    #[test]
    fn heuristic_never_beats_exact() {
        let p = SearchProblem::new(3, 1);
        let h = search_gadget_with(&p, SearchMethod::Heuristic { starts: 4, seed: 3 }).unwrap();
        assert!(!h.optimal);
        assert!(h.delta_e <= r(4, 1));
    }

    #[test]
    fn size_bounds() {
        assert!(matches!(
            search_gadget(&SearchProblem::new(6, 0)),
            Err(SearchError::TooLarge { .. })
        ));
        assert!(matches!(
            search_gadget(&SearchProblem::new(3, 4)),
            Err(SearchError::TooLarge { .. })
        ));
    }
}
