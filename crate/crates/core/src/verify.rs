//! Exhaustive gadget certification, formula-level Opt/Cost checks, the tree
//! lemma checker and a seeded simulated-annealing solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::convert::{energy_gap_max2xor, ising_to_qubo, max2xor_to_qubo, IsingModel, QuboModel};
use crate::formula::{Clause, CnfFormula};
use crate::gadgets::{
    compile_cnf, tree_with_root_variable, GadgetApplication, GadgetError, GadgetParams, Strategy,
    TreeShape,
};
use crate::max2xor::{Assignment, EnumOptions, IntegerForm, Max2XorError, Max2XorProblem};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{vars} variables exceed the certification bound {bound}")]
    TooLarge { vars: usize, bound: usize },
    #[error("not a gadget: satisfying input {x:0width$b} reaches {got}, another reaches {alpha}", width = *.k)]
    UnequalSatisfying {
        x: u64,
        k: usize,
        got: Rational,
        alpha: Rational,
    },
    #[error("falsifying input {x:0width$b} reaches {got} > α−1 = {bound}", width = *.k)]
    FalsifyingTooHigh {
        x: u64,
        k: usize,
        got: Rational,
        bound: Rational,
    },
    #[error("source constraint is {0}")]
    DegenerateSource(&'static str),
    #[error("application variables do not match the clause")]
    ClauseMismatch,
    #[error("tree lemma failed for shape {shape}: {what}")]
    TreeLemma { shape: String, what: String },
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Max2Xor(#[from] Max2XorError),
}

/// Best extension value of one input assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentRow {
    /// Input bits; bit `i` is position `i + 1`.
    pub x: u64,
    pub satisfies_source: bool,
    pub best: Rational,
    /// For falsifying inputs: whether `α − 1` is reached exactly.
    pub attains_alpha_minus_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetCertificate {
    pub name: String,
    pub k: usize,
    pub num_aux: usize,
    pub alpha: Rational,
    pub beta: Rational,
    /// Every falsifying input reaches `α − 1`.
    pub strict: bool,
    /// Some falsifying input reaches `α − 1`.
    pub strict_some: bool,
    /// Smallest satisfying best minus largest falsifying best.
    pub gap: Rational,
    pub delta_e: Option<Rational>,
    pub per_assignment: Vec<AssignmentRow>,
    pub paper_claimed: Option<GadgetParams>,
}

impl GadgetCertificate {
    pub fn summary(&self) -> String {
        let strict = if self.strict { "" } else { "non-strict " };
        match &self.delta_e {
            Some(d) => format!("{strict}({},{})-gadget, ΔE={d}", self.alpha, self.beta),
            None => format!("{strict}({},{})-gadget", self.alpha, self.beta),
        }
    }

    /// Whether `(α, β, ΔE, strict)` agree with `declared`.
    pub fn matches(&self, declared: &GadgetParams) -> bool {
        self.alpha == declared.alpha
            && self.beta == declared.beta
            && self.strict == declared.strict
            && (declared.delta_e.is_none() || self.delta_e == declared.delta_e)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Largest `k + A` accepted by the certifier.
pub const CERTIFY_BOUND: usize = 24;

/// Certifies `app` as a gadget for `clause`.
pub fn certify_gadget(
    app: &GadgetApplication,
    clause: &Clause,
) -> Result<GadgetCertificate, VerifyError> {
    if app.clause_vars != clause.vars() {
        return Err(VerifyError::ClauseMismatch);
    }
    let k = clause.width();
    let local = to_local(app);
    let lits = clause.literals.clone();
    let mut cert = certify_source(&local, k, app.aux_vars.len(), |x| {
        lits.iter()
            .enumerate()
            .any(|(i, l)| (x >> i & 1 == 1) != l.negated)
    })?;
    cert.name = app.params.name.clone();
    cert.paper_claimed = app.paper_claimed.clone();
    Ok(cert)
}

/// Renames clause variables to `1..=k` and auxiliaries to `k+1..`.
fn to_local(app: &GadgetApplication) -> Max2XorProblem {
    let k = app.clause_vars.len() as u32;
    let n = k + app.aux_vars.len() as u32;
    app.constraints.relabel(n, |v| {
        if let Some(i) = app.clause_vars.iter().position(|&c| c == v) {
            i as u32 + 1
        } else {
            let j = app
                .aux_vars
                .iter()
                .position(|&a| a == v)
                .expect("variable outside the gadget");
            k + 1 + j as u32
        }
    })
}

/// Certifies `p` (over inputs `1..=k` and auxiliaries `k+1..=k+num_aux`) as a
/// gadget for the source constraint `source`, evaluated on input bits.
/// Values are constraint weights only; the offset is ignored.
pub fn certify_source(
    p: &Max2XorProblem,
    k: usize,
    num_aux: usize,
    source: impl Fn(u64) -> bool,
) -> Result<GadgetCertificate, VerifyError> {
    if k + num_aux > CERTIFY_BOUND {
        return Err(VerifyError::TooLarge {
            vars: k + num_aux,
            bound: CERTIFY_BOUND,
        });
    }
    let mut p = p.clone();
    p.offset = Rational::zero();
    p.num_vars = (k + num_aux) as u32;
    let best = best_extensions(&p, k, num_aux);

    let mut sat_best: Option<Rational> = None;
    let mut sat_min: Option<Rational> = None;
    let mut fal_max: Option<Rational> = None;
    for (x, b) in best.iter().enumerate() {
        if source(x as u64) {
            match &sat_best {
                None => sat_best = Some(b.clone()),
                Some(a) if a != b => {
                    return Err(VerifyError::UnequalSatisfying {
                        x: x as u64,
                        k,
                        got: b.clone(),
                        alpha: a.clone(),
                    })
                }
                _ => {}
            }
            sat_min = Some(sat_min.map_or(b.clone(), |m| m.min(b.clone())));
        } else {
            fal_max = Some(fal_max.map_or(b.clone(), |m| m.max(b.clone())));
        }
    }
    let alpha = sat_best.ok_or(VerifyError::DegenerateSource("never satisfied"))?;
    let fal_max = fal_max.ok_or(VerifyError::DegenerateSource("never falsified"))?;
    let bound = &alpha - Rational::one();
    let mut rows = Vec::with_capacity(best.len());
    for (x, b) in best.into_iter().enumerate() {
        let sat = source(x as u64);
        if !sat && b > bound {
            return Err(VerifyError::FalsifyingTooHigh {
                x: x as u64,
                k,
                got: b,
                bound,
            });
        }
        rows.push(AssignmentRow {
            x: x as u64,
            satisfies_source: sat,
            attains_alpha_minus_one: !sat && b == bound,
            best: b,
        });
    }
    let falsifying = rows.iter().filter(|r| !r.satisfies_source);
    let strict = falsifying.clone().all(|r| r.attains_alpha_minus_one);
    let strict_some = falsifying.clone().any(|r| r.attains_alpha_minus_one);
    Ok(GadgetCertificate {
        name: String::new(),
        k,
        num_aux,
        gap: sat_min.expect("satisfying input exists") - fal_max,
        beta: p.weight(),
        delta_e: energy_gap_max2xor(&p).ok(),
        alpha,
        strict,
        strict_some,
        per_assignment: rows,
        paper_claimed: None,
    })
}

/// For every input `x < 2^k`, the best value over the auxiliary bits.
fn best_extensions(p: &Max2XorProblem, k: usize, num_aux: usize) -> Vec<Rational> {
    match IntegerForm::new(p) {
        Some(form) => (0u64..1 << k)
            .into_par_iter()
            .map(|x| {
                let best = (0u64..1 << num_aux)
                    .map(|b| form.value(x | b << k))
                    .max()
                    .unwrap_or(0);
                Rational::new(best, form.scale)
            })
            .collect(),
        None => (0u64..1 << k)
            .map(|x| {
                (0u64..1 << num_aux)
                    .map(|b| p.satisfied_bits(x | b << k))
                    .max()
                    .unwrap_or_default()
            })
            .collect(),
    }
}

/// Formula-level comparison between the MaxSAT view of a CNF formula and its
/// compiled Max2XOR problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptCostReport {
    pub num_clauses: usize,
    pub total_vars: u32,
    pub opt_p: Rational,
    pub cost_p: Rational,
    pub opt_compiled: Rational,
    pub cost_compiled: Rational,
    pub sum_alpha_minus_one: Rational,
    pub sum_beta_minus_alpha: Rational,
    pub all_strict: bool,
    /// Equality for strict gadgets, `≤` otherwise.
    pub opt_relation_holds: bool,
    /// Equality for strict gadgets, `≥` otherwise.
    pub cost_relation_holds: bool,
    pub satisfiable: bool,
    pub unsat_threshold: Rational,
    pub predicted_unsat: bool,
}

impl OptCostReport {
    pub fn threshold_correct(&self) -> bool {
        self.predicted_unsat != self.satisfiable
    }

    pub fn all_hold(&self) -> bool {
        self.opt_relation_holds && self.cost_relation_holds && self.threshold_correct()
    }
}

pub fn check_opt_cost_relation(
    formula: &CnfFormula,
    strategy: &Strategy,
) -> Result<OptCostReport, VerifyError> {
    let compiled = compile_cnf(formula, strategy)?;
    let (f, _) = formula.normalized();
    let m = f.clauses.len();
    let total = compiled.raw.num_vars;
    if total as usize > CERTIFY_BOUND {
        return Err(VerifyError::TooLarge {
            vars: total as usize,
            bound: CERTIFY_BOUND,
        });
    }
    let cost_p = Rational::from(f.min_falsified());
    let opt_p = Rational::from(m) - &cost_p;
    let o = compiled.raw.exhaustive_opt_with(EnumOptions {
        max_vars: CERTIFY_BOUND as u32,
        witness_cap: 1,
    })?;
    let t = &compiled.totals;
    let opt_rhs = &t.sum_alpha_minus_one + &opt_p;
    let cost_rhs = &t.sum_beta_minus_alpha + &cost_p;
    let (opt_ok, cost_ok) = if t.all_strict {
        (o.opt == opt_rhs, o.cost == cost_rhs)
    } else {
        (o.opt <= opt_rhs, o.cost >= cost_rhs)
    };
    Ok(OptCostReport {
        num_clauses: m,
        total_vars: total,
        opt_relation_holds: opt_ok,
        cost_relation_holds: cost_ok,
        satisfiable: cost_p.is_zero(),
        predicted_unsat: o.cost >= t.unsat_threshold,
        unsat_threshold: t.unsat_threshold.clone(),
        sum_alpha_minus_one: t.sum_alpha_minus_one.clone(),
        sum_beta_minus_alpha: t.sum_beta_minus_alpha.clone(),
        all_strict: t.all_strict,
        opt_p,
        cost_p,
        opt_compiled: o.opt,
        cost_compiled: o.cost,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeLemmaReport {
    pub k: usize,
    pub shape: String,
    pub num_constraints: usize,
    pub max_satisfied: usize,
    /// Smallest best count over inputs with the root set to the clause value.
    pub min_extension_with_root_as_clause: usize,
    /// Best count for the all-false input with the root forced true.
    pub falsified_root_true_max: usize,
}

/// Checks the counting statements of the tree lemma with the root kept as a
/// variable: `3(k−1)` constraints, at most `2(k−1)` satisfiable, every input
/// reaches `2(k−1)` with root = clause value, and the falsified input with a
/// true root reaches exactly `2(k−2)`.
pub fn check_tree_lemma(shape: &TreeShape) -> Result<TreeLemmaReport, VerifyError> {
    let k = shape.num_leaves();
    if !(2..=12).contains(&k) {
        return Err(VerifyError::TooLarge { vars: k, bound: 12 });
    }
    let (p, root) = tree_with_root_variable(shape, &Rational::one());
    let form = IntegerForm::new(&p).expect("unit weights");
    let num_aux = k - 2;
    let root_bit = 1u64 << (root - 1);
    let best_with_root = |x: u64, root_val: bool| -> i64 {
        (0u64..1 << num_aux)
            .map(|b| form.value(x | b << k | if root_val { root_bit } else { 0 }))
            .max()
            .unwrap_or(0)
    };
    let per_x: Vec<(i64, i64)> = (0u64..1 << k)
        .into_par_iter()
        .map(|x| {
            let (a, b) = (best_with_root(x, false), best_with_root(x, true));
            let as_clause = if x != 0 { b } else { a };
            (a.max(b), as_clause)
        })
        .collect();
    let report = TreeLemmaReport {
        k,
        shape: shape.to_string(),
        num_constraints: p.len(),
        max_satisfied: per_x.iter().map(|v| v.0).max().unwrap_or(0) as usize,
        min_extension_with_root_as_clause: per_x.iter().map(|v| v.1).min().unwrap_or(0) as usize,
        falsified_root_true_max: best_with_root(0, true) as usize,
    };
    let fail = |what: String| {
        Err(VerifyError::TreeLemma {
            shape: shape.to_string(),
            what,
        })
    };
    if report.num_constraints != 3 * (k - 1) {
        return fail(format!(
            "{} constraints, expected {}",
            report.num_constraints,
            3 * (k - 1)
        ));
    }
    if report.max_satisfied != 2 * (k - 1) {
        return fail(format!(
            "max satisfied {}, expected {}",
            report.max_satisfied,
            2 * (k - 1)
        ));
    }
    if report.min_extension_with_root_as_clause != 2 * (k - 1) {
        return fail(format!(
            "some input only reaches {} with root = clause value",
            report.min_extension_with_root_as_clause
        ));
    }
    if report.falsified_root_true_max != 2 * (k - 2) {
        return fail(format!(
            "falsified input with true root reaches {}, expected {}",
            report.falsified_root_true_max,
            2 * (k - 2)
        ));
    }
    Ok(report)
}

/// Geometric cooling schedule. Temperatures left as `None` are derived from
/// the coefficient magnitudes of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub sweeps: usize,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            sweeps: 1000,
            t_start: None,
            t_end: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealResult {
    /// Exact objective of the best state visited.
    pub best_value: Rational,
    pub best_assignment: Assignment,
    /// Energy of the current state after each sweep.
    pub trace: Vec<f64>,
}

/// Minimizes a QUBO with single-flip Metropolis moves.
pub fn anneal_qubo(q: &QuboModel, schedule: &Schedule, seed: u64) -> AnnealResult {
    let n = q.num_vars as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 0 {
        return AnnealResult {
            best_value: q.offset.clone(),
            best_assignment: Assignment(vec![]),
            trace: vec![],
        };
    }
    let mut lin = vec![0.0f64; n];
    let mut nbrs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (&i, a) in &q.linear {
        lin[i as usize - 1] = a.to_f64();
    }
    for (&(i, j), b) in &q.quadratic {
        let (i, j, b) = (i as usize - 1, j as usize - 1, b.to_f64());
        nbrs[i].push((j, b));
        nbrs[j].push((i, b));
    }
    let mags: Vec<f64> = lin
        .iter()
        .copied()
        .chain(nbrs.iter().flatten().map(|&(_, b)| b))
        .map(f64::abs)
        .filter(|&m| m > 0.0)
        .collect();
    let max_mag = mags.iter().copied().fold(0.0, f64::max).max(1e-9);
    let min_mag = mags
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .min(max_mag);
    let t0 = schedule.t_start.unwrap_or(2.0 * max_mag);
    let t1 = schedule.t_end.unwrap_or(0.02 * min_mag).min(t0);
    let sweeps = schedule.sweeps.max(1);
    let ratio = if sweeps > 1 {
        (t1 / t0).powf(1.0 / (sweeps - 1) as f64)
    } else {
        1.0
    };

    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let field = |x: &[bool], i: usize| -> f64 {
        lin[i]
            + nbrs[i]
                .iter()
                .filter(|(j, _)| x[*j])
                .map(|(_, b)| b)
                .sum::<f64>()
    };
    let mut energy: f64 = (0..n)
        .filter(|&i| x[i])
        .map(|i| {
            lin[i]
                + nbrs[i]
                    .iter()
                    .filter(|(j, _)| *j > i && x[*j])
                    .map(|(_, b)| b)
                    .sum::<f64>()
        })
        .sum();
    let mut best_e = energy;
    let mut best_x = x.clone();
    let mut trace = Vec::with_capacity(sweeps);
    let mut t = t0;
    for _ in 0..sweeps {
        for i in 0..n {
            let f = field(&x, i);
            let delta = if x[i] { -f } else { f };
            if delta <= 0.0 || rng.gen::<f64>() < (-delta / t).exp() {
                x[i] = !x[i];
                energy += delta;
                if energy < best_e - 1e-12 {
                    best_e = energy;
                    best_x.clone_from(&x);
                }
            }
        }
        trace.push(energy);
        t *= ratio;
    }
    // Greedy descent from the best state found.
    let mut x = best_x;
    loop {
        let mut improved = false;
        for i in 0..n {
            let f = field(&x, i);
            let delta = if x[i] { -f } else { f };
            if delta < -1e-12 {
                x[i] = !x[i];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let best_assignment = Assignment(x);
    AnnealResult {
        best_value: q.value_bits(best_assignment.to_bits()),
        best_assignment,
        trace,
    }
}

/// Minimizes the falsified weight `Ī(P)`.
pub fn anneal_solve(p: &Max2XorProblem, schedule: &Schedule, seed: u64) -> AnnealResult {
    let q = max2xor_to_qubo(p);
    let mut res = anneal_qubo(&q, schedule, seed);
    res.best_assignment.0.resize(p.num_vars as usize, false);
    let e = p
        .evaluate(&res.best_assignment)
        .expect("assignment covers the problem");
    res.best_value = e.falsified;
    res
}

/// Minimizes the Ising energy (offset included).
pub fn anneal_solve_ising(m: &IsingModel, schedule: &Schedule, seed: u64) -> AnnealResult {
    let q = ising_to_qubo(m);
    let mut res = anneal_qubo(&q, schedule, seed);
    res.best_assignment.0.resize(m.num_vars as usize, false);
    res.best_value = m.energy_bits(res.best_assignment.to_bits());
    res
}

/// Catalog entry: declared parameters next to the certificate.
pub fn certificate_json(app: &GadgetApplication, cert: &GadgetCertificate) -> Value {
    json!({
        "name": app.params.name,
        "declared": app.params,
        "paper_claimed": app.paper_claimed,
        "certified": {
            "alpha": cert.alpha.to_string(),
            "beta": cert.beta.to_string(),
            "strict": cert.strict,
            "strict_some": cert.strict_some,
            "gap": cert.gap.to_string(),
            "delta_e": cert.delta_e.as_ref().map(|d| d.to_string()),
            "summary": cert.summary(),
        },
        "constraints": app.constraints.to_json(),
        "clause_vars": app.clause_vars,
        "aux_vars": app.aux_vars,
        "per_assignment": cert.per_assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{
        bian_equivalence_template, chancellor_template, clique_template, direct_template,
        nusslein_template, tree_template, GadgetKind,
    };

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn direct_and_chancellor() {
        let app = direct_template().on_positive_clause();
        let c = certify_gadget(&app, &Clause::positive(2)).unwrap();
        assert_eq!(
            (c.alpha.clone(), c.beta.clone(), c.strict),
            (r(1, 1), r(3, 2), true)
        );
        assert_eq!(c.delta_e, Some(r(4, 1)));
        assert_eq!(c.summary(), "(1,3/2)-gadget, ΔE=4");
        let c = certify_gadget(
            &chancellor_template().on_positive_clause(),
            &Clause::positive(3),
        )
        .unwrap();
        assert_eq!(
            (c.alpha, c.beta, c.strict, c.delta_e),
            (r(3, 1), r(5, 1), true, Some(r(4, 1)))
        );
    }

    #[test]
    fn nusslein_certified_alpha_differs_from_caption() {
        let t = nusslein_template();
        let c = certify_gadget(&t.on_positive_clause(), &Clause::positive(3)).unwrap();
        assert_eq!(
            (c.beta.clone(), c.delta_e.clone(), c.gap.clone()),
            (r(9, 2), Some(r(2, 1)), r(1, 1))
        );
        assert_eq!(c.alpha, r(3, 1));
        assert_eq!(c.paper_claimed.unwrap().alpha, r(5, 2));
    }

    #[test]
    fn bian_equivalence_is_non_strict() {
        let t = bian_equivalence_template();
        let c = certify_source(&t.problem(), 3, 0, |x| {
            ((x & 1 == 1) || (x & 2 == 2)) == (x & 4 == 4)
        })
        .unwrap();
        assert_eq!(
            (c.alpha.clone(), c.beta.clone(), c.delta_e.clone()),
            (r(3, 1), r(9, 2), Some(r(2, 1)))
        );
        assert!(!c.strict);
        assert!(c.strict_some);
    }

    #[test]
    fn negated_clause_certifies_like_positive() {
        let clause = Clause::from_dimacs(&[-2, 5, -7]);
        let app = GadgetKind::TreeComb.apply(&clause, 8).unwrap();
        let c = certify_gadget(&app, &clause).unwrap();
        assert_eq!((c.alpha, c.beta), (r(2, 1), r(3, 1)));
        assert!(matches!(
            certify_gadget(&app, &Clause::positive(3)),
            Err(VerifyError::ClauseMismatch)
        ));
    }

    #[test]
    fn non_gadget_is_rejected() {
        let p = Max2XorProblem::from_constraints(
            2,
            vec![crate::max2xor::XorConstraint::unary(1, true, r(1, 1))],
        );
        let err = certify_source(&p, 2, 0, |x| x != 0).unwrap_err();
        assert!(matches!(err, VerifyError::UnequalSatisfying { .. }));
    }

    #[test]
    fn clique_and_tree_small() {
        let c = certify_gadget(
            &clique_template(4).unwrap().on_positive_clause(),
            &Clause::positive(4),
        )
        .unwrap();
        assert_eq!(
            (c.alpha, c.beta, c.delta_e),
            (r(6, 1), r(10, 1), Some(r(2, 1)))
        );
        let t = tree_template(&TreeShape::balanced(5)).unwrap();
        let c = certify_gadget(&t.on_positive_clause(), &Clause::positive(5)).unwrap();
        assert_eq!((c.alpha, c.beta, c.strict), (r(4, 1), r(6, 1), true));
    }

    #[test]
    fn opt_cost_examples() {
        let f = CnfFormula::new(3, vec![Clause::positive(3)]);
        let rep = check_opt_cost_relation(&f, &Strategy::default()).unwrap();
        assert_eq!(rep.cost_compiled, r(1, 1));
        assert!(rep.all_hold());

        let f = CnfFormula::new(
            1,
            vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[-1])],
        );
        let rep = check_opt_cost_relation(&f, &Strategy::default()).unwrap();
        assert_eq!(rep.cost_compiled, r(1, 1));
        assert!(!rep.satisfiable && rep.predicted_unsat && rep.all_hold());
    }

    #[test]
    fn tree_lemma_small() {
        let rep = check_tree_lemma(&TreeShape::comb(2)).unwrap();
        assert_eq!((rep.num_constraints, rep.max_satisfied), (3, 2));
        let rep = check_tree_lemma(&TreeShape::balanced(7)).unwrap();
        assert_eq!((rep.num_constraints, rep.max_satisfied), (18, 12));
        check_tree_lemma(&TreeShape::parse("((1 2)(3 4))").unwrap()).unwrap();
    }

    #[test]
    fn annealing_is_deterministic_and_exact() {
        let f = CnfFormula::new(
            4,
            vec![
                Clause::from_dimacs(&[1, 2, -3]),
                Clause::from_dimacs(&[-1, 3, 4]),
                Clause::from_dimacs(&[-2, -4, 3]),
            ],
        );
        let p = compile_cnf(&f, &Strategy::default()).unwrap().problem;
        let a = anneal_solve(&p, &Schedule::default(), 7);
        let b = anneal_solve(&p, &Schedule::default(), 7);
        assert_eq!(a, b);
        let exact = p.exhaustive_opt().unwrap();
        assert_eq!(a.best_value, exact.cost);
        assert_eq!(
            anneal_solve(&Max2XorProblem::new(0), &Schedule::default(), 1).best_value,
            r(0, 1)
        );
    }
}
