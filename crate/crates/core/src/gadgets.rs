//! Clause gadgets: SAT clauses to weighted Max2XOR constraint sets.
//!
//! Every gadget is first built over local variables, with clause positions
//! `1..=k` followed by auxiliaries `k+1..`, and then instantiated on a
//! concrete clause. Negated literals are handled by flipping the parity.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::convert::energy_gap_max2xor;
use crate::formula::{Clause, CnfFormula, Literal};
use crate::max2xor::{Max2XorProblem, Scope, XorConstraint};
use crate::rational::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn half() -> Rational {
    r(1, 2)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget `{name}` does not accept clauses of width {width}")]
    Width { name: String, width: usize },
    #[error("tree shape has {leaves} leaves but the clause has width {width}")]
    ShapeMismatch { leaves: usize, width: usize },
    #[error("invalid tree shape `{0}`")]
    ShapeSyntax(String),
    #[error("unknown gadget `{0}`")]
    UnknownGadget(String),
    #[error("invalid strategy `{0}`")]
    Strategy(String),
    #[error("no gadget selected for clause width {0}")]
    NoGadgetForWidth(usize),
    #[error("cannot compose `{left}` (target {produces}) with `{right}` (source {consumes})")]
    FamilyMismatch {
        left: String,
        produces: String,
        right: String,
        consumes: String,
    },
    #[error("naive expansion bound {bound} exceeded by width {width}")]
    NaiveBound { width: usize, bound: usize },
}

/// Declared or certified parameters of a gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetParams {
    pub name: String,
    pub alpha: Rational,
    pub beta: Rational,
    /// `None` when the gadget does not target Max2XOR.
    pub delta_e: Option<Rational>,
    pub num_aux: u32,
    pub strict: bool,
    /// Family of the source constraint, e.g. `3SAT`.
    pub source: String,
    /// Family of the produced constraints, e.g. `Max2XOR`.
    pub target: String,
}

impl GadgetParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        alpha: Rational,
        beta: Rational,
        delta_e: Option<Rational>,
        num_aux: u32,
        strict: bool,
        source: &str,
        target: &str,
    ) -> Self {
        GadgetParams {
            name: name.to_string(),
            alpha,
            beta,
            delta_e,
            num_aux,
            strict,
            source: source.to_string(),
            target: target.to_string(),
        }
    }

    /// The same gadget with `c` extra weight that every assignment satisfies.
    pub fn lifted(&self, c: &Rational) -> Self {
        GadgetParams {
            name: format!("{}+{}", self.name, c),
            alpha: &self.alpha + c,
            beta: &self.beta + c,
            ..self.clone()
        }
    }

    /// `(α,β)-gadget, ΔE=…` in caption style.
    pub fn summary(&self) -> String {
        let strict = if self.strict { "" } else { "non-strict " };
        match &self.delta_e {
            Some(d) => format!("{strict}({},{})-gadget, ΔE={d}", self.alpha, self.beta),
            None => format!("{strict}({},{})-gadget", self.alpha, self.beta),
        }
    }
}

/// Sequential composition: every constraint produced by `g1` is replaced by
/// a `g2` gadget. `ΔE` and the auxiliary count are left to the instance.
pub fn compose_params(g1: &GadgetParams, g2: &GadgetParams) -> Result<GadgetParams, GadgetError> {
    if g1.target != g2.source {
        return Err(GadgetError::FamilyMismatch {
            left: g1.name.clone(),
            produces: g1.target.clone(),
            right: g2.name.clone(),
            consumes: g2.source.clone(),
        });
    }
    Ok(GadgetParams {
        name: format!("{}∘{}", g1.name, g2.name),
        alpha: &g1.beta * (&g2.alpha - Rational::one()) + &g1.alpha,
        beta: &g1.beta * &g2.beta,
        delta_e: None,
        num_aux: 0,
        strict: g1.strict && g2.strict,
        source: g1.source.clone(),
        target: g2.target.clone(),
    })
}

/// Composition where each unit-weight output constraint of `outer` gets its
/// own inner gadget. Requires one inner gadget per output constraint.
pub fn compose_params_mixed(outer: &GadgetParams, inner: &[GadgetParams]) -> GadgetParams {
    assert_eq!(
        Rational::from(inner.len()),
        outer.beta,
        "one inner gadget per unit-weight outer constraint"
    );
    let one = Rational::one();
    GadgetParams {
        name: format!(
            "{}∘[{}]",
            outer.name,
            inner
                .iter()
                .map(|g| g.name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ),
        alpha: inner.iter().map(|g| &g.alpha - &one).sum::<Rational>() + &outer.alpha,
        beta: inner.iter().map(|g| &g.beta).sum(),
        delta_e: None,
        num_aux: 0,
        strict: outer.strict && inner.iter().all(|g| g.strict),
        source: outer.source.clone(),
        target: inner.first().map(|g| g.target.clone()).unwrap_or_default(),
    }
}

/// A gadget over local variables: positions `1..=k`, then `num_aux` auxiliaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub k: usize,
    pub num_aux: u32,
    pub constraints: Vec<XorConstraint>,
    pub params: GadgetParams,
    /// Parameters stated in the literature when they differ from `params`.
    pub paper_claimed: Option<GadgetParams>,
}

impl GadgetTemplate {
    pub fn problem(&self) -> Max2XorProblem {
        Max2XorProblem::from_constraints(self.k as u32 + self.num_aux, self.constraints.clone())
    }

    /// Instantiates on `clause`, numbering auxiliaries from `first_aux`.
    pub fn instantiate(
        &self,
        clause: &Clause,
        first_aux: u32,
    ) -> Result<GadgetApplication, GadgetError> {
        if clause.width() != self.k {
            return Err(GadgetError::Width {
                name: self.params.name.clone(),
                width: clause.width(),
            });
        }
        let k = self.k as u32;
        let lit = |local: u32| -> Literal {
            if local <= k {
                clause.literals[local as usize - 1]
            } else {
                Literal::pos(first_aux + local - k - 1)
            }
        };
        let lit_constraints: Vec<LitXorConstraint> = self
            .constraints
            .iter()
            .map(|c| LitXorConstraint {
                lits: c.scope.vars().into_iter().map(lit).collect(),
                rhs: c.rhs,
                weight: c.weight.clone(),
            })
            .collect();
        let aux_vars: Vec<u32> = (0..self.num_aux).map(|j| first_aux + j).collect();
        let num_vars = clause
            .vars()
            .into_iter()
            .chain(aux_vars.iter().copied())
            .max()
            .unwrap_or(0);
        Ok(GadgetApplication {
            constraints: Max2XorProblem::from_constraints(
                num_vars,
                rewrite_negations(&lit_constraints),
            ),
            clause_vars: clause.vars(),
            aux_vars,
            params: self.params.clone(),
            paper_claimed: self.paper_claimed.clone(),
        })
    }

    /// Instantiates on the positive clause `x1 ∨ … ∨ xk`.
    pub fn on_positive_clause(&self) -> GadgetApplication {
        self.instantiate(&Clause::positive(self.k as u32), self.k as u32 + 1)
            .expect("width matches by construction")
    }
}

/// One gadget applied to one clause of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetApplication {
    pub constraints: Max2XorProblem,
    pub clause_vars: Vec<u32>,
    pub aux_vars: Vec<u32>,
    pub params: GadgetParams,
    pub paper_claimed: Option<GadgetParams>,
}

/// An XOR constraint whose scope may contain negated literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LitXorConstraint {
    pub lits: Vec<Literal>,
    pub rhs: bool,
    pub weight: Rational,
}

/// `¬x ⊕ C = k` becomes `x ⊕ C = 1 − k`, once per negated literal.
pub fn rewrite_negations(constraints: &[LitXorConstraint]) -> Vec<XorConstraint> {
    constraints
        .iter()
        .map(|c| {
            let flips = c.lits.iter().filter(|l| l.negated).count() % 2 == 1;
            let scope = match c.lits.as_slice() {
                [a] => Scope::Unary(a.var),
                [a, b] => Scope::pair(a.var, b.var),
                _ => panic!("scope must have one or two literals"),
            };
            XorConstraint::new(scope, c.rhs ^ flips, c.weight.clone())
        })
        .collect()
}

fn max2xor(
    name: &str,
    a: Rational,
    b: Rational,
    de: Rational,
    aux: u32,
    src: &str,
) -> GadgetParams {
    GadgetParams::new(name, a, b, Some(de), aux, true, src, "Max2XOR")
}

/// `{1: x=1}`.
pub fn unit_template() -> GadgetTemplate {
    GadgetTemplate {
        k: 1,
        num_aux: 0,
        constraints: vec![XorConstraint::unary(1, true, Rational::one())],
        params: max2xor("unit", r(1, 1), r(1, 1), r(2, 1), 0, "1SAT"),
        paper_claimed: None,
    }
}

/// The half-weight triangle for a binary clause.
pub fn direct_template() -> GadgetTemplate {
    GadgetTemplate {
        k: 2,
        num_aux: 0,
        constraints: vec![
            XorConstraint::unary(1, true, half()),
            XorConstraint::unary(2, true, half()),
            XorConstraint::pair(1, 2, true, half()),
        ],
        params: max2xor("direct", r(1, 1), r(3, 2), r(4, 1), 0, "2SAT"),
        paper_claimed: None,
    }
}

/// Unit or binary clause gadget.
pub fn gadget_direct(clause: &Clause, first_aux: u32) -> Result<GadgetApplication, GadgetError> {
    match clause.width() {
        1 => unit_template().instantiate(clause, first_aux),
        2 => direct_template().instantiate(clause, first_aux),
        w => Err(GadgetError::Width {
            name: "direct".into(),
            width: w,
        }),
    }
}

/// A parity constraint of any arity with right-hand side 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveXor {
    pub vars: Vec<u32>,
    pub weight: Rational,
}

/// Exponential expansion of `x1 ∨ … ∨ xk`: one `⊕S = 1` of weight
/// `2^(1−k)` for every non-empty `S`. Oracle use only.
pub fn gadget_naive_xor(k: usize, bound: usize) -> Result<Vec<NaiveXor>, GadgetError> {
    if k == 0 || k > bound || k > 62 {
        return Err(GadgetError::NaiveBound { width: k, bound });
    }
    let w = r(1, 1i64 << (k - 1));
    Ok((1u64..1 << k)
        .map(|s| NaiveXor {
            vars: (0..k as u32)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
            weight: w.clone(),
        })
        .collect())
}

pub fn naive_xor_value(constraints: &[NaiveXor], bits: u64) -> Rational {
    constraints
        .iter()
        .filter(|c| c.vars.iter().filter(|&&v| bits >> (v - 1) & 1 == 1).count() % 2 == 1)
        .map(|c| &c.weight)
        .sum()
}

/// The chain `x1∨x2∨b1, ¬b1∨x3∨b2, …, ¬b_{k−3}∨x_{k−1}∨x_k`.
pub fn gadget_ksat_to_3sat(
    clause: &Clause,
    first_aux: u32,
) -> Result<(Vec<Clause>, Vec<u32>, GadgetParams), GadgetError> {
    let k = clause.width();
    if k < 4 {
        return Err(GadgetError::Width {
            name: "ksat-to-3sat".into(),
            width: k,
        });
    }
    let l = &clause.literals;
    let aux: Vec<u32> = (0..k as u32 - 3).map(|j| first_aux + j).collect();
    let mut out = vec![Clause::new(vec![l[0], l[1], Literal::pos(aux[0])])];
    for i in 1..k - 3 {
        out.push(Clause::new(vec![
            Literal::neg(aux[i - 1]),
            l[i + 1],
            Literal::pos(aux[i]),
        ]));
    }
    out.push(Clause::new(vec![
        Literal::neg(aux[k - 4]),
        l[k - 2],
        l[k - 1],
    ]));
    let n = Rational::from(k - 2);
    let params = GadgetParams::new(
        "ksat-to-3sat",
        n.clone(),
        n,
        None,
        k as u32 - 3,
        true,
        "kSAT",
        "3SAT",
    );
    Ok((out, aux, params))
}

/// Weighted Max2SAT clauses of the classical 3SAT gadget, `b` = variable 4.
pub fn trevisan_max2sat() -> (Vec<(Rational, Clause)>, GadgetParams) {
    let c = |lits: &[i64]| Clause::from_dimacs(lits);
    let clauses = vec![
        (half(), c(&[1, 3])),
        (half(), c(&[-1, -3])),
        (half(), c(&[1, -4])),
        (half(), c(&[-1, 4])),
        (half(), c(&[3, -4])),
        (half(), c(&[-3, 4])),
        (Rational::one(), c(&[2, 4])),
    ];
    let params = GadgetParams::new(
        "trevisan-max2sat",
        r(7, 2),
        r(4, 1),
        None,
        1,
        true,
        "3SAT",
        "2SAT",
    );
    (clauses, params)
}

/// The classical Max2SAT gadget pushed through the binary-clause gadget and
/// simplified; the cancelled weight is dropped.
pub fn trevisan_template() -> GadgetTemplate {
    let (clauses, _) = trevisan_max2sat();
    let mut raw = Max2XorProblem::new(4);
    for (w, c) in &clauses {
        let app = direct_template().instantiate(c, 5).expect("binary clause");
        raw.extend(&app.constraints.scaled(w));
    }
    let mut s = raw.simplify();
    s.offset = Rational::zero();
    GadgetTemplate {
        k: 3,
        num_aux: 1,
        constraints: s.constraints,
        params: max2xor("trevisan", r(2, 1), r(3, 1), r(4, 1), 1, "3SAT"),
        paper_claimed: None,
    }
}

pub fn nusslein_template() -> GadgetTemplate {
    let one = Rational::one;
    GadgetTemplate {
        k: 3,
        num_aux: 1,
        constraints: vec![
            XorConstraint::pair(1, 2, true, one()),
            XorConstraint::pair(1, 4, false, one()),
            XorConstraint::pair(2, 4, false, one()),
            XorConstraint::pair(3, 4, true, half()),
            XorConstraint::unary(3, true, half()),
            XorConstraint::unary(4, true, half()),
        ],
        params: max2xor("nusslein", r(3, 1), r(9, 2), r(2, 1), 1, "3SAT"),
        paper_claimed: Some(max2xor("nusslein", r(5, 2), r(9, 2), r(2, 1), 1, "3SAT")),
    }
}

pub fn chancellor_template() -> GadgetTemplate {
    let mut constraints = Vec::new();
    for (u, v) in [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)] {
        constraints.push(XorConstraint::pair(u, v, true, half()));
    }
    for v in 1..=4 {
        constraints.push(XorConstraint::unary(v, true, half()));
    }
    GadgetTemplate {
        k: 3,
        num_aux: 1,
        constraints,
        params: max2xor("chancellor", r(3, 1), r(5, 1), r(4, 1), 1, "3SAT"),
        paper_claimed: None,
    }
}

/// The equivalence `x1 ∨ x2 ↔ x3` as Max2XOR. It has no auxiliaries; its
/// source constraint is the equivalence itself.
pub fn bian_equivalence_template() -> GadgetTemplate {
    let one = Rational::one;
    GadgetTemplate {
        k: 3,
        num_aux: 0,
        constraints: vec![
            XorConstraint::unary(1, false, half()),
            XorConstraint::unary(2, false, half()),
            XorConstraint::unary(3, true, one()),
            XorConstraint::pair(1, 2, true, half()),
            XorConstraint::pair(1, 3, false, one()),
            XorConstraint::pair(2, 3, false, one()),
        ],
        params: GadgetParams::new(
            "bian-equivalence",
            r(3, 1),
            r(9, 2),
            Some(r(2, 1)),
            0,
            false,
            "OR-EQ",
            "Max2XOR",
        ),
        paper_claimed: None,
    }
}

/// Tseitin split `x1∨x2∨x3 → {x1∨x2 ↔ b, b∨x3}`.
pub fn tseitin_params() -> GadgetParams {
    GadgetParams::new(
        "tseitin",
        r(2, 1),
        r(2, 1),
        None,
        1,
        true,
        "3SAT",
        "OR-EQ+2SAT",
    )
}

/// The Tseitin split with the equivalence gadget and the binary-clause gadget.
pub fn bian_tseitin_template() -> GadgetTemplate {
    let mut p = bian_equivalence_template().problem();
    p.num_vars = 4;
    // The equivalence gadget's third position is the auxiliary b = 4.
    let mut p = p.relabel(4, |v| if v == 3 { 4 } else { v });
    let tail = direct_template()
        .instantiate(&Clause::from_dimacs(&[4, 3]), 5)
        .expect("binary clause");
    p.extend(&tail.constraints);
    let s = p.simplify();
    GadgetTemplate {
        k: 3,
        num_aux: 1,
        constraints: s.constraints,
        params: max2xor("bian-tseitin", r(4, 1), r(6, 1), r(4, 3), 1, "3SAT"),
        paper_claimed: Some(max2xor(
            "bian-tseitin",
            r(4, 1),
            r(6, 1),
            r(1, 1),
            1,
            "3SAT",
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    Trevisan,
    Nusslein,
    Chancellor,
    BianTseitin,
}

impl ReferenceKind {
    pub const ALL: [ReferenceKind; 4] = [
        ReferenceKind::Trevisan,
        ReferenceKind::Nusslein,
        ReferenceKind::Chancellor,
        ReferenceKind::BianTseitin,
    ];

    pub fn template(self) -> GadgetTemplate {
        match self {
            ReferenceKind::Trevisan => trevisan_template(),
            ReferenceKind::Nusslein => nusslein_template(),
            ReferenceKind::Chancellor => chancellor_template(),
            ReferenceKind::BianTseitin => bian_tseitin_template(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReferenceKind::Trevisan => "trevisan",
            ReferenceKind::Nusslein => "nusslein",
            ReferenceKind::Chancellor => "chancellor",
            ReferenceKind::BianTseitin => "bian-tseitin",
        }
    }
}

pub fn gadget_reference(
    clause: &Clause,
    kind: ReferenceKind,
    first_aux: u32,
) -> Result<GadgetApplication, GadgetError> {
    kind.template().instantiate(clause, first_aux)
}

/// Binary tree over clause positions `1..=k`, leaves in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeShape {
    Leaf(usize),
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    fn node(l: TreeShape, r: TreeShape) -> Self {
        TreeShape::Node(Box::new(l), Box::new(r))
    }

    /// `((…((1 2) 3) …) k)`.
    pub fn comb(k: usize) -> Self {
        assert!(k >= 1);
        (2..=k).fold(TreeShape::Leaf(1), |acc, i| {
            TreeShape::node(acc, TreeShape::Leaf(i))
        })
    }

    /// Splits each range with the larger half on the left.
    pub fn balanced(k: usize) -> Self {
        assert!(k >= 1);
        fn build(lo: usize, hi: usize) -> TreeShape {
            if lo == hi {
                return TreeShape::Leaf(lo);
            }
            let left_len = (hi - lo + 1).div_ceil(2);
            TreeShape::node(build(lo, lo + left_len - 1), build(lo + left_len, hi))
        }
        build(1, k)
    }

    /// Uniformly random split points at every node.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        assert!(k >= 1);
        fn build<R: Rng + ?Sized>(lo: usize, hi: usize, rng: &mut R) -> TreeShape {
            if lo == hi {
                return TreeShape::Leaf(lo);
            }
            let split = rng.gen_range(lo..hi);
            let left = build(lo, split, rng);
            TreeShape::node(left, build(split + 1, hi, rng))
        }
        build(1, k, rng)
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            TreeShape::Leaf(_) => 1,
            TreeShape::Node(l, r) => l.num_leaves() + r.num_leaves(),
        }
    }

    fn leaves_into(&self, out: &mut Vec<usize>) {
        match self {
            TreeShape::Leaf(i) => out.push(*i),
            TreeShape::Node(l, r) => {
                l.leaves_into(out);
                r.leaves_into(out);
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.leaves_into(&mut v);
        v
    }

    pub fn height(&self) -> usize {
        match self {
            TreeShape::Leaf(_) => 0,
            TreeShape::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    /// Parses the parenthesized form, e.g. `((1 2)(3 4))`.
    pub fn parse(text: &str) -> Result<Self, GadgetError> {
        let err = || GadgetError::ShapeSyntax(text.to_string());
        let mut tokens = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                '(' | ')' => {
                    tokens.push(c.to_string());
                    chars.next();
                }
                c if c.is_whitespace() || c == ',' => {
                    chars.next();
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                        s.push(d);
                        chars.next();
                    }
                    tokens.push(s);
                }
                _ => return Err(err()),
            }
        }
        fn parse_at(tokens: &[String], pos: &mut usize) -> Option<TreeShape> {
            let t = tokens.get(*pos)?;
            *pos += 1;
            if t == "(" {
                let l = parse_at(tokens, pos)?;
                let r = parse_at(tokens, pos)?;
                if tokens.get(*pos)? != ")" {
                    return None;
                }
                *pos += 1;
                Some(TreeShape::node(l, r))
            } else if t == ")" {
                None
            } else {
                t.parse().ok().filter(|&i| i >= 1).map(TreeShape::Leaf)
            }
        }
        let mut pos = 0;
        let shape = parse_at(&tokens, &mut pos).ok_or_else(err)?;
        if pos != tokens.len() {
            return Err(err());
        }
        let leaves = shape.leaves();
        if leaves.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return Err(err());
        }
        Ok(shape)
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeShape::Leaf(i) => write!(f, "{i}"),
            TreeShape::Node(l, r) => {
                let sep =
                    if matches!(**l, TreeShape::Node(..)) && matches!(**r, TreeShape::Node(..)) {
                        ""
                    } else {
                        " "
                    };
                write!(f, "({l}{sep}{r})")
            }
        }
    }
}

impl FromStr for TreeShape {
    type Err = GadgetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TreeShape::parse(s)
    }
}

/// Tree gadget over local variables. Internal nodes other than the root get
/// auxiliaries numbered by height, then left to right; the root is `1̂`.
pub fn tree_template(shape: &TreeShape) -> Result<GadgetTemplate, GadgetError> {
    let k = shape.num_leaves();
    if k < 2 {
        return Err(GadgetError::Width {
            name: "tree".into(),
            width: k,
        });
    }
    let constraints = tree_constraints(shape, &half(), None);
    let km1 = Rational::from(k - 1);
    Ok(GadgetTemplate {
        k,
        num_aux: k as u32 - 2,
        constraints,
        params: max2xor(
            "tree",
            km1.clone(),
            km1 * r(3, 2),
            r(4, 1),
            k as u32 - 2,
            "kSAT",
        ),
        paper_claimed: None,
    })
}

/// The tree triangles with the root kept as variable `2k − 1` instead of
/// the constant `1̂`. Returns the problem and the root variable.
pub fn tree_with_root_variable(shape: &TreeShape, weight: &Rational) -> (Max2XorProblem, u32) {
    let k = shape.num_leaves() as u32;
    assert!(k >= 2, "tree needs at least two leaves");
    let root = 2 * k - 1;
    let p = Max2XorProblem::from_constraints(root, tree_constraints(shape, weight, Some(root)));
    (p, root)
}

fn tree_constraints(shape: &TreeShape, w: &Rational, root_var: Option<u32>) -> Vec<XorConstraint> {
    let k = shape.num_leaves();
    // Collect internal nodes as (height, preorder index) to assign aux ids.
    struct Internal<'a> {
        height: usize,
        order: usize,
        node: &'a TreeShape,
    }
    fn collect<'a>(t: &'a TreeShape, out: &mut Vec<Internal<'a>>) {
        if let TreeShape::Node(l, r) = t {
            collect(l, out);
            let order = out.len();
            out.push(Internal {
                height: t.height(),
                order,
                node: t,
            });
            collect(r, out);
        }
    }
    let mut internals = Vec::new();
    collect(shape, &mut internals);
    let root_ptr = shape as *const TreeShape;
    let mut non_root: Vec<&Internal> = internals
        .iter()
        .filter(|n| !std::ptr::eq(n.node, root_ptr))
        .collect();
    non_root.sort_by_key(|n| (n.height, n.order));
    let aux_of = |t: &TreeShape| -> u32 {
        let idx = non_root
            .iter()
            .position(|n| std::ptr::eq(n.node, t))
            .expect("non-root internal node");
        k as u32 + 1 + idx as u32
    };
    let rep = |t: &TreeShape| -> u32 {
        match t {
            TreeShape::Leaf(i) => *i as u32,
            node => aux_of(node),
        }
    };

    let mut constraints = Vec::new();
    for n in &internals {
        let TreeShape::Node(l, rr) = n.node else {
            unreachable!()
        };
        let (a, b) = (rep(l), rep(rr));
        constraints.push(XorConstraint::pair(a, b, true, w.clone()));
        let out = if std::ptr::eq(n.node, root_ptr) {
            root_var
        } else {
            Some(aux_of(n.node))
        };
        match out {
            Some(o) => {
                constraints.push(XorConstraint::pair(a, o, false, w.clone()));
                constraints.push(XorConstraint::pair(b, o, false, w.clone()));
            }
            None => {
                constraints.push(XorConstraint::unary(a, true, w.clone()));
                constraints.push(XorConstraint::unary(b, true, w.clone()));
            }
        }
    }
    constraints
}

pub fn gadget_tree(
    clause: &Clause,
    shape: &TreeShape,
    first_aux: u32,
) -> Result<GadgetApplication, GadgetError> {
    if shape.num_leaves() != clause.width() {
        return Err(GadgetError::ShapeMismatch {
            leaves: shape.num_leaves(),
            width: clause.width(),
        });
    }
    tree_template(shape)?.instantiate(clause, first_aux)
}

/// Clique-like gadget for `k` a power of two (`k ≥ 4`) or `k = 5`.
pub fn clique_template(k: usize) -> Result<GadgetTemplate, GadgetError> {
    let kk = k as u32;
    let mut constraints = Vec::new();
    let x_pairs = |cs: &mut Vec<XorConstraint>| {
        for i in 1..=kk {
            cs.push(XorConstraint::unary(i, true, half()));
        }
        for i in 1..=kk {
            for j in i + 1..=kk {
                cs.push(XorConstraint::pair(i, j, true, half()));
            }
        }
    };
    if k == 5 {
        let (b1, b2) = (6, 7);
        x_pairs(&mut constraints);
        constraints.push(XorConstraint::unary(b1, true, r(2, 3)));
        constraints.push(XorConstraint::unary(b2, true, r(5, 6)));
        for i in 1..=5 {
            constraints.push(XorConstraint::pair(i, b1, true, r(5, 6)));
            constraints.push(XorConstraint::pair(i, b2, true, r(2, 3)));
        }
        constraints.push(XorConstraint::pair(b1, b2, true, r(5, 6)));
        return Ok(GadgetTemplate {
            k,
            num_aux: 2,
            constraints,
            params: max2xor("clique", r(10, 1), r(52, 3), r(12, 5), 2, "5SAT"),
            paper_claimed: None,
        });
    }
    if k < 4 || !k.is_power_of_two() || k > 32 {
        return Err(GadgetError::Width {
            name: "clique".into(),
            width: k,
        });
    }
    let m = k.trailing_zeros() - 1;
    let b = |j: u32| kk + j;
    x_pairs(&mut constraints);
    for j in 1..=m {
        constraints.push(XorConstraint::unary(
            b(j),
            true,
            Rational::from_integer(1 << (j - 1)),
        ));
    }
    for i in 1..=m {
        for j in i + 1..=m {
            constraints.push(XorConstraint::pair(
                b(i),
                b(j),
                true,
                Rational::from_integer(1 << (i + j - 1)),
            ));
        }
    }
    for i in 1..=kk {
        for j in 1..=m {
            constraints.push(XorConstraint::pair(
                i,
                b(j),
                true,
                Rational::from_integer(1 << (j - 1)),
            ));
        }
    }
    let kr = Rational::from(k);
    let alpha = &kr * (&kr - Rational::one()) * half();
    let beta = (r(11, 1) * &kr * &kr - r(15, 1) * &kr + r(4, 1)) / r(12, 1);
    let delta_e = r(32, 1) / (&kr * &kr);
    Ok(GadgetTemplate {
        k,
        num_aux: m,
        constraints,
        params: max2xor("clique", alpha, beta, delta_e, m, "kSAT"),
        paper_claimed: None,
    })
}

pub fn gadget_clique(clause: &Clause, first_aux: u32) -> Result<GadgetApplication, GadgetError> {
    clique_template(clause.width())?.instantiate(clause, first_aux)
}

/// Gadget choice for one clause width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    Unit,
    Direct,
    TreeComb,
    TreeBalanced,
    Clique,
    Reference(ReferenceKind),
    /// Split to 3SAT with the auxiliary chain, then apply the inner gadget.
    Chain(Box<GadgetKind>),
}

impl GadgetKind {
    pub fn name(&self) -> String {
        match self {
            GadgetKind::Unit => "unit".into(),
            GadgetKind::Direct => "direct".into(),
            GadgetKind::TreeComb => "tree".into(),
            GadgetKind::TreeBalanced => "tree-balanced".into(),
            GadgetKind::Clique => "clique".into(),
            GadgetKind::Reference(r) => r.name().into(),
            GadgetKind::Chain(inner) => format!("chain-{}", inner.name()),
        }
    }

    /// Applies the gadget to a normalized clause.
    pub fn apply(&self, clause: &Clause, first_aux: u32) -> Result<GadgetApplication, GadgetError> {
        let k = clause.width();
        match self {
            GadgetKind::Unit if k == 1 => unit_template().instantiate(clause, first_aux),
            GadgetKind::Unit => Err(GadgetError::Width {
                name: "unit".into(),
                width: k,
            }),
            GadgetKind::Direct => gadget_direct(clause, first_aux),
            GadgetKind::TreeComb | GadgetKind::TreeBalanced if k == 1 => {
                unit_template().instantiate(clause, first_aux)
            }
            GadgetKind::TreeComb => gadget_tree(clause, &TreeShape::comb(k), first_aux),
            GadgetKind::TreeBalanced => gadget_tree(clause, &TreeShape::balanced(k), first_aux),
            GadgetKind::Clique => gadget_clique(clause, first_aux),
            GadgetKind::Reference(r) => gadget_reference(clause, *r, first_aux),
            GadgetKind::Chain(inner) => {
                if k <= 3 {
                    return inner.apply(clause, first_aux);
                }
                let (clauses, chain_aux, chain_params) = gadget_ksat_to_3sat(clause, first_aux)?;
                let mut next = first_aux + chain_aux.len() as u32;
                let mut constraints = Max2XorProblem::new(0);
                let mut aux_vars = chain_aux;
                let mut inner_params = None;
                for c in &clauses {
                    let app = inner.apply(c, next)?;
                    next += app.aux_vars.len() as u32;
                    aux_vars.extend(&app.aux_vars);
                    constraints.extend(&app.constraints);
                    inner_params = Some(app.params);
                }
                let inner_params = inner_params.expect("at least two clauses");
                let mut as_3sat = inner_params.clone();
                as_3sat.source = "3SAT".into();
                let mut params = compose_params(&chain_params, &as_3sat)?;
                params.name = self.name();
                params.num_aux = aux_vars.len() as u32;
                params.delta_e = energy_gap_max2xor(&constraints.simplify()).ok();
                params.source = "kSAT".into();
                Ok(GadgetApplication {
                    constraints,
                    clause_vars: clause.vars(),
                    aux_vars,
                    params,
                    paper_claimed: None,
                })
            }
        }
    }
}

impl FromStr for GadgetKind {
    type Err = GadgetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s {
            "unit" => GadgetKind::Unit,
            "direct" => GadgetKind::Direct,
            "tree" | "tree-comb" | "comb" => GadgetKind::TreeComb,
            "tree-balanced" | "balanced" => GadgetKind::TreeBalanced,
            "clique" => GadgetKind::Clique,
            "trevisan" => GadgetKind::Reference(ReferenceKind::Trevisan),
            "nusslein" => GadgetKind::Reference(ReferenceKind::Nusslein),
            "chancellor" => GadgetKind::Reference(ReferenceKind::Chancellor),
            "bian-tseitin" | "bian_tseitin" | "bian" => {
                GadgetKind::Reference(ReferenceKind::BianTseitin)
            }
            _ => match s.strip_prefix("chain-") {
                Some(inner) => GadgetKind::Chain(Box::new(inner.parse()?)),
                None => return Err(GadgetError::UnknownGadget(s.to_string())),
            },
        })
    }
}

/// Per-width gadget selection, e.g. `1:unit,2:direct,3:tree,4+:tree-balanced`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    /// `(min_width, max_width, kind)`; later entries override earlier ones.
    rules: Vec<(usize, usize, GadgetKind)>,
}

impl Strategy {
    /// The same gadget for every width ≥ 3, unit and direct below.
    pub fn uniform(kind: GadgetKind) -> Self {
        Strategy {
            rules: vec![
                (1, 1, GadgetKind::Unit),
                (2, 2, GadgetKind::Direct),
                (3, usize::MAX, kind),
            ],
        }
    }

    pub fn select(&self, width: usize) -> Option<&GadgetKind> {
        self.rules
            .iter()
            .rev()
            .find(|(lo, hi, _)| *lo <= width && width <= *hi)
            .map(|(_, _, k)| k)
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::uniform(GadgetKind::TreeComb)
    }
}

impl FromStr for Strategy {
    type Err = GadgetError;

    /// Either a bare gadget name (applied from width 3 up) or a list of
    /// `width:gadget` / `width+:gadget` / `lo-hi:gadget` rules.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.contains(':') {
            return Ok(Strategy::uniform(s.parse()?));
        }
        let bad = || GadgetError::Strategy(s.to_string());
        let mut rules = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (w, kind) = part.split_once(':').ok_or_else(bad)?;
            let kind: GadgetKind = kind.parse()?;
            let w = w.trim();
            let (lo, hi) = if let Some(lo) = w.strip_suffix('+') {
                (lo.parse().map_err(|_| bad())?, usize::MAX)
            } else if let Some((lo, hi)) = w.split_once('-') {
                (
                    lo.parse().map_err(|_| bad())?,
                    hi.parse().map_err(|_| bad())?,
                )
            } else {
                let v = w.parse().map_err(|_| bad())?;
                (v, v)
            };
            if lo == 0 || lo > hi {
                return Err(bad());
            }
            rules.push((lo, hi, kind));
        }
        Ok(Strategy { rules })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi, k)) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match (lo, hi) {
                (lo, &usize::MAX) => write!(f, "{lo}+:{}", k.name())?,
                (lo, hi) if lo == hi => write!(f, "{lo}:{}", k.name())?,
                (lo, hi) => write!(f, "{lo}-{hi}:{}", k.name())?,
            }
        }
        Ok(())
    }
}

/// Aggregate gadget bookkeeping over a compiled formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompileTotals {
    pub num_clauses: usize,
    pub sum_alpha_minus_one: Rational,
    pub sum_beta_minus_alpha: Rational,
    pub num_aux: u32,
    pub all_strict: bool,
    /// The formula is unsatisfiable iff `Cost(P′)` reaches this value.
    pub unsat_threshold: Rational,
    pub tautologies_dropped: usize,
}

#[derive(Clone, Debug)]
pub struct Compiled {
    /// Simplified union of all gadget constraints.
    pub problem: Max2XorProblem,
    /// Plain union before simplification.
    pub raw: Max2XorProblem,
    pub applications: Vec<GadgetApplication>,
    pub totals: CompileTotals,
}

/// Applies the selected gadget to every clause. Auxiliaries are allocated
/// from `num_vars + 1` in clause order.
pub fn compile_cnf(formula: &CnfFormula, strategy: &Strategy) -> Result<Compiled, GadgetError> {
    let (f, dropped) = formula.normalized();
    let mut next_aux = f.num_vars + 1;
    let mut raw = Max2XorProblem::new(f.num_vars);
    let mut applications = Vec::with_capacity(f.clauses.len());
    let one = Rational::one();
    let mut sum_a = Rational::zero();
    let mut sum_ba = Rational::zero();
    let mut all_strict = true;
    for clause in &f.clauses {
        let kind = strategy
            .select(clause.width())
            .ok_or(GadgetError::NoGadgetForWidth(clause.width()))?;
        let app = kind.apply(clause, next_aux)?;
        next_aux += app.aux_vars.len() as u32;
        raw.extend(&app.constraints);
        sum_a += &app.params.alpha - &one;
        sum_ba += &app.params.beta - &app.params.alpha;
        all_strict &= app.params.strict;
        applications.push(app);
    }
    raw.num_vars = next_aux - 1;
    let problem = raw.simplify();
    let totals = CompileTotals {
        num_clauses: f.clauses.len(),
        unsat_threshold: &sum_ba + &one,
        sum_alpha_minus_one: sum_a,
        sum_beta_minus_alpha: sum_ba,
        num_aux: next_aux - 1 - f.num_vars,
        all_strict,
        tautologies_dropped: dropped,
    };
    Ok(Compiled {
        problem,
        raw,
        applications,
        totals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(cs: &[XorConstraint]) -> BTreeSet<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn negation_rewriting() {
        let w = r(3, 2);
        let lc = |lits: &[i64], rhs| LitXorConstraint {
            lits: lits.iter().map(|&l| Literal::from_dimacs(l)).collect(),
            rhs,
            weight: w.clone(),
        };
        let out = rewrite_negations(&[lc(&[-1, 2], true), lc(&[-1, -2], true), lc(&[-1], true)]);
        assert_eq!(
            out,
            vec![
                XorConstraint::pair(1, 2, false, w.clone()),
                XorConstraint::pair(1, 2, true, w.clone()),
                XorConstraint::unary(1, false, w.clone()),
            ]
        );
    }

    #[test]
    fn direct_gadget_images() {
        let app = gadget_direct(&Clause::from_dimacs(&[1, 2]), 3).unwrap();
        assert_eq!(app.constraints.constraints, direct_template().constraints);
        let app = gadget_direct(&Clause::from_dimacs(&[-1, 2]), 3).unwrap();
        assert_eq!(
            set(&app.constraints.constraints),
            set(&[
                XorConstraint::unary(1, false, half()),
                XorConstraint::unary(2, true, half()),
                XorConstraint::pair(1, 2, false, half()),
            ])
        );
        let app = gadget_direct(&Clause::from_dimacs(&[4]), 5).unwrap();
        assert_eq!(
            app.constraints.constraints,
            vec![XorConstraint::unary(4, true, Rational::one())]
        );
        assert!(gadget_direct(&Clause::positive(3), 4).is_err());
    }

    #[test]
    fn negated_direct_gadget_by_enumeration() {
        let clause = Clause::from_dimacs(&[-1, 2]);
        let app = gadget_direct(&clause, 3).unwrap();
        for bits in 0..4 {
            let v = app.constraints.satisfied_bits(bits);
            let expect = if clause.eval_bits(bits) {
                r(1, 1)
            } else {
                r(0, 1)
            };
            assert_eq!(v, expect, "bits {bits}");
        }
    }

    #[test]
    fn naive_expansion() {
        let two = gadget_naive_xor(2, 10).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.iter().all(|c| c.weight == half()));
        let three = gadget_naive_xor(3, 10).unwrap();
        assert_eq!(three.len(), 7);
        for bits in 0..8 {
            let expect = if bits == 0 { r(0, 1) } else { r(1, 1) };
            assert_eq!(naive_xor_value(&three, bits), expect);
        }
        assert_eq!(
            gadget_naive_xor(1, 10).unwrap(),
            vec![NaiveXor {
                vars: vec![1],
                weight: r(1, 1)
            }]
        );
        assert!(gadget_naive_xor(11, 10).is_err());
    }

    #[test]
    fn chain_to_3sat() {
        let (cs, aux, p) = gadget_ksat_to_3sat(&Clause::positive(4), 5).unwrap();
        assert_eq!(
            cs,
            vec![
                Clause::from_dimacs(&[1, 2, 5]),
                Clause::from_dimacs(&[-5, 3, 4])
            ]
        );
        assert_eq!(aux, vec![5]);
        assert_eq!((p.alpha, p.beta), (r(2, 1), r(2, 1)));
        let (cs, aux, _) = gadget_ksat_to_3sat(&Clause::positive(5), 6).unwrap();
        assert_eq!((cs.len(), aux.len()), (3, 2));
        assert!(gadget_ksat_to_3sat(&Clause::positive(3), 4).is_err());
    }

    #[test]
    fn chain_preserves_satisfiability() {
        let clause = Clause::positive(4);
        let (cs, _, _) = gadget_ksat_to_3sat(&clause, 5).unwrap();
        for x in 0u64..16 {
            let extendable = (0..2u64).any(|b| cs.iter().all(|c| c.eval_bits(x | b << 4)));
            assert_eq!(extendable, clause.eval_bits(x));
        }
    }

    #[test]
    fn reference_listings() {
        let ch = chancellor_template();
        assert_eq!(ch.constraints.len(), 10);
        assert!(ch.constraints.iter().all(|c| c.weight == half()));
        let tr = trevisan_template();
        assert_eq!(
            set(&tr.constraints),
            set(&[
                XorConstraint::pair(1, 3, true, half()),
                XorConstraint::pair(1, 4, false, half()),
                XorConstraint::pair(3, 4, false, half()),
                XorConstraint::pair(2, 4, true, half()),
                XorConstraint::unary(4, true, half()),
                XorConstraint::unary(2, true, half()),
            ])
        );
        let bt = bian_tseitin_template();
        assert_eq!(bt.constraints.len(), 8);
        assert_eq!(bt.problem().weight(), r(6, 1));
        assert!(bt
            .constraints
            .contains(&XorConstraint::unary(4, true, r(3, 2))));
    }

    #[test]
    fn trevisan_cancellation_offset() {
        let (clauses, p1) = trevisan_max2sat();
        let mut raw = Max2XorProblem::new(4);
        for (w, c) in &clauses {
            raw.extend(&gadget_direct(c, 5).unwrap().constraints.scaled(w));
        }
        let s = raw.simplify();
        assert_eq!(s.offset, r(3, 2));
        let composed = compose_params(&p1, &direct_template().params).unwrap();
        assert_eq!(
            (composed.alpha.clone(), composed.beta.clone()),
            (r(7, 2), r(6, 1))
        );
        assert_eq!(&composed.alpha - &s.offset, r(2, 1));
        assert_eq!(&composed.beta - &s.offset * r(2, 1), r(3, 1));
    }

    #[test]
    fn composition_arithmetic() {
        let g = |a, b| GadgetParams::new("g", a, b, None, 0, true, "A", "A");
        let c = compose_params(&g(r(2, 1), r(2, 1)), &g(r(3, 1), r(5, 1))).unwrap();
        assert_eq!((c.alpha, c.beta), (r(6, 1), r(10, 1)));
        let c = compose_params(&g(r(7, 3), r(4, 1)), &g(r(1, 1), r(1, 1))).unwrap();
        assert_eq!((c.alpha, c.beta), (r(7, 3), r(4, 1)));
        let mut bad = g(r(1, 1), r(1, 1));
        bad.source = "B".into();
        assert!(compose_params(&g(r(1, 1), r(1, 1)), &bad).is_err());
        let mixed = compose_params_mixed(
            &tseitin_params(),
            &[
                bian_equivalence_template().params,
                direct_template().params.lifted(&r(2, 1)),
            ],
        );
        assert_eq!((mixed.alpha, mixed.beta), (r(6, 1), r(8, 1)));
    }

    #[test]
    fn tree_small_cases() {
        let t2 = tree_template(&TreeShape::comb(2)).unwrap();
        assert_eq!(set(&t2.constraints), set(&direct_template().constraints));
        let t3 = tree_template(&TreeShape::comb(3)).unwrap();
        assert_eq!(
            set(&t3.constraints),
            set(&[
                XorConstraint::pair(1, 2, true, half()),
                XorConstraint::pair(1, 4, false, half()),
                XorConstraint::pair(2, 4, false, half()),
                XorConstraint::pair(4, 3, true, half()),
                XorConstraint::unary(4, true, half()),
                XorConstraint::unary(3, true, half()),
            ])
        );
        let t7 = tree_template(&TreeShape::balanced(7)).unwrap();
        assert_eq!((t7.constraints.len(), t7.num_aux), (18, 5));
        // b1..b3 sit over (1 2), (3 4), (5 6); b4, b5 are their parents.
        assert!(t7
            .constraints
            .contains(&XorConstraint::pair(8, 9, true, half())));
        assert!(t7
            .constraints
            .contains(&XorConstraint::pair(10, 7, true, half())));
        assert!(t7
            .constraints
            .contains(&XorConstraint::pair(11, 12, true, half())));
    }

    #[test]
    fn shapes_parse_and_print() {
        assert_eq!(TreeShape::balanced(4).to_string(), "((1 2)(3 4))");
        assert_eq!(TreeShape::comb(3).to_string(), "((1 2) 3)");
        assert_eq!(
            TreeShape::balanced(7).to_string(),
            "(((1 2)(3 4))((5 6) 7))"
        );
        for k in 1..9 {
            for s in [TreeShape::comb(k), TreeShape::balanced(k)] {
                assert_eq!(TreeShape::parse(&s.to_string()).unwrap(), s);
            }
        }
        assert!(TreeShape::parse("((1 3)(2 4))").is_err());
        assert!(TreeShape::parse("((1 2) 3").is_err());
        assert!(TreeShape::parse("(1 2 3)").is_err());
        assert!(gadget_tree(&Clause::positive(3), &TreeShape::comb(4), 4).is_err());
    }

    #[test]
    fn clique_sizes() {
        let c4 = clique_template(4).unwrap();
        assert_eq!(c4.num_aux, 1);
        assert_eq!(
            (c4.params.alpha.clone(), c4.params.beta.clone()),
            (r(6, 1), r(10, 1))
        );
        assert_eq!(c4.problem().weight(), r(10, 1));
        let c5 = clique_template(5).unwrap();
        assert_eq!(c5.constraints.len(), 28);
        assert_eq!(c5.problem().weight(), r(52, 3));
        let c8 = clique_template(8).unwrap();
        assert_eq!(c8.params.beta, r(49, 1));
        assert_eq!(c8.problem().weight(), r(49, 1));
        assert!(clique_template(6).is_err());
        assert!(clique_template(2).is_err());
    }

    #[test]
    fn strategies() {
        let s: Strategy = "1:unit,2:direct,3:tree,4+:tree-balanced".parse().unwrap();
        assert_eq!(s.select(3), Some(&GadgetKind::TreeComb));
        assert_eq!(s.select(9), Some(&GadgetKind::TreeBalanced));
        assert_eq!(s.to_string(), "1:unit,2:direct,3:tree,4+:tree-balanced");
        let s: Strategy = "chancellor".parse().unwrap();
        assert_eq!(
            s.select(3),
            Some(&GadgetKind::Reference(ReferenceKind::Chancellor))
        );
        assert!("3:nope".parse::<Strategy>().is_err());
        assert!("0:unit".parse::<Strategy>().is_err());
        let s: Strategy = "3:tree".parse().unwrap();
        assert_eq!(s.select(2), None);
    }

    #[test]
    fn compile_examples() {
        let f = CnfFormula::new(2, vec![Clause::from_dimacs(&[1, 2])]);
        let c = compile_cnf(&f, &Strategy::default()).unwrap();
        assert_eq!(c.problem.len(), 3);
        assert_eq!(c.totals.sum_beta_minus_alpha, half());
        assert_eq!(c.totals.unsat_threshold, r(3, 2));

        let f = CnfFormula::new(5, vec![Clause::positive(5)]);
        let c = compile_cnf(&f, &Strategy::default()).unwrap();
        assert_eq!((c.problem.len(), c.totals.num_aux), (12, 3));
        assert_eq!(c.problem.num_vars, 8);

        let c = compile_cnf(&CnfFormula::default(), &Strategy::default()).unwrap();
        assert!(c.problem.is_empty());
        assert_eq!(c.totals.sum_beta_minus_alpha, r(0, 1));

        let f = CnfFormula::new(6, vec![Clause::positive(6)]);
        assert!(matches!(
            compile_cnf(&f, &"clique".parse().unwrap()),
            Err(GadgetError::Width { .. })
        ));
    }

    #[test]
    fn chain_gadget_params() {
        let kind: GadgetKind = "chain-trevisan".parse().unwrap();
        let app = kind.apply(&Clause::positive(5), 6).unwrap();
        // 2k − 5 auxiliaries, (2(k−2), 3(k−2)).
        assert_eq!(app.aux_vars.len(), 5);
        assert_eq!(
            (app.params.alpha.clone(), app.params.beta.clone()),
            (r(6, 1), r(9, 1))
        );
        assert_eq!(app.params.delta_e, Some(r(4, 1)));
    }
}
