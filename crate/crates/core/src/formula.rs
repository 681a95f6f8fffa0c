//! CNF formulas and DIMACS input/output.

use std::fmt;

use thiserror::Error;

/// A possibly negated variable. Variables are 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        assert!(var >= 1, "variables are 1-indexed");
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Self {
        assert!(var >= 1, "variables are 1-indexed");
        Literal { var, negated: true }
    }

    /// From a signed DIMACS integer (`-3` is `¬x3`).
    pub fn from_dimacs(lit: i64) -> Self {
        assert!(lit != 0, "0 is the clause terminator, not a literal");
        let var = u32::try_from(lit.unsigned_abs()).expect("variable index out of range");
        Literal {
            var,
            negated: lit < 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Truth value under `assignment`, where `assignment[i]` is variable `i + 1`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] != self.negated
    }

    /// Truth value under a bit-packed assignment (variable `i` is bit `i - 1`).
    pub fn eval_bits(self, bits: u64) -> bool {
        ((bits >> (self.var - 1)) & 1 == 1) != self.negated
    }

    /// DIMACS normal order: by variable, positive before negative.
    fn sort_key(&self) -> (u32, bool) {
        (self.var, self.negated)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A disjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn from_dimacs(lits: &[i64]) -> Self {
        Clause::new(lits.iter().map(|&l| Literal::from_dimacs(l)).collect())
    }

    /// The clause `x1 ∨ … ∨ xk` over the first `k` variables.
    pub fn positive(k: u32) -> Self {
        Clause::new((1..=k).map(Literal::pos).collect())
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn vars(&self) -> Vec<u32> {
        self.literals.iter().map(|l| l.var).collect()
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.literals.iter().any(|l| l.eval(assignment))
    }

    pub fn eval_bits(&self, bits: u64) -> bool {
        self.literals.iter().any(|l| l.eval_bits(bits))
    }

    /// Sorted, deduplicated copy; `None` for a tautology.
    pub fn normalized(&self) -> Option<Clause> {
        let mut lits = self.literals.clone();
        lits.sort_by_key(Literal::sort_key);
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Clause::new(lits))
    }

    pub fn is_tautology(&self) -> bool {
        self.normalized().is_none()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid literal `{text}`")]
    InvalidLiteral { line: usize, text: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    VariableOutOfRange {
        line: usize,
        lit: i64,
        num_vars: u32,
    },
    #[error("line {line}: empty clause (formula is trivially unsatisfiable)")]
    EmptyClause { line: usize },
    #[error("unterminated final clause")]
    UnterminatedClause,
}

/// Non-fatal observations made while reading a DIMACS file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsWarnings {
    pub declared_clauses: usize,
    pub read_clauses: usize,
    pub tautologies_dropped: usize,
    pub duplicate_literals_removed: usize,
}

impl DimacsWarnings {
    pub fn clause_count_mismatch(&self) -> bool {
        self.declared_clauses != self.read_clauses
    }

    pub fn is_clean(&self) -> bool {
        !self.clause_count_mismatch()
            && self.tautologies_dropped == 0
            && self.duplicate_literals_removed == 0
    }
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Self {
        let f = CnfFormula { num_vars, clauses };
        debug_assert!(f.max_var() <= num_vars);
        f
    }

    pub fn max_var(&self) -> u32 {
        self.clauses
            .iter()
            .flat_map(|c| c.literals.iter().map(|l| l.var))
            .max()
            .unwrap_or(0)
    }

    /// Normalizes every clause and drops tautologies.
    pub fn normalized(&self) -> (CnfFormula, usize) {
        let mut dropped = 0;
        let clauses = self
            .clauses
            .iter()
            .filter_map(|c| {
                let n = c.normalized();
                dropped += n.is_none() as usize;
                n
            })
            .collect();
        (
            CnfFormula {
                num_vars: self.num_vars,
                clauses,
            },
            dropped,
        )
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(assignment))
    }

    pub fn count_falsified_bits(&self, bits: u64) -> usize {
        self.clauses.iter().filter(|c| !c.eval_bits(bits)).count()
    }

    /// Minimum number of falsified clauses over all assignments.
    ///
    /// Enumerates `2^num_vars` assignments; intended for small oracles only.
    pub fn min_falsified(&self) -> usize {
        assert!(self.num_vars <= 30, "too many variables to enumerate");
        (0u64..1 << self.num_vars)
            .map(|b| self.count_falsified_bits(b))
            .min()
            .unwrap_or(0)
    }

    pub fn is_satisfiable_bruteforce(&self) -> bool {
        self.min_falsified() == 0
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in &c.literals {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF text. Clauses are normalized on the way in.
pub fn parse_dimacs(text: &str) -> Result<(CnfFormula, DimacsWarnings), FormulaError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut warnings = DimacsWarnings::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(FormulaError::DuplicateHeader { line: line_no });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || FormulaError::MalformedHeader {
                line: line_no,
                text: line.to_string(),
            };
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad());
            }
            let nv = parts[2].parse::<u32>().map_err(|_| bad())?;
            let nc = parts[3].parse::<usize>().map_err(|_| bad())?;
            header = Some((nv, nc));
            continue;
        }
        let (num_vars, _) = header.ok_or(FormulaError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| FormulaError::InvalidLiteral {
                line: line_no,
                text: tok.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(FormulaError::EmptyClause { line: line_no });
                }
                warnings.read_clauses += 1;
                let clause = Clause::from_dimacs(&current);
                current.clear();
                match clause.normalized() {
                    Some(n) => {
                        warnings.duplicate_literals_removed += clause.width() - n.width();
                        clauses.push(n);
                    }
                    None => warnings.tautologies_dropped += 1,
                }
            } else {
                if lit.unsigned_abs() > num_vars as u64 {
                    return Err(FormulaError::VariableOutOfRange {
                        line: line_no,
                        lit,
                        num_vars,
                    });
                }
                current.push(lit);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(FormulaError::MissingHeader)?;
    if !current.is_empty() {
        return Err(FormulaError::UnterminatedClause);
    }
    warnings.declared_clauses = declared;
    Ok((CnfFormula { num_vars, clauses }, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_file() {
        let (f, w) = parse_dimacs("p cnf 2 1\n1 2 0").unwrap();
        assert_eq!(f.num_vars, 2);
        assert_eq!(f.clauses, vec![Clause::from_dimacs(&[1, 2])]);
        assert!(w.is_clean());
    }

    #[test]
    fn comments_and_widths() {
        let (f, _) = parse_dimacs("c hello\np cnf 3 2\n1 -2 0\n-1 2 3 0\n").unwrap();
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(f.clauses[1].width(), 3);
    }

    #[test]
    fn tautology_dropped_with_warning() {
        let (f, w) = parse_dimacs("p cnf 2 1\n1 -1 2 0").unwrap();
        assert!(f.clauses.is_empty());
        assert_eq!(w.tautologies_dropped, 1);
    }

    #[test]
    fn clauses_may_span_lines() {
        let (f, w) = parse_dimacs("p cnf 3 1\n1 2\n3 0\n").unwrap();
        assert_eq!(f.clauses, vec![Clause::from_dimacs(&[1, 2, 3])]);
        assert!(w.is_clean());
    }

    #[test]
    fn errors_are_distinct() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n"),
            Err(FormulaError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("1 2 0\n"),
            Err(FormulaError::MissingHeader)
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 3 0"),
            Err(FormulaError::VariableOutOfRange { lit: 3, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 0\n0\n"),
            Err(FormulaError::EmptyClause { line: 3 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2"),
            Err(FormulaError::UnterminatedClause)
        ));
    }

    #[test]
    fn count_mismatch_is_only_a_warning() {
        let (f, w) = parse_dimacs("p cnf 2 5\n1 0\n").unwrap();
        assert_eq!(f.clauses.len(), 1);
        assert!(w.clause_count_mismatch());
    }

    #[test]
    fn normal_order_and_dedup() {
        let c = Clause::from_dimacs(&[-3, 1, 3, 1]).normalized();
        assert_eq!(c, None);
        let c = Clause::from_dimacs(&[-3, 2, 2, -1]).normalized().unwrap();
        assert_eq!(c, Clause::from_dimacs(&[-1, 2, -3]));
    }

    fn arb_formula() -> impl Strategy<Value = CnfFormula> {
        (1u32..8).prop_flat_map(|n| {
            let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { -v } else { v });
            let clause = prop::collection::vec(lit, 1..5).prop_map(|l| Clause::from_dimacs(&l));
            prop::collection::vec(clause, 0..8).prop_map(move |cs| CnfFormula::new(n, cs))
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_idempotence(f in arb_formula()) {
            let (norm, _) = f.normalized();
            let (again, dropped) = norm.normalized();
            prop_assert_eq!(&again, &norm);
            prop_assert_eq!(dropped, 0);
            let (parsed, w) = parse_dimacs(&norm.to_dimacs()).unwrap();
            prop_assert_eq!(parsed, norm);
            prop_assert!(w.is_clean());
        }
    }
}
