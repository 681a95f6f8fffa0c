//! Exact rational simplex over a condensed tableau.
//!
//! Problems have the form `min (c₁·x, c₂·x, …)` lexicographically subject to
//! `A x ≤ b`, `x ≥ 0` with `b ≥ 0`, so the slack basis is primal feasible and
//! no artificial phase is needed. Equalities are obtained by fixing slacks to
//! zero with [`LexLp::fix_zero`], which restores optimality with dual simplex
//! pivots and so supports warm-started branch-and-bound.

use thiserror::Error;

use crate::rational::Rational;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("right-hand side of row {0} is negative")]
    NegativeRhs(usize),
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("pivot limit exceeded")]
    PivotLimit,
}

/// Sparse row `Σ coef·x_var ≤ rhs`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Row {
    pub coefs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Lexicographic LP held as `x_B = rhs − T·x_N`, `z_l = z_l⁰ + d_l·x_N`.
/// Labels `0..n` are structural variables and `n..n+m` row slacks.
#[derive(Clone, Debug)]
pub struct LexLp {
    num_structural: usize,
    table: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    obj: Vec<Vec<Rational>>,
    obj_value: Vec<Rational>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    /// Row currently holding each label, if basic.
    row_of: Vec<Option<usize>>,
    fixed: Vec<bool>,
    pivots: u64,
}

const BLAND_AFTER: u64 = 200;
const PIVOT_LIMIT: u64 = 200_000;

fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn lex_sign(v: &[Rational]) -> std::cmp::Ordering {
    v.iter()
        .map(|x| x.cmp(&Rational::zero()))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

impl LexLp {
    /// Builds the slack-basis tableau. `objectives` are minimized in order.
    pub fn new(
        num_structural: usize,
        rows: &[Row],
        objectives: &[Vec<(usize, Rational)>],
    ) -> Result<Self, LpError> {
        let m = rows.len();
        let mut table = vec![vec![Rational::zero(); num_structural]; m];
        let mut rhs = Vec::with_capacity(m);
        for (i, row) in rows.iter().enumerate() {
            if row.rhs.is_negative() {
                return Err(LpError::NegativeRhs(i));
            }
            for (v, c) in &row.coefs {
                if *v >= num_structural {
                    return Err(LpError::BadVariable(*v));
                }
                table[i][*v] += c;
            }
            rhs.push(row.rhs.clone());
        }
        let mut obj = vec![vec![Rational::zero(); num_structural]; objectives.len()];
        for (l, o) in objectives.iter().enumerate() {
            for (v, c) in o {
                if *v >= num_structural {
                    return Err(LpError::BadVariable(*v));
                }
                obj[l][*v] += c;
            }
        }
        let total = num_structural + m;
        let mut row_of = vec![None; total];
        for (i, slot) in row_of.iter_mut().skip(num_structural).enumerate() {
            *slot = Some(i);
        }
        Ok(LexLp {
            num_structural,
            table,
            rhs,
            obj_value: vec![Rational::zero(); objectives.len()],
            obj,
            basic: (num_structural..total).collect(),
            nonbasic: (0..num_structural).collect(),
            row_of,
            fixed: vec![false; total],
            pivots: 0,
        })
    }

    pub fn num_structural(&self) -> usize {
        self.num_structural
    }

    /// Label of the slack of row `i`.
    pub fn slack(&self, row: usize) -> usize {
        self.num_structural + row
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    pub fn value(&self, var: usize) -> Rational {
        match self.row_of.get(var).copied().flatten() {
            Some(r) => self.rhs[r].clone(),
            None => Rational::zero(),
        }
    }

    pub fn objective(&self, level: usize) -> &Rational {
        &self.obj_value[level]
    }

    pub fn is_fixed(&self, var: usize) -> bool {
        self.fixed.get(var).copied().unwrap_or(false)
    }

    fn reduced(&self, col: usize) -> Vec<Rational> {
        self.obj.iter().map(|o| o[col].clone()).collect()
    }

    fn pivot(&mut self, r: usize, q: usize) {
        self.pivots += 1;
        let p = self.table[r][q].clone();
        let inv = p.recip();
        let width = self.nonbasic.len();
        for j in 0..width {
            if j != q && !self.table[r][j].is_zero() {
                self.table[r][j] *= &inv;
            }
        }
        self.table[r][q] = inv.clone();
        self.rhs[r] *= &inv;
        let support: Vec<usize> = (0..width)
            .filter(|&j| j != q && !self.table[r][j].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.table[r]);
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.table.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &support {
                row[j].sub_mul_assign(&f, &pivot_row[j]);
            }
            row[q] = -(&f * &inv);
            if !pivot_rhs.is_zero() {
                self.rhs[i].sub_mul_assign(&f, &pivot_rhs);
            }
        }
        for (o, z) in self.obj.iter_mut().zip(self.obj_value.iter_mut()) {
            if o[q].is_zero() {
                continue;
            }
            let f = o[q].clone();
            for &j in &support {
                o[j].sub_mul_assign(&f, &pivot_row[j]);
            }
            o[q] = -(&f * &inv);
            *z += &f * &pivot_rhs;
        }
        self.table[r] = pivot_row;
        let (leaving, entering) = (self.basic[r], self.nonbasic[q]);
        self.basic[r] = entering;
        self.nonbasic[q] = leaving;
        self.row_of[entering] = Some(r);
        self.row_of[leaving] = None;
    }

    fn remove_column(&mut self, q: usize) {
        for row in &mut self.table {
            row.swap_remove(q);
        }
        for o in &mut self.obj {
            o.swap_remove(q);
        }
        self.nonbasic.swap_remove(q);
    }

    fn remove_row(&mut self, r: usize) {
        self.row_of[self.basic[r]] = None;
        self.table.swap_remove(r);
        self.rhs.swap_remove(r);
        self.basic.swap_remove(r);
        if r < self.basic.len() {
            self.row_of[self.basic[r]] = Some(r);
        }
    }

    /// Primal simplex to lexicographic optimality.
    pub fn optimize(&mut self) -> Result<(), LpError> {
        let start = self.pivots;
        loop {
            if self.pivots - start > PIVOT_LIMIT {
                return Err(LpError::PivotLimit);
            }
            let bland = self.pivots - start > BLAND_AFTER;
            let Some(q) = self.entering_primal(bland) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.table.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[q];
                let better = match &best {
                    None => true,
                    Some((b, br)) => {
                        ratio < *br || (ratio == *br && self.basic[i] < self.basic[*b])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let (r, _) = best.ok_or(LpError::Unbounded)?;
            self.pivot(r, q);
        }
    }

    fn entering_primal(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for q in 0..self.nonbasic.len() {
            let Some(level) = self.obj.iter().position(|o| !o[q].is_zero()) else {
                continue;
            };
            if !self.obj[level][q].is_negative() {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, _)) if bland => self.nonbasic[q] < self.nonbasic[b],
                Some((b, bl)) => {
                    level < bl || (level == bl && self.obj[level][q] < self.obj[level][b])
                }
            };
            if better {
                best = Some((q, level));
            }
        }
        best.map(|(q, _)| q)
    }

    /// Column minimizing `d_j / |T_rj|` lexicographically over `T_rj` with the
    /// requested sign.
    fn entering_dual(&self, r: usize, positive: bool) -> Option<usize> {
        let mut best: Option<(usize, Vec<Rational>)> = None;
        for q in 0..self.nonbasic.len() {
            let t = &self.table[r][q];
            if t.is_zero() || t.is_positive() != positive {
                continue;
            }
            let scale = t.abs().recip();
            let ratio: Vec<Rational> = self.reduced(q).iter().map(|d| d * &scale).collect();
            let better = match &best {
                None => true,
                Some((b, br)) => match lex_cmp(&ratio, br) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => self.nonbasic[q] < self.nonbasic[*b],
                    _ => false,
                },
            };
            if better {
                best = Some((q, ratio));
            }
        }
        best.map(|(q, _)| q)
    }

    /// Dual simplex until every basic variable is non-negative.
    fn restore_feasibility(&mut self) -> Result<(), LpError> {
        let start = self.pivots;
        loop {
            if self.pivots - start > PIVOT_LIMIT {
                return Err(LpError::PivotLimit);
            }
            let bland = self.pivots - start > BLAND_AFTER;
            let mut leave: Option<usize> = None;
            for (i, v) in self.rhs.iter().enumerate() {
                if !v.is_negative() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(b) if bland => Some(if self.basic[i] < self.basic[b] { i } else { b }),
                    Some(b) => Some(if *v < self.rhs[b] { i } else { b }),
                };
            }
            let Some(r) = leave else { return Ok(()) };
            let q = self.entering_dual(r, false).ok_or(LpError::Infeasible)?;
            self.pivot(r, q);
        }
    }

    /// Adds `var = 0` and re-optimizes. The tableau must be optimal on entry.
    pub fn fix_zero(&mut self, var: usize) -> Result<(), LpError> {
        if var >= self.fixed.len() {
            return Err(LpError::BadVariable(var));
        }
        if self.fixed[var] {
            return Ok(());
        }
        self.fixed[var] = true;
        if let Some(q) = self.nonbasic.iter().position(|&v| v == var) {
            self.remove_column(q);
            return Ok(());
        }
        let r = self.row_of[var].expect("variable is basic");
        match self.entering_dual(r, true) {
            Some(q) => {
                self.pivot(r, q);
                self.remove_column(q);
                self.restore_feasibility()
            }
            None if self.rhs[r].is_positive() => Err(LpError::Infeasible),
            None => {
                // Every coefficient is ≤ 0 and the value is 0: the columns
                // with negative coefficients are forced to zero too.
                let forced: Vec<usize> = (0..self.nonbasic.len())
                    .filter(|&j| self.table[r][j].is_negative())
                    .collect();
                for &j in forced.iter().rev() {
                    self.fixed[self.nonbasic[j]] = true;
                    self.remove_column(j);
                }
                self.remove_row(r);
                Ok(())
            }
        }
    }

    /// Whether every reduced-cost column is lexicographically non-negative.
    pub fn is_dual_feasible(&self) -> bool {
        (0..self.nonbasic.len()).all(|q| lex_sign(&self.reduced(q)).is_ge())
    }
}
