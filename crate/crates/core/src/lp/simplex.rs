//! Dense-tableau simplex over exact rationals.
//!
//! Minimizes `c·x` over `x ≥ 0` subject to `≤`, `≥` and `=` rows. Solves from
//! scratch with a two-phase primal method; rows added afterwards are handled
//! by the dual simplex from the previous optimal basis.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplexError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("malformed constraint: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

/// Optimal primal values, objective and one dual value per row.
///
/// Dual signs follow the minimization convention: `c − Σ yᵢ aᵢ ≥ 0`, with
/// `yᵢ ≥ 0` on `≥` rows, `yᵢ ≤ 0` on `≤` rows and free on `=` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub objective: Rational,
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct Simplex {
    num_vars: usize,
    cost: Vec<Rational>,
    kind: Vec<Column>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    objective: Rational,
    /// Column that formed `+e_i` in the initial matrix, for dual recovery.
    unit: Vec<usize>,
    /// Whether row `i` was negated relative to the caller's constraint.
    negated: Vec<bool>,
    iterations: usize,
    max_iterations: usize,
}

const DEGENERATE_SWITCH: usize = 50;

impl Simplex {
    /// Builds and solves `min c·x` subject to `constraints`.
    pub fn solve(cost: Vec<Rational>, constraints: &[Constraint]) -> Result<Self, SimplexError> {
        let num_vars = cost.len();
        for c in constraints {
            if c.coeffs.iter().any(|(j, _)| *j >= num_vars) {
                return Err(SimplexError::Malformed(
                    "variable index out of range".into(),
                ));
            }
        }
        let mut s = Simplex {
            num_vars,
            cost: cost.clone(),
            kind: vec![Column::Structural; num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
            basis: Vec::new(),
            reduced: Vec::new(),
            objective: Rational::zero(),
            unit: Vec::new(),
            negated: Vec::new(),
            iterations: 0,
            max_iterations: 200_000,
        };
        for c in constraints {
            let negate = c.rhs.is_negative();
            let mut row = vec![Rational::zero(); s.ncols()];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            if negate {
                row.iter_mut().for_each(|a| *a = -a.clone());
            }
            let rhs = if negate {
                -c.rhs.clone()
            } else {
                c.rhs.clone()
            };
            let slack_sign = match c.relation {
                Relation::Le => Some(1),
                Relation::Ge => Some(-1),
                Relation::Eq => None,
            };
            let slack_sign = slack_sign.map(|sg| if negate { -sg } else { sg });
            let i = s.rows.len();
            s.rows.push(row);
            s.rhs.push(rhs);
            s.negated.push(negate);
            s.basis.push(usize::MAX);
            s.unit.push(usize::MAX);
            if let Some(sg) = slack_sign {
                let col = s.push_column(Column::Slack, Rational::zero());
                s.rows[i][col] = Rational::from_integer(sg.into());
                if sg == 1 {
                    s.basis[i] = col;
                    s.unit[i] = col;
                }
            }
        }
        for i in 0..s.rows.len() {
            if s.basis[i] == usize::MAX {
                let col = s.push_column(Column::Artificial, Rational::zero());
                s.rows[i][col] = Rational::from_integer(1.into());
                s.basis[i] = col;
                s.unit[i] = col;
            }
        }
        // Phase 1: minimize the sum of artificials.
        let phase1: Vec<Rational> = s
            .kind
            .iter()
            .map(|k| {
                if *k == Column::Artificial {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        s.price(&phase1);
        s.primal(true)?;
        if s.objective.is_positive() {
            return Err(SimplexError::Infeasible);
        }
        s.evict_artificials();
        let cost = s.cost.clone();
        s.price(&cost);
        s.primal(false)?;
        Ok(s)
    }

    fn push_column(&mut self, kind: Column, cost: Rational) -> usize {
        for row in &mut self.rows {
            row.push(Rational::zero());
        }
        self.kind.push(kind);
        self.cost.push(cost);
        self.kind.len() - 1
    }

    fn ncols(&self) -> usize {
        self.kind.len()
    }

    /// Recomputes reduced costs and objective for the given cost vector.
    fn price(&mut self, cost: &[Rational]) {
        let mut reduced = cost.to_vec();
        let mut objective = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] -= cb * a;
                }
            }
            objective += cb * &self.rhs[i];
        }
        self.reduced = reduced;
        self.objective = objective;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.iterations += 1;
        let piv = self.rows[r][c].clone();
        let nz: Vec<usize> = (0..self.ncols())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        for &j in &nz {
            self.rows[r][j] /= &piv;
        }
        self.rhs[r] /= &piv;
        let prow: Vec<(usize, Rational)> =
            nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, a) in &prow {
                let delta = &f * a;
                self.rows[i][*j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        let d = self.reduced[c].clone();
        if !d.is_zero() {
            for (j, a) in &prow {
                let delta = &d * a;
                self.reduced[*j] -= delta;
            }
            self.objective += &d * &prhs;
        }
        self.basis[r] = c;
    }

    fn enterable(&self, j: usize, phase1: bool) -> bool {
        phase1 || self.kind[j] != Column::Artificial
    }

    fn primal(&mut self, phase1: bool) -> Result<(), SimplexError> {
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations > self.max_iterations {
                return Err(SimplexError::IterationLimit);
            }
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let mut enter: Option<usize> = None;
            for j in 0..self.ncols() {
                if !self.enterable(j, phase1) || !self.reduced[j].is_negative() {
                    continue;
                }
                match enter {
                    None => enter = Some(j),
                    Some(_) if bland => {}
                    Some(k) => {
                        if self.reduced[j] < self.reduced[k] {
                            enter = Some(j);
                        }
                    }
                }
                if bland {
                    break;
                }
            }
            let Some(c) = enter else { return Ok(()) };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(SimplexError::Unbounded);
            };
            degenerate_run = if ratio.is_zero() {
                degenerate_run + 1
            } else {
                0
            };
            self.pivot(r, c);
        }
    }

    fn evict_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if self.kind[self.basis[i]] != Column::Artificial {
                continue;
            }
            if let Some(j) = (0..self.ncols())
                .find(|&j| self.kind[j] != Column::Artificial && !self.rows[i][j].is_zero())
            {
                self.pivot(i, j);
            }
        }
    }

    fn dual(&mut self) -> Result<(), SimplexError> {
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations > self.max_iterations {
                return Err(SimplexError::IterationLimit);
            }
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rhs[i].is_negative() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(k) if bland => Some(if self.basis[i] < self.basis[k] { i } else { k }),
                    Some(k) => Some(if self.rhs[i] < self.rhs[k] { i } else { k }),
                };
            }
            let Some(r) = leave else { return Ok(()) };
            let mut enter: Option<(usize, Rational)> = None;
            for j in 0..self.ncols() {
                let a = &self.rows[r][j];
                if !self.enterable(j, false) || !a.is_negative() {
                    continue;
                }
                let ratio = &self.reduced[j] / -a.clone();
                if enter.as_ref().map_or(true, |(_, best)| ratio < *best) {
                    enter = Some((j, ratio));
                }
            }
            let Some((c, ratio)) = enter else {
                return Err(SimplexError::Infeasible);
            };
            degenerate_run = if ratio.is_zero() {
                degenerate_run + 1
            } else {
                0
            };
            self.pivot(r, c);
        }
    }

    /// Adds a `≤` or `≥` row and reoptimizes with the dual simplex.
    pub fn add_constraint(&mut self, c: &Constraint) -> Result<(), SimplexError> {
        if c.coeffs.iter().any(|(j, _)| *j >= self.num_vars) {
            return Err(SimplexError::Malformed(
                "variable index out of range".into(),
            ));
        }
        let negate = match c.relation {
            Relation::Le => false,
            Relation::Ge => true,
            Relation::Eq => {
                return Err(SimplexError::Malformed(
                    "equality rows cannot be added".into(),
                ))
            }
        };
        let slack = self.push_column(Column::Slack, Rational::zero());
        let mut row = vec![Rational::zero(); self.ncols()];
        for (j, a) in &c.coeffs {
            row[*j] += a;
        }
        let mut rhs = c.rhs.clone();
        if negate {
            row.iter_mut().for_each(|a| *a = -a.clone());
            rhs = -rhs;
        }
        row[slack] = Rational::from_integer(1.into());
        for (i, &b) in self.basis.iter().enumerate() {
            let f = row[b].clone();
            if f.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    row[j] -= &f * a;
                }
            }
            rhs -= &f * &self.rhs[i];
        }
        self.rows.push(row);
        self.rhs.push(rhs);
        self.basis.push(slack);
        self.unit.push(slack);
        self.negated.push(negate);
        self.reduced.push(Rational::zero());
        self.dual()?;
        self.primal(false)
    }

    pub fn objective(&self) -> &Rational {
        &self.objective
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn solution(&self) -> Solution {
        let mut x = vec![Rational::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rhs[i].clone();
            }
        }
        let duals = (0..self.rows.len())
            .map(|i| {
                let pi = -self.reduced[self.unit[i]].clone();
                if self.negated[i] {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        Solution {
            x,
            objective: self.objective.clone(),
            duals,
        }
    }
}
