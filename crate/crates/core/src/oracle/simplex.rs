//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for (v, pv) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Maximizes `cost · x` over columns flagged in `allowed`. Returns `false`
    /// when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..cost.len()).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !self.rows[r][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[r][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).fold(rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }
}

/// Maximizes `objective · x` subject to `constraints` and `x ≥ 0`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let mut rows = Vec::with_capacity(constraints.len());
    let mut rhs = Vec::with_capacity(constraints.len());
    let mut relations = Vec::with_capacity(constraints.len());
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint width must match the objective");
        if c.rhs.is_negative() {
            rows.push(c.coeffs.iter().map(|v| -v).collect::<Vec<_>>());
            rhs.push(-&c.rhs);
            relations.push(match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            });
        } else {
            rows.push(c.coeffs.clone());
            rhs.push(c.rhs.clone());
            relations.push(c.relation);
        }
    }

    // column layout: originals | slacks and surpluses | artificials
    let slack_count = relations.iter().filter(|r| **r != Relation::Eq).count();
    let artificial_count = relations.iter().filter(|r| **r != Relation::Le).count();
    let width = n + slack_count + artificial_count;
    let mut basis = Vec::with_capacity(rows.len());
    let mut next_slack = n;
    let mut next_artificial = n + slack_count;
    for (row, relation) in rows.iter_mut().zip(&relations) {
        row.resize(width, rational::zero());
        match relation {
            Relation::Le => {
                row[next_slack] = rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -rational::one();
                next_slack += 1;
                row[next_artificial] = rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
    }
    let first_artificial = n + slack_count;
    let mut tab = Tableau { rows, rhs, basis };

    if artificial_count > 0 {
        let phase_one: Vec<Rational> = (0..width)
            .map(|j| if j >= first_artificial { -rational::one() } else { rational::zero() })
            .collect();
        let all = vec![true; width];
        tab.optimize(&phase_one, &all);
        if tab.objective(&phase_one).is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(col) => tab.pivot(r, col),
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = objective.to_vec();
    cost.resize(width, rational::zero());
    let allowed: Vec<bool> = (0..width).map(|j| j < first_artificial).collect();
    if !tab.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![rational::zero(); n];
    for (&b, v) in tab.basis.iter().zip(&tab.rhs) {
        if b < n {
            point[b] = v.clone();
        }
    }
    LpOutcome::Optimal { value: tab.objective(&cost), point }
}
