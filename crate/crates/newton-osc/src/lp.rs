//! Exact rational linear programming by two-phase simplex.
//!
//! All variables are constrained nonnegative; constraints may be `<=`,
//! `>=`, or `=`. Bland's rule guarantees termination. Problem sizes here
//! are tiny (a handful of variables and rows), so the dense tableau is
//! the right tool.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
}

struct Tableau {
    // rows x cols; last column is the rhs, the objective lives in a
    // separate row. Column layout: structural vars, then slack/surplus.
    rows: Vec<Vec<BigRational>>,
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for j in 0..=self.ncols {
            self.rows[row][j] = &self.rows[row][j] * &inv;
        }
        for i in 0..self.rows.len() {
            if i != row && !self.rows[i][col].is_zero() {
                let factor = self.rows[i][col].clone();
                for j in 0..=self.ncols {
                    let delta = &self.rows[row][j] * &factor;
                    self.rows[i][j] -= delta;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for j in 0..=self.ncols {
                let delta = &self.rows[row][j] * &factor;
                self.obj[j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Maximize; reduced costs in `obj` (objective row holds -c initially).
    /// Returns false when unbounded.
    fn solve(&mut self) -> bool {
        loop {
            // Bland: entering = lowest index with negative reduced cost.
            let Some(col) = (0..self.ncols).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rows[i][self.ncols] / &self.rows[i][col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return false;
            };
            self.pivot(row, col);
        }
    }
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
pub fn maximize(objective: &[BigRational], constraints: &[Constraint]) -> LpOutcome {
    let nvars = objective.len();
    let zero = BigRational::zero;

    // Normalize to rows with nonnegative rhs; count slack columns.
    let mut norm: Vec<(Vec<BigRational>, Relation, BigRational)> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity mismatch");
        let mut coeffs = c.coeffs.clone();
        let mut rel = c.relation;
        let mut rhs = c.rhs.clone();
        if rhs.is_negative() {
            for a in &mut coeffs {
                *a = -a.clone();
            }
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        norm.push((coeffs, rel, rhs));
    }

    let nslack = norm
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let ncols = nvars + nslack;
    let nrows = norm.len();

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    let mut slack_idx = nvars;
    let mut needs_artificial = Vec::with_capacity(nrows);
    for (coeffs, rel, rhs) in &norm {
        let mut row = vec![zero(); ncols + 1];
        row[..nvars].clone_from_slice(coeffs);
        row[ncols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[slack_idx] = BigRational::one();
                needs_artificial.push(false);
                slack_idx += 1;
            }
            Relation::Ge => {
                row[slack_idx] = -BigRational::one();
                needs_artificial.push(true);
                slack_idx += 1;
            }
            Relation::Eq => {
                needs_artificial.push(true);
            }
        }
        rows.push(row);
    }

    // Phase one: artificial variables for >= and = rows, and for <= rows
    // we can start from the slack basis directly.
    let mut basis = vec![usize::MAX; nrows];
    let mut art_cols = Vec::new();
    let mut total_cols = ncols;
    {
        let mut slack_idx = nvars;
        for (i, (_, rel, _)) in norm.iter().enumerate() {
            match rel {
                Relation::Le => {
                    basis[i] = slack_idx;
                    slack_idx += 1;
                }
                Relation::Ge => {
                    slack_idx += 1;
                }
                Relation::Eq => {}
            }
        }
    }
    for (i, &needs) in needs_artificial.iter().enumerate() {
        if needs {
            for row in rows.iter_mut() {
                row.insert(total_cols, zero());
            }
            rows[i][total_cols] = BigRational::one();
            basis[i] = total_cols;
            art_cols.push(total_cols);
            total_cols += 1;
        }
    }

    if !art_cols.is_empty() {
        // Minimize the sum of artificials == maximize their negative sum.
        let mut obj = vec![zero(); total_cols + 1];
        for &c in &art_cols {
            obj[c] = BigRational::one();
        }
        let mut t = Tableau {
            rows,
            obj,
            basis,
            ncols: total_cols,
        };
        // Price out the artificial basis.
        for i in 0..nrows {
            if art_cols.contains(&t.basis[i]) {
                for j in 0..=total_cols {
                    let delta = t.rows[i][j].clone();
                    t.obj[j] -= delta;
                }
            }
        }
        if !t.solve() {
            unreachable!("phase-one objective is bounded below by zero");
        }
        if !t.obj[total_cols].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive any artificial still in the basis out of it.
        for i in 0..nrows {
            if art_cols.contains(&t.basis[i]) {
                if let Some(col) =
                    (0..ncols).find(|&j| !t.rows[i][j].is_zero() && !art_cols.contains(&j))
                {
                    t.pivot(i, col);
                }
            }
        }
        rows = t.rows;
        basis = t.basis;
        // Remove artificial columns (they are the trailing ones).
        for row in rows.iter_mut() {
            let rhs = row.remove(row.len() - 1);
            row.truncate(ncols);
            row.push(rhs);
        }
        for b in basis.iter_mut() {
            if art_cols.contains(b) {
                // Redundant row left with an artificial basis entry at
                // value zero; keep it harmless by marking no basis var.
                *b = usize::MAX;
            }
        }
    }

    // Phase two.
    let mut obj = vec![zero(); ncols + 1];
    for (j, c) in objective.iter().enumerate() {
        obj[j] = -c.clone();
    }
    let mut t = Tableau {
        rows,
        obj,
        basis,
        ncols,
    };
    for i in 0..nrows {
        let b = t.basis[i];
        if b != usize::MAX && !t.obj[b].is_zero() {
            let factor = t.obj[b].clone();
            for j in 0..=ncols {
                let delta = &t.rows[i][j] * &factor;
                t.obj[j] -= delta;
            }
        }
    }
    if !t.solve() {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![zero(); nvars];
    for i in 0..nrows {
        let b = t.basis[i];
        if b != usize::MAX && b < nvars {
            point[b] = t.rows[i][ncols].clone();
        }
    }
    LpOutcome::Optimal {
        value: t.obj[ncols].clone(),
        point,
    }
}

/// Feasibility of the system with `x >= 0`.
pub fn feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    let objective = vec![BigRational::zero(); nvars];
    !matches!(maximize(&objective, constraints), LpOutcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2,6)
        let cons = vec![
            Constraint::new(vec![rat(1), rat(0)], Relation::Le, rat(4)),
            Constraint::new(vec![rat(0), rat(2)], Relation::Le, rat(12)),
            Constraint::new(vec![rat(3), rat(2)], Relation::Le, rat(18)),
        ];
        match maximize(&[rat(3), rat(5)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(36));
                assert_eq!(point, vec![rat(2), rat(6)]);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn infeasible_system() {
        let cons = vec![
            Constraint::new(vec![rat(1)], Relation::Ge, rat(3)),
            Constraint::new(vec![rat(1)], Relation::Le, rat(1)),
        ];
        assert!(!feasible(1, &cons));
    }

    #[test]
    fn unbounded_objective() {
        let cons = vec![Constraint::new(vec![rat(1)], Relation::Ge, rat(1))];
        assert_eq!(maximize(&[rat(1)], &cons), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_constraints() {
        // max x + y s.t. x + y = 2, x <= 1 -> 2 with x <= 1
        let cons = vec![
            Constraint::new(vec![rat(1), rat(1)], Relation::Eq, rat(2)),
            Constraint::new(vec![rat(1), rat(0)], Relation::Le, rat(1)),
        ];
        match maximize(&[rat(1), rat(1)], &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(2)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn minimize_via_negated_objective() {
        // min t s.t. t >= 6/5 encoded as max -t.
        let cons = vec![Constraint::new(
            vec![rat(1)],
            Relation::Ge,
            BigRational::new(6.into(), 5.into()),
        )];
        match maximize(&[rat(-1)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(-value, BigRational::new(6.into(), 5.into()));
                assert_eq!(point[0], BigRational::new(6.into(), 5.into()));
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
