//! A compact two-phase dense simplex and the margin-feasibility solver
//! behind the separator-based learner.
//!
//! The solver handles `min c·x` subject to row constraints `a·x {≤,=,≥} b`
//! with `x ≥ 0`. Phase one drives artificial variables out of the basis;
//! pivoting is Dantzig rule with a Bland fallback after stalls.

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// `min c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

const EPS: f64 = 1e-9;
const STALL_LIMIT: usize = 64;

struct Tableau {
    rows: usize,
    cols: usize, // structural + slack/surplus + artificial + rhs
    data: Vec<f64>,
    basis: Vec<usize>,
    objective: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let piv = self.at(pr, pc);
        debug_assert!(piv.abs() > EPS);
        for c in 0..self.cols {
            *self.at_mut(pr, c) /= piv;
        }
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor == 0.0 {
                continue;
            }
            for c in 0..self.cols {
                let v = self.at(pr, c);
                *self.at_mut(r, c) -= factor * v;
            }
        }
        self.basis[pr] = pc;
    }

    fn reduced_costs(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.cols - 1];
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = self.objective[b];
            if cb == 0.0 {
                continue;
            }
            for (c, zc) in z.iter_mut().enumerate() {
                *zc += cb * self.at(r, c);
            }
        }
        (0..self.cols - 1)
            .map(|c| self.objective[c] - z[c])
            .collect()
    }

    /// Simplex iterations restricted to entering columns `< allowed_cols`.
    /// Returns `false` when the program is unbounded in that column range.
    fn optimize(&mut self, allowed_cols: usize) -> bool {
        let mut stalls = 0usize;
        loop {
            let reduced = self.reduced_costs();
            let entering = if stalls < STALL_LIMIT {
                let mut best = None;
                let mut best_val = -EPS;
                for (c, &rc) in reduced.iter().enumerate().take(allowed_cols) {
                    if rc < best_val {
                        best_val = rc;
                        best = Some(c);
                    }
                }
                best
            } else {
                // Bland's rule: first improving column, cycle-free.
                reduced
                    .iter()
                    .enumerate()
                    .take(allowed_cols)
                    .find(|(_, &rc)| rc < -EPS)
                    .map(|(c, _)| c)
            };
            let Some(pc) = entering else {
                return true;
            };
            let rhs_col = self.cols - 1;
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > EPS {
                    let ratio = self.at(r, rhs_col) / a;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS
                                || (ratio < lratio + EPS && self.basis[r] < self.basis[lr])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((pr, ratio)) = leave else {
                return false;
            };
            if ratio.abs() < EPS {
                stalls += 1;
            } else {
                stalls = 0;
            }
            self.pivot(pr, pc);
        }
    }
}

/// Two-phase dense simplex.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    let m = lp.rows.len();
    for row in &lp.rows {
        assert_eq!(row.coeffs.len(), n, "row width mismatch");
    }

    let n_slack = lp.rows.iter().filter(|r| r.cmp != Cmp::Eq).count();
    // An artificial on every row keeps phase-one construction uniform; the
    // redundant ones get priced out in the first pivots.
    let n_art = m;
    let cols = n + n_slack + n_art + 1;
    let mut data = vec![0.0; m * cols];
    let mut basis = vec![0usize; m];

    let mut slack_idx = 0;
    for (r, row) in lp.rows.iter().enumerate() {
        let flip = row.rhs < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        for (c, &a) in row.coeffs.iter().enumerate() {
            data[r * cols + c] = sign * a;
        }
        data[r * cols + cols - 1] = sign * row.rhs;
        let cmp = match (row.cmp, flip) {
            (Cmp::Eq, _) => Cmp::Eq,
            (Cmp::Le, false) | (Cmp::Ge, true) => Cmp::Le,
            (Cmp::Ge, false) | (Cmp::Le, true) => Cmp::Ge,
        };
        match cmp {
            Cmp::Le => {
                data[r * cols + n + slack_idx] = 1.0;
                slack_idx += 1;
            }
            Cmp::Ge => {
                data[r * cols + n + slack_idx] = -1.0;
                slack_idx += 1;
            }
            Cmp::Eq => {}
        }
        let art_col = n + n_slack + r;
        data[r * cols + art_col] = 1.0;
        basis[r] = art_col;
    }

    let mut tab = Tableau {
        rows: m,
        cols,
        data,
        basis,
        objective: vec![0.0; cols - 1],
    };

    // Phase one: minimize the sum of artificials.
    for c in n + n_slack..cols - 1 {
        tab.objective[c] = 1.0;
    }
    if !tab.optimize(cols - 1) {
        return Err(Error::Unbounded);
    }
    let art_sum: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n + n_slack)
        .map(|(r, _)| tab.at(r, cols - 1))
        .sum();
    if art_sum > 1e-7 {
        return Ok(LpOutcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= n + n_slack {
            if let Some(pc) = (0..n + n_slack).find(|&c| tab.at(r, c).abs() > EPS) {
                tab.pivot(r, pc);
            }
        }
    }

    // Phase two on the real objective, artificial columns excluded.
    tab.objective = vec![0.0; cols - 1];
    tab.objective[..n].copy_from_slice(&lp.objective);
    if !tab.optimize(n + n_slack) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.at(r, cols - 1);
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// A labeled point for margin feasibility.
#[derive(Debug, Clone)]
pub struct LabeledPoint {
    pub x: Vec<f64>,
    pub label: i8,
}

/// A nonnegative separator found by [`separate_with_margin`].
#[derive(Debug, Clone)]
pub struct Separator {
    pub v: Vec<f64>,
    /// Worst achieved normalized margin over all points.
    pub margin: f64,
}

/// Finds `v ∈ R^dim` with `v ≥ 0`, `v_j = 0` for `j` flagged in `zero`, and
/// `label · (v · x) ≥ margin · ‖x‖` on every labeled point. Callers wanting
/// a signed coordinate (the learners' `-z`) negate that coordinate of the
/// points instead.
///
/// Maximizes the normalized margin over a growing working set: solve the
/// small max-margin program exactly, scan all points for violations, add the
/// worst ones, repeat. The normalization `Σ_j v_j = 1` makes the reported
/// margin scale-free; when even the relaxation's optimum falls short of
/// `margin`, the instance is infeasible and is reported as such.
pub fn separate_with_margin(
    points: &[LabeledPoint],
    dim: usize,
    zero: &[bool],
    margin: f64,
) -> Result<Separator> {
    assert_eq!(zero.len(), dim);
    if margin <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "margin",
            reason: "margin must be positive".into(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    let norms: Vec<f64> = points
        .iter()
        .map(|p| p.x.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    if let Some(i) = norms.iter().position(|&v| v < 1e-300) {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("point {i} has zero norm"),
        });
    }

    let free: Vec<usize> = (0..dim).filter(|&j| !zero[j]).collect();
    let nv = free.len() + 2;
    let gamma_p = free.len();
    let gamma_m = free.len() + 1;

    let margin_of = |v: &[f64], p: &LabeledPoint, norm: f64| -> f64 {
        let dot: f64 = v.iter().zip(&p.x).map(|(a, b)| a * b).sum();
        p.label as f64 * dot / norm
    };

    // Working-set loop: solve the exact max-margin program on a small
    // subset, scan everything, pull in the worst violators. Add-only with
    // small batches keeps the inner tableaus tiny; the relaxation optimum
    // is monotone under growth, so the infeasibility test stays sound.
    let mut working: Vec<usize> = Vec::new();
    let step = (points.len() / 64).max(1);
    for i in (0..points.len()).step_by(step) {
        working.push(i);
    }

    let mut v = vec![0.0; dim];
    for round in 0..400 {
        // max gamma  s.t.  label_i (v·x_i)/‖x_i‖ ≥ gamma (i in W),
        //                  Σ v_free = 1, v ≥ 0.
        let mut rows = Vec::with_capacity(working.len() + 1);
        for &i in &working {
            let p = &points[i];
            let mut coeffs = vec![0.0; nv];
            for (vi, &j) in free.iter().enumerate() {
                coeffs[vi] = p.label as f64 * p.x[j] / norms[i];
            }
            coeffs[gamma_p] = -1.0;
            coeffs[gamma_m] = 1.0;
            rows.push(Row {
                coeffs,
                cmp: Cmp::Ge,
                rhs: 0.0,
            });
        }
        let mut norm_row = vec![0.0; nv];
        for coeff in norm_row.iter_mut().take(free.len()) {
            *coeff = 1.0;
        }
        rows.push(Row {
            coeffs: norm_row,
            cmp: Cmp::Eq,
            rhs: 1.0,
        });
        let mut objective = vec![0.0; nv];
        objective[gamma_p] = -1.0;
        objective[gamma_m] = 1.0;

        let outcome = solve(&LinearProgram { objective, rows })?;
        let x = match outcome {
            LpOutcome::Optimal { x, .. } => x,
            // The norm row plus v ≥ 0 is always satisfiable and margins are
            // bounded, so neither branch is reachable on valid input.
            LpOutcome::Infeasible | LpOutcome::Unbounded => {
                return Err(Error::SolverStalled { iterations: round })
            }
        };
        let gamma = x[gamma_p] - x[gamma_m];
        if gamma < margin {
            return Err(Error::Infeasible { margin });
        }
        v.iter_mut().for_each(|c| *c = 0.0);
        for (vi, &j) in free.iter().enumerate() {
            v[j] = x[vi];
        }

        let mut violations: Vec<(usize, f64)> = Vec::new();
        let mut worst = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            let m = margin_of(&v, p, norms[i]);
            worst = worst.min(m);
            if m < margin - 1e-12 {
                violations.push((i, m));
            }
        }
        if violations.is_empty() {
            return Ok(Separator { v, margin: worst });
        }
        violations.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        for &(i, _) in violations.iter().take(16) {
            if !working.contains(&i) {
                working.push(i);
            }
        }
        if working.len() > 4096 {
            return Err(Error::SolverStalled { iterations: round });
        }
    }
    Err(Error::SolverStalled { iterations: 400 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_textbook_maximization() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  (2, 6), 36.
        let lp = LinearProgram {
            objective: vec![-3.0, -5.0],
            rows: vec![
                Row {
                    coeffs: vec![1.0, 0.0],
                    cmp: Cmp::Le,
                    rhs: 4.0,
                },
                Row {
                    coeffs: vec![0.0, 2.0],
                    cmp: Cmp::Le,
                    rhs: 12.0,
                },
                Row {
                    coeffs: vec![3.0, 2.0],
                    cmp: Cmp::Le,
                    rhs: 18.0,
                },
            ],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_relative_eq!(x[0], 2.0, epsilon = 1e-7);
                assert_relative_eq!(x[1], 6.0, epsilon = 1e-7);
                assert_relative_eq!(value, -36.0, epsilon = 1e-7);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn handles_equalities_and_lower_bounds() {
        // min x + y s.t. x + y = 2, x ≥ 0.5  →  value 2.
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            rows: vec![
                Row {
                    coeffs: vec![1.0, 1.0],
                    cmp: Cmp::Eq,
                    rhs: 2.0,
                },
                Row {
                    coeffs: vec![1.0, 0.0],
                    cmp: Cmp::Ge,
                    rhs: 0.5,
                },
            ],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_relative_eq!(value, 2.0, epsilon = 1e-7);
                assert!(x[0] >= 0.5 - 1e-9);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![
                Row {
                    coeffs: vec![1.0],
                    cmp: Cmp::Le,
                    rhs: 1.0,
                },
                Row {
                    coeffs: vec![1.0],
                    cmp: Cmp::Ge,
                    rhs: 2.0,
                },
            ],
        };
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn detects_unboundedness() {
        let lp = LinearProgram {
            objective: vec![-1.0],
            rows: vec![Row {
                coeffs: vec![-1.0],
                cmp: Cmp::Le,
                rhs: 0.0,
            }],
        };
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn negative_rhs_rows_normalize() {
        // min x s.t. -x ≤ -3, i.e. x ≥ 3.
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![Row {
                coeffs: vec![-1.0],
                cmp: Cmp::Le,
                rhs: -3.0,
            }],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, .. } => assert_relative_eq!(x[0], 3.0, epsilon = 1e-7),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn separates_a_single_positive_point() {
        // (e_1, 1) labeled +1: with the last coordinate negated, v = (w, z)
        // and v·x' = w_1 - z. The witness w = (2, 0), z = 1 checks out.
        let points = vec![LabeledPoint {
            x: vec![1.0, 0.0, -1.0],
            label: 1,
        }];
        let sep = separate_with_margin(&points, 3, &[false, false, false], 1e-6).unwrap();
        let dot: f64 = sep.v.iter().zip(&points[0].x).map(|(a, b)| a * b).sum();
        assert!(dot >= 1e-6 * 2f64.sqrt() - 1e-12);
        let witness = [2.0, 0.0, 1.0];
        let wdot: f64 = witness.iter().zip(&points[0].x).map(|(a, b)| a * b).sum();
        assert!(wdot > 0.0);
    }

    #[test]
    fn contradictory_labels_are_infeasible() {
        let points = vec![
            LabeledPoint {
                x: vec![1.0, 1.0],
                label: 1,
            },
            LabeledPoint {
                x: vec![1.0, 1.0],
                label: -1,
            },
        ];
        assert!(matches!(
            separate_with_margin(&points, 2, &[false, false], 1e-6),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn zero_coordinates_are_respected() {
        let points = vec![
            LabeledPoint {
                x: vec![1.0, 1.0, -0.5],
                label: 1,
            },
            LabeledPoint {
                x: vec![0.0, 1.0, -2.0],
                label: -1,
            },
        ];
        let zero = vec![true, false, false];
        let sep = separate_with_margin(&points, 3, &zero, 1e-6).unwrap();
        assert_eq!(sep.v[0], 0.0);
        for p in &points {
            let dot: f64 = sep.v.iter().zip(&p.x).map(|(a, b)| a * b).sum();
            assert!(p.label as f64 * dot > 0.0);
        }
    }

    #[test]
    fn scales_to_many_redundant_points() {
        let mut points = Vec::new();
        for i in 0..5000 {
            let t = (i % 100) as f64 / 100.0;
            points.push(LabeledPoint {
                x: vec![1.0 + t, 1.0],
                label: 1,
            });
            points.push(LabeledPoint {
                x: vec![t, -3.0],
                label: -1,
            });
        }
        let sep = separate_with_margin(&points, 2, &[false, false], 1e-6).unwrap();
        assert!(sep.margin >= 1e-6);
        for p in &points {
            let dot: f64 = sep.v.iter().zip(&p.x).map(|(a, b)| a * b).sum();
            assert!(p.label as f64 * dot > 0.0);
        }
    }
}
