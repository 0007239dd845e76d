//! Dense tableau simplex for `max cᵀz` subject to `Az ≤ b`, `z ≥ 0`, with
//! `b ≥ 0` so that the slack basis is feasible. Bland's rule prevents
//! cycling on the heavily degenerate programs met here.

const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { objective: f64, solution: Vec<f64> },
    Unbounded,
    PivotLimit,
}

/// `constraints` holds `A` row-major with `vars` columns.
pub fn maximize(objective: &[f64], constraints: &[f64], bounds: &[f64]) -> LpOutcome {
    let vars = objective.len();
    let rows = bounds.len();
    debug_assert_eq!(constraints.len(), rows * vars);
    debug_assert!(bounds.iter().all(|&b| b >= 0.0));
    let width = vars + rows + 1;
    let rhs = width - 1;
    // Row 0 holds reduced costs; rows 1..=rows hold the constraints.
    let mut tableau = vec![0.0; (rows + 1) * width];
    for (j, &c) in objective.iter().enumerate() {
        tableau[j] = -c;
    }
    for i in 0..rows {
        let row = &mut tableau[(i + 1) * width..(i + 2) * width];
        row[..vars].copy_from_slice(&constraints[i * vars..(i + 1) * vars]);
        row[vars + i] = 1.0;
        row[rhs] = bounds[i];
    }
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(entering) = (0..vars + rows).find(|&j| tableau[j] < -PIVOT_TOL) else {
            let mut solution = vec![0.0; vars];
            for (i, &b) in basis.iter().enumerate() {
                if b < vars {
                    solution[b] = tableau[(i + 1) * width + rhs];
                }
            }
            return LpOutcome::Optimal {
                objective: tableau[rhs],
                solution,
            };
        };
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..rows {
            let a = tableau[(i + 1) * width + entering];
            if a > PIVOT_TOL {
                let ratio = tableau[(i + 1) * width + rhs] / a;
                let better = match leaving {
                    None => true,
                    Some((r, best)) => ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[r]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tableau, width, pivot_row + 1, entering);
        basis[pivot_row] = entering;
    }
    LpOutcome::PivotLimit
}

fn pivot(tableau: &mut [f64], width: usize, row: usize, col: usize) {
    let scale = tableau[row * width + col];
    for v in &mut tableau[row * width..(row + 1) * width] {
        *v /= scale;
    }
    let pivot_row = tableau[row * width..(row + 1) * width].to_vec();
    let total_rows = tableau.len() / width;
    for r in (0..total_rows).filter(|&r| r != row) {
        let factor = tableau[r * width + col];
        if factor != 0.0 {
            for (v, p) in tableau[r * width..(r + 1) * width].iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            tableau[r * width + col] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_program() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let outcome = maximize(&[3.0, 5.0], &[1.0, 0.0, 0.0, 2.0, 3.0, 2.0], &[4.0, 12.0, 18.0]);
        match outcome {
            LpOutcome::Optimal { objective, solution } => {
                assert!((objective - 36.0).abs() < 1e-12);
                assert!((solution[0] - 2.0).abs() < 1e-12 && (solution[1] - 6.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        assert_eq!(maximize(&[1.0, 0.0], &[0.0, 1.0], &[1.0]), LpOutcome::Unbounded);
    }
}
