//! Exact rational equality systems `A·w = b, w ≥ 0` and a phase-one simplex
//! that either finds a point or returns a Farkas certificate.
//!
//! Certificate convention: `y` proves infeasibility iff `yᵀA ≤ 0` componentwise
//! and `yᵀb > 0`. Any nonnegative `w` with `A·w = b` would give
//! `0 ≥ yᵀA·w = yᵀb > 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cols: usize,
    row_labels: Vec<String>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, cols: usize) -> Result<Self> {
        if matrix.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.len(),
                got: rhs.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: row.len(),
            });
        }
        let row_labels = (0..matrix.len()).map(|i| format!("row {i}")).collect();
        Ok(Self {
            matrix,
            rhs,
            cols,
            row_labels,
        })
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                got: labels.len(),
            });
        }
        self.row_labels = labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    /// Rows of `other` appended below `self`. Column counts must agree.
    pub fn stack(mut self, other: LinearSystem) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        self.matrix.extend(other.matrix);
        self.rhs.extend(other.rhs);
        self.row_labels.extend(other.row_labels);
        Ok(self)
    }

    /// `A·w − b`.
    pub fn residual(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        if point.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: point.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| dot(row, point) - b)
            .collect())
    }

    /// Exact zero residual and nonnegative entries.
    pub fn is_solution(&self, point: &[Rational]) -> bool {
        match self.residual(point) {
            Ok(r) => r.iter().all(Zero::is_zero) && point.iter().all(|v| !v.is_negative()),
            Err(_) => false,
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.matrix.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let lead = m[rank][col].clone();
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &lead;
                    for c in col..self.cols {
                        let delta = &factor * &m[rank][c];
                        m[r][c] -= delta;
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// `yᵀA` and `yᵀb`.
    pub fn combine_rows(&self, y: &[Rational]) -> Result<(Vec<Rational>, Rational)> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                got: y.len(),
            });
        }
        let mut lhs = vec![Rational::zero(); self.cols];
        for (yi, row) in y.iter().zip(&self.matrix) {
            if yi.is_zero() {
                continue;
            }
            for (acc, a) in lhs.iter_mut().zip(row) {
                *acc += yi * a;
            }
        }
        Ok((lhs, dot(y, &self.rhs)))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// True iff `yᵀA ≤ 0` componentwise and `yᵀb > 0`, exactly.
pub fn verify_certificate(system: &LinearSystem, y: &[Rational]) -> Result<bool> {
    let (lhs, rhs) = system.combine_rows(y)?;
    Ok(lhs.iter().all(|v| !v.is_positive()) && rhs.is_positive())
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

/// Phase-one simplex with Bland's rule over exact rationals.
///
/// Rows with negative right-hand side are negated first so the artificial
/// basis starts feasible. At the optimum the simplex multipliers of the
/// negated system, mapped back through the row signs, are the certificate.
pub fn solve_feasibility(system: &LinearSystem) -> LpOutcome {
    let m = system.rows();
    let n = system.cols();
    let width = n + m;

    let signs: Vec<Rational> = system
        .rhs
        .iter()
        .map(|b| {
            if b.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();

    // [sign·A | I | sign·b]
    let mut tableau: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = system.matrix[i].iter().map(|a| a * &signs[i]).collect();
            row.extend((0..m).map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row.push(&system.rhs[i] * &signs[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs of min Σ artificials, plus the objective value in the last slot.
    let mut reduced = vec![Rational::zero(); width + 1];
    for j in 0..n {
        reduced[j] = -tableau.iter().fold(Rational::zero(), |acc, row| acc + &row[j]);
    }
    reduced[width] = -tableau.iter().fold(Rational::zero(), |acc, row| acc + &row[width]);

    while let Some(entering) = (0..width).find(|&j| reduced[j].is_negative()) {
        let leaving = (0..m)
            .filter(|&i| tableau[i][entering].is_positive())
            .map(|i| (&tableau[i][width] / &tableau[i][entering], basis[i], i))
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, _, i)| i)
            .expect("phase-one objective is bounded below");
        pivot(&mut tableau, &mut reduced, leaving, entering);
        basis[leaving] = entering;
    }

    let objective = -reduced[width].clone();
    if objective.is_zero() {
        let mut point = vec![Rational::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                point[var] = tableau[i][width].clone();
            }
        }
        LpOutcome::Feasible(point)
    } else {
        // Reduced cost of artificial i is 1 − y_i.
        let certificate = (0..m)
            .map(|i| (Rational::one() - &reduced[n + i]) * &signs[i])
            .collect();
        LpOutcome::Infeasible(certificate)
    }
}

fn pivot(tableau: &mut [Vec<Rational>], reduced: &mut [Rational], row: usize, col: usize) {
    let lead = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        *v /= &lead;
    }
    let pivot_row = tableau[row].clone();
    for (i, r) in tableau.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
    let factor = reduced[col].clone();
    if !factor.is_zero() {
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}
