//! Brute-force basic-solution enumeration for small systems.
//!
//! Every column subset is tried: if its columns are independent and
//! `A_S·z = b` is consistent, the unique `z` padded with zeros is a basic
//! solution; nonnegative ones are the vertices of `{w ≥ 0 : A·w = b}`.
//! Feasibility holds iff at least one vertex exists. This shares no code
//! with the simplex in [`crate::linsys`] so the two can check each other.

use num_traits::{Signed, Zero};

use crate::linsys::LinearSystem;
use crate::scalar::Rational;

/// Largest column count accepted; the enumeration visits `2^n` subsets.
pub const MAX_COLUMNS: usize = 16;

/// Solves `A_S·z = b` by Gauss–Jordan elimination on the augmented matrix.
/// Returns `None` when the columns are dependent or the system is inconsistent.
fn solve_subset(system: &LinearSystem, columns: &[usize]) -> Option<Vec<Rational>> {
    let k = columns.len();
    let mut aug: Vec<Vec<Rational>> = system
        .matrix()
        .iter()
        .zip(system.rhs())
        .map(|(row, b)| {
            let mut r: Vec<Rational> = columns.iter().map(|&c| row[c].clone()).collect();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..k {
        let found = (pivot_row..aug.len()).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(pivot_row, found);
        let lead = aug[pivot_row][col].clone();
        for v in aug[pivot_row].iter_mut() {
            *v /= &lead;
        }
        for r in 0..aug.len() {
            if r == pivot_row || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in 0..=k {
                let delta = &factor * &aug[pivot_row][c];
                aug[r][c] -= delta;
            }
        }
        pivot_row += 1;
    }
    // Leftover rows are all-zero on the left; their rhs must vanish too.
    if aug[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(aug[..k].iter().map(|r| r[k].clone()).collect())
}

/// All distinct nonnegative basic solutions.
///
/// Panics if the system has more than [`MAX_COLUMNS`] columns.
pub fn basic_feasible_solutions(system: &LinearSystem) -> Vec<Vec<Rational>> {
    let n = system.cols();
    assert!(n <= MAX_COLUMNS, "brute force limited to {MAX_COLUMNS} columns");
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for mask in 0u32..(1 << n) {
        let columns: Vec<usize> = (0..n).filter(|c| mask & (1 << c) != 0).collect();
        if columns.len() > system.rows() {
            continue;
        }
        let Some(z) = solve_subset(system, &columns) else {
            continue;
        };
        if z.iter().any(Signed::is_negative) {
            continue;
        }
        let mut point = vec![Rational::zero(); n];
        for (&c, v) in columns.iter().zip(z) {
            point[c] = v;
        }
        if !found.contains(&point) {
            found.push(point);
        }
    }
    found
}

pub fn brute_force_feasible(system: &LinearSystem) -> bool {
    !basic_feasible_solutions(system).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{one, rational as q, zero};

    #[test]
    fn simplex_vertices() {
        // w0 + w1 + w2 = 1: vertices are the unit vectors.
        let s = LinearSystem::new(vec![vec![one(), one(), one()]], vec![one()], 3).unwrap();
        let mut v = basic_feasible_solutions(&s);
        v.sort();
        assert_eq!(
            v,
            vec![
                vec![zero(), zero(), one()],
                vec![zero(), one(), zero()],
                vec![one(), zero(), zero()],
            ]
        );
    }

    #[test]
    fn detects_conflict() {
        let s = LinearSystem::new(vec![vec![one()], vec![one()]], vec![q(1, 3), q(2, 3)], 1)
            .unwrap();
        assert!(!brute_force_feasible(&s));
    }

    #[test]
    fn zero_rhs_has_origin() {
        let s = LinearSystem::new(vec![vec![one(), -one()]], vec![zero()], 2).unwrap();
        assert!(basic_feasible_solutions(&s).contains(&vec![zero(), zero()]));
    }
}
