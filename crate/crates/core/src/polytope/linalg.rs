//! Exact Gaussian elimination over rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduces `rows` in place to reduced row echelon form and returns the
/// pivot column of each nonzero row, in order.
pub fn row_reduce(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let lead = rows[rank][col].clone();
        if !lead.is_one() {
            for v in rows[rank].iter_mut() {
                *v /= &lead;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut work = rows.to_vec();
    row_reduce(&mut work).len()
}

/// Dimension of the affine hull of `points` (−1 is reported as `None` for
/// the empty set).
pub fn affine_dimension(points: &[&[Rational]]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

/// Unique solution of `A x = b` when `A` has full column rank `d` and the
/// system is consistent.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational], d: usize) -> Option<Vec<Rational>> {
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return if d == 0 { Some(Vec::new()) } else { None };
    }
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&d) || pivots.len() != d {
        return None;
    }
    Some((0..d).map(|i| aug[i][d].clone()).collect())
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vector};

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vector(&[1, 2, 3]), vector(&[2, 4, 6]), vector(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vector(&[2, 1]), vector(&[1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vector(&[1, -1]), vector(&[-1, 2])]);
        assert!(inverse(&[vector(&[1, 1]), vector(&[2, 2])]).is_none());
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        let a = vec![vector(&[1, 1]), vector(&[1, -1]), vector(&[2, 0])];
        let b = vec![int(1), int(0), int(1)];
        assert_eq!(solve_unique(&a, &b, 2), Some(vec![frac(1, 2), frac(1, 2)]));
        let inconsistent = vec![int(1), int(0), int(3)];
        assert_eq!(solve_unique(&a, &inconsistent, 2), None);
    }

    #[test]
    fn affine_dimension_counts_independent_directions() {
        let pts = [vector(&[0, 0]), vector(&[1, 0]), vector(&[2, 0])];
        let refs: Vec<&[Rational]> = pts.iter().map(Vec::as_slice).collect();
        assert_eq!(affine_dimension(&refs), Some(1));
        assert_eq!(affine_dimension(&[]), None);
    }
}
