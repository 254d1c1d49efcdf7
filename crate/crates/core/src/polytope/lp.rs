//! Exact phase-one simplex (Bland's rule) for feasibility of
//! `{x >= 0 : A x = b}`.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Returns a feasible point of `{x >= 0 : A x = b}` if one exists.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }

    // tableau columns: n structural, m artificial, then rhs
    let width = n + m + 1;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut t = Vec::with_capacity(width);
        t.extend(row.iter().map(|v| if flip { -v } else { v.clone() }));
        t.extend((0..m).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
        t.push(if flip { -rhs } else { rhs.clone() });
        tab.push(t);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs for minimising the sum of artificials
    let mut cost = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            // unbounded direction of the auxiliary problem cannot occur; the
            // objective is bounded below by zero
            unreachable!("phase-one objective is bounded");
        };
        pivot(&mut tab, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, c: usize) {
    let lead = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v /= &lead;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}

/// Whether `point` is a convex combination of `generators`.
pub fn in_convex_hull(generators: &[&[Rational]], point: &[Rational]) -> bool {
    if generators.is_empty() {
        return false;
    }
    let d = point.len();
    let mut a: Vec<Vec<Rational>> = (0..d)
        .map(|i| generators.iter().map(|g| g[i].clone()).collect())
        .collect();
    a.push(vec![Rational::from_integer(1.into()); generators.len()]);
    let mut b = point.to_vec();
    b.push(Rational::from_integer(1.into()));
    feasible_point(&a, &b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, vector};

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0
        let a = vec![vector(&[1, 1]), vector(&[1, -1])];
        let b = vector(&[1, 0]);
        assert_eq!(feasible_point(&a, &b), Some(vec![frac(1, 2), frac(1, 2)]));
    }

    #[test]
    fn infeasible_sign_constraint() {
        // x + y = -1 with x, y >= 0
        let a = vec![vector(&[1, 1])];
        assert_eq!(feasible_point(&a, &vector(&[-1])), None);
    }

    #[test]
    fn hull_membership() {
        let pts = [vector(&[0, 0]), vector(&[2, 0]), vector(&[0, 2])];
        let refs: Vec<&[Rational]> = pts.iter().map(Vec::as_slice).collect();
        assert!(in_convex_hull(&refs, &vector(&[1, 1])));
        assert!(in_convex_hull(&refs, &[frac(1, 3), frac(1, 7)]));
        assert!(!in_convex_hull(&refs, &[frac(3, 2), frac(3, 4)]));
    }

    #[test]
    fn degenerate_redundant_rows() {
        let a = vec![vector(&[1, 1, 0]), vector(&[2, 2, 0]), vector(&[0, 0, 1])];
        let b = vector(&[1, 2, 0]);
        let x = feasible_point(&a, &b).unwrap();
        assert_eq!(&x[0] + &x[1], frac(1, 1));
    }
}
