//! Double description method for pointed polyhedral cones.
//!
//! The cone is `{z : row · z >= 0 for every row}` over integer rows. Rays
//! are kept as primitive integer vectors; each ray carries the set of
//! processed constraints it saturates, and adjacency of a positive and a
//! negative ray is decided combinatorially from those sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::linalg;
use crate::rational::{primitive_integer_vector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum DdError {
    /// The constraint rows do not have full rank, so the cone has a
    /// nontrivial lineality space.
    NotPointed { rank: usize, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Extreme rays of the cone `{z in R^dim : rows[k] · z >= 0}`, as
/// primitive integer vectors in a deterministic order (sorted).
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>, DdError> {
    let rational_rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let basis = independent_rows(&rational_rows, dim);
    if basis.len() < dim {
        return Err(DdError::NotPointed {
            rank: basis.len(),
            dim,
        });
    }

    let square: Vec<Vec<Rational>> = basis.iter().map(|&i| rational_rows[i].clone()).collect();
    let inv = linalg::inverse(&square).expect("basis rows are independent");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let column: Vec<Rational> = (0..dim).map(|i| inv[i][j].clone()).collect();
            let mut zeros = Bits::new(rows.len());
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    zeros.set(row);
                }
            }
            Ray {
                coords: primitive_integer_vector(&column),
                zeros,
            }
        })
        .collect();

    let mut in_basis = vec![false; rows.len()];
    for &b in &basis {
        in_basis[b] = true;
    }
    let min_common = dim.saturating_sub(2) as u32;

    for (k, row) in rows.iter().enumerate() {
        if in_basis[k] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.zeros.set(k);
                }
            }
            continue;
        }

        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut created = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let common = rays[p].zeros.and(&rays[m].zeros);
                if common.count() < min_common {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(r, ray)| r != p && r != m && common.is_subset_of(&ray.zeros));
                if blocked {
                    continue;
                }
                let coords: Vec<BigInt> = rays[m]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xm, xp)| &values[p] * xm - &values[m] * xp)
                    .collect();
                let mut zeros = common;
                zeros.set(k);
                created.push(Ray {
                    coords: primitive(coords),
                    zeros,
                });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (ray, v) in rays.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            let mut ray = ray;
            if v.is_zero() {
                ray.zeros.set(k);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.coords).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Greedily picks up to `dim` linearly independent rows, preferring
/// earlier indices.
fn independent_rows(rows: &[Vec<Rational>], dim: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        let mut candidate = echelon.clone();
        candidate.push(row.clone());
        if linalg::rank(&candidate) > echelon.len() {
            echelon = candidate;
            chosen.push(i);
        }
    }
    chosen
}
