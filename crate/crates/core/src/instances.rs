//! Seeded random inputs for the checks: rational parameters, scalars,
//! invertible maps and structured point sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::Rng;

use crate::geometry::{random_generic, GeometryError, Params, PointConfig, Position};
use crate::linalg::{frac, int, Matrix, Rational};
use crate::seed;

const NUM_BOUND: i64 = 1000;
const DEN_BOUND: i64 = 60;

fn rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-NUM_BOUND..=NUM_BOUND), rng.gen_range(1..=DEN_BOUND))
}

/// `n` distinct rationals `a / b` with `|a| <= 1000`, `1 <= b <= 60`.
pub fn rational_params(n: usize, seed: u64) -> Params {
    let mut rng = seed::stream(seed, 0);
    let mut seen = BTreeSet::new();
    let mut t = Vec::with_capacity(n);
    while t.len() < n {
        let x = rational(&mut rng);
        if seen.insert(x.clone()) {
            t.push(x);
        }
    }
    Params::new(t).expect("distinct by construction")
}

/// `n` non-zero rationals.
pub fn nonzero_scalars(n: usize, seed: u64) -> Vec<Rational> {
    let mut rng = seed::stream(seed, 0);
    (0..n)
        .map(|_| loop {
            let x = rational(&mut rng);
            if !x.is_zero() {
                break x;
            }
        })
        .collect()
}

/// Random invertible `d x d` integer matrix with entries in `[-9, 9]`.
pub fn invertible_matrix(d: usize, seed: u64) -> Matrix {
    let mut rng = seed::stream(seed, 0);
    loop {
        let rows = (0..d).map(|_| (0..d).map(|_| int(rng.gen_range(-9..=9))).collect()).collect();
        let m = Matrix::from_rows_with_cols(rows, d).expect("square");
        if m.is_invertible() {
            return m;
        }
    }
}

/// Rational points `((1 - s^2) / (1 + s^2), 2 s / (1 + s^2))` of the unit
/// circle, avoiding the axes and with distinct slopes.
pub fn unit_circle_points(n: usize, seed: u64) -> PointConfig {
    let mut rng = seed::stream(seed, 0);
    let mut used = BTreeSet::new();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let s = rational(&mut rng);
        let s2 = &s * &s;
        let one = int(1);
        if s.is_zero() || s2 == one {
            continue;
        }
        let den = &one + &s2;
        let (x, y) = ((&one - &s2) / &den, (int(2) * &s) / &den);
        if used.insert(&y / &x) {
            points.push(alloc::vec![x, y]);
        }
    }
    PointConfig::new(2, points).expect("planar")
}

/// `n` points in `R^d` spanning a random subspace of dimension
/// `min(dim, n)`, in general position inside it. Requires `dim <= d`.
pub fn subspace_points(d: usize, dim: usize, n: usize, seed: u64) -> Result<PointConfig, GeometryError> {
    if dim == 0 {
        return PointConfig::new(d, alloc::vec![alloc::vec![Rational::zero(); d]; n]);
    }
    // dim points in linear general position in R^d are independent
    let basis = random_generic(d, dim, seed::derive(seed, 1), 50, Position::Linear)?;
    let coords = random_generic(dim, n, seed::derive(seed, 0), 50, Position::Linear)?;
    let points = coords
        .points()
        .iter()
        .map(|c| (0..d).map(|k| c.iter().zip(basis.points()).map(|(x, b)| x * &b[k]).sum()).collect())
        .collect();
    PointConfig::new(d, points)
}

/// Integer factor vectors `(a_1, ..., a_k)`, `(b_1, ..., b_k)` in `Z^n`.
pub fn integer_factors(k: usize, n: usize, seed: u64) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let mut rng = seed::stream(seed, 0);
    let mut draw = || (0..k).map(|_| (0..n).map(|_| int(rng.gen_range(-NUM_BOUND..=NUM_BOUND))).collect()).collect();
    let a = draw();
    let b = draw();
    (a, b)
}
