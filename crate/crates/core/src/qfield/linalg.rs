//! Gaussian elimination over exact fields.

use num_traits::Zero;

use super::{RationalFunction, Rational};
use crate::error::{Error, Result};

/// The handful of field operations elimination needs.
pub trait FieldElem: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, other: &Self) -> Self;
}

impl FieldElem for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl FieldElem for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFunction::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other)
    }
    fn div(&self, other: &Self) -> Self {
        RationalFunction::div(self, other).expect("nonzero pivot")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: FieldElem>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].div(&piv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldElem>(m: &[Vec<F>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

fn check_shape<F>(a: &[Vec<F>], target_len: usize) -> Result<usize> {
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    if a.len() != target_len {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but target has {} entries",
            a.len(),
            target_len
        )));
    }
    Ok(cols)
}

/// Solve `a · z = target`, with free variables set to zero. `Ok(None)` when
/// the system is inconsistent.
pub fn solve<F: FieldElem>(a: &[Vec<F>], target: &[F]) -> Result<Option<Vec<F>>> {
    let cols = check_shape(a, target.len())?;
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(target)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut z = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        z[c] = aug[r][cols].clone();
    }
    Ok(Some(z))
}

/// Basis of `{ z : a · z = 0 }`, one vector per free column.
pub fn nullspace<F: FieldElem + FieldOne>(a: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = F::zero().sub(&m[r][f]);
            }
            v
        })
        .collect()
}

pub trait FieldOne {
    fn one() -> Self;
}

impl FieldOne for Rational {
    fn one() -> Self {
        num_traits::One::one()
    }
}

impl FieldOne for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

/// Solve a rational system `a · z = target`, choosing zero for free
/// variables in column order.
pub fn linsolve_q(a: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    solve(a, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn linsolve_examples() {
        let z = linsolve_q(&m(&[&[1, 2], &[0, 3]]), &[q(5), q(6)]).unwrap();
        assert_eq!(z, Some(vec![q(1), q(2)]));
        let z = linsolve_q(&m(&[&[1, 1]]), &[q(4)]).unwrap();
        assert_eq!(z, Some(vec![q(4), q(0)]));
        let z = linsolve_q(&m(&[&[1], &[2]]), &[q(1), q(3)]).unwrap();
        assert_eq!(z, None);
    }

    #[test]
    fn linsolve_dimension_mismatch() {
        assert!(matches!(
            linsolve_q(&m(&[&[1, 2]]), &[q(1), q(2)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            linsolve_q(&[vec![q(1), q(2)], vec![q(1)]], &[q(1), q(2)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for row in &a {
                let dot: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(Zero::is_zero(&dot));
            }
        }
    }

    #[test]
    fn solve_over_rational_functions() {
        let t = RationalFunction::t();
        let one = RationalFunction::one();
        let a = vec![vec![t.clone(), one.clone()], vec![one.clone(), RationalFunction::zero()]];
        let b = vec![t.mul(&t).add(&one), t.clone()];
        let z = solve(&a, &b).unwrap().unwrap();
        assert_eq!(z, vec![t.clone(), one]);
    }
}
