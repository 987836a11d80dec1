//! Local `Q`-linear coordinates for finite families of rational functions.
//!
//! There is no global `Q`-basis of `Q(t)` here. A finite family is brought
//! to a common denominator and each numerator is read off as its vector of
//! monomial coefficients; `Q`-linear relations among the family are exactly
//! the linear relations among those vectors.

use num_traits::Zero;

use super::linalg::{rank, solve};
use super::{Polynomial, Rational, RationalFunction};

/// Output of [`q_basis`]: `matrix[i] · basis == inputs[i]` for every input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateDecomposition {
    pub basis: Vec<RationalFunction>,
    /// Indices into the input that were selected as the basis.
    pub basis_indices: Vec<usize>,
    pub matrix: Vec<Vec<Rational>>,
}

impl CoordinateDecomposition {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Recombine row `i` over the basis.
    pub fn reconstruct(&self, i: usize) -> RationalFunction {
        self.matrix[i]
            .iter()
            .zip(&self.basis)
            .fold(RationalFunction::zero(), |acc, (u, b)| acc.add(&b.scale(u)))
    }
}

/// Common monic denominator and numerator coefficient vectors.
pub fn rf_coordinates(qs: &[RationalFunction]) -> (Polynomial, Vec<Vec<Rational>>) {
    let mut den = Polynomial::one();
    for q in qs {
        if q.den().is_constant() {
            continue;
        }
        let g = den.gcd(q.den());
        den = den.mul(&q.den().div_rem(&g).0);
    }
    let den = den.monic();
    let nums: Vec<Polynomial> = qs
        .iter()
        .map(|q| {
            let (factor, rem) = den.div_rem(q.den());
            debug_assert!(rem.is_zero());
            q.num().mul(&factor)
        })
        .collect();
    let width = nums.iter().filter_map(|p| p.degree()).max().map_or(0, |d| d + 1);
    let vectors = nums
        .iter()
        .map(|p| (0..width).map(|k| p.coeff(k)).collect())
        .collect();
    (den, vectors)
}

/// First maximal `Q`-linearly independent subsequence of `qs`, with every
/// input expressed over it.
pub fn q_basis(qs: &[RationalFunction]) -> CoordinateDecomposition {
    let (_, vectors) = rf_coordinates(qs);
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<Rational>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        chosen_rows.push(v.clone());
        if rank(&chosen_rows) == chosen_rows.len() {
            chosen.push(i);
        } else {
            chosen_rows.pop();
        }
    }
    // columns of the system are the chosen vectors
    let width = vectors.first().map_or(0, |v| v.len());
    let system: Vec<Vec<Rational>> = (0..width)
        .map(|k| chosen.iter().map(|&j| vectors[j][k].clone()).collect())
        .collect();
    let matrix = vectors
        .iter()
        .map(|v| {
            if chosen.is_empty() {
                return Vec::new();
            }
            solve(&system, v)
                .expect("shape is consistent")
                .expect("every input lies in the span of the chosen subsequence")
        })
        .collect();
    CoordinateDecomposition {
        basis: chosen.iter().map(|&i| qs[i].clone()).collect(),
        basis_indices: chosen,
        matrix,
    }
}

/// Whether `qs` are `Q`-linearly independent.
pub fn q_independent(qs: &[RationalFunction]) -> bool {
    q_basis(qs).rank() == qs.len()
}
