//! The array witnessing that `T_t` is not strongly dependent: rows are
//! directions `λ_{p_j}(x)`, columns disjoint intervals.

use super::feasible::{numeric_feasible, Feasibility, LinConstraint};
use super::session::{ModelElement, ModelSession};
use super::value::Value;
use crate::error::{Error, Result};
use crate::logic::Rel;
use crate::qfield::{Rational, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub row: usize,
    pub cols: (usize, usize),
    pub result: Feasibility,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonstrongReport {
    pub witness: ModelElement,
    /// `λ_{row_j}(witness)` for each row.
    pub values: Vec<Value>,
    pub pair_checks: Vec<PairCheck>,
}

impl NonstrongReport {
    pub fn rows_pairwise_inconsistent(&self) -> bool {
        self.pair_checks.iter().all(|p| p.result == Feasibility::Infeasible)
    }
}

fn interval(lo: &Rational, hi: &Rational) -> [LinConstraint; 2] {
    let one = Rational::from_integer(1.into());
    [
        LinConstraint::new(vec![-one.clone()], Value::rational(lo.clone()), Rel::Lt),
        LinConstraint::new(vec![one], Value::rational(-hi.clone()), Rel::Lt),
    ]
}

/// Witness for the path `path[j]` (a column index per row) and the
/// same-row feasibility report.
pub fn nonstrong_demo(
    s: &mut ModelSession,
    rows: &[RationalFunction],
    cols: &[(Rational, Rational)],
    path: &[usize],
) -> Result<NonstrongReport> {
    if path.len() != rows.len() {
        return Err(Error::DimensionMismatch(format!("{} rows, path of length {}", rows.len(), path.len())));
    }
    if let Some(&j) = path.iter().find(|&&j| j >= cols.len()) {
        return Err(Error::DimensionMismatch(format!("path column {j} out of range")));
    }
    let boxes: Vec<(Rational, Rational)> = path.iter().map(|&j| cols[j].clone()).collect();
    let witness = s.witness_in_boxes(rows, &boxes)?;
    let values = rows
        .iter()
        .map(|q| s.element_value(&witness.scale(q)))
        .collect::<Result<Vec<_>>>()?;
    let c = s.completion;
    let mut pair_checks = Vec::new();
    for row in 0..rows.len() {
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                let mut cons = interval(&cols[i].0, &cols[i].1).to_vec();
                cons.extend(interval(&cols[j].0, &cols[j].1));
                pair_checks.push(PairCheck {
                    row,
                    cols: (i, j),
                    result: numeric_feasible(1, &cons, &c),
                });
            }
        }
    }
    Ok(NonstrongReport {
        witness,
        values,
        pair_checks,
    })
}
