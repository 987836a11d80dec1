//! Exact arithmetic in `Q` and `Q(t)`, local coordinates and rational linear
//! algebra.

mod coords;
pub mod linalg;
mod poly;
mod ratfunc;

pub use coords::{q_basis, q_independent, rf_coordinates, CoordinateDecomposition};
pub use linalg::linsolve_q;
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Field operation selector for [`rf_field_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

/// Dispatch a field operation; unary ops ignore `b`.
pub fn rf_field_op(
    op: FieldOp,
    a: &RationalFunction,
    b: Option<&RationalFunction>,
) -> crate::Result<RationalFunction> {
    let rhs = || b.ok_or_else(|| crate::Error::DimensionMismatch("binary op needs two operands".into()));
    Ok(match op {
        FieldOp::Add => a.add(rhs()?),
        FieldOp::Sub => a.sub(rhs()?),
        FieldOp::Mul => a.mul(rhs()?),
        FieldOp::Div => a.div(rhs()?)?,
        FieldOp::Inv => a.inv()?,
        FieldOp::Neg => a.neg(),
    })
}
