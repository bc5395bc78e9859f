//! Shift-invariant operators as lazily generated `D`-series, normal-ordered
//! operators mixing coordinates with such series, and the finite-field
//! representation of the commutation relation.

pub mod complex;
pub mod modular;
pub mod normal;
pub mod series;

pub use complex::{ComplexOp, ComplexPoly};
pub use modular::{finite_field_rep, ModularMatrixRep};
pub use normal::{basic_xhat, check_ccr, symmetric_xhat, Letter, NormalOrderedOp};
pub use series::{indices_up_to, DeltaKind, ShiftInvariantOp, Stencil};

use crate::exact::SpacingScalar;
use crate::Result;

/// One-dimensional delta operator in the symbol `a`.
pub fn make_delta(kind: DeltaKind, spacing: SpacingScalar) -> Result<ShiftInvariantOp> {
    ShiftInvariantOp::make_delta(kind, spacing)
}

pub fn shift_op(c: SpacingScalar) -> ShiftInvariantOp {
    ShiftInvariantOp::shift_op(c)
}

pub fn pincherle(op: &ShiftInvariantOp) -> ShiftInvariantOp {
    op.pincherle()
}

pub fn invert_series(op: &ShiftInvariantOp) -> Result<ShiftInvariantOp> {
    op.inverse()
}
