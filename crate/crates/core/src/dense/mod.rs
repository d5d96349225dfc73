//! Small dense kernels: pivoted Householder QR, triangular solves, inversion
//! of the `m × m` Gram matrix, and a Jacobi SVD used as an oracle.

mod inverse;
mod qr;
mod svd;
mod triangular;

pub use inverse::invert_small;
pub use qr::{qr_pivoted, PivotedQr};
pub use svd::{svd_dense, svd_dense_with_cap, svd_thin, SingularValues, ThinSvd, ORACLE_CAP};
pub use triangular::{solve_upper, solve_upper_adjoint, solve_upper_adjoint_in_place, solve_upper_in_place};
