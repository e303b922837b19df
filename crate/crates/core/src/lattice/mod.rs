//! Exact integer and rational linear algebra: Smith normal form, kernels,
//! LP feasibility with strict inequalities, and cone membership.

mod lp;
mod matrix;
mod simplex;
mod snf;

pub use lp::{
    cone_member, lp_feasible, recession_direction, recession_trivial, verify_cone_certificate, ConeCertificate,
    ConeMode, Constraint, Feasibility, LinearSystem, LpError, MarginOutcome, StrictMode,
};
pub use matrix::{gcd_all, parse_rational, rat_to_f64, rat_to_string, IntMatrix, RatVector};
pub use simplex::{maximize, LpStatus};
pub use snf::{kernel_basis, row_hermite, smith_normal_form, Snf};
