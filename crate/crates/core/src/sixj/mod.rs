//! Connection coefficients between twisted-monomial bases.

pub mod double_sum;
pub mod explicit;
pub mod fusion;
pub mod gbt;
pub mod krawtchouk;
pub mod limits;
pub mod matrix;
pub mod paths;
pub mod qracah;
pub mod solve;
pub mod symmetry;
pub mod w6j;

pub use double_sum::r_double_sum;
pub use explicit::r_explicit;
pub use gbt::{gbt_coeff, gbt_row, GbtMode};
pub use matrix::{CoeffMatrix, ParamQuad, Route};
pub use paths::r_paths;
pub use solve::r_solve;

use crate::error::Result;

/// `R(a,b,c,d;N)` by the requested route.
pub fn compute(quad: &ParamQuad, route: Route) -> Result<CoeffMatrix> {
    match route {
        Route::Explicit => r_explicit(quad),
        Route::Recurrence => r_double_sum(quad),
        Route::Paths => r_paths(quad),
        Route::Solve => r_solve(quad),
    }
}
