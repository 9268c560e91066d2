//! Coefficients by collocation: the definition-level oracle.

use crate::basis::pair_collocation;
use crate::error::Result;

use super::matrix::{CoeffMatrix, ParamQuad, Route};

/// Full matrix by collocation, together with the worst held-out residual.
pub fn r_solve_with_residual(quad: &ParamQuad) -> Result<(CoeffMatrix, f64)> {
    quad.check()?;
    let sys = pair_collocation(quad.target(), &quad.ctx)?;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::with_capacity(quad.n + 1);
    for k in 0..=quad.n {
        let e = sys.expand(|xi| quad.source_element(k, xi))?;
        worst = worst.max(e.residual);
        rows.push(e.coeffs);
    }
    Ok((CoeffMatrix::from_rows(rows, Route::Solve, Some(*quad)), worst))
}

pub fn r_solve(quad: &ParamQuad) -> Result<CoeffMatrix> {
    Ok(r_solve_with_residual(quad)?.0)
}
