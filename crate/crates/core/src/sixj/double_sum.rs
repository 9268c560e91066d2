//! `R_k^l = Σ_j C_j^k(a, c, bq^{N-k}) C_{l-j}^{N-j}(b, cq^j, d)`.

use crate::error::Result;
use crate::scalar::Complex;

use super::gbt::{gbt_row, GbtMode};
use super::matrix::{CoeffMatrix, ParamQuad, Route};

/// Inner rows `C^{N-j}(b, cq^j, d)` for `j = 0..=N`, shared by every row `k`.
fn inner_rows(quad: &ParamQuad, mode: GbtMode) -> Result<Vec<Vec<Complex>>> {
    let ParamQuad { b, c, d, n, ctx, .. } = *quad;
    (0..=n)
        .map(|j| gbt_row(n - j, b, c * ctx.qpow(j as i64), d, &ctx, mode))
        .collect()
}

fn row_from(k: usize, quad: &ParamQuad, inner: &[Vec<Complex>], mode: GbtMode) -> Result<Vec<Complex>> {
    let ParamQuad { a, b, c, n, ctx, .. } = *quad;
    let outer = gbt_row(k, a, c, b * ctx.qpow((n - k) as i64), &ctx, mode)?;
    let mut row = vec![Complex::new(0.0, 0.0); n + 1];
    for (j, &cj) in outer.iter().enumerate() {
        for (m, &cm) in inner[j].iter().enumerate() {
            row[j + m] += cj * cm;
        }
    }
    Ok(row)
}

/// Row `k` of the double-sum route.
pub fn double_sum_row(k: usize, quad: &ParamQuad) -> Result<Vec<Complex>> {
    let inner = inner_rows(quad, GbtMode::Recurrence)?;
    row_from(k, quad, &inner, GbtMode::Recurrence)
}

/// Full matrix from generalized binomial coefficients built by the recurrence.
pub fn r_double_sum(quad: &ParamQuad) -> Result<CoeffMatrix> {
    r_double_sum_with(quad, GbtMode::Recurrence)
}

/// Double sum with the binomial coefficients from either mode.
pub fn r_double_sum_with(quad: &ParamQuad, mode: GbtMode) -> Result<CoeffMatrix> {
    quad.check()?;
    let inner = inner_rows(quad, mode)?;
    let rows = (0..=quad.n)
        .map(|k| row_from(k, quad, &inner, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffMatrix::from_rows(rows, Route::Recurrence, Some(*quad)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, EllipticContext};
    use crate::sixj::explicit::r_explicit;

    fn quad(p: f64, n: usize) -> ParamQuad {
        let ctx = EllipticContext::elliptic(c(0.5, 0.3), c(p, 0.0)).unwrap();
        ParamQuad::new(c(0.8, 0.3), c(1.3, -0.4), c(0.6, 0.7), c(1.1, 0.2), n, ctx)
    }

    #[test]
    fn elementary_matrix() {
        let qd = quad(0.15, 1);
        let m1 = r_double_sum(&qd).unwrap();
        let m2 = r_explicit(&qd).unwrap();
        assert!(m1.rel_diff(&m2) < 1e-13);
    }

    #[test]
    fn agrees_with_explicit() {
        let m1 = r_double_sum(&quad(0.0, 3)).unwrap();
        let m2 = r_explicit(&quad(0.0, 3)).unwrap();
        assert!(m1.rel_diff(&m2) < 1e-9);
        let m1 = r_double_sum(&quad(0.15, 3)).unwrap();
        let m2 = r_explicit(&quad(0.15, 3)).unwrap();
        assert!(m1.rel_diff(&m2) < 1e-8);
    }

    #[test]
    fn closed_and_recurrence_binomials_agree() {
        let qd = quad(0.2, 4);
        let m1 = r_double_sum_with(&qd, GbtMode::Closed).unwrap();
        let m2 = r_double_sum_with(&qd, GbtMode::Recurrence).unwrap();
        assert!(m1.rel_diff(&m2) < 1e-10);
    }
}
