//! Parameter symmetries of `R_k^l(a,b,c,d;N)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Complex;

use super::compute;
use super::matrix::{CoeffMatrix, ParamQuad};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    /// `R_k^l(a,b,c,d) = R_{N-k}^l(b,a,c,d)`.
    SwapAb,
    /// `R_k^l(a,b,c,d) = R_k^{N-l}(a,b,d,c)`.
    SwapCd,
    /// `R_k^l(a,b,c,d) = q^{k(k-1)} a^{2k} R_k^l(q^{1-k}/a,b,c,d)`, from
    /// `h_k(x;a) = q^{k(k-1)} a^{2k} h_k(x;q^{1-k}/a)`.
    InvertA,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::SwapAb, Symmetry::SwapCd, Symmetry::InvertA];
}

/// Recomputes `m` from the transformed problem (same route) and maps the
/// indices back, so the result should reproduce `m`.
pub fn apply_symmetry(m: &CoeffMatrix, which: Symmetry) -> Result<CoeffMatrix> {
    let quad = m
        .quad
        .ok_or_else(|| Error::Domain("matrix carries no parameter quad".into()))?;
    let n = quad.n;
    let mut out = CoeffMatrix::zeros(n, m.route, Some(quad));
    match which {
        Symmetry::SwapAb => {
            let t = compute(&quad.with(quad.b, quad.a, quad.c, quad.d), m.route)?;
            for k in 0..=n {
                for l in 0..=n {
                    out.set(k, l, t.get(n - k, l));
                }
            }
        }
        Symmetry::SwapCd => {
            let t = compute(&quad.with(quad.a, quad.b, quad.d, quad.c), m.route)?;
            for k in 0..=n {
                for l in 0..=n {
                    out.set(k, l, t.get(k, n - l));
                }
            }
        }
        Symmetry::InvertA => {
            for k in 0..=n {
                let (t, factor) = invert_a_row(&quad, k, m)?;
                for l in 0..=n {
                    out.set(k, l, factor * t.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// The transformed matrix for row `k` and the prefactor `q^{k(k-1)} a^{2k}`.
fn invert_a_row(quad: &ParamQuad, k: usize, m: &CoeffMatrix) -> Result<(CoeffMatrix, Complex)> {
    let ctx = quad.ctx;
    let ki = k as i64;
    let a2 = ctx.qpow(1 - ki) / quad.a;
    let t = compute(&quad.with(a2, quad.b, quad.c, quad.d), m.route)?;
    let factor = ctx.qpow(ki * (ki - 1)) * quad.a.powi(2 * k as i32);
    Ok((t, factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, EllipticContext};
    use crate::sixj::{r_explicit, Route};

    fn quad(p: f64) -> ParamQuad {
        let ctx = EllipticContext::elliptic(c(0.5, 0.3), c(p, 0.0)).unwrap();
        ParamQuad::new(c(0.8, 0.3), c(1.3, -0.4), c(0.6, 0.7), c(1.1, 0.2), 2, ctx)
    }

    #[test]
    fn each_symmetry_reproduces_matrix() {
        for p in [0.0, 0.15] {
            let m = r_explicit(&quad(p)).unwrap();
            for s in Symmetry::ALL {
                let t = apply_symmetry(&m, s).unwrap();
                assert!(t.rel_diff(&m) < 1e-10, "{s:?} p={p}");
            }
        }
    }

    #[test]
    fn swap_twice_is_identity() {
        let m = r_explicit(&quad(0.15)).unwrap();
        let once = apply_symmetry(&m, Symmetry::SwapAb).unwrap();
        let twice = apply_symmetry(&once, Symmetry::SwapAb).unwrap();
        assert!(twice.rel_diff(&m) < 1e-12);
    }

    #[test]
    fn inverted_prefactor_sign_matters() {
        // q^{-k(k-1)} a^{-2k} in place of q^{k(k-1)} a^{2k} fails at k = 2
        let qd = quad(0.0).with_degree(3);
        let m = r_explicit(&qd).unwrap();
        let ctx = qd.ctx;
        let t = r_explicit(&qd.with(ctx.qpow(-1) / qd.a, qd.b, qd.c, qd.d)).unwrap();
        let wrong = ctx.qpow(-2) * qd.a.powi(-4) * t.get(2, 1);
        let right = ctx.qpow(2) * qd.a.powi(4) * t.get(2, 1);
        assert!((right - m.get(2, 1)).norm() < 1e-10 * m.get(2, 1).norm());
        assert!((wrong - m.get(2, 1)).norm() > 1e-3 * m.get(2, 1).norm());
    }

    #[test]
    fn needs_quad() {
        let m = CoeffMatrix::identity(2, Route::Explicit, None);
        assert!(apply_symmetry(&m, Symmetry::SwapAb).is_err());
    }
}
