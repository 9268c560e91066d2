//! q-Racah level:
//! `(ax;q^{-1})_k (bx;q^{-1})_{N-k} = Σ_l C_k^l (cx;q)_l (dx;q)_{N-l}`.

use crate::error::{Error, Result};
use crate::scalar::Complex;
use crate::series::{eval_rphi_s, SeriesSpec};

use super::matrix::{CoeffMatrix, ParamQuad, Route};

/// `C_k^l(a,b,c,d;N;q)` from the `4φ3` closed form.
pub fn qracah_c(k: usize, l: usize, quad: &ParamQuad) -> Result<Complex> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    if !ctx.is_trigonometric() {
        return Err(Error::Domain("q-Racah coefficients need p = 0".into()));
    }
    if k > n || l > n {
        return Err(Error::Domain(format!("indices ({k},{l}) outside 0..={n}")));
    }
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    let q = |e: i64| ctx.qpow(e);
    let num = q(li * (li - ni))
        * ctx.binomial(n, li)?
        * ctx.poch(q(1 - ni) * b / d, li)?
        * ctx.poch(q(1 - ni) * b / c, ni - li)?
        * ctx.poch(q(1 - ki) * a / c, ki)?;
    let den = ctx.poch_den(q(li - ni) * c / d, li, "(q^{l-N} c/d)_l")?
        * ctx.poch_den(q(-li) * d / c, ni - li, "(q^{-l} d/c)_{N-l}")?
        * ctx.poch_den(q(1 - ni) * b / c, ki, "(q^{1-N} b/c)_k")?;
    if num.norm() == 0.0 {
        return Ok(num);
    }
    let spec = SeriesSpec::basic(
        k,
        &[q(-li), q(ki - ni) * b / a, q(li - ni) * c / d],
        &[q(-ni), c / a, q(1 - ni) * b / d],
        ctx.q(),
        ctx.q(),
    );
    Ok(num / den * eval_rphi_s(&spec)?)
}

pub fn qracah_matrix(quad: &ParamQuad) -> Result<CoeffMatrix> {
    let rows = (0..=quad.n)
        .map(|k| (0..=quad.n).map(|l| qracah_c(k, l, quad)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffMatrix::from_rows(rows, Route::Explicit, Some(*quad)))
}

/// The partner matrix `C(c,d,a,b;N;q^{-1})` of the orthogonality relation.
pub fn qracah_dual_matrix(quad: &ParamQuad) -> Result<CoeffMatrix> {
    let dual = ParamQuad {
        ctx: quad.ctx.inverted_base(),
        ..quad.inverse()
    };
    qracah_matrix(&dual)
}

/// `D_k^l` of `(ax;q)_k (bx;q)_{N-k} = Σ_l D_k^l (cx;q)_l (dx;q)_{N-l}`,
/// via `D_k^l(a,b,c,d) = C_k^l(aq^{k-1}, bq^{N-k-1}, c, d)`.
pub fn qracah_d(k: usize, l: usize, quad: &ParamQuad) -> Result<Complex> {
    let ctx = quad.ctx;
    let shifted = quad.with(
        quad.a * ctx.qpow(k as i64 - 1),
        quad.b * ctx.qpow(quad.n as i64 - k as i64 - 1),
        quad.c,
        quad.d,
    );
    qracah_c(k, l, &shifted)
}
