//! Closed-form coefficients: prefactor times a balanced `12V11` (`10W9` at `p = 0`).

use crate::basis::pair_collocation;
use crate::error::{Error, Result};
use crate::scalar::{balanced_ratio, check_divisor, Complex};
use crate::series::{eval_v12, SeriesSpec};

use super::matrix::{CoeffMatrix, ParamQuad, Route};

/// Entry `R_k^l` by the closed formula, evaluated through
/// `R_k^l(a,b,c,d) = R_{N-k}^{N-l}(b,a,d,c)` when that series is shorter
/// (the long series near `k = l = N` cancel badly at the elliptic level).
/// A singular prefactor in the chosen orientation falls back to the other.
pub fn explicit_entry(k: usize, l: usize, quad: &ParamQuad) -> Result<Complex> {
    let n = quad.n;
    let flipped = ParamQuad {
        a: quad.b,
        b: quad.a,
        c: quad.d,
        d: quad.c,
        ..*quad
    };
    let first = |flip: bool| {
        if flip {
            oriented_entry(n - k, n - l, &flipped)
        } else {
            oriented_entry(k, l, quad)
        }
    };
    let flip = (n - k).min(n - l) < k.min(l);
    match first(flip) {
        Err(Error::Singular { .. }) => first(!flip),
        other => other,
    }
}

/// Entry `R_k^l` by the closed formula as written, series of length `min(k,l)`.
pub fn oriented_entry(k: usize, l: usize, quad: &ParamQuad) -> Result<Complex> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    let q = |e: i64| ctx.qpow(e);

    let mut nums = vec![q(li * (li - ni))];
    let mut dens = Vec::new();
    let push_num = |x: Complex, len: i64, nums: &mut Vec<Complex>| -> Result<()> {
        let mut y = x;
        for _ in 0..len {
            nums.push(ctx.theta(y)?);
            y *= ctx.q();
        }
        Ok(())
    };
    let push_den = |x: Complex, len: i64, name: &str, dens: &mut Vec<Complex>| -> Result<()> {
        let mut y = x;
        for _ in 0..len {
            let v = ctx.theta(y)?;
            check_divisor(v, y, name)?;
            dens.push(v);
            y *= ctx.q();
        }
        Ok(())
    };
    // q-binomial [N l]
    push_num(ctx.q(), ni, &mut nums)?;
    push_den(ctx.q(), li, "(q)_l", &mut dens)?;
    push_den(ctx.q(), ni - li, "(q)_{N-l}", &mut dens)?;

    push_num(a * c, ki, &mut nums)?;
    push_num(a / c, ki, &mut nums)?;
    push_num(q(ni - li) * b * d, li, &mut nums)?;
    push_num(b / d, li, &mut nums)?;
    push_num(b / c, ni - ki, &mut nums)?;
    push_num(b / c, ni - li, &mut nums)?;
    push_num(b * c, ni - ki, &mut nums)?;

    push_den(q(li - ni) * c / d, li, "(q^{l-N} c/d)_l", &mut dens)?;
    push_den(q(-li) * d / c, ni - li, "(q^{-l} d/c)_{N-l}", &mut dens)?;
    push_den(c * d, ni, "(cd)_N", &mut dens)?;
    push_den(b / c, ni, "(b/c)_N", &mut dens)?;
    push_den(b * c, li, "(bc)_l", &mut dens)?;

    let prefactor = balanced_ratio(&nums, &dens);
    // a vanishing prefactor can meet a pole of the series (e.g. c = a)
    let series = eval_v12(&series_spec(k, l, quad))?;
    if prefactor.norm() == 0.0 {
        return Ok(prefactor);
    }
    Ok(prefactor * series)
}

/// The `12V11` whose value multiplies the prefactor of `R_k^l`.
pub fn series_spec(k: usize, l: usize, quad: &ParamQuad) -> SeriesSpec {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    let q = |e: i64| ctx.qpow(e);
    let lead = q(-ni) * c / b;
    let (term, other) = if k <= l { (k, q(-li)) } else { (l, q(-ki)) };
    let rest = [
        other,
        q(ki - ni) * a / b,
        q(li - ni) * c / d,
        c * d,
        q(1 - ni) / (a * b),
        ctx.q() * c / b,
    ];
    SeriesSpec::elliptic(lead, term, &rest, &ctx)
}

/// Row `k` by the closed formula; `Ok(None)` when some entry is singular.
fn explicit_row(k: usize, quad: &ParamQuad) -> Result<Option<Vec<Complex>>> {
    let mut row = Vec::with_capacity(quad.n + 1);
    for l in 0..=quad.n {
        match explicit_entry(k, l, quad) {
            Ok(v) => row.push(v),
            Err(Error::Singular { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(row))
}

/// Full matrix by the closed formula. Rows with a singular prefactor or
/// series denominator are recomputed by collocation and flagged.
pub fn r_explicit(quad: &ParamQuad) -> Result<CoeffMatrix> {
    quad.check()?;
    let mut out = CoeffMatrix::zeros(quad.n, Route::Explicit, Some(*quad));
    let mut fallback = None;
    for k in 0..=quad.n {
        let row = match explicit_row(k, quad)? {
            Some(row) => row,
            None => {
                if fallback.is_none() {
                    fallback = Some(pair_collocation(quad.target(), &quad.ctx)?);
                }
                let sys = fallback.as_ref().unwrap();
                let e = sys.expand(|xi| quad.source_element(k, xi))?;
                for l in 0..=quad.n {
                    out.flagged.push((k, l));
                }
                e.coeffs
            }
        };
        for (l, v) in row.into_iter().enumerate() {
            out.set(k, l, v);
        }
    }
    Ok(out)
}
