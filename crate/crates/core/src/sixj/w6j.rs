//! Elliptic 6j-symbols `W_{MN}(j+2l-N, i+2k-N, i, j | u)` as rescaled
//! coefficients `R_k^l(a, b, aq^m, bq^{M-m}; N)` with `m = (M+j-i)/2`.

use crate::error::{Error, Result};
use crate::scalar::{Complex, EllipticContext};

use super::double_sum::r_double_sum;
use super::matrix::{CoeffMatrix, ParamQuad};

/// Integer labels and external parameters of one symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct W6jArgs {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub l: i64,
    pub u: Complex,
    pub xi: Complex,
    pub big_m: usize,
    pub big_n: usize,
}

/// `m = (M+j-i)/2`, required to be an integer in `0..=M`.
pub fn w6j_shift(i: i64, j: i64, big_m: usize) -> Result<usize> {
    let twice = big_m as i64 + j - i;
    if twice % 2 != 0 || twice < 0 || twice / 2 > big_m as i64 {
        return Err(Error::Domain(format!(
            "(M+j-i)/2 = {twice}/2 is not an integer in 0..={big_m}"
        )));
    }
    Ok((twice / 2) as usize)
}

/// The problem `(a, b, aq^m, bq^{M-m}; N)` with
/// `a = q^{(u+ξ+i+1-N)/2}`, `b = q^{(u-ξ-i+1-N)/2}`, and its shift `m`.
pub fn w6j_quad(args: &W6jArgs, ctx: &EllipticContext) -> Result<(ParamQuad, usize)> {
    let m = w6j_shift(args.i, args.j, args.big_m)?;
    let n = args.big_n as f64;
    let (u, xi) = (args.u, args.xi);
    let (i, j, bm) = (args.i as f64, args.j as f64, args.big_m as f64);
    let half = |s: Complex| ctx.qpow_complex(s * 0.5);
    let a = half(u + xi + i + 1.0 - n);
    let b = half(u - xi - i + 1.0 - n);
    let c = half(u + xi + j + bm + 1.0 - n);
    let d = half(u - xi - j + bm + 1.0 - n);
    Ok((ParamQuad::new(a, b, c, d, args.big_n, *ctx), m))
}

/// `q^{(ξ+j+k+l-N)(l-k) + N(N-u)/2 + (N-2k)(i-j)/2} (q^{u+M+1-N};q,p)_N / (q;q,p)_N`.
pub fn w6j_prefactor(args: &W6jArgs, ctx: &EllipticContext) -> Result<Complex> {
    let n = args.big_n as f64;
    let (i, j, k, l) = (args.i as f64, args.j as f64, args.k as f64, args.l as f64);
    let e = (args.xi + j + k + l - n) * (l - k) + (n - args.u) * (n / 2.0) + (n - 2.0 * k) * (i - j) / 2.0;
    let ni = args.big_n as i64;
    let top = ctx.poch(ctx.qpow_complex(args.u + args.big_m as f64 + 1.0 - n), ni)?;
    let bottom = ctx.poch_den(ctx.q(), ni, "(q;q,p)_N")?;
    Ok(ctx.qpow_complex(e) * top / bottom)
}

/// Whether `(k, l)` lies in the band `k-m ≤ l ≤ k+M-m`.
pub fn in_band(k: usize, l: usize, m: usize, big_m: usize) -> bool {
    let (k, l, m, bm) = (k as i64, l as i64, m as i64, big_m as i64);
    k - m <= l && l <= k + bm - m
}

pub fn elliptic_w6j(args: &W6jArgs, ctx: &EllipticContext) -> Result<Complex> {
    let n = args.big_n as i64;
    if !(0..=n).contains(&args.k) || !(0..=n).contains(&args.l) {
        return Err(Error::Domain(format!(
            "(k,l) = ({},{}) outside 0..={n}",
            args.k, args.l
        )));
    }
    let (quad, m) = w6j_quad(args, ctx)?;
    let (k, l) = (args.k as usize, args.l as usize);
    if !in_band(k, l, m, args.big_m) {
        return Ok(Complex::new(0.0, 0.0));
    }
    let r = r_double_sum(&quad)?;
    Ok(w6j_prefactor(args, ctx)? * r.get(k, l))
}

/// Largest out-of-band entry relative to the matrix scale.
pub fn band_violation(r: &CoeffMatrix, m: usize, big_m: usize) -> f64 {
    let n = r.degree();
    let scale = r.scale();
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        for l in 0..=n {
            if !in_band(k, l, m, big_m) {
                worst = worst.max(r.get(k, l).norm());
            }
        }
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}
