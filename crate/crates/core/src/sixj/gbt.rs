//! Generalized binomial theorem
//! `h_N(x;a) = Σ_k C_k^N(a,b,c) h_k(x;b) h_{N-k}(x;c)`.

use serde::Serialize;

use crate::error::Result;
use crate::scalar::{Complex, EllipticContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GbtMode {
    /// Product formula.
    Closed,
    /// Pascal-type recurrence `C_k^{N+1} = B_k C_k^N + A_{k-1} C_{k-1}^N`.
    Recurrence,
}

/// `C_k^N(a,b,c)` for a single `k` (zero outside `0..=N`).
pub fn gbt_coeff(
    k: i64,
    n: usize,
    a: Complex,
    b: Complex,
    c: Complex,
    ctx: &EllipticContext,
    mode: GbtMode,
) -> Result<Complex> {
    if k < 0 || k as usize > n {
        return Ok(Complex::new(0.0, 0.0));
    }
    match mode {
        GbtMode::Closed => closed(k as usize, n, a, b, c, ctx),
        GbtMode::Recurrence => Ok(gbt_row(n, a, b, c, ctx, mode)?[k as usize]),
    }
}

/// `(C_0^N, …, C_N^N)`.
pub fn gbt_row(
    n: usize,
    a: Complex,
    b: Complex,
    c: Complex,
    ctx: &EllipticContext,
    mode: GbtMode,
) -> Result<Vec<Complex>> {
    match mode {
        GbtMode::Closed => (0..=n).map(|k| closed(k, n, a, b, c, ctx)).collect(),
        GbtMode::Recurrence => recurrence(n, a, b, c, ctx),
    }
}

fn closed(k: usize, n: usize, a: Complex, b: Complex, c: Complex, ctx: &EllipticContext) -> Result<Complex> {
    let (ki, ni) = (k as i64, n as i64);
    let num = ctx.qpow(ki * (ki - ni))
        * ctx.binomial(n, ki)?
        * ctx.pochs(&[a / c, ctx.qpow(ni - ki) * a * c], ki)?
        * ctx.pochs(&[a / b, ctx.qpow(ki) * a * b], ni - ki)?;
    let den = ctx.poch_den(ctx.qpow(ki - ni) * b / c, ki, "(q^{k-N} b/c)_k")?
        * ctx.poch_den(ctx.qpow(-ki) * c / b, ni - ki, "(q^{-k} c/b)_{N-k}")?
        * ctx.poch_den(b * c, ni, "(bc)_N")?;
    Ok(num / den)
}

fn recurrence(n: usize, a: Complex, b: Complex, c: Complex, ctx: &EllipticContext) -> Result<Vec<Complex>> {
    let mut row = vec![Complex::new(1.0, 0.0)];
    for level in 0..n {
        let li = level as i64;
        let q = |e: i64| ctx.qpow(e);
        let common = ctx.theta_den(b * c * q(li), "θ(bc q^N)")?;
        let mut next = vec![Complex::new(0.0, 0.0); level + 2];
        for (k, &ck) in row.iter().enumerate() {
            let ki = k as i64;
            // A_k feeds C_{k+1}^{N+1}, B_k feeds C_k^{N+1}
            let a_k = ctx.theta(a * c * q(2 * li - ki))? * ctx.theta(a * q(ki) / c)?
                / (common * ctx.theta_den(b * q(2 * ki - li) / c, "θ(b q^{2k-N}/c)")?);
            let b_k = ctx.theta(a * b * q(li + ki))? * ctx.theta(a * q(li - ki) / b)?
                / (common * ctx.theta_den(c * q(li - 2 * ki) / b, "θ(c q^{N-2k}/b)")?);
            next[k] += b_k * ck;
            next[k + 1] += a_k * ck;
        }
        row = next;
    }
    Ok(row)
}
