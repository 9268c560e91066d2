//! Convolution and fusion: coefficients of degree `M_1+…+M_n` assembled from
//! coefficients of the pieces.

use crate::error::{Error, Result};
use crate::scalar::Complex;

use super::compute;
use super::matrix::{ParamQuad, Route};

/// `|k|_i^σ = Σ_{j : σ(j) < σ(i)} k_j`.
pub fn ordered_prefix(k: &[usize], sigma: &[usize], i: usize) -> usize {
    (0..k.len()).filter(|&j| sigma[j] < sigma[i]).map(|j| k[j]).sum()
}

fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::Domain(format!(
            "permutation of length {} for {n} factors",
            p.len()
        )));
    }
    for &v in p {
        if v >= n || seen[v] {
            return Err(Error::Domain(format!("{p:?} is not a permutation of 0..{n}")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Right-hand side of the multi-index convolution
/// `Σ_{m_1+…+m_n=l} ∏_i R_{k_i}^{m_i}(aq^{|k|_i^σ}, bq^{|M-k|_i^τ}, cq^{|m|_i}, dq^{|M-m|_i}; M_i)`,
/// summed by dynamic programming over the running total `|m|_i`.
/// `quad.n` is ignored; the degree is `Σ M_i`.
pub fn multiconv_rhs(
    k: &[usize],
    l: usize,
    sizes: &[usize],
    quad: &ParamQuad,
    sigma: &[usize],
    tau: &[usize],
    route: Route,
) -> Result<Complex> {
    Ok(multiconv_rhs_scaled(k, l, sizes, quad, sigma, tau, route)?.0)
}

/// [`multiconv_rhs`] with the largest partial product met along the way.
pub fn multiconv_rhs_scaled(
    k: &[usize],
    l: usize,
    sizes: &[usize],
    quad: &ParamQuad,
    sigma: &[usize],
    tau: &[usize],
    route: Route,
) -> Result<(Complex, f64)> {
    let n = sizes.len();
    if k.len() != n || n == 0 {
        return Err(Error::Domain("k and M must have the same positive length".into()));
    }
    check_permutation(sigma, n)?;
    check_permutation(tau, n)?;
    if k.iter().zip(sizes).any(|(&ki, &mi)| ki > mi) {
        return Err(Error::Domain(format!("k = {k:?} exceeds M = {sizes:?}")));
    }
    let total: usize = sizes.iter().sum();
    if l > total {
        return Ok((Complex::new(0.0, 0.0), 0.0));
    }
    let rest: Vec<usize> = k.iter().zip(sizes).map(|(&ki, &mi)| mi - ki).collect();
    let ctx = quad.ctx;
    let q = |e: usize| ctx.qpow(e as i64);

    // dp[s]: sum over (m_1..m_{i}) with m_1+…+m_i = s
    let mut dp = vec![Complex::new(0.0, 0.0); total + 1];
    dp[0] = Complex::new(1.0, 0.0);
    let mut reach = 0usize;
    let mut scale: f64 = 0.0;
    for i in 0..n {
        let a = quad.a * q(ordered_prefix(k, sigma, i));
        let b = quad.b * q(ordered_prefix(&rest, tau, i));
        let mut next = vec![Complex::new(0.0, 0.0); total + 1];
        for s in 0..=reach {
            if dp[s].norm() == 0.0 {
                continue;
            }
            // |M-m|_i = P_i - s
            let done: usize = sizes[..i].iter().sum();
            let piece = ParamQuad {
                a,
                b,
                c: quad.c * q(s),
                d: quad.d * q(done - s),
                n: sizes[i],
                ctx,
            };
            let m = compute(&piece, route)?;
            for (mi, v) in m.row(k[i]).iter().enumerate() {
                let t = dp[s] * v;
                scale = scale.max(t.norm());
                next[s + mi] += t;
            }
        }
        reach += sizes[i];
        dp = next;
    }
    Ok((dp[l], scale))
}

/// Right-hand side of the two-factor convolution for shift choice `(α, β)`:
/// `Σ_{m+n=l} R_k^m(aq^{αj}, bq^{β(N-j)}, c, d; M) R_j^n(aq^{(1-α)k}, bq^{(1-β)(M-k)}, cq^m, dq^{M-m}; N)`.
#[allow(clippy::too_many_arguments)]
pub fn convolution_rhs(
    k: usize,
    j: usize,
    l: usize,
    big_m: usize,
    big_n: usize,
    alpha: bool,
    beta: bool,
    quad: &ParamQuad,
    route: Route,
) -> Result<Complex> {
    Ok(convolution_rhs_scaled(k, j, l, big_m, big_n, alpha, beta, quad, route)?.0)
}

/// [`convolution_rhs`] with the largest single product in the sum.
#[allow(clippy::too_many_arguments)]
pub fn convolution_rhs_scaled(
    k: usize,
    j: usize,
    l: usize,
    big_m: usize,
    big_n: usize,
    alpha: bool,
    beta: bool,
    quad: &ParamQuad,
    route: Route,
) -> Result<(Complex, f64)> {
    if k > big_m || j > big_n {
        return Err(Error::Domain(format!("k={k} or j={j} out of range")));
    }
    let ctx = quad.ctx;
    let q = |e: usize| ctx.qpow(e as i64);
    let (al, be) = (alpha as usize, beta as usize);
    let outer = compute(
        &ParamQuad {
            a: quad.a * q(al * j),
            b: quad.b * q(be * (big_n - j)),
            n: big_m,
            ..*quad
        },
        route,
    )?;
    let mut acc = Complex::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for m in 0..=big_m.min(l) {
        let nn = l - m;
        if nn > big_n {
            continue;
        }
        let inner = compute(
            &ParamQuad {
                a: quad.a * q((1 - al) * k),
                b: quad.b * q((1 - be) * (big_m - k)),
                c: quad.c * q(m),
                d: quad.d * q(big_m - m),
                n: big_n,
                ctx,
            },
            route,
        )?;
        let t = outer.get(k, m) * inner.get(j, nn);
        scale = scale.max(t.norm());
        acc += t;
    }
    Ok((acc, scale))
}
