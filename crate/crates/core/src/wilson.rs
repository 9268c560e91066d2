//! Wilson's biorthogonal `10W9` functions, the rational forms `R_n(μ(k))`,
//! `S_m(μ(k))` on the grid `μ(k) = q^{-k} + q^{k-N} c/d`, and the parameter
//! correspondence with the coefficient picture.

use crate::error::{Error, Result};
use crate::scalar::{Complex, EllipticContext};
use crate::series::{eval_w, SeriesSpec};
use crate::sixj::{r_explicit, ParamQuad};

/// Slack on `abcdef = q` and `ab = q^{-N}`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// `(a,b,c,d,e,f)` with `abcdef = q` and `ab = q^{-N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonParams {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub e: Complex,
    pub f: Complex,
    pub n: usize,
    pub ctx: EllipticContext,
}

impl WilsonParams {
    pub fn new(p: [Complex; 6], n: usize, ctx: EllipticContext) -> Result<Self> {
        if !ctx.is_trigonometric() {
            return Err(Error::Domain("Wilson functions need p = 0".into()));
        }
        let [a, b, c, d, e, f] = p;
        let q = ctx.q();
        let prod = a * b * c * d * e * f;
        if (prod - q).norm() > CONSTRAINT_TOL * q.norm() {
            return Err(Error::Domain(format!("abcdef = {prod}, expected q = {q}")));
        }
        let qn = ctx.qpow(-(n as i64));
        if (a * b - qn).norm() > CONSTRAINT_TOL * qn.norm() {
            return Err(Error::Domain(format!("ab = {}, expected q^-N = {qn}", a * b)));
        }
        Ok(WilsonParams {
            a,
            b,
            c,
            d,
            e,
            f,
            n,
            ctx,
        })
    }

    /// Completes `b = q^{-N}/a` and `f = q/(abcde)`.
    pub fn from_free(a: Complex, c: Complex, d: Complex, e: Complex, n: usize, ctx: EllipticContext) -> Result<Self> {
        let b = ctx.qpow(-(n as i64)) / a;
        let f = ctx.q() / (a * b * c * d * e);
        Self::new([a, b, c, d, e, f], n, ctx)
    }

    pub fn params(&self) -> [Complex; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// The same parameters with `e` and `f` exchanged.
    pub fn swap_ef(&self) -> Self {
        WilsonParams {
            e: self.f,
            f: self.e,
            ..*self
        }
    }
}

fn ratio(ctx: &EllipticContext, nums: &[Complex], dens: &[Complex], k: i64, name: &str) -> Result<Complex> {
    let top = ctx.pochs(nums, k)?;
    let mut bottom = Complex::new(1.0, 0.0);
    for &x in dens {
        bottom *= ctx.poch_den(x, k, name)?;
    }
    Ok(top / bottom)
}

/// `10W9(a0; q^{-s}, q^{-t}, rest…; q, q)` terminated at `min(s, t)`.
fn w_two_terminations(a0: Complex, s: usize, t: usize, rest: &[Complex], ctx: &EllipticContext) -> Result<Complex> {
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    let mut params = vec![ctx.qpow(-(hi as i64))];
    params.extend_from_slice(rest);
    eval_w(&SeriesSpec::very_well_poised(a0, lo, &params, ctx.q(), ctx.q()))
}

/// `r_n((z+1/z)/2; a,…,f)`.
pub fn wilson_r(n: usize, z: Complex, wp: &WilsonParams) -> Result<Complex> {
    let WilsonParams {
        a, b, c, d, e, f, ctx, ..
    } = *wp;
    let q = ctx.q();
    let ni = n as i64;
    let pre = ratio(
        &ctx,
        &[a * b, a * c, a * d, (a * f).inv()],
        &[a * q / e],
        ni,
        "(aq/e)_n",
    )?;
    if pre.norm() == 0.0 {
        return Ok(pre);
    }
    let rest = [
        a * z,
        a / z,
        q / (b * e),
        q / (c * e),
        q / (d * e),
        ctx.qpow(ni) / (e * f),
    ];
    let spec = SeriesSpec::very_well_poised(a / e, n, &rest, q, q);
    Ok(pre * eval_w(&spec)?)
}

/// `r_n` at the grid point `z = aq^k`.
pub fn wilson_r_grid(n: usize, k: usize, wp: &WilsonParams) -> Result<Complex> {
    wilson_r(n, wp.a * wp.ctx.qpow(k as i64), wp)
}

/// `w_k = (1-a²q^{2k})/(1-a²) (a²,ab,ac,ad,ae,af)_k / (q,aq/b,aq/c,aq/d,aq/e,aq/f)_k q^k`.
pub fn wilson_weight(k: usize, wp: &WilsonParams) -> Result<Complex> {
    let WilsonParams {
        a, b, c, d, e, f, ctx, ..
    } = *wp;
    let q = ctx.q();
    let ki = k as i64;
    let a2 = a * a;
    let lead = (1.0 - a2 * ctx.qpow(2 * ki)) / (1.0 - a2);
    let r = ratio(
        &ctx,
        &[a2, a * b, a * c, a * d, a * e, a * f],
        &[q, a * q / b, a * q / c, a * q / d, a * q / e, a * q / f],
        ki,
        "Wilson weight",
    )?;
    Ok(lead * r * ctx.qpow(ki))
}

/// `C_n = (a²q,q/cd,q/ce,q/de)_N/(aq/c,aq/d,aq/e,bf)_N · (q,q^n/ef,ab,ac,ad,bc,bd,cd)_n/(q/ef)_{2n} · q^{-n}`.
pub fn wilson_norm(n: usize, wp: &WilsonParams) -> Result<Complex> {
    let WilsonParams {
        a, b, c, d, e, f, ctx, ..
    } = *wp;
    let q = ctx.q();
    let (ni, big) = (n as i64, wp.n as i64);
    let first = ratio(
        &ctx,
        &[a * a * q, q / (c * d), q / (c * e), q / (d * e)],
        &[a * q / c, a * q / d, a * q / e, b * f],
        big,
        "Wilson norm",
    )?;
    let second = ctx.pochs(
        &[q, ctx.qpow(ni) / (e * f), a * b, a * c, a * d, b * c, b * d, c * d],
        ni,
    )? / ctx.poch_den(q / (e * f), 2 * ni, "(q/ef)_{2n}")?;
    Ok(first * second * ctx.qpow(-ni))
}

/// Both sides of a biorthogonality relation with the residual normalized by
/// the largest summand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthCheck {
    pub sum: Complex,
    pub expected: Complex,
    pub scale: f64,
    pub residual: f64,
}

impl BiorthCheck {
    fn from_terms(terms: &[Complex], expected: Complex) -> Self {
        let sum: Complex = terms.iter().sum();
        let scale = terms.iter().map(|z| z.norm()).fold(expected.norm(), f64::max);
        let residual = if scale == 0.0 {
            0.0
        } else {
            (sum - expected).norm() / scale
        };
        BiorthCheck {
            sum,
            expected,
            scale,
            residual,
        }
    }
}

/// `Σ_k w_k r_n(…;e,f) r_m(…;f,e)` against `C_n δ_{nm}`.
pub fn wilson_biorth(wp: &WilsonParams, n: usize, m: usize) -> Result<BiorthCheck> {
    let swapped = wp.swap_ef();
    let terms = (0..=wp.n)
        .map(|k| Ok(wilson_weight(k, wp)? * wilson_r_grid(n, k, wp)? * wilson_r_grid(m, k, &swapped)?))
        .collect::<Result<Vec<_>>>()?;
    let expected = if n == m {
        wilson_norm(n, wp)?
    } else {
        Complex::new(0.0, 0.0)
    };
    Ok(BiorthCheck::from_terms(&terms, expected))
}

/// `μ(k) = q^{-k} + q^{k-N} c/d`.
pub fn mu(k: usize, quad: &ParamQuad) -> Complex {
    let ctx = quad.ctx;
    ctx.qpow(-(k as i64)) + ctx.qpow(k as i64 - quad.n as i64) * quad.c / quad.d
}

/// Which rational function on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rational {
    R,
    S,
}

/// `R_n(μ(k))` or `S_m(μ(k))` from its `10W9` expression.
pub fn rational_rs(index: usize, k: usize, quad: &ParamQuad, which: Rational) -> Result<Complex> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    if !ctx.is_trigonometric() {
        return Err(Error::Domain("rational forms need p = 0".into()));
    }
    let q = ctx.q();
    let (ii, ki, ni) = (index as i64, k as i64, n as i64);
    let qp = |e: i64| ctx.qpow(e);
    match which {
        Rational::R => {
            let pre = ratio(
                &ctx,
                &[qp(-ni), a * c, qp(1 - ni) / (b * d), a / c],
                &[qp(1 - ni) * c / b],
                ii,
                "(q^{1-N}c/b)_n",
            )?;
            let rest = [
                qp(ii - ni) * a / b,
                qp(ki - ni) * c / d,
                c * d,
                qp(1 - ni) / (a * b),
                c * q / b,
            ];
            Ok(pre * w_two_terminations(qp(-ni) * c / b, index, k, &rest, &ctx)?)
        }
        Rational::S => {
            let pre = ratio(
                &ctx,
                &[qp(-ni), a * c, qp(1 - ni) / (b * d), d / b],
                &[qp(1 - ni) * a / d],
                ii,
                "(q^{1-N}a/d)_m",
            )?;
            let rest = [
                qp(ii - ni) * a / b,
                qp(ki - ni) * c / d,
                a * b,
                qp(1 - ni) / (c * d),
                a * q / d,
            ];
            Ok(pre * w_two_terminations(qp(-ni) * a / d, index, k, &rest, &ctx)?)
        }
    }
}

/// `R_n(μ(k))` or `S_m(μ(k))` rebuilt from the coefficients `R_n^k(a,b,c,d)`
/// (resp. `R_k^m(c,d,a,b)`) and their normalization.
pub fn rational_rs_from_coefficients(index: usize, k: usize, quad: &ParamQuad, which: Rational) -> Result<Complex> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    let (ii, ki, ni) = (index as i64, k as i64, n as i64);
    let qp = |e: i64| ctx.qpow(e);
    match which {
        Rational::R => {
            let r = r_explicit(quad)?.get(index, k);
            let num = qp(ki * (ni - ki))
                * ctx.poch(qp(-ni), ii)?
                * ctx.pochs(&[qp(ki - ni) * c / d, b * c], ki)?
                * ctx.pochs(&[qp(-ki) * d / c, b * d], ni - ki)?
                * ctx.poch(c * d, ni)?;
            let den = (c * d).powi(index as i32)
                * ctx.binomial(n, ki)?
                * ctx.poch_den(b / d, ki, "(b/d)_k")?
                * ctx.poch_den(b * c, ni - ii, "(bc)_{N-n}")?
                * ctx.poch_den(b * d, ni - ii, "(bd)_{N-n}")?
                * ctx.poch_den(b / c, ni - ki, "(b/c)_{N-k}")?;
            Ok(num / den * r)
        }
        Rational::S => {
            let r = r_explicit(&quad.inverse())?.get(k, index);
            let num = qp(ii * (ni - ii))
                * ctx.pochs(&[qp(-ni), a * c, a * d, qp(ii - ni) * a / b], ii)?
                * ctx.poch(qp(-ii) * b / a, ni - ii)?
                * ctx.poch(a * b, ni)?;
            let den = (a * b).powi(index as i32)
                * ctx.binomial(n, ii)?
                * ctx.poch_den(a * c, ki, "(ac)_k")?
                * ctx.poch_den(c / a, ki, "(c/a)_k")?
                * ctx.poch_den(a * d, ni - ki, "(ad)_{N-k}")?
                * ctx.poch_den(d / a, ni - ki, "(d/a)_{N-k}")?;
            Ok(num / den * r)
        }
    }
}

/// Weight `w_k` of the grid relation `Σ_k w_k R_n S_m = C_n δ_{nm}`.
pub fn grid_weight(k: usize, quad: &ParamQuad) -> Result<Complex> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    let q = ctx.q();
    let (ki, ni) = (k as i64, n as i64);
    let qp = |e: i64| ctx.qpow(e);
    let lead = (1.0 - qp(2 * ki - ni) * c / d) / (1.0 - qp(-ni) * c / d);
    let r = ratio(
        &ctx,
        &[qp(-ni) * c / d, qp(-ni), a * c, qp(1 - ni) / (b * d), b / d, c / a],
        &[
            q,
            q * c / d,
            qp(1 - ni) / (a * d),
            b * c,
            qp(1 - ni) * c / b,
            qp(1 - ni) * a / d,
        ],
        ki,
        "grid weight",
    )?;
    Ok(lead * r * qp(ki))
}

/// Norm `C_n` of the grid relation.
pub fn grid_norm(n: usize, quad: &ParamQuad) -> Result<Complex> {
    let ParamQuad { a, b, c, d, ctx, .. } = *quad;
    let q = ctx.q();
    let (ii, ni) = (n as i64, quad.n as i64);
    let qp = |e: i64| ctx.qpow(e);
    let first = ratio(
        &ctx,
        &[b * a, b / a, d * c, d / c],
        &[b * c, b / c, d * a, d / a],
        ni,
        "grid norm",
    )?;
    let lead = (1.0 - qp(-ni) * a / b) / (1.0 - qp(2 * ii - ni) * a / b);
    let second = ratio(
        &ctx,
        &[
            q,
            qp(-ni),
            a * c,
            a * d,
            qp(1 - ni) / (b * c),
            qp(1 - ni) / (b * d),
            a * q / b,
        ],
        &[qp(-ni) * a / b],
        ii,
        "grid norm",
    )?;
    Ok(first * lead * second * qp(-ii))
}

/// `Σ_k w_k R_n(μ(k)) S_m(μ(k))` against `C_n δ_{nm}`.
pub fn grid_biorth(quad: &ParamQuad, n: usize, m: usize) -> Result<BiorthCheck> {
    let terms = (0..=quad.n)
        .map(|k| {
            Ok(grid_weight(k, quad)? * rational_rs(n, k, quad, Rational::R)? * rational_rs(m, k, quad, Rational::S)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let expected = if n == m {
        grid_norm(n, quad)?
    } else {
        Complex::new(0.0, 0.0)
    };
    Ok(BiorthCheck::from_terms(&terms, expected))
}

/// `(q^{-N/2}√(c/d), q^{-N/2}√(d/c), q^{N/2}a√(cd), q^{1-N/2}/(b√(cd)), q^{N/2}b/√(cd), q^{N/2}√(cd)/a)`,
/// from the principal `√(c/d)`, with `√(d/c) = 1/√(c/d)` and `√(cd) = c/√(c/d)`.
pub fn quad_to_wilson(quad: &ParamQuad) -> Result<WilsonParams> {
    let ParamQuad { a, b, c, d, n, ctx } = *quad;
    let r = (c / d).sqrt();
    let s = c / r;
    let half = ctx.qpow_half(n as i64);
    let p = [
        r / half,
        1.0 / (r * half),
        half * a * s,
        ctx.q() / (half * b * s),
        half * b / s,
        half * s / a,
    ];
    WilsonParams::new(p, n, ctx)
}

/// `(√(c/f), q/(d√(cf)), a√(cf), b√(cf))` in Wilson's letters.
pub fn wilson_to_quad(wp: &WilsonParams) -> ParamQuad {
    let WilsonParams {
        a, b, c, d, f, n, ctx, ..
    } = *wp;
    let r = (c / f).sqrt();
    let s = c / r;
    ParamQuad::new(r, ctx.q() / (d * s), a * s, b * s, n, ctx)
}

/// `Σ_k w_k(s) r_n(aq^k; a,…,f) r_m(aq^k; a, b, cs, dt, f/s, e/t)`.
pub fn addition_sum(wp: &WilsonParams, s: Complex, t: Complex, n: usize, m: usize) -> Result<Complex> {
    let WilsonParams {
        a, b, c, d, e, f, ctx, ..
    } = *wp;
    let q = ctx.q();
    let partner = WilsonParams::new([a, b, c * s, d * t, f / s, e / t], wp.n, ctx)?;

    let mut sum = Complex::new(0.0, 0.0);
    for k in 0..=wp.n {
        let ki = k as i64;
        let a2 = a * a;
        let w = (1.0 - a2 * ctx.qpow(2 * ki)) / (1.0 - a2)
            * ratio(
                &ctx,
                &[a2, a * b, a * c * s, a * d, a * e, a * f / s],
                &[q, a * q / b, a * q / (c * s), a * q / d, a * q / e, a * q * s / f],
                ki,
                "addition weight",
            )?
            * ctx.qpow(ki);
        sum += w * wilson_r_grid(n, k, wp)? * wilson_r_grid(m, k, &partner)?;
    }
    Ok(sum)
}

/// The three members of the addition formula for `r_n` against
/// `r_m(…; a, b, cs, dt, f/s, e/t)`: the weighted sum, `X · R_n^m(…)` and
/// `Y · r_n(…; A,…,F)`.
pub fn wilson_addition(wp: &WilsonParams, s: Complex, t: Complex, n: usize, m: usize) -> Result<[Complex; 3]> {
    let WilsonParams {
        a, b, c, d, e, f, ctx, ..
    } = *wp;
    let q = ctx.q();
    let big = wp.n as i64;
    let (ni, mi) = (n as i64, m as i64);
    let sum = addition_sum(wp, s, t, n, m)?;

    let rcf = (c / f).sqrt();
    let scf = c / rcf;
    let coeff_quad = ParamQuad::new(rcf, q / (d * scf), s * rcf, q / (t * d * scf), wp.n, ctx);
    let r_nm = r_explicit(&coeff_quad)?.get(n, m);
    let x = ratio(
        &ctx,
        &[a * a * q, q / (c * d * s * t), q * t / (c * e * s), q / (d * e)],
        &[a * q / (c * s), a * q / d, a * q / e, b * f / s],
        big,
        "X",
    )? * ctx.pochs(&[a * b, a * d, b * d], ni)?
        * ctx.pochs(
            &[q, ctx.qpow(mi) * s * t / (e * f), a * c * s, b * c * s, c * d * s * t],
            mi,
        )?
        / ctx.poch_den(q * s * t / (e * f), 2 * mi, "(qst/ef)_{2m}")?
        * ctx.qpow(-ni)
        * t.powi(2 * m as i32 - wp.n as i32)
        * ctx.qpow(mi * mi - ni * ni)
        * (c * e * e * f).powi(n as i32 - m as i32);

    let ra = (s * t / (e * f)).sqrt();
    let rc = s / (f * ra);
    let re = e / rc;
    let cap = WilsonParams::new([ra, a * b / ra, c * rc, d / rc, re, e * f / re], wp.n, ctx)?;
    let y = ratio(
        &ctx,
        &[a * a * q, q / (d * e), q / (c * d * s), q / (c * e * s)],
        &[a * q / (c * s), a * q / d, a * q / e, b * f / s],
        big,
        "Y",
    )? * ratio(&ctx, &[a * d, b * d], &[q / (c * e * s), d * t / e], ni, "Y")?
        * ratio(
            &ctx,
            &[a * b, t, a * c * s, b * c * s, d * t / e],
            &[q * s / (d * f), q * s / (e * f)],
            mi,
            "Y",
        )?;
    let r_cap = wilson_r(n, cap.a * ctx.qpow(mi), &cap)?;
    Ok([sum, x * r_nm, y * r_cap])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn ctx() -> EllipticContext {
        EllipticContext::trigonometric(c(0.55, 0.2)).unwrap()
    }

    fn quad(n: usize) -> ParamQuad {
        ParamQuad::new(c(0.8, 0.3), c(1.3, -0.4), c(0.6, 0.7), c(1.1, 0.2), n, ctx())
    }

    fn wp(n: usize) -> WilsonParams {
        WilsonParams::from_free(c(0.7, 0.2), c(1.2, -0.3), c(0.9, 0.5), c(0.6, -0.4), n, ctx()).unwrap()
    }

    #[test]
    fn constraints_enforced() {
        let w = wp(3);
        let mut p = w.params();
        p[5] *= 1.01;
        assert!(WilsonParams::new(p, 3, ctx()).is_err());
    }

    #[test]
    fn r_zero_is_one() {
        let w = wp(3);
        assert!((wilson_r(0, c(1.3, 0.4), &w).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn r_symmetric_in_c_d() {
        let w = wp(3);
        let swapped = WilsonParams { c: w.d, d: w.c, ..w };
        let z = c(1.1, 0.6);
        let (x, y) = (wilson_r(1, z, &w).unwrap(), wilson_r(1, z, &swapped).unwrap());
        assert!((x - y).norm() < 1e-12 * x.norm());
    }

    #[test]
    fn wilson_biorthogonality() {
        for n_big in [3, 4] {
            let w = wp(n_big);
            for n in 0..=n_big {
                for m in 0..=n_big {
                    let r = wilson_biorth(&w, n, m).unwrap();
                    assert!(r.residual < 1e-9, "N={n_big} n={n} m={m}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn grid_biorthogonality() {
        let qd = quad(3);
        for n in 0..=3 {
            for m in 0..=3 {
                let r = grid_biorth(&qd, n, m).unwrap();
                assert!(r.residual < 1e-9, "n={n} m={m}: {r:?}");
            }
        }
    }

    #[test]
    fn rational_forms_agree() {
        let qd = quad(3);
        for which in [Rational::R, Rational::S] {
            for i in 0..=3 {
                for k in 0..=3 {
                    let x = rational_rs(i, k, &qd, which).unwrap();
                    let y = rational_rs_from_coefficients(i, k, &qd, which).unwrap();
                    assert!((x - y).norm() < 1e-9 * x.norm().max(1.0), "{which:?} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn parameter_map_round_trip() {
        let qd = quad(3);
        let w = quad_to_wilson(&qd).unwrap();
        let back = wilson_to_quad(&w);
        for (x, y) in [(back.a, qd.a), (back.b, qd.b), (back.c, qd.c), (back.d, qd.d)] {
            assert!((x - y).norm() < 1e-12 || (x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn addition_formula() {
        let w = wp(3);
        let (s, t) = (c(0.8, 0.3), c(1.1, -0.2));
        for n in 0..=2 {
            for m in 0..=2 {
                let [x, y, z] = wilson_addition(&w, s, t, n, m).unwrap();
                let scale = x.norm().max(y.norm()).max(z.norm());
                assert!((x - y).norm() < 1e-8 * scale, "n={n} m={m}: {x} {y} {z}");
                assert!((x - z).norm() < 1e-8 * scale, "n={n} m={m}: {x} {y} {z}");
            }
        }
    }

    #[test]
    fn addition_at_unit_shifts_is_biorthogonality() {
        let w = wp(3);
        let one = c(1.0, 0.0);
        for n in 0..=2 {
            let x = addition_sum(&w, one, one, n, n).unwrap();
            let want = wilson_norm(n, &w).unwrap();
            assert!((x - want).norm() < 1e-9 * want.norm());
        }
    }
}
