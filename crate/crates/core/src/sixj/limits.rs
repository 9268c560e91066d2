//! Limit transitions between the levels, reported as errors at two scales.

use serde::Serialize;

use crate::basis::h_xi;
use crate::basis::xi_from_x;
use crate::error::{Error, Result};
use crate::scalar::{q_pochhammer, Complex, EllipticContext};
use crate::series::{eval_rphi_s, SeriesSpec};

use super::explicit::r_explicit;
use super::matrix::ParamQuad;
use super::qracah::qracah_c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    /// `p → 0` of the elliptic coefficients.
    EllToTrig,
    /// `t^{2N} R_k^l(1/(at), 1/(bt), ct, dt)` towards the q-Racah `C_k^l`.
    TrigToQracah,
    /// `(q^k d/(bs))^{N-l} R_k^l(as, bs, c, d)` towards the `3φ2` with `c` small.
    TrigToQkraw,
    /// `h_k(x/t; at) → (ax;q)_k` and `t^{2k} h_k(x/t; a/t) → a^{2k} q^{k(k-1)} (x/a;q^{-1})_k`.
    HProduct,
}

impl LimitKind {
    pub const ALL: [LimitKind; 4] = [
        LimitKind::EllToTrig,
        LimitKind::TrigToQracah,
        LimitKind::TrigToQkraw,
        LimitKind::HProduct,
    ];
}

/// Data for a limit check. `quad.ctx` supplies `q` (and `p` is ignored).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitInputs {
    pub quad: ParamQuad,
    pub k: usize,
    pub l: usize,
    /// Evaluation point for the monomial limits.
    pub x: Complex,
    /// The two scales, largest first.
    pub scales: [f64; 2],
    /// In the q-Krawtchouk limit `c = c_coef · s³`, so the inner limit `c → 0`
    /// is taken faster than `s → 0` (the leftover `c`-error is of size `c/s`).
    pub c_coef: f64,
}

impl LimitInputs {
    pub fn new(quad: ParamQuad, k: usize, l: usize) -> Self {
        LimitInputs {
            quad,
            k,
            l,
            x: Complex::new(0.7, 0.4),
            scales: [1e-3, 1e-4],
            c_coef: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitReport {
    pub kind: LimitKind,
    pub scales: [f64; 2],
    /// Relative distance to the limit at each scale.
    pub errors: [f64; 2],
    /// `errors[0] / errors[1]`.
    pub ratio: f64,
    /// Observed order `log(ratio) / log(scales[0]/scales[1])`.
    pub order: f64,
    /// For `EllToTrig`: distance between the `p = 0` elliptic evaluation and the
    /// trigonometric one.
    pub exact_error: Option<f64>,
    /// Ratio inside `[0.5, 2]` times the scale ratio, and `exact_error ≤ 1e-12`.
    pub first_order: bool,
}

/// Tolerance on the `p = 0` versus trigonometric comparison.
pub const EXACT_TOL: f64 = 1e-12;

pub fn limit_transitions(kind: LimitKind, inputs: &LimitInputs) -> Result<LimitReport> {
    let [s0, s1] = inputs.scales;
    if !(s0 > s1 && s1 > 0.0) {
        return Err(Error::Config("scales must satisfy s0 > s1 > 0".into()));
    }
    let mut exact_error = None;
    let errors = match kind {
        LimitKind::EllToTrig => {
            let q = inputs.quad.ctx.q();
            let trig = EllipticContext::new(q, inputs.quad.ctx.q_half(), Complex::new(0.0, 0.0))?;
            let base = ParamQuad {
                ctx: trig,
                ..inputs.quad
            };
            let target = r_explicit(&base)?;
            let via_nome = r_explicit(&ParamQuad {
                ctx: trig.with_nome(Complex::new(0.0, 0.0))?,
                ..base
            })?;
            exact_error = Some(via_nome.rel_diff(&target));
            let at = |p: f64| -> Result<f64> {
                let m = r_explicit(&ParamQuad {
                    ctx: trig.with_nome(Complex::new(p, 0.0))?,
                    ..base
                })?;
                Ok(m.rel_diff(&target))
            };
            [at(s0)?, at(s1)?]
        }
        LimitKind::TrigToQracah => {
            let target = qracah_matrix_entries(inputs)?;
            [qracah_scaled(inputs, s0, &target)?, qracah_scaled(inputs, s1, &target)?]
        }
        LimitKind::TrigToQkraw => {
            let target = qkraw_target(inputs)?;
            let at = |s: f64| -> Result<f64> {
                let v = qkraw_scaled(inputs, s)?;
                Ok((v - target).norm() / target.norm())
            };
            [at(s0)?, at(s1)?]
        }
        LimitKind::HProduct => [h_product_error(inputs, s0)?, h_product_error(inputs, s1)?],
    };
    let ratio = errors[0] / errors[1];
    let scale_ratio = s0 / s1;
    let order = ratio.ln() / scale_ratio.ln();
    let in_window = ratio >= 0.5 * scale_ratio && ratio <= 2.0 * scale_ratio;
    let first_order = in_window && exact_error.is_none_or(|e| e <= EXACT_TOL);
    Ok(LimitReport {
        kind,
        scales: inputs.scales,
        errors,
        ratio,
        order,
        exact_error,
        first_order,
    })
}

fn trig_quad(inputs: &LimitInputs) -> Result<ParamQuad> {
    let ctx = inputs.quad.ctx.with_nome(Complex::new(0.0, 0.0))?;
    Ok(ParamQuad { ctx, ..inputs.quad })
}

fn qracah_matrix_entries(inputs: &LimitInputs) -> Result<Vec<Complex>> {
    let quad = trig_quad(inputs)?;
    let n = quad.n;
    let mut out = Vec::with_capacity((n + 1) * (n + 1));
    for k in 0..=n {
        for l in 0..=n {
            out.push(qracah_c(k, l, &quad)?);
        }
    }
    Ok(out)
}

/// Relative ∞-norm distance of the rescaled trigonometric matrix from `C`.
fn qracah_scaled(inputs: &LimitInputs, t: f64, target: &[Complex]) -> Result<f64> {
    let quad = trig_quad(inputs)?;
    let ParamQuad { a, b, c, d, n, ctx } = quad;
    let scaled = quad.with(1.0 / (a * t), 1.0 / (b * t), c * t, d * t);
    let r = r_explicit(&scaled)?;
    let t2n = t.powi(2 * n as i32);
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..=n {
        let (ki, nk) = (k as i64, (n - k) as i64);
        let f = t2n * a.powi(2 * k as i32) * b.powi(2 * nk as i32) * ctx.qpow(-ki * (ki - 1) - nk * (nk - 1));
        let (mut dr, mut sr) = (0.0, 0.0);
        for l in 0..=n {
            let want = target[k * (n + 1) + l];
            dr += (f * r.get(k, l) - want).norm();
            sr += want.norm();
        }
        diff = diff.max(dr);
        scale = scale.max(sr);
    }
    Ok(diff / scale)
}

/// `[N l] (q^k a/b)^k 3φ2[q^{-k}, q^{-l}, q^{-k}b/a; q^{-N}, 0; q, q]`.
pub fn qkraw_target(inputs: &LimitInputs) -> Result<Complex> {
    let quad = trig_quad(inputs)?;
    let ParamQuad { a, b, n, ctx, .. } = quad;
    let (k, l) = (inputs.k, inputs.l);
    let ki = k as i64;
    let spec = SeriesSpec::basic(
        k,
        &[ctx.qpow(-(l as i64)), ctx.qpow(-ki) * b / a],
        &[ctx.qpow(-(n as i64)), Complex::new(0.0, 0.0)],
        ctx.q(),
        ctx.q(),
    );
    Ok(ctx.binomial(n, l as i64)? * (ctx.qpow(ki) * a / b).powi(k as i32) * eval_rphi_s(&spec)?)
}

/// `(q^k d/(bs))^{N-l} R_k^l(as, bs, c, d)` with `c = c_coef · s³`.
pub fn qkraw_scaled(inputs: &LimitInputs, s: f64) -> Result<Complex> {
    let quad = trig_quad(inputs)?;
    let ParamQuad { a, b, d, n, ctx, .. } = quad;
    let (k, l) = (inputs.k, inputs.l);
    let scaled = quad.with(a * s, b * s, Complex::new(inputs.c_coef * s.powi(3), 0.0), d);
    let r = r_explicit(&scaled)?;
    let f = (ctx.qpow(k as i64) * d / (b * s)).powi((n - l) as i32);
    Ok(f * r.get(k, l))
}

/// Larger of the two monomial-limit relative errors at scale `t`.
fn h_product_error(inputs: &LimitInputs, t: f64) -> Result<f64> {
    let ctx = trig_quad(inputs)?.ctx;
    let (a, k, x) = (inputs.quad.a, inputs.k, inputs.x);
    let xi = xi_from_x(x / t);
    let first = h_xi(a * t, k, xi, &ctx)?;
    let first_want = q_pochhammer(a * x, ctx.q(), k as i64)?;
    let second = t.powi(2 * k as i32) * h_xi(a / t, k, xi, &ctx)?;
    let second_want =
        a.powi(2 * k as i32) * ctx.qpow((k * k) as i64 - k as i64) * q_pochhammer(x / a, ctx.q().inv(), k as i64)?;
    let e1 = (first - first_want).norm() / first_want.norm();
    let e2 = (second - second_want).norm() / second_want.norm();
    Ok(e1.max(e2))
}
