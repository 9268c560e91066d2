//! Per-suite trial evaluators and the residual measures they share.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::basis::collocation_points;
use crate::error::{Error, Result};
use crate::scalar::{binomial, q_binomial, Complex, EllipticContext};
use crate::series::{jackson_rhs, series_terms, SeriesSpec};
use crate::sixj::fusion::{convolution_rhs_scaled, multiconv_rhs_scaled};
use crate::sixj::krawtchouk::{krawtchouk_k, krawtchouk_matrix, subset_identity, Sl2};
use crate::sixj::limits::{limit_transitions, LimitInputs, LimitKind};
use crate::sixj::qracah::{qracah_dual_matrix, qracah_matrix};
use crate::sixj::symmetry::{apply_symmetry, Symmetry};
use crate::sixj::{compute, r_explicit, CoeffMatrix, ParamQuad, Route};
use crate::sklyanin::{
    composed_matrix, eigenrelation_check, gevp_check, operator_matrix, pfl_complete, theta_identity_check, DiffOpSpec,
    ThetaIdentity,
};
use crate::wilson::{grid_biorth, quad_to_wilson, wilson_addition, wilson_biorth};

use super::sample::draw_complex;
use super::{sample_at_degree, sample_generic, Level, ParamValue, Params, SampleConfig, Shape, Suite, TrialOutcome};

/// Degree pairs `(M, N)` drawn by the convolution suite.
pub const CONVOLUTION_SIZES: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 2)];
/// Largest number of factors in a multi-convolution trial.
pub const MAX_FACTORS: usize = 4;
/// Largest `N` for the exhaustive subset identity.
pub const SUBSET_MAX: usize = 8;
/// Largest PFL size drawn by the Sklyanin suite.
pub const PFL_TRIAL_MAX: usize = 4;

/// Evaluates one trial of `suite` at `level` with fresh parameters from `rng`.
pub fn evaluate<R: Rng>(suite: Suite, level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    match suite {
        Suite::Expansion => expansion(level, cfg, rng),
        Suite::Biorth => biorth(level, cfg, rng),
        Suite::Addition => addition(level, cfg, rng),
        Suite::Convolution => convolution(level, cfg, rng),
        Suite::Multiconv => multiconv(level, cfg, rng),
        Suite::Jackson => jackson(level, cfg, rng),
        Suite::Symmetry => symmetry(level, cfg, rng),
        Suite::Limits => limits(level, cfg, rng),
        Suite::Wilson => wilson(level, cfg, rng),
        Suite::Sklyanin => sklyanin(level, cfg, rng),
    }
}

fn outcome(residual: f64, params: Params) -> TrialOutcome {
    TrialOutcome { residual, params }
}

fn ratio(err: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

/// `max |(A·B − W)_{ij}|` over the largest single product `|A_ik B_kj|` (or `|W|`).
pub fn product_residual(a: &CoeffMatrix, b: &CoeffMatrix, want: &CoeffMatrix) -> f64 {
    let (prod, scale) = a.product_with_scale(b);
    let n1 = a.dim();
    let mut err: f64 = 0.0;
    let mut scale = scale;
    for i in 0..n1 {
        for j in 0..n1 {
            let w = want.get(i, j);
            err = err.max((prod[i * n1 + j] - w).norm());
            scale = scale.max(w.norm());
        }
    }
    ratio(err, scale)
}

/// `|lhs − rhs|` over the largest of `|lhs|`, `|rhs|` and `scale`.
pub fn scalar_residual(lhs: Complex, rhs: Complex, scale: f64) -> f64 {
    ratio((lhs - rhs).norm(), scale.max(lhs.norm()).max(rhs.norm()))
}

fn identity(n: usize) -> CoeffMatrix {
    CoeffMatrix::identity(n, Route::Explicit, None)
}

fn sl2_of(s: &super::Sample) -> Result<Sl2> {
    let m = s.sl2("");
    Sl2::new(m.a, m.b, m.c, m.d)
}

/// Pairwise route agreement and the expansion residual of the explicit route
/// at `2(N+1)` points off the collocation grid.
fn expansion<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Quad, level, rng)?;
    let quad = s.quad();
    let ms = Route::ALL
        .iter()
        .map(|&r| compute(&quad, r))
        .collect::<Result<Vec<_>>>()?;
    let mut res: f64 = 0.0;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            res = res.max(ms[i].rel_diff(&ms[j]));
        }
    }
    res = res.max(expansion_residual(&ms[0], &quad)?);
    Ok(outcome(res, s.params()))
}

/// `max_ξ |h_k^{(a,b)}(ξ) − Σ_l R_k^l h_l^{(c,d)}(ξ)|` relative to the largest term.
pub fn expansion_residual(m: &CoeffMatrix, quad: &ParamQuad) -> Result<f64> {
    let n = quad.n;
    let target = quad.target();
    let mut worst: f64 = 0.0;
    for xi in collocation_points(2 * (n + 1), 1.17, 0.37) {
        let basis = (0..=n)
            .map(|l| target.element(l, xi, &quad.ctx))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..=n {
            let lhs = quad.source_element(k, xi)?;
            let mut rhs = Complex::new(0.0, 0.0);
            let mut scale = lhs.norm();
            for (l, e) in basis.iter().enumerate() {
                let t = m.get(k, l) * e;
                scale = scale.max(t.norm());
                rhs += t;
            }
            worst = worst.max(ratio((lhs - rhs).norm(), scale));
        }
    }
    Ok(worst)
}

fn biorth<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Quad, level, rng)?;
    let n = s.n;
    let res = match level {
        Level::Krawtchouk => {
            let m = sl2_of(&s)?;
            product_residual(
                &krawtchouk_matrix(n, &m)?,
                &krawtchouk_matrix(n, &m.inverse())?,
                &identity(n),
            )
        }
        Level::Qracah => {
            let quad = s.quad();
            product_residual(&qracah_matrix(&quad)?, &qracah_dual_matrix(&quad)?, &identity(n))
        }
        Level::Trig | Level::Elliptic => {
            let quad = s.quad();
            product_residual(&r_explicit(&quad)?, &r_explicit(&quad.inverse())?, &identity(n))
        }
    };
    Ok(outcome(res, s.params()))
}

fn addition<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Triple, level, rng)?;
    let n = s.n;
    let res = if level == Level::Krawtchouk {
        let (e, f, g) = (s.sl2("E"), s.sl2("F"), s.sl2("G"));
        let ef = krawtchouk_matrix(n, &e.mul(&f.inverse()))?;
        let fg = krawtchouk_matrix(n, &f.mul(&g.inverse()))?;
        let eg = krawtchouk_matrix(n, &e.mul(&g.inverse()))?;
        product_residual(&ef, &fg, &eg)
    } else {
        let g = |x: &str| s.get(x);
        let base = s.quad();
        let abcd = base.with(g("a"), g("b"), g("c"), g("d"));
        let cdef = base.with(g("c"), g("d"), g("e"), g("f"));
        let abef = base.with(g("a"), g("b"), g("e"), g("f"));
        product_residual(&r_explicit(&abcd)?, &r_explicit(&cdef)?, &r_explicit(&abef)?)
    };
    Ok(outcome(res, s.params()))
}

fn convolution<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let (bm, bn) = *CONVOLUTION_SIZES.choose(rng).expect("nonempty");
    let s = sample_at_degree(cfg, Shape::Quad, level, bm + bn, rng)?;
    let mut params = s.params();
    params.insert("sizes".into(), ParamValue::from(&[bm, bn][..]));
    let res = if level == Level::Krawtchouk {
        krawtchouk_convolution_residual(&sl2_of(&s)?, bm, bn)?
    } else {
        convolution_residual(&s.quad(), bm, bn)?
    };
    Ok(outcome(res, params))
}

/// Worst residual over every `(α, β, k, j, l)` of the two-factor convolution.
pub fn convolution_residual(quad: &ParamQuad, bm: usize, bn: usize) -> Result<f64> {
    let full = r_explicit(&quad.with_degree(bm + bn))?;
    let mut worst: f64 = 0.0;
    for alpha in [false, true] {
        for beta in [false, true] {
            for k in 0..=bm {
                for j in 0..=bn {
                    for l in 0..=bm + bn {
                        let (rhs, scale) = convolution_rhs_scaled(k, j, l, bm, bn, alpha, beta, quad, Route::Explicit)?;
                        worst = worst.max(scalar_residual(full.get(k + j, l), rhs, scale));
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `K_{k+j}^l(M+N) = Σ_{m+n=l} K_k^m(M) K_j^n(N)` for one `SL(2)` element.
pub fn krawtchouk_convolution_residual(m: &Sl2, bm: usize, bn: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..=bm {
        for j in 0..=bn {
            for l in 0..=bm + bn {
                let lhs = krawtchouk_k(k + j, l, bm + bn, m)?;
                let mut rhs = Complex::new(0.0, 0.0);
                let mut scale: f64 = 0.0;
                for mm in l.saturating_sub(bn)..=l.min(bm) {
                    let t = krawtchouk_k(k, mm, bm, m)? * krawtchouk_k(j, l - mm, bn, m)?;
                    scale = scale.max(t.norm());
                    rhs += t;
                }
                worst = worst.max(scalar_residual(lhs, rhs, scale));
            }
        }
    }
    Ok(worst)
}

fn multiconv<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let factors = rng.gen_range(2..=MAX_FACTORS);
    let sizes: Vec<usize> = (0..factors).map(|_| rng.gen_range(1..=2)).collect();
    let total: usize = sizes.iter().sum();
    let s = sample_at_degree(cfg, Shape::Quad, level, total, rng)?;
    let k: Vec<usize> = sizes.iter().map(|&m| rng.gen_range(0..=m)).collect();
    let mut sigma: Vec<usize> = (0..factors).collect();
    let mut tau = sigma.clone();
    sigma.shuffle(rng);
    tau.shuffle(rng);
    let mut params = s.params();
    params.insert("sizes".into(), ParamValue::from(&sizes[..]));
    params.insert("k".into(), ParamValue::from(&k[..]));
    params.insert("sigma".into(), ParamValue::from(&sigma[..]));
    params.insert("tau".into(), ParamValue::from(&tau[..]));
    let res = if level == Level::Krawtchouk {
        let subset_n = rng.gen_range(1..=SUBSET_MAX);
        let mask: u64 = rng.gen_range(0..(1u64 << subset_n));
        let l = rng.gen_range(0..=subset_n);
        let t = draw_complex(rng, cfg.modulus_range);
        params.insert(
            "subset".into(),
            ParamValue::Ints(vec![subset_n as i64, mask as i64, l as i64]),
        );
        params.insert("t".into(), t.into());
        krawtchouk_multiconv_residual(&sl2_of(&s)?, &k, &sizes)?.max(subset_residual(subset_n, mask, l, t)?)
    } else {
        multiconv_residual(&s.quad(), &k, &sizes, &sigma, &tau)?
    };
    Ok(outcome(res, params))
}

/// Every `l` of the multi-index convolution against the fused explicit matrix.
pub fn multiconv_residual(
    quad: &ParamQuad,
    k: &[usize],
    sizes: &[usize],
    sigma: &[usize],
    tau: &[usize],
) -> Result<f64> {
    let total: usize = sizes.iter().sum();
    let kk: usize = k.iter().sum();
    let full = r_explicit(&quad.with_degree(total))?;
    let mut worst: f64 = 0.0;
    for l in 0..=total {
        let (rhs, scale) = multiconv_rhs_scaled(k, l, sizes, quad, sigma, tau, Route::Explicit)?;
        worst = worst.max(scalar_residual(full.get(kk, l), rhs, scale));
    }
    Ok(worst)
}

/// `K_{|k|}^l(|M|) = Σ_{|m|=l} ∏_i K_{k_i}^{m_i}(M_i)`, summed over the running total.
pub fn krawtchouk_multiconv_residual(m: &Sl2, k: &[usize], sizes: &[usize]) -> Result<f64> {
    let total: usize = sizes.iter().sum();
    let mut dp = vec![Complex::new(0.0, 0.0); total + 1];
    dp[0] = Complex::new(1.0, 0.0);
    let mut reach = 0;
    let mut scale: f64 = 1.0;
    for (&ki, &mi) in k.iter().zip(sizes) {
        let mut next = vec![Complex::new(0.0, 0.0); total + 1];
        for (l, v) in dp.iter().enumerate().take(reach + 1) {
            for mm in 0..=mi {
                let t = v * krawtchouk_k(ki, mm, mi, m)?;
                scale = scale.max(t.norm());
                next[l + mm] += t;
            }
        }
        dp = next;
        reach += mi;
    }
    let kk: usize = k.iter().sum();
    let mut worst: f64 = 0.0;
    for (l, rhs) in dp.iter().enumerate() {
        worst = worst.max(scalar_residual(krawtchouk_k(kk, l, total, m)?, *rhs, scale));
    }
    Ok(worst)
}

/// The exhaustive subset statistic, relative to its largest summand `max(1,|t|)^{min(l,|K|)}`.
pub fn subset_residual(n: usize, mask: u64, l: usize, t: Complex) -> Result<f64> {
    let (lhs, rhs) = subset_identity(n, mask, l, t)?;
    let top = l.min(mask.count_ones() as usize) as i32;
    let scale = t.norm().max(1.0).powi(top);
    Ok(scalar_residual(lhs, rhs, scale))
}

fn jackson<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Quad, level, rng)?;
    let g = |x: &str| s.get(x);
    let res = jackson_residual(g("a"), g("b"), g("c"), g("d"), s.n, &s.ctx)?;
    Ok(outcome(res, s.params()))
}

/// Series against product in the summation formula, relative to the largest
/// term or the product.
pub fn jackson_residual(
    a: Complex,
    b: Complex,
    c: Complex,
    xi: Complex,
    n: usize,
    ctx: &EllipticContext,
) -> Result<f64> {
    let terms = series_terms(&SeriesSpec::jackson(a, b, c, xi, n, ctx))?;
    let lhs: Complex = terms.iter().sum();
    let rhs = jackson_rhs(a, b, c, xi, n, ctx)?;
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    Ok(scalar_residual(lhs, rhs, scale))
}

fn symmetry<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Quad, level, rng)?;
    let m = r_explicit(&s.quad())?;
    let mut res: f64 = 0.0;
    for which in Symmetry::ALL {
        res = res.max(apply_symmetry(&m, which)?.rel_diff(&m));
    }
    Ok(outcome(res, s.params()))
}

/// How far the second-scale error exceeds `2·(t₁/t₀)` times the first, as a
/// fraction; zero when every transition converges at least linearly. The
/// `p = 0` exactness defect is included as is.
fn limits<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Quad, level, rng)?;
    let quad = s.quad();
    let k = rng.gen_range(0..=quad.n);
    let l = rng.gen_range(0..=quad.n);
    let inputs = LimitInputs::new(quad, k, l);
    let mut res: f64 = 0.0;
    for kind in LimitKind::ALL {
        let r = limit_transitions(kind, &inputs)?;
        let [s0, s1] = r.scales;
        let slack = r.errors[1] / r.errors[0] * s0 / (2.0 * s1) - 1.0;
        res = res.max(slack.max(0.0));
        if let Some(e) = r.exact_error {
            res = res.max(e);
        }
    }
    let mut params = s.params();
    params.insert("k".into(), k.into());
    params.insert("l".into(), l.into());
    Ok(outcome(res, params))
}

fn wilson<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Wilson, level, rng)?;
    let quad = s.quad();
    let wp = quad_to_wilson(&quad)?;
    let (st, tt) = (s.get("s"), s.get("t"));
    let n = quad.n;
    let mut res: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            res = res.max(grid_biorth(&quad, i, j)?.residual);
            res = res.max(wilson_biorth(&wp, i, j)?.residual);
            let [x, y, z] = wilson_addition(&wp, st, tt, i, j)?;
            let scale = x.norm().max(y.norm()).max(z.norm());
            res = res.max(ratio((x - y).norm().max((x - z).norm()), scale));
        }
    }
    Ok(outcome(res, s.params()))
}

fn sklyanin<R: Rng>(level: Level, cfg: &SampleConfig, rng: &mut R) -> Result<TrialOutcome> {
    let s = sample_generic(cfg, Shape::Sklyanin, level, rng)?;
    let g = |x: &str| s.get(x);
    let (n, ctx) = (s.n, s.ctx);
    let op = DiffOpSpec::with_d(g("a"), g("b"), g("c"), g("d"), n, ctx)?;
    let mut res: f64 = 0.0;
    for k in 0..=n {
        res = res.max(eigenrelation_check(g("a"), g("b"), g("c"), k, n, &ctx)?);
    }
    let m = operator_matrix(&op, g("lambda"), g("mu"))?;
    res = res.max(m.band_excess(1)).max(m.max_column_residual());
    res = res.max(gevp_check(g("a"), g("b"), g("c"), g("d2"), n, &ctx)?.max_residual);
    let y = composed_matrix(g("a"), g("b"), g("c"), g("e"), g("f"), g("g"), n, &ctx)?;
    res = res.max(y.band_excess(1)).max(y.max_column_residual());

    let size = rng.gen_range(1..=PFL_TRIAL_MAX);
    let a: Vec<Complex> = (0..size).map(|_| draw_complex(rng, cfg.modulus_range)).collect();
    let partial: Vec<Complex> = (0..=size).map(|_| draw_complex(rng, cfg.modulus_range)).collect();
    let xi = draw_complex(rng, cfg.modulus_range);
    let pfl = ThetaIdentity::Pfl {
        b: pfl_complete(&a, &partial),
        a,
        xi,
    };
    res = res.max(theta_identity_check(&pfl, &ctx)?);
    let mut params = s.params();
    params.insert("pfl_size".into(), size.into());
    Ok(outcome(res, params))
}

/// `Σ_paths q^{area} = [N l]_q` over all paths, relative to the binomial.
pub fn path_count_residual(n: usize, l: usize, ctx: &EllipticContext) -> Result<f64> {
    if l > n {
        return Err(Error::Domain(format!("l = {l} exceeds N = {n}")));
    }
    let total: Complex = crate::sixj::paths::enumerate_paths(0, l, n)
        .iter()
        .map(|p| ctx.qpow(p.area()))
        .sum();
    let want = q_binomial(n, l as i64, ctx.q())?;
    let scale = binomial(n as u64, l as u64) as f64 * ctx.q().norm().max(1.0).powi((l * (n - l)) as i32);
    Ok(scalar_residual(total, want, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn quad(n: usize) -> ParamQuad {
        let ctx = EllipticContext::elliptic(c(0.55, 0.2), c(0.2, 0.05)).unwrap();
        ParamQuad::new(c(0.8, 0.3), c(1.3, -0.4), c(0.6, 0.7), c(1.1, 0.2), n, ctx)
    }

    fn perturb(m: &CoeffMatrix, k: usize, l: usize) -> CoeffMatrix {
        let mut out = m.clone();
        out.set(k, l, m.get(k, l) * (1.0 + 1e-6));
        out
    }

    #[test]
    fn biorth_residual_detects_one_bad_entry() {
        let q = quad(3);
        let (r, s) = (r_explicit(&q).unwrap(), r_explicit(&q.inverse()).unwrap());
        let clean = product_residual(&r, &s, &identity(3));
        assert!(clean < 1e-10);
        for (k, l) in [(0, 0), (1, 2), (3, 3)] {
            let bad = product_residual(&perturb(&r, k, l), &s, &identity(3));
            assert!(bad >= clean + 1e-7 * 0.5 && bad > 1e-8, "({k},{l}): {bad}");
        }
    }

    #[test]
    fn addition_residual_detects_one_bad_entry() {
        let q = quad(2);
        let e = c(0.9, -0.6);
        let f = c(1.4, 0.3);
        let r1 = r_explicit(&q).unwrap();
        let r2 = r_explicit(&q.with(q.c, q.d, e, f)).unwrap();
        let r3 = r_explicit(&q.with(q.a, q.b, e, f)).unwrap();
        assert!(product_residual(&r1, &r2, &r3) < 1e-10);
        let bad = product_residual(&r1, &r2, &perturb(&r3, 1, 1));
        assert!(bad > 1e-7, "{bad}");
    }

    #[test]
    fn expansion_residual_detects_one_bad_entry() {
        let q = quad(3);
        let r = r_explicit(&q).unwrap();
        assert!(expansion_residual(&r, &q).unwrap() < 1e-10);
        assert!(expansion_residual(&perturb(&r, 2, 1), &q).unwrap() > 1e-7);
    }

    #[test]
    fn scalar_residual_is_linear() {
        let x = c(0.3, 0.4);
        let r = scalar_residual(x, x * (1.0 + 1e-6), 0.0);
        assert!((r - 1e-6).abs() < 1e-9);
        assert_eq!(scalar_residual(x, x, 10.0), 0.0);
    }

    #[test]
    fn krawtchouk_convolution_and_fusion() {
        let m = Sl2::from_abc(c(0.7, 0.4), c(1.2, -0.3), c(0.5, 0.9)).unwrap();
        assert!(krawtchouk_convolution_residual(&m, 2, 3).unwrap() < 1e-12);
        assert!(krawtchouk_multiconv_residual(&m, &[1, 0, 2], &[2, 1, 2]).unwrap() < 1e-12);
    }

    #[test]
    fn subset_residual_exact() {
        for mask in [0b0, 0b1011, 0b11111111] {
            assert!(subset_residual(8, mask, 3, c(0.6, 1.1)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn path_counts_are_q_binomials() {
        let ctx = EllipticContext::trigonometric(c(0.7, 0.3)).unwrap();
        for n in 0..=6 {
            for l in 0..=n {
                assert!(path_count_residual(n, l, &ctx).unwrap() < 1e-12, "N={n} l={l}");
            }
        }
    }

    #[test]
    fn every_suite_runs() {
        let cfg = SampleConfig::new(11, 1);
        for suite in Suite::ALL {
            for &level in suite.levels() {
                let o = super::super::run_trial(suite, level, &cfg, 0);
                assert!(
                    o.residual <= cfg.tol_for(level),
                    "{} {}: {:?}",
                    suite.name(),
                    level.name(),
                    o
                );
            }
        }
    }
}
