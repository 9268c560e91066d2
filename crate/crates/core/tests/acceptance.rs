//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line with its measured maximum and tolerance.

mod common;

use num_complex::Complex64 as C;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{jackson_product, norm_inf, q_binomial, subset_count};
use sixj_core::harness::suites::{convolution_residual, multiconv_residual, product_residual};
use sixj_core::harness::{sample_at_degree, sample_generic, Level, SampleConfig, Shape};
use sixj_core::scalar::EllipticContext;
use sixj_core::series::{series_terms, SeriesSpec};
use sixj_core::sixj::fusion::multiconv_rhs_scaled;
use sixj_core::sixj::krawtchouk::{krawtchouk_matrix, subset_identity};
use sixj_core::sixj::limits::{limit_transitions, LimitInputs, LimitKind};
use sixj_core::sixj::paths::enumerate_paths;
use sixj_core::sixj::qracah::{qracah_dual_matrix, qracah_matrix};
use sixj_core::sixj::w6j::{band_violation, w6j_quad, W6jArgs};
use sixj_core::sixj::{compute, r_double_sum, r_explicit, r_paths, CoeffMatrix, Route};
use sixj_core::sklyanin::{
    eigenrelation_check, gevp_check, operator_matrix, theta_identity_check, DiffOpSpec, ThetaIdentity,
};
use sixj_core::wilson::{grid_biorth, grid_norm, quad_to_wilson, wilson_addition, wilson_biorth, wilson_norm};

/// One measured quantity of a criterion; `tol = None` is informational.
struct Part {
    label: String,
    worst: f64,
    tol: Option<f64>,
}

fn part(label: impl Into<String>, worst: f64, tol: f64) -> Part {
    Part {
        label: label.into(),
        worst,
        tol: Some(tol),
    }
}

fn info(label: impl Into<String>, worst: f64) -> Part {
    Part {
        label: label.into(),
        worst,
        tol: None,
    }
}

fn verdict(id: usize, name: &str, parts: &[Part]) {
    let pass = parts.iter().all(|p| p.tol.is_none_or(|t| p.worst <= t));
    let detail: Vec<String> = parts
        .iter()
        .map(|p| match p.tol {
            Some(t) => format!("{} {:.2e}/{:.0e}", p.label, p.worst, t),
            None => format!("{} {:.2e} (no tolerance)", p.label, p.worst),
        })
        .collect();
    println!(
        "criterion {id:2} {name}: {} [{}]",
        if pass { "PASS" } else { "FAIL" },
        detail.join(", ")
    );
    assert!(pass, "criterion {id} ({name}) failed: {}", detail.join(", "));
}

fn cfg(seed: u64, trials: usize, n_max: usize) -> SampleConfig {
    let mut c = SampleConfig::new(seed, trials);
    c.n_max = n_max;
    c
}

/// The residual is normalized by the largest of `|rhs|` and the term moduli,
/// as for every harness residual; the error relative to `|rhs|` alone is
/// reported next to it without a tolerance.
#[test]
fn c01_jackson_summation() {
    let mut parts = Vec::new();
    for (level, tol) in [(Level::Trig, 1e-10), (Level::Elliptic, 1e-9)] {
        let cfg = cfg(101, 200, 6);
        let (mut worst, mut plain): (f64, f64) = (0.0, 0.0);
        for t in 0..cfg.trials {
            let s = sample_generic(&cfg, Shape::Quad, level, &mut cfg.rng(t)).unwrap();
            let (a, b, c, xi) = (s.get("a"), s.get("b"), s.get("c"), s.get("d"));
            let terms = series_terms(&SeriesSpec::jackson(a, b, c, xi, s.n, &s.ctx)).unwrap();
            let lhs: C = terms.iter().sum();
            let rhs = jackson_product(a, b, c, xi, s.n, s.ctx.q(), s.ctx.p());
            let scale = terms.iter().map(|z| z.norm()).fold(rhs.norm(), f64::max);
            worst = worst.max((lhs - rhs).norm() / scale);
            plain = plain.max((lhs - rhs).norm() / rhs.norm());
        }
        parts.push(part(level.name(), worst, tol));
        parts.push(info(format!("{} relative to |rhs|", level.name()), plain));
    }
    verdict(1, "Jackson summation", &parts);
}

#[test]
fn c02_four_route_agreement() {
    let mut parts = Vec::new();
    for (level, tol) in [(Level::Trig, 1e-8), (Level::Elliptic, 1e-7)] {
        let cfg = cfg(202, 50, 5);
        let mut worst: f64 = 0.0;
        for t in 0..cfg.trials {
            let s = sample_generic(&cfg, Shape::Quad, level, &mut cfg.rng(t)).unwrap();
            let ms: Vec<CoeffMatrix> = Route::ALL.iter().map(|&r| compute(&s.quad(), r).unwrap()).collect();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    worst = worst.max(ms[i].rel_diff(&ms[j]));
                }
            }
        }
        parts.push(part(level.name(), worst, tol));
    }
    verdict(2, "four-route agreement", &parts);
}

fn identity_defect(a: &CoeffMatrix, b: &CoeffMatrix) -> f64 {
    let p = a.mul(b);
    let dim = p.dim();
    let mut d: Vec<C> = p.entries().to_vec();
    for i in 0..dim {
        d[i * dim + i] -= 1.0;
    }
    norm_inf(&d, dim)
}

#[test]
fn c03_biorthogonality() {
    let mut parts = Vec::new();
    for (level, tol) in [
        (Level::Krawtchouk, 1e-8),
        (Level::Qracah, 1e-8),
        (Level::Trig, 1e-8),
        (Level::Elliptic, 1e-7),
    ] {
        let cfg = cfg(303, 50, 4);
        let mut worst: f64 = 0.0;
        for t in 0..cfg.trials {
            let s = sample_generic(&cfg, Shape::Quad, level, &mut cfg.rng(t)).unwrap();
            let d = match level {
                Level::Krawtchouk => {
                    let m = s.sl2("");
                    identity_defect(
                        &krawtchouk_matrix(s.n, &m).unwrap(),
                        &krawtchouk_matrix(s.n, &m.inverse()).unwrap(),
                    )
                }
                Level::Qracah => {
                    let q = s.quad();
                    identity_defect(&qracah_matrix(&q).unwrap(), &qracah_dual_matrix(&q).unwrap())
                }
                _ => {
                    let q = s.quad();
                    identity_defect(&r_explicit(&q).unwrap(), &r_explicit(&q.inverse()).unwrap())
                }
            };
            worst = worst.max(d);
        }
        parts.push(part(level.name(), worst, tol));
    }
    verdict(3, "biorthogonality", &parts);
}

#[test]
fn c04_addition_formula() {
    let mut parts = Vec::new();
    for (label, nome) in [("p=0", None), ("p=0.15", Some(C::new(0.15, 0.0)))] {
        let mut cfg = cfg(404, 30, 3);
        cfg.nome = nome;
        let level = if nome.is_some() { Level::Elliptic } else { Level::Trig };
        let mut worst: f64 = 0.0;
        for t in 0..cfg.trials {
            let s = sample_generic(&cfg, Shape::Triple, level, &mut cfg.rng(t)).unwrap();
            let g = |x: &str| s.get(x);
            let base = s.quad();
            let r1 = r_explicit(&base.with(g("a"), g("b"), g("c"), g("d"))).unwrap();
            let r2 = r_explicit(&base.with(g("c"), g("d"), g("e"), g("f"))).unwrap();
            let r3 = r_explicit(&base.with(g("a"), g("b"), g("e"), g("f"))).unwrap();
            worst = worst.max(product_residual(&r1, &r2, &r3));
        }
        parts.push(part(label, worst, 1e-7));
    }
    verdict(4, "addition formula", &parts);
}

#[test]
fn c05_convolution() {
    let mut parts = Vec::new();
    for level in [Level::Trig, Level::Elliptic] {
        for (bm, bn) in [(1, 1), (1, 2), (2, 2)] {
            let cfg = cfg(505 + (bm * 10 + bn) as u64, 20, 4);
            let mut worst: f64 = 0.0;
            for t in 0..cfg.trials {
                let s = sample_at_degree(&cfg, Shape::Quad, level, bm + bn, &mut cfg.rng(t)).unwrap();
                worst = worst.max(convolution_residual(&s.quad(), bm, bn).unwrap());
            }
            parts.push(part(format!("{} ({bm},{bn})", level.name()), worst, 1e-7));
        }
    }
    verdict(5, "convolution, all (alpha,beta)", &parts);
}

#[test]
fn c06_multi_convolution() {
    let mut parts = Vec::new();
    for level in [Level::Trig, Level::Elliptic] {
        let cfg = cfg(606, 30, 4);
        let (mut fused, mut perm): (f64, f64) = (0.0, 0.0);
        for t in 0..cfg.trials {
            let mut rng = cfg.rng(t);
            let factors = 1 + t % 4;
            let sizes: Vec<usize> = (0..factors).map(|_| rng.gen_range(1..=2)).collect();
            let total: usize = sizes.iter().sum();
            let s = sample_at_degree(&cfg, Shape::Quad, level, total, &mut rng).unwrap();
            let quad = s.quad();
            let k: Vec<usize> = sizes.iter().map(|&m| rng.gen_range(0..=m)).collect();
            let id: Vec<usize> = (0..factors).collect();
            let mut orders = vec![(id.clone(), id.clone())];
            for _ in 0..2 {
                let (mut sg, mut ta) = (id.clone(), id.clone());
                sg.shuffle(&mut rng);
                ta.shuffle(&mut rng);
                orders.push((sg, ta));
            }
            for (sg, ta) in &orders {
                fused = fused.max(multiconv_residual(&quad, &k, &sizes, sg, ta).unwrap());
            }
            for l in 0..=total {
                let vals: Vec<(C, f64)> = orders
                    .iter()
                    .map(|(sg, ta)| multiconv_rhs_scaled(&k, l, &sizes, &quad, sg, ta, Route::Explicit).unwrap())
                    .collect();
                for (v, sc) in &vals[1..] {
                    let scale = sc.max(vals[0].1).max(v.norm());
                    perm = perm.max((v - vals[0].0).norm() / scale);
                }
            }
        }
        parts.push(part(format!("{} fused", level.name()), fused, 1e-8));
        parts.push(part(format!("{} permutations", level.name()), perm, 1e-8));
    }
    verdict(6, "multi-convolution and fusion", &parts);
}

#[test]
fn c07_wilson() {
    let cfg = cfg(707, 10, 5);
    let (mut wo, mut eto, mut wadd): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for t in 0..cfg.trials {
        let mut rng = cfg.rng(t);
        let s = sample_generic(&cfg, Shape::Wilson, Level::Trig, &mut rng).unwrap();
        let quad = s.quad();
        let wp = quad_to_wilson(&quad).unwrap();
        let n = quad.n;
        for i in 0..=n {
            let cg = grid_norm(i, &quad).unwrap().norm();
            let cw = wilson_norm(i, &wp).unwrap().norm();
            for j in 0..=n {
                let g = grid_biorth(&quad, i, j).unwrap();
                eto = eto.max((g.sum - g.expected).norm() / cg);
                let w = wilson_biorth(&wp, i, j).unwrap();
                wo = wo.max((w.sum - w.expected).norm() / cw);
                let [x, y, z] = wilson_addition(&wp, s.get("s"), s.get("t"), i, j).unwrap();
                let scale = x.norm().max(y.norm()).max(z.norm());
                wadd = wadd.max((x - y).norm().max((x - z).norm()).max((y - z).norm()) / scale);
            }
        }
    }
    verdict(
        7,
        "Wilson biorthogonality and addition",
        &[
            part("grid/|C_n|", eto, 1e-8),
            part("wilson/|C_n|", wo, 1e-8),
            part("addition", wadd, 1e-7),
        ],
    );
}

#[test]
fn c08_sklyanin() {
    let mut parts = Vec::new();
    for level in [Level::Trig, Level::Elliptic] {
        let cfg = cfg(808, 30, 4);
        let (mut eig, mut band, mut gevp, mut leonard): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        for t in 0..cfg.trials {
            let s = sample_generic(&cfg, Shape::Sklyanin, level, &mut cfg.rng(t)).unwrap();
            let g = |x: &str| s.get(x);
            let (n, ctx) = (s.n, s.ctx);
            for k in 0..=n {
                eig = eig.max(eigenrelation_check(g("a"), g("b"), g("c"), k, n, &ctx).unwrap());
            }
            let op = DiffOpSpec::with_d(g("a"), g("b"), g("c"), g("d"), n, ctx).unwrap();
            let m = operator_matrix(&op, g("lambda"), g("mu")).unwrap();
            band = band.max(m.band_excess(1)).max(m.max_column_residual());
            gevp = gevp.max(
                gevp_check(g("a"), g("b"), g("c"), g("d2"), n, &ctx)
                    .unwrap()
                    .max_residual,
            );
            if level == Level::Trig {
                let id = ThetaIdentity::LeonardTridiag {
                    op,
                    lambda: g("lambda"),
                    mu: g("mu"),
                };
                leonard = leonard.max(theta_identity_check(&id, &ctx).unwrap());
            }
        }
        let name = level.name();
        parts.push(part(format!("{name} eigen"), eig, 1e-7));
        parts.push(part(format!("{name} tridiagonal"), band, 1e-7));
        parts.push(part(format!("{name} gevp"), gevp, 1e-7));
        if level == Level::Trig {
            parts.push(part("leonard", leonard, 1e-7));
        }
    }
    verdict(8, "Sklyanin operators", &parts);
}

/// Passes when every transition's error ratio lies in `[0.5, 2]` times the
/// scale ratio and the `p = 0` evaluation matches the trigonometric one.
#[test]
fn c09_limit_transitions() {
    let cfg = cfg(909, 20, 3);
    let mut parts = Vec::new();
    for kind in LimitKind::ALL {
        let (mut off, mut lo, mut hi): (f64, f64, f64) = (0.0, f64::INFINITY, 0.0);
        let mut exact: f64 = 0.0;
        for t in 0..cfg.trials {
            let mut rng = cfg.rng(t);
            let s = sample_generic(&cfg, Shape::Quad, Level::Elliptic, &mut rng).unwrap();
            let k = rng.gen_range(0..=s.n);
            let l = rng.gen_range(0..=s.n);
            let r = limit_transitions(kind, &LimitInputs::new(s.quad(), k, l)).unwrap();
            let scale_ratio = r.scales[0] / r.scales[1];
            let rel = r.ratio / scale_ratio;
            lo = lo.min(r.order);
            hi = hi.max(r.order);
            // distance of ratio/t-ratio from the window [0.5, 2], in factors of two
            off = off.max((rel / 2.0).log2().max((0.5 / rel).log2()).max(0.0));
            if let Some(e) = r.exact_error {
                exact = exact.max(e);
            }
        }
        parts.push(part(
            format!("{kind:?} window excess (order {lo:.2}..{hi:.2})"),
            off,
            0.0,
        ));
        if kind == LimitKind::EllToTrig {
            parts.push(part("p=0 vs trig", exact, 1e-12));
        }
    }
    verdict(9, "limit transitions, first-order decay", &parts);
}

#[test]
fn c10_exact_combinatorics() {
    let mut kcomb: f64 = 0.0;
    for n in 0..=8usize {
        for mask in 0u64..(1 << n) {
            for l in 0..=n {
                for t in [2i64, 3, -1] {
                    let (lhs, _) = subset_identity(n, mask, l, C::new(t as f64, 0.0)).unwrap();
                    let want = subset_count(n, mask, l, t) as f64;
                    kcomb = kcomb.max((lhs - want).norm() / want.abs().max(1.0));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut paths: f64 = 0.0;
    for _ in 0..5 {
        let q = C::from_polar(rng.gen_range(0.35..0.85), rng.gen_range(0.0..std::f64::consts::TAU));
        let ctx = EllipticContext::trigonometric(q).unwrap();
        for n in 0..=10usize {
            for l in 0..=n {
                let sum: C = enumerate_paths(0, l, n).iter().map(|p| ctx.qpow(p.area())).sum();
                let want = q_binomial(n, l, q);
                paths = paths.max((sum - want).norm() / want.norm());
            }
        }
    }
    verdict(
        10,
        "exact combinatorics",
        &[part("subsets N<=8", kcomb, 1e-12), part("paths N<=10", paths, 1e-12)],
    );
}

#[test]
fn c11_w6j_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut parts = Vec::new();
    for (bm, bn) in [(1usize, 2usize), (2, 3)] {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let q = C::from_polar(rng.gen_range(0.35..0.85), rng.gen_range(0.0..std::f64::consts::TAU));
            let p = C::from_polar(rng.gen_range(0.05..0.3), rng.gen_range(0.0..std::f64::consts::TAU));
            let ctx = EllipticContext::elliptic(q, p).unwrap();
            let i = rng.gen_range(0..=bn as i64);
            let m = rng.gen_range(0..=bm as i64);
            let args = W6jArgs {
                i,
                j: i + 2 * m - bm as i64,
                k: 0,
                l: 0,
                u: C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                xi: C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                big_m: bm,
                big_n: bn,
            };
            let (quad, shift) = w6j_quad(&args, &ctx).unwrap();
            for r in [r_double_sum(&quad).unwrap(), r_paths(&quad).unwrap()] {
                worst = worst.max(band_violation(&r, shift, bm));
            }
        }
        parts.push(part(format!("(M,N)=({bm},{bn})"), worst, 1e-10));
    }
    verdict(11, "elliptic 6j band structure", &parts);
}
