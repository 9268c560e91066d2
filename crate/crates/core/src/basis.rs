//! Twisted monomials `h_k(x;a) = (aξ, a/ξ; q,p)_k` with `x = ξ + 1/ξ`, basis
//! validity, membership in the theta-function space `W_N`, and the
//! collocation solve that expands a function in a basis `h_l(x;c) h_{N-l}(x;d)`.
//!
//! Functions handed to the solvers are evaluated at `ξ`, not at `x`; every
//! basis element is invariant under `ξ -> 1/ξ`, so either root works.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu};
use crate::scalar::{c, Complex, EllipticContext};

/// Default resonance margin for [`basis_valid`].
pub const DEFAULT_GEN_DELTA: f64 = 1e-5;
/// Number of `p^m` shifts (`|m| <= M_MAX`) examined at the elliptic level.
pub const ELLIPTIC_SHIFTS: i64 = 3;
/// Largest acceptable condition estimate of a collocation system.
pub const MAX_CONDITION: f64 = 1e10;
/// Radius of the default collocation points in the `ξ` plane.
pub const COLLOCATION_RADIUS: f64 = 1.3;
const RESAMPLE_LIMIT: usize = 5;

/// `h_k(x;a)` with the ambient degree `N` of a paired product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialSpec {
    pub a: Complex,
    pub k: usize,
    pub n: usize,
}

/// The basis `(h_l(x;c) h_{N-l}(x;d))_{l=0..N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    pub c: Complex,
    pub d: Complex,
    pub n: usize,
}

impl BasisPair {
    pub fn new(c: Complex, d: Complex, n: usize) -> Self {
        BasisPair { c, d, n }
    }

    /// `h_l(ξ;c) h_{N-l}(ξ;d)`.
    pub fn element(&self, l: usize, xi: Complex, ctx: &EllipticContext) -> Result<Complex> {
        Ok(h_xi(self.c, l, xi, ctx)? * h_xi(self.d, self.n - l, xi, ctx)?)
    }
}

/// Root `ξ` of `ξ² - xξ + 1 = 0` with `|ξ| >= 1`.
pub fn xi_from_x(x: Complex) -> Complex {
    let s = (x * x - 4.0).sqrt();
    let r1 = (x + s) / 2.0;
    let r2 = (x - s) / 2.0;
    if r1.norm() >= r2.norm() {
        r1
    } else {
        r2
    }
}

/// `h_k` evaluated at `ξ`: `∏_{j<k} θ(aq^jξ) θ(aq^j/ξ)`.
pub fn h_xi(a: Complex, k: usize, xi: Complex, ctx: &EllipticContext) -> Result<Complex> {
    if k == 0 {
        return Ok(c(1.0, 0.0));
    }
    if a.norm() == 0.0 && !ctx.is_trigonometric() {
        return Err(Error::Domain("h_k(x;0) is undefined for p != 0".into()));
    }
    let xi_inv = xi.inv();
    let mut acc = c(1.0, 0.0);
    let mut aq = a;
    for _ in 0..k {
        acc *= ctx.theta(aq * xi)? * ctx.theta(aq * xi_inv)?;
        aq *= ctx.q();
    }
    Ok(acc)
}

/// `h_k(x;a;q,p)` as a function of `x`.
pub fn h_monomial(spec: MonomialSpec, x: Complex, ctx: &EllipticContext) -> Result<Complex> {
    h_xi(spec.a, spec.k, xi_from_x(x), ctx)
}

/// Which basis-degeneracy condition was hit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Violation {
    /// `p^m c/d = q^j` with `1-N <= j <= N-1`.
    RatioResonance { j: i64, m: i64 },
    /// `p^m cd = q^j` with `1-N <= j <= 0`.
    ProductResonance { j: i64, m: i64 },
    /// `c = d = 0`.
    BothZero,
    /// A zero parameter at the elliptic level.
    ZeroAtElliptic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validity {
    pub valid: bool,
    pub violation: Option<Violation>,
    /// Smallest relative distance to the resonance set that was examined.
    pub margin: f64,
}

impl Validity {
    pub fn diagnostic(&self) -> String {
        match self.violation {
            None => format!("valid (resonance margin {:.3e})", self.margin),
            Some(Violation::RatioResonance { j, m }) => {
                format!("condition (c1): p^{m} c/d = q^{j}")
            }
            Some(Violation::ProductResonance { j, m }) => {
                format!("condition (c2): p^{m} cd = q^{j}")
            }
            Some(Violation::BothZero) => "condition (c3): c = d = 0".into(),
            Some(Violation::ZeroAtElliptic) => "zero parameter with p != 0".into(),
        }
    }
}

/// Distance of `v` to `{q^j p^m}` over the given exponent ranges, relative to
/// `max(1,|v|)`; returns the closest `(distance, j, m)`.
pub(crate) fn resonance_distance(
    v: Complex,
    js: impl Iterator<Item = i64> + Clone,
    ctx: &EllipticContext,
) -> (f64, i64, i64) {
    let ms = if ctx.is_trigonometric() {
        0..=0
    } else {
        -ELLIPTIC_SHIFTS..=ELLIPTIC_SHIFTS
    };
    let mut best = (f64::INFINITY, 0, 0);
    for m in ms {
        let pm = ctx.p().powi(m as i32);
        for j in js.clone() {
            let target = ctx.qpow(j);
            let dist = (v * pm - target).norm() / (v * pm).norm().max(1.0);
            if dist < best.0 {
                best = (dist, j, m);
            }
        }
    }
    best
}

/// Whether `(h_l(x;c) h_{N-l}(x;d))` is a basis of the degree-`N` space.
pub fn basis_valid(pair: BasisPair, ctx: &EllipticContext, gen_delta: f64) -> Validity {
    let n = pair.n as i64;
    let (cc, d) = (pair.c, pair.d);
    let zero_c = cc.norm() == 0.0;
    let zero_d = d.norm() == 0.0;
    if !ctx.is_trigonometric() && (zero_c || zero_d) {
        return Validity {
            valid: false,
            violation: Some(Violation::ZeroAtElliptic),
            margin: 0.0,
        };
    }
    if n >= 1 && zero_c && zero_d {
        return Validity {
            valid: false,
            violation: Some(Violation::BothZero),
            margin: 0.0,
        };
    }
    let mut margin = f64::INFINITY;
    if n >= 1 && !zero_c && !zero_d {
        let (dist, j, m) = resonance_distance(cc / d, (1 - n)..=(n - 1), ctx);
        if dist < gen_delta {
            return Validity {
                valid: false,
                violation: Some(Violation::RatioResonance { j, m }),
                margin: dist,
            };
        }
        margin = margin.min(dist);
    }
    if n >= 1 {
        let (dist, j, m) = resonance_distance(cc * d, (1 - n)..=0, ctx);
        if dist < gen_delta {
            return Validity {
                valid: false,
                violation: Some(Violation::ProductResonance { j, m }),
                margin: dist,
            };
        }
        margin = margin.min(dist);
    }
    Validity {
        valid: true,
        violation: None,
        margin,
    }
}

/// Coefficients of an expansion and the residual at held-out points.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub coeffs: Vec<Complex>,
    /// `max|f - Σ λ_l g_l|` at fresh points, relative to the largest term.
    pub residual: f64,
}

/// Collocation points `ξ_j = r exp(iπ(j + offset)/count)`.
pub fn collocation_points(count: usize, radius: f64, offset: f64) -> Vec<Complex> {
    (0..count)
        .map(|j| Complex::from_polar(radius, PI * (j as f64 + offset) / count as f64))
        .collect()
}

/// A factored collocation system for an arbitrary basis of dimension `dim`,
/// reusable for many right-hand sides.
pub struct Collocation<B> {
    dim: usize,
    basis: B,
    points: Vec<Complex>,
    col_scale: Vec<f64>,
    lu: Lu,
    condition: f64,
    check_radius: f64,
}

impl<B> Collocation<B>
where
    B: Fn(usize, Complex) -> Result<Complex>,
{
    /// Builds the system at `ξ_j = r exp(iπ(j+0.37)/dim)`, resampling the
    /// radius up to five times when the condition estimate exceeds
    /// [`MAX_CONDITION`].
    pub fn new(dim: usize, basis: B) -> Result<Self> {
        Self::with_radius(dim, basis, COLLOCATION_RADIUS)
    }

    /// As [`Collocation::new`] with the first attempt at radius `r`; held-out
    /// checks run at `0.93 r`.
    pub fn with_radius(dim: usize, basis: B, r: f64) -> Result<Self> {
        let mut worst = 0.0f64;
        for attempt in 0..=RESAMPLE_LIMIT {
            let radius = r * (1.0 + 0.083 * attempt as f64);
            let offset = 0.37 + 0.05 * attempt as f64;
            let points = collocation_points(dim, radius, offset);
            match Self::factor(dim, &basis, &points) {
                Ok((lu, col_scale, condition)) if condition <= MAX_CONDITION => {
                    return Ok(Collocation {
                        dim,
                        basis,
                        points,
                        col_scale,
                        lu,
                        condition,
                        check_radius: 0.93 * r,
                    });
                }
                Ok((_, _, condition)) => worst = worst.max(condition),
                Err(Error::IllConditioned { condition }) => worst = worst.max(condition),
                Err(e) => return Err(e),
            }
        }
        Err(Error::IllConditioned { condition: worst })
    }

    fn factor(dim: usize, basis: &B, points: &[Complex]) -> Result<(Lu, Vec<f64>, f64)> {
        let mut a = DenseMatrix::zeros(dim);
        for (i, &xi) in points.iter().enumerate() {
            for l in 0..dim {
                a.set(i, l, basis(l, xi)?);
            }
        }
        let mut col_scale = vec![0.0; dim];
        for (l, s) in col_scale.iter_mut().enumerate() {
            *s = (0..dim).map(|i| a.get(i, l).norm()).fold(0.0, f64::max);
            if *s == 0.0 {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
        }
        for i in 0..dim {
            for (l, s) in col_scale.iter().enumerate() {
                let v = a.get(i, l) / *s;
                a.set(i, l, v);
            }
        }
        let lu = Lu::factor(&a)?;
        let condition = lu.condition_inf();
        Ok((lu, col_scale, condition))
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    /// Expands `f` and measures the residual at `2·dim` held-out points.
    pub fn expand<F>(&self, f: F) -> Result<Expansion>
    where
        F: Fn(Complex) -> Result<Complex>,
    {
        let rhs = self.points.iter().map(|&xi| f(xi)).collect::<Result<Vec<_>>>()?;
        let y = self.lu.solve(&rhs);
        let coeffs: Vec<Complex> = y.iter().zip(&self.col_scale).map(|(v, s)| v / s).collect();
        let residual = self.residual(&f, &coeffs)?;
        Ok(Expansion { coeffs, residual })
    }

    /// Held-out residual of `f ≈ Σ coeffs_l g_l` at `2·dim` fresh points.
    pub fn residual<F>(&self, f: &F, coeffs: &[Complex]) -> Result<f64>
    where
        F: Fn(Complex) -> Result<Complex>,
    {
        let check = collocation_points(2 * self.dim, self.check_radius, 0.61);
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for &xi in &check {
            let fv = f(xi)?;
            let mut acc = Complex::new(0.0, 0.0);
            scale = scale.max(fv.norm());
            for (l, &cl) in coeffs.iter().enumerate() {
                let term = cl * (self.basis)(l, xi)?;
                scale = scale.max(term.norm());
                acc += term;
            }
            err = err.max((fv - acc).norm());
        }
        Ok(if scale == 0.0 { err } else { err / scale })
    }
}

/// Collocation system for the basis of a [`BasisPair`].
pub fn pair_collocation(
    pair: BasisPair,
    ctx: &EllipticContext,
) -> Result<Collocation<impl Fn(usize, Complex) -> Result<Complex> + '_>> {
    Collocation::new(pair.n + 1, move |l, xi| pair.element(l, xi, ctx))
}

/// Expands `f(ξ)` in the basis `h_l(x;c) h_{N-l}(x;d)` by collocation.
pub fn expand_by_solve<F>(f: F, pair: BasisPair, ctx: &EllipticContext) -> Result<Expansion>
where
    F: Fn(Complex) -> Result<Complex>,
{
    pair_collocation(pair, ctx)?.expand(f)
}

/// Largest relative defect of `f(ξ) = f(1/ξ)` and `f(pξ) = (pξ²)^{-N} f(ξ)`
/// over a fixed set of sample points.
pub fn wn_membership<F>(f: F, n: usize, ctx: &EllipticContext) -> Result<f64>
where
    F: Fn(Complex) -> Result<Complex>,
{
    if ctx.is_trigonometric() {
        return Err(Error::Domain("W_N membership needs p != 0".into()));
    }
    let p = ctx.p();
    let mut worst: f64 = 0.0;
    for s in 0..6 {
        let xi = Complex::from_polar(0.8 + 0.13 * s as f64, 0.7 + 1.1 * s as f64);
        let fx = f(xi)?;
        let finv = f(xi.inv())?;
        worst = worst.max(rel(fx, finv));
        let fp = f(p * xi)?;
        let factor = (p * xi * xi).inv().powi(n as i32);
        worst = worst.max(rel(fp, factor * fx));
    }
    Ok(worst)
}

fn rel(a: Complex, b: Complex) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}
