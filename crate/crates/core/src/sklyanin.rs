//! Sklyanin-type difference operators
//! `Δ(a,b,c,d) f(ξ) = [ξ^{-2} θ(aξ,bξ,cξ,dξ) f(q^{1/2}ξ) - ξ² θ(a/ξ,b/ξ,c/ξ,d/ξ) f(q^{-1/2}ξ)] / (ξ θ(ξ^{-2}))`
//! with `abcd = q^{-N}`, their action on the bases `h_k(x;λ) h_{N-k}(x;μ)`,
//! and the theta identities behind that action.

use serde::Serialize;

use crate::basis::{collocation_points, h_xi, BasisPair, Collocation};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{c, Complex, EllipticContext};

/// Relative size below which `θ(ξ^{-2})` counts as a zero of the denominator.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// Parameters of `Δ(a,b,c,d)` acting on the degree-`N` space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOpSpec {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub n: usize,
    pub ctx: EllipticContext,
}

impl DiffOpSpec {
    /// `Δ(a,b,c) = Δ(a,b,c,q^{-N}/abc)`.
    pub fn new(a: Complex, b: Complex, c: Complex, n: usize, ctx: EllipticContext) -> Result<Self> {
        let abc = a * b * c;
        if abc.norm() == 0.0 {
            return Err(Error::Domain("Δ(a,b,c) needs abc != 0".into()));
        }
        let d = ctx.qpow(-(n as i64)) / abc;
        Ok(DiffOpSpec { a, b, c, d, n, ctx })
    }

    /// All four parameters given; `abcd = q^{-N}` is checked to `tol·|q|^{-N}`.
    pub fn with_d(a: Complex, b: Complex, c: Complex, d: Complex, n: usize, ctx: EllipticContext) -> Result<Self> {
        let target = ctx.qpow(-(n as i64));
        let defect = (a * b * c * d - target).norm();
        if defect > ctx.tol() * target.norm() {
            return Err(Error::Domain(format!("abcd - q^-N = {defect:e} exceeds tolerance")));
        }
        Ok(DiffOpSpec { a, b, c, d, n, ctx })
    }
}

/// The two numerator terms and the denominator `ξθ(ξ^{-2})` of `Δf(ξ)`.
fn delta_terms<F>(op: &DiffOpSpec, f: &F, xi: Complex) -> Result<(Complex, Complex, Complex)>
where
    F: Fn(Complex) -> Result<Complex>,
{
    if xi.norm() == 0.0 {
        return Err(Error::Domain("Δ is not defined at ξ = 0".into()));
    }
    let ctx = &op.ctx;
    let inv = xi.inv();
    let t = ctx.theta(inv * inv)?;
    if t.norm() < DENOMINATOR_TOL * (inv * inv).norm().max(1.0) {
        return Err(Error::Domain(format!(
            "θ(ξ^-2) vanishes at ξ = {xi}; move the evaluation point"
        )));
    }
    let params = [op.a, op.b, op.c, op.d];
    let up = ctx.thetas(&params.map(|v| v * xi))?;
    let down = ctx.thetas(&params.map(|v| v * inv))?;
    let qh = ctx.q_half();
    let first = inv * inv * up * f(qh * xi)?;
    let second = xi * xi * down * f(xi / qh)?;
    Ok((first, second, xi * t))
}

/// `Δf(ξ)`, with the shifts `f(q^{±1/2}ξ)` taken through `ctx.q_half()`.
pub fn apply_delta<F>(op: &DiffOpSpec, f: F, xi: Complex) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let (first, second, den) = delta_terms(op, &f, xi)?;
    Ok((first - second) / den)
}

/// `Δf(ξ)` together with the larger of the two term magnitudes.
fn apply_delta_scaled<F>(op: &DiffOpSpec, f: &F, xi: Complex) -> Result<(Complex, f64)>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let (first, second, den) = delta_terms(op, f, xi)?;
    let dn = den.norm();
    Ok(((first - second) / den, first.norm().max(second.norm()) / dn))
}

/// Sample points for pointwise checks; none lies on `|ξ| = 1`.
fn sample_points(count: usize) -> Vec<Complex> {
    let mut pts = collocation_points(count, 1.17, 0.29);
    pts.extend(collocation_points(count.div_ceil(2), 0.83, 0.61));
    pts
}

/// `(q^{-N}/abc) θ(q^k ac, q^{N-k} bc, q^N ab)`.
pub fn eigenvalue(a: Complex, b: Complex, cc: Complex, k: usize, n: usize, ctx: &EllipticContext) -> Result<Complex> {
    let (ki, ni) = (k as i64, n as i64);
    let th = ctx.thetas(&[ctx.qpow(ki) * a * cc, ctx.qpow(ni - ki) * b * cc, ctx.qpow(ni) * a * b])?;
    Ok(ctx.qpow(-ni) / (a * b * cc) * th)
}

/// Largest relative defect of
/// `Δ(a,b,c) h_k(x;q^{1/2}a) h_{N-k}(x;q^{1/2}b) = eigenvalue · h_k(x;a) h_{N-k}(x;b)`
/// over `N+3` or more points.
pub fn eigenrelation_check(
    a: Complex,
    b: Complex,
    cc: Complex,
    k: usize,
    n: usize,
    ctx: &EllipticContext,
) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds N = {n}")));
    }
    let op = DiffOpSpec::new(a, b, cc, n, *ctx)?;
    let qh = ctx.q_half();
    let input = BasisPair::new(qh * a, qh * b, n);
    let output = BasisPair::new(a, b, n);
    let lambda = eigenvalue(a, b, cc, k, n, ctx)?;
    let g = |xi: Complex| input.element(k, xi, ctx);
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for xi in sample_points(n + 3) {
        let (lhs, s) = apply_delta_scaled(&op, &g, xi)?;
        let rhs = lambda * output.element(k, xi, ctx)?;
        err = err.max((lhs - rhs).norm());
        scale = scale.max(s).max(rhs.norm());
    }
    Ok(if scale == 0.0 { err } else { err / scale })
}

/// Matrix of an operator between two bases, column `k` holding the expansion
/// of the image of the `k`-th source element.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DenseMatrix,
    /// Held-out collocation residual of each column.
    pub column_residuals: Vec<f64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.column_residuals.len()
    }

    /// Largest entry with `|j-k| > width`, relative to its column's largest entry.
    pub fn band_excess(&self, width: usize) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let col = (0..n).map(|j| self.entries.get(j, k).norm()).fold(0.0, f64::max);
            if col == 0.0 {
                continue;
            }
            for j in 0..n {
                if j.abs_diff(k) > width {
                    worst = worst.max(self.entries.get(j, k).norm() / col);
                }
            }
        }
        worst
    }

    pub fn max_column_residual(&self) -> f64 {
        self.column_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Collocation radii tried for operator matrices; the best conditioned wins.
const RADII: [f64; 5] = [1.12, 1.21, 1.3, 1.42, 1.57];

/// Expands `image(k, ·)` for each `k` in the basis `target`.
fn expand_columns<F>(
    n: usize,
    target: BasisPair,
    ctx: &EllipticContext,
    radii: &[f64],
    image: F,
) -> Result<OperatorMatrix>
where
    F: Fn(usize, Complex) -> Result<Complex>,
{
    let basis = move |l, xi| target.element(l, xi, ctx);
    let mut best: Option<Collocation<_>> = None;
    let mut last_err = None;
    for &r in radii {
        match Collocation::with_radius(n + 1, basis, r) {
            Ok(sys) => {
                if best.as_ref().is_none_or(|b| sys.condition() < b.condition()) {
                    best = Some(sys);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let sys = match (best, last_err) {
        (Some(sys), _) => sys,
        (None, Some(e)) => return Err(e),
        (None, None) => unreachable!(),
    };
    let mut entries = DenseMatrix::zeros(n + 1);
    let mut column_residuals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let e = sys.expand(|xi| image(k, xi))?;
        for (j, v) in e.coeffs.iter().enumerate() {
            entries.set(j, k, *v);
        }
        column_residuals.push(e.residual);
    }
    Ok(OperatorMatrix {
        entries,
        column_residuals,
    })
}

/// Matrix of `Δ` from `g_k = h_k(x;λ) h_{N-k}(x;μ)` to the basis `target`.
pub fn operator_matrix_in(op: &DiffOpSpec, lambda: Complex, mu: Complex, target: BasisPair) -> Result<OperatorMatrix> {
    let n = op.n;
    if target.n != n {
        return Err(Error::Domain(format!(
            "target degree {} differs from N = {n}",
            target.n
        )));
    }
    let ctx = op.ctx;
    let source = BasisPair::new(lambda, mu, n);
    expand_columns(n, target, &ctx, &RADII, |k, xi| {
        apply_delta(op, |z| source.element(k, z, &ctx), xi)
    })
}

/// Matrix of `Δ` from `h_k(x;λ) h_{N-k}(x;μ)` to `h_j(x;q^{1/2}λ) h_{N-j}(x;q^{1/2}μ)`.
/// Tridiagonal for generic parameters.
pub fn operator_matrix(op: &DiffOpSpec, lambda: Complex, mu: Complex) -> Result<OperatorMatrix> {
    let qh = op.ctx.q_half();
    operator_matrix_in(op, lambda, mu, BasisPair::new(qh * lambda, qh * mu, op.n))
}

/// Matrix of `Δ(a,b,c)` from `h_k(x;q^{1/2}a) h_{N-k}(x;q^{1/2}b)` to
/// `h_j(x;a) h_{N-j}(x;b)`, which is diagonal.
pub fn eigenbasis_matrix(op: &DiffOpSpec) -> Result<OperatorMatrix> {
    let qh = op.ctx.q_half();
    operator_matrix_in(op, qh * op.a, qh * op.b, BasisPair::new(op.a, op.b, op.n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GevpReport {
    /// `λ_k` as `(re, im)` pairs.
    pub lambdas: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// `λ_k = (d₂/c) θ(q^k a'c, q^{N-k} b'c) / θ(q^k a'd₂, q^{N-k} b'd₂)` with
/// `a' = q^{-1/2}a`, `b' = q^{-1/2}b`; the ratio of the two eigenvalues.
pub fn gevp_lambda(
    a: Complex,
    b: Complex,
    cc: Complex,
    d2: Complex,
    k: usize,
    n: usize,
    ctx: &EllipticContext,
) -> Result<Complex> {
    let qh = ctx.q_half();
    let (ap, bp) = (a / qh, b / qh);
    let (ki, ni) = (k as i64, n as i64);
    let num = ctx.thetas(&[ctx.qpow(ki) * ap * cc, ctx.qpow(ni - ki) * bp * cc])?;
    let den = ctx.theta_den(ctx.qpow(ki) * ap * d2, "θ(q^k a'd₂)")?
        * ctx.theta_den(ctx.qpow(ni - ki) * bp * d2, "θ(q^{N-k} b'd₂)")?;
    Ok(d2 / cc * num / den)
}

/// Pointwise residual of `Δ₁e_k = λ_k Δ₂e_k` for each `k`, with
/// `Δ₁ = Δ(q^{-1/2}a, q^{-1/2}b, c)`, `Δ₂ = Δ(q^{-1/2}a, q^{-1/2}b, d₂)` and
/// `e_k = h_k(x;a) h_{N-k}(x;b)`.
pub fn gevp_check(
    a: Complex,
    b: Complex,
    cc: Complex,
    d2: Complex,
    n: usize,
    ctx: &EllipticContext,
) -> Result<GevpReport> {
    let qh = ctx.q_half();
    let d1 = DiffOpSpec::new(a / qh, b / qh, cc, n, *ctx)?;
    let d2op = DiffOpSpec::new(a / qh, b / qh, d2, n, *ctx)?;
    let e = BasisPair::new(a, b, n);
    let mut lambdas = Vec::with_capacity(n + 1);
    let mut residuals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let lam = gevp_lambda(a, b, cc, d2, k, n, ctx)?;
        let ek = |xi: Complex| e.element(k, xi, ctx);
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for xi in sample_points(n + 3) {
            let (l1, s1) = apply_delta_scaled(&d1, &ek, xi)?;
            let (l2, s2) = apply_delta_scaled(&d2op, &ek, xi)?;
            err = err.max((l1 - lam * l2).norm());
            scale = scale.max(s1).max(s2 * lam.norm());
        }
        lambdas.push([lam.re, lam.im]);
        residuals.push(if scale == 0.0 { err } else { err / scale });
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(GevpReport {
        lambdas,
        residuals,
        max_residual,
    })
}

/// Matrix of `Y = Δ₃Δ₁` in the basis `e_k = h_k(x;a) h_{N-k}(x;b)`, with
/// `Δ₁ = Δ(q^{-1/2}a, q^{-1/2}b, c)` and `Δ₃ = Δ(e,f,g)`. Both factors are
/// expanded by collocation through the intermediate basis
/// `h_j(x;q^{-1/2}a) h_{N-j}(x;q^{-1/2}b)` and multiplied; expanding the nested
/// image directly loses about three digits to the double cancellation.
#[allow(clippy::too_many_arguments)]
pub fn composed_matrix(
    a: Complex,
    b: Complex,
    cc: Complex,
    e: Complex,
    f: Complex,
    g: Complex,
    n: usize,
    ctx: &EllipticContext,
) -> Result<OperatorMatrix> {
    let qh = ctx.q_half();
    let (ap, bp) = (a / qh, b / qh);
    let d1 = DiffOpSpec::new(ap, bp, cc, n, *ctx)?;
    let d3 = DiffOpSpec::new(e, f, g, n, *ctx)?;
    let first = operator_matrix_in(&d1, a, b, BasisPair::new(ap, bp, n))?;
    let second = operator_matrix_in(&d3, ap, bp, BasisPair::new(a, b, n))?;
    let mut entries = DenseMatrix::zeros(n + 1);
    for i in 0..=n {
        for k in 0..=n {
            let v = (0..=n)
                .map(|j| second.entries.get(i, j) * first.entries.get(j, k))
                .sum();
            entries.set(i, k, v);
        }
    }
    let column_residuals = first
        .column_residuals
        .iter()
        .zip(&second.column_residuals)
        .map(|(x, y)| x.max(*y))
        .collect();
    Ok(OperatorMatrix {
        entries,
        column_residuals,
    })
}

/// A theta identity with the data needed to evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaIdentity {
    /// The partial-fraction identity in `n` numbers `a_j` and `n+2` numbers
    /// `b_j` with `a_1⋯a_n b_1⋯b_{n+2} = 1`, at the point `ξ`.
    Pfl {
        a: Vec<Complex>,
        b: Vec<Complex>,
        xi: Complex,
    },
    /// `(v/x) θ(xy,x/y,uv,u/v) = θ(ux,u/x,vy,v/y) - θ(uy,u/y,vx,v/x)`.
    Riemann {
        u: Complex,
        v: Complex,
        x: Complex,
        y: Complex,
    },
    /// The same identity with every `θ(z)` replaced by `1 - z`.
    Tadd {
        u: Complex,
        v: Complex,
        x: Complex,
        y: Complex,
    },
    /// Band structure of `operator_matrix(op, λ, μ)` beyond the tridiagonal;
    /// the context must have `p = 0`.
    LeonardTridiag {
        op: DiffOpSpec,
        lambda: Complex,
        mu: Complex,
    },
}

/// Largest `n` accepted by the partial-fraction identity.
pub const PFL_MAX: usize = 5;

/// Completes `(b_1..b_{n+1})` by `b_{n+2} = 1/(a_1⋯a_n b_1⋯b_{n+1})`.
pub fn pfl_complete(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let prod: Complex = a.iter().chain(b).product();
    let mut out = b.to_vec();
    out.push(prod.inv());
    out
}

fn relative(err: Complex, terms: &[Complex]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        err.norm()
    } else {
        err.norm() / scale
    }
}

fn pfl_residual(a: &[Complex], b: &[Complex], xi: Complex, ctx: &EllipticContext) -> Result<f64> {
    let n = a.len();
    if n == 0 || n > PFL_MAX || b.len() != n + 2 {
        return Err(Error::Domain(format!(
            "need 1..={PFL_MAX} numbers a_j and two more b_j, got {} and {}",
            n,
            b.len()
        )));
    }
    let prod: Complex = a.iter().chain(b).product();
    if (prod - 1.0).norm() > ctx.tol() {
        return Err(Error::Domain(format!("a_1⋯a_n b_1⋯b_(n+2) = {prod}, not 1")));
    }
    let inv = xi.inv();
    let side = |z: Complex| -> Result<Complex> {
        Ok(ctx.thetas(&a.iter().map(|v| v * z).collect::<Vec<_>>())?
            * ctx.thetas(&b.iter().map(|v| v * z).collect::<Vec<_>>())?)
    };
    let e = (n + 1) as i32;
    let left_up = xi.powi(-e) * side(xi)?;
    let left_down = xi.powi(e) * side(inv)?;
    let a_prod: Complex = a.iter().product();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let front = sign * xi * ctx.theta(inv * inv)? / a_prod;
    let mut terms = vec![left_up, left_down];
    let mut rhs = c(0.0, 0.0);
    for k in 0..n {
        let mut t = ctx.thetas(&b.iter().map(|v| a[k] * v).collect::<Vec<_>>())?;
        for j in (0..n).filter(|&j| j != k) {
            t *= ctx.theta(a[j] * xi)? * ctx.theta(a[j] * inv)?;
            t /= ctx.theta_den(a[k] / a[j], "θ(a_k/a_j)")?;
        }
        let term = front * t;
        terms.push(term);
        rhs += term;
    }
    Ok(relative(left_up - left_down - rhs, &terms))
}

fn addition_residual(
    u: Complex,
    v: Complex,
    x: Complex,
    y: Complex,
    th: impl Fn(Complex) -> Result<Complex>,
) -> Result<f64> {
    let prod = |zs: [Complex; 4]| -> Result<Complex> { zs.iter().try_fold(c(1.0, 0.0), |acc, &z| Ok(acc * th(z)?)) };
    let left = v / x * prod([x * y, x / y, u * v, u / v])?;
    let t1 = prod([u * x, u / x, v * y, v / y])?;
    let t2 = prod([u * y, u / y, v * x, v / x])?;
    Ok(relative(left - t1 + t2, &[left, t1, t2]))
}

/// Relative residual of the identity at its data.
pub fn theta_identity_check(id: &ThetaIdentity, ctx: &EllipticContext) -> Result<f64> {
    match id {
        ThetaIdentity::Pfl { a, b, xi } => pfl_residual(a, b, *xi, ctx),
        ThetaIdentity::Riemann { u, v, x, y } => addition_residual(*u, *v, *x, *y, |z| ctx.theta(z)),
        ThetaIdentity::Tadd { u, v, x, y } => addition_residual(*u, *v, *x, *y, |z| Ok(1.0 - z)),
        ThetaIdentity::LeonardTridiag { op, lambda, mu } => {
            if !op.ctx.is_trigonometric() {
                return Err(Error::Domain("the tridiagonality check runs at p = 0".into()));
            }
            let m = operator_matrix(op, *lambda, *mu)?;
            Ok(m.band_excess(1).max(m.max_column_residual()))
        }
    }
}

/// `h_k(x;λ) h_{N-k}(x;μ)` at `ξ`, exposed for callers that build their own checks.
pub fn source_element(
    lambda: Complex,
    mu: Complex,
    k: usize,
    n: usize,
    xi: Complex,
    ctx: &EllipticContext,
) -> Result<Complex> {
    Ok(h_xi(lambda, k, xi, ctx)? * h_xi(mu, n - k, xi, ctx)?)
}
