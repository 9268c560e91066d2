//! Complex scalar primitives: shifted factorials, q-Pochhammer symbols,
//! q-binomials, the theta function `θ(x;p)` and elliptic Pochhammer symbols.
//!
//! All base-`q` products are routed through [`EllipticContext`], which holds
//! the nome `p`. With `p = 0` the theta function degenerates to `1 - x`, so
//! the trigonometric level is exactly the elliptic code path at `p = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex double-precision scalar used for every parameter and value.
pub type Complex = Complex64;

/// Default truncation threshold for the theta product.
pub const DEFAULT_THETA_EPS: f64 = 1e-16;
/// Default relative comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A factor `v` used as a divisor is treated as zero when
/// `|v| <= SINGULAR_EPS * max(1, |x|)`, `x` being the factor's argument.
pub const SINGULAR_EPS: f64 = 1e-11;

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Deformation parameters `q`, `q^{1/2}`, nome `p` and numeric tolerances.
///
/// Immutable once built; use the `with_*` methods to derive variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticContext {
    q: Complex,
    q_half: Complex,
    p: Complex,
    theta_eps: f64,
    tol: f64,
}

impl EllipticContext {
    /// Builds a context from `q`, an explicit square root `q_half` and the nome `p`.
    pub fn new(q: Complex, q_half: Complex, p: Complex) -> Result<Self> {
        Self::with_all(q, q_half, p, DEFAULT_THETA_EPS, DEFAULT_TOL)
    }

    /// Trigonometric context (`p = 0`) with the principal square root of `q`.
    pub fn trigonometric(q: Complex) -> Result<Self> {
        Self::new(q, q.sqrt(), Complex::new(0.0, 0.0))
    }

    /// Elliptic context with the principal square root of `q`.
    pub fn elliptic(q: Complex, p: Complex) -> Result<Self> {
        Self::new(q, q.sqrt(), p)
    }

    pub fn with_all(q: Complex, q_half: Complex, p: Complex, theta_eps: f64, tol: f64) -> Result<Self> {
        if ![q, q_half, p].iter().copied().all(is_finite) {
            return Err(Error::Config("non-finite parameter".into()));
        }
        if q.norm() == 0.0 {
            return Err(Error::Config("q = 0 is not allowed".into()));
        }
        if p.norm() >= 1.0 {
            return Err(Error::Config(format!("nome must satisfy |p| < 1, got {}", p.norm())));
        }
        if !(theta_eps > 0.0 && theta_eps.is_finite()) {
            return Err(Error::Config("theta_eps must be positive".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Config("tol must be positive".into()));
        }
        if (q_half * q_half - q).norm() > tol * q.norm() {
            return Err(Error::Config("q_half^2 does not match q".into()));
        }
        Ok(EllipticContext {
            q,
            q_half,
            p,
            theta_eps,
            tol,
        })
    }

    pub fn q(&self) -> Complex {
        self.q
    }

    pub fn q_half(&self) -> Complex {
        self.q_half
    }

    pub fn p(&self) -> Complex {
        self.p
    }

    pub fn theta_eps(&self) -> f64 {
        self.theta_eps
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_trigonometric(&self) -> bool {
        self.p.norm() == 0.0
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        Self::with_all(self.q, self.q_half, self.p, self.theta_eps, tol)
    }

    pub fn with_theta_eps(self, theta_eps: f64) -> Result<Self> {
        Self::with_all(self.q, self.q_half, self.p, theta_eps, self.tol)
    }

    pub fn with_nome(self, p: Complex) -> Result<Self> {
        Self::with_all(self.q, self.q_half, p, self.theta_eps, self.tol)
    }

    /// The same context with base `1/q` (and `q^{1/2} -> 1/q^{1/2}`).
    pub fn inverted_base(self) -> Self {
        EllipticContext {
            q: self.q.inv(),
            q_half: self.q_half.inv(),
            ..self
        }
    }

    /// `q^n` for integer `n`.
    pub fn qpow(&self, n: i64) -> Complex {
        self.q.powi(n as i32)
    }

    /// `q^{n/2}` computed as `q_half^n`.
    pub fn qpow_half(&self, n: i64) -> Complex {
        self.q_half.powi(n as i32)
    }

    /// `q^s` for complex `s`, on the branch `log q = 2 log q_half`.
    pub fn qpow_complex(&self, s: Complex) -> Complex {
        (s * (self.q_half.ln() * 2.0)).exp()
    }

    /// Number of factors kept per side of the theta product for argument `x`.
    pub fn theta_factors(&self, x: Complex) -> usize {
        theta_truncation(x, self.p, self.theta_eps)
    }

    /// `θ(x;p)`.
    pub fn theta(&self, x: Complex) -> Result<Complex> {
        theta_with(x, self.p, self.theta_eps)
    }

    /// `θ(x_1;p)⋯θ(x_n;p)`.
    pub fn thetas(&self, xs: &[Complex]) -> Result<Complex> {
        xs.iter()
            .try_fold(Complex::new(1.0, 0.0), |acc, &x| Ok(acc * self.theta(x)?))
    }

    /// `θ(x;p)` for a factor that will be divided by; errors when it vanishes.
    pub fn theta_den(&self, x: Complex, name: &str) -> Result<Complex> {
        let v = self.theta(x)?;
        check_divisor(v, x, name)?;
        Ok(v)
    }

    /// Elliptic Pochhammer `(a;q,p)_k` (plain q-Pochhammer when `p = 0`).
    pub fn poch(&self, a: Complex, k: i64) -> Result<Complex> {
        elliptic_pochhammer(a, k, self)
    }

    /// `(a;q,p)_k` used as a divisor: every factor is checked for vanishing.
    pub fn poch_den(&self, a: Complex, k: i64, name: &str) -> Result<Complex> {
        let mut acc = Complex::new(1.0, 0.0);
        if k >= 0 {
            let mut x = a;
            for _ in 0..k {
                acc *= self.theta_den(x, name)?;
                x *= self.q;
            }
            Ok(acc)
        } else {
            // (a)_{-m} = 1/(a q^{-m})_m, so as a divisor it is a plain product.
            let inv = self.poch(a * self.qpow(k), -k)?;
            Ok(inv.inv())
        }
    }

    /// Product of Pochhammer symbols `(a_1,…,a_n;q,p)_k`.
    pub fn pochs(&self, xs: &[Complex], k: i64) -> Result<Complex> {
        xs.iter()
            .try_fold(Complex::new(1.0, 0.0), |acc, &x| Ok(acc * self.poch(x, k)?))
    }

    /// Elliptic q-binomial `(q)_N / ((q)_k (q)_{N-k})`, zero outside `0..=N`.
    pub fn binomial(&self, n: usize, k: i64) -> Result<Complex> {
        if k < 0 || k as usize > n {
            return Ok(Complex::new(0.0, 0.0));
        }
        let k = k as usize;
        let top = self.poch(self.q, n as i64)?;
        let bottom =
            self.poch_den(self.q, k as i64, "(q;q,p)_k")? * self.poch_den(self.q, (n - k) as i64, "(q;q,p)_{N-k}")?;
        Ok(top / bottom)
    }
}

pub(crate) fn check_divisor(v: Complex, x: Complex, name: &str) -> Result<()> {
    if v.norm() <= SINGULAR_EPS * x.norm().max(1.0) || !is_finite(v) {
        return Err(Error::singular(name, v.norm()));
    }
    Ok(())
}

/// Factors per side: `⌈ln ε / ln|p|⌉ + 2`, extended by the number of extra
/// factors needed before `|p^j x|` (resp. `|p^{j+1}/x|`) drops below one.
fn theta_truncation(x: Complex, p: Complex, eps: f64) -> usize {
    let pn = p.norm();
    if pn == 0.0 {
        return 1;
    }
    let lp = pn.ln();
    let base = (eps.ln() / lp).ceil().max(0.0);
    let lx = x.norm().ln().abs();
    let extra = (lx / -lp).ceil();
    (base + extra) as usize + 2
}

fn theta_with(x: Complex, p: Complex, eps: f64) -> Result<Complex> {
    if p.norm() == 0.0 {
        return Ok(Complex::new(1.0, 0.0) - x);
    }
    if x.norm() == 0.0 {
        return Err(Error::Domain("theta(0; p) with p != 0".into()));
    }
    let j_max = theta_truncation(x, p, eps);
    let one = Complex::new(1.0, 0.0);
    let xinv = x.inv();
    let mut pj = one;
    let mut acc = one;
    for _ in 0..j_max {
        let pj1 = pj * p;
        acc *= (one - pj * x) * (one - pj1 * xinv);
        pj = pj1;
    }
    Ok(acc)
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k-1)`.
pub fn rising_factorial(a: Complex, k: usize) -> Complex {
    (0..k).fold(Complex::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// q-Pochhammer `(a;q)_k`, with `(a;q)_{-m} = 1/(aq^{-m};q)_m`.
pub fn q_pochhammer(a: Complex, q: Complex, k: i64) -> Result<Complex> {
    let one = Complex::new(1.0, 0.0);
    if k >= 0 {
        let mut acc = one;
        let mut x = a;
        for _ in 0..k {
            acc *= one - x;
            x *= q;
        }
        return Ok(acc);
    }
    let m = -k;
    let mut acc = one;
    let mut x = a * q.powi(k as i32);
    for _ in 0..m {
        let f = one - x;
        check_divisor(f, x, "(a q^k;q)_{-k}")?;
        acc *= f;
        x *= q;
    }
    Ok(acc.inv())
}

/// q-binomial coefficient; zero when `k` lies outside `0..=n`.
pub fn q_binomial(n: usize, k: i64, q: Complex) -> Result<Complex> {
    if k < 0 || k as usize > n {
        return Ok(Complex::new(0.0, 0.0));
    }
    let k = k as usize;
    let one = Complex::new(1.0, 0.0);
    // (q;q)_N / ((q;q)_k (q;q)_{N-k}) = prod_{j=1}^{k} (1-q^{N-k+j}) / (1-q^j)
    let mut acc = one;
    for j in 1..=k {
        let den = one - q.powi(j as i32);
        check_divisor(den, q.powi(j as i32), "(q;q)_k")?;
        acc *= (one - q.powi((n - k + j) as i32)) / den;
    }
    Ok(acc)
}

/// `θ(x;p) = ∏_{j≥0}(1-p^j x)(1-p^{j+1}/x)`, truncated per the context.
pub fn theta(x: Complex, ctx: &EllipticContext) -> Result<Complex> {
    ctx.theta(x)
}

/// `(a;q,p)_k = ∏_{j<k} θ(aq^j;p)`; negative `k` by inversion.
pub fn elliptic_pochhammer(a: Complex, k: i64, ctx: &EllipticContext) -> Result<Complex> {
    let mut acc = Complex::new(1.0, 0.0);
    if k >= 0 {
        let mut x = a;
        for _ in 0..k {
            acc *= ctx.theta(x)?;
            x *= ctx.q;
        }
        return Ok(acc);
    }
    let mut x = a * ctx.qpow(k);
    for _ in 0..(-k) {
        acc *= ctx.theta_den(x, "(a q^k;q,p)_{-k}")?;
        x *= ctx.q;
    }
    Ok(acc.inv())
}

/// Exact binomial coefficient; exact for `n <= 60`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 1..=k as u128 {
        // acc = C(n-k+j-1, j-1) here, so the division is exact
        acc = acc * (n as u128 - k as u128 + j) / j;
    }
    acc as u64
}

/// `∏ nums / ∏ dens`, multiplying numerator and denominator factors in an
/// order that keeps the running product near unit modulus.
pub fn balanced_ratio(nums: &[Complex], dens: &[Complex]) -> Complex {
    if nums.iter().any(|z| z.norm() == 0.0) {
        return Complex::new(0.0, 0.0);
    }
    let mut num: Vec<Complex> = nums.to_vec();
    let mut den: Vec<Complex> = dens.to_vec();
    num.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    den.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let mut acc = Complex::new(1.0, 0.0);
    let mut log_acc = 0.0f64;
    while !num.is_empty() || !den.is_empty() {
        // candidates: (log-modulus after the step, is numerator, index)
        let mut best: Option<(f64, bool, usize)> = None;
        let mut consider = |lm: f64, is_num: bool, idx: usize| {
            if best.is_none_or(|(b, _, _)| lm.abs() < b.abs()) {
                best = Some((lm, is_num, idx));
            }
        };
        if let (Some(f), Some(l)) = (num.first(), num.last()) {
            consider(log_acc + f.norm().ln(), true, 0);
            consider(log_acc + l.norm().ln(), true, num.len() - 1);
        }
        if let (Some(f), Some(l)) = (den.first(), den.last()) {
            consider(log_acc - f.norm().ln(), false, 0);
            consider(log_acc - l.norm().ln(), false, den.len() - 1);
        }
        let (lm, is_num, idx) = best.unwrap();
        if is_num {
            acc *= num.remove(idx);
        } else {
            let d = den.remove(idx);
            // x / d without forming |d|², which overflows for large |d|
            let m = d.norm();
            acc = acc.unscale(m) * d.unscale(m).conj();
        }
        log_acc = lm;
    }
    acc
}

/// Relative difference `|a-b| / max(|a|,|b|,floor)`.
pub fn rel_diff(a: Complex, b: Complex, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}
