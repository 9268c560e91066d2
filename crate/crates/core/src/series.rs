//! Terminating hypergeometric series: `rFs`, basic `rφs`, very-well-poised
//! `r+1Wr` and the elliptic `12V11`, plus the Jackson product.
//!
//! Sums run by the term-ratio recurrence. The terminating parameter sits in
//! a fixed slot of [`SeriesSpec::top`] and is never searched for:
//!
//! * `F`, `Phi`: `top[0]` is `-n` (resp. `q^{-n}`);
//! * `W`, `V12`: `top[0]` is the well-poised parameter `a`, `top[1]` is
//!   `q^{-n}`, and the denominators `aq/b_i` are generated from `top[1..]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{check_divisor, Complex, EllipticContext};

/// Relative slack when checking that the terminating slot equals `q^{-n}`.
pub const TERMINATION_TOL: f64 = 1e-10;
/// Relative slack for the elliptic balancing condition.
pub const BALANCING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    F,
    Phi,
    W,
    V12,
}

/// Description of a terminating series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub family: Family,
    pub top: Vec<Complex>,
    /// Denominator parameters other than the implicit `(q;q)_k` / `k!`;
    /// empty for the well-poised families.
    pub bottom: Vec<Complex>,
    pub base: Complex,
    pub nome: Complex,
    pub argument: Complex,
    pub terms: usize,
}

impl SeriesSpec {
    /// `rFs[-n, top…; bottom…; z]`.
    pub fn hypergeometric(n: usize, top: &[Complex], bottom: &[Complex], z: Complex) -> Self {
        let mut t = vec![Complex::new(-(n as f64), 0.0)];
        t.extend_from_slice(top);
        SeriesSpec {
            family: Family::F,
            top: t,
            bottom: bottom.to_vec(),
            base: Complex::new(1.0, 0.0),
            nome: Complex::new(0.0, 0.0),
            argument: z,
            terms: n,
        }
    }

    /// `rφs[q^{-n}, top…; bottom…; q, z]`.
    pub fn basic(n: usize, top: &[Complex], bottom: &[Complex], q: Complex, z: Complex) -> Self {
        let mut t = vec![q.powi(-(n as i32))];
        t.extend_from_slice(top);
        SeriesSpec {
            family: Family::Phi,
            top: t,
            bottom: bottom.to_vec(),
            base: q,
            nome: Complex::new(0.0, 0.0),
            argument: z,
            terms: n,
        }
    }

    /// `r+1Wr(a; q^{-n}, rest…; q, z)`.
    pub fn very_well_poised(a: Complex, n: usize, rest: &[Complex], q: Complex, z: Complex) -> Self {
        let mut t = vec![a, q.powi(-(n as i32))];
        t.extend_from_slice(rest);
        SeriesSpec {
            family: Family::W,
            top: t,
            bottom: Vec::new(),
            base: q,
            nome: Complex::new(0.0, 0.0),
            argument: z,
            terms: n,
        }
    }

    /// Terminating elliptic very-well-poised sum `V(a; q^{-n}, rest…; q, p)`
    /// with argument `q`; `rest` has six entries for `12V11`.
    pub fn elliptic(a: Complex, n: usize, rest: &[Complex], ctx: &EllipticContext) -> Self {
        let q = ctx.q();
        let mut t = vec![a, q.powi(-(n as i32))];
        t.extend_from_slice(rest);
        SeriesSpec {
            family: Family::V12,
            top: t,
            bottom: Vec::new(),
            base: q,
            nome: ctx.p(),
            argument: q,
            terms: n,
        }
    }

    /// The Jackson-summable series
    /// `W(q^{-N}b/c; q^{-N}, q^{1-N}/ac, a/c, bξ, b/ξ)` as an elliptic sum.
    pub fn jackson(a: Complex, b: Complex, c: Complex, xi: Complex, n: usize, ctx: &EllipticContext) -> Self {
        let qn = ctx.qpow(-(n as i64));
        let lead = qn * b / c;
        let rest = [ctx.qpow(1 - n as i64) / (a * c), a / c, b * xi, b / xi];
        Self::elliptic(lead, n, &rest, ctx)
    }

    /// Total number of numerator parameters `r` (and denominators `s`) as in `rφs`.
    fn r_s(&self) -> (usize, usize) {
        (self.top.len(), self.bottom.len())
    }

    /// Checks the structural invariants: terminating slot and balancing.
    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::F => {
                let want = -(self.terms as f64);
                let got = self.top.first().copied().unwrap_or_default();
                if (got - want).norm() > TERMINATION_TOL * want.abs().max(1.0) {
                    return Err(Error::NotTerminating(format!("top[0] = {got} is not -{}", self.terms)));
                }
            }
            Family::Phi | Family::W | Family::V12 => {
                let slot = if self.family == Family::Phi { 0 } else { 1 };
                let want = self.base.powi(-(self.terms as i32));
                let got = self
                    .top
                    .get(slot)
                    .copied()
                    .ok_or_else(|| Error::NotTerminating("missing terminating parameter".into()))?;
                if (got - want).norm() > TERMINATION_TOL * want.norm() {
                    return Err(Error::NotTerminating(format!(
                        "top[{slot}] = {got} differs from q^-{} = {want}",
                        self.terms
                    )));
                }
            }
        }
        if self.family == Family::V12 {
            self.check_balancing()?;
        }
        Ok(())
    }

    /// `∏ b_i = a^{(m-1)/2} q^{(m-3)/2}` over the `m` (odd) parameters after `a`;
    /// for `12V11` this is `a³ q^{n+2} = bcdefg`.
    fn check_balancing(&self) -> Result<()> {
        let m = self.top.len() - 1;
        if m.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "elliptic very-well-poised series needs an odd number of parameters after a, got {m}"
            )));
        }
        let a = self.top[0];
        let prod: Complex = self.top[1..].iter().product();
        let half = (m as i32 - 1) / 2;
        let want = a.powi(half) * self.base.powi(half - 1);
        let defect = (prod - want).norm() / want.norm().max(prod.norm());
        if defect > BALANCING_TOL {
            return Err(Error::Balancing { defect });
        }
        Ok(())
    }
}

/// Terms `t_0..=t_n` of the series; the sum is their total.
pub fn series_terms(spec: &SeriesSpec) -> Result<Vec<Complex>> {
    spec.validate()?;
    match spec.family {
        Family::F => f_terms(spec),
        Family::Phi => phi_terms(spec),
        Family::W => w_terms(spec),
        Family::V12 => v12_terms(spec),
    }
}

fn f_terms(spec: &SeriesSpec) -> Result<Vec<Complex>> {
    let one = Complex::new(1.0, 0.0);
    let mut out = Vec::with_capacity(spec.terms + 1);
    let mut t = one;
    out.push(t);
    for k in 0..spec.terms {
        let kf = k as f64;
        let num: Complex = spec.top.iter().map(|&a| a + kf).product();
        let mut den = Complex::new(kf + 1.0, 0.0);
        for &b in &spec.bottom {
            let f = b + kf;
            check_divisor(f, one, "denominator (b)_k")?;
            den *= f;
        }
        t *= num * spec.argument / den;
        out.push(t);
    }
    Ok(out)
}

fn phi_terms(spec: &SeriesSpec) -> Result<Vec<Complex>> {
    let one = Complex::new(1.0, 0.0);
    let q = spec.base;
    let (r, s) = spec.r_s();
    // ((-1)^k q^{C(k,2)})^{1+s-r}: ratio from k to k+1 is (-q^k)^{1+s-r}
    let correction_power = 1 + s as i32 - r as i32;
    let mut out = Vec::with_capacity(spec.terms + 1);
    let mut t = one;
    out.push(t);
    let mut qk = one;
    for _ in 0..spec.terms {
        let num: Complex = spec.top.iter().map(|&a| one - a * qk).product();
        let mut den = one - qk * q;
        check_divisor(den, qk * q, "(q;q)_k")?;
        for &b in &spec.bottom {
            let f = one - b * qk;
            check_divisor(f, b * qk, "denominator (b;q)_k")?;
            den *= f;
        }
        let corr = (-qk).powi(correction_power);
        t *= num / den * spec.argument * corr;
        out.push(t);
        qk *= q;
    }
    Ok(out)
}

fn w_terms(spec: &SeriesSpec) -> Result<Vec<Complex>> {
    let one = Complex::new(1.0, 0.0);
    let q = spec.base;
    let a = spec.top[0];
    let lead = one - a;
    check_divisor(lead, a, "1 - a")?;
    let bs = &spec.top[1..];
    let mut out = Vec::with_capacity(spec.terms + 1);
    let mut t = one;
    out.push(one);
    let mut qk = one;
    for k in 1..=spec.terms {
        // ratio of the Pochhammer part from k-1 to k
        let mut num = one - a * qk;
        let mut den = one - q * qk;
        check_divisor(den, q * qk, "(q;q)_k")?;
        for &b in bs {
            num *= one - b * qk;
            let d = a * q / b * qk;
            let f = one - d;
            check_divisor(f, d, "aq/b")?;
            den *= f;
        }
        t *= num / den * spec.argument;
        qk *= q;
        let well_poised = (one - a * q.powi(2 * k as i32)) / lead;
        out.push(t * well_poised);
    }
    Ok(out)
}

fn v12_terms(spec: &SeriesSpec) -> Result<Vec<Complex>> {
    let one = Complex::new(1.0, 0.0);
    let q = spec.base;
    let ctx = EllipticContext::new(q, q.sqrt(), spec.nome)?;
    let a = spec.top[0];
    let theta_a = ctx.theta_den(a, "θ(a)")?;
    let bs = &spec.top[1..];
    let mut out = Vec::with_capacity(spec.terms + 1);
    let mut t = one;
    out.push(one);
    let mut qk = one;
    for k in 1..=spec.terms {
        let mut num = ctx.theta(a * qk)?;
        let mut den = ctx.theta_den(q * qk, "(q;q,p)_k")?;
        for &b in bs {
            num *= ctx.theta(b * qk)?;
            den *= ctx.theta_den(a * q / b * qk, "aq/b")?;
        }
        t *= num / den * spec.argument;
        qk *= q;
        let well_poised = ctx.theta(a * q.powi(2 * k as i32))? / theta_a;
        out.push(t * well_poised);
    }
    Ok(out)
}

fn sum_family(spec: &SeriesSpec, family: Family) -> Result<Complex> {
    if spec.family != family {
        return Err(Error::Domain(format!(
            "expected a {family:?} series, got {:?}",
            spec.family
        )));
    }
    Ok(series_terms(spec)?.into_iter().sum())
}

/// Terminating `rFs`.
pub fn eval_rfs(spec: &SeriesSpec) -> Result<Complex> {
    sum_family(spec, Family::F)
}

/// Terminating basic `rφs`.
pub fn eval_rphi_s(spec: &SeriesSpec) -> Result<Complex> {
    sum_family(spec, Family::Phi)
}

/// Terminating very-well-poised `r+1Wr`.
pub fn eval_w(spec: &SeriesSpec) -> Result<Complex> {
    sum_family(spec, Family::W)
}

/// Terminating balanced elliptic `12V11` (or shorter well-poised sum).
pub fn eval_v12(spec: &SeriesSpec) -> Result<Complex> {
    sum_family(spec, Family::V12)
}

/// `(cb, c/b, aξ, a/ξ; q,p)_N / (ab, a/b, cξ, c/ξ; q,p)_N`.
pub fn jackson_rhs(
    a: Complex,
    b: Complex,
    c: Complex,
    xi: Complex,
    n: usize,
    ctx: &EllipticContext,
) -> Result<Complex> {
    let n = n as i64;
    let num = ctx.pochs(&[c * b, c / b, a * xi, a / xi], n)?;
    let mut den = Complex::new(1.0, 0.0);
    for (x, name) in [
        (a * b, "(ab)_N"),
        (a / b, "(a/b)_N"),
        (c * xi, "(cξ)_N"),
        (c / xi, "(c/ξ)_N"),
    ] {
        den *= ctx.poch_den(x, n, name)?;
    }
    Ok(num / den)
}
