//! Krawtchouk level: `(ax+b)^k (cx+d)^{N-k} = Σ_l K_k^l x^l` with `ad - bc = 1`.

use crate::error::{Error, Result};
use crate::scalar::{binomial, Complex};
use crate::series::{eval_rfs, SeriesSpec};

use super::matrix::{CoeffMatrix, Route};

/// Slack on `ad - bc = 1`.
pub const DETERMINANT_TOL: f64 = 1e-9;
/// Below this modulus `bc` or `d` is treated as zero and the hypergeometric
/// form is replaced by the direct convolution.
const SMALL: f64 = 1e-8;

/// An `SL(2)` element `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Sl2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        let m = Sl2 { a, b, c, d };
        let det = a * d - b * c;
        let scale = (a * d).norm().max((b * c).norm()).max(1.0);
        if (det - 1.0).norm() > DETERMINANT_TOL * scale {
            return Err(Error::Domain(format!("ad - bc = {det}, expected 1")));
        }
        Ok(m)
    }

    /// Completes `d` from `ad - bc = 1`.
    pub fn from_abc(a: Complex, b: Complex, c: Complex) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::Domain("a = 0 leaves d undetermined".into()));
        }
        Self::new(a, b, c, (1.0 + b * c) / a)
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// `K_k^l(a,b,c,d;N)`.
pub fn krawtchouk_k(k: usize, l: usize, n: usize, m: &Sl2) -> Result<Complex> {
    if k > n || l > n {
        return Err(Error::Domain(format!("indices ({k},{l}) outside 0..={n}")));
    }
    let Sl2 { b, c, d, .. } = *m;
    let bc = b * c;
    if bc.norm() < SMALL || d.norm() < SMALL {
        return Ok(krawtchouk_direct(k, l, n, m));
    }
    let spec = SeriesSpec::hypergeometric(
        k,
        &[Complex::new(-(l as f64), 0.0)],
        &[Complex::new(-(n as f64), 0.0)],
        -bc.inv(),
    );
    let f = eval_rfs(&spec)?;
    Ok(binomial(n as u64, l as u64) as f64
        * b.powi(k as i32)
        * c.powi(l as i32)
        * d.powi(n as i32 - k as i32 - l as i32)
        * f)
}

/// `Σ_i C(k,i) a^i b^{k-i} C(N-k,l-i) c^{l-i} d^{N-k-l+i}`, the coefficient of
/// `x^l` in the product, with no divisions.
pub fn krawtchouk_direct(k: usize, l: usize, n: usize, m: &Sl2) -> Complex {
    let Sl2 { a, b, c, d } = *m;
    let lo = l.saturating_sub(n - k);
    let hi = k.min(l);
    (lo..=hi)
        .map(|i| {
            let w = (binomial(k as u64, i as u64) * binomial((n - k) as u64, (l - i) as u64)) as f64;
            w * a.powi(i as i32) * b.powi((k - i) as i32) * c.powi((l - i) as i32) * d.powi((n - k + i - l) as i32)
        })
        .sum()
}

pub fn krawtchouk_matrix(n: usize, m: &Sl2) -> Result<CoeffMatrix> {
    let rows = (0..=n)
        .map(|k| (0..=n).map(|l| krawtchouk_k(k, l, n, m)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffMatrix::from_rows(rows, Route::Explicit, None))
}

/// `K̃`, the expansion of `x^k` in the basis `(ax+b)^l (cx+d)^{N-l}`.
pub fn krawtchouk_inverse_matrix(n: usize, m: &Sl2) -> Result<CoeffMatrix> {
    krawtchouk_matrix(n, &m.inverse())
}

/// `K_n(x;p,N) = 2F1[-n,-x;-N;1/p]` at an integer node `x`.
pub fn krawtchouk_poly(deg: usize, x: usize, p: Complex, n: usize) -> Result<Complex> {
    let spec = SeriesSpec::hypergeometric(
        deg,
        &[Complex::new(-(x as f64), 0.0)],
        &[Complex::new(-(n as f64), 0.0)],
        p.inv(),
    );
    eval_rfs(&spec)
}

/// Both sides of the generating function
/// `(1 + (p-1)t/p)^k (1+t)^{N-k} = Σ_l C(N,l) K_l(k;p,N) t^l`.
pub fn generating_function(k: usize, n: usize, p: Complex, t: Complex) -> Result<(Complex, Complex)> {
    let lhs = (1.0 + (p - 1.0) / p * t).powi(k as i32) * (1.0 + t).powi((n - k) as i32);
    let mut rhs = Complex::new(0.0, 0.0);
    for l in 0..=n {
        rhs += binomial(n as u64, l as u64) as f64 * krawtchouk_poly(l, k, p, n)? * t.powi(l as i32);
    }
    Ok((lhs, rhs))
}

/// Both sides of `C(|N|,l) 2F1[-l,-|K|;-|N|;1-t] = Σ_{|L|=l} t^{|L∩K|}` for the
/// subset `K` given as a bit mask of `{0..n}`; the right side is summed over
/// every `l`-subset.
pub fn subset_identity(n: usize, k_mask: u64, l: usize, t: Complex) -> Result<(Complex, Complex)> {
    let kk = k_mask.count_ones() as usize;
    let spec = SeriesSpec::hypergeometric(
        l,
        &[Complex::new(-(kk as f64), 0.0)],
        &[Complex::new(-(n as f64), 0.0)],
        1.0 - t,
    );
    let lhs = binomial(n as u64, l as u64) as f64 * eval_rfs(&spec)?;
    let mut rhs = Complex::new(0.0, 0.0);
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize == l {
            rhs += t.powi((mask & k_mask).count_ones() as i32);
        }
    }
    Ok((lhs, rhs))
}
