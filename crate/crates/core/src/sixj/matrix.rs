use serde::Serialize;

use crate::basis::h_xi;
use crate::basis::BasisPair;
use crate::error::{Error, Result};
use crate::scalar::{Complex, EllipticContext};

/// Which algorithm produced a coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    /// Closed `10W9` / `12V11` formula (or the classical closed forms).
    Explicit,
    /// Double sum of generalized binomial coefficients from the Pascal recurrence.
    Recurrence,
    /// Weighted lattice-path sum.
    Paths,
    /// Collocation linear solve.
    Solve,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Explicit, Route::Recurrence, Route::Paths, Route::Solve];

    pub fn name(self) -> &'static str {
        match self {
            Route::Explicit => "explicit",
            Route::Recurrence => "recurrence",
            Route::Paths => "paths",
            Route::Solve => "solve",
        }
    }

    pub fn parse(s: &str) -> Option<Route> {
        Route::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// The expansion problem `h_k(x;a) h_{N-k}(x;b) = Σ_l R_k^l h_l(x;c) h_{N-l}(x;d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamQuad {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub n: usize,
    pub ctx: EllipticContext,
}

impl ParamQuad {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex, n: usize, ctx: EllipticContext) -> Self {
        ParamQuad { a, b, c, d, n, ctx }
    }

    /// Same degree and context, new parameters.
    pub fn with(&self, a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        ParamQuad { a, b, c, d, ..*self }
    }

    /// The inverse problem `(c,d,a,b)`.
    pub fn inverse(&self) -> Self {
        self.with(self.c, self.d, self.a, self.b)
    }

    pub fn with_degree(&self, n: usize) -> Self {
        ParamQuad { n, ..*self }
    }

    pub fn target(&self) -> BasisPair {
        BasisPair::new(self.c, self.d, self.n)
    }

    pub fn source(&self) -> BasisPair {
        BasisPair::new(self.a, self.b, self.n)
    }

    /// `h_k(ξ;a) h_{N-k}(ξ;b)`.
    pub fn source_element(&self, k: usize, xi: Complex) -> Result<Complex> {
        Ok(h_xi(self.a, k, xi, &self.ctx)? * h_xi(self.b, self.n - k, xi, &self.ctx)?)
    }

    /// All four parameters must be nonzero at the elliptic level.
    pub fn check(&self) -> Result<()> {
        if !self.ctx.is_trigonometric() && [self.a, self.b, self.c, self.d].iter().any(|z| z.norm() == 0.0) {
            return Err(Error::Domain("zero parameter with p != 0".into()));
        }
        Ok(())
    }
}

/// An `(N+1)×(N+1)` coefficient array, row `k`, column `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffMatrix {
    n: usize,
    entries: Vec<Complex>,
    pub route: Route,
    pub quad: Option<ParamQuad>,
    /// Entries recomputed by the collocation fallback.
    pub flagged: Vec<(usize, usize)>,
}

impl CoeffMatrix {
    pub fn zeros(n: usize, route: Route, quad: Option<ParamQuad>) -> Self {
        CoeffMatrix {
            n,
            entries: vec![Complex::new(0.0, 0.0); (n + 1) * (n + 1)],
            route,
            quad,
            flagged: Vec::new(),
        }
    }

    pub fn identity(n: usize, route: Route, quad: Option<ParamQuad>) -> Self {
        let mut m = Self::zeros(n, route, quad);
        for k in 0..=n {
            m.set(k, k, Complex::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>, route: Route, quad: Option<ParamQuad>) -> Self {
        let n = rows.len() - 1;
        let mut m = Self::zeros(n, route, quad);
        for (k, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n + 1, "row length must be N+1");
            for (l, v) in row.into_iter().enumerate() {
                m.set(k, l, v);
            }
        }
        m
    }

    /// Degree `N`; the matrix has `N+1` rows.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> Complex {
        self.entries[k * (self.n + 1) + l]
    }

    #[inline]
    pub fn set(&mut self, k: usize, l: usize, v: Complex) {
        let n1 = self.n + 1;
        self.entries[k * n1 + l] = v;
    }

    pub fn row(&self, k: usize) -> &[Complex] {
        let n1 = self.n + 1;
        &self.entries[k * n1..(k + 1) * n1]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry modulus.
    pub fn scale(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_inf(&self) -> f64 {
        (0..=self.n)
            .map(|k| self.row(k).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖A - B‖∞ / max(‖A‖∞, ‖B‖∞)`.
    pub fn rel_diff(&self, other: &CoeffMatrix) -> f64 {
        assert_eq!(self.n, other.n, "degree mismatch");
        let diff = (0..=self.n)
            .map(|k| {
                (0..=self.n)
                    .map(|l| (self.get(k, l) - other.get(k, l)).norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let scale = self.norm_inf().max(other.norm_inf());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// `(self · other)` together with the largest single product `|A_nk B_km|`.
    pub fn product_with_scale(&self, other: &CoeffMatrix) -> (Vec<Complex>, f64) {
        assert_eq!(self.n, other.n, "degree mismatch");
        let n1 = self.n + 1;
        let mut out = vec![Complex::new(0.0, 0.0); n1 * n1];
        let mut scale: f64 = 0.0;
        for i in 0..n1 {
            for k in 0..n1 {
                let a = self.get(i, k);
                for j in 0..n1 {
                    let t = a * other.get(k, j);
                    scale = scale.max(t.norm());
                    out[i * n1 + j] += t;
                }
            }
        }
        (out, scale)
    }

    pub fn mul(&self, other: &CoeffMatrix) -> CoeffMatrix {
        let (entries, _) = self.product_with_scale(other);
        CoeffMatrix {
            n: self.n,
            entries,
            route: self.route,
            quad: None,
            flagged: Vec::new(),
        }
    }
}
