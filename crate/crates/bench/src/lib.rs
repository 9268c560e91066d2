//! Fixed inputs shared by the benchmarks in `benches/`.

use sixj_core::scalar::{Complex, EllipticContext};
use sixj_core::sixj::ParamQuad;

/// A generic quad of degree `n`, trigonometric for `p = 0`.
pub fn quad(n: usize, p: f64) -> ParamQuad {
    let q = Complex::new(0.45, 0.3);
    let ctx = if p == 0.0 {
        EllipticContext::trigonometric(q)
    } else {
        EllipticContext::elliptic(q, Complex::new(p, 0.05))
    }
    .expect("fixed context is valid");
    ParamQuad::new(
        Complex::new(0.8, 0.3),
        Complex::new(1.2, -0.4),
        Complex::new(0.6, 0.5),
        Complex::new(1.5, 0.1),
        n,
        ctx,
    )
}
