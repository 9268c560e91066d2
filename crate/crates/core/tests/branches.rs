use sixj_core::scalar::{Complex, EllipticContext};
use sixj_core::sklyanin::{eigenrelation_check, gevp_check, operator_matrix, DiffOpSpec};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[test]
fn sklyanin_checks_hold_on_both_branches() {
    let q = c(0.45, 0.3);
    let (a, b, cc, d2) = (c(0.8, 0.3), c(1.2, -0.4), c(0.7, 0.5), c(1.3, 0.2));
    for p in [c(0.0, 0.0), c(0.15, 0.05)] {
        for qh in [q.sqrt(), -q.sqrt()] {
            let ctx = EllipticContext::new(q, qh, p).unwrap();
            let mut eig: f64 = 0.0;
            for n in 1..=3 {
                for k in 0..=n {
                    eig = eig.max(eigenrelation_check(a, b, cc, k, n, &ctx).unwrap());
                }
            }
            let gevp = gevp_check(a, b, cc, d2, 3, &ctx).unwrap().max_residual;
            let op = DiffOpSpec::new(a, b, cc, 3, ctx).unwrap();
            let band = operator_matrix(&op, c(0.9, -0.2), c(1.1, 0.6)).unwrap().band_excess(1);
            let tol = if p.norm() == 0.0 { 1e-9 } else { 1e-7 };
            assert!(eig <= tol && gevp <= tol, "q_half={qh} p={p}: {eig:e} {gevp:e}");
            assert!(band <= 1e-8, "q_half={qh} p={p}: band {band:e}");
        }
    }
}
