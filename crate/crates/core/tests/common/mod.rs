//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use num_complex::Complex64 as C;

/// `θ(x;p) = ∏_{j≥0} (1 - p^j x)(1 - p^{j+1}/x)`, 80 factors per side.
pub fn theta(x: C, p: C) -> C {
    let mut acc = C::new(1.0, 0.0);
    let mut pj = C::new(1.0, 0.0);
    for _ in 0..80 {
        acc *= (1.0 - pj * x) * (1.0 - pj * p / x);
        pj *= p;
        if pj.norm() < 1e-300 {
            break;
        }
    }
    acc
}

/// `(x;q,p)_n` for `n ≥ 0`.
pub fn poch(x: C, q: C, p: C, n: usize) -> C {
    (0..n).map(|j| theta(x * q.powi(j as i32), p)).product()
}

/// `[N l]_q` as a ratio of q-Pochhammer products.
pub fn q_binomial(n: usize, l: usize, q: C) -> C {
    let qp = |m: usize| -> C { (1..=m).map(|j| 1.0 - q.powi(j as i32)).product() };
    qp(n) / (qp(l) * qp(n - l))
}

/// Product side of the Jackson summation.
pub fn jackson_product(a: C, b: C, c: C, xi: C, n: usize, q: C, p: C) -> C {
    let num = poch(c * b, q, p, n) * poch(c / b, q, p, n) * poch(a * xi, q, p, n) * poch(a / xi, q, p, n);
    let den = poch(a * b, q, p, n) * poch(a / b, q, p, n) * poch(c * xi, q, p, n) * poch(c / xi, q, p, n);
    num / den
}

/// `Σ_{|L|=l} t^{|L∩K|}` in exact integer arithmetic.
pub fn subset_count(n: usize, k_mask: u64, l: usize, t: i64) -> i64 {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == l)
        .map(|m| t.pow((m & k_mask).count_ones()))
        .sum()
}

/// `max_i Σ_j |M_ij|` for a row-major square matrix.
pub fn norm_inf(entries: &[C], dim: usize) -> f64 {
    (0..dim)
        .map(|i| entries[i * dim..(i + 1) * dim].iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
