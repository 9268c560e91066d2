//! Small dense complex linear solves (partial pivoting, one refinement step).

use crate::error::{Error, Result};
use crate::scalar::Complex;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<Complex>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, x: &[Complex]) -> Vec<Complex> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    original: DenseMatrix,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for col in 0..n {
            let (piv, mag) = (col..n)
                .map(|r| (r, lu.get(r, col).norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= f64::EPSILON * scale * n as f64 || mag == 0.0 {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let d = lu.get(col, col);
            for r in col + 1..n {
                let f = lu.get(r, col) / d;
                lu.set(r, col, f);
                for j in col + 1..n {
                    let v = lu.get(r, j) - f * lu.get(col, j);
                    lu.set(r, j, v);
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            original: a.clone(),
        })
    }

    fn solve_raw(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.lu.n;
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu.get(i, j);
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu.get(i, j);
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.lu.get(i, i);
        }
        y
    }

    /// Solves `A x = b` followed by one step of iterative refinement.
    pub fn solve(&self, b: &[Complex]) -> Vec<Complex> {
        let mut x = self.solve_raw(b);
        let ax = self.original.mul_vec(&x);
        let r: Vec<Complex> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = self.solve_raw(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
        x
    }

    /// `‖A‖∞ ‖A⁻¹‖∞`.
    pub fn condition_inf(&self) -> f64 {
        let n = self.lu.n;
        let mut inv_norm_rows = vec![0.0; n];
        for j in 0..n {
            let mut e = vec![Complex::new(0.0, 0.0); n];
            e[j] = Complex::new(1.0, 0.0);
            let col = self.solve_raw(&e);
            for (i, v) in col.iter().enumerate() {
                inv_norm_rows[i] += v.norm();
            }
        }
        let inv_norm = inv_norm_rows.into_iter().fold(0.0, f64::max);
        self.original.norm_inf() * inv_norm
    }
}
