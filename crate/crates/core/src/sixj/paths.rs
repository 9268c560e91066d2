//! Lattice-path formula: `R_k^l` is a sum over up-right paths from `(0,0)` to
//! `(l, N-l)` of products of step weights; the first `k` steps are "early".

use crate::error::{Error, Result};
use crate::scalar::Complex;

use super::matrix::{CoeffMatrix, ParamQuad, Route};

/// Largest `N` accepted by the path route.
pub const DEFAULT_PATH_BUDGET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub right: bool,
    pub early: bool,
    /// Starting point of the step.
    pub x: i64,
    pub y: i64,
}

/// One lattice path contributing to `R_k^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub steps: Vec<Step>,
}

impl PathSpec {
    /// Builds the path whose `i`-th step goes right iff `moves[i]`.
    pub fn from_moves(k: usize, moves: &[bool]) -> Self {
        let (mut x, mut y) = (0i64, 0i64);
        let steps = moves
            .iter()
            .enumerate()
            .map(|(i, &right)| {
                let s = Step {
                    right,
                    early: i < k,
                    x,
                    y,
                };
                if right {
                    x += 1;
                } else {
                    y += 1;
                }
                s
            })
            .collect();
        PathSpec {
            k,
            l: x as usize,
            n: moves.len(),
            steps,
        }
    }

    /// `‖λ‖ = Σ_{up steps} x`, the number of boxes above-left of the path.
    pub fn area(&self) -> i64 {
        self.steps.iter().filter(|s| !s.right).map(|s| s.x).sum()
    }

    /// Number of early up steps.
    pub fn early_ups(&self) -> usize {
        self.steps.iter().filter(|s| s.early && !s.right).count()
    }

    /// Product of the step weights.
    pub fn weight(&self, quad: &ParamQuad) -> Result<Complex> {
        self.steps.iter().try_fold(Complex::new(1.0, 0.0), |acc, s| {
            Ok(acc * step_weight(*s, self.k as i64, quad)?)
        })
    }
}

/// Every path from `(0,0)` to `(l, N-l)` with `k` early steps.
pub fn enumerate_paths(k: usize, l: usize, n: usize) -> Vec<PathSpec> {
    let mut out = Vec::new();
    let mut moves = Vec::with_capacity(n);
    fn rec(k: usize, rights: usize, n: usize, moves: &mut Vec<bool>, out: &mut Vec<PathSpec>) {
        if moves.len() == n {
            out.push(PathSpec::from_moves(k, moves));
            return;
        }
        let used = moves.iter().filter(|&&m| m).count();
        let left = n - moves.len();
        if used < rights {
            moves.push(true);
            rec(k, rights, n, moves, out);
            moves.pop();
        }
        if left > rights - used {
            moves.push(false);
            rec(k, rights, n, moves, out);
            moves.pop();
        }
    }
    if l <= n {
        rec(k, l, n, &mut moves, &mut out);
    }
    out
}

/// Weight of one step starting at `(x,y)`.
pub fn step_weight(step: Step, k: i64, quad: &ParamQuad) -> Result<Complex> {
    let ParamQuad { a, b, c, d, ctx, .. } = *quad;
    let Step { right, early, x, y } = step;
    let q = |e: i64| ctx.qpow(e);
    let t = |v: Complex| ctx.theta(v);
    let common = ctx.theta_den(q(x + y) * c * d, "θ(q^{x+y} cd)")?;
    if right {
        let den = common * ctx.theta_den(q(x - y) * c / d, "θ(q^{x-y} c/d)")?;
        let num = if early {
            t(q(x + 2 * y) * a * d)? * t(q(x) * a / d)?
        } else {
            t(q(x + 2 * y - k) * b * d)? * t(q(x - k) * b / d)?
        };
        Ok(num / den)
    } else {
        let den = common * ctx.theta_den(q(y - x) * d / c, "θ(q^{y-x} d/c)")?;
        let num = if early {
            t(q(2 * x + y) * a * c)? * t(q(y) * a / c)?
        } else {
            t(q(2 * x + y - k) * b * c)? * t(q(y - k) * b / c)?
        };
        Ok(num / den)
    }
}

/// Row `k` by dynamic programming over lattice points.
pub fn paths_row(k: usize, quad: &ParamQuad) -> Result<Vec<Complex>> {
    let n = quad.n;
    // cur[x]: weighted sum over partial paths ending at (x, i - x)
    let mut cur = vec![Complex::new(1.0, 0.0)];
    for i in 0..n {
        let early = i < k;
        let mut next = vec![Complex::new(0.0, 0.0); i + 2];
        for (x, &v) in cur.iter().enumerate() {
            if v.norm() == 0.0 {
                continue;
            }
            let (xi, yi) = (x as i64, (i - x) as i64);
            let r = step_weight(
                Step {
                    right: true,
                    early,
                    x: xi,
                    y: yi,
                },
                k as i64,
                quad,
            )?;
            let u = step_weight(
                Step {
                    right: false,
                    early,
                    x: xi,
                    y: yi,
                },
                k as i64,
                quad,
            )?;
            next[x + 1] += v * r;
            next[x] += v * u;
        }
        cur = next;
    }
    Ok(cur)
}

/// Full matrix by the path formula; errors when `N` exceeds `budget`.
pub fn r_paths_with_budget(quad: &ParamQuad, budget: usize) -> Result<CoeffMatrix> {
    if quad.n > budget {
        return Err(Error::Budget { size: quad.n, budget });
    }
    quad.check()?;
    let rows = (0..=quad.n).map(|k| paths_row(k, quad)).collect::<Result<Vec<_>>>()?;
    Ok(CoeffMatrix::from_rows(rows, Route::Paths, Some(*quad)))
}

pub fn r_paths(quad: &ParamQuad) -> Result<CoeffMatrix> {
    r_paths_with_budget(quad, DEFAULT_PATH_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{binomial, c, q_binomial, EllipticContext};
    use crate::sixj::explicit::r_explicit;

    fn quad(p: f64, n: usize) -> ParamQuad {
        let ctx = EllipticContext::elliptic(c(0.5, 0.3), c(p, 0.0)).unwrap();
        ParamQuad::new(c(0.8, 0.3), c(1.3, -0.4), c(0.6, 0.7), c(1.1, 0.2), n, ctx)
    }

    #[test]
    fn path_counts() {
        for n in 0..=8 {
            for l in 0..=n {
                assert_eq!(enumerate_paths(0, l, n).len() as u64, binomial(n as u64, l as u64));
            }
        }
    }

    #[test]
    fn dp_matches_enumeration() {
        let qd = quad(0.15, 4);
        for k in 0..=4 {
            let row = paths_row(k, &qd).unwrap();
            for l in 0..=4 {
                let s: Complex = enumerate_paths(k, l, 4).iter().map(|p| p.weight(&qd).unwrap()).sum();
                assert!((s - row[l]).norm() < 1e-12 * s.norm().max(1.0));
            }
        }
    }

    #[test]
    fn single_path_column() {
        let qd = quad(0.0, 3);
        let m = r_explicit(&qd).unwrap();
        for k in 0..=3 {
            let paths = enumerate_paths(k, 0, 3);
            assert_eq!(paths.len(), 1);
            let w = paths[0].weight(&qd).unwrap();
            assert!((w - m.get(k, 0)).norm() < 1e-10 * w.norm());
        }
    }

    #[test]
    fn matches_explicit() {
        for p in [0.0, 0.15] {
            let m1 = r_paths(&quad(p, 3)).unwrap();
            let m2 = r_explicit(&quad(p, 3)).unwrap();
            assert!(m1.rel_diff(&m2) < 1e-8, "p={p}");
        }
    }

    #[test]
    fn area_generating_function() {
        let q = c(0.63, 0.21);
        for n in 0..=10 {
            for l in 0..=n {
                let s: Complex = enumerate_paths(0, l, n).iter().map(|p| q.powi(p.area() as i32)).sum();
                let want = q_binomial(n, l as i64, q).unwrap();
                assert!((s - want).norm() < 1e-12 * want.norm());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            r_paths_with_budget(&quad(0.0, 3), 2),
            Err(Error::Budget { .. })
        ));
    }
}
