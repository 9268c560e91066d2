//! Generic-parameter sampling with resonance rejection.

use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use crate::basis::{basis_valid, BasisPair};
use crate::error::{Error, Result};
use crate::scalar::{Complex, EllipticContext};
use crate::sixj::krawtchouk::Sl2;
use crate::sixj::ParamQuad;

use super::{Level, ParamValue, Params, SampleConfig, MAX_RESAMPLES};

/// Range of `|q|` for sampled bases.
pub const Q_MODULUS: [f64; 2] = [0.35, 0.85];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `(a,b,c,d)`; at the Krawtchouk level an `SL(2)` element.
    Quad,
    /// Three basis pairs `(a,b)`, `(c,d)`, `(e,f)`; at the Krawtchouk level
    /// three `SL(2)` elements `E`, `F`, `G`.
    Triple,
    /// A quad at `p = 0` and two shifts `s`, `t`.
    Wilson,
    /// `(a,b,c,d)` with `abcd = q^{-N}`, a second `d₂`, a third operator
    /// `(e,f,g)` and a source basis `(λ,μ)`.
    Sklyanin,
}

/// Sampled parameters with their names.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub shape: Shape,
    pub level: Level,
    pub ctx: EllipticContext,
    pub n: usize,
    pub values: Vec<(&'static str, Complex)>,
}

impl Sample {
    pub fn get(&self, name: &str) -> Complex {
        self.values
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("sample has no parameter `{name}`"))
    }

    /// `(a,b,c,d)` at degree `n`.
    pub fn quad(&self) -> ParamQuad {
        ParamQuad::new(
            self.get("a"),
            self.get("b"),
            self.get("c"),
            self.get("d"),
            self.n,
            self.ctx,
        )
    }

    /// The `SL(2)` element stored under `prefix` (`""` for a quad, or `E`, `F`, `G`).
    pub fn sl2(&self, prefix: &str) -> Sl2 {
        let g = |s: &str| self.get(&format!("{prefix}{s}"));
        Sl2 {
            a: g("a"),
            b: g("b"),
            c: g("c"),
            d: g("d"),
        }
    }

    pub fn params(&self) -> Params {
        let mut p = Params::new();
        p.insert("level".into(), ParamValue::Text(self.level.name().into()));
        p.insert("N".into(), self.n.into());
        p.insert("q".into(), self.ctx.q().into());
        p.insert("p".into(), self.ctx.p().into());
        for (k, v) in &self.values {
            p.insert((*k).into(), (*v).into());
        }
        p
    }
}

pub(crate) fn draw_complex<R: Rng>(rng: &mut R, range: [f64; 2]) -> Complex {
    let r = rng.gen_range(range[0]..=range[1]);
    let theta = rng.gen_range(0.0..TAU);
    Complex::from_polar(r, theta)
}

fn draw_context<R: Rng>(rng: &mut R, level: Level, cfg: &SampleConfig) -> Result<EllipticContext> {
    let q = draw_complex(rng, Q_MODULUS);
    let p_max = cfg.p_max;
    match (level, cfg.nome) {
        (Level::Elliptic, Some(p)) => EllipticContext::elliptic(q, p),
        (Level::Elliptic, None) if p_max > 0.0 => {
            let p = draw_complex(rng, [0.5 * p_max, p_max]);
            EllipticContext::elliptic(q, p)
        }
        _ => EllipticContext::trigonometric(q),
    }
}

fn valid(pairs: &[(Complex, Complex)], n: usize, ctx: &EllipticContext, delta: f64) -> bool {
    pairs
        .iter()
        .all(|&(x, y)| basis_valid(BasisPair::new(x, y, n), ctx, delta).valid)
}

fn push_sl2(values: &mut Vec<(&'static str, Complex)>, names: [&'static str; 4], m: &Sl2) {
    values.extend([(names[0], m.a), (names[1], m.b), (names[2], m.c), (names[3], m.d)]);
}

fn attempt<R: Rng>(
    cfg: &SampleConfig,
    shape: Shape,
    level: Level,
    degree: Option<usize>,
    rng: &mut R,
) -> Result<Option<Sample>> {
    let ctx = draw_context(rng, level, cfg)?;
    let n = match degree {
        Some(n) => n,
        None => rng.gen_range(1..=cfg.n_max),
    };
    let range = cfg.modulus_range;
    let delta = cfg.gen_delta;
    let mut values = Vec::new();
    let mut z = || draw_complex(rng, range);
    let ok = match (shape, level) {
        (Shape::Quad, Level::Krawtchouk) => {
            let m = Sl2::from_abc(z(), z(), z())?;
            push_sl2(&mut values, ["a", "b", "c", "d"], &m);
            m.d.norm() <= range[1] / range[0]
        }
        (Shape::Triple, Level::Krawtchouk) => {
            for names in [
                ["Ea", "Eb", "Ec", "Ed"],
                ["Fa", "Fb", "Fc", "Fd"],
                ["Ga", "Gb", "Gc", "Gd"],
            ] {
                let m = Sl2::from_abc(z(), z(), z())?;
                push_sl2(&mut values, names, &m);
            }
            true
        }
        (Shape::Quad, _) => {
            let (a, b, c, d) = (z(), z(), z(), z());
            values.extend([("a", a), ("b", b), ("c", c), ("d", d)]);
            valid(&[(a, b), (c, d)], n, &ctx, delta)
        }
        (Shape::Triple, _) => {
            let v: Vec<Complex> = (0..6).map(|_| z()).collect();
            values.extend(["a", "b", "c", "d", "e", "f"].into_iter().zip(v.iter().copied()));
            valid(&[(v[0], v[1]), (v[2], v[3]), (v[4], v[5])], n, &ctx, delta)
        }
        (Shape::Wilson, _) => {
            if !ctx.is_trigonometric() {
                return Err(Error::Config("Wilson samples need p = 0".into()));
            }
            let (a, b, c, d) = (z(), z(), z(), z());
            values.extend([("a", a), ("b", b), ("c", c), ("d", d), ("s", z()), ("t", z())]);
            valid(&[(a, b), (c, d)], n, &ctx, delta)
        }
        (Shape::Sklyanin, _) => {
            let (a, b, c) = (z(), z(), z());
            let d = ctx.qpow(-(n as i64)) / (a * b * c);
            let (lambda, mu) = (z(), z());
            values.extend([("a", a), ("b", b), ("c", c), ("d", d), ("d2", z())]);
            values.extend([("e", z()), ("f", z()), ("g", z()), ("lambda", lambda), ("mu", mu)]);
            let qh = ctx.q_half();
            valid(
                &[(a, b), (a / qh, b / qh), (lambda, mu), (qh * lambda, qh * mu)],
                n,
                &ctx,
                delta,
            )
        }
    };
    Ok(ok.then_some(Sample {
        shape,
        level,
        ctx,
        n,
        values,
    }))
}

/// Parameters of the requested shape, resampled until every basis involved is
/// valid with margin `gen_delta`; at most [`MAX_RESAMPLES`] draws.
pub fn sample_generic<R: Rng>(cfg: &SampleConfig, shape: Shape, level: Level, rng: &mut R) -> Result<Sample> {
    sample_with(cfg, shape, level, None, rng)
}

/// [`sample_generic`] at a fixed degree `n` instead of one drawn from `1..=N_max`.
pub fn sample_at_degree<R: Rng>(
    cfg: &SampleConfig,
    shape: Shape,
    level: Level,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    sample_with(cfg, shape, level, Some(n), rng)
}

fn sample_with<R: Rng>(
    cfg: &SampleConfig,
    shape: Shape,
    level: Level,
    degree: Option<usize>,
    rng: &mut R,
) -> Result<Sample> {
    let mut reason = String::from("resonant parameters");
    for _ in 0..MAX_RESAMPLES {
        match attempt(cfg, shape, level, degree, rng) {
            Ok(Some(s)) => return Ok(s),
            Ok(None) => {}
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => reason = e.to_string(),
        }
    }
    Err(Error::Sampling {
        attempts: MAX_RESAMPLES,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quads_are_valid_bases() {
        let cfg = SampleConfig::new(9, 1);
        for t in 0..20 {
            for level in [Level::Trig, Level::Elliptic] {
                let s = sample_generic(&cfg, Shape::Quad, level, &mut cfg.rng(t)).unwrap();
                let q = s.quad();
                assert!(basis_valid(q.target(), &q.ctx, cfg.gen_delta).valid);
                assert!(q.n >= 1 && q.n <= cfg.n_max);
            }
        }
    }

    #[test]
    fn same_seed_same_parameters() {
        let cfg = SampleConfig::new(42, 1);
        let x = sample_generic(&cfg, Shape::Triple, Level::Elliptic, &mut cfg.rng(0)).unwrap();
        let y = sample_generic(&cfg, Shape::Triple, Level::Elliptic, &mut cfg.rng(0)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn sklyanin_constraint() {
        let cfg = SampleConfig::new(5, 1);
        for t in 0..10 {
            let s = sample_generic(&cfg, Shape::Sklyanin, Level::Elliptic, &mut cfg.rng(t)).unwrap();
            let target = s.ctx.qpow(-(s.n as i64));
            let prod = s.get("a") * s.get("b") * s.get("c") * s.get("d");
            assert!((prod - target).norm() <= s.ctx.tol() * target.norm());
        }
    }

    #[test]
    fn krawtchouk_determinant() {
        let cfg = SampleConfig::new(5, 1);
        let s = sample_generic(&cfg, Shape::Triple, Level::Krawtchouk, &mut cfg.rng(3)).unwrap();
        for g in ["E", "F", "G"] {
            let m = s.sl2(g);
            assert!((m.a * m.d - m.b * m.c - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn moduli_respect_range() {
        let mut cfg = SampleConfig::new(5, 1);
        cfg.modulus_range = [0.8, 1.2];
        let s = sample_generic(&cfg, Shape::Quad, Level::Trig, &mut cfg.rng(0)).unwrap();
        for (_, v) in &s.values {
            assert!(v.norm() >= 0.8 - 1e-12 && v.norm() <= 1.2 + 1e-12);
        }
    }
}
