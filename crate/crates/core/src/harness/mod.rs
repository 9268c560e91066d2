//! Seeded randomized verification of the identities, one report per suite and
//! level.
//!
//! Trial `t` draws from a ChaCha8 stream seeded with `seed` and stream index
//! `t`, so trials are independent of the order in which they run.

pub mod sample;
pub mod suites;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::DEFAULT_GEN_DELTA;
use crate::error::{Error, Result};
use crate::scalar::Complex;

pub use sample::{sample_at_degree, sample_generic, Sample, Shape};

/// Resampling budget shared by parameter rejection and evaluation failures.
pub const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Krawtchouk,
    Qracah,
    Trig,
    Elliptic,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Krawtchouk, Level::Qracah, Level::Trig, Level::Elliptic];

    pub fn name(self) -> &'static str {
        match self {
            Level::Krawtchouk => "krawtchouk",
            Level::Qracah => "qracah",
            Level::Trig => "trig",
            Level::Elliptic => "elliptic",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.name() == s)
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Level::Krawtchouk | Level::Qracah => 1e-9,
            Level::Trig => 1e-8,
            Level::Elliptic => 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_max: usize,
    /// Moduli of sampled parameters are uniform in `[r_lo, r_hi]`.
    pub modulus_range: [f64; 2],
    pub gen_delta: f64,
    /// Elliptic samples have `|p|` uniform in `[p_max/2, p_max]`.
    pub p_max: f64,
    /// Fixes the nome of elliptic samples instead of drawing it.
    pub nome: Option<Complex>,
    /// Overrides the per-level default tolerance.
    pub tol: Option<f64>,
    /// Restricts the levels a suite runs at.
    pub levels: Option<Vec<Level>>,
}

impl SampleConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        SampleConfig {
            seed,
            trials,
            n_max: 3,
            modulus_range: [0.5, 2.0],
            gen_delta: DEFAULT_GEN_DELTA,
            p_max: 0.3,
            nome: None,
            tol: None,
            levels: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.modulus_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Config(format!(
                "modulus range [{lo}, {hi}] must satisfy 0 < r_lo <= r_hi"
            )));
        }
        if !(0.0..1.0).contains(&self.p_max) {
            return Err(Error::Config(format!("p_max = {} must lie in [0, 1)", self.p_max)));
        }
        if self.nome.is_some_and(|p| !(p.norm() < 1.0)) {
            return Err(Error::Config("a fixed nome must satisfy |p| < 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n_max == 0 {
            return Err(Error::Config("N_max must be at least 1".into()));
        }
        if !(self.gen_delta > 0.0) {
            return Err(Error::Config("gen_delta must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Config("tol must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn tol_for(&self, level: Level) -> f64 {
        self.tol.unwrap_or_else(|| level.default_tol())
    }

    /// The generator of trial `trial`.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// A parameter value as it appears in a failure record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    /// `[re, im]`.
    Complex([f64; 2]),
    Ints(Vec<i64>),
    Text(String),
}

impl From<Complex> for ParamValue {
    fn from(z: Complex) -> Self {
        ParamValue::Complex([z.re, z.im])
    }
}

impl From<usize> for ParamValue {
    fn from(n: usize) -> Self {
        ParamValue::Int(n as i64)
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<&[usize]> for ParamValue {
    fn from(v: &[usize]) -> Self {
        ParamValue::Ints(v.iter().map(|&x| x as i64).collect())
    }
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub params: Params,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub level: Level,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub failures: Vec<Failure>,
    /// Wall-clock time; left out of the serialized report so that reports
    /// are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Recorded for a trial whose evaluations never succeeded.
pub const FAILED_RESIDUAL: f64 = f64::MAX;

/// One evaluated trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub residual: f64,
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Expansion,
    Biorth,
    Addition,
    Convolution,
    Multiconv,
    Jackson,
    Symmetry,
    Limits,
    Wilson,
    Sklyanin,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Expansion,
        Suite::Biorth,
        Suite::Addition,
        Suite::Convolution,
        Suite::Multiconv,
        Suite::Jackson,
        Suite::Symmetry,
        Suite::Limits,
        Suite::Wilson,
        Suite::Sklyanin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Expansion => "expansion",
            Suite::Biorth => "biorth",
            Suite::Addition => "addition",
            Suite::Convolution => "convolution",
            Suite::Multiconv => "multiconv",
            Suite::Jackson => "jackson",
            Suite::Symmetry => "symmetry",
            Suite::Limits => "limits",
            Suite::Wilson => "wilson",
            Suite::Sklyanin => "sklyanin",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn levels(self) -> &'static [Level] {
        use Level::*;
        match self {
            Suite::Biorth => &[Krawtchouk, Qracah, Trig, Elliptic],
            Suite::Addition | Suite::Convolution | Suite::Multiconv => &[Krawtchouk, Trig, Elliptic],
            Suite::Expansion | Suite::Jackson | Suite::Symmetry | Suite::Sklyanin => &[Trig, Elliptic],
            Suite::Limits => &[Elliptic],
            Suite::Wilson => &[Trig],
        }
    }
}

/// Which suite exercises each identity label.
pub const COVERAGE: &[(&str, Suite)] = &[
    ("tbo", Suite::Biorth),
    ("ro", Suite::Biorth),
    ("keie", Suite::Biorth),
    ("radd", Suite::Addition),
    ("kadd", Suite::Addition),
    ("rconv", Suite::Convolution),
    ("kconv", Suite::Convolution),
    ("rmc", Suite::Multiconv),
    ("f", Suite::Multiconv),
    ("kcomb", Suite::Multiconv),
    ("symm", Suite::Symmetry),
    ("lim", Suite::Limits),
    ("eto", Suite::Wilson),
    ("wo", Suite::Wilson),
    ("wadd", Suite::Wilson),
    ("saa", Suite::Sklyanin),
    ("sab", Suite::Sklyanin),
];

/// Suites named by `names`, with `all` expanding to every suite, in registry order.
pub fn resolve_suites(names: &[&str]) -> Result<Vec<Suite>> {
    let mut picked = Vec::new();
    for &name in names {
        if name == "all" {
            picked.extend(Suite::ALL);
        } else {
            picked.push(Suite::parse(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?);
        }
    }
    picked.sort();
    picked.dedup();
    Ok(picked)
}

/// Runs `suite` at `level`; trials run in parallel and are collected in order.
pub fn verify(suite: Suite, level: Level, cfg: &SampleConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    if !suite.levels().contains(&level) {
        return Err(Error::Config(format!(
            "suite {} does not run at level {}",
            suite.name(),
            level.name()
        )));
    }
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(suite, level, cfg, t))
        .collect();
    Ok(summarize(suite, level, cfg, outcomes, start.elapsed()))
}

fn summarize(
    suite: Suite,
    level: Level,
    cfg: &SampleConfig,
    outcomes: Vec<TrialOutcome>,
    elapsed: Duration,
) -> VerifyReport {
    let tol = cfg.tol_for(level);
    let mut max_residual: f64 = 0.0;
    let mut failures = Vec::new();
    for (trial, o) in outcomes.into_iter().enumerate() {
        let r = if o.residual.is_finite() {
            o.residual
        } else {
            FAILED_RESIDUAL
        };
        max_residual = max_residual.max(r);
        if r > tol {
            failures.push(Failure {
                trial,
                params: o.params,
                residual: r,
            });
        }
    }
    VerifyReport {
        suite: suite.name().to_string(),
        level,
        trials: cfg.trials,
        seed: cfg.seed,
        tol,
        max_residual,
        pass: failures.is_empty(),
        failures,
        elapsed,
    }
}

/// Draws parameters and evaluates one trial, resampling when an evaluation
/// hits a singular or ill-conditioned configuration.
pub fn run_trial(suite: Suite, level: Level, cfg: &SampleConfig, trial: usize) -> TrialOutcome {
    let mut rng = cfg.rng(trial);
    let mut last = String::new();
    for _ in 0..MAX_RESAMPLES {
        match suites::evaluate(suite, level, cfg, &mut rng) {
            Ok(o) => return o,
            Err(e) => last = e.to_string(),
        }
    }
    let mut params = Params::new();
    params.insert("error".into(), ParamValue::Text(last));
    TrialOutcome {
        residual: FAILED_RESIDUAL,
        params,
    }
}

/// Reports for every named suite at each of its levels (restricted by `cfg.levels`).
pub fn run_suite(names: &[&str], cfg: &SampleConfig) -> Result<Vec<VerifyReport>> {
    cfg.validate()?;
    let suites = resolve_suites(names)?;
    let mut out = Vec::new();
    for suite in suites {
        for &level in suite.levels() {
            if cfg.levels.as_ref().is_some_and(|ls| !ls.contains(&level)) {
                continue;
            }
            out.push(verify(suite, level, cfg)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_is_total_and_unique() {
        let labels = [
            "tbo", "radd", "rconv", "rmc", "f", "symm", "lim", "ro", "keie", "kadd", "kconv", "kcomb", "eto", "wo",
            "wadd", "saa", "sab",
        ];
        for l in labels {
            assert_eq!(COVERAGE.iter().filter(|(x, _)| *x == l).count(), 1, "{l}");
        }
        assert_eq!(COVERAGE.len(), labels.len());
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(resolve_suites(&["nope"]), Err(Error::UnknownSuite(_))));
        assert_eq!(resolve_suites(&["all"]).unwrap().len(), Suite::ALL.len());
        assert_eq!(
            resolve_suites(&["jackson", "biorth", "jackson"]).unwrap(),
            vec![Suite::Biorth, Suite::Jackson]
        );
    }

    #[test]
    fn config_validation() {
        let mut c = SampleConfig::new(1, 1);
        assert!(c.validate().is_ok());
        c.p_max = 1.0;
        assert!(c.validate().is_err());
        let mut c = SampleConfig::new(1, 0);
        assert!(c.validate().is_err());
        c.trials = 1;
        c.modulus_range = [0.0, 1.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn trial_streams_differ() {
        use rand::Rng;
        let c = SampleConfig::new(42, 2);
        let x: u64 = c.rng(0).gen();
        let y: u64 = c.rng(1).gen();
        assert_ne!(x, y);
        assert_eq!(x, c.rng(0).gen::<u64>());
    }

    #[test]
    fn failures_match_tolerance() {
        let cfg = SampleConfig::new(3, 3);
        let mk = |r: f64| TrialOutcome {
            residual: r,
            params: Params::new(),
        };
        let rep = summarize(
            Suite::Jackson,
            Level::Trig,
            &cfg,
            vec![mk(1e-12), mk(1e-3), mk(f64::NAN)],
            Duration::ZERO,
        );
        assert_eq!(rep.failures.len(), 2);
        assert_eq!(rep.max_residual, FAILED_RESIDUAL);
        assert!(!rep.pass);
        let ok = summarize(Suite::Jackson, Level::Trig, &cfg, vec![mk(1e-12)], Duration::ZERO);
        assert!(ok.pass && ok.failures.is_empty());
    }
}
