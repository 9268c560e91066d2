//! Command-line schema.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sixj_core::scalar::Complex;

#[derive(Debug, Parser)]
#[command(
    name = "sixj",
    version,
    about = "Connection coefficients between twisted-monomial bases"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Numerical tolerance; overrides the per-level defaults of `verify`.
    #[arg(long, global = true, env = "SIXJ_TOL")]
    pub tol: Option<f64>,
    /// Truncation threshold of theta products.
    #[arg(long, global = true)]
    pub theta_eps: Option<f64>,
    /// Margin used when rejecting resonant sampled parameters.
    #[arg(long, global = true)]
    pub gen_delta: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Krawtchouk,
    Qracah,
    Trig,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Explicit,
    Recurrence,
    Paths,
    Solve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// `rFs`
    F,
    /// `rφs`
    Phi,
    /// very-well-poised `r+1Wr`
    W,
    /// elliptic very-well-poised sum
    V12,
    /// the Jackson-summable `V` with its product side
    Jackson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SklyaninOutput {
    /// Matrix of `Δ(a,b,c)` between the `(λ,μ)` basis and its `q^{1/2}` shift.
    Matrix,
    /// The eigenvalues of `Δ(a,b,c)`.
    Eigenvalues,
    /// Residuals of the generalized eigenvalue problem against `Δ(…,d2)`.
    Gevp,
}

fn complex(s: &str) -> Result<Complex, String> {
    let s = s.replace('\u{2212}', "-");
    let part = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once(',') {
        None => Ok(Complex::new(part(&s)?, 0.0)),
        Some((re, im)) => Ok(Complex::new(part(re)?, part(im)?)),
    }
}

/// Base and nome of an evaluation context.
#[derive(Debug, Args)]
pub struct CtxArgs {
    #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.5")]
    pub q: Complex,
    /// Square root of `q`; the principal root when omitted.
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub q_half: Option<Complex>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub p: Option<Complex>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate `θ(x;p)`.
    Theta {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        x: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0")]
        p: Complex,
    },
    /// Evaluate a terminating series.
    Series {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Number of terms after the first (the terminating degree).
        #[arg(long = "n")]
        n: usize,
        /// Numerator parameters after the terminating one; repeatable.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        top: Vec<Complex>,
        /// Denominator parameters; repeatable.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        bottom: Vec<Complex>,
        /// Leading parameter of the well-poised families.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Option<Complex>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        b: Option<Complex>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        c: Option<Complex>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        xi: Option<Complex>,
        /// Argument of `F`, `φ` and `W`; defaults to `1` for `F` and `q` otherwise.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: Option<Complex>,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Coefficient matrix `R(a,b,c,d;N)`.
    Sixj {
        #[arg(long, value_enum, default_value_t = LevelArg::Trig)]
        level: LevelArg,
        #[arg(long, value_enum, default_value_t = Method::Explicit)]
        method: Method,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        b: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        c: Complex,
        /// Completed from `ad - bc = 1` at the Krawtchouk level when omitted.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        d: Option<Complex>,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Wilson functions on the grid `z = aq^k` of `(a,…,f)` with `ab = q^{-N}`, `abcdef = q`.
    Wilson {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        c: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        d: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        e: Complex,
        #[arg(long = "N")]
        n: usize,
        /// Evaluate `r_n` at this `z` instead of on the grid.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: Option<Complex>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.5")]
        q: Complex,
    },
    /// Difference operator `Δ(a,b,c)` on the degree-`N` space.
    Sklyanin {
        #[arg(long, value_enum, default_value_t = SklyaninOutput::Matrix)]
        output: SklyaninOutput,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        b: Complex,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        c: Complex,
        #[arg(long = "N")]
        n: usize,
        /// Source basis; defaults to the eigenbasis `(q^{1/2}a, q^{1/2}b)`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true, requires = "mu")]
        lambda: Option<Complex>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, requires = "lambda")]
        mu: Option<Complex>,
        /// Second operator parameter for `--output gevp`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        d2: Option<Complex>,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Run randomized verification suites.
    Verify {
        /// Suite name or `all`; repeatable.
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: usize,
        #[arg(long = "p-max")]
        p_max: Option<f64>,
        /// Restrict to these levels; repeatable.
        #[arg(long, value_enum)]
        level: Vec<LevelArg>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn schema_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex("1.5").unwrap(), Complex::new(1.5, 0.0));
        assert_eq!(complex("1.1,-0.2").unwrap(), Complex::new(1.1, -0.2));
        assert_eq!(complex("1.1,\u{2212}0.2").unwrap(), Complex::new(1.1, -0.2));
        assert_eq!(complex(" -3 , 4 ").unwrap(), Complex::new(-3.0, 4.0));
        assert!(complex("1,2,3").is_err());
        assert!(complex("x").is_err());
    }
}
