//! The `sixj` command line: argument schema, dispatch onto `sixj-core`, and rendering.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text destined for standard output and standard error, so that it can be
//! driven from tests without spawning a process.

pub mod args;
pub mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use sixj_core::error::Error;
use sixj_core::harness::{run_suite, Level, SampleConfig};
use sixj_core::scalar::{Complex, EllipticContext, DEFAULT_THETA_EPS, DEFAULT_TOL};
use sixj_core::series::{self, SeriesSpec};
use sixj_core::sixj::krawtchouk::{krawtchouk_matrix, Sl2};
use sixj_core::sixj::qracah::qracah_matrix;
use sixj_core::sixj::{compute, CoeffMatrix, ParamQuad, Route};
use sixj_core::sklyanin::{eigenbasis_matrix, eigenvalue, gevp_check, operator_matrix, DiffOpSpec};
use sixj_core::wilson::{wilson_norm, wilson_r, wilson_r_grid, wilson_weight, WilsonParams};

use args::{Cli, Command, CtxArgs, FamilyArg, Format, Global, LevelArg, Method, SklyaninOutput};
use output::{cmatrix, cnum, csv_float, csv_matrix, csv_named, csv_table, cvec, fix_floats};

/// Nome used at the elliptic level when `--p` is not given.
pub const DEFAULT_NOME: f64 = 0.1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A rendered result and whether it counts as a pass.
struct Doc {
    json: Value,
    csv: String,
    pass: bool,
}

impl Doc {
    fn ok(json: Value, csv: String) -> Self {
        Doc { json, csv, pass: true }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok(doc) => {
            let stdout = match cli.global.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&doc.json).expect("JSON values serialize");
                    s.push('\n');
                    s
                }
                Format::Csv => doc.csv,
            };
            Outcome {
                code: if doc.pass { EXIT_OK } else { EXIT_FAILED },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let msg = match e {
                CliError::Usage(m) => format!("error: {m}\n"),
                CliError::Lib(e) => format!("error: {e}\n"),
            };
            Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: msg,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<Doc> {
    let g = &cli.global;
    match &cli.command {
        Command::Theta { x, p } => theta(g, *x, *p),
        Command::Series {
            family,
            n,
            top,
            bottom,
            a,
            b,
            c,
            xi,
            z,
            ctx,
        } => {
            let level = if ctx.p.is_some() {
                LevelArg::Elliptic
            } else {
                LevelArg::Trig
            };
            let ctx = context(g, ctx, level)?;
            series_cmd(*family, *n, top, bottom, [*a, *b, *c, *xi], *z, &ctx)
        }
        Command::Sixj {
            level,
            method,
            a,
            b,
            c,
            d,
            n,
            ctx,
        } => sixj(g, *level, *method, [*a, *b, *c], *d, *n, ctx),
        Command::Wilson { a, c, d, e, n, z, q } => {
            let ctx = EllipticContext::with_all(*q, q.sqrt(), Complex::new(0.0, 0.0), theta_eps(g), tol(g))?;
            wilson(WilsonParams::from_free(*a, *c, *d, *e, *n, ctx)?, *z)
        }
        Command::Sklyanin {
            output,
            a,
            b,
            c,
            n,
            lambda,
            mu,
            d2,
            ctx,
        } => {
            let level = if ctx.p.is_some() {
                LevelArg::Elliptic
            } else {
                LevelArg::Trig
            };
            let ctx = context(g, ctx, level)?;
            let op = DiffOpSpec::new(*a, *b, *c, *n, ctx)?;
            sklyanin(*output, &op, lambda.zip(*mu), *d2)
        }
        Command::Verify {
            suite,
            trials,
            n_max,
            p_max,
            level,
        } => verify(g, suite, *trials, *n_max, *p_max, level),
    }
}

fn theta_eps(g: &Global) -> f64 {
    g.theta_eps.unwrap_or(DEFAULT_THETA_EPS)
}

fn tol(g: &Global) -> f64 {
    g.tol.unwrap_or(DEFAULT_TOL)
}

fn context(g: &Global, c: &CtxArgs, level: LevelArg) -> CliResult<EllipticContext> {
    let zero = Complex::new(0.0, 0.0);
    let p = match (level, c.p) {
        (LevelArg::Elliptic, p) => p.unwrap_or(Complex::new(DEFAULT_NOME, 0.0)),
        (_, None) => zero,
        (_, Some(p)) if p == zero => zero,
        (l, Some(_)) => {
            return Err(CliError::Usage(format!(
                "--p is only meaningful at the elliptic level, not {l:?}"
            )))
        }
    };
    let q_half = c.q_half.unwrap_or_else(|| c.q.sqrt());
    Ok(EllipticContext::with_all(c.q, q_half, p, theta_eps(g), tol(g))?)
}

fn theta(g: &Global, x: Complex, p: Complex) -> CliResult<Doc> {
    let one = Complex::new(1.0, 0.0);
    let ctx = EllipticContext::with_all(one, one, p, theta_eps(g), tol(g))?;
    let v = sixj_core::scalar::theta(x, &ctx)?;
    Ok(Doc::ok(
        json!({"x": cnum(x), "p": cnum(p), "value": cnum(v)}),
        csv_named(&[("theta".into(), v)]),
    ))
}

fn require(v: Option<Complex>, flag: &str, what: &str) -> CliResult<Complex> {
    v.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn series_cmd(
    family: FamilyArg,
    n: usize,
    top: &[Complex],
    bottom: &[Complex],
    abcxi: [Option<Complex>; 4],
    z: Option<Complex>,
    ctx: &EllipticContext,
) -> CliResult<Doc> {
    let q = ctx.q();
    let [a, b, c, xi] = abcxi;
    let family_name = format!("{family:?}").to_lowercase();
    let (spec, product) = match family {
        FamilyArg::F => (
            SeriesSpec::hypergeometric(n, top, bottom, z.unwrap_or(Complex::new(1.0, 0.0))),
            None,
        ),
        FamilyArg::Phi => (SeriesSpec::basic(n, top, bottom, q, z.unwrap_or(q)), None),
        FamilyArg::W => (
            SeriesSpec::very_well_poised(require(a, "a", "W")?, n, top, q, z.unwrap_or(q)),
            None,
        ),
        FamilyArg::V12 => (SeriesSpec::elliptic(require(a, "a", "v12")?, n, top, ctx), None),
        FamilyArg::Jackson => {
            let (a, b, c, xi) = (
                require(a, "a", "jackson")?,
                require(b, "b", "jackson")?,
                require(c, "c", "jackson")?,
                require(xi, "xi", "jackson")?,
            );
            let spec = SeriesSpec::jackson(a, b, c, xi, n, ctx);
            (spec, Some(series::jackson_rhs(a, b, c, xi, n, ctx)?))
        }
    };
    let value = match family {
        FamilyArg::F => series::eval_rfs(&spec)?,
        FamilyArg::Phi => series::eval_rphi_s(&spec)?,
        FamilyArg::W => series::eval_w(&spec)?,
        FamilyArg::V12 | FamilyArg::Jackson => series::eval_v12(&spec)?,
    };
    let terms = series::series_terms(&spec)?;
    let mut doc = json!({"family": family_name, "n": n, "value": cnum(value), "terms": cvec(&terms)});
    let mut rows = vec![("value".to_string(), value)];
    if let Some(pr) = product {
        doc["product"] = cnum(pr);
        rows.push(("product".into(), pr));
    }
    rows.extend(terms.iter().enumerate().map(|(j, t)| (format!("term{j}"), *t)));
    Ok(Doc::ok(doc, csv_named(&rows)))
}

fn sixj(
    g: &Global,
    level: LevelArg,
    method: Method,
    abc: [Complex; 3],
    d: Option<Complex>,
    n: usize,
    ctx_args: &CtxArgs,
) -> CliResult<Doc> {
    let [a, b, c] = abc;
    let route = match method {
        Method::Explicit => Route::Explicit,
        Method::Recurrence => Route::Recurrence,
        Method::Paths => Route::Paths,
        Method::Solve => Route::Solve,
    };
    let closed_form_only = |name: &str| {
        if route != Route::Explicit {
            return Err(CliError::Usage(format!(
                "the {name} level only has the explicit method"
            )));
        }
        Ok(())
    };
    let m: CoeffMatrix = match level {
        LevelArg::Krawtchouk => {
            closed_form_only("krawtchouk")?;
            let sl2 = match d {
                Some(d) => Sl2::new(a, b, c, d)?,
                None => Sl2::from_abc(a, b, c)?,
            };
            krawtchouk_matrix(n, &sl2)?
        }
        LevelArg::Qracah => {
            closed_form_only("qracah")?;
            let ctx = context(g, ctx_args, level)?;
            qracah_matrix(&ParamQuad::new(a, b, c, require(d, "d", "sixj")?, n, ctx))?
        }
        LevelArg::Trig | LevelArg::Elliptic => {
            let ctx = context(g, ctx_args, level)?;
            compute(&ParamQuad::new(a, b, c, require(d, "d", "sixj")?, n, ctx), route)?
        }
    };
    let dim = m.dim();
    let doc = json!({
        "level": format!("{level:?}").to_lowercase(),
        "method": route.name(),
        "N": n,
        "flagged": m.flagged.iter().map(|&(k, l)| json!([k, l])).collect::<Vec<_>>(),
        "matrix": cmatrix(dim, |k, l| m.get(k, l)),
    });
    Ok(Doc::ok(doc, csv_matrix(dim, |k, l| m.get(k, l))))
}

fn wilson(wp: WilsonParams, z: Option<Complex>) -> CliResult<Doc> {
    let big = wp.n;
    let params = cvec(&wp.params());
    if let Some(z) = z {
        let values = (0..=big).map(|n| wilson_r(n, z, &wp)).collect::<Result<Vec<_>, _>>()?;
        let rows: Vec<_> = values.iter().enumerate().map(|(n, v)| (format!("r{n}"), *v)).collect();
        return Ok(Doc::ok(
            json!({"params": params, "N": big, "z": cnum(z), "values": cvec(&values)}),
            csv_named(&rows),
        ));
    }
    let dim = big + 1;
    let grid = (0..dim)
        .map(|n| {
            (0..dim)
                .map(|k| wilson_r_grid(n, k, &wp))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let weights = (0..dim).map(|k| wilson_weight(k, &wp)).collect::<Result<Vec<_>, _>>()?;
    let norms = (0..dim).map(|n| wilson_norm(n, &wp)).collect::<Result<Vec<_>, _>>()?;
    Ok(Doc::ok(
        json!({
            "params": params,
            "N": big,
            "grid": cmatrix(dim, |n, k| grid[n][k]),
            "weights": cvec(&weights),
            "norms": cvec(&norms),
        }),
        csv_matrix(dim, |n, k| grid[n][k]),
    ))
}

fn sklyanin(
    output: SklyaninOutput,
    op: &DiffOpSpec,
    source: Option<(Complex, Complex)>,
    d2: Option<Complex>,
) -> CliResult<Doc> {
    let n = op.n;
    let ctx = op.ctx;
    match output {
        SklyaninOutput::Matrix => {
            let m = match source {
                Some((lambda, mu)) => operator_matrix(op, lambda, mu)?,
                None => eigenbasis_matrix(op)?,
            };
            let dim = m.dim();
            let e = &m.entries;
            Ok(Doc::ok(
                json!({
                    "N": n,
                    "d": cnum(op.d),
                    "matrix": cmatrix(dim, |j, k| e.get(j, k)),
                    "column_residuals": m.column_residuals.iter().map(|&r| output::num(r)).collect::<Vec<_>>(),
                }),
                csv_matrix(dim, |j, k| e.get(j, k)),
            ))
        }
        SklyaninOutput::Eigenvalues => {
            let vals = (0..=n)
                .map(|k| eigenvalue(op.a, op.b, op.c, k, n, &ctx))
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<_> = vals.iter().enumerate().map(|(k, v)| (format!("k{k}"), *v)).collect();
            Ok(Doc::ok(json!({"N": n, "eigenvalues": cvec(&vals)}), csv_named(&rows)))
        }
        SklyaninOutput::Gevp => {
            let d2 = require(d2, "d2", "gevp")?;
            let rep = gevp_check(op.a, op.b, op.c, d2, n, &ctx)?;
            let csv = csv_table(
                "k,lambda_re,lambda_im,residual",
                rep.lambdas
                    .iter()
                    .zip(&rep.residuals)
                    .enumerate()
                    .map(|(k, (l, r))| vec![k.to_string(), csv_float(l[0]), csv_float(l[1]), csv_float(*r)]),
            );
            let json = fix_floats(serde_json::to_value(&rep).expect("report serializes"));
            Ok(Doc::ok(json, csv))
        }
    }
}

fn level_of(l: LevelArg) -> Level {
    match l {
        LevelArg::Krawtchouk => Level::Krawtchouk,
        LevelArg::Qracah => Level::Qracah,
        LevelArg::Trig => Level::Trig,
        LevelArg::Elliptic => Level::Elliptic,
    }
}

fn verify(
    g: &Global,
    suites: &[String],
    trials: usize,
    n_max: usize,
    p_max: Option<f64>,
    levels: &[LevelArg],
) -> CliResult<Doc> {
    let mut cfg = SampleConfig::new(g.seed, trials);
    cfg.n_max = n_max;
    cfg.tol = g.tol;
    if let Some(p) = p_max {
        cfg.p_max = p;
    }
    if let Some(d) = g.gen_delta {
        cfg.gen_delta = d;
    }
    if !levels.is_empty() {
        cfg.levels = Some(levels.iter().copied().map(level_of).collect());
    }
    let names: Vec<&str> = suites.iter().map(String::as_str).collect();
    let reports = run_suite(&names, &cfg)?;
    let pass = reports.iter().all(|r| r.pass);
    let csv = csv_table(
        "suite,level,trials,seed,tol,max_residual,pass,failures",
        reports.iter().map(|r| {
            vec![
                r.suite.clone(),
                r.level.name().to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
                csv_float(r.tol),
                csv_float(r.max_residual),
                r.pass.to_string(),
                r.failures.len().to_string(),
            ]
        }),
    );
    let json = fix_floats(serde_json::to_value(&reports).expect("reports serialize"));
    Ok(Doc { json, csv, pass })
}
