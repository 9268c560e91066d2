use std::process::Command;

use serde_json::Value;
use sixj_cli::{run, Outcome, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use sixj_core::harness::{Level, Suite};
use sixj_core::scalar::{Complex, EllipticContext};
use sixj_core::series::{eval_v12, jackson_rhs, SeriesSpec};
use sixj_core::sixj::{compute, r_explicit, ParamQuad, Route};
use sixj_core::sklyanin::eigenvalue;
use sixj_core::wilson::{wilson_r_grid, WilsonParams};

fn sixj(args: &str) -> Outcome {
    run(std::iter::once("sixj").chain(args.split_whitespace()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn c(v: &Value) -> Complex {
    Complex::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn same_bits(a: Complex, b: Complex) -> bool {
    a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
}

#[test]
fn csv_matrix_matches_library() {
    let out =
        sixj("sixj --level trig --method explicit --a 0.9,0.1 --b 1.3 --c 0.7 --d 1.1,\u{2212}0.2 --N 2 --format csv");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "k,l,re,im");
    assert_eq!(lines.len(), 10);
    let ctx = EllipticContext::trigonometric(Complex::new(0.5, 0.0)).unwrap();
    let quad = ParamQuad::new(
        Complex::new(0.9, 0.1),
        Complex::new(1.3, 0.0),
        Complex::new(0.7, 0.0),
        Complex::new(1.1, -0.2),
        2,
        ctx,
    );
    let want = r_explicit(&quad).unwrap();
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let (k, l): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let got = Complex::new(f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(same_bits(got, want.get(k, l)), "({k},{l}): {got} vs {}", want.get(k, l));
    }
}

#[test]
fn json_matrix_matches_library_for_every_method() {
    let q = Complex::new(0.45, 0.3);
    let p = Complex::new(0.12, -0.05);
    let ctx = EllipticContext::elliptic(q, p).unwrap();
    let quad = ParamQuad::new(
        Complex::new(0.8, 0.3),
        Complex::new(1.2, -0.4),
        Complex::new(0.6, 0.5),
        Complex::new(1.5, 0.1),
        3,
        ctx,
    );
    for route in Route::ALL {
        let out = sixj(&format!(
            "sixj --level elliptic --method {} --a 0.8,0.3 --b 1.2,-0.4 --c 0.6,0.5 --d 1.5,0.1 --N 3 --q 0.45,0.3 --p 0.12,-0.05",
            route.name()
        ));
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        let v = json(&out);
        let want = compute(&quad, route).unwrap();
        assert_eq!(v["method"], route.name());
        for k in 0..=3 {
            for l in 0..=3 {
                assert!(
                    same_bits(c(&v["matrix"][k][l]), want.get(k, l)),
                    "{} ({k},{l})",
                    route.name()
                );
            }
        }
    }
}

#[test]
fn theta_at_one_vanishes() {
    let out = sixj("theta --x 1 --p 0.2");
    assert_eq!(out.code, EXIT_OK);
    assert!(c(&json(&out)["value"]).norm() < 1e-12);
}

#[test]
fn jackson_series_matches_library() {
    let out = sixj("series --family jackson --n 3 --a 0.7 --b 1.3,0.2 --c 0.6 --xi 1.1 --q 0.5 --p 0.2");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    let ctx = EllipticContext::elliptic(Complex::new(0.5, 0.0), Complex::new(0.2, 0.0)).unwrap();
    let (a, b, cc, xi) = (
        Complex::new(0.7, 0.0),
        Complex::new(1.3, 0.2),
        Complex::new(0.6, 0.0),
        Complex::new(1.1, 0.0),
    );
    let spec = SeriesSpec::jackson(a, b, cc, xi, 3, &ctx);
    assert!(same_bits(c(&v["value"]), eval_v12(&spec).unwrap()));
    assert!(same_bits(c(&v["product"]), jackson_rhs(a, b, cc, xi, 3, &ctx).unwrap()));
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
}

#[test]
fn wilson_and_sklyanin_match_library() {
    let q = Complex::new(0.5, 0.0);
    let ctx = EllipticContext::trigonometric(q).unwrap();
    let wp = WilsonParams::from_free(
        Complex::new(0.8, 0.0),
        Complex::new(1.1, 0.0),
        Complex::new(0.9, 0.2),
        Complex::new(1.3, 0.0),
        2,
        ctx,
    )
    .unwrap();
    let v = json(&sixj("wilson --a 0.8 --c 1.1 --d 0.9,0.2 --e 1.3 --N 2"));
    for n in 0..=2 {
        for k in 0..=2 {
            assert!(same_bits(c(&v["grid"][n][k]), wilson_r_grid(n, k, &wp).unwrap()));
        }
    }

    let ectx = EllipticContext::elliptic(q, Complex::new(0.1, 0.0)).unwrap();
    let (a, b, cc) = (Complex::new(0.8, 0.0), Complex::new(1.2, 0.3), Complex::new(0.9, 0.0));
    let v = json(&sixj(
        "sklyanin --output eigenvalues --a 0.8 --b 1.2,0.3 --c 0.9 --N 2 --p 0.1",
    ));
    for k in 0..=2 {
        assert!(same_bits(
            c(&v["eigenvalues"][k]),
            eigenvalue(a, b, cc, k, 2, &ectx).unwrap()
        ));
    }
    let out = sixj("sklyanin --output gevp --a 0.8 --b 1.2,0.3 --c 0.9 --d2 1.4 --N 2 --p 0.1");
    assert_eq!(out.code, EXIT_OK);
    assert!(json(&out)["max_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn verify_is_deterministic() {
    let first = sixj("verify --suite jackson --trials 100 --seed 7");
    let second = sixj("verify --suite jackson --trials 100 --seed 7");
    assert_eq!(first.code, EXIT_OK, "{}", first.stdout);
    assert_eq!(first.stdout, second.stdout);
    let other = sixj("verify --suite jackson --trials 100 --seed 8");
    assert_ne!(first.stdout, other.stdout);
    let v = json(&first);
    for r in v.as_array().unwrap() {
        for key in [
            "suite",
            "level",
            "trials",
            "seed",
            "tol",
            "max_residual",
            "pass",
            "failures",
        ] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["seed"], 7);
        assert_eq!(r["trials"], 100);
    }
}

#[test]
fn verify_all_covers_every_suite() {
    let out = sixj("verify --suite all --trials 1 --n-max 2");
    let v = json(&out);
    let mut seen: Vec<(String, String)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["suite"].as_str().unwrap().to_string(),
                r["level"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let mut want: Vec<(String, String)> = Suite::ALL
        .iter()
        .flat_map(|s| {
            s.levels()
                .iter()
                .map(move |l| (s.name().to_string(), l.name().to_string()))
        })
        .collect();
    seen.sort();
    want.sort();
    assert_eq!(seen, want);
    let all_pass = v.as_array().unwrap().iter().all(|r| r["pass"] == true);
    assert_eq!(out.code, if all_pass { EXIT_OK } else { EXIT_FAILED });
}

#[test]
fn verify_level_restriction_and_csv() {
    let out = sixj("verify --suite biorth --trials 3 --level trig --level qracah --format csv");
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "suite,level,trials,seed,tol,max_residual,pass,failures");
    let levels: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(levels, [Level::Qracah.name(), Level::Trig.name()]);
}

#[test]
fn failing_verification_exits_one() {
    let out = sixj("verify --suite biorth --trials 2 --level trig --tol 1e-300");
    assert_eq!(out.code, EXIT_FAILED);
    let v = json(&out);
    assert_eq!(v[0]["pass"], false);
    assert_eq!(v[0]["tol"].as_f64().unwrap(), 1e-300);
    assert!(!v[0]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        "sixj --a 1 --b 2 --c 3 --N 1 --bogus 4",
        "sixj --a 1,2,3 --b 2 --c 3 --d 1 --N 1",
        "sixj --a 1 --b 2 --c 3 --N 1",
        "sixj --level krawtchouk --method paths --a 1 --b 2 --c 0.5 --N 1",
        "sixj --level trig --p 0.2 --a 1 --b 2 --c 3 --d 4 --N 1",
        "verify --suite nope",
        "verify --trials 0",
        "series --family w --n 2",
        "frobnicate",
    ] {
        let out = sixj(args);
        assert_eq!(out.code, EXIT_USAGE, "{args}");
        assert!(out.stdout.is_empty(), "{args}");
        assert!(!out.stderr.is_empty(), "{args}");
    }
    assert_eq!(sixj("--help").code, EXIT_OK);
}

#[test]
fn binary_tol_from_environment_flag_wins() {
    let bin = env!("CARGO_BIN_EXE_sixj");
    let args = ["verify", "--suite", "jackson", "--trials", "2", "--level", "trig"];
    let tol_of = |out: std::process::Output| -> (Option<i32>, f64) {
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        (out.status.code(), v[0]["tol"].as_f64().unwrap())
    };
    let env_only = Command::new(bin).args(args).env("SIXJ_TOL", "1e-3").output().unwrap();
    assert_eq!(tol_of(env_only), (Some(0), 1e-3));
    let both = Command::new(bin)
        .args(args)
        .arg("--tol")
        .arg("1e-4")
        .env("SIXJ_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(tol_of(both), (Some(0), 1e-4));
    let bad = Command::new(bin).arg("theta").env_remove("SIXJ_TOL").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
