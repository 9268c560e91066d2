//! JSON and CSV rendering. Floats carry 17 significant digits.

use serde_json::{Map, Number, Value};
use sixj_core::scalar::Complex;

/// `x` with 17 significant digits, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(digits17(x).parse::<Number>().expect("formatted float is a JSON number"))
}

fn digits17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `[re, im]`.
pub fn cnum(z: Complex) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn cvec(zs: &[Complex]) -> Value {
    Value::Array(zs.iter().copied().map(cnum).collect())
}

/// Rows of `[re, im]` pairs.
pub fn cmatrix(dim: usize, get: impl Fn(usize, usize) -> Complex) -> Value {
    Value::Array(
        (0..dim)
            .map(|k| Value::Array((0..dim).map(|l| cnum(get(k, l))).collect()))
            .collect(),
    )
}

/// Rewrites every non-integer number of `v` with 17 significant digits.
pub fn fix_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(fix_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fix_floats(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// Row-major `k,l,re,im`.
pub fn csv_matrix(dim: usize, get: impl Fn(usize, usize) -> Complex) -> String {
    let mut out = String::from("k,l,re,im\n");
    for k in 0..dim {
        for l in 0..dim {
            let z = get(k, l);
            out.push_str(&format!("{k},{l},{},{}\n", digits17(z.re), digits17(z.im)));
        }
    }
    out
}

/// `name,re,im` rows.
pub fn csv_named(rows: &[(String, Complex)]) -> String {
    let mut out = String::from("name,re,im\n");
    for (name, z) in rows {
        out.push_str(&format!("{name},{},{}\n", digits17(z.re), digits17(z.im)));
    }
    out
}

/// A header line followed by pre-rendered rows.
pub fn csv_table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn csv_float(x: f64) -> String {
    digits17(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MAX, 0.0] {
            let s = serde_json::to_string(&num(x)).unwrap();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn fix_floats_keeps_integers() {
        let v = serde_json::json!({"trials": 10, "tol": 1e-8, "xs": [0.5, 2]});
        let s = serde_json::to_string(&fix_floats(v)).unwrap();
        assert_eq!(
            s,
            r#"{"trials":10,"tol":1.0000000000000000e-8,"xs":[5.0000000000000000e-1,2]}"#
        );
    }

    #[test]
    fn csv_matrix_shape() {
        let s = csv_matrix(3, |k, l| Complex::new(k as f64, l as f64));
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "k,l,re,im");
        assert_eq!(lines.len(), 10);
        assert!(lines[6].starts_with("1,2,"));
    }
}
