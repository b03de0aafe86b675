//! Output helpers: full-precision JSON numbers, run reports with exit codes,
//! and CSV dumps of solution grids.
//!
//! Every float is printed with 17 significant digits; CSV uses '.' decimals
//! and '\n' line endings unconditionally. Timing goes to stderr so that
//! stdout stays byte-identical across runs with the same arguments and seed.

use kostant_toda::toda::{DomainSpec, TodaSolution};
use serde_json::{Map, Number, Value};
use std::io::Write;

/// A float as a JSON number with 17 significant digits.
pub fn fnum(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_string_unchecked(format!("{:.16e}", x)))
    } else {
        Value::String(format!("{}", x))
    }
}

pub fn fvec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| fnum(x)).collect())
}

/// Rewrite every float-valued number in a JSON tree to 17 significant
/// digits, leaving integers untouched.
pub fn full_precision(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains('.') || s.contains('e') || s.contains('E') {
                n.as_f64().map(fnum).unwrap_or(Value::Number(n))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(full_precision).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, val)| (k, full_precision(val)))
                .collect(),
        ),
        other => other,
    }
}

pub fn csv_float(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Ok,
    VerificationFailed,
    InputError,
    NumericError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::InputError => 2,
            Status::NumericError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::VerificationFailed => "verification-failed",
            Status::InputError => "input-error",
            Status::NumericError => "numeric-error",
        }
    }
}

pub struct RunReport {
    pub status: Status,
    pub config: Value,
    pub payload: Value,
}

impl RunReport {
    /// Print the report JSON to stdout and return the exit code; elapsed time
    /// is reported on stderr only.
    pub fn finish(self, started: std::time::Instant) -> i32 {
        let mut map = Map::new();
        map.insert("status".into(), Value::String(self.status.as_str().into()));
        map.insert("config".into(), self.config);
        map.insert("payload".into(), self.payload);
        println!("{}", Value::Object(map));
        eprintln!("elapsed: {:.3?}", started.elapsed());
        self.status.exit_code()
    }
}

pub fn error_report(err: &kostant_toda::Error, config: Value) -> RunReport {
    let status = match err {
        kostant_toda::Error::Input(_) => Status::InputError,
        kostant_toda::Error::Numeric(_) => Status::NumericError,
    };
    let mut payload = Map::new();
    payload.insert("error".into(), Value::String(err.to_string()));
    RunReport {
        status,
        config,
        payload: Value::Object(payload),
    }
}

/// Solution grid as CSV: coordinates then the ℓ components of ξ.
pub fn solution_csv(sol: &TodaSolution) -> String {
    let mut out = String::new();
    let grid = &sol.grid;
    let header: Vec<String> = match grid.domain {
        DomainSpec::Rectangle { .. } => vec!["x".into(), "y".into()],
        DomainSpec::Annulus { .. } => vec!["s".into(), "theta".into()],
        DomainSpec::Line { .. } => vec!["s".into()],
    }
    .into_iter()
    .chain((1..=sol.ell).map(|c| format!("xi_{}", c)))
    .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for node in 0..grid.nnodes() {
        let (i1, i2) = grid.coords(node);
        let mut cols = vec![csv_float(grid.c1[i1])];
        if grid.n2 > 1 {
            cols.push(csv_float(grid.c2[i2]));
        }
        for c in 0..sol.ell {
            cols.push(csv_float(sol.xi_at(node)[c]));
        }
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Solution grid as a JSON array of node records.
pub fn solution_json(sol: &TodaSolution) -> Value {
    let grid = &sol.grid;
    let rows: Vec<Value> = (0..grid.nnodes())
        .map(|node| {
            let (i1, i2) = grid.coords(node);
            let mut m = Map::new();
            m.insert("c1".into(), fnum(grid.c1[i1]));
            if grid.n2 > 1 {
                m.insert("c2".into(), fnum(grid.c2[i2]));
            }
            m.insert("xi".into(), fvec(sol.xi_at(node)));
            Value::Object(m)
        })
        .collect();
    Value::Array(rows)
}

pub fn write_output(path: &std::path::Path, content: &str) -> kostant_toda::Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| kostant_toda::Error::input(format!("cannot create {:?}: {}", path, e)))?;
    f.write_all(content.as_bytes())
        .map_err(|e| kostant_toda::Error::input(format!("cannot write {:?}: {}", path, e)))?;
    Ok(())
}
