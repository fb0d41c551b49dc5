//! Golden report files: `<dir>/v1/<command>/<spec>__seed<seed>.json`.

use std::path::{Path, PathBuf};

use serde_json::Value;

use mixer_core::{Error, Result};

const REL_TOL: f64 = 1e-9;
const ABS_TOL: f64 = 1e-12;

pub fn path(dir: &Path, command: &str, spec: &str, seed: u64) -> PathBuf {
    let spec: String = spec
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    dir.join("v1")
        .join(command)
        .join(format!("{spec}__seed{seed}.json"))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn write(path: &Path, v: &Value) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, to_text(v)).map_err(|e| Error::io(path, e))
}

/// Paths at which `actual` differs from the stored golden report.
pub fn compare(path: &Path, actual: &Value) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let expected: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut drift = Vec::new();
    diff("$", &expected, actual, &mut drift);
    Ok(drift)
}

fn diff(at: &str, want: &Value, got: &Value, out: &mut Vec<String>) {
    match (want, got) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (a - b).abs() > ABS_TOL + REL_TOL * a.abs().max(b.abs()) {
                out.push(format!("{at}: {a} -> {b}"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            for (k, va) in a {
                match b.get(k) {
                    Some(vb) => diff(&format!("{at}.{k}"), va, vb, out),
                    None => out.push(format!("{at}.{k}: missing")),
                }
            }
            for k in b.keys().filter(|k| !a.contains_key(*k)) {
                out.push(format!("{at}.{k}: unexpected"));
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                out.push(format!("{at}: length {} -> {}", a.len(), b.len()));
                return;
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(&format!("{at}[{i}]"), x, y, out);
            }
        }
        _ => {
            if want != got {
                out.push(format!("{at}: {want} -> {got}"));
            }
        }
    }
}
