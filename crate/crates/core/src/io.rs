//! File formats: cocycle JSON, reduced-cocycle JSON, tail-curve CSV.
//!
//! Cocycle JSON is `{"dim": d, "symbols": m, "probs": [...], "matrices":
//! [[[row], ...], ...]}` with row-major matrices. Extended reals are written
//! as the string `"-inf"`. CSV numbers use `{:.16e}` (17 significant digits).

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::reduction::ReducedCocycle;
use crate::stats::{TailCurve, TailRow};

pub const TAIL_HEADER: &str = "n,epsilon,p_hat,stderr,samples";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCocycle {
    dim: usize,
    symbols: usize,
    probs: Vec<f64>,
    matrices: Vec<Vec<Vec<f64>>>,
}

/// Parses cocycle JSON; shape errors name the offending `matrices[i][r]`.
pub fn parse_cocycle(text: &str) -> Result<Cocycle> {
    let raw: RawCocycle = serde_json::from_str(text)?;
    let (d, m) = (raw.dim, raw.symbols);
    if d == 0 || m == 0 {
        return Err(Error::Input(format!("dim = {d} and symbols = {m} must be positive")));
    }
    if raw.probs.len() != m {
        return Err(Error::Input(format!("probs has {} entries, symbols = {m}", raw.probs.len())));
    }
    if raw.matrices.len() != m {
        return Err(Error::Input(format!("matrices has {} entries, symbols = {m}", raw.matrices.len())));
    }
    let mut mats = Vec::with_capacity(m);
    for (i, rows) in raw.matrices.into_iter().enumerate() {
        if rows.len() != d {
            return Err(Error::Input(format!("matrices[{i}] has {} rows, dim = {d}", rows.len())));
        }
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != d) {
            return Err(Error::Input(format!("matrices[{i}][{r}] has {} entries, dim = {d}", row.len())));
        }
        mats.push(Matrix::from_rows(&rows)?);
    }
    Cocycle::new(raw.probs, mats).map_err(|e| Error::Input(e.to_string()))
}

pub fn cocycle_to_json(c: &Cocycle) -> String {
    let raw = RawCocycle {
        dim: c.dim(),
        symbols: c.symbols(),
        probs: c.probs().to_vec(),
        matrices: c.matrices().iter().map(Matrix::to_rows).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("finite cocycle serializes")
}

pub fn read_cocycle(path: &Path) -> Result<Cocycle> {
    let text = std::fs::read_to_string(path)?;
    parse_cocycle(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn parse_reduced(text: &str, tol: f64) -> Result<ReducedCocycle> {
    let r: ReducedCocycle = serde_json::from_str(text)?;
    r.check(tol)?;
    Ok(r)
}

pub fn reduced_to_json(r: &ReducedCocycle) -> String {
    serde_json::to_string_pretty(r).expect("finite reduction serializes")
}

pub fn read_reduced(path: &Path, tol: f64) -> Result<ReducedCocycle> {
    let text = std::fs::read_to_string(path)?;
    parse_reduced(&text, tol).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// `# <config>` line, header, one row per cell.
pub fn tail_to_csv(t: &TailCurve, config: &serde_json::Value) -> String {
    let mut out = format!("# {config}\n{TAIL_HEADER}\n");
    for r in &t.rows {
        writeln!(out, "{},{:.16e},{:.16e},{:.16e},{}", r.n, r.epsilon, r.p_hat, r.stderr, r.samples)
            .expect("write to string");
    }
    out
}

/// Rows of a tail CSV; `#` lines are skipped and `l_ref` is taken from a
/// JSON comment when present.
pub fn parse_tail_csv(text: &str) -> Result<TailCurve> {
    let mut l_ref = f64::NAN;
    let mut rows = Vec::new();
    let mut header = false;
    for (lineno, line) in text.lines().enumerate() {
        let at = |msg: String| Error::Input(format!("line {}: {msg}", lineno + 1));
        if let Some(c) = line.strip_prefix('#') {
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(c.trim()) {
                if let Some(x) = v.get("l_ref").and_then(|x| x.as_f64()) {
                    l_ref = x;
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header {
            if line.trim() != TAIL_HEADER {
                return Err(at(format!("expected header {TAIL_HEADER:?}")));
            }
            header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(at(format!("{} fields, expected 5", f.len())));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| at(format!("{s:?}: {e}")));
        let int = |s: &str| s.trim().parse::<usize>().map_err(|e| at(format!("{s:?}: {e}")));
        rows.push(TailRow {
            n: int(f[0])?,
            epsilon: num(f[1])?,
            p_hat: num(f[2])?,
            stderr: num(f[3])?,
            samples: int(f[4])?,
        });
    }
    if !header {
        return Err(Error::Input("missing CSV header".into()));
    }
    Ok(TailCurve { l_ref, rows })
}
