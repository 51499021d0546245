use std::fmt::Write as _;
use std::path::Path;

use super::{io_err, write_file, HarnessError};

/// Sorted values with ordinates `i / n`, `i = 1..=n`.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.into_iter().enumerate().map(|(i, v)| (v, (i + 1) as f64 / n)).collect()
}

pub fn cdf_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("sum_se,cdf\n");
    for (v, p) in points {
        let _ = writeln!(out, "{v:e},{p:e}");
    }
    out
}

/// The `sum_se` column of an episode or evaluation log.
pub fn read_sum_se(path: &Path) -> Result<Vec<f64>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |reason: String| HarnessError::Log { path: path.display().to_string(), reason };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let col = header
        .split(',')
        .position(|h| h == "sum_se")
        .ok_or_else(|| bad("no sum_se column".into()))?;
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            line.split(',')
                .nth(col)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| bad(format!("line {}: bad sum_se", i + 2)))
        })
        .collect()
}

/// Empirical CDF over the union of the `sum_se` values in `logs`, written to `out`.
pub fn emit_cdf(logs: &[impl AsRef<Path>], out: &Path) -> Result<Vec<(f64, f64)>, HarnessError> {
    if logs.is_empty() {
        return Err(HarnessError::Config("at least one log is required".into()));
    }
    let mut values = Vec::new();
    for log in logs {
        values.extend(read_sum_se(log.as_ref())?);
    }
    if values.is_empty() {
        return Err(HarnessError::Log { path: logs[0].as_ref().display().to_string(), reason: "no data rows".into() });
    }
    let points = empirical_cdf(&values);
    write_file(out, &cdf_csv(&points))?;
    Ok(points)
}
