//! File formats, the verification campaign, and the subcommands of the
//! `symball` binary.

pub mod campaign;
pub mod files;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::balls::{analyze_split, analyze_subspace, ProjectionAnalysis};
use crate::error::{Error, Result};
use crate::symplectic::{psd_check, random_symplectic, symplectic_spectrum, williamson};
use crate::Tolerance;
pub use campaign::{run_campaign, CampaignConfig, CampaignReport};
pub use files::MatrixFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Output of one subcommand: what to print and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: 0 }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Eleven decimals (fewer above 10), trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{:.*}", 11usize.saturating_sub(x.abs().log10().floor().max(0.0) as usize), x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn spectrum(input: &Path, format: Format) -> Result<Outcome> {
    let file = MatrixFile::read(input)?;
    let spec = symplectic_spectrum(&file.matrix, file.n)?;
    let check = psd_check(&file.matrix, file.n, Tolerance::default())?;
    let output = match format {
        Format::Text => {
            let values: Vec<String> = spec.values.iter().map(|&x| short(x)).collect();
            format!("{}; M+iJ PSD: {}\n", values.join(" "), yes_no(check.psd))
        }
        Format::Json => to_json(&json!({
            "n": file.n,
            "spectrum": spec.values,
            "psd": check.psd,
            "embedding_psd": check.embedding_psd,
            "embedding_min_eig": check.embedding_min_eig,
        }))?,
    };
    Ok(Outcome::ok(output))
}

pub fn williamson_cmd(input: &Path, format: Format) -> Result<Outcome> {
    let file = MatrixFile::read(input)?;
    let w = williamson(&file.matrix, file.n)?;
    let reconstruction = w.reconstruction_residual(&file.matrix);
    let symplectic = w.symplectic_residual();
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            let lambda: Vec<String> = w.lambda.iter().map(|&x| short(x)).collect();
            writeln!(out, "Lambda: {}", lambda.join(" ")).unwrap();
            writeln!(out, "S:").unwrap();
            for row in w.s.to_rows() {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:>14.6e}")).collect();
                writeln!(out, "  {}", cells.join(" ")).unwrap();
            }
            writeln!(out, "|S^T D S - M|_max = {reconstruction:.3e}").unwrap();
            writeln!(out, "|S^T J S - J|_max = {symplectic:.3e}").unwrap();
            out
        }
        Format::Json => to_json(&json!({
            "n": file.n,
            "S": w.s,
            "Lambda": w.lambda,
            "residuals": { "reconstruction": reconstruction, "symplectic": symplectic },
        }))?,
    };
    Ok(Outcome::ok(output))
}

pub fn project(input: &Path, n_a: Option<usize>, radius: f64, subspace: Option<&Path>, format: Format) -> Result<Outcome> {
    let file = MatrixFile::read(input)?;
    let analysis = match (subspace, n_a) {
        (Some(path), _) => {
            let v = files::read_subspace(path, Tolerance::default())?;
            if let Some(k) = n_a.filter(|&k| k != v.k()) {
                return Err(Error::DimensionMismatch(format!(
                    "--na {k} disagrees with the subspace dimension 2*{}",
                    v.k()
                )));
            }
            analyze_subspace(&file.matrix, &v, radius)?
        }
        (None, Some(k)) => analyze_split(&file.matrix, k, radius)?,
        (None, None) => return Err(Error::InvalidArgument("--na is required without --subspace".into())),
    };
    let output = match format {
        Format::Text => project_text(&analysis),
        Format::Json => to_json(&analysis)?,
    };
    Ok(Outcome::ok(output))
}

fn project_text(a: &ProjectionAnalysis) -> String {
    let mut out = String::new();
    let lambda: Vec<String> = a.lambda_a.iter().map(|&x| short(x)).collect();
    writeln!(out, "n = {}, n_A = {}, R = {}", a.n, a.n_a, a.radius).unwrap();
    writeln!(out, "Lambda_A: {}", lambda.join(" ")).unwrap();
    let class = if a.borderline {
        "borderline"
    } else if a.exact {
        "yes"
    } else {
        "no"
    };
    writeln!(out, "exact: {class} (coupling {:.3e})", a.exactness.coupling.value).unwrap();
    writeln!(out, "vol_projected = {}", short(a.vol_projected)).unwrap();
    writeln!(out, "vol_bound     = {}", short(a.vol_bound)).unwrap();
    out
}

pub fn verify(config: &CampaignConfig, format: Format) -> Result<Outcome> {
    let report = run_campaign(config)?;
    let code = if report.all_passed() { 0 } else { 1 };
    let output = match format {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let c = report.body.counts;
            let mut out = format!(
                "cases: {} run, {} passed, {} failed, {} borderline ({:.2} s)\n",
                c.run, c.passed, c.failed, c.borderline, report.wall_time_seconds
            );
            for case in report.body.cases.iter().filter(|c| !c.passed) {
                writeln!(out, "case {} (n = {}, n_A = {}): {}", case.index, case.n, case.n_a, case.failures.join("; "))
                    .unwrap();
            }
            out
        }
    };
    Ok(Outcome { output, code })
}

pub fn gen_sp(n: usize, spread: f64, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let s = random_symplectic(n, spread, seed)?;
    let file = MatrixFile::new(s)?;
    match out {
        Some(path) => {
            file.write(path)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(file.to_json())),
    }
}

#[cfg(test)]
mod tests {
    use super::short;

    #[test]
    fn short_numbers() {
        assert_eq!(short(2.0), "2");
        assert_eq!(short(0.5), "0.5");
        assert_eq!(short(1.0 / 2f64.sqrt()), "0.70710678119");
        assert_eq!(short(4.442882938158366), "4.44288293816");
        assert_eq!(short(1234.5), "1234.5");
    }
}
