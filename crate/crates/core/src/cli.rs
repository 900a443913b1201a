//! Command-line front end: wave construction, index tables, threshold
//! solving, spectral validation, pencil scans, and figure-data emission.
//!
//! Exit codes: 0 success, 1 usage/domain error, 2 validation-claim failure.
//! All numeric output carries 17 significant digits and is byte-identical
//! across runs for identical inputs.

use crate::acceptance;
use crate::error::{Error, Result};
use crate::indices;
use crate::pencil;
use crate::serialize::to_json_sig17;
use crate::spectral;
use crate::waves::{self, Model};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Boussinesq2,
    Boussinesq3,
    Kgz,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Boussinesq2 => Model::Boussinesq2,
            ModelArg::Boussinesq3 => Model::Boussinesq3,
            ModelArg::Kgz => Model::Kgz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Elliptic modulus in (0, 1); pair with --w.
    #[arg(long)]
    kappa: Option<f64>,
    /// Frame parameter w = 1 - c^2 > 0; pair with --kappa.
    #[arg(long)]
    w: Option<f64>,
    /// Fundamental period; pair with --c.
    #[arg(long)]
    period: Option<f64>,
    /// Traveling speed |c| < 1; pair with --period.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Grid size (even). Defaults to 256, escalated to 1024 for kappa > 0.95.
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "pwave",
    version,
    about = "Periodic traveling waves of the Boussinesq (p = 2, 3) and Klein-Gordon-Zakharov models: construction, closed-form stability indices, spectral cross-validation, and growing-mode scans"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Construct a wave; JSON emits the parameters, CSV the sampled profile.
    Wave(ParamArgs),
    /// Closed-form stability index report for one wave.
    Index(ParamArgs),
    /// Solve the threshold-period equation for kappa_T and c_T.
    Threshold {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        period: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigen-verify the discretized H (negative count, kernel, gap).
    Spectrum(ParamArgs),
    /// Quadratic-pencil growing-mode search: single speed with --c,
    /// otherwise a 21-point scan over the admissible speeds.
    Pencil {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        period: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        /// Grid size (even), default 128.
        #[arg(long)]
        grid_n: Option<usize>,
        /// Growth tolerance override (default 1e-6 * sqrt(||H||)).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit figure data (CSV kappa,value) and check the figure's claim;
    /// exits 2 when the claim fails. --format json emits the verdict only.
    Figures {
        #[arg(long)]
        id: u8,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// With --model: one validation report (closed vs numeric index plus
    /// kernel verification). Without: run all acceptance criteria and exit
    /// nonzero on any failure.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    period: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Validation record for one wave: eigen-verification plus the closed-vs-numeric index comparison.
#[derive(Debug, Serialize)]
struct ValidationReport {
    model: Model,
    kappa: f64,
    w: f64,
    n: usize,
    n_negative: usize,
    lowest_eig: f64,
    kernel_residual: f64,
    gap: f64,
    index_numeric: f64,
    index_closed: f64,
    rel_err: f64,
}

#[derive(Debug, Serialize)]
struct ThresholdReport {
    model: Model,
    period: f64,
    #[serde(rename = "kappa_T")]
    kappa_t: f64,
    #[serde(rename = "c_T")]
    c_t: f64,
}

#[derive(Debug, Serialize)]
struct ScanSummary {
    model: Model,
    #[serde(rename = "T")]
    period: f64,
    #[serde(rename = "c_T_closed")]
    c_t_closed: f64,
    #[serde(rename = "c_T_empirical")]
    c_t_empirical: Option<f64>,
    abs_diff: Option<f64>,
}

const ADMISSIBLE_RANGES: &str = "\
admissible parameters (exactly one pair: --kappa/--w or --period/--c):
  kappa in (0, 1 - 1e-12), w > 0, |c| < 1
  boussinesq2: periods T > 2*pi/sqrt(w); threshold-period range (2*pi, inf)
  boussinesq3: periods T > sqrt(2)*pi/sqrt(w); threshold-period range (sqrt(2)*pi, inf)
  kgz:         periods T > sqrt(2)*pi*sqrt(w); threshold-period range (2*pi/sqrt(3), inf)";

fn resolve_wave(
    model: Model,
    kappa: Option<f64>,
    w: Option<f64>,
    period: Option<f64>,
    c: Option<f64>,
) -> Result<waves::WaveParams> {
    match (kappa, w, period, c) {
        (Some(k), Some(w), None, None) => waves::build_wave(model, k, w),
        (None, None, Some(t), Some(c)) => waves::build_wave_from_period_speed(model, t, c),
        _ => Err(Error::Inconsistent(
            "pass exactly one parameter pair: --kappa with --w, or --period with --c".into(),
        )),
    }
}

fn default_grid_n(kappa: f64, requested: Option<usize>) -> usize {
    requested.unwrap_or(if kappa > 0.95 { 1024 } else { 256 })
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn default_scan_grid(model: Model, period: f64) -> Vec<f64> {
    let c_lo;
    let c_hi;
    match model {
        Model::Kgz => {
            let lim = std::f64::consts::SQRT_2 * std::f64::consts::PI;
            c_lo = if period >= lim {
                0.0
            } else {
                (1.0 - (period / lim).powi(2)).sqrt() * 1.02
            };
            c_hi = 0.9;
        }
        _ => {
            let inf = model.period_infimum(1.0);
            c_lo = 0.0;
            c_hi = (1.0 - (inf / period).powi(2)).max(0.0).sqrt() * 0.95;
        }
    }
    (0..21)
        .map(|i| c_lo + (c_hi - c_lo) * i as f64 / 20.0)
        .collect()
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Wave(a) => {
            let params = resolve_wave(a.model.into(), a.kappa, a.w, a.period, a.c)?;
            match a.format {
                FormatArg::Json => {
                    write_output(&a.out, &(to_json_sig17(&params) + "\n"))?;
                }
                FormatArg::Csv => {
                    let n = default_grid_n(params.kappa, a.grid_n);
                    let profile = waves::sample_profile(&params, n)?;
                    write_output(&a.out, &profile.to_csv())?;
                }
            }
            Ok(0)
        }
        Cmd::Index(a) => {
            let params = resolve_wave(a.model.into(), a.kappa, a.w, a.period, a.c)?;
            let report = indices::index_report(params.model, params.kappa, params.w)?;
            match a.format {
                FormatArg::Json => write_output(&a.out, &(to_json_sig17(&report) + "\n"))?,
                FormatArg::Csv => {
                    let mut s = String::from("model,kappa,w,index_closed,mu_star,c_star\n");
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        report.model.name(),
                        crate::serialize::fmt_sig17(report.kappa),
                        crate::serialize::fmt_sig17(report.w),
                        crate::serialize::fmt_sig17(report.index_closed),
                        report
                            .mu_star
                            .map(crate::serialize::fmt_sig17)
                            .unwrap_or_else(|| "inf".into()),
                        report
                            .c_star
                            .map(crate::serialize::fmt_sig17)
                            .unwrap_or_else(|| "none".into()),
                    ));
                    write_output(&a.out, &s)?;
                }
            }
            Ok(0)
        }
        Cmd::Threshold { model, period, out } => {
            let model: Model = model.into();
            let (kappa_t, c_t) = indices::kappa_star_for_period(model, period)?;
            let report = ThresholdReport {
                model,
                period,
                kappa_t,
                c_t,
            };
            write_output(&out, &(to_json_sig17(&report) + "\n"))?;
            Ok(0)
        }
        Cmd::Spectrum(a) => {
            let params = resolve_wave(a.model.into(), a.kappa, a.w, a.period, a.c)?;
            let n = default_grid_n(params.kappa, a.grid_n);
            let report = spectral::verify_kernel(params.model, &params, n)?;
            write_output(&a.out, &(to_json_sig17(&report) + "\n"))?;
            Ok(0)
        }
        Cmd::Pencil {
            model,
            period,
            c,
            grid_n,
            tol,
            format,
            out,
        } => {
            let model: Model = model.into();
            let n = grid_n.unwrap_or(128);
            match c {
                Some(c) => {
                    let verdict = pencil::classify_stability(model, period, c, n, tol)?;
                    write_output(&out, &(to_json_sig17(&verdict) + "\n"))?;
                    Ok(0)
                }
                None => {
                    let grid = default_scan_grid(model, period);
                    let scan = pencil::stability_scan(model, period, &grid, n)?;
                    let summary = ScanSummary {
                        model,
                        period,
                        c_t_closed: scan.c_t_closed,
                        c_t_empirical: scan.c_t_empirical,
                        abs_diff: scan.abs_diff,
                    };
                    match format {
                        FormatArg::Csv => {
                            write_output(&out, &scan.to_csv())?;
                            eprintln!("{}", to_json_sig17(&summary));
                        }
                        FormatArg::Json => {
                            write_output(&out, &(to_json_sig17(&summary) + "\n"))?;
                        }
                    }
                    Ok(0)
                }
            }
        }
        Cmd::Figures { id, format, out } => {
            let scan = indices::figure_scan(id, None)?;
            match format {
                FormatArg::Csv => {
                    write_output(&out, &scan.to_csv())?;
                    eprintln!("{}", to_json_sig17(&scan));
                }
                FormatArg::Json => {
                    write_output(&out, &(to_json_sig17(&scan) + "\n"))?;
                }
            }
            Ok(if scan.holds { 0 } else { 2 })
        }
        Cmd::Validate(a) => match a.model {
            Some(model) => {
                let params = resolve_wave(model.into(), a.kappa, a.w, a.period, a.c)?;
                let n = default_grid_n(params.kappa, a.grid_n);
                let tol = a.tol.unwrap_or(1e-4);
                let eigen_report = spectral::verify_kernel(params.model, &params, n)?;
                let index_numeric = spectral::index_numeric(params.model, &params, n)?;
                let index_closed = indices::closed_index(params.model, params.kappa, params.w)?;
                let rel_err = (index_closed - index_numeric).abs() / index_numeric.abs();
                let report = ValidationReport {
                    model: params.model,
                    kappa: params.kappa,
                    w: params.w,
                    n,
                    n_negative: eigen_report.n_negative,
                    lowest_eig: eigen_report.lowest_eigenvalue,
                    kernel_residual: eigen_report.kernel_residual,
                    gap: eigen_report.spectral_gap_sigma,
                    index_numeric,
                    index_closed,
                    rel_err,
                };
                write_output(&a.out, &(to_json_sig17(&report) + "\n"))?;
                Ok(if rel_err <= tol && eigen_report.n_negative == 1 {
                    0
                } else {
                    2
                })
            }
            None => {
                let outcomes = acceptance::run_all();
                let mut all = true;
                let mut text = String::new();
                for o in &outcomes {
                    text.push_str(&o.line());
                    text.push('\n');
                    all &= o.passed;
                }
                write_output(&a.out, &text)?;
                Ok(if all { 0 } else { 2 })
            }
        },
    }
}

/// Run the CLI on `argv` (including the program name); returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap already renders helpful text; --help/--version land here too.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{ADMISSIBLE_RANGES}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("pwave").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run_args(&["wave", "--model", "boussinesq3"]), 1);
        assert_eq!(
            run_args(&["wave", "--model", "nosuch", "--kappa", "0.5", "--w", "1"]),
            1
        );
        assert_eq!(
            run_args(&["wave", "--model", "kgz", "--kappa", "0.5", "--w", "1", "--c", "0.3"]),
            1
        );
        assert_eq!(
            run_args(&["threshold", "--model", "boussinesq3", "--period", "1.0"]),
            1
        );
    }

    #[test]
    fn mixed_pair_rejected() {
        let bad = resolve_wave(Model::Kgz, Some(0.5), None, Some(5.0), None);
        assert!(bad.is_err());
        let bad = resolve_wave(Model::Kgz, None, None, None, None);
        assert!(bad.is_err());
    }

    #[test]
    fn grid_defaults_escalate_near_one() {
        assert_eq!(default_grid_n(0.5, None), 256);
        assert_eq!(default_grid_n(0.96, None), 1024);
        assert_eq!(default_grid_n(0.96, Some(64)), 64);
    }

    #[test]
    fn scan_grid_inside_admissible_range() {
        for (model, period) in [
            (Model::Boussinesq3, 10.0),
            (Model::Boussinesq2, 8.0),
            (Model::Kgz, 4.8),
            (Model::Kgz, 3.0),
        ] {
            for c in default_scan_grid(model, period) {
                assert!(
                    waves::build_wave_from_period_speed(model, period, c).is_ok(),
                    "{model:?} T={period} c={c}"
                );
            }
        }
    }
}
