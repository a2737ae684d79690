use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use phasequant::coherent::{
    k12_moments, k3_moments, required_dim, trig_expectation, trig_second_moment, uncertainty_check, CoherentSpec,
};
use phasequant::irrep::{build_operator, IrrepParams, OperatorKind};
use phasequant::reproduce::{self, operator_csv, operator_json, spectrum_csv, with_schema, Claim, ReproduceConfig};
use phasequant::spectral::{cos_spectrum, threshold_scan};
use phasequant::two_mode::{dirac_sqrt_check, irrep_decomposition, sector_equivalence, sector_table};
use phasequant::Error;

/// Phase and modulus observables in the SU(1,1) positive discrete series.
#[derive(Parser)]
#[command(name = "phasequant", version)]
struct Cli {
    /// TOML file of `key = value` settings for `reproduce`.
    #[arg(long, global = true, env = "PHASEQUANT_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the claim checks and write report.json plus one CSV per claim.
    Reproduce {
        #[arg(long, env = "PHASEQUANT_OUT", default_value = "results")]
        out: PathBuf,
        /// Claim names or numbers; repeat or separate with commas.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        spectrum_dim: Option<usize>,
        #[arg(long)]
        irrep_dim: Option<usize>,
        #[arg(long)]
        scan_tol: Option<f64>,
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long)]
        rho_points: Option<usize>,
    },
    /// Locate the smallest k for which sup_rho g/I <= 2.
    ScanK {
        #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of the truncated cos-phase operator.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value_t = 500)]
        dim: usize,
        /// Phase angle of the representation label omega.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moments of a coherent state z = rho e^{i alpha}.
    Coherent {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Irrep decomposition of the two-mode oscillator truncated at m quanta per mode.
    TwoMode {
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nonzero matrix entries of a truncated operator.
    DumpOperator {
        #[arg(long)]
        kind: OperatorKind,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
    ClaimsFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Mismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
    }
}

#[derive(Serialize)]
struct SpectrumOut {
    k: f64,
    omega_angle: f64,
    dim: usize,
    min: f64,
    max: f64,
    max_residual: f64,
    eigenvalues: Vec<f64>,
}

#[derive(Serialize)]
struct CoherentOut {
    spec: CoherentSpec,
    required_dim: usize,
    k3: phasequant::coherent::K3Moments,
    k12: phasequant::coherent::K12Moments,
    uncertainty: phasequant::coherent::UncertaintyCheck,
    trig: phasequant::coherent::TrigExpectation,
    trig_second: phasequant::coherent::TrigSecondMoment,
}

#[derive(Serialize)]
struct TwoModeOut {
    m: usize,
    sectors: Vec<phasequant::two_mode::SectorSummary>,
    sector_vs_irrep_defect: f64,
    dirac: phasequant::two_mode::DiracCheck,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Reproduce { out, only, spectrum_dim, irrep_dim, scan_tol, rho_max, rho_points } => {
            let mut cfg = match &cli.config {
                Some(p) => ReproduceConfig::load(p)?,
                None => ReproduceConfig::default(),
            };
            cfg.spectrum_dim = spectrum_dim.unwrap_or(cfg.spectrum_dim);
            cfg.irrep_dim = irrep_dim.unwrap_or(cfg.irrep_dim);
            cfg.scan_tol = scan_tol.unwrap_or(cfg.scan_tol);
            cfg.rho_max = rho_max.unwrap_or(cfg.rho_max);
            cfg.rho_points = rho_points.unwrap_or(cfg.rho_points);
            let claims = only.iter().map(|s| s.trim().parse::<Claim>()).collect::<Result<Vec<_>, _>>()?;
            let report = reproduce::run(&claims, &cfg);
            reproduce::write_report(&report, &out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
            for c in &report.claims {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status} {:>2} {:<15} {:8.3}s  {}", c.id, c.name, c.seconds, c.description);
                if let Some(e) = &c.error {
                    println!("       error: {e}");
                }
                for chk in c.failed_checks() {
                    println!("       {}: {:.6e} (need {})", chk.label, chk.value, chk.requirement);
                }
            }
            if report.all_passed {
                Ok(())
            } else {
                Err(Failure::ClaimsFailed)
            }
        }
        Command::ScanK { lo, hi, tol, out } => {
            let cfg = match &cli.config {
                Some(p) => ReproduceConfig::load(p)?,
                None => ReproduceConfig::default(),
            };
            let report = threshold_scan(lo, hi, tol, &cfg.scan())?;
            emit(&with_schema(&report), out.as_deref())
        }
        Command::Spectrum { k, dim, omega, format, out } => {
            let params = IrrepParams::with_omega(k, omega)?;
            let s = cos_spectrum(params, dim)?;
            let text = match format {
                Format::Csv => spectrum_csv(&s.eigenvalues),
                Format::Json => with_schema(&SpectrumOut {
                    k,
                    omega_angle: omega,
                    dim,
                    min: s.min(),
                    max: s.max(),
                    max_residual: s.max_residual,
                    eigenvalues: s.eigenvalues.clone(),
                }),
            };
            emit(&text, out.as_deref())
        }
        Command::Coherent { k, rho, alpha, out } => {
            let spec = CoherentSpec::from_polar(IrrepParams::new(k)?, rho, alpha)?;
            let dim = required_dim(&spec)?;
            let body = CoherentOut {
                spec,
                required_dim: dim,
                k3: k3_moments(&spec)?,
                k12: k12_moments(&spec)?,
                uncertainty: uncertainty_check(&spec)?,
                trig: trig_expectation(&spec)?,
                trig_second: trig_second_moment(&spec, dim + 2)?,
            };
            emit(&with_schema(&body), out.as_deref())
        }
        Command::TwoMode { m, out } => {
            let sectors = irrep_decomposition(m)?;
            let body = TwoModeOut {
                m,
                sectors: sector_table(&sectors),
                sector_vs_irrep_defect: sector_equivalence(m)?,
                dirac: dirac_sqrt_check(m.max(3))?,
            };
            emit(&with_schema(&body), out.as_deref())
        }
        Command::DumpOperator { kind, k, dim, omega, format, out } => {
            let op = build_operator(kind, IrrepParams::with_omega(k, omega)?, dim)?;
            let text = match format {
                Format::Csv => operator_csv(&op),
                Format::Json => operator_json(&op),
            };
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ClaimsFailed) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}
