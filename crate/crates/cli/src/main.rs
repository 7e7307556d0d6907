//! `tau2`: run numerical verification suites for the tau2 / cyclic XXZ /
//! chiral Potts operator family and emit machine-readable reports.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tau2_cli::config::{Config, Overrides};
use tau2_cli::report::{spectra_csv, write_spectra_csv, Report};
use tau2_cli::suites::{self, SuiteId};
use tau2_cli::{catalogue, catalogue_json};

#[derive(Parser)]
#[command(
    name = "tau2",
    about = "Numerical verification of the tau2 / cyclic XXZ / chiral Potts operator identities",
    version
)]
struct Cli {
    /// List the suite catalogue and exit.
    #[arg(long)]
    list: bool,
    /// With --list: emit the catalogue as JSON.
    #[arg(long)]
    json: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute verification suites and emit a report.
    Run(Box<RunArgs>),
    /// List the suite catalogue.
    List {
        /// Emit the catalogue as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run (repeatable). Overrides the config file's list.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Master seed for all random draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Default tolerance for the driver-assembled checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Verify eigenpair residuals in the spectra suite.
    #[arg(long)]
    eigen: bool,
    /// Write the JSON report here.
    #[arg(long = "out-json")]
    out_json: Option<PathBuf>,
    /// Write the spectra CSV here (default: stdout when spectra runs).
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
    /// Clock order N.
    #[arg(long = "N")]
    base: Option<usize>,
    /// Order n of the finer root: N (odd regime) or 2N (doubled regime).
    #[arg(long = "n")]
    ext: Option<usize>,
    /// Sign of the doubled-regime root: plus or minus.
    #[arg(long)]
    sign: Option<String>,
    /// Number of chain sites L.
    #[arg(long = "L")]
    sites: Option<usize>,
    /// Boundary twist exponent for the clock-space family.
    #[arg(long)]
    r: Option<i64>,
    /// Boundary twist exponent r' for the extended families.
    #[arg(long = "rp")]
    r_prime: Option<i64>,
    /// Charge sector offset used where a sector choice is needed.
    #[arg(long = "Q")]
    q_charge: Option<i64>,
    /// Spectra family (repeatable): tau2, t2, t2dag, xxz.
    #[arg(long = "family")]
    families: Vec<String>,
    /// Spectral point t for the spectra suite, as "re+imi".
    #[arg(long)]
    t: Option<String>,
    /// Spectral point s for the six-vertex family, as "re+imi".
    #[arg(long)]
    s: Option<String>,
    /// Modulus k' of the rapidity curve, as "re+imi".
    #[arg(long = "k-prime")]
    k_prime: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            suites: self.suites.clone(),
            seed: self.seed,
            tol: self.tol,
            eigen: self.eigen,
            out_json: self.out_json.clone(),
            out_csv: self.out_csv.clone(),
            base: self.base,
            ext: self.ext,
            sign: self.sign.clone(),
            sites: self.sites,
            r: self.r,
            r_prime: self.r_prime,
            q_charge: self.q_charge,
            families: self.families.clone(),
            t: self.t.clone(),
            s: self.s.clone(),
            k_prime: self.k_prime.clone(),
        }
    }
}

fn print_catalogue(json: bool) {
    if json {
        print!("{}", catalogue_json());
    } else {
        let entries = catalogue();
        for e in &entries {
            println!("{:<18} {}", e.id, e.summary);
        }
        println!("{} suites", entries.len());
    }
}

fn run_cmd(args: &RunArgs) -> ExitCode {
    let cfg = match Config::resolve(args.config.as_deref(), &args.overrides()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };

    if cfg.suites.is_empty() {
        println!("no suites selected; nothing to do");
        let report = Report::new(&cfg, Vec::new(), Vec::new());
        if let Some(path) = &cfg.out_json {
            if let Err(e) = report.write_json(path) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
        if let Some(path) = &cfg.out_csv {
            if let Err(e) = write_spectra_csv(&[], path) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
        return ExitCode::SUCCESS;
    }

    let (report, rows, timings) = match suites::run_all(&cfg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if report.print_console(&mut out).is_err() {
        return ExitCode::from(2);
    }
    for (name, d) in &timings {
        eprintln!("suite {name}: {:.3} s", d.as_secs_f64());
    }

    if let Some(path) = &cfg.out_json {
        if let Err(e) = report.write_json(path) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    let spectra_ran = cfg.suites.contains(&SuiteId::Spectra);
    match (&cfg.out_csv, spectra_ran) {
        (Some(path), _) => {
            if let Err(e) = write_spectra_csv(&rows, path) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
        (None, true) => match spectra_csv(&rows) {
            Ok(text) => {
                if write!(out, "{text}").is_err() {
                    return ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        },
        (None, false) => {}
    }

    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        print_catalogue(cli.json);
        return ExitCode::SUCCESS;
    }
    match &cli.cmd {
        Some(Cmd::List { json }) => {
            print_catalogue(*json);
            ExitCode::SUCCESS
        }
        Some(Cmd::Run(args)) => run_cmd(args),
        None => {
            eprintln!("error: nothing to do; use `tau2 run`, `tau2 list`, or `tau2 --list`");
            ExitCode::from(2)
        }
    }
}
