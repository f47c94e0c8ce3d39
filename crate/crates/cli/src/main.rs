use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nematic_core::config::{ExperimentConfig, Mode, TwinStart};
use nematic_core::experiment::{
    decompose_experiment, run_experiment, run_verification, twin_experiment, write_verification, FieldSel, Lemma,
    VerifyOutcome,
};
use nematic_core::Error;

/// Exit status when a verification or inequality check fails.
const VERIFICATION_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "nematic", version, about = "Ericksen-Leslie solver and Littlewood-Paley verification harness")]
struct Cli {
    /// Sectioned key=value configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides [output] dir.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for the initial data and the verification ensembles.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write trace.csv.
    Run,
    /// Integrate two trajectories and write twin.csv and master.csv.
    Twin,
    /// Run the inequality harness and write verify.csv / osgood.csv.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Lemma::NAMES))]
        lemma: String,
        /// Grid sizes to check; defaults to [grid] n.
        #[arg(long, value_delimiter = ',', value_name = "N,..")]
        sizes: Vec<usize>,
    },
    /// Dyadic block norms of one field; writes decompose.csv.
    Decompose {
        /// LCSF snapshot to read; defaults to the configured initial data.
        #[arg(long, value_name = "PATH")]
        snapshot: Option<PathBuf>,
        /// u, d, u1, u2, d1 or d2.
        #[arg(long, default_value = "d1")]
        field: String,
    },
}

fn mode(c: &Command) -> Mode {
    match c {
        Command::Run => Mode::Run,
        Command::Twin => Mode::Twin,
        Command::Verify { .. } => Mode::Verify,
        Command::Decompose { .. } => Mode::Decompose,
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.override_seed(s);
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    cfg.validate_for(mode(&cli.command))?;
    Ok(cfg)
}

fn print_verification(o: &VerifyOutcome) {
    for (n, r) in &o.ratios {
        println!(
            "{:<4} N={n:<4} {:<36} max {:.3e}  spread {:.2}  cap {}",
            if r.verdict { "PASS" } else { "FAIL" },
            r.lemma,
            r.max_ratio,
            r.spread,
            r.cap
        );
    }
    for (n, r) in &o.identities {
        println!(
            "{:<4} N={n:<4} {:<36} max relative residual {:.3e} (tol {:.0e})",
            if r.verdict { "PASS" } else { "FAIL" },
            r.lemma,
            r.max_relative,
            r.tol
        );
    }
    if let Some(os) = &o.osgood {
        println!(
            "{:<4} osgood: I(eps) for {} at eps = {:e}: {:.6}, increments {:?}",
            if os.verdict { "PASS" } else { "FAIL" },
            os.paper.modulus.name(),
            os.paper.eps.last().copied().unwrap_or(f64::NAN),
            os.paper.integrals.last().copied().unwrap_or(f64::NAN),
            os.paper.increments
        );
        for c in &os.controls {
            println!(
                "     control {}: I = {:.12}, last increment {:.3e}",
                c.modulus.name(),
                c.integrals.last().copied().unwrap_or(f64::NAN),
                c.last_increment()
            );
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let cfg = load_config(cli)?;
    let out = cfg.output.dir.clone();
    let quiet = cli.quiet;
    match &cli.command {
        Command::Run => {
            let r = run_experiment(&cfg, &out)?;
            if !quiet {
                println!(
                    "run: {} steps to t = {}, E(0) = {:.6e}, max energy residual {:.3e}, max div residual {:.3e}",
                    r.summary.steps,
                    r.final_state.t,
                    r.summary.initial_energy,
                    r.summary.max_residual(),
                    r.summary.max_div_residual
                );
                println!("wrote {}", out.join("trace.csv").display());
            }
            Ok(true)
        }
        Command::Twin => {
            let r = twin_experiment(&cfg, &out)?;
            if !quiet {
                let start = match cfg.perturbation {
                    Some(TwinStart::Perturbed(p)) => format!("delta = {:e}", p.delta),
                    _ => "identical data".into(),
                };
                println!(
                    "twin ({start}): Phi(0) = {:.6e}, max Phi = {:.6e}",
                    r.records.first().map_or(0.0, |x| x.phi),
                    r.max_phi
                );
                println!(
                    "master inequality ({}, gamma = {}): holds = {}, C_fit = {:.6e}, max violation {:.3e}{}",
                    cfg.osgood.modulus.name(),
                    cfg.osgood.gamma,
                    r.report.holds,
                    r.report.c_fit,
                    r.report.max_violation,
                    r.report
                        .first_violation
                        .map_or(String::new(), |i| format!(", first violation at sample {i}"))
                );
                println!("wrote {}", out.join("twin.csv").display());
            }
            Ok(r.report.holds)
        }
        Command::Verify { lemma, sizes } => {
            let lemma: Lemma = lemma.parse()?;
            let sizes = if sizes.is_empty() { vec![cfg.grid.n_modes] } else { sizes.clone() };
            let o = run_verification(&cfg, lemma, &sizes)?;
            write_verification(&o, &out)?;
            if !quiet {
                print_verification(&o);
            }
            Ok(o.passed())
        }
        Command::Decompose { snapshot, field } => {
            let field: FieldSel = field.parse()?;
            let rows = decompose_experiment(&cfg, snapshot.as_deref(), field, &out)?;
            if !quiet {
                for (q, a, b) in rows {
                    println!("q = {q:>2}  {a:.6e}  {b:.6e}");
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            if !cli.quiet {
                eprintln!("verification failed");
            }
            ExitCode::from(VERIFICATION_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
