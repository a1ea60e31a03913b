//! `polarint` command-line front end. JSON goes to standard output,
//! diagnostics to standard error. Exit codes: 0 success, 1 verification
//! failure, 2 usage or input error, 3 numeric error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polarint::matcore::{csv, polar_decompose, Matrix};
use polarint::measures::{gaussian_det_moment, Constants, Variant};
use polarint::montecarlo::{
    run_suite, verify_density_normalization, verify_det_moment, verify_gaussian_identity, verify_invariance,
    verify_pif, DetProposal, Execution, InvarianceKind, Probe, QuadratureGrid, Report, RunOptions,
    SuiteConfig, TestFnKind, TestFunction, Thresholds, DEFAULT_CHUNK_SIZE,
};
use polarint::sampling::{
    sample_gauss_symmetric, sample_ginibre, sample_posdef_part, sample_stiefel, RngStream,
};
use polarint::Error;

#[derive(Parser, Debug)]
#[command(
    name = "polarint",
    version,
    about = "Polar decomposition, Stiefel sampling and polar integration checks"
)]
struct Cli {
    /// Worker threads for Monte Carlo chunks (1 = sequential). Results do not
    /// depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Samples per chunk. Part of the reproducibility contract.
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK_SIZE)]
    chunk_size: u64,

    /// Include wall time in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timings: bool,

    #[arg(long, global = true, default_value_t = 4.0)]
    z_max: f64,

    #[arg(long, global = true, default_value_t = 0.02)]
    rel_max: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polar decomposition of a CSV matrix.
    Polar {
        #[arg(long)]
        input: PathBuf,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw random matrices as CSV blocks.
    Sample(SampleArgs),
    /// Closed-form constants for one (n, k).
    Constants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Gaussian determinant moment E|Δ_k|^{2r}, optionally with a Monte Carlo check.
    Moments {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "tilted", value_parser = parse_proposal)]
        proposal: DetProposal,
    },
    /// Run a verification experiment and print its report.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Ensemble {
    Ginibre,
    Stiefel,
    Posdef,
    Symmetric,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(value_enum)]
    ensemble: Ensemble,
    /// Rows (ignored for `symmetric`).
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Both sides of the polar integration formula.
    Pif {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "gaussian", value_parser = parse_testfn)]
        testfn: TestFnKind,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
        #[command(flatten)]
        mc: McArgs,
    },
    /// (2π)^{nk/2} against (2π)^{k²/2}·C·E|Δ_k|^{n−k}.
    GaussianIdentity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value = "tilted", value_parser = parse_proposal)]
        proposal: DetProposal,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Monte Carlo determinant moment against the closed form.
    DetMoment {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value = "tilted", value_parser = parse_proposal)]
        proposal: DetProposal,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Quadrature of the positive-part density (k = 1 or 2).
    Normalization {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Invariance and independence statistics.
    Invariance {
        #[arg(long, value_parser = parse_kind)]
        kind: InvarianceKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "householder", value_parser = parse_probe)]
        probe: Probe,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Run every experiment of a JSON config and print the report array.
    Suite {
        #[arg(long)]
        config: PathBuf,
        /// Also write the reports here (overrides the config's `output`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_proposal(s: &str) -> Result<DetProposal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_testfn(s: &str) -> Result<TestFnKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<InvarianceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_probe(s: &str) -> Result<Probe, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RankDeficient { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::NoConvergence { .. }
            | Error::Overflow { .. }
            | Error::Domain(_) => Failure::Numeric(e.to_string()),
            Error::Dimension(_) | Error::Parse(_) | Error::Config(_) => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PolarOutput {
    #[serde(rename = "O")]
    o: Vec<Vec<f64>>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    reconstruction_error: f64,
}

#[derive(Serialize)]
struct MomentsOutput {
    k: usize,
    r: f64,
    variant: Variant,
    log_moment: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    moment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Report>,
}

/// Standard output plus whether the run counts as passed.
struct Outcome {
    stdout: String,
    pass: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, pass: true }
    }

    fn report(r: &Report) -> Self {
        Self {
            stdout: to_json(r),
            pass: r.pass,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    for (name, v) in [("--z-max", cli.z_max), ("--rel-max", cli.rel_max)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    let opts = RunOptions {
        exec: Execution::from_threads(cli.threads),
        chunk_size: cli.chunk_size.max(1),
        thresholds: Thresholds {
            z_max: cli.z_max,
            rel_max: cli.rel_max,
        },
        timings: cli.timings,
    };

    match cli.command {
        Command::Polar { input, output } => {
            let x = csv::parse_matrix(&read(&input)?)?;
            let f = polar_decompose(&x)?;
            let out = to_json(&PolarOutput {
                o: f.frame.as_matrix().to_rows(),
                p: f.posdef.to_full().to_rows(),
                reconstruction_error: f.reconstruction_error(&x),
            });
            match output {
                Some(path) => {
                    write(&path, &out)?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(out)),
            }
        }
        Command::Sample(args) => {
            let mut rng = RngStream::new(args.seed, args.stream);
            let mut blocks: Vec<Matrix> = Vec::with_capacity(args.count);
            for _ in 0..args.count {
                let m = match args.ensemble {
                    Ensemble::Ginibre => {
                        if args.n == 0 || args.k == 0 {
                            return Err(Failure::Usage("--n and --k must be positive".into()));
                        }
                        sample_ginibre(args.n, args.k, &mut rng)
                    }
                    Ensemble::Stiefel => sample_stiefel(args.n, args.k, &mut rng)?.into_matrix(),
                    Ensemble::Posdef => sample_posdef_part(args.n, args.k, &mut rng)?.to_full(),
                    Ensemble::Symmetric => sample_gauss_symmetric(args.k, &mut rng)?.to_full(),
                };
                blocks.push(m);
            }
            Ok(Outcome::ok(csv::write_blocks(&blocks)))
        }
        Command::Constants { n, k, variant } => Ok(Outcome::ok(to_json(&Constants::new(n, k, variant)?))),
        Command::Moments {
            k,
            r,
            variant,
            mc,
            samples,
            seed,
            proposal,
        } => {
            let log_moment = gaussian_det_moment(k, r, variant)?;
            let report = if mc {
                Some(verify_det_moment(k, r, samples, seed, variant, proposal, &opts)?)
            } else {
                None
            };
            let pass = report.as_ref().is_none_or(|r| r.pass);
            let out = MomentsOutput {
                k,
                r,
                variant,
                log_moment,
                moment: Some(log_moment.exp()).filter(|m| m.is_normal()),
                report,
            };
            Ok(Outcome {
                stdout: to_json(&out),
                pass,
            })
        }
        Command::Verify(v) => verify(v, &opts),
    }
}

fn verify(v: Verify, opts: &RunOptions) -> Result<Outcome, Failure> {
    let report = match v {
        Verify::Pif {
            n,
            k,
            testfn,
            scale,
            variant,
            mc,
        } => verify_pif(
            &TestFunction::new(testfn, scale)?,
            n,
            k,
            mc.samples,
            mc.seed,
            variant,
            opts,
        )?,
        Verify::GaussianIdentity {
            n,
            k,
            variant,
            proposal,
            mc,
        } => verify_gaussian_identity(n, k, mc.samples, mc.seed, variant, proposal, opts)?,
        Verify::DetMoment {
            k,
            r,
            variant,
            proposal,
            mc,
        } => verify_det_moment(k, r, mc.samples, mc.seed, variant, proposal, opts)?,
        Verify::Normalization {
            n,
            k,
            step,
            p_max,
            tol,
        } => {
            let base = QuadratureGrid::default_for(n, k)?;
            let grid = QuadratureGrid {
                p_max: p_max.unwrap_or(base.p_max),
                step: step.unwrap_or(base.step),
                tol: tol.unwrap_or(base.tol),
            };
            verify_density_normalization(n, k, Some(grid), opts)?
        }
        Verify::Invariance {
            kind,
            n,
            k,
            probe,
            mc,
        } => verify_invariance(kind, n, k, mc.samples, mc.seed, probe, opts)?,
        Verify::Suite { config, output } => {
            let cfg = SuiteConfig::from_json(&read(&config)?)?;
            let reports = run_suite(&cfg, opts)?;
            let text = to_json(&reports);
            if let Some(path) = output.or_else(|| cfg.output.as_ref().map(PathBuf::from)) {
                write(&path, &text)?;
            }
            for r in reports.iter().filter(|r| !r.pass) {
                eprintln!(
                    "failed: {} {} estimate {} vs reference {}",
                    r.experiment_id,
                    serde_json::to_string(&r.parameters).unwrap_or_default(),
                    r.estimate,
                    r.reference_value
                );
            }
            return Ok(Outcome {
                pass: reports.iter().all(|r| r.pass),
                stdout: text,
            });
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(Outcome::report(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0, usage errors exit 2
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric error: {msg}");
            ExitCode::from(3)
        }
    }
}
