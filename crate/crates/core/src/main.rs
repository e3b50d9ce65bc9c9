//! `shapovalov`: command-line front end for the Verma module engine.
//!
//! Exit status is 0 exactly when every check of the command passes, 1 when a
//! check fails and 2 when the input cannot be used.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uqsl_shapovalov::qscalars::{parse_rational, parse_rational_list};
use uqsl_shapovalov::report::{self, Arrangement, Format, RunSettings};
use uqsl_shapovalov::suites::{Suite, SuiteConfig};
use uqsl_shapovalov::{Error, Rational, Result};

#[derive(Parser, Debug)]
#[command(
    name = "shapovalov",
    version,
    about = "Exact Shapovalov forms and dynamical bases for quantum sl(n+1) Verma modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Rank n of sl(n+1).
    #[arg(long = "n", global = true, default_value_t = 2)]
    n: usize,
    /// The deformation parameter, as NUM/DEN.
    #[arg(long, global = true, value_parser = parse_q)]
    q: Option<Rational>,
    /// The highest weight as z_i = q^{λ_i}, comma separated.
    #[arg(long, global = true, value_parser = parse_z)]
    z: Option<ZList>,
    /// Seed for random generic parameters (used when --z is absent, and for extra trials).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest total content degree (default 4 for n <= 2, 3 otherwise).
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Extra random specializations for `verify`.
    #[arg(long, global = true, default_value_t = 3)]
    trials: u32,
    /// Largest power in suites that raise a root vector to a power.
    #[arg(long, global = true, default_value_t = 3)]
    power: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Restrict `verify` to the named suites (repeatable or comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    suite: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cyclic pairing matrices of the dynamical bases, compared with the predicted norms.
    Gram,
    /// Run verification suites at the main and random specializations.
    Verify,
    /// Decide whether fhat_{kn}^m v is singular and compare with the criterion.
    Singular {
        k: usize,
        m: u32,
        /// Rearrange the weight so that the criterion holds.
        #[arg(long, value_enum, default_value_t = Arrangement::None)]
        arrange: Arrangement,
    },
    /// Check that the canonical element built from the dynamical bases inverts the Gram matrix.
    Inverse,
    /// Compare the original and diagram-flipped dynamical bases.
    FlipCompare,
}

fn parse_q(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A comma-separated list of rationals, kept as one argument value.
#[derive(Clone, Debug)]
struct ZList(Vec<Rational>);

fn parse_z(s: &str) -> std::result::Result<ZList, String> {
    parse_rational_list(s).map(ZList).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<report::Report> {
    let c = &cli.common;
    let settings = RunSettings {
        n: c.n,
        q: c.q.clone(),
        z: c.z.as_ref().map(|z| z.0.clone()),
        seed: c.seed,
        depth: c.depth,
        trials: c.trials,
    };
    let depth = settings.depth();
    match &cli.command {
        Command::Gram => report::gram(&settings.base_params()?, depth),
        Command::Verify => {
            let suites: Vec<Suite> = if c.suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                c.suite.iter().map(|s| s.parse()).collect::<Result<_>>()?
            };
            let cfg = SuiteConfig { depth, power: c.power };
            Ok(report::verify(&settings.all_params()?, &suites, &cfg))
        }
        Command::Singular { k, m, arrange } => report::singular(&settings.base_params()?, *k, *m, *arrange),
        Command::Inverse => report::inverse(&settings.base_params()?, depth),
        Command::FlipCompare => report::flip_compare(&settings.base_params()?, depth),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|r| Ok((r.render(cli.common.format)?, r.passed())));
    match outcome {
        Ok((text, passed)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            let usage = matches!(
                err,
                Error::Parse(_) | Error::InvalidParams(_) | Error::IndexOutOfRange { .. } | Error::BadRootRange { .. }
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
