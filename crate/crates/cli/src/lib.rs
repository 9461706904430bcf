//! Command-line frontend for `weylfold`.
//!
//! Exit codes: 0 on success, 1 when a `verify` check fails or an internal
//! consistency check trips, 2 on invalid input, 3 when an enumeration
//! exceeds the cap.

pub mod commands;
pub mod job;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use weylfold::chambers::DEFAULT_HYPERPLANE_LIMIT;
use weylfold::galois::parse_strata;
use weylfold::weyl::DEFAULT_CAP;
use weylfold::Error;

use crate::commands::Report;
use crate::job::{Job, JobSpec};
use crate::verify::Suite;

pub const CAP_ENV: &str = "WEYLFOLD_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "weylfold", version, about = "Folded Weyl groups, normalizer quotients and chamber geometry")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Enumeration cap on group orders (overrides WEYLFOLD_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Read the job from a JSON file instead of the command line.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Record in the report that the Springer map is taken to be birational.
    #[arg(long, global = true)]
    assume_birational: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots, simple roots and Cartan matrix of a type.
    Rootsys {
        #[arg(long = "type")]
        ty: String,
    },
    /// Fold an ADE type by the automorphism selected from r_bar.
    Fold {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        rbar: usize,
    },
    /// The quotient N_W(L)/W_L and its action on k(p).
    Normalizer {
        #[arg(long = "type")]
        ty: String,
        /// Comma-separated Bourbaki labels, e.g. 1,3. Empty for the Borel case.
        #[arg(long, default_value = "")]
        levi: String,
    },
    /// Chambers, walls, fundamental domain and galleries on k(p).
    Chambers {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long, default_value_t = DEFAULT_HYPERPLANE_LIMIT)]
        max_hyperplanes: usize,
    },
    /// Product of folded Weyl groups over strata such as "A3:2,D4:3".
    Galois {
        #[arg(long, allow_hyphen_values = true)]
        strata: String,
    },
    /// Compare the folded stratum of a non-simply-laced type with its Weyl group.
    Example29 {
        #[arg(long)]
        g: String,
    },
    /// Run a self-check battery.
    Verify {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
    },
}

/// Parses a comma-separated list of labels.
pub fn parse_levi(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::InvalidSpec(format!("bad levi index {p:?}")))
        })
        .collect()
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::InvalidSpec(_)
        | Error::DimensionMismatch { .. }
        | Error::NotSimplyLaced { .. }
        | Error::InadmissibleRBar { .. }
        | Error::ZeroDimensional
        | Error::TooManyHyperplanes { .. }
        | Error::IndexOutOfRange { .. }
        | Error::NotARoot
        | Error::Overflow(_) => EXIT_INVALID,
        Error::NotNormalized
        | Error::NotGenerated { .. }
        | Error::UnrecognizedGraph(_)
        | Error::OrbitMismatch
        | Error::NotReflectionGroup
        | Error::NoPath
        | Error::NotInGroup => EXIT_FAILURE,
    }
}

struct Options {
    format: Format,
    cap: usize,
    birational: bool,
}

fn env_cap() -> Result<Option<usize>, String> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{CAP_ENV}={v:?} is not a positive integer")),
        Err(_) => Ok(None),
    }
}

fn job_from_command(cmd: Command) -> Result<Job, Error> {
    Ok(match cmd {
        Command::Rootsys { ty } => Job::Rootsys { ty },
        Command::Fold { ty, rbar } => Job::Fold { ty, r_bar: rbar },
        Command::Normalizer { ty, levi } => Job::Normalizer {
            ty,
            levi: parse_levi(&levi)?,
        },
        Command::Chambers {
            ty,
            levi,
            max_hyperplanes,
        } => Job::Chambers {
            ty,
            levi: parse_levi(&levi)?,
            max_hyperplanes,
        },
        Command::Galois { strata } => Job::Galois {
            strata: parse_strata(&strata)?,
        },
        Command::Example29 { g } => Job::Example29 { g },
        Command::Verify { suite } => Job::Verify { suite: suite.parse()? },
    })
}

fn dispatch(job: &Job, opts: &Options) -> Result<Report, Error> {
    match job {
        Job::Rootsys { ty } => commands::rootsys(ty),
        Job::Fold { ty, r_bar } => commands::fold(ty, *r_bar, opts.cap),
        Job::Normalizer { ty, levi } => commands::normalizer(ty, levi, opts.cap, opts.birational),
        Job::Chambers {
            ty,
            levi,
            max_hyperplanes,
        } => commands::chambers(ty, levi, *max_hyperplanes, opts.cap, opts.birational),
        Job::Galois { strata } => commands::galois(strata, opts.cap),
        Job::Example29 { g } => commands::example29(g, opts.cap),
        Job::Verify { suite } => Ok(commands::verify(*suite, opts.cap)),
    }
}

/// Renders a report in the canonical JSON form: sorted keys, two-space
/// indentation, trailing newline.
pub fn render_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };

    let fail = |err: &mut dyn Write, msg: &str, code: i32| {
        let _ = writeln!(err, "error: {msg}");
        code
    };

    let env = match env_cap() {
        Ok(c) => c,
        Err(msg) => return fail(err, &msg, EXIT_INVALID),
    };

    let (job, spec_format, spec_cap, spec_birational) = match (&cli.spec, cli.command) {
        (Some(_), Some(_)) => {
            return fail(err, "give either a subcommand or --spec, not both", EXIT_INVALID);
        }
        (None, None) => {
            return fail(err, "no subcommand given (try --help)", EXIT_INVALID);
        }
        (None, Some(cmd)) => match job_from_command(cmd) {
            Ok(j) => (j, None, None, None),
            Err(e) => return fail(err, &e.to_string(), exit_code(&e)),
        },
        (Some(path), None) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(err, &format!("cannot read {}: {e}", path.display()), EXIT_INVALID),
            };
            let spec = match JobSpec::parse(&text) {
                Ok(s) => s,
                Err(msg) => return fail(err, &format!("spec file {}: {msg}", path.display()), EXIT_INVALID),
            };
            let format = spec.output_format;
            let cap = spec.parameters.cap;
            let birational = spec.parameters.assume_birational;
            match spec.into_job() {
                Ok(j) => (j, format, cap, birational),
                Err(msg) => return fail(err, &format!("spec file {}: {msg}", path.display()), EXIT_INVALID),
            }
        }
    };

    let cap = cli.cap.or(spec_cap).or(env).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        return fail(err, "the cap must be positive", EXIT_INVALID);
    }
    let opts = Options {
        format: cli.format.or(spec_format).unwrap_or(Format::Text),
        cap,
        birational: cli.assume_birational || spec_birational.unwrap_or(false),
    };

    let report = match dispatch(&job, &opts) {
        Ok(r) => r,
        Err(e) => return fail(err, &e.to_string(), exit_code(&e)),
    };
    let rendered = match opts.format {
        Format::Json => render_json(&report.json),
        Format::Text => report.text.clone(),
    };
    if out.write_all(rendered.as_bytes()).is_err() {
        return EXIT_FAILURE;
    }
    match report.failed_check {
        Some(name) => fail(err, &format!("check failed: {name}"), EXIT_FAILURE),
        None => EXIT_OK,
    }
}
