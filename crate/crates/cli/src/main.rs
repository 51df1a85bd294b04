mod cli;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use ternary_kloosterman::field::FieldContext;
use ternary_kloosterman::par::Execution;
use ternary_kloosterman::Error;

use cli::{Cli, Command, Format, GlobalOpts};

/// How a successful run ended; errors are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
}

impl Status {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Passed
        } else {
            Status::Failed
        }
    }
}

/// Resolved global options shared by every subcommand.
pub struct Session {
    pub field: FieldContext,
    pub exec: Execution,
    pub seed: u64,
    pub k: Option<u32>,
    format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Session {
    fn new(opts: GlobalOpts) -> Result<Self> {
        let n = opts.n.ok_or_else(|| usage("--n is required"))?;
        let mut builder = FieldContext::builder(n).max_degree(opts.max_degree);
        if let Some(text) = &opts.modulus {
            builder = builder.modulus(parse_modulus(text, n)?);
        }
        let field = builder.build()?;
        Ok(Session {
            field,
            exec: execution(thread_count(opts.parallel)?)?,
            seed: opts.seed,
            k: opts.k,
            format: opts.format,
            out: opts.out,
        })
    }

    /// The requested format, checked against what the subcommand can emit.
    pub fn format(&self, command: &str, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(usage(format!("{command} does not support --format {f:?}").to_lowercase()));
        }
        Ok(f)
    }

    pub fn emit(&self, bytes: &[u8]) -> Result<()> {
        output::emit(self.out.as_deref(), bytes)
    }
}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::Usage(msg.into()).into()
}

pub fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

/// Coefficient list `c0,..,c_{n-1}` or a packed index below `3^n`.
fn parse_modulus(text: &str, n: usize) -> Result<Vec<u8>> {
    let text = text.trim();
    if text.contains(',') {
        return text
            .split(',')
            .map(|c| match c.trim().parse::<u8>() {
                Ok(d @ 0..=2) => Ok(d),
                _ => Err(usage(format!("modulus coefficient {c:?} is not in {{0,1,2}}"))),
            })
            .collect();
    }
    let mut idx: u64 = text.parse().map_err(|_| usage(format!("cannot parse modulus {text:?}")))?;
    if n > 40 || idx >= 3u64.pow(n as u32) {
        return Err(usage(format!("packed modulus {text} is out of range for n = {n}")));
    }
    Ok((0..n)
        .map(|_| {
            let d = (idx % 3) as u8;
            idx /= 3;
            d
        })
        .collect())
}

/// The `--parallel` flag, else the environment default.
fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(cli::THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{} must be a thread count, got {v:?}", cli::THREADS_ENV))),
        Err(_) => Ok(None),
    }
}

#[cfg(feature = "parallel")]
fn execution(threads: Option<usize>) -> Result<Execution> {
    match threads {
        Some(1) => Ok(Execution::Sequential),
        Some(0) | None => Ok(Execution::Parallel),
        Some(t) => {
            rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
            Ok(Execution::Parallel)
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn execution(threads: Option<usize>) -> Result<Execution> {
    if threads.is_some_and(|t| t != 1) {
        warn("built without the `parallel` feature; running sequentially");
    }
    Ok(Execution::Sequential)
}

/// Exit status for an error: internal inconsistencies count as failed
/// checks (1), everything else as bad input or I/O (2).
fn failure_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Consistency(_)) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<Status> {
    let session = Session::new(cli.global)?;
    match cli.command {
        Command::Table(args) => commands::table::run(&session, &args),
        Command::Verify(args) => commands::verify::run(&session, &args),
        Command::Gauss(args) => commands::gauss::run(&session, &args),
        Command::Bench(args) => commands::bench::run(&session, &args),
        Command::FieldInfo => commands::field_info::run(&session),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Passed) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(failure_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_forms_agree() {
        assert_eq!(parse_modulus("1,2,0", 3).unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_modulus("7", 3).unwrap(), vec![1, 2, 0]);
        assert!(parse_modulus("27", 3).is_err());
        assert!(parse_modulus("1,3", 2).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(failure_code(&usage("x")), 2);
        assert_eq!(failure_code(&Error::Consistency("x".into()).into()), 1);
        assert_eq!(failure_code(&anyhow::anyhow!("io")), 2);
    }
}
