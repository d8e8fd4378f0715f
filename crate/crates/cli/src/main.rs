mod args;
mod commands;
mod job;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

use args::{Cli, Command, Format, GlobalArgs};
use commands::{Ctx, Outcome};
use job::JobError;

const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

/// A count disagreed with the oracle, or a checked identity failed.
#[derive(Debug)]
struct VerifyFailure(String);

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for VerifyFailure {}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if err.downcast_ref::<VerifyFailure>().is_some() {
        return ("verify-failed", EXIT_INVARIANT);
    }
    if err.downcast_ref::<JobError>().is_some() {
        return ("usage", EXIT_USAGE);
    }
    match err.downcast_ref::<branchcones::Error>() {
        Some(branchcones::Error::ResourceLimit { .. }) | Some(branchcones::Error::Overflow(_)) => {
            ("resource-limit", EXIT_CAP)
        }
        Some(branchcones::Error::BoundednessUndecided { .. }) => ("internal", EXIT_INVARIANT),
        Some(branchcones::Error::Unsupported(_)) => ("unsupported", EXIT_USAGE),
        Some(_) => ("invalid-argument", EXIT_USAGE),
        None => ("io", 1),
    }
}

fn emit_error(kind: &str, message: &str) {
    let obj = json!({ "error": { "kind": kind, "message": message } });
    let _ = writeln!(std::io::stderr(), "{obj}");
}

fn write_result(global: &GlobalArgs, outcome: &Outcome) -> Result<()> {
    let mut text = match global.format {
        Format::Json => serde_json::to_string(&outcome.value)?,
        Format::Pretty => serde_json::to_string_pretty(&outcome.value)?,
    };
    text.push('\n');
    match &global.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (global, outcome) = match &cli.command {
        Command::Run(r) => {
            let job_file = job::load(&r.job)?;
            let global = job_file.global();
            let ctx = Ctx::new(global.clone())?;
            (global, job_file.run(&ctx)?)
        }
        command => {
            let ctx = Ctx::new(cli.global.clone())?;
            let outcome = match command {
                Command::Dim(a) => commands::dim(&ctx, a)?,
                Command::Lr(a) => commands::lr(&ctx, a)?,
                Command::Branch(a) => commands::branch(&ctx, a)?,
                Command::Invariant(a) => commands::invariant(&ctx, a)?,
                Command::Bz(a) => commands::bz(&ctx, a)?,
                Command::ConeExport(a) => commands::cone_export(&ctx, a)?,
                Command::Itrails(a) => commands::itrails(&ctx, a)?,
                Command::MapsCheck(a) => commands::maps_check(&ctx, a)?,
                Command::Run(_) => unreachable!("handled above"),
            };
            (cli.global.clone(), outcome)
        }
    };
    write_result(&global, &outcome)?;
    match outcome.disagreement {
        Some(msg) if global.verify || outcome.always_enforced => Err(VerifyFailure(msg).into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit_error("usage", e.to_string().trim_end());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            emit_error(kind, &format!("{e:#}"));
            ExitCode::from(code)
        }
    }
}
