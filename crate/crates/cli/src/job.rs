//! JSON job files for `branchcones run`.
//!
//! ```json
//! {
//!   "command": "lr",
//!   "args": { "rank": 2, "lambda": [1, 1], "beta": [1, 1], "mu": [1, 1], "word": "default" },
//!   "variant": { "lambda-bound": "upper" },
//!   "verify": true,
//!   "threads": 2,
//!   "output": "result.json",
//!   "format": "pretty"
//! }
//! ```

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use branchcones::cones::ConeVariant;

use crate::args::{Format, GlobalArgs};
use crate::commands::{self, Ctx, Outcome};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Job {
    pub command: String,
    #[serde(default)]
    pub args: Option<Value>,
    #[serde(default)]
    pub variant: ConeVariant,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// A malformed job file; reported as a usage error.
#[derive(Debug)]
pub struct JobError(pub String);

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for JobError {}

impl Job {
    pub fn parse(text: &str) -> Result<Job> {
        serde_json::from_str(text).map_err(|e| JobError(format!("bad job file: {e}")).into())
    }

    pub fn global(&self) -> GlobalArgs {
        GlobalArgs {
            verify: self.verify,
            threads: self.threads,
            output: self.output.clone(),
            format: self.format,
            lambda_bound: Some(self.variant.lambda_bound),
            mu_sign: Some(self.variant.mu_sign),
            beta_shift: Some(self.variant.beta_shift),
        }
    }

    fn args<T: DeserializeOwned>(&self) -> Result<T> {
        let value = self.args.clone().unwrap_or_else(|| Value::Object(Default::default()));
        serde_json::from_value(value).map_err(|e| JobError(format!("bad args for {:?}: {e}", self.command)).into())
    }

    pub fn run(&self, ctx: &Ctx) -> Result<Outcome> {
        match self.command.as_str() {
            "dim" => commands::dim(ctx, &self.args()?),
            "lr" => commands::lr(ctx, &self.args()?),
            "branch" => commands::branch(ctx, &self.args()?),
            "invariant" => commands::invariant(ctx, &self.args()?),
            "bz" => commands::bz(ctx, &self.args()?),
            "cone-export" => commands::cone_export(ctx, &self.args()?),
            "itrails" => commands::itrails(ctx, &self.args()?),
            "maps-check" => commands::maps_check(ctx, &self.args()?),
            other => bail!(JobError(format!("unknown job command {other:?}"))),
        }
    }
}

pub fn load(path: &PathBuf) -> Result<Job> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading job file {}", path.display()))?;
    Job::parse(&text)
}
