//! Batch front-end: one JSON request per line in, one JSON response per line out.
//!
//! The record formats are documented in `docs/schema.md`.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

mod commands;

pub use commands::COMMANDS;

/// Echoed in every response.
pub const SCHEMA_VERSION: &str = "qcircle/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub precision: u32,
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, precision: 20, samples: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: String,
    #[serde(default)]
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub schema: String,
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl Response {
    pub fn ok(result: Value) -> Self {
        Response { schema: SCHEMA_VERSION.into(), status: Status::Ok, result, diagnostics: Vec::new() }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Response { schema: SCHEMA_VERSION.into(), status: Status::Error, result: Value::Null, diagnostics: vec![message.into()] }
    }

    pub fn undecided(message: impl Into<String>) -> Self {
        Response { status: Status::Undecided, ..Response::error(message) }
    }
}

/// Settings in effect for one request: the request's own values over the defaults.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub seed: u64,
    pub precision: u32,
    pub samples: usize,
}

pub fn dispatch(request: &Request, config: &Config) -> Response {
    let ctx = Context {
        seed: request.seed.unwrap_or(config.seed),
        precision: request.precision.unwrap_or(config.precision),
        samples: config.samples,
    };
    commands::run(&request.command, &request.payload, &ctx)
}

/// Parses and answers one line.
pub fn dispatch_line(line: &str, config: &Config) -> Response {
    match serde_json::from_str::<Request>(line) {
        Ok(request) => dispatch(&request, config),
        Err(e) => Response::error(format!("malformed request: {e}")),
    }
}

/// Answers every non-blank line of `input`. Returns whether all responses were ok.
pub fn run_lines<R: BufRead, W: Write>(input: R, output: &mut W, config: &Config) -> io::Result<bool> {
    let mut all_ok = true;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = dispatch_line(&line, config);
        all_ok &= response.status == Status::Ok;
        serde_json::to_writer(&mut *output, &response)?;
        output.write_all(b"\n")?;
    }
    output.flush()?;
    Ok(all_ok)
}
