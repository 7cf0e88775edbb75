//! Command-line front end: problem-file parsing, result serialization,
//! CSV/SVG emission, and the oracle cross-check command.

pub mod commands;
pub mod csv;
pub mod error;
pub mod output;
pub mod problem;
pub mod svg;

use commands::{NuArgs, SweepArgs};
use error::CliError;

pub const USAGE: &str = "minkspec - spectral structure of bordered Hermitian matrices \
in an inner product space with one negative square

usage:
  minkspec analyze <file> [--json]
  minkspec critical-a <file> [--json]
  minkspec sweep <file> --a-min X --a-max Y --steps N [--csv PATH] [--svg PATH] [--json]
  minkspec nu-curves <file> --center X --window W --samples N [--csv PATH] [--json]
  minkspec verify <file>

problem files are JSON, either
  {\"J\": [[[re,im],...],...], \"u\": [[re,im],...], \"a\": <number>}   (matrix form)
  {\"mu\": [...], \"d\": [...], \"a\": <number>}                       (pole/residue form)

environment:
  MINKSPEC_TOL   positive factor scaling all numerical tolerances (default 1)

exit codes: 0 success; 2 usage/parse/validation errors; 3 numerical failures
";

struct ParsedArgs {
    file: String,
    json: bool,
    csv: Option<String>,
    svg: Option<String>,
    values: std::collections::HashMap<String, f64>,
}

fn parse_flags(args: &[String], allowed_flags: &[&str]) -> Result<ParsedArgs, CliError> {
    let mut file: Option<String> = None;
    let mut json = false;
    let mut csv = None;
    let mut svg = None;
    let mut values = std::collections::HashMap::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        if let Some(name) = arg.strip_prefix("--") {
            if !allowed_flags.contains(&name) {
                return Err(CliError::Usage(format!("unknown flag --{name}\n\n{USAGE}")));
            }
            match name {
                "json" => json = true,
                "csv" | "svg" => {
                    i += 1;
                    let value = args.get(i).ok_or_else(|| {
                        CliError::Usage(format!("--{name} needs a path argument"))
                    })?;
                    if name == "csv" {
                        csv = Some(value.clone());
                    } else {
                        svg = Some(value.clone());
                    }
                }
                _ => {
                    i += 1;
                    let raw = args.get(i).ok_or_else(|| {
                        CliError::Usage(format!("--{name} needs a numeric argument"))
                    })?;
                    let value: f64 = raw.parse().map_err(|_| {
                        CliError::Usage(format!("--{name} expects a number, got {raw}"))
                    })?;
                    values.insert(name.to_string(), value);
                }
            }
        } else if file.is_none() {
            file = Some(arg.clone());
        } else {
            return Err(CliError::Usage(format!(
                "unexpected argument {arg}\n\n{USAGE}"
            )));
        }
        i += 1;
    }
    Ok(ParsedArgs {
        file: file.ok_or_else(|| CliError::Usage(format!("missing <file>\n\n{USAGE}")))?,
        json,
        csv,
        svg,
        values,
    })
}

fn require(parsed: &ParsedArgs, name: &str) -> Result<f64, CliError> {
    parsed
        .values
        .get(name)
        .copied()
        .ok_or_else(|| CliError::Usage(format!("missing required flag --{name}\n\n{USAGE}")))
}

/// Dispatch one invocation; returns the stdout text.
pub fn run(args: &[String]) -> Result<String, CliError> {
    let command = args
        .first()
        .ok_or_else(|| CliError::Usage(USAGE.to_string()))?;
    let rest = &args[1..];
    match command.as_str() {
        "analyze" => {
            let parsed = parse_flags(rest, &["json"])?;
            commands::cmd_analyze(&parsed.file, parsed.json)
        }
        "critical-a" => {
            let parsed = parse_flags(rest, &["json"])?;
            commands::cmd_critical_a(&parsed.file, parsed.json)
        }
        "sweep" => {
            let parsed = parse_flags(rest, &["a-min", "a-max", "steps", "csv", "svg", "json"])?;
            let sweep_args = SweepArgs {
                a_min: require(&parsed, "a-min")?,
                a_max: require(&parsed, "a-max")?,
                steps: require(&parsed, "steps")? as usize,
                csv: parsed.csv.clone(),
                svg: parsed.svg.clone(),
                json: parsed.json,
            };
            commands::cmd_sweep(&parsed.file, &sweep_args)
        }
        "nu-curves" => {
            let parsed = parse_flags(rest, &["center", "window", "samples", "csv", "json"])?;
            let nu_args = NuArgs {
                center: require(&parsed, "center")?,
                window: require(&parsed, "window")?,
                samples: require(&parsed, "samples")? as usize,
                csv: parsed.csv.clone(),
                json: parsed.json,
            };
            commands::cmd_nu_curves(&parsed.file, &nu_args)
        }
        "verify" => {
            let parsed = parse_flags(rest, &[])?;
            commands::cmd_verify(&parsed.file)
        }
        "help" | "--help" | "-h" => Ok(USAGE.to_string()),
        other => Err(CliError::Usage(format!(
            "unknown command {other}\n\n{USAGE}"
        ))),
    }
}
