//! `hdt`: reproducible experiments with the hyperdimensional transform.
//!
//! Every subcommand writes CSV files whose `#` header echoes the resolved
//! configuration, so feeding a CSV back through `--config` reruns the same
//! experiment.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Arg, ArgAction, Command};

pub use error::CliError;

pub fn build_cli() -> Command {
    let mut cmd = Command::new("hdt")
        .about("Hyperdimensional transform experiments")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("threads")
                .long("threads")
                .global(true)
                .value_parser(clap::value_parser!(usize))
                .help("worker threads (default: all cores)"),
        );
    for schema in config::SCHEMAS {
        let mut sub = Command::new(schema.command)
            .about(schema.about)
            .arg(
                Arg::new("config")
                    .long("config")
                    .short('c')
                    .value_name("FILE")
                    .help("key=value config file"),
            )
            .arg(
                Arg::new("out")
                    .long("out")
                    .short('o')
                    .value_name("DIR")
                    .default_value("out")
                    .help("output directory"),
            )
            .arg(
                Arg::new("svg")
                    .long("svg")
                    .action(ArgAction::SetTrue)
                    .help("also write SVG line plots"),
            );
        for key in schema.keys {
            let help = if key.default.is_empty() {
                key.help.to_string()
            } else {
                format!("{} [default: {}]", key.help, key.default)
            };
            sub = sub.arg(Arg::new(key.name).long(key.name).value_name("VALUE").help(help));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Parses arguments, runs the subcommand and returns the written files.
pub fn run<I, T>(args: I) -> Result<Vec<PathBuf>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = build_cli().try_get_matches_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            let _ = e.print();
            std::process::exit(0)
        }
        _ => CliError::Config(e.to_string()),
    })?;
    let (name, sub) = matches
        .subcommand()
        .ok_or_else(|| CliError::Config("missing subcommand".into()))?;
    let schema = config::schema(name).ok_or_else(|| CliError::Config(format!("unknown command `{name}`")))?;
    let file = match sub.get_one::<String>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            config::parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    let cli: Vec<(String, String)> = schema
        .keys
        .iter()
        .filter_map(|k| sub.get_one::<String>(k.name).map(|v| (k.name.to_string(), v.clone())))
        .collect();
    let cfg = config::RunConfig::resolve(schema, &file, &cli)?;
    let out = PathBuf::from(sub.get_one::<String>("out").expect("has default"));
    let svg = sub.get_flag("svg");
    match matches.get_one::<usize>("threads") {
        Some(&n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| commands::run(&cfg, &out, svg)),
        None => commands::run(&cfg, &out, svg),
    }
}
