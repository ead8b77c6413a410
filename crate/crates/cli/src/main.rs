mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Map, Value};

use args::{Cli, Command, Format};
use commands::{Ctx, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        tolerance: cli.tolerance,
        max_elements: cli.max_elements,
    };
    let (name, result) = match &cli.command {
        Command::Check(a) => ("check", commands::check(a, &ctx)),
        Command::Build(a) => ("build", commands::build(a, &ctx)),
        Command::Valuate(a) => ("valuate", commands::valuate(a, &ctx)),
        Command::Demo { name } => ("demo", commands::demo(*name, &ctx)),
    };
    match result {
        Ok(Outcome { doc, text, code }) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&doc).unwrap() + "\n",
                Format::Text => text,
            };
            emit(&rendered);
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            if cli.format == Format::Json {
                let mut extra = Map::new();
                extra.insert(
                    "error".into(),
                    json!({"message": failure.message, "exitCode": failure.code}),
                );
                let doc = output::result_document(
                    name,
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    vec![],
                    extra,
                );
                emit(&(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
            }
            ExitCode::from(failure.code)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}
