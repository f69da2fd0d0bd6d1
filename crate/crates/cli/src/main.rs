use std::path::PathBuf;
use std::process::ExitCode;

use arknit_cli::spec::parse;
use arknit_cli::{
    parse_family, run, validate, CliError, FamilyChoice, FieldChoice, Options, OutFormat,
};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Out {
    Text,
    Dot,
}

/// Almost split sequences over bound quivers and their tensor products.
#[derive(Debug, Parser)]
#[command(name = "arknit", version)]
struct Args {
    /// Job file.
    input: PathBuf,
    /// `p` for F_p, or `Q`. Overrides the [field] section.
    #[arg(long)]
    field: Option<String>,
    /// Dimension cap for knitting and random data, step cap for resolutions.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
    /// `complete` or `supplied:<file>`.
    #[arg(long, default_value = "complete")]
    verify_family: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn go(args: Args) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.input)?;
    let mut job = parse(&text)?;
    if let Some(f) = &args.field {
        job.field =
            FieldChoice::parse(f).ok_or_else(|| CliError::Usage(format!("bad --field `{f}`")))?;
    }
    let job = validate(job)?;
    let family = match args.verify_family.split_once(':') {
        None if args.verify_family == "complete" => FamilyChoice::Complete,
        Some(("supplied", path)) => {
            FamilyChoice::Supplied(parse_family(&std::fs::read_to_string(path)?)?)
        }
        _ => {
            return Err(CliError::Usage(format!(
                "bad --verify-family `{}`",
                args.verify_family
            )))
        }
    };
    let opts = Options {
        out: match args.out {
            Out::Text => OutFormat::Text,
            Out::Dot => OutFormat::Dot,
        },
        cap: args.cap,
        family,
    };
    let outcome = run(&job, &opts)?;
    match &args.output {
        Some(p) => std::fs::write(p, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match go(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
