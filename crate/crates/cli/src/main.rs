use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oz2py::{run, BuildConfig};

/// Translate Object-Z dialect specifications into contract-checked Python.
#[derive(Parser)]
#[command(name = "oz2py", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the inputs and write one Python module per input.
    Build {
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(short = 'o', long = "out", value_name = "DIR")]
        out: PathBuf,
        /// Copy the runtime module next to the generated code.
        #[arg(long)]
        emit_runtime: bool,
        /// Runtime module copied by --emit-runtime (default: $OZ2PY_RUNTIME).
        #[arg(long, value_name = "FILE", requires = "emit_runtime")]
        runtime_path: Option<PathBuf>,
        /// Do not emit postconditions for variables outside the delta list.
        #[arg(long)]
        no_frame_checks: bool,
    },
    /// Report diagnostics without writing anything.
    Check {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Source files (.oz).
    #[arg(required = true, value_name = "INPUT")]
    inputs: Vec<PathBuf>,
    /// Print diagnostics to stdout as JSON lines.
    #[arg(long)]
    json_diagnostics: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        Command::Build {
            common,
            out,
            emit_runtime,
            runtime_path,
            no_frame_checks,
        } => BuildConfig {
            inputs: common.inputs,
            out_dir: Some(out),
            emit_runtime,
            runtime_path,
            json_diagnostics: common.json_diagnostics,
            no_frame_checks,
            check_only: false,
        },
        Command::Check { common } => BuildConfig {
            inputs: common.inputs,
            json_diagnostics: common.json_diagnostics,
            check_only: true,
            ..BuildConfig::default()
        },
    };
    let status = run(&config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(status.code() as u8)
}
