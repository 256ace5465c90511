//! File handling and reporting around [`oz2py_core::compile`].

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use oz2py_core::{compile, CodegenOptions, Diagnostic};
use serde::Serialize;

/// Environment variable naming the runtime module copied by `--emit-runtime`.
pub const RUNTIME_ENV: &str = "OZ2PY_RUNTIME";
pub const RUNTIME_FILE: &str = "ozruntime.py";

#[derive(Debug, Clone, Default)]
pub struct BuildConfig {
    pub inputs: Vec<PathBuf>,
    /// Required unless `check_only`.
    pub out_dir: Option<PathBuf>,
    pub emit_runtime: bool,
    /// Runtime module to copy; falls back to `OZ2PY_RUNTIME`.
    pub runtime_path: Option<PathBuf>,
    pub json_diagnostics: bool,
    pub no_frame_checks: bool,
    pub check_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Diagnostics,
    Failure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Diagnostics => 1,
            Status::Failure => 2,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: io::Error },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Usage(_) => None,
            CliError::Io { source, .. } => Some(source),
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One line of `--json-diagnostics` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonDiagnostic<'a> {
    pub code: &'a str,
    pub severity: &'a str,
    pub message: &'a str,
    pub file: &'a str,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl<'a> From<&'a Diagnostic> for JsonDiagnostic<'a> {
    fn from(d: &'a Diagnostic) -> Self {
        JsonDiagnostic {
            code: d.code.as_str(),
            severity: d.severity.as_str(),
            message: &d.message,
            file: &d.span.file,
            start_line: d.span.start_line,
            start_col: d.span.start_col,
            end_line: d.span.end_line,
            end_col: d.span.end_col,
        }
    }
}

pub fn json_line(d: &Diagnostic) -> String {
    serde_json::to_string(&JsonDiagnostic::from(d)).expect("diagnostics serialize")
}

/// Result of compiling one input.
#[derive(Debug, Clone)]
pub struct Unit {
    pub input: PathBuf,
    pub python: Option<String>,
    /// Errors and warnings, sorted.
    pub diagnostics: Vec<Diagnostic>,
}

impl Unit {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

pub fn compile_file(path: &Path, frame_checks: bool) -> Result<Unit, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let options = CodegenOptions {
        frame_checks,
        source_digest: None,
    };
    let name = path.display().to_string();
    Ok(match compile(&name, &text, &options) {
        Ok(c) => Unit {
            input: path.to_path_buf(),
            python: Some(c.python),
            diagnostics: c.warnings,
        },
        Err(diagnostics) => Unit {
            input: path.to_path_buf(),
            python: None,
            diagnostics,
        },
    })
}

/// Path of the module generated for `input` inside `out_dir`.
pub fn output_path(input: &Path, out_dir: &Path) -> PathBuf {
    let stem = input.file_stem().unwrap_or(input.as_os_str());
    out_dir.join(stem).with_extension("py")
}

fn runtime_source(config: &BuildConfig) -> Result<PathBuf, CliError> {
    config
        .runtime_path
        .clone()
        .or_else(|| std::env::var_os(RUNTIME_ENV).map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Usage(format!(
                "--emit-runtime needs the runtime module: pass --runtime-path or set {RUNTIME_ENV}"
            ))
        })
}

fn report(
    units: &[Unit],
    json: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<()> {
    for unit in units {
        for d in &unit.diagnostics {
            if json {
                writeln!(stdout, "{}", json_line(d))?;
            } else {
                writeln!(stderr, "{d}")?;
            }
        }
    }
    Ok(())
}

/// Runs `build` or `check`. Nothing is written unless every input compiles.
pub fn run(config: &BuildConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Status {
    match try_run(config, stdout, stderr) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Status::Failure
        }
    }
}

fn try_run(
    config: &BuildConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    if config.inputs.is_empty() {
        return Err(CliError::Usage("no input files".into()));
    }
    let out_dir = match (&config.out_dir, config.check_only) {
        (_, true) => None,
        (Some(dir), false) => Some(dir.as_path()),
        (None, false) => {
            return Err(CliError::Usage(
                "build needs an output directory (-o)".into(),
            ))
        }
    };
    if let Some(dir) = out_dir {
        let mut seen = BTreeSet::new();
        for input in &config.inputs {
            let target = output_path(input, dir);
            if !seen.insert(target.clone()) {
                return Err(CliError::Usage(format!(
                    "two inputs would both be written to {}",
                    target.display()
                )));
            }
        }
    }
    let runtime = match (out_dir, config.emit_runtime) {
        (Some(_), true) => Some(runtime_source(config)?),
        _ => None,
    };

    let units = config
        .inputs
        .iter()
        .map(|p| compile_file(p, !config.no_frame_checks))
        .collect::<Result<Vec<_>, _>>()?;
    report(&units, config.json_diagnostics, stdout, stderr)
        .map_err(io_error(Path::new("<output>")))?;
    if units.iter().any(Unit::has_errors) {
        return Ok(Status::Diagnostics);
    }
    let Some(dir) = out_dir else {
        return Ok(Status::Success);
    };

    fs::create_dir_all(dir).map_err(io_error(dir))?;
    for unit in &units {
        let target = output_path(&unit.input, dir);
        let python = unit.python.as_deref().unwrap_or_default();
        fs::write(&target, python).map_err(io_error(&target))?;
    }
    if let Some(src) = runtime {
        let target = dir.join(RUNTIME_FILE);
        let text = fs::read(&src).map_err(io_error(&src))?;
        fs::write(&target, text).map_err(io_error(&target))?;
    }
    Ok(Status::Success)
}

#[cfg(test)]
mod tests {
    use super::*;
    use oz2py_core::{Code, SourceSpan};

    #[test]
    fn json_field_names() {
        let d = Diagnostic::new(
            Code::S001,
            "unresolved name `x`",
            SourceSpan::new("a.oz".into(), (3, 5), (3, 6)),
        );
        assert_eq!(
            json_line(&d),
            r#"{"code":"S001","severity":"error","message":"unresolved name `x`","file":"a.oz","startLine":3,"startCol":5,"endLine":3,"endCol":6}"#
        );
    }

    #[test]
    fn output_keeps_the_stem() {
        assert_eq!(
            output_path(Path::new("corpus/creditcard.oz"), Path::new("out")),
            Path::new("out/creditcard.py")
        );
    }

    #[test]
    fn build_without_output_dir_is_a_usage_error() {
        let config = BuildConfig {
            inputs: vec!["x.oz".into()],
            ..BuildConfig::default()
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(&config, &mut out, &mut err), Status::Failure);
    }
}
