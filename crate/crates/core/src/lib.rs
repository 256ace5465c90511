//! Front end and Python emitter for a line-oriented Object-Z dialect.
//!
//! The pipeline is `tokenize` → `parse` → `analyze` → `generate` →
//! `render_module`. Every stage is a pure function over owned data, so the
//! crate builds without `std` (only `alloc` is required); file IO, the CLI
//! and JSON diagnostics live in the companion `oz2py` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod codegen;
pub mod diagnostic;
pub mod sema;
pub mod span;
pub mod syntax;

pub use codegen::{generate, render_module, CodegenOptions, GeneratedModule};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use sema::{analyze, check_specification, Analysis};
pub use span::SourceSpan;
pub use syntax::{parse, parse_source, pretty_print, tokenize, Specification};

use alloc::string::String;
use alloc::vec::Vec;

/// Output of a successful [`compile`]: rendered Python plus any warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub python: String,
    pub warnings: Vec<Diagnostic>,
}

/// Lowercase hex SHA-256 of `text`.
pub fn source_digest(text: &str) -> String {
    use core::fmt::Write;
    use sha2::{Digest, Sha256};
    let mut out = String::with_capacity(64);
    for byte in Sha256::digest(text.as_bytes()) {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// Runs the whole pipeline on one source text. The header records the
/// digest of `text` unless `options` already carries one.
///
/// On failure the returned diagnostics are sorted and include warnings as
/// well as errors.
pub fn compile(
    file: &str,
    text: &str,
    options: &CodegenOptions,
) -> Result<Compiled, Vec<Diagnostic>> {
    let spec = parse_source(file, text)?;
    let analysis = analyze(&spec)?;
    let mut options = options.clone();
    if options.source_digest.is_none() {
        options.source_digest = Some(source_digest(text));
    }
    let module = generate(&spec, &analysis, &options);
    Ok(Compiled {
        python: render_module(&module),
        warnings: analysis.warnings.clone(),
    })
}
