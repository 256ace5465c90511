//! The textual dialect: tokens, AST, parser and canonical printer.

pub mod ast;
mod lexer;
mod parser;
mod pretty;

pub use ast::*;
pub use lexer::{tokenize, tokenize_file, Keyword, Token, TokenKind};
pub use parser::parse;
pub use pretty::{pretty_print, print_expr, print_op_expr};

use alloc::vec::Vec;

use crate::diagnostic::Diagnostic;

/// Tokenizes and parses `text`, attributing spans to `file`.
pub fn parse_source(file: &str, text: &str) -> Result<Specification, Vec<Diagnostic>> {
    parse(&tokenize_file(file, text))
}
