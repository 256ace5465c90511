use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Class,
    Visibility,
    Const,
    Axiom,
    State,
    Secondary,
    Where,
    Init,
    Op,
    Delta,
    End,
    And,
    Or,
    Not,
    Implies,
    In,
    Div,
    Mod,
    True,
    False,
}

impl Keyword {
    pub fn lookup(s: &str) -> Option<Keyword> {
        Some(match s {
            "class" => Keyword::Class,
            "visibility" => Keyword::Visibility,
            "const" => Keyword::Const,
            "axiom" => Keyword::Axiom,
            "state" => Keyword::State,
            "secondary" => Keyword::Secondary,
            "where" => Keyword::Where,
            "init" => Keyword::Init,
            "op" => Keyword::Op,
            "delta" => Keyword::Delta,
            "end" => Keyword::End,
            "and" => Keyword::And,
            "or" => Keyword::Or,
            "not" => Keyword::Not,
            "implies" => Keyword::Implies,
            "in" => Keyword::In,
            "div" => Keyword::Div,
            "mod" => Keyword::Mod,
            "true" => Keyword::True,
            "false" => Keyword::False,
            _ => return None,
        })
    }

    /// Keywords that open or close a class section; predicate lists stop
    /// in front of them.
    pub fn is_section_boundary(self) -> bool {
        matches!(
            self,
            Keyword::Class
                | Keyword::Visibility
                | Keyword::Const
                | Keyword::Axiom
                | Keyword::State
                | Keyword::Secondary
                | Keyword::Where
                | Keyword::Init
                | Keyword::Op
                | Keyword::Delta
                | Keyword::End
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Identifier, possibly carrying a trailing `?`, `!` or `'`.
    Ident,
    Keyword(Keyword),
    /// `NAT`, `INT` or `BOOL`.
    TypeName,
    Int,
    Colon,
    Comma,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    /// `[]`
    Choice,
    /// `;`
    Semi,
    /// `||`
    Parallel,
    /// `&`
    Amp,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Newline,
    /// A character the dialect does not use.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
    /// Byte offset of the lexeme in the input.
    pub offset: usize,
}

pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_file("<input>", text)
}

/// Splits `text` into tokens. Whitespace other than newlines and `--`
/// comments are skipped; every other byte belongs to exactly one token.
pub fn tokenize_file(file: &str, text: &str) -> Vec<Token> {
    Lexer {
        file: Arc::from(file),
        text,
        pos: 0,
        line: 1,
        col: 1,
        out: Vec::new(),
    }
    .run()
}

struct Lexer<'a> {
    file: Arc<str>,
    text: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    out: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(mut self) -> Vec<Token> {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '-' if self.peek_at(1) == Some('-') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => self.token(c),
            }
        }
        self.out
    }

    fn token(&mut self, c: char) {
        let start = self.pos;
        let start_pos = (self.line, self.col);
        let kind = if c.is_ascii_alphabetic() {
            self.word()
        } else if c.is_ascii_digit() {
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            TokenKind::Int
        } else {
            self.bump();
            let next = self.peek();
            let two = |lexer: &mut Self, kind| {
                lexer.bump();
                kind
            };
            match (c, next) {
                ('\n', _) => TokenKind::Newline,
                ('[', Some(']')) => two(self, TokenKind::Choice),
                ('|', Some('|')) => two(self, TokenKind::Parallel),
                ('!', Some('=')) => two(self, TokenKind::Neq),
                ('<', Some('=')) => two(self, TokenKind::Le),
                ('>', Some('=')) => two(self, TokenKind::Ge),
                (':', _) => TokenKind::Colon,
                (',', _) => TokenKind::Comma,
                ('.', _) => TokenKind::Dot,
                ('(', _) => TokenKind::LParen,
                (')', _) => TokenKind::RParen,
                ('[', _) => TokenKind::LBracket,
                (']', _) => TokenKind::RBracket,
                ('{', _) => TokenKind::LBrace,
                ('}', _) => TokenKind::RBrace,
                (';', _) => TokenKind::Semi,
                ('&', _) => TokenKind::Amp,
                ('=', _) => TokenKind::Eq,
                ('<', _) => TokenKind::Lt,
                ('>', _) => TokenKind::Gt,
                ('+', _) => TokenKind::Plus,
                ('-', _) => TokenKind::Minus,
                ('*', _) => TokenKind::Star,
                _ => TokenKind::Error,
            }
        };
        // A newline token ends on the following line; keep its span on the
        // line it terminates.
        let end_pos = if kind == TokenKind::Newline {
            (start_pos.0, start_pos.1 + 1)
        } else {
            (self.line, self.col)
        };
        self.out.push(Token {
            kind,
            lexeme: String::from(&self.text[start..self.pos]),
            span: SourceSpan::new(self.file.clone(), start_pos, end_pos),
            offset: start,
        });
    }

    fn word(&mut self) -> TokenKind {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.bump();
        }
        let word = &self.text[start..self.pos];
        if let Some(kw) = Keyword::lookup(word) {
            return TokenKind::Keyword(kw);
        }
        if matches!(word, "NAT" | "INT" | "BOOL") {
            return TokenKind::TypeName;
        }
        match (self.peek(), self.peek_at(1)) {
            (Some('\''), _) | (Some('?'), _) => {
                self.bump();
            }
            // `x!=y` lexes as `x != y`.
            (Some('!'), next) if next != Some('=') => {
                self.bump();
            }
            _ => {}
        }
        TokenKind::Ident
    }
}
