//! Recursive-descent parser over the token stream.
//!
//! The grammar is line-oriented: sections start with a keyword at the
//! beginning of a line and predicates are written one per line. Errors are
//! reported as diagnostics and the parser resynchronizes at the next line,
//! so a malformed input yields diagnostics rather than a panic.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{Keyword, Token, TokenKind};
use crate::diagnostic::{sort_diagnostics, Code, Diagnostic};
use crate::span::SourceSpan;

const MAX_DEPTH: usize = 100;

/// Parses a token list produced by [`tokenize`](super::tokenize).
pub fn parse(tokens: &[Token]) -> Result<Specification, Vec<Diagnostic>> {
    let file: Arc<str> = tokens
        .first()
        .map_or_else(|| Arc::from("<input>"), |t| t.span.file.clone());
    let eof = match tokens.last() {
        None => SourceSpan::new(file.clone(), (1, 1), (1, 1)),
        Some(t) if t.kind == TokenKind::Newline => {
            let line = t.span.start_line + 1;
            SourceSpan::new(file.clone(), (line, 1), (line, 1))
        }
        Some(t) => SourceSpan::new(file.clone(), t.span.end(), t.span.end()),
    };

    let mut diags = Vec::new();
    let mut toks = Vec::with_capacity(tokens.len());
    for t in tokens {
        if t.kind == TokenKind::Error {
            diags.push(Diagnostic::new(
                Code::P005,
                format!("invalid character `{}`", t.lexeme.escape_debug()),
                t.span.clone(),
            ));
        } else {
            toks.push(t);
        }
    }

    let mut parser = Parser {
        toks,
        pos: 0,
        diags,
        eof,
        depth: 0,
    };
    let spec = parser.specification();
    let mut diags = parser.diags;
    if diags.iter().any(Diagnostic::is_error) {
        sort_diagnostics(&mut diags);
        Err(diags)
    } else {
        Ok(spec)
    }
}

/// Marker for "a diagnostic has already been recorded".
struct Fail;

type PResult<T> = Result<T, Fail>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Axioms and state predicates: no decorations.
    Class,
    /// INIT predicates: no decorations.
    Init,
    /// Operation predicates: all decorations allowed.
    Operation,
}

struct Parser<'t> {
    toks: Vec<&'t Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    eof: SourceSpan,
    depth: usize,
}

fn split_decoration(lexeme: &str) -> (&str, Decoration) {
    let decoration = match lexeme.as_bytes().last() {
        Some(b'\'') => Decoration::Primed,
        Some(b'?') => Decoration::Input,
        Some(b'!') => Decoration::Output,
        _ => return (lexeme, Decoration::None),
    };
    (&lexeme[..lexeme.len() - 1], decoration)
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos).copied()
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek_kind() == Some(kind)
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        self.at(TokenKind::Keyword(kw))
    }

    fn bump(&mut self) -> &'t Token {
        let t = self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: TokenKind) -> Option<&'t Token> {
        if self.at(kind) {
            Some(self.bump())
        } else {
            None
        }
    }

    fn current_span(&self) -> SourceSpan {
        self.peek()
            .map_or_else(|| self.eof.clone(), |t| t.span.clone())
    }

    fn found(&self) -> String {
        match self.peek() {
            None => String::from("end of input"),
            Some(t) if t.kind == TokenKind::Newline => String::from("end of line"),
            Some(t) => format!("`{}`", t.lexeme),
        }
    }

    fn error<T>(&mut self, code: Code, message: String, span: SourceSpan) -> PResult<T> {
        self.diags.push(Diagnostic::new(code, message, span));
        Err(Fail)
    }

    fn unexpected<T>(&mut self, expected: &str) -> PResult<T> {
        let message = format!("expected {expected}, found {}", self.found());
        let span = self.current_span();
        self.error(Code::P001, message, span)
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<&'t Token> {
        match self.eat(kind) {
            Some(t) => Ok(t),
            None => self.unexpected(expected),
        }
    }

    fn skip_newlines(&mut self) {
        while self.eat(TokenKind::Newline).is_some() {}
    }

    fn end_of_line(&mut self) -> PResult<()> {
        if self.peek().is_none() || self.eat(TokenKind::Newline).is_some() {
            Ok(())
        } else {
            self.unexpected("end of line")
        }
    }

    /// Skips the rest of the current line, including its newline.
    fn recover_line(&mut self) {
        while let Some(t) = self.peek() {
            self.pos += 1;
            if t.kind == TokenKind::Newline {
                break;
            }
        }
    }

    /// Skips to the next line that starts with `class`.
    fn recover_class(&mut self) {
        let mut line_start = self.pos == 0 || self.toks[self.pos - 1].kind == TokenKind::Newline;
        while let Some(t) = self.peek() {
            if line_start && t.kind == TokenKind::Keyword(Keyword::Class) {
                return;
            }
            line_start = t.kind == TokenKind::Newline;
            self.pos += 1;
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.chain(|p| {
            p.deeper()?;
            f(p)
        })
    }

    /// Counts one more level of tree depth until the enclosing `chain`
    /// returns. Binary operator loops call this per operator, so long
    /// left-leaning chains are bounded like parentheses are.
    fn deeper(&mut self) -> PResult<()> {
        if self.depth >= MAX_DEPTH {
            let span = self.current_span();
            return self.error(
                Code::P001,
                String::from("expression is nested too deeply"),
                span,
            );
        }
        self.depth += 1;
        Ok(())
    }

    fn chain<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let base = self.depth;
        let result = f(self);
        self.depth = base;
        result
    }

    fn specification(&mut self) -> Specification {
        let mut spec = Specification::default();
        loop {
            self.skip_newlines();
            if self.peek().is_none() {
                break;
            }
            if self.at_kw(Keyword::Class) {
                match self.class() {
                    Ok(class) => spec.classes.push(class),
                    Err(Fail) => self.recover_class(),
                }
            } else {
                let _ = self.unexpected::<()>("`class`");
                self.recover_class();
            }
        }
        if spec.classes.is_empty() && self.diags.is_empty() {
            let span = self.eof.clone();
            let _ = self.error::<()>(
                Code::P001,
                String::from("expected at least one `class`"),
                span,
            );
        }
        spec
    }

    /// An identifier without decoration.
    fn plain_ident(&mut self, what: &str) -> PResult<Ident> {
        let Some(t) = self.eat(TokenKind::Ident) else {
            return self.unexpected(what);
        };
        let (base, decoration) = split_decoration(&t.lexeme);
        if decoration != Decoration::None {
            self.diags.push(Diagnostic::new(
                Code::P004,
                format!("{what} `{}` cannot carry a decoration", t.lexeme),
                t.span.clone(),
            ));
        }
        Ok(Ident::new(base, t.span.clone()))
    }

    fn ident_list(&mut self, what: &str) -> PResult<Vec<Ident>> {
        let mut out = alloc::vec![self.plain_ident(what)?];
        while self.eat(TokenKind::Comma).is_some() {
            out.push(self.plain_ident(what)?);
        }
        Ok(out)
    }

    fn class(&mut self) -> PResult<ClassDecl> {
        let kw = self.bump();
        let name = self.plain_ident("class name")?;
        let mut class = ClassDecl::empty(name, kw.span.clone());
        if self.eat(TokenKind::LBracket).is_some() {
            class.generic_params = self.ident_list("generic parameter")?;
            self.expect(TokenKind::RBracket, "`]`")?;
        }
        if self.end_of_line().is_err() {
            self.recover_line();
        }

        loop {
            self.skip_newlines();
            let Some(t) = self.peek() else {
                let span = kw.span.to(&self.eof);
                return self.error(
                    Code::P002,
                    format!("class `{}` is not terminated by `end`", class.name.name),
                    span,
                );
            };
            let result = match t.kind {
                TokenKind::Keyword(Keyword::End) => {
                    let end = self.bump();
                    class.span = kw.span.to(&end.span);
                    if self.end_of_line().is_err() {
                        self.recover_line();
                    }
                    break;
                }
                TokenKind::Keyword(Keyword::Class) => {
                    let span = kw.span.to(&t.span);
                    return self.error(
                        Code::P002,
                        format!("class `{}` is not terminated by `end`", class.name.name),
                        span,
                    );
                }
                TokenKind::Keyword(Keyword::Visibility) => self.visibility(&mut class),
                TokenKind::Keyword(Keyword::Const) => self.constant(&mut class),
                TokenKind::Keyword(Keyword::Axiom) => self.axiom(&mut class),
                TokenKind::Keyword(Keyword::State) => self.state(&mut class),
                TokenKind::Keyword(Keyword::Init) => self.init(&mut class),
                TokenKind::Keyword(Keyword::Op) => self.operation(&mut class),
                _ => self.unexpected("a class section (`visibility`, `const`, `axiom`, `state`, `init`, `op`) or `end`"),
            };
            if result.is_err() {
                self.recover_line();
            }
        }

        self.check_duplicate_members(&class);
        Ok(class)
    }

    fn check_duplicate_members(&mut self, class: &ClassDecl) {
        let mut seen: Vec<&str> = Vec::new();
        for ident in class.member_names() {
            if seen.contains(&ident.name.as_str()) {
                self.diags.push(Diagnostic::new(
                    Code::P003,
                    format!(
                        "duplicate member `{}` in class `{}`",
                        ident.name, class.name.name
                    ),
                    ident.span.clone(),
                ));
            } else {
                seen.push(&ident.name);
            }
        }
    }

    fn duplicate_block(&mut self, kw: &Token, what: &str, class: &ClassDecl) {
        self.diags.push(Diagnostic::new(
            Code::P002,
            format!("class `{}` has more than one {what} block", class.name.name),
            kw.span.clone(),
        ));
    }

    fn visibility(&mut self, class: &mut ClassDecl) -> PResult<()> {
        let kw = self.bump();
        let names = self.ident_list("member name")?;
        self.end_of_line()?;
        if class.visibility.is_some() {
            self.duplicate_block(kw, "`visibility`", class);
        } else {
            class.visibility = Some(names);
        }
        Ok(())
    }

    fn var_decl(&mut self) -> PResult<(Ident, Decoration, VarDecl)> {
        let t = self.expect(TokenKind::Ident, "a declaration `name : type`")?;
        let (base, decoration) = split_decoration(&t.lexeme);
        let name = Ident::new(base, t.span.clone());
        self.expect(TokenKind::Colon, "`:`")?;
        let ty = self.type_expr()?;
        let span = t.span.to(&ty.span);
        let decl = VarDecl {
            name: name.clone(),
            ty,
            span,
        };
        Ok((name, decoration, decl))
    }

    fn plain_var_decl(&mut self) -> PResult<VarDecl> {
        let (name, decoration, decl) = self.var_decl()?;
        if decoration != Decoration::None {
            self.diags.push(Diagnostic::new(
                Code::P004,
                format!(
                    "`{}{}` is decorated; only operation inputs and outputs carry `?` or `!`",
                    name.name,
                    decoration.suffix()
                ),
                name.span,
            ));
        }
        Ok(decl)
    }

    fn constant(&mut self, class: &mut ClassDecl) -> PResult<()> {
        self.bump();
        let decl = self.plain_var_decl()?;
        self.end_of_line()?;
        class.constants.push(decl);
        Ok(())
    }

    fn axiom(&mut self, class: &mut ClassDecl) -> PResult<()> {
        self.bump();
        let pred = self.predicate(Scope::Class)?;
        self.end_of_line()?;
        class.axioms.push(pred);
        Ok(())
    }

    /// Declarations, one per line, while lines start with an identifier.
    fn plain_decl_lines(&mut self) -> Vec<VarDecl> {
        let mut out = Vec::new();
        loop {
            self.skip_newlines();
            if !self.at(TokenKind::Ident) {
                return out;
            }
            match self
                .plain_var_decl()
                .and_then(|d| self.end_of_line().map(|_| d))
            {
                Ok(d) => out.push(d),
                Err(Fail) => self.recover_line(),
            }
        }
    }

    /// Predicates, one per line, up to the next section keyword.
    fn predicate_lines(&mut self, scope: Scope) -> Vec<Expr> {
        let mut out = Vec::new();
        loop {
            self.skip_newlines();
            match self.peek_kind() {
                None => return out,
                Some(TokenKind::Keyword(k)) if k.is_section_boundary() => return out,
                _ => {}
            }
            match self
                .predicate(scope)
                .and_then(|p| self.end_of_line().map(|_| p))
            {
                Ok(p) => out.push(p),
                Err(Fail) => self.recover_line(),
            }
        }
    }

    fn state(&mut self, class: &mut ClassDecl) -> PResult<()> {
        let kw = self.bump();
        self.end_of_line()?;
        let mut block = StateBlock {
            primary_vars: self.plain_decl_lines(),
            ..StateBlock::default()
        };
        self.skip_newlines();
        if self.eat(TokenKind::Keyword(Keyword::Secondary)).is_some() {
            self.end_of_line()?;
            block.secondary_vars = self.plain_decl_lines();
        }
        self.skip_newlines();
        if self.eat(TokenKind::Keyword(Keyword::Where)).is_some() {
            block.invariants = self.predicate_lines(Scope::Class);
        }
        if class.state.is_some() {
            self.duplicate_block(kw, "`state`", class);
        } else {
            class.state = Some(block);
        }
        Ok(())
    }

    fn init(&mut self, class: &mut ClassDecl) -> PResult<()> {
        let kw = self.bump();
        let block = InitBlock {
            predicates: self.predicate_lines(Scope::Init),
        };
        if class.init.is_some() {
            self.duplicate_block(kw, "`init`", class);
        } else {
            class.init = Some(block);
        }
        Ok(())
    }

    fn operation(&mut self, class: &mut ClassDecl) -> PResult<()> {
        let kw = self.bump();
        let name = self.plain_ident("operation name")?;
        if self.eat(TokenKind::Eq).is_some() {
            let expr = self.op_expr()?;
            self.end_of_line()?;
            let span = kw.span.to(&expr.span);
            class.op_expr_defs.push(OpExprDef { name, expr, span });
            return Ok(());
        }
        self.end_of_line()?;

        let mut op = OperationSchema {
            name,
            delta: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            predicates: Vec::new(),
            span: kw.span.clone(),
        };
        self.skip_newlines();
        if self.eat(TokenKind::Keyword(Keyword::Delta)).is_some() {
            match self
                .ident_list("state variable")
                .and_then(|d| self.end_of_line().map(|_| d))
            {
                Ok(delta) => op.delta = delta,
                Err(Fail) => self.recover_line(),
            }
        }
        loop {
            self.skip_newlines();
            if !self.at(TokenKind::Ident) {
                break;
            }
            match self.var_decl().and_then(|d| self.end_of_line().map(|_| d)) {
                Ok((_, Decoration::Input, decl)) => op.inputs.push(decl),
                Ok((_, Decoration::Output, decl)) => op.outputs.push(decl),
                Ok((name, decoration, _)) => {
                    self.diags.push(Diagnostic::new(
                        Code::P004,
                        format!(
                            "operation declaration `{}{}` must be an input (`?`) or an output (`!`)",
                            name.name,
                            decoration.suffix()
                        ),
                        name.span,
                    ));
                }
                Err(Fail) => self.recover_line(),
            }
        }
        self.skip_newlines();
        if self.eat(TokenKind::Keyword(Keyword::Where)).is_some() {
            op.predicates = self.predicate_lines(Scope::Operation);
        }
        self.skip_newlines();
        match self.eat(TokenKind::Keyword(Keyword::End)) {
            Some(end) => {
                op.span = kw.span.to(&end.span);
                if self.end_of_line().is_err() {
                    self.recover_line();
                }
            }
            None => {
                let span = kw.span.to(&self.current_span());
                self.diags.push(Diagnostic::new(
                    Code::P002,
                    format!(
                        "operation `{}` is not terminated by `end`, found {}",
                        op.name.name,
                        self.found()
                    ),
                    span,
                ));
            }
        }
        class.operations.push(op);
        Ok(())
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let Some(t) = self.peek() else {
            return self.unexpected("a type");
        };
        let kind = match t.kind {
            TokenKind::TypeName => {
                self.bump();
                match t.lexeme.as_str() {
                    "NAT" => TypeKind::Nat,
                    "INT" => TypeKind::Int,
                    _ => TypeKind::Bool,
                }
            }
            TokenKind::Ident => {
                let name = self.plain_ident("class name")?;
                TypeKind::ClassRef(name.name)
            }
            TokenKind::LBrace => {
                self.bump();
                let mut items = alloc::vec![self.literal()?];
                while self.eat(TokenKind::Comma).is_some() {
                    items.push(self.literal()?);
                }
                let close = self.expect(TokenKind::RBrace, "`,` or `}`")?;
                return Ok(TypeExpr {
                    kind: TypeKind::Enumerated(items),
                    span: t.span.to(&close.span),
                });
            }
            _ => return self.unexpected("a type (`NAT`, `INT`, `BOOL`, a class name or `{...}`)"),
        };
        Ok(TypeExpr {
            kind,
            span: t.span.clone(),
        })
    }

    fn literal(&mut self) -> PResult<Literal> {
        let negative = self.eat(TokenKind::Minus).is_some();
        match self.peek_kind() {
            Some(TokenKind::Int) => {
                let t = self.bump();
                let value = self.int_value(t)?;
                Ok(Literal::Int(if negative { -value } else { value }))
            }
            Some(TokenKind::Keyword(Keyword::True)) if !negative => {
                self.bump();
                Ok(Literal::Bool(true))
            }
            Some(TokenKind::Keyword(Keyword::False)) if !negative => {
                self.bump();
                Ok(Literal::Bool(false))
            }
            _ => self.unexpected("a literal"),
        }
    }

    fn int_value(&mut self, t: &Token) -> PResult<i64> {
        match t.lexeme.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => self.error(
                Code::P006,
                format!("integer literal `{}` is out of range", t.lexeme),
                t.span.clone(),
            ),
        }
    }

    // Operation expressions: left-associative, all operators at one level.

    fn op_expr(&mut self) -> PResult<OpExpr> {
        self.chain(|p| p.op_expr_chain())
    }

    fn op_expr_chain(&mut self) -> PResult<OpExpr> {
        let mut lhs = self.op_term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Choice) => OpOperator::Choice,
                Some(TokenKind::Semi) => OpOperator::Sequential,
                Some(TokenKind::Parallel) => OpOperator::Parallel,
                Some(TokenKind::Amp) => OpOperator::Conjunction,
                _ => return Ok(lhs),
            };
            self.bump();
            self.deeper()?;
            let rhs = self.op_term()?;
            let span = lhs.span.to(&rhs.span);
            lhs = OpExpr {
                kind: OpExprKind::Compose(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn op_term(&mut self) -> PResult<OpExpr> {
        if self.eat(TokenKind::LParen).is_some() {
            let inner = self.nested(|p| p.op_expr())?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(inner);
        }
        if !self.at(TokenKind::Ident) {
            return self.unexpected("an operation name");
        }
        let first = self.plain_ident("operation name")?;
        if self.eat(TokenKind::Dot).is_some() {
            let op = self.plain_ident("operation name")?;
            let span = first.span.to(&op.span);
            return Ok(OpExpr {
                kind: OpExprKind::MemberRef { object: first, op },
                span,
            });
        }
        let span = first.span.clone();
        Ok(OpExpr {
            kind: OpExprKind::Ref(first),
            span,
        })
    }

    // Predicates, lowest precedence first.

    fn predicate(&mut self, scope: Scope) -> PResult<Expr> {
        self.implies(scope)
    }

    fn implies(&mut self, scope: Scope) -> PResult<Expr> {
        let lhs = self.or(scope)?;
        if self.eat(TokenKind::Keyword(Keyword::Implies)).is_none() {
            return Ok(lhs);
        }
        let rhs = self.nested(|p| p.implies(scope))?;
        Ok(binary_logic(LogicOp::Implies, lhs, rhs))
    }

    fn or(&mut self, scope: Scope) -> PResult<Expr> {
        self.chain(|p| {
            let mut lhs = p.and(scope)?;
            while p.eat(TokenKind::Keyword(Keyword::Or)).is_some() {
                p.deeper()?;
                let rhs = p.and(scope)?;
                lhs = binary_logic(LogicOp::Or, lhs, rhs);
            }
            Ok(lhs)
        })
    }

    fn and(&mut self, scope: Scope) -> PResult<Expr> {
        self.chain(|p| {
            let mut lhs = p.not(scope)?;
            while p.eat(TokenKind::Keyword(Keyword::And)).is_some() {
                p.deeper()?;
                let rhs = p.not(scope)?;
                lhs = binary_logic(LogicOp::And, lhs, rhs);
            }
            Ok(lhs)
        })
    }

    fn not(&mut self, scope: Scope) -> PResult<Expr> {
        if let Some(kw) = self.eat(TokenKind::Keyword(Keyword::Not)) {
            let inner = self.nested(|p| p.not(scope))?;
            let span = kw.span.to(&inner.span);
            return Ok(Expr::new(ExprKind::Not(Box::new(inner)), span));
        }
        self.comparison(scope)
    }

    fn comparison(&mut self, scope: Scope) -> PResult<Expr> {
        let lhs = self.additive(scope)?;
        let op = match self.peek_kind() {
            Some(TokenKind::Eq) => Some(CompareOp::Eq),
            Some(TokenKind::Neq) => Some(CompareOp::Neq),
            Some(TokenKind::Lt) => Some(CompareOp::Lt),
            Some(TokenKind::Le) => Some(CompareOp::Le),
            Some(TokenKind::Gt) => Some(CompareOp::Gt),
            Some(TokenKind::Ge) => Some(CompareOp::Ge),
            Some(TokenKind::Keyword(Keyword::In)) => None,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.additive(scope)?;
        let span = lhs.span.to(&rhs.span);
        let kind = match op {
            Some(op) => ExprKind::Compare(op, Box::new(lhs), Box::new(rhs)),
            None => ExprKind::In(Box::new(lhs), Box::new(rhs)),
        };
        Ok(Expr::new(kind, span))
    }

    fn additive(&mut self, scope: Scope) -> PResult<Expr> {
        self.chain(|p| p.additive_chain(scope))
    }

    fn additive_chain(&mut self, scope: Scope) -> PResult<Expr> {
        let mut lhs = self.multiplicative(scope)?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => ArithOp::Add,
                Some(TokenKind::Minus) => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            self.deeper()?;
            let rhs = self.multiplicative(scope)?;
            lhs = arith(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self, scope: Scope) -> PResult<Expr> {
        self.chain(|p| p.multiplicative_chain(scope))
    }

    fn multiplicative_chain(&mut self, scope: Scope) -> PResult<Expr> {
        let mut lhs = self.unary(scope)?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => ArithOp::Mul,
                Some(TokenKind::Keyword(Keyword::Div)) => ArithOp::Div,
                Some(TokenKind::Keyword(Keyword::Mod)) => ArithOp::Mod,
                _ => return Ok(lhs),
            };
            self.bump();
            self.deeper()?;
            let rhs = self.unary(scope)?;
            lhs = arith(op, lhs, rhs);
        }
    }

    fn unary(&mut self, scope: Scope) -> PResult<Expr> {
        if let Some(minus) = self.eat(TokenKind::Minus) {
            let inner = self.nested(|p| p.unary(scope))?;
            let span = minus.span.to(&inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.primary(scope)
    }

    fn primary(&mut self, scope: Scope) -> PResult<Expr> {
        let Some(t) = self.peek() else {
            return self.unexpected("an expression");
        };
        match t.kind {
            TokenKind::Int => {
                self.bump();
                let value = self.int_value(t)?;
                Ok(Expr::new(ExprKind::Int(value), t.span.clone()))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.bump();
                Ok(Expr::new(ExprKind::Bool(true), t.span.clone()))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.bump();
                Ok(Expr::new(ExprKind::Bool(false), t.span.clone()))
            }
            TokenKind::Ident => self.name_or_member(scope),
            TokenKind::LBrace => {
                self.bump();
                let mut items = Vec::new();
                if !self.at(TokenKind::RBrace) {
                    items.push(self.nested(|p| p.predicate(scope))?);
                    while self.eat(TokenKind::Comma).is_some() {
                        items.push(self.nested(|p| p.predicate(scope))?);
                    }
                }
                let close = self.expect(TokenKind::RBrace, "`,` or `}`")?;
                Ok(Expr::new(ExprKind::Set(items), t.span.to(&close.span)))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.nested(|p| p.predicate(scope))?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.unexpected("an expression"),
        }
    }

    fn name_or_member(&mut self, scope: Scope) -> PResult<Expr> {
        let t = self.bump();
        let (base, decoration) = split_decoration(&t.lexeme);
        if self.eat(TokenKind::Dot).is_some() {
            if decoration != Decoration::None {
                self.diags.push(Diagnostic::new(
                    Code::P004,
                    format!("member object `{}` cannot carry a decoration", t.lexeme),
                    t.span.clone(),
                ));
            }
            let object = Ident::new(base, t.span.clone());
            let field = self.plain_ident("member name")?;
            let span = object.span.to(&field.span);
            return Ok(Expr::new(ExprKind::Member { object, field }, span));
        }
        if decoration != Decoration::None && scope != Scope::Operation {
            let place = match scope {
                Scope::Init => "the `init` schema",
                _ => "axioms and state predicates",
            };
            self.diags.push(Diagnostic::new(
                Code::P004,
                format!(
                    "decorated name `{}` is not allowed in {place}; decorations belong inside an operation schema",
                    t.lexeme
                ),
                t.span.clone(),
            ));
        }
        Ok(Expr::name(base, decoration, t.span.clone()))
    }
}

fn binary_logic(op: LogicOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(&rhs.span);
    Expr::new(ExprKind::Logic(op, Box::new(lhs), Box::new(rhs)), span)
}

fn arith(op: ArithOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(&rhs.span);
    Expr::new(ExprKind::Arith(op, Box::new(lhs), Box::new(rhs)), span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tokenize;

    fn parse_ok(src: &str) -> Specification {
        match parse(&tokenize(src)) {
            Ok(spec) => spec,
            Err(d) => panic!("unexpected diagnostics: {d:#?}"),
        }
    }

    fn codes(src: &str) -> Vec<Code> {
        parse(&tokenize(src))
            .expect_err("expected diagnostics")
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn minimal_class() {
        let spec = parse_ok("class C\nend");
        assert_eq!(spec.classes.len(), 1);
        let c = &spec.classes[0];
        assert_eq!(c.name.name, "C");
        assert!(c.constants.is_empty() && c.axioms.is_empty() && c.operations.is_empty());
        assert!(c.state.is_none() && c.init.is_none() && c.visibility.is_none());
        assert_eq!(c.span.start(), (1, 1));
        assert_eq!(c.span.end(), (2, 4));
    }

    #[test]
    fn generic_parameters_are_kept() {
        let spec = parse_ok("class Stack[X, Y]\nend\n");
        let names: Vec<_> = spec.classes[0]
            .generic_params
            .iter()
            .map(|p| p.name.as_str())
            .collect();
        assert_eq!(names, ["X", "Y"]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(codes(""), [Code::P001]);
        assert_eq!(codes("-- only a comment\n"), [Code::P001]);
    }

    #[test]
    fn two_state_blocks() {
        let src = "class C\n  state\n    x : INT\n  state\n    y : INT\nend\n";
        let diags = parse(&tokenize(src)).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::P002);
        assert_eq!(diags[0].span.start(), (4, 3));
    }

    #[test]
    fn unterminated_class() {
        let diags = parse(&tokenize("class C\n  const k : NAT\n")).unwrap_err();
        assert_eq!(diags[0].code, Code::P002);
        assert_eq!(diags[0].span.start(), (1, 1));
        assert_eq!(diags[0].span.end(), (3, 1));
    }

    #[test]
    fn unterminated_operation() {
        let src = "class C\n  op f\n    x? : NAT\n  op g\n  end\nend\n";
        assert!(codes(src).contains(&Code::P002));
    }

    #[test]
    fn duplicate_members() {
        let src = "class C\n  const a : NAT\n  state\n    a : INT\nend\n";
        let diags = parse(&tokenize(src)).unwrap_err();
        assert_eq!(diags[0].code, Code::P003);
        assert_eq!(diags[0].span.start(), (4, 5));
    }

    #[test]
    fn primed_name_outside_operation() {
        let src = "class C\n  state\n    x : INT\n  where\n    x' >= 0\nend\n";
        let diags = parse(&tokenize(src)).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::P004);
        assert_eq!(diags[0].span.start(), (5, 5));
        assert_eq!(codes("class C\n  init\n    x? = 1\nend\n"), [Code::P004]);
        assert_eq!(codes("class C\n  axiom k! = 1\nend\n"), [Code::P004]);
    }

    #[test]
    fn operation_declarations_need_decorations() {
        let src = "class C\n  op f\n    x : NAT\n  end\nend\n";
        assert_eq!(codes(src), [Code::P004]);
    }

    #[test]
    fn invalid_characters() {
        let diags = parse(&tokenize("class C\n  axiom 1 ∈ {1}\nend\n")).unwrap_err();
        assert_eq!(diags[0].code, Code::P005);
    }

    #[test]
    fn literal_out_of_range() {
        assert!(codes("class C\n  axiom 99999999999999999999 = 1\nend\n").contains(&Code::P006));
    }

    #[test]
    fn operation_expressions_are_left_associative() {
        let spec = parse_ok("class C\n  op t = a [] b ; c || d\nend\n");
        let expr = &spec.classes[0].op_expr_defs[0].expr;
        let OpExprKind::Compose(OpOperator::Parallel, lhs, _) = &expr.kind else {
            panic!("{expr:?}");
        };
        let OpExprKind::Compose(OpOperator::Sequential, lhs, _) = &lhs.kind else {
            panic!("{lhs:?}");
        };
        assert!(matches!(
            lhs.kind,
            OpExprKind::Compose(OpOperator::Choice, _, _)
        ));
    }

    #[test]
    fn parentheses_group_operation_expressions() {
        let spec = parse_ok("class C\n  op t = a [] (b ; c)\nend\n");
        let expr = &spec.classes[0].op_expr_defs[0].expr;
        let OpExprKind::Compose(OpOperator::Choice, _, rhs) = &expr.kind else {
            panic!("{expr:?}");
        };
        assert!(matches!(
            rhs.kind,
            OpExprKind::Compose(OpOperator::Sequential, _, _)
        ));
    }

    #[test]
    fn predicate_precedence() {
        let spec = parse_ok("class C\n  axiom not a = 1 and b or c implies d\nend\n");
        let ExprKind::Logic(LogicOp::Implies, lhs, _) = &spec.classes[0].axioms[0].kind else {
            panic!();
        };
        let ExprKind::Logic(LogicOp::Or, lhs, _) = &lhs.kind else {
            panic!();
        };
        let ExprKind::Logic(LogicOp::And, lhs, _) = &lhs.kind else {
            panic!();
        };
        assert!(
            matches!(&lhs.kind, ExprKind::Not(inner) if matches!(inner.kind, ExprKind::Compare(..)))
        );
    }

    #[test]
    fn deep_nesting_is_reported_not_overflowed() {
        let src = alloc::format!(
            "class C\n  axiom {}1{}\nend\n",
            "(".repeat(5000),
            ")".repeat(5000)
        );
        assert!(codes(&src).contains(&Code::P001));
        let src = alloc::format!("class C\n  axiom {}1\nend\n", "- ".repeat(5000));
        assert!(codes(&src).contains(&Code::P001));
        let src = alloc::format!("class C\n  axiom 1{} = 0\nend\n", " + 1".repeat(5000));
        assert!(codes(&src).contains(&Code::P001));
        let src = alloc::format!("class C\n  op t = a{}\nend\n", " [] a".repeat(5000));
        assert!(codes(&src).contains(&Code::P001));
        let src = alloc::format!("class C\n  axiom 1{} = 0\nend\n", " + 1".repeat(50));
        assert!(parse(&tokenize(&src)).is_ok());
    }

    #[test]
    fn operation_schema_sections() {
        let src = "class C\n  state\n    b : INT\n  op f\n    delta b\n    a? : NAT\n    r! : INT\n  where\n    a? <= b\n    b' = b - a?\n    r! = b\n  end\nend\n";
        let spec = parse_ok(src);
        let op = &spec.classes[0].operations[0];
        assert_eq!(op.delta[0].name, "b");
        assert_eq!(op.inputs[0].name.name, "a");
        assert_eq!(op.outputs[0].name.name, "r");
        assert_eq!(op.predicates.len(), 3);
        assert_eq!(op.span.start(), (4, 3));
        assert_eq!(op.span.end(), (12, 6));
    }
}
