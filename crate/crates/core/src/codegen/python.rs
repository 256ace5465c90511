//! Python rendering of predicate expressions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::sema::{ClassSymbolTable, MemberKind};
use crate::syntax::{ArithOp, CompareOp, Decoration, Expr, ExprKind, LogicOp, VarDecl};

/// Where the rendered expression is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Site {
    /// Instance-level code: invariants, constructor, updater, preconditions
    /// and method bodies. Unprimed names read `self`.
    Instance,
    /// A postcondition lambda: unprimed state reads `old`, primed state and
    /// constants read `self`, outputs read `result`.
    Post,
}

pub(crate) struct Env<'a> {
    pub table: &'a ClassSymbolTable,
    pub site: Site,
    /// Whether the code sits textually inside the class body, where Python
    /// mangles `__name` itself.
    pub in_class_body: bool,
    pub outputs: &'a [VarDecl],
}

impl Env<'_> {
    /// Attribute name of member `name` as seen from this site.
    pub fn attr(&self, name: &str) -> String {
        attr_name(self.table, name, self.in_class_body)
    }

    fn name(&self, name: &str, decoration: Decoration) -> String {
        match decoration {
            Decoration::Input => name.into(),
            Decoration::Output => {
                if self.site == Site::Post {
                    if self.outputs.len() == 1 {
                        "result".into()
                    } else {
                        format!("result[\"{name}\"]")
                    }
                } else {
                    name.into()
                }
            }
            Decoration::Primed => format!("self.{}", self.attr(name)),
            Decoration::None => {
                let receiver = if self.site == Site::Post
                    && self.table.kind(name) != Some(MemberKind::Constant)
                {
                    "old"
                } else {
                    "self"
                };
                format!("{receiver}.{}", self.attr(name))
            }
        }
    }
}

pub(crate) fn attr_name(table: &ClassSymbolTable, name: &str, in_class_body: bool) -> String {
    if !table.is_private(name) {
        name.into()
    } else if in_class_body {
        format!("__{name}")
    } else {
        format!("_{}__{name}", table.class)
    }
}

// Binding strength, loosest first. `implies` renders as `or`.
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const COMPARE: u8 = 5;
const ADD: u8 = 6;
const MUL: u8 = 7;
const UNARY: u8 = 8;
const ATOM: u8 = 9;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Logic(LogicOp::Implies | LogicOp::Or, ..) => OR,
        ExprKind::Logic(LogicOp::And, ..) => AND,
        ExprKind::Not(_) => NOT,
        ExprKind::Compare(..) | ExprKind::In(..) => COMPARE,
        ExprKind::Arith(ArithOp::Add | ArithOp::Sub, ..) => ADD,
        ExprKind::Arith(..) => MUL,
        ExprKind::Neg(_) => UNARY,
        _ => ATOM,
    }
}

pub(crate) fn render(e: &Expr, env: &Env<'_>) -> String {
    let mut out = String::new();
    write(&mut out, e, env, 0);
    out
}

fn write(out: &mut String, e: &Expr, env: &Env<'_>, min: u8) {
    let paren = precedence(e) < min;
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Int(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::Bool(true) => out.push_str("True"),
        ExprKind::Bool(false) => out.push_str("False"),
        ExprKind::Name { name, decoration } => out.push_str(&env.name(name, *decoration)),
        ExprKind::Member { object, field } => {
            let _ = write!(
                out,
                "{}.{}",
                env.name(&object.name, Decoration::None),
                field.name
            );
        }
        ExprKind::Set(items) if items.is_empty() => out.push_str("set()"),
        ExprKind::Set(items) => {
            let items: Vec<String> = items.iter().map(|i| render(i, env)).collect();
            let _ = write!(out, "{{{}}}", items.join(", "));
        }
        ExprKind::Neg(inner) => {
            out.push('-');
            let min = if matches!(inner.kind, ExprKind::Neg(_)) {
                ATOM
            } else {
                UNARY
            };
            write(out, inner, env, min);
        }
        ExprKind::Not(inner) => {
            out.push_str("not ");
            write(out, inner, env, NOT);
        }
        ExprKind::Arith(op, l, r) => {
            let (prec, sym) = match op {
                ArithOp::Add => (ADD, "+"),
                ArithOp::Sub => (ADD, "-"),
                ArithOp::Mul => (MUL, "*"),
                ArithOp::Div => (MUL, "//"),
                ArithOp::Mod => (MUL, "%"),
            };
            write(out, l, env, prec);
            let _ = write!(out, " {sym} ");
            write(out, r, env, prec + 1);
        }
        ExprKind::Compare(op, l, r) => {
            let sym = match op {
                CompareOp::Eq => "==",
                CompareOp::Neq => "!=",
                CompareOp::Lt => "<",
                CompareOp::Le => "<=",
                CompareOp::Gt => ">",
                CompareOp::Ge => ">=",
            };
            // Operands above comparison level so Python never chains.
            write(out, l, env, ADD);
            let _ = write!(out, " {sym} ");
            write(out, r, env, ADD);
        }
        ExprKind::In(l, r) => {
            write(out, l, env, ADD);
            out.push_str(" in ");
            write(out, r, env, ADD);
        }
        ExprKind::Logic(LogicOp::Implies, l, r) => {
            out.push_str("not ");
            write(out, l, env, NOT);
            out.push_str(" or ");
            write(out, r, env, OR);
        }
        ExprKind::Logic(LogicOp::Or, l, r) => {
            write(out, l, env, OR);
            out.push_str(" or ");
            write(out, r, env, AND);
        }
        ExprKind::Logic(LogicOp::And, l, r) => {
            write(out, l, env, AND);
            out.push_str(" and ");
            write(out, r, env, NOT);
        }
    }
    if paren {
        out.push(')');
    }
}
