//! Canonical source printer. `parse(tokenize(pretty_print(s)))` reproduces
//! `s` up to spans.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::ast::*;

pub fn pretty_print(spec: &Specification) -> String {
    let mut out = String::new();
    for (i, class) in spec.classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_class(&mut out, class);
    }
    out
}

fn print_class(out: &mut String, class: &ClassDecl) {
    out.push_str("class ");
    out.push_str(&class.name.name);
    if !class.generic_params.is_empty() {
        let params: Vec<&str> = class
            .generic_params
            .iter()
            .map(|p| p.name.as_str())
            .collect();
        let _ = write!(out, "[{}]", params.join(", "));
    }
    out.push('\n');

    if let Some(vis) = &class.visibility {
        let names: Vec<&str> = vis.iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(out, "  visibility {}", names.join(", "));
    }
    for c in &class.constants {
        let _ = writeln!(out, "  const {}", var_decl(c, Decoration::None));
    }
    for a in &class.axioms {
        let _ = writeln!(out, "  axiom {}", print_expr(a));
    }
    if let Some(state) = &class.state {
        out.push_str("  state\n");
        for v in &state.primary_vars {
            let _ = writeln!(out, "    {}", var_decl(v, Decoration::None));
        }
        if !state.secondary_vars.is_empty() {
            out.push_str("  secondary\n");
            for v in &state.secondary_vars {
                let _ = writeln!(out, "    {}", var_decl(v, Decoration::None));
            }
        }
        if !state.invariants.is_empty() {
            out.push_str("  where\n");
            for p in &state.invariants {
                let _ = writeln!(out, "    {}", print_expr(p));
            }
        }
    }
    if let Some(init) = &class.init {
        out.push_str("  init\n");
        for p in &init.predicates {
            let _ = writeln!(out, "    {}", print_expr(p));
        }
    }
    for op in &class.operations {
        let _ = writeln!(out, "  op {}", op.name.name);
        if !op.delta.is_empty() {
            let names: Vec<&str> = op.delta.iter().map(|d| d.name.as_str()).collect();
            let _ = writeln!(out, "    delta {}", names.join(", "));
        }
        for v in &op.inputs {
            let _ = writeln!(out, "    {}", var_decl(v, Decoration::Input));
        }
        for v in &op.outputs {
            let _ = writeln!(out, "    {}", var_decl(v, Decoration::Output));
        }
        if !op.predicates.is_empty() {
            out.push_str("  where\n");
            for p in &op.predicates {
                let _ = writeln!(out, "    {}", print_expr(p));
            }
        }
        out.push_str("  end\n");
    }
    for def in &class.op_expr_defs {
        let _ = writeln!(out, "  op {} = {}", def.name.name, print_op_expr(&def.expr));
    }
    out.push_str("end\n");
}

fn var_decl(v: &VarDecl, decoration: Decoration) -> String {
    format!(
        "{}{} : {}",
        v.name.name,
        decoration.suffix(),
        print_type(&v.ty)
    )
}

fn print_literal(l: &Literal) -> String {
    match l {
        Literal::Int(v) => format!("{v}"),
        Literal::Bool(b) => format!("{b}"),
    }
}

pub(crate) fn print_type(ty: &TypeExpr) -> String {
    match &ty.kind {
        TypeKind::Nat => "NAT".into(),
        TypeKind::Int => "INT".into(),
        TypeKind::Bool => "BOOL".into(),
        TypeKind::ClassRef(name) => name.clone(),
        TypeKind::Enumerated(items) => {
            let items: Vec<String> = items.iter().map(print_literal).collect();
            format!("{{{}}}", items.join(", "))
        }
    }
}

pub fn print_op_expr(expr: &OpExpr) -> String {
    match &expr.kind {
        OpExprKind::Ref(name) => name.name.clone(),
        OpExprKind::MemberRef { object, op } => format!("{}.{}", object.name, op.name),
        OpExprKind::Compose(op, l, r) => {
            let rhs = print_op_expr(r);
            let rhs = if matches!(r.kind, OpExprKind::Compose(..)) {
                format!("({rhs})")
            } else {
                rhs
            };
            format!("{} {} {}", print_op_expr(l), op.symbol(), rhs)
        }
    }
}

// Binding strength, loosest first.
const IMPLIES: u8 = 1;
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
        ExprKind::Logic(LogicOp::Implies, ..) => IMPLIES,
        ExprKind::Logic(LogicOp::Or, ..) => OR,
        ExprKind::Logic(LogicOp::And, ..) => AND,
        ExprKind::Not(_) => NOT,
        ExprKind::Compare(..) | ExprKind::In(..) => COMPARE,
        ExprKind::Arith(ArithOp::Add | ArithOp::Sub, ..) => ADD,
        ExprKind::Arith(..) => MUL,
        ExprKind::Neg(_) => UNARY,
        _ => ATOM,
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let prec = precedence(e);
    let paren = prec < min;
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Int(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        ExprKind::Name { name, decoration } => {
            out.push_str(name);
            out.push_str(decoration.suffix());
        }
        ExprKind::Member { object, field } => {
            let _ = write!(out, "{}.{}", object.name, field.name);
        }
        ExprKind::Set(items) => {
            out.push('{');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, item, 0);
            }
            out.push('}');
        }
        ExprKind::Neg(inner) => {
            out.push('-');
            // `--` would start a comment.
            let min = if matches!(inner.kind, ExprKind::Neg(_)) {
                ATOM
            } else {
                UNARY
            };
            write_expr(out, inner, min);
        }
        ExprKind::Not(inner) => {
            out.push_str("not ");
            write_expr(out, inner, NOT);
        }
        ExprKind::Arith(op, l, r) => {
            let (prec, sym) = match op {
                ArithOp::Add => (ADD, "+"),
                ArithOp::Sub => (ADD, "-"),
                ArithOp::Mul => (MUL, "*"),
                ArithOp::Div => (MUL, "div"),
                ArithOp::Mod => (MUL, "mod"),
            };
            write_expr(out, l, prec);
            let _ = write!(out, " {sym} ");
            write_expr(out, r, prec + 1);
        }
        ExprKind::Compare(op, l, r) => {
            let sym = match op {
                CompareOp::Eq => "=",
                CompareOp::Neq => "!=",
                CompareOp::Lt => "<",
                CompareOp::Le => "<=",
                CompareOp::Gt => ">",
                CompareOp::Ge => ">=",
            };
            write_expr(out, l, ADD);
            let _ = write!(out, " {sym} ");
            write_expr(out, r, ADD);
        }
        ExprKind::In(l, r) => {
            write_expr(out, l, ADD);
            out.push_str(" in ");
            write_expr(out, r, ADD);
        }
        ExprKind::Logic(op, l, r) => match op {
            LogicOp::Implies => {
                write_expr(out, l, OR);
                out.push_str(" implies ");
                write_expr(out, r, IMPLIES);
            }
            LogicOp::Or => {
                write_expr(out, l, OR);
                out.push_str(" or ");
                write_expr(out, r, AND);
            }
            LogicOp::And => {
                write_expr(out, l, AND);
                out.push_str(" and ");
                write_expr(out, r, NOT);
            }
        },
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, tokenize};

    fn roundtrip(src: &str) -> String {
        let spec = parse(&tokenize(src)).expect("parses");
        let printed = pretty_print(&spec);
        let again = parse(&tokenize(&printed)).expect("printed text parses");
        assert_eq!(spec.without_spans(), again.without_spans(), "{printed}");
        printed
    }

    #[test]
    fn minimal_class() {
        assert_eq!(roundtrip("class C\nend"), "class C\nend\n");
    }

    #[test]
    fn choice_keeps_its_spelling() {
        let out = roundtrip("class T\n  op withdrawEither = c1.withdraw[]c2.withdraw\nend\n");
        assert!(
            out.contains("op withdrawEither = c1.withdraw [] c2.withdraw\n"),
            "{out}"
        );
    }

    #[test]
    fn right_nested_operation_expressions_are_parenthesized() {
        let out = roundtrip("class T\n  op t = a ; (b [] c)\n  op u = (a ; b) [] c\nend\n");
        assert!(out.contains("op t = a ; (b [] c)\n"));
        assert!(out.contains("op u = a ; b [] c\n"));
    }

    #[test]
    fn expression_parentheses_follow_precedence() {
        let out = roundtrip(
            "class T\n  axiom (a - (b - c)) * (d + 1) = -(-x)\n  axiom (a implies b) implies not (c or d) and e\nend\n",
        );
        assert!(
            out.contains("axiom (a - (b - c)) * (d + 1) = -(-x)\n"),
            "{out}"
        );
        assert!(
            out.contains("axiom (a implies b) implies not (c or d) and e\n"),
            "{out}"
        );
    }
}
