//! Splits operation predicates into preconditions, body assignments and
//! postconditions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::table::{ClassSymbolTable, MemberKind};
use crate::diagnostic::{Code, Diagnostic};
use crate::span::SourceSpan;
use crate::syntax::{CompareOp, Decoration, Expr, ExprKind, Ident, OperationSchema, VarDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    Pre,
    Body,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyAssignment {
    /// The state variable, without its prime.
    pub target: Ident,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedOperation {
    pub name: Ident,
    pub delta: Vec<Ident>,
    pub inputs: Vec<VarDecl>,
    pub outputs: Vec<VarDecl>,
    pub pre: Vec<Expr>,
    pub body: Vec<BodyAssignment>,
    pub post: Vec<Expr>,
    /// Primary state variables outside the delta list, in declaration order.
    pub frame_vars: Vec<String>,
    /// Class of each source predicate, index for index.
    pub kinds: Vec<PredicateKind>,
    pub span: SourceSpan,
}

impl ClassifiedOperation {
    /// The right-hand side of the first postcondition `name! = rhs` whose
    /// right side mentions no output.
    pub fn output_definition(&self, name: &str) -> Option<&Expr> {
        self.post.iter().find_map(|p| match &p.kind {
            ExprKind::Compare(CompareOp::Eq, lhs, rhs)
                if is_name(lhs, name, Decoration::Output)
                    && !rhs.mentions_decoration(Decoration::Output) =>
            {
                Some(&**rhs)
            }
            _ => None,
        })
    }

    pub fn assignment(&self, var: &str) -> Option<&BodyAssignment> {
        self.body.iter().find(|a| a.target.name == var)
    }
}

fn is_name(e: &Expr, want: &str, want_decoration: Decoration) -> bool {
    matches!(&e.kind, ExprKind::Name { name, decoration } if name == want && *decoration == want_decoration)
}

pub fn classify_operation(
    op: &OperationSchema,
    table: &ClassSymbolTable,
) -> Result<ClassifiedOperation, Vec<Diagnostic>> {
    let mut diags = Vec::new();

    let mut delta = Vec::new();
    let mut in_delta = BTreeSet::new();
    for d in &op.delta {
        if !table.is_primary(&d.name) {
            let what = table
                .kind(&d.name)
                .map_or("not a member of the class", MemberKind::describe);
            diags.push(Diagnostic::new(
                Code::S010,
                format!(
                    "delta list of `{}` names `{}`, which is {what}; only primary state variables may change",
                    op.name.name, d.name
                ),
                d.span.clone(),
            ));
        } else if !in_delta.insert(d.name.as_str()) {
            diags.push(Diagnostic::new(
                Code::S003,
                format!("`{}` appears more than once in the delta list", d.name),
                d.span.clone(),
            ));
        } else {
            delta.push(d.clone());
        }
    }

    for p in &op.predicates {
        p.walk(&mut |e| {
            if let ExprKind::Name {
                name,
                decoration: Decoration::Primed,
            } = &e.kind
            {
                if table.members.contains_key(name) && !in_delta.contains(name.as_str()) {
                    diags.push(Diagnostic::new(
                        Code::S011,
                        format!(
                            "`{name}'` is primed but `{name}` is not in the delta list of `{}`",
                            op.name.name
                        ),
                        e.span.clone(),
                    ));
                }
            }
        });
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let mut pre = Vec::new();
    let mut body: Vec<BodyAssignment> = Vec::new();
    let mut post = Vec::new();
    let mut kinds = Vec::new();
    for p in &op.predicates {
        let primed = p.mentions_decoration(Decoration::Primed);
        let output = p.mentions_decoration(Decoration::Output);
        if !primed && !output {
            pre.push(p.clone());
            kinds.push(PredicateKind::Pre);
            continue;
        }
        if let ExprKind::Compare(CompareOp::Eq, lhs, rhs) = &p.kind {
            if let ExprKind::Name {
                name,
                decoration: Decoration::Primed,
            } = &lhs.kind
            {
                let assignable = in_delta.contains(name.as_str())
                    && !rhs.mentions_decoration(Decoration::Primed)
                    && !rhs.mentions_decoration(Decoration::Output)
                    && !body.iter().any(|a| &a.target.name == name);
                if assignable {
                    body.push(BodyAssignment {
                        target: Ident::new(name.clone(), lhs.span.clone()),
                        rhs: (**rhs).clone(),
                    });
                    kinds.push(PredicateKind::Body);
                    continue;
                }
            }
        }
        post.push(p.clone());
        kinds.push(PredicateKind::Post);
    }

    let frame_vars = table
        .primary_vars
        .iter()
        .filter(|v| !in_delta.contains(v.as_str()))
        .cloned()
        .collect();

    Ok(ClassifiedOperation {
        name: op.name.clone(),
        delta,
        inputs: op.inputs.clone(),
        outputs: op.outputs.clone(),
        pre,
        body,
        post,
        frame_vars,
        kinds,
        span: op.span.clone(),
    })
}

/// S012 for outputs no predicate mentions, S013 for outputs mentioned but
/// never given a value by an equality.
pub fn output_warnings(op: &ClassifiedOperation) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for out in &op.outputs {
        let name = out.name.name.as_str();
        let mentioned = op
            .post
            .iter()
            .any(|p| p.any(&mut |e| is_name(e, name, Decoration::Output)));
        if !mentioned {
            diags.push(Diagnostic::new(
                Code::S012,
                format!(
                    "output `{name}!` of `{}` is never constrained",
                    op.name.name
                ),
                out.name.span.clone(),
            ));
        } else if op.output_definition(name).is_none() {
            diags.push(Diagnostic::new(
                Code::S013,
                format!(
                    "output `{name}!` of `{}` has no defining equality `{name}! = ...`; the generated method returns None for it",
                    op.name.name
                ),
                out.name.span.clone(),
            ));
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sema::resolve;
    use crate::syntax::{parse_source, print_expr};

    fn classify(src: &str) -> Result<ClassifiedOperation, Vec<Diagnostic>> {
        let spec = parse_source("t.oz", src).expect("parses");
        let tables = resolve(&spec).expect("resolves");
        let class = &spec.classes[0];
        classify_operation(&class.operations[0], &tables[&class.name.name])
    }

    fn texts(preds: &[Expr]) -> Vec<String> {
        preds.iter().map(print_expr).collect()
    }

    const HEAD: &str =
        "class CreditCard\n  const limit : NAT\n  state\n    balance : INT\n    limit2 : INT\n";

    #[test]
    fn withdraw_matches_the_reference_translation() {
        let src = alloc::format!(
            "{HEAD}  op withdraw\n    delta balance\n    amount? : NAT\n  where\n    amount? <= balance + limit\n    balance' = balance - amount?\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        assert_eq!(texts(&c.pre), ["amount? <= balance + limit"]);
        assert_eq!(c.body.len(), 1);
        assert_eq!(c.body[0].target.name, "balance");
        assert_eq!(print_expr(&c.body[0].rhs), "balance - amount?");
        assert!(c.post.is_empty());
        assert_eq!(c.frame_vars, ["limit2"]);
        assert_eq!(c.kinds, [PredicateKind::Pre, PredicateKind::Body]);
    }

    #[test]
    fn inequality_on_primed_is_post() {
        let src = alloc::format!(
            "{HEAD}  op f\n    delta balance\n  where\n    balance' >= 0\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        assert_eq!(texts(&c.post), ["balance' >= 0"]);
        assert!(c.pre.is_empty() && c.body.is_empty());
    }

    #[test]
    fn second_assignment_to_same_variable_is_post() {
        let src = alloc::format!(
            "{HEAD}  op f\n    delta balance\n  where\n    balance' = 1\n    balance' = balance + 1\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        assert_eq!(c.kinds, [PredicateKind::Body, PredicateKind::Post]);
    }

    #[test]
    fn primed_rhs_is_post() {
        let src = alloc::format!(
            "{HEAD}  op f\n    delta balance, limit2\n  where\n    balance' = limit2'\n    limit2' = 0\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        assert_eq!(c.kinds, [PredicateKind::Post, PredicateKind::Body]);
        assert!(c.frame_vars.is_empty());
    }

    #[test]
    fn primed_outside_delta() {
        let src = alloc::format!(
            "{HEAD}  op f\n    delta balance\n  where\n    limit2' = 0\n  end\nend\n"
        );
        let d = classify(&src).unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::S011);
        assert_eq!(d[0].span.start(), (9, 5));
        assert_eq!(d[0].span.end(), (9, 12));
    }

    #[test]
    fn delta_of_constant() {
        let src = alloc::format!("{HEAD}  op f\n    delta limit\n  end\nend\n");
        let d = classify(&src).unwrap_err();
        assert_eq!(d[0].code, Code::S010);
        assert_eq!(d[0].span.start(), (7, 11));
    }

    #[test]
    fn output_only_view() {
        let src = alloc::format!(
            "{HEAD}  op f\n    bal! : INT\n  where\n    bal! = balance\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        assert_eq!(texts(&c.post), ["bal! = balance"]);
        assert_eq!(c.frame_vars, ["balance", "limit2"]);
        assert_eq!(print_expr(c.output_definition("bal").unwrap()), "balance");
        assert!(output_warnings(&c).is_empty());
    }

    #[test]
    fn output_warnings_cover_unconstrained_and_undefined() {
        let src = alloc::format!(
            "{HEAD}  op f\n    a! : INT\n    b! : INT\n  where\n    b! >= 0\n  end\nend\n"
        );
        let c = classify(&src).unwrap();
        let codes: Vec<_> = output_warnings(&c).iter().map(|d| d.code).collect();
        assert_eq!(codes, [Code::S012, Code::S013]);
    }
}
