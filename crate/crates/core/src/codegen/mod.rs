//! Python emission for accepted specifications.

mod model;
mod python;
mod render;

pub use model::*;
pub use render::render_module;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::sema::{Analysis, ClassSymbolTable, ClassifiedOperation, SecondaryUpdatePlan};
use crate::syntax::{
    ClassDecl, CompareOp, Decoration, Expr, ExprKind, OpExpr, OpExprKind, Specification, TypeKind,
};
use python::{attr_name, render, Env, Site};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The single runtime module generated code imports.
pub const RUNTIME_MODULE: &str = "ozruntime";

/// Everything generated code takes from the runtime module.
pub const RUNTIME_IMPORTS: &[&str] = &[
    "FrozenConstantViolation",
    "choice",
    "conjunction",
    "decorate_all",
    "inv",
    "parallel",
    "post",
    "pre",
    "sequential",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodegenOptions {
    /// Emit a `kind="frame"` postcondition per variable outside the delta list.
    pub frame_checks: bool,
    /// Hex SHA-256 of the source text, recorded in the header.
    pub source_digest: Option<String>,
}

impl Default for CodegenOptions {
    fn default() -> Self {
        CodegenOptions {
            frame_checks: true,
            source_digest: None,
        }
    }
}

pub fn generate(
    spec: &Specification,
    analysis: &Analysis,
    options: &CodegenOptions,
) -> GeneratedModule {
    let mut header = vec![format!("Generated by oz2py {VERSION}. Do not edit.")];
    if let Some(digest) = &options.source_digest {
        header.push(format!("source sha256: {digest}"));
    }

    let mut validators = BTreeSet::new();
    for class in &spec.classes {
        let decls = class
            .constants
            .iter()
            .chain(class.primary_vars())
            .chain(class.secondary_vars())
            .chain(
                class
                    .operations
                    .iter()
                    .flat_map(|op| op.inputs.iter().chain(&op.outputs)),
            );
        validators.extend(decls.filter_map(|d| validator(&d.ty.kind)));
    }

    let empty = SecondaryUpdatePlan::default();
    let classes = spec
        .classes
        .iter()
        .map(|class| {
            let name = &class.name.name;
            let plan = analysis.plans.get(name).unwrap_or(&empty);
            emit_class(class, analysis, plan, options)
        })
        .collect();

    GeneratedModule {
        header,
        imports: RUNTIME_IMPORTS.to_vec(),
        validators: validators.into_iter().collect(),
        classes,
    }
}

fn validator(ty: &TypeKind) -> Option<Validator> {
    match ty {
        TypeKind::Nat => Some(Validator::Nat),
        TypeKind::Int => Some(Validator::Int),
        _ => None,
    }
}

fn validated(table: &ClassSymbolTable, var: &str, expr: String) -> String {
    match table.type_of(var).and_then(validator) {
        Some(v) => format!("{}({expr})", v.name()),
        None => expr,
    }
}

fn emit_class(
    class: &ClassDecl,
    analysis: &Analysis,
    plan: &SecondaryUpdatePlan,
    options: &CodegenOptions,
) -> GeneratedClass {
    let table = analysis.table(&class.name.name);
    let outside = Env {
        table,
        site: Site::Instance,
        in_class_body: false,
        outputs: &[],
    };
    let inside = Env {
        in_class_body: true,
        ..outside
    };

    let mut wrappers: Vec<ClassWrapper> = class
        .axioms
        .iter()
        .chain(
            class
                .state_predicates()
                .iter()
                .enumerate()
                .filter(|(i, _)| !plan.defining.contains(i))
                .map(|(_, p)| p),
        )
        .map(|p| ClassWrapper::Invariant(render(p, &outside)))
        .collect();

    let updater = (!plan.is_empty()).then(|| Updater {
        name: format!("_update_{}", class.name.name),
        assignments: plan
            .entries
            .iter()
            .map(|e| {
                (
                    outside.attr(&e.var),
                    validated(table, &e.var, render(&e.rhs, &outside)),
                )
            })
            .collect(),
    });
    if let Some(u) = &updater {
        wrappers.push(ClassWrapper::DecorateAll(u.name.clone()));
    }

    let attributes = class
        .constants
        .iter()
        .chain(class.primary_vars())
        .chain(class.secondary_vars())
        .map(|d| inside.attr(&d.name.name))
        .collect();
    let frozen = class
        .constants
        .iter()
        .map(|c| outside.attr(&c.name.name))
        .collect();

    let mut body = Vec::new();
    for c in &class.constants {
        let name = &c.name.name;
        body.push(format!(
            "self.{} = {}",
            inside.attr(name),
            validated(table, name, name.clone())
        ));
    }
    for p in class.init_predicates() {
        match &p.kind {
            ExprKind::Compare(CompareOp::Eq, lhs, rhs) => {
                if let ExprKind::Name { name, .. } = &lhs.kind {
                    body.push(format!(
                        "self.{} = {}",
                        inside.attr(name),
                        validated(table, name, render(rhs, &inside))
                    ));
                }
            }
            ExprKind::Member { object, .. } => {
                let target = &table.member_objects[&object.name];
                let args: Vec<String> = analysis
                    .table(target)
                    .constructor_params
                    .iter()
                    .map(|p| format!("{p}={}_{p}", object.name))
                    .collect();
                body.push(format!(
                    "self.{} = {target}({})",
                    inside.attr(&object.name),
                    args.join(", ")
                ));
            }
            _ => {}
        }
    }
    let constructor = Constructor {
        params: table.constructor_params.clone(),
        body,
    };

    let methods = analysis
        .operations(&class.name.name)
        .iter()
        .map(|op| emit_operation(op, table, options))
        .collect();

    let op_expr_bindings = class
        .op_expr_defs
        .iter()
        .map(|def| OpExprBinding {
            name: inside.attr(&def.name.name),
            target: render_op_expr(&def.expr, table),
            outputs: leaf_outputs(&def.expr, table, analysis),
        })
        .collect();

    GeneratedClass {
        name: class.name.name.clone(),
        updater,
        wrappers,
        attributes,
        frozen,
        constructor,
        methods,
        op_expr_bindings,
    }
}

fn emit_operation(
    op: &ClassifiedOperation,
    table: &ClassSymbolTable,
    options: &CodegenOptions,
) -> GeneratedMethod {
    let instance = Env {
        table,
        site: Site::Instance,
        in_class_body: true,
        outputs: &op.outputs,
    };
    let post_env = Env {
        site: Site::Post,
        ..instance
    };
    let inputs: Vec<String> = op.inputs.iter().map(|v| v.name.name.clone()).collect();
    let outputs: Vec<String> = op.outputs.iter().map(|v| v.name.name.clone()).collect();

    let pre = op.pre.iter().map(|p| render(p, &instance)).collect();

    let mut post_params = vec![String::from("old"), "self".into(), "result".into()];
    let frame_params = post_params.clone();
    post_params.extend(inputs.iter().cloned());
    let mut post: Vec<PostWrapper> = op
        .post
        .iter()
        .map(|p| PostWrapper {
            params: post_params.clone(),
            expr: render(p, &post_env),
            frame: false,
        })
        .collect();
    if options.frame_checks {
        // Old snapshots copy member objects, so their identity cannot be
        // compared after the call.
        let plain = op
            .frame_vars
            .iter()
            .filter(|v| !matches!(table.type_of(v), Some(TypeKind::ClassRef(_))));
        for v in plain {
            let a = instance.attr(v);
            post.push(PostWrapper {
                params: frame_params.clone(),
                expr: format!("self.{a} == old.{a}"),
                frame: true,
            });
        }
    }

    let mut body = Vec::new();
    for v in &op.inputs {
        if let Some(val) = validator(&v.ty.kind) {
            let n = &v.name.name;
            body.push(format!("{n} = {}({n})", val.name()));
        }
    }
    // Outputs are computed over the pre-state, so a primed name stands for
    // the value its assignment is about to store.
    let after =
        |name: &str, decoration: Decoration, span: &crate::span::SourceSpan| -> Option<Expr> {
            if decoration != Decoration::Primed {
                return None;
            }
            Some(match op.assignment(name) {
                Some(a) => a.rhs.clone(),
                None => Expr::name(name, Decoration::None, span.clone()),
            })
        };
    for v in &op.outputs {
        let n = &v.name.name;
        let value = match op.output_definition(n) {
            Some(rhs) => {
                let text = render(&rhs.map_names(&after), &instance);
                match validator(&v.ty.kind) {
                    Some(val) => format!("{}({text})", val.name()),
                    None => text,
                }
            }
            None => "None".into(),
        };
        body.push(format!("{n} = {value}"));
    }
    if !op.body.is_empty() {
        let targets: Vec<String> = op
            .body
            .iter()
            .map(|a| format!("self.{}", instance.attr(&a.target.name)))
            .collect();
        let values: Vec<String> = op
            .body
            .iter()
            .map(|a| validated(table, &a.target.name, render(&a.rhs, &instance)))
            .collect();
        body.push(format!("{} = {}", targets.join(", "), values.join(", ")));
    }
    match outputs.as_slice() {
        [] => {}
        [one] => body.push(format!("return {one}")),
        many => {
            let entries: Vec<String> = many.iter().map(|n| format!("\"{n}\": {n}")).collect();
            body.push(format!("return {{{}}}", entries.join(", ")));
        }
    }

    GeneratedMethod {
        name: instance.attr(&op.name.name),
        params: inputs,
        pre,
        post,
        body,
        outputs,
    }
}

fn render_op_expr(expr: &OpExpr, table: &ClassSymbolTable) -> String {
    match &expr.kind {
        OpExprKind::Ref(name) => format!("self.{}", attr_name(table, &name.name, true)),
        OpExprKind::MemberRef { object, op } => {
            format!("self.{}.{}", attr_name(table, &object.name, true), op.name)
        }
        OpExprKind::Compose(op, l, r) => format!(
            "{}({}, {})",
            op.combinator(),
            render_op_expr(l, table),
            render_op_expr(r, table)
        ),
    }
}

/// Outputs of a definition that is a single operation schema reference.
fn leaf_outputs(expr: &OpExpr, table: &ClassSymbolTable, analysis: &Analysis) -> Vec<String> {
    let signature = match &expr.kind {
        OpExprKind::Ref(name) => table.signatures.get(&name.name),
        OpExprKind::MemberRef { object, op } => table
            .member_objects
            .get(&object.name)
            .and_then(|c| analysis.tables.get(c))
            .and_then(|t| t.signatures.get(&op.name)),
        OpExprKind::Compose(..) => None,
    };
    signature.map_or_else(Vec::new, |s| {
        s.outputs.iter().map(|v| v.name.name.clone()).collect()
    })
}
