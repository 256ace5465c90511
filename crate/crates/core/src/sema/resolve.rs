//! Name resolution and the structural well-formedness checks.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::table::{ClassSymbolTable, Member, MemberKind, OpSignature};
use crate::diagnostic::{sort_diagnostics, Code, Diagnostic};
use crate::syntax::*;

/// Names the generated Python either cannot use as identifiers or uses
/// itself at module or method scope.
const RESERVED: &[&str] = &[
    // Python keywords.
    "False",
    "None",
    "True",
    "and",
    "as",
    "assert",
    "async",
    "await",
    "break",
    "class",
    "continue",
    "def",
    "del",
    "elif",
    "else",
    "except",
    "finally",
    "for",
    "from",
    "global",
    "if",
    "import",
    "in",
    "is",
    "lambda",
    "nonlocal",
    "not",
    "or",
    "pass",
    "raise",
    "return",
    "try",
    "while",
    "with",
    "yield",
    // Names the generated code relies on.
    "self",
    "old",
    "result",
    "kwargs",
    "object",
    "isinstance",
    "set",
    "int",
    "bool",
    "Nat",
    "Int",
    "pre",
    "post",
    "pos",
    "inv",
    "decorate_all",
    "choice",
    "sequential",
    "parallel",
    "conjunction",
    "FrozenConstantViolation",
    "ozruntime",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// Builds a symbol table per class, reporting every resolution problem.
pub fn resolve(
    spec: &Specification,
) -> Result<BTreeMap<String, ClassSymbolTable>, Vec<Diagnostic>> {
    let (tables, mut diags) = resolve_all(spec);
    if diags.iter().any(Diagnostic::is_error) {
        sort_diagnostics(&mut diags);
        Err(diags)
    } else {
        Ok(tables)
    }
}

pub(crate) fn resolve_all(
    spec: &Specification,
) -> (BTreeMap<String, ClassSymbolTable>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut tables = BTreeMap::new();
    let mut classes: Vec<&ClassDecl> = Vec::new();

    for class in &spec.classes {
        let name = &class.name;
        reserved(&mut diags, name, "class");
        if tables.contains_key(&name.name) {
            diags.push(Diagnostic::new(
                Code::S003,
                format!("class `{}` is defined more than once", name.name),
                name.span.clone(),
            ));
            continue;
        }
        tables.insert(name.name.clone(), build_table(class, &mut diags));
        classes.push(class);
    }

    for class in &classes {
        let table = &tables[&class.name.name];
        check_types(class, &tables, &mut diags);
        check_predicates(class, table, &tables, &mut diags);
        check_init(class, table, &mut diags);
        for def in &class.op_expr_defs {
            check_op_expr(&def.expr, table, &tables, &mut diags);
        }
    }
    check_op_expr_cycles(&classes, &tables, &mut diags);
    let cyclic = check_init_cycles(&classes, &tables, &mut diags);

    if !cyclic {
        let mut params = BTreeMap::new();
        for class in &classes {
            constructor_params(&class.name.name, spec, &tables, &mut params);
        }
        for class in &classes {
            let list = params.remove(&class.name.name).unwrap_or_default();
            let mut seen = BTreeSet::new();
            for p in &list {
                if !seen.insert(p.as_str()) {
                    diags.push(Diagnostic::new(
                        Code::S003,
                        format!(
                            "constructor of `{}` would take parameter `{p}` twice",
                            class.name.name
                        ),
                        class.name.span.clone(),
                    ));
                }
            }
            if let Some(t) = tables.get_mut(&class.name.name) {
                t.constructor_params = list;
            }
        }
    }

    (tables, diags)
}

fn reserved(diags: &mut Vec<Diagnostic>, ident: &Ident, what: &str) {
    if is_reserved(&ident.name) {
        diags.push(Diagnostic::new(
            Code::S008,
            format!(
                "{what} name `{}` is reserved in the generated Python",
                ident.name
            ),
            ident.span.clone(),
        ));
    }
}

fn build_table(class: &ClassDecl, diags: &mut Vec<Diagnostic>) -> ClassSymbolTable {
    let mut table = ClassSymbolTable::new(class.name.name.clone());

    let mut add = |table: &mut ClassSymbolTable, ident: &Ident, kind, ty: Option<&TypeExpr>| {
        reserved(diags, ident, "member");
        if table.members.contains_key(&ident.name) {
            diags.push(Diagnostic::new(
                Code::S003,
                format!("member `{}` is defined more than once", ident.name),
                ident.span.clone(),
            ));
            return false;
        }
        if let Some(TypeExpr {
            kind: TypeKind::ClassRef(target),
            ..
        }) = ty
        {
            table
                .member_objects
                .insert(ident.name.clone(), target.clone());
        }
        table.members.insert(
            ident.name.clone(),
            Member {
                kind,
                ty: ty.cloned(),
                span: ident.span.clone(),
            },
        );
        true
    };

    for c in &class.constants {
        add(&mut table, &c.name, MemberKind::Constant, Some(&c.ty));
    }
    for v in class.primary_vars() {
        if add(&mut table, &v.name, MemberKind::PrimaryVar, Some(&v.ty)) {
            table.primary_vars.push(v.name.name.clone());
        }
    }
    for v in class.secondary_vars() {
        add(&mut table, &v.name, MemberKind::SecondaryVar, Some(&v.ty));
    }
    for op in &class.operations {
        if add(&mut table, &op.name, MemberKind::Operation, None) {
            table.signatures.insert(
                op.name.name.clone(),
                OpSignature {
                    inputs: op.inputs.clone(),
                    outputs: op.outputs.clone(),
                },
            );
        }
    }
    for def in &class.op_expr_defs {
        add(&mut table, &def.name, MemberKind::OpExprDef, None);
    }

    for op in &class.operations {
        let mut seen = BTreeSet::new();
        for v in op.inputs.iter().chain(&op.outputs) {
            reserved(diags, &v.name, "communication variable");
            if !seen.insert(v.name.name.as_str()) {
                diags.push(Diagnostic::new(
                    Code::S003,
                    format!(
                        "`{}` is declared more than once among the inputs and outputs of `{}`",
                        v.name.name, op.name.name
                    ),
                    v.name.span.clone(),
                ));
            }
        }
    }

    if let Some(entries) = &class.visibility {
        let mut set = BTreeSet::new();
        for entry in entries {
            if entry.name != "INIT" && !table.members.contains_key(&entry.name) {
                diags.push(Diagnostic::new(
                    Code::S002,
                    format!(
                        "visibility list names `{}`, which is not a member of `{}`",
                        entry.name, class.name.name
                    ),
                    entry.span.clone(),
                ));
            }
            set.insert(entry.name.clone());
        }
        table.visibility = Some(set);
    }
    table
}

fn check_types(
    class: &ClassDecl,
    tables: &BTreeMap<String, ClassSymbolTable>,
    diags: &mut Vec<Diagnostic>,
) {
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
    for decl in decls {
        match &decl.ty.kind {
            TypeKind::ClassRef(name) if !tables.contains_key(name) => {
                diags.push(Diagnostic::new(
                    Code::S001,
                    format!("unknown class `{name}` in the type of `{}`", decl.name.name),
                    decl.ty.span.clone(),
                ));
            }
            TypeKind::Enumerated(items) => {
                let ints = items.iter().all(|l| matches!(l, Literal::Int(_)));
                let bools = items.iter().all(|l| matches!(l, Literal::Bool(_)));
                if !ints && !bools {
                    diags.push(Diagnostic::new(
                        Code::S004,
                        "enumerated type mixes integer and boolean literals",
                        decl.ty.span.clone(),
                    ));
                }
            }
            _ => {}
        }
    }
}

/// Best-effort static type, used only for literal and operator
/// compatibility checks.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    Set(Box<Ty>),
    Object(String),
    Unknown,
}

impl Ty {
    fn of(kind: &TypeKind) -> Ty {
        match kind {
            TypeKind::Nat | TypeKind::Int => Ty::Int,
            TypeKind::Bool => Ty::Bool,
            TypeKind::ClassRef(c) => Ty::Object(c.clone()),
            TypeKind::Enumerated(items) => match items.first() {
                Some(Literal::Int(_)) => Ty::Int,
                Some(Literal::Bool(_)) => Ty::Bool,
                None => Ty::Unknown,
            },
        }
    }

    fn compatible(&self, other: &Ty) -> bool {
        match (self, other) {
            (Ty::Unknown, _) | (_, Ty::Unknown) => true,
            (Ty::Set(a), Ty::Set(b)) => a.compatible(b),
            (a, b) => a == b,
        }
    }

    fn describe(&self) -> String {
        match self {
            Ty::Int => "an integer".into(),
            Ty::Bool => "a boolean".into(),
            Ty::Set(_) => "a set".into(),
            Ty::Object(c) => format!("a `{c}` object"),
            Ty::Unknown => "unknown".into(),
        }
    }
}

#[derive(Clone, Copy)]
enum Scope<'a> {
    Axiom,
    State,
    Init,
    Operation(&'a OperationSchema),
}

struct Checker<'a> {
    tables: &'a BTreeMap<String, ClassSymbolTable>,
    table: &'a ClassSymbolTable,
    scope: Scope<'a>,
    diags: &'a mut Vec<Diagnostic>,
}

fn check_predicates(
    class: &ClassDecl,
    table: &ClassSymbolTable,
    tables: &BTreeMap<String, ClassSymbolTable>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut run = |scope, preds: &[Expr]| {
        let mut checker = Checker {
            tables,
            table,
            scope,
            diags: &mut *diags,
        };
        for p in preds {
            checker.predicate(p);
        }
    };
    run(Scope::Axiom, &class.axioms);
    run(Scope::State, class.state_predicates());
    run(Scope::Init, class.init_predicates());
    for op in &class.operations {
        run(Scope::Operation(op), &op.predicates);
    }
}

fn is_member_init(e: &Expr) -> bool {
    matches!(&e.kind, ExprKind::Member { field, .. } if field.name == "INIT")
}

impl Checker<'_> {
    fn error(&mut self, code: Code, message: String, span: &crate::span::SourceSpan) {
        self.diags
            .push(Diagnostic::new(code, message, span.clone()));
    }

    fn predicate(&mut self, e: &Expr) {
        if matches!(self.scope, Scope::Init) && is_member_init(e) {
            if let ExprKind::Member { object, .. } = &e.kind {
                self.member_object(object);
            }
            return;
        }
        let ty = self.expr(e);
        if !ty.compatible(&Ty::Bool) {
            self.error(
                Code::S004,
                format!("a predicate must be boolean, but this is {}", ty.describe()),
                &e.span,
            );
        }
    }

    fn expect(&mut self, e: &Expr, want: &Ty) {
        let ty = self.expr(e);
        if !ty.compatible(want) {
            self.error(
                Code::S004,
                format!("expected {}, found {}", want.describe(), ty.describe()),
                &e.span,
            );
        }
    }

    fn expr(&mut self, e: &Expr) -> Ty {
        match &e.kind {
            ExprKind::Int(_) => Ty::Int,
            ExprKind::Bool(_) => Ty::Bool,
            ExprKind::Name { name, decoration } => self.name(name, *decoration, e),
            ExprKind::Member { object, field } => self.member(object, field),
            ExprKind::Set(items) => {
                let mut elem = Ty::Unknown;
                for item in items {
                    let t = self.expr(item);
                    if !t.compatible(&elem) {
                        self.error(
                            Code::S004,
                            format!(
                                "set elements must share a type: expected {}, found {}",
                                elem.describe(),
                                t.describe()
                            ),
                            &item.span,
                        );
                    } else if elem == Ty::Unknown {
                        elem = t;
                    }
                }
                Ty::Set(Box::new(elem))
            }
            ExprKind::Neg(inner) => {
                self.expect(inner, &Ty::Int);
                Ty::Int
            }
            ExprKind::Arith(_, l, r) => {
                self.expect(l, &Ty::Int);
                self.expect(r, &Ty::Int);
                Ty::Int
            }
            ExprKind::Compare(op, l, r) => {
                if matches!(op, CompareOp::Eq | CompareOp::Neq) {
                    let lt = self.expr(l);
                    let rt = self.expr(r);
                    if !lt.compatible(&rt) {
                        self.error(
                            Code::S004,
                            format!("cannot compare {} with {}", lt.describe(), rt.describe()),
                            &e.span,
                        );
                    }
                } else {
                    self.expect(l, &Ty::Int);
                    self.expect(r, &Ty::Int);
                }
                Ty::Bool
            }
            ExprKind::In(elem, set) => {
                let et = self.expr(elem);
                match self.expr(set) {
                    Ty::Set(inner) => {
                        if !et.compatible(&inner) {
                            self.error(
                                Code::S004,
                                format!(
                                    "{} cannot be a member of a set of {}",
                                    et.describe(),
                                    inner.describe()
                                ),
                                &e.span,
                            );
                        }
                    }
                    Ty::Unknown => {}
                    other => self.error(
                        Code::S004,
                        format!(
                            "right operand of `in` must be a set, found {}",
                            other.describe()
                        ),
                        &set.span,
                    ),
                }
                Ty::Bool
            }
            ExprKind::Not(inner) => {
                self.expect(inner, &Ty::Bool);
                Ty::Bool
            }
            ExprKind::Logic(_, l, r) => {
                self.expect(l, &Ty::Bool);
                self.expect(r, &Ty::Bool);
                Ty::Bool
            }
        }
    }

    fn name(&mut self, name: &str, decoration: Decoration, e: &Expr) -> Ty {
        match decoration {
            Decoration::Input | Decoration::Output => {
                let Scope::Operation(op) = self.scope else {
                    // Rejected by the parser already.
                    return Ty::Unknown;
                };
                let (list, what) = if decoration == Decoration::Input {
                    (&op.inputs, "an input")
                } else {
                    (&op.outputs, "an output")
                };
                match list.iter().find(|v| v.name.name == name) {
                    Some(v) => Ty::of(&v.ty.kind),
                    None => {
                        self.error(
                            Code::S001,
                            format!(
                                "unresolved name `{name}{}`: not declared as {what} of `{}`",
                                decoration.suffix(),
                                op.name.name
                            ),
                            &e.span,
                        );
                        Ty::Unknown
                    }
                }
            }
            Decoration::None | Decoration::Primed => {
                let Some(member) = self.table.members.get(name) else {
                    self.error(
                        Code::S001,
                        format!("unresolved name `{name}{}`", decoration.suffix()),
                        &e.span,
                    );
                    return Ty::Unknown;
                };
                if !member.kind.is_value() {
                    self.error(
                        Code::S004,
                        format!("`{name}` is {}, not a value", member.kind.describe()),
                        &e.span,
                    );
                    return Ty::Unknown;
                }
                if matches!(self.scope, Scope::Axiom) && member.kind != MemberKind::Constant {
                    self.error(
                        Code::S001,
                        format!(
                            "unresolved name `{name}`: constant axioms may only mention constants, and `{name}` is {}",
                            member.kind.describe()
                        ),
                        &e.span,
                    );
                    return Ty::Unknown;
                }
                member.ty.as_ref().map_or(Ty::Unknown, |t| Ty::of(&t.kind))
            }
        }
    }

    /// Resolves `object` as a member object, returning its class.
    fn member_object(&mut self, object: &Ident) -> Option<&ClassSymbolTable> {
        let tables = self.tables;
        match self.table.members.get(&object.name) {
            None => {
                self.error(
                    Code::S001,
                    format!("unresolved name `{}`", object.name),
                    &object.span,
                );
                None
            }
            Some(m) if matches!(self.scope, Scope::Axiom) && m.kind != MemberKind::Constant => {
                self.error(
                    Code::S001,
                    format!(
                        "unresolved name `{}`: constant axioms may only mention constants",
                        object.name
                    ),
                    &object.span,
                );
                None
            }
            Some(_) => match self.table.member_objects.get(&object.name) {
                Some(class) => tables.get(class),
                None => {
                    self.error(
                        Code::S004,
                        format!("`{}` is not an object, so it has no members", object.name),
                        &object.span,
                    );
                    None
                }
            },
        }
    }

    fn member(&mut self, object: &Ident, field: &Ident) -> Ty {
        if field.name == "INIT" {
            self.error(
                Code::S001,
                format!(
                    "`{}.INIT` may only appear on its own as a predicate of the `init` schema",
                    object.name
                ),
                &field.span,
            );
            return Ty::Unknown;
        }
        let Some(target) = self.member_object(object) else {
            return Ty::Unknown;
        };
        match target.members.get(&field.name) {
            None => {
                let message = format!(
                    "unresolved name `{}`: class `{}` has no member `{}`",
                    field.name, target.class, field.name
                );
                self.error(Code::S001, message, &field.span);
                Ty::Unknown
            }
            Some(m) if !m.kind.is_value() => {
                let message = format!(
                    "`{}.{}` is {}, not a value",
                    object.name,
                    field.name,
                    m.kind.describe()
                );
                self.error(Code::S004, message, &field.span);
                Ty::Unknown
            }
            Some(m) => {
                let ty = m.ty.as_ref().map_or(Ty::Unknown, |t| Ty::of(&t.kind));
                if target.is_private(&field.name) {
                    let message =
                        format!("`{}` is private to class `{}`", field.name, target.class);
                    self.error(Code::S007, message, &field.span);
                }
                ty
            }
        }
    }
}

fn check_init(class: &ClassDecl, table: &ClassSymbolTable, diags: &mut Vec<Diagnostic>) {
    for pred in class.init_predicates() {
        let ok = match &pred.kind {
            ExprKind::Compare(CompareOp::Eq, lhs, _) => matches!(
                &lhs.kind,
                ExprKind::Name { name, decoration: Decoration::None } if table.is_primary(name)
            ),
            ExprKind::Member { object, field } => {
                field.name == "INIT" && table.member_objects.contains_key(&object.name)
            }
            _ => false,
        };
        if !ok {
            diags.push(Diagnostic::new(
                Code::S030,
                "an INIT predicate must be `state_variable = expression` or `object.INIT`",
                pred.span.clone(),
            ));
        }
    }
}

fn check_op_expr(
    expr: &OpExpr,
    table: &ClassSymbolTable,
    tables: &BTreeMap<String, ClassSymbolTable>,
    diags: &mut Vec<Diagnostic>,
) {
    for leaf in expr.leaves() {
        match &leaf.kind {
            OpExprKind::Ref(name) => match table.kind(&name.name) {
                None => diags.push(Diagnostic::new(
                    Code::S001,
                    format!("unresolved operation `{}`", name.name),
                    name.span.clone(),
                )),
                Some(k) if !k.is_operation() => diags.push(Diagnostic::new(
                    Code::S004,
                    format!("`{}` is {}, not an operation", name.name, k.describe()),
                    name.span.clone(),
                )),
                Some(_) => {}
            },
            OpExprKind::MemberRef { object, op } => {
                let Some(class) = table.member_objects.get(&object.name) else {
                    let message = match table.kind(&object.name) {
                        None => format!("unresolved name `{}`", object.name),
                        Some(_) => format!("`{}` is not an object", object.name),
                    };
                    let code = if table.kind(&object.name).is_none() {
                        Code::S001
                    } else {
                        Code::S004
                    };
                    diags.push(Diagnostic::new(code, message, object.span.clone()));
                    continue;
                };
                let Some(target) = tables.get(class) else {
                    continue;
                };
                match target.kind(&op.name) {
                    None => diags.push(Diagnostic::new(
                        Code::S001,
                        format!("class `{class}` has no operation `{}`", op.name),
                        op.span.clone(),
                    )),
                    Some(k) if !k.is_operation() => diags.push(Diagnostic::new(
                        Code::S004,
                        format!(
                            "`{}.{}` is {}, not an operation",
                            object.name,
                            op.name,
                            k.describe()
                        ),
                        op.span.clone(),
                    )),
                    Some(_) if target.is_private(&op.name) => diags.push(Diagnostic::new(
                        Code::S007,
                        format!("operation `{}` is private to class `{class}`", op.name),
                        op.span.clone(),
                    )),
                    Some(_) => {}
                }
            }
            OpExprKind::Compose(..) => unreachable!("leaves are never compositions"),
        }
    }
}

type Node = (String, String);

fn op_expr_edges(
    classes: &[&ClassDecl],
    tables: &BTreeMap<String, ClassSymbolTable>,
) -> BTreeMap<Node, Vec<Node>> {
    let mut edges = BTreeMap::new();
    for class in classes {
        let table = &tables[&class.name.name];
        for def in &class.op_expr_defs {
            let mut out = Vec::new();
            for leaf in def.expr.leaves() {
                let target = match &leaf.kind {
                    OpExprKind::Ref(name) => Some((class.name.name.clone(), name.name.clone())),
                    OpExprKind::MemberRef { object, op } => table
                        .member_objects
                        .get(&object.name)
                        .map(|c| (c.clone(), op.name.clone())),
                    OpExprKind::Compose(..) => None,
                };
                if let Some((c, n)) = target {
                    let is_def = tables
                        .get(&c)
                        .is_some_and(|t| t.kind(&n) == Some(MemberKind::OpExprDef));
                    if is_def {
                        out.push((c, n));
                    }
                }
            }
            edges.insert((class.name.name.clone(), def.name.name.clone()), out);
        }
    }
    edges
}

fn reaches<N: Ord + Clone>(edges: &BTreeMap<N, Vec<N>>, from: &N, to: &N) -> bool {
    let mut stack: Vec<N> = edges.get(from).cloned().unwrap_or_default();
    let mut seen = BTreeSet::new();
    while let Some(n) = stack.pop() {
        if &n == to {
            return true;
        }
        if seen.insert(n.clone()) {
            if let Some(next) = edges.get(&n) {
                stack.extend(next.iter().cloned());
            }
        }
    }
    false
}

fn check_op_expr_cycles(
    classes: &[&ClassDecl],
    tables: &BTreeMap<String, ClassSymbolTable>,
    diags: &mut Vec<Diagnostic>,
) {
    let edges = op_expr_edges(classes, tables);
    for class in classes {
        for def in &class.op_expr_defs {
            let node = (class.name.name.clone(), def.name.name.clone());
            if reaches(&edges, &node, &node) {
                diags.push(Diagnostic::new(
                    Code::S006,
                    format!(
                        "operation expression `{}` is defined in terms of itself",
                        def.name.name
                    ),
                    def.name.span.clone(),
                ));
            }
        }
    }
}

fn init_objects(class: &ClassDecl) -> impl Iterator<Item = (&Ident, &Expr)> {
    class
        .init_predicates()
        .iter()
        .filter_map(|p| match &p.kind {
            ExprKind::Member { object, field } if field.name == "INIT" => Some((object, p)),
            _ => None,
        })
}

/// Reports member objects whose initialization would recurse forever.
/// Returns whether any cycle was found.
fn check_init_cycles(
    classes: &[&ClassDecl],
    tables: &BTreeMap<String, ClassSymbolTable>,
    diags: &mut Vec<Diagnostic>,
) -> bool {
    let mut edges: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for class in classes {
        let table = &tables[&class.name.name];
        let targets = init_objects(class)
            .filter_map(|(obj, _)| table.member_objects.get(&obj.name).cloned())
            .collect();
        edges.insert(class.name.name.clone(), targets);
    }
    let mut found = false;
    for class in classes {
        let table = &tables[&class.name.name];
        for (obj, pred) in init_objects(class) {
            let Some(target) = table.member_objects.get(&obj.name) else {
                continue;
            };
            if *target == class.name.name || reaches(&edges, target, &class.name.name) {
                found = true;
                diags.push(Diagnostic::new(
                    Code::S031,
                    format!(
                        "initializing `{}` constructs a `{target}`, whose initialization leads back to `{}`",
                        obj.name, class.name.name
                    ),
                    pred.span.clone(),
                ));
            }
        }
    }
    found
}

fn constructor_params(
    class: &str,
    spec: &Specification,
    tables: &BTreeMap<String, ClassSymbolTable>,
    memo: &mut BTreeMap<String, Vec<String>>,
) -> Vec<String> {
    if let Some(p) = memo.get(class) {
        return p.clone();
    }
    let (Some(decl), Some(table)) = (spec.class(class), tables.get(class)) else {
        return Vec::new();
    };
    let mut params: Vec<String> = decl.constants.iter().map(|c| c.name.name.clone()).collect();
    for (obj, _) in init_objects(decl) {
        if let Some(target) = table.member_objects.get(&obj.name) {
            for p in constructor_params(target, spec, tables, memo) {
                params.push(format!("{}_{p}", obj.name));
            }
        }
    }
    memo.insert(class.into(), params.clone());
    params
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    fn diags(src: &str) -> Vec<(Code, (u32, u32))> {
        let spec = parse_source("t.oz", src).expect("parses");
        match resolve(&spec) {
            Ok(_) => Vec::new(),
            Err(d) => d.into_iter().map(|d| (d.code, d.span.start())).collect(),
        }
    }

    const CARD: &str = "class CreditCard
  const limit : NAT
  axiom limit in {1000, 2000, 3000}
  state
    balance : INT
  where
    balance + limit >= 0
  init
    balance = 0
  op withdraw
    delta balance
    amount? : NAT
  where
    amount? <= balance + limit
    balance' = balance - amount?
  end
  op deposit
    delta balance
    amount? : NAT
  where
    balance' = balance + amount?
  end
  op withdrawAvail
    delta balance
    amount! : NAT
  where
    amount! = balance + limit
    balance' = -limit
  end
end
";

    #[test]
    fn credit_card_table() {
        let spec = parse_source("t.oz", CARD).unwrap();
        let tables = resolve(&spec).unwrap();
        let t = &tables["CreditCard"];
        assert_eq!(t.kind("limit"), Some(MemberKind::Constant));
        assert_eq!(t.type_of("limit"), Some(&TypeKind::Nat));
        assert_eq!(t.kind("balance"), Some(MemberKind::PrimaryVar));
        assert_eq!(t.type_of("balance"), Some(&TypeKind::Int));
        for op in ["withdraw", "deposit", "withdrawAvail"] {
            assert_eq!(t.kind(op), Some(MemberKind::Operation));
        }
        assert_eq!(t.members.len(), 5);
        assert!(t.visibility.is_none());
        assert_eq!(t.constructor_params, ["limit"]);
    }

    #[test]
    fn resolve_is_idempotent() {
        let spec = parse_source("t.oz", CARD).unwrap();
        assert_eq!(resolve(&spec).unwrap(), resolve(&spec).unwrap());
    }

    #[test]
    fn member_objects_and_nested_constructor_params() {
        let src = alloc::format!(
            "{CARD}\nclass TwoCards\n  state\n    c1 : CreditCard\n    c2 : CreditCard\n  init\n    c1.INIT\n    c2.INIT\nend\n"
        );
        let spec = parse_source("t.oz", &src).unwrap();
        let tables = resolve(&spec).unwrap();
        let t = &tables["TwoCards"];
        let objs: Vec<_> = t
            .member_objects
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        assert_eq!(objs, [("c1", "CreditCard"), ("c2", "CreditCard")]);
        assert_eq!(t.constructor_params, ["c1_limit", "c2_limit"]);
    }

    #[test]
    fn visibility_ghost() {
        assert_eq!(
            diags("class C\n  visibility ghost\nend\n"),
            [(Code::S002, (2, 14))]
        );
        assert!(diags("class C\n  visibility INIT\nend\n").is_empty());
    }

    #[test]
    fn unresolved_names() {
        let src = "class C\n  state\n    x : INT\n  op f\n    delta x\n    a? : NAT\n  where\n    x' = x + amount\n  end\nend\n";
        assert_eq!(diags(src), [(Code::S001, (8, 14))]);
        let src = "class C\n  op f\n  where\n    y! = 1\n  end\nend\n";
        assert_eq!(diags(src), [(Code::S001, (4, 5))]);
    }

    #[test]
    fn axioms_only_see_constants() {
        let src = "class C\n  const k : NAT\n  axiom k < x\n  state\n    x : INT\nend\n";
        assert_eq!(diags(src), [(Code::S001, (3, 13))]);
    }

    #[test]
    fn type_mismatches() {
        assert_eq!(
            diags("class C\n  const k : NAT\n  axiom k = true\nend\n"),
            [(Code::S004, (3, 9))]
        );
        assert_eq!(
            diags("class C\n  const k : NAT\n  axiom k + 1\nend\n"),
            [(Code::S004, (3, 9))]
        );
        assert_eq!(
            diags("class C\n  const k : BOOL\n  axiom k in {1, 2}\nend\n"),
            [(Code::S004, (3, 9))]
        );
        assert_eq!(
            diags("class C\n  const k : NAT\n  axiom k and true\nend\n"),
            [(Code::S004, (3, 9))]
        );
    }

    #[test]
    fn operations_are_not_values() {
        let src = "class C\n  op f\n  end\n  op g\n  where\n    f = 1\n  end\nend\n";
        assert_eq!(diags(src), [(Code::S004, (6, 5))]);
    }

    #[test]
    fn reserved_names() {
        assert_eq!(diags("class Nat\nend\n"), [(Code::S008, (1, 7))]);
        assert_eq!(
            diags("class C\n  const self : NAT\nend\n"),
            [(Code::S008, (2, 9))]
        );
        assert_eq!(
            diags("class C\n  op f\n    lambda? : NAT\n  end\nend\n"),
            [(Code::S008, (3, 5))]
        );
    }

    #[test]
    fn duplicate_class_and_communication_names() {
        assert_eq!(
            diags("class C\nend\nclass C\nend\n"),
            [(Code::S003, (3, 7))]
        );
        let src = "class C\n  op f\n    a? : NAT\n    a! : NAT\n  where\n    a! = a?\n  end\nend\n";
        assert_eq!(diags(src), [(Code::S003, (4, 5))]);
    }

    #[test]
    fn unknown_class_type() {
        assert_eq!(
            diags("class C\n  state\n    d : Missing\nend\n"),
            [(Code::S001, (3, 9))]
        );
    }

    #[test]
    fn private_members_of_other_classes() {
        let src = "class A\n  visibility f\n  state\n    x : INT\n  op f\n  end\n  op g\n  end\nend\nclass B\n  state\n    a : A\n    y : INT\n  where\n    y = a.x\n  op h = a.f [] a.g\nend\n";
        assert_eq!(diags(src), [(Code::S007, (15, 11)), (Code::S007, (16, 19))]);
    }

    #[test]
    fn op_expr_leaves() {
        let src = "class C\n  state\n    x : INT\n  op f = g [] x\nend\n";
        assert_eq!(diags(src), [(Code::S001, (4, 10)), (Code::S004, (4, 15))]);
    }

    #[test]
    fn op_expr_cycles() {
        let src = "class C\n  op f = g\n  op g = f\n  op h = h [] f\nend\n";
        assert_eq!(
            diags(src),
            [
                (Code::S006, (2, 6)),
                (Code::S006, (3, 6)),
                (Code::S006, (4, 6))
            ]
        );
    }

    #[test]
    fn init_shape() {
        let src = "class C\n  state\n    x : INT\n  init\n    x >= 0\n    0 = x\nend\n";
        assert_eq!(diags(src), [(Code::S030, (5, 5)), (Code::S030, (6, 5))]);
    }

    #[test]
    fn init_cycles() {
        let src = "class A\n  state\n    b : B\n  init\n    b.INIT\nend\nclass B\n  state\n    a : A\n  init\n    a.INIT\nend\n";
        assert_eq!(diags(src), [(Code::S031, (5, 5)), (Code::S031, (11, 5))]);
    }

    #[test]
    fn init_member_reference_outside_init() {
        let src = "class A\nend\nclass B\n  state\n    a : A\n  where\n    a.INIT\nend\n";
        assert_eq!(diags(src), [(Code::S001, (7, 7))]);
    }
}
