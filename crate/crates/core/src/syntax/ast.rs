//! Span-annotated syntax tree for the dialect.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: SourceSpan) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Specification {
    pub classes: Vec<ClassDecl>,
}

impl Specification {
    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name.name == name)
    }

    /// Replaces every span with [`SourceSpan::dummy`], for comparisons that
    /// should ignore layout.
    pub fn erase_spans(&mut self) {
        for class in &mut self.classes {
            class.erase_spans();
        }
    }

    pub fn without_spans(&self) -> Specification {
        let mut copy = self.clone();
        copy.erase_spans();
        copy
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: Ident,
    /// Parsed and kept, but not used after parsing.
    pub generic_params: Vec<Ident>,
    pub visibility: Option<Vec<Ident>>,
    pub constants: Vec<VarDecl>,
    /// Constant schema predicates.
    pub axioms: Vec<Expr>,
    pub state: Option<StateBlock>,
    pub init: Option<InitBlock>,
    pub operations: Vec<OperationSchema>,
    pub op_expr_defs: Vec<OpExprDef>,
    pub span: SourceSpan,
}

impl ClassDecl {
    pub fn empty(name: Ident, span: SourceSpan) -> Self {
        ClassDecl {
            name,
            generic_params: Vec::new(),
            visibility: None,
            constants: Vec::new(),
            axioms: Vec::new(),
            state: None,
            init: None,
            operations: Vec::new(),
            op_expr_defs: Vec::new(),
            span,
        }
    }

    pub fn primary_vars(&self) -> &[VarDecl] {
        self.state.as_ref().map_or(&[], |s| &s.primary_vars)
    }

    pub fn secondary_vars(&self) -> &[VarDecl] {
        self.state.as_ref().map_or(&[], |s| &s.secondary_vars)
    }

    pub fn state_predicates(&self) -> &[Expr] {
        self.state.as_ref().map_or(&[], |s| &s.invariants)
    }

    pub fn init_predicates(&self) -> &[Expr] {
        self.init.as_ref().map_or(&[], |i| &i.predicates)
    }

    pub fn operation(&self, name: &str) -> Option<&OperationSchema> {
        self.operations.iter().find(|op| op.name.name == name)
    }

    /// Every declared member name with its span, in declaration order.
    pub fn member_names(&self) -> impl Iterator<Item = &Ident> {
        self.constants
            .iter()
            .map(|c| &c.name)
            .chain(self.primary_vars().iter().map(|v| &v.name))
            .chain(self.secondary_vars().iter().map(|v| &v.name))
            .chain(self.operations.iter().map(|o| &o.name))
            .chain(self.op_expr_defs.iter().map(|d| &d.name))
    }

    fn erase_spans(&mut self) {
        self.span = SourceSpan::dummy();
        self.name.span = SourceSpan::dummy();
        for p in &mut self.generic_params {
            p.span = SourceSpan::dummy();
        }
        for v in self.visibility.iter_mut().flatten() {
            v.span = SourceSpan::dummy();
        }
        for c in &mut self.constants {
            c.erase_spans();
        }
        for a in &mut self.axioms {
            a.erase_spans();
        }
        if let Some(state) = &mut self.state {
            for v in state
                .primary_vars
                .iter_mut()
                .chain(&mut state.secondary_vars)
            {
                v.erase_spans();
            }
            for p in &mut state.invariants {
                p.erase_spans();
            }
        }
        if let Some(init) = &mut self.init {
            for p in &mut init.predicates {
                p.erase_spans();
            }
        }
        for op in &mut self.operations {
            op.erase_spans();
        }
        for def in &mut self.op_expr_defs {
            def.name.span = SourceSpan::dummy();
            def.span = SourceSpan::dummy();
            def.expr.erase_spans();
        }
    }
}

/// `name : type`, used for constants, state variables and operation
/// inputs/outputs. Input and output names are stored without their
/// decoration; the list they live in records it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: Ident,
    pub ty: TypeExpr,
    pub span: SourceSpan,
}

impl VarDecl {
    fn erase_spans(&mut self) {
        self.name.span = SourceSpan::dummy();
        self.ty.span = SourceSpan::dummy();
        self.span = SourceSpan::dummy();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StateBlock {
    pub primary_vars: Vec<VarDecl>,
    pub secondary_vars: Vec<VarDecl>,
    pub invariants: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InitBlock {
    pub predicates: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationSchema {
    pub name: Ident,
    pub delta: Vec<Ident>,
    pub inputs: Vec<VarDecl>,
    pub outputs: Vec<VarDecl>,
    pub predicates: Vec<Expr>,
    pub span: SourceSpan,
}

impl OperationSchema {
    fn erase_spans(&mut self) {
        self.name.span = SourceSpan::dummy();
        self.span = SourceSpan::dummy();
        for d in &mut self.delta {
            d.span = SourceSpan::dummy();
        }
        for v in self.inputs.iter_mut().chain(&mut self.outputs) {
            v.erase_spans();
        }
        for p in &mut self.predicates {
            p.erase_spans();
        }
    }
}

/// `op name = <operation expression>`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpExprDef {
    pub name: Ident,
    pub expr: OpExpr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpOperator {
    /// `[]`
    Choice,
    /// `;`
    Sequential,
    /// `||`
    Parallel,
    /// `&`
    Conjunction,
}

impl OpOperator {
    pub fn symbol(self) -> &'static str {
        match self {
            OpOperator::Choice => "[]",
            OpOperator::Sequential => ";",
            OpOperator::Parallel => "||",
            OpOperator::Conjunction => "&",
        }
    }

    /// Name of the runtime combinator implementing the operator.
    pub fn combinator(self) -> &'static str {
        match self {
            OpOperator::Choice => "choice",
            OpOperator::Sequential => "sequential",
            OpOperator::Parallel => "parallel",
            OpOperator::Conjunction => "conjunction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpExpr {
    pub kind: OpExprKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpExprKind {
    /// An operation of the enclosing class.
    Ref(Ident),
    /// An operation of a member object, `object.op`.
    MemberRef {
        object: Ident,
        op: Ident,
    },
    Compose(OpOperator, Box<OpExpr>, Box<OpExpr>),
}

impl OpExpr {
    fn erase_spans(&mut self) {
        self.span = SourceSpan::dummy();
        match &mut self.kind {
            OpExprKind::Ref(name) => name.span = SourceSpan::dummy(),
            OpExprKind::MemberRef { object, op } => {
                object.span = SourceSpan::dummy();
                op.span = SourceSpan::dummy();
            }
            OpExprKind::Compose(_, l, r) => {
                l.erase_spans();
                r.erase_spans();
            }
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&OpExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a OpExpr>) {
        match &self.kind {
            OpExprKind::Compose(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
            _ => out.push(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeKind {
    Nat,
    Int,
    Bool,
    ClassRef(String),
    /// An enumerated type `{l1, l2, ...}`.
    Enumerated(Vec<Literal>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoration {
    None,
    /// `x'`, the post-state value.
    Primed,
    /// `x?`
    Input,
    /// `x!`
    Output,
}

impl Decoration {
    pub fn suffix(self) -> &'static str {
        match self {
            Decoration::None => "",
            Decoration::Primed => "'",
            Decoration::Input => "?",
            Decoration::Output => "!",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Or,
    Implies,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Name {
        name: String,
        decoration: Decoration,
    },
    Member {
        object: Ident,
        field: Ident,
    },
    Set(Vec<Expr>),
    Neg(Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Compare(CompareOp, Box<Expr>, Box<Expr>),
    In(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Logic(LogicOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Self {
        Expr { kind, span }
    }

    pub fn name(name: impl Into<String>, decoration: Decoration, span: SourceSpan) -> Self {
        Expr::new(
            ExprKind::Name {
                name: name.into(),
                decoration,
            },
            span,
        )
    }

    /// Immediate subexpressions.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Int(_)
            | ExprKind::Bool(_)
            | ExprKind::Name { .. }
            | ExprKind::Member { .. } => Vec::new(),
            ExprKind::Set(items) => items.iter().collect(),
            ExprKind::Neg(e) | ExprKind::Not(e) => alloc::vec![&**e],
            ExprKind::Arith(_, l, r)
            | ExprKind::Compare(_, l, r)
            | ExprKind::In(l, r)
            | ExprKind::Logic(_, l, r) => alloc::vec![&**l, &**r],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Int(_)
            | ExprKind::Bool(_)
            | ExprKind::Name { .. }
            | ExprKind::Member { .. } => Vec::new(),
            ExprKind::Set(items) => items.iter_mut().collect(),
            ExprKind::Neg(e) | ExprKind::Not(e) => alloc::vec![&mut **e],
            ExprKind::Arith(_, l, r)
            | ExprKind::Compare(_, l, r)
            | ExprKind::In(l, r)
            | ExprKind::Logic(_, l, r) => alloc::vec![&mut **l, &mut **r],
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    pub fn any(&self, pred: &mut impl FnMut(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn mentions_decoration(&self, decoration: Decoration) -> bool {
        self.any(
            &mut |e| matches!(&e.kind, ExprKind::Name { decoration: d, .. } if *d == decoration),
        )
    }

    /// Copy of `self` with every name for which `f` returns `Some` replaced.
    pub fn map_names(&self, f: &impl Fn(&str, Decoration, &SourceSpan) -> Option<Expr>) -> Expr {
        if let ExprKind::Name { name, decoration } = &self.kind {
            if let Some(replacement) = f(name, *decoration, &self.span) {
                return replacement;
            }
        }
        let mut copy = self.clone();
        for child in copy.children_mut() {
            *child = child.map_names(f);
        }
        copy
    }

    fn erase_spans(&mut self) {
        self.span = SourceSpan::dummy();
        if let ExprKind::Member { object, field } = &mut self.kind {
            object.span = SourceSpan::dummy();
            field.span = SourceSpan::dummy();
        }
        for child in self.children_mut() {
            child.erase_spans();
        }
    }
}
