use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::span::SourceSpan;
use crate::syntax::{TypeExpr, TypeKind, VarDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MemberKind {
    Constant,
    PrimaryVar,
    SecondaryVar,
    Operation,
    OpExprDef,
}

impl MemberKind {
    pub fn describe(self) -> &'static str {
        match self {
            MemberKind::Constant => "a constant",
            MemberKind::PrimaryVar => "a state variable",
            MemberKind::SecondaryVar => "a secondary variable",
            MemberKind::Operation => "an operation",
            MemberKind::OpExprDef => "an operation expression",
        }
    }

    pub fn is_value(self) -> bool {
        matches!(
            self,
            MemberKind::Constant | MemberKind::PrimaryVar | MemberKind::SecondaryVar
        )
    }

    pub fn is_operation(self) -> bool {
        matches!(self, MemberKind::Operation | MemberKind::OpExprDef)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub kind: MemberKind,
    /// Declared type; `None` for operations.
    pub ty: Option<TypeExpr>,
    pub span: SourceSpan,
}

/// Inputs and outputs of an operation schema, names without decoration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpSignature {
    pub inputs: Vec<VarDecl>,
    pub outputs: Vec<VarDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSymbolTable {
    pub class: String,
    pub members: BTreeMap<String, Member>,
    /// `None` when the class has no `visibility` section, in which case
    /// every member is public.
    pub visibility: Option<BTreeSet<String>>,
    /// Members whose type is another class: field name to class name.
    pub member_objects: BTreeMap<String, String>,
    /// Primary state variables in declaration order.
    pub primary_vars: Vec<String>,
    pub signatures: BTreeMap<String, OpSignature>,
    /// Parameters of the generated constructor: the class's constants, then
    /// for each `obj.INIT` the parameters of that object's class prefixed
    /// with `obj_`.
    pub constructor_params: Vec<String>,
}

impl ClassSymbolTable {
    pub fn new(class: impl Into<String>) -> Self {
        ClassSymbolTable {
            class: class.into(),
            members: BTreeMap::new(),
            visibility: None,
            member_objects: BTreeMap::new(),
            primary_vars: Vec::new(),
            signatures: BTreeMap::new(),
            constructor_params: Vec::new(),
        }
    }

    pub fn kind(&self, name: &str) -> Option<MemberKind> {
        self.members.get(name).map(|m| m.kind)
    }

    pub fn type_of(&self, name: &str) -> Option<&TypeKind> {
        self.members.get(name)?.ty.as_ref().map(|t| &t.kind)
    }

    pub fn is_private(&self, name: &str) -> bool {
        self.visibility.as_ref().is_some_and(|v| !v.contains(name))
    }

    pub fn is_primary(&self, name: &str) -> bool {
        self.kind(name) == Some(MemberKind::PrimaryVar)
    }
}
