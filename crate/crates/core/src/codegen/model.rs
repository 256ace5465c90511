//! The generated module before layout. Expressions are already Python text.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Validator {
    Nat,
    Int,
}

impl Validator {
    pub fn name(self) -> &'static str {
        match self {
            Validator::Nat => "Nat",
            Validator::Int => "Int",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedModule {
    /// Comment lines, without the leading `# `.
    pub header: Vec<String>,
    /// Names imported from the runtime module.
    pub imports: Vec<&'static str>,
    pub validators: Vec<Validator>,
    pub classes: Vec<GeneratedClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassWrapper {
    /// `@inv(lambda self: <expr>)`
    Invariant(String),
    /// `@decorate_all(<updater>)`
    DecorateAll(String),
}

/// Module-level function recomputing secondary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Updater {
    pub name: String,
    /// `(attribute, value)` pairs in dependency order.
    pub assignments: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedClass {
    pub name: String,
    pub updater: Option<Updater>,
    /// Outermost first.
    pub wrappers: Vec<ClassWrapper>,
    /// Class attributes initialized to `None`.
    pub attributes: Vec<String>,
    /// Attribute names of constants, as stored in the instance dictionary.
    pub frozen: Vec<String>,
    pub constructor: Constructor,
    pub methods: Vec<GeneratedMethod>,
    pub op_expr_bindings: Vec<OpExprBinding>,
}

impl GeneratedClass {
    pub fn invariant_count(&self) -> usize {
        self.wrappers
            .iter()
            .filter(|w| matches!(w, ClassWrapper::Invariant(_)))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructor {
    pub params: Vec<String>,
    pub body: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostWrapper {
    pub params: Vec<String>,
    pub expr: String,
    pub frame: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedMethod {
    pub name: String,
    /// Parameters after `self`.
    pub params: Vec<String>,
    /// Precondition lambda bodies; the lambdas take `self` and `params`.
    pub pre: Vec<String>,
    pub post: Vec<PostWrapper>,
    pub body: Vec<String>,
    /// Output names, `!` stripped.
    pub outputs: Vec<String>,
}

/// `def name(self, **kwargs): return <call>(**kwargs)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpExprBinding {
    pub name: String,
    pub target: String,
    pub outputs: Vec<String>,
}
