//! Semantic analysis: name resolution, well-formedness, operation predicate
//! classification and secondary-variable update planning.

mod classify;
mod resolve;
mod secondary;
mod table;

pub use classify::{
    classify_operation, output_warnings, BodyAssignment, ClassifiedOperation, PredicateKind,
};
pub use resolve::resolve;
pub use secondary::{plan_secondary_updates, SecondaryUpdate, SecondaryUpdatePlan};
pub use table::{ClassSymbolTable, Member, MemberKind, OpSignature};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagnostic::{sort_diagnostics, Diagnostic};
use crate::syntax::Specification;

/// Everything later phases need about an accepted specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub tables: BTreeMap<String, ClassSymbolTable>,
    /// Classified operation schemas per class, in declaration order.
    pub operations: BTreeMap<String, Vec<ClassifiedOperation>>,
    pub plans: BTreeMap<String, SecondaryUpdatePlan>,
    pub warnings: Vec<Diagnostic>,
}

impl Analysis {
    pub fn table(&self, class: &str) -> &ClassSymbolTable {
        &self.tables[class]
    }

    pub fn plan(&self, class: &str) -> &SecondaryUpdatePlan {
        &self.plans[class]
    }

    pub fn operations(&self, class: &str) -> &[ClassifiedOperation] {
        self.operations.get(class).map_or(&[], Vec::as_slice)
    }
}

/// Runs every semantic phase. On error, all diagnostics (errors and
/// warnings) are returned sorted by file, span and code.
pub fn analyze(spec: &Specification) -> Result<Analysis, Vec<Diagnostic>> {
    let (tables, mut diags) = resolve::resolve_all(spec);

    let mut operations = BTreeMap::new();
    let mut plans = BTreeMap::new();
    for class in &spec.classes {
        let Some(table) = tables.get(&class.name.name) else {
            continue;
        };
        let mut classified = Vec::new();
        for op in &class.operations {
            match classify_operation(op, table) {
                Ok(c) => {
                    diags.extend(output_warnings(&c));
                    classified.push(c);
                }
                Err(d) => diags.extend(d),
            }
        }
        operations.insert(class.name.name.clone(), classified);
        match plan_secondary_updates(class, table) {
            Ok(plan) => {
                plans.insert(class.name.name.clone(), plan);
            }
            Err(d) => diags.extend(d),
        }
    }

    sort_diagnostics(&mut diags);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    Ok(Analysis {
        tables,
        operations,
        plans,
        warnings: diags,
    })
}

/// All diagnostics for `spec`; empty iff the specification is accepted
/// without warnings.
pub fn check_specification(spec: &Specification) -> Vec<Diagnostic> {
    match analyze(spec) {
        Ok(analysis) => analysis.warnings,
        Err(diags) => diags,
    }
}
