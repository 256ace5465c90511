//! Defining equalities for secondary variables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::table::ClassSymbolTable;
use crate::diagnostic::{Code, Diagnostic};
use crate::span::SourceSpan;
use crate::syntax::{ClassDecl, CompareOp, Decoration, Expr, ExprKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondaryUpdate {
    pub var: String,
    pub rhs: Expr,
    /// Unprimed names the right side reads; member objects appear by field
    /// name.
    pub reads: BTreeSet<String>,
    /// Span of the defining equality.
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SecondaryUpdatePlan {
    pub class: String,
    /// One entry per secondary variable, ordered so that every entry only
    /// reads secondaries computed before it.
    pub entries: Vec<SecondaryUpdate>,
    /// Indices into the state invariants of the defining equalities.
    pub defining: BTreeSet<usize>,
}

impl SecondaryUpdatePlan {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&SecondaryUpdate> {
        self.entries.iter().find(|e| e.var == var)
    }
}

fn reads(rhs: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    rhs.walk(&mut |e| match &e.kind {
        ExprKind::Name { name, .. } => {
            out.insert(name.clone());
        }
        ExprKind::Member { object, .. } => {
            out.insert(object.name.clone());
        }
        _ => {}
    });
    out
}

pub fn plan_secondary_updates(
    class: &ClassDecl,
    table: &ClassSymbolTable,
) -> Result<SecondaryUpdatePlan, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut found: BTreeMap<&str, Vec<(usize, &Expr, &Expr)>> = BTreeMap::new();
    for v in class.secondary_vars() {
        found.insert(v.name.name.as_str(), Vec::new());
    }
    for (i, p) in class.state_predicates().iter().enumerate() {
        if let ExprKind::Compare(CompareOp::Eq, lhs, rhs) = &p.kind {
            if let ExprKind::Name {
                name,
                decoration: Decoration::None,
            } = &lhs.kind
            {
                if let Some(list) = found.get_mut(name.as_str()) {
                    list.push((i, p, rhs));
                }
            }
        }
    }

    let mut pending = Vec::new();
    let mut defining = BTreeSet::new();
    for v in class.secondary_vars() {
        let name = v.name.name.as_str();
        let list = &found[name];
        match list.as_slice() {
            [] => diags.push(Diagnostic::new(
                Code::S020,
                format!("secondary variable `{name}` has no defining equality `{name} = ...` in the state invariants"),
                v.name.span.clone(),
            )),
            [(i, p, rhs)] => {
                defining.insert(*i);
                pending.push(SecondaryUpdate {
                    var: name.into(),
                    rhs: (*rhs).clone(),
                    reads: reads(rhs),
                    span: p.span.clone(),
                });
            }
            [_, rest @ ..] => {
                for (_, p, _) in rest {
                    diags.push(Diagnostic::new(
                        Code::S021,
                        format!("secondary variable `{name}` has more than one defining equality"),
                        p.span.clone(),
                    ));
                }
            }
        }
    }

    let secondaries: BTreeSet<&str> = found.keys().copied().collect();
    let mut done: BTreeSet<String> = BTreeSet::new();
    let mut entries = Vec::new();
    loop {
        let ready = pending.iter().position(|u: &SecondaryUpdate| {
            u.reads
                .iter()
                .all(|r| !secondaries.contains(r.as_str()) || done.contains(r))
        });
        match ready {
            Some(i) => {
                let u = pending.remove(i);
                done.insert(u.var.clone());
                entries.push(u);
            }
            None => break,
        }
    }
    for u in &pending {
        // Secondaries with no definition are already reported.
        let blocked_by_cycle = u.reads.iter().all(|r| {
            !secondaries.contains(r.as_str()) || done.contains(r) || !found[r.as_str()].is_empty()
        });
        if blocked_by_cycle {
            diags.push(Diagnostic::new(
                Code::S022,
                format!(
                    "secondary variable `{}` is defined in terms of itself",
                    u.var
                ),
                u.span.clone(),
            ));
        }
    }

    if diags.is_empty() {
        Ok(SecondaryUpdatePlan {
            class: table.class.clone(),
            entries,
            defining,
        })
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sema::resolve;
    use crate::syntax::{parse_source, print_expr};

    type Located = Vec<(Code, (u32, u32))>;

    fn plan(src: &str) -> Result<SecondaryUpdatePlan, Located> {
        let spec = parse_source("t.oz", src).expect("parses");
        let tables = resolve(&spec).expect("resolves");
        let class = spec.classes.last().unwrap();
        plan_secondary_updates(class, &tables[&class.name.name])
            .map_err(|d| d.into_iter().map(|d| (d.code, d.span.start())).collect())
    }

    #[test]
    fn total_balance() {
        let src = "class Card\n  state\n    balance : INT\nend\nclass TwoCards\n  state\n    c1 : Card\n    c2 : Card\n  secondary\n    totalbalance : INT\n  where\n    c1 != c2\n    totalbalance = c1.balance + c2.balance\nend\n";
        let p = plan(src).unwrap();
        assert_eq!(p.entries.len(), 1);
        assert_eq!(p.entries[0].var, "totalbalance");
        assert_eq!(print_expr(&p.entries[0].rhs), "c1.balance + c2.balance");
        let reads: Vec<_> = p.entries[0].reads.iter().map(String::as_str).collect();
        assert_eq!(reads, ["c1", "c2"]);
        assert_eq!(p.defining.iter().copied().collect::<Vec<_>>(), [1]);
    }

    #[test]
    fn no_secondaries_gives_an_empty_plan() {
        let p = plan("class C\n  state\n    x : INT\n  where\n    x >= 0\nend\n").unwrap();
        assert!(p.is_empty() && p.defining.is_empty());
    }

    #[test]
    fn missing_definition() {
        assert_eq!(
            plan("class C\n  state\n    x : INT\n  secondary\n    t : INT\nend\n"),
            Err(alloc::vec![(Code::S020, (5, 5))])
        );
    }

    #[test]
    fn several_definitions() {
        let src = "class C\n  state\n    x : INT\n  secondary\n    t : INT\n  where\n    t = x\n    t = x + 0\nend\n";
        assert_eq!(plan(src), Err(alloc::vec![(Code::S021, (8, 5))]));
    }

    #[test]
    fn dependencies_are_ordered_and_cycles_reported() {
        let src = "class C\n  state\n    x : INT\n  secondary\n    b : INT\n    a : INT\n  where\n    b = a + 1\n    a = x\nend\n";
        let p = plan(src).unwrap();
        let order: Vec<_> = p.entries.iter().map(|e| e.var.as_str()).collect();
        assert_eq!(order, ["a", "b"]);

        let src = "class C\n  state\n  secondary\n    a : INT\n    b : INT\n  where\n    a = b\n    b = a\nend\n";
        assert_eq!(
            plan(src),
            Err(alloc::vec![(Code::S022, (7, 5)), (Code::S022, (8, 5))])
        );
    }
}
