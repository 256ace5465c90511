use std::collections::BTreeSet;

use oz2py_core::codegen::{generate, ClassWrapper, CodegenOptions};
use oz2py_core::sema::{analyze, resolve, PredicateKind};
use oz2py_core::syntax::*;
use oz2py_core::{compile, Code, SourceSpan};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn sp() -> SourceSpan {
    SourceSpan::dummy()
}

fn ident(name: impl Into<String>) -> Ident {
    Ident::new(name, sp())
}

fn e(kind: ExprKind) -> Expr {
    Expr::new(kind, sp())
}

fn decoration(decorated: bool) -> BoxedStrategy<Decoration> {
    if decorated {
        prop_oneof![
            Just(Decoration::None),
            Just(Decoration::Primed),
            Just(Decoration::Input),
            Just(Decoration::Output),
        ]
        .boxed()
    } else {
        Just(Decoration::None).boxed()
    }
}

fn expr(decorated: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..100_000).prop_map(|v| e(ExprKind::Int(v))),
        any::<bool>().prop_map(|b| e(ExprKind::Bool(b))),
        ("[a-e][a-z0-9]{0,2}", decoration(decorated)).prop_filter_map("keyword", |(n, d)| {
            Keyword::lookup(&n)
                .is_none()
                .then(|| Expr::name(n, d, sp()))
        }),
        ("c[0-9]", "[f-h][0-9]").prop_map(|(o, f)| e(ExprKind::Member {
            object: ident(o),
            field: ident(f),
        })),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let b = |x: Expr| Box::new(x);
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(|v| e(ExprKind::Set(v))),
            inner.clone().prop_map(move |x| e(ExprKind::Neg(b(x)))),
            inner.clone().prop_map(move |x| e(ExprKind::Not(b(x)))),
            (
                prop_oneof![
                    Just(ArithOp::Add),
                    Just(ArithOp::Sub),
                    Just(ArithOp::Mul),
                    Just(ArithOp::Div),
                    Just(ArithOp::Mod)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(move |(op, l, r)| e(ExprKind::Arith(op, b(l), b(r)))),
            (
                prop_oneof![
                    Just(CompareOp::Eq),
                    Just(CompareOp::Neq),
                    Just(CompareOp::Lt),
                    Just(CompareOp::Le),
                    Just(CompareOp::Gt),
                    Just(CompareOp::Ge)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(move |(op, l, r)| e(ExprKind::Compare(op, b(l), b(r)))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| e(ExprKind::In(b(l), b(r)))),
            (
                prop_oneof![
                    Just(LogicOp::And),
                    Just(LogicOp::Or),
                    Just(LogicOp::Implies)
                ],
                inner.clone(),
                inner
            )
                .prop_map(move |(op, l, r)| e(ExprKind::Logic(op, b(l), b(r)))),
        ]
    })
}

fn op_expr() -> impl Strategy<Value = OpExpr> {
    let leaf = prop_oneof![
        "[f-h][0-9]".prop_map(|n| OpExpr {
            kind: OpExprKind::Ref(ident(n)),
            span: sp()
        }),
        ("c[0-9]", "[f-h][0-9]").prop_map(|(o, n)| OpExpr {
            kind: OpExprKind::MemberRef {
                object: ident(o),
                op: ident(n)
            },
            span: sp()
        }),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        (
            prop_oneof![
                Just(OpOperator::Choice),
                Just(OpOperator::Sequential),
                Just(OpOperator::Parallel),
                Just(OpOperator::Conjunction)
            ],
            inner.clone(),
            inner,
        )
            .prop_map(|(op, l, r)| OpExpr {
                kind: OpExprKind::Compose(op, Box::new(l), Box::new(r)),
                span: sp(),
            })
    })
}

fn type_expr() -> impl Strategy<Value = TypeExpr> {
    let kind = prop_oneof![
        Just(TypeKind::Nat),
        Just(TypeKind::Int),
        Just(TypeKind::Bool),
        "[A-Z][a-z]{1,4}".prop_map(TypeKind::ClassRef),
        prop::collection::vec(
            prop_oneof![
                (-1000i64..1000).prop_map(Literal::Int),
                any::<bool>().prop_map(Literal::Bool)
            ],
            1..4
        )
        .prop_map(TypeKind::Enumerated),
    ];
    kind.prop_filter(
        "type names",
        |k| !matches!(k, TypeKind::ClassRef(n) if n == "NAT" || n == "INT" || n == "BOOL"),
    )
    .prop_map(|kind| TypeExpr { kind, span: sp() })
}

fn decls(prefix: &'static str, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<VarDecl>> {
    prop::collection::vec(type_expr(), n).prop_map(move |tys| {
        tys.into_iter()
            .enumerate()
            .map(|(i, ty)| VarDecl {
                name: ident(format!("{prefix}{i}")),
                ty,
                span: sp(),
            })
            .collect()
    })
}

fn operation(index: usize) -> impl Strategy<Value = OperationSchema> {
    (
        prop::collection::vec("v[0-3]", 0..3),
        decls("a", 0..3),
        decls("r", 0..3),
        prop::collection::vec(expr(true), 0..4),
    )
        .prop_map(
            move |(delta, inputs, outputs, predicates)| OperationSchema {
                name: ident(format!("op{index}")),
                delta: delta.into_iter().map(ident).collect(),
                inputs,
                outputs,
                predicates,
                span: sp(),
            },
        )
}

fn class_decl() -> impl Strategy<Value = ClassDecl> {
    (
        "[A-Z][a-z]{0,5}",
        prop::collection::vec("[A-Z]", 0..2),
        prop::option::of(prop::collection::vec("[a-z][a-z0-9]{0,3}", 1..3)),
        decls("k", 0..3),
        prop::collection::vec(expr(false), 0..3),
        prop::option::of((
            decls("v", 0..3),
            decls("s", 0..2),
            prop::collection::vec(expr(false), 0..3),
        )),
        prop::option::of(prop::collection::vec(expr(false), 0..3)),
        prop::collection::vec(any::<prop::sample::Index>(), 0..3),
        prop::collection::vec(op_expr(), 0..3),
    )
        .prop_filter("keywords", |t| {
            Keyword::lookup(&t.0).is_none()
                && t.2.iter().flatten().all(|n| Keyword::lookup(n).is_none())
        })
        .prop_flat_map(
            |(name, generics, vis, constants, axioms, state, init, ops, defs)| {
                let ops: Vec<_> = (0..ops.len()).map(operation).collect();
                (
                    Just((name, generics, vis, constants, axioms, state, init, defs)),
                    ops,
                )
            },
        )
        .prop_map(
            |((name, generics, vis, constants, axioms, state, init, defs), ops)| ClassDecl {
                name: ident(name),
                generic_params: generics.into_iter().map(ident).collect(),
                visibility: vis.map(|v| v.into_iter().map(ident).collect()),
                constants,
                axioms,
                state: state.map(|(primary_vars, secondary_vars, invariants)| StateBlock {
                    primary_vars,
                    secondary_vars,
                    invariants,
                }),
                init: init.map(|predicates| InitBlock { predicates }),
                operations: ops,
                op_expr_defs: defs
                    .into_iter()
                    .enumerate()
                    .map(|(i, expr)| OpExprDef {
                        name: ident(format!("def{i}")),
                        expr,
                        span: sp(),
                    })
                    .collect(),
                span: sp(),
            },
        )
}

/// Span positions lie on the text: lines `1..=n+1`, columns within the
/// line counting its terminating newline, plus one past the end.
fn span_in_bounds(span: &SourceSpan, text: &str) -> bool {
    let lines: Vec<usize> = text.split('\n').map(|l| l.chars().count() + 1).collect();
    let ok = |(line, col): (u32, u32)| {
        line >= 1
            && col >= 1
            && lines
                .get(line as usize - 1)
                .map_or(line as usize == lines.len() + 1 && col == 1, |len| {
                    col as usize <= len + 1
                })
    };
    ok(span.start()) && ok(span.end()) && span.start() <= span.end()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pretty_print_round_trips(class in class_decl(), other in class_decl()) {
        let spec = Specification { classes: vec![class, other] };
        let printed = pretty_print(&spec);
        let parsed = parse(&tokenize(&printed));
        prop_assert!(parsed.is_ok(), "{printed}\n{parsed:?}");
        prop_assert_eq!(parsed.unwrap().without_spans(), spec.without_spans());
    }

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(p in expr(true)) {
        let text = format!("class C\n  op f\n  where\n    {}\n  end\nend\n", print_expr(&p));
        let spec = parse(&tokenize(&text)).expect("parses");
        let mut back = spec.classes[0].operations[0].predicates[0].clone();
        let mut want = p.clone();
        let wrap = |x: &mut Expr| {
            let s = Specification { classes: vec![ClassDecl { axioms: vec![x.clone()], ..ClassDecl::empty(ident("C"), sp()) }] };
            *x = s.without_spans().classes[0].axioms[0].clone();
        };
        wrap(&mut back);
        wrap(&mut want);
        prop_assert_eq!(back, want);
    }

    #[test]
    fn parser_is_total(text in "(?s).{0,300}") {
        match parse_source("fuzz.oz", &text) {
            Ok(_) => {}
            Err(diags) => {
                prop_assert!(!diags.is_empty());
                for d in &diags {
                    prop_assert!(span_in_bounds(&d.span, &text), "{d} in {text:?}");
                }
            }
        }
    }

    #[test]
    fn tokens_cover_the_text(text in "[a-z?!' \n:=<>(){}\\[\\]|&;.,0-9+*-]{0,200}") {
        let tokens = tokenize(&text);
        let mut last = 0;
        for t in &tokens {
            prop_assert!(t.offset >= last);
            prop_assert_eq!(&text[t.offset..t.offset + t.lexeme.len()], t.lexeme.as_str());
            prop_assert!(span_in_bounds(&t.span, &text));
            last = t.offset + t.lexeme.len();
        }
        // Everything between tokens is blank or a comment.
        let mut rest = String::new();
        let mut pos = 0;
        for t in &tokens {
            rest.push_str(&text[pos..t.offset]);
            pos = t.offset + t.lexeme.len();
        }
        rest.push_str(&text[pos..]);
        for line in rest.split('\n') {
            let trimmed = line.trim_start();
            prop_assert!(trimmed.is_empty() || trimmed.starts_with("--"), "{rest:?}");
        }
    }

    #[test]
    fn pipeline_is_total_on_mutated_corpus(cut in 0usize..1000, insert in "[ -~\n]{0,4}") {
        let text = include_str!("../../../corpus/twocards.oz");
        let mut at = cut % text.len();
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        let mutated = format!("{}{insert}{}", &text[..at], &text[at..]);
        if let Err(diags) = compile("m.oz", &mutated, &CodegenOptions::default()) {
            prop_assert!(!diags.is_empty());
            for d in &diags {
                prop_assert!(span_in_bounds(&d.span, &mutated), "{d}");
            }
        }
    }
}

const STATE: &str = "class C\n  const k : NAT\n  state\n    x : INT\n    y : INT\n    z : INT\n";

/// Predicate templates; those mentioning a primed variable name it.
fn templates() -> Vec<(&'static str, Option<&'static str>)> {
    vec![
        ("x > k", None),
        ("a? <= y + 1", None),
        ("not (z = 0)", None),
        ("x' = x + a?", Some("x")),
        ("x' >= 0", Some("x")),
        ("y' = k - y", Some("y")),
        ("y' = x'", Some("y")),
        ("z' = z", Some("z")),
        ("r! = z' + 1", Some("z")),
        ("r! >= x", None),
    ]
}

fn op_source(delta: &[&str], preds: &[&str]) -> String {
    let mut s = String::from(STATE);
    s.push_str("  op f\n");
    if !delta.is_empty() {
        s.push_str(&format!("    delta {}\n", delta.join(", ")));
    }
    s.push_str("    a? : NAT\n    r! : INT\n  where\n");
    for p in preds {
        s.push_str(&format!("    {p}\n"));
    }
    s.push_str("  end\nend\n");
    s
}

fn partition(src: &str) -> Option<[BTreeSet<String>; 3]> {
    let spec = parse_source("c.oz", src).expect("parses");
    let analysis = analyze(&spec).ok()?;
    let op = &analysis.operations("C")[0];
    let set = |v: &[Expr]| v.iter().map(print_expr).collect::<BTreeSet<_>>();
    let body = op
        .body
        .iter()
        .map(|a| format!("{}' = {}", a.target.name, print_expr(&a.rhs)))
        .collect();
    Some([set(&op.pre), body, set(&op.post)])
}

fn chosen() -> impl Strategy<Value = (Vec<&'static str>, Vec<(&'static str, Option<&'static str>)>)>
{
    (
        subsequence(vec!["x", "y", "z"], 0..=3),
        subsequence(templates(), 0..=6),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn classification_is_exhaustive_and_exclusive((delta, preds) in chosen()) {
        let texts: Vec<&str> = preds.iter().map(|p| p.0).collect();
        let spec = parse_source("c.oz", &op_source(&delta, &texts)).unwrap();
        let analysis = match analyze(&spec) {
            Ok(a) => a,
            Err(diags) => {
                // Only primed names outside the delta list may be rejected.
                for d in diags.iter().filter(|d| d.is_error()) {
                    prop_assert_eq!(d.code, Code::S011, "{}", d);
                }
                return Ok(());
            }
        };
        let op = &analysis.operations("C")[0];
        prop_assert_eq!(op.kinds.len(), texts.len());
        let count = |k| op.kinds.iter().filter(|x| **x == k).count();
        prop_assert_eq!(count(PredicateKind::Pre), op.pre.len());
        prop_assert_eq!(count(PredicateKind::Body), op.body.len());
        prop_assert_eq!(count(PredicateKind::Post), op.post.len());
        for p in &op.pre {
            prop_assert!(!p.mentions_decoration(Decoration::Primed));
            prop_assert!(!p.mentions_decoration(Decoration::Output));
        }
        for a in &op.body {
            prop_assert!(delta.contains(&a.target.name.as_str()));
        }
        let mut all: Vec<String> = op.delta.iter().map(|d| d.name.clone()).collect();
        all.extend(op.frame_vars.iter().cloned());
        let unique: BTreeSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(unique.len(), all.len());
        prop_assert_eq!(unique, ["x", "y", "z"].into_iter().map(String::from).collect::<BTreeSet<_>>());
    }

    #[test]
    fn classification_is_order_stable((delta, preds) in chosen(), seed in any::<u64>()) {
        // At most one predicate per primed variable, so any order is allowed.
        let mut seen = BTreeSet::new();
        let texts: Vec<&str> = preds
            .iter()
            .filter(|p| p.1.is_none_or(|v| seen.insert(v)))
            .map(|p| p.0)
            .collect();
        let mut shuffled = texts.clone();
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = partition(&op_source(&delta, &texts));
        let b = partition(&op_source(&delta, &shuffled));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn analysis_and_generation_are_deterministic((delta, preds) in chosen()) {
        let texts: Vec<&str> = preds.iter().map(|p| p.0).collect();
        let spec = parse_source("c.oz", &op_source(&delta, &texts)).unwrap();
        prop_assert_eq!(resolve(&spec), resolve(&spec));
        let (Ok(a1), Ok(a2)) = (analyze(&spec), analyze(&spec)) else {
            return Ok(());
        };
        prop_assert_eq!(&a1, &a2);
        let opts = CodegenOptions::default();
        let m = generate(&spec, &a1, &opts);
        prop_assert_eq!(&m, &generate(&spec, &a2, &opts));
        let method = &m.classes[0].methods[0];
        prop_assert_eq!(method.pre.len(), a1.operations("C")[0].pre.len());
        let frames = method.post.iter().filter(|p| p.frame).count();
        prop_assert_eq!(frames, a1.operations("C")[0].frame_vars.len());
    }
}

#[test]
fn invariant_wrappers_match_axioms_and_non_defining_predicates() {
    let src = include_str!("../../../corpus/twocards.oz");
    let spec = parse_source("t.oz", src).unwrap();
    let analysis = analyze(&spec).unwrap();
    let module = generate(&spec, &analysis, &CodegenOptions::default());
    for (class, generated) in spec.classes.iter().zip(&module.classes) {
        let defining = analysis.plan(&class.name.name).defining.len();
        assert_eq!(
            generated.invariant_count(),
            class.axioms.len() + class.state_predicates().len() - defining
        );
        let updaters = generated
            .wrappers
            .iter()
            .filter(|w| matches!(w, ClassWrapper::DecorateAll(_)))
            .count();
        assert_eq!(updaters, usize::from(defining > 0));
        if updaters > 0 {
            assert!(matches!(
                generated.wrappers.last(),
                Some(ClassWrapper::DecorateAll(_))
            ));
        }
    }
}

#[test]
fn private_names_only_appear_mangled() {
    let src = "class Acct\n  visibility deposit, INIT\n  const cap : NAT\n  state\n    funds : INT\n  where\n    funds <= cap\n  init\n    funds = 0\n  op deposit\n    delta funds\n    amt? : NAT\n  where\n    funds' = funds + amt?\n  end\n  op audit\n    seen! : INT\n  where\n    seen! = funds\n  end\nend\n";
    let python = compile("a.oz", src, &CodegenOptions::default())
        .unwrap()
        .python;
    for private in [".cap", ".funds", ".audit", "def audit"] {
        assert!(
            !python.contains(private),
            "unmangled `{private}`:\n{python}"
        );
    }
    assert!(python.contains("    def deposit(self, amt):\n"));
    assert!(python.contains("    def __audit(self):\n"));
    assert!(python.contains("@inv(lambda self: self._Acct__funds <= self._Acct__cap)\n"));
    assert!(python.contains("if name in (\"_Acct__cap\",) and name in self.__dict__:"));
}
