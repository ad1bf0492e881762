use cdimpact::rules::*;
use proptest::prelude::*;

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,8}"
}

// Anything the lexer can produce inside a literal: no raw CR, and a raw
// newline only ever arrives escaped.
fn text() -> impl Strategy<Value = String> {
    "[a-z {}\"\\\\\n.:äß-]{0,12}"
}

fn call() -> impl Strategy<Value = ConditionExpr> {
    (any::<bool>(), ident(), prop::collection::vec(text(), 0..3)).prop_map(|(pc, name, args)| {
        if pc {
            ConditionExpr::Predefined { name, args }
        } else {
            ConditionExpr::User { name, args }
        }
    })
}

fn condition() -> impl Strategy<Value = ConditionExpr> {
    call().prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ConditionExpr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ConditionExpr::or(a, b)),
            inner.prop_map(ConditionExpr::not),
        ]
    })
}

fn template() -> impl Strategy<Value = HintTemplate> {
    let seg = prop_oneof![
        text().prop_map(Segment::Literal),
        prop::collection::vec(ident(), 1..3).prop_map(|p| Segment::Placeholder(p.join("."))),
    ];
    prop::collection::vec(seg, 0..5).prop_map(HintTemplate::new)
}

fn rule() -> impl Strategy<Value = ImpactRuleDecl> {
    (
        "[A-Za-z ]{1,10}",
        text(),
        prop::option::of(prop_oneof![Just(Severity::Minor), Just(Severity::Normal), Just(Severity::Critical)]),
        prop::option::of(prop_oneof![Just(Probability::Low), Just(Probability::Medium), Just(Probability::High)]),
        prop::option::of(text()),
        prop::collection::vec((condition(), template()), 0..4),
    )
        .prop_map(|(name, description, severity, probability, relevant_for, entries)| ImpactRuleDecl {
            name,
            description,
            severity,
            probability,
            relevant_for,
            entries: entries
                .into_iter()
                .map(|(condition, hint)| ImpactEntry { condition, hint })
                .collect(),
        })
}

fn rule_set() -> impl Strategy<Value = RuleSet> {
    prop::collection::vec(rule(), 0..4).prop_map(|rules| {
        let mut seen = std::collections::HashSet::new();
        RuleSet {
            rules: rules.into_iter().filter(|r| seen.insert(r.name.clone())).collect(),
        }
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(rs in rule_set()) {
        let printed = print_rules(&rs);
        let reparsed = parse_rules(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(reparsed, rs);
    }

    #[test]
    fn printing_is_a_fixed_point(rs in rule_set()) {
        let once = print_rules(&rs);
        prop_assert_eq!(print_rules(&parse_rules(&once).unwrap()), once);
    }

    #[test]
    fn extension_round_trip(conds in prop::collection::btree_map(ident(), condition(), 0..4)) {
        // Bodies may only call names outside the declared set, so no cycles.
        let declared: std::collections::BTreeSet<_> = conds.keys().cloned().collect();
        let exts: Vec<ExtensionDecl> = conds
            .into_iter()
            .filter(|(_, c)| c.calls().iter().all(|call| match call {
                ConditionExpr::User { name, .. } => !declared.contains(name),
                _ => true,
            }))
            .map(|(name, c)| ExtensionDecl { name, body: ExtensionBody::Condition(c) })
            .collect();
        let printed = print_extensions(&exts);
        prop_assert_eq!(parse_extensions(&printed).unwrap(), exts);
    }
}
