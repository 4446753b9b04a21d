//! Randomized laws over generated terms: syntax round-trips, position
//! algebra, substitution hygiene, match combination, residual sanity, and
//! strategy selection invariants. Exhaustive counterparts live in the
//! acceptance suite; these runs shake the same properties on shapes the
//! small-size corpora cannot reach.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::select;

use redex_core::corpus::{por_corpus, ppc_corpus};
use redex_core::matching::{disjoint_union, Match};
use redex_core::multistep::Multistep;
use redex_core::por::{
    parse_por_term, por_is_normal_form, por_normalize, por_redex_positions, por_s_pi, PorStep,
    PorTerm,
};
use redex_core::reduction::{is_normal_form, redex_positions, redexes, residuals, Step};
use redex_core::strategy::{s_pi, NormalizeOutcome};
use redex_core::syntax::parse_term;
use redex_core::term::{Position, Substitution, Term};

fn arb_name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("x"), Just("y"), Just("z")]
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        arb_name().prop_map(Term::var),
        prop_oneof![Just("a"), Just("b"), Just("x"), Just("y")].prop_map(Term::matchable),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (
                proptest::collection::btree_set(arb_name(), 0..=2),
                inner.clone(),
                inner,
            )
                .prop_map(|(theta, p, b)| Term::abs(theta, p, b)),
        ]
    })
}

fn arb_por_term() -> impl Strategy<Value = PorTerm> {
    let leaf = prop_oneof![arb_name().prop_map(PorTerm::var), Just(PorTerm::tt())];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| PorTerm::app(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PorTerm::or(l, r)),
            (arb_name(), inner).prop_map(|(x, b)| PorTerm::lam(x, b)),
        ]
    })
}

fn arb_match() -> impl Strategy<Value = Match> {
    prop_oneof![
        Just(Match::Fail),
        Just(Match::Wait),
        proptest::collection::btree_map(arb_name(), arb_term(), 0..=2).prop_map(|m| {
            Match::Positive(Substitution(
                m.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            ))
        }),
    ]
}

/// Closed terms with at least one step, for residual and strategy laws.
fn stepful_ppc_terms() -> Vec<Term> {
    ppc_corpus(7)
        .into_iter()
        .filter(|t| !redexes(t).is_empty())
        .collect()
}

fn stepful_por_terms() -> Vec<PorTerm> {
    por_corpus(6)
        .into_iter()
        .filter(|t| !por_redex_positions(t).is_empty())
        .collect()
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity_up_to_alpha(t in arb_term()) {
        let reparsed = parse_term(&t.to_string()).expect("printed terms parse");
        prop_assert!(reparsed.alpha_eq(&t), "{t} reparsed as {reparsed}");
    }

    #[test]
    fn por_printing_then_parsing_is_identity_up_to_alpha(t in arb_por_term()) {
        let reparsed = parse_por_term(&t.to_string()).expect("printed terms parse");
        prop_assert!(reparsed.alpha_eq(&t), "{t} reparsed as {reparsed}");
    }

    #[test]
    fn replacing_a_subterm_with_itself_changes_nothing(t in arb_term()) {
        for pos in t.positions() {
            let sub = t.subterm_at(&pos).expect("listed positions resolve").clone();
            let replaced = t.replace_at(&pos, sub).expect("listed positions resolve");
            prop_assert_eq!(&replaced, &t);
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_alpha_invariant(t in arb_term()) {
        let canonical = t.canonical();
        prop_assert!(canonical.alpha_eq(&t));
        prop_assert_eq!(canonical.canonical(), canonical);
    }

    #[test]
    fn canonical_forms_agree_exactly_on_alpha_equivalence(
        t in arb_term(),
        u in arb_term(),
    ) {
        prop_assert_eq!(t.canonical() == u.canonical(), t.alpha_eq(&u));
    }

    #[test]
    fn alpha_equivalent_terms_have_equal_redex_positions(t in arb_term()) {
        prop_assert_eq!(redex_positions(&t.canonical()), redex_positions(&t));
    }

    #[test]
    fn substituting_an_absent_variable_changes_nothing(
        t in arb_term(),
        s in arb_term(),
    ) {
        let fresh = "q";
        prop_assert!(!t.free_vars().contains(fresh));
        let applied = Substitution::singleton(fresh, s).apply(&t);
        prop_assert!(applied.alpha_eq(&t), "{t} became {applied}");
    }

    #[test]
    fn substitution_bounds_the_free_variables(
        t in arb_term(),
        s in arb_term(),
        x in arb_name(),
    ) {
        let applied = Substitution::singleton(x, s.clone()).apply(&t);
        let mut allowed = t.free_vars();
        allowed.remove(x);
        allowed.extend(s.free_vars());
        prop_assert!(applied.free_vars().is_subset(&allowed));
    }

    #[test]
    fn match_union_is_commutative(a in arb_match(), b in arb_match()) {
        prop_assert_eq!(
            disjoint_union(a.clone(), b.clone()),
            disjoint_union(b, a),
        );
    }

    // Associativity needs decided operands: fail takes precedence over
    // wait, so a wait can mask an overlap failure discovered late on one
    // bracketing but early on the other.
    #[test]
    fn match_union_is_associative_on_decided_matches(
        a in arb_match().prop_filter("decided", Match::is_decided),
        b in arb_match().prop_filter("decided", Match::is_decided),
        c in arb_match().prop_filter("decided", Match::is_decided),
    ) {
        prop_assert_eq!(
            disjoint_union(disjoint_union(a.clone(), b.clone()), c.clone()),
            disjoint_union(a, disjoint_union(b, c)),
        );
    }

    #[test]
    fn match_union_absorbs_fail_and_propagates_wait(m in arb_match()) {
        prop_assert_eq!(disjoint_union(Match::Fail, m.clone()), Match::Fail);
        if m != Match::Fail {
            prop_assert_eq!(disjoint_union(Match::Wait, m.clone()), Match::Wait);
        }
    }

    #[test]
    fn position_digit_strings_round_trip(dirs in proptest::collection::vec(1u8..=2, 0..8)) {
        let pos = Position::new(dirs);
        prop_assert_eq!(Position::parse(&pos.to_string()).expect("digits parse"), pos);
    }
}

#[test]
fn a_wait_can_mask_a_late_overlap_failure() {
    let p1 = Match::Positive(Substitution::singleton("x", Term::matchable("a")));
    let p2 = Match::Positive(Substitution::singleton("x", Term::matchable("b")));
    assert_eq!(disjoint_union(p1.clone(), p2.clone()), Match::Fail);
    assert_eq!(
        disjoint_union(disjoint_union(Match::Wait, p1.clone()), p2.clone()),
        Match::Wait,
    );
    assert_eq!(
        disjoint_union(Match::Wait, disjoint_union(p1, p2)),
        Match::Fail,
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_redex_position_contracts(t in select(stepful_ppc_terms())) {
        for pos in redex_positions(&t) {
            prop_assert!(Step::new(t.clone(), pos).is_ok());
        }
    }

    #[test]
    fn a_step_leaves_no_residual_of_itself(t in select(stepful_ppc_terms())) {
        for a in redexes(&t) {
            let left = residuals(&a, &a).expect("coinitial");
            prop_assert!(left.is_empty(), "{t}: step {} survives itself", a.position());
        }
    }

    #[test]
    fn distinct_steps_leave_disjoint_residuals(t in select(stepful_ppc_terms())) {
        let steps = redexes(&t);
        for a in &steps {
            let mut seen = BTreeSet::new();
            for b in &steps {
                if a.position() == b.position() {
                    continue;
                }
                for pos in residuals(b, a).expect("coinitial") {
                    prop_assert!(
                        seen.insert(pos.clone()),
                        "{t}: two ancestors share residual {pos} after {}",
                        a.position(),
                    );
                }
            }
        }
    }

    #[test]
    fn residuals_are_steps_of_the_target(t in select(stepful_ppc_terms())) {
        let steps = redexes(&t);
        for a in &steps {
            let target = a.target();
            for b in &steps {
                for pos in residuals(b, a).expect("coinitial") {
                    prop_assert!(
                        Step::new(target.clone(), pos.clone()).is_ok(),
                        "{t}: residual {pos} is not a step of {target}",
                    );
                }
            }
        }
    }

    #[test]
    fn development_orders_agree_on_the_target(t in select(stepful_ppc_terms())) {
        let all = Multistep::all_redexes(t);
        let reference = all.target();
        for development in all.complete_developments() {
            prop_assert!(development.target().alpha_eq(&reference));
        }
    }

    #[test]
    fn the_strategy_selects_steps_and_spots_normal_forms(t in arb_term()) {
        let selected = s_pi(&t);
        prop_assert_eq!(selected.is_empty(), is_normal_form(&t));
        for pos in selected {
            prop_assert!(Step::new(t.clone(), pos.clone()).is_ok(), "{t} selected {pos}");
        }
    }

    #[test]
    fn the_por_strategy_selects_steps_and_spots_normal_forms(t in arb_por_term()) {
        let selected = por_s_pi(&t);
        prop_assert_eq!(selected.is_empty(), por_is_normal_form(&t));
        for pos in selected {
            prop_assert!(PorStep::new(t.clone(), pos.clone()).is_ok(), "{t} selected {pos}");
        }
    }

    #[test]
    fn por_normalization_ends_in_a_normal_form(t in select(stepful_por_terms())) {
        let trace = por_normalize(&t, 32);
        match trace.outcome {
            NormalizeOutcome::NormalForm(result) => prop_assert!(por_is_normal_form(&result)),
            NormalizeOutcome::FuseExceeded => prop_assert!(!trace.rounds.is_empty()),
        }
    }
}
