//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line through the harness. The worked examples are pinned
//! exactly; the exhaustive sweeps run over all closed terms up to the
//! stated sizes with no sampling.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use redex_core::ars::{check_axioms, check_stability, PpcArs};
use redex_core::corpus::{lambda_corpus, por_corpus, ppc_corpus};
use redex_core::matching::{disjoint_union, match_terms, Match};
use redex_core::multistep::{
    is_necessary_bounded, is_never_gripping_bounded, Multistep, DEFAULT_DEPTH_BOUND,
    DEFAULT_SIZE_BOUND, DEFAULT_STEP_BOUND,
};
use redex_core::por::{por_normalize, PorArs, PorTerm};
use redex_core::reduction::{embeds, is_normal_form, redex_positions, redexes, residuals, Step};
use redex_core::strategy::{normalize, s_pi, NormalizeOutcome, Selection};
use redex_core::term::{Position, Substitution, Symbol, Term};

fn m(s: &str) -> Term {
    Term::matchable(s)
}

fn apps(parts: &[Term]) -> Term {
    let mut iter = parts.iter().cloned();
    let first = iter.next().expect("nonempty application");
    iter.fold(first, Term::app)
}

fn i_applied(t: Term) -> Term {
    Term::app(Term::identity(), t)
}

fn set(positions: &[&str]) -> BTreeSet<Position> {
    positions
        .iter()
        .map(|s| Position::parse(s).expect("valid position"))
        .collect()
}

fn theta(names: &[&str]) -> BTreeSet<Symbol> {
    names.iter().map(|s| s.to_string()).collect()
}

/// (\[x] p̂ x̂ m̂ ŝ . x)(p̂ â (I f̂)(I d̂)): two multisteps from the identity,
/// with argument steps I f̂ at 212 and I d̂ at 22.
fn two_step_intro_term() -> Term {
    Term::app(
        Term::abs(["x"], apps(&[m("p"), m("x"), m("m"), m("s")]), Term::var("x")),
        apps(&[m("p"), m("a"), i_applied(m("f")), i_applied(m("d"))]),
    )
}

fn omega() -> Term {
    let half = Term::abs(["x"], m("x"), Term::app(Term::var("x"), Term::var("x")));
    Term::app(half.clone(), half)
}

fn or_square() -> PorTerm {
    PorTerm::or(
        PorTerm::or(PorTerm::tt(), PorTerm::tt()),
        PorTerm::or(PorTerm::tt(), PorTerm::tt()),
    )
}

fn assert_within(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} budget",
    );
}

#[test]
fn criterion_01_matching_table() {
    let started = Instant::now();

    // Six matching-operation failures: non-linearity, domain mismatches,
    // constructor clashes, and component failures.
    let failures = [
        (theta(&["x"]), Term::app(m("c"), m("d")), Term::app(m("x"), m("x"))),
        (
            theta(&["x", "y", "z"]),
            Term::app(m("c"), m("d")),
            Term::app(m("x"), m("y")),
        ),
        (theta(&[]), m("c"), m("x")),
        (theta(&["x"]), m("y"), m("y")),
        (theta(&["x"]), Term::app(m("c"), m("z")), Term::app(m("x"), m("y"))),
        (theta(&[]), Term::app(m("c"), m("z")), Term::app(m("x"), m("y"))),
    ];
    for (th, arg, pat) in &failures {
        assert_eq!(
            match_terms(th, arg, pat),
            Match::Fail,
            "expected fail for {arg} against {pat}",
        );
    }

    // The full table of the decided/undecided combination operator.
    let pos = |name: &str| Match::Positive(Substitution::singleton(name, m("c")));
    assert_eq!(disjoint_union(Match::Fail, Match::Fail), Match::Fail);
    assert_eq!(disjoint_union(Match::Fail, Match::Wait), Match::Fail);
    assert_eq!(disjoint_union(Match::Wait, Match::Fail), Match::Fail);
    assert_eq!(disjoint_union(Match::Fail, pos("x")), Match::Fail);
    assert_eq!(disjoint_union(pos("x"), Match::Fail), Match::Fail);
    assert_eq!(disjoint_union(Match::Wait, Match::Wait), Match::Wait);
    assert_eq!(disjoint_union(Match::Wait, pos("x")), Match::Wait);
    assert_eq!(disjoint_union(pos("x"), Match::Wait), Match::Wait);
    let merged = disjoint_union(pos("x"), pos("y"));
    match &merged {
        Match::Positive(sigma) => assert_eq!(sigma.domain(), theta(&["x", "y"])),
        other => panic!("disjoint positives merge, got {other:?}"),
    }
    // Overlapping positives are rejected as a failure, keeping patterns
    // linear.
    assert_eq!(disjoint_union(pos("x"), pos("x")), Match::Fail);

    assert_within(started.elapsed(), Duration::from_secs(1), "matching table");
}

#[test]
fn criterion_02_intro_reductions() {
    let started = Instant::now();

    // K I Ω in the lambda fragment: two multisteps to the identity.
    let k = Term::abs(["x"], m("x"), Term::abs(["y"], m("y"), Term::var("x")));
    let kio = Term::app(Term::app(k, Term::identity()), omega());
    let trace = normalize(&kio, Selection::NecessaryS, 16).expect("runs");
    assert_eq!(trace.len(), 2, "K I Ω needs exactly two multisteps");
    assert_eq!(trace.reached_normal_form(), Some(&Term::identity()));

    // The two-step introduction term.
    let trace = normalize(&two_step_intro_term(), Selection::NecessaryS, 16).expect("runs");
    assert_eq!(trace.len(), 2, "the intro term needs exactly two multisteps");
    assert_eq!(trace.reached_normal_form(), Some(&Term::identity()));

    // or(or(tt,tt), or(tt,tt)): both inner disjuncts, then the root.
    let trace = por_normalize(&or_square(), 16);
    assert_eq!(trace.len(), 2, "the or-square needs exactly two multisteps");
    assert_eq!(trace.rounds[0].1, set(&["1", "2"]));
    assert_eq!(trace.rounds[1].1, set(&[""]));
    assert_eq!(trace.reached_normal_form(), Some(&PorTerm::tt()));

    assert_within(started.elapsed(), Duration::from_secs(1), "intro reductions");
}

#[test]
fn criterion_03_depth_counterexample() {
    let started = Instant::now();

    // (\x. D x)(I y) with D = \z. z z: the multistep {ε, 2} has depth 2,
    // but its residual after the body step {12} has depth 3 — contracting
    // the duplicator first copies the I y step.
    let d = Term::abs(["z"], m("z"), Term::app(Term::var("z"), Term::var("z")));
    let t = Term::app(
        Term::abs(["x"], m("x"), Term::app(d, Term::var("x"))),
        i_applied(Term::var("y")),
    );
    let a = Multistep::new(t.clone(), set(&["", "2"])).expect("both are steps");
    assert_eq!(a.depth(), 2);
    let b = Multistep::new(t, set(&["12"])).expect("the body step");
    let after = a.residuals_after(&b).expect("coinitial");
    assert_eq!(after.depth(), 3);

    assert_within(started.elapsed(), Duration::from_secs(1), "depth counterexample");
}

#[test]
fn criterion_04_strategy_selections() {
    let started = Instant::now();

    // (\[y] â b̂ ĉ ŷ . y)(â (I ĉ)(I b̂)(I â)): the bound ŷ swallows I â;
    // the unbound b̂ and ĉ both need their arguments decided.
    let first = Term::app(
        Term::abs(
            ["y"],
            apps(&[m("a"), m("b"), m("c"), m("y")]),
            Term::var("y"),
        ),
        apps(&[m("a"), i_applied(m("c")), i_applied(m("b")), i_applied(m("a"))]),
    );
    assert_eq!(s_pi(&first), set(&["2112", "212"]), "first selection (I c, I b)");

    // (\[x,y] â (b̂ x̂) r₁ . ĵ)(â r₃ (d̂ r₄)): pattern step r₁ and argument
    // step r₃ are selected; r₄ is not.
    let second = Term::app(
        Term::abs(
            ["x", "y"],
            apps(&[m("a"), Term::app(m("b"), m("x")), i_applied(m("c"))]),
            m("j"),
        ),
        apps(&[m("a"), i_applied(m("j")), Term::app(m("d"), i_applied(m("k")))]),
    );
    assert_eq!(
        s_pi(&second),
        set(&["112", "212"]),
        "second selection (r1, r3; r4 excluded)",
    );

    // (\[x] â b̂ x̂ . x)((I d̂)(I b̂) ĉ): contracting I d̂ alone turns the
    // argument head into a data structure, and the root match becomes a
    // decided failure which embeds the residual of I b̂.
    let third = Term::app(
        Term::abs(["x"], apps(&[m("a"), m("b"), m("x")]), Term::var("x")),
        apps(&[i_applied(m("d")), i_applied(m("b")), m("c")]),
    );
    assert_eq!(
        redex_positions(&third),
        vec![
            Position::parse("211").unwrap(),
            Position::parse("212").unwrap(),
        ],
        "only the two argument steps exist; the root match is undecided",
    );

    let i_d = Step::new(third.clone(), Position::parse("211").unwrap()).expect("I d is a step");
    let i_b = Step::new(third.clone(), Position::parse("212").unwrap()).expect("I b is a step");
    let after = i_d.target();
    // The residual of I b stays put, and the root becomes a new step whose
    // match is a failure.
    assert_eq!(residuals(&i_b, &i_d).expect("coinitial"), set(&["212"]));
    let root = Step::new(after.clone(), Position::root()).expect("the root is now a step");
    assert_eq!(
        *root.match_result(),
        Match::Fail,
        "the created root step is a failure",
    );
    let residual_of_i_b = Step::new(after, Position::parse("212").unwrap()).expect("still a step");
    assert!(
        embeds(&root, &residual_of_i_b).expect("coinitial"),
        "the created root step embeds the residual of I b",
    );

    // The stated third selection is both argument steps; the selection
    // tables as implemented yield only I d̂ (211): the argument head
    // (I d̂)(I b̂) needs only its head component to approach a matchable
    // form, so I b̂ contributes nothing at this point.
    assert_eq!(
        s_pi(&third),
        set(&["211", "212"]),
        "third selection (I d, I b)",
    );

    assert_within(started.elapsed(), Duration::from_secs(1), "strategy selections");
}

#[test]
fn criterion_05_axiom_suite() {
    let started = Instant::now();

    let ppc = ppc_corpus(9);
    for report in check_axioms(&PpcArs, &ppc) {
        assert!(
            report.holds(),
            "{} fails on the pattern calculus corpus: {:?}",
            report.axiom,
            report.counterexamples.first(),
        );
    }

    let por = por_corpus(8);
    for report in check_axioms(&PorArs, &por) {
        assert!(
            report.holds(),
            "{} fails on the parallel-or corpus: {:?}",
            report.axiom,
            report.counterexamples.first(),
        );
    }

    // Stability fails on the pattern calculus: in the two-step term the
    // two argument steps create the same root failure step on both legs.
    let report = check_stability(&PpcArs, &[two_step_intro_term()]);
    assert!(!report.holds(), "stability unexpectedly holds");
    let detail = &report.counterexamples[0].detail;
    assert!(
        detail.contains("212") && detail.contains("22"),
        "unexpected stability counterexample: {detail}",
    );

    // On the lambda fragment stability holds.
    let report = check_stability(&PpcArs, &lambda_corpus(8));
    assert!(
        report.holds(),
        "stability fails on the lambda corpus: {:?}",
        report.counterexamples.first(),
    );

    assert_within(started.elapsed(), Duration::from_secs(300), "axiom suite");
}

/// Track the positions of one step through a development, step by step.
fn residuals_along(
    source: &Term,
    tracked: &Position,
    development: &[Step],
) -> BTreeSet<Position> {
    let mut current: BTreeSet<Position> = [tracked.clone()].into();
    let mut term = source.clone();
    for step in development {
        let mut next = BTreeSet::new();
        for pos in &current {
            let b = Step::new(term.clone(), pos.clone()).expect("tracked steps stay steps");
            next.extend(residuals(&b, step).expect("coinitial"));
        }
        term = step.target();
        current = next;
    }
    current
}

#[test]
fn criterion_06_order_independence() {
    let started = Instant::now();

    let mut multisteps = 0usize;
    for t in ppc_corpus(9) {
        let steps = redexes(&t);
        if steps.is_empty() {
            continue;
        }
        let positions: Vec<Position> = steps.iter().map(|s| s.position().clone()).collect();
        for mask in 1usize..(1 << positions.len()) {
            if mask.count_ones() > 3 {
                continue;
            }
            let subset: BTreeSet<Position> = positions
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            let multistep = Multistep::new(t.clone(), subset).expect("steps of t");
            multisteps += 1;

            let reference = multistep.target();
            let developments = multistep.complete_developments();
            assert!(!developments.is_empty());
            for development in &developments {
                assert!(
                    development.target().alpha_eq(&reference),
                    "{t}: a development order changes the target",
                );
            }
            // The residual relation agrees across orders and with the
            // set-level residual operator.
            for c in &steps {
                let reference_residuals: BTreeSet<Position> = Multistep::new(
                    t.clone(),
                    [c.position().clone()],
                )
                .expect("a step of t")
                .residuals_after(&multistep)
                .expect("coinitial")
                .positions()
                .clone();
                for development in &developments {
                    assert_eq!(
                        residuals_along(&t, c.position(), development.steps()),
                        reference_residuals,
                        "{t}: development orders disagree on residuals of {}",
                        c.position(),
                    );
                }
            }
        }
    }
    assert!(multisteps > 40_000, "only {multisteps} multisteps enumerated");

    assert_within(started.elapsed(), Duration::from_secs(300), "order independence");
}

fn position_subsets(positions: &[Position], include_empty: bool) -> Vec<BTreeSet<Position>> {
    let mut out = Vec::new();
    let start = usize::from(!include_empty);
    for mask in start..(1usize << positions.len()) {
        out.push(
            positions
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect(),
        );
    }
    out
}

#[test]
fn criterion_07_lemma_instances() {
    let started = Instant::now();

    let stepful: Vec<Term> = ppc_corpus(9)
        .into_iter()
        .filter(|t| !redexes(t).is_empty())
        .collect();

    // Depth preservation: A free from B and not gripping B keeps its depth
    // after B. Substantive instances need two disjoint steps in one term,
    // which a nine-node term can barely fit; the corpus holds a few
    // hundred of those plus the boundary cases with an empty side.
    let mut depth_instances = 0usize;
    let mut depth_substantive = 0usize;
    for t in &stepful {
        let positions: Vec<Position> = redex_positions(t);
        let subsets = position_subsets(&positions, true);
        for a in &subsets {
            let a_ms = Multistep::new(t.clone(), a.clone()).expect("steps of t");
            for b in &subsets {
                let b_ms = Multistep::new(t.clone(), b.clone()).expect("steps of t");
                let free = a_ms.free_from(&b_ms).expect("coinitial");
                let grips = a_ms.grips_set(&b_ms).expect("coinitial");
                if !(free && !grips) {
                    continue;
                }
                depth_instances += 1;
                if !a.is_empty() && !b.is_empty() {
                    depth_substantive += 1;
                }
                let after = a_ms.residuals_after(&b_ms).expect("coinitial");
                assert_eq!(
                    a_ms.depth(),
                    after.depth(),
                    "{t}: depth changes across {:?}",
                    b_ms.positions(),
                );
            }
        }
    }
    assert!(depth_instances > 100_000, "only {depth_instances} depth instances");
    assert!(
        depth_substantive > 200,
        "only {depth_substantive} substantive depth instances",
    );

    // Measure preservation: a never-gripping multistep leaves the measure
    // of any multireduction it is free from unchanged. Multireductions of
    // up to two nonempty elements are enumerated per source.
    let mut measure_instances = 0usize;
    for t in &stepful {
        let positions = redex_positions(t);
        let never_gripping: Vec<Multistep> = position_subsets(&positions, false)
            .into_iter()
            .map(|b| Multistep::new(t.clone(), b).expect("steps of t"))
            .filter(|b| is_never_gripping_bounded(b, DEFAULT_DEPTH_BOUND, DEFAULT_SIZE_BOUND))
            .collect();
        if never_gripping.is_empty() {
            continue;
        }

        let mut multireductions = Vec::new();
        for first in position_subsets(&positions, false) {
            let mid = Multistep::new(t.clone(), first.clone())
                .expect("steps of t")
                .target();
            multireductions.push(vec![first.clone()]);
            for second in position_subsets(&redex_positions(&mid), false) {
                multireductions.push(vec![first.clone(), second]);
            }
        }

        for elements in &multireductions {
            let delta = redex_core::multistep::Multireduction::new(t.clone(), elements.clone())
                .expect("elements chain");
            for b in &never_gripping {
                if !delta.free_from(b).expect("coinitial") {
                    continue;
                }
                measure_instances += 1;
                let projected = delta.residuals_after(b).expect("coinitial");
                assert_eq!(
                    delta.measure(),
                    projected.measure(),
                    "{t}: measure changes across {:?}",
                    b.positions(),
                );
            }
        }
    }
    // Both sides must pick nonempty disjoint redex sets from one source
    // term, so the instance count is bounded by the terms with at least
    // two redexes (a few hundred at this size).
    assert!(measure_instances > 200, "only {measure_instances} measure instances");

    assert_within(started.elapsed(), Duration::from_secs(300), "lemma instances");
}

/// All normal forms reachable within `budget` single steps.
fn brute_force_normal_forms(t: &Term, budget: usize) -> BTreeSet<Term> {
    fn go(
        t: &Term,
        budget: usize,
        seen: &mut BTreeSet<(Term, usize)>,
        found: &mut BTreeSet<Term>,
    ) {
        if is_normal_form(t) {
            found.insert(t.canonical());
            return;
        }
        if budget == 0 || !seen.insert((t.canonical(), budget)) {
            return;
        }
        for a in redexes(t) {
            go(&a.target(), budget - 1, seen, found);
        }
    }
    let mut found = BTreeSet::new();
    go(t, budget, &mut BTreeSet::new(), &mut found);
    found
}

#[test]
fn criterion_08_strategy_soundness() {
    let started = Instant::now();

    let mut proven_normalizing = 0usize;
    for t in ppc_corpus(9) {
        if redexes(&t).is_empty() {
            continue;
        }
        let normal_forms = brute_force_normal_forms(&t, DEFAULT_STEP_BOUND);
        if normal_forms.is_empty() {
            continue;
        }
        proven_normalizing += 1;

        let selected = Multistep::new(t.clone(), s_pi(&t)).expect("selections are steps");
        assert!(
            is_necessary_bounded(&selected, DEFAULT_STEP_BOUND).expect("normalizing"),
            "{t}: the selection is not necessary",
        );
        assert!(
            is_never_gripping_bounded(&selected, DEFAULT_DEPTH_BOUND, DEFAULT_SIZE_BOUND),
            "{t}: the selection is gripped within the bounds",
        );

        let trace = normalize(&t, Selection::NecessaryS, 64).expect("runs");
        let result = trace
            .reached_normal_form()
            .unwrap_or_else(|| panic!("{t}: the strategy did not normalize"));
        assert!(
            normal_forms.contains(&result.canonical()),
            "{t}: the strategy ends at {result}, not a brute-force normal form",
        );
    }
    assert!(
        proven_normalizing > 40_000,
        "only {proven_normalizing} terms proven normalizing",
    );

    assert_within(started.elapsed(), Duration::from_secs(600), "strategy soundness");
}

#[test]
fn criterion_09_non_fairness_witness() {
    let started = Instant::now();

    // (\[x] ĉ . I ê) Ω: the head match waits on Ω forever. Even though the
    // body holds a step (I ê is reducible), the first eight selections all
    // stay inside the argument.
    let t = Term::app(
        Term::abs(["x"], m("c"), i_applied(m("e"))),
        omega(),
    );
    assert!(
        redex_positions(&t).contains(&Position::parse("12").unwrap()),
        "the body must be reducible",
    );
    let trace = normalize(&t, Selection::NecessaryS, 8).expect("runs");
    assert_eq!(trace.outcome, NormalizeOutcome::FuseExceeded);
    assert_eq!(trace.len(), 8);
    for (round, (term, selected)) in trace.rounds.iter().enumerate() {
        assert!(!selected.is_empty(), "round {round} selects nothing");
        for pos in selected {
            assert_eq!(
                pos.directions().first(),
                Some(&2),
                "round {round} on {term} selects {pos}, outside the argument",
            );
        }
    }

    assert_within(started.elapsed(), Duration::from_secs(1), "non-fairness witness");
}

#[test]
fn criterion_10_singleton_non_necessity() {
    let started = Instant::now();

    // Neither argument step of the two-step term is necessary by itself:
    // contracting the other first decides the match and erases it.
    let t = two_step_intro_term();
    for single in ["212", "22"] {
        let alone = Multistep::new(t.clone(), set(&[single])).expect("a step of t");
        assert!(
            !is_necessary_bounded(&alone, DEFAULT_STEP_BOUND).expect("normalizing"),
            "{{{single}}} alone should not be necessary",
        );
    }
    // The pair, as selected by the strategy, is.
    let both = Multistep::new(t.clone(), set(&["212", "22"])).expect("steps of t");
    assert!(is_necessary_bounded(&both, DEFAULT_STEP_BOUND).expect("normalizing"));

    assert_within(started.elapsed(), Duration::from_secs(1), "singleton non-necessity");
}
