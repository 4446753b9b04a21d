//! Single steps of the pattern calculus: contraction, residuals, embedding,
//! gripping, and creation analysis.
//!
//! A step is a source term together with the position of a contractible
//! redex: an abstraction applied to an argument whose match is decided
//! (positive or fail). Contracting a positive match substitutes into the
//! body; contracting a failure collapses the redex to the identity function.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matching::{apply_match, match_terms, Match};
use crate::term::{Position, PositionError, Symbol, Term};

/// A contractible redex occurrence. Self-contained: it owns its source term,
/// so step sets can outlive the expression they were computed from.
/// Equality is alpha-equivalence of sources plus position equality.
#[derive(Debug, Clone)]
pub struct Step {
    source: Term,
    pos: Position,
    mu: Match,
}

/// How a created step came to exist, following the cases of the creation
/// lemma. `I*`: the contracted redex was the head of an application and its
/// result is an abstraction (a substituted variable, an abstraction body, or
/// the identity from a failure). `II`: the body applied a bound variable
/// that got instantiated to an abstraction. `III*`: a match that was waiting
/// became decided — by the body substitution instantiating both sides, by a
/// reduction inside the argument, or by one inside the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreationCase {
    IVar,
    IAbs,
    IFail,
    II,
    IIIBoth,
    IIIArgument,
    IIIPattern,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("no redex at position \"{0}\": not an abstraction applied to an argument")]
    NotARedex(Position),
    #[error("match at position \"{0}\" is undecided (wait)")]
    UndecidedMatch(Position),
    #[error("steps are not coinitial")]
    NotCoinitial,
    #[error("step source is not the target of the creating step")]
    SourceMismatch,
    #[error("step at position \"{0}\" has an ancestor, so it is not created")]
    NotCreated(Position),
}

impl PartialEq for Step {
    fn eq(&self, other: &Self) -> bool {
        self.pos == other.pos && self.source.alpha_eq(&other.source)
    }
}

impl Eq for Step {}

impl Step {
    /// Validate that `pos` addresses `(\[θ] p . s) u` in `source` with a
    /// decided match, and build the step.
    pub fn new(source: Term, pos: Position) -> Result<Step, StepError> {
        let sub = source.subterm_at(&pos)?;
        let Term::App(fun, arg) = sub else {
            return Err(StepError::NotARedex(pos));
        };
        let Term::Abs(theta, pattern, _) = &**fun else {
            return Err(StepError::NotARedex(pos));
        };
        let mu = match_terms(theta, arg, pattern);
        if !mu.is_decided() {
            return Err(StepError::UndecidedMatch(pos));
        }
        Ok(Step { source, pos, mu })
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn position(&self) -> &Position {
        &self.pos
    }

    pub fn match_result(&self) -> &Match {
        &self.mu
    }

    pub fn is_matching_failure(&self) -> bool {
        self.mu == Match::Fail
    }

    fn redex(&self) -> (&BTreeSet<Symbol>, &Term, &Term, &Term) {
        let Term::App(fun, arg) = self
            .source
            .subterm_at(&self.pos)
            .expect("step position was validated at construction")
        else {
            unreachable!("step subterm was validated at construction");
        };
        let Term::Abs(theta, pattern, body) = &**fun else {
            unreachable!("step head was validated at construction");
        };
        (theta, pattern, body, arg)
    }

    pub fn binders(&self) -> &BTreeSet<Symbol> {
        self.redex().0
    }

    pub fn pattern(&self) -> &Term {
        self.redex().1
    }

    pub fn body(&self) -> &Term {
        self.redex().2
    }

    pub fn argument(&self) -> &Term {
        self.redex().3
    }

    /// Contract the redex: replace it by the match applied to the body.
    pub fn target(&self) -> Term {
        let contracted = apply_match(&self.mu, self.body())
            .expect("step match was checked decided at construction");
        self.source
            .replace_at(&self.pos, contracted)
            .expect("step position was validated at construction")
    }
}

/// All steps of a term, in preorder of their positions.
pub fn redexes(t: &Term) -> Vec<Step> {
    t.positions()
        .into_iter()
        .filter_map(|pos| Step::new(t.clone(), pos).ok())
        .collect()
}

/// Positions of all steps of a term, in preorder, without cloning the term
/// for each.
pub fn redex_positions(t: &Term) -> Vec<Position> {
    fn walk(t: &Term, here: Position, out: &mut Vec<Position>) {
        if let Term::App(fun, arg) = t {
            if let Term::Abs(theta, pattern, _) = &**fun {
                if match_terms(theta, arg, pattern).is_decided() {
                    out.push(here.clone());
                }
            }
        }
        match t {
            Term::Var(_) | Term::Matchable(_) => {}
            Term::App(f, a) => {
                walk(f, here.child(1), out);
                walk(a, here.child(2), out);
            }
            Term::Abs(_, p, b) => {
                walk(p, here.child(1), out);
                walk(b, here.child(2), out);
            }
        }
    }
    let mut out = Vec::new();
    walk(t, Position::root(), &mut out);
    out
}

pub fn is_normal_form(t: &Term) -> bool {
    redex_positions(t).is_empty()
}

/// The residuals of `b` after contracting the coinitial step `a`, as
/// positions in `a.target()`. The three cases:
///
/// 1. `a` not above `b`: `b` survives at its own position;
/// 2. `b` inside the body (`b = a·12·n`): it moves to `a·n`, provided the
///    match did not fail;
/// 3. `b` inside the argument (`b = a·2·m·n` with the pattern holding a
///    bound matchable at `m`): one copy per occurrence of the bound variable
///    in the body, provided the match did not fail.
///
/// Everything else — `b = a`, steps inside the pattern, and steps under a
/// failing match — is erased.
pub fn residuals(b: &Step, a: &Step) -> Result<BTreeSet<Position>, StepError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(StepError::NotCoinitial);
    }
    let mut out = BTreeSet::new();
    if b.pos == a.pos {
        return Ok(out);
    }
    if !a.pos.is_prefix_of(&b.pos) {
        out.insert(b.pos.clone());
        return Ok(out);
    }
    if a.is_matching_failure() {
        return Ok(out);
    }
    let below = b.pos.strip_prefix(&a.pos).expect("prefix was just checked");
    let (theta, pattern, body, _) = a.redex();
    match below.directions() {
        [1, 2, n @ ..] => {
            out.insert(a.pos.join(&Position::new(n.iter().copied())));
        }
        [2, v @ ..] => {
            if let Some((x, n)) = matched_variable_split(pattern, theta, v) {
                for k in free_variable_positions(body, &x) {
                    out.insert(a.pos.join(&k).join(&Position::new(n.iter().copied())));
                }
            }
        }
        _ => {} // inside the pattern: consumed by contraction
    }
    Ok(out)
}

/// Walk the pattern along an argument-relative position until a matchable
/// bound by `θ` is reached; return the bound symbol and the remaining
/// directions. Matchables are leaves, so at most one prefix can qualify.
fn matched_variable_split<'v>(
    pattern: &Term,
    theta: &BTreeSet<Symbol>,
    v: &'v [u8],
) -> Option<(Symbol, &'v [u8])> {
    let mut cur = pattern;
    let mut i = 0;
    loop {
        if let Term::Matchable(x) = cur {
            if theta.contains(x) {
                return Some((x.clone(), &v[i..]));
            }
        }
        if i == v.len() {
            return None;
        }
        cur = match (cur, v[i]) {
            (Term::App(f, _), 1) => f,
            (Term::App(_, a), 2) => a,
            // A decided positive match never descends into abstractions or
            // past foreign leaves, so the path ends here without a binder.
            _ => return None,
        };
        i += 1;
    }
}

/// Positions of the free occurrences of variable `x` in `t` — the spots a
/// positive match substitutes. Binder sets shadow their bodies only.
fn free_variable_positions(t: &Term, x: &Symbol) -> Vec<Position> {
    fn walk(t: &Term, x: &Symbol, here: Position, out: &mut Vec<Position>) {
        match t {
            Term::Var(y) if y == x => out.push(here),
            Term::Var(_) | Term::Matchable(_) => {}
            Term::App(f, a) => {
                walk(f, x, here.child(1), out);
                walk(a, x, here.child(2), out);
            }
            Term::Abs(theta, p, b) => {
                walk(p, x, here.child(1), out);
                if !theta.contains(x) {
                    walk(b, x, here.child(2), out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(t, x, Position::root(), &mut out);
    out
}

/// Embedding is the tree order: `a` embeds `b` when its position is a
/// strict prefix of `b`'s.
pub fn embeds(a: &Step, b: &Step) -> Result<bool, StepError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(StepError::NotCoinitial);
    }
    Ok(a.pos.is_strict_prefix_of(&b.pos))
}

/// `a` grips `b`'s position — written `a ≪ b` — when `b` sits inside `a`'s
/// body at `a·12·n`, the match of `a` does not fail, and the subterm of the
/// body above `b` has a free variable bound by `a`'s binder set.
pub fn grips(a: &Step, b: &Step) -> Result<bool, StepError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(StepError::NotCoinitial);
    }
    if a.is_matching_failure() {
        return Ok(false);
    }
    let Some(below) = b.pos.strip_prefix(&a.pos) else {
        return Ok(false);
    };
    let [1, 2, n @ ..] = below.directions() else {
        return Ok(false);
    };
    let (theta, _, body, _) = a.redex();
    let under = body
        .subterm_at(&Position::new(n.iter().copied()))
        .expect("b is a valid position under a's body");
    Ok(under.free_vars().intersection(theta).next().is_some())
}

/// A step of `a.target()` is created by `a` when no coinitial step of
/// `a.source()` has it as a residual.
pub fn is_created(b_prime: &Step, a: &Step) -> Result<bool, StepError> {
    if !b_prime.source.alpha_eq(&a.target()) {
        return Err(StepError::SourceMismatch);
    }
    for b in redexes(&a.source) {
        if residuals(&b, a)
            .expect("redexes of the source are coinitial with a")
            .contains(&b_prime.pos)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classify how `a` created `b_prime` (which must satisfy [`is_created`]).
pub fn creation_case(a: &Step, b_prime: &Step) -> Result<CreationCase, StepError> {
    if !is_created(b_prime, a)? {
        return Err(StepError::NotCreated(b_prime.pos.clone()));
    }
    let b = &b_prime.pos;
    // Case I: the contracted redex was the head of the application at `b`
    // and left an abstraction behind.
    if b.child(1) == a.pos {
        if a.is_matching_failure() {
            return Ok(CreationCase::IFail);
        }
        return match a.body() {
            Term::Var(_) => Ok(CreationCase::IVar),
            Term::Abs(..) => Ok(CreationCase::IAbs),
            other => unreachable!(
                "head of a created redex must come from a variable or an \
                 abstraction body, found {other:?}",
            ),
        };
    }
    if a.pos.is_prefix_of(b) {
        // Created inside the contracted body instance; a failing match
        // leaves the identity, which has no redexes, so the match was
        // positive and `b = a·n` with `n` a non-variable position of the
        // body.
        let n = b.strip_prefix(&a.pos).expect("prefix was just checked");
        let head = a
            .body()
            .subterm_at(&n.child(1))
            .expect("created step's head lies inside the body");
        return match head {
            Term::Var(_) => Ok(CreationCase::II),
            _ => Ok(CreationCase::IIIBoth),
        };
    }
    // `b` strictly above `a`, other than immediately at the head: the match
    // at `b` was waiting and `a`'s contraction decided it from inside the
    // argument or the pattern.
    if b.child(2).is_prefix_of(&a.pos) {
        return Ok(CreationCase::IIIArgument);
    }
    if b.child(1).child(1).is_prefix_of(&a.pos) {
        return Ok(CreationCase::IIIPattern);
    }
    unreachable!("created step must be related to its creator per the creation lemma");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Term {
        Term::matchable(s)
    }

    fn apps(terms: &[Term]) -> Term {
        let mut it = terms.iter().cloned();
        let first = it.next().expect("nonempty application spine");
        it.fold(first, Term::app)
    }

    fn pos(s: &str) -> Position {
        Position::parse(s).expect("test position parses")
    }

    fn step(t: &Term, p: &str) -> Step {
        Step::new(t.clone(), pos(p)).expect("test step is valid")
    }

    /// (\[x] p̂ x̂ m̂ ŝ . x)(p̂ â (I f̂)(I d̂)) — head match waits, two inner
    /// steps at the `I f̂` and `I d̂` positions.
    fn two_redex_term() -> Term {
        Term::app(
            Term::abs(
                ["x"],
                apps(&[m("p"), m("x"), m("m"), m("s")]),
                Term::var("x"),
            ),
            apps(&[
                m("p"),
                m("a"),
                Term::app(Term::identity(), m("f")),
                Term::app(Term::identity(), m("d")),
            ]),
        )
    }

    #[test]
    fn redexes_find_decided_matches_only() {
        let t = two_redex_term();
        let positions: Vec<Position> = redexes(&t).iter().map(|s| s.position().clone()).collect();
        assert_eq!(positions, vec![pos("212"), pos("22")]);
        assert_eq!(redex_positions(&t), vec![pos("212"), pos("22")]);
        assert!(is_normal_form(&Term::identity()));
        assert!(!is_normal_form(&t));
    }

    #[test]
    fn step_construction_rejects_non_redexes() {
        let t = two_redex_term();
        assert_eq!(
            Step::new(t.clone(), Position::root()).expect_err("head match waits"),
            StepError::UndecidedMatch(Position::root()),
        );
        assert_eq!(
            Step::new(t.clone(), pos("1")).expect_err("an abstraction is not a redex"),
            StepError::NotARedex(pos("1")),
        );
        assert!(matches!(
            Step::new(t, pos("2222")).expect_err("no such position"),
            StepError::Position(_),
        ));
    }

    #[test]
    fn contraction_of_a_failing_match_yields_identity() {
        // (\[x] p̂ x̂ m̂ ŝ . x)(p̂ â f̂ (I d̂)): f̂ against m̂ fails, so the whole
        // match is decided fail despite the waiting I d̂ component.
        let t = Term::app(
            Term::abs(
                ["x"],
                apps(&[m("p"), m("x"), m("m"), m("s")]),
                Term::var("x"),
            ),
            apps(&[
                m("p"),
                m("a"),
                m("f"),
                Term::app(Term::identity(), m("d")),
            ]),
        );
        let root = step(&t, "");
        assert!(root.is_matching_failure());
        assert_eq!(root.target(), Term::identity());
    }

    #[test]
    fn contraction_substitutes_positive_matches() {
        let t = Term::app(Term::identity(), m("c"));
        assert_eq!(step(&t, "").target(), m("c"));

        // (\[x] p̂ x̂ m̂ b̂ . x)(p̂ (I ĵ) m̂ b̂) → I ĵ
        let t = Term::app(
            Term::abs(
                ["x"],
                apps(&[m("p"), m("x"), m("m"), m("b")]),
                Term::var("x"),
            ),
            apps(&[
                m("p"),
                Term::app(Term::identity(), m("j")),
                m("m"),
                m("b"),
            ]),
        );
        assert_eq!(
            step(&t, "").target(),
            Term::app(Term::identity(), m("j")),
        );
    }

    #[test]
    fn residuals_of_argument_steps_follow_the_matched_variable() {
        // The argument step I ĵ sits at 2112; the body uses x once at ε, so
        // the residual lands at ε of the target I ĵ.
        let t = Term::app(
            Term::abs(
                ["x"],
                apps(&[m("p"), m("x"), m("m"), m("b")]),
                Term::var("x"),
            ),
            apps(&[
                m("p"),
                Term::app(Term::identity(), m("j")),
                m("m"),
                m("b"),
            ]),
        );
        let root = step(&t, "");
        let d = step(&t, "2112");
        assert_eq!(
            residuals(&d, &root).expect("coinitial"),
            BTreeSet::from([Position::root()]),
        );
    }

    #[test]
    fn residuals_duplicate_and_erase_with_the_body() {
        let arg = apps(&[m("p"), Term::app(Term::identity(), m("c")), m("m"), m("b")]);
        let pattern = apps(&[m("p"), m("x"), m("y"), m("z")]);
        // Body x x duplicates the argument step...
        let dup = Term::app(
            Term::abs(
                ["x", "y", "z"],
                pattern.clone(),
                Term::app(Term::var("x"), Term::var("x")),
            ),
            arg.clone(),
        );
        let inner = step(&dup, "2112");
        assert_eq!(
            residuals(&inner, &step(&dup, "")).expect("coinitial"),
            BTreeSet::from([pos("1"), pos("2")]),
        );
        // ... while body ĉ erases it.
        let erase = Term::app(
            Term::abs(["x", "y", "z"], pattern, m("c")),
            arg,
        );
        let inner = step(&erase, "2112");
        assert_eq!(
            residuals(&inner, &step(&erase, "")).expect("coinitial"),
            BTreeSet::new(),
        );
    }

    #[test]
    fn residuals_keep_steps_the_contraction_cannot_touch() {
        let t = two_redex_term();
        let a = step(&t, "212");
        let b = step(&t, "22");
        // Disjoint steps survive unchanged, and self-residuals are empty.
        assert_eq!(
            residuals(&b, &a).expect("coinitial"),
            BTreeSet::from([pos("22")]),
        );
        assert_eq!(residuals(&a, &a).expect("coinitial"), BTreeSet::new());
    }

    #[test]
    fn residuals_map_body_steps_to_the_contractum() {
        // (\[x] x̂ . I ĉ) d̂: the body step at 12 becomes the root of I ĉ.
        let t = Term::app(
            Term::abs(["x"], m("x"), Term::app(Term::identity(), m("c"))),
            m("d"),
        );
        let body_step = step(&t, "12");
        let root = step(&t, "");
        assert_eq!(
            residuals(&body_step, &root).expect("coinitial"),
            BTreeSet::from([Position::root()]),
        );
    }

    #[test]
    fn failing_matches_erase_everything_underneath() {
        // (\[x] (ĉ x̂) . I d̂)(ĵ (I ĉ)): ĵ against ĉ fails; both the body step
        // and the argument step are erased.
        let t = Term::app(
            Term::abs(
                ["x"],
                Term::app(m("c"), m("x")),
                Term::app(Term::identity(), m("d")),
            ),
            Term::app(m("j"), Term::app(Term::identity(), m("c"))),
        );
        let root = step(&t, "");
        assert!(root.is_matching_failure());
        for inner in ["12", "22"] {
            let b = step(&t, inner);
            assert_eq!(
                residuals(&b, &root).expect("coinitial"),
                BTreeSet::new(),
                "step at {inner} should be erased",
            );
        }
    }

    #[test]
    fn pattern_steps_are_consumed() {
        // (\[x] (ĉ (I ĉ)) . d̂)(ĵ k̂): ĵ against ĉ fails while the I ĉ inside
        // the pattern is still a step; contraction consumes it.
        let t = Term::app(
            Term::abs(
                ["x"],
                Term::app(m("c"), Term::app(Term::identity(), m("c"))),
                m("d"),
            ),
            Term::app(m("j"), m("k")),
        );
        let root = step(&t, "");
        assert!(root.is_matching_failure());
        let pattern_step = step(&t, "112");
        assert_eq!(
            residuals(&pattern_step, &root).expect("coinitial"),
            BTreeSet::new(),
        );
    }

    #[test]
    fn embedding_is_the_tree_order() {
        let t = two_redex_term();
        let a = step(&t, "212");
        let b = step(&t, "22");
        assert!(!embeds(&a, &b).expect("coinitial"));
        assert!(!embeds(&b, &a).expect("coinitial"));
        assert!(!embeds(&a, &a).expect("coinitial"));

        let u = Term::app(Term::identity(), Term::app(Term::identity(), m("c")));
        let outer = step(&u, "");
        let inner = step(&u, "2");
        assert!(embeds(&outer, &inner).expect("coinitial"));
        assert!(!embeds(&inner, &outer).expect("coinitial"));
    }

    #[test]
    fn gripping_needs_a_bound_variable_under_the_step() {
        // (\x. I x)(I y) as a pattern-calculus term: the root grips the
        // body step because x occurs free under it.
        let t = Term::app(
            Term::abs(
                ["x"],
                m("x"),
                Term::app(Term::identity(), Term::var("x")),
            ),
            Term::app(Term::identity(), Term::var("y")),
        );
        let root = step(&t, "");
        let body_step = step(&t, "12");
        let arg_step = step(&t, "2");
        assert!(grips(&root, &body_step).expect("coinitial"));
        assert!(!grips(&root, &arg_step).expect("coinitial"));
        assert!(!grips(&body_step, &root).expect("coinitial"));

        // Same shape but a closed body subterm: no grip.
        let u = Term::app(
            Term::abs(["x"], m("x"), Term::app(Term::identity(), m("c"))),
            Term::app(Term::identity(), m("d")),
        );
        assert!(!grips(&step(&u, ""), &step(&u, "12")).expect("coinitial"));
    }

    #[test]
    fn gripping_implies_embedding() {
        let t = Term::app(
            Term::abs(
                ["x"],
                m("x"),
                Term::app(Term::identity(), Term::var("x")),
            ),
            Term::app(Term::identity(), Term::var("y")),
        );
        for a in redexes(&t) {
            for b in redexes(&t) {
                if grips(&a, &b).expect("coinitial") {
                    assert!(embeds(&a, &b).expect("coinitial"));
                }
            }
        }
    }

    #[test]
    fn creation_from_below() {
        // I_var: ((\[x] x̂ . x)(\[y] ŷ . y)) ĉ — contracting at 1 leaves an
        // abstraction that now faces ĉ.
        let i_var = Term::app(
            Term::app(
                Term::identity(),
                Term::abs(["y"], m("y"), Term::var("y")),
            ),
            m("c"),
        );
        let a = step(&i_var, "1");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert!(is_created(&created, &a).expect("source matches"));
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IVar,
        );

        // I_abs: ((\[x] x̂ . \[y] ŷ . x) ĉ) d̂.
        let i_abs = Term::app(
            Term::app(
                Term::abs(
                    ["x"],
                    m("x"),
                    Term::abs(["y"], m("y"), Term::var("x")),
                ),
                m("c"),
            ),
            m("d"),
        );
        let a = step(&i_abs, "1");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IAbs,
        );

        // I_fail: ((\[x] ĉ . ĉ) d̂) ĉ — the inner match fails, leaving I ĉ.
        let i_fail = Term::app(
            Term::app(Term::abs(["x"], m("c"), m("c")), m("d")),
            m("c"),
        );
        let a = step(&i_fail, "1");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IFail,
        );
    }

    #[test]
    fn creation_from_above_and_decided_matches() {
        // II: (\[x] x̂ . x ĉ)(\[y] ŷ . y): the body applies x, which the
        // match instantiates to an abstraction.
        let from_above = Term::app(
            Term::abs(["x"], m("x"), Term::app(Term::var("x"), m("c"))),
            Term::abs(["y"], m("y"), Term::var("y")),
        );
        let a = step(&from_above, "");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::II,
        );

        // III_both: (\[x] x̂ . (\[z] (ĉ ẑ) . z) x)(ĉ d̂): the inner match
        // waits on the variable x; the substitution decides it.
        let both = Term::app(
            Term::abs(
                ["x"],
                m("x"),
                Term::app(
                    Term::abs(["z"], Term::app(m("c"), m("z")), Term::var("z")),
                    Term::var("x"),
                ),
            ),
            Term::app(m("c"), m("d")),
        );
        let a = step(&both, "");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IIIBoth,
        );

        // III_argument: reducing inside the argument turns the head of the
        // argument into a data structure and the root match fails.
        let argument = Term::app(
            Term::abs(
                ["x"],
                apps(&[m("a"), m("b"), m("x")]),
                Term::var("x"),
            ),
            Term::app(
                Term::app(
                    Term::app(Term::identity(), m("d")),
                    Term::app(Term::identity(), m("b")),
                ),
                m("c"),
            ),
        );
        let a = step(&argument, "211");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert!(created.is_matching_failure());
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IIIArgument,
        );

        // III_pattern: reducing inside the pattern decides the root match.
        let pattern = Term::app(
            Term::abs(["x"], Term::app(Term::identity(), m("c")), m("d")),
            m("c"),
        );
        let a = step(&pattern, "11");
        let created = Step::new(a.target(), Position::root()).expect("created step");
        assert_eq!(
            creation_case(&a, &created).expect("classifies"),
            CreationCase::IIIPattern,
        );
    }

    #[test]
    fn residual_holders_are_not_created() {
        let t = Term::app(Term::identity(), Term::app(Term::identity(), m("c")));
        let outer = step(&t, "");
        let surviving = Step::new(outer.target(), Position::root()).expect("residual step");
        assert!(!is_created(&surviving, &outer).expect("source matches"));
        assert_eq!(
            creation_case(&outer, &surviving).expect_err("not created"),
            StepError::NotCreated(Position::root()),
        );
    }
}
