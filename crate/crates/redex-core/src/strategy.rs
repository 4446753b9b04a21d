//! The normalizing multistep strategy. At each round it selects, from the
//! structure of the term alone, a set of steps that is necessary (every
//! reduction to normal form contracts one of its residuals) and
//! never-gripping. Selection descends to the leftmost outermost prestep —
//! an abstraction applied to an argument — and then:
//!
//! - a decided match is contracted on the spot;
//! - a waiting match is handed to the match analysis [`s_match`], which
//!   walks argument against pattern and collects every step whose
//!   contraction could help decide the match;
//! - a waiting match that no reduction can ever decide is skipped, and
//!   selection moves inside the pattern, body, or argument.
//!
//! On terms whose abstractions all have the shape `\[x] ^x . s` the
//! selection collapses to the classical leftmost-outermost strategy.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matching::match_terms;
use crate::multistep::Multistep;
use crate::reduction::{is_normal_form, redex_positions};
use crate::term::{Position, Symbol, Term};

/// Result of the match analysis: positions of contributing steps inside the
/// pattern (`G`) and inside the argument (`D`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SMResult {
    pub pattern_positions: BTreeSet<Position>,
    pub argument_positions: BTreeSet<Position>,
}

impl SMResult {
    pub fn is_empty(&self) -> bool {
        self.pattern_positions.is_empty() && self.argument_positions.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("term is already in normal form")]
    NormalForm,
    #[error("term is outside the lambda fragment")]
    NotLambdaFragment,
}

/// One round of a normalization run: the term at hand and the positions the
/// strategy selected for it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizeTrace<T> {
    pub rounds: Vec<(T, BTreeSet<Position>)>,
    pub outcome: NormalizeOutcome<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalizeOutcome<T> {
    NormalForm(T),
    FuseExceeded,
}

impl<T> NormalizeTrace<T> {
    pub fn reached_normal_form(&self) -> Option<&T> {
        match &self.outcome {
            NormalizeOutcome::NormalForm(t) => Some(t),
            NormalizeOutcome::FuseExceeded => None,
        }
    }

    /// Number of multisteps performed.
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }
}

/// Which selection function drives [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// The necessary and never-gripping multistep selection [`s_pi`].
    NecessaryS,
    /// Single leftmost-outermost steps; restricted to the lambda fragment.
    LoLambda,
    /// All outermost steps. Provided for comparison only: this selection is
    /// not never-gripping in general and carries no normalization promise.
    ParallelOutermost,
}

fn is_bound_matchable(t: &Term, theta: &BTreeSet<Symbol>) -> bool {
    matches!(t, Term::Matchable(x) if theta.contains(x))
}

fn prefixed(directions: &[u8], positions: BTreeSet<Position>) -> BTreeSet<Position> {
    let prefix = Position::new(directions.iter().copied());
    positions.into_iter().map(|p| prefix.join(&p)).collect()
}

/// The match analysis `S_M`. Caller contract: the match of `u` against `p`
/// under `theta` waits. Five ordered clauses, mirroring the matching
/// clauses; the fall-through returns the empty pair, which the caller reads
/// as "no reduction of pattern or argument can decide this match".
pub fn s_match(theta: &BTreeSet<Symbol>, u: &Term, p: &Term) -> SMResult {
    // Clause 1: a bound matchable catches any argument.
    if is_bound_matchable(p, theta) {
        return SMResult::default();
    }
    // Clause 2: identical unbound matchables already agree.
    if let (Term::Matchable(a), Term::Matchable(b)) = (u, p) {
        if a == b && !theta.contains(b) {
            return SMResult::default();
        }
    }
    // Clause 3: compound against compound, both matchable forms.
    if let (Term::App(u1, u2), Term::App(p1, p2)) = (u, p) {
        if u.is_matchable_form() && p.is_matchable_form() {
            let left = s_match(theta, u1, p1);
            let right = s_match(theta, u2, p2);
            let mut combined = SMResult::default();
            combined
                .pattern_positions
                .extend(prefixed(&[1], left.pattern_positions));
            combined
                .pattern_positions
                .extend(prefixed(&[2], right.pattern_positions));
            combined
                .argument_positions
                .extend(prefixed(&[1], left.argument_positions));
            combined
                .argument_positions
                .extend(prefixed(&[2], right.argument_positions));
            return combined;
        }
    }
    // Clause 4: the pattern is not yet a matchable form — only reducing
    // the pattern can help.
    if !p.is_matchable_form() {
        return SMResult {
            pattern_positions: s_pi(p),
            argument_positions: BTreeSet::new(),
        };
    }
    // Clause 5: the pattern is ready but the argument is not.
    if !u.is_matchable_form() && !is_bound_matchable(p, theta) {
        return SMResult {
            pattern_positions: BTreeSet::new(),
            argument_positions: s_pi(u),
        };
    }
    SMResult::default()
}

/// The position-selection function `S_π`: eleven ordered clauses keyed on
/// the shape of the term, its match, and normal-form tests.
pub fn s_pi(t: &Term) -> BTreeSet<Position> {
    match t {
        Term::Var(_) | Term::Matchable(_) => BTreeSet::new(),
        Term::Abs(_, pattern, body) => {
            if !is_normal_form(pattern) {
                prefixed(&[1], s_pi(pattern))
            } else {
                prefixed(&[2], s_pi(body))
            }
        }
        Term::App(fun, arg) => {
            if let Term::Abs(theta, pattern, body) = &**fun {
                let mu = match_terms(theta, arg, pattern);
                if mu.is_decided() {
                    return BTreeSet::from([Position::root()]);
                }
                let sm = s_match(theta, arg, pattern);
                if !sm.is_empty() {
                    let mut out = prefixed(&[1, 1], sm.pattern_positions);
                    out.extend(prefixed(&[2], sm.argument_positions));
                    return out;
                }
                if !is_normal_form(pattern) {
                    return prefixed(&[1, 1], s_pi(pattern));
                }
                if !is_normal_form(body) {
                    return prefixed(&[1, 2], s_pi(body));
                }
                return prefixed(&[2], s_pi(arg));
            }
            if !is_normal_form(fun) {
                prefixed(&[1], s_pi(fun))
            } else {
                prefixed(&[2], s_pi(arg))
            }
        }
    }
}

/// The strategy proper: the multistep at the positions `S_π` selects.
pub fn strategy_s(t: &Term) -> Result<Multistep, StrategyError> {
    if is_normal_form(t) {
        return Err(StrategyError::NormalForm);
    }
    let positions = s_pi(t);
    Ok(Multistep::new(t.clone(), positions)
        .expect("the strategy selects contractible steps"))
}

/// Is every abstraction of the shape `\[x] ^x . s` with no stray
/// matchables? On such terms the calculus is the lambda calculus.
pub fn is_lambda_fragment(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Matchable(_) => false,
        Term::App(fun, arg) => is_lambda_fragment(fun) && is_lambda_fragment(arg),
        Term::Abs(theta, pattern, body) => {
            let mut names = theta.iter();
            let (Some(x), None) = (names.next(), names.next()) else {
                return false;
            };
            matches!(&**pattern, Term::Matchable(y) if y == x) && is_lambda_fragment(body)
        }
    }
}

/// The leftmost-outermost step of a lambda-fragment term.
pub fn lo_redex(t: &Term) -> Result<crate::reduction::Step, StrategyError> {
    if !is_lambda_fragment(t) {
        return Err(StrategyError::NotLambdaFragment);
    }
    let pos = redex_positions(t)
        .into_iter()
        .next()
        .ok_or(StrategyError::NormalForm)?;
    Ok(crate::reduction::Step::new(t.clone(), pos)
        .expect("redex positions are contractible"))
}

/// All steps with no step strictly above them.
pub fn outermost_redexes(t: &Term) -> Multistep {
    let all = redex_positions(t);
    let outer: BTreeSet<Position> = all
        .iter()
        .filter(|p| !all.iter().any(|q| q.is_strict_prefix_of(p)))
        .cloned()
        .collect();
    Multistep::new(t.clone(), outer).expect("redex positions are contractible")
}

/// Repeatedly contract the selected multistep until a normal form appears
/// or `fuse` rounds have run. Each round is recorded with its selection.
pub fn normalize(
    t: &Term,
    selection: Selection,
    fuse: usize,
) -> Result<NormalizeTrace<Term>, StrategyError> {
    if selection == Selection::LoLambda && !is_lambda_fragment(t) {
        return Err(StrategyError::NotLambdaFragment);
    }
    let mut current = t.clone();
    let mut rounds = Vec::new();
    for _ in 0..fuse {
        if is_normal_form(&current) {
            return Ok(NormalizeTrace {
                rounds,
                outcome: NormalizeOutcome::NormalForm(current),
            });
        }
        let selected = match selection {
            Selection::NecessaryS => strategy_s(&current).expect("not a normal form"),
            Selection::LoLambda => {
                let step = lo_redex(&current).expect("not a normal form");
                Multistep::new(current.clone(), [step.position().clone()])
                    .expect("the step is contractible")
            }
            Selection::ParallelOutermost => outermost_redexes(&current),
        };
        let next = selected.target();
        rounds.push((current, selected.positions().clone()));
        current = next;
    }
    if is_normal_form(&current) {
        return Ok(NormalizeTrace {
            rounds,
            outcome: NormalizeOutcome::NormalForm(current),
        });
    }
    Ok(NormalizeTrace {
        rounds,
        outcome: NormalizeOutcome::FuseExceeded,
    })
}
