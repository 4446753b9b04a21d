//! The three-valued matching kernel driving contraction.
//!
//! Matching an argument against a pattern yields a [`Match`]: a positive
//! substitution, a definite `Fail`, or `Wait` when one side is not yet a
//! matchable form and reduction could still tip the outcome either way.
//! Contraction only happens on *decided* (positive or fail) matches.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::term::{Substitution, Symbol, Term};

/// Outcome of matching an argument against a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Match {
    Positive(Substitution),
    Fail,
    Wait,
}

impl Match {
    /// Positive or fail; only decided matches can be contracted.
    pub fn is_decided(&self) -> bool {
        !matches!(self, Match::Wait)
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Match::Positive(_))
    }
}

impl fmt::Display for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Match::Positive(_) => write!(f, "positive"),
            Match::Fail => write!(f, "fail"),
            Match::Wait => write!(f, "wait"),
        }
    }
}

/// Errors from operations that require a decided match.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("match application is undefined on wait")]
    UndefinedOnWait,
}

/// Disjoint union of two matches: fail absorbs everything (in particular
/// `fail ⊎ wait = wait ⊎ fail = fail`), wait propagates otherwise, and two
/// substitutions merge only when their domains are disjoint — overlapping
/// domains fail, which is what rules out non-linear patterns.
pub fn disjoint_union(a: Match, b: Match) -> Match {
    match (a, b) {
        (Match::Fail, _) | (_, Match::Fail) => Match::Fail,
        (Match::Wait, _) | (_, Match::Wait) => Match::Wait,
        (Match::Positive(sa), Match::Positive(sb)) => {
            if sa.0.keys().any(|k| sb.0.contains_key(k)) {
                Match::Fail
            } else {
                let mut merged = sa.0;
                merged.extend(sb.0);
                Match::Positive(Substitution(merged))
            }
        }
    }
}

/// Compound matching of argument `t` against pattern `p` under binders `θ`,
/// applying five clauses in order:
///
/// 1. a bound matchable catches the whole argument;
/// 2. the *same* unbound matchable on both sides matches emptily;
/// 3. application against application, both sides matchable forms: match
///    componentwise and take the disjoint union;
/// 4. both sides matchable forms otherwise: fail;
/// 5. otherwise: wait.
///
/// The order matters; in particular clause 3 must not recurse unless both
/// sides are already matchable forms.
pub fn compound_match(theta: &BTreeSet<Symbol>, t: &Term, p: &Term) -> Match {
    match p {
        Term::Matchable(x) if theta.contains(x) => {
            return Match::Positive(Substitution::singleton(x.clone(), t.clone()));
        }
        Term::Matchable(x) => {
            if let Term::Matchable(y) = t {
                if x == y {
                    return Match::Positive(Substitution::empty());
                }
            }
        }
        _ => {}
    }
    if let (Term::App(t1, t2), Term::App(p1, p2)) = (t, p) {
        if t.is_matchable_form() && p.is_matchable_form() {
            return disjoint_union(
                compound_match(theta, t1, p1),
                compound_match(theta, t2, p2),
            );
        }
    }
    if t.is_matchable_form() && p.is_matchable_form() {
        Match::Fail
    } else {
        Match::Wait
    }
}

/// The check of a match on `θ`: a positive match whose domain is not exactly
/// `θ` becomes fail; everything else passes through.
pub fn check(mu: Match, theta: &BTreeSet<Symbol>) -> Match {
    match mu {
        Match::Positive(sigma) if sigma.domain() != *theta => Match::Fail,
        other => other,
    }
}

/// The matching operation: compound matching followed by the domain check.
/// Never positive when the pattern is non-linear in `θ`.
pub fn match_terms(theta: &BTreeSet<Symbol>, t: &Term, p: &Term) -> Match {
    check(compound_match(theta, t, p), theta)
}

/// Apply a decided match to a term: a positive match substitutes, fail
/// collapses to the identity function.
pub fn apply_match(mu: &Match, t: &Term) -> Result<Term, MatchError> {
    match mu {
        Match::Positive(sigma) => Ok(sigma.apply(t)),
        Match::Fail => Ok(Term::identity()),
        Match::Wait => Err(MatchError::UndefinedOnWait),
    }
}
