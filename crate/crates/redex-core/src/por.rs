//! The lambda calculus with parallel-or: a second rewriting system wired
//! into the same axiomatic interface.
//!
//! ```text
//! t ::= x | \x.t | t t | or(t,t) | tt
//! ```
//!
//! Three rules: beta, `or(tt, u) -> tt`, and `or(u, tt) -> tt`. When both
//! disjuncts are `tt` the two rule instances coincide: `or(tt,tt)` offers a
//! single step at the root. An or-step erases everything under it, so the
//! calculus is not orthogonal in the syntactic sense, yet it satisfies all
//! thirteen axioms; and because both disjuncts of an `or` can be needed
//! only jointly, no single-step notion of neededness covers it — the
//! multistep strategy [`por_strategy`] does.
//!
//! Positions: an application or an `or` has children 1 and 2; a lambda has
//! its body at 1. A beta step at `q` has its body at `q11` and its
//! argument at `q2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ars::ArsInstance;
use crate::strategy::{NormalizeOutcome, NormalizeTrace};
use crate::syntax::{Cursor, ParseError, TokenKind};
use crate::term::{fresh_symbol, Position, PositionError, Symbol};

/// Terms of the lambda calculus with parallel-or.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PorTerm {
    Var(Symbol),
    Lam(Symbol, Box<PorTerm>),
    App(Box<PorTerm>, Box<PorTerm>),
    Or(Box<PorTerm>, Box<PorTerm>),
    Tt,
}

impl PorTerm {
    pub fn var(name: impl Into<Symbol>) -> PorTerm {
        PorTerm::Var(name.into())
    }

    pub fn lam(binder: impl Into<Symbol>, body: PorTerm) -> PorTerm {
        PorTerm::Lam(binder.into(), Box::new(body))
    }

    pub fn app(fun: PorTerm, arg: PorTerm) -> PorTerm {
        PorTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn or(left: PorTerm, right: PorTerm) -> PorTerm {
        PorTerm::Or(Box::new(left), Box::new(right))
    }

    pub fn tt() -> PorTerm {
        PorTerm::Tt
    }

    pub fn size(&self) -> usize {
        match self {
            PorTerm::Var(_) | PorTerm::Tt => 1,
            PorTerm::Lam(_, body) => 1 + body.size(),
            PorTerm::App(l, r) | PorTerm::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        match self {
            PorTerm::Var(x) => BTreeSet::from([x.clone()]),
            PorTerm::Tt => BTreeSet::new(),
            PorTerm::Lam(x, body) => {
                let mut fv = body.free_vars();
                fv.remove(x);
                fv
            }
            PorTerm::App(l, r) | PorTerm::Or(l, r) => {
                let mut fv = l.free_vars();
                fv.extend(r.free_vars());
                fv
            }
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&PorTerm, PositionError> {
        let mut current = self;
        for (depth, d) in pos.directions().iter().enumerate() {
            current = match (current, d) {
                (PorTerm::Lam(_, body), 1) => body,
                (PorTerm::App(l, _), 1) | (PorTerm::Or(l, _), 1) => l,
                (PorTerm::App(_, r), 2) | (PorTerm::Or(_, r), 2) => r,
                _ => {
                    return Err(PositionError::OutOfTerm(Position::new(
                        pos.directions()[..=depth].iter().copied(),
                    )))
                }
            };
        }
        Ok(current)
    }

    pub fn replace_at(
        &self,
        pos: &Position,
        replacement: PorTerm,
    ) -> Result<PorTerm, PositionError> {
        fn go(
            term: &PorTerm,
            directions: &[u8],
            replacement: PorTerm,
            pos: &Position,
            depth: usize,
        ) -> Result<PorTerm, PositionError> {
            let Some((&d, rest)) = directions.split_first() else {
                return Ok(replacement);
            };
            let next = depth + 1;
            match (term, d) {
                (PorTerm::Lam(x, body), 1) => Ok(PorTerm::lam(
                    x.clone(),
                    go(body, rest, replacement, pos, next)?,
                )),
                (PorTerm::App(l, r), 1) => Ok(PorTerm::app(
                    go(l, rest, replacement, pos, next)?,
                    (**r).clone(),
                )),
                (PorTerm::App(l, r), 2) => Ok(PorTerm::app(
                    (**l).clone(),
                    go(r, rest, replacement, pos, next)?,
                )),
                (PorTerm::Or(l, r), 1) => Ok(PorTerm::or(
                    go(l, rest, replacement, pos, next)?,
                    (**r).clone(),
                )),
                (PorTerm::Or(l, r), 2) => Ok(PorTerm::or(
                    (**l).clone(),
                    go(r, rest, replacement, pos, next)?,
                )),
                _ => Err(PositionError::OutOfTerm(Position::new(
                    pos.directions()[..=depth].iter().copied(),
                ))),
            }
        }
        go(self, pos.directions(), replacement, pos, 0)
    }

    /// Capture-avoiding substitution of `value` for the free variable `x`.
    pub fn substitute(&self, x: &Symbol, value: &PorTerm) -> PorTerm {
        match self {
            PorTerm::Var(y) if y == x => value.clone(),
            PorTerm::Var(_) | PorTerm::Tt => self.clone(),
            PorTerm::App(l, r) => {
                PorTerm::app(l.substitute(x, value), r.substitute(x, value))
            }
            PorTerm::Or(l, r) => {
                PorTerm::or(l.substitute(x, value), r.substitute(x, value))
            }
            PorTerm::Lam(y, body) => {
                if y == x || !body.free_vars().contains(x) {
                    return self.clone();
                }
                if value.free_vars().contains(y) {
                    let mut avoid = value.free_vars();
                    avoid.extend(body.free_vars());
                    avoid.insert(x.clone());
                    let fresh = fresh_symbol(y, &avoid);
                    let renamed = body.substitute(y, &PorTerm::var(fresh.clone()));
                    PorTerm::lam(fresh, renamed.substitute(x, value))
                } else {
                    PorTerm::lam(y.clone(), body.substitute(x, value))
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &PorTerm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Rename binders to `#0`, `#1`, ... in traversal order, so that
    /// alpha-equivalent terms become identical.
    pub fn canonical(&self) -> PorTerm {
        fn go(
            term: &PorTerm,
            bound: &mut HashMap<Symbol, Vec<Symbol>>,
            counter: &mut usize,
        ) -> PorTerm {
            match term {
                PorTerm::Var(x) => {
                    let name = bound
                        .get(x)
                        .and_then(|stack| stack.last().cloned())
                        .unwrap_or_else(|| x.clone());
                    PorTerm::Var(name)
                }
                PorTerm::Tt => PorTerm::Tt,
                PorTerm::App(l, r) => {
                    let l = go(l, bound, counter);
                    let r = go(r, bound, counter);
                    PorTerm::app(l, r)
                }
                PorTerm::Or(l, r) => {
                    let l = go(l, bound, counter);
                    let r = go(r, bound, counter);
                    PorTerm::or(l, r)
                }
                PorTerm::Lam(x, body) => {
                    let fresh = format!("#{counter}");
                    *counter += 1;
                    bound.entry(x.clone()).or_default().push(fresh.clone());
                    let body = go(body, bound, counter);
                    bound.get_mut(x).expect("pushed").pop();
                    PorTerm::lam(fresh, body)
                }
            }
        }
        go(self, &mut HashMap::new(), &mut 0)
    }
}

/// Parenthesization context for printing.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    Open,
    Fun,
    Arg,
}

fn write_por(f: &mut fmt::Formatter<'_>, term: &PorTerm, place: Place) -> fmt::Result {
    let parens = match term {
        PorTerm::Var(_) | PorTerm::Tt | PorTerm::Or(_, _) => false,
        PorTerm::App(_, _) => place == Place::Arg,
        PorTerm::Lam(_, _) => place != Place::Open,
    };
    if parens {
        f.write_str("(")?;
        write_por(f, term, Place::Open)?;
        return f.write_str(")");
    }
    match term {
        PorTerm::Var(x) => f.write_str(x),
        PorTerm::Tt => f.write_str("tt"),
        PorTerm::Lam(x, body) => {
            write!(f, "\\{x}.")?;
            write_por(f, body, Place::Open)
        }
        PorTerm::App(l, r) => {
            write_por(f, l, Place::Fun)?;
            f.write_str(" ")?;
            write_por(f, r, Place::Arg)
        }
        PorTerm::Or(l, r) => {
            f.write_str("or(")?;
            write_por(f, l, Place::Open)?;
            f.write_str(",")?;
            write_por(f, r, Place::Open)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for PorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_por(f, self, Place::Open)
    }
}

/// Parse a term: `tt` and `or` are keywords, `\x.t` binds as far right as
/// possible, application is juxtaposition.
pub fn parse_por_term(input: &str) -> Result<PorTerm, ParseError> {
    let mut cursor = Cursor::new(input)?;
    let term = parse_application(&mut cursor)?;
    cursor.expect_end()?;
    Ok(term)
}

fn starts_atom(kind: &TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Ident(_) | TokenKind::Backslash | TokenKind::LParen
    )
}

fn parse_application(cursor: &mut Cursor) -> Result<PorTerm, ParseError> {
    let mut term = parse_atom(cursor)?;
    while cursor.peek().is_some_and(|t| starts_atom(&t.kind)) {
        let arg = parse_atom(cursor)?;
        term = PorTerm::app(term, arg);
    }
    Ok(term)
}

fn parse_atom(cursor: &mut Cursor) -> Result<PorTerm, ParseError> {
    let Some(token) = cursor.peek() else {
        return Err(cursor.error_here("expected a term, found end of input"));
    };
    match &token.kind {
        TokenKind::Ident(name) if name == "tt" => {
            cursor.next();
            Ok(PorTerm::tt())
        }
        TokenKind::Ident(name) if name == "or" => {
            cursor.next();
            cursor.expect(&TokenKind::LParen)?;
            let left = parse_application(cursor)?;
            cursor.expect(&TokenKind::Comma)?;
            let right = parse_application(cursor)?;
            cursor.expect(&TokenKind::RParen)?;
            Ok(PorTerm::or(left, right))
        }
        TokenKind::Ident(_) => {
            let name = cursor.expect_ident("a variable")?;
            Ok(PorTerm::var(name))
        }
        TokenKind::Backslash => {
            cursor.next();
            let binder = cursor.expect_ident("a binder name")?;
            cursor.expect(&TokenKind::Dot)?;
            let body = parse_application(cursor)?;
            Ok(PorTerm::lam(binder, body))
        }
        TokenKind::LParen => {
            cursor.next();
            let term = parse_application(cursor)?;
            cursor.expect(&TokenKind::RParen)?;
            Ok(term)
        }
        other => Err(cursor.error_here(format!("expected a term, found {other}"))),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PorError {
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("no rule applies at {0}")]
    NotARedex(Position),
    #[error("steps have different sources")]
    NotCoinitial,
    #[error("no reduction reaches a normal form within {bound} steps")]
    SourceNotNormalizing { bound: usize },
}

/// What rule a step applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PorRule {
    Beta,
    /// An `or` with at least one `tt` disjunct rewrites to `tt`. A single
    /// rule instance per position: `or(tt,tt)` is one step, not two.
    Or,
}

/// A step: a source term and the position of a rule instance in it.
#[derive(Debug, Clone)]
pub struct PorStep {
    source: PorTerm,
    pos: Position,
    rule: PorRule,
}

impl PartialEq for PorStep {
    fn eq(&self, other: &Self) -> bool {
        self.pos == other.pos && self.source.alpha_eq(&other.source)
    }
}

impl Eq for PorStep {}

fn rule_at(term: &PorTerm) -> Option<PorRule> {
    match term {
        PorTerm::App(fun, _) if matches!(**fun, PorTerm::Lam(_, _)) => Some(PorRule::Beta),
        PorTerm::Or(l, r) if **l == PorTerm::Tt || **r == PorTerm::Tt => Some(PorRule::Or),
        _ => None,
    }
}

impl PorStep {
    pub fn new(source: PorTerm, pos: Position) -> Result<PorStep, PorError> {
        let subterm = source.subterm_at(&pos)?;
        let rule = rule_at(subterm).ok_or_else(|| PorError::NotARedex(pos.clone()))?;
        Ok(PorStep { source, pos, rule })
    }

    pub fn source(&self) -> &PorTerm {
        &self.source
    }

    pub fn position(&self) -> &Position {
        &self.pos
    }

    pub fn rule(&self) -> PorRule {
        self.rule
    }

    pub fn target(&self) -> PorTerm {
        let subterm = self.source.subterm_at(&self.pos).expect("validated");
        let contractum = match (self.rule, subterm) {
            (PorRule::Beta, PorTerm::App(fun, arg)) => {
                let PorTerm::Lam(x, body) = &**fun else {
                    unreachable!("validated beta step");
                };
                body.substitute(x, arg)
            }
            (PorRule::Or, PorTerm::Or(_, _)) => PorTerm::Tt,
            _ => unreachable!("validated step"),
        };
        self.source
            .replace_at(&self.pos, contractum)
            .expect("validated position")
    }
}

/// All rule instances of a term, in preorder.
pub fn por_redexes(t: &PorTerm) -> Vec<PorStep> {
    por_redex_positions(t)
        .into_iter()
        .map(|pos| PorStep::new(t.clone(), pos).expect("scanned positions are steps"))
        .collect()
}

pub fn por_redex_positions(t: &PorTerm) -> Vec<Position> {
    fn go(t: &PorTerm, here: &Position, out: &mut Vec<Position>) {
        if rule_at(t).is_some() {
            out.push(here.clone());
        }
        match t {
            PorTerm::Var(_) | PorTerm::Tt => {}
            PorTerm::Lam(_, body) => go(body, &here.child(1), out),
            PorTerm::App(l, r) | PorTerm::Or(l, r) => {
                go(l, &here.child(1), out);
                go(r, &here.child(2), out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, &Position::root(), &mut out);
    out
}

pub fn por_is_normal_form(t: &PorTerm) -> bool {
    por_redex_positions(t).is_empty()
}

/// Positions of free occurrences of `x` in `t`.
fn free_occurrences(t: &PorTerm, x: &Symbol, here: &Position, out: &mut Vec<Position>) {
    match t {
        PorTerm::Var(y) => {
            if y == x {
                out.push(here.clone());
            }
        }
        PorTerm::Tt => {}
        PorTerm::Lam(y, body) => {
            if y != x {
                free_occurrences(body, x, &here.child(1), out);
            }
        }
        PorTerm::App(l, r) | PorTerm::Or(l, r) => {
            free_occurrences(l, x, &here.child(1), out);
            free_occurrences(r, x, &here.child(2), out);
        }
    }
}

/// Residuals of `b` after `a`, as positions in `a`'s target. A beta step
/// relocates what it does not consume; an or-step erases everything at or
/// under itself.
pub fn por_residuals(b: &PorStep, a: &PorStep) -> Result<BTreeSet<Position>, PorError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(PorError::NotCoinitial);
    }
    if a.pos == b.pos {
        return Ok(BTreeSet::new());
    }
    if !a.pos.is_prefix_of(&b.pos) {
        return Ok(BTreeSet::from([b.pos.clone()]));
    }
    match a.rule {
        PorRule::Or => Ok(BTreeSet::new()),
        PorRule::Beta => {
            let below = b.pos.strip_prefix(&a.pos).expect("prefix checked");
            let PorTerm::App(fun, _) = a.source.subterm_at(&a.pos).expect("validated")
            else {
                unreachable!("validated beta step");
            };
            let PorTerm::Lam(x, body) = &**fun else {
                unreachable!("validated beta step");
            };
            match below.directions() {
                [1, 1, rest @ ..] => {
                    // Inside the body: the step moves to where the body
                    // lands, unless substitution shadows nothing there —
                    // positions are stable because replacement happens at
                    // variable leaves only.
                    Ok(BTreeSet::from([a
                        .pos
                        .join(&Position::new(rest.iter().copied()))]))
                }
                [2, rest @ ..] => {
                    let rest = Position::new(rest.iter().copied());
                    let mut copies = Vec::new();
                    free_occurrences(body, x, &Position::root(), &mut copies);
                    Ok(copies
                        .into_iter()
                        .map(|k| a.pos.join(&k).join(&rest))
                        .collect())
                }
                _ => unreachable!("a lambda child can only be the body"),
            }
        }
    }
}

/// Does `a` strictly embed `b`?
pub fn por_embeds(a: &PorStep, b: &PorStep) -> Result<bool, PorError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(PorError::NotCoinitial);
    }
    Ok(a.pos.is_strict_prefix_of(&b.pos))
}

/// Does `a` grip `b`? Only a beta step grips: its binder must occur free
/// in the subterm where `b` sits, inside its lambda.
pub fn por_grips(a: &PorStep, b: &PorStep) -> Result<bool, PorError> {
    if !a.source.alpha_eq(&b.source) {
        return Err(PorError::NotCoinitial);
    }
    if a.rule != PorRule::Beta {
        return Ok(false);
    }
    let Some(below) = b.pos.strip_prefix(&a.pos) else {
        return Ok(false);
    };
    if !matches!(below.directions(), [1, ..]) {
        return Ok(false);
    }
    let PorTerm::App(fun, _) = a.source.subterm_at(&a.pos).expect("validated") else {
        unreachable!("validated beta step");
    };
    let PorTerm::Lam(x, _) = &**fun else {
        unreachable!("validated beta step");
    };
    let gripped = a.source.subterm_at(&b.pos).expect("coinitial step position");
    Ok(gripped.free_vars().contains(x))
}

/// The multistep strategy: nine ordered clauses. A decided application or
/// `or` is taken at the root; otherwise selection descends, and in an
/// undecided `or` it selects in both disjuncts at once.
pub fn por_s_pi(t: &PorTerm) -> BTreeSet<Position> {
    fn prefixed(d: u8, positions: BTreeSet<Position>) -> BTreeSet<Position> {
        let prefix = Position::new([d]);
        positions.into_iter().map(|p| prefix.join(&p)).collect()
    }
    match t {
        PorTerm::App(fun, arg) => {
            if matches!(**fun, PorTerm::Lam(_, _)) {
                return BTreeSet::from([Position::root()]);
            }
            if !por_is_normal_form(fun) {
                prefixed(1, por_s_pi(fun))
            } else {
                prefixed(2, por_s_pi(arg))
            }
        }
        PorTerm::Or(l, r) => {
            if **l == PorTerm::Tt || **r == PorTerm::Tt {
                return BTreeSet::from([Position::root()]);
            }
            let mut out = prefixed(1, por_s_pi(l));
            out.extend(prefixed(2, por_s_pi(r)));
            out
        }
        PorTerm::Lam(_, body) => prefixed(1, por_s_pi(body)),
        PorTerm::Tt | PorTerm::Var(_) => BTreeSet::new(),
    }
}

/// Develop a set of steps of `t`: contract one, track residuals of the
/// rest, repeat.
pub fn por_develop(t: &PorTerm, positions: &BTreeSet<Position>) -> Result<PorTerm, PorError> {
    let mut remaining: Vec<PorStep> = positions
        .iter()
        .map(|p| PorStep::new(t.clone(), p.clone()))
        .collect::<Result<_, _>>()?;
    let mut current = t.clone();
    while let Some(step) = remaining.first().cloned() {
        current = step.target();
        let mut next = Vec::new();
        for b in &remaining[1..] {
            for p in por_residuals(b, &step)? {
                let residual = PorStep::new(current.clone(), p)
                    .expect("residual positions are steps");
                if !next.contains(&residual) {
                    next.push(residual);
                }
            }
        }
        remaining = next;
    }
    Ok(current)
}

/// Normalize under the multistep strategy, up to `fuse` rounds.
pub fn por_normalize(t: &PorTerm, fuse: usize) -> NormalizeTrace<PorTerm> {
    let mut current = t.clone();
    let mut rounds = Vec::new();
    for _ in 0..fuse {
        if por_is_normal_form(&current) {
            return NormalizeTrace {
                rounds,
                outcome: NormalizeOutcome::NormalForm(current),
            };
        }
        let selected = por_s_pi(&current);
        let next = por_develop(&current, &selected).expect("strategy selects steps");
        rounds.push((current, selected));
        current = next;
    }
    if por_is_normal_form(&current) {
        return NormalizeTrace {
            rounds,
            outcome: NormalizeOutcome::NormalForm(current),
        };
    }
    NormalizeTrace {
        rounds,
        outcome: NormalizeOutcome::FuseExceeded,
    }
}

/// Bounded check that no development of `positions` can perform a step
/// gripping a residual of the set. Explores single-step reducts to
/// `depth_bound`, ignoring terms larger than `size_bound`.
pub fn por_is_never_gripping_bounded(
    t: &PorTerm,
    positions: &BTreeSet<Position>,
    depth_bound: usize,
    size_bound: usize,
) -> bool {
    let mut queue: Vec<(PorTerm, BTreeSet<Position>, usize)> =
        vec![(t.clone(), positions.clone(), 0)];
    let mut seen: BTreeSet<(PorTerm, Vec<Position>)> = BTreeSet::new();
    while let Some((term, res, depth)) = queue.pop() {
        let key = (term.canonical(), res.iter().cloned().collect());
        if !seen.insert(key) {
            continue;
        }
        let steps = por_redexes(&term);
        for b_pos in &res {
            let Ok(b) = PorStep::new(term.clone(), b_pos.clone()) else {
                continue;
            };
            for c in &steps {
                if por_grips(c, &b).expect("coinitial") {
                    return false;
                }
            }
        }
        if depth >= depth_bound {
            continue;
        }
        for a in &steps {
            let target = a.target();
            if target.size() > size_bound {
                continue;
            }
            let mut next_res = BTreeSet::new();
            for b_pos in &res {
                let Ok(b) = PorStep::new(term.clone(), b_pos.clone()) else {
                    continue;
                };
                next_res.extend(por_residuals(&b, a).expect("coinitial"));
            }
            queue.push((target, next_res, depth + 1));
        }
    }
    true
}

/// Bounded check that every reduction to normal form within `step_bound`
/// steps contracts a residual of `positions`. Errors when no explored path
/// reaches a normal form at all.
pub fn por_is_necessary_bounded(
    t: &PorTerm,
    positions: &BTreeSet<Position>,
    step_bound: usize,
) -> Result<bool, PorError> {
    type Memo = HashMap<(PorTerm, Vec<Position>, bool, usize), (bool, bool)>;

    /// Returns (some path reached a normal form, some path reached one
    /// without ever using the tracked set).
    fn go(
        term: &PorTerm,
        res: &BTreeSet<Position>,
        used: bool,
        budget: usize,
        memo: &mut Memo,
    ) -> (bool, bool) {
        if por_is_normal_form(term) {
            return (true, !used);
        }
        if budget == 0 {
            return (false, false);
        }
        let key = (
            term.canonical(),
            res.iter().cloned().collect(),
            used,
            budget,
        );
        if let Some(&cached) = memo.get(&key) {
            return cached;
        }
        let mut reached = false;
        let mut violated = false;
        for a in por_redexes(term) {
            let uses_now = used || res.contains(a.position());
            let next_res = if uses_now {
                BTreeSet::new()
            } else {
                let mut out = BTreeSet::new();
                for b_pos in res {
                    let b = PorStep::new(term.clone(), b_pos.clone())
                        .expect("tracked positions are steps");
                    out.extend(por_residuals(&b, &a).expect("coinitial"));
                }
                out
            };
            let (r, v) = go(&a.target(), &next_res, uses_now, budget - 1, memo);
            reached |= r;
            violated |= v;
            if violated {
                break;
            }
        }
        memo.insert(key, (reached, violated));
        (reached, violated)
    }

    for p in positions {
        PorStep::new(t.clone(), p.clone())?;
    }
    let (reached, violated) = go(t, positions, false, step_bound, &mut HashMap::new());
    if violated {
        return Ok(false);
    }
    if !reached {
        return Err(PorError::SourceNotNormalizing { bound: step_bound });
    }
    Ok(true)
}

/// The lambda calculus with parallel-or as an [`ArsInstance`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PorArs;

impl ArsInstance for PorArs {
    type Object = PorTerm;
    type Step = PorStep;

    fn name(&self) -> &str {
        "por"
    }

    fn steps_of(&self, t: &PorTerm) -> Vec<PorStep> {
        por_redexes(t)
    }

    fn source(&self, a: &PorStep) -> PorTerm {
        a.source().clone()
    }

    fn target(&self, a: &PorStep) -> PorTerm {
        a.target()
    }

    fn residuals(&self, b: &PorStep, a: &PorStep) -> Vec<PorStep> {
        let target = a.target();
        por_residuals(b, a)
            .expect("coinitial steps")
            .into_iter()
            .map(|p| PorStep::new(target.clone(), p).expect("residual positions are steps"))
            .collect()
    }

    fn embeds(&self, a: &PorStep, b: &PorStep) -> bool {
        por_embeds(a, b).expect("coinitial steps")
    }

    fn grips(&self, a: &PorStep, b: &PorStep) -> bool {
        por_grips(a, b).expect("coinitial steps")
    }

    fn object_eq(&self, s: &PorTerm, t: &PorTerm) -> bool {
        s.alpha_eq(t)
    }

    fn step_eq(&self, a: &PorStep, b: &PorStep) -> bool {
        a == b
    }

    fn show_object(&self, t: &PorTerm) -> String {
        t.to_string()
    }

    fn show_step(&self, a: &PorStep) -> String {
        if a.position().is_root() {
            "ε".to_string()
        } else {
            a.position().to_string()
        }
    }

    fn object_size(&self, t: &PorTerm) -> usize {
        t.size()
    }
}
