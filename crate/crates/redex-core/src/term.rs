//! Terms of the pattern calculus, positions, and substitution.
//!
//! A term is a variable `x`, a matchable `^x`, an application `t u`, or an
//! abstraction `\[θ] p . b` whose binder set `θ` binds *matchables* inside
//! the pattern `p` and *variables* inside the body `b`. A matchable that no
//! binder captures acts as a constructor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Names for variables, matchables and binders.
pub type Symbol = String;

/// A term of the pattern calculus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A variable occurrence; bound by the binder set of an enclosing
    /// abstraction whose *body* contains it, free otherwise.
    Var(Symbol),
    /// A matchable occurrence; bound by the binder set of an enclosing
    /// abstraction whose *pattern* contains it, a constructor otherwise.
    Matchable(Symbol),
    /// Application, left-associative in the surface syntax.
    App(Box<Term>, Box<Term>),
    /// Abstraction `\[θ] p . b`.
    Abs(BTreeSet<Symbol>, Box<Term>, Box<Term>),
}

/// Rough shape of a term as far as matching is concerned.
///
/// Data structures are matchables headed by applications
/// (`^x`, `^x t`, `^x t u`, ...); matchable forms are data structures and
/// abstractions. Matching against a compound pattern only makes progress
/// once both sides are matchable forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    DataStructure,
    Abstraction,
    Neither,
}

/// Errors raised by position lookups.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositionError {
    #[error("position \"{0}\" does not exist in the term")]
    OutOfTerm(Position),
}

impl Term {
    pub fn var(name: impl Into<Symbol>) -> Term {
        Term::Var(name.into())
    }

    pub fn matchable(name: impl Into<Symbol>) -> Term {
        Term::Matchable(name.into())
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn abs<I, S>(binders: I, pattern: Term, body: Term) -> Term
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        Term::Abs(
            binders.into_iter().map(Into::into).collect(),
            Box::new(pattern),
            Box::new(body),
        )
    }

    /// The identity function `\[x] ^x . x`, also the result every matching
    /// failure reduces to.
    pub fn identity() -> Term {
        Term::abs(["x"], Term::matchable("x"), Term::var("x"))
    }

    /// Number of nodes; binder sets do not count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Matchable(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, p, b) => 1 + p.size() + b.size(),
        }
    }

    /// Free variables: binder sets remove variables of the body only; the
    /// pattern's variables are all free.
    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        match self {
            Term::Var(x) => BTreeSet::from([x.clone()]),
            Term::Matchable(_) => BTreeSet::new(),
            Term::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            Term::Abs(theta, p, b) => {
                let mut s: BTreeSet<_> = b.free_vars().difference(theta).cloned().collect();
                s.extend(p.free_vars());
                s
            }
        }
    }

    /// Free matchables: binder sets remove matchables of the pattern only;
    /// the body's matchables are all free.
    pub fn free_matchables(&self) -> BTreeSet<Symbol> {
        match self {
            Term::Var(_) => BTreeSet::new(),
            Term::Matchable(x) => BTreeSet::from([x.clone()]),
            Term::App(f, a) => {
                let mut s = f.free_matchables();
                s.extend(a.free_matchables());
                s
            }
            Term::Abs(theta, p, b) => {
                let mut s: BTreeSet<_> = p.free_matchables().difference(theta).cloned().collect();
                s.extend(b.free_matchables());
                s
            }
        }
    }

    pub fn form(&self) -> Form {
        match self {
            Term::Matchable(_) => Form::DataStructure,
            Term::App(f, _) if f.form() == Form::DataStructure => Form::DataStructure,
            Term::Abs(..) => Form::Abstraction,
            _ => Form::Neither,
        }
    }

    pub fn is_data_structure(&self) -> bool {
        self.form() == Form::DataStructure
    }

    /// Matchable forms are data structures and abstractions.
    pub fn is_matchable_form(&self) -> bool {
        self.form() != Form::Neither
    }

    /// All positions of the term, in preorder.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.collect_positions(Position::root(), &mut out);
        out
    }

    fn collect_positions(&self, here: Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        match self {
            Term::Var(_) | Term::Matchable(_) => {}
            Term::App(f, a) => {
                f.collect_positions(here.child(1), out);
                a.collect_positions(here.child(2), out);
            }
            Term::Abs(_, p, b) => {
                p.collect_positions(here.child(1), out);
                b.collect_positions(here.child(2), out);
            }
        }
    }

    /// The subterm at `pos`: child 1 is the function or the pattern, child 2
    /// the argument or the body.
    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, PositionError> {
        let mut cur = self;
        for (i, step) in pos.0.iter().enumerate() {
            cur = match (cur, step) {
                (Term::App(f, _), 1) => f,
                (Term::App(_, a), 2) => a,
                (Term::Abs(_, p, _), 1) => p,
                (Term::Abs(_, _, b), 2) => b,
                _ => {
                    return Err(PositionError::OutOfTerm(Position(pos.0[..=i].to_vec())));
                }
            };
        }
        Ok(cur)
    }

    /// Replace the subterm at `pos` with `replacement`. Plain tree grafting:
    /// free variables or matchables of the replacement are captured by any
    /// binder in scope at `pos`, which is exactly what contraction needs.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term, PositionError> {
        if pos.is_root() {
            return Ok(replacement);
        }
        // Validate the whole position first so errors point at it precisely.
        self.subterm_at(pos)?;
        Ok(self.replace_unchecked(&pos.0, replacement))
    }

    fn replace_unchecked(&self, pos: &[u8], replacement: Term) -> Term {
        match pos {
            [] => replacement,
            [d, rest @ ..] => match (self, d) {
                (Term::App(f, a), 1) => {
                    Term::app(f.replace_unchecked(rest, replacement), (**a).clone())
                }
                (Term::App(f, a), 2) => {
                    Term::app((**f).clone(), a.replace_unchecked(rest, replacement))
                }
                (Term::Abs(theta, p, b), 1) => Term::Abs(
                    theta.clone(),
                    Box::new(p.replace_unchecked(rest, replacement)),
                    b.clone(),
                ),
                (Term::Abs(theta, p, b), 2) => Term::Abs(
                    theta.clone(),
                    p.clone(),
                    Box::new(b.replace_unchecked(rest, replacement)),
                ),
                _ => unreachable!("position was validated before descending"),
            },
        }
    }

    /// Alpha-equivalence: simultaneous traversal with a bijection per binder
    /// set, shared between the pattern (matchable occurrences) and the body
    /// (variable occurrences). Binder sets must have equal cardinality.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(left: &Term, right: &Term, scopes: &mut Scopes) -> bool {
            match (left, right) {
                (Term::Var(x), Term::Var(y)) => scopes.vars_agree(x, y),
                (Term::Matchable(x), Term::Matchable(y)) => scopes.matchables_agree(x, y),
                (Term::App(f1, a1), Term::App(f2, a2)) => {
                    go(f1, f2, scopes) && go(a1, a2, scopes)
                }
                (Term::Abs(th1, p1, b1), Term::Abs(th2, p2, b2)) => {
                    if th1.len() != th2.len() {
                        return false;
                    }
                    let frame = scopes.frames.len();
                    scopes.frames.push(Frame {
                        left: th1.clone(),
                        right: th2.clone(),
                        fwd: BTreeMap::new(),
                        bwd: BTreeMap::new(),
                    });
                    scopes.matchable_scopes.push(frame);
                    let patterns_ok = go(p1, p2, scopes);
                    scopes.matchable_scopes.pop();
                    scopes.var_scopes.push(frame);
                    let ok = patterns_ok && go(b1, b2, scopes);
                    scopes.var_scopes.pop();
                    scopes.frames.pop();
                    ok
                }
                _ => false,
            }
        }
        let mut scopes = Scopes::default();
        go(self, other, &mut scopes)
    }

    /// A canonical representative of the alpha-equivalence class: every
    /// binder is renamed to `#k`, indices assigned by first bound occurrence
    /// (pattern first, then body) in a preorder walk. Two terms are
    /// alpha-equivalent exactly when their canonical forms are equal, which
    /// makes the result usable as a map key.
    ///
    /// Free symbols are kept as they are; the scheme assumes they do not
    /// start with `#`, which the surface syntax cannot produce.
    pub fn canonical(&self) -> Term {
        debug_assert!(
            self.free_vars()
                .iter()
                .chain(self.free_matchables().iter())
                .all(|s| !s.starts_with('#')),
            "free symbols starting with '#' collide with canonical binder names",
        );
        let mut counter = 0;
        self.canonical_rec(&mut counter, &BTreeMap::new(), &BTreeMap::new())
    }

    fn canonical_rec(
        &self,
        counter: &mut usize,
        vmap: &BTreeMap<Symbol, Symbol>,
        mmap: &BTreeMap<Symbol, Symbol>,
    ) -> Term {
        match self {
            Term::Var(x) => Term::Var(vmap.get(x).unwrap_or(x).clone()),
            Term::Matchable(x) => Term::Matchable(mmap.get(x).unwrap_or(x).clone()),
            Term::App(f, a) => Term::app(
                f.canonical_rec(counter, vmap, mmap),
                a.canonical_rec(counter, vmap, mmap),
            ),
            Term::Abs(theta, p, b) => {
                let mut order = bound_occurrence_order(theta, p, b);
                for x in theta {
                    if !order.contains(x) {
                        order.push(x.clone());
                    }
                }
                let mut renaming = BTreeMap::new();
                for x in order {
                    renaming.insert(x, format!("#{counter}"));
                    *counter += 1;
                }
                let new_theta: BTreeSet<_> = renaming.values().cloned().collect();
                let mut mmap2 = mmap.clone();
                mmap2.extend(renaming.iter().map(|(k, v)| (k.clone(), v.clone())));
                let p2 = p.canonical_rec(counter, vmap, &mmap2);
                let mut vmap2 = vmap.clone();
                vmap2.extend(renaming);
                let b2 = b.canonical_rec(counter, &vmap2, mmap);
                Term::Abs(new_theta, Box::new(p2), Box::new(b2))
            }
        }
    }
}

/// Tracks, during a simultaneous traversal of two terms, which binder frames
/// are in scope for variable and for matchable occurrences, and the partial
/// bijection each frame has committed to so far.
#[derive(Default)]
struct Scopes {
    frames: Vec<Frame>,
    /// Indices into `frames` binding variables here (bodies entered).
    var_scopes: Vec<usize>,
    /// Indices into `frames` binding matchables here (patterns entered).
    matchable_scopes: Vec<usize>,
}

struct Frame {
    left: BTreeSet<Symbol>,
    right: BTreeSet<Symbol>,
    fwd: BTreeMap<Symbol, Symbol>,
    bwd: BTreeMap<Symbol, Symbol>,
}

impl Frame {
    fn relate(&mut self, x: &Symbol, y: &Symbol) -> bool {
        match (self.fwd.get(x), self.bwd.get(y)) {
            (Some(y2), Some(x2)) => y2 == y && x2 == x,
            (None, None) => {
                self.fwd.insert(x.clone(), y.clone());
                self.bwd.insert(y.clone(), x.clone());
                true
            }
            _ => false,
        }
    }
}

impl Scopes {
    fn vars_agree(&mut self, x: &Symbol, y: &Symbol) -> bool {
        Self::agree(&mut self.frames, &self.var_scopes, x, y)
    }

    fn matchables_agree(&mut self, x: &Symbol, y: &Symbol) -> bool {
        Self::agree(&mut self.frames, &self.matchable_scopes, x, y)
    }

    /// Innermost frame mentioning either side decides; both free means the
    /// names must coincide.
    fn agree(frames: &mut [Frame], scopes: &[usize], x: &Symbol, y: &Symbol) -> bool {
        for &i in scopes.iter().rev() {
            let frame = &mut frames[i];
            match (frame.left.contains(x), frame.right.contains(y)) {
                (true, true) => return frame.relate(x, y),
                (false, false) => continue,
                _ => return false,
            }
        }
        x == y
    }
}

/// Order of first bound occurrence of each binder: matchables of the pattern
/// first, then variables of the body, both in preorder. Inner binder sets
/// shadow only where they bind (nested patterns for matchables, nested
/// bodies for variables).
fn bound_occurrence_order(theta: &BTreeSet<Symbol>, pattern: &Term, body: &Term) -> Vec<Symbol> {
    fn walk(
        t: &Term,
        theta: &BTreeSet<Symbol>,
        matchables: bool,
        shadow: &mut Vec<BTreeSet<Symbol>>,
        order: &mut Vec<Symbol>,
    ) {
        match t {
            Term::Matchable(x) if matchables => {
                if theta.contains(x)
                    && !shadow.iter().any(|s| s.contains(x))
                    && !order.contains(x)
                {
                    order.push(x.clone());
                }
            }
            Term::Var(x) if !matchables => {
                if theta.contains(x)
                    && !shadow.iter().any(|s| s.contains(x))
                    && !order.contains(x)
                {
                    order.push(x.clone());
                }
            }
            Term::Var(_) | Term::Matchable(_) => {}
            Term::App(f, a) => {
                walk(f, theta, matchables, shadow, order);
                walk(a, theta, matchables, shadow, order);
            }
            Term::Abs(th2, p2, b2) => {
                if matchables {
                    shadow.push(th2.clone());
                    walk(p2, theta, matchables, shadow, order);
                    shadow.pop();
                    walk(b2, theta, matchables, shadow, order);
                } else {
                    walk(p2, theta, matchables, shadow, order);
                    shadow.push(th2.clone());
                    walk(b2, theta, matchables, shadow, order);
                    shadow.pop();
                }
            }
        }
    }
    let mut order = Vec::new();
    let mut shadow = Vec::new();
    walk(pattern, theta, true, &mut shadow, &mut order);
    debug_assert!(shadow.is_empty());
    walk(body, theta, false, &mut shadow, &mut order);
    order
}

/// A path from the root: 1 selects the function or the pattern, 2 the
/// argument or the body. Printed as a digit string, empty for the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    /// Build from directions, each 1 or 2.
    pub fn new(dirs: impl IntoIterator<Item = u8>) -> Position {
        let dirs: Vec<u8> = dirs.into_iter().collect();
        assert!(
            dirs.iter().all(|d| *d == 1 || *d == 2),
            "position directions must be 1 or 2",
        );
        Position(dirs)
    }

    /// Parse a digit string such as `"112"`; the empty string is the root.
    pub fn parse(s: &str) -> Result<Position, ParsePositionError> {
        let mut dirs = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '1' => dirs.push(1),
                '2' => dirs.push(2),
                _ => return Err(ParsePositionError { offending: c }),
            }
        }
        Ok(Position(dirs))
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, dir: u8) -> Position {
        assert!(dir == 1 || dir == 2);
        let mut dirs = self.0.clone();
        dirs.push(dir);
        Position(dirs)
    }

    pub fn join(&self, suffix: &Position) -> Position {
        let mut dirs = self.0.clone();
        dirs.extend_from_slice(&suffix.0);
        Position(dirs)
    }

    /// `self ≤ other` in the tree (prefix) order.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self < other`: strictly above, i.e. a proper prefix.
    pub fn is_strict_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    /// Neither position is above the other.
    pub fn is_disjoint_from(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// The suffix left after removing `prefix`, if `prefix ≤ self`.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| Position(rest.to_vec()))
    }

    pub fn directions(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid character {offending:?} in position (expected digits 1 and 2)")]
pub struct ParsePositionError {
    offending: char,
}

/// A finite map from variables to terms. Application is capture-avoiding:
/// binder sets are renamed (with [`fresh_symbol`]) whenever they clash with
/// the substitution's domain or with free symbols of its range. Matchables
/// are never substituted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(pub BTreeMap<Symbol, Term>);

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution(BTreeMap::new())
    }

    pub fn singleton(name: impl Into<Symbol>, value: Term) -> Substitution {
        Substitution(BTreeMap::from([(name.into(), value)]))
    }

    pub fn domain(&self) -> BTreeSet<Symbol> {
        self.0.keys().cloned().collect()
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.0.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Domain plus free variables and free matchables of the range; binder
    /// sets must steer clear of this set for substitution to commute with
    /// abstraction.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s: BTreeSet<Symbol> = self.0.keys().cloned().collect();
        for t in self.0.values() {
            s.extend(t.free_vars());
            s.extend(t.free_matchables());
        }
        s
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.0.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Matchable(_) => t.clone(),
            Term::App(f, a) => Term::app(self.apply(f), self.apply(a)),
            Term::Abs(theta, p, b) => {
                // Only the bindings that can act below this node matter for
                // the freshness condition.
                let mut live: BTreeSet<Symbol> = p.free_vars();
                live.extend(b.free_vars().difference(theta).cloned());
                let relevant = Substitution(
                    self.0
                        .iter()
                        .filter(|(k, _)| live.contains(*k))
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                );
                if relevant.is_empty() {
                    return t.clone();
                }
                let clash: Vec<Symbol> = {
                    let syms = relevant.symbols();
                    theta.iter().filter(|x| syms.contains(*x)).cloned().collect()
                };
                let (theta, p, b) = if clash.is_empty() {
                    (theta.clone(), (**p).clone(), (**b).clone())
                } else {
                    rename_binders(theta, p, b, &clash, &relevant)
                };
                let body_subst = Substitution(
                    relevant
                        .0
                        .iter()
                        .filter(|(k, _)| !theta.contains(*k))
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                );
                Term::Abs(
                    theta,
                    Box::new(relevant.apply(&p)),
                    Box::new(body_subst.apply(&b)),
                )
            }
        }
    }
}

/// Rename the clashing binders of one abstraction to fresh names, adjusting
/// the bound matchables of the pattern and the bound variables of the body.
fn rename_binders(
    theta: &BTreeSet<Symbol>,
    pattern: &Term,
    body: &Term,
    clash: &[Symbol],
    subst: &Substitution,
) -> (BTreeSet<Symbol>, Term, Term) {
    let mut avoid = subst.symbols();
    avoid.extend(theta.iter().cloned());
    avoid.extend(pattern.free_vars());
    avoid.extend(pattern.free_matchables());
    avoid.extend(body.free_vars());
    avoid.extend(body.free_matchables());
    let mut renaming = BTreeMap::new();
    for x in clash {
        let fresh = fresh_symbol(x, &avoid);
        avoid.insert(fresh.clone());
        renaming.insert(x.clone(), fresh);
    }
    let new_theta = theta
        .iter()
        .map(|x| renaming.get(x).unwrap_or(x).clone())
        .collect();
    let new_pattern = rename_free(pattern, &renaming, true);
    let new_body = rename_free(body, &renaming, false);
    (new_theta, new_pattern, new_body)
}

/// Rename free matchables (`matchables = true`) or free variables of a term.
/// "Free" is relative to the term itself, so when the term is the pattern or
/// the body of an abstraction this renames exactly the occurrences that
/// abstraction binds. Renaming targets are fresh, so no capture can occur.
fn rename_free(t: &Term, renaming: &BTreeMap<Symbol, Symbol>, matchables: bool) -> Term {
    if renaming.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(x) if !matchables => Term::Var(renaming.get(x).unwrap_or(x).clone()),
        Term::Matchable(x) if matchables => {
            Term::Matchable(renaming.get(x).unwrap_or(x).clone())
        }
        Term::Var(_) | Term::Matchable(_) => t.clone(),
        Term::App(f, a) => Term::app(
            rename_free(f, renaming, matchables),
            rename_free(a, renaming, matchables),
        ),
        Term::Abs(theta, p, b) => {
            let inner: BTreeMap<Symbol, Symbol> = renaming
                .iter()
                .filter(|(k, _)| !theta.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            if matchables {
                // θ shadows matchables in its pattern, not in its body.
                Term::Abs(
                    theta.clone(),
                    Box::new(rename_free(p, &inner, matchables)),
                    Box::new(rename_free(b, renaming, matchables)),
                )
            } else {
                // θ shadows variables in its body, not in its pattern.
                Term::Abs(
                    theta.clone(),
                    Box::new(rename_free(p, renaming, matchables)),
                    Box::new(rename_free(b, &inner, matchables)),
                )
            }
        }
    }
}

/// `base` if it avoids the set, otherwise `base1`, `base2`, ... with the
/// smallest suffix that does.
pub fn fresh_symbol(base: &str, avoid: &BTreeSet<Symbol>) -> Symbol {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let mut i = 1usize;
    loop {
        let candidate = format!("{base}{i}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}
