//! Simultaneous contraction. A multistep is a set of coinitial steps; it is
//! performed by a *complete development*: contracting residuals of the set
//! until none remain. On top of multisteps this module provides
//! multireductions (sequences of multisteps), the depth of a multistep and
//! the reversed-depth measure of a multireduction, residuals after
//! multisteps and multireductions, the free-from / embedded-by / gripping
//! relations on sets, projection to a subterm, and bounded oracles for the
//! two properties the normalizing strategy promises: necessity and
//! never-gripping.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::reduction::{self, redexes, Step, StepError};
use crate::term::{Position, PositionError, Term};

/// Default number of single steps the never-gripping oracle explores ahead.
pub const DEFAULT_DEPTH_BOUND: usize = 4;
/// Default node-count cutoff pruning the never-gripping search space.
pub const DEFAULT_SIZE_BOUND: usize = 40;
/// Default step budget for the necessity oracle's exhaustive search.
pub const DEFAULT_STEP_BOUND: usize = 12;

/// Iteration cap on development loops. Complete developments are finite, so
/// exhausting the fuse indicates an implementation bug, not an input fault.
const DEVELOPMENT_FUSE: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultistepError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("multisteps are not coinitial")]
    NotCoinitial,
    #[error("element {0} does not start at the target of the previous element")]
    BrokenChain(usize),
    #[error("position \"{0}\" is not a residual of the multistep at this point")]
    NotADevelopment(Position),
    #[error("development order ended with residuals still pending")]
    IncompleteDevelopment,
    #[error("measures of lengths {left} and {right} are not comparable")]
    MeasureLengthMismatch { left: usize, right: usize },
    #[error("a step at \"{0}\" lies strictly above the projection position")]
    NotPreserved(Position),
    #[error("partition requires disjoint step sets; both contain \"{0}\"")]
    PartitionOverlap(Position),
    #[error("source does not reach a normal form within {bound} steps")]
    SourceNotNormalizing { bound: usize },
}

/// A set of coinitial steps, kept as positions of one source term. The
/// empty multistep still carries its source: empty multisteps over different
/// terms are different objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multistep {
    source: Term,
    steps: BTreeSet<Position>,
}

/// A sequence of single steps, each starting at the target of the previous
/// one. The empty sequence is indexed by its source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionSequence {
    source: Term,
    steps: Vec<Step>,
}

/// A sequence of multisteps with chaining targets. The empty multireduction
/// `nil` is distinct from the one-element multireduction whose element is
/// the empty multistep.
#[derive(Debug, Clone, PartialEq)]
pub struct Multireduction {
    source: Term,
    elements: Vec<Multistep>,
}

/// Depths of a multireduction's elements in reversed order, compared
/// lexicographically — but only between measures of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure(Vec<usize>);

impl Multistep {
    pub fn new(
        source: Term,
        steps: impl IntoIterator<Item = Position>,
    ) -> Result<Multistep, MultistepError> {
        let steps: BTreeSet<Position> = steps.into_iter().collect();
        for pos in &steps {
            Step::new(source.clone(), pos.clone())?;
        }
        Ok(Multistep { source, steps })
    }

    pub fn empty(source: Term) -> Multistep {
        Multistep {
            source,
            steps: BTreeSet::new(),
        }
    }

    /// The set of all steps of a term.
    pub fn all_redexes(source: Term) -> Multistep {
        let steps = reduction::redex_positions(&source).into_iter().collect();
        Multistep { source, steps }
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn positions(&self) -> &BTreeSet<Position> {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains(&self, pos: &Position) -> bool {
        self.steps.contains(pos)
    }

    pub fn steps(&self) -> Vec<Step> {
        self.steps
            .iter()
            .map(|pos| {
                Step::new(self.source.clone(), pos.clone())
                    .expect("multistep positions were validated at construction")
            })
            .collect()
    }

    /// The canonical complete development: repeatedly contract the leftmost
    /// innermost residual (an element with no other element strictly below
    /// it, smallest position first).
    pub fn develop(&self) -> ReductionSequence {
        let mut term = self.source.clone();
        let mut set = self.steps.clone();
        let mut steps = Vec::new();
        let mut fuse = DEVELOPMENT_FUSE;
        while let Some(pos) = innermost_candidate(&set) {
            fuse = fuse.checked_sub(1).expect("development exceeded the fuse");
            let step = Step::new(term.clone(), pos)
                .expect("residuals of a multistep are steps of its target");
            set = residuals_after_step(&set, &step);
            term = step.target();
            steps.push(step);
        }
        ReductionSequence {
            source: self.source.clone(),
            steps,
        }
    }

    /// Develop contracting the given positions in the given order. Each
    /// position must be a pending residual at its turn, and the order must
    /// exhaust the residuals.
    pub fn develop_with_order(
        &self,
        order: &[Position],
    ) -> Result<ReductionSequence, MultistepError> {
        let mut term = self.source.clone();
        let mut set = self.steps.clone();
        let mut steps = Vec::new();
        for pos in order {
            if !set.contains(pos) {
                return Err(MultistepError::NotADevelopment(pos.clone()));
            }
            let step = Step::new(term.clone(), pos.clone())
                .expect("residuals of a multistep are steps of its target");
            set = residuals_after_step(&set, &step);
            term = step.target();
            steps.push(step);
        }
        if !set.is_empty() {
            return Err(MultistepError::IncompleteDevelopment);
        }
        Ok(ReductionSequence {
            source: self.source.clone(),
            steps,
        })
    }

    /// Every complete development, one per choice sequence of residuals.
    pub fn complete_developments(&self) -> Vec<ReductionSequence> {
        fn go(
            source: &Term,
            term: &Term,
            set: &BTreeSet<Position>,
            prefix: &mut Vec<Step>,
            out: &mut Vec<ReductionSequence>,
            fuse: &mut usize,
        ) {
            *fuse = fuse
                .checked_sub(1)
                .expect("development enumeration exceeded the fuse");
            if set.is_empty() {
                out.push(ReductionSequence {
                    source: source.clone(),
                    steps: prefix.clone(),
                });
                return;
            }
            for pos in set {
                let step = Step::new(term.clone(), pos.clone())
                    .expect("residuals of a multistep are steps of its target");
                let rest = residuals_after_step(set, &step);
                let next = step.target();
                prefix.push(step);
                go(source, &next, &rest, prefix, out, fuse);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        let mut fuse = DEVELOPMENT_FUSE;
        go(
            &self.source,
            &self.source,
            &self.steps,
            &mut Vec::new(),
            &mut out,
            &mut fuse,
        );
        out
    }

    /// Target of any complete development (order-independent; the test
    /// suite checks this rather than assuming it).
    pub fn target(&self) -> Term {
        self.develop().target()
    }

    /// Length of the longest complete development: the maximum over
    /// elements of one plus the depth of the set's residuals after that
    /// element. Memoized on (canonical term, position set) because the
    /// naive recursion revisits subproblems exponentially often.
    pub fn depth(&self) -> usize {
        fn go(
            term: &Term,
            set: &BTreeSet<Position>,
            memo: &mut HashMap<(Term, BTreeSet<Position>), usize>,
        ) -> usize {
            if set.is_empty() {
                return 0;
            }
            let key = (term.canonical(), set.clone());
            if let Some(&d) = memo.get(&key) {
                return d;
            }
            let mut best = 0;
            for pos in set {
                let step = Step::new(term.clone(), pos.clone())
                    .expect("residuals of a multistep are steps of its target");
                let rest = residuals_after_step(set, &step);
                best = best.max(1 + go(&step.target(), &rest, memo));
            }
            memo.insert(key, best);
            best
        }
        go(&self.source, &self.steps, &mut HashMap::new())
    }

    /// `self⟦after⟧`: the residuals of this set once the coinitial
    /// multistep `after` has been performed, as a multistep of its target.
    pub fn residuals_after(&self, after: &Multistep) -> Result<Multistep, MultistepError> {
        if !self.source.alpha_eq(&after.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let development = after.develop();
        let mut set = self.steps.clone();
        for step in development.steps() {
            set = residuals_after_step(&set, step);
        }
        Multistep::new(development.target(), set)
    }

    /// `self ⊐̸ b`: no element of `b` sits at or above any element of self.
    pub fn free_from(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        Ok(self.steps.iter().all(|a| position_free_from(a, &b.steps)))
    }

    /// `self > b`: every element of self lies strictly below some element
    /// of `b` without belonging to `b`.
    pub fn embedded_by(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        Ok(self
            .steps
            .iter()
            .all(|a| position_embedded_by(a, &b.steps)))
    }

    /// `self ⋘ b`: some element of self grips some element of `b`.
    pub fn grips_set(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let ours = self.steps();
        let theirs = b.steps();
        for a in &ours {
            for target in &theirs {
                if reduction::grips(a, target)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Split self (disjoint from `b`) into the part free from `b` and the
    /// part embedded by `b`. Disjointness makes this a true partition.
    pub fn partition(&self, b: &Multistep) -> Result<(Multistep, Multistep), MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        if let Some(shared) = self.steps.intersection(&b.steps).next() {
            return Err(MultistepError::PartitionOverlap(shared.clone()));
        }
        let mut free = BTreeSet::new();
        let mut embedded = BTreeSet::new();
        for a in &self.steps {
            if position_free_from(a, &b.steps) {
                free.insert(a.clone());
            } else {
                debug_assert!(position_embedded_by(a, &b.steps));
                embedded.insert(a.clone());
            }
        }
        Ok((
            Multistep {
                source: self.source.clone(),
                steps: free,
            },
            Multistep {
                source: self.source.clone(),
                steps: embedded,
            },
        ))
    }

    /// The multistep this set induces on the subterm at `at`: elements at
    /// or below `at` keep their relative positions, disjoint elements are
    /// dropped, and an element strictly above `at` makes the projection
    /// undefined.
    pub fn project(&self, at: &Position) -> Result<Multistep, MultistepError> {
        let sub = self.source.subterm_at(at)?;
        let mut kept = BTreeSet::new();
        for b in &self.steps {
            if b.is_strict_prefix_of(at) {
                return Err(MultistepError::NotPreserved(b.clone()));
            }
            if let Some(rest) = b.strip_prefix(at) {
                kept.insert(rest);
            }
        }
        Ok(Multistep {
            source: sub.clone(),
            steps: kept,
        })
    }
}

/// Track a set of step positions through one contraction.
fn residuals_after_step(positions: &BTreeSet<Position>, by: &Step) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    for pos in positions {
        let step = Step::new(by.source().clone(), pos.clone())
            .expect("tracked positions are steps of the source");
        out.extend(
            reduction::residuals(&step, by).expect("tracked steps are coinitial with the redex"),
        );
    }
    out
}

/// An element with no other element strictly below it, smallest first.
fn innermost_candidate(set: &BTreeSet<Position>) -> Option<Position> {
    set.iter()
        .find(|p| !set.iter().any(|q| p.is_strict_prefix_of(q)))
        .cloned()
}

fn position_free_from(a: &Position, b: &BTreeSet<Position>) -> bool {
    b.iter().all(|q| !q.is_prefix_of(a))
}

fn position_embedded_by(a: &Position, b: &BTreeSet<Position>) -> bool {
    !b.contains(a) && b.iter().any(|q| q.is_strict_prefix_of(a))
}

impl ReductionSequence {
    pub fn new(source: Term, order: &[Position]) -> Result<ReductionSequence, MultistepError> {
        let mut term = source.clone();
        let mut steps = Vec::new();
        for pos in order {
            let step = Step::new(term, pos.clone())?;
            term = step.target();
            steps.push(step);
        }
        Ok(ReductionSequence { source, steps })
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> Term {
        self.steps
            .last()
            .map_or_else(|| self.source.clone(), Step::target)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn positions(&self) -> Vec<Position> {
        self.steps.iter().map(|s| s.position().clone()).collect()
    }

    /// Does this sequence contract a running residual of `b` at any point?
    pub fn uses(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let mut res = b.steps.clone();
        for step in &self.steps {
            if res.contains(step.position()) {
                return Ok(true);
            }
            res = residuals_after_step(&res, step);
        }
        Ok(false)
    }
}

impl Multireduction {
    pub fn nil(source: Term) -> Multireduction {
        Multireduction {
            source,
            elements: Vec::new(),
        }
    }

    pub fn new(
        source: Term,
        sets: impl IntoIterator<Item = BTreeSet<Position>>,
    ) -> Result<Multireduction, MultistepError> {
        let mut term = source.clone();
        let mut elements = Vec::new();
        for set in sets {
            let element = Multistep::new(term, set)?;
            term = element.target();
            elements.push(element);
        }
        Ok(Multireduction { source, elements })
    }

    pub fn from_elements(
        source: Term,
        elements: Vec<Multistep>,
    ) -> Result<Multireduction, MultistepError> {
        let mut expected = source.clone();
        for (index, element) in elements.iter().enumerate() {
            if !element.source.alpha_eq(&expected) {
                return Err(MultistepError::BrokenChain(index));
            }
            expected = element.target();
        }
        Ok(Multireduction { source, elements })
    }

    /// Append a multistep of the current target.
    pub fn push(&mut self, set: BTreeSet<Position>) -> Result<(), MultistepError> {
        let element = Multistep::new(self.target(), set)?;
        self.elements.push(element);
        Ok(())
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> Term {
        self.elements
            .last()
            .map_or_else(|| self.source.clone(), Multistep::target)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Trivial means every element is empty; `nil` is trivially trivial.
    pub fn is_trivial(&self) -> bool {
        self.elements.iter().all(Multistep::is_empty)
    }

    pub fn elements(&self) -> &[Multistep] {
        &self.elements
    }

    /// `self⟦b⟧`, element by element: `(A; Δ)⟦B⟧ = A⟦B⟧; Δ⟦B⟦A⟧⟧`. The
    /// length is preserved.
    pub fn residuals_after(&self, b: &Multistep) -> Result<Multireduction, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let mut tracked = b.clone();
        let mut elements = Vec::with_capacity(self.elements.len());
        for element in &self.elements {
            elements.push(element.residuals_after(&tracked)?);
            tracked = tracked.residuals_after(element)?;
        }
        Ok(Multireduction {
            source: b.target(),
            elements,
        })
    }

    /// Does some element contract a running residual of `b`?
    pub fn uses(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let mut res = b.clone();
        for element in &self.elements {
            if element
                .steps
                .intersection(&res.steps)
                .next()
                .is_some()
            {
                return Ok(true);
            }
            res = res.residuals_after(element)?;
        }
        Ok(false)
    }

    /// `self ⊐̸ b`, recursively: the head element is free from `b` and the
    /// tail is free from `b`'s residuals after the head.
    pub fn free_from(&self, b: &Multistep) -> Result<bool, MultistepError> {
        if !self.source.alpha_eq(&b.source) {
            return Err(MultistepError::NotCoinitial);
        }
        let mut tracked = b.clone();
        for element in &self.elements {
            if !element.free_from(&tracked)? {
                return Ok(false);
            }
            tracked = tracked.residuals_after(element)?;
        }
        Ok(true)
    }

    /// Element depths in reversed order.
    pub fn measure(&self) -> Measure {
        Measure(self.elements.iter().rev().map(Multistep::depth).collect())
    }

    pub fn preserves(&self, at: &Position) -> bool {
        self.elements
            .iter()
            .all(|element| element.steps.iter().all(|b| !b.is_strict_prefix_of(at)))
    }

    /// Project every element to the subterm at `at`. Defined when every
    /// element preserves `at`; the projected elements chain because steps
    /// elsewhere in the term leave the subterm alone.
    pub fn project(&self, at: &Position) -> Result<Multireduction, MultistepError> {
        let sub = self.source.subterm_at(at)?.clone();
        let mut elements = Vec::with_capacity(self.elements.len());
        for element in &self.elements {
            elements.push(element.project(at)?);
        }
        Multireduction::from_elements(sub, elements)
    }
}

impl Measure {
    pub fn depths(&self) -> &[usize] {
        &self.0
    }

    /// Strict lexicographic comparison, defined only between equal lengths.
    pub fn compare_lex(&self, other: &Measure) -> Result<Ordering, MultistepError> {
        if self.0.len() != other.0.len() {
            return Err(MultistepError::MeasureLengthMismatch {
                left: self.0.len(),
                right: other.0.len(),
            });
        }
        Ok(self.0.cmp(&other.0))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "⟩")
    }
}

/// Bounded check that `b` is never-gripping: along every reduction of at
/// most `depth_bound` single steps from its source (pruning terms larger
/// than `size_bound` nodes), no step of the reached term grips any residual
/// of `b`. A `true` verdict means no counterexample within the bounds.
pub fn is_never_gripping_bounded(b: &Multistep, depth_bound: usize, size_bound: usize) -> bool {
    let mut queue = VecDeque::from([(b.source.clone(), b.steps.clone(), 0usize)]);
    let mut seen: HashSet<(Term, BTreeSet<Position>)> = HashSet::new();
    while let Some((term, res, depth)) = queue.pop_front() {
        if !seen.insert((term.canonical(), res.clone())) {
            continue;
        }
        let steps = redexes(&term);
        let residual_steps: Vec<&Step> = steps
            .iter()
            .filter(|s| res.contains(s.position()))
            .collect();
        for c in &steps {
            for r in &residual_steps {
                if reduction::grips(c, r).expect("steps of one term are coinitial") {
                    return false;
                }
            }
        }
        if depth < depth_bound {
            for c in &steps {
                let next = c.target();
                if next.size() > size_bound {
                    continue;
                }
                let next_res = residuals_after_step(&res, c);
                queue.push_back((next, next_res, depth + 1));
            }
        }
    }
    true
}

/// Exhaustive check that `a` is necessary: every reduction from its source
/// to a normal form within `step_bound` single steps contracts a residual
/// of `a` on the way. Errors when no reduction reaches a normal form within
/// the budget, since necessity is only meaningful for normalizing sources.
pub fn is_necessary_bounded(a: &Multistep, step_bound: usize) -> Result<bool, MultistepError> {
    type Memo = HashMap<(Term, BTreeSet<Position>, bool, usize), (bool, bool)>;
    /// Returns (some path reached a normal form, some path reached one
    /// without using the set).
    fn go(
        term: &Term,
        res: &BTreeSet<Position>,
        used: bool,
        budget: usize,
        memo: &mut Memo,
    ) -> (bool, bool) {
        if reduction::is_normal_form(term) {
            return (true, !used);
        }
        if budget == 0 {
            return (false, false);
        }
        let key = (term.canonical(), res.clone(), used, budget);
        if let Some(&cached) = memo.get(&key) {
            return cached;
        }
        let mut reached = false;
        let mut violated = false;
        for step in redexes(term) {
            let now_used = used || res.contains(step.position());
            let next_res = if now_used {
                BTreeSet::new() // residual tracking no longer matters
            } else {
                residuals_after_step(res, &step)
            };
            let (r, v) = go(&step.target(), &next_res, now_used, budget - 1, memo);
            reached |= r;
            violated |= v;
            if violated {
                break;
            }
        }
        memo.insert(key, (reached, violated));
        (reached, violated)
    }
    let (reached, violated) = go(
        &a.source,
        &a.steps,
        false,
        step_bound,
        &mut HashMap::new(),
    );
    if violated {
        return Ok(false);
    }
    if !reached {
        return Err(MultistepError::SourceNotNormalizing { bound: step_bound });
    }
    Ok(true)
}
