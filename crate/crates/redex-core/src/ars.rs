//! Axiomatic residual theory, checked by enumeration.
//!
//! [`ArsInstance`] abstracts a rewriting system to exactly the data the
//! axioms mention: coinitial steps, sources and targets, residuals after a
//! step, and the embedding and gripping relations. [`check_axiom`] runs one
//! axiom against every object of a corpus by brute-force quantification
//! over steps and residuals, reporting how many antecedent-true instances
//! it checked and every counterexample it found (capped at
//! [`MAX_COUNTEREXAMPLES`] per report).
//!
//! The thirteen core axioms are universally quantified implications, so a
//! checker visits each tuple of steps, tests the antecedent, and on success
//! tests the consequent. Two of them need reduction rather than mere
//! relation tests: finite developments develops every multistep of at most
//! three steps in all orders under a fuse, and semantic orthogonality
//! closes the square `a;δ` / `b;γ` and compares both final objects and the
//! residual relations along both legs. [`AxiomName::Stability`] is kept
//! out of [`AxiomName::all`] because it is not part of the axiom set — it
//! provably fails in the pattern calculus — but it runs through the same
//! machinery on demand.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::reduction::{self, Step};
use crate::term::Term;

/// A rewriting system presented through its residual structure.
///
/// `steps_of` must return all steps with the given source; `residuals(b, a)`
/// the residuals of `b` after `a`, as steps of `a`'s target; `embeds(a, b)`
/// whether `a` strictly embeds (sits above) `b`; `grips(a, b)` whether `a`
/// grips `b`. All steps handed to the relations are coinitial.
pub trait ArsInstance {
    type Object: Clone;
    type Step: Clone;

    fn name(&self) -> &str;
    fn steps_of(&self, t: &Self::Object) -> Vec<Self::Step>;
    fn source(&self, a: &Self::Step) -> Self::Object;
    fn target(&self, a: &Self::Step) -> Self::Object;
    fn residuals(&self, b: &Self::Step, a: &Self::Step) -> Vec<Self::Step>;
    fn embeds(&self, a: &Self::Step, b: &Self::Step) -> bool;
    fn grips(&self, a: &Self::Step, b: &Self::Step) -> bool;
    fn object_eq(&self, s: &Self::Object, t: &Self::Object) -> bool;
    fn step_eq(&self, a: &Self::Step, b: &Self::Step) -> bool;
    fn show_object(&self, t: &Self::Object) -> String;
    fn show_step(&self, a: &Self::Step) -> String;
    fn object_size(&self, t: &Self::Object) -> usize;
}

/// The residual axioms, plus stability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomName {
    SelfReduction,
    FiniteResiduals,
    AncestorUniqueness,
    FiniteDevelopments,
    SemanticOrthogonality,
    Linearity,
    ContextFreeness,
    EnclaveCreation,
    EnclaveEmbedding,
    Pivot,
    GripInstantiation,
    GripDensity,
    GripConvexity,
    Stability,
}

impl AxiomName {
    /// The thirteen axioms of the theory, in presentation order. Stability
    /// is deliberately absent: it is not an axiom, and checking it is
    /// expected to fail on the pattern calculus.
    pub fn all() -> [AxiomName; 13] {
        [
            AxiomName::SelfReduction,
            AxiomName::FiniteResiduals,
            AxiomName::AncestorUniqueness,
            AxiomName::FiniteDevelopments,
            AxiomName::SemanticOrthogonality,
            AxiomName::Linearity,
            AxiomName::ContextFreeness,
            AxiomName::EnclaveCreation,
            AxiomName::EnclaveEmbedding,
            AxiomName::Pivot,
            AxiomName::GripInstantiation,
            AxiomName::GripDensity,
            AxiomName::GripConvexity,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            AxiomName::SelfReduction => "self-reduction",
            AxiomName::FiniteResiduals => "finite-residuals",
            AxiomName::AncestorUniqueness => "ancestor-uniqueness",
            AxiomName::FiniteDevelopments => "finite-developments",
            AxiomName::SemanticOrthogonality => "semantic-orthogonality",
            AxiomName::Linearity => "linearity",
            AxiomName::ContextFreeness => "context-freeness",
            AxiomName::EnclaveCreation => "enclave-creation",
            AxiomName::EnclaveEmbedding => "enclave-embedding",
            AxiomName::Pivot => "pivot",
            AxiomName::GripInstantiation => "grip-instantiation",
            AxiomName::GripDensity => "grip-density",
            AxiomName::GripConvexity => "grip-convexity",
            AxiomName::Stability => "stability",
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(String);

impl FromStr for AxiomName {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::all()
            .into_iter()
            .chain([AxiomName::Stability])
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownAxiom(s.to_string()))
    }
}

/// One violated instance: the object it happened on and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub object: String,
    pub detail: String,
}

/// At most this many counterexamples are kept per report.
pub const MAX_COUNTEREXAMPLES: usize = 8;

/// Outcome of checking one axiom over a corpus. `instances_checked` counts
/// the antecedent-true tuples; an axiom holds on the corpus when no
/// counterexample was found.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomName,
    pub instances_checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Recursion budget for each development run by the checkers. Exhausting
/// it is reported as a counterexample, never swallowed.
const DEVELOPMENT_BUDGET: i64 = 200_000;

struct Checker<'a, I: ArsInstance> {
    inst: &'a I,
    axiom: AxiomName,
    instances: u64,
    counterexamples: Vec<Counterexample>,
}

impl<'a, I: ArsInstance> Checker<'a, I> {
    fn new(inst: &'a I, axiom: AxiomName) -> Self {
        Checker {
            inst,
            axiom,
            instances: 0,
            counterexamples: Vec::new(),
        }
    }

    fn into_report(self) -> AxiomReport {
        AxiomReport {
            axiom: self.axiom,
            instances_checked: self.instances,
            counterexamples: self.counterexamples,
        }
    }

    fn record(&mut self, object: &I::Object, detail: String) {
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(Counterexample {
                object: self.inst.show_object(object),
                detail,
            });
        }
    }

    fn step_in(&self, steps: &[I::Step], s: &I::Step) -> bool {
        steps.iter().any(|x| self.inst.step_eq(x, s))
    }

    fn dedup(&self, steps: &mut Vec<I::Step>) {
        let mut kept: Vec<I::Step> = Vec::with_capacity(steps.len());
        for s in steps.drain(..) {
            if !kept.iter().any(|x| self.inst.step_eq(x, &s)) {
                kept.push(s);
            }
        }
        *steps = kept;
    }

    /// Residuals of `c` along a reduction sequence.
    fn residuals_along(&self, c: &I::Step, sequence: &[I::Step]) -> Vec<I::Step> {
        let mut current = vec![c.clone()];
        for a in sequence {
            let mut next: Vec<I::Step> = current
                .iter()
                .flat_map(|x| self.inst.residuals(x, a))
                .collect();
            self.dedup(&mut next);
            current = next;
        }
        current
    }

    /// Develop a multistep left to right, tracking residuals of the rest.
    /// Returns the contraction sequence and the final object, or `None` if
    /// the budget runs out.
    fn develop(
        &self,
        source: &I::Object,
        set: &[I::Step],
    ) -> Option<(Vec<I::Step>, I::Object)> {
        let mut sequence = Vec::new();
        let mut object = source.clone();
        let mut remaining = set.to_vec();
        self.dedup(&mut remaining);
        let mut budget = DEVELOPMENT_BUDGET;
        while let Some(a) = remaining.first().cloned() {
            budget -= 1;
            if budget <= 0 {
                return None;
            }
            object = self.inst.target(&a);
            let mut next: Vec<I::Step> = remaining[1..]
                .iter()
                .flat_map(|b| self.inst.residuals(b, &a))
                .collect();
            self.dedup(&mut next);
            remaining = next;
            sequence.push(a);
        }
        Some((sequence, object))
    }

    /// Do all development orders of `set` terminate within the budget?
    fn all_developments_terminate(
        &self,
        set: &[I::Step],
        budget: &mut i64,
    ) -> bool {
        *budget -= 1;
        if *budget <= 0 {
            return false;
        }
        for (i, a) in set.iter().enumerate() {
            let mut rest: Vec<I::Step> = Vec::new();
            for (j, b) in set.iter().enumerate() {
                if j != i {
                    rest.extend(self.inst.residuals(b, a));
                }
            }
            self.dedup(&mut rest);
            if !self.all_developments_terminate(&rest, budget) {
                return false;
            }
        }
        true
    }

    fn show_steps(&self, steps: &[I::Step]) -> String {
        let shown: Vec<String> = steps.iter().map(|s| self.inst.show_step(s)).collect();
        format!("{{{}}}", shown.join(", "))
    }

    fn check_object(&mut self, t: &I::Object) {
        let steps = self.inst.steps_of(t);
        match self.axiom {
            AxiomName::SelfReduction => self.self_reduction(t, &steps),
            AxiomName::FiniteResiduals => self.finite_residuals(t, &steps),
            AxiomName::AncestorUniqueness => self.ancestor_uniqueness(t, &steps),
            AxiomName::FiniteDevelopments => self.finite_developments(t, &steps),
            AxiomName::SemanticOrthogonality => self.semantic_orthogonality(t, &steps),
            AxiomName::Linearity => self.linearity(t, &steps),
            AxiomName::ContextFreeness => self.context_freeness(t, &steps),
            AxiomName::EnclaveCreation => self.enclave_creation(t, &steps),
            AxiomName::EnclaveEmbedding => self.enclave_embedding(t, &steps),
            AxiomName::Pivot => self.pivot(t, &steps),
            AxiomName::GripInstantiation => self.grip_instantiation(t, &steps),
            AxiomName::GripDensity => self.grip_density(t, &steps),
            AxiomName::GripConvexity => self.grip_convexity(t, &steps),
            AxiomName::Stability => self.stability(t, &steps),
        }
    }

    /// `a/a = ∅`.
    fn self_reduction(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            self.instances += 1;
            let res = self.inst.residuals(a, a);
            if !res.is_empty() {
                let detail = format!(
                    "step {} has residuals {} after itself",
                    self.inst.show_step(a),
                    self.show_steps(&res),
                );
                self.record(t, detail);
            }
        }
    }

    /// `b/a` is a finite set; as a sanity bound it cannot exceed the size
    /// of the target object.
    fn finite_residuals(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            let bound = self.inst.object_size(&self.inst.target(a));
            for b in steps {
                self.instances += 1;
                let res = self.inst.residuals(b, a);
                if res.len() > bound {
                    let detail = format!(
                        "{} residuals of {} after {} exceed the target size {}",
                        res.len(),
                        self.inst.show_step(b),
                        self.inst.show_step(a),
                        bound,
                    );
                    self.record(t, detail);
                }
            }
        }
    }

    /// Distinct coinitial steps have disjoint residual sets.
    fn ancestor_uniqueness(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for (i, b1) in steps.iter().enumerate() {
                for b2 in &steps[i + 1..] {
                    self.instances += 1;
                    let r1 = self.inst.residuals(b1, a);
                    let r2 = self.inst.residuals(b2, a);
                    let shared: Vec<&I::Step> =
                        r1.iter().filter(|s| self.step_in(&r2, s)).collect();
                    for s in shared {
                        let detail = format!(
                            "{} descends from both {} and {} after {}",
                            self.inst.show_step(s),
                            self.inst.show_step(b1),
                            self.inst.show_step(b2),
                            self.inst.show_step(a),
                        );
                        self.record(t, detail);
                    }
                }
            }
        }
    }

    /// Every development of every multistep of up to three steps is finite.
    fn finite_developments(&mut self, t: &I::Object, steps: &[I::Step]) {
        let n = steps.len();
        let mut subsets: Vec<Vec<I::Step>> = Vec::new();
        for i in 0..n {
            subsets.push(vec![steps[i].clone()]);
            for j in i + 1..n {
                subsets.push(vec![steps[i].clone(), steps[j].clone()]);
                for k in j + 1..n {
                    subsets.push(vec![
                        steps[i].clone(),
                        steps[j].clone(),
                        steps[k].clone(),
                    ]);
                }
            }
        }
        for set in subsets {
            self.instances += 1;
            let mut budget = DEVELOPMENT_BUDGET;
            if !self.all_developments_terminate(&set, &mut budget) {
                let detail = format!(
                    "a development of {} did not finish within {} contractions",
                    self.show_steps(&set),
                    DEVELOPMENT_BUDGET,
                );
                self.record(t, detail);
            }
        }
    }

    /// For coinitial `a ≠ b`, developing `b` then `a/b` meets developing
    /// `a` then `b/a`: same final object, and every step of the source has
    /// the same residuals along both legs.
    fn semantic_orthogonality(&mut self, t: &I::Object, steps: &[I::Step]) {
        for (i, a) in steps.iter().enumerate() {
            for b in &steps[i + 1..] {
                self.instances += 1;
                let b_after_a = self.inst.residuals(b, a);
                let a_after_b = self.inst.residuals(a, b);
                let Some((delta, end_a)) = self.develop(&self.inst.target(a), &b_after_a)
                else {
                    let detail = format!(
                        "developing {} after {} ran out of budget",
                        self.inst.show_step(b),
                        self.inst.show_step(a),
                    );
                    self.record(t, detail);
                    continue;
                };
                let Some((gamma, end_b)) = self.develop(&self.inst.target(b), &a_after_b)
                else {
                    let detail = format!(
                        "developing {} after {} ran out of budget",
                        self.inst.show_step(a),
                        self.inst.show_step(b),
                    );
                    self.record(t, detail);
                    continue;
                };
                if !self.inst.object_eq(&end_a, &end_b) {
                    let detail = format!(
                        "legs from {} and {} end at `{}` and `{}`",
                        self.inst.show_step(a),
                        self.inst.show_step(b),
                        self.inst.show_object(&end_a),
                        self.inst.show_object(&end_b),
                    );
                    self.record(t, detail);
                    continue;
                }
                let mut leg_a = vec![a.clone()];
                leg_a.extend(delta);
                let mut leg_b = vec![b.clone()];
                leg_b.extend(gamma);
                for c in steps {
                    let via_a = self.residuals_along(c, &leg_a);
                    let via_b = self.residuals_along(c, &leg_b);
                    let agree = via_a.len() == via_b.len()
                        && via_a.iter().all(|s| self.step_in(&via_b, s));
                    if !agree {
                        let detail = format!(
                            "residuals of {} differ across the square of {} and {}: {} vs {}",
                            self.inst.show_step(c),
                            self.inst.show_step(a),
                            self.inst.show_step(b),
                            self.show_steps(&via_a),
                            self.show_steps(&via_b),
                        );
                        self.record(t, detail);
                    }
                }
            }
        }
    }

    /// If `a` does not embed weakly into `b`, then `b` has exactly one
    /// residual after `a`.
    fn linearity(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps {
                let a_below_or_equal =
                    self.inst.step_eq(a, b) || self.inst.embeds(a, b);
                if a_below_or_equal {
                    continue;
                }
                self.instances += 1;
                let res = self.inst.residuals(b, a);
                if res.len() != 1 {
                    let detail = format!(
                        "{} has {} residuals after {}, expected exactly one",
                        self.inst.show_step(b),
                        res.len(),
                        self.inst.show_step(a),
                    );
                    self.record(t, detail);
                }
            }
        }
    }

    /// Unless `a` embeds `c`, residuals preserve and reflect the embedding
    /// between `b` and `c`.
    fn context_freeness(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps {
                let rb = self.inst.residuals(b, a);
                for c in steps {
                    if self.inst.embeds(a, c) {
                        continue;
                    }
                    let rc = self.inst.residuals(c, a);
                    for b1 in &rb {
                        for c1 in &rc {
                            self.instances += 1;
                            let before = self.inst.embeds(b, c);
                            let after = self.inst.embeds(b1, c1);
                            if before != after {
                                let detail = format!(
                                    "after {}: {}<{} is {} but {}<{} is {}",
                                    self.inst.show_step(a),
                                    self.inst.show_step(b),
                                    self.inst.show_step(c),
                                    before,
                                    self.inst.show_step(b1),
                                    self.inst.show_step(c1),
                                    after,
                                );
                                self.record(t, detail);
                            }
                        }
                    }
                }
            }
        }
    }

    fn created_by(&self, a: &I::Step, steps: &[I::Step]) -> Vec<I::Step> {
        let after = self.inst.steps_of(&self.inst.target(a));
        after
            .into_iter()
            .filter(|c| {
                !steps
                    .iter()
                    .any(|b| self.step_in(&self.inst.residuals(b, a), c))
            })
            .collect()
    }

    /// Residuals of steps embedding `a` embed everything `a` creates.
    fn enclave_creation(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            let created = self.created_by(a, steps);
            if created.is_empty() {
                continue;
            }
            for b in steps.iter().filter(|b| self.inst.embeds(b, a)) {
                for b1 in self.inst.residuals(b, a) {
                    for c1 in &created {
                        self.instances += 1;
                        if !self.inst.embeds(&b1, c1) {
                            let detail = format!(
                                "{} embeds {} but its residual {} does not embed the created {}",
                                self.inst.show_step(b),
                                self.inst.show_step(a),
                                self.inst.show_step(&b1),
                                self.inst.show_step(c1),
                            );
                            self.record(t, detail);
                        }
                    }
                }
            }
        }
    }

    /// If `b < a < c`, residuals of `b` embed residuals of `c` after `a`.
    fn enclave_embedding(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps.iter().filter(|b| self.inst.embeds(b, a)) {
                let rb = self.inst.residuals(b, a);
                for c in steps.iter().filter(|c| self.inst.embeds(a, c)) {
                    let rc = self.inst.residuals(c, a);
                    for b1 in &rb {
                        for c1 in &rc {
                            self.instances += 1;
                            if !self.inst.embeds(b1, c1) {
                                let detail = format!(
                                    "{} < {} < {} but residual {} does not embed {}",
                                    self.inst.show_step(b),
                                    self.inst.show_step(a),
                                    self.inst.show_step(c),
                                    self.inst.show_step(b1),
                                    self.inst.show_step(c1),
                                );
                                self.record(t, detail);
                            }
                        }
                    }
                }
            }
        }
    }

    /// If `a` and `b` both embed `c` and `b` is not weakly below `a`, every
    /// residual of `c` is embedded by some residual of `b`.
    fn pivot(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps {
                if self.inst.step_eq(b, a) || self.inst.embeds(b, a) {
                    continue;
                }
                let rb = self.inst.residuals(b, a);
                for c in steps {
                    if !(self.inst.embeds(a, c) && self.inst.embeds(b, c)) {
                        continue;
                    }
                    for c1 in self.inst.residuals(c, a) {
                        self.instances += 1;
                        if !rb.iter().any(|b1| self.inst.embeds(b1, &c1)) {
                            let detail = format!(
                                "no residual of {} embeds {} (residual of {} after {})",
                                self.inst.show_step(b),
                                self.inst.show_step(&c1),
                                self.inst.show_step(c),
                                self.inst.show_step(a),
                            );
                            self.record(t, detail);
                        }
                    }
                }
            }
        }
    }

    /// A fresh embedding between residuals comes from an old embedding or
    /// from the contracted step gripping the embedding step.
    fn grip_instantiation(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps {
                let rb = self.inst.residuals(b, a);
                for c in steps {
                    let rc = self.inst.residuals(c, a);
                    for b1 in &rb {
                        for c1 in &rc {
                            if !self.inst.embeds(b1, c1) {
                                continue;
                            }
                            self.instances += 1;
                            let explained = self.inst.embeds(b, c)
                                || (self.inst.grips(a, b) && self.inst.embeds(a, c));
                            if !explained {
                                let detail = format!(
                                    "{} embeds {} after {}, yet {} did not embed {} and gripping does not explain it",
                                    self.inst.show_step(b1),
                                    self.inst.show_step(c1),
                                    self.inst.show_step(a),
                                    self.inst.show_step(b),
                                    self.inst.show_step(c),
                                );
                                self.record(t, detail);
                            }
                        }
                    }
                }
            }
        }
    }

    /// A grip between residuals comes from an old grip or one through the
    /// contracted step.
    fn grip_density(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps {
                let rb = self.inst.residuals(b, a);
                for c in steps {
                    let rc = self.inst.residuals(c, a);
                    for b1 in &rb {
                        for c1 in &rc {
                            if !self.inst.grips(b1, c1) {
                                continue;
                            }
                            self.instances += 1;
                            let explained = self.inst.grips(b, c)
                                || (self.inst.grips(b, a) && self.inst.grips(a, c));
                            if !explained {
                                let detail = format!(
                                    "{} grips {} after {}, with no gripping chain from {} to {} in the source",
                                    self.inst.show_step(b1),
                                    self.inst.show_step(c1),
                                    self.inst.show_step(a),
                                    self.inst.show_step(b),
                                    self.inst.show_step(c),
                                );
                                self.record(t, detail);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Whatever sits strictly above a gripped step is itself gripped or
    /// weakly above the gripping step.
    fn grip_convexity(&mut self, t: &I::Object, steps: &[I::Step]) {
        for a in steps {
            for b in steps.iter().filter(|b| self.inst.grips(a, b)) {
                for c in steps.iter().filter(|c| self.inst.embeds(c, b)) {
                    self.instances += 1;
                    let ok = self.inst.grips(a, c)
                        || self.inst.step_eq(c, a)
                        || self.inst.embeds(c, a);
                    if !ok {
                        let detail = format!(
                            "{} grips {} and {} embeds it, but {} neither grips nor sits below {}",
                            self.inst.show_step(a),
                            self.inst.show_step(b),
                            self.inst.show_step(c),
                            self.inst.show_step(a),
                            self.inst.show_step(c),
                        );
                        self.record(t, detail);
                    }
                }
            }
        }
    }

    /// For disjoint `a`, `b` whose residuals close a square, any step with
    /// ancestors on both legs has a common ancestor in the source that is
    /// not created inside either leg. Not an axiom of the theory: the
    /// pattern calculus refutes it.
    fn stability(&mut self, t: &I::Object, steps: &[I::Step]) {
        for (i, a) in steps.iter().enumerate() {
            for b in &steps[i + 1..] {
                let disjoint = !self.inst.embeds(a, b) && !self.inst.embeds(b, a);
                if !disjoint {
                    continue;
                }
                let ta = self.inst.target(a);
                let tb = self.inst.target(b);
                let steps_ta = self.inst.steps_of(&ta);
                let steps_tb = self.inst.steps_of(&tb);
                for b1 in self.inst.residuals(b, a) {
                    for a1 in self.inst.residuals(a, b) {
                        let end_a = self.inst.target(&b1);
                        let end_b = self.inst.target(&a1);
                        if !self.inst.object_eq(&end_a, &end_b) {
                            continue;
                        }
                        for d_prime in self.inst.steps_of(&end_a) {
                            let ancestors_left: Vec<&I::Step> = steps_ta
                                .iter()
                                .filter(|d1| {
                                    self.step_in(&self.inst.residuals(d1, &b1), &d_prime)
                                })
                                .collect();
                            let ancestors_right: Vec<&I::Step> = steps_tb
                                .iter()
                                .filter(|d2| {
                                    self.step_in(&self.inst.residuals(d2, &a1), &d_prime)
                                })
                                .collect();
                            for d1 in &ancestors_left {
                                for d2 in &ancestors_right {
                                    self.instances += 1;
                                    let witness = steps.iter().any(|d| {
                                        self.step_in(&self.inst.residuals(d, a), d1)
                                            && self.step_in(&self.inst.residuals(d, b), d2)
                                            && (!(self.inst.step_eq(a, d)
                                                || self.inst.embeds(a, d))
                                                || !(self.inst.step_eq(b, d)
                                                    || self.inst.embeds(b, d)))
                                    });
                                    if !witness {
                                        let detail = format!(
                                            "step {} after the square of {} and {} has ancestors {} and {} on the two legs but none in the source",
                                            self.inst.show_step(&d_prime),
                                            self.inst.show_step(a),
                                            self.inst.show_step(b),
                                            self.inst.show_step(d1),
                                            self.inst.show_step(d2),
                                        );
                                        self.record(t, detail);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Check one axiom over a corpus.
pub fn check_axiom<I: ArsInstance>(
    inst: &I,
    corpus: &[I::Object],
    axiom: AxiomName,
) -> AxiomReport {
    let mut checker = Checker::new(inst, axiom);
    for t in corpus {
        checker.check_object(t);
    }
    checker.into_report()
}

/// Check all thirteen axioms over a corpus.
pub fn check_axioms<I: ArsInstance>(inst: &I, corpus: &[I::Object]) -> Vec<AxiomReport> {
    AxiomName::all()
        .into_iter()
        .map(|axiom| check_axiom(inst, corpus, axiom))
        .collect()
}

/// Check stability over a corpus. Expected to fail on the pattern
/// calculus and hold on its lambda fragment.
pub fn check_stability<I: ArsInstance>(inst: &I, corpus: &[I::Object]) -> AxiomReport {
    check_axiom(inst, corpus, AxiomName::Stability)
}

/// Check one axiom over a random subsample of the corpus, drawn with a
/// seeded generator so runs are reproducible.
pub fn check_axiom_sampled<I: ArsInstance>(
    inst: &I,
    corpus: &[I::Object],
    axiom: AxiomName,
    sample_size: usize,
    seed: u64,
) -> AxiomReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let sample: Vec<I::Object> = corpus
        .choose_multiple(&mut rng, sample_size)
        .cloned()
        .collect();
    check_axiom(inst, &sample, axiom)
}

/// The pattern calculus as an [`ArsInstance`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PpcArs;

impl ArsInstance for PpcArs {
    type Object = Term;
    type Step = Step;

    fn name(&self) -> &str {
        "ppc"
    }

    fn steps_of(&self, t: &Term) -> Vec<Step> {
        reduction::redexes(t)
    }

    fn source(&self, a: &Step) -> Term {
        a.source().clone()
    }

    fn target(&self, a: &Step) -> Term {
        a.target()
    }

    fn residuals(&self, b: &Step, a: &Step) -> Vec<Step> {
        let target = a.target();
        reduction::residuals(b, a)
            .expect("coinitial steps have residuals")
            .into_iter()
            .map(|p| {
                Step::new(target.clone(), p).expect("residual positions are steps")
            })
            .collect()
    }

    fn embeds(&self, a: &Step, b: &Step) -> bool {
        reduction::embeds(a, b).expect("coinitial steps")
    }

    fn grips(&self, a: &Step, b: &Step) -> bool {
        reduction::grips(a, b).expect("coinitial steps")
    }

    fn object_eq(&self, s: &Term, t: &Term) -> bool {
        s.alpha_eq(t)
    }

    fn step_eq(&self, a: &Step, b: &Step) -> bool {
        a == b
    }

    fn show_object(&self, t: &Term) -> String {
        t.to_string()
    }

    fn show_step(&self, a: &Step) -> String {
        if a.position().is_root() {
            "ε".to_string()
        } else {
            a.position().to_string()
        }
    }

    fn object_size(&self, t: &Term) -> usize {
        t.size()
    }
}
