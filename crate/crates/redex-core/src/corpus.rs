//! Exhaustive enumeration of small closed terms, the raw material for the
//! axiom suite and the strategy oracles.
//!
//! Size is node count (an abstraction counts one plus its pattern and
//! body). Terms are closed by construction: variables come only from
//! enclosing binders. Binder names are drawn from a fixed pool in binding
//! order and binder sets must be used (each bound symbol occurs as a
//! matchable in the pattern or a variable in the body), so the enumeration
//! produces no alpha-duplicates and no vacuous binders. Free matchables —
//! the constructors — range over two names.

use std::collections::{BTreeSet, HashMap};

use crate::por::PorTerm;
use crate::term::{Symbol, Term};

const CONSTRUCTORS: [&str; 2] = ["a", "b"];
const BINDER_POOL: [&str; 6] = ["x", "y", "z", "w", "v", "u"];

type Scope = Vec<Symbol>;

/// All closed terms of size at most `max_size` over two constructors.
pub fn ppc_corpus(max_size: usize) -> Vec<Term> {
    let mut memo = HashMap::new();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for size in 1..=max_size {
        for t in gen_ppc(size, &[], &[], 0, &mut memo) {
            if seen.insert(t.canonical()) {
                out.push(t);
            }
        }
    }
    out
}

/// All closed lambda-fragment terms (every abstraction is `\[x] ^x . s`)
/// of size at most `max_size`.
pub fn lambda_corpus(max_size: usize) -> Vec<Term> {
    let mut memo = HashMap::new();
    let mut out = BTreeSet::new();
    for size in 1..=max_size {
        for t in gen_lambda(size, 0, &mut memo).iter() {
            out.insert(t.clone());
        }
    }
    out.into_iter().collect()
}

/// All closed terms of the parallel-or calculus of size at most `max_size`.
pub fn por_corpus(max_size: usize) -> Vec<PorTerm> {
    let mut memo = HashMap::new();
    let mut out = BTreeSet::new();
    for size in 1..=max_size {
        for t in gen_por(size, 0, &mut memo).iter() {
            out.insert(t.clone());
        }
    }
    out.into_iter().collect()
}

type PpcKey = (usize, Scope, Scope, usize);

/// Terms of exactly `size` nodes. `vscope` holds the variables in scope
/// (binders of abstractions whose body we are in), `mscope` the matchables
/// (binders of abstractions whose pattern we are in — matching binds
/// through nested patterns and their bodies alike), `next` indexes the
/// binder pool.
fn gen_ppc(
    size: usize,
    vscope: &[Symbol],
    mscope: &[Symbol],
    next: usize,
    memo: &mut HashMap<PpcKey, Vec<Term>>,
) -> Vec<Term> {
    let key = (size, vscope.to_vec(), mscope.to_vec(), next);
    if let Some(cached) = memo.get(&key) {
        return cached.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        for v in vscope {
            out.push(Term::var(v.clone()));
        }
        for m in mscope {
            out.push(Term::matchable(m.clone()));
        }
        for c in CONSTRUCTORS {
            out.push(Term::matchable(c));
        }
    } else {
        // Applications: size = 1 + |fun| + |arg|.
        for fun_size in 1..size - 1 {
            let arg_size = size - 1 - fun_size;
            let funs = gen_ppc(fun_size, vscope, mscope, next, memo);
            let args = gen_ppc(arg_size, vscope, mscope, next, memo);
            for f in &funs {
                for a in &args {
                    out.push(Term::app(f.clone(), a.clone()));
                }
            }
        }
        // Abstractions: size = 1 + |pattern| + |body|. The pattern may use
        // the new binders as matchables; the body may use them as
        // variables; each binder must be used somewhere.
        for binders in 0..=2usize.min(BINDER_POOL.len() - next) {
            let theta: Scope = BINDER_POOL[next..next + binders]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut pattern_mscope = mscope.to_vec();
            pattern_mscope.extend(theta.iter().cloned());
            let mut body_vscope = vscope.to_vec();
            body_vscope.extend(theta.iter().cloned());
            for pattern_size in 1..size - 1 {
                let body_size = size - 1 - pattern_size;
                let patterns =
                    gen_ppc(pattern_size, vscope, &pattern_mscope, next + binders, memo);
                let bodies =
                    gen_ppc(body_size, &body_vscope, mscope, next + binders, memo);
                for p in &patterns {
                    let fm = p.free_matchables();
                    for b in &bodies {
                        let fv = b.free_vars();
                        if theta.iter().all(|x| fm.contains(x) || fv.contains(x)) {
                            out.push(Term::abs(theta.clone(), p.clone(), b.clone()));
                        }
                    }
                }
            }
        }
    }
    memo.insert(key, out.clone());
    out
}

/// Lambda-fragment terms of exactly `size` nodes with `depth` variables in
/// scope.
fn gen_lambda(
    size: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), Vec<Term>>,
) -> Vec<Term> {
    if let Some(cached) = memo.get(&(size, depth)) {
        return cached.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        for name in &BINDER_POOL[..depth.min(BINDER_POOL.len())] {
            out.push(Term::var(*name));
        }
    } else {
        for fun_size in 1..size - 1 {
            let arg_size = size - 1 - fun_size;
            let funs = gen_lambda(fun_size, depth, memo);
            let args = gen_lambda(arg_size, depth, memo);
            for f in &funs {
                for a in &args {
                    out.push(Term::app(f.clone(), a.clone()));
                }
            }
        }
        // \[x] ^x . body: two nodes of overhead.
        if size >= 3 && depth < BINDER_POOL.len() {
            let name = BINDER_POOL[depth];
            for body in gen_lambda(size - 2, depth + 1, memo) {
                out.push(Term::abs([name], Term::matchable(name), body));
            }
        }
    }
    memo.insert((size, depth), out.clone());
    out
}

/// Parallel-or terms of exactly `size` nodes with `depth` variables in
/// scope.
fn gen_por(
    size: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), Vec<PorTerm>>,
) -> Vec<PorTerm> {
    if let Some(cached) = memo.get(&(size, depth)) {
        return cached.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.push(PorTerm::tt());
        for name in &BINDER_POOL[..depth.min(BINDER_POOL.len())] {
            out.push(PorTerm::var(*name));
        }
    } else {
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            let lefts = gen_por(left_size, depth, memo);
            let rights = gen_por(right_size, depth, memo);
            for l in &lefts {
                for r in &rights {
                    out.push(PorTerm::app(l.clone(), r.clone()));
                    out.push(PorTerm::or(l.clone(), r.clone()));
                }
            }
        }
        if depth < BINDER_POOL.len() {
            let name = BINDER_POOL[depth];
            for body in gen_por(size - 1, depth + 1, memo) {
                out.push(PorTerm::lam(name, body));
            }
        }
    }
    memo.insert((size, depth), out.clone());
    out
}
