//! Answer sets of ground programs without subjective literals.
//!
//! Programs may use disjunctive heads, default and classical negation,
//! integrity constraints and choice rules. Choice rules are compiled into
//! a pair of normal rules per element plus a cardinality constraint that
//! is checked on candidate models.

mod external;
mod solver;

use std::collections::BTreeSet;

use thiserror::Error;

pub use external::{external_answer_sets, ExternalOutcome, ExternalSolver};
pub use solver::{answer_sets, answer_sets_with, SolverOptions};

use crate::lang::{Atom, BeliefSet, Head, ObjectiveLiteral, Program, Rule, Term, CHOICE_AUX_PREDICATE};

#[derive(Debug, Error)]
pub enum AspError {
    #[error("rule `{0}` contains subjective literals")]
    Subjective(String),
    #[error("choice rule `{rule}` has upper bound {upper} below lower bound {lower}")]
    ChoiceBounds { rule: String, lower: usize, upper: usize },
    #[error("search exceeded the budget of {0} nodes")]
    Budget(u64),
    #[error("minimality check over {atoms} atoms exceeds the cap of {cap}")]
    MinimalityCap { atoms: usize, cap: usize },
    #[error("external solver: {0}")]
    External(String),
}

impl AspError {
    /// Resource exhaustion as opposed to a malformed program.
    pub fn is_resource(&self) -> bool {
        matches!(self, AspError::Budget(_) | AspError::MinimalityCap { .. })
    }
}

/// `L <= |{true elements}| <= U` whenever the guard body holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CardinalityConstraint {
    pub lower: usize,
    pub upper: usize,
    pub elements: Vec<ObjectiveLiteral>,
    pub guard_pos: Vec<ObjectiveLiteral>,
    pub guard_neg: Vec<ObjectiveLiteral>,
}

impl CardinalityConstraint {
    pub fn holds(&self, x: &BeliefSet) -> bool {
        if !body_true(&self.guard_pos, &self.guard_neg, x) {
            return true;
        }
        let n = self.elements.iter().filter(|l| x.contains(l)).count();
        self.lower <= n && n <= self.upper
    }
}

/// A choice-free, subjective-free ground program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundAspProgram {
    pub rules: Vec<Rule>,
    pub cardinality_constraints: Vec<CardinalityConstraint>,
}

impl GroundAspProgram {
    /// Compile choice rules away. Fails on subjective literals.
    pub fn compile(p: &Program) -> Result<Self, AspError> {
        let mut out = GroundAspProgram::default();
        for r in &p.rules {
            if !r.body_subj.is_empty() {
                return Err(AspError::Subjective(r.to_string()));
            }
            match &r.head {
                Head::Disjunction(_) => out.rules.push(r.clone()),
                Head::Choice(_) => {
                    let (rules, card) = compile_choice(r, out.cardinality_constraints.len())?;
                    out.rules.extend(rules);
                    out.cardinality_constraints.push(card);
                }
            }
        }
        Ok(out)
    }

    pub fn literals(&self) -> BTreeSet<ObjectiveLiteral> {
        let mut lits: BTreeSet<ObjectiveLiteral> = self.rules.iter().flat_map(|r| r.literals().cloned()).collect();
        for c in &self.cardinality_constraints {
            lits.extend(c.elements.iter().chain(&c.guard_pos).chain(&c.guard_neg).cloned());
        }
        lits
    }

    pub fn is_disjunctive(&self) -> bool {
        self.rules.iter().any(|r| r.head_literals().len() > 1)
    }

    /// Extend a set of visible literals with the choice auxiliaries it
    /// determines: `aux` is true iff its guard holds and its element is false.
    pub fn complete_aux(&self, visible: &BeliefSet) -> BeliefSet {
        let mut x: BTreeSet<ObjectiveLiteral> = visible.iter().filter(|l| !l.is_aux()).cloned().collect();
        for (id, c) in self.cardinality_constraints.iter().enumerate() {
            if body_true(&c.guard_pos, &c.guard_neg, visible) {
                for (i, e) in c.elements.iter().enumerate() {
                    if !visible.contains(e) {
                        x.insert(choice_aux(id, i));
                    }
                }
            }
        }
        BeliefSet(x)
    }
}

fn choice_aux(id: usize, element: usize) -> ObjectiveLiteral {
    ObjectiveLiteral::pos(Atom::new(CHOICE_AUX_PREDICATE, vec![Term::Int(id as i64), Term::Int(element as i64)]))
}

/// Compile the `id`-th choice rule of a program. Each element `a` gets
/// `a :- body, not aux.` and `aux :- body, not a.` with a fresh `aux`.
pub fn compile_choice(r: &Rule, id: usize) -> Result<(Vec<Rule>, CardinalityConstraint), AspError> {
    let Head::Choice(c) = &r.head else {
        panic!("compile_choice called on `{r}`, which has no choice head");
    };
    if c.upper < c.lower {
        return Err(AspError::ChoiceBounds {
            rule: r.to_string(),
            lower: c.lower,
            upper: c.upper,
        });
    }
    let mut rules = Vec::with_capacity(2 * c.elements.len());
    for (i, a) in c.elements.iter().enumerate() {
        let aux = choice_aux(id, i);
        let mut take = Rule::fact(a.clone());
        take.body_pos = r.body_pos.clone();
        take.body_neg = r.body_neg.clone();
        take.body_neg.push(aux.clone());
        let mut skip = Rule::fact(aux);
        skip.body_pos = r.body_pos.clone();
        skip.body_neg = r.body_neg.clone();
        skip.body_neg.push(a.clone());
        rules.push(take);
        rules.push(skip);
    }
    Ok((
        rules,
        CardinalityConstraint {
            lower: c.lower,
            upper: c.upper,
            elements: c.elements.clone(),
            guard_pos: r.body_pos.clone(),
            guard_neg: r.body_neg.clone(),
        },
    ))
}

fn body_true(pos: &[ObjectiveLiteral], neg: &[ObjectiveLiteral], x: &BeliefSet) -> bool {
    pos.iter().all(|l| x.contains(l)) && !neg.iter().any(|l| x.contains(l))
}

/// Gelfond–Lifschitz reduct: drop rules blocked by `x`, then drop every
/// remaining `not` literal.
pub fn gl_reduct(p: &GroundAspProgram, x: &BeliefSet) -> Vec<Rule> {
    p.rules
        .iter()
        .filter(|r| !r.body_neg.iter().any(|l| x.contains(l)))
        .map(|r| Rule {
            body_neg: Vec::new(),
            ..r.clone()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeastModel {
    Model(BeliefSet),
    /// Complementary literals derived, or an integrity constraint fired.
    Inconsistent,
}

/// Least model of a positive program whose heads have at most one literal.
pub fn least_model(rules: &[Rule]) -> LeastModel {
    debug_assert!(rules.iter().all(|r| r.body_neg.is_empty() && r.head_literals().len() <= 1));
    let mut model = BTreeSet::new();
    let mut changed = true;
    while changed {
        changed = false;
        for r in rules {
            if r.body_pos.iter().all(|l| model.contains(l)) {
                match r.head_literals().first() {
                    None => return LeastModel::Inconsistent,
                    Some(h) => changed |= model.insert(h.clone()),
                }
            }
        }
    }
    let model = BeliefSet(model);
    if model.is_consistent() {
        LeastModel::Model(model)
    } else {
        LeastModel::Inconsistent
    }
}

/// Does `x` satisfy every rule of a positive program?
fn is_model(rules: &[Rule], x: &BTreeSet<ObjectiveLiteral>) -> bool {
    rules.iter().all(|r| {
        !r.body_pos.iter().all(|l| x.contains(l)) || r.head_literals().iter().any(|h| x.contains(h))
    })
}

/// Decide whether `x` is an answer set. For disjunctive programs the
/// minimality check enumerates subsets and is exponential in `|x|`.
pub fn is_answer_set(p: &GroundAspProgram, x: &BeliefSet) -> bool {
    check_answer_set(p, x, usize::MAX).unwrap_or(false)
}

/// [`is_answer_set`] with a cap on the number of atoms the disjunctive
/// minimality check may enumerate over.
pub fn check_answer_set(p: &GroundAspProgram, x: &BeliefSet, cap: usize) -> Result<bool, AspError> {
    if !x.is_consistent() || !p.cardinality_constraints.iter().all(|c| c.holds(x)) {
        return Ok(false);
    }
    let reduct = gl_reduct(p, x);
    if !p.is_disjunctive() {
        return Ok(least_model(&reduct) == LeastModel::Model(x.clone()));
    }
    if !is_model(&reduct, &x.0) {
        return Ok(false);
    }
    // Every model contains the closure of the single-head rules, so only
    // the remaining atoms need to be dropped in search of a smaller model.
    let definite: Vec<Rule> = reduct
        .iter()
        .filter(|r| r.head_literals().len() == 1)
        .cloned()
        .collect();
    let forced = match least_model(&definite) {
        LeastModel::Model(m) => m.0,
        LeastModel::Inconsistent => return Ok(false),
    };
    let free: Vec<&ObjectiveLiteral> = x.iter().filter(|l| !forced.contains(*l)).collect();
    let cap = cap.min(63);
    if free.len() > cap {
        return Err(AspError::MinimalityCap {
            atoms: free.len(),
            cap,
        });
    }
    let full: u64 = (1u64 << free.len()) - 1;
    for mask in 0..full {
        let mut y = forced.clone();
        y.extend((0..free.len()).filter(|i| mask & (1 << i) != 0).map(|i| free[i].clone()));
        if y.is_subset(&x.0) && is_model(&reduct, &y) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every answer set by checking each consistent subset of the program's
/// visible literals, with choice auxiliaries completed. Exponential; meant
/// as a reference for small programs.
pub fn brute_force_answer_sets(p: &GroundAspProgram, cap: usize) -> Result<BTreeSet<BeliefSet>, AspError> {
    let visible: Vec<ObjectiveLiteral> = p.literals().into_iter().filter(|l| !l.is_aux()).collect();
    if visible.len() > cap || visible.len() >= 64 {
        return Err(AspError::MinimalityCap {
            atoms: visible.len(),
            cap,
        });
    }
    let mut out = BTreeSet::new();
    for mask in 0..(1u64 << visible.len()) {
        let candidate: BeliefSet = (0..visible.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| visible[i].clone())
            .collect();
        if !candidate.is_consistent() {
            continue;
        }
        let x = p.complete_aux(&candidate);
        if is_answer_set(p, &x) {
            out.insert(candidate);
        }
    }
    Ok(out)
}
