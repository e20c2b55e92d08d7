//! Partial models and program simplification.
//!
//! A partial model is a pair of disjoint literal sets: literals true in
//! every belief set of every world view, and literals false in every belief
//! set of every world view. The lower-bound operator grows such a pair; a
//! program can then be simplified against it without changing its world
//! views.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lang::{Head, Modality, ObjectiveLiteral, Program, Rule};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialModel {
    /// Literals in every belief set.
    pub true_everywhere: BTreeSet<ObjectiveLiteral>,
    /// Literals in no belief set.
    pub false_everywhere: BTreeSet<ObjectiveLiteral>,
}

impl PartialModel {
    pub fn is_empty(&self) -> bool {
        self.true_everywhere.is_empty() && self.false_everywhere.is_empty()
    }
}

/// A literal was found to be both true and false everywhere, so the program
/// has no world view.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("`{0}` is forced both true and false")]
pub struct Contradiction(pub ObjectiveLiteral);

/// Positive body: objective literals and `K l`.
fn body_plus(r: &Rule) -> impl Iterator<Item = &ObjectiveLiteral> {
    r.body_pos.iter().chain(r.body_k())
}

/// Negative body: `not l` and `-K l`.
fn body_minus(r: &Rule) -> impl Iterator<Item = &ObjectiveLiteral> {
    r.body_neg.iter().chain(r.body_not_k())
}

fn is_defeated(r: &Rule, pm: &PartialModel) -> bool {
    body_plus(r).any(|l| pm.false_everywhere.contains(l)) || body_minus(r).any(|l| pm.true_everywhere.contains(l))
}

/// One application of the lower-bound operator to a core-form program.
pub fn lower_bound(p: &Program, pm: &PartialModel) -> Result<PartialModel, Contradiction> {
    let mut derived = BTreeSet::new();
    let mut supported = BTreeSet::new();
    for r in &p.rules {
        let defeated = is_defeated(r, pm);
        if !defeated {
            supported.extend(r.head_literals().iter().cloned());
        }
        if let [h] = r.head_literals() {
            if body_plus(r).all(|l| pm.true_everywhere.contains(l))
                && body_minus(r).all(|l| pm.false_everywhere.contains(l))
                && matches!(r.head, Head::Disjunction(_))
            {
                derived.insert(h.clone());
            }
        }
    }
    let unsupported: BTreeSet<ObjectiveLiteral> = p.literals().into_iter().filter(|l| !supported.contains(l)).collect();
    if let Some(l) = derived.intersection(&unsupported).next() {
        return Err(Contradiction(l.clone()));
    }
    Ok(PartialModel {
        true_everywhere: derived,
        false_everywhere: unsupported,
    })
}

/// Remove what a partial model settles: defeated rules and satisfied body
/// occurrences go; the partial model is recorded as facts and constraints.
pub fn simplify(p: &Program, pm: &PartialModel) -> Program {
    if pm.is_empty() {
        return p.clone();
    }
    let mut rules: Vec<Rule> = Vec::with_capacity(p.rules.len() + pm.true_everywhere.len() + pm.false_everywhere.len());
    let mut seen = BTreeSet::new();
    let mut push = |r: Rule, rules: &mut Vec<Rule>| {
        if seen.insert(r.clone()) {
            rules.push(r);
        }
    };
    for r in p.rules.iter().filter(|r| !is_defeated(r, pm)) {
        let mut r = r.clone();
        r.body_pos.retain(|l| !pm.true_everywhere.contains(l));
        r.body_neg.retain(|l| !pm.false_everywhere.contains(l));
        r.body_subj.retain(|s| match (s.modality, s.inner_negated) {
            (Modality::K, false) => !pm.true_everywhere.contains(&s.literal),
            (Modality::NotK, false) => !pm.false_everywhere.contains(&s.literal),
            _ => true,
        });
        push(r, &mut rules);
    }
    for l in &pm.true_everywhere {
        push(Rule::fact(l.clone()), &mut rules);
    }
    for l in &pm.false_everywhere {
        push(Rule::constraint().with_pos(l.clone()), &mut rules);
    }
    Program {
        rules,
        constants: p.constants.clone(),
    }
}

/// Alternate the lower-bound operator and simplification until the partial
/// model stops growing.
pub fn preprocess(p: &Program) -> Result<(Program, PartialModel), Contradiction> {
    let mut program = p.clone();
    let mut pm = PartialModel::default();
    loop {
        let step = lower_bound(&program, &pm)?;
        let mut next = pm.clone();
        next.true_everywhere.extend(step.true_everywhere);
        next.false_everywhere.extend(step.false_everywhere);
        if let Some(l) = next.true_everywhere.intersection(&next.false_everywhere).next() {
            return Err(Contradiction(l.clone()));
        }
        if next == pm {
            return Ok((program, pm));
        }
        program = simplify(&program, &next);
        pm = next;
    }
}
