//! Rewriting arbitrary subjective literals into core form.
//!
//! Core form only has `K l` and `-K l`. The other six forms are expressed
//! through a fresh literal `l'` defined by `l' :- not l.`:
//!
//! | form         | becomes  |
//! |--------------|----------|
//! | `-K not l`   | `-K l'`  |
//! | `M l`        | `-K l'`  |
//! | `-M l`       | `K l'`   |
//! | `K not l`    | `K l'`   |
//! | `M not l`    | `-K l`   |
//! | `-M not l`   | `K l`    |
//!
//! One fresh literal is created per objective literal and shared by every
//! occurrence. World views of the rewritten program are mapped back by
//! intersecting each belief set with the literals of the original program.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lang::{Atom, Modality, ObjectiveLiteral, Program, Rule, SubjectiveLiteral, WorldView, RESERVED_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("`{0}` is not expressible with K, -K, K not, -K not and M")]
    OutsideGelfondLanguage(String),
}

/// A program in core form together with what is needed to map its world
/// views back to the source program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreProgram {
    pub program: Program,
    /// `l -> l'` for every literal that needed a fresh counterpart.
    pub fresh_map: BTreeMap<ObjectiveLiteral, ObjectiveLiteral>,
    /// Literals of the source program.
    pub original_lits: BTreeSet<ObjectiveLiteral>,
}

impl CoreProgram {
    /// Wrap a program that is already in core form.
    pub fn from_core(program: Program) -> Self {
        let original_lits = program.literals();
        CoreProgram {
            program,
            fresh_map: BTreeMap::new(),
            original_lits,
        }
    }

    /// Map world views of the core program back onto the source literals.
    pub fn project(&self, ws: &BTreeSet<WorldView>) -> BTreeSet<WorldView> {
        project(ws, &self.original_lits)
    }
}

/// The fresh literal standing for `not l`.
pub fn fresh_literal(l: &ObjectiveLiteral) -> ObjectiveLiteral {
    let marker = if l.negated { "kn_" } else { "k_" };
    let name = format!("{RESERVED_PREFIX}{marker}{}", l.atom.predicate);
    ObjectiveLiteral::pos(Atom::new(&name, l.atom.args.clone()))
}

pub fn to_core(p: &Program) -> CoreProgram {
    rewrite(p, false).expect("every form is accepted")
}

/// Same rewriting, restricted to the language with `K`, `-K`, `K not`,
/// `-K not` and `M` (where `M l` abbreviates `-K not l`).
pub fn gelfond_to_core(p: &Program) -> Result<CoreProgram, TransformError> {
    rewrite(p, true)
}

fn rewrite(p: &Program, gelfond_only: bool) -> Result<CoreProgram, TransformError> {
    let mut fresh_map = BTreeMap::new();
    let mut rules = Vec::with_capacity(p.rules.len());
    for r in &p.rules {
        let mut introduced = Vec::new();
        let mut out = r.clone();
        for s in &mut out.body_subj {
            if gelfond_only && matches!((s.modality, s.inner_negated), (Modality::M, true) | (Modality::NotM, _)) {
                return Err(TransformError::OutsideGelfondLanguage(s.to_string()));
            }
            let uses_fresh = match (s.modality, s.inner_negated) {
                (Modality::K, false) | (Modality::NotK, false) => continue,
                (Modality::M, true) => {
                    *s = SubjectiveLiteral::not_k(s.literal.clone());
                    continue;
                }
                (Modality::NotM, true) => {
                    *s = SubjectiveLiteral::k(s.literal.clone());
                    continue;
                }
                (Modality::NotK, true) | (Modality::M, false) => Modality::NotK,
                (Modality::NotM, false) | (Modality::K, true) => Modality::K,
            };
            let l = s.literal.clone();
            let fresh = fresh_map
                .entry(l.clone())
                .or_insert_with(|| {
                    introduced.push(l.clone());
                    fresh_literal(&l)
                })
                .clone();
            *s = SubjectiveLiteral::new(uses_fresh, false, fresh);
        }
        rules.push(out);
        for l in introduced {
            rules.push(Rule::fact(fresh_literal(&l)).with_neg(l));
        }
    }
    Ok(CoreProgram {
        program: Program {
            rules,
            constants: p.constants.clone(),
        },
        fresh_map,
        original_lits: p.literals(),
    })
}

/// Intersect every belief set with `lits`; duplicates collapse.
pub fn project(ws: &BTreeSet<WorldView>, lits: &BTreeSet<ObjectiveLiteral>) -> BTreeSet<WorldView> {
    ws.iter().map(|w| w.project(lits)).collect()
}
