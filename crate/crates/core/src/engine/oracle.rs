//! Reference world-view computations for small programs.
//!
//! Both oracles try every non-empty collection of consistent subsets of the
//! program's literals and keep the collections that reproduce themselves as
//! the answer sets of their reduct. Answer sets come from the exhaustive
//! checker in [`crate::asp`], not from the search solver. The reduct only
//! depends on which subjective literals a collection satisfies, so answer
//! sets are cached per satisfaction pattern.

use std::collections::{BTreeSet, HashMap};

use super::EngineError;
use crate::asp::{brute_force_answer_sets, GroundAspProgram};
use crate::lang::{BeliefSet, Modality, ObjectiveLiteral, Program, Rule, SubjectiveLiteral, WorldView};
use crate::transform::{to_core, TransformError};

/// Default limit on the number of literals the oracles accept.
pub const DEFAULT_ORACLE_CAP: usize = 4;

/// Candidate collections are bitmasks over consistent subsets; beyond this
/// many subsets enumeration is hopeless.
const MAX_SUBSETS: usize = 20;

/// Exhaustive answer-set limit passed to the brute-force checker.
const ANSWER_SET_CAP: usize = 24;

fn consistent_subsets(p: &Program, cap: usize) -> Result<Vec<BeliefSet>, EngineError> {
    let lits: Vec<ObjectiveLiteral> = p.literals().into_iter().collect();
    if lits.len() > cap {
        return Err(EngineError::OracleCap {
            literals: lits.len(),
            cap,
        });
    }
    let subsets: Vec<BeliefSet> = (0..1u64 << lits.len())
        .map(|mask| {
            (0..lits.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| lits[i].clone())
                .collect::<BeliefSet>()
        })
        .filter(BeliefSet::is_consistent)
        .collect();
    if subsets.len() > MAX_SUBSETS {
        return Err(EngineError::OracleCap {
            literals: lits.len(),
            cap,
        });
    }
    Ok(subsets)
}

fn distinct_subjective(p: &Program) -> Vec<SubjectiveLiteral> {
    let set: BTreeSet<&SubjectiveLiteral> = p.rules.iter().flat_map(|r| &r.body_subj).collect();
    set.into_iter().cloned().collect()
}

/// Enumerate candidate collections and keep those equal to the answer sets
/// of `reduct(signature)`, after `extend` maps each belief set into the
/// vocabulary of the reduct. Collections are bitmasks over `subsets`.
fn enumerate(
    subsets: &[BeliefSet],
    subjective: &[SubjectiveLiteral],
    extend: impl Fn(&BeliefSet) -> BeliefSet,
    reduct: impl Fn(&[bool]) -> Program,
) -> Result<BTreeSet<WorldView>, EngineError> {
    let extended: Vec<BeliefSet> = subsets.iter().map(&extend).collect();
    // Bit i of `holds[j]`: the objective part of subjective literal j holds
    // in belief set i.
    let holds: Vec<u64> = subjective
        .iter()
        .map(|s| {
            extended
                .iter()
                .enumerate()
                .filter(|(_, b)| b.contains(&s.literal) != s.inner_negated)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    // Answer sets of each reduct as a mask over `extended`; `None` when
    // some answer set is not a candidate belief set.
    let mut cache: HashMap<Vec<bool>, Option<u64>> = HashMap::new();
    let mut views = BTreeSet::new();
    for mask in 1u64..(1 << subsets.len()) {
        let signature: Vec<bool> = subjective
            .iter()
            .zip(&holds)
            .map(|(s, h)| {
                // K needs every chosen set, M at least one.
                let all = mask & !h == 0;
                let some = mask & h != 0;
                match s.modality {
                    Modality::K => all,
                    Modality::NotK => !all,
                    Modality::M => some,
                    Modality::NotM => !some,
                }
            })
            .collect();
        let answer = match cache.get(&signature) {
            Some(a) => *a,
            None => {
                let compiled = GroundAspProgram::compile(&reduct(&signature))?;
                let sets = brute_force_answer_sets(&compiled, ANSWER_SET_CAP)?;
                let a = sets.iter().try_fold(0u64, |m, b| {
                    extended.iter().position(|e| e == b).map(|i| m | (1 << i))
                });
                cache.insert(signature, a);
                a
            }
        };
        if answer == Some(mask) {
            views.insert(
                (0..subsets.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| subsets[i].clone())
                    .collect(),
            );
        }
    }
    Ok(views)
}

fn keep_satisfied(p: &Program, subjective: &[SubjectiveLiteral], signature: &[bool]) -> Vec<Rule> {
    p.rules
        .iter()
        .filter(|r| {
            r.body_subj
                .iter()
                .all(|s| signature[subjective.binary_search(s).expect("collected from p")])
        })
        .cloned()
        .collect()
}

/// World views of a program with arbitrary subjective literals, found by
/// exhaustive search over the core-form rewriting and mapped back.
pub fn brute_force_world_views(p: &Program, cap: usize) -> Result<BTreeSet<WorldView>, EngineError> {
    let subsets = consistent_subsets(p, cap)?;
    let core = to_core(p);
    let subjective = distinct_subjective(&core.program);
    let extend = |b: &BeliefSet| -> BeliefSet {
        let mut out = b.clone();
        for (l, fresh) in &core.fresh_map {
            if !b.contains(l) {
                out.0.insert(fresh.clone());
            }
        }
        out
    };
    let reduct = |signature: &[bool]| {
        let rules = keep_satisfied(&core.program, &subjective, signature)
            .into_iter()
            .map(|r| {
                let mut out = Rule {
                    body_subj: Vec::new(),
                    ..r.clone()
                };
                out.body_pos.extend(r.body_k().cloned());
                out
            })
            .collect();
        Program::new(rules)
    };
    enumerate(&subsets, &subjective, extend, reduct)
}

/// World views under the definition whose reduct turns `K l` into `l` and
/// `K not l` into `not l` and drops `-K l`, `-K not l` and `M l`. Works on
/// the program directly, without rewriting it.
pub fn gelfond_world_views_oracle(p: &Program, cap: usize) -> Result<BTreeSet<WorldView>, EngineError> {
    for r in &p.rules {
        for s in &r.body_subj {
            if matches!((s.modality, s.inner_negated), (Modality::M, true) | (Modality::NotM, _)) {
                return Err(TransformError::OutsideGelfondLanguage(s.to_string()).into());
            }
        }
    }
    let subsets = consistent_subsets(p, cap)?;
    let subjective = distinct_subjective(p);
    let reduct = |signature: &[bool]| {
        let rules = keep_satisfied(p, &subjective, signature)
            .into_iter()
            .map(|r| {
                let mut out = Rule {
                    body_subj: Vec::new(),
                    ..r.clone()
                };
                for s in &r.body_subj {
                    if s.modality == Modality::K {
                        if s.inner_negated {
                            out.body_neg.push(s.literal.clone());
                        } else {
                            out.body_pos.push(s.literal.clone());
                        }
                    }
                }
                out
            })
            .collect();
        Program::new(rules)
    };
    enumerate(&subsets, &subjective, BeliefSet::clone, reduct)
}
