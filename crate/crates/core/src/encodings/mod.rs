//! Ready-made encodings: conformant planning and the bundled example
//! programs.
//!
//! A conformant planning problem is a planning domain combined with a
//! module that generates one action per step and requires, through
//! epistemic constraints, that every execution track agrees on the actions
//! and that every track is executable, stays legal and reaches the goal.
//! Each belief set of a world view is one track, so a world view is a
//! secure plan.
//!
//! The domain must define `action/1` and a rule for `goal(T)` over the step
//! variable; the module supplies `step/1` and `o(Action, Step)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::engine::{solve, EngineError, EngineOptions};
use crate::frontend::{ground, parse, FrontendError, SourceProgram};
use crate::lang::{Term, WorldView};
use crate::transform::to_core;

/// Programs shipped with the crate.
pub mod corpus {
    /// Disjunction whose two world views each pick one side.
    pub const EXAMPLE1: &str = include_str!("../../corpus/example1.es");
    /// A program using `-M`.
    pub const EXAMPLE2: &str = include_str!("../../corpus/example2.es");
    /// A program whose world views include the empty belief set.
    pub const EXAMPLE3: &str = include_str!("../../corpus/example3.es");
    /// Self-support through `M`.
    pub const EXAMPLE4: &str = include_str!("../../corpus/example4.es");
    /// Planning domain with initial state `p or q` and goal `{q, s}`.
    pub const PLANNING_DOMAIN: &str = include_str!("../../corpus/planning_domain.es");
    /// Dinner invitation puzzle. `checkove` in the first rule is spelled
    /// that way on purpose: no rule derives it, so `jim` is always derived.
    pub const DINNER: &str = include_str!("../../corpus/dinner.es");

    /// Every corpus program by file name.
    pub const ALL: [(&str, &str); 6] = [
        ("example1.es", EXAMPLE1),
        ("example2.es", EXAMPLE2),
        ("example3.es", EXAMPLE3),
        ("example4.es", EXAMPLE4),
        ("planning_domain.es", PLANNING_DOMAIN),
        ("dinner.es", DINNER),
    ];
}

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("planning horizon must be at least 1, got {0}")]
    Horizon(i64),
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The conformant planning module for horizon `m`.
pub fn emit_conformant_module(m: i64) -> String {
    format!(
        "#const x={m}.\n\
         step(0..x).\n\
         1{{o(A,T) : action(A)}}1 :- step(T), T<{m}.\n\
         :- M nonexecutable.\n\
         :- M inconsistent.\n\
         success :- goal({m}).\n\
         :- -K success.\n\
         :- -K o(A,T), o(A,T).\n"
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanningJob {
    pub domain_text: String,
    pub horizon: i64,
}

/// One action per step, ordered by step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SecurePlan {
    pub actions: Vec<(Term, i64)>,
}

impl fmt::Display for SecurePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (action, step) in &self.actions {
            writeln!(f, "{step}: {action}")?;
        }
        Ok(())
    }
}

impl SecurePlan {
    /// Actions `o(A,T)` that hold in every belief set of `w`.
    pub fn from_world_view(w: &WorldView) -> SecurePlan {
        let mut actions: Vec<(Term, i64)> = w
            .intersection()
            .into_iter()
            .filter(|l| !l.negated && l.atom.predicate.as_str() == "o" && l.atom.args.len() == 2)
            .filter_map(|l| match &l.atom.args[1] {
                Term::Int(t) => Some((l.atom.args[0].clone(), *t)),
                _ => None,
            })
            .collect();
        actions.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        SecurePlan { actions }
    }
}

/// The domain followed by the planning module for horizon `m`, ungrounded.
pub fn planning_program(domain: SourceProgram, m: i64) -> Result<SourceProgram, EncodingError> {
    if m < 1 {
        return Err(EncodingError::Horizon(m));
    }
    let module = parse(&emit_conformant_module(m)).map_err(FrontendError::from)?;
    Ok(SourceProgram::concat([domain, module]))
}

/// Secure plans of a planning job, one per world view.
pub fn solve_conformant(job: &PlanningJob, opts: &EngineOptions) -> Result<BTreeSet<SecurePlan>, EncodingError> {
    let domain = parse(&job.domain_text).map_err(FrontendError::from)?;
    solve_conformant_source(domain, job.horizon, opts)
}

/// [`solve_conformant`] for a domain that is already parsed.
pub fn solve_conformant_source(
    domain: SourceProgram,
    m: i64,
    opts: &EngineOptions,
) -> Result<BTreeSet<SecurePlan>, EncodingError> {
    let program = ground(&planning_program(domain, m)?).map_err(FrontendError::from)?;
    let core = to_core(&program);
    let views = core.project(&solve(&core.program, opts)?);
    Ok(views.iter().map(SecurePlan::from_world_view).collect())
}
