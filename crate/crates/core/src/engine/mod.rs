//! World views of core-form programs.
//!
//! A world view `W` is a non-empty collection of belief sets that equals
//! the set of answer sets of the epistemic reduct of the program with
//! respect to `W`. The solvers guess, for every literal under `K` or `-K`,
//! whether it belongs to every belief set, compute the answer sets of the
//! program under that guess and keep the guess if the answer sets confirm
//! it.
//!
//! [`solve_basic`] enumerates guesses directly. [`solve`] first shrinks the
//! program with [`preprocess`], which usually removes many epistemic
//! literals, and runs guesses in parallel.

mod oracle;
mod preprocess;

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

pub use oracle::{brute_force_world_views, gelfond_world_views_oracle, DEFAULT_ORACLE_CAP};
pub use preprocess::{lower_bound, preprocess, simplify, Contradiction, PartialModel};

use crate::asp::{external_answer_sets, AspError, ExternalSolver, GroundAspProgram, SolverOptions};
use crate::lang::{BeliefSet, Modality, ObjectiveLiteral, Program, Rule, SubjectiveLiteral, WorldView};
use crate::transform::TransformError;

/// Largest number of epistemic literals the solvers will enumerate over.
pub const MAX_EPISTEMIC_LITERALS: usize = 30;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Asp(#[from] AspError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("{count} epistemic literals exceed the limit of {max}")]
    TooManyEpistemicLiterals { count: usize, max: usize },
    #[error("oracle limited to {cap} literals, program has {literals}")]
    OracleCap { literals: usize, cap: usize },
    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

impl EngineError {
    pub fn is_resource(&self) -> bool {
        match self {
            EngineError::Asp(e) => e.is_resource(),
            EngineError::TooManyEpistemicLiterals { .. } | EngineError::OracleCap { .. } => true,
            EngineError::Transform(_) | EngineError::Threads(_) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Worker threads for evaluating guesses; 1 runs on the calling thread.
    pub jobs: usize,
    /// Skip preprocessing and enumerate every guess of the input program.
    pub basic: bool,
    pub solver: SolverOptions,
    /// Compute answer sets with an external command instead of the
    /// built-in solver.
    pub external: Option<ExternalSolver>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            jobs: 1,
            basic: false,
            solver: SolverOptions::default(),
            external: None,
        }
    }
}

fn answer_sets_of(p: &Program, opts: &EngineOptions) -> Result<BTreeSet<BeliefSet>, EngineError> {
    match &opts.external {
        Some(solver) => Ok(external_answer_sets(p, solver, &opts.solver)?.answer_sets().clone()),
        None => Ok(GroundAspProgram::solve(p, &opts.solver)?),
    }
}

/// A guess for every epistemic literal: in every belief set, or not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub believed: BTreeSet<ObjectiveLiteral>,
    pub not_believed: BTreeSet<ObjectiveLiteral>,
}

/// Literals occurring under `K` or `-K`.
pub fn epistemic_literals(p: &Program) -> BTreeSet<ObjectiveLiteral> {
    p.rules
        .iter()
        .flat_map(|r| r.body_k().chain(r.body_not_k()))
        .cloned()
        .collect()
}

/// Truth of a subjective literal in a world view. All eight forms are
/// accepted; `W` is assumed non-empty.
pub fn satisfies(w: &WorldView, s: &SubjectiveLiteral) -> bool {
    let holds = |b: &BeliefSet| b.contains(&s.literal) != s.inner_negated;
    match s.modality {
        Modality::K => w.iter().all(holds),
        Modality::NotK => !w.iter().all(holds),
        Modality::M => w.iter().any(holds),
        Modality::NotM => !w.iter().any(holds),
    }
}

/// Drop rules with a subjective literal for which `keep` is false, then
/// drop `-K l` and turn `K l` into `l`.
fn reduct_by(p: &Program, keep: impl Fn(&SubjectiveLiteral) -> bool) -> Program {
    let rules = p
        .rules
        .iter()
        .filter(|r| r.body_subj.iter().all(&keep))
        .map(|r| {
            let mut out = Rule {
                body_subj: Vec::new(),
                ..r.clone()
            };
            out.body_pos.extend(r.body_k().cloned());
            out
        })
        .collect();
    Program {
        rules,
        constants: p.constants.clone(),
    }
}

/// Reduct of a core-form program with respect to a world view.
pub fn epistemic_reduct(p: &Program, w: &WorldView) -> Program {
    reduct_by(p, |s| satisfies(w, s))
}

/// Reduct of a core-form program with respect to a guess.
pub fn assignment_reduct(p: &Program, a: &Assignment) -> Program {
    reduct_by(p, |s| match s.modality {
        Modality::K => !a.not_believed.contains(&s.literal),
        Modality::NotK => !a.believed.contains(&s.literal),
        _ => true,
    })
}

/// Does a collection of answer sets confirm a guess?
pub fn assignment_consistent(w: &BTreeSet<BeliefSet>, a: &Assignment) -> bool {
    let Some(first) = w.iter().next() else {
        return false;
    };
    let common: BTreeSet<&ObjectiveLiteral> = first.iter().filter(|l| w.iter().all(|b| b.contains(l))).collect();
    a.believed.iter().all(|l| common.contains(l)) && !a.not_believed.iter().any(|l| common.contains(l))
}

pub fn is_world_view(p: &Program, w: &WorldView, opts: &SolverOptions) -> Result<bool, EngineError> {
    if w.is_empty() {
        return Ok(false);
    }
    let sets = GroundAspProgram::solve(&epistemic_reduct(p, w), opts)?;
    Ok(sets == w.0)
}

/// Enumerate every guess over the epistemic literals of `p`.
pub fn solve_basic(p: &Program, opts: &EngineOptions) -> Result<BTreeSet<WorldView>, EngineError> {
    for_each_assignment(p, opts, |a| {
        let sets = answer_sets_of(&assignment_reduct(p, a), opts)?;
        Ok(assignment_consistent(&sets, a).then(|| WorldView(sets)))
    })
}

/// Preprocess, then enumerate guesses over the epistemic literals that
/// remain, simplifying each reduct again before solving it.
pub fn solve(p: &Program, opts: &EngineOptions) -> Result<BTreeSet<WorldView>, EngineError> {
    if opts.basic {
        return solve_basic(p, opts);
    }
    let Ok((simplified, _)) = preprocess(p) else {
        return Ok(BTreeSet::new());
    };
    for_each_assignment(&simplified, opts, |a| {
        let Ok((reduct, _)) = preprocess(&assignment_reduct(&simplified, a)) else {
            return Ok(None);
        };
        let sets = answer_sets_of(&reduct, opts)?;
        Ok(assignment_consistent(&sets, a).then(|| WorldView(sets)))
    })
}

/// Guesses in canonical order: bit `i` of the counter decides the `i`-th
/// epistemic literal, set meaning believed.
fn assignment(lits: &[ObjectiveLiteral], mask: u64) -> Assignment {
    let mut a = Assignment::default();
    for (i, l) in lits.iter().enumerate() {
        if mask & (1 << i) != 0 {
            a.believed.insert(l.clone());
        } else {
            a.not_believed.insert(l.clone());
        }
    }
    a
}

fn for_each_assignment<F>(p: &Program, opts: &EngineOptions, eval: F) -> Result<BTreeSet<WorldView>, EngineError>
where
    F: Fn(&Assignment) -> Result<Option<WorldView>, EngineError> + Sync,
{
    let lits: Vec<ObjectiveLiteral> = epistemic_literals(p).into_iter().collect();
    if lits.len() > MAX_EPISTEMIC_LITERALS {
        return Err(EngineError::TooManyEpistemicLiterals {
            count: lits.len(),
            max: MAX_EPISTEMIC_LITERALS,
        });
    }
    let count = 1u64 << lits.len();
    let results: Vec<Result<Option<WorldView>, EngineError>> = if opts.jobs <= 1 {
        let mut out = Vec::new();
        for mask in 0..count {
            let r = eval(&assignment(&lits, mask));
            let failed = r.is_err();
            out.push(r);
            if failed {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| EngineError::Threads(e.to_string()))?;
        pool.install(|| (0..count).into_par_iter().map(|mask| eval(&assignment(&lits, mask))).collect())
    };
    let mut views = BTreeSet::new();
    for r in results {
        if let Some(w) = r? {
            views.insert(w);
        }
    }
    Ok(views)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load;
    use crate::lang::Term;
    use crate::transform::to_core;

    fn lit(s: &str) -> ObjectiveLiteral {
        ObjectiveLiteral::prop(s)
    }

    fn bs(lits: &[&str]) -> BeliefSet {
        lits.iter().map(|l| lit(l)).collect()
    }

    fn wv(sets: &[&[&str]]) -> WorldView {
        sets.iter().map(|s| bs(s)).collect()
    }

    fn assign(t: &[&str], f: &[&str]) -> Assignment {
        Assignment {
            believed: t.iter().map(|l| lit(l)).collect(),
            not_believed: f.iter().map(|l| lit(l)).collect(),
        }
    }

    fn show(p: &Program) -> String {
        p.rules.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    const PI1: &str = "p or q. p :- -K q. q :- -K p.";

    #[test]
    fn epistemic_literal_examples() {
        assert_eq!(epistemic_literals(&load(PI1).unwrap()), [lit("p"), lit("q")].into());
        assert!(epistemic_literals(&load("p :- q.").unwrap()).is_empty());
        assert_eq!(epistemic_literals(&load("p :- K q, -K q.").unwrap()), [lit("q")].into());
    }

    #[test]
    fn satisfaction_examples() {
        let w = wv(&[&["p"]]);
        assert!(satisfies(&w, &SubjectiveLiteral::k(lit("p"))));
        assert!(satisfies(&w, &SubjectiveLiteral::not_k(lit("q"))));
        assert!(!satisfies(&wv(&[&["p"], &["q"]]), &SubjectiveLiteral::k(lit("p"))));
    }

    #[test]
    fn satisfaction_of_derived_forms() {
        let w = wv(&[&["p"], &[]]);
        let s = |m, n| SubjectiveLiteral::new(m, n, lit("p"));
        assert!(satisfies(&w, &s(Modality::M, false)));
        assert!(!satisfies(&w, &s(Modality::NotM, false)));
        assert!(satisfies(&w, &s(Modality::M, true)));
        assert!(!satisfies(&w, &s(Modality::K, true)));
        assert!(satisfies(&w, &s(Modality::NotK, true)));
        assert!(!satisfies(&w, &s(Modality::NotM, true)));
    }

    #[test]
    fn reduct_examples() {
        let p = load(PI1).unwrap();
        assert_eq!(show(&epistemic_reduct(&p, &wv(&[&["p"]]))), "p or q. p.");
        let plain = load("a :- not b.").unwrap();
        assert_eq!(epistemic_reduct(&plain, &wv(&[&["a"]])), plain);
        assert!(epistemic_reduct(&load("p :- K p.").unwrap(), &wv(&[&[]])).rules.is_empty());
    }

    #[test]
    fn world_view_membership() {
        let p = load(PI1).unwrap();
        let opts = SolverOptions::default();
        assert!(is_world_view(&p, &wv(&[&["p"]]), &opts).unwrap());
        assert!(!is_world_view(&p, &wv(&[&["p", "q"]]), &opts).unwrap());
        assert!(is_world_view(&Program::default(), &wv(&[&[]]), &opts).unwrap());
    }

    #[test]
    fn assignment_reduct_examples() {
        let p = load(PI1).unwrap();
        let r = assignment_reduct(&p, &assign(&["q"], &["p"]));
        assert_eq!(show(&r), "p or q. q.");
        let sets = GroundAspProgram::solve(&r, &SolverOptions::default()).unwrap();
        assert_eq!(sets, [bs(&["q"])].into());

        let plain = load("a :- not b.").unwrap();
        assert_eq!(assignment_reduct(&plain, &assign(&["x"], &[])), plain);
        assert_eq!(show(&assignment_reduct(&load("p :- K q.").unwrap(), &assign(&["q"], &[]))), "p :- q.");
    }

    #[test]
    fn assignment_consistency_examples() {
        assert!(assignment_consistent(&[bs(&["q"])].into(), &assign(&["q"], &["p"])));
        assert!(!assignment_consistent(&[bs(&["p", "q"])].into(), &assign(&[], &["p", "q"])));
        assert!(!assignment_consistent(&BTreeSet::new(), &assign(&[], &[])));
    }

    fn both(p: &Program) -> BTreeSet<WorldView> {
        let basic = solve_basic(p, &EngineOptions::default()).unwrap();
        let fast = solve(p, &EngineOptions::default()).unwrap();
        assert_eq!(basic, fast);
        basic
    }

    #[test]
    fn example_one() {
        assert_eq!(both(&load(PI1).unwrap()), [wv(&[&["p"]]), wv(&[&["q"]])].into());
    }

    #[test]
    fn example_four_before_projection() {
        let core = to_core(&load("p :- M p.").unwrap());
        let views = both(&core.program);
        assert_eq!(views, [wv(&[&["aux_k_p"]]), wv(&[&["p"]])].into());
        assert_eq!(core.project(&views), [wv(&[&[]]), wv(&[&["p"]])].into());
    }

    #[test]
    fn single_fact() {
        assert_eq!(both(&load("p.").unwrap()), [wv(&[&["p"]])].into());
    }

    #[test]
    fn inconsistent_program_has_no_world_views() {
        assert!(both(&load("p. :- p.").unwrap()).is_empty());
        assert!(both(&load("p :- -K p.").unwrap()).is_empty());
    }

    #[test]
    fn examples_two_and_three() {
        let core = to_core(&load("p :- -M q. q :- -K p.").unwrap());
        assert_eq!(core.project(&both(&core.program)), [wv(&[&["q"]]), wv(&[&["p"]])].into());
        let core = to_core(&load("p :- not q, M q. q :- not p, M q.").unwrap());
        assert_eq!(core.project(&both(&core.program)), [wv(&[&[]]), wv(&[&["p"], &["q"]])].into());
    }

    #[test]
    fn parallel_matches_sequential() {
        let p = to_core(&load("a or b. c :- M a. d :- M b. e :- -K c, not d. f :- K e.").unwrap()).program;
        let seq = solve(&p, &EngineOptions::default()).unwrap();
        let par = solve(
            &p,
            &EngineOptions {
                jobs: 4,
                ..EngineOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq, solve_basic(&p, &EngineOptions::default()).unwrap());
    }

    #[test]
    fn budget_error_propagates() {
        let p = load("{a; b; c; d}. e :- -K a.").unwrap();
        let opts = EngineOptions {
            solver: SolverOptions {
                node_budget: Some(1),
                ..SolverOptions::default()
            },
            ..EngineOptions::default()
        };
        let err = solve_basic(&p, &opts).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn non_ground_terms_survive() {
        let p = load("f(1). g(X) :- f(X), -K h(X).").unwrap();
        let views = both(&p);
        let expected = BeliefSet::from_iter([
            ObjectiveLiteral::pos(crate::lang::Atom::new("f", vec![Term::Int(1)])),
            ObjectiveLiteral::pos(crate::lang::Atom::new("g", vec![Term::Int(1)])),
        ]);
        assert_eq!(views, [WorldView::from_iter([expected])].into());
    }
}
