//! Delegating answer-set computation to another program.
//!
//! The command template is run through `sh -c`. `{input}` is replaced by the
//! path of a temporary file holding the program; without the placeholder the
//! path is appended. The command must print one answer set per line as
//! whitespace-separated literals, with `-` marking classical negation. An
//! empty line stands for the empty answer set. The exit status is ignored
//! unless the command also printed nothing.
//!
//! Every reported set is checked. If any is rejected the built-in solver is
//! used instead and the rejection is reported alongside its result.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use super::{answer_sets_with, check_answer_set, AspError, GroundAspProgram, SolverOptions};
use crate::frontend::{ground, parse_with, ParseOptions};
use crate::lang::{BeliefSet, Head, Program};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSolver { command: command.into() }
    }

    fn command_line(&self, input: &str) -> String {
        if self.command.contains("{input}") {
            self.command.replace("{input}", input)
        } else {
            format!("{} {}", self.command, input)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalOutcome {
    /// Every set reported by the external command is an answer set.
    Accepted(BTreeSet<BeliefSet>),
    /// The external command reported `rejected`, which is not an answer set.
    FellBack {
        rejected: BeliefSet,
        answer_sets: BTreeSet<BeliefSet>,
    },
}

impl ExternalOutcome {
    pub fn answer_sets(&self) -> &BTreeSet<BeliefSet> {
        match self {
            ExternalOutcome::Accepted(sets) => sets,
            ExternalOutcome::FellBack { answer_sets, .. } => answer_sets,
        }
    }
}

/// Answer sets of a subjective-free program, computed by `solver`.
pub fn external_answer_sets(
    p: &Program,
    solver: &ExternalSolver,
    opts: &SolverOptions,
) -> Result<ExternalOutcome, AspError> {
    let compiled = GroundAspProgram::compile(p)?;
    let mut file = tempfile::Builder::new()
        .suffix(".es")
        .tempfile()
        .map_err(|e| AspError::External(format!("cannot create input file: {e}")))?;
    write!(file, "{p}").map_err(|e| AspError::External(format!("cannot write input file: {e}")))?;
    file.flush().map_err(|e| AspError::External(e.to_string()))?;
    let path = file.path().to_string_lossy().into_owned();

    let output = Command::new("sh")
        .arg("-c")
        .arg(solver.command_line(&path))
        .output()
        .map_err(|e| AspError::External(format!("cannot run `{}`: {e}", solver.command)))?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    if !output.status.success() && stdout.trim().is_empty() {
        let stderr = String::from_utf8_lossy(&output.stderr);
        let mut message = format!("`{}` failed with {}", solver.command, output.status);
        if !stderr.trim().is_empty() {
            message = format!("{message}: {}", stderr.trim());
        }
        return Err(AspError::External(message));
    }

    let mut sets = BTreeSet::new();
    for line in stdout.lines() {
        sets.insert(parse_answer_set(line)?);
    }
    for s in &sets {
        let full = compiled.complete_aux(s);
        if !check_answer_set(&compiled, &full, opts.minimality_cap)? {
            return Ok(ExternalOutcome::FellBack {
                rejected: s.clone(),
                answer_sets: answer_sets_with(&compiled, opts)?,
            });
        }
    }
    Ok(ExternalOutcome::Accepted(sets))
}

fn parse_answer_set(line: &str) -> Result<BeliefSet, AspError> {
    let text: String = line.split_whitespace().map(|l| format!("{l}.\n")).collect();
    let unparseable = |msg: String| AspError::External(format!("unparseable answer set `{line}`: {msg}"));
    let source = parse_with(&text, ParseOptions { allow_reserved: true }).map_err(|e| unparseable(e.to_string()))?;
    let program = ground(&source).map_err(|e| unparseable(e.to_string()))?;
    let mut set = BTreeSet::new();
    for r in &program.rules {
        match (&r.head, r.body_is_empty()) {
            (Head::Disjunction(h), true) if h.len() == 1 => {
                set.insert(h[0].clone());
            }
            _ => return Err(unparseable(format!("`{r}` is not a literal"))),
        }
    }
    Ok(BeliefSet(set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load;
    use crate::lang::ObjectiveLiteral;

    fn stub(output: &str) -> ExternalSolver {
        ExternalSolver::new(format!("printf -- '{output}' #"))
    }

    fn set(lits: &[&str]) -> BeliefSet {
        lits.iter().map(|s| ObjectiveLiteral::prop(s)).collect()
    }

    #[test]
    fn accepts_correct_output() {
        let p = load("p or q.").unwrap();
        let out = external_answer_sets(&p, &stub("p\\nq\\n"), &SolverOptions::default()).unwrap();
        assert_eq!(out, ExternalOutcome::Accepted([set(&["p"]), set(&["q"])].into()));
    }

    #[test]
    fn rejects_wrong_output_and_falls_back() {
        let p = load("p or q.").unwrap();
        let out = external_answer_sets(&p, &stub("p q\\n"), &SolverOptions::default()).unwrap();
        assert_eq!(
            out,
            ExternalOutcome::FellBack {
                rejected: set(&["p", "q"]),
                answer_sets: [set(&["p"]), set(&["q"])].into(),
            }
        );
    }

    #[test]
    fn empty_line_is_empty_answer_set() {
        let p = load("").unwrap();
        let out = external_answer_sets(&p, &stub("\\n"), &SolverOptions::default()).unwrap();
        assert_eq!(out.answer_sets(), &[BeliefSet::new()].into());
    }

    #[test]
    fn classical_negation_prefix() {
        let p = load("-p.").unwrap();
        let out = external_answer_sets(&p, &stub("-p\\n"), &SolverOptions::default()).unwrap();
        assert!(matches!(out, ExternalOutcome::Accepted(_)));
    }

    #[test]
    fn input_placeholder_is_substituted() {
        let p = load("a.").unwrap();
        let solver = ExternalSolver::new("grep -q 'a\\.' {input} && echo a");
        let out = external_answer_sets(&p, &solver, &SolverOptions::default()).unwrap();
        assert_eq!(out, ExternalOutcome::Accepted([set(&["a"])].into()));
    }

    #[test]
    fn missing_command_is_a_process_failure() {
        let p = load("a.").unwrap();
        let solver = ExternalSolver::new("/nonexistent/solver-binary");
        assert!(matches!(
            external_answer_sets(&p, &solver, &SolverOptions::default()),
            Err(AspError::External(_))
        ));
    }

    #[test]
    fn garbage_output_is_unparseable() {
        let p = load("a.").unwrap();
        assert!(matches!(
            external_answer_sets(&p, &stub("a :- b\\n"), &SolverOptions::default()),
            Err(AspError::External(_))
        ));
    }
}
