//! Backtracking enumeration of answer sets.
//!
//! Atoms are numbered in canonical order and the search always branches on
//! the smallest undecided atom, false first. Each node propagates to a
//! fixpoint with:
//!
//! - rule propagation: a rule whose body holds forces its last open head
//!   atom; a rule whose head is false forces its last open body literal
//!   the other way;
//! - cardinality propagation on constraints whose guard holds;
//! - an unfounded-set bound: atoms outside the least fixpoint of the
//!   rules that are not yet blocked are set false.
//!
//! Every total assignment that survives propagation is checked for
//! stability before it is reported.

use std::collections::{BTreeSet, HashMap};

use super::{AspError, GroundAspProgram};
use crate::lang::{BeliefSet, ObjectiveLiteral, Program};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Maximum number of search nodes; `None` for no limit.
    pub node_budget: Option<u64>,
    /// Atoms the disjunctive minimality check may enumerate over.
    pub minimality_cap: usize,
    /// Keep choice auxiliaries in the reported answer sets.
    pub show_aux: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: Some(10_000_000),
            minimality_cap: 20,
            show_aux: false,
        }
    }
}

pub fn answer_sets(p: &GroundAspProgram) -> Result<BTreeSet<BeliefSet>, AspError> {
    answer_sets_with(p, &SolverOptions::default())
}

pub fn answer_sets_with(p: &GroundAspProgram, opts: &SolverOptions) -> Result<BTreeSet<BeliefSet>, AspError> {
    let mut search = Search::new(p, opts);
    search.run()?;
    Ok(search.found)
}

impl GroundAspProgram {
    /// Compile `p` and enumerate its answer sets.
    pub fn solve(p: &Program, opts: &SolverOptions) -> Result<BTreeSet<BeliefSet>, AspError> {
        answer_sets_with(&GroundAspProgram::compile(p)?, opts)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Val {
    Open,
    True,
    False,
}

struct IRule {
    head: Vec<usize>,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

struct ICard {
    lower: usize,
    upper: usize,
    elements: Vec<usize>,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

struct Search<'a> {
    program: &'a GroundAspProgram,
    opts: &'a SolverOptions,
    atoms: Vec<ObjectiveLiteral>,
    rules: Vec<IRule>,
    cards: Vec<ICard>,
    /// For each atom, the rules with it in the positive body.
    pos_occ: Vec<Vec<usize>>,
    nodes: u64,
    found: BTreeSet<BeliefSet>,
}

impl<'a> Search<'a> {
    fn new(program: &'a GroundAspProgram, opts: &'a SolverOptions) -> Self {
        let atoms: Vec<ObjectiveLiteral> = program.literals().into_iter().collect();
        let index: HashMap<&ObjectiveLiteral, usize> = atoms.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let ids = |ls: &[ObjectiveLiteral]| -> Vec<usize> {
            let mut v: Vec<usize> = ls.iter().map(|l| index[l]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut rules: Vec<IRule> = program
            .rules
            .iter()
            .map(|r| IRule {
                head: ids(r.head_literals()),
                pos: ids(&r.body_pos),
                neg: ids(&r.body_neg),
            })
            .collect();
        for (i, l) in atoms.iter().enumerate() {
            if l.negated {
                if let Some(&j) = index.get(&l.complement()) {
                    rules.push(IRule {
                        head: Vec::new(),
                        pos: vec![i, j],
                        neg: Vec::new(),
                    });
                }
            }
        }
        let cards = program
            .cardinality_constraints
            .iter()
            .map(|c| ICard {
                lower: c.lower,
                upper: c.upper,
                elements: ids(&c.elements),
                pos: ids(&c.guard_pos),
                neg: ids(&c.guard_neg),
            })
            .collect();
        let mut pos_occ = vec![Vec::new(); atoms.len()];
        for (ri, r) in rules.iter().enumerate() {
            for &a in &r.pos {
                pos_occ[a].push(ri);
            }
        }
        Search {
            program,
            opts,
            atoms,
            rules,
            cards,
            pos_occ,
            nodes: 0,
            found: BTreeSet::new(),
        }
    }

    fn run(&mut self) -> Result<(), AspError> {
        // Explicit stack instead of recursion: programs can have many atoms.
        let mut stack = vec![vec![Val::Open; self.atoms.len()]];
        while let Some(mut values) = stack.pop() {
            self.nodes += 1;
            if let Some(budget) = self.opts.node_budget {
                if self.nodes > budget {
                    return Err(AspError::Budget(budget));
                }
            }
            if !self.propagate(&mut values) {
                continue;
            }
            match values.iter().position(|v| *v == Val::Open) {
                Some(a) => {
                    let mut t = values.clone();
                    t[a] = Val::True;
                    values[a] = Val::False;
                    // LIFO: the false branch is explored first.
                    stack.push(t);
                    stack.push(values);
                }
                None => self.report(&values)?,
            }
        }
        Ok(())
    }

    fn report(&mut self, values: &[Val]) -> Result<(), AspError> {
        let x: BeliefSet = self
            .atoms
            .iter()
            .zip(values)
            .filter(|(_, v)| **v == Val::True)
            .map(|(l, _)| l.clone())
            .collect();
        if super::check_answer_set(self.program, &x, self.opts.minimality_cap)? {
            let x = if self.opts.show_aux { x } else { x.without_aux() };
            self.found.insert(x);
        }
        Ok(())
    }

    fn propagate(&self, v: &mut [Val]) -> bool {
        loop {
            let mut changed = false;
            for r in &self.rules {
                match self.propagate_rule(r, v) {
                    None => return false,
                    Some(c) => changed |= c,
                }
            }
            for c in &self.cards {
                match propagate_card(c, v) {
                    None => return false,
                    Some(ch) => changed |= ch,
                }
            }
            match self.unfounded(v) {
                None => return false,
                Some(c) => changed |= c,
            }
            if !changed {
                return true;
            }
        }
    }

    /// `None` on conflict, otherwise whether anything was assigned.
    fn propagate_rule(&self, r: &IRule, v: &mut [Val]) -> Option<bool> {
        if r.pos.iter().any(|&a| v[a] == Val::False) || r.neg.iter().any(|&a| v[a] == Val::True) {
            return Some(false);
        }
        if r.head.iter().any(|&a| v[a] == Val::True) {
            return Some(false);
        }
        let open_head: Vec<usize> = r.head.iter().copied().filter(|&a| v[a] == Val::Open).collect();
        let open_pos = r.pos.iter().copied().filter(|&a| v[a] == Val::Open);
        let open_neg = r.neg.iter().copied().filter(|&a| v[a] == Val::Open);
        let open_body: Vec<(usize, bool)> = open_pos.map(|a| (a, true)).chain(open_neg.map(|a| (a, false))).collect();
        if open_body.is_empty() {
            return match open_head.len() {
                0 => None,
                1 => {
                    v[open_head[0]] = Val::True;
                    Some(true)
                }
                _ => Some(false),
            };
        }
        if open_head.is_empty() && open_body.len() == 1 {
            let (a, positive) = open_body[0];
            v[a] = if positive { Val::False } else { Val::True };
            return Some(true);
        }
        Some(false)
    }

    /// Atoms that cannot be derived from rules not yet blocked are false.
    fn unfounded(&self, v: &mut [Val]) -> Option<bool> {
        let n = self.atoms.len();
        let mut in_bound = vec![false; n];
        let mut missing: Vec<usize> = Vec::with_capacity(self.rules.len());
        let mut queue = Vec::new();
        for r in &self.rules {
            let blocked = r.pos.iter().any(|&a| v[a] == Val::False) || r.neg.iter().any(|&a| v[a] == Val::True);
            missing.push(if blocked { usize::MAX } else { r.pos.len() });
        }
        let fire = |ri: usize, in_bound: &mut Vec<bool>, queue: &mut Vec<usize>| {
            for &h in &self.rules[ri].head {
                if v[h] != Val::False && !in_bound[h] {
                    in_bound[h] = true;
                    queue.push(h);
                }
            }
        };
        for (ri, m) in missing.iter().enumerate() {
            if *m == 0 {
                fire(ri, &mut in_bound, &mut queue);
            }
        }
        while let Some(a) = queue.pop() {
            for &ri in &self.pos_occ[a] {
                if missing[ri] == usize::MAX {
                    continue;
                }
                missing[ri] -= 1;
                if missing[ri] == 0 {
                    fire(ri, &mut in_bound, &mut queue);
                }
            }
        }
        let mut changed = false;
        for a in 0..n {
            if !in_bound[a] {
                match v[a] {
                    Val::True => return None,
                    Val::Open => {
                        v[a] = Val::False;
                        changed = true;
                    }
                    Val::False => {}
                }
            }
        }
        Some(changed)
    }
}

fn propagate_card(c: &ICard, v: &mut [Val]) -> Option<bool> {
    let guard_true = c.pos.iter().all(|&a| v[a] == Val::True) && c.neg.iter().all(|&a| v[a] == Val::False);
    if !guard_true {
        return Some(false);
    }
    let t = c.elements.iter().filter(|&&a| v[a] == Val::True).count();
    let open: Vec<usize> = c.elements.iter().copied().filter(|&a| v[a] == Val::Open).collect();
    if t > c.upper || t + open.len() < c.lower {
        return None;
    }
    if open.is_empty() {
        return Some(false);
    }
    if t == c.upper {
        open.iter().for_each(|&a| v[a] = Val::False);
        return Some(true);
    }
    if t + open.len() == c.lower {
        open.iter().for_each(|&a| v[a] = Val::True);
        return Some(true);
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::brute_force_answer_sets;
    use crate::frontend::load;
    use crate::lang::Atom;

    fn solve(text: &str) -> BTreeSet<BeliefSet> {
        answer_sets(&GroundAspProgram::compile(&load(text).unwrap()).unwrap()).unwrap()
    }

    fn set(lits: &[&str]) -> BeliefSet {
        lits.iter()
            .map(|s| match s.strip_prefix('-') {
                Some(r) => ObjectiveLiteral::neg(Atom::prop(r)),
                None => ObjectiveLiteral::prop(s),
            })
            .collect()
    }

    #[test]
    fn disjunction() {
        assert_eq!(solve("p or q."), [set(&["p"]), set(&["q"])].into());
    }

    #[test]
    fn constraint_kills_only_model() {
        assert!(solve("p. :- p.").is_empty());
    }

    #[test]
    fn empty_program_has_empty_answer_set() {
        assert_eq!(solve(""), [BeliefSet::new()].into());
    }

    #[test]
    fn even_loop() {
        assert_eq!(solve("p :- not q. q :- not p."), [set(&["p"]), set(&["q"])].into());
    }

    #[test]
    fn odd_loop_has_none() {
        assert!(solve("p :- not p.").is_empty());
    }

    #[test]
    fn positive_loop_is_unfounded() {
        assert_eq!(solve("p :- q. q :- p."), [BeliefSet::new()].into());
    }

    #[test]
    fn classical_negation_consistency() {
        assert!(solve("p. -p.").is_empty());
        assert_eq!(solve("p :- not -p. -p :- not p."), [set(&["p"]), set(&["-p"])].into());
    }

    #[test]
    fn disjunctive_with_shared_support() {
        assert_eq!(solve("p or q. p :- q. q :- p."), [set(&["p", "q"])].into());
    }

    #[test]
    fn choice_with_bounds() {
        assert_eq!(solve("1{p, q}1."), [set(&["p"]), set(&["q"])].into());
        assert_eq!(solve("{p}."), [set(&[]), set(&["p"])].into());
    }

    #[test]
    fn aux_exposed_on_request() {
        let p = GroundAspProgram::compile(&load("{p}.").unwrap()).unwrap();
        let opts = SolverOptions {
            show_aux: true,
            ..SolverOptions::default()
        };
        let sets = answer_sets_with(&p, &opts).unwrap();
        assert!(sets.iter().any(|s| s.iter().any(ObjectiveLiteral::is_aux)));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let p = GroundAspProgram::compile(&load("{a}. {b}. {c}. {d}.").unwrap()).unwrap();
        let opts = SolverOptions {
            node_budget: Some(3),
            ..SolverOptions::default()
        };
        assert!(matches!(answer_sets_with(&p, &opts), Err(AspError::Budget(3))));
    }

    #[test]
    fn agrees_with_brute_force_on_mixed_program() {
        let text = "a or b :- not c. c :- not d. d :- not c. e :- a, not b. :- e, d. 1{f, g}2 :- c.";
        let p = GroundAspProgram::compile(&load(text).unwrap()).unwrap();
        assert_eq!(answer_sets(&p).unwrap(), brute_force_answer_sets(&p, 20).unwrap());
    }
}
