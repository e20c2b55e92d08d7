//! Grounding of source programs.
//!
//! Non-ground rules are instantiated by matching their positive objective
//! body against the set of *possible* atoms: the least fixpoint of the
//! program with default negation and subjective literals ignored and every
//! disjunct and choice element treated as derivable. An instance whose
//! positive body cannot hold in any belief set is never produced.
//! Variable-free rules pass through unchanged (apart from evaluating
//! arithmetic and comparisons), so grounding an already ground program is
//! the identity.
//!
//! Choice-element conditions are matched against the *domain* facts only:
//! the least model of the definite, negation-free fragment.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::ast::*;
use crate::lang::{Atom, ChoiceHead, Head, ObjectiveLiteral, Program, Rule, SubjectiveLiteral, Symbol, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("unsafe variable {variable} in rule `{rule}`")]
    Unsafe { variable: String, rule: String },
    #[error("unbound constant `{0}`")]
    UnboundConstant(String),
    #[error("arithmetic on non-integer term `{0}`")]
    NonInteger(String),
    #[error("interval `{0}` outside a fact")]
    IntervalOutsideFact(String),
    #[error("choice bound `{0}` is not a non-negative integer")]
    BadBound(String),
}

type Subst = BTreeMap<Symbol, Term>;
type Key = (bool, Symbol, usize);

/// Ground atoms indexed by sign, predicate and arity.
#[derive(Default)]
struct AtomIndex {
    by_key: HashMap<Key, BTreeSet<Vec<Term>>>,
}

impl AtomIndex {
    fn insert(&mut self, l: &ObjectiveLiteral) -> bool {
        self.by_key
            .entry((l.negated, l.atom.predicate.clone(), l.atom.args.len()))
            .or_default()
            .insert(l.atom.args.clone())
    }

    fn candidates(&self, l: &SourceLiteral) -> impl Iterator<Item = &Vec<Term>> {
        self.by_key
            .get(&(l.negated, l.atom.predicate.clone(), l.atom.args.len()))
            .into_iter()
            .flatten()
    }
}

pub fn ground(source: &SourceProgram) -> Result<Program, GroundError> {
    let constants: BTreeMap<Symbol, i64> = source.constants.iter().cloned().collect();
    let mut rules = Vec::new();
    for r in &source.rules {
        let r = substitute_rule(r, &constants);
        check_safety(&r)?;
        rules.extend(expand_intervals(r)?);
    }

    let domain = fixpoint(&rules, &AtomIndex::default(), true)?;
    let possible = fixpoint(&rules, &domain, false)?;

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in &rules {
        for g in instances(r, &possible, &domain)? {
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    Ok(Program {
        rules: out,
        constants,
    })
}

fn substitute_term(t: &SourceTerm, c: &BTreeMap<Symbol, i64>) -> SourceTerm {
    match t {
        SourceTerm::Const(s) => match c.get(s) {
            Some(v) => SourceTerm::Int(*v),
            None => t.clone(),
        },
        SourceTerm::Func(f, args) => SourceTerm::Func(f.clone(), args.iter().map(|a| substitute_term(a, c)).collect()),
        SourceTerm::Arith(op, l, r) => {
            SourceTerm::Arith(*op, Box::new(substitute_term(l, c)), Box::new(substitute_term(r, c)))
        }
        SourceTerm::Interval(l, r) => {
            SourceTerm::Interval(Box::new(substitute_term(l, c)), Box::new(substitute_term(r, c)))
        }
        SourceTerm::Int(_) | SourceTerm::Var(_) => t.clone(),
    }
}

fn substitute_literal(l: &SourceLiteral, c: &BTreeMap<Symbol, i64>) -> SourceLiteral {
    SourceLiteral {
        atom: SourceAtom {
            predicate: l.atom.predicate.clone(),
            args: l.atom.args.iter().map(|a| substitute_term(a, c)).collect(),
        },
        negated: l.negated,
    }
}

fn substitute_rule(r: &SourceRule, c: &BTreeMap<Symbol, i64>) -> SourceRule {
    let head = match &r.head {
        SourceHead::Disjunction(ls) => SourceHead::Disjunction(ls.iter().map(|l| substitute_literal(l, c)).collect()),
        SourceHead::Choice(ch) => SourceHead::Choice(SourceChoice {
            lower: ch.lower.as_ref().map(|t| substitute_term(t, c)),
            upper: ch.upper.as_ref().map(|t| substitute_term(t, c)),
            elements: ch
                .elements
                .iter()
                .map(|e| SourceChoiceElement {
                    literal: substitute_literal(&e.literal, c),
                    condition: e.condition.iter().map(|l| substitute_literal(l, c)).collect(),
                })
                .collect(),
        }),
    };
    let body = r
        .body
        .iter()
        .map(|b| match b {
            BodyLiteral::Pos(l) => BodyLiteral::Pos(substitute_literal(l, c)),
            BodyLiteral::Naf(l) => BodyLiteral::Naf(substitute_literal(l, c)),
            BodyLiteral::Subj {
                modality,
                inner_negated,
                literal,
            } => BodyLiteral::Subj {
                modality: *modality,
                inner_negated: *inner_negated,
                literal: substitute_literal(literal, c),
            },
            BodyLiteral::Cmp(op, l, r) => BodyLiteral::Cmp(*op, substitute_term(l, c), substitute_term(r, c)),
        })
        .collect();
    SourceRule { head, body }
}

/// Every variable must be bound by a positive objective body literal
/// (outside arithmetic); choice elements may also bind through their
/// condition.
fn check_safety(r: &SourceRule) -> Result<(), GroundError> {
    let mut bound = Vec::new();
    for b in &r.body {
        if let BodyLiteral::Pos(l) = b {
            l.binding_vars(&mut bound);
        }
    }
    let bound: BTreeSet<Symbol> = bound.into_iter().collect();
    let unsafe_var = |v: &Symbol| GroundError::Unsafe {
        variable: v.to_string(),
        rule: r.to_string(),
    };

    let mut used = Vec::new();
    for b in &r.body {
        match b {
            BodyLiteral::Pos(l) | BodyLiteral::Naf(l) => l.vars(&mut used),
            BodyLiteral::Subj { literal, .. } => literal.vars(&mut used),
            BodyLiteral::Cmp(_, l, r) => {
                l.vars(&mut used);
                r.vars(&mut used);
            }
        }
    }
    match &r.head {
        SourceHead::Disjunction(ls) => ls.iter().for_each(|l| l.vars(&mut used)),
        SourceHead::Choice(c) => {
            for t in c.lower.iter().chain(&c.upper) {
                t.vars(&mut used);
            }
            for e in &c.elements {
                let mut local = Vec::new();
                e.condition.iter().for_each(|l| l.binding_vars(&mut local));
                let mut inner = Vec::new();
                e.literal.vars(&mut inner);
                e.condition.iter().for_each(|l| l.vars(&mut inner));
                if let Some(v) = inner.iter().find(|v| !bound.contains(*v) && !local.contains(v)) {
                    return Err(unsafe_var(v));
                }
            }
        }
    }
    match used.iter().find(|v| !bound.contains(*v)) {
        Some(v) => Err(unsafe_var(v)),
        None => Ok(()),
    }
}

/// Expand `p(0..n).` into one fact per integer; intervals anywhere else
/// are rejected.
fn expand_intervals(r: SourceRule) -> Result<Vec<SourceRule>, GroundError> {
    let is_fact = r.body.is_empty() && matches!(&r.head, SourceHead::Disjunction(ls) if ls.len() == 1);
    let mut offending = None;
    let mut note = |t: &SourceTerm| {
        if offending.is_none() && t.has_interval() {
            offending = Some(t.to_string());
        }
    };
    match &r.head {
        SourceHead::Disjunction(ls) if !is_fact => ls.iter().flat_map(|l| &l.atom.args).for_each(&mut note),
        SourceHead::Choice(c) => {
            for e in &c.elements {
                e.literal.atom.args.iter().chain(e.condition.iter().flat_map(|l| &l.atom.args)).for_each(&mut note);
            }
        }
        _ => {}
    }
    for b in &r.body {
        match b {
            BodyLiteral::Pos(l) | BodyLiteral::Naf(l) | BodyLiteral::Subj { literal: l, .. } => {
                l.atom.args.iter().for_each(&mut note)
            }
            BodyLiteral::Cmp(..) => {}
        }
    }
    if let Some(t) = offending {
        return Err(GroundError::IntervalOutsideFact(t));
    }
    if !is_fact {
        return Ok(vec![r]);
    }
    let SourceHead::Disjunction(ls) = &r.head else {
        unreachable!()
    };
    let lit = &ls[0];
    let mut expanded: Vec<Vec<SourceTerm>> = vec![Vec::new()];
    for arg in &lit.atom.args {
        let options = expand_term(arg)?;
        expanded = expanded
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    Ok(expanded
        .into_iter()
        .map(|args| SourceRule {
            head: SourceHead::Disjunction(vec![SourceLiteral {
                atom: SourceAtom {
                    predicate: lit.atom.predicate.clone(),
                    args,
                },
                negated: lit.negated,
            }]),
            body: Vec::new(),
        })
        .collect())
}

fn expand_term(t: &SourceTerm) -> Result<Vec<SourceTerm>, GroundError> {
    match t {
        SourceTerm::Interval(lo, hi) => {
            let lo = int_value(&eval(lo, &Subst::new())?, lo)?;
            let hi = int_value(&eval(hi, &Subst::new())?, hi)?;
            Ok((lo..=hi).map(SourceTerm::Int).collect())
        }
        SourceTerm::Func(f, args) => {
            let mut acc: Vec<Vec<SourceTerm>> = vec![Vec::new()];
            for a in args {
                let opts = expand_term(a)?;
                acc = acc
                    .into_iter()
                    .flat_map(|p| {
                        opts.iter().map(move |o| {
                            let mut v = p.clone();
                            v.push(o.clone());
                            v
                        })
                    })
                    .collect();
            }
            Ok(acc.into_iter().map(|args| SourceTerm::Func(f.clone(), args)).collect())
        }
        _ => Ok(vec![t.clone()]),
    }
}

fn int_value(t: &Term, source: &SourceTerm) -> Result<i64, GroundError> {
    match t {
        Term::Int(i) => Ok(*i),
        Term::Sym(s) => Err(non_integer(s.as_str(), source)),
        other => Err(GroundError::NonInteger(other.to_string())),
    }
}

fn non_integer(name: &str, source: &SourceTerm) -> GroundError {
    // A bare lowercase name in arithmetic is almost always a missing #const.
    if matches!(source, SourceTerm::Const(_)) {
        GroundError::UnboundConstant(name.to_string())
    } else {
        GroundError::NonInteger(name.to_string())
    }
}

fn eval(t: &SourceTerm, s: &Subst) -> Result<Term, GroundError> {
    Ok(match t {
        SourceTerm::Int(i) => Term::Int(*i),
        SourceTerm::Const(c) => Term::Sym(c.clone()),
        SourceTerm::Var(v) => s.get(v).cloned().expect("safety guarantees bound variables"),
        SourceTerm::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| eval(a, s)).collect::<Result<_, _>>()?),
        SourceTerm::Arith(op, l, r) => {
            let lv = int_value(&eval(l, s)?, l)?;
            let rv = int_value(&eval(r, s)?, r)?;
            Term::Int(match op {
                ArithOp::Add => lv + rv,
                ArithOp::Sub => lv - rv,
            })
        }
        SourceTerm::Interval(..) => return Err(GroundError::IntervalOutsideFact(t.to_string())),
    })
}

fn eval_literal(l: &SourceLiteral, s: &Subst) -> Result<ObjectiveLiteral, GroundError> {
    Ok(ObjectiveLiteral {
        atom: Atom {
            predicate: l.atom.predicate.clone(),
            args: l.atom.args.iter().map(|a| eval(a, s)).collect::<Result<_, _>>()?,
        },
        negated: l.negated,
    })
}

fn compare(op: CmpOp, l: &SourceTerm, r: &SourceTerm, s: &Subst) -> Result<bool, GroundError> {
    if let SourceTerm::Interval(lo, hi) = r {
        let v = int_value(&eval(l, s)?, l)?;
        let lo = int_value(&eval(lo, s)?, lo)?;
        let hi = int_value(&eval(hi, s)?, hi)?;
        return match op {
            CmpOp::Eq => Ok(lo <= v && v <= hi),
            CmpOp::Ne => Ok(v < lo || v > hi),
            _ => Err(GroundError::IntervalOutsideFact(r.to_string())),
        };
    }
    let lv = eval(l, s)?;
    let rv = eval(r, s)?;
    Ok(match op {
        CmpOp::Eq => lv == rv,
        CmpOp::Ne => lv != rv,
        _ => {
            let a = int_value(&lv, l)?;
            let b = int_value(&rv, r)?;
            match op {
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
                CmpOp::Eq | CmpOp::Ne => unreachable!(),
            }
        }
    })
}

fn term_is_evaluable(t: &SourceTerm, s: &Subst) -> bool {
    let mut vs = Vec::new();
    t.vars(&mut vs);
    vs.iter().all(|v| s.contains_key(v))
}

/// Match a pattern against a ground term, extending `s`. Arithmetic
/// subterms must already be evaluable.
fn match_term(p: &SourceTerm, g: &Term, s: &mut Subst) -> Result<bool, GroundError> {
    match p {
        SourceTerm::Var(v) => match s.get(v) {
            Some(bound) => Ok(bound == g),
            None => {
                s.insert(v.clone(), g.clone());
                Ok(true)
            }
        },
        SourceTerm::Int(i) => Ok(matches!(g, Term::Int(j) if i == j)),
        SourceTerm::Const(c) => Ok(matches!(g, Term::Sym(d) if c == d)),
        SourceTerm::Func(f, args) => match g {
            Term::Func(gf, gargs) if gf == f && gargs.len() == args.len() => {
                for (pa, ga) in args.iter().zip(gargs) {
                    if !match_term(pa, ga, s)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        SourceTerm::Arith(..) | SourceTerm::Interval(..) => Ok(eval(p, s)? == *g),
    }
}

/// A literal can be matched once every arithmetic subterm is evaluable.
fn matchable(l: &SourceLiteral, s: &Subst) -> bool {
    fn ok(t: &SourceTerm, s: &Subst) -> bool {
        match t {
            SourceTerm::Func(_, args) => args.iter().all(|a| ok(a, s)),
            SourceTerm::Arith(..) | SourceTerm::Interval(..) => term_is_evaluable(t, s),
            _ => true,
        }
    }
    l.atom.args.iter().all(|a| ok(a, s))
}

/// All substitutions extending `s` under which every literal in `lits`
/// is in `index`.
fn match_all(lits: &[&SourceLiteral], index: &AtomIndex, s: Subst, out: &mut Vec<Subst>) -> Result<(), GroundError> {
    if lits.is_empty() {
        out.push(s);
        return Ok(());
    }
    let pick = lits.iter().position(|l| matchable(l, &s)).unwrap_or(0);
    let lit = lits[pick];
    let rest: Vec<&SourceLiteral> = lits.iter().enumerate().filter(|(i, _)| *i != pick).map(|(_, l)| *l).collect();
    for args in index.candidates(lit) {
        let mut ext = s.clone();
        let mut ok = true;
        for (p, g) in lit.atom.args.iter().zip(args) {
            if !match_term(p, g, &mut ext)? {
                ok = false;
                break;
            }
        }
        if ok {
            match_all(&rest, index, ext, out)?;
        }
    }
    Ok(())
}

fn body_substitutions(r: &SourceRule, index: &AtomIndex) -> Result<Vec<Subst>, GroundError> {
    let pos: Vec<&SourceLiteral> = r
        .body
        .iter()
        .filter_map(|b| match b {
            BodyLiteral::Pos(l) => Some(l),
            _ => None,
        })
        .collect();
    let mut subs = Vec::new();
    match_all(&pos, index, Subst::new(), &mut subs)?;
    let mut kept = Vec::with_capacity(subs.len());
    'outer: for s in subs {
        for b in &r.body {
            if let BodyLiteral::Cmp(op, l, rt) = b {
                if !compare(*op, l, rt, &s)? {
                    continue 'outer;
                }
            }
        }
        kept.push(s);
    }
    Ok(kept)
}

fn choice_elements(
    c: &SourceChoice,
    s: &Subst,
    domain: &AtomIndex,
) -> Result<Vec<ObjectiveLiteral>, GroundError> {
    let mut out = Vec::new();
    for e in &c.elements {
        let cond: Vec<&SourceLiteral> = e.condition.iter().collect();
        let mut subs = Vec::new();
        match_all(&cond, domain, s.clone(), &mut subs)?;
        for es in subs {
            let l = eval_literal(&e.literal, &es)?;
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    Ok(out)
}

fn is_ground_rule(r: &SourceRule) -> bool {
    let mut vs = Vec::new();
    match &r.head {
        SourceHead::Disjunction(ls) => ls.iter().for_each(|l| l.vars(&mut vs)),
        SourceHead::Choice(c) => {
            for e in &c.elements {
                e.literal.vars(&mut vs);
                e.condition.iter().for_each(|l| l.vars(&mut vs));
            }
            for t in c.lower.iter().chain(&c.upper) {
                t.vars(&mut vs);
            }
        }
    }
    for b in &r.body {
        match b {
            BodyLiteral::Pos(l) | BodyLiteral::Naf(l) | BodyLiteral::Subj { literal: l, .. } => l.vars(&mut vs),
            BodyLiteral::Cmp(_, l, rt) => {
                l.vars(&mut vs);
                rt.vars(&mut vs);
            }
        }
    }
    vs.is_empty()
}

/// Least fixpoint of head literals derivable from rules whose positive
/// body is in the index. With `definite_only`, only single-head rules
/// without negation or subjective literals take part (the domain facts).
fn fixpoint(rules: &[SourceRule], base: &AtomIndex, definite_only: bool) -> Result<AtomIndex, GroundError> {
    let mut index = AtomIndex::default();
    let mut changed = true;
    while changed {
        changed = false;
        for r in rules {
            if definite_only {
                let definite = matches!(&r.head, SourceHead::Disjunction(ls) if ls.len() == 1)
                    && r.body.iter().all(|b| matches!(b, BodyLiteral::Pos(_) | BodyLiteral::Cmp(..)));
                if !definite {
                    continue;
                }
            }
            for s in body_substitutions(r, &index)? {
                let heads = match &r.head {
                    SourceHead::Disjunction(ls) => ls.iter().map(|l| eval_literal(l, &s)).collect::<Result<Vec<_>, _>>()?,
                    SourceHead::Choice(c) => choice_elements(c, &s, base)?,
                };
                for h in heads {
                    changed |= index.insert(&h);
                }
            }
        }
    }
    Ok(index)
}

fn bound_value(t: &Option<SourceTerm>, default: usize, s: &Subst) -> Result<usize, GroundError> {
    match t {
        None => Ok(default),
        Some(t) => match eval(t, s)? {
            Term::Int(i) if i >= 0 => Ok(i as usize),
            Term::Sym(c) if matches!(t, SourceTerm::Const(_)) => Err(GroundError::UnboundConstant(c.to_string())),
            other => Err(GroundError::BadBound(other.to_string())),
        },
    }
}

fn instantiate(r: &SourceRule, s: &Subst, domain: &AtomIndex) -> Result<Rule, GroundError> {
    let head = match &r.head {
        SourceHead::Disjunction(ls) => Head::Disjunction(ls.iter().map(|l| eval_literal(l, s)).collect::<Result<_, _>>()?),
        SourceHead::Choice(c) => {
            let elements = choice_elements(c, s, domain)?;
            Head::Choice(ChoiceHead {
                lower: bound_value(&c.lower, 0, s)?,
                upper: bound_value(&c.upper, elements.len(), s)?,
                elements,
            })
        }
    };
    let mut rule = Rule {
        head,
        body_pos: Vec::new(),
        body_neg: Vec::new(),
        body_subj: Vec::new(),
    };
    for b in &r.body {
        match b {
            BodyLiteral::Pos(l) => rule.body_pos.push(eval_literal(l, s)?),
            BodyLiteral::Naf(l) => rule.body_neg.push(eval_literal(l, s)?),
            BodyLiteral::Subj {
                modality,
                inner_negated,
                literal,
            } => rule
                .body_subj
                .push(SubjectiveLiteral::new(*modality, *inner_negated, eval_literal(literal, s)?)),
            BodyLiteral::Cmp(..) => {}
        }
    }
    Ok(rule)
}

fn instances(r: &SourceRule, possible: &AtomIndex, domain: &AtomIndex) -> Result<Vec<Rule>, GroundError> {
    if is_ground_rule(r) {
        let s = Subst::new();
        for b in &r.body {
            if let BodyLiteral::Cmp(op, l, rt) = b {
                if !compare(*op, l, rt, &s)? {
                    return Ok(Vec::new());
                }
            }
        }
        return Ok(vec![instantiate(r, &s, domain)?]);
    }
    body_substitutions(r, possible)?
        .iter()
        .map(|s| instantiate(r, s, domain))
        .collect()
}
