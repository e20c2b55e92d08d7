//! Ground abstract syntax of epistemic specifications.
//!
//! Everything downstream of the grounder works on these types: objective
//! literals, subjective literals (`K l`, `-K l`, `M l`, `-M l`, each
//! optionally over `not l`), rules with a disjunctive or choice head, and
//! programs. Belief sets and world views live here too because their
//! canonical ordering is shared by every module that prints or compares
//! results.
//!
//! All types derive `Ord`; the derived order *is* the canonical order:
//! literals compare by predicate, then arguments, then the classical
//! negation flag (so `p < -p`), belief sets compare as sorted literal
//! sequences and world views as sorted belief-set sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Prefix reserved for atoms introduced by the solver itself.
pub const RESERVED_PREFIX: &str = "aux_";

/// Predicate of the auxiliary atoms that choice rules compile into.
pub const CHOICE_AUX_PREDICATE: &str = "aux_c";

/// An immutable, cheaply clonable identifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A ground term. Variant order fixes the canonical order of mixed
/// arguments: integers before constants before compound terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Sym(Symbol),
    Func(Symbol, Vec<Term>),
}

impl Term {
    pub fn sym(name: &str) -> Self {
        Term::Sym(Symbol::new(name))
    }

    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::Func(Symbol::new(name), args)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) => write!(f, "{s}"),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_joined(f, args, ",")?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Symbol::new(predicate),
            args,
        }
    }

    /// A zero-arity atom.
    pub fn prop(name: &str) -> Self {
        Atom::new(name, Vec::new())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.args, ",")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom `A` or its classical negation `-A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectiveLiteral {
    pub atom: Atom,
    pub negated: bool,
}

impl ObjectiveLiteral {
    pub fn pos(atom: Atom) -> Self {
        ObjectiveLiteral {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        ObjectiveLiteral { atom, negated: true }
    }

    /// Shorthand for a positive propositional literal.
    pub fn prop(name: &str) -> Self {
        ObjectiveLiteral::pos(Atom::prop(name))
    }

    pub fn complement(&self) -> Self {
        ObjectiveLiteral {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    /// True for literals over solver-introduced atoms.
    pub fn is_reserved(&self) -> bool {
        self.atom.predicate.as_str().starts_with(RESERVED_PREFIX)
    }

    /// True for the auxiliaries of compiled choice rules, which are hidden
    /// from reported answer sets.
    pub fn is_aux(&self) -> bool {
        self.atom.predicate.as_str() == CHOICE_AUX_PREDICATE
    }
}

/// Free-function form of [`ObjectiveLiteral::complement`].
pub fn complement(l: &ObjectiveLiteral) -> ObjectiveLiteral {
    l.complement()
}

impl fmt::Display for ObjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    K,
    NotK,
    M,
    NotM,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::K => "K",
            Modality::NotK => "-K",
            Modality::M => "M",
            Modality::NotM => "-M",
        })
    }
}

/// A modal literal such as `K l`, `-K l`, `M not l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubjectiveLiteral {
    pub modality: Modality,
    /// The `not` in `K not l`.
    pub inner_negated: bool,
    pub literal: ObjectiveLiteral,
}

impl SubjectiveLiteral {
    pub fn new(modality: Modality, inner_negated: bool, literal: ObjectiveLiteral) -> Self {
        SubjectiveLiteral {
            modality,
            inner_negated,
            literal,
        }
    }

    pub fn k(literal: ObjectiveLiteral) -> Self {
        SubjectiveLiteral::new(Modality::K, false, literal)
    }

    pub fn not_k(literal: ObjectiveLiteral) -> Self {
        SubjectiveLiteral::new(Modality::NotK, false, literal)
    }

    /// `K l` or `-K l`.
    pub fn is_core(&self) -> bool {
        matches!(self.modality, Modality::K | Modality::NotK) && !self.inner_negated
    }
}

impl fmt::Display for SubjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.modality)?;
        if self.inner_negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.literal)
    }
}

/// A ground choice head `L{e1, ..., en}U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceHead {
    pub lower: usize,
    pub upper: usize,
    pub elements: Vec<ObjectiveLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    /// `l0 or ... or lk`; empty for integrity constraints.
    Disjunction(Vec<ObjectiveLiteral>),
    Choice(ChoiceHead),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Head,
    pub body_pos: Vec<ObjectiveLiteral>,
    /// Literals under default negation.
    pub body_neg: Vec<ObjectiveLiteral>,
    pub body_subj: Vec<SubjectiveLiteral>,
}

impl Rule {
    pub fn new(head: Vec<ObjectiveLiteral>) -> Self {
        Rule {
            head: Head::Disjunction(head),
            body_pos: Vec::new(),
            body_neg: Vec::new(),
            body_subj: Vec::new(),
        }
    }

    pub fn fact(l: ObjectiveLiteral) -> Self {
        Rule::new(vec![l])
    }

    pub fn constraint() -> Self {
        Rule::new(Vec::new())
    }

    pub fn choice(choice: ChoiceHead) -> Self {
        Rule {
            head: Head::Choice(choice),
            ..Rule::new(Vec::new())
        }
    }

    pub fn with_pos(mut self, l: ObjectiveLiteral) -> Self {
        self.body_pos.push(l);
        self
    }

    pub fn with_neg(mut self, l: ObjectiveLiteral) -> Self {
        self.body_neg.push(l);
        self
    }

    pub fn with_subj(mut self, s: SubjectiveLiteral) -> Self {
        self.body_subj.push(s);
        self
    }

    /// Literals of the head (choice elements for a choice head).
    pub fn head_literals(&self) -> &[ObjectiveLiteral] {
        match &self.head {
            Head::Disjunction(ls) => ls,
            Head::Choice(c) => &c.elements,
        }
    }

    pub fn is_constraint(&self) -> bool {
        matches!(&self.head, Head::Disjunction(ls) if ls.is_empty())
    }

    pub fn is_fact(&self) -> bool {
        matches!(&self.head, Head::Disjunction(ls) if ls.len() == 1) && self.body_is_empty()
    }

    pub fn body_is_empty(&self) -> bool {
        self.body_pos.is_empty() && self.body_neg.is_empty() && self.body_subj.is_empty()
    }

    /// Objective literals appearing under `K`.
    pub fn body_k(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.body_subj
            .iter()
            .filter(|s| s.modality == Modality::K && !s.inner_negated)
            .map(|s| &s.literal)
    }

    /// Objective literals appearing under `-K`.
    pub fn body_not_k(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.body_subj
            .iter()
            .filter(|s| s.modality == Modality::NotK && !s.inner_negated)
            .map(|s| &s.literal)
    }

    /// Every objective literal in the rule, including those inside
    /// subjective literals.
    pub fn literals(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.head_literals()
            .iter()
            .chain(&self.body_pos)
            .chain(&self.body_neg)
            .chain(self.body_subj.iter().map(|s| &s.literal))
    }

    pub fn is_core(&self) -> bool {
        self.body_subj.iter().all(SubjectiveLiteral::is_core)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Disjunction(ls) => write_joined(f, ls, " or ")?,
            Head::Choice(c) => {
                write!(f, "{}{{", c.lower)?;
                write_joined(f, &c.elements, ", ")?;
                write!(f, "}}{}", c.upper)?;
            }
        }
        let body: Vec<String> = self
            .body_pos
            .iter()
            .map(ToString::to_string)
            .chain(self.body_subj.iter().map(ToString::to_string))
            .chain(self.body_neg.iter().map(|l| format!("not {l}")))
            .collect();
        if body.is_empty() {
            if self.is_constraint() {
                f.write_str(":-")?;
            }
        } else {
            if !self.is_constraint() {
                f.write_str(" ")?;
            }
            write!(f, ":- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// A ground epistemic specification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
    /// `#const` bindings the program was grounded with.
    pub constants: BTreeMap<Symbol, i64>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program {
            rules,
            constants: BTreeMap::new(),
        }
    }

    /// Every objective literal occurring in the program.
    pub fn literals(&self) -> BTreeSet<ObjectiveLiteral> {
        self.rules
            .iter()
            .flat_map(|r| r.literals().cloned())
            .collect()
    }

    /// True when every subjective literal is `K l` or `-K l`.
    pub fn is_core(&self) -> bool {
        self.rules.iter().all(Rule::is_core)
    }

    pub fn has_subjective(&self) -> bool {
        self.rules.iter().any(|r| !r.body_subj.is_empty())
    }
}

/// Free-function form of [`Program::literals`].
pub fn program_literals(p: &Program) -> BTreeSet<ObjectiveLiteral> {
    p.literals()
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// One set of objective literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BeliefSet(pub BTreeSet<ObjectiveLiteral>);

impl BeliefSet {
    pub fn new() -> Self {
        BeliefSet::default()
    }

    pub fn contains(&self, l: &ObjectiveLiteral) -> bool {
        self.0.contains(l)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No literal together with its complement.
    pub fn is_consistent(&self) -> bool {
        self.0
            .iter()
            .filter(|l| l.negated)
            .all(|l| !self.0.contains(&l.complement()))
    }

    pub fn project(&self, onto: &BTreeSet<ObjectiveLiteral>) -> BeliefSet {
        BeliefSet(self.0.intersection(onto).cloned().collect())
    }

    pub fn without_aux(&self) -> BeliefSet {
        BeliefSet(self.0.iter().filter(|l| !l.is_aux()).cloned().collect())
    }
}

impl FromIterator<ObjectiveLiteral> for BeliefSet {
    fn from_iter<I: IntoIterator<Item = ObjectiveLiteral>>(iter: I) -> Self {
        BeliefSet(iter.into_iter().collect())
    }
}

impl fmt::Display for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{ }");
        }
        f.write_str("{ ")?;
        write_joined(f, self.0.iter(), ", ")?;
        f.write_str(" }")
    }
}

/// A collection of belief sets. World views returned by the solver are
/// never empty; the type itself allows the empty collection so candidate
/// answer-set collections can share it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldView(pub BTreeSet<BeliefSet>);

impl WorldView {
    pub fn iter(&self) -> impl Iterator<Item = &BeliefSet> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Literals true in every belief set; empty for the empty collection.
    pub fn intersection(&self) -> BTreeSet<ObjectiveLiteral> {
        let mut sets = self.0.iter();
        let Some(first) = sets.next() else {
            return BTreeSet::new();
        };
        let mut acc = first.0.clone();
        for s in sets {
            acc.retain(|l| s.contains(l));
        }
        acc
    }

    pub fn project(&self, onto: &BTreeSet<ObjectiveLiteral>) -> WorldView {
        self.0.iter().map(|b| b.project(onto)).collect()
    }
}

impl FromIterator<BeliefSet> for WorldView {
    fn from_iter<I: IntoIterator<Item = BeliefSet>>(iter: I) -> Self {
        WorldView(iter.into_iter().collect())
    }
}

impl fmt::Display for WorldView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

fn write_joined<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl IntoIterator<Item = T>,
    sep: &str,
) -> fmt::Result {
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}
