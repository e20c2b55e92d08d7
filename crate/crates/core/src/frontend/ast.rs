//! Non-ground source syntax, as produced by the parser.

use std::fmt;

use crate::lang::{Atom, Head, Modality, ObjectiveLiteral, Program, Rule, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SourceTerm {
    Int(i64),
    /// A lowercase constant; `#const` names are substituted during grounding.
    Const(Symbol),
    Var(Symbol),
    Func(Symbol, Vec<SourceTerm>),
    Arith(ArithOp, Box<SourceTerm>, Box<SourceTerm>),
    Interval(Box<SourceTerm>, Box<SourceTerm>),
}

impl SourceTerm {
    /// Variables occurring anywhere in the term.
    pub fn vars(&self, out: &mut Vec<Symbol>) {
        match self {
            SourceTerm::Var(v) => out.push(v.clone()),
            SourceTerm::Int(_) | SourceTerm::Const(_) => {}
            SourceTerm::Func(_, args) => args.iter().for_each(|a| a.vars(out)),
            SourceTerm::Arith(_, l, r) | SourceTerm::Interval(l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }

    /// Variables that a match against a ground term binds: those not
    /// nested inside arithmetic or intervals.
    pub fn binding_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            SourceTerm::Var(v) => out.push(v.clone()),
            SourceTerm::Func(_, args) => args.iter().for_each(|a| a.binding_vars(out)),
            _ => {}
        }
    }

    pub fn has_interval(&self) -> bool {
        match self {
            SourceTerm::Interval(..) => true,
            SourceTerm::Func(_, args) => args.iter().any(SourceTerm::has_interval),
            SourceTerm::Arith(_, l, r) => l.has_interval() || r.has_interval(),
            _ => false,
        }
    }
}

impl From<&Term> for SourceTerm {
    fn from(t: &Term) -> Self {
        match t {
            Term::Int(i) => SourceTerm::Int(*i),
            Term::Sym(s) => SourceTerm::Const(s.clone()),
            Term::Func(f, args) => SourceTerm::Func(f.clone(), args.iter().map(Into::into).collect()),
        }
    }
}

impl fmt::Display for SourceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceTerm::Int(i) => write!(f, "{i}"),
            SourceTerm::Const(s) | SourceTerm::Var(s) => write!(f, "{s}"),
            SourceTerm::Func(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            SourceTerm::Arith(op, l, r) => {
                let op = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                };
                write!(f, "{l}{op}")?;
                match **r {
                    SourceTerm::Arith(..) | SourceTerm::Interval(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            SourceTerm::Interval(l, r) => write!(f, "{l}..{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceAtom {
    pub predicate: Symbol,
    pub args: Vec<SourceTerm>,
}

impl fmt::Display for SourceAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceLiteral {
    pub atom: SourceAtom,
    pub negated: bool,
}

impl SourceLiteral {
    pub fn vars(&self, out: &mut Vec<Symbol>) {
        self.atom.args.iter().for_each(|a| a.vars(out));
    }

    pub fn binding_vars(&self, out: &mut Vec<Symbol>) {
        self.atom.args.iter().for_each(|a| a.binding_vars(out));
    }
}

impl From<&ObjectiveLiteral> for SourceLiteral {
    fn from(l: &ObjectiveLiteral) -> Self {
        SourceLiteral {
            atom: SourceAtom {
                predicate: l.atom.predicate.clone(),
                args: l.atom.args.iter().map(Into::into).collect(),
            },
            negated: l.negated,
        }
    }
}

impl fmt::Display for SourceLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyLiteral {
    Pos(SourceLiteral),
    /// `not l`
    Naf(SourceLiteral),
    Subj {
        modality: Modality,
        inner_negated: bool,
        literal: SourceLiteral,
    },
    Cmp(CmpOp, SourceTerm, SourceTerm),
}

impl fmt::Display for BodyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyLiteral::Pos(l) => write!(f, "{l}"),
            BodyLiteral::Naf(l) => write!(f, "not {l}"),
            BodyLiteral::Subj {
                modality,
                inner_negated,
                literal,
            } => {
                write!(f, "{modality} ")?;
                if *inner_negated {
                    f.write_str("not ")?;
                }
                write!(f, "{literal}")
            }
            BodyLiteral::Cmp(op, l, r) => write!(f, "{l}{}{r}", op.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceChoiceElement {
    pub literal: SourceLiteral,
    /// Condition literals after `:`; matched against domain facts.
    pub condition: Vec<SourceLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceChoice {
    pub lower: Option<SourceTerm>,
    pub upper: Option<SourceTerm>,
    pub elements: Vec<SourceChoiceElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SourceHead {
    Disjunction(Vec<SourceLiteral>),
    Choice(SourceChoice),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceRule {
    pub head: SourceHead,
    pub body: Vec<BodyLiteral>,
}

impl fmt::Display for SourceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut constraint = false;
        match &self.head {
            SourceHead::Disjunction(ls) => {
                constraint = ls.is_empty();
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write!(f, "{l}")?;
                }
            }
            SourceHead::Choice(c) => {
                if let Some(lo) = &c.lower {
                    write!(f, "{lo}")?;
                }
                f.write_str("{")?;
                let conditional = c.elements.iter().any(|e| !e.condition.is_empty());
                let sep = if conditional { "; " } else { ", " };
                for (i, e) in c.elements.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{}", e.literal)?;
                    if !e.condition.is_empty() {
                        f.write_str(":")?;
                        for (j, cl) in e.condition.iter().enumerate() {
                            if j > 0 {
                                f.write_str(",")?;
                            }
                            write!(f, "{cl}")?;
                        }
                    }
                }
                f.write_str("}")?;
                if let Some(hi) = &c.upper {
                    write!(f, "{hi}")?;
                }
            }
        }
        if self.body.is_empty() {
            if constraint {
                f.write_str(":-")?;
            }
        } else {
            if !constraint {
                f.write_str(" ")?;
            }
            f.write_str(":- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub rules: Vec<SourceRule>,
    /// `#const` bindings in declaration order.
    pub constants: Vec<(Symbol, i64)>,
}

impl SourceProgram {
    /// Concatenate programs, keeping rule and directive order.
    pub fn concat(parts: impl IntoIterator<Item = SourceProgram>) -> SourceProgram {
        let mut out = SourceProgram::default();
        for p in parts {
            out.rules.extend(p.rules);
            out.constants.extend(p.constants);
        }
        out
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.constants {
            writeln!(f, "#const {name}={value}.")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn atom_to_source(a: &Atom) -> SourceAtom {
    SourceAtom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(Into::into).collect(),
    }
}

impl From<&Rule> for SourceRule {
    fn from(r: &Rule) -> Self {
        let lit = |l: &ObjectiveLiteral| SourceLiteral {
            atom: atom_to_source(&l.atom),
            negated: l.negated,
        };
        let head = match &r.head {
            Head::Disjunction(ls) => SourceHead::Disjunction(ls.iter().map(lit).collect()),
            Head::Choice(c) => SourceHead::Choice(SourceChoice {
                lower: Some(SourceTerm::Int(c.lower as i64)),
                upper: Some(SourceTerm::Int(c.upper as i64)),
                elements: c
                    .elements
                    .iter()
                    .map(|l| SourceChoiceElement {
                        literal: lit(l),
                        condition: Vec::new(),
                    })
                    .collect(),
            }),
        };
        let body = r
            .body_pos
            .iter()
            .map(|l| BodyLiteral::Pos(lit(l)))
            .chain(r.body_subj.iter().map(|s| BodyLiteral::Subj {
                modality: s.modality,
                inner_negated: s.inner_negated,
                literal: lit(&s.literal),
            }))
            .chain(r.body_neg.iter().map(|l| BodyLiteral::Naf(lit(l))))
            .collect();
        SourceRule { head, body }
    }
}

/// Embed a ground program back into source form.
impl From<&Program> for SourceProgram {
    fn from(p: &Program) -> Self {
        SourceProgram {
            rules: p.rules.iter().map(Into::into).collect(),
            constants: p.constants.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}
