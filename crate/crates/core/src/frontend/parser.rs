//! Lexer and recursive-descent parser for `.es` files.
//!
//! Surface syntax in brief (see `docs/language.md` for the full reference):
//!
//! ```text
//! #const m=2.
//! p or q.
//! p :- -K q, not r, X < 3, step(X).
//! 1{o(A,T) : action(A)}1 :- step(T), T < m.
//! :- M nonexecutable.
//! ```
//!
//! `-` (or `¬`) is classical negation, `not` default negation, and the
//! modal prefixes are `K`, `-K`, `M`, `-M`, each optionally followed by
//! `not`. `%` starts a line comment.

use thiserror::Error;

use super::ast::*;
use crate::lang::{Modality, Symbol, RESERVED_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message} (found {token})")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
    pub token: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept predicates with the reserved `aux_` prefix. Needed to read
    /// back programs printed after transformation or choice compilation.
    pub allow_reserved: bool,
}

pub fn parse(text: &str) -> Result<SourceProgram, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<SourceProgram, ParseError> {
    let tokens = lex(text)?;
    Parser {
        tokens,
        pos: 0,
        options,
    }
    .program()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Const,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    DotDot,
    If,
    Colon,
    Minus,
    Plus,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Const => "`#const`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::If => "`:-`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Cmp(op) => format!("`{}`", op.as_str()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: &str, token: String| ParseError {
        line,
        column,
        message: message.to_string(),
        token,
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' | '¬' => push(Tok::Minus, 1, &mut i, &mut col),
            '=' => push(Tok::Cmp(CmpOp::Eq), 1, &mut i, &mut col),
            '.' if chars.get(i + 1) == Some(&'.') => push(Tok::DotDot, 2, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::If, 2, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Cmp(CmpOp::Le), 2, &mut i, &mut col),
            '<' => push(Tok::Cmp(CmpOp::Lt), 1, &mut i, &mut col),
            '>' if chars.get(i + 1) == Some(&'=') => push(Tok::Cmp(CmpOp::Ge), 2, &mut i, &mut col),
            '>' => push(Tok::Cmp(CmpOp::Gt), 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Cmp(CmpOp::Ne), 2, &mut i, &mut col),
            '#' => {
                let word: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                if word != "const" {
                    return Err(err(line, col, "unknown directive", format!("`#{word}`")));
                }
                push(Tok::Const, 1 + word.len(), &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let digits: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
                let value = digits
                    .parse::<i64>()
                    .map_err(|_| err(line, col, "integer out of range", format!("`{digits}`")))?;
                push(Tok::Int(value), digits.len(), &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                let width = word.len();
                let tok = if c.is_ascii_lowercase() {
                    Tok::Ident(word)
                } else {
                    Tok::Var(word)
                };
                push(tok, width, &mut i, &mut col);
            }
            other => {
                return Err(err(line, col, "unexpected character", format!("`{other}`")));
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    options: ParseOptions,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        self.error_at(self.pos, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn program(mut self) -> Result<SourceProgram, ParseError> {
        let mut prog = SourceProgram::default();
        while *self.peek() != Tok::Eof {
            if *self.peek() == Tok::Const {
                self.bump();
                let name = match self.bump() {
                    Tok::Ident(n) => n,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected constant name");
                    }
                };
                self.expect(Tok::Cmp(CmpOp::Eq), "`=`")?;
                let value = match self.peek() {
                    Tok::Int(v) => *v,
                    _ => return self.error("expected integer"),
                };
                self.bump();
                self.expect(Tok::Dot, "`.`")?;
                prog.constants.push((Symbol::new(&name), value));
            } else {
                prog.rules.push(self.rule()?);
            }
        }
        Ok(prog)
    }

    fn rule(&mut self) -> Result<SourceRule, ParseError> {
        let head = if *self.peek() == Tok::If {
            SourceHead::Disjunction(Vec::new())
        } else if self.at_choice() {
            SourceHead::Choice(self.choice()?)
        } else {
            let mut lits = vec![self.objective()?];
            while matches!(self.peek(), Tok::Ident(w) if w == "or") {
                self.bump();
                lits.push(self.objective()?);
            }
            SourceHead::Disjunction(lits)
        };
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.bump();
            if *self.peek() != Tok::Dot {
                body.push(self.body_literal()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    body.push(self.body_literal()?);
                }
            }
        }
        self.expect(Tok::Dot, "`.` at end of rule")?;
        Ok(SourceRule { head, body })
    }

    fn at_choice(&self) -> bool {
        match self.peek() {
            Tok::LBrace => true,
            Tok::Int(_) | Tok::Ident(_) => *self.peek_at(1) == Tok::LBrace,
            _ => false,
        }
    }

    fn bound(&mut self) -> Result<SourceTerm, ParseError> {
        match self.bump() {
            Tok::Int(i) => Ok(SourceTerm::Int(i)),
            Tok::Ident(s) => Ok(SourceTerm::Const(Symbol::new(&s))),
            _ => {
                self.pos -= 1;
                self.error("expected cardinality bound")
            }
        }
    }

    fn choice(&mut self) -> Result<SourceChoice, ParseError> {
        let lower = if *self.peek() == Tok::LBrace {
            None
        } else {
            Some(self.bound()?)
        };
        self.expect(Tok::LBrace, "`{`")?;
        let mut elements = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let literal = self.objective()?;
                let mut condition = Vec::new();
                if *self.peek() == Tok::Colon {
                    self.bump();
                    condition.push(self.objective()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        condition.push(self.objective()?);
                    }
                }
                elements.push(SourceChoiceElement { literal, condition });
                match self.peek() {
                    Tok::Comma | Tok::Semi => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        let upper = match self.peek() {
            Tok::Int(_) | Tok::Ident(_) => Some(self.bound()?),
            _ => None,
        };
        Ok(SourceChoice {
            lower,
            upper,
            elements,
        })
    }

    fn is_modal(tok: &Tok) -> Option<bool> {
        match tok {
            Tok::Var(v) if v == "K" => Some(true),
            Tok::Var(v) if v == "M" => Some(false),
            _ => None,
        }
    }

    fn starts_objective(tok: &Tok) -> bool {
        matches!(tok, Tok::Ident(_) | Tok::Minus)
    }

    fn body_literal(&mut self) -> Result<BodyLiteral, ParseError> {
        if matches!(self.peek(), Tok::Ident(w) if w == "not") {
            self.bump();
            return Ok(BodyLiteral::Naf(self.objective()?));
        }
        // -K l, -M l
        if *self.peek() == Tok::Minus {
            if let Some(is_k) = Self::is_modal(self.peek_at(1)) {
                self.bump();
                self.bump();
                let modality = if is_k { Modality::NotK } else { Modality::NotM };
                return self.subjective_rest(modality);
            }
        }
        // K l, M l
        if let Some(is_k) = Self::is_modal(self.peek()) {
            if Self::starts_objective(self.peek_at(1)) {
                self.bump();
                let modality = if is_k { Modality::K } else { Modality::M };
                return self.subjective_rest(modality);
            }
        }
        if *self.peek() == Tok::Minus {
            return Ok(BodyLiteral::Pos(self.objective()?));
        }
        let at = self.pos;
        let lhs = self.term()?;
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            return Ok(BodyLiteral::Cmp(op, lhs, rhs));
        }
        match lhs {
            SourceTerm::Const(predicate) => Ok(BodyLiteral::Pos(self.literal_of(at, predicate, Vec::new(), false)?)),
            SourceTerm::Func(predicate, args) => Ok(BodyLiteral::Pos(self.literal_of(at, predicate, args, false)?)),
            _ => self.error("expected literal or comparison"),
        }
    }

    fn subjective_rest(&mut self, modality: Modality) -> Result<BodyLiteral, ParseError> {
        let inner_negated = matches!(self.peek(), Tok::Ident(w) if w == "not");
        if inner_negated {
            self.bump();
        }
        Ok(BodyLiteral::Subj {
            modality,
            inner_negated,
            literal: self.objective()?,
        })
    }

    fn error_at<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.tokens[at];
        Err(ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
            token: s.tok.describe(),
        })
    }

    /// Build a literal, rejecting keywords and reserved names; `at` is the
    /// index of the predicate token.
    fn literal_of(
        &self,
        at: usize,
        predicate: Symbol,
        args: Vec<SourceTerm>,
        negated: bool,
    ) -> Result<SourceLiteral, ParseError> {
        let name = predicate.as_str();
        if name == "not" || name == "or" {
            return self.error_at(at, format!("keyword `{name}` used as predicate"));
        }
        if !self.options.allow_reserved && name.starts_with(RESERVED_PREFIX) {
            return self.error_at(at, format!("predicate prefix `{RESERVED_PREFIX}` is reserved"));
        }
        Ok(SourceLiteral {
            atom: SourceAtom { predicate, args },
            negated,
        })
    }

    fn objective(&mut self) -> Result<SourceLiteral, ParseError> {
        let negated = *self.peek() == Tok::Minus;
        if negated {
            self.bump();
        }
        let name = match self.peek() {
            Tok::Ident(n) if n != "not" && n != "or" => n.clone(),
            _ => return self.error("expected atom"),
        };
        let at = self.pos;
        self.bump();
        let args = if *self.peek() == Tok::LParen {
            self.args()?
        } else {
            Vec::new()
        };
        self.literal_of(at, Symbol::new(&name), args, negated)
    }

    fn args(&mut self) -> Result<Vec<SourceTerm>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<SourceTerm, ParseError> {
        let lhs = self.additive()?;
        if *self.peek() == Tok::DotDot {
            self.bump();
            let rhs = self.additive()?;
            return Ok(SourceTerm::Interval(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<SourceTerm, ParseError> {
        let mut acc = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.primary()?;
            acc = SourceTerm::Arith(op, Box::new(acc), Box::new(rhs));
        }
    }

    fn primary(&mut self) -> Result<SourceTerm, ParseError> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(SourceTerm::Int(i))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(SourceTerm::Var(Symbol::new(&v)))
            }
            Tok::Ident(name) if name != "not" && name != "or" => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    Ok(SourceTerm::Func(Symbol::new(&name), self.args()?))
                } else {
                    Ok(SourceTerm::Const(Symbol::new(&name)))
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.error("expected term"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subj(r: &SourceRule) -> Vec<(Modality, bool, String)> {
        r.body
            .iter()
            .filter_map(|b| match b {
                BodyLiteral::Subj {
                    modality,
                    inner_negated,
                    literal,
                } => Some((*modality, *inner_negated, literal.to_string())),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn example_one_parses() {
        let p = parse("p or q.  p :- -K q.  q :- -K p.").unwrap();
        assert_eq!(p.rules.len(), 3);
        assert_eq!(subj(&p.rules[1]), vec![(Modality::NotK, false, "q".into())]);
        assert!(matches!(&p.rules[0].head, SourceHead::Disjunction(h) if h.len() == 2));
    }

    #[test]
    fn example_two_parses() {
        let p = parse("p :- -M q.  q :- -K p.").unwrap();
        assert_eq!(subj(&p.rules[0]), vec![(Modality::NotM, false, "q".into())]);
    }

    #[test]
    fn all_eight_subjective_forms() {
        let p = parse("h :- K a, -K b, M c, -M d, K not e, -K not f, M not g, -M not -i.").unwrap();
        let forms = subj(&p.rules[0]);
        assert_eq!(
            forms,
            vec![
                (Modality::K, false, "a".into()),
                (Modality::NotK, false, "b".into()),
                (Modality::M, false, "c".into()),
                (Modality::NotM, false, "d".into()),
                (Modality::K, true, "e".into()),
                (Modality::NotK, true, "f".into()),
                (Modality::M, true, "g".into()),
                (Modality::NotM, true, "-i".into()),
            ]
        );
    }

    #[test]
    fn unicode_negation_is_accepted() {
        let p = parse("p :- ¬K q.").unwrap();
        assert_eq!(subj(&p.rules[0]), vec![(Modality::NotK, false, "q".into())]);
    }

    #[test]
    fn missing_period_reports_end_of_input() {
        let e = parse("p :-").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert_eq!(e.token, "end of input");
    }

    #[test]
    fn error_position_is_one_based() {
        let e = parse("p.\nq :- ,.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn reserved_prefix_rejected_by_default() {
        assert!(parse("aux_k_p :- not p.").is_err());
        assert!(parse_with("aux_k_p :- not p.", ParseOptions { allow_reserved: true }).is_ok());
    }

    #[test]
    fn planning_module_syntax() {
        let text = "#const x=2. step(0..x). 1{o(A,T):action(A)}1 :- step(T), T<2. :- -K o(A,T), o(A,T).";
        let p = parse(text).unwrap();
        assert_eq!(p.constants, vec![(Symbol::new("x"), 2)]);
        assert_eq!(p.rules.len(), 3);
        let SourceHead::Choice(c) = &p.rules[1].head else {
            panic!("choice head expected")
        };
        assert_eq!(c.elements.len(), 1);
        assert_eq!(c.elements[0].condition.len(), 1);
        assert!(matches!(p.rules[1].body[1], BodyLiteral::Cmp(CmpOp::Lt, _, _)));
    }

    #[test]
    fn fact_with_empty_body_and_empty_constraint() {
        let p = parse("p :- . :- .").unwrap();
        assert_eq!(p.rules[0].to_string(), "p.");
        assert_eq!(p.rules[1].to_string(), ":-.");
    }

    #[test]
    fn choice_without_conditions_uses_commas() {
        let p = parse("1{h(pos(p),0), h(pos(q),0)}2.").unwrap();
        assert_eq!(p.rules[0].to_string(), "1{h(pos(p),0), h(pos(q),0)}2.");
    }

    #[test]
    fn arithmetic_in_head() {
        let p = parse("h(pos(q),T+1) :- o(a,T), step(T).").unwrap();
        assert_eq!(p.rules[0].to_string(), "h(pos(q),T+1) :- o(a,T), step(T).");
    }
}
