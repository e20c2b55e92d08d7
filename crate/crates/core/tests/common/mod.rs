//! Shared test support: random program generators and reference
//! implementations that do not go through the solver under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use epispec::frontend::load;
use epispec::{program_literals, BeliefSet, Head, ObjectiveLiteral, Program};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn show_views(views: &BTreeSet<epispec::WorldView>) -> String {
    views
        .iter()
        .map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Subjective forms as (operator text, inner `not`).
pub const ALL_FORMS: [(&str, bool); 8] = [
    ("K", false),
    ("-K", false),
    ("M", false),
    ("-M", false),
    ("K", true),
    ("-K", true),
    ("M", true),
    ("-M", true),
];

/// Forms expressible in the language with K, -K, K not, -K not and M.
pub const GELFOND_FORMS: [(&str, bool); 5] = [("K", false), ("-K", false), ("K", true), ("-K", true), ("M", false)];

pub struct ProgramShape<'a> {
    pub atoms: &'a [&'a str],
    pub max_rules: usize,
    /// Probability that a literal is classically negated.
    pub negation: f64,
    pub forms: &'a [(&'a str, bool)],
    /// Probability of a choice head.
    pub choice: f64,
    /// Largest number of distinct literals allowed in the program.
    pub max_literals: usize,
}

fn literal<R: Rng>(rng: &mut R, shape: &ProgramShape) -> String {
    let atom = shape.atoms.choose(rng).expect("atoms");
    if rng.gen_bool(shape.negation) {
        format!("-{atom}")
    } else {
        atom.to_string()
    }
}

fn rule<R: Rng>(rng: &mut R, shape: &ProgramShape) -> String {
    let head = if rng.gen_bool(shape.choice) {
        let n = rng.gen_range(1..=2);
        let elems: Vec<String> = (0..n).map(|_| literal(rng, shape)).collect();
        let lower = rng.gen_range(0..=n);
        let upper = rng.gen_range(lower..=n);
        format!("{lower}{{{}}}{upper}", elems.join(", "))
    } else {
        let n = match rng.gen_range(0..10) {
            0 | 1 => 0,
            2..=7 => 1,
            _ => 2,
        };
        (0..n).map(|_| literal(rng, shape)).collect::<Vec<_>>().join(" or ")
    };
    let mut body = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let l = literal(rng, shape);
        body.push(if rng.gen_bool(0.5) { l } else { format!("not {l}") });
    }
    if !shape.forms.is_empty() {
        for _ in 0..rng.gen_range(0..=2) {
            let (op, inner) = shape.forms.choose(rng).expect("forms");
            let l = literal(rng, shape);
            body.push(format!("{op} {}{l}", if *inner { "not " } else { "" }));
        }
    }
    if head.is_empty() && body.is_empty() {
        return String::new();
    }
    if body.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", body.join(", "))
    }
}

/// A random ground program within `shape`, as source text.
pub fn random_program<R: Rng>(rng: &mut R, shape: &ProgramShape) -> String {
    loop {
        let n = rng.gen_range(1..=shape.max_rules);
        let text: Vec<String> = (0..n).map(|_| rule(rng, shape)).filter(|r| !r.is_empty()).collect();
        let text = text.join("\n");
        let p = load(&text).expect("generated programs parse");
        if program_literals(&p).len() <= shape.max_literals {
            return text;
        }
    }
}

/// Answer sets by checking every consistent subset of the literals against
/// the definition directly. Choice rules are interpreted natively: when the
/// body holds, chosen elements count as derived and the number chosen must
/// lie within the bounds.
pub fn reference_answer_sets(p: &Program) -> BTreeSet<BeliefSet> {
    let lits: Vec<ObjectiveLiteral> = program_literals(p).into_iter().collect();
    assert!(lits.len() <= 16, "reference oracle is exponential");
    let index = |l: &ObjectiveLiteral| lits.iter().position(|x| x == l).expect("literal of p");
    let mask_of = |ls: &[ObjectiveLiteral]| ls.iter().fold(0u32, |m, l| m | (1 << index(l)));
    let mut complements = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        if let Some(j) = lits.iter().position(|x| *x == l.complement()) {
            complements.push((1u32 << i) | (1 << j));
        }
    }

    struct R {
        head: u32,
        choice: Option<(usize, usize)>,
        pos: u32,
        neg: u32,
    }
    let rules: Vec<R> = p
        .rules
        .iter()
        .map(|r| {
            assert!(r.body_subj.is_empty());
            let (head, choice) = match &r.head {
                Head::Disjunction(h) => (mask_of(h), None),
                Head::Choice(c) => (mask_of(&c.elements), Some((c.lower, c.upper))),
            };
            R {
                head,
                choice,
                pos: mask_of(&r.body_pos),
                neg: mask_of(&r.body_neg),
            }
        })
        .collect();

    let mut out = BTreeSet::new();
    'candidates: for x in 0u32..(1 << lits.len()) {
        if complements.iter().any(|c| x & c == *c) {
            continue;
        }
        // x must be a model of the program.
        for r in &rules {
            let body = r.pos & x == r.pos && r.neg & x == 0;
            if !body {
                continue;
            }
            match r.choice {
                None if r.head & x == 0 => continue 'candidates,
                Some((lo, hi)) => {
                    let n = (r.head & x).count_ones() as usize;
                    if n < lo || n > hi {
                        continue 'candidates;
                    }
                }
                None => {}
            }
        }
        // No proper subset may be a model of the reduct.
        let reduct: Vec<(u32, u32)> = rules
            .iter()
            .filter(|r| r.neg & x == 0)
            .flat_map(|r| match r.choice {
                None => vec![(r.head, r.pos)],
                Some(_) => (0..lits.len())
                    .filter(|i| r.head & x & (1 << i) != 0)
                    .map(|i| (1u32 << i, r.pos))
                    .collect(),
            })
            .collect();
        let mut y = x;
        while y != 0 {
            y = (y - 1) & x;
            if reduct.iter().all(|(h, pos)| pos & y != *pos || h & y != 0) {
                continue 'candidates;
            }
        }
        out.insert((0..lits.len()).filter(|i| x & (1 << i) != 0).map(|i| lits[i].clone()).collect());
    }
    out
}
