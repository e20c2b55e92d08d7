mod common;

use common::{random_program, ProgramShape, ALL_FORMS};
use epispec::frontend::{ground, load, parse, GroundError, SourceProgram};
use epispec::{program_literals, Term};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPE: ProgramShape = ProgramShape {
    atoms: &["p", "q", "r", "s", "t"],
    max_rules: 8,
    negation: 0.2,
    forms: &ALL_FORMS,
    choice: 0.1,
    max_literals: 10,
};

/// Non-ground programs over a small domain. Every rule is safe.
fn random_nonground<R: Rng>(rng: &mut R) -> String {
    let mut text = String::from("#const n=3.\ndom(1..n).\nitem(a). item(b).\nlink(1,a). link(2,b).\n");
    let templates = [
        "p(X) :- dom(X), not q(X).",
        "q(X) :- dom(X), X > 1, -K p(X).",
        "r(X, Y) :- link(X, Y), item(Y), M q(X).",
        "s(X+1) :- dom(X), X < n.",
        "1{pick(X) : item(X)}1 :- dom(1).",
        "{pick2(X, Y) : link(X, Y)} :- dom(2).",
        ":- pick(X), not item(X).",
        "t(Y) :- r(X, Y), K not p(X), X != 2.",
        "u(X) or v(X) :- dom(X), X <= 2.",
        "-w(X) :- dom(X), -M not s(X).",
        "z :- dom(X), X = 1..2.",
    ];
    for _ in 0..rng.gen_range(1..=6) {
        text.push_str(templates[rng.gen_range(0..templates.len())]);
        text.push('\n');
    }
    text
}

fn printed(source: &SourceProgram) -> String {
    source.to_string()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_round_trips_ground_programs(seed in any::<u64>()) {
        let text = random_program(&mut ChaCha8Rng::seed_from_u64(seed), &SHAPE);
        let once = printed(&parse(&text).unwrap());
        let twice = printed(&parse(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn printing_round_trips_nonground_programs(seed in any::<u64>()) {
        let text = random_nonground(&mut ChaCha8Rng::seed_from_u64(seed));
        let first = parse(&text).unwrap();
        let reparsed = parse(&printed(&first)).unwrap();
        prop_assert_eq!(&first, &reparsed);
        prop_assert_eq!(ground(&first).unwrap(), ground(&reparsed).unwrap());
    }

    #[test]
    fn grounding_is_idempotent(seed in any::<u64>()) {
        let text = random_nonground(&mut ChaCha8Rng::seed_from_u64(seed));
        let once = ground(&parse(&text).unwrap()).unwrap();
        let twice = ground(&SourceProgram::from(&once)).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn ground_output_has_no_variables(seed in any::<u64>()) {
        let text = random_nonground(&mut ChaCha8Rng::seed_from_u64(seed));
        let p = ground(&parse(&text).unwrap()).unwrap();
        fn ground_term(t: &Term) -> bool {
            match t {
                Term::Int(_) => true,
                Term::Sym(s) => !s.as_str().starts_with(|c: char| c.is_ascii_uppercase()),
                Term::Func(_, args) => args.iter().all(ground_term),
            }
        }
        for l in program_literals(&p) {
            prop_assert!(l.atom.args.iter().all(ground_term), "{}", l);
        }
        // Printing and reloading a ground program must not see variables.
        prop_assert!(load(&p.to_string()).is_ok());
    }

    #[test]
    fn unsafe_rules_are_rejected(kind in 0usize..4, name in "[A-Z][a-z]{0,3}") {
        let rule = match kind {
            0 => format!("p({name}) :- q(1)."),
            1 => format!("p :- q(1), not r({name})."),
            2 => format!("p :- q(1), K r({name})."),
            _ => format!("p :- q(1), {name} < 3."),
        };
        let text = format!("q(1).\n{rule}");
        let err = ground(&parse(&text).unwrap()).unwrap_err();
        match err {
            GroundError::Unsafe { variable, .. } => prop_assert_eq!(variable.as_str(), name.as_str()),
            other => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn parse_errors_point_into_the_input(seed in any::<u64>(), cut in 0.0f64..1.0) {
        let text = random_program(&mut ChaCha8Rng::seed_from_u64(seed), &SHAPE);
        // Drop the final period so the program is always malformed.
        let truncated = &text[..((text.len() - 1) as f64 * cut) as usize];
        let broken = format!("{truncated} :-");
        let err = parse(&broken).unwrap_err();
        let lines = broken.lines().count().max(1);
        prop_assert!(err.line >= 1 && err.line <= lines, "{err} in {broken:?}");
        prop_assert!(err.column >= 1);
    }
}

#[test]
fn every_subjective_form_is_accepted() {
    let p = parse("h :- K a, -K b, M c, -M d, K not e, -K not f, M not g, -M not i.").unwrap();
    let ground = ground(&p).unwrap();
    assert_eq!(ground.rules[0].body_subj.len(), 8);
}

#[test]
fn example_one_structure() {
    let p = load("p or q.  p :- -K q.  q :- -K p.").unwrap();
    assert_eq!(p.rules.len(), 3);
    assert_eq!(p.rules[1].body_subj.len(), 1);
    assert_eq!(p.rules[1].body_subj[0].to_string(), "-K q");
}

#[test]
fn missing_period_reported_at_end_of_input() {
    let err = parse("p :-").unwrap_err();
    assert_eq!((err.line, err.column), (1, 5));
}

#[test]
fn interval_fact_with_constant() {
    let p = load("#const x=2. step(0..x).").unwrap();
    let facts: Vec<String> = p.rules.iter().map(ToString::to_string).collect();
    assert_eq!(facts, ["step(0).", "step(1).", "step(2)."]);
}
