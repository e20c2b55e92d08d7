mod common;

use std::collections::BTreeSet;

use common::{random_program, show_views, ProgramShape, ALL_FORMS};
use epispec::asp::SolverOptions;
use epispec::engine::{
    assignment_consistent, assignment_reduct, epistemic_literals, is_world_view, lower_bound, preprocess, satisfies,
    solve, solve_basic, Assignment, EngineOptions, PartialModel,
};
use epispec::frontend::load;
use epispec::transform::to_core;
use epispec::{BeliefSet, Modality, ObjectiveLiteral, Program, SubjectiveLiteral, WorldView};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPE: ProgramShape = ProgramShape {
    atoms: &["p", "q", "r", "s"],
    max_rules: 6,
    negation: 0.15,
    forms: &ALL_FORMS,
    choice: 0.1,
    max_literals: 8,
};

fn core_program(seed: u64) -> Program {
    let text = random_program(&mut ChaCha8Rng::seed_from_u64(seed), &SHAPE);
    to_core(&load(&text).unwrap()).program
}

fn random_world_view<R: Rng>(rng: &mut R, lits: &[ObjectiveLiteral]) -> WorldView {
    let mut sets = BTreeSet::new();
    for _ in 0..rng.gen_range(1..=3) {
        let b: BeliefSet = lits.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        sets.insert(b);
    }
    WorldView(sets)
}

fn lits() -> Vec<ObjectiveLiteral> {
    ["a", "b", "c"].iter().map(|n| ObjectiveLiteral::prop(n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn modalities_come_in_dual_pairs(seed in any::<u64>(), which in 0usize..3, inner in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_world_view(&mut rng, &lits());
        let l = lits()[which].clone();
        let s = |m| SubjectiveLiteral::new(m, inner, l.clone());
        prop_assert_ne!(satisfies(&w, &s(Modality::K)), satisfies(&w, &s(Modality::NotK)));
        prop_assert_ne!(satisfies(&w, &s(Modality::M)), satisfies(&w, &s(Modality::NotM)));
        // K l implies M l on a non-empty collection.
        prop_assert!(!satisfies(&w, &s(Modality::K)) || satisfies(&w, &s(Modality::M)));
        // M l is -K not l.
        let flipped = SubjectiveLiteral::new(Modality::NotK, !inner, l.clone());
        prop_assert_eq!(satisfies(&w, &s(Modality::M)), satisfies(&w, &flipped));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn basic_solver_output_are_world_views(seed in any::<u64>()) {
        let p = core_program(seed);
        let opts = EngineOptions::default();
        for w in solve_basic(&p, &opts).unwrap() {
            prop_assert!(is_world_view(&p, &w, &opts.solver).unwrap(), "{}\n{}", p, w);
        }
    }

    #[test]
    fn preprocessing_does_not_change_world_views(seed in any::<u64>()) {
        let p = core_program(seed);
        let basic = solve_basic(&p, &EngineOptions::default()).unwrap();
        let fast = solve(&p, &EngineOptions::default()).unwrap();
        prop_assert_eq!(show_views(&basic), show_views(&fast), "{}", p);
    }

    #[test]
    fn results_do_not_depend_on_thread_count(seed in any::<u64>(), jobs in 2usize..5) {
        let p = core_program(seed);
        let one = solve(&p, &EngineOptions::default()).unwrap();
        let many = solve(&p, &EngineOptions { jobs, ..EngineOptions::default() }).unwrap();
        prop_assert_eq!(show_views(&one), show_views(&many));
        let basic_many = solve_basic(&p, &EngineOptions { jobs, ..EngineOptions::default() }).unwrap();
        prop_assert_eq!(show_views(&one), show_views(&basic_many));
    }

    #[test]
    fn partial_model_holds_in_every_world_view(seed in any::<u64>()) {
        let p = core_program(seed);
        let views = solve_basic(&p, &EngineOptions::default()).unwrap();
        match preprocess(&p) {
            Err(_) => prop_assert!(views.is_empty(), "contradiction but views {}", show_views(&views)),
            Ok((_, pm)) => {
                prop_assert!(pm.true_everywhere.is_disjoint(&pm.false_everywhere));
                for w in &views {
                    for b in w.iter() {
                        prop_assert!(pm.true_everywhere.iter().all(|l| b.contains(l)), "{} in {}", b, p);
                        prop_assert!(!pm.false_everywhere.iter().any(|l| b.contains(l)), "{} in {}", b, p);
                    }
                }
            }
        }
    }

    #[test]
    fn lower_bound_is_monotone(seed in any::<u64>()) {
        let p = core_program(seed);
        let mut pm = PartialModel::default();
        for _ in 0..4 {
            let Ok(next) = lower_bound(&p, &pm) else { break };
            let grown = PartialModel {
                true_everywhere: pm.true_everywhere.union(&next.true_everywhere).cloned().collect(),
                false_everywhere: pm.false_everywhere.union(&next.false_everywhere).cloned().collect(),
            };
            let again = lower_bound(&p, &grown);
            if let Ok(again) = again {
                prop_assert!(next.true_everywhere.is_subset(&again.true_everywhere));
                prop_assert!(next.false_everywhere.is_subset(&again.false_everywhere));
            }
            pm = grown;
        }
    }

    #[test]
    fn every_world_view_matches_some_guess(seed in any::<u64>()) {
        let p = core_program(seed);
        let el: Vec<_> = epistemic_literals(&p).into_iter().collect();
        for w in solve_basic(&p, &EngineOptions::default()).unwrap() {
            // The guess read off a world view reproduces it.
            let a = Assignment {
                believed: el.iter().filter(|l| w.iter().all(|b| b.contains(l))).cloned().collect(),
                not_believed: el.iter().filter(|l| !w.iter().all(|b| b.contains(l))).cloned().collect(),
            };
            let sets = epispec::asp::GroundAspProgram::solve(&assignment_reduct(&p, &a), &SolverOptions::default())
                .unwrap();
            prop_assert!(assignment_consistent(&sets, &a));
            prop_assert_eq!(&sets, &w.0);
        }
    }
}
