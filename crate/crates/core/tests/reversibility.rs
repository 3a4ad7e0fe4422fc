use proptest::prelude::*;
use striprev::benchgen::{gen_random_domain, rev_domain, RandomSpec, RevSpec};
use striprev::formula::{enumerate_states, Limits};
use striprev::reversibility::{brute_force_universal, check_reverse_plan, obeys_relevance};
use striprev::{
    decide_in_task, decide_over_set, decide_universal, Diagnostic, Domain, PlanningTask,
    SearchConfig, StateSetSpec, Status,
};

fn small_domain() -> impl Strategy<Value = Domain> {
    (
        1usize..=5,
        1usize..=5,
        any::<u64>(),
        prop_oneof![Just(0.2), Just(0.35), Just(0.5)],
    )
        .prop_map(|(n, m, seed, p)| gen_random_domain(RandomSpec::new(n, m, seed, p).unwrap()))
}

fn configs(h: usize) -> [SearchConfig; 2] {
    [
        SearchConfig::exact(h).unlimited(),
        SearchConfig::up_to(h).unlimited(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn universal_search_matches_brute_force(d in small_domain(), h in 0usize..=3) {
        for a in d.action_ids() {
            for cfg in configs(h) {
                let fast = decide_universal(&d, a, &cfg);
                let slow = brute_force_universal(&d, a, &cfg).unwrap();
                prop_assert_eq!(fast.status, slow.status, "{} {:?}", d.action(a).name(), cfg.mode);
                prop_assert_eq!(&fast.witnesses, &slow.witnesses);
            }
        }
    }

    #[test]
    fn witnesses_are_sound_and_irreversibility_is_justified(d in small_domain(), h in 0usize..=3) {
        let all = enumerate_states(&StateSetSpec::Universe, &d, &Limits::default()).unwrap();
        for a in d.action_ids() {
            for cfg in configs(h) {
                let v = decide_universal(&d, a, &cfg);
                for w in &v.witnesses {
                    prop_assert_eq!(check_reverse_plan(&d, a, w, &all), Ok(()));
                    match cfg.mode {
                        striprev::SearchMode::Exact => prop_assert_eq!(w.len(), h),
                        striprev::SearchMode::UpTo => prop_assert!(w.len() <= h),
                    }
                }
                if !obeys_relevance(d.action(a), d.action(a).pre()) {
                    prop_assert_eq!(v.status, Status::Irreversible);
                    let relevance = matches!(v.diagnostics[..], [Diagnostic::RelevanceViolation { .. }]);
                    prop_assert!(relevance);
                }
            }
        }
    }

    #[test]
    fn universal_witnesses_hold_on_every_subset(d in small_domain(), h in 1usize..=3, masks in prop::collection::vec(any::<u64>(), 10)) {
        let all = enumerate_states(&StateSetSpec::Universe, &d, &Limits::default()).unwrap();
        for a in d.action_ids() {
            let v = decide_universal(&d, a, &SearchConfig::up_to(h));
            for w in &v.witnesses {
                for m in &masks {
                    let subset: Vec<_> = all.iter().enumerate().filter(|(i, _)| m >> (i % 64) & 1 == 1).map(|(_, s)| s.clone()).collect();
                    prop_assert_eq!(check_reverse_plan(&d, a, w, &subset), Ok(()));
                }
            }
        }
    }

    #[test]
    fn set_search_witnesses_are_sound(d in small_domain(), h in 0usize..=2, mask in any::<u64>()) {
        let all = enumerate_states(&StateSetSpec::Universe, &d, &Limits::default()).unwrap();
        let subset: Vec<_> = all.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, s)| s.clone()).collect();
        for a in d.action_ids() {
            let v = decide_over_set(&d, a, &StateSetSpec::Explicit(subset.clone()), &SearchConfig::up_to(h)).unwrap();
            for w in &v.witnesses {
                prop_assert_eq!(check_reverse_plan(&d, a, w, &subset), Ok(()));
            }
            if v.status == Status::Irreversible {
                prop_assert!(!obeys_relevance(d.action(a), d.action(a).pre()));
            }
            // a universal witness works on any subset, so the subset search finds one too
            if !decide_universal(&d, a, &SearchConfig::up_to(h)).witnesses.is_empty() {
                prop_assert_eq!(v.status, Status::Reversible);
            }
        }
    }

    #[test]
    fn in_task_verdicts_are_never_irreversible(d in small_domain(), h in 0usize..=2, init in any::<u64>()) {
        let n = d.num_facts();
        let task = PlanningTask::new(d.clone(), striprev::FactSet::from_bits(n, init), d.empty_state()).unwrap();
        for a in d.action_ids() {
            let v = decide_in_task(&task, a, &SearchConfig::up_to(h)).unwrap();
            prop_assert_ne!(v.status, Status::Irreversible);
        }
    }
}

#[test]
fn rev_family_existence_and_nonexistence() {
    for i in 1..=6 {
        let d = rev_domain(RevSpec::new(i).unwrap());
        let del_all = d.action_id("del-all").unwrap();
        let expected: Vec<String> = (0..i).map(|k| format!("add-f{k}")).collect();
        let v = decide_universal(&d, del_all, &SearchConfig::exact(i).unlimited());
        assert_eq!(
            v.witnesses
                .iter()
                .map(|p| d.plan_names(p))
                .collect::<Vec<_>>(),
            vec![expected]
        );
        for cfg in [SearchConfig::exact(i - 1), SearchConfig::up_to(i - 1)] {
            let v = decide_universal(&d, del_all, &cfg);
            assert!(v.witnesses.is_empty());
            assert_eq!(v.status, Status::UnknownUpToHorizon);
            assert_eq!(
                v.diagnostics,
                vec![Diagnostic::ShortestReversePlan { length: i }]
            );
        }
    }
}

#[test]
fn oracle_agrees_on_rev_family() {
    for i in 1..=4 {
        let d = rev_domain(RevSpec::new(i).unwrap());
        for a in d.action_ids() {
            for h in [i - 1, i] {
                for cfg in configs(h) {
                    let fast = decide_universal(&d, a, &cfg);
                    let slow = brute_force_universal(&d, a, &cfg).unwrap();
                    assert_eq!(
                        (fast.status, &fast.witnesses),
                        (slow.status, &slow.witnesses)
                    );
                }
            }
        }
    }
}

#[test]
fn parallel_and_sequential_fan_out_agree() {
    let d = gen_random_domain(RandomSpec::new(6, 12, 7, 0.3).unwrap());
    let ids: Vec<_> = d.action_ids().collect();
    let cfg = SearchConfig::up_to(3);
    let par = striprev::reversibility::check_all(&ids, |a| decide_universal(&d, a, &cfg));
    let seq = striprev::reversibility::check_all_seq(&ids, |a| decide_universal(&d, a, &cfg));
    assert_eq!(par, seq);
}
