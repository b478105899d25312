//! Property tests for the model and engine invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use rumor_colony::{
    classify, conflicts, desire_vector, heterogeneity, homogeneity, identical_distance, merge_box,
    mutate, run, take_turn, AcceptMode, Agent, Colony, Desire, PropositionSpace, RandomSource,
    Rumor, RumorBox, RunConfig, TrustMatrix,
};

fn desire_from(entries: &[i8]) -> Desire {
    let mut desire = Desire::empty();
    for (k, &e) in entries.iter().enumerate() {
        match e {
            1 => {
                desire.wished_true.insert(k);
            }
            -1 => {
                desire.wished_false.insert(k);
            }
            _ => {}
        }
    }
    desire
}

fn entries_strategy(n: usize) -> impl Strategy<Value = Vec<i8>> {
    proptest::collection::vec(
        prop_oneof![2 => Just(0i8), 1 => Just(1i8), 1 => Just(-1i8)],
        n,
    )
}

fn rumor_strategy(n: usize) -> impl Strategy<Value = Rumor> {
    proptest::collection::vec(any::<bool>(), n).prop_map(Rumor::new)
}

proptest! {
    #[test]
    fn desire_vector_is_a_bijection(entries in entries_strategy(12)) {
        let space = PropositionSpace::uniform(12, 0.5);
        let desire = desire_from(&entries);
        let vector = desire_vector(&desire, &space).unwrap();
        prop_assert_eq!(vector.entries(), entries.as_slice());
        prop_assert_eq!(vector.to_desire(), desire);
    }

    #[test]
    fn classify_partitions_the_propositions(
        entries in entries_strategy(10),
        rumor in rumor_strategy(10),
    ) {
        let desire = desire_from(&entries);
        let class = classify(&rumor, &desire);
        let mut all: BTreeSet<usize> = BTreeSet::new();
        all.extend(&class.accepted);
        all.extend(&class.unaccepted);
        all.extend(&class.inconsiderable);
        prop_assert_eq!(all.len(), 10);
        prop_assert_eq!(
            class.accepted.len() + class.unaccepted.len() + class.inconsiderable.len(),
            10
        );
        prop_assert_eq!(class.considered(), desire.considered());
        let considered: BTreeSet<usize> = class
            .accepted
            .union(&class.unaccepted)
            .copied()
            .collect();
        let desired: BTreeSet<usize> = desire
            .wished_true
            .union(&desire.wished_false)
            .copied()
            .collect();
        prop_assert_eq!(considered, desired);
    }

    /// Merge against an exact integer oracle on quarter-grid weights.
    #[test]
    fn merge_matches_integer_oracle(
        rumors in proptest::collection::btree_set(rumor_strategy(6), 1..=4),
        quarters in proptest::collection::vec(0u32..=4, 4),
    ) {
        let mut rumor_box = RumorBox::new();
        let mut weights = Vec::new();
        for (i, rumor) in rumors.iter().enumerate() {
            let q = quarters[i % quarters.len()];
            rumor_box.hear(rumor.clone(), i, q as f64 * 0.25);
            weights.push(q);
        }
        let merged = merge_box(&rumor_box).unwrap();
        let total: u32 = weights.iter().sum();
        for j in 0..6 {
            let favor: u32 = rumors
                .iter()
                .zip(&weights)
                .filter(|(r, _)| r.bit(j))
                .map(|(_, &q)| q)
                .sum();
            let expected = total > 0 && 2 * favor >= total;
            prop_assert_eq!(merged.bit(j), expected, "bit {} of {}", j, merged);
        }
    }

    /// Mutation repairs at most one proposition and never makes things worse.
    #[test]
    fn mutate_never_increases_unaccepted(
        entries in entries_strategy(9),
        rumor in rumor_strategy(9),
        veracity in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let space = PropositionSpace::uniform(9, 0.5);
        let desire = desire_from(&entries);
        let agent = Agent::new(1, desire.clone(), veracity, 0.5).unwrap();
        let mut rng = RandomSource::from_seed(seed);
        let before = classify(&rumor, &desire).unaccepted.len();
        let (out, flipped) = mutate(&rumor, &agent, &space, &mut rng);
        let after = classify(&out, &desire).unaccepted.len();
        match flipped {
            Some(k) => {
                prop_assert_eq!(after, before - 1);
                let mut expected = rumor.clone();
                expected.flip_bit(k);
                prop_assert_eq!(out, expected);
            }
            None => {
                prop_assert_eq!(after, before);
                prop_assert_eq!(out, rumor);
            }
        }
    }

    /// Distance is symmetric, and positive exactly when a conflict exists
    /// (priorities strictly positive). Distance goes through the membership
    /// vectors; conflicts through set intersections.
    #[test]
    fn distance_iff_conflict(
        a_entries in entries_strategy(14),
        b_entries in entries_strategy(14),
        priorities in proptest::collection::vec(0.01f64..=1.0, 14),
    ) {
        let names = (1..=14).map(|i| format!("p{i}")).collect();
        let space = PropositionSpace::new(names, priorities).unwrap();
        let a = Agent::new(1, desire_from(&a_entries), 0.5, 0.5).unwrap();
        let b = Agent::new(2, desire_from(&b_entries), 0.5, 0.5).unwrap();
        let d_ab = identical_distance(&a, &b, &space);
        let d_ba = identical_distance(&b, &a, &space);
        prop_assert_eq!(d_ab.to_bits(), d_ba.to_bits());
        prop_assert_eq!(d_ab > 0.0, !conflicts(&a, &b).is_empty());
    }
}

fn small_colony(
    entries: &[Vec<i8>],
    trusts: &[f64],
    veracities: &[f64],
    observer: usize,
) -> Colony {
    let n = entries.len();
    let agents = entries
        .iter()
        .zip(veracities)
        .enumerate()
        .map(|(i, (e, &v))| Agent::new(i as u32 + 1, desire_from(e), v, 0.5).unwrap())
        .collect();
    let mut trust = TrustMatrix::uniform(n, 1.0);
    let mut k = 0;
    for a in 0..n {
        for b in 0..n {
            if a != b {
                trust.set(a, b, trusts[k % trusts.len()]);
                k += 1;
            }
        }
    }
    Colony::new(
        PropositionSpace::uniform(entries[0].len(), 0.5),
        agents,
        trust,
        BTreeSet::from([observer]),
        Rumor::zeros(entries[0].len()),
        0.0,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Homogeneity stays in (0, 1] and hits 1 exactly when no ordered pair
    /// carries pressure.
    #[test]
    fn homogeneity_bounds(
        entries in proptest::collection::vec(entries_strategy(8), 2..=5),
        trusts in proptest::collection::vec(0.0f64..=1.0, 20),
        veracities in proptest::collection::vec(0.0f64..=1.0, 5),
    ) {
        let n = entries.len();
        let colony = small_colony(&entries, &trusts, &veracities[..n], 0);
        let h = homogeneity(&colony);
        prop_assert!(h > 0.0 && h <= 1.0);
        let mut any_pressure = false;
        for a in 0..n {
            for b in 0..n {
                if heterogeneity(&colony, a, b) > 0.0 {
                    any_pressure = true;
                }
            }
        }
        prop_assert_eq!(h == 1.0, !any_pressure);
    }

    /// A turn never touches any agent's desire, veracity or threshold, and
    /// no box ever holds two bit-identical rumors.
    #[test]
    fn turns_preserve_agent_identity(
        entries in proptest::collection::vec(entries_strategy(6), 3..=5),
        seed in any::<u64>(),
    ) {
        let n = entries.len();
        let veracities = vec![0.5; n];
        let colony = small_colony(&entries, &[0.7], &veracities, 0);
        let frozen: Vec<(Desire, f64, f64)> = colony
            .agents
            .iter()
            .map(|a| (a.desire.clone(), a.veracity, a.accept_threshold))
            .collect();
        let mut sim_colony = colony;
        sim_colony.agents[0]
            .rumor_box
            .hear(sim_colony.initial_observation.clone(), 0, 1.0);
        let mut rng = RandomSource::from_seed(seed);
        for turn in 0..40 {
            let idx = turn % n;
            let outcome = take_turn(&mut sim_colony, idx, AcceptMode::Considered, &mut rng);
            prop_assert_eq!(
                outcome.promoted.is_some(),
                outcome.action == rumor_colony::TurnAction::Spread
            );
            for (agent, (desire, veracity, threshold)) in
                sim_colony.agents.iter().zip(&frozen)
            {
                prop_assert_eq!(&agent.desire, desire);
                prop_assert_eq!(agent.veracity, *veracity);
                prop_assert_eq!(agent.accept_threshold, *threshold);
                let mut seen = BTreeSet::new();
                for entry in agent.rumor_box.entries() {
                    prop_assert!(seen.insert(entry.rumor.to_string()));
                }
            }
        }
    }

    /// A run is a pure function of the colony and the seed.
    #[test]
    fn runs_are_deterministic(
        entries in proptest::collection::vec(entries_strategy(6), 2..=4),
        seed in any::<u64>(),
    ) {
        let n = entries.len();
        let veracities = vec![0.4; n];
        let colony = small_colony(&entries, &[0.9, 0.6], &veracities, 0);
        let config = RunConfig {
            generations: 120,
            seed,
            ..RunConfig::default()
        };
        let a = run(colony.clone(), &config);
        let b = run(colony, &config);
        prop_assert_eq!(a, b);
    }
}
