//! Built-in example colonies: seven reference scenarios over a shared
//! 23-proposition space, used for calibration, demos and the acceptance
//! suite.

use std::collections::BTreeSet;

use crate::dissemination::RunConfig;
use crate::model::{Agent, Colony, Desire, PropositionSpace, Rumor, TrustMatrix};

/// Priorities of p1..p23, shared by all built-in examples.
const PRIORITIES: [f64; 23] = [
    0.8, 0.1, 0.7, 0.3, 0.4, 0.4, 0.6, 0.6, 0.3, 0.2, 0.3, 0.6, 0.2, 0.8, 0.5, 0.5, 0.1, 0.9, 1.0,
    0.4, 0.5, 1.0, 0.2,
];

/// The actual event every example starts from.
const INITIAL_OBSERVATION: &str = "11101001101110101001010";

/// Trust table shared by examples 5, 6 and 7.
const NINE_AGENT_TRUST: [[f64; 9]; 9] = [
    [1.0, 0.3, 0.3, 0.37, 0.3, 0.32, 0.5, 0.58, 0.33],
    [0.3, 1.0, 0.3, 0.35, 0.36, 0.4, 0.52, 0.79, 0.32],
    [0.3, 0.3, 1.0, 0.38, 0.36, 0.31, 0.36, 0.58, 0.34],
    [0.37, 0.35, 0.38, 1.0, 0.37, 0.32, 0.39, 0.63, 0.34],
    [0.3, 0.36, 0.36, 0.37, 1.0, 0.36, 0.32, 0.53, 0.35],
    [0.32, 0.4, 0.31, 0.32, 0.36, 1.0, 0.31, 0.39, 0.3],
    [0.5, 0.52, 0.36, 0.39, 0.32, 0.31, 1.0, 0.41, 0.33],
    [0.58, 0.79, 0.58, 0.63, 0.53, 0.39, 0.41, 1.0, 0.57],
    [0.33, 0.32, 0.34, 0.34, 0.35, 0.3, 0.33, 0.57, 1.0],
];

const THRESHOLD_NOTE: &str =
    "accept_threshold 0.5 is a calibration default, not part of the example's defining tables";

/// One built-in example, its run defaults and the homogeneity it is designed
/// to exhibit.
#[derive(Debug, Clone)]
pub struct BuiltinExample {
    pub number: u32,
    pub colony: Colony,
    pub run: RunConfig,
    /// Homogeneity value the example is designed around. Example 7's
    /// computed value is below this; see its note.
    pub nominal_homogeneity: f64,
    pub notes: Vec<String>,
}

/// Returns example `n` (1..=7), or `None` when out of range.
pub fn builtin_example(n: u32) -> Option<BuiltinExample> {
    let (colony, nominal, extra_note) = match n {
        1 => (example_1(), 1.0, None),
        2 => (example_2(), 1.0, None),
        3 => (example_3(), 1.0, None),
        4 => (example_4(), 0.3734, None),
        5 => (example_5(), 1.0, None),
        6 => (
            example_6(),
            1.4e-7,
            Some(
                "the desire and trust tables compute to h_C near 4.7e-5 under the same \
                 definitions that reproduce example 4 exactly; the nominal 1.4e-7 does not \
                 follow from the tables"
                    .to_string(),
            ),
        ),
        7 => (
            example_7(),
            1.0,
            Some(
                "the desire tables conflict (p7 between agents 1 and 5, p18 between agent 9 \
                 and agents 3/4/5/8), so the computed homogeneity is below the nominal 1"
                    .to_string(),
            ),
        ),
        _ => return None,
    };
    let mut notes = vec![THRESHOLD_NOTE.to_string()];
    notes.extend(extra_note);
    Some(BuiltinExample {
        number: n,
        colony,
        run: RunConfig::default(),
        nominal_homogeneity: nominal,
        notes,
    })
}

fn space() -> PropositionSpace {
    let names = (1..=23).map(|i| format!("p{i}")).collect();
    PropositionSpace::new(names, PRIORITIES.to_vec()).expect("fixture space is well-formed")
}

fn observation() -> Rumor {
    INITIAL_OBSERVATION
        .parse()
        .expect("fixture observation parses")
}

/// Desire from 1-based proposition numbers, as the tables are written.
fn desire(wished_true: &[usize], wished_false: &[usize]) -> Desire {
    Desire::new(
        wished_true.iter().map(|&i| i - 1),
        wished_false.iter().map(|&i| i - 1),
    )
}

/// Agents numbered 1..n with shared veracity 0.5 and threshold 0.5.
fn agents(desires: Vec<Desire>) -> Vec<Agent> {
    desires
        .into_iter()
        .enumerate()
        .map(|(i, d)| Agent::new(i as u32 + 1, d, 0.5, 0.5).expect("fixture agent is valid"))
        .collect()
}

fn colony(desires: Vec<Desire>, trust: TrustMatrix, observers: &[usize]) -> Colony {
    let agents = agents(desires);
    Colony::new(
        space(),
        agents,
        trust,
        BTreeSet::from_iter(observers.iter().copied()),
        observation(),
        0.0,
    )
    .expect("fixture colony is well-formed")
}

fn nine_agent_trust() -> TrustMatrix {
    TrustMatrix::new(NINE_AGENT_TRUST.iter().map(|row| row.to_vec()).collect())
        .expect("fixture trust table is well-formed")
}

/// Nine identical agents, full trust; agent 9 observes.
fn example_1() -> Colony {
    let shared = desire(&[1, 2, 3, 7, 9, 11, 13, 17], &[4, 6, 8, 14, 16, 20, 21, 23]);
    colony(vec![shared; 9], TrustMatrix::uniform(9, 1.0), &[8])
}

/// Same agents as example 1, but every pair trusts each other at 0.5.
fn example_2() -> Colony {
    let shared = desire(&[1, 2, 3, 7, 9, 11, 13, 17], &[4, 6, 8, 14, 16, 20, 21, 23]);
    colony(vec![shared; 9], TrustMatrix::uniform(9, 0.5), &[8])
}

/// Two compatible agents with mutual trust 0.6; agent 1 observes.
fn example_3() -> Colony {
    let desires = vec![
        desire(&[1, 2, 3, 10, 11, 13, 17], &[4, 6, 8, 14, 20, 21, 23]),
        desire(&[1, 3, 7, 9, 11, 13, 17], &[4, 5, 8, 14, 16, 20, 22, 23]),
    ];
    colony(
        desires,
        TrustMatrix::new(vec![vec![1.0, 0.6], vec![0.6, 1.0]]).unwrap(),
        &[0],
    )
}

/// Two agents conflicting on p5 and p18, full trust; agent 1 observes.
fn example_4() -> Colony {
    let desires = vec![
        desire(&[2, 5, 10, 11, 13, 17, 18], &[4, 6, 8, 19, 20, 23]),
        desire(&[1, 3, 7, 9, 12, 13, 15], &[5, 14, 16, 18, 21, 22]),
    ];
    colony(desires, TrustMatrix::uniform(2, 1.0), &[0])
}

/// Nine compatible agents over the mixed trust table; agent 9 observes.
fn example_5() -> Colony {
    let desires = vec![
        desire(&[1, 2, 3, 9, 11, 13, 17], &[6, 14, 16, 21, 23]),
        desire(&[4, 12, 22], &[5, 6, 14, 21]),
        desire(&[1, 3, 4, 9, 13, 17], &[6, 10, 14, 18, 21]),
        desire(&[1, 2, 3, 4, 9, 12, 13], &[5, 6, 14, 16, 18, 23]),
        desire(&[1, 2, 3, 4, 12, 13, 17], &[5, 6, 14, 18, 23]),
        desire(&[4, 9, 12, 13, 17, 22], &[6, 14, 16, 19, 21]),
        desire(&[2, 4, 13, 22], &[5, 6, 16]),
        desire(&[3, 12, 13, 22], &[10, 18, 23]),
        desire(&[1, 2, 4, 9, 12, 22], &[5, 6, 14, 19, 21]),
    ];
    colony(desires, nine_agent_trust(), &[8])
}

/// Nine agents with heavily conflicting desires over the same trust table.
fn example_6() -> Colony {
    let desires = vec![
        desire(&[1, 2, 3, 7, 9, 11, 13, 17], &[4, 6, 8, 14, 16, 20, 21, 23]),
        desire(&[4, 12, 18, 22], &[5, 6, 7, 14, 20, 21]),
        desire(
            &[1, 3, 4, 7, 9, 13, 17, 20, 23],
            &[6, 8, 10, 12, 14, 18, 21],
        ),
        desire(&[1, 2, 3, 4, 7, 9, 12, 13, 19], &[5, 6, 14, 18, 23]),
        desire(&[1, 2, 3, 4, 7, 9, 12, 13, 19], &[5, 6, 14, 18, 23]),
        desire(&[4, 9, 12, 13, 17, 22], &[6, 11, 14, 16, 19, 21]),
        desire(&[2, 4, 13, 19, 21, 22], &[5, 6, 11, 16, 18]),
        desire(&[3, 6, 12, 13, 22], &[7, 10, 18, 23]),
        desire(&[1, 2, 4, 9, 12, 18, 22], &[5, 6, 8, 11, 14, 19, 21]),
    ];
    colony(desires, nine_agent_trust(), &[8])
}

/// Near-copy of example 5 with sparser coverage; carries residual conflicts
/// on p7 and p18 (see the example's note).
fn example_7() -> Colony {
    let desires = vec![
        desire(&[1, 2, 3, 7, 9, 11, 13, 17], &[6, 8, 14, 16, 20, 21, 23]),
        desire(&[4, 12, 22], &[5, 6, 14, 21]),
        desire(&[1, 3, 4, 9, 13, 17], &[6, 8, 10, 14, 18, 21]),
        desire(&[1, 2, 3, 4, 9, 12, 13], &[5, 6, 14, 15, 18, 23]),
        desire(&[1, 2, 3, 4, 12, 13, 17], &[5, 6, 7, 8, 14, 18, 23]),
        desire(&[4, 9, 12, 13, 17, 22], &[6, 14, 16, 19, 21]),
        desire(&[2, 4, 13, 22], &[5, 6, 16]),
        desire(&[3, 12, 13, 22], &[10, 18, 23]),
        desire(&[1, 2, 4, 9, 12, 18, 22], &[5, 6, 14, 19, 21]),
    ];
    colony(desires, nine_agent_trust(), &[8])
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::metrics::homogeneity;
    use crate::validate::validate_colony;

    #[test]
    fn out_of_range_is_none() {
        assert!(builtin_example(0).is_none());
        assert!(builtin_example(8).is_none());
        assert!(builtin_example(99).is_none());
    }

    #[test]
    fn example_1_population() {
        let ex = builtin_example(1).unwrap();
        assert_eq!(ex.colony.agent_count(), 9);
        assert_eq!(ex.colony.observers, BTreeSet::from([8]));
        let d = &ex.colony.agents[0].desire;
        assert_eq!(d.wished_true, BTreeSet::from([0, 1, 2, 6, 8, 10, 12, 16]));
        assert_eq!(
            d.wished_false,
            BTreeSet::from([3, 5, 7, 13, 15, 19, 20, 22])
        );
        for a in &ex.colony.agents {
            assert_eq!(&a.desire, d);
            assert_eq!(a.veracity, 0.5);
            assert_eq!(a.accept_threshold, 0.5);
        }
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(ex.colony.trust.get(i, j), 1.0);
            }
        }
    }

    #[test]
    fn example_3_trust_table() {
        let ex = builtin_example(3).unwrap();
        assert_eq!(ex.colony.trust.rows(), vec![vec![1.0, 0.6], vec![0.6, 1.0]]);
        assert_eq!(ex.colony.observers, BTreeSet::from([0]));
    }

    #[test]
    fn example_4_homogeneity() {
        let ex = builtin_example(4).unwrap();
        let h = homogeneity(&ex.colony);
        assert!((h - 0.3734).abs() < 1e-4, "h = {h}");
    }

    #[test]
    fn observation_matches_space() {
        for n in 1..=7 {
            let ex = builtin_example(n).unwrap();
            assert_eq!(ex.colony.space.len(), 23);
            assert_eq!(ex.colony.initial_observation.len(), 23);
            assert_eq!(
                ex.colony.initial_observation.to_string(),
                INITIAL_OBSERVATION
            );
        }
    }

    #[test]
    fn all_examples_have_valid_desires_and_diagonals() {
        for n in 1..=7 {
            let ex = builtin_example(n).unwrap();
            let report = validate_colony(&ex.colony);
            assert!(report.desire_overlaps.is_empty(), "example {n}");
            assert!(report.diagonal_violations.is_empty(), "example {n}");
            assert!(report.dimension_mismatches.is_empty(), "example {n}");
        }
    }

    #[test]
    fn homogeneous_examples_compute_to_one() {
        for n in [1, 2, 3, 5] {
            let ex = builtin_example(n).unwrap();
            assert_eq!(homogeneity(&ex.colony), 1.0, "example {n}");
        }
    }

    #[test]
    fn example_7_is_below_its_nominal_value() {
        let ex = builtin_example(7).unwrap();
        let h = homogeneity(&ex.colony);
        assert!(h < 1.0, "h = {h}");
        assert_eq!(ex.nominal_homogeneity, 1.0);
        assert!(ex.notes.iter().any(|n| n.contains("p7")));
    }

    #[test]
    fn shared_trust_table_violates_the_relative_trust_assumption() {
        // tau(1,2) = 0.3 < tau(1,8) * tau(8,2) = 0.58 * 0.79.
        let ex = builtin_example(5).unwrap();
        let report = validate_colony(&ex.colony);
        assert!(report
            .relative_trust_violations
            .iter()
            .any(|v| v.a == 1 && v.b == 2 && v.c == 8));
    }
}
