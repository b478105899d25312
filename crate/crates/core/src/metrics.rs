//! Colony measures. Static: identical distance, conflicts, heterogeneity,
//! homogeneity. Dynamic: individual and social instability, convergence
//! detection over a run's instability sequence.

use std::collections::BTreeSet;

use crate::dissemination::{classify, merge_box, AcceptMode, TurnOutcome};
use crate::model::{desire_vector, Agent, Colony, PropositionSpace};

/// Per-generation view of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: u64,
    pub outcome: TurnOutcome,
    pub instability: f64,
    /// True when every agent has promoted at least once and all promoted
    /// versions are bit-identical.
    pub consensus: bool,
}

/// Complete record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<GenerationRecord>,
    /// Homogeneity of the colony; constant across the run.
    pub homogeneity: f64,
    /// First generation of the zero-instability window that ended the run,
    /// when one completed within the budget.
    pub converged_at: Option<u64>,
    pub seed: u64,
    pub accept_mode: AcceptMode,
    pub stability_window: u64,
}

impl Trace {
    pub fn instabilities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.instability).collect()
    }
}

/// Priority-weighted distance between two agents' desires. Only propositions
/// where the desires take opposite signs contribute, each with its priority
/// squared.
pub fn identical_distance(a: &Agent, b: &Agent, space: &PropositionSpace) -> f64 {
    let va = desire_vector(&a.desire, space).expect("desire fits its space");
    let vb = desire_vector(&b.desire, space).expect("desire fits its space");
    let mut sum = 0.0;
    for k in 0..space.len() {
        let gap = (va.entries()[k] as i32 - vb.entries()[k] as i32).abs() / 2;
        if gap > 0 {
            let priority = space.priority(k);
            sum += gap as f64 * priority * priority;
        }
    }
    sum.sqrt()
}

/// Propositions one agent wishes true and the other wishes false.
pub fn conflicts(a: &Agent, b: &Agent) -> BTreeSet<usize> {
    a.desire
        .wished_true
        .intersection(&b.desire.wished_false)
        .chain(a.desire.wished_false.intersection(&b.desire.wished_true))
        .copied()
        .collect()
}

/// Pairwise conflict pressure as felt by agent `a` toward agent `b`:
/// distance times a's trust in b times a's readiness to lie. Asymmetric in
/// the veracity factor.
pub fn heterogeneity(colony: &Colony, a: usize, b: usize) -> f64 {
    let distance = identical_distance(&colony.agents[a], &colony.agents[b], &colony.space);
    distance * colony.trust.get(a, b) * (1.0 - colony.agents[a].veracity)
}

/// exp(-sum of heterogeneity over all ordered agent pairs). Equals 1 exactly
/// when no pair carries any conflict pressure.
pub fn homogeneity(colony: &Colony) -> f64 {
    let n = colony.agent_count();
    let mut sum = 0.0;
    for a in 0..n {
        for b in 0..n {
            sum += heterogeneity(colony, a, b);
        }
    }
    (-sum).exp()
}

/// Number of unaccepted propositions in the agent's reference version times
/// its readiness to lie. The reference is the latest promoted version,
/// falling back to the merged box view before the first promotion; an agent
/// with nothing held contributes zero.
pub fn individual_instability(agent: &Agent) -> f64 {
    let reference = match &agent.last_promoted {
        Some(version) => version.clone(),
        None => match merge_box(&agent.rumor_box) {
            Some(version) => version,
            None => return 0.0,
        },
    };
    let unaccepted = classify(&reference, &agent.desire).unaccepted.len();
    unaccepted as f64 * (1.0 - agent.veracity)
}

/// Mean individual instability over the colony.
pub fn social_instability(colony: &Colony) -> f64 {
    let n = colony.agent_count();
    let total: f64 = colony.agents.iter().map(individual_instability).sum();
    total / n as f64
}

/// True when every agent has promoted and all promoted versions agree.
pub fn consensus(colony: &Colony) -> bool {
    let mut versions = colony.agents.iter().map(|a| a.last_promoted.as_ref());
    let Some(Some(first)) = versions.next() else {
        return false;
    };
    versions.all(|v| v == Some(first))
}

/// Earliest generation from which instability stays at exactly zero for a
/// full window. Zero here is exact: instability vanishes only when every
/// agent either holds nothing unaccepted or never lies.
pub fn detect_convergence(instabilities: &[f64], window: usize) -> Option<usize> {
    assert!(window >= 1, "window must be at least 1");
    let mut run_start = 0;
    let mut run_len = 0;
    for (t, &value) in instabilities.iter().enumerate() {
        if value == 0.0 {
            if run_len == 0 {
                run_start = t;
            }
            run_len += 1;
            if run_len == window {
                return Some(run_start);
            }
        } else {
            run_len = 0;
        }
    }
    None
}
