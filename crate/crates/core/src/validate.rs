//! Colony validation. Structural problems (overlapping desires, shape
//! mismatches) make results meaningless and count as errors; trust-assumption
//! violations are reported as warnings and the simulation proceeds anyway.

use std::collections::BTreeSet;

use crate::model::Colony;

/// A triple where the relayed trust through `c` exceeds the direct trust:
/// tau(a, b) < tau(a, c) * tau(c, b). Ids are the agents' declared ids.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustViolation {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub direct: f64,
    pub relayed: f64,
}

/// An agent wishing the same proposition both true and false.
#[derive(Debug, Clone, PartialEq)]
pub struct DesireOverlap {
    pub agent: u32,
    pub propositions: BTreeSet<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Declared ids of agents whose self-trust is not exactly 1.
    pub diagonal_violations: Vec<u32>,
    /// Every ordered triple violating the relative-trust assumption.
    pub relative_trust_violations: Vec<TrustViolation>,
    pub desire_overlaps: Vec<DesireOverlap>,
    /// Shape problems: trust size vs agent count, observation length vs
    /// space, desire indices out of range, observer set problems.
    pub dimension_mismatches: Vec<String>,
}

impl ValidationReport {
    /// Warnings leave the simulation well-defined.
    pub fn warning_count(&self) -> usize {
        self.diagonal_violations.len() + self.relative_trust_violations.len()
    }

    /// Errors do not.
    pub fn error_count(&self) -> usize {
        self.desire_overlaps.len() + self.dimension_mismatches.len()
    }

    pub fn is_clean(&self) -> bool {
        self.warning_count() == 0 && self.error_count() == 0
    }
}

/// Checks a colony against all structural invariants and trust assumptions.
/// Always returns a report; never rejects.
pub fn validate_colony(colony: &Colony) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = colony.agent_count();

    if colony.trust.len() != n {
        report.dimension_mismatches.push(format!(
            "trust matrix is {}x{} but the colony has {} agents",
            colony.trust.len(),
            colony.trust.len(),
            n
        ));
    }
    if colony.initial_observation.len() != colony.space.len() {
        report.dimension_mismatches.push(format!(
            "initial observation has {} bits, space has {} propositions",
            colony.initial_observation.len(),
            colony.space.len()
        ));
    }
    for agent in &colony.agents {
        if let Some(index) = agent.desire.max_index() {
            if index >= colony.space.len() {
                report.dimension_mismatches.push(format!(
                    "agent {} desires proposition index {index}, space has {}",
                    agent.id,
                    colony.space.len()
                ));
            }
        }
    }
    if colony.observers.is_empty() {
        report
            .dimension_mismatches
            .push("observer set is empty".to_string());
    }
    for &ob in &colony.observers {
        if ob >= n {
            report
                .dimension_mismatches
                .push(format!("observer index {ob} out of range"));
        }
    }
    if !colony.observers.is_empty() && colony.observers.len() >= n {
        report
            .dimension_mismatches
            .push("every agent is an observer; observers must be a strict subset".to_string());
    }

    for agent in &colony.agents {
        let shared = agent.desire.overlap();
        if !shared.is_empty() {
            report.desire_overlaps.push(DesireOverlap {
                agent: agent.id,
                propositions: shared,
            });
        }
    }

    let m = colony.trust.len().min(n);
    for a in 0..m {
        if colony.trust.get(a, a) != 1.0 {
            report.diagonal_violations.push(colony.agents[a].id);
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let direct = colony.trust.get(a, b);
                let relayed = colony.trust.get(a, c) * colony.trust.get(c, b);
                if direct < relayed {
                    report.relative_trust_violations.push(TrustViolation {
                        a: colony.agents[a].id,
                        b: colony.agents[b].id,
                        c: colony.agents[c].id,
                        direct,
                        relayed,
                    });
                }
            }
        }
    }

    report
}
