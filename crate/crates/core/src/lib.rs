//! Deterministic, seed-reproducible simulator of rumor propagation over
//! complete trust-weighted agent networks.
//!
//! Rumors are fixed-length bit strings over an ordered proposition set.
//! Agents hold desires (propositions they wish true or false), merge the
//! versions they hear by trust-weighted majority, decide whether the merged
//! version fits them well enough to spread, and lie about one ill-fitting
//! proposition at a time with probability 1 - veracity. The `metrics` module
//! measures how unstable a colony is generation by generation and how
//! homogeneous its desires are; stability over a window is how runs detect
//! convergence.

pub mod dissemination;
pub mod fixtures;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod scenario;
pub mod validate;

pub use dissemination::{
    accept, classify, merge_box, mutate, run, select_mutation_target, take_turn, AcceptMode,
    Classification, RunConfig, Simulation, TurnAction, TurnOutcome,
};
pub use fixtures::{builtin_example, BuiltinExample};
pub use metrics::{
    conflicts, consensus, detect_convergence, heterogeneity, homogeneity, identical_distance,
    individual_instability, social_instability, GenerationRecord, Trace,
};
pub use model::{
    desire_vector, Agent, BoxEntry, Colony, Desire, DesireVector, ModelError, PropositionSpace,
    Rumor, RumorBox, TrustMatrix,
};
pub use rng::RandomSource;
pub use scenario::{
    load_scenario, load_scenario_path, realize, scenario_from, write_scenario, write_scenario_path,
    write_trace, write_trace_path, LoadedScenario, ScenarioError, ScenarioFile,
};
pub use validate::{validate_colony, DesireOverlap, TrustViolation, ValidationReport};
