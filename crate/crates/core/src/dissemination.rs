//! The generation engine: merge received versions, decide acceptance,
//! mutate toward the agent's desire, broadcast, repeat.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::{self, GenerationRecord, Trace};
use crate::model::{Agent, Colony, Desire, PropositionSpace, Rumor, RumorBox};
use crate::rng::RandomSource;

/// How an agent scores a merged rumor against its desire.
///
/// Serialized as `"eq8"` / `"alg5"` in scenario files and on the command
/// line; those tokens are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AcceptMode {
    /// Fit ratio over the whole proposition set; the attractiveness bonus is
    /// not applied.
    #[serde(rename = "eq8")]
    AllProps,
    /// Fit ratio over the agent's considered propositions only, taken as 1
    /// when the agent considers nothing; the colony's attractiveness bonus is
    /// added before comparing against the threshold. This is the default.
    #[serde(rename = "alg5")]
    #[default]
    Considered,
}

impl fmt::Display for AcceptMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcceptMode::AllProps => "eq8",
            AcceptMode::Considered => "alg5",
        })
    }
}

impl FromStr for AcceptMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eq8" => Ok(AcceptMode::AllProps),
            "alg5" => Ok(AcceptMode::Considered),
            other => Err(format!(
                "unknown accept mode {other:?} (expected eq8 or alg5)"
            )),
        }
    }
}

/// How one rumor splits the proposition set for one agent: matches the
/// desire, contradicts it, or falls outside it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Classification {
    pub accepted: BTreeSet<usize>,
    pub unaccepted: BTreeSet<usize>,
    pub inconsiderable: BTreeSet<usize>,
}

impl Classification {
    pub fn considered(&self) -> usize {
        self.accepted.len() + self.unaccepted.len()
    }
}

/// Splits the rumor's propositions into accepted / unaccepted /
/// inconsiderable for the given desire.
pub fn classify(rumor: &Rumor, desire: &Desire) -> Classification {
    if let Some(max) = desire.max_index() {
        assert!(
            max < rumor.len(),
            "desire references proposition {max} but the rumor has {} bits",
            rumor.len()
        );
    }
    let mut class = Classification::default();
    for k in 0..rumor.len() {
        let bit = rumor.bit(k);
        if desire.wished_true.contains(&k) {
            if bit {
                class.accepted.insert(k);
            } else {
                class.unaccepted.insert(k);
            }
        } else if desire.wished_false.contains(&k) {
            if bit {
                class.unaccepted.insert(k);
            } else {
                class.accepted.insert(k);
            }
        } else {
            class.inconsiderable.insert(k);
        }
    }
    class
}

/// Weighted per-bit majority of everything in the box. A bit comes out 1
/// when the trust-weighted average is at least one half, so exact ties
/// resolve to 1. Returns `None` on an empty box; a box whose total weight is
/// zero merges to the all-zero rumor.
pub fn merge_box(rumor_box: &RumorBox) -> Option<Rumor> {
    let entries = rumor_box.entries();
    let first = entries.first()?;
    let n = first.rumor.len();
    let total: f64 = entries.iter().map(|e| e.weight).sum();
    if total <= 0.0 {
        return Some(Rumor::zeros(n));
    }
    let bits = (0..n)
        .map(|j| {
            let favor: f64 = entries
                .iter()
                .filter(|e| e.rumor.bit(j))
                .map(|e| e.weight)
                .sum();
            2.0 * favor >= total
        })
        .collect();
    Some(Rumor::new(bits))
}

/// Accept decision for a merged rumor, plus the fit ratio that produced it.
pub fn accept(rumor: &Rumor, agent: &Agent, attractiveness: f64, mode: AcceptMode) -> (bool, f64) {
    let class = classify(rumor, &agent.desire);
    match mode {
        AcceptMode::AllProps => {
            let ratio = class.accepted.len() as f64 / rumor.len() as f64;
            (ratio > agent.accept_threshold, ratio)
        }
        AcceptMode::Considered => {
            let considered = class.considered();
            let ratio = if considered == 0 {
                1.0
            } else {
                class.accepted.len() as f64 / considered as f64
            };
            (attractiveness + ratio > agent.accept_threshold, ratio)
        }
    }
}

/// Roulette-wheel draw over the unaccepted propositions, weighted by
/// priority. Falls back to a uniform draw when every priority in the set is
/// zero.
pub fn select_mutation_target(
    unaccepted: &BTreeSet<usize>,
    space: &PropositionSpace,
    rng: &mut RandomSource,
) -> usize {
    assert!(
        !unaccepted.is_empty(),
        "mutation target requested from an empty set"
    );
    let total: f64 = unaccepted.iter().map(|&k| space.priority(k)).sum();
    if total <= 0.0 {
        let nth = rng.pick_index(unaccepted.len());
        return *unaccepted.iter().nth(nth).expect("index within set");
    }
    let mut draw = rng.fraction() * total;
    let mut last_weighted = None;
    for &k in unaccepted {
        let weight = space.priority(k);
        if weight <= 0.0 {
            continue;
        }
        if draw < weight {
            return k;
        }
        draw -= weight;
        last_weighted = Some(k);
    }
    // Float drift can push the draw past the final slot.
    last_weighted.expect("at least one positive priority")
}

/// Applies the agent's desire to an accepted rumor: one unaccepted
/// proposition is drawn by priority roulette and flipped with probability
/// 1 - veracity. Returns the promoted version and the flipped index, if any.
pub fn mutate(
    rumor: &Rumor,
    agent: &Agent,
    space: &PropositionSpace,
    rng: &mut RandomSource,
) -> (Rumor, Option<usize>) {
    let unaccepted = classify(rumor, &agent.desire).unaccepted;
    if unaccepted.is_empty() {
        return (rumor.clone(), None);
    }
    let target = select_mutation_target(&unaccepted, space, rng);
    if rng.chance(1.0 - agent.veracity) {
        let mut promoted = rumor.clone();
        promoted.flip_bit(target);
        (promoted, Some(target))
    } else {
        (rumor.clone(), None)
    }
}

/// What one agent's turn did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnAction {
    SkippedEmptyBox,
    Rejected,
    Spread,
}

impl fmt::Display for TurnAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TurnAction::SkippedEmptyBox => "skipped_empty_box",
            TurnAction::Rejected => "rejected",
            TurnAction::Spread => "spread",
        })
    }
}

/// Outcome of one turn.
#[derive(Debug, Clone, PartialEq)]
pub struct TurnOutcome {
    /// Position of the active agent in the colony.
    pub agent_index: usize,
    /// Declared id of the active agent, echoed into traces.
    pub agent_id: u32,
    pub action: TurnAction,
    /// Present exactly when `action` is `Spread`.
    pub promoted: Option<Rumor>,
    pub mutated_index: Option<usize>,
    pub accept_ratio: f64,
}

/// One agent's full turn: merge its box, decide, mutate, broadcast.
///
/// On a rejection the box is left as it was; only an accepted turn clears it
/// and re-seeds it with the promoted version at full self-trust.
pub fn take_turn(
    colony: &mut Colony,
    agent_index: usize,
    mode: AcceptMode,
    rng: &mut RandomSource,
) -> TurnOutcome {
    let agent_id = colony.agents[agent_index].id;
    let Some(merged) = merge_box(&colony.agents[agent_index].rumor_box) else {
        return TurnOutcome {
            agent_index,
            agent_id,
            action: TurnAction::SkippedEmptyBox,
            promoted: None,
            mutated_index: None,
            accept_ratio: 0.0,
        };
    };
    let (accepted, accept_ratio) = accept(
        &merged,
        &colony.agents[agent_index],
        colony.attractiveness,
        mode,
    );
    if !accepted {
        return TurnOutcome {
            agent_index,
            agent_id,
            action: TurnAction::Rejected,
            promoted: None,
            mutated_index: None,
            accept_ratio,
        };
    }
    let (promoted, mutated_index) =
        mutate(&merged, &colony.agents[agent_index], &colony.space, rng);
    colony.agents[agent_index].last_promoted = Some(promoted.clone());
    for receiver in 0..colony.agents.len() {
        if receiver == agent_index {
            continue;
        }
        let weight = colony.trust.get(receiver, agent_index);
        colony.agents[receiver]
            .rumor_box
            .hear(promoted.clone(), agent_index, weight);
    }
    let own = &mut colony.agents[agent_index].rumor_box;
    own.clear();
    own.hear(promoted.clone(), agent_index, 1.0);
    TurnOutcome {
        agent_index,
        agent_id,
        action: TurnAction::Spread,
        promoted: Some(promoted),
        mutated_index,
        accept_ratio,
    }
}

/// Run parameters: budget, seed, accept mode and the convergence window.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub generations: u64,
    pub seed: u64,
    pub accept_mode: AcceptMode,
    /// Generations of exactly-zero instability required before a run counts
    /// as converged. `None` uses 20 generations per agent.
    pub stability_window: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            generations: 5000,
            seed: 0,
            accept_mode: AcceptMode::default(),
            stability_window: None,
        }
    }
}

impl RunConfig {
    pub fn window_for(&self, agent_count: usize) -> u64 {
        self.stability_window
            .unwrap_or(20 * agent_count as u64)
            .max(1)
    }
}

/// A dissemination process in flight over one colony.
#[derive(Debug, Clone)]
pub struct Simulation {
    colony: Colony,
    mode: AcceptMode,
    rng: RandomSource,
    generation: u64,
}

impl Simulation {
    /// Seeds every observer's box with the initial observation at full
    /// self-trust and arms the random source.
    pub fn new(mut colony: Colony, seed: u64, mode: AcceptMode) -> Self {
        let observers: Vec<usize> = colony.observers.iter().copied().collect();
        for ob in observers {
            let event = colony.initial_observation.clone();
            colony.agents[ob].rumor_box.hear(event, ob, 1.0);
        }
        Self {
            colony,
            mode,
            rng: RandomSource::from_seed(seed),
            generation: 0,
        }
    }

    pub fn colony(&self) -> &Colony {
        &self.colony
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// One generation: a uniformly chosen agent takes its turn, then the
    /// colony's instability and consensus are measured.
    pub fn step(&mut self) -> GenerationRecord {
        let active = self.rng.pick_index(self.colony.agents.len());
        let outcome = take_turn(&mut self.colony, active, self.mode, &mut self.rng);
        let instability = metrics::social_instability(&self.colony);
        let consensus = metrics::consensus(&self.colony);
        let record = GenerationRecord {
            generation: self.generation,
            outcome,
            instability,
            consensus,
        };
        self.generation += 1;
        record
    }
}

/// Runs a colony for the configured number of generations, stopping early
/// once instability has stayed at exactly zero for a full stability window.
pub fn run(colony: Colony, config: &RunConfig) -> Trace {
    let window = config.window_for(colony.agent_count());
    let homogeneity = metrics::homogeneity(&colony);
    let mut sim = Simulation::new(colony, config.seed, config.accept_mode);
    let mut records = Vec::new();
    let mut zero_run: u64 = 0;
    let mut converged_at = None;
    for _ in 0..config.generations {
        let record = sim.step();
        if record.instability == 0.0 {
            zero_run += 1;
        } else {
            zero_run = 0;
        }
        records.push(record);
        if zero_run >= window {
            converged_at = Some(records.len() as u64 - window);
            break;
        }
    }
    Trace {
        records,
        homogeneity,
        converged_at,
        seed: config.seed,
        accept_mode: config.accept_mode,
        stability_window: window,
    }
}
