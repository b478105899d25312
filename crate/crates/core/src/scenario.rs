//! Scenario files (JSON), loading with field-path diagnostics, and trace
//! export as CSV with a trailing metadata block.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dissemination::{AcceptMode, RunConfig};
use crate::metrics::Trace;
use crate::model::{Agent, Colony, Desire, PropositionSpace, Rumor, TrustMatrix};
use crate::validate::{validate_colony, ValidationReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Semantic {
        path: path.into(),
        message: message.into(),
    }
}

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub propositions: Vec<PropositionEntry>,
    /// Bit string over the propositions, in order.
    pub initial_observation: String,
    pub agents: Vec<AgentEntry>,
    /// Row-major square matrix; `trust[a][s]` is how much agent `a` (in file
    /// order) trusts rumors spread by agent `s`.
    pub trust: Vec<Vec<f64>>,
    /// Declared agent ids.
    pub observers: Vec<u32>,
    #[serde(default)]
    pub attractiveness: f64,
    #[serde(default)]
    pub run: RunDefaults,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionEntry {
    pub name: String,
    pub priority: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEntry {
    pub id: u32,
    /// Proposition names the agent wishes were true.
    #[serde(default)]
    pub gamma_plus: Vec<String>,
    /// Proposition names the agent wishes were false.
    #[serde(default)]
    pub gamma_minus: Vec<String>,
    #[serde(default = "default_veracity")]
    pub veracity: f64,
    #[serde(default = "default_threshold")]
    pub accept_threshold: f64,
}

fn default_veracity() -> f64 {
    0.5
}

fn default_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDefaults {
    #[serde(default = "default_generations")]
    pub generations: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub accept_mode: AcceptMode,
    #[serde(default)]
    pub stability_window: Option<u64>,
}

fn default_generations() -> u64 {
    5000
}

impl Default for RunDefaults {
    fn default() -> Self {
        Self {
            generations: default_generations(),
            seed: 0,
            accept_mode: AcceptMode::default(),
            stability_window: None,
        }
    }
}

/// A scenario realized in memory, with validation findings attached.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub colony: Colony,
    pub run: RunConfig,
    pub report: ValidationReport,
}

/// Parses and realizes a scenario document.
pub fn load_scenario(reader: impl Read) -> Result<LoadedScenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_reader(reader)?;
    realize(&file)
}

pub fn load_scenario_path(path: impl AsRef<Path>) -> Result<LoadedScenario, ScenarioError> {
    load_scenario(BufReader::new(File::open(path)?))
}

/// Turns a parsed document into a colony and run config, checking every
/// field and naming the offending one on failure.
pub fn realize(file: &ScenarioFile) -> Result<LoadedScenario, ScenarioError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(semantic(
            "schema_version",
            format!(
                "unsupported version {} (this build reads {})",
                file.schema_version, SCHEMA_VERSION
            ),
        ));
    }
    if file.propositions.is_empty() {
        return Err(semantic(
            "propositions",
            "must list at least one proposition",
        ));
    }
    let mut names = Vec::with_capacity(file.propositions.len());
    let mut priorities = Vec::with_capacity(file.propositions.len());
    for (i, entry) in file.propositions.iter().enumerate() {
        if names.contains(&entry.name) {
            return Err(semantic(
                format!("propositions[{i}].name"),
                format!("duplicate proposition {:?}", entry.name),
            ));
        }
        if !(0.0..=1.0).contains(&entry.priority) || !entry.priority.is_finite() {
            return Err(semantic(
                format!("propositions[{i}].priority"),
                format!("{} is outside [0, 1]", entry.priority),
            ));
        }
        names.push(entry.name.clone());
        priorities.push(entry.priority);
    }
    let space = PropositionSpace::new(names, priorities)
        .map_err(|e| semantic("propositions", e.to_string()))?;

    let observation: Rumor = file
        .initial_observation
        .parse()
        .map_err(|e: crate::model::ModelError| semantic("initial_observation", e.to_string()))?;
    if observation.len() != space.len() {
        return Err(semantic(
            "initial_observation",
            format!(
                "has {} bits but there are {} propositions",
                observation.len(),
                space.len()
            ),
        ));
    }

    if file.agents.is_empty() {
        return Err(semantic("agents", "must list at least one agent"));
    }
    let mut ids = BTreeSet::new();
    let mut agents = Vec::with_capacity(file.agents.len());
    for (i, entry) in file.agents.iter().enumerate() {
        if !ids.insert(entry.id) {
            return Err(semantic(
                format!("agents[{i}].id"),
                format!("duplicate agent id {}", entry.id),
            ));
        }
        let resolve = |field: &str, names: &[String]| -> Result<Vec<usize>, ScenarioError> {
            names
                .iter()
                .enumerate()
                .map(|(j, name)| {
                    space.index_of(name).ok_or_else(|| {
                        semantic(
                            format!("agents[{i}].{field}[{j}]"),
                            format!("unknown proposition {name:?}"),
                        )
                    })
                })
                .collect()
        };
        let wished_true = resolve("gamma_plus", &entry.gamma_plus)?;
        let wished_false = resolve("gamma_minus", &entry.gamma_minus)?;
        let desire = Desire::new(wished_true, wished_false);
        let agent = Agent::new(entry.id, desire, entry.veracity, entry.accept_threshold)
            .map_err(|e| semantic(format!("agents[{i}]"), e.to_string()))?;
        agents.push(agent);
    }

    let n = agents.len();
    if file.trust.len() != n {
        return Err(semantic(
            "trust",
            format!("has {} rows but there are {n} agents", file.trust.len()),
        ));
    }
    for (i, row) in file.trust.iter().enumerate() {
        if row.len() != n {
            return Err(semantic(
                format!("trust[{i}]"),
                format!("has {} entries but there are {n} agents", row.len()),
            ));
        }
        for (j, &value) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(semantic(
                    format!("trust[{i}][{j}]"),
                    format!("{value} is outside [0, 1]"),
                ));
            }
        }
    }
    let trust =
        TrustMatrix::new(file.trust.clone()).map_err(|e| semantic("trust", e.to_string()))?;

    if file.observers.is_empty() {
        return Err(semantic("observers", "must name at least one observer"));
    }
    let mut observers = BTreeSet::new();
    for (i, id) in file.observers.iter().enumerate() {
        let position = agents
            .iter()
            .position(|a| a.id == *id)
            .ok_or_else(|| semantic(format!("observers[{i}]"), format!("unknown agent id {id}")))?;
        observers.insert(position);
    }
    if observers.len() == n {
        return Err(semantic(
            "observers",
            "every agent is an observer; observers must be a strict subset",
        ));
    }

    if !(0.0..=1.0).contains(&file.attractiveness) || !file.attractiveness.is_finite() {
        return Err(semantic(
            "attractiveness",
            format!("{} is outside [0, 1]", file.attractiveness),
        ));
    }

    if file.run.generations == 0 {
        return Err(semantic("run.generations", "must be at least 1"));
    }

    let colony = Colony::new(
        space,
        agents,
        trust,
        observers,
        observation,
        file.attractiveness,
    )
    .map_err(|e| semantic("scenario", e.to_string()))?;
    let report = validate_colony(&colony);
    let run = RunConfig {
        generations: file.run.generations,
        seed: file.run.seed,
        accept_mode: file.run.accept_mode,
        stability_window: file.run.stability_window,
    };
    Ok(LoadedScenario {
        colony,
        run,
        report,
    })
}

/// Renders a colony and run config back into a document.
pub fn scenario_from(colony: &Colony, run: &RunConfig, notes: Vec<String>) -> ScenarioFile {
    let propositions = colony
        .space
        .names()
        .iter()
        .zip(colony.space.priorities())
        .map(|(name, &priority)| PropositionEntry {
            name: name.clone(),
            priority,
        })
        .collect();
    let agents = colony
        .agents
        .iter()
        .map(|a| AgentEntry {
            id: a.id,
            gamma_plus: a
                .desire
                .wished_true
                .iter()
                .map(|&k| colony.space.name(k).to_string())
                .collect(),
            gamma_minus: a
                .desire
                .wished_false
                .iter()
                .map(|&k| colony.space.name(k).to_string())
                .collect(),
            veracity: a.veracity,
            accept_threshold: a.accept_threshold,
        })
        .collect();
    ScenarioFile {
        schema_version: SCHEMA_VERSION,
        propositions,
        initial_observation: colony.initial_observation.to_string(),
        agents,
        trust: colony.trust.rows(),
        observers: colony
            .observers
            .iter()
            .map(|&i| colony.agents[i].id)
            .collect(),
        attractiveness: colony.attractiveness,
        run: RunDefaults {
            generations: run.generations,
            seed: run.seed,
            accept_mode: run.accept_mode,
            stability_window: run.stability_window,
        },
        notes,
    }
}

/// Writes a scenario document as pretty-printed JSON.
pub fn write_scenario(file: &ScenarioFile, mut writer: impl Write) -> Result<(), ScenarioError> {
    serde_json::to_writer_pretty(&mut writer, file)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn write_scenario_path(
    file: &ScenarioFile,
    path: impl AsRef<Path>,
) -> Result<(), ScenarioError> {
    write_scenario(file, BufWriter::new(File::create(path)?))
}

/// Writes a trace as CSV: a fixed header, one row per generation, then a
/// comment-prefixed metadata block. Reals keep full round-trip precision.
pub fn write_trace(trace: &Trace, mut writer: impl Write) -> io::Result<()> {
    writeln!(
        writer,
        "generation,active_agent,action,instability,consensus"
    )?;
    for record in &trace.records {
        writeln!(
            writer,
            "{},{},{},{},{}",
            record.generation,
            record.outcome.agent_id,
            record.outcome.action,
            record.instability,
            record.consensus
        )?;
    }
    writeln!(writer, "# seed={}", trace.seed)?;
    writeln!(writer, "# mode={}", trace.accept_mode)?;
    writeln!(writer, "# h_C={}", trace.homogeneity)?;
    match trace.converged_at {
        Some(m) => writeln!(writer, "# converged_at={m}")?,
        None => writeln!(writer, "# converged_at=none")?,
    }
    Ok(())
}

pub fn write_trace_path(trace: &Trace, path: impl AsRef<Path>) -> io::Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_trace(trace, &mut writer)?;
    writer.flush()
}
