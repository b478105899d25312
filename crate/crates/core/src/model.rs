//! Core domain types: proposition spaces, bit-string rumors, desires,
//! agents, trust matrices and whole colonies.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Structural errors raised while building model values.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("proposition space must contain at least one proposition")]
    EmptySpace,
    #[error("proposition name {0:?} appears more than once")]
    DuplicateProposition(String),
    #[error("priority of {name:?} is {value}, outside [0, 1]")]
    PriorityOutOfRange { name: String, value: f64 },
    #[error("names and priorities differ in length ({names} vs {priorities})")]
    SpaceShape { names: usize, priorities: usize },
    #[error("rumor has {got} bits, expected {expected}")]
    RumorLength { got: usize, expected: usize },
    #[error("rumor strings may only contain '0' and '1', found {0:?}")]
    BadRumorChar(char),
    #[error("desire references proposition index {index}, space has {len}")]
    DesireIndexOutOfRange { index: usize, len: usize },
    #[error("veracity {0} outside [0, 1]")]
    VeracityOutOfRange(f64),
    #[error("accept threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("trust matrix row {row} has {cols} entries, expected {n}")]
    TrustRowShape { row: usize, cols: usize, n: usize },
    #[error("trust matrix has {rows} rows, expected {n}")]
    TrustShape { rows: usize, n: usize },
    #[error("trust value {value} at ({row}, {col}) outside [0, 1]")]
    TrustOutOfRange { row: usize, col: usize, value: f64 },
    #[error("trust matrix is {trust}x{trust} but the colony has {agents} agents")]
    TrustAgentsMismatch { trust: usize, agents: usize },
    #[error("observer set must be non-empty")]
    NoObservers,
    #[error("observer index {0} out of range")]
    ObserverOutOfRange(usize),
    #[error("every agent is an observer; observers must be a strict subset")]
    ObserversNotStrict,
    #[error("attractiveness {0} outside [0, 1]")]
    AttractivenessOutOfRange(f64),
}

/// The ordered proposition set and the social priority of each proposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionSpace {
    names: Vec<String>,
    priorities: Vec<f64>,
}

impl PropositionSpace {
    pub fn new(names: Vec<String>, priorities: Vec<f64>) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::EmptySpace);
        }
        if names.len() != priorities.len() {
            return Err(ModelError::SpaceShape {
                names: names.len(),
                priorities: priorities.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateProposition(name.clone()));
            }
        }
        for (name, &value) in names.iter().zip(&priorities) {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(ModelError::PriorityOutOfRange {
                    name: name.clone(),
                    value,
                });
            }
        }
        Ok(Self { names, priorities })
    }

    /// Space named `p1..pn` with one shared priority.
    pub fn uniform(n: usize, priority: f64) -> Self {
        let names = (1..=n).map(|i| format!("p{i}")).collect();
        Self::new(names, vec![priority; n]).expect("uniform space is well-formed")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn priorities(&self) -> &[f64] {
        &self.priorities
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn priority(&self, index: usize) -> f64 {
        self.priorities[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A rumor: one bit per proposition, `true` meaning the proposition is
/// asserted and `false` meaning its negation is.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rumor {
    bits: Vec<bool>,
}

impl Rumor {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set_bit(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn flip_bit(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for Rumor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Rumor {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(ModelError::BadRumorChar(other)),
            }
        }
        Ok(Self { bits })
    }
}

/// An agent's desire: propositions it wishes were true and propositions it
/// wishes were false. Everything else is inconsiderable to the agent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Desire {
    pub wished_true: BTreeSet<usize>,
    pub wished_false: BTreeSet<usize>,
}

impl Desire {
    pub fn new(
        wished_true: impl IntoIterator<Item = usize>,
        wished_false: impl IntoIterator<Item = usize>,
    ) -> Self {
        Self {
            wished_true: wished_true.into_iter().collect(),
            wished_false: wished_false.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Number of propositions the desire cares about.
    pub fn considered(&self) -> usize {
        self.wished_true.len() + self.wished_false.len()
    }

    /// Propositions appearing in both sets (must be empty for a valid desire).
    pub fn overlap(&self) -> BTreeSet<usize> {
        self.wished_true
            .intersection(&self.wished_false)
            .copied()
            .collect()
    }

    pub fn max_index(&self) -> Option<usize> {
        let a = self.wished_true.iter().next_back();
        let b = self.wished_false.iter().next_back();
        a.max(b).copied()
    }

    /// Index-range check against a space. Overlap is reported by
    /// `validate_colony`, not rejected here.
    pub fn check_indices(&self, space: &PropositionSpace) -> Result<(), ModelError> {
        if let Some(index) = self.max_index() {
            if index >= space.len() {
                return Err(ModelError::DesireIndexOutOfRange {
                    index,
                    len: space.len(),
                });
            }
        }
        Ok(())
    }
}

/// Signed membership view of a desire: +1 wished true, -1 wished false,
/// 0 inconsiderable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesireVector {
    entries: Vec<i8>,
}

impl DesireVector {
    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_desire(&self) -> Desire {
        let mut desire = Desire::empty();
        for (k, &e) in self.entries.iter().enumerate() {
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
}

/// Signed membership vector of a desire over a space.
pub fn desire_vector(
    desire: &Desire,
    space: &PropositionSpace,
) -> Result<DesireVector, ModelError> {
    desire.check_indices(space)?;
    let entries = (0..space.len())
        .map(|k| {
            if desire.wished_false.contains(&k) {
                -1
            } else if desire.wished_true.contains(&k) {
                1
            } else {
                0
            }
        })
        .collect();
    Ok(DesireVector { entries })
}

/// One received rumor with the trust weight it arrived under.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxEntry {
    pub rumor: Rumor,
    /// Position of the spreading agent in the colony.
    pub spreader: usize,
    /// Trust the receiver placed in the spreader when it heard the rumor.
    pub weight: f64,
}

/// Versions of the rumor an agent has received since it last spread.
/// Bit-identical rumors are stored once; the first weight wins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RumorBox {
    entries: Vec<BoxEntry>,
}

impl RumorBox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores a received rumor. Returns false when a bit-identical rumor is
    /// already present (the new copy and its weight are dropped).
    pub fn hear(&mut self, rumor: Rumor, spreader: usize, weight: f64) -> bool {
        if self.contains(&rumor) {
            return false;
        }
        self.entries.push(BoxEntry {
            rumor,
            spreader,
            weight,
        });
        true
    }

    pub fn contains(&self, rumor: &Rumor) -> bool {
        self.entries.iter().any(|e| &e.rumor == rumor)
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BoxEntry] {
        &self.entries
    }
}

/// One agent: desire, veracity, accepting threshold, rumor box and the most
/// recent version it promoted.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    /// Declared id, used in scenario files and printed output. The agent's
    /// position in `Colony::agents` is what internal references use.
    pub id: u32,
    pub desire: Desire,
    pub veracity: f64,
    pub accept_threshold: f64,
    pub rumor_box: RumorBox,
    pub last_promoted: Option<Rumor>,
}

impl Agent {
    pub fn new(
        id: u32,
        desire: Desire,
        veracity: f64,
        accept_threshold: f64,
    ) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&veracity) || !veracity.is_finite() {
            return Err(ModelError::VeracityOutOfRange(veracity));
        }
        if !(0.0..=1.0).contains(&accept_threshold) || !accept_threshold.is_finite() {
            return Err(ModelError::ThresholdOutOfRange(accept_threshold));
        }
        Ok(Self {
            id,
            desire,
            veracity,
            accept_threshold,
            rumor_box: RumorBox::new(),
            last_promoted: None,
        })
    }
}

/// Trust between every ordered pair of agents. `get(receiver, spreader)` is
/// the weight the receiver gives rumors arriving from the spreader.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustMatrix {
    n: usize,
    values: Vec<f64>,
}

impl TrustMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::TrustRowShape {
                    row: i,
                    cols: row.len(),
                    n,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                    return Err(ModelError::TrustOutOfRange {
                        row: i,
                        col: j,
                        value,
                    });
                }
                values.push(value);
            }
        }
        Ok(Self { n, values })
    }

    /// Complete matrix with 1.0 on the diagonal and one shared value elsewhere.
    pub fn uniform(n: usize, off_diagonal: f64) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 1.0 } else { off_diagonal })
                    .collect()
            })
            .collect();
        Self::new(rows).expect("uniform trust matrix is well-formed")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, receiver: usize, spreader: usize) -> f64 {
        self.values[receiver * self.n + spreader]
    }

    pub fn set(&mut self, receiver: usize, spreader: usize, value: f64) {
        self.values[receiver * self.n + spreader] = value;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.values[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// A full scenario in memory: the proposition space, the agent population,
/// the trust network, who observed the initial event and what they saw.
#[derive(Debug, Clone, PartialEq)]
pub struct Colony {
    pub space: PropositionSpace,
    pub agents: Vec<Agent>,
    pub trust: TrustMatrix,
    /// Positions (not declared ids) of the observers.
    pub observers: BTreeSet<usize>,
    pub initial_observation: Rumor,
    /// Bonus added to the fit ratio under `AcceptMode::Considered`.
    pub attractiveness: f64,
}

impl Colony {
    pub fn new(
        space: PropositionSpace,
        agents: Vec<Agent>,
        trust: TrustMatrix,
        observers: BTreeSet<usize>,
        initial_observation: Rumor,
        attractiveness: f64,
    ) -> Result<Self, ModelError> {
        if trust.len() != agents.len() {
            return Err(ModelError::TrustAgentsMismatch {
                trust: trust.len(),
                agents: agents.len(),
            });
        }
        if initial_observation.len() != space.len() {
            return Err(ModelError::RumorLength {
                got: initial_observation.len(),
                expected: space.len(),
            });
        }
        for agent in &agents {
            agent.desire.check_indices(&space)?;
        }
        if observers.is_empty() {
            return Err(ModelError::NoObservers);
        }
        for &ob in &observers {
            if ob >= agents.len() {
                return Err(ModelError::ObserverOutOfRange(ob));
            }
        }
        if observers.len() == agents.len() {
            return Err(ModelError::ObserversNotStrict);
        }
        if !(0.0..=1.0).contains(&attractiveness) || !attractiveness.is_finite() {
            return Err(ModelError::AttractivenessOutOfRange(attractiveness));
        }
        Ok(Self {
            space,
            agents,
            trust,
            observers,
            initial_observation,
            attractiveness,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }
}
