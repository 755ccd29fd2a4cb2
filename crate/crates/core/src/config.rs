//! Experiment configuration files (TOML).

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{MovePolicy, NativeGateSet, WalkSpec};
use crate::error::{Error, Result};
use crate::metrics::{default_fidelity_sets, FidelitySet};
use crate::noise::{DampingConvention, NoiseParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    SweepA,
    Tolerance,
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A coin angle given once for every step, or step by step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angles {
    Constant(f64),
    PerStep(Vec<f64>),
}

impl Angles {
    fn expand(&self, steps: usize, key: &str) -> Result<Vec<f64>> {
        match self {
            Angles::Constant(v) => Ok(vec![*v; steps]),
            Angles::PerStep(v) if v.len() == steps => Ok(v.clone()),
            Angles::PerStep(v) => Err(Error::config(
                key,
                format!("schedule has {} entries but the walk has {steps} steps", v.len()),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: Option<ExperimentKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    #[serde(default = "default_n")]
    pub position_qubits: usize,
    #[serde(default = "default_nc")]
    pub coin_qubits: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    pub theta: Option<Angles>,
    pub phi: Option<Angles>,
}

fn default_n() -> usize {
    2
}
fn default_nc() -> usize {
    1
}
fn default_steps() -> usize {
    21
}

impl Default for WalkSection {
    fn default() -> Self {
        WalkSection {
            position_qubits: default_n(),
            coin_qubits: default_nc(),
            steps: default_steps(),
            theta: None,
            phi: None,
        }
    }
}

impl WalkSection {
    pub fn to_spec(&self) -> Result<WalkSpec> {
        self.to_spec_for(self.position_qubits, self.coin_qubits)
    }

    /// Same schedules on a different walk size.
    pub fn to_spec_for(&self, n: usize, coin_qubits: usize) -> Result<WalkSpec> {
        if self.steps == 0 {
            return Err(Error::config("walk.steps", "must be at least 1"));
        }
        if !(1..=2).contains(&coin_qubits) {
            return Err(Error::config("walk.coin_qubits", format!("must be 1 or 2, got {coin_qubits}")));
        }
        let theta = self
            .theta
            .clone()
            .unwrap_or(Angles::Constant(FRAC_PI_2))
            .expand(self.steps, "walk.theta")?;
        let phi = match (coin_qubits, &self.phi) {
            (1, Some(_)) => return Err(Error::config("walk.phi", "only a two-qubit coin takes phi")),
            (1, None) => None,
            (_, p) => Some(
                p.clone()
                    .unwrap_or(Angles::Constant(FRAC_PI_2))
                    .expand(self.steps, "walk.phi")?,
            ),
        };
        WalkSpec::with_schedules(n, coin_qubits, theta, phi).map_err(|e| match e {
            Error::InvalidInput(m) => Error::config("walk", m),
            other => other,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatesSection {
    #[serde(default = "default_rank")]
    pub max_rank: usize,
    pub param_a: Option<f64>,
    pub a_list: Option<Vec<f64>>,
    /// Fixed number of moves per step; absent means the automatic policy.
    pub moves_per_step: Option<usize>,
}

fn default_rank() -> usize {
    3
}

impl Default for GatesSection {
    fn default() -> Self {
        GatesSection {
            max_rank: default_rank(),
            param_a: None,
            a_list: None,
            moves_per_step: None,
        }
    }
}

impl GatesSection {
    pub fn to_gate_set(&self) -> Result<NativeGateSet> {
        self.gate_set_for(self.max_rank, self.param_a)
    }

    pub fn gate_set_for(&self, max_rank: usize, a: Option<f64>) -> Result<NativeGateSet> {
        let mut g = NativeGateSet::new(max_rank).map_err(|e| Error::config("gates.max_rank", e.to_string()))?;
        if let Some(a) = a {
            g = g.with_param_a(a).map_err(|e| Error::config("gates.param_a", e.to_string()))?;
        }
        if let Some(m) = self.moves_per_step {
            g = g.with_move_policy(MovePolicy::PerStep(m));
        }
        Ok(g)
    }

    pub fn a_values(&self) -> Result<Vec<f64>> {
        let list = self
            .a_list
            .clone()
            .ok_or_else(|| Error::config("gates.a_list", "sweep-a needs a list of a values"))?;
        if list.is_empty() {
            return Err(Error::config("gates.a_list", "list is empty"));
        }
        if let Some(bad) = list.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
            return Err(Error::config("gates.a_list", format!("{bad} is not a finite value >= 0")));
        }
        Ok(list)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub eps_init: Option<f64>,
    pub eps_read: Option<f64>,
    pub t1: Option<f64>,
    pub tau_gate: Option<f64>,
    pub tau_move: Option<f64>,
    pub gate_errors: Option<bool>,
    pub passive: Option<bool>,
    pub spam: Option<bool>,
    pub convention: Option<DampingConvention>,
    pub idle_on_single_qubit_gates: Option<bool>,
}

impl NoiseSection {
    pub fn to_params(&self) -> Result<NoiseParams> {
        let d = NoiseParams::default();
        let p = NoiseParams {
            eps_init: self.eps_init.unwrap_or(d.eps_init),
            eps_read: self.eps_read.unwrap_or(d.eps_read),
            t1: self.t1.unwrap_or(d.t1),
            tau_gate: self.tau_gate.unwrap_or(d.tau_gate),
            tau_move: self.tau_move.unwrap_or(d.tau_move),
            gate_errors_enabled: self.gate_errors.unwrap_or(d.gate_errors_enabled),
            passive_enabled: self.passive.unwrap_or(d.passive_enabled),
            spam_enabled: self.spam.unwrap_or(d.spam_enabled),
            convention: self.convention.unwrap_or(d.convention),
            idle_on_single_qubit_gates: self.idle_on_single_qubit_gates.unwrap_or(d.idle_on_single_qubit_gates),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    /// `[n, coin_qubits]` pairs; defaults to the walk section alone.
    pub walks: Option<Vec<[usize; 2]>>,
    /// Gate sets to compare; defaults to `gates.max_rank` alone.
    pub max_ranks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeSection {
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_transitions")]
    pub transitions: Vec<usize>,
    #[serde(default = "default_composite_coin")]
    pub coin_qubits: usize,
    /// Fidelities for consecutive ranks starting at `first_rank`, highest rank last.
    pub fidelity_sets: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_first_rank")]
    pub first_rank: usize,
}

fn default_n_list() -> Vec<usize> {
    vec![5, 10, 15, 20]
}
fn default_transitions() -> Vec<usize> {
    vec![3, 4]
}
fn default_composite_coin() -> usize {
    2
}
fn default_first_rank() -> usize {
    3
}

impl Default for CompositeSection {
    fn default() -> Self {
        CompositeSection {
            n_list: default_n_list(),
            transitions: default_transitions(),
            coin_qubits: default_composite_coin(),
            fidelity_sets: None,
            first_rank: default_first_rank(),
        }
    }
}

impl CompositeSection {
    pub fn sets(&self) -> Result<Vec<FidelitySet>> {
        match &self.fidelity_sets {
            None => Ok(default_fidelity_sets()),
            Some(sets) => sets
                .iter()
                .map(|v| {
                    FidelitySet::new(
                        v.iter().enumerate().map(|(i, f)| (self.first_rank + i, *f)).collect(),
                    )
                    .map_err(|e| Error::config("composite.fidelity_sets", e.to_string()))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub walk: WalkSection,
    #[serde(default)]
    pub gates: GatesSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerance: ToleranceSection,
    #[serde(default)]
    pub composite: CompositeSection,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let key = e
                .span()
                .and_then(|s| text.get(s))
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| "<document>".into());
            Error::config(key, e.message().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
