//! State fidelity, tolerance counts and composite-fidelity projections.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::{count_multiqubit_gates, NativeGateSet, WalkSpec};
use crate::error::{Error, Result};
use crate::state::ProbabilityTable;

/// Tolerances reported by [`ToleranceReport`].
pub const TOLERANCES: [f64; 3] = [0.99, 0.999, 0.9999];

/// `(1 - H²)²` with `H² = ½ Σ (√p − √q)²` on the raw, unnormalised tables.
pub fn hellinger_fidelity(p: &ProbabilityTable, q: &ProbabilityTable) -> Result<f64> {
    if p.qubits() != q.qubits() {
        return Err(Error::input("probability tables cover different qubits"));
    }
    let (pp, qq) = (p.probabilities(), q.probabilities());
    if let Some(v) = pp.iter().chain(qq).find(|v| !(**v >= 0.0)) {
        return Err(Error::input(format!("negative or undefined probability {v}")));
    }
    let h2: f64 = 0.5 * pp.iter().zip(qq).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum::<f64>();
    Ok((1.0 - h2).clamp(0.0, 1.0).powi(2))
}

/// Closed-form fidelity of a normalised table against itself scaled by `s²`.
pub fn scaled_fidelity(s: f64) -> f64 {
    (1.0 - 0.5 * (1.0 - s).powi(2)).powi(2)
}

/// Largest `T` with `f_t >= tol` for every `t <= T`.
pub fn steps_within_tolerance(fidelities: &[f64], tol: f64) -> usize {
    fidelities.iter().take_while(|f| **f >= tol).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToleranceEntry {
    pub tolerance: f64,
    pub steps_within: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToleranceReport {
    pub entries: Vec<ToleranceEntry>,
}

impl ToleranceReport {
    pub fn from_fidelities(fidelities: &[f64]) -> Self {
        ToleranceReport {
            entries: TOLERANCES
                .iter()
                .map(|&tolerance| ToleranceEntry {
                    tolerance,
                    steps_within: steps_within_tolerance(fidelities, tolerance),
                })
                .collect(),
        }
    }

    pub fn steps_within(&self, tolerance: f64) -> Option<usize> {
        self.entries.iter().find(|e| e.tolerance == tolerance).map(|e| e.steps_within)
    }
}

/// `∏ F_r ^ count_r`.
pub fn composite_fidelity(counts: &BTreeMap<usize, u64>, fidelities: &BTreeMap<usize, f64>) -> Result<f64> {
    let mut f = 1.0;
    for (rank, count) in counts {
        let fr = fidelities
            .get(rank)
            .ok_or_else(|| Error::input(format!("no fidelity given for rank {rank}")))?;
        f *= fr.powf(*count as f64);
    }
    Ok(f)
}

/// Native multiqubit gate fidelities keyed by rank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelitySet {
    pub by_rank: BTreeMap<usize, f64>,
}

impl FidelitySet {
    pub fn new(by_rank: BTreeMap<usize, f64>) -> Result<Self> {
        if by_rank.is_empty() {
            return Err(Error::input("empty fidelity set"));
        }
        for (r, f) in &by_rank {
            if !(*f > 0.0 && *f <= 1.0) {
                return Err(Error::input(format!("fidelity {f} for rank {r} outside (0, 1]")));
            }
        }
        let values: Vec<(usize, f64)> = by_rank.iter().map(|(r, f)| (*r, *f)).collect();
        for w in values.windows(2) {
            if w[1].1 > w[0].1 {
                return Err(Error::input(format!(
                    "fidelity of rank {} ({}) exceeds that of rank {} ({})",
                    w[1].0, w[1].1, w[0].0, w[0].1
                )));
            }
        }
        Ok(FidelitySet { by_rank })
    }

    /// Assign `values` sorted high to low to consecutive ranks from `first_rank`.
    pub fn descending(first_rank: usize, values: &[f64]) -> Result<Self> {
        let mut v = values.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        FidelitySet::new(v.into_iter().enumerate().map(|(i, f)| (first_rank + i, f)).collect())
    }
}

/// The three fidelity sets of the gate-set comparison, for ranks 3, 4 and 5.
pub fn default_fidelity_sets() -> Vec<FidelitySet> {
    [[0.991, 0.992, 0.993], [0.99, 0.995, 0.999], [0.99991, 0.99992, 0.99993]]
        .iter()
        .map(|v| FidelitySet::descending(3, v).expect("static sets are ordered"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositeRow {
    pub n: usize,
    pub from_rank: usize,
    pub to_rank: usize,
    pub counts_from: BTreeMap<usize, u64>,
    pub counts_to: BTreeMap<usize, u64>,
    pub fidelity_from: Vec<f64>,
    pub fidelity_to: Vec<f64>,
    pub increase_percent: Vec<f64>,
    pub mean_increase_percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositeReport {
    pub coin_qubits: usize,
    pub rows: Vec<CompositeRow>,
}

impl CompositeReport {
    pub fn row(&self, n: usize, from_rank: usize) -> Option<&CompositeRow> {
        self.rows.iter().find(|r| r.n == n && r.from_rank == from_rank)
    }
}

/// Percentage increase in composite fidelity for each `ρ → ρ + 1` transition.
pub fn gate_set_comparison(
    n_list: &[usize],
    fidelity_sets: &[FidelitySet],
    transitions: &[usize],
    coin_qubits: usize,
) -> Result<CompositeReport> {
    if fidelity_sets.is_empty() {
        return Err(Error::input("no fidelity sets given"));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let spec = WalkSpec::new(n, coin_qubits, 1)?;
        for &from in transitions {
            let to = from + 1;
            let counts_from = count_multiqubit_gates(&spec, &NativeGateSet::new(from)?)?;
            let counts_to = count_multiqubit_gates(&spec, &NativeGateSet::new(to)?)?;
            let mut fidelity_from = Vec::new();
            let mut fidelity_to = Vec::new();
            let mut increase = Vec::new();
            for set in fidelity_sets {
                let f_old = composite_fidelity(&counts_from, &set.by_rank)?;
                let f_new = composite_fidelity(&counts_to, &set.by_rank)?;
                fidelity_from.push(f_old);
                fidelity_to.push(f_new);
                increase.push((f_new - f_old) / f_old * 100.0);
            }
            let mean = increase.iter().sum::<f64>() / increase.len() as f64;
            rows.push(CompositeRow {
                n,
                from_rank: from,
                to_rank: to,
                counts_from,
                counts_to,
                fidelity_from,
                fidelity_to,
                increase_percent: increase,
                mean_increase_percent: mean,
            });
        }
    }
    Ok(CompositeReport { coin_qubits, rows })
}
