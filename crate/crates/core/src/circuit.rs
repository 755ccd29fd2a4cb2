//! Walk-step construction and compilation into a bounded-rank native gate set.
//!
//! Qubit layout: position bits `x_1..x_n` at indices `0..n` (x_1 most
//! significant), coin `c_1` at `n`, `c_2` at `n + 1`, ancillas after that.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{ckx_label, IdealGate};
use crate::report::fmt_num;

/// Largest position register accepted for gate counting.
pub const MAX_COUNT_POSITION_QUBITS: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkSpec {
    position_qubits: usize,
    coin_qubits: usize,
    steps: usize,
    theta: Vec<f64>,
    phi: Option<Vec<f64>>,
}

impl WalkSpec {
    /// Walk with every coin angle set to π/2.
    pub fn new(position_qubits: usize, coin_qubits: usize, steps: usize) -> Result<Self> {
        let phi = (coin_qubits == 2).then(|| vec![FRAC_PI_2; steps]);
        WalkSpec::with_schedules(position_qubits, coin_qubits, vec![FRAC_PI_2; steps], phi)
    }

    pub fn with_schedules(
        position_qubits: usize,
        coin_qubits: usize,
        theta: Vec<f64>,
        phi: Option<Vec<f64>>,
    ) -> Result<Self> {
        if position_qubits == 0 || position_qubits > MAX_COUNT_POSITION_QUBITS {
            return Err(Error::input(format!(
                "position qubit count must lie in 1..={MAX_COUNT_POSITION_QUBITS}, got {position_qubits}"
            )));
        }
        if !(1..=2).contains(&coin_qubits) {
            return Err(Error::input(format!("coin qubit count must be 1 or 2, got {coin_qubits}")));
        }
        let steps = theta.len();
        if steps == 0 {
            return Err(Error::input("a walk needs at least one step"));
        }
        match (&phi, coin_qubits) {
            (None, 2) => return Err(Error::input("a two-qubit coin needs a phi schedule")),
            (Some(_), 1) => return Err(Error::input("a one-qubit coin takes no phi schedule")),
            (Some(p), _) if p.len() != steps => {
                return Err(Error::input("theta and phi schedules differ in length"))
            }
            _ => {}
        }
        let all = theta.iter().chain(phi.iter().flatten());
        if let Some(bad) = all.clone().find(|v| !v.is_finite()) {
            return Err(Error::input(format!("coin angle {bad} is not finite")));
        }
        Ok(WalkSpec {
            position_qubits,
            coin_qubits,
            steps,
            theta,
            phi,
        })
    }

    pub fn position_qubits(&self) -> usize {
        self.position_qubits
    }

    pub fn coin_qubits(&self) -> usize {
        self.coin_qubits
    }

    /// `n + n_c`, excluding ancillas.
    pub fn problem_qubits(&self) -> usize {
        self.position_qubits + self.coin_qubits
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn nodes(&self) -> u64 {
        1u64 << self.position_qubits
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> Option<&[f64]> {
        self.phi.as_deref()
    }

    pub fn position_indices(&self) -> Vec<usize> {
        (0..self.position_qubits).collect()
    }

    pub fn coin_indices(&self) -> Vec<usize> {
        (self.position_qubits..self.problem_qubits()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MovePolicy {
    /// A move before each multiqubit gate touching a qubit the previous one did not.
    Auto,
    /// A fixed number of moves at the start of every step.
    PerStep(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NativeGateSet {
    pub max_rank: usize,
    pub param_a: Option<f64>,
    pub move_policy: MovePolicy,
}

impl NativeGateSet {
    pub fn new(max_rank: usize) -> Result<Self> {
        if max_rank < 3 {
            return Err(Error::input(format!("max rank must be at least 3, got {max_rank}")));
        }
        Ok(NativeGateSet {
            max_rank,
            param_a: None,
            move_policy: MovePolicy::Auto,
        })
    }

    pub fn with_param_a(mut self, a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::input(format!("family parameter must be a finite a >= 0, got {a}")));
        }
        self.param_a = Some(a);
        Ok(self)
    }

    pub fn with_move_policy(mut self, policy: MovePolicy) -> Self {
        self.move_policy = policy;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    H,
    Ry(f64),
    /// Multi-controlled NOT; controls are every listed qubit except the last.
    Mcx,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateApplication {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateApplication {
    pub fn single(gate: IdealGate, qubit: usize) -> Result<Self> {
        let kind = match gate {
            IdealGate::X => GateKind::X,
            IdealGate::H => GateKind::H,
            IdealGate::Ry(t) => GateKind::Ry(t),
            other => return Err(Error::input(format!("`{other}` is not a circuit gate"))),
        };
        Ok(GateApplication { kind, qubits: vec![qubit] })
    }

    pub fn mcx(controls: &[usize], target: usize) -> Self {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        GateApplication { kind: GateKind::Mcx, qubits }
    }

    pub fn rank(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_multiqubit(&self) -> bool {
        self.qubits.len() > 1
    }

    pub fn controls(&self) -> &[usize] {
        match self.kind {
            GateKind::Mcx => &self.qubits[..self.qubits.len() - 1],
            _ => &[],
        }
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gate with no qubits")
    }

    pub fn label(&self) -> String {
        match self.kind {
            GateKind::X => "X".into(),
            GateKind::H => "H".into(),
            GateKind::Ry(t) => format!("RY({})", fmt_num(t)),
            GateKind::Mcx => ckx_label(self.qubits.len() - 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate(GateApplication),
    Move,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    ancillas: Vec<usize>,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(qubit_count: usize, ancillas: Vec<usize>, ops: Vec<Op>) -> Result<Self> {
        if ancillas.iter().any(|&a| a >= qubit_count) {
            return Err(Error::input("ancilla index out of range"));
        }
        for op in &ops {
            if let Op::Gate(g) = op {
                if g.qubits.is_empty() || g.qubits.iter().any(|&q| q >= qubit_count) {
                    return Err(Error::input(format!("gate `{}` addresses a missing qubit", g.label())));
                }
                if (1..g.qubits.len()).any(|i| g.qubits[..i].contains(&g.qubits[i])) {
                    return Err(Error::input(format!("gate `{}` repeats a qubit", g.label())));
                }
                if g.kind != GateKind::Mcx && g.qubits.len() != 1 {
                    return Err(Error::input(format!("`{}` acts on exactly one qubit", g.label())));
                }
            }
        }
        Ok(Circuit { qubit_count, ancillas, ops })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn move_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Move)).count()
    }

    pub fn max_rank(&self) -> usize {
        self.gates().map(GateApplication::rank).max().unwrap_or(0)
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateApplication> {
        self.ops.iter().filter_map(|o| match o {
            Op::Gate(g) => Some(g),
            Op::Move => None,
        })
    }

    /// Multiqubit gate counts keyed by rank.
    pub fn rank_census(&self) -> BTreeMap<usize, u64> {
        census(self.gates())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("QUBITS {}\n", self.qubit_count);
        for op in &self.ops {
            match op {
                Op::Move => s.push_str("MOVE\n"),
                Op::Gate(g) => {
                    s.push_str("GATE ");
                    s.push_str(&g.label());
                    for q in &g.qubits {
                        let _ = write!(s, " {q}");
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    /// Parse the line format written by [`Circuit::to_text`]. Ancilla bookkeeping is not stored there.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::input("empty circuit text"))?;
        let qubit_count = header
            .strip_prefix("QUBITS ")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::input(format!("bad circuit header `{header}`")))?;
        let mut ops = Vec::new();
        for line in lines {
            if line == "MOVE" {
                ops.push(Op::Move);
                continue;
            }
            let mut parts = line.split_whitespace();
            if parts.next() != Some("GATE") {
                return Err(Error::input(format!("bad circuit line `{line}`")));
            }
            let label = parts.next().ok_or_else(|| Error::input(format!("missing label in `{line}`")))?;
            let qubits = parts
                .map(|p| p.parse::<usize>().map_err(|_| Error::input(format!("bad qubit `{p}`"))))
                .collect::<Result<Vec<_>>>()?;
            let kind = parse_kind(label, qubits.len())?;
            ops.push(Op::Gate(GateApplication { kind, qubits }));
        }
        Circuit::new(qubit_count, Vec::new(), ops)
    }
}

fn parse_kind(label: &str, arity: usize) -> Result<GateKind> {
    if arity >= 2 && label == ckx_label(arity - 1) {
        return Ok(GateKind::Mcx);
    }
    match label.parse::<IdealGate>()? {
        IdealGate::X => Ok(GateKind::X),
        IdealGate::H => Ok(GateKind::H),
        IdealGate::Ry(t) => Ok(GateKind::Ry(t)),
        other => Err(Error::input(format!("`{other}` is not a circuit gate"))),
    }
}

fn census<'a>(gates: impl Iterator<Item = &'a GateApplication>) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for g in gates.filter(|g| g.is_multiqubit()) {
        *out.entry(g.rank()).or_insert(0) += 1;
    }
    out
}

/// Coin rotations for step `t`.
pub fn build_coin(spec: &WalkSpec, t: usize) -> Result<Vec<GateApplication>> {
    if t >= spec.steps {
        return Err(Error::input(format!("step {t} beyond a {}-step walk", spec.steps)));
    }
    let n = spec.position_qubits;
    let mut ops = vec![GateApplication { kind: GateKind::Ry(spec.theta[t]), qubits: vec![n] }];
    if let Some(phi) = &spec.phi {
        ops.push(GateApplication { kind: GateKind::Ry(phi[t]), qubits: vec![n + 1] });
    }
    Ok(ops)
}

/// Increment, X layer, decrement, X layer.
pub fn build_shift_abstract(spec: &WalkSpec) -> Vec<GateApplication> {
    let n = spec.position_qubits;
    let coins = spec.coin_indices();
    let increment = || {
        (0..n).map(|j| {
            let mut controls = coins.clone();
            controls.extend((j + 1..n).rev());
            GateApplication::mcx(&controls, j)
        })
    };
    let flips = || {
        (1..n)
            .chain(std::iter::once(n))
            .map(|q| GateApplication { kind: GateKind::X, qubits: vec![q] })
    };
    increment().chain(flips()).chain(increment()).chain(flips()).collect()
}

/// Ancillas needed to realise a `k`-control NOT with gates of rank at most `max_rank`.
pub fn ancillas_required(k: usize, max_rank: usize) -> usize {
    if k + 1 <= max_rank || max_rank < 3 {
        0
    } else {
        (k + 1 - max_rank).div_ceil(max_rank - 2)
    }
}

/// Multi-controlled NOT as a chain of rank-bounded gates through `ancillas`.
///
/// Controls are consumed in order: the first `max_rank - 1` land on the first
/// ancilla, every later ancilla takes the previous one plus `max_rank - 2`
/// fresh controls, and the leftovers join the last ancilla on the target. The
/// chain is applied twice so every ancilla returns to its input value.
pub fn decompose_mcx(
    controls: &[usize],
    target: usize,
    max_rank: usize,
    ancillas: &[usize],
) -> Result<Vec<GateApplication>> {
    let k = controls.len();
    if k + 1 <= max_rank {
        return Ok(vec![GateApplication::mcx(controls, target)]);
    }
    if max_rank < 3 {
        return Err(Error::input("decomposition needs native gates of rank 3 or more"));
    }
    let m = ancillas_required(k, max_rank);
    if ancillas.len() < m {
        return Err(Error::input(format!(
            "{} needs {m} ancillas, {} supplied",
            ckx_label(k),
            ancillas.len()
        )));
    }
    let a = &ancillas[..m];

    let mut groups = vec![controls[..max_rank - 1].to_vec()];
    let mut idx = max_rank - 1;
    for i in 1..m {
        let mut g = vec![a[i - 1]];
        g.extend_from_slice(&controls[idx..idx + max_rank - 2]);
        groups.push(g);
        idx += max_rank - 2;
    }
    let mut last = controls[idx..].to_vec();
    last.push(a[m - 1]);

    let stage = |i: usize| GateApplication::mcx(&groups[i], a[i]);
    let final_gate = GateApplication::mcx(&last, target);
    let mut ops = Vec::with_capacity(4 * m);
    for _ in 0..2 {
        ops.push(final_gate.clone());
        ops.extend((1..m).rev().map(stage));
        ops.push(stage(0));
        ops.extend((1..m).map(stage));
    }
    Ok(ops)
}

/// Decomposition of a `k`-control NOT on qubits `0..k` (target `k`), ancillas from `k + 1`.
pub fn decompose_ckx(k: usize, max_rank: usize) -> Result<(Vec<GateApplication>, usize)> {
    if k == 0 {
        return Err(Error::input("CkX needs k >= 1"));
    }
    let m = ancillas_required(k, max_rank);
    let controls: Vec<usize> = (0..k).collect();
    let ancillas: Vec<usize> = (k + 1..k + 1 + m).collect();
    Ok((decompose_mcx(&controls, k, max_rank, &ancillas)?, m))
}

/// Abstract coin-plus-shift step with no decomposition, ancillas or moves.
pub fn build_abstract_step(spec: &WalkSpec, t: usize) -> Result<Circuit> {
    let ops = build_coin(spec, t)?
        .into_iter()
        .chain(build_shift_abstract(spec))
        .map(Op::Gate)
        .collect();
    Circuit::new(spec.problem_qubits(), Vec::new(), ops)
}

fn compile_shift(spec: &WalkSpec, gates: &NativeGateSet) -> Result<(Vec<GateApplication>, usize)> {
    let abstract_ops = build_shift_abstract(spec);
    let m = abstract_ops
        .iter()
        .map(|g| ancillas_required(g.controls().len(), gates.max_rank))
        .max()
        .unwrap_or(0);
    let nq = spec.problem_qubits();
    let ancillas: Vec<usize> = (nq..nq + m).collect();
    let mut out = Vec::new();
    for g in abstract_ops {
        match g.kind {
            GateKind::Mcx => out.extend(decompose_mcx(g.controls(), g.target(), gates.max_rank, &ancillas)?),
            _ => out.push(g),
        }
    }
    Ok((out, m))
}

/// One compiled step: coin, decomposed shift, and movement markers.
pub fn build_step_circuit(spec: &WalkSpec, gates: &NativeGateSet, t: usize) -> Result<Circuit> {
    let coin = build_coin(spec, t)?;
    let (shift, m) = compile_shift(spec, gates)?;
    let nq = spec.problem_qubits();
    let mut ops = Vec::new();
    match gates.move_policy {
        MovePolicy::PerStep(count) => {
            ops.extend(std::iter::repeat(Op::Move).take(count));
            ops.extend(coin.into_iter().chain(shift).map(Op::Gate));
        }
        MovePolicy::Auto => {
            let mut previous: Option<Vec<usize>> = None;
            for g in coin.into_iter().chain(shift) {
                if g.is_multiqubit() {
                    if let Some(prev) = &previous {
                        if !g.qubits.iter().all(|q| prev.contains(q)) {
                            ops.push(Op::Move);
                        }
                    }
                    previous = Some(g.qubits.clone());
                }
                ops.push(Op::Gate(g));
            }
        }
    }
    Circuit::new(nq + m, (nq..nq + m).collect(), ops)
}

/// Native multiqubit gates per compiled step, keyed by rank. No state is allocated.
pub fn count_multiqubit_gates(spec: &WalkSpec, gates: &NativeGateSet) -> Result<BTreeMap<usize, u64>> {
    let (shift, _) = compile_shift(spec, gates)?;
    Ok(census(shift.iter()))
}

/// Rank census of [`decompose_ckx`].
pub fn decomposition_census(k: usize, max_rank: usize) -> Result<BTreeMap<usize, u64>> {
    let (ops, _) = decompose_ckx(k, max_rank)?;
    Ok(census(ops.iter()))
}
