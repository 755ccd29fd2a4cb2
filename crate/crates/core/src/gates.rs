//! Ideal and effective gate matrices for the neutral-atom native gate set.
//!
//! Multiqubit natives are CkZ gates in the hardware convention: `+1` on the
//! all-zeros string and (ideally) `-1` on every other string. Effective
//! versions carry a magnitude and phase per Hamming-weight class. CkX gates
//! are obtained by conjugating a CkZ core with ideal single-qubit layers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Matrix storage. Dense matrices are row-major `2^rank x 2^rank`.
#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Diagonal(Vec<C64>),
    Dense(Vec<C64>),
}

/// A labelled gate acting on `rank` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    label: String,
    rank: usize,
    entries: Entries,
    effective: bool,
    core: Option<Box<GateMatrix>>,
}

impl GateMatrix {
    pub fn diagonal(label: impl Into<String>, diag: Vec<C64>, effective: bool) -> Result<Self> {
        let rank = rank_of(diag.len())?;
        Ok(GateMatrix {
            label: label.into(),
            rank,
            entries: Entries::Diagonal(diag),
            effective,
            core: None,
        })
    }

    pub fn dense(label: impl Into<String>, rank: usize, data: Vec<C64>, effective: bool) -> Result<Self> {
        if rank == 0 || rank > 12 {
            return Err(Error::input(format!("gate rank {rank} out of range")));
        }
        let dim = 1usize << rank;
        if data.len() != dim * dim {
            return Err(Error::input(format!(
                "dense gate of rank {rank} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(GateMatrix {
            label: label.into(),
            rank,
            entries: Entries::Dense(data),
            effective,
            core: None,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        1 << self.rank
    }

    pub fn is_effective(&self) -> bool {
        self.effective
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.entries, Entries::Diagonal(_))
    }

    /// Diagonal entries, if stored diagonally.
    pub fn diagonal_entries(&self) -> Option<&[C64]> {
        match &self.entries {
            Entries::Diagonal(d) => Some(d),
            Entries::Dense(_) => None,
        }
    }

    /// The native diagonal gate this one was conjugated from, if any.
    pub fn native_core(&self) -> Option<&GateMatrix> {
        self.core.as_deref()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match &self.entries {
            Entries::Diagonal(d) => {
                if row == col {
                    d[row]
                } else {
                    ZERO
                }
            }
            Entries::Dense(m) => m[row * self.dim() + col],
        }
    }

    /// Row-major dense copy of the matrix.
    pub fn to_dense(&self) -> Vec<C64> {
        match &self.entries {
            Entries::Dense(m) => m.clone(),
            Entries::Diagonal(d) => {
                let dim = d.len();
                let mut m = vec![ZERO; dim * dim];
                for (i, v) in d.iter().enumerate() {
                    m[i * dim + i] = *v;
                }
                m
            }
        }
    }

    /// Matrix-vector product on a local `2^rank` vector.
    pub fn apply_local(&self, v: &[C64]) -> Vec<C64> {
        match &self.entries {
            Entries::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            Entries::Dense(m) => {
                let dim = self.dim();
                (0..dim)
                    .map(|r| m[r * dim..(r + 1) * dim].iter().zip(v).map(|(a, b)| a * b).sum())
                    .collect()
            }
        }
    }

    /// `self * other` as a dense gate (both of the same rank).
    pub fn compose(&self, other: &GateMatrix) -> Result<GateMatrix> {
        if self.rank != other.rank {
            return Err(Error::input("cannot compose gates of different rank"));
        }
        let dim = self.dim();
        let prod = matmul(&self.to_dense(), &other.to_dense(), dim);
        GateMatrix::dense(
            format!("{}*{}", self.label, other.label),
            self.rank,
            prod,
            self.effective || other.effective,
        )
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let dim = self.dim();
        let m = self.to_dense();
        let mut adj = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                adj[c * dim + r] = m[r * dim + c].conj();
            }
        }
        let p = matmul(&adj, &m, dim);
        (0..dim).all(|r| {
            (0..dim).all(|c| {
                let expect = if r == c { ONE } else { ZERO };
                (p[r * dim + c] - expect).norm() <= tol
            })
        })
    }

    /// Largest entrywise distance to another gate of the same rank.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.rank != other.rank {
            return f64::INFINITY;
        }
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.entry(r, c) - other.entry(r, c)).norm());
            }
        }
        worst
    }
}

fn rank_of(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::input(format!("gate dimension {len} is not a power of two >= 2")));
    }
    Ok(len.trailing_zeros() as usize)
}

pub(crate) fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![ZERO; dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let x = a[r * dim + k];
            if x == ZERO {
                continue;
            }
            for c in 0..dim {
                out[r * dim + c] += x * b[k * dim + c];
            }
        }
    }
    out
}

pub(crate) fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let dim = da * db;
    let mut out = vec![ZERO; dim * dim];
    for ar in 0..da {
        for ac in 0..da {
            let x = a[ar * da + ac];
            for br in 0..db {
                for bc in 0..db {
                    out[(ar * db + br) * dim + ac * db + bc] = x * b[br * db + bc];
                }
            }
        }
    }
    out
}

/// Single-qubit gates. All are treated as error-free.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdealGate {
    H,
    X,
    Z,
    Ry(f64),
    /// `R_z(2π) = -I`.
    Rz2Pi,
}

impl fmt::Display for IdealGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealGate::H => f.write_str("H"),
            IdealGate::X => f.write_str("X"),
            IdealGate::Z => f.write_str("Z"),
            IdealGate::Ry(t) => write!(f, "RY({})", crate::report::fmt_num(*t)),
            IdealGate::Rz2Pi => f.write_str("RZ2PI"),
        }
    }
}

impl FromStr for IdealGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "H" => return Ok(IdealGate::H),
            "X" => return Ok(IdealGate::X),
            "Z" => return Ok(IdealGate::Z),
            "RZ2PI" | "RZ(2PI)" => return Ok(IdealGate::Rz2Pi),
            _ => {}
        }
        let upper = t.to_ascii_uppercase();
        if let Some(arg) = upper.strip_prefix("RY(").and_then(|r| r.strip_suffix(')')) {
            let theta: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad rotation angle in `{s}`")))?;
            return Ok(IdealGate::Ry(theta));
        }
        Err(Error::input(format!("unknown gate name `{s}`")))
    }
}

pub fn ideal_gate(gate: IdealGate) -> GateMatrix {
    let s = FRAC_1_SQRT_2;
    let m = match gate {
        IdealGate::H => [C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)],
        IdealGate::X => [ZERO, ONE, ONE, ZERO],
        IdealGate::Z => [ONE, ZERO, ZERO, -ONE],
        IdealGate::Ry(theta) => {
            let (sn, cs) = (theta / 2.0).sin_cos();
            [C64::new(cs, 0.0), C64::new(-sn, 0.0), C64::new(sn, 0.0), C64::new(cs, 0.0)]
        }
        IdealGate::Rz2Pi => [-ONE, ZERO, ZERO, -ONE],
    };
    GateMatrix {
        label: gate.to_string(),
        rank: 1,
        entries: Entries::Dense(m.to_vec()),
        effective: false,
        core: None,
    }
}

pub fn ckz_label(k: usize) -> String {
    match k {
        1 => "CZ".into(),
        2 => "CCZ".into(),
        _ => format!("C{k}Z"),
    }
}

pub fn ckx_label(k: usize) -> String {
    match k {
        0 => "X".into(),
        1 => "CX".into(),
        2 => "CCX".into(),
        _ => format!("C{k}X"),
    }
}

/// Ideal CkZ on `k + 1` qubits: `+1` on `|0..0>`, `-1` elsewhere.
pub fn ideal_ckz(k: usize) -> Result<GateMatrix> {
    if k == 0 || k > 11 {
        return Err(Error::input(format!("CkZ needs 1 <= k <= 11, got {k}")));
    }
    let dim = 1usize << (k + 1);
    let mut d = vec![-ONE; dim];
    d[0] = ONE;
    GateMatrix::diagonal(ckz_label(k), d, false)
}

/// Magnitude and phase (as a fraction of π) for one Hamming-weight class.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct WeightCoefficient {
    pub magnitude: f64,
    pub phase: f64,
}

impl WeightCoefficient {
    const fn new(magnitude: f64, phase: f64) -> Self {
        WeightCoefficient { magnitude, phase }
    }

    pub fn value(&self) -> C64 {
        C64::from_polar(self.magnitude, PI * self.phase)
    }
}

/// Published CZ coefficients, weights 1..=2.
pub const CZ_EFF_COEFFS: [WeightCoefficient; 2] = [
    WeightCoefficient::new(0.9990, 0.9906),
    WeightCoefficient::new(0.9986, 1.0),
];

/// Published CCZ coefficients, weights 1..=3.
pub const CCZ_EFF_COEFFS: [WeightCoefficient; 3] = [
    WeightCoefficient::new(0.9981, 0.9845),
    WeightCoefficient::new(0.9973, 0.9934),
    WeightCoefficient::new(0.9963, 0.9911),
];

/// Published C3Z coefficients, weights 1..=4. The weight-1 phase is negative as printed.
pub const C3Z_EFF_COEFFS: [WeightCoefficient; 4] = [
    WeightCoefficient::new(0.997947, -0.995),
    WeightCoefficient::new(0.996286, 0.984),
    WeightCoefficient::new(0.994391, 0.981),
    WeightCoefficient::new(0.990724, 0.981),
];

/// Diagonal gate on `coeffs.len()` qubits with one coefficient per nonzero Hamming weight.
pub fn diagonal_from_weights(label: impl Into<String>, coeffs: &[WeightCoefficient]) -> Result<GateMatrix> {
    let rank = coeffs.len();
    if rank == 0 || rank > 11 {
        return Err(Error::input("weight table must cover 1..=11 qubits"));
    }
    let values: Vec<C64> = coeffs.iter().map(WeightCoefficient::value).collect();
    let d = (0..1usize << rank)
        .map(|i| match i.count_ones() as usize {
            0 => ONE,
            w => values[w - 1],
        })
        .collect();
    GateMatrix::diagonal(label, d, true)
}

pub fn cz_eff() -> GateMatrix {
    diagonal_from_weights("CZ_eff", &CZ_EFF_COEFFS).expect("static table")
}

pub fn ccz_eff() -> GateMatrix {
    diagonal_from_weights("CCZ_eff", &CCZ_EFF_COEFFS).expect("static table")
}

pub fn c3z_eff() -> GateMatrix {
    diagonal_from_weights("C3Z_eff", &C3Z_EFF_COEFFS).expect("static table")
}

/// Published effective CkZ for `k` in `1..=3`.
pub fn effective_ckz(k: usize) -> Result<GateMatrix> {
    match k {
        1 => Ok(cz_eff()),
        2 => Ok(ccz_eff()),
        3 => Ok(c3z_eff()),
        _ => Err(Error::Unsupported(format!(
            "no effective matrix is available for {} (rank {})",
            ckz_label(k),
            k + 1
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ParamKind {
    #[serde(rename = "CZ")]
    Cz,
    #[serde(rename = "CCZ")]
    Ccz,
}

/// Further-term gate family anchored on the published coefficients.
///
/// The weight-1 magnitude and phase grow linearly in `a` and are capped at 1.
/// Higher weights follow the weight-1 values with their `a = 0` ratios fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGateFamily {
    pub base: Vec<WeightCoefficient>,
    pub magnitude_slope: f64,
    pub phase_slope: f64,
    pub cap_at_one: bool,
}

impl ParamGateFamily {
    pub fn for_kind(kind: ParamKind) -> Self {
        let base = match kind {
            ParamKind::Cz => CZ_EFF_COEFFS.to_vec(),
            ParamKind::Ccz => CCZ_EFF_COEFFS.to_vec(),
        };
        ParamGateFamily {
            base,
            magnitude_slope: 1e-4,
            phase_slope: 1e-3,
            cap_at_one: true,
        }
    }

    pub fn coefficients(&self, a: f64) -> Result<Vec<WeightCoefficient>> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::input(format!("family parameter must be a finite a >= 0, got {a}")));
        }
        let cap = |x: f64| if self.cap_at_one { x.min(1.0) } else { x };
        let b1 = self.base[0];
        let mag1 = cap(b1.magnitude + self.magnitude_slope * a);
        let phase1 = cap(b1.phase + self.phase_slope * a);
        Ok(self
            .base
            .iter()
            .map(|b| WeightCoefficient {
                magnitude: cap(b.magnitude * (mag1 / b1.magnitude)),
                phase: cap(b.phase * (phase1 / b1.phase)),
            })
            .collect())
    }
}

/// `CZ(a)` or `CCZ(a)` from the further-term family.
pub fn param_gate(kind: ParamKind, a: f64) -> Result<GateMatrix> {
    let coeffs = ParamGateFamily::for_kind(kind).coefficients(a)?;
    let name = match kind {
        ParamKind::Cz => "CZ",
        ParamKind::Ccz => "CCZ",
    };
    diagonal_from_weights(format!("{name}(a={})", crate::report::fmt_num(a)), &coeffs)
}

/// CkX on `k + 1` qubits (target last) from a diagonal CkZ core.
///
/// The core is conjugated by `X` on every control and `ZHZ` on the target,
/// with an overall `-1` from one `R_z(2π)` layer on the target. With an ideal
/// core this is exactly the multi-controlled NOT; with an effective core the
/// single-qubit frame is ideal, so the result keeps the core's gate fidelity.
pub fn ckx_from_ckz(ckz: &GateMatrix) -> Result<GateMatrix> {
    if !ckz.is_diagonal() {
        return Err(Error::input(format!("`{}` is not a diagonal CkZ gate", ckz.label)));
    }
    if ckz.rank < 2 {
        return Err(Error::input("CkX needs at least one control"));
    }
    let k = ckz.rank - 1;
    let x = ideal_gate(IdealGate::X).to_dense();
    let z = ideal_gate(IdealGate::Z).to_dense();
    let h = ideal_gate(IdealGate::H).to_dense();
    let zhz = matmul(&matmul(&z, &h, 2), &z, 2);

    let mut frame = vec![ONE];
    let mut dim = 1;
    for _ in 0..k {
        frame = kron(&frame, dim, &x, 2);
        dim *= 2;
    }
    frame = kron(&frame, dim, &zhz, 2);
    dim *= 2;

    let core = ckz.to_dense();
    let mut m = matmul(&matmul(&frame, &core, dim), &frame, dim);
    for v in m.iter_mut() {
        *v = -*v;
    }
    let label = if ckz.effective {
        format!("{}_eff", ckx_label(k))
    } else {
        ckx_label(k)
    };
    let mut out = GateMatrix::dense(label, ckz.rank, m, ckz.effective)?;
    out.core = Some(Box::new(ckz.clone()));
    Ok(out)
}

/// Limited-tomography gate fidelity `|<ψ|U_eff† U_ideal|ψ>|²` on the uniform superposition.
///
/// Gates built by [`ckx_from_ckz`] are compared through their native cores,
/// since the single-qubit frame around them is error-free.
pub fn gate_fidelity(eff: &GateMatrix, ideal: &GateMatrix) -> Result<f64> {
    if eff.rank != ideal.rank {
        return Err(Error::input(format!(
            "rank mismatch: `{}` has rank {}, `{}` has rank {}",
            eff.label, eff.rank, ideal.label, ideal.rank
        )));
    }
    if let (Some(a), Some(b)) = (eff.native_core(), ideal.native_core()) {
        return gate_fidelity(a, b);
    }
    let dim = eff.dim();
    let amp = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let psi = vec![amp; dim];
    let u_eff = eff.apply_local(&psi);
    let u_ideal = ideal.apply_local(&psi);
    let overlap: C64 = u_eff.iter().zip(&u_ideal).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm_sqr().clamp(0.0, 1.0))
}

/// Two-qubit fidelity that would compound to `fidelity` over `count` gates.
pub fn equivalent_two_qubit_fidelity(fidelity: f64, count: u32) -> Result<f64> {
    if !(fidelity > 0.0 && fidelity <= 1.0) {
        return Err(Error::input(format!("fidelity must lie in (0, 1], got {fidelity}")));
    }
    if count == 0 {
        return Err(Error::input("gate count must be at least 1"));
    }
    Ok(fidelity.powf(1.0 / f64::from(count)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn ry_quarter_turn() {
        let g = ideal_gate(IdealGate::Ry(PI / 2.0));
        let s = FRAC_1_SQRT_2;
        assert!(close(g.entry(0, 0), C64::new(s, 0.0)));
        assert!(close(g.entry(0, 1), C64::new(-s, 0.0)));
        assert!(close(g.entry(1, 0), C64::new(s, 0.0)));
        assert!(close(g.entry(1, 1), C64::new(s, 0.0)));
        let id = ideal_gate(IdealGate::Ry(0.0));
        assert!(close(id.entry(0, 0), ONE) && close(id.entry(0, 1), ZERO));
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = ideal_gate(IdealGate::H);
        let hh = h.compose(&h).unwrap();
        assert!(hh.is_unitary(1e-12));
        assert!(close(hh.entry(0, 0), ONE) && close(hh.entry(0, 1), ZERO));
        assert!(close(hh.entry(1, 1), ONE));
    }

    #[test]
    fn gate_names_parse() {
        assert_eq!("h".parse::<IdealGate>().unwrap(), IdealGate::H);
        assert_eq!("Rz2pi".parse::<IdealGate>().unwrap(), IdealGate::Rz2Pi);
        assert_eq!("RY(0.5)".parse::<IdealGate>().unwrap(), IdealGate::Ry(0.5));
        assert!("T".parse::<IdealGate>().is_err());
        assert!("RY(abc)".parse::<IdealGate>().is_err());
        let rz = ideal_gate(IdealGate::Rz2Pi);
        assert!(close(rz.entry(0, 0), -ONE) && close(rz.entry(1, 1), -ONE));
    }

    #[test]
    fn ideal_ckz_sign_pattern() {
        let cz = ideal_ckz(1).unwrap();
        assert_eq!(cz.diagonal_entries().unwrap(), &[ONE, -ONE, -ONE, -ONE]);
        let ccz = ideal_ckz(2).unwrap();
        let d = ccz.diagonal_entries().unwrap();
        assert_eq!(d[0], ONE);
        assert!(d[1..].iter().all(|v| *v == -ONE));
        let sq = ccz.compose(&ccz).unwrap();
        for i in 0..8 {
            assert!(close(sq.entry(i, i), ONE));
        }
        assert!(ideal_ckz(0).is_err());
    }

    #[test]
    fn published_effective_entries() {
        let cz = cz_eff();
        let d = cz.diagonal_entries().unwrap();
        assert_eq!(d[0], ONE);
        assert!(close(d[1], C64::from_polar(0.9990, 0.9906 * PI)));
        assert!(close(d[2], d[1]));
        assert!(close(d[3], C64::from_polar(0.9986, PI)));
        assert!(close(ccz_eff().diagonal_entries().unwrap()[7], C64::from_polar(0.9963, 0.9911 * PI)));
        let c3 = c3z_eff();
        let d3 = c3.diagonal_entries().unwrap();
        assert!(close(d3[15], C64::from_polar(0.990724, 0.981 * PI)));
        assert!(close(d3[1], C64::from_polar(0.997947, -0.995 * PI)));
    }

    #[test]
    fn effective_entries_depend_only_on_weight() {
        for g in [cz_eff(), ccz_eff(), c3z_eff()] {
            let d = g.diagonal_entries().unwrap();
            assert_eq!(d[0], ONE);
            for i in 0..d.len() {
                assert!(d[i].norm() <= 1.0);
                for j in 0..d.len() {
                    if i.count_ones() == j.count_ones() {
                        assert_eq!(d[i], d[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn param_family_anchor_and_cap() {
        assert_eq!(param_gate(ParamKind::Cz, 0.0).unwrap().entries(), cz_eff().entries());
        assert_eq!(param_gate(ParamKind::Ccz, 0.0).unwrap().entries(), ccz_eff().entries());
        let c = ParamGateFamily::for_kind(ParamKind::Cz).coefficients(10.0).unwrap();
        assert_eq!(c[0].magnitude, 1.0);
        assert!(param_gate(ParamKind::Cz, -1.0).is_err());
        assert!(param_gate(ParamKind::Cz, f64::NAN).is_err());
    }

    #[test]
    fn ckx_from_ideal_cz_is_cnot() {
        let cx = ckx_from_ckz(&ideal_ckz(1).unwrap()).unwrap();
        let expected = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert!((cx.entry(r, c) - C64::new(expected[r][c], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ckx_from_ideal_ccz_is_toffoli() {
        let ccx = ckx_from_ckz(&ideal_ckz(2).unwrap()).unwrap();
        for r in 0..8usize {
            for c in 0..8usize {
                let expect = match r {
                    6 => (c == 7) as u8,
                    7 => (c == 6) as u8,
                    _ => (c == r) as u8,
                };
                assert!((ccx.entry(r, c) - C64::new(f64::from(expect), 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ckx_rejects_dense_input() {
        let h = ideal_gate(IdealGate::H);
        assert!(ckx_from_ckz(&h).is_err());
    }

    #[test]
    fn fidelity_of_identical_unitaries_is_one() {
        let g = ckx_from_ckz(&ideal_ckz(2).unwrap()).unwrap();
        assert!((gate_fidelity(&g, &g).unwrap() - 1.0).abs() < 1e-12);
        let ry = ideal_gate(IdealGate::Ry(0.3));
        assert!((gate_fidelity(&ry, &ry).unwrap() - 1.0).abs() < 1e-12);
        assert!(gate_fidelity(&cz_eff(), &ideal_ckz(2).unwrap()).is_err());
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let eff = ccz_eff();
        let phase = C64::from_polar(1.0, 0.37);
        let shifted: Vec<C64> = eff.diagonal_entries().unwrap().iter().map(|v| v * phase).collect();
        let shifted = GateMatrix::diagonal("shifted", shifted, true).unwrap();
        let ideal = ideal_ckz(2).unwrap();
        let a = gate_fidelity(&eff, &ideal).unwrap();
        let b = gate_fidelity(&shifted, &ideal).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn root_equivalents() {
        assert!((equivalent_two_qubit_fidelity(0.9954, 5).unwrap() - 0.9991).abs() < 1e-4);
        assert!((equivalent_two_qubit_fidelity(0.9850, 20).unwrap() - 0.9992).abs() < 1e-4);
        assert_eq!(equivalent_two_qubit_fidelity(1.0, 7).unwrap(), 1.0);
        assert!(equivalent_two_qubit_fidelity(0.0, 2).is_err());
        assert!(equivalent_two_qubit_fidelity(0.9, 0).is_err());
    }
}
