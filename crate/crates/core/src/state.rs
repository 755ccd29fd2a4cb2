//! Dense statevector with big-endian qubit order (qubit 0 is the most significant bit).

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::GateMatrix;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Computational basis state from a bitstring such as `"0101"`.
    pub fn new_basis_state(qubit_count: usize, bits: &str) -> Result<Self> {
        check_size(qubit_count)?;
        if bits.len() != qubit_count {
            return Err(Error::input(format!(
                "bitstring `{bits}` has length {}, expected {qubit_count}",
                bits.len()
            )));
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                _ => return Err(Error::input(format!("bitstring `{bits}` contains `{ch}`"))),
            }
        }
        Self::from_index(qubit_count, index)
    }

    pub fn from_index(qubit_count: usize, index: usize) -> Result<Self> {
        check_size(qubit_count)?;
        if index >= 1 << qubit_count {
            return Err(Error::input(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << qubit_count];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector { qubit_count, amplitudes })
    }

    pub fn from_amplitudes(qubit_count: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_size(qubit_count)?;
        if amplitudes.len() != 1 << qubit_count {
            return Err(Error::input("amplitude count does not match qubit count"));
        }
        Ok(StateVector { qubit_count, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.qubit_count - 1 - qubit)
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &q) in targets.iter().enumerate() {
            if q >= self.qubit_count {
                return Err(Error::input(format!(
                    "qubit {q} out of range for a {}-qubit register",
                    self.qubit_count
                )));
            }
            if targets[..i].contains(&q) {
                return Err(Error::input(format!("qubit {q} repeated in target list")));
            }
        }
        Ok(())
    }

    /// Apply `gate` to `targets`; the first target is the gate's most significant qubit.
    pub fn apply_gate(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.rank() {
            return Err(Error::input(format!(
                "gate `{}` has rank {} but {} targets were given",
                gate.label(),
                gate.rank(),
                targets.len()
            )));
        }
        self.check_targets(targets)?;
        let masks: Vec<usize> = targets.iter().map(|&q| self.mask(q)).collect();
        let r = masks.len();

        if let Some(diag) = gate.diagonal_entries() {
            for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                let mut local = 0;
                for m in &masks {
                    local = (local << 1) | usize::from(idx & m != 0);
                }
                *amp *= diag[local];
            }
            return Ok(());
        }

        let dim = 1usize << r;
        let offsets: Vec<usize> = (0..dim)
            .map(|local| {
                (0..r)
                    .filter(|b| local & (1 << (r - 1 - b)) != 0)
                    .map(|b| masks[b])
                    .sum()
            })
            .collect();
        let all: usize = masks.iter().sum();
        let mut buf = vec![C64::new(0.0, 0.0); dim];
        for base in 0..self.amplitudes.len() {
            if base & all != 0 {
                continue;
            }
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base + off];
            }
            let out = gate.apply_local(&buf);
            for (v, off) in out.into_iter().zip(&offsets) {
                self.amplitudes[base + off] = v;
            }
        }
        Ok(())
    }

    /// Ideal multi-controlled NOT as a basis permutation.
    pub fn apply_mcx(&mut self, controls: &[usize], target: usize) -> Result<()> {
        let mut all = controls.to_vec();
        all.push(target);
        self.check_targets(&all)?;
        let cmask: usize = controls.iter().map(|&q| self.mask(q)).sum();
        let tmask = self.mask(target);
        for idx in 0..self.amplitudes.len() {
            if idx & cmask == cmask && idx & tmask == 0 {
                self.amplitudes.swap(idx, idx | tmask);
            }
        }
        Ok(())
    }

    /// Multiply every amplitude by `factor`, which must lie in `[0, 1]`.
    pub fn scale_amplitudes(&mut self, factor: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&factor) {
            return Err(Error::input(format!("scale factor {factor} outside [0, 1]")));
        }
        for a in &mut self.amplitudes {
            *a *= factor;
        }
        Ok(())
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum()
    }

    /// Marginal probabilities over `subset`, without renormalisation.
    pub fn marginal_probabilities(&self, subset: &[usize]) -> Result<ProbabilityTable> {
        if subset.is_empty() {
            return Err(Error::input("marginal over an empty qubit subset"));
        }
        self.check_targets(subset)?;
        let masks: Vec<usize> = subset.iter().map(|&q| self.mask(q)).collect();
        let mut probs = vec![0.0; 1 << subset.len()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut local = 0;
            for m in &masks {
                local = (local << 1) | usize::from(idx & m != 0);
            }
            probs[local] += p;
        }
        Ok(ProbabilityTable {
            qubits: subset.to_vec(),
            probabilities: probs,
        })
    }
}

fn check_size(qubit_count: usize) -> Result<()> {
    if qubit_count == 0 {
        return Err(Error::input("register needs at least one qubit"));
    }
    if qubit_count > MAX_QUBITS {
        return Err(Error::Unsupported(format!(
            "{qubit_count} qubits exceeds the simulator limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Probabilities over a qubit subset, indexed by the subset's bitstring read big-endian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityTable {
    qubits: Vec<usize>,
    probabilities: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(qubits: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        if qubits.is_empty() || probabilities.len() != 1 << qubits.len() {
            return Err(Error::input("probability table size does not match its qubit subset"));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::input(format!("negative or undefined probability {p}")));
        }
        Ok(ProbabilityTable { qubits, probabilities })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn bitstring(&self, index: usize) -> String {
        let w = self.qubits.len();
        format!("{index:0w$b}")
    }

    pub fn get(&self, bits: &str) -> Option<f64> {
        if bits.len() != self.qubits.len() {
            return None;
        }
        usize::from_str_radix(bits, 2).ok().and_then(|i| self.probabilities.get(i).copied())
    }

    /// `(bitstring, probability)` pairs in index order.
    pub fn entries(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        self.probabilities.iter().enumerate().map(|(i, p)| (self.bitstring(i), *p))
    }

    /// Same table with every probability multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ProbabilityTable {
        ProbabilityTable {
            qubits: self.qubits.clone(),
            probabilities: self.probabilities.iter().map(|p| p * factor).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{ideal_gate, IdealGate};

    #[test]
    fn basis_state_layout() {
        let s = StateVector::new_basis_state(3, "010").unwrap();
        assert_eq!(s.amplitudes()[2], C64::new(1.0, 0.0));
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
        assert!(StateVector::new_basis_state(3, "01").is_err());
        assert!(StateVector::new_basis_state(2, "0a").is_err());
        assert!(matches!(StateVector::new_basis_state(30, &"0".repeat(30)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn x_on_qubit_zero_flips_msb() {
        let mut s = StateVector::new_basis_state(3, "000").unwrap();
        s.apply_gate(&ideal_gate(IdealGate::X), &[0]).unwrap();
        assert_eq!(s, StateVector::new_basis_state(3, "100").unwrap());
        assert!(s.apply_gate(&ideal_gate(IdealGate::X), &[3]).is_err());
    }

    #[test]
    fn hadamard_marginals() {
        let mut s = StateVector::new_basis_state(2, "00").unwrap();
        s.apply_gate(&ideal_gate(IdealGate::H), &[0]).unwrap();
        let t = s.marginal_probabilities(&[0, 1]).unwrap();
        assert!((t.get("00").unwrap() - 0.5).abs() < 1e-12);
        assert!((t.get("10").unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(t.get("01").unwrap(), 0.0);
        let m = s.marginal_probabilities(&[0]).unwrap();
        assert!((m.get("0").unwrap() - 0.5).abs() < 1e-12);
        assert!(s.marginal_probabilities(&[]).is_err());
    }

    #[test]
    fn mcx_permutes() {
        let mut s = StateVector::new_basis_state(3, "110").unwrap();
        s.apply_mcx(&[0, 1], 2).unwrap();
        assert_eq!(s, StateVector::new_basis_state(3, "111").unwrap());
        let mut s = StateVector::new_basis_state(3, "100").unwrap();
        s.apply_mcx(&[0, 1], 2).unwrap();
        assert_eq!(s, StateVector::new_basis_state(3, "100").unwrap());
        assert!(s.apply_mcx(&[0, 0], 2).is_err());
    }

    #[test]
    fn scale_bounds() {
        let mut s = StateVector::new_basis_state(1, "1").unwrap();
        s.scale_amplitudes(0.5).unwrap();
        assert!((s.total_probability() - 0.25).abs() < 1e-15);
        assert!(s.scale_amplitudes(1.5).is_err());
        assert!(s.scale_amplitudes(-0.1).is_err());
    }

    #[test]
    fn probability_table_validation() {
        assert!(ProbabilityTable::new(vec![0], vec![0.5, -0.1]).is_err());
        assert!(ProbabilityTable::new(vec![0], vec![0.5]).is_err());
        let t = ProbabilityTable::new(vec![2, 0], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.bitstring(2), "10");
        assert_eq!(t.entries().count(), 4);
    }
}
