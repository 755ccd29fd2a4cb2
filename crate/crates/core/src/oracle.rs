//! Dense reference operators built straight from the walk definition.
//!
//! Nothing here goes through the gate library or the circuit builder, so it
//! can be used to check both.

use num_complex::Complex64 as C64;

use crate::circuit::WalkSpec;
use crate::error::{Error, Result};
use crate::gates::{kron, matmul};

/// Largest register the dense oracle will build.
pub const MAX_ORACLE_QUBITS: usize = 8;

/// Position displacement for a coin value: `+1`, `-1` or `0`.
pub fn coin_direction(coin_qubits: usize, coin: usize) -> i64 {
    match (coin_qubits, coin) {
        (1, 0) => -1,
        (1, _) => 1,
        (_, 0b01) => -1,
        (_, 0b11) => 1,
        _ => 0,
    }
}

/// Shift as a dense permutation matrix over `x_1..x_n, c_1[, c_2]`.
pub fn shift_matrix(position_qubits: usize, coin_qubits: usize) -> Result<Vec<C64>> {
    let nq = position_qubits + coin_qubits;
    if nq > MAX_ORACLE_QUBITS {
        return Err(Error::Unsupported(format!(
            "dense oracle limited to {MAX_ORACLE_QUBITS} qubits, walk needs {nq}"
        )));
    }
    let dim = 1usize << nq;
    let nodes = 1i64 << position_qubits;
    let mut s = vec![C64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let x = (col >> coin_qubits) as i64;
        let c = col & ((1 << coin_qubits) - 1);
        let y = (x + coin_direction(coin_qubits, c)).rem_euclid(nodes) as usize;
        let row = (y << coin_qubits) | c;
        s[row * dim + col] = C64::new(1.0, 0.0);
    }
    Ok(s)
}

fn ry(theta: f64) -> Vec<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    vec![C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]
}

/// `I ⊗ Ry(θ_t) [⊗ Ry(φ_t)]` as a dense matrix.
pub fn coin_matrix(spec: &WalkSpec, t: usize) -> Result<Vec<C64>> {
    if t >= spec.steps() {
        return Err(Error::input(format!("step {t} beyond a {}-step walk", spec.steps())));
    }
    let mut coin = ry(spec.theta()[t]);
    let mut cdim = 2;
    if let Some(phi) = spec.phi() {
        coin = kron(&coin, 2, &ry(phi[t]), 2);
        cdim = 4;
    }
    let pdim = 1usize << spec.position_qubits();
    let mut id = vec![C64::new(0.0, 0.0); pdim * pdim];
    for i in 0..pdim {
        id[i * pdim + i] = C64::new(1.0, 0.0);
    }
    Ok(kron(&id, pdim, &coin, cdim))
}

/// `S · C_t`.
pub fn step_matrix(spec: &WalkSpec, t: usize) -> Result<Vec<C64>> {
    let s = shift_matrix(spec.position_qubits(), spec.coin_qubits())?;
    let c = coin_matrix(spec, t)?;
    Ok(matmul(&s, &c, 1 << spec.problem_qubits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_is_permutation() {
        for (n, nc) in [(2, 1), (3, 2), (4, 1)] {
            let s = shift_matrix(n, nc).unwrap();
            let dim = 1 << (n + nc);
            for r in 0..dim {
                let row: f64 = (0..dim).map(|c| s[r * dim + c].re).sum();
                let col: f64 = (0..dim).map(|c| s[c * dim + r].re).sum();
                assert_eq!((row, col), (1.0, 1.0));
            }
            assert!(s.iter().all(|v| v.im == 0.0 && (v.re == 0.0 || v.re == 1.0)));
        }
    }

    #[test]
    fn shift_blocks_are_cyclic() {
        let s = shift_matrix(2, 1).unwrap();
        let dim = 8;
        // |x=0, c=0> -> |x=3, c=0>, |x=3, c=1> -> |x=0, c=1>
        assert_eq!(s[(3 << 1) * dim].re, 1.0);
        assert_eq!(s[1 * dim + ((3 << 1) | 1)].re, 1.0);
        let lazy = shift_matrix(2, 2).unwrap();
        let dim = 16;
        for x in 0..4 {
            for c in [0b00, 0b10] {
                let i = (x << 2) | c;
                assert_eq!(lazy[i * dim + i].re, 1.0);
            }
        }
    }

    #[test]
    fn oracle_size_bound() {
        assert!(matches!(shift_matrix(8, 2), Err(Error::Unsupported(_))));
    }
}
