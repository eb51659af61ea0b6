//! Fixed gates and gate families on `C^d ⊗ C^d`.

use alloc::vec::Vec;

use crate::bipartite::BipartiteOperator;
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[ONE, -ONE])
}

/// The four Paulis `I, X, Y, Z`.
pub fn paulis() -> [ComplexMatrix; 4] {
    [ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// Clock matrix `Z|k⟩ = ω^k |k⟩`, `ω = e^{2πi/d}`.
pub fn clock(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 / d as f64))
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// Cyclic shift `X^k |j⟩ = |j + k mod d⟩`.
pub fn shift_power(d: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == (j + k) % d { ONE } else { ZERO })
}

/// Weyl operator `X^a Z^b`; the `d²` of them are pairwise HS-orthogonal.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let z = clock(d);
    let mut zb = ComplexMatrix::identity(d);
    for _ in 0..b {
        zb = &zb * &z;
    }
    &shift_power(d, a) * &zb
}

pub fn identity(d: usize) -> BipartiteOperator {
    BipartiteOperator::identity(d, d)
}

/// `S|a b⟩ = |b a⟩`.
pub fn swap(d: usize) -> BipartiteOperator {
    let m = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (c, e) = (col / d, col % d);
        if a == e && b == c { ONE } else { ZERO }
    });
    BipartiteOperator::square(m, d).expect("d² x d² operator")
}

/// CNOT with the first qubit as control.
pub fn cnot() -> BipartiteOperator {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, c)] = ONE;
    }
    BipartiteOperator::square(m, 2).expect("4x4 operator")
}

pub fn cz() -> BipartiteOperator {
    BipartiteOperator::square(ComplexMatrix::from_diag(&[ONE, ONE, ONE, -ONE]), 2).expect("4x4 operator")
}

/// Generalized controlled phase `|a b⟩ ↦ e^{iθ·a·b} |a b⟩` on `C^d ⊗ C^d`.
pub fn controlled_phase(d: usize, theta: f64) -> BipartiteOperator {
    let diag: Vec<C64> = (0..d * d)
        .map(|k| C64::from_polar(1.0, theta * ((k / d) * (k % d)) as f64))
        .collect();
    BipartiteOperator::square(ComplexMatrix::from_diag(&diag), d).expect("d² x d² operator")
}
