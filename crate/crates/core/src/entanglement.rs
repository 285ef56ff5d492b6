//! Separability (partial-transpose) and CHSH non-locality tests for two
//! qubits.

use crate::error::{Error, Result};
use crate::linalg::{
    gram3, hermitian_eigenvalues, partial_transpose_second, pauli_correlation_matrix,
    symmetric3_eigenvalues, TwoQubitDensityMatrix,
};
use crate::models::SgCoefficients;

/// Eigenvalues in `(-DEFAULT_PPT_TOLERANCE, 0)` count as non-negative.
pub const DEFAULT_PPT_TOLERANCE: f64 = 1e-10;

/// Gap below which `nu2` and `nu3` are treated as one degenerate pair.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    /// Eigenvalues of the partial transpose, ascending.
    pub eigenvalues: [f64; 4],
    pub separable: bool,
}

impl PptReport {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Peres-Horodecki test; necessary and sufficient for two qubits.
pub fn ppt_report(rho: &TwoQubitDensityMatrix, tol: f64) -> Result<PptReport> {
    let v = hermitian_eigenvalues(&partial_transpose_second(rho))?;
    let eigenvalues = [v[0], v[1], v[2], v[3]];
    Ok(PptReport {
        eigenvalues,
        separable: eigenvalues[0] >= -tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPpt {
    /// `[c1² P2, c2² P2, λ+, λ-]`.
    pub values: [f64; 4],
    /// True when `P1 = 0` and `λ± = ±|q| c1 c2 P2` was used instead.
    pub limit_form: bool,
}

impl ClosedFormPpt {
    pub fn sorted(&self) -> [f64; 4] {
        let mut v = self.values;
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Partial-transpose spectrum of the one-photon reduced state from its
/// coefficients.
pub fn closed_form_ppt_eigenvalues(co: &SgCoefficients) -> ClosedFormPpt {
    let lambda1 = co.c1 * co.c1 * co.p2;
    let lambda2 = co.c2 * co.c2 * co.p2;
    let z = co.coherence().norm();
    if co.p1 > 0.0 {
        let r = 2.0 * z / co.p1;
        let root = (1.0 + r * r).sqrt();
        let plus = 0.5 * co.p1 * (1.0 + root);
        // (1 - root) rewritten as -r²/(1 + root)
        let minus = -0.5 * co.p1 * r * r / (1.0 + root);
        ClosedFormPpt {
            values: [lambda1, lambda2, plus, minus],
            limit_form: false,
        }
    } else {
        ClosedFormPpt {
            values: [lambda1, lambda2, z, -z],
            limit_form: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorodeckiM {
    pub m_value: f64,
    /// Eigenvalues of `T^T T`, descending.
    pub nu: [f64; 3],
}

/// `M(ρ) = max over pairs of eigenvalues of T^T T`; CHSH is violated iff
/// `M > 1`.
pub fn horodecki_m(rho: &TwoQubitDensityMatrix) -> Result<HorodeckiM> {
    let t = pauli_correlation_matrix(rho)?;
    let asc = symmetric3_eigenvalues(&gram3(&t))?;
    // T^T T is positive semidefinite; clip rounding below zero
    let nu = [asc[2].max(0.0), asc[1].max(0.0), asc[0].max(0.0)];
    let m_value = (nu[0] + nu[1]).max(nu[0] + nu[2]).max(nu[1] + nu[2]);
    Ok(HorodeckiM { m_value, nu })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerateM {
    pub m_value: f64,
    /// The non-degenerate eigenvalue.
    pub nu1: f64,
    /// The doubly degenerate eigenvalue.
    pub nu2: f64,
}

/// `M(ρ) = max{ν1 + ν2, 2ν2}` for states whose `T^T T` has a degenerate
/// pair `ν2 = ν3`.
///
/// `ν1` labels the eigenvalue outside the pair, which need not be the
/// largest.
pub fn degenerate_m(rho: &TwoQubitDensityMatrix) -> Result<DegenerateM> {
    let HorodeckiM { nu, .. } = horodecki_m(rho)?;
    let gaps = [(nu[0] - nu[1]).abs(), (nu[1] - nu[2]).abs()];
    let (lone, pair) = if gaps[1] <= gaps[0] {
        (nu[0], 0.5 * (nu[1] + nu[2]))
    } else {
        (nu[2], 0.5 * (nu[0] + nu[1]))
    };
    let gap = gaps[0].min(gaps[1]);
    if gap > DEGENERACY_TOLERANCE {
        return Err(Error::NotDegenerate { gap, nu });
    }
    Ok(DegenerateM {
        m_value: (lone + pair).max(2.0 * pair),
        nu1: lone,
        nu2: pair,
    })
}

/// `sin²(2 ε T) sin²(ε T)`: zero exactly when the fixed-position
/// one-photon state is separable.
pub fn jc_separability_value(eps_jc: f64, t: f64) -> f64 {
    let x = eps_jc * t;
    let a = (2.0 * x).sin();
    let b = x.sin();
    a * a * b * b
}

/// Combined separability and Bell-test summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub ppt_eigenvalues: [f64; 4],
    pub nu: [f64; 3],
    pub m_value: f64,
    pub separable: bool,
    pub bell_violated: bool,
}

impl EntanglementReport {
    pub fn evaluate(rho: &TwoQubitDensityMatrix, ppt_tol: f64) -> Result<Self> {
        let ppt = ppt_report(rho, ppt_tol)?;
        let m = horodecki_m(rho)?;
        Ok(Self {
            ppt_eigenvalues: ppt.eigenvalues,
            nu: m.nu,
            m_value: m.m_value,
            separable: ppt.separable,
            bell_violated: m.m_value > 1.0,
        })
    }
}
