//! Reduced two-atom internal states after both atoms have crossed the cavity.
//!
//! Tracing the field and both translational degrees of freedom out of the
//! post-interaction state leaves an "X-shaped" 4x4 matrix: populations on
//! `|eg>`, `|ge>`, `|gg>` and a single `|eg><ge|` coherence. Everything the
//! translational motion does is carried by six overlap coefficients.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TwoQubitDensityMatrix, EG, GE, GG};
use crate::wavepackets::{
    branch_displacement_atom1, branch_displacement_atom2, branch_overlap_polar, BranchSign,
    PhaseSpaceDisplacement, PhysicalParams, PolarOverlap,
};

/// Initial internal/field configuration; both packets start undisplaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// `|g1 g2>` with one photon in the mode.
    Gg1,
    /// `|e1 g2>` with the mode empty.
    Eg0,
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialState::Gg1 => "gg1",
            InitialState::Eg0 => "eg0",
        })
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gg1" => Ok(InitialState::Gg1),
            "eg0" => Ok(InitialState::Eg0),
            other => Err(Error::InvalidParameter {
                field: "initial_state",
                reason: format!("expected `gg1` or `eg0`, got `{other}`"),
            }),
        }
    }
}

/// Translational overlaps that determine the reduced internal state.
///
/// `c_r1 + i c_i1 = <φ1+|φ1->`, likewise for atom 2, and
/// `c_plus`/`c_minus` are `<φ2±|φ2(0)>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSet {
    pub c_r1: f64,
    pub c_i1: f64,
    pub c_r2: f64,
    pub c_i2: f64,
    pub c_plus: C64,
    pub c_minus: C64,
    // complements kept separately so that 1 ± c_r stays accurate near ±1
    one_minus_cr1: f64,
    one_plus_cr1: f64,
    one_minus_cr2: f64,
    one_plus_cr2: f64,
}

impl OverlapSet {
    /// Builds the set from the two pair overlaps in polar form.
    pub fn from_polar(atom1: PolarOverlap, atom2: PolarOverlap, c_plus: C64, c_minus: C64) -> Self {
        let v1 = atom1.value();
        let v2 = atom2.value();
        Self {
            c_r1: v1.re,
            c_i1: v1.im,
            c_r2: v2.re,
            c_i2: v2.im,
            c_plus,
            c_minus,
            one_minus_cr1: atom1.one_minus_re(),
            one_plus_cr1: atom1.one_plus_re(),
            one_minus_cr2: atom2.one_minus_re(),
            one_plus_cr2: atom2.one_plus_re(),
        }
    }

    /// Builds the set from plain complex values.
    pub fn from_values(atom1: C64, atom2: C64, c_plus: C64, c_minus: C64) -> Self {
        Self {
            c_r1: atom1.re,
            c_i1: atom1.im,
            c_r2: atom2.re,
            c_i2: atom2.im,
            c_plus,
            c_minus,
            one_minus_cr1: 1.0 - atom1.re,
            one_plus_cr1: 1.0 + atom1.re,
            one_minus_cr2: 1.0 - atom2.re,
            one_plus_cr2: 1.0 + atom2.re,
        }
    }

    /// `<φ1+|φ1->`.
    pub fn atom1(&self) -> C64 {
        C64::new(self.c_r1, self.c_i1)
    }

    /// `<φ2+|φ2->`.
    pub fn atom2(&self) -> C64 {
        C64::new(self.c_r2, self.c_i2)
    }

    /// Largest deviation from the magnitude bounds, 0 when all hold.
    pub fn bound_violation(&self) -> f64 {
        [
            self.atom1().norm(),
            self.atom2().norm(),
            self.c_plus.norm(),
            self.c_minus.norm(),
        ]
        .into_iter()
        .map(|m| (m - 1.0).max(0.0))
        .fold(0.0, f64::max)
    }
}

struct Branches {
    atom1: [PhaseSpaceDisplacement; 2],
    atom2: [PhaseSpaceDisplacement; 2],
}

fn branches(params: &PhysicalParams) -> Branches {
    Branches {
        atom1: [
            branch_displacement_atom1(params, BranchSign::Plus),
            branch_displacement_atom1(params, BranchSign::Minus),
        ],
        atom2: [
            branch_displacement_atom2(params, BranchSign::Plus),
            branch_displacement_atom2(params, BranchSign::Minus),
        ],
    }
}

fn overlaps_with(params: &PhysicalParams, undamped: bool) -> Result<OverlapSet> {
    params.validate()?;
    let b = branches(params);
    let pk1 = params.packet1();
    let pk2 = params.packet2();
    let shape = |o: PolarOverlap| if undamped { o.undamped() } else { o };
    let atom1 = shape(branch_overlap_polar(&b.atom1[0], &b.atom1[1], &pk1));
    let atom2 = shape(branch_overlap_polar(&b.atom2[0], &b.atom2[1], &pk2));
    let idle = PhaseSpaceDisplacement::IDENTITY;
    let c_plus = shape(branch_overlap_polar(&b.atom2[0], &idle, &pk2)).value();
    let c_minus = shape(branch_overlap_polar(&b.atom2[1], &idle, &pk2)).value();
    Ok(OverlapSet::from_polar(atom1, atom2, c_plus, c_minus))
}

/// All six overlap coefficients for a scenario.
pub fn compute_overlap_set(params: &PhysicalParams) -> Result<OverlapSet> {
    overlaps_with(params, false)
}

/// The overlap set with every magnitude forced to one and every phase,
/// including the Kerr-like phase carried by `c_±`, kept.
pub fn jc_limit_overlap_set(params: &PhysicalParams) -> Result<OverlapSet> {
    overlaps_with(params, true)
}

/// Probabilities, amplitudes and coherence parameter of the `|g1 g2 1>`
/// reduced state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgCoefficients {
    pub p1: f64,
    pub p2: f64,
    pub c1: f64,
    pub c2: f64,
    pub q: C64,
    /// Set when `q` (or `c1`, `c2`) was fixed by its limit because its
    /// defining expression is 0/0; the coherence it multiplies vanishes.
    pub degenerate: bool,
}

impl SgCoefficients {
    /// `c1 c2 P2 q`, the `<eg|ρ|ge>` element.
    pub fn coherence(&self) -> C64 {
        self.q * (self.c1 * self.c2 * self.p2)
    }
}

pub fn sg_coefficients(o: &OverlapSet) -> SgCoefficients {
    let (a, b) = (o.one_minus_cr1, o.one_plus_cr1);
    let (c, d) = (o.one_minus_cr2, o.one_plus_cr2);
    let p1 = 0.25 * b * d;
    // 4 - (1+cR1)(1+cR2) rewritten so that no term cancels
    let p2 = 0.25 * (a * d + 2.0 * c);

    let mut degenerate = false;
    let (c1, c2) = if p2 > 0.0 {
        ((b * c / (4.0 * p2)).sqrt(), (a / (2.0 * p2)).sqrt())
    } else {
        degenerate = true;
        (0.0, 1.0)
    };

    let denom_sq = 2.0 * a * b * c;
    let q = if denom_sq >= f64::MIN_POSITIVE && denom_sq.is_finite() {
        C64::new(0.0, 1.0) * (o.c_minus - o.c_plus) * o.c_i1 / denom_sq.sqrt()
    } else {
        degenerate = true;
        C64::new(0.0, 0.0)
    };

    SgCoefficients {
        p1,
        p2,
        c1,
        c2,
        q,
        degenerate,
    }
}

fn x_state(populations: [f64; 3], coherence: C64) -> ComplexMatrix {
    let [eg, ge, gg] = populations;
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(EG, EG)] = C64::new(eg, 0.0);
    m[(GE, GE)] = C64::new(ge, 0.0);
    m[(GG, GG)] = C64::new(gg, 0.0);
    m[(EG, GE)] = coherence;
    m[(GE, EG)] = coherence.conj();
    m
}

/// `P1 |gg><gg| + P2 { c2² |eg><eg| + c1² |ge><ge| + c1 c2 [q |eg><ge| + h.c.] }`.
pub fn rho_from_coefficients(co: &SgCoefficients) -> Result<TwoQubitDensityMatrix> {
    TwoQubitDensityMatrix::new(x_state(
        [co.c2 * co.c2 * co.p2, co.c1 * co.c1 * co.p2, co.p1],
        co.coherence(),
    ))
}

/// Reduced state for `initial` given its overlap set.
pub fn rho_from_overlaps(o: &OverlapSet, initial: InitialState) -> Result<TwoQubitDensityMatrix> {
    match initial {
        InitialState::Gg1 => rho_from_coefficients(&sg_coefficients(o)),
        InitialState::Eg0 => {
            // |e1,0> splits as S1+ on |e1 g2 0> and S1- on |g1 g2 1>; only the
            // latter drives atom 2, so the roles of 1 ± cR1 swap relative to
            // the one-photon case and the coherence changes sign.
            let (a, b) = (o.one_minus_cr1, o.one_plus_cr1);
            let (c, d) = (o.one_minus_cr2, o.one_plus_cr2);
            let coherence = C64::new(0.0, 0.25 * o.c_i1) * (o.c_plus - o.c_minus);
            TwoQubitDensityMatrix::new(x_state([0.5 * b, 0.25 * a * c, 0.25 * a * d], coherence))
        }
    }
}

/// Reduced internal state with translational decoherence.
pub fn build_rho_sg(params: &PhysicalParams, initial: InitialState) -> Result<TwoQubitDensityMatrix> {
    rho_from_overlaps(&compute_overlap_set(params)?, initial)
}

/// Reduced internal state of the fixed-position (Jaynes-Cummings) model
/// after two equal interaction times `t` at coupling `eps_jc`.
pub fn build_rho_jc(eps_jc: f64, t: f64, initial: InitialState) -> Result<TwoQubitDensityMatrix> {
    if !(eps_jc.is_finite() && eps_jc > 0.0) {
        return Err(Error::InvalidParameter {
            field: "eps_jc",
            reason: format!("must be finite and positive, got {eps_jc}"),
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "T",
            reason: format!("must be finite and non-negative, got {t}"),
        });
    }
    let (s, c) = (eps_jc * t).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let m = match initial {
        InitialState::Gg1 => x_state([s2, s2 * c2, c2 * c2], C64::new(s2 * c, 0.0)),
        InitialState::Eg0 => x_state([c2, s2 * s2, s2 * c2], C64::new(-s2 * c, 0.0)),
    };
    TwoQubitDensityMatrix::new(m)
}

/// Conjugates `rho` by the local diagonal unitary
/// `diag(e^{i phi1}, 1) ⊗ diag(e^{i phi2}, 1)` (phases on the excited states).
pub fn apply_local_phases(rho: &TwoQubitDensityMatrix, phi1: f64, phi2: f64) -> Result<TwoQubitDensityMatrix> {
    let one = C64::new(1.0, 0.0);
    let u1 = [C64::from_polar(1.0, phi1), one];
    let u2 = [C64::from_polar(1.0, phi2), one];
    let diag: Vec<C64> = (0..4).map(|i| u1[i / 2] * u2[i % 2]).collect();
    let mut m = rho.matrix().clone();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = diag[i] * m[(i, j)] * diag[j].conj();
        }
    }
    TwoQubitDensityMatrix::new(m)
}

/// Kerr-like phase `ħ ε² k² (t3 − t2)³ / 12 m` picked up by atom 2 on both
/// of its interaction branches.
pub fn atom2_kerr_phase(params: &PhysicalParams) -> f64 {
    branch_displacement_atom2(params, BranchSign::Plus).phase
}
