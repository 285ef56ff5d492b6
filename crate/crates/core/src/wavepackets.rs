//! Gaussian translational states and the phase-space displacements produced
//! by the linearized atom-field coupling near a cavity node.
//!
//! While atom `i` is inside the cavity its interaction operator `u_i` has
//! eigenvalues `±1` on the single-excitation sector, and on each eigenbranch
//! the translational state is acted on by
//!
//! ```text
//! exp(∓ i ε k τ (x + p t̄ / m)) · exp(i ħ ε² k² τ³ / 12 m)
//! ```
//!
//! with `τ` the interaction duration and `t̄` its mid-time. The first factor is
//! a Weyl displacement `D(X, P) = exp(i (P x − X p) / ħ)` with
//! `X = ±ħ ε k τ t̄ / m` and `P = ∓ħ ε k τ`; the second is a scalar (Kerr-like)
//! phase shared by both branches. All displacements and overlaps here are in
//! the interaction picture, where packets are compared at a common time.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Which eigenbranch of the interaction operator a packet follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn value(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BranchSign::Plus => BranchSign::Minus,
            BranchSign::Minus => BranchSign::Plus,
        }
    }
}

/// Scenario parameters in SI units.
///
/// Times are absolute: atom 1 interacts during `(0, t1)`, atom 2 during
/// `(t2, t3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Atomic mass (kg); both atoms share it.
    pub mass: f64,
    /// Wavelength of the resonant mode (m).
    pub wavelength: f64,
    /// Atom-field coupling (1/s); both atoms share it.
    pub epsilon: f64,
    pub hbar: f64,
    /// Packet centers relative to the node (m).
    pub x1: f64,
    pub x2: f64,
    /// Mean packet momenta (kg·m/s), zero by default.
    pub p1: f64,
    pub p2: f64,
    /// Position widths (m).
    pub sigma_x1: f64,
    pub sigma_x2: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl PhysicalParams {
    /// Mass 1e-26 kg, wavelength 1e-5 m, both packets centered at and as
    /// wide as a tenth of a wavelength, at rest. The coupling is not fixed by
    /// the figure setup and must be supplied.
    pub fn figure1(epsilon: f64) -> Self {
        let wavelength = 1e-5;
        Self {
            mass: 1e-26,
            wavelength,
            epsilon,
            hbar: HBAR,
            x1: wavelength / 10.0,
            x2: wavelength / 10.0,
            p1: 0.0,
            p2: 0.0,
            sigma_x1: wavelength / 10.0,
            sigma_x2: wavelength / 10.0,
            t1: 0.0,
            t2: 0.0,
            t3: 0.0,
        }
    }

    /// Sets the equal-duration schedule `t1 = T, t2 = 2T, t3 = 3T`.
    pub fn with_interaction_time(mut self, t: f64) -> Self {
        self.t1 = t;
        self.t2 = 2.0 * t;
        self.t3 = 3.0 * t;
        self
    }

    pub fn with_schedule(mut self, t1: f64, t2: f64, t3: f64) -> Self {
        self.t1 = t1;
        self.t2 = t2;
        self.t3 = t3;
        self
    }

    /// Mode wavenumber `2π/λ`.
    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Effective Jaynes-Cummings coupling `x1 ε k` of the first atom.
    pub fn epsilon_jc(&self) -> f64 {
        self.x1 * self.epsilon * self.k()
    }

    /// `2π / ε_JC`; infinite when the first packet sits on the node.
    pub fn rabi_period(&self) -> f64 {
        2.0 * PI / self.epsilon_jc()
    }

    /// Recoil acceleration `a = ħ k ε / m`.
    pub fn recoil_acceleration(&self) -> f64 {
        self.hbar * self.k() * self.epsilon / self.mass
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("wavelength", self.wavelength),
            ("epsilon", self.epsilon),
            ("hbar", self.hbar),
            ("sigma_x1", self.sigma_x1),
            ("sigma_x2", self.sigma_x2),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite and positive, got {value}"),
                });
            }
        }
        let finite = [
            ("x1", self.x1),
            ("x2", self.x2),
            ("p1", self.p1),
            ("p2", self.p2),
            ("t1", self.t1),
            ("t2", self.t2),
            ("t3", self.t3),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        if self.t1 < 0.0 {
            return Err(Error::InvalidParameter {
                field: "t1",
                reason: format!("must be non-negative, got {}", self.t1),
            });
        }
        if self.t2 < self.t1 {
            return Err(Error::InvalidParameter {
                field: "t2",
                reason: format!("atom 2 enters at {} before atom 1 leaves at {}", self.t2, self.t1),
            });
        }
        if self.t3 < self.t2 {
            return Err(Error::InvalidParameter {
                field: "t3",
                reason: format!("exit time {} precedes entry time {}", self.t3, self.t2),
            });
        }
        Ok(())
    }

    /// Human-readable warnings for packets reaching beyond a quarter
    /// wavelength from the node, where the linear coupling stops holding.
    pub fn nodal_warnings(&self) -> Vec<String> {
        let quarter = self.wavelength / 4.0;
        [(1, self.x1, self.sigma_x1), (2, self.x2, self.sigma_x2)]
            .into_iter()
            .filter(|&(_, x, s)| x.abs() + 3.0 * s > quarter)
            .map(|(i, x, s)| {
                format!(
                    "atom {i}: |x| + 3σ = {:.3e} m exceeds λ/4 = {quarter:.3e} m; \
                     the linearized nodal coupling is only approximate",
                    x.abs() + 3.0 * s
                )
            })
            .collect()
    }

    pub fn packet1(&self) -> GaussianPacket {
        GaussianPacket::new(self.x1, self.p1, self.sigma_x1, self.hbar)
    }

    pub fn packet2(&self) -> GaussianPacket {
        GaussianPacket::new(self.x2, self.p2, self.sigma_x2, self.hbar)
    }
}

/// Minimum-uncertainty Gaussian translational state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub x0: f64,
    pub p0: f64,
    pub sigma_x: f64,
    pub hbar: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, p0: f64, sigma_x: f64, hbar: f64) -> Self {
        Self {
            x0,
            p0,
            sigma_x,
            hbar,
        }
    }

    /// `ħ / 2σ_x`.
    pub fn sigma_p(&self) -> f64 {
        self.hbar / (2.0 * self.sigma_x)
    }

    /// Wavefunction value at `x`.
    pub fn amplitude(&self, x: f64) -> C64 {
        let s = self.sigma_x;
        let norm = (2.0 * PI * s * s).powf(-0.25);
        let u = x - self.x0;
        let envelope = norm * (-u * u / (4.0 * s * s)).exp();
        C64::from_polar(envelope, self.p0 * x / self.hbar)
    }
}

/// Action of one interaction branch on a packet: a Weyl displacement by
/// `(dx, dp)` followed by a scalar phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceDisplacement {
    /// Position shift (m).
    pub dx: f64,
    /// Momentum shift (kg·m/s).
    pub dp: f64,
    /// Scalar phase (rad).
    pub phase: f64,
}

impl PhaseSpaceDisplacement {
    pub const IDENTITY: Self = Self {
        dx: 0.0,
        dp: 0.0,
        phase: 0.0,
    };
}

fn interaction_branch(
    params: &PhysicalParams,
    sign: BranchSign,
    start: f64,
    end: f64,
) -> PhaseSpaceDisplacement {
    let s = sign.value();
    let tau = end - start;
    let kick = params.hbar * params.epsilon * params.k() * tau;
    PhaseSpaceDisplacement {
        dx: s * kick * (start + end) / (2.0 * params.mass),
        dp: -s * kick,
        phase: params.hbar * (params.epsilon * params.k()).powi(2) * tau.powi(3) / (12.0 * params.mass),
    }
}

/// Branch `sign` of atom 1, interacting during `(0, t1)`.
pub fn branch_displacement_atom1(params: &PhysicalParams, sign: BranchSign) -> PhaseSpaceDisplacement {
    interaction_branch(params, sign, 0.0, params.t1)
}

/// Branch `sign` of atom 2, interacting during `(t2, t3)`.
pub fn branch_displacement_atom2(params: &PhysicalParams, sign: BranchSign) -> PhaseSpaceDisplacement {
    interaction_branch(params, sign, params.t2, params.t3)
}

/// Squared phase-space distance between two displaced copies of `packet`,
/// in units of its widths.
pub fn phase_space_distance_sq(
    da: &PhaseSpaceDisplacement,
    db: &PhaseSpaceDisplacement,
    packet: &GaussianPacket,
) -> f64 {
    let ux = (da.dx - db.dx) / packet.sigma_x;
    let up = (da.dp - db.dp) / packet.sigma_p();
    ux * ux + up * up
}

/// Overlap in polar form, `exp(-decay + i phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarOverlap {
    /// `d² / 8`, non-negative.
    pub decay: f64,
    pub phase: f64,
}

impl PolarOverlap {
    pub fn value(&self) -> C64 {
        C64::from_polar((-self.decay).exp(), self.phase)
    }

    pub fn magnitude(&self) -> f64 {
        (-self.decay).exp()
    }

    /// `1 - Re(value)` without cancellation near unity.
    pub fn one_minus_re(&self) -> f64 {
        let half = (0.5 * self.phase).sin();
        -(-self.decay).exp_m1() + 2.0 * (-self.decay).exp() * half * half
    }

    /// `1 + Re(value)` without cancellation near `-1`.
    pub fn one_plus_re(&self) -> f64 {
        let half = (0.5 * self.phase).cos();
        -(-self.decay).exp_m1() + 2.0 * (-self.decay).exp() * half * half
    }

    /// Same phase, unit magnitude.
    pub fn undamped(&self) -> Self {
        Self {
            decay: 0.0,
            phase: self.phase,
        }
    }
}

/// `<D_a ψ | D_b ψ>` in polar form.
///
/// Writing `D_a†D_b = D(ξ_b − ξ_a)·exp(−i (P_a X_b − X_a P_b) / 2ħ)`, the
/// remaining expectation in the Gaussian state centred at `(x0, p0)` is
/// `exp(−d²/8)·exp(i (ΔP x0 − ΔX p0) / ħ)`.
pub fn branch_overlap_polar(
    da: &PhaseSpaceDisplacement,
    db: &PhaseSpaceDisplacement,
    packet: &GaussianPacket,
) -> PolarOverlap {
    let hbar = packet.hbar;
    let ddx = db.dx - da.dx;
    let ddp = db.dp - da.dp;
    let symplectic = -(da.dp * db.dx - da.dx * db.dp) / (2.0 * hbar);
    let center = (ddp * packet.x0 - ddx * packet.p0) / hbar;
    PolarOverlap {
        decay: phase_space_distance_sq(da, db, packet) / 8.0,
        phase: db.phase - da.phase + symplectic + center,
    }
}

/// `<D_a ψ | D_b ψ>` including both scalar phases.
pub fn branch_overlap(
    da: &PhaseSpaceDisplacement,
    db: &PhaseSpaceDisplacement,
    packet: &GaussianPacket,
) -> C64 {
    branch_overlap_polar(da, db, packet).value()
}
