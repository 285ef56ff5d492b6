//! Brute-force reference: translational wavefunctions sampled on a uniform
//! grid, the interaction exponentials applied numerically, and the reduced
//! internal state obtained by explicit quadrature.
//!
//! Nothing here uses the closed-form displacement or overlap algebra. Each
//! branch unitary `exp(-i s (α x + β p)) · e^{iK}` is applied as
//! `e^{-i s α x} · e^{-i s β p} · e^{i ħ α β / 2} · e^{iK}`, the momentum
//! factor acting spectrally.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TwoQubitDensityMatrix};
use crate::models::{InitialState, OverlapSet};
use crate::wavepackets::{BranchSign, GaussianPacket, PhysicalParams};

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 1 << 14;
/// Half-width of the default grid beyond the extreme branch centers, in
/// packet widths.
pub const DEFAULT_MARGIN_SIGMAS: f64 = 12.0;
/// Minimum clearance between any packet center and the grid edge.
pub const MIN_CLEARANCE_SIGMAS: f64 = 8.0;

/// Uniform periodic grid `x_j = x_min + j (x_max - x_min) / n`, `j < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min || n < 2 {
            return Err(Error::InvalidParameter {
                field: "grid",
                reason: format!("need x_min < x_max and n >= 2, got [{x_min}, {x_max}) with {n}"),
            });
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    /// Angular wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as i64;
        let j = j as i64;
        let signed = if j < (n + 1) / 2 { j } else { j - n };
        2.0 * PI * signed as f64 / (self.x_max - self.x_min)
    }

    /// Largest representable wavenumber.
    pub fn nyquist(&self) -> f64 {
        PI / self.dx()
    }
}

/// Sampled translational wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPacket {
    pub grid: Grid,
    pub samples: Vec<C64>,
}

impl GridPacket {
    pub fn from_gaussian(packet: &GaussianPacket, grid: Grid) -> Self {
        let samples = (0..grid.n).map(|j| packet.amplitude(grid.x(j))).collect();
        Self { grid, samples }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            samples: vec![C64::new(0.0, 0.0); grid.n],
        }
    }

    /// `Σ |ψ_j|² dx`.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn mean_x(&self) -> f64 {
        let w: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        let s: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, z)| self.grid.x(j) * z.norm_sqr())
            .sum();
        s / w
    }

    /// `<p>` from the discrete spectrum.
    pub fn mean_p(&self, hbar: f64) -> f64 {
        let mut buf = self.samples.clone();
        Spectral::new(self.grid.n).forward.process(&mut buf);
        let w: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        let s: f64 = buf
            .iter()
            .enumerate()
            .map(|(j, z)| self.grid.wavenumber(j) * z.norm_sqr())
            .sum();
        hbar * s / w
    }

    /// `a·self + b·other` on the same grid.
    fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// `∫ a*(x) b(x) dx` by the rectangle rule, which on a periodic grid is the
/// trapezoidal rule and converges spectrally for smooth, decayed integrands.
pub fn quadrature_overlap(a: &GridPacket, b: &GridPacket) -> Result<C64> {
    if a.grid != b.grid || a.samples.len() != b.samples.len() {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.grid, b.grid)));
    }
    let sum: C64 = a.samples.iter().zip(&b.samples).map(|(x, y)| x.conj() * y).sum();
    Ok(sum * a.grid.dx())
}

/// Which atom's interaction window an exponential belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentForm {
    /// Window `(0, t1)`.
    Atom1,
    /// Window `(t2, t3)`.
    Atom2,
}

/// Coefficients of `exp(-i s (α x + β p)) e^{iK}` for one window, read
/// straight off the time-integrated interaction Hamiltonian.
#[derive(Debug, Clone, Copy)]
struct Exponent {
    alpha: f64,
    beta: f64,
    kerr: f64,
}

impl Exponent {
    fn new(params: &PhysicalParams, form: ExponentForm) -> Self {
        let (start, end) = match form {
            ExponentForm::Atom1 => (0.0, params.t1),
            ExponentForm::Atom2 => (params.t2, params.t3),
        };
        let ek = params.epsilon * params.k();
        let tau = end - start;
        Self {
            alpha: ek * tau,
            // ∫ t dt / m over the window, times εk
            beta: ek * (end * end - start * start) / (2.0 * params.mass),
            kerr: params.hbar * ek * ek * tau.powi(3) / (12.0 * params.mass),
        }
    }
}

struct Fit {
    center: f64,
    sigma: f64,
    momentum: f64,
    sigma_p: f64,
    hbar: f64,
    sigmas: f64,
}

fn check_fits(grid: &Grid, f: Fit) -> Result<()> {
    let Fit { center, sigma, momentum, sigma_p, hbar, sigmas } = f;
    let clearance = sigmas * sigma;
    if center - clearance < grid.x_min || center + clearance > grid.x_max {
        return Err(Error::Truncation(format!(
            "packet centered at {center:.6e} m (σ = {sigma:.3e} m) needs [{:.6e}, {:.6e}] but the grid spans [{:.6e}, {:.6e}]",
            center - clearance,
            center + clearance,
            grid.x_min,
            grid.x_max
        )));
    }
    let k_edge = (momentum.abs() + sigmas * sigma_p) / hbar;
    if k_edge > grid.nyquist() {
        return Err(Error::Truncation(format!(
            "momentum content up to {k_edge:.3e} 1/m exceeds the grid Nyquist wavenumber {:.3e} 1/m",
            grid.nyquist()
        )));
    }
    Ok(())
}

/// Applies branch `sign` of the interaction exponential for `form` to a
/// grid packet that started as `initial` (used only for the truncation
/// check on the displaced packet).
pub fn apply_branch_unitary(
    packet: &GridPacket,
    initial: &GaussianPacket,
    params: &PhysicalParams,
    form: ExponentForm,
    sign: BranchSign,
) -> Result<GridPacket> {
    apply_with_clearance(packet, initial, params, form, sign, MIN_CLEARANCE_SIGMAS)
}

fn apply_with_clearance(
    packet: &GridPacket,
    initial: &GaussianPacket,
    params: &PhysicalParams,
    form: ExponentForm,
    sign: BranchSign,
    sigmas: f64,
) -> Result<GridPacket> {
    let e = Exponent::new(params, form);
    let s = sign.value();
    let hbar = params.hbar;
    check_fits(
        &packet.grid,
        Fit {
            center: initial.x0 + s * hbar * e.beta,
            sigma: initial.sigma_x,
            momentum: initial.p0 - s * hbar * e.alpha,
            sigma_p: initial.sigma_p(),
            hbar,
            sigmas,
        },
    )?;

    let grid = packet.grid;
    let n = grid.n;
    let spectral = Spectral::new(n);
    let mut buf = packet.samples.clone();
    spectral.forward.process(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= C64::from_polar(1.0 / n as f64, -s * e.beta * hbar * grid.wavenumber(j));
    }
    spectral.inverse.process(&mut buf);
    let scalar = C64::from_polar(1.0, 0.5 * hbar * e.alpha * e.beta + e.kerr);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= scalar * C64::from_polar(1.0, -s * e.alpha * grid.x(j));
    }
    Ok(GridPacket { grid, samples: buf })
}

/// Two-level state of one atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Excited,
    Ground,
}

/// One product term of the full state.
#[derive(Debug, Clone)]
pub struct Branch {
    pub atom1: Level,
    pub atom2: Level,
    pub photons: u8,
    pub amplitude: C64,
    pub packet1: GridPacket,
    pub packet2: GridPacket,
}

impl Branch {
    /// Index in the `|ee>, |eg>, |ge>, |gg>` basis.
    pub fn internal_index(&self) -> usize {
        let bit = |l: Level| match l {
            Level::Excited => 0,
            Level::Ground => 1,
        };
        2 * bit(self.atom1) + bit(self.atom2)
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitude.norm_sqr() * self.packet1.norm_sq() * self.packet2.norm_sq()
    }
}

/// Full post-interaction state as a sum of orthogonal product terms.
#[derive(Debug, Clone)]
pub struct BranchState {
    pub branches: Vec<Branch>,
}

impl BranchState {
    pub fn norm_sq(&self) -> f64 {
        self.branches.iter().map(Branch::norm_sq).sum()
    }
}

/// Grid resolution and extent for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub points: usize,
    pub margin_sigmas: f64,
    /// Truncation guard: required clearance of every displaced packet from
    /// the grid edges and from the Nyquist wavenumber, in widths.
    pub clearance_sigmas: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID_POINTS,
            margin_sigmas: DEFAULT_MARGIN_SIGMAS,
            clearance_sigmas: MIN_CLEARANCE_SIGMAS,
        }
    }
}

impl GridConfig {
    pub fn with_points(points: usize) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }

    /// Grid for one atom covering the undisplaced and both displaced
    /// centers with `margin_sigmas` to spare.
    pub fn grid_for(&self, params: &PhysicalParams, form: ExponentForm) -> Result<Grid> {
        let (pk, e) = match form {
            ExponentForm::Atom1 => (params.packet1(), Exponent::new(params, form)),
            ExponentForm::Atom2 => (params.packet2(), Exponent::new(params, form)),
        };
        let shift = (params.hbar * e.beta).abs();
        let margin = self.margin_sigmas * pk.sigma_x;
        Grid::new(pk.x0 - shift - margin, pk.x0 + shift + margin, self.points)
    }
}

// |±> = (|e,0> ± |g,1>)/√2 in the (|e,0>, |g,1>) basis
const EIGEN_PLUS: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
const EIGEN_MINUS: [f64; 2] = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];

/// Norm² below which a generated term is dropped as identically empty.
const EMPTY_BRANCH: f64 = 1e-30;

fn interact(
    state: BranchState,
    params: &PhysicalParams,
    form: ExponentForm,
    clearance: f64,
) -> Result<BranchState> {
    let initial = match form {
        ExponentForm::Atom1 => params.packet1(),
        ExponentForm::Atom2 => params.packet2(),
    };
    let mut out = Vec::new();
    for b in state.branches {
        let (level, packet) = match form {
            ExponentForm::Atom1 => (b.atom1, &b.packet1),
            ExponentForm::Atom2 => (b.atom2, &b.packet2),
        };
        // coordinates in the (|e,0>, |g,1>) sector
        let coords = match (level, b.photons) {
            (Level::Ground, 0) => {
                out.push(b);
                continue;
            }
            (Level::Excited, 0) => [1.0, 0.0],
            (Level::Ground, 1) => [0.0, 1.0],
            (level, n) => {
                return Err(Error::OutsideSector(format!("{level:?} with {n} photons")));
            }
        };
        let plus = apply_with_clearance(packet, &initial, params, form, BranchSign::Plus, clearance)?;
        let minus = apply_with_clearance(packet, &initial, params, form, BranchSign::Minus, clearance)?;
        let a_plus = EIGEN_PLUS[0] * coords[0] + EIGEN_PLUS[1] * coords[1];
        let a_minus = EIGEN_MINUS[0] * coords[0] + EIGEN_MINUS[1] * coords[1];
        for (slot, (lvl, photons)) in [(Level::Excited, 0u8), (Level::Ground, 1u8)].into_iter().enumerate() {
            let wp = C64::new(a_plus * EIGEN_PLUS[slot], 0.0);
            let wm = C64::new(a_minus * EIGEN_MINUS[slot], 0.0);
            let moved = plus.combine(wp, &minus, wm);
            let mut nb = Branch {
                photons,
                packet1: b.packet1.clone(),
                packet2: b.packet2.clone(),
                ..b
            };
            match form {
                ExponentForm::Atom1 => {
                    nb.atom1 = lvl;
                    nb.packet1 = moved;
                }
                ExponentForm::Atom2 => {
                    nb.atom2 = lvl;
                    nb.packet2 = moved;
                }
            }
            if nb.norm_sq() > EMPTY_BRANCH {
                out.push(nb);
            }
        }
    }
    Ok(BranchState { branches: out })
}

/// Full state after both interactions, built term by term on grids.
pub fn build_full_state(
    params: &PhysicalParams,
    initial: InitialState,
    grid: &GridConfig,
) -> Result<BranchState> {
    params.validate()?;
    let g1 = grid.grid_for(params, ExponentForm::Atom1)?;
    let g2 = grid.grid_for(params, ExponentForm::Atom2)?;
    let (atom1, photons) = match initial {
        InitialState::Gg1 => (Level::Ground, 1),
        InitialState::Eg0 => (Level::Excited, 0),
    };
    let start = BranchState {
        branches: vec![Branch {
            atom1,
            atom2: Level::Ground,
            photons,
            amplitude: C64::new(1.0, 0.0),
            packet1: GridPacket::from_gaussian(&params.packet1(), g1),
            packet2: GridPacket::from_gaussian(&params.packet2(), g2),
        }],
    };
    let after1 = interact(start, params, ExponentForm::Atom1, grid.clearance_sigmas)?;
    interact(after1, params, ExponentForm::Atom2, grid.clearance_sigmas)
}

/// Reduced internal state, summing terms with equal photon number weighted
/// by the quadrature overlaps of both atoms' packets.
///
/// Validated with a 1e-6 tolerance on trace and positivity, which bounds
/// the quadrature error.
pub fn reduce_to_internal(state: &BranchState) -> Result<TwoQubitDensityMatrix> {
    TwoQubitDensityMatrix::with_tolerances(internal_sum(state)?, 1e-6, 1e-6, 1e-6)
}

/// The partial-trace sum without density-matrix validation, for studying
/// under-resolved grids.
pub fn internal_sum(state: &BranchState) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for a in &state.branches {
        for b in &state.branches {
            if a.photons != b.photons {
                continue;
            }
            let w = a.amplitude
                * b.amplitude.conj()
                * quadrature_overlap(&b.packet1, &a.packet1)?
                * quadrature_overlap(&b.packet2, &a.packet2)?;
            m[(a.internal_index(), b.internal_index())] += w;
        }
    }
    Ok(m)
}

/// Reduced state straight from parameters.
pub fn oracle_rho(
    params: &PhysicalParams,
    initial: InitialState,
    grid: &GridConfig,
) -> Result<TwoQubitDensityMatrix> {
    reduce_to_internal(&build_full_state(params, initial, grid)?)
}

/// The six overlap coefficients by quadrature.
pub fn oracle_overlap_set(params: &PhysicalParams, grid: &GridConfig) -> Result<OverlapSet> {
    params.validate()?;
    let pk1 = params.packet1();
    let pk2 = params.packet2();
    let g1 = GridPacket::from_gaussian(&pk1, grid.grid_for(params, ExponentForm::Atom1)?);
    let g2 = GridPacket::from_gaussian(&pk2, grid.grid_for(params, ExponentForm::Atom2)?);
    let c = grid.clearance_sigmas;
    let a1p = apply_with_clearance(&g1, &pk1, params, ExponentForm::Atom1, BranchSign::Plus, c)?;
    let a1m = apply_with_clearance(&g1, &pk1, params, ExponentForm::Atom1, BranchSign::Minus, c)?;
    let a2p = apply_with_clearance(&g2, &pk2, params, ExponentForm::Atom2, BranchSign::Plus, c)?;
    let a2m = apply_with_clearance(&g2, &pk2, params, ExponentForm::Atom2, BranchSign::Minus, c)?;
    Ok(OverlapSet::from_values(
        quadrature_overlap(&a1p, &a1m)?,
        quadrature_overlap(&a2p, &a2m)?,
        quadrature_overlap(&a2p, &g2)?,
        quadrature_overlap(&a2m, &g2)?,
    ))
}
