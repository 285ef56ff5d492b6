//! Closed forms against the grid oracle on a subsample of the sweep grid.

use std::fmt;

use num_complex::Complex64 as C64;
use osg::entanglement::{closed_form_ppt_eigenvalues, ppt_report};
use osg::oracle::{oracle_overlap_set, oracle_rho, GridConfig};
use osg::{build_rho_sg, compute_overlap_set, sg_coefficients, InitialState, OverlapSet, DEFAULT_PPT_TOLERANCE};

use crate::config::ScenarioConfig;
use crate::CliError;

pub const OVERLAP_TOLERANCE: f64 = 1e-8;
pub const RHO_TOLERANCE: f64 = 1e-6;
pub const PPT_TOLERANCE: f64 = 1e-9;
/// Below this many points the oracle is flagged as possibly unconverged.
pub const MIN_CONVERGED_POINTS: usize = 1024;
/// Allowed change in the overlaps when the grid is doubled.
pub const REFINEMENT_TOLERANCE: f64 = 1e-12;
const SAMPLES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    /// Grid point of the largest residual, in Rabi periods.
    pub worst_t_rabi: f64,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{verdict} {}: max residual {:.3e} (tolerance {:.3e}) at T = {:.6} Rabi periods",
                c.name, c.residual, c.tolerance, c.worst_t_rabi
            )?;
            if !c.passed() {
                writeln!(f, "    expected {}", c.expected)?;
                writeln!(f, "    actual   {}", c.actual)?;
            }
        }
        Ok(())
    }
}

struct Worst {
    residual: f64,
    t_rabi: f64,
    expected: String,
    actual: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: f64::NEG_INFINITY,
            t_rabi: 0.0,
            expected: String::new(),
            actual: String::new(),
        }
    }

    fn offer(&mut self, residual: f64, t_rabi: f64, expected: impl FnOnce() -> String, actual: impl FnOnce() -> String) {
        // a NaN residual is the worst possible and sticks
        if !self.residual.is_nan() && (residual.is_nan() || residual > self.residual) {
            self.residual = residual;
            self.t_rabi = t_rabi;
            self.expected = expected();
            self.actual = actual();
        }
    }

    fn into_check(self, name: &'static str, tolerance: f64) -> Check {
        Check {
            name,
            residual: self.residual,
            tolerance,
            worst_t_rabi: self.t_rabi,
            expected: self.expected,
            actual: self.actual,
        }
    }
}

fn overlaps(o: &OverlapSet) -> [C64; 4] {
    [o.atom1(), o.atom2(), o.c_plus, o.c_minus]
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn numeric(e: osg::Error, t_rabi: f64) -> CliError {
    CliError::Numeric(format!("at T = {t_rabi} Rabi periods: {e}"))
}

/// Evenly spaced subsample of the sweep grid, endpoints included.
fn sample_times(cfg: &ScenarioConfig) -> Vec<f64> {
    let grid = cfg.t_grid();
    let n = SAMPLES.min(grid.len());
    (0..n).map(|i| grid[i * (grid.len() - 1) / (n - 1)]).collect()
}

pub fn verify(cfg: &ScenarioConfig) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    let base = cfg.params();
    let period = base.rabi_period();
    let grid = cfg.grid();
    let tol = |default: f64| cfg.tolerance.unwrap_or(default);

    let mut ov = Worst::new();
    let mut rho_gg1 = Worst::new();
    let mut rho_eg0 = Worst::new();
    let mut ppt = Worst::new();
    let times = sample_times(cfg);
    for &t_rabi in &times {
        let p = base.clone().with_interaction_time(t_rabi * period);
        let closed = compute_overlap_set(&p).map_err(|e| numeric(e, t_rabi))?;
        let grid_o = oracle_overlap_set(&p, &grid).map_err(|e| numeric(e, t_rabi))?;
        let (a, b) = (overlaps(&closed), overlaps(&grid_o));
        ov.offer(max_diff(&a, &b), t_rabi, || format!("{a:?}"), || format!("{b:?}"));

        for (initial, slot) in [(InitialState::Gg1, &mut rho_gg1), (InitialState::Eg0, &mut rho_eg0)] {
            let closed = build_rho_sg(&p, initial).map_err(|e| numeric(e, t_rabi))?;
            let g = oracle_rho(&p, initial, &grid).map_err(|e| numeric(e, t_rabi))?;
            let r = closed.matrix().max_abs_diff(g.matrix());
            slot.offer(r, t_rabi, || format!("{:?}", closed.matrix()), || format!("{:?}", g.matrix()));
        }

        let co = sg_coefficients(&closed);
        let cf = closed_form_ppt_eigenvalues(&co).sorted();
        let rho = build_rho_sg(&p, InitialState::Gg1).map_err(|e| numeric(e, t_rabi))?;
        let num = ppt_report(&rho, DEFAULT_PPT_TOLERANCE).map_err(|e| numeric(e, t_rabi))?.eigenvalues;
        let r = cf.iter().zip(&num).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ppt.offer(r, t_rabi, || format!("{cf:?}"), || format!("{num:?}"));
    }

    let mut report = VerifyReport {
        checks: vec![
            ov.into_check("overlaps", tol(OVERLAP_TOLERANCE)),
            rho_gg1.into_check("reduced_state_gg1", tol(RHO_TOLERANCE)),
            rho_eg0.into_check("reduced_state_eg0", tol(RHO_TOLERANCE)),
            ppt.into_check("ppt_closed_form", tol(PPT_TOLERANCE)),
        ],
        warnings: Vec::new(),
    };

    if cfg.grid_points < MIN_CONVERGED_POINTS {
        report.warnings.push(format!(
            "grid of {} points is below {MIN_CONVERGED_POINTS}; oracle results may be unconverged",
            cfg.grid_points
        ));
    }
    let t_mid = times[times.len() / 2];
    let p = base.with_interaction_time(t_mid * period);
    let fine = GridConfig::with_points(2 * cfg.grid_points);
    let a = overlaps(&oracle_overlap_set(&p, &grid).map_err(|e| numeric(e, t_mid))?);
    let b = overlaps(&oracle_overlap_set(&p, &fine).map_err(|e| numeric(e, t_mid))?);
    let change = max_diff(&a, &b);
    if change > REFINEMENT_TOLERANCE {
        report.warnings.push(format!(
            "doubling the grid to {} points changes the overlaps by {change:.3e} at T = {t_mid} Rabi periods",
            2 * cfg.grid_points
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ScenarioConfig {
        ScenarioConfig {
            t_end: 0.5,
            steps: 11,
            grid_points: 1 << 12,
            ..Default::default()
        }
    }

    #[test]
    fn default_checks_pass() {
        let r = verify(&quick()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 4);
        assert!(r.warnings.is_empty(), "{r}");
    }

    #[test]
    fn coarse_grid_warns() {
        let r = verify(&ScenarioConfig { grid_points: 256, ..quick() }).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("256")), "{r}");
    }

    #[test]
    fn tampered_tolerance_fails_with_details() {
        let r = verify(&ScenarioConfig { tolerance: Some(1e-30), ..quick() }).unwrap();
        assert!(!r.passed());
        let text = r.to_string();
        assert!(text.contains("FAIL") && text.contains("expected") && text.contains("actual"), "{text}");
    }
}
