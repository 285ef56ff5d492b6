//! Interaction-time sweeps and their CSV form.

use std::fmt::Write as _;

use osg::models::{build_rho_jc, build_rho_sg};
use osg::oracle::oracle_rho;
use osg::{compute_overlap_set, EntanglementReport, PhysicalParams, TwoQubitDensityMatrix, DEFAULT_PPT_TOLERANCE};
use rayon::prelude::*;

use crate::config::{Model, ScenarioConfig};
use crate::CliError;

/// Residual allowed between closed-form and grid states in `--verify`.
pub const ORACLE_RHO_TOLERANCE: f64 = 1e-6;

pub const SWEEP_HEADER: &str =
    "T_seconds,T_rabi,nu1,nu2,nu3,m_value,ppt_min,damping1,damping2,separable,bell_violated";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t_seconds: f64,
    pub t_rabi: f64,
    /// Correlation-tensor eigenvalues, descending.
    pub nu: [f64; 3],
    pub m_value: f64,
    pub ppt_min: f64,
    pub damping1: f64,
    pub damping2: f64,
    pub separable: bool,
    pub bell_violated: bool,
}

/// 17 significant digits.
pub(crate) fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepRow {
    pub fn csv(&self) -> String {
        [
            sci(self.t_seconds),
            sci(self.t_rabi),
            sci(self.nu[0]),
            sci(self.nu[1]),
            sci(self.nu[2]),
            sci(self.m_value),
            sci(self.ppt_min),
            sci(self.damping1),
            sci(self.damping2),
            u8::from(self.separable).to_string(),
            u8::from(self.bell_violated).to_string(),
        ]
        .join(",")
    }
}

/// Reduced state for `model` at interaction time `t` seconds on the
/// `T, 2T, 3T` schedule.
pub fn state_at(cfg: &ScenarioConfig, model: Model, t: f64) -> Result<(PhysicalParams, TwoQubitDensityMatrix), CliError> {
    let p = cfg.params().with_interaction_time(t);
    let rho = match model {
        Model::Sg => build_rho_sg(&p, cfg.initial_state)?,
        Model::Jc => build_rho_jc(p.epsilon_jc(), t, cfg.initial_state)?,
    };
    Ok((p, rho))
}

fn row_at(cfg: &ScenarioConfig, index: usize, t_rabi: f64) -> Result<SweepRow, CliError> {
    let at_row = |e: CliError| e.at_row(index, t_rabi);
    let t = t_rabi * cfg.params().rabi_period();
    let (p, rho) = state_at(cfg, cfg.model, t).map_err(at_row)?;
    let report = EntanglementReport::evaluate(&rho, DEFAULT_PPT_TOLERANCE).map_err(|e| at_row(e.into()))?;
    let (damping1, damping2) = match cfg.model {
        Model::Sg => {
            let o = compute_overlap_set(&p).map_err(|e| at_row(e.into()))?;
            (o.atom1().norm(), o.atom2().norm())
        }
        Model::Jc => (1.0, 1.0),
    };
    if cfg.verify && cfg.model == Model::Sg {
        let grid = oracle_rho(&p, cfg.initial_state, &cfg.grid()).map_err(|e| at_row(e.into()))?;
        let residual = rho.matrix().max_abs_diff(grid.matrix());
        let tol = cfg.tolerance.unwrap_or(ORACLE_RHO_TOLERANCE);
        if residual.is_nan() || residual > tol {
            return Err(at_row(CliError::Verification(format!(
                "grid state differs from closed form: expected residual <= {tol:e}, got {residual:e}"
            ))));
        }
    }
    let ppt_min = report.ppt_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let row = SweepRow {
        t_seconds: t,
        t_rabi,
        nu: report.nu,
        m_value: report.m_value,
        ppt_min,
        damping1,
        damping2,
        separable: report.separable,
        bell_violated: report.bell_violated,
    };
    let finite = [row.t_seconds, row.m_value, row.ppt_min, row.damping1, row.damping2]
        .iter()
        .chain(row.nu.iter())
        .all(|v| v.is_finite());
    if !finite {
        return Err(at_row(CliError::Numeric("non-finite value in row".into())));
    }
    Ok(row)
}

/// One row per grid point, computed in parallel and returned in grid order.
pub fn run_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    cfg.t_grid()
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| row_at(cfg, i, t))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::with_capacity(rows.len() * 256);
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.csv());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(model: Model) -> ScenarioConfig {
        ScenarioConfig {
            model,
            t_end: 1.0,
            steps: 5,
            ..Default::default()
        }
    }

    #[test]
    fn jc_starts_as_product_state() {
        let rows = run_sweep(&small(Model::Jc)).unwrap();
        assert_eq!(rows.len(), 5);
        assert!((rows[0].m_value - 1.0).abs() < 1e-15);
        assert!(rows[0].separable);
    }

    #[test]
    fn fixed_positions_violate_chsh_somewhere() {
        let rows = run_sweep(&ScenarioConfig { steps: 41, ..small(Model::Jc) }).unwrap();
        let peak = rows.iter().map(|r| r.nu[0] + r.nu[1]).fold(f64::MIN, f64::max);
        assert!(peak > 1.0);
        assert!(rows.iter().any(|r| r.bell_violated && !r.separable));
    }

    #[test]
    fn models_agree_at_zero_time() {
        let a = run_sweep(&small(Model::Jc)).unwrap();
        let b = run_sweep(&small(Model::Sg)).unwrap();
        assert_eq!(a[0], b[0]);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let rows = run_sweep(&small(Model::Sg)).unwrap();
        let csv = sweep_csv(&rows);
        for line in csv.lines() {
            assert_eq!(line.split(',').count(), 11);
        }
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn verify_checks_each_row() {
        let mut c = small(Model::Sg);
        c.verify = true;
        c.grid_points = 1 << 12;
        assert!(run_sweep(&c).is_ok());
        c.tolerance = Some(1e-30);
        let e = run_sweep(&c).unwrap_err();
        assert!(e.to_string().contains("row"), "{e}");
    }
}
