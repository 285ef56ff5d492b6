//! The two Bell-test panels: fixed-position atoms and atoms with quantized
//! motion, both starting from `|g, g, 1>`.

use std::fmt::Write as _;

use osg::{degenerate_m, InitialState};
use rayon::prelude::*;

use crate::config::{Model, ScenarioConfig};
use crate::sweep::{sci, state_at};
use crate::CliError;

pub const FIGURE_HEADER: &str = "T_rabi,nu1_plus_nu2,two_nu2";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub t_rabi: f64,
    pub nu1_plus_nu2: f64,
    pub two_nu2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePanels {
    /// Fixed positions.
    pub panel_i: Vec<FigureRow>,
    /// Quantized motion.
    pub panel_ii: Vec<FigureRow>,
}

fn panel(cfg: &ScenarioConfig, model: Model) -> Result<Vec<FigureRow>, CliError> {
    let period = cfg.params().rabi_period();
    cfg.t_grid()
        .into_par_iter()
        .enumerate()
        .map(|(i, t_rabi)| {
            let (_, rho) = state_at(cfg, model, t_rabi * period).map_err(|e| e.at_row(i, t_rabi))?;
            let m = degenerate_m(&rho).map_err(|e| CliError::from(e).at_row(i, t_rabi))?;
            Ok(FigureRow {
                t_rabi,
                nu1_plus_nu2: m.nu1 + m.nu2,
                two_nu2: 2.0 * m.nu2,
            })
        })
        .collect()
}

/// Both panels on the config's time grid. The initial state must be
/// `gg1` and the two packets must sit at the same distance from the node.
pub fn emit_figure1(cfg: &ScenarioConfig) -> Result<FigurePanels, CliError> {
    cfg.validate()?;
    if cfg.initial_state != InitialState::Gg1 {
        return Err(CliError::Usage(format!(
            "initial_state: figure panels start from gg1, got {}",
            cfg.initial_state
        )));
    }
    let p = cfg.params();
    if p.x1 != p.x2 {
        return Err(CliError::Usage(format!(
            "x2: figure panels need x1 = x2 so both atoms share one coupling, got {:e} and {:e}",
            p.x1, p.x2
        )));
    }
    Ok(FigurePanels {
        panel_i: panel(cfg, Model::Jc)?,
        panel_ii: panel(cfg, Model::Sg)?,
    })
}

pub fn figure_csv(rows: &[FigureRow]) -> String {
    let mut s = String::new();
    s.push_str(FIGURE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{}", sci(r.t_rabi), sci(r.nu1_plus_nu2), sci(r.two_nu2));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ScenarioConfig {
        ScenarioConfig {
            t_end: 2.0,
            steps: 401,
            ..Default::default()
        }
    }

    #[test]
    fn fixed_position_panel_starts_at_product_state() {
        let f = emit_figure1(&cfg()).unwrap();
        let r = f.panel_i[0];
        assert!((r.nu1_plus_nu2 - 1.0).abs() < 1e-15);
        assert!(r.two_nu2.abs() < 1e-15);
    }

    #[test]
    fn fixed_position_panel_has_half_period() {
        let f = emit_figure1(&cfg()).unwrap();
        // 0.5 Rabi periods is 100 grid steps
        for i in 0..300 {
            let (a, b) = (f.panel_i[i], f.panel_i[i + 100]);
            assert!((a.nu1_plus_nu2 - b.nu1_plus_nu2).abs() < 1e-9, "row {i}");
            assert!((a.two_nu2 - b.two_nu2).abs() < 1e-9, "row {i}");
        }
    }

    #[test]
    fn motion_panel_settles_to_saturated_limit() {
        // all overlaps vanish: ρ = diag(0, 1/2, 1/4, 1/4), so ν = (1/4, 0, 0)
        let f = emit_figure1(&ScenarioConfig { t_end: 3.0, steps: 7, ..Default::default() }).unwrap();
        let last = f.panel_ii.last().unwrap();
        assert!((last.nu1_plus_nu2 - 0.25).abs() < 1e-9);
        assert!(last.two_nu2.abs() < 1e-9);
    }

    #[test]
    fn rejects_other_initial_state_and_uneven_packets() {
        let mut c = cfg();
        c.initial_state = InitialState::Eg0;
        assert!(matches!(emit_figure1(&c), Err(CliError::Usage(_))));
        let mut c = cfg();
        c.x2 = Some(2e-6);
        assert!(matches!(emit_figure1(&c), Err(CliError::Usage(_))));
    }
}
