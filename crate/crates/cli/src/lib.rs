//! Sweeps, figure panels and oracle verification behind the `osg` binary.

pub mod config;
pub mod figure;
pub mod svg;
pub mod sweep;
pub mod verify;

use std::path::{Path, PathBuf};

pub use config::{Model, ScenarioConfig};
pub use figure::{emit_figure1, figure_csv, FigurePanels, FigureRow};
pub use sweep::{run_sweep, sweep_csv, SweepRow};
pub use verify::{verify, VerifyReport};

use svg::{line_plot, Series};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<osg::Error> for CliError {
    fn from(e: osg::Error) -> Self {
        match e {
            osg::Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    /// Prefixes the message with the sweep row it came from.
    pub fn at_row(self, index: usize, t_rabi: f64) -> Self {
        let ctx = |m: String| format!("row {index} (T = {t_rabi} Rabi periods): {m}");
        match self {
            CliError::Usage(m) => CliError::Usage(ctx(m)),
            CliError::Verification(m) => CliError::Verification(ctx(m)),
            CliError::Numeric(m) => CliError::Numeric(ctx(m)),
            CliError::Io(m) => CliError::Io(ctx(m)),
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Sidecar text: artifact version, config echo, row count and columns.
pub fn meta_text(cfg: &ScenarioConfig, header: &str, rows: usize) -> String {
    format!(
        "artifact = osg {}\n{}rows = {rows}\ncolumns = {header}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.echo()
    )
}

/// Writes the sweep CSV plus `.meta` (and `.svg` if requested) next to it.
pub fn write_sweep(cfg: &ScenarioConfig, rows: &[SweepRow], path: &Path) -> Result<Vec<PathBuf>, CliError> {
    write(path, &sweep_csv(rows))?;
    let meta = path.with_extension("meta");
    write(&meta, &meta_text(cfg, sweep::SWEEP_HEADER, rows.len()))?;
    let mut written = vec![path.to_path_buf(), meta];
    if cfg.svg {
        let x: Vec<f64> = rows.iter().map(|r| r.t_rabi).collect();
        let plot = line_plot(
            &format!("{} model, {} start", cfg.model, cfg.initial_state),
            "T (Rabi periods)",
            &x,
            &[
                Series { label: "M", y: rows.iter().map(|r| r.m_value).collect(), color: "black", dashed: false },
                Series { label: "min PT eigenvalue", y: rows.iter().map(|r| r.ppt_min).collect(), color: "firebrick", dashed: true },
            ],
        );
        let svg = path.with_extension("svg");
        write(&svg, &plot)?;
        written.push(svg);
    }
    Ok(written)
}

pub const PANEL_FILES: [&str; 2] = ["figure1_panel_i", "figure1_panel_ii"];

/// Writes both panels into `dir` as CSV with sidecars (and SVG if requested).
pub fn write_figure(cfg: &ScenarioConfig, panels: &FigurePanels, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (stem, (rows, title)) in PANEL_FILES.iter().zip([
        (&panels.panel_i, "fixed positions"),
        (&panels.panel_ii, "quantized motion"),
    ]) {
        let csv = dir.join(format!("{stem}.csv"));
        write(&csv, &figure_csv(rows))?;
        let meta = dir.join(format!("{stem}.meta"));
        write(&meta, &meta_text(cfg, figure::FIGURE_HEADER, rows.len()))?;
        written.extend([csv, meta]);
        if cfg.svg {
            let x: Vec<f64> = rows.iter().map(|r| r.t_rabi).collect();
            let plot = line_plot(
                title,
                "T (Rabi periods)",
                &x,
                &[
                    Series { label: "nu1 + nu2", y: rows.iter().map(|r| r.nu1_plus_nu2).collect(), color: "black", dashed: false },
                    Series { label: "2 nu2", y: rows.iter().map(|r| r.two_nu2).collect(), color: "black", dashed: true },
                ],
            );
            let svg = dir.join(format!("{stem}.svg"));
            write(&svg, &plot)?;
            written.push(svg);
        }
    }
    Ok(written)
}
