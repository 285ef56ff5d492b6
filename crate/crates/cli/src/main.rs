use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use osg_cli::{emit_figure1, run_sweep, sweep_csv, verify, write_figure, write_sweep, CliError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "osg", version, about = "Entanglement and Bell-test sweeps for two atoms sharing one cavity photon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the interaction time and write one CSV row per grid point.
    Sweep(Scenario),
    /// Write both Bell-test panels (fixed positions, quantized motion).
    Figure1 {
        #[command(flatten)]
        scenario: Scenario,
        /// Directory for the panel files.
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Check the closed forms against the grid simulation.
    Verify(Scenario),
}

#[derive(Args)]
struct Scenario {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mass: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    x1: Option<String>,
    #[arg(long)]
    x2: Option<String>,
    #[arg(long)]
    sigma_x1: Option<String>,
    #[arg(long)]
    sigma_x2: Option<String>,
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    /// sg or jc.
    #[arg(long)]
    model: Option<String>,
    /// gg1 or eg0.
    #[arg(long)]
    initial_state: Option<String>,
    /// In Rabi periods.
    #[arg(long)]
    t_start: Option<String>,
    /// In Rabi periods.
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    output: Option<String>,
    /// Cross-check every row against the grid simulation.
    #[arg(long)]
    verify: bool,
    /// Also render SVG line plots.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    grid_points: Option<String>,
    /// Overrides every verification tolerance.
    #[arg(long)]
    tolerance: Option<String>,
}

impl Scenario {
    fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ScenarioConfig::from_file(path)?,
            None => ScenarioConfig::default(),
        };
        let pairs = [
            ("mass", &self.mass),
            ("lambda", &self.lambda),
            ("epsilon", &self.epsilon),
            ("x1", &self.x1),
            ("x2", &self.x2),
            ("sigma-x1", &self.sigma_x1),
            ("sigma-x2", &self.sigma_x2),
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("model", &self.model),
            ("initial-state", &self.initial_state),
            ("t-start", &self.t_start),
            ("t-end", &self.t_end),
            ("steps", &self.steps),
            ("output", &self.output),
            ("grid-points", &self.grid_points),
            ("tolerance", &self.tolerance),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.verify |= self.verify;
        cfg.svg |= self.svg;
        Ok(cfg)
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep(s) => {
            let cfg = s.resolve()?;
            for w in cfg.params().nodal_warnings() {
                eprintln!("warning: {w}");
            }
            let rows = run_sweep(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    for p in write_sweep(&cfg, &rows, path)? {
                        eprintln!("wrote {}", p.display());
                    }
                }
                None => {
                    if cfg.svg {
                        return Err(CliError::Usage("svg: needs --output to name the plot file".into()));
                    }
                    std::io::stdout()
                        .write_all(sweep_csv(&rows).as_bytes())
                        .map_err(|e| CliError::Io(e.to_string()))?;
                }
            }
            Ok(())
        }
        Command::Figure1 { scenario, output_dir } => {
            let cfg = scenario.resolve()?;
            let panels = emit_figure1(&cfg)?;
            for p in write_figure(&cfg, &panels, &output_dir)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Verify(s) => {
            let cfg = s.resolve()?;
            let report = verify(&cfg)?;
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
                Err(CliError::Verification(failed.join(", ")))
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
fn dispatch<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("osg: {e}");
            e.exit_code() as u8
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(dispatch(std::env::args_os()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn osg(args: &[&str]) -> u8 {
        dispatch(std::iter::once("osg").chain(args.iter().copied()))
    }

    fn read(p: &Path) -> String {
        std::fs::read_to_string(p).unwrap()
    }

    fn column(csv: &str, n: usize) -> Vec<f64> {
        csv.lines().skip(1).map(|l| l.split(',').nth(n).unwrap().parse().unwrap()).collect()
    }

    #[test]
    fn sweep_writes_stable_csv_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        for path in [&a, &b] {
            let code = osg(&["sweep", "--steps", "21", "--t-end", "1", "--svg", "--output", path.to_str().unwrap()]);
            assert_eq!(code, 0);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let csv = read(&a);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "T_seconds,T_rabi,nu1,nu2,nu3,m_value,ppt_min,damping1,damping2,separable,bell_violated"
        );
        assert_eq!(lines.count(), 21);
        let meta = read(&dir.path().join("a.meta"));
        assert!(meta.contains("model = sg") && meta.contains("rows = 21"), "{meta}");
        assert!(read(&dir.path().join("a.svg")).starts_with("<svg"));
    }

    #[test]
    fn damping_column_decreases() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("d.csv");
        assert_eq!(osg(&["sweep", "--steps", "41", "--t-end", "0.4", "--output", out.to_str().unwrap()]), 0);
        let damping = column(&read(&out), 7);
        assert_eq!(damping[0], 1.0);
        assert!(damping.windows(2).skip(1).all(|w| w[1] < w[0]));
    }

    #[test]
    fn config_file_with_flag_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("s.cfg");
        let out = dir.path().join("s.csv");
        std::fs::write(&cfg, format!("model = jc\nsteps = 5\nt_end = 1\noutput = {}\n", out.display())).unwrap();
        assert_eq!(osg(&["sweep", "--config", cfg.to_str().unwrap(), "--steps", "3"]), 0);
        let csv = read(&out);
        assert_eq!(csv.lines().count(), 4);
        // fixed positions never damp
        assert!(column(&csv, 7).iter().all(|&d| d == 1.0));
    }

    #[test]
    fn usage_errors_exit_one() {
        for args in [
            vec!["sweep", "--steps", "1"],
            vec!["sweep", "--model", "rabi"],
            vec!["sweep", "--t-end", "-1"],
            vec!["sweep", "--svg"],
            vec!["figure1", "--initial-state", "eg0"],
            vec!["nonsense"],
        ] {
            assert_eq!(osg(&args), 1, "{args:?}");
        }
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(osg(&["--help"]), 0);
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(osg(&["verify", "--t-end", "0.5", "--grid-points", "4096"]), 0);
        assert_eq!(osg(&["verify", "--t-end", "0.5", "--grid-points", "4096", "--tolerance", "1e-30"]), 2);
    }

    #[test]
    fn figure1_writes_both_panels() {
        let dir = tempfile::tempdir().unwrap();
        let code = osg(&["figure1", "--steps", "101", "--t-end", "1", "--svg", "--output-dir", dir.path().to_str().unwrap()]);
        assert_eq!(code, 0);
        for stem in ["figure1_panel_i", "figure1_panel_ii"] {
            let csv = read(&dir.path().join(format!("{stem}.csv")));
            assert!(csv.starts_with("T_rabi,nu1_plus_nu2,two_nu2\n"));
            assert_eq!(csv.lines().count(), 102);
            assert!(dir.path().join(format!("{stem}.meta")).exists());
            assert!(dir.path().join(format!("{stem}.svg")).exists());
        }
    }
}
