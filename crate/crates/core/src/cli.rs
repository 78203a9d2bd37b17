//! Command-line front end of the `af-swe` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{apply_overrides, load_config, render_config};
use crate::driver::{Simulation, StepReport};
use crate::error::{Result, SweError};
use crate::norms::{convergence_order, l1_error, l1_error_exact, restrict_points};
use crate::scenarios::{builtin_scenarios, scenario, ScenarioConfig};
use crate::snapshot::Snapshot;

/// Environment switch for the per-step diagnostics file.
pub const DIAG_ENV: &str = "AF_SWE_SEED_DIAG";

#[derive(Debug, Parser)]
#[command(name = "af-swe", version, about = "Active Flux solver for the 1D shallow water equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write CSV snapshots.
    Run {
        #[command(flatten)]
        setup: Setup,
        /// Output directory for the snapshots.
        #[arg(long)]
        out: PathBuf,
    },
    /// L1 errors and observed orders over a sequence of grids.
    Convergence {
        #[command(flatten)]
        setup: Setup,
        /// Cell counts, comma separated. Unless `--exact` is given the last
        /// one is the reference and must be a multiple of the others.
        #[arg(long, value_delimiter = ',', required = true)]
        grids: Vec<usize>,
        /// Measure against the exact solution of the scenario instead.
        #[arg(long)]
        exact: bool,
        /// Output CSV table.
        #[arg(long)]
        out: PathBuf,
    },
    /// Largest deviation from the initial lake at rest over a number of steps.
    WbCheck {
        #[arg(long, default_value = "four-lakes")]
        scenario: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long)]
        cells: Option<usize>,
    },
    /// Print the built-in scenarios.
    List,
    /// Print a scenario as a configuration file.
    Show {
        #[command(flatten)]
        setup: Setup,
    },
}

/// Where a configuration comes from and what to change in it.
#[derive(Debug, Args)]
pub struct Setup {
    /// Built-in scenario name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub scenario: Option<String>,
    /// Configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Further `KEY=VALUE` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl Setup {
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let mut cfg = match (&self.scenario, &self.config) {
            (Some(name), _) => scenario(name)?,
            (None, Some(path)) => load_config(path)?,
            (None, None) => return Err(SweError::InvalidInput("give --scenario or --config".into())),
        };
        if let Some(n) = self.cells {
            cfg.n_cells = n;
        }
        if let Some(c) = self.cfl {
            cfg.cfl = c;
        }
        if let Some(t) = self.t_end {
            cfg.t_end = t;
        }
        apply_overrides(&mut cfg, &self.overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported as one line on stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("af-swe: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::List => list(out),
        Command::Show { setup } => {
            let cfg = setup.resolve()?;
            write_text(out, &render_config(&cfg))
        }
        Command::Run { setup, out: dir } => run(&setup.resolve()?, dir, out),
        Command::Convergence { setup, grids, exact, out: path } => {
            let rows = convergence(&setup.resolve()?, grids, *exact)?;
            let table = convergence_table(&rows);
            std::fs::write(path, &table).map_err(|e| SweError::io(path, e))?;
            write_text(out, &table)
        }
        Command::WbCheck { scenario: name, steps, cells } => {
            let mut cfg = scenario(name)?;
            if let Some(n) = cells {
                cfg.n_cells = *n;
            }
            let (level, m) = wb_check(&cfg, *steps)?;
            write_text(out, &format!("steps {steps}\nmax level deviation {level:e}\nmax |m| {m:e}\n"))
        }
    }
}

fn write_text(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| SweError::io("<stdout>", e))
}

fn list(out: &mut dyn Write) -> Result<()> {
    let mut text = String::new();
    for s in builtin_scenarios() {
        text.push_str(&format!("{:<22} {:>6} cells  t_end {:<8} {}\n", s.name, s.n_cells, s.t_end, s.description));
    }
    write_text(out, &text)
}

/// Snapshot file prefix for time `t`.
pub fn snapshot_prefix(dir: &Path, name: &str, t: f64) -> PathBuf {
    dir.join(format!("{name}_t{t}"))
}

/// Runs `cfg` to its end time, writing snapshots at the initial time, every
/// output time and the end time. Returns the paths of the point files.
pub fn run_with_snapshots(cfg: &ScenarioConfig, dir: &Path, mut on_step: impl FnMut(&StepReport)) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| SweError::io(dir, e))?;
    let mut sim = cfg.build()?;
    let mut times: Vec<f64> = cfg.snapshot_times.iter().copied().filter(|&t| t > 0.0 && t < cfg.t_end).collect();
    times.push(cfg.t_end);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut written = vec![Snapshot::from_simulation(&sim).write(&snapshot_prefix(dir, &cfg.name, 0.0))?.0];
    for target in times {
        while target - sim.time() > 1e-14 * target.abs().max(1.0) {
            let report = sim.step(Some(target - sim.time()))?;
            on_step(&report);
        }
        written.push(Snapshot::from_simulation(&sim).write(&snapshot_prefix(dir, &cfg.name, target))?.0);
    }
    Ok(written)
}

fn run(cfg: &ScenarioConfig, dir: &Path, out: &mut dyn Write) -> Result<()> {
    let diag = std::env::var(DIAG_ENV).is_ok_and(|v| v == "1");
    let mut rows = String::new();
    if diag {
        rows.push_str(StepReport::CSV_HEADER);
        rows.push('\n');
    }
    let mut steps = 0usize;
    let files = run_with_snapshots(cfg, dir, |r| {
        steps += 1;
        if diag {
            rows.push_str(&r.csv_row());
            rows.push('\n');
        }
    })?;
    if diag {
        let path = dir.join(format!("{}.steps.csv", cfg.name));
        std::fs::write(&path, rows).map_err(|e| SweError::io(&path, e))?;
    }
    write_text(out, &format!("{}: {steps} steps to t = {}, {} snapshots in {}\n", cfg.name, cfg.t_end, files.len(), dir.display()))
}

/// One line of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub err_h: f64,
    pub err_m: f64,
    pub order_h: Option<f64>,
    pub order_m: Option<f64>,
}

fn run_to_end(cfg: &ScenarioConfig) -> Result<Simulation> {
    let mut sim = cfg.build()?;
    sim.run_until(cfg.t_end, |_| {})?;
    Ok(sim)
}

/// L1 point-value errors of `cfg` at its end time on every grid in `grids`.
pub fn convergence(cfg: &ScenarioConfig, grids: &[usize], exact: bool) -> Result<Vec<ConvergenceRow>> {
    let (levels, reference) = if exact {
        (grids, None)
    } else {
        match grids.split_last() {
            Some((&r, rest)) if !rest.is_empty() => (rest, Some(r)),
            _ => return Err(SweError::InvalidInput("need at least one grid besides the reference".into())),
        }
    };
    if levels.is_empty() {
        return Err(SweError::InvalidInput("no grids given".into()));
    }
    let solution = if exact {
        Some(cfg.exact().ok_or_else(|| {
            SweError::InvalidInput(format!("scenario {} has no exact solution", cfg.name))
        })?)
    } else {
        None
    };
    let mut all: Vec<usize> = levels.to_vec();
    all.extend(reference);
    let sims: Vec<Simulation> =
        all.par_iter().map(|&n| run_to_end(&cfg.clone().with_cells(n))).collect::<Result<_>>()?;
    let mut errors = Vec::with_capacity(levels.len());
    for (k, &n) in levels.iter().enumerate() {
        let sim = &sims[k];
        let e = match (&solution, reference) {
            (Some(sol), _) => {
                let t = sim.time();
                l1_error_exact(sim.state(), sim.grid(), |x| (sol.height(t, x), sol.momentum(t, x)))?
            }
            (None, _) => {
                let fine = sims.last().expect("reference run");
                let restricted = restrict_points(fine.state(), fine.grid(), sim.grid())?;
                l1_error(sim.state(), &restricted, sim.grid())?
            }
        };
        errors.push((n, e));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(errors.len());
    for (k, &(n, (eh, em))) in errors.iter().enumerate() {
        let orders = (k > 0).then(|| {
            let (nc, (ehc, emc)) = errors[k - 1];
            let ratio = n as f64 / nc as f64;
            (convergence_order(ehc, eh, ratio), convergence_order(emc, em, ratio))
        });
        rows.push(ConvergenceRow { cells: n, err_h: eh, err_m: em, order_h: orders.map(|o| o.0), order_m: orders.map(|o| o.1) });
    }
    Ok(rows)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let fmt = |o: Option<f64>| o.map_or(String::new(), |v| format!("{v:.3}"));
    let mut s = String::from("cells,err_h,order_h,err_m,order_m\n");
    for r in rows {
        s.push_str(&format!("{},{:e},{},{:e},{}\n", r.cells, r.err_h, fmt(r.order_h), r.err_m, fmt(r.order_m)));
    }
    s
}

/// Runs `steps` steps from a lake at rest and returns the largest deviation
/// of the water level at wet points and the largest `|m|` seen.
pub fn wb_check(cfg: &ScenarioConfig, steps: usize) -> Result<(f64, f64)> {
    let mut sim = cfg.build()?;
    let n = sim.state().pts.len();
    let level = |sim: &Simulation, j: usize| sim.state().pts[j].h() + sim.bottom().interface_value(j as isize);
    let initial: Vec<f64> = (0..n).map(|j| level(&sim, j)).collect();
    let (mut dev, mut mmax) = (0.0f64, 0.0f64);
    for _ in 0..steps {
        sim.step(None)?;
        for (j, q) in sim.state().pts.iter().enumerate() {
            if !q.is_dry() {
                dev = dev.max((level(&sim, j) - initial[j]).abs());
            }
            mmax = mmax.max(q.m().abs());
        }
    }
    Ok((dev, mmax))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("af-swe").chain(args.iter().copied()))
            .map_err(|e| SweError::InvalidInput(e.to_string()))?;
        let mut buf = Vec::new();
        execute(&cli.command, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn list_names_every_scenario() {
        let text = exec(&["list"]).unwrap();
        assert!(text.lines().count() >= 7);
        assert!(text.contains("parabolic-bowl"));
    }

    #[test]
    fn run_writes_snapshots() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        exec(&["run", "--scenario", "transcritical", "--cells", "40", "--t-end", "0.5", "--set", "output.times=0.25", "--out", out])
            .unwrap();
        let points = std::fs::read_to_string(dir.path().join("transcritical_t0.25.points.csv")).unwrap();
        assert_eq!(points.lines().count(), 42);
        let back = Snapshot::read(&dir.path().join("transcritical_t0.5")).unwrap();
        assert_eq!(back.averages.len(), 40);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(exec(&["run", "--scenario", "nope", "--out", "/tmp"]).is_err());
        assert!(exec(&["run", "--scenario", "four-lakes"]).is_err());
        assert!(exec(&["run", "--scenario", "four-lakes", "--set", "grid.cells=x", "--out", "/tmp"]).is_err());
        let code = run_cli(["af-swe", "run", "--scenario", "four-lakes", "--t-end", "0.01", "--out", "/proc/forbidden"]);
        assert_ne!(code, 0);
        assert_ne!(run_cli(["af-swe", "frobnicate"]), 0);
    }

    #[test]
    fn wb_check_short() {
        let cfg = scenario("four-lakes").unwrap();
        let (level, m) = wb_check(&cfg, 200).unwrap();
        assert!(level <= 1e-12 && m <= 1e-12, "{level} {m}");
    }

    #[test]
    fn convergence_table_shape() {
        let cfg = scenario("convergence").unwrap();
        let rows = convergence(&cfg, &[32, 64, 256], false).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].order_h.is_none());
        assert!(rows[1].err_h < rows[0].err_h);
        let table = convergence_table(&rows);
        assert!(table.starts_with("cells,err_h,order_h,err_m,order_m\n32,"));
        assert!(convergence(&cfg, &[48, 64], false).is_err());
        assert!(convergence(&cfg, &[32], true).is_err());
    }
}
