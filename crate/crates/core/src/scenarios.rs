//! Built-in benchmark setups and their exact solutions where known.

use std::f64::consts::PI;
use std::path::Path;

use crate::bottom::{project_bottom, BottomTopography};
use crate::driver::{SchemeOptions, Simulation};
use crate::error::{Result, SweError};
use crate::grid::{BoundaryKind, Grid};
use crate::state::Constants;

/// Analytic bottom topography.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BottomSpec {
    Flat { level: f64 },
    /// `amplitude · (1 + cos(wavenumber · π · x))`
    Cosine { amplitude: f64, wavenumber: f64 },
    /// `max(0, height · (1 - ((x - center) / half_width)²))`
    Bump { center: f64, half_width: f64, height: f64 },
    /// `height` left of `x_jump`, falling linearly to 0 over `ramp / 2`.
    Step { height: f64, x_jump: f64, ramp: f64 },
    /// Plateau of `height` on `[x_left, x_right]` with linear flanks of width
    /// `ramp / 2` outside it.
    Plateau { height: f64, x_left: f64, x_right: f64, ramp: f64 },
    /// `(x / x0)²`
    Bowl { x0: f64 },
    /// `offset + slope · x`
    Linear { offset: f64, slope: f64 },
}

impl BottomSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BottomSpec::Flat { .. } => "flat",
            BottomSpec::Cosine { .. } => "cosine",
            BottomSpec::Bump { .. } => "bump",
            BottomSpec::Step { .. } => "step",
            BottomSpec::Plateau { .. } => "plateau",
            BottomSpec::Bowl { .. } => "bowl",
            BottomSpec::Linear { .. } => "linear",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            BottomSpec::Flat { level } => level,
            BottomSpec::Cosine { amplitude, wavenumber } => amplitude * (1.0 + (wavenumber * PI * x).cos()),
            BottomSpec::Bump { center, half_width, height } => {
                let s = (x - center) / half_width;
                (height * (1.0 - s * s)).max(0.0)
            }
            BottomSpec::Step { height, x_jump, ramp } => {
                if x < x_jump {
                    height
                } else if x < x_jump + 0.5 * ramp {
                    height * (1.0 - (x - x_jump) / (0.5 * ramp))
                } else {
                    0.0
                }
            }
            BottomSpec::Plateau { height, x_left, x_right, ramp } => {
                let w = 0.5 * ramp;
                if x < x_left - w || x > x_right + w {
                    0.0
                } else if x < x_left {
                    height * (x - (x_left - w)) / w
                } else if x > x_right {
                    height * ((x_right + w) - x) / w
                } else {
                    height
                }
            }
            BottomSpec::Bowl { x0 } => (x / x0) * (x / x0),
            BottomSpec::Linear { offset, slope } => offset + slope * x,
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            BottomSpec::Flat { level } => vec![("level", level)],
            BottomSpec::Cosine { amplitude, wavenumber } => vec![("amplitude", amplitude), ("wavenumber", wavenumber)],
            BottomSpec::Bump { center, half_width, height } => {
                vec![("center", center), ("half_width", half_width), ("height", height)]
            }
            BottomSpec::Step { height, x_jump, ramp } => vec![("height", height), ("x_jump", x_jump), ("ramp", ramp)],
            BottomSpec::Plateau { height, x_left, x_right, ramp } => {
                vec![("height", height), ("x_left", x_left), ("x_right", x_right), ("ramp", ramp)]
            }
            BottomSpec::Bowl { x0 } => vec![("x0", x0)],
            BottomSpec::Linear { offset, slope } => vec![("offset", offset), ("slope", slope)],
        }
    }

    fn set_param(&mut self, key: &str, v: f64) -> bool {
        let slot = match (self, key) {
            (BottomSpec::Flat { level }, "level") => level,
            (BottomSpec::Cosine { amplitude, .. }, "amplitude") => amplitude,
            (BottomSpec::Cosine { wavenumber, .. }, "wavenumber") => wavenumber,
            (BottomSpec::Bump { center, .. }, "center") => center,
            (BottomSpec::Bump { half_width, .. }, "half_width") => half_width,
            (BottomSpec::Bump { height, .. }, "height") => height,
            (BottomSpec::Step { height, .. }, "height") => height,
            (BottomSpec::Step { x_jump, .. }, "x_jump") => x_jump,
            (BottomSpec::Step { ramp, .. }, "ramp") => ramp,
            (BottomSpec::Plateau { height, .. }, "height") => height,
            (BottomSpec::Plateau { x_left, .. }, "x_left") => x_left,
            (BottomSpec::Plateau { x_right, .. }, "x_right") => x_right,
            (BottomSpec::Plateau { ramp, .. }, "ramp") => ramp,
            (BottomSpec::Bowl { x0 }, "x0") => x0,
            (BottomSpec::Linear { offset, .. }, "offset") => offset,
            (BottomSpec::Linear { slope, .. }, "slope") => slope,
            _ => return false,
        };
        *slot = v;
        true
    }

    fn default_of_kind(kind: &str) -> Option<BottomSpec> {
        Some(match kind {
            "flat" => BottomSpec::Flat { level: 0.0 },
            "cosine" => BottomSpec::Cosine { amplitude: 0.2, wavenumber: 8.0 },
            "bump" => BottomSpec::Bump { center: 0.5, half_width: 0.1, height: 0.1 },
            "step" => BottomSpec::Step { height: 1.0, x_jump: 0.5, ramp: 0.01 },
            "plateau" => BottomSpec::Plateau { height: 1.0, x_left: 0.4, x_right: 0.6, ramp: 0.01 },
            "bowl" => BottomSpec::Bowl { x0: 1.0 },
            "linear" => BottomSpec::Linear { offset: 0.0, slope: 0.0 },
            _ => return None,
        })
    }
}

/// Analytic initial data. Levels are measured against the projected bottom,
/// so that lakes at rest are represented exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialSpec {
    /// `h + b = level`, `m = 0`.
    LakeAtRest { level: f64 },
    /// `h + b = base + amplitude · exp(-((x - center) / width)²)`, `m = 0`.
    GaussianLevel { base: f64, amplitude: f64, center: f64, width: f64 },
    Uniform { h: f64, m: f64 },
    /// Jump in height and momentum at `x_jump`.
    HeightJump { x_jump: f64, h_left: f64, h_right: f64, m_left: f64, m_right: f64 },
    /// Jump in height and velocity at `x_jump`.
    VelocityJump { x_jump: f64, h_left: f64, h_right: f64, u_left: f64, u_right: f64 },
    /// `h + b = level` with a momentum jump at `x_jump`.
    LevelMomentumJump { level: f64, x_jump: f64, m_left: f64, m_right: f64 },
    /// Oscillating planar lake in a parabolic bowl, evaluated at `t = 0`.
    Thacker { h0: f64, v_max: f64, x0: f64 },
    /// Level and velocity interpolated from the table loaded into the
    /// configuration (`initial.file`).
    Table,
}

impl InitialSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialSpec::LakeAtRest { .. } => "lake",
            InitialSpec::GaussianLevel { .. } => "gaussian",
            InitialSpec::Uniform { .. } => "uniform",
            InitialSpec::HeightJump { .. } => "height-jump",
            InitialSpec::VelocityJump { .. } => "velocity-jump",
            InitialSpec::LevelMomentumJump { .. } => "level-momentum-jump",
            InitialSpec::Thacker { .. } => "thacker",
            InitialSpec::Table => "table",
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            InitialSpec::LakeAtRest { level } => vec![("level", level)],
            InitialSpec::GaussianLevel { base, amplitude, center, width } => {
                vec![("base", base), ("amplitude", amplitude), ("center", center), ("width", width)]
            }
            InitialSpec::Uniform { h, m } => vec![("h", h), ("m", m)],
            InitialSpec::HeightJump { x_jump, h_left, h_right, m_left, m_right } => vec![
                ("x_jump", x_jump),
                ("h_left", h_left),
                ("h_right", h_right),
                ("m_left", m_left),
                ("m_right", m_right),
            ],
            InitialSpec::VelocityJump { x_jump, h_left, h_right, u_left, u_right } => vec![
                ("x_jump", x_jump),
                ("h_left", h_left),
                ("h_right", h_right),
                ("u_left", u_left),
                ("u_right", u_right),
            ],
            InitialSpec::LevelMomentumJump { level, x_jump, m_left, m_right } => {
                vec![("level", level), ("x_jump", x_jump), ("m_left", m_left), ("m_right", m_right)]
            }
            InitialSpec::Thacker { h0, v_max, x0 } => vec![("h0", h0), ("v_max", v_max), ("x0", x0)],
            InitialSpec::Table => Vec::new(),
        }
    }

    fn set_param(&mut self, key: &str, v: f64) -> bool {
        use InitialSpec::*;
        let slot = match (self, key) {
            (LakeAtRest { level }, "level") => level,
            (GaussianLevel { base, .. }, "base") => base,
            (GaussianLevel { amplitude, .. }, "amplitude") => amplitude,
            (GaussianLevel { center, .. }, "center") => center,
            (GaussianLevel { width, .. }, "width") => width,
            (Uniform { h, .. }, "h") => h,
            (Uniform { m, .. }, "m") => m,
            (HeightJump { x_jump, .. }, "x_jump") => x_jump,
            (HeightJump { h_left, .. }, "h_left") => h_left,
            (HeightJump { h_right, .. }, "h_right") => h_right,
            (HeightJump { m_left, .. }, "m_left") => m_left,
            (HeightJump { m_right, .. }, "m_right") => m_right,
            (VelocityJump { x_jump, .. }, "x_jump") => x_jump,
            (VelocityJump { h_left, .. }, "h_left") => h_left,
            (VelocityJump { h_right, .. }, "h_right") => h_right,
            (VelocityJump { u_left, .. }, "u_left") => u_left,
            (VelocityJump { u_right, .. }, "u_right") => u_right,
            (LevelMomentumJump { level, .. }, "level") => level,
            (LevelMomentumJump { x_jump, .. }, "x_jump") => x_jump,
            (LevelMomentumJump { m_left, .. }, "m_left") => m_left,
            (LevelMomentumJump { m_right, .. }, "m_right") => m_right,
            (Thacker { h0, .. }, "h0") => h0,
            (Thacker { v_max, .. }, "v_max") => v_max,
            (Thacker { x0, .. }, "x0") => x0,
            _ => return false,
        };
        *slot = v;
        true
    }

    fn default_of_kind(kind: &str) -> Option<InitialSpec> {
        use InitialSpec::*;
        Some(match kind {
            "lake" => LakeAtRest { level: 1.0 },
            "gaussian" => GaussianLevel { base: 1.0, amplitude: 0.1, center: 0.5, width: 0.05 },
            "uniform" => Uniform { h: 1.0, m: 0.0 },
            "height-jump" => HeightJump { x_jump: 0.5, h_left: 1.0, h_right: 0.5, m_left: 0.0, m_right: 0.0 },
            "velocity-jump" => VelocityJump { x_jump: 0.5, h_left: 1.0, h_right: 1.0, u_left: -1.0, u_right: 1.0 },
            "level-momentum-jump" => LevelMomentumJump { level: 1.0, x_jump: 0.5, m_left: -1.0, m_right: 1.0 },
            "thacker" => Thacker { h0: 10.0, v_max: 5.0, x0: 300.0 * 10f64.sqrt() },
            "table" => Table,
            _ => return None,
        })
    }

    /// Water height and momentum at `x`, given the projected bottom `b`.
    /// Tabulated data evaluate to a dry state here; see
    /// [`InitialTable::eval`].
    pub fn eval(&self, x: f64, b: f64, g: f64) -> (f64, f64) {
        match *self {
            InitialSpec::LakeAtRest { level } => ((level - b).max(0.0), 0.0),
            InitialSpec::GaussianLevel { base, amplitude, center, width } => {
                let s = (x - center) / width;
                ((base + amplitude * (-s * s).exp() - b).max(0.0), 0.0)
            }
            InitialSpec::Uniform { h, m } => (h, m),
            InitialSpec::HeightJump { x_jump, h_left, h_right, m_left, m_right } => {
                if x < x_jump {
                    (h_left, m_left)
                } else {
                    (h_right, m_right)
                }
            }
            InitialSpec::VelocityJump { x_jump, h_left, h_right, u_left, u_right } => {
                if x < x_jump {
                    (h_left, h_left * u_left)
                } else {
                    (h_right, h_right * u_right)
                }
            }
            InitialSpec::LevelMomentumJump { level, x_jump, m_left, m_right } => {
                let h = (level - b).max(0.0);
                let m = if x < x_jump { m_left } else { m_right };
                (h, if h > 0.0 { m } else { 0.0 })
            }
            InitialSpec::Thacker { h0, v_max, x0 } => {
                let sol = ThackerSolution { h0, v_max, x0, g };
                let h = (sol.level(0.0, x) - b).max(0.0);
                (h, h * sol.velocity(0.0))
            }
            InitialSpec::Table => (0.0, 0.0),
        }
    }
}

/// Initial water level and velocity sampled at increasing positions.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialTable {
    /// Where the table was read from, kept for [`ScenarioConfig::to_pairs`].
    pub source: String,
    pub x: Vec<f64>,
    pub level: Vec<f64>,
    pub velocity: Vec<f64>,
}

impl InitialTable {
    pub fn new(source: String, x: Vec<f64>, level: Vec<f64>, velocity: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || level.len() != n || velocity.len() != n {
            return Err(SweError::InvalidInput(format!("{source}: need at least two complete rows")));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SweError::InvalidInput(format!("{source}: x must be strictly increasing")));
        }
        if x.iter().chain(&level).chain(&velocity).any(|v| !v.is_finite()) {
            return Err(SweError::InvalidInput(format!("{source}: non-finite entry")));
        }
        Ok(InitialTable { source, x, level, velocity })
    }

    /// Reads a CSV file with the header `x,level,velocity`.
    pub fn read(path: &Path) -> Result<Self> {
        let source = path.display().to_string();
        let mut reader = csv::Reader::from_path(path).map_err(|e| SweError::csv(path, e))?;
        let headers = reader.headers().map_err(|e| SweError::csv(path, e))?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| SweError::InvalidInput(format!("{source}: missing column {name}")))
        };
        let (ix, il, iv) = (col("x")?, col("level")?, col("velocity")?);
        let (mut x, mut level, mut velocity) = (Vec::new(), Vec::new(), Vec::new());
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| SweError::csv(path, e))?;
            let get = |i: usize| -> Result<f64> {
                rec.get(i).and_then(|v| v.trim().parse().ok()).ok_or_else(|| {
                    SweError::InvalidInput(format!("{source}: row {} has a malformed number", row + 2))
                })
            };
            x.push(get(ix)?);
            level.push(get(il)?);
            velocity.push(get(iv)?);
        }
        InitialTable::new(source, x, level, velocity)
    }

    /// Linear interpolation, constant beyond the ends.
    fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let k = self.x.partition_point(|&xi| xi <= x);
        if k == 0 {
            values[0]
        } else if k == self.x.len() {
            values[k - 1]
        } else {
            let s = (x - self.x[k - 1]) / (self.x[k] - self.x[k - 1]);
            values[k - 1] + s * (values[k] - values[k - 1])
        }
    }

    /// Height and momentum at `x` above the bottom value `b`.
    pub fn eval(&self, x: f64, b: f64) -> (f64, f64) {
        let h = (self.interpolate(&self.level, x) - b).max(0.0);
        (h, h * self.interpolate(&self.velocity, x))
    }
}

/// Planar oscillation in a parabolic bowl `b = (x / x0)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThackerSolution {
    pub h0: f64,
    pub v_max: f64,
    pub x0: f64,
    pub g: f64,
}

impl ThackerSolution {
    pub fn omega(&self) -> f64 {
        (2.0 * self.g).sqrt() / self.x0
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    pub fn level(&self, t: f64, x: f64) -> f64 {
        let (g, v, w) = (self.g, self.v_max, self.omega());
        let a = v * v / (4.0 * g);
        self.h0 - a - a * (2.0 * w * t).cos() - (2.0 / g).sqrt() * v / self.x0 * (w * t).cos() * x
    }

    pub fn velocity(&self, t: f64) -> f64 {
        self.v_max * (self.omega() * t).sin()
    }

    pub fn bottom(&self, x: f64) -> f64 {
        (x / self.x0) * (x / self.x0)
    }

    pub fn height(&self, t: f64, x: f64) -> f64 {
        (self.level(t, x) - self.bottom(x)).max(0.0)
    }

    pub fn momentum(&self, t: f64, x: f64) -> f64 {
        self.height(t, x) * self.velocity(t)
    }

    /// Left and right shore positions.
    pub fn shores(&self, t: f64) -> (f64, f64) {
        let shift = (2.0 / self.g).sqrt() * self.v_max * (self.omega() * t).cos();
        let r = 2.0 * self.h0.sqrt();
        (0.5 * self.x0 * (-r - shift), 0.5 * self.x0 * (r - shift))
    }

    /// Highest bottom elevation reached by the shore.
    pub fn max_shore_height(&self) -> f64 {
        let s = 2f64.sqrt() * self.v_max + 2.0 * (self.g * self.h0).sqrt();
        s * s / (4.0 * self.g)
    }
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub g: f64,
    pub boundary: BoundaryKind,
    pub bottom: BottomSpec,
    pub initial: InitialSpec,
    pub scheme: SchemeOptions,
    /// Times at which snapshots are written, in addition to `t_end`.
    pub snapshot_times: Vec<f64>,
    /// Cell count of the self-convergence reference, if the setup is used
    /// for convergence studies.
    pub reference_cells: Option<usize>,
    /// Data for [`InitialSpec::Table`].
    pub initial_table: Option<InitialTable>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > self.x_min) {
            return Err(SweError::InvalidInput(format!("empty domain [{}, {}]", self.x_min, self.x_max)));
        }
        if self.n_cells < 4 {
            return Err(SweError::InvalidInput(format!("need at least 4 cells, got {}", self.n_cells)));
        }
        if !(self.t_end >= 0.0) {
            return Err(SweError::InvalidInput(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        let ramp = match self.bottom {
            BottomSpec::Step { ramp, .. } | BottomSpec::Plateau { ramp, .. } => Some(ramp),
            _ => None,
        };
        if let Some(r) = ramp {
            if !(r > 0.0) {
                return Err(SweError::InvalidInput(format!("ramp width must be positive, got {r}")));
            }
        }
        if self.initial == InitialSpec::Table && self.initial_table.is_none() {
            return Err(SweError::InvalidInput("initial.kind = table needs initial.file".into()));
        }
        self.constants().validate()
    }

    pub fn with_cells(mut self, n: usize) -> Self {
        self.n_cells = n;
        self
    }

    pub fn constants(&self) -> Constants {
        Constants::default().with_g(self.g).with_cfl(self.cfl)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.x_min, self.x_max, self.n_cells, self.boundary)
    }

    pub fn project(&self) -> Result<BottomTopography> {
        let spec = self.bottom;
        project_bottom(move |x| spec.eval(x), &self.grid()?)
    }

    /// Ready-to-run simulation at `t = 0`.
    pub fn build(&self) -> Result<Simulation> {
        self.validate()?;
        let bottom = self.project()?;
        let eval = |x: f64| match (&self.initial, &self.initial_table) {
            (InitialSpec::Table, Some(table)) => table.eval(x, bottom.eval_global(x)),
            (init, _) => init.eval(x, bottom.eval_global(x), self.g),
        };
        let h0 = |x: f64| eval(x).0;
        let m0 = |x: f64| eval(x).1;
        Simulation::new(bottom.clone(), &h0, &m0, self.constants(), self.scheme)
    }

    /// Exact solution, for setups that have one.
    pub fn exact(&self) -> Option<ThackerSolution> {
        match self.initial {
            InitialSpec::Thacker { h0, v_max, x0 } => Some(ThackerSolution { h0, v_max, x0, g: self.g }),
            _ => None,
        }
    }

    /// Flat `key = value` view of the configuration, the inverse of
    /// [`ScenarioConfig::set`].
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("name".to_string(), self.name.clone()),
            ("description".into(), self.description.clone()),
            ("domain.x_min".into(), self.x_min.to_string()),
            ("domain.x_max".into(), self.x_max.to_string()),
            ("grid.cells".into(), self.n_cells.to_string()),
            ("grid.boundary".into(), self.boundary.name().into()),
            ("run.cfl".into(), self.cfl.to_string()),
            ("run.t_end".into(), self.t_end.to_string()),
            ("physics.g".into(), self.g.to_string()),
            ("bottom.kind".into(), self.bottom.kind().into()),
        ];
        for (k, v) in self.bottom.params() {
            out.push((format!("bottom.{k}"), v.to_string()));
        }
        out.push(("initial.kind".into(), self.initial.kind().into()));
        for (k, v) in self.initial.params() {
            out.push((format!("initial.{k}"), v.to_string()));
        }
        if let Some(table) = &self.initial_table {
            out.push(("initial.file".into(), table.source.clone()));
        }
        let s = &self.scheme;
        for (k, v) in [
            ("limiting", s.limiting),
            ("positivity", s.positivity),
            ("entropy_fix", s.entropy_fix),
            ("well_balance", s.well_balance),
        ] {
            out.push((format!("scheme.{k}"), v.to_string()));
        }
        let times: Vec<String> = self.snapshot_times.iter().map(|t| t.to_string()).collect();
        out.push(("output.times".into(), times.join(",")));
        if let Some(r) = self.reference_cells {
            out.push(("convergence.reference_cells".into(), r.to_string()));
        }
        out
    }

    /// Sets one dotted key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| SweError::InvalidInput(format!("invalid value {value:?} for {key}: {what}"));
        let num = || value.trim().parse::<f64>().map_err(|_| bad("expected a number"));
        let int = || value.trim().parse::<usize>().map_err(|_| bad("expected a non-negative integer"));
        let flag = || value.trim().parse::<bool>().map_err(|_| bad("expected true or false"));
        match key {
            "name" => self.name = value.trim().to_string(),
            "description" => self.description = value.trim().to_string(),
            "initial.file" => self.initial_table = Some(InitialTable::read(Path::new(value.trim()))?),
            "domain.x_min" => self.x_min = num()?,
            "domain.x_max" => self.x_max = num()?,
            "grid.cells" => self.n_cells = int()?,
            "grid.boundary" => self.boundary = BoundaryKind::parse(value.trim())?,
            "run.cfl" => self.cfl = num()?,
            "run.t_end" => self.t_end = num()?,
            "physics.g" => self.g = num()?,
            "bottom.kind" => {
                let kind = value.trim();
                if kind != self.bottom.kind() {
                    self.bottom = BottomSpec::default_of_kind(kind).ok_or_else(|| bad("unknown bottom kind"))?;
                }
            }
            "initial.kind" => {
                let kind = value.trim();
                if kind != self.initial.kind() {
                    self.initial = InitialSpec::default_of_kind(kind).ok_or_else(|| bad("unknown initial kind"))?;
                }
            }
            "scheme.limiting" => self.scheme.limiting = flag()?,
            "scheme.positivity" => self.scheme.positivity = flag()?,
            "scheme.entropy_fix" => self.scheme.entropy_fix = flag()?,
            "scheme.well_balance" => self.scheme.well_balance = flag()?,
            "output.times" => {
                self.snapshot_times = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| bad("expected comma-separated numbers")))
                    .collect::<Result<_>>()?;
            }
            "convergence.reference_cells" => self.reference_cells = Some(int()?),
            _ => {
                if let Some(p) = key.strip_prefix("bottom.") {
                    if !self.bottom.set_param(p, num()?) {
                        return Err(bad(&format!("bottom kind {} has no parameter {p}", self.bottom.kind())));
                    }
                } else if let Some(p) = key.strip_prefix("initial.") {
                    if !self.initial.set_param(p, num()?) {
                        return Err(bad(&format!("initial kind {} has no parameter {p}", self.initial.kind())));
                    }
                } else {
                    return Err(SweError::InvalidInput(format!("unknown configuration key {key:?}")));
                }
            }
        }
        Ok(())
    }
}

fn base(name: &str, description: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        description: description.into(),
        x_min: 0.0,
        x_max: 1.0,
        n_cells: 100,
        cfl: 0.7,
        t_end: 1.0,
        g: 9.812,
        boundary: BoundaryKind::Periodic,
        bottom: BottomSpec::Flat { level: 0.0 },
        initial: InitialSpec::Uniform { h: 1.0, m: 0.0 },
        scheme: SchemeOptions::default(),
        snapshot_times: Vec::new(),
        reference_cells: None,
        initial_table: None,
    }
}

impl Default for ScenarioConfig {
    /// Still water of unit depth over a flat bottom on a periodic unit
    /// interval.
    fn default() -> Self {
        base("custom", "user-defined setup")
    }
}

/// Parabolic bowl constants.
pub const BOWL_X0: f64 = 948.683_298_050_513_8; // 300·sqrt(10)

/// All built-in scenarios.
#[allow(clippy::vec_init_then_push)]
pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    let mut v = Vec::new();

    v.push(ScenarioConfig {
        t_end: 10.0,
        bottom: BottomSpec::Cosine { amplitude: 0.2, wavenumber: 8.0 },
        initial: InitialSpec::LakeAtRest { level: 0.33 },
        ..base("four-lakes", "four lakes at rest separated by dry humps")
    });

    v.push(ScenarioConfig {
        t_end: 0.2,
        n_cells: 1000,
        bottom: BottomSpec::Cosine { amplitude: 0.2, wavenumber: 8.0 },
        initial: InitialSpec::GaussianLevel { base: 0.33, amplitude: 0.01, center: 0.5, width: 0.02 },
        snapshot_times: vec![0.05, 0.1, 0.15],
        ..base("four-lakes-perturbed", "Gaussian level perturbation in one of four lakes")
    });

    v.push(ScenarioConfig {
        t_end: 0.03,
        n_cells: 200,
        bottom: BottomSpec::Cosine { amplitude: 0.2, wavenumber: 6.0 },
        initial: InitialSpec::GaussianLevel { base: 0.5, amplitude: 0.3, center: 0.5, width: 0.05 },
        scheme: SchemeOptions { limiting: false, positivity: false, ..SchemeOptions::default() },
        reference_cells: Some(16384),
        ..base("convergence", "smooth Gaussian wave over a cosine bottom")
    });

    v.push(ScenarioConfig {
        x_max: 40.0,
        n_cells: 50,
        bottom: BottomSpec::Bump { center: 20.0, half_width: 4.0, height: 0.48 },
        initial: InitialSpec::Uniform { h: 4.0, m: 10.0 },
        reference_cells: Some(2048),
        ..base("bouchut-accuracy", "flow over a bump with a derivative kink")
    });

    for (suffix, height, dx) in [("b2", 2.0, 1e-3), ("b4", 4.0, 1e-3), ("b50", 50.0, 0.8e-3)] {
        v.push(ScenarioConfig {
            n_cells: (1.0_f64 / dx).round() as usize,
            t_end: 0.048,
            boundary: BoundaryKind::OutflowExtrapolate,
            bottom: BottomSpec::Step { height, x_jump: 0.5, ramp: 0.01 },
            initial: InitialSpec::HeightJump { x_jump: 0.5, h_left: 3.0, h_right: 4.0, m_left: 0.0, m_right: 0.0 },
            ..base(&format!("cls04-step-{suffix}"), "Riemann problem over a steep regularized step")
        });
    }

    v.push(ScenarioConfig {
        x_max: 600.0,
        n_cells: 250,
        t_end: 4.0,
        boundary: BoundaryKind::OutflowExtrapolate,
        initial: InitialSpec::VelocityJump { x_jump: 300.0, h_left: 10.0, h_right: 10.0, u_left: -40.0, u_right: 40.0 },
        snapshot_times: vec![1.0, 2.0, 3.0],
        ..base("xs11-rarefaction", "double rarefaction producing vacuum over a flat bottom")
    });

    v.push(ScenarioConfig {
        x_min: -5000.0,
        x_max: 5000.0,
        n_cells: 200,
        t_end: 5000.0,
        boundary: BoundaryKind::OutflowExtrapolate,
        bottom: BottomSpec::Bowl { x0: BOWL_X0 },
        initial: InitialSpec::Thacker { h0: 10.0, v_max: 5.0, x0: BOWL_X0 },
        snapshot_times: vec![1000.0, 2000.0, 3000.0, 4000.0],
        reference_cells: Some(1600),
        ..base("parabolic-bowl", "planar water surface oscillating in a parabolic bowl")
    });

    v.push(ScenarioConfig {
        x_min: -25.0,
        x_max: 50.0,
        n_cells: 600,
        t_end: 0.25,
        boundary: BoundaryKind::OutflowExtrapolate,
        bottom: BottomSpec::Plateau { height: 1.0, x_left: 25.0 / 3.0, x_right: 12.5, ramp: 0.01 },
        initial: InitialSpec::LevelMomentumJump { level: 10.0, x_jump: 50.0 / 3.0, m_left: -350.0, m_right: 350.0 },
        ..base("double-rarefaction", "double rarefaction over a plateau, run on an enlarged domain")
    });

    v.push(ScenarioConfig {
        x_max: 25.0,
        n_cells: 200,
        t_end: 50.0,
        boundary: BoundaryKind::DirichletFrozen,
        bottom: BottomSpec::Bump { center: 10.0, half_width: 2.0, height: 0.2 },
        initial: InitialSpec::Uniform { h: 0.33, m: 0.18 },
        snapshot_times: vec![10.0, 20.0, 30.0, 40.0],
        ..base("transcritical", "transcritical flow over a bump settling on a stationary shock")
    });

    v
}

pub fn scenario_names() -> Vec<String> {
    builtin_scenarios().into_iter().map(|s| s.name).collect()
}

/// Looks up a built-in scenario by name.
pub fn scenario(name: &str) -> Result<ScenarioConfig> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| SweError::UnknownScenario { name: name.into(), available: scenario_names().join(", ") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_the_benchmarks() {
        let names = scenario_names();
        assert!(names.len() >= 7);
        let four = scenario("four-lakes").unwrap();
        assert_eq!((four.n_cells, four.t_end), (100, 10.0));
        assert!(matches!(scenario("nope"), Err(SweError::UnknownScenario { .. })));
        for s in builtin_scenarios() {
            s.validate().unwrap();
        }
    }

    #[test]
    fn bowl_constants() {
        let s = scenario("parabolic-bowl").unwrap();
        let exact = s.exact().unwrap();
        assert!((exact.period() - 1345.57).abs() < 0.01);
        assert!((exact.max_shore_height() - 18.41).abs() < 0.005);
        assert!((BOWL_X0 - 300.0 * 10f64.sqrt()).abs() < 1e-10);
        for t in [0.0, 100.0, 700.0, 1234.5] {
            let (l, r) = exact.shores(t);
            for x in [l, r] {
                assert!((exact.level(t, x) - exact.bottom(x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bottoms_are_continuous_where_required() {
        let step = BottomSpec::Step { height: 2.0, x_jump: 0.5, ramp: 0.01 };
        assert_eq!(step.eval(0.4), 2.0);
        assert!((step.eval(0.5025) - 1.0).abs() < 1e-12);
        assert_eq!(step.eval(0.6), 0.0);
        let plateau = BottomSpec::Plateau { height: 1.0, x_left: 1.0, x_right: 2.0, ramp: 0.2 };
        assert!((plateau.eval(0.95) - 0.5).abs() < 1e-12);
        assert!((plateau.eval(2.05) - 0.5).abs() < 1e-12);
        let hump = BottomSpec::Bump { center: 10.0, half_width: 2.0, height: 0.2 };
        for x in [8.5f64, 10.0, 11.3] {
            let expect = (0.2 - 0.05 * (x - 10.0) * (x - 10.0)).max(0.0);
            assert!((hump.eval(x) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn keys_round_trip() {
        for s in builtin_scenarios() {
            let mut copy = base("x", "");
            for (k, v) in s.to_pairs() {
                copy.set(&k, &v).unwrap();
            }
            assert_eq!(copy, s);
        }
    }

    #[test]
    fn bad_keys_are_rejected() {
        let mut s = scenario("four-lakes").unwrap();
        assert!(s.set("grid.cells", "many").is_err());
        assert!(s.set("bottom.x0", "1").is_err());
        assert!(s.set("what", "1").is_err());
    }
}
