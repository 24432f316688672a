//! Resolution of flags and figure presets into a validated run configuration.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;
use sgad_core::{BathSpec, GridSpec, Picture};

use crate::args::{Args, CommandKind, Format, PictureArg};
use crate::CliError;

const GAMMA0: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub label: String,
    pub bath: BathSpec,
}

impl Curve {
    fn new(temperature: f64, squeezing: f64) -> Self {
        Self {
            label: format!("T={temperature} r={squeezing}"),
            bath: BathSpec::new(temperature, squeezing, 0.0, GAMMA0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let last = self.n_points - 1;
        let span = self.t_end - self.t_start;
        (0..self.n_points)
            .map(
                |i| {
                    if i == last {
                        self.t_end
                    } else {
                        self.t_start + span * i as f64 / last as f64
                    }
                },
            )
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub figure: Option<u8>,
    pub curves: Vec<Curve>,
    pub time_grid: TimeGrid,
    /// Single evaluation time (channel; capacity surface mode).
    pub t: Option<f64>,
    pub theta0: f64,
    pub phi0: f64,
    pub picture: Picture,
    pub f: f64,
    pub f_sweep: Option<usize>,
    pub grid: GridSpec,
    pub oracle: bool,
    pub format: Format,
}

struct Preset {
    curves: Vec<Curve>,
    grid: TimeGrid,
    t: Option<f64>,
}

fn preset(command: CommandKind, figure: u8) -> Result<Preset, CliError> {
    let window = |t_end: f64, n_points: usize| TimeGrid { t_start: 0.0, t_end, n_points };
    let curves = |list: &[(f64, f64)]| list.iter().map(|&(t, r)| Curve::new(t, r)).collect();
    let p = match (command, figure) {
        (CommandKind::Params | CommandKind::Evolve, 1) => Preset {
            curves: curves(&[(1.0, 0.0), (1.0, 1.0), (3.0, 1.0)]),
            grid: window(100.0, 101),
            t: None,
        },
        (CommandKind::Params | CommandKind::Evolve, 2) => Preset {
            curves: curves(&[(0.0, 0.0), (0.0, 1.0), (5.0, 0.0), (5.0, 1.0)]),
            grid: window(100.0, 101),
            t: None,
        },
        (CommandKind::Params | CommandKind::Evolve, 3) => Preset {
            curves: curves(&[(20.0, 1.0), (5.0, 1.0), (1.0, 1.0)]),
            grid: window(100.0, 101),
            t: None,
        },
        (CommandKind::Params | CommandKind::Evolve, 4) => Preset {
            curves: curves(&[(0.0, 0.05), (2.0, 0.1), (2.0, 0.5)]),
            grid: window(100.0, 101),
            t: None,
        },
        (CommandKind::Capacity, 5) => {
            Preset { curves: curves(&[(5.0, 1.0)]), grid: window(5.0, 2), t: Some(5.0) }
        }
        (CommandKind::Capacity, 6) => Preset {
            curves: curves(&[(0.0, 0.0), (5.0, 0.0), (5.0, 2.0)]),
            grid: window(10.0, 11),
            t: None,
        },
        _ => {
            return Err(CliError::Config(format!(
                "figure {figure} is not available for this command \
                 (params/evolve: 1-4, capacity: 5-6)"
            )))
        }
    };
    Ok(p)
}

pub fn resolve(args: &Args) -> Result<RunConfig, CliError> {
    let o = &args.opts;
    let command = args.command;
    let mut p = match o.figure {
        Some(fig) => preset(command, fig)?,
        None => Preset {
            curves: vec![Curve::new(1.0, 0.0)],
            grid: TimeGrid { t_start: 0.0, t_end: 100.0, n_points: 101 },
            t: None,
        },
    };
    for c in &mut p.curves {
        let b = &mut c.bath;
        b.temperature = o.temperature.unwrap_or(b.temperature);
        b.squeezing = o.squeezing.unwrap_or(b.squeezing);
        b.phase = o.phase.unwrap_or(b.phase);
        b.gamma0 = o.gamma0.unwrap_or(b.gamma0);
        b.omega = o.omega.unwrap_or(b.omega);
        c.label = format!("T={} r={}", b.temperature, b.squeezing);
        b.validate().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let time_grid = TimeGrid {
        t_start: o.t0.unwrap_or(p.grid.t_start),
        t_end: o.t1.unwrap_or(p.grid.t_end),
        n_points: o.n.unwrap_or(p.grid.n_points),
    };
    // Channel output is JSON regardless; only an explicit CSV request is refused.
    if command == CommandKind::Channel && o.format == Some(Format::Csv) {
        return Err(CliError::Config("channel output is JSON only".into()));
    }
    let capacity = command == CommandKind::Capacity;
    let cfg = RunConfig {
        command,
        figure: o.figure,
        curves: p.curves,
        time_grid,
        t: o.t.or(p.t),
        theta0: o.theta0.unwrap_or(if capacity { FRAC_PI_2 } else { 0.0 }),
        phi0: o.phi0.unwrap_or(0.0),
        picture: match o.picture.unwrap_or_default() {
            PictureArg::Interaction => Picture::Interaction,
            PictureArg::Schroedinger => Picture::Schroedinger,
        },
        f: o.f.unwrap_or(0.5),
        f_sweep: o.f_sweep,
        grid: GridSpec {
            n_theta: o.n_theta.unwrap_or(GridSpec::default().n_theta),
            n_phi: o.n_phi.unwrap_or(GridSpec::default().n_phi),
        },
        oracle: o.oracle,
        format: if command == CommandKind::Channel {
            Format::Json
        } else {
            o.format.unwrap_or_default()
        },
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let bad = |msg: String| Err(CliError::Config(msg));
    let g = &cfg.time_grid;
    if !(g.t_start >= 0.0 && g.t_start.is_finite()) {
        return bad(format!("t0 must be finite and >= 0, got {}", g.t_start));
    }
    if !(g.t_end > g.t_start && g.t_end.is_finite()) {
        return bad(format!("t1 must exceed t0, got t0={} t1={}", g.t_start, g.t_end));
    }
    if g.n_points < 2 {
        return bad(format!("n must be at least 2, got {}", g.n_points));
    }
    if let Some(t) = cfg.t {
        if !(t >= 0.0 && t.is_finite()) {
            return bad(format!("t must be finite and >= 0, got {t}"));
        }
    }
    if !(0.0..=1.0).contains(&cfg.f) {
        return bad(format!("f must lie in [0, 1], got {}", cfg.f));
    }
    if matches!(cfg.f_sweep, Some(n) if n < 2) {
        return bad("f-sweep needs at least 2 values".into());
    }
    if cfg.grid.n_theta < 2 || cfg.grid.n_phi < 2 {
        return bad("capacity grid needs at least 2x2 nodes".into());
    }
    if !cfg.theta0.is_finite() || !cfg.phi0.is_finite() {
        return bad("input angles must be finite".into());
    }
    if cfg.command == CommandKind::Channel && cfg.figure.is_some() {
        return bad("channel takes no figure preset".into());
    }
    Ok(())
}
