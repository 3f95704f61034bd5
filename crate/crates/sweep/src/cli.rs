//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use diamond_core::measures::threshold_temperatures;
use diamond_core::teleport::CLASSICAL_FIDELITY;

use crate::config::ConfigFile;
use crate::contour::{contour, ContourSpec};
use crate::csv::{emit_csv, format_sig};
use crate::error::{config, Result};
use crate::presets::preset;
use crate::run::{run_sweep_with, Execution, Model};
use crate::spec::{parse_list, parse_observables, Axis, Observable, Param, Params, SweepSpec};

/// Keys accepted in `--config` files; each mirrors the flag of the same name.
pub const CONFIG_KEYS: &[&str] = &[
    "J1",
    "delta",
    "h",
    "alpha",
    "gamma",
    "eta",
    "t-min",
    "t-max",
    "t-steps",
    "temperature",
    "preset",
    "fields",
    "axis",
    "observables",
    "observable",
    "level",
    "model",
    "scan-points",
    "out",
    "serial",
];

const DEFAULT_T_MIN: f64 = 0.01;
const DEFAULT_T_MAX: f64 = 2.0;
const DEFAULT_T_STEPS: usize = 400;

#[derive(Debug, Parser)]
#[command(
    name = "diamond-sweep",
    version,
    about = "Thermal entanglement, coherence and teleportation sweeps for the Ising-XXZ diamond chain with an impurity plaquette"
)]
pub struct Cli {
    /// Flat `key = value` file mirroring the flags; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Nodal-dimer Ising coupling J1/J.
    #[arg(long = "J1", allow_negative_numbers = true)]
    pub j1: Option<f64>,
    /// XXZ anisotropy.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Magnetic field h/J.
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Impurity factor on J.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Impurity factor on the anisotropy.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Impurity factor on J1.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Start from the parameters of a named figure preset.
    #[arg(long)]
    pub preset: Option<String>,
    /// Write CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct TemperatureArgs {
    #[arg(long = "t-min", allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long = "t-steps")]
    pub t_steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate observables over one or two swept axes.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temps: TemperatureArgs,
        /// Comma-separated field values, replacing the preset's field list.
        #[arg(long, allow_hyphen_values = true)]
        fields: Option<String>,
        /// `name:min:max:steps` or `name=v1,v2,...`; repeat for a second axis.
        #[arg(long, allow_hyphen_values = true)]
        axis: Vec<String>,
        /// Comma-separated observable names.
        #[arg(long)]
        observables: Option<String>,
        /// Fixed temperature when T is not swept.
        #[arg(long, allow_negative_numbers = true)]
        temperature: Option<f64>,
        /// Evaluate points on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Temperatures where the concurrence switches on or off.
    Threshold {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temps: TemperatureArgs,
        /// Uniform scan points before bisection.
        #[arg(long = "scan-points")]
        scan_points: Option<usize>,
    },
    /// Level curve of an observable over a (parameter, T) grid.
    Contour {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temps: TemperatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        axis: Vec<String>,
        /// Scalar observable, default fidelity-avg.
        #[arg(long)]
        observable: Option<String>,
        /// Contour level, default 2/3.
        #[arg(long, allow_negative_numbers = true)]
        level: Option<f64>,
        /// impurity, reference or both (default).
        #[arg(long = "model")]
        which: Option<String>,
    },
    /// All observables at one parameter point.
    Point {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        temperature: Option<f64>,
        #[arg(long)]
        observables: Option<String>,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => ConfigFile::parse(&fs::read_to_string(p)?, CONFIG_KEYS),
    }
}

/// Preset (or default) base parameters with per-parameter overrides applied.
fn base_spec(m: &ModelArgs, cfg: &ConfigFile) -> Result<Option<SweepSpec>> {
    match cfg.merge(m.preset.clone(), "preset")? {
        None => Ok(None),
        Some(name) => match preset(&name) {
            Some(s) => Ok(Some(s)),
            None => config(format!(
                "unknown preset `{name}` (expected one of {})",
                crate::presets::PRESET_NAMES.join(", ")
            )),
        },
    }
}

fn apply_overrides(p: &mut Params, m: &ModelArgs, cfg: &ConfigFile) -> Result<()> {
    let fields: [(&mut f64, Option<f64>, &str); 6] = [
        (&mut p.j1, m.j1, "J1"),
        (&mut p.delta, m.delta, "delta"),
        (&mut p.h, m.h, "h"),
        (&mut p.alpha, m.alpha, "alpha"),
        (&mut p.gamma, m.gamma, "gamma"),
        (&mut p.eta, m.eta, "eta"),
    ];
    for (slot, flag, key) in fields {
        if let Some(v) = cfg.merge(flag, key)? {
            *slot = v;
        }
    }
    Ok(())
}

struct Temps {
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
}

impl Temps {
    fn resolve(t: &TemperatureArgs, cfg: &ConfigFile) -> Result<Self> {
        Ok(Self {
            min: cfg.merge(t.t_min, "t-min")?,
            max: cfg.merge(t.t_max, "t-max")?,
            steps: cfg.merge(t.t_steps, "t-steps")?,
        })
    }

    fn any(&self) -> bool {
        self.min.is_some() || self.max.is_some() || self.steps.is_some()
    }

    /// T axis with flag overrides on top of `current` (or the defaults).
    fn axis(&self, current: Option<&Axis>) -> Result<Axis> {
        let (lo, hi, n) = match current {
            Some(a) => (a.values()[0], a.values()[a.len() - 1], a.len()),
            None => (DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_T_STEPS),
        };
        Axis::range(
            Param::T,
            self.min.unwrap_or(lo),
            self.max.unwrap_or(hi),
            self.steps.unwrap_or(n),
        )
    }
}

fn axes_from(cli: &[String], cfg: &ConfigFile) -> Result<Vec<Axis>> {
    if !cli.is_empty() {
        return cli.iter().map(|s| s.parse()).collect();
    }
    match cfg.get("axis") {
        None => Ok(Vec::new()),
        Some(v) => v
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect(),
    }
}

/// Builds the grid for `sweep` and `contour` from preset, flags and file.
fn grid_spec(
    m: &ModelArgs,
    temps: &TemperatureArgs,
    axis: &[String],
    cfg: &ConfigFile,
    default_observables: Vec<Observable>,
) -> Result<SweepSpec> {
    let preset = base_spec(m, cfg)?;
    let had_preset = preset.is_some();
    let mut spec = preset
        .unwrap_or_else(|| SweepSpec::new(Params::default(), Vec::new(), default_observables));
    apply_overrides(&mut spec.base, m, cfg)?;
    let temps = Temps::resolve(temps, cfg)?;

    let explicit = axes_from(axis, cfg)?;
    if had_preset {
        // Explicit axes replace the preset's axis over the same parameter.
        for a in explicit {
            if let Some(slot) = spec.axis_mut(a.param()) {
                *slot = a;
            } else if spec.axes.len() < 2 {
                spec.axes.push(a);
            } else {
                return config(format!(
                    "preset already sweeps two axes, none over {}",
                    a.param()
                ));
            }
        }
    } else if explicit.is_empty() {
        spec.axes = vec![temps.axis(None)?];
    } else {
        spec.axes = explicit;
        if temps.any() && spec.axis(Param::T).is_none() {
            spec.axes.push(temps.axis(None)?);
        }
    }
    if temps.any() {
        let t = temps.axis(spec.axis(Param::T))?;
        match spec.axis_mut(Param::T) {
            Some(slot) => *slot = t,
            None => return config("--t-min/--t-max/--t-steps given but T is not swept"),
        }
    }
    Ok(spec)
}

fn writer(m: &ModelArgs, cfg: &ConfigFile) -> Result<Box<dyn Write>> {
    Ok(match cfg.merge(m.out.clone(), "out")? {
        Some(p) => Box::new(std::io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn parse_model(s: &str) -> Result<Vec<Model>> {
    match s {
        "impurity" => Ok(vec![Model::Impurity]),
        "reference" => Ok(vec![Model::Reference]),
        "both" => Ok(vec![Model::Impurity, Model::Reference]),
        other => config(format!(
            "unknown model `{other}` (expected impurity, reference or both)"
        )),
    }
}

/// Observables reported by `point` when none are requested.
const POINT_OBSERVABLES: [Observable; 7] = [
    Observable::Concurrence,
    Observable::Coherence,
    Observable::FidelityAvg,
    Observable::FidelityPopulation,
    Observable::FidelityCoherence,
    Observable::RdmElements,
    Observable::Witness,
];

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_ref())?;
    match cli.command {
        Command::Sweep {
            model,
            temps,
            fields,
            axis,
            observables,
            temperature,
            serial,
        } => {
            let mut spec = grid_spec(
                &model,
                &temps,
                &axis,
                &cfg,
                vec![
                    Observable::Concurrence,
                    Observable::Coherence,
                    Observable::FidelityAvg,
                ],
            )?;
            if let Some(list) = cfg.merge(fields, "fields")? {
                let h = Axis::list(Param::H, parse_list(&list)?)?;
                if let Some(slot) = spec.axis_mut(Param::H) {
                    *slot = h;
                } else if spec.axes.len() < 2 {
                    spec.axes.insert(0, h);
                } else {
                    return config("--fields needs a free axis but two are already swept");
                }
            }
            if let Some(t) = cfg.merge(temperature, "temperature")? {
                spec.base.t = t;
            } else if spec.axis(Param::T).is_none() {
                return config("T is not swept: pass --temperature");
            }
            if let Some(list) = cfg.merge(observables, "observables")? {
                spec.observables = parse_observables(&list)?;
            }
            if let Some(n) = cfg.parsed("scan-points")? {
                spec.threshold.scan_points = n;
            }
            let serial = serial || cfg.parsed("serial")?.unwrap_or(false);
            let exec = if serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            let table = run_sweep_with(&spec, exec)?;
            emit_csv(&table, writer(&model, &cfg)?)
        }
        Command::Threshold {
            model,
            temps,
            scan_points,
        } => {
            let mut base = base_spec(&model, &cfg)?.map_or_else(Params::default, |s| s.base);
            apply_overrides(&mut base, &model, &cfg)?;
            let temps = Temps::resolve(&temps, &cfg)?;
            let window = crate::spec::ThresholdWindow::default();
            let range = (
                temps.min.unwrap_or(window.t_min),
                temps.max.unwrap_or(window.t_max),
            );
            let points = cfg
                .merge(scan_points, "scan-points")?
                .or(temps.steps)
                .unwrap_or(window.scan_points);
            let sets = [Model::Impurity, Model::Reference]
                .into_iter()
                .map(|m| Ok((m, threshold_temperatures(&m.chain(&base)?, range, points)?)))
                .collect::<Result<Vec<_>>>()?;
            let mut out = writer(&model, &cfg)?;
            writeln!(out, "model,index,T_th,below,above")?;
            for (m, set) in sets {
                for (i, t) in set.roots.iter().enumerate() {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        m.suffix(),
                        i,
                        format_sig(*t),
                        set.regions[i],
                        set.regions[i + 1]
                    )?;
                }
                eprintln!("{}: {}", m.suffix(), set.pattern());
            }
            out.flush()?;
            Ok(())
        }
        Command::Contour {
            model,
            temps,
            axis,
            observable,
            level,
            which,
        } => {
            let spec = grid_spec(&model, &temps, &axis, &cfg, vec![Observable::FidelityAvg])?;
            let observable = match cfg.merge(observable, "observable")? {
                Some(name) => name.parse()?,
                None => Observable::FidelityAvg,
            };
            let level = cfg.merge(level, "level")?.unwrap_or(CLASSICAL_FIDELITY);
            let models = parse_model(&cfg.merge(which, "model")?.unwrap_or_else(|| "both".into()))?;
            let column = spec
                .axes
                .iter()
                .find(|a| a.param() != Param::T)
                .map_or("x", |a| a.param().name());
            let contours = models
                .into_iter()
                .map(|m| ContourSpec::new(observable, m, level))
                .collect::<Result<Vec<_>>>()?;
            spec.validate()?;
            let mut out = writer(&model, &cfg)?;
            writeln!(out, "model,branch,{column},T")?;
            for c in &contours {
                let m = c.model;
                let (grid, branches) = contour(c, &spec)?;
                for b in &branches {
                    for (x, t) in &b.points {
                        writeln!(
                            out,
                            "{},{},{},{}",
                            m.suffix(),
                            b.index,
                            format_sig(*x),
                            format_sig(*t)
                        )?;
                    }
                }
                eprintln!(
                    "{}: {} grid cells above {}",
                    m.suffix(),
                    grid.count_above(level),
                    format_sig(level)
                );
            }
            out.flush()?;
            Ok(())
        }
        Command::Point {
            model,
            temperature,
            observables,
        } => {
            let mut base = base_spec(&model, &cfg)?.map_or_else(Params::default, |s| s.base);
            apply_overrides(&mut base, &model, &cfg)?;
            let Some(t) = cfg.merge(temperature, "temperature")? else {
                return config("point needs --temperature");
            };
            let observables = match cfg.merge(observables, "observables")? {
                Some(list) => parse_observables(&list)?,
                None => POINT_OBSERVABLES.to_vec(),
            };
            let spec = SweepSpec::new(base, vec![Axis::list(Param::T, vec![t])?], observables);
            let table = run_sweep_with(&spec, Execution::Serial)?;
            emit_csv(&table, writer(&model, &cfg)?)
        }
    }
}
