//! Sweep description: fixed parameters, swept axes and requested observables.

use std::fmt;
use std::str::FromStr;

use diamond_core::measures::DEFAULT_SCAN_POINTS;
use diamond_core::{ChainSpec, CouplingSet, ImpurityFactors};

use crate::error::{config, Result, SweepError};

/// Parameters that may be swept. `J` is fixed at 1 and sets the energy unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    T,
    H,
    Delta,
    Alpha,
    Gamma,
    Eta,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::T,
        Param::H,
        Param::Delta,
        Param::Alpha,
        Param::Gamma,
        Param::Eta,
    ];

    /// Column name in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Param::T => "T",
            Param::H => "h",
            Param::Delta => "Delta",
            Param::Alpha => "alpha",
            Param::Gamma => "gamma",
            Param::Eta => "eta",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Param::T),
            "h" | "H" => Ok(Param::H),
            "Delta" | "delta" => Ok(Param::Delta),
            "alpha" => Ok(Param::Alpha),
            "gamma" => Ok(Param::Gamma),
            "eta" => Ok(Param::Eta),
            other => config(format!(
                "unknown axis `{other}` (expected one of T, h, Delta, alpha, gamma, eta)"
            )),
        }
    }
}

/// One point in parameter space, `J = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub j1: f64,
    pub delta: f64,
    pub h: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub eta: f64,
    pub t: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            j1: 1.0,
            delta: 1.0,
            h: 0.0,
            alpha: 0.0,
            gamma: 0.0,
            eta: 0.0,
            t: 1.0,
        }
    }
}

impl Params {
    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::T => self.t,
            Param::H => self.h,
            Param::Delta => self.delta,
            Param::Alpha => self.alpha,
            Param::Gamma => self.gamma,
            Param::Eta => self.eta,
        }
    }

    pub fn set(&mut self, p: Param, value: f64) {
        match p {
            Param::T => self.t = value,
            Param::H => self.h = value,
            Param::Delta => self.delta = value,
            Param::Alpha => self.alpha = value,
            Param::Gamma => self.gamma = value,
            Param::Eta => self.eta = value,
        }
    }

    pub fn with(mut self, p: Param, value: f64) -> Self {
        self.set(p, value);
        self
    }

    /// Impurity chain at this point.
    pub fn chain(&self) -> Result<ChainSpec> {
        Ok(ChainSpec::new(
            CouplingSet::new(1.0, self.delta, self.j1, self.h)?,
            ImpurityFactors::new(self.alpha, self.gamma, self.eta)?,
        ))
    }
}

/// Swept parameter and its sample values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    param: Param,
    values: Vec<f64>,
}

impl Axis {
    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn range(param: Param, min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return config(format!(
                "axis {param}: need finite min < max, got {min}..{max}"
            ));
        }
        if steps < 2 {
            return config(format!("axis {param}: need at least 2 steps, got {steps}"));
        }
        let span = max - min;
        let last = steps - 1;
        let values = (0..steps)
            .map(|i| {
                if i == last {
                    max
                } else {
                    min + span * i as f64 / last as f64
                }
            })
            .collect();
        Ok(Self { param, values })
    }

    /// Explicit sample values in the given order.
    pub fn list(param: Param, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return config(format!("axis {param}: empty value list"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return config(format!("axis {param}: non-finite value {v}"));
        }
        Ok(Self { param, values })
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromStr for Axis {
    type Err = SweepError;

    /// `name:min:max:steps` or `name=v1,v2,...`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some((name, list)) = s.split_once('=') {
            let values = parse_list(list)?;
            return Axis::list(name.trim().parse()?, values);
        }
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [name, min, max, steps] = parts[..] else {
            return config(format!(
                "axis `{s}`: expected name:min:max:steps or name=v1,v2,..."
            ));
        };
        Axis::range(
            name.parse()?,
            parse_f64(min)?,
            parse_f64(max)?,
            parse_usize(steps)?,
        )
    }
}

pub(crate) fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .or_else(|_| config(format!("`{s}` is not a number")))
}

pub(crate) fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .or_else(|_| config(format!("`{s}` is not a non-negative integer")))
}

pub(crate) fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(parse_f64)
        .collect()
}

/// Quantities a sweep can report per model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Concurrence,
    Coherence,
    FidelityAvg,
    FidelityPopulation,
    FidelityCoherence,
    /// Highest temperature where the concurrence vanishes, within the
    /// sweep's threshold window.
    Threshold,
    RdmElements,
    /// `|ρ23| - sqrt(ρ11 ρ44)`, positive exactly where `C > 0`.
    Witness,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::Concurrence,
        Observable::Coherence,
        Observable::FidelityAvg,
        Observable::FidelityPopulation,
        Observable::FidelityCoherence,
        Observable::Threshold,
        Observable::RdmElements,
        Observable::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Concurrence => "concurrence",
            Observable::Coherence => "coherence",
            Observable::FidelityAvg => "fidelity-avg",
            Observable::FidelityPopulation => "f_p",
            Observable::FidelityCoherence => "f_c",
            Observable::Threshold => "threshold",
            Observable::RdmElements => "rdm-elements",
            Observable::Witness => "witness",
        }
    }

    /// CSV column stems, before the model suffix.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Observable::Concurrence => &["C"],
            Observable::Coherence => &["Cl1"],
            Observable::FidelityAvg => &["F_A"],
            Observable::FidelityPopulation => &["f_p"],
            Observable::FidelityCoherence => &["f_c"],
            Observable::Threshold => &["T_th"],
            Observable::RdmElements => &["rho11", "rho22", "rho23", "rho44"],
            Observable::Witness => &["g"],
        }
    }

    /// Closed range of a scalar observable, `None` for multi-column or
    /// temperature-valued ones.
    pub fn range(self) -> Option<(f64, f64)> {
        match self {
            Observable::Concurrence | Observable::Coherence => Some((0.0, 1.0)),
            Observable::FidelityAvg | Observable::FidelityPopulation => Some((0.0, 1.0)),
            Observable::FidelityCoherence => Some((0.0, 1.0 / 3.0)),
            Observable::Witness => Some((-0.5, 0.5)),
            Observable::Threshold | Observable::RdmElements => None,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .map_or_else(
                || {
                    let names: Vec<_> = Observable::ALL.iter().map(|o| o.name()).collect();
                    config(format!(
                        "unknown observable `{s}` (expected one of {})",
                        names.join(", ")
                    ))
                },
                Ok,
            )
    }
}

pub(crate) fn parse_observables(s: &str) -> Result<Vec<Observable>> {
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Temperature window and resolution for the `threshold` observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub scan_points: usize,
}

impl Default for ThresholdWindow {
    fn default() -> Self {
        Self {
            t_min: 0.01,
            t_max: 3.0,
            scan_points: DEFAULT_SCAN_POINTS,
        }
    }
}

/// Fixed parameters, one or two swept axes and the observables to report.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Values of every parameter that is not swept.
    pub base: Params,
    pub axes: Vec<Axis>,
    pub observables: Vec<Observable>,
    pub threshold: ThresholdWindow,
}

impl SweepSpec {
    pub fn new(base: Params, axes: Vec<Axis>, observables: Vec<Observable>) -> Self {
        Self {
            base,
            axes,
            observables,
            threshold: ThresholdWindow::default(),
        }
    }

    /// Checks every invariant without evaluating any point.
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return config(format!("need one or two axes, got {}", self.axes.len()));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return config(format!("axis {} given twice", self.axes[0].param));
        }
        if self.observables.is_empty() {
            return config("no observables requested");
        }
        for (i, o) in self.observables.iter().enumerate() {
            if self.observables[..i].contains(o) {
                return config(format!("observable {o} requested twice"));
            }
        }
        let temps: Vec<f64> = match self.axes.iter().find(|a| a.param == Param::T) {
            Some(a) => a.values.clone(),
            None => vec![self.base.t],
        };
        if let Some(t) = temps.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
            return config(format!("temperature must be positive and finite, got {t}"));
        }
        if self.observables.contains(&Observable::Threshold) {
            let w = self.threshold;
            if !(w.t_min > 0.0 && w.t_max > w.t_min && w.t_max.is_finite()) || w.scan_points < 2 {
                return config(format!(
                    "threshold window needs 0 < t-min < t-max and at least 2 points, got {}..{} with {}",
                    w.t_min, w.t_max, w.scan_points
                ));
            }
        }
        for p in self.points() {
            p.chain()?;
        }
        Ok(())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points with the first axis varying slowest.
    pub fn points(&self) -> Vec<Params> {
        let mut out = vec![self.base];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|p| axis.values.iter().map(move |&v| p.with(axis.param, v)))
                .collect();
        }
        out
    }

    pub fn axis(&self, p: Param) -> Option<&Axis> {
        self.axes.iter().find(|a| a.param == p)
    }

    pub fn axis_mut(&mut self, p: Param) -> Option<&mut Axis> {
        self.axes.iter_mut().find(|a| a.param == p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_both_ends() {
        let a = Axis::range(Param::T, 0.01, 2.0, 400).unwrap();
        assert_eq!(a.len(), 400);
        assert_eq!(a.values()[0], 0.01);
        assert_eq!(a.values()[399], 2.0);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(Axis::range(Param::T, 1.0, 1.0, 5).is_err());
        assert!(Axis::range(Param::T, 0.0, 1.0, 1).is_err());
        assert!(Axis::list(Param::H, vec![]).is_err());
        assert!("J:0:1:3".parse::<Axis>().is_err());
        assert!("Delta:0:1".parse::<Axis>().is_err());
    }

    #[test]
    fn parses_axis_forms() {
        let a: Axis = "Delta:0:4:5".parse().unwrap();
        assert_eq!(a.param(), Param::Delta);
        assert_eq!(a.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let b: Axis = "h=0.5, 1, 2".parse().unwrap();
        assert_eq!(b.values(), &[0.5, 1.0, 2.0]);
    }

    #[test]
    fn points_are_outer_axis_major() {
        let s = SweepSpec::new(
            Params::default(),
            vec![
                Axis::list(Param::H, vec![1.0, 2.0]).unwrap(),
                Axis::list(Param::T, vec![0.1, 0.2, 0.3]).unwrap(),
            ],
            vec![Observable::Concurrence],
        );
        let pts: Vec<(f64, f64)> = s.points().iter().map(|p| (p.h, p.t)).collect();
        assert_eq!(
            pts,
            vec![
                (1.0, 0.1),
                (1.0, 0.2),
                (1.0, 0.3),
                (2.0, 0.1),
                (2.0, 0.2),
                (2.0, 0.3)
            ]
        );
    }

    #[test]
    fn validation_catches_configuration_errors() {
        let t = || Axis::range(Param::T, 0.01, 1.0, 3).unwrap();
        let ok = SweepSpec::new(Params::default(), vec![t()], vec![Observable::Coherence]);
        assert!(ok.validate().is_ok());

        let mut s = ok.clone();
        s.axes = vec![Axis::list(Param::T, vec![0.5, 0.0]).unwrap()];
        assert!(s.validate().is_err());

        let mut s = ok.clone();
        s.axes = vec![];
        assert!(s.validate().is_err());

        let mut s = ok.clone();
        s.axes.push(t());
        assert!(s.validate().is_err());

        let mut s = ok.clone();
        s.axes = vec![Axis::list(Param::H, vec![1.0]).unwrap()];
        s.base.t = -1.0;
        assert!(s.validate().is_err());

        let mut s = ok;
        s.observables.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn observable_names_round_trip() {
        for o in Observable::ALL {
            assert_eq!(o.name().parse::<Observable>().unwrap(), o);
        }
        assert!("entropy".parse::<Observable>().is_err());
    }
}
