//! Grid evaluation.

use std::collections::HashMap;

use rayon::prelude::*;

use diamond_core::measures::{
    concurrence_xstate, entanglement_witness, l1_coherence, threshold_temperatures,
};
use diamond_core::rdm::rdm_thermo;
use diamond_core::teleport::average_fidelity;
use diamond_core::{ChainSpec, Thermal, XState};

use crate::error::Result;
use crate::spec::{Observable, Param, Params, SweepSpec, ThresholdWindow};

/// Which chain an observable is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Chain with the modified plaquette.
    Impurity,
    /// Homogeneous chain with the same host couplings.
    Reference,
}

impl Model {
    pub fn suffix(self) -> &'static str {
        match self {
            Model::Impurity => "imp",
            Model::Reference => "ref",
        }
    }

    pub fn chain(self, p: &Params) -> Result<ChainSpec> {
        let spec = p.chain()?;
        Ok(match self {
            Model::Impurity => spec,
            Model::Reference => spec.reference(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Serial,
}

/// One grid point with every requested column for both models.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub point: Params,
    /// Values in [`SweepTable::stems`] order.
    pub imp: Vec<f64>,
    pub reference: Vec<f64>,
}

impl Record {
    pub fn values(&self, model: Model) -> &[f64] {
        match model {
            Model::Impurity => &self.imp,
            Model::Reference => &self.reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub observables: Vec<Observable>,
    pub records: Vec<Record>,
}

impl SweepTable {
    /// Column stems of the observables, before the model suffix.
    pub fn stems(&self) -> Vec<&'static str> {
        self.observables
            .iter()
            .flat_map(|o| o.columns().iter().copied())
            .collect()
    }

    /// Values of one observable column, e.g. `("C", Model::Impurity)`.
    pub fn column(&self, stem: &str, model: Model) -> Option<Vec<f64>> {
        let i = self.stems().iter().position(|s| *s == stem)?;
        Some(self.records.iter().map(|r| r.values(model)[i]).collect())
    }
}

/// Evaluates `observables` for one chain at temperature `t`. `threshold` is
/// the precomputed highest threshold temperature, needed only when
/// [`Observable::Threshold`] is requested.
pub fn evaluate_chain(
    spec: &ChainSpec,
    t: f64,
    observables: &[Observable],
    threshold: f64,
) -> Result<Vec<f64>> {
    let x = rdm_thermo(spec, &Thermal::new(t)?)?;
    Ok(observables
        .iter()
        .flat_map(|&o| observe(&x, o, threshold))
        .collect())
}

fn observe(x: &XState, o: Observable, threshold: f64) -> Vec<f64> {
    match o {
        Observable::Concurrence => vec![concurrence_xstate(x)],
        Observable::Coherence => vec![l1_coherence(x)],
        Observable::FidelityAvg => vec![average_fidelity(x).f_a],
        Observable::FidelityPopulation => vec![average_fidelity(x).f_p],
        Observable::FidelityCoherence => vec![average_fidelity(x).f_c],
        Observable::Threshold => vec![threshold],
        Observable::RdmElements => vec![x.r11, x.r22, x.r23, x.r44],
        Observable::Witness => vec![entanglement_witness(x)],
    }
}

/// Highest threshold temperature in the window, `NaN` when there is none.
pub fn highest_threshold(spec: &ChainSpec, w: &ThresholdWindow) -> Result<f64> {
    let set = threshold_temperatures(spec, (w.t_min, w.t_max), w.scan_points)?;
    Ok(set.highest().unwrap_or(f64::NAN))
}

/// Evaluates one point for both models.
pub fn evaluate_point(
    p: &Params,
    observables: &[Observable],
    window: &ThresholdWindow,
) -> Result<Record> {
    let (ti, tr) = if observables.contains(&Observable::Threshold) {
        (
            highest_threshold(&Model::Impurity.chain(p)?, window)?,
            highest_threshold(&Model::Reference.chain(p)?, window)?,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    point_record(p, observables, ti, tr)
}

fn point_record(p: &Params, observables: &[Observable], ti: f64, tr: f64) -> Result<Record> {
    Ok(Record {
        point: *p,
        imp: evaluate_chain(&Model::Impurity.chain(p)?, p.t, observables, ti)?,
        reference: evaluate_chain(&Model::Reference.chain(p)?, p.t, observables, tr)?,
    })
}

/// Key identifying a point up to its temperature.
fn field_key(p: &Params) -> [u64; 6] {
    [p.j1, p.delta, p.h, p.alpha, p.gamma, p.eta].map(f64::to_bits)
}

fn map_ordered<T, U, F>(items: &[T], exec: Execution, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match exec {
        Execution::Parallel => items.par_iter().map(f).collect(),
        Execution::Serial => items.iter().map(f).collect(),
    }
}

/// Evaluates every grid point, first axis slowest, concurrently.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_with(spec, Execution::Parallel)
}

pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<SweepTable> {
    spec.validate()?;
    let points = spec.points();

    // Thresholds do not depend on T, so compute them once per distinct point.
    let mut thresholds: HashMap<[u64; 6], (f64, f64)> = HashMap::new();
    if spec.observables.contains(&Observable::Threshold) {
        let mut distinct: Vec<Params> = Vec::new();
        for p in &points {
            if !distinct.iter().any(|q| field_key(q) == field_key(p)) {
                distinct.push(*p);
            }
        }
        let w = spec.threshold;
        let values = map_ordered(&distinct, exec, |p| {
            Ok((
                highest_threshold(&Model::Impurity.chain(p)?, &w)?,
                highest_threshold(&Model::Reference.chain(p)?, &w)?,
            ))
        })?;
        thresholds = distinct.iter().map(field_key).zip(values).collect();
    }

    let records = map_ordered(&points, exec, |p| {
        let (ti, tr) = thresholds
            .get(&field_key(p))
            .copied()
            .unwrap_or((f64::NAN, f64::NAN));
        point_record(p, &spec.observables, ti, tr)
    })?;
    Ok(SweepTable {
        observables: spec.observables.clone(),
        records,
    })
}

/// Convenience for a single temperature axis over fixed parameters.
pub fn temperature_curve(
    base: Params,
    t: &[f64],
    observables: &[Observable],
) -> Result<SweepTable> {
    let axis = crate::spec::Axis::list(Param::T, t.to_vec())?;
    run_sweep(&SweepSpec::new(base, vec![axis], observables.to_vec()))
}
