//! Level curves of an observable on a (parameter, T) grid.

use diamond_core::roots::{bisect, sign_changes};
use diamond_core::teleport::CLASSICAL_FIDELITY;

use crate::error::{config, Result};
use crate::run::{evaluate_chain, run_sweep, Model};
use crate::spec::{Axis, Observable, Param, SweepSpec};

/// Bracket width at which contour bisection stops.
pub const CONTOUR_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub observable: Observable,
    pub model: Model,
    pub level: f64,
}

impl ContourSpec {
    pub fn new(observable: Observable, model: Model, level: f64) -> Result<Self> {
        let Some((lo, hi)) = observable.range() else {
            return config(format!(
                "observable {observable} has no scalar level curves"
            ));
        };
        if !(lo..=hi).contains(&level) {
            return config(format!(
                "level {level} outside the range [{lo}, {hi}] of {observable}"
            ));
        }
        Ok(Self {
            observable,
            model,
            level,
        })
    }

    /// The `F_A = 2/3` boundary between quantum and classical teleportation.
    pub fn classical_fidelity(model: Model) -> Self {
        Self {
            observable: Observable::FidelityAvg,
            model,
            level: CLASSICAL_FIDELITY,
        }
    }
}

/// Observable samples on a (column parameter × T) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub columns: Axis,
    pub t: Vec<f64>,
    /// `values[column][t_index]`.
    pub values: Vec<Vec<f64>>,
}

impl Grid {
    /// Grid cells where the observable exceeds `level`.
    pub fn count_above(&self, level: f64) -> usize {
        self.values.iter().flatten().filter(|&&v| v > level).count()
    }

    /// Evaluates `observable` for `model` over a two-axis sweep with `T` as
    /// one of the axes.
    pub fn evaluate(sweep: &SweepSpec, observable: Observable, model: Model) -> Result<Self> {
        if sweep.axes.len() != 2 {
            return config("contour grid needs exactly two axes");
        }
        let Some(t_pos) = sweep.axes.iter().position(|a| a.param() == Param::T) else {
            return config("contour grid needs a T axis");
        };
        if observable.columns().len() != 1 {
            return config(format!("observable {observable} is not scalar"));
        }
        let columns = sweep.axes[1 - t_pos].clone();
        let t = sweep.axes[t_pos].values().to_vec();
        let mut only = sweep.clone();
        only.observables = vec![observable];
        let table = run_sweep(&only)?;

        let (nx, nt) = (columns.len(), t.len());
        let mut values = vec![vec![0.0; nt]; nx];
        for (k, rec) in table.records.iter().enumerate() {
            let (outer, inner) = (k / sweep.axes[1].len(), k % sweep.axes[1].len());
            let (ix, it) = if t_pos == 0 {
                (inner, outer)
            } else {
                (outer, inner)
            };
            values[ix][it] = rec.values(model)[0];
        }
        Ok(Self { columns, t, values })
    }
}

/// One connected piece of a level curve: the `index`-th crossing (counted
/// from low T) in every column that has at least that many.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub index: usize,
    /// `(column value, T)` pairs in column order.
    pub points: Vec<(f64, f64)>,
}

/// For each grid column, brackets the sign changes of `value - level` along
/// T and bisects each with `eval(column value, T)` to [`CONTOUR_TOLERANCE`].
/// Columns without a crossing contribute nothing.
pub fn extract_contour<E>(
    level: f64,
    grid: &Grid,
    eval: impl Fn(f64, f64) -> std::result::Result<f64, E>,
) -> std::result::Result<Vec<Branch>, E> {
    let mut branches: Vec<Branch> = Vec::new();
    for (x, column) in grid.columns.values().iter().zip(&grid.values) {
        let shifted: Vec<f64> = column.iter().map(|v| v - level).collect();
        for (k, i) in sign_changes(&shifted).into_iter().enumerate() {
            let t = bisect(
                |t| Ok(eval(*x, t)? - level),
                grid.t[i],
                grid.t[i + 1],
                CONTOUR_TOLERANCE,
            )?;
            if branches.len() == k {
                branches.push(Branch {
                    index: k,
                    points: Vec::new(),
                });
            }
            branches[k].points.push((*x, t));
        }
    }
    Ok(branches)
}

/// Evaluates the grid of `sweep` and extracts the level curve of `spec`.
pub fn contour(spec: &ContourSpec, sweep: &SweepSpec) -> Result<(Grid, Vec<Branch>)> {
    let grid = Grid::evaluate(sweep, spec.observable, spec.model)?;
    let param = grid.columns.param();
    let branches = extract_contour(spec.level, &grid, |x, t| {
        let p = sweep.base.with(param, x).with(Param::T, t);
        Ok::<_, crate::error::SweepError>(
            evaluate_chain(&spec.model.chain(&p)?, t, &[spec.observable], f64::NAN)?[0],
        )
    })?;
    Ok((grid, branches))
}
