//! Parameter sets behind the published figures.
//!
//! Unless a preset says otherwise, `J1 = 1` and the impurity plaquette uses
//! `alpha = 0`, `gamma = 0.8`, `eta = -0.8`. Every record also carries the
//! homogeneous reference columns.

use crate::spec::{Axis, Observable, Param, Params, SweepSpec};

pub const PRESET_NAMES: [&str; 10] = [
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig5a",
    "fig5b",
    "fig6-channel",
    "fig7",
];

/// Fields of the weak, intermediate and strong curves; override with
/// `--fields`.
pub const FIELDS_ISOTROPIC: [f64; 3] = [0.5, 1.0, 2.0];
pub const FIELDS_ANISOTROPIC: [f64; 3] = [0.5, 1.0, 2.2];

/// Side of the density-plot grids.
pub const DENSITY_GRID: usize = 200;

pub fn impurity_base(delta: f64, h: f64) -> Params {
    Params {
        j1: 1.0,
        delta,
        h,
        alpha: 0.0,
        gamma: 0.8,
        eta: -0.8,
        t: 1.0,
    }
}

fn t_axis(max: f64, steps: usize) -> Axis {
    Axis::range(Param::T, 0.01, max, steps).expect("valid preset axis")
}

fn fields(values: &[f64]) -> Axis {
    Axis::list(Param::H, values.to_vec()).expect("valid preset axis")
}

fn density(base: Params, delta: (f64, f64), t_max: f64, observables: Vec<Observable>) -> SweepSpec {
    SweepSpec::new(
        base,
        vec![
            Axis::range(Param::Delta, delta.0, delta.1, DENSITY_GRID).expect("valid preset axis"),
            t_axis(t_max, DENSITY_GRID),
        ],
        observables,
    )
}

/// Sweep behind a named figure.
pub fn preset(name: &str) -> Option<SweepSpec> {
    use Observable::*;
    let curves = |delta: f64, h: &[f64], o: Observable| {
        SweepSpec::new(
            impurity_base(delta, 0.0),
            vec![fields(h), t_axis(2.0, 400)],
            vec![o],
        )
    };
    Some(match name {
        "fig2a" => curves(1.0, &FIELDS_ISOTROPIC, Concurrence),
        "fig2b" => curves(1.3, &FIELDS_ANISOTROPIC, Concurrence),
        "fig3a" => curves(1.0, &FIELDS_ISOTROPIC, Coherence),
        "fig3b" => curves(1.3, &FIELDS_ANISOTROPIC, Coherence),
        "fig4a" => density(
            impurity_base(1.0, 2.0),
            (0.0, 2.0),
            2.0,
            vec![Concurrence, Witness],
        ),
        "fig4b" => density(
            impurity_base(1.3, 2.2),
            (0.0, 2.0),
            2.0,
            vec![Concurrence, Witness],
        ),
        "fig5a" => density(impurity_base(1.0, 0.0), (0.0, 4.0), 1.5, vec![FidelityAvg]),
        "fig5b" => density(impurity_base(1.0, 1.0), (0.0, 4.0), 1.5, vec![FidelityAvg]),
        "fig6-channel" => SweepSpec::new(
            impurity_base(1.0, 0.0),
            vec![t_axis(2.0, 400)],
            vec![RdmElements, Concurrence, FidelityAvg],
        ),
        "fig7" => SweepSpec::new(
            Params {
                gamma: 0.0,
                eta: 0.0,
                ..impurity_base(0.5, 0.0)
            },
            vec![t_axis(1.0, 400)],
            vec![FidelityAvg, FidelityPopulation, FidelityCoherence],
        ),
        _ => return None,
    })
}
