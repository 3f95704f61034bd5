//! Brute-force reference implementations for validating the transfer-matrix
//! routes.
//!
//! Everything here is deliberately naive: plaquette weights come from a dense
//! eigendecomposition of the 4×4 Hamiltonian (not the closed-form spectrum),
//! and ring sums run over all `2^N` nodal configurations.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{dimer_hamiltonian, ChainSpec, CouplingSet, IsingSector, NodalSpin, Thermal};
use crate::rdm::XState;

/// Largest ring the enumeration accepts.
pub const MAX_CELLS: usize = 12;

/// `exp(-β (H - e_ref))` for every nodal sector, indexed by
/// `2 * left + right` with `0 = up`, `1 = down`.
struct PlaquetteTable {
    thermal: [Matrix4<f64>; 4],
    weight: [f64; 4],
}

fn spin(bit: usize) -> NodalSpin {
    if bit == 0 {
        NodalSpin::Up
    } else {
        NodalSpin::Down
    }
}

fn sector(left: usize, right: usize) -> IsingSector {
    IsingSector::new(spin(left), spin(right))
}

fn dense_ground(c: &CouplingSet) -> f64 {
    (0..4)
        .map(|k| {
            SymmetricEigen::new(dimer_hamiltonian(c, sector(k / 2, k % 2)))
                .eigenvalues
                .min()
        })
        .fold(f64::INFINITY, f64::min)
}

impl PlaquetteTable {
    fn new(c: &CouplingSet, t: &Thermal, e_ref: f64) -> Self {
        let thermal = std::array::from_fn(|k| {
            let eig = SymmetricEigen::new(dimer_hamiltonian(c, sector(k / 2, k % 2)));
            let boltz = eig.eigenvalues.map(|e| (-t.beta() * (e - e_ref)).exp());
            eig.eigenvectors * Matrix4::from_diagonal(&boltz) * eig.eigenvectors.transpose()
        });
        let weight = std::array::from_fn(|k: usize| thermal[k].trace());
        Self { thermal, weight }
    }
}

/// All-configuration sums for a ring of `n` cells with the impurity in cell
/// `r`: the partition function and the four X-state numerators.
struct ChainEnumeration {
    partition: f64,
    elements: [f64; 4],
}

impl ChainEnumeration {
    fn run(spec: &ChainSpec, t: &Thermal, n: usize, r: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewCells { min: 2, got: n });
        }
        if n > MAX_CELLS {
            return Err(Error::TooManyCells {
                max: MAX_CELLS,
                got: n,
            });
        }
        if !(1..=n).contains(&r) {
            return Err(Error::CellIndex { r, n });
        }
        let e_ref = dense_ground(spec.host()).min(dense_ground(spec.impurity()));
        let host = PlaquetteTable::new(spec.host(), t, e_ref);
        let imp = PlaquetteTable::new(spec.impurity(), t, e_ref);

        let mut partition = 0.0;
        let mut elements = [0.0; 4];
        for config in 0..(1usize << n) {
            let bit = |i: usize| (config >> (i % n)) & 1;
            let mut rest = 1.0;
            for cell in (0..n).filter(|&c| c + 1 != r) {
                rest *= host.weight[2 * bit(cell) + bit(cell + 1)];
            }
            let k = 2 * bit(r - 1) + bit(r);
            let local = &imp.thermal[k];
            partition += rest * imp.weight[k];
            elements[0] += rest * local[(0, 0)];
            elements[1] += rest * local[(1, 1)];
            elements[2] += rest * local[(1, 2)];
            elements[3] += rest * local[(3, 3)];
        }
        Ok(Self {
            partition,
            elements,
        })
    }
}

/// Ring partition function by direct summation, measured from the lowest
/// plaquette eigenvalue of host and impurity.
pub fn enumerate_partition(spec: &ChainSpec, t: &Thermal, n: usize, r: usize) -> Result<f64> {
    Ok(ChainEnumeration::run(spec, t, n, r)?.partition)
}

/// Impurity reduced density operator by direct summation.
pub fn enumerate_rdm(spec: &ChainSpec, t: &Thermal, n: usize, r: usize) -> Result<XState> {
    let e = ChainEnumeration::run(spec, t, n, r)?;
    let z = e.partition;
    Ok(XState {
        r11: e.elements[0] / z,
        r22: e.elements[1] / z,
        r23: e.elements[2] / z,
        r44: e.elements[3] / z,
    })
}
