//! Plaquette parameters, the four-level dimer spectrum and sector Boltzmann
//! factors.
//!
//! All energies, fields and temperatures are dimensionless in units of the
//! host exchange `J` (with `k_B = 1`). The computational basis of a dimer is
//! `{|00>, |01>, |10>, |11>}` with `|0>` the `S^z = +1/2` state.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Largest argument accepted by `f64::exp` without overflowing.
pub(crate) const MAX_EXPONENT: f64 = 709.0;

/// Physical couplings of one plaquette.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    /// XXZ exchange between the two interstitial spins.
    pub j: f64,
    /// z-axis anisotropy of the exchange.
    pub delta: f64,
    /// Ising coupling between interstitial and nodal spins.
    pub j1: f64,
    /// Longitudinal magnetic field.
    pub h: f64,
}

impl CouplingSet {
    pub fn new(j: f64, delta: f64, j1: f64, h: f64) -> Result<Self> {
        for (name, value) in [("J", j), ("Delta", delta), ("J1", j1), ("h", h)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        Ok(Self { j, delta, j1, h })
    }
}

/// Relative deviations of the impurity couplings from the host ones.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImpurityFactors {
    /// Exchange factor: `J~ = J (1 + alpha)`.
    pub alpha: f64,
    /// Anisotropy factor: `Delta~ = Delta (1 + gamma)`.
    pub gamma: f64,
    /// Ising-coupling factor: `J1~ = J1 (1 + eta)`.
    pub eta: f64,
}

impl ImpurityFactors {
    pub const NONE: Self = Self {
        alpha: 0.0,
        gamma: 0.0,
        eta: 0.0,
    };

    pub fn new(alpha: f64, gamma: f64, eta: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("gamma", gamma), ("eta", eta)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        Ok(Self { alpha, gamma, eta })
    }

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }
}

/// A host chain together with its single impurity plaquette.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    host: CouplingSet,
    factors: ImpurityFactors,
    impurity: CouplingSet,
}

impl ChainSpec {
    pub fn new(host: CouplingSet, factors: ImpurityFactors) -> Self {
        let impurity = CouplingSet {
            j: host.j * (1.0 + factors.alpha),
            delta: host.delta * (1.0 + factors.gamma),
            j1: host.j1 * (1.0 + factors.eta),
            h: host.h,
        };
        Self {
            host,
            factors,
            impurity,
        }
    }

    /// The chain without impurity; the impurity plaquette equals the host.
    pub fn homogeneous(host: CouplingSet) -> Self {
        Self::new(host, ImpurityFactors::NONE)
    }

    /// The same host with the impurity factors switched off.
    pub fn reference(&self) -> Self {
        Self::homogeneous(self.host)
    }

    pub fn host(&self) -> &CouplingSet {
        &self.host
    }

    pub fn factors(&self) -> &ImpurityFactors {
        &self.factors
    }

    pub fn impurity(&self) -> &CouplingSet {
        &self.impurity
    }

    /// Lowest dimer level over every nodal sector of both the host and the
    /// impurity plaquette. Used as the common energy reference of all
    /// Boltzmann weights so that every exponent is non-positive.
    pub fn ground_energy(&self) -> f64 {
        IsingSector::ALL
            .iter()
            .flat_map(|&s| {
                dimer_spectrum(&self.host, s)
                    .into_iter()
                    .chain(dimer_spectrum(&self.impurity, s))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// A nodal Ising spin, `+1/2` or `-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodalSpin {
    Up,
    Down,
}

impl NodalSpin {
    pub fn value(self) -> f64 {
        match self {
            NodalSpin::Up => 0.5,
            NodalSpin::Down => -0.5,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            NodalSpin::Up => NodalSpin::Down,
            NodalSpin::Down => NodalSpin::Up,
        }
    }
}

/// The pair of nodal spins enclosing one plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsingSector {
    pub left: NodalSpin,
    pub right: NodalSpin,
}

impl IsingSector {
    pub const ALL: [IsingSector; 4] = [
        IsingSector::new(NodalSpin::Up, NodalSpin::Up),
        IsingSector::new(NodalSpin::Up, NodalSpin::Down),
        IsingSector::new(NodalSpin::Down, NodalSpin::Up),
        IsingSector::new(NodalSpin::Down, NodalSpin::Down),
    ];

    pub const fn new(left: NodalSpin, right: NodalSpin) -> Self {
        Self { left, right }
    }

    /// `mu_left + mu_right`, one of `-1`, `0`, `+1`.
    pub fn sum(self) -> f64 {
        self.left.value() + self.right.value()
    }

    pub fn flipped(self) -> Self {
        Self::new(self.left.flipped(), self.right.flipped())
    }
}

/// Temperature and its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermal {
    temperature: f64,
    beta: f64,
}

impl Thermal {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(Self {
            temperature,
            beta: temperature.recip(),
        })
    }

    /// Builds the state directly from `beta`; `beta = 0` is the
    /// infinite-temperature limit.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Self {
            temperature: beta.recip(),
            beta,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Dimer energies for a given nodal environment, ordered as
/// `[|00>, triplet (|01>+|10>)/√2, singlet (|01>-|10>)/√2, |11>]`.
///
/// The Zeeman energy of the two nodal spins (`-h/2` each, shared with the
/// neighbouring plaquette) is included.
pub fn dimer_spectrum(c: &CouplingSet, s: IsingSector) -> [f64; 4] {
    let mu = s.sum();
    let zz = c.j * c.delta / 4.0;
    [
        zz + (c.j1 - c.h / 2.0) * mu - c.h,
        -zz + c.j / 2.0 - c.h / 2.0 * mu,
        -zz - c.j / 2.0 - c.h / 2.0 * mu,
        zz - (c.j1 + c.h / 2.0) * mu + c.h,
    ]
}

/// Plaquette Hamiltonian in the basis `{|00>, |01>, |10>, |11>}`, built
/// term by term from spin operators.
pub fn dimer_hamiltonian(c: &CouplingSet, s: IsingSector) -> Matrix4<f64> {
    let mu = s.sum();
    // S^z eigenvalues of (a, b) for each basis state.
    let sz = [(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)];
    let mut m = Matrix4::zeros();
    for (k, &(za, zb)) in sz.iter().enumerate() {
        let total = za + zb;
        m[(k, k)] = c.j * c.delta * za * zb + c.j1 * total * mu - c.h * total - c.h / 2.0 * mu;
    }
    // J (Sx Sx + Sy Sy) = (J/2)(S+ S- + S- S+) flips |01> <-> |10>.
    m[(1, 2)] = c.j / 2.0;
    m[(2, 1)] = c.j / 2.0;
    m
}

/// `exp(-beta (energy - e_ref))`, refusing to overflow.
pub(crate) fn shifted_exp(energy: f64, e_ref: f64, t: &Thermal) -> Result<f64> {
    let exponent = -t.beta() * (energy - e_ref);
    if exponent > MAX_EXPONENT {
        return Err(Error::Overflow { exponent });
    }
    Ok(exponent.exp())
}

/// Sector Boltzmann factor `w = Σ_j exp(-beta (E_j - e_ref))`.
pub fn boltzmann_factor(c: &CouplingSet, s: IsingSector, t: &Thermal, e_ref: f64) -> Result<f64> {
    dimer_spectrum(c, s)
        .into_iter()
        .map(|e| shifted_exp(e, e_ref, t))
        .sum()
}
