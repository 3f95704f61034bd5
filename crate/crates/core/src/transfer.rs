//! Host and impurity transfer matrices, their spectral data, and the ring
//! partition function.
//!
//! The host transfer matrix is the symmetric 2×2 matrix
//! `W = [[w++, w+-], [w+-, w--]]` indexed by the nodal spins on either side of
//! a plaquette; `W~` is the same object for the impurity plaquette. The ring
//! partition function is `Z_N = tr(W~ W^(N-1)) = a Λ+^(N-1) + d Λ-^(N-1)`.
//!
//! All weights are measured relative to a common energy reference, so `Z_N`
//! is returned in those shifted units.

use crate::error::{Error, Result};
use crate::model::{
    boltzmann_factor, dimer_spectrum, shifted_exp, ChainSpec, CouplingSet, IsingSector, NodalSpin,
    Thermal,
};

/// The three distinct entries of a symmetric sector-indexed 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorTriple {
    pub pp: f64,
    pub pm: f64,
    pub mm: f64,
}

impl SectorTriple {
    pub fn trace(&self) -> f64 {
        self.pp + self.mm
    }
}

pub(crate) const UP_UP: IsingSector = IsingSector::new(NodalSpin::Up, NodalSpin::Up);
pub(crate) const UP_DOWN: IsingSector = IsingSector::new(NodalSpin::Up, NodalSpin::Down);
pub(crate) const DOWN_DOWN: IsingSector = IsingSector::new(NodalSpin::Down, NodalSpin::Down);

fn sector_weights(c: &CouplingSet, t: &Thermal, e_ref: f64) -> Result<SectorTriple> {
    Ok(SectorTriple {
        pp: boltzmann_factor(c, UP_UP, t, e_ref)?,
        pm: boltzmann_factor(c, UP_DOWN, t, e_ref)?,
        mm: boltzmann_factor(c, DOWN_DOWN, t, e_ref)?,
    })
}

/// Level of the down-down sector paired with each up-up level under field
/// reversal, and `E_k(++) - E_partner(--)`, which is proportional to `h`.
const PARTNER: [usize; 4] = [3, 1, 2, 0];

fn partner_gaps(h: f64) -> [f64; 4] {
    [-3.0 * h, -h, -h, h]
}

/// `w++ - w--` summed pair by pair over [`PARTNER`], so it is exactly zero at
/// `h = 0` and keeps its relative accuracy when both weights nearly agree.
fn sector_split(c: &CouplingSet, t: &Thermal, e_ref: f64) -> Result<f64> {
    let up = dimer_spectrum(c, UP_UP);
    let down = dimer_spectrum(c, DOWN_DOWN);
    let mut split = 0.0;
    for (k, gap) in partner_gaps(c.h).into_iter().enumerate() {
        let (a, b) = (up[k], down[PARTNER[k]]);
        split += if gap >= 0.0 {
            shifted_exp(b, e_ref, t)? * (-t.beta() * gap).exp_m1()
        } else {
            -shifted_exp(a, e_ref, t)? * (t.beta() * gap).exp_m1()
        };
    }
    Ok(split)
}

/// Spectral decomposition of the host transfer matrix together with the
/// impurity overlap weights `a` and `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSpectral {
    /// Host weights `w++`, `w+-`, `w--`.
    pub host: SectorTriple,
    /// Impurity weights `w~++`, `w~+-`, `w~--`.
    pub impurity: SectorTriple,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `sqrt((w++ - w--)^2 + 4 w+-^2)`.
    pub q: f64,
    pub a: f64,
    pub d: f64,
    /// Energy reference all weights are measured from.
    pub e_ref: f64,
    pub thermal: Thermal,
    /// `Q + (w++ - w--)`, evaluated without cancellation.
    pub(crate) q_plus: f64,
    /// `Q - (w++ - w--)`, evaluated without cancellation.
    pub(crate) q_minus: f64,
}

impl TransferSpectral {
    /// Spectral data with the energy reference set to the chain's ground level.
    pub fn build(spec: &ChainSpec, t: &Thermal) -> Result<Self> {
        Self::build_with_shift(spec, t, spec.ground_energy())
    }

    pub fn build_with_shift(spec: &ChainSpec, t: &Thermal, e_ref: f64) -> Result<Self> {
        let host = sector_weights(spec.host(), t, e_ref)?;
        let impurity = sector_weights(spec.impurity(), t, e_ref)?;

        let split = sector_split(spec.host(), t, e_ref)?;
        let q = split.hypot(2.0 * host.pm);
        // Q² - split² = 4 w+-², so whichever of Q ± split is small follows
        // from the large one without subtracting.
        let four_pm_sq = 4.0 * host.pm * host.pm;
        let (q_plus, q_minus) = if split >= 0.0 {
            let qp = q + split;
            (qp, if qp > 0.0 { four_pm_sq / qp } else { 0.0 })
        } else {
            let qm = q - split;
            (if qm > 0.0 { four_pm_sq / qm } else { 0.0 }, qm)
        };

        let lambda_plus = 0.5 * (host.trace() + q);
        let det = host.pp * host.mm - host.pm * host.pm;
        let lambda_minus = if lambda_plus > 0.0 {
            det / lambda_plus
        } else {
            0.0
        };

        let (a, d) = if q > 0.0 {
            (
                overlap(q_plus, q_minus, host.pm, &impurity) / (2.0 * q),
                overlap(q_minus, q_plus, -host.pm, &impurity) / (2.0 * q),
            )
        } else {
            // W = Λ·1, so any split of tr(W~) keeps Z_N = tr(W~) Λ^(N-1).
            (0.5 * impurity.trace(), 0.5 * impurity.trace())
        };

        Ok(Self {
            host,
            impurity,
            lambda_plus,
            lambda_minus,
            q,
            a,
            d,
            e_ref,
            thermal: *t,
            q_plus,
            q_minus,
        })
    }

    /// `Λ- / Λ+`; its magnitude is strictly below one for `T > 0`.
    pub fn eigenvalue_ratio(&self) -> f64 {
        self.lambda_minus / self.lambda_plus
    }

    pub(crate) fn ensure_nondegenerate(&self) -> Result<()> {
        if self.q > 0.0 && self.host.pm > 0.0 && self.lambda_plus > self.lambda_minus {
            Ok(())
        } else {
            Err(Error::DegenerateSpectrum(self.lambda_plus))
        }
    }

    /// Ring partition function `a Λ+^(N-1) + d Λ-^(N-1)` for `N` cells, in
    /// units shifted by `exp(β N e_ref)`. Fails with [`Error::Overflow`] once
    /// the value leaves the `f64` range; use [`Self::ln_partition_finite`]
    /// then.
    pub fn partition_finite(&self, n: usize) -> Result<f64> {
        check_cells(n)?;
        let p = (n - 1) as i32;
        let z = self.a * self.lambda_plus.powi(p) + self.d * self.lambda_minus.powi(p);
        if z.is_finite() {
            Ok(z)
        } else {
            Err(Error::Overflow {
                exponent: (n - 1) as f64 * self.lambda_plus.ln(),
            })
        }
    }

    /// `ln Z_N` evaluated in log form, valid for any `N`.
    pub fn ln_partition_finite(&self, n: usize) -> Result<f64> {
        check_cells(n)?;
        self.ensure_nondegenerate()?;
        let tail = self.d / self.a * self.eigenvalue_ratio().powi((n - 1) as i32);
        Ok(self.a.ln() + (n - 1) as f64 * self.lambda_plus.ln() + tail.ln_1p())
    }

    /// `(ln Λ+, ln a)` such that `ln Z_N ≈ ln a + (N-1) ln Λ+` for large `N`.
    pub fn partition_thermo_log(&self) -> Result<(f64, f64)> {
        self.ensure_nondegenerate()?;
        Ok((self.lambda_plus.ln(), self.a.ln()))
    }
}

/// `p x++ + m x-- + 4 s x+-`: the dominant-eigenvector overlap of a sector
/// matrix, scaled by `2Q`.
pub(crate) fn overlap(p: f64, m: f64, s: f64, x: &SectorTriple) -> f64 {
    p * x.pp + m * x.mm + 4.0 * s * x.pm
}

fn check_cells(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewCells { min: 2, got: n });
    }
    Ok(())
}
