//! Entanglement and coherence of two-qubit states, and the temperatures at
//! which the impurity dimer gains or loses entanglement.

use std::fmt;

use nalgebra::{Complex, Matrix4, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::model::{ChainSpec, Thermal};
use crate::rdm::{rdm_thermo, XState};
use crate::roots::{bisect, sign_changes};

pub type C64 = Complex<f64>;

/// Default number of scan points for [`threshold_temperatures`].
pub const DEFAULT_SCAN_POINTS: usize = 2000;
/// Bracket width at which threshold bisection stops.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-10;
const NEGATIVITY_TOLERANCE: f64 = 1e-10;

/// A validated 4×4 two-qubit density matrix in the basis
/// `{|00>, |01>, |10>, |11>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(Matrix4<C64>);

impl DensityMatrix4 {
    /// Checks hermiticity, unit trace and positivity before wrapping.
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        let skew = (m - m.adjoint())
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()));
        if skew > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |ρ - ρ†| = {skew:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} differs from one"
            )));
        }
        let min_eig = SymmetricEigen::new(m).eigenvalues.min();
        if min_eig < -NEGATIVITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix4<C64> {
        self.0
    }
}

impl From<&XState> for DensityMatrix4 {
    fn from(x: &XState) -> Self {
        let r = |v: f64| C64::new(v, 0.0);
        let mut m = Matrix4::zeros();
        m[(0, 0)] = r(x.r11);
        m[(1, 1)] = r(x.r22);
        m[(2, 2)] = r(x.r22);
        m[(1, 2)] = r(x.r23);
        m[(2, 1)] = r(x.r23);
        m[(3, 3)] = r(x.r44);
        Self(m)
    }
}

/// `σʸ ⊗ σʸ` in the computational basis (real).
pub fn sigma_y_y() -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m
}

/// `|ρ23| - sqrt(ρ11 ρ44)`: positive exactly where the X state is entangled.
pub fn entanglement_witness(x: &XState) -> f64 {
    x.r23.abs() - (x.r11 * x.r44).sqrt()
}

/// Wootters concurrence of an X state, `2 max{|ρ23| - sqrt(ρ11 ρ44), 0}`.
pub fn concurrence_xstate(x: &XState) -> f64 {
    (2.0 * entanglement_witness(x)).clamp(0.0, 1.0)
}

/// l1-norm of coherence of an X state, `2|ρ23|`.
pub fn l1_coherence(x: &XState) -> f64 {
    2.0 * x.r23.abs()
}

/// l1-norm of coherence of a general state: the sum of the moduli of all
/// off-diagonal elements.
pub fn l1_coherence_general(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix();
    (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| m[(i, j)].norm())
        .sum()
}

/// Square roots of the eigenvalues of `R = ρ (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`, in
/// decreasing order.
///
/// Computed as the singular values of `τ_ij = v_iᵀ (σʸ⊗σʸ) v_j`, where
/// `v_i = sqrt(p_i) |ψ_i>` runs over the eigen-decomposition of `ρ`. This
/// avoids taking square roots of rounding-level eigenvalues of `R`, which
/// would otherwise cost half the significant digits for pure states.
pub fn spin_flip_roots(rho: &DensityMatrix4) -> [f64; 4] {
    let eig = SymmetricEigen::new(*rho.matrix());
    let mut v = eig.eigenvectors;
    for (k, p) in eig.eigenvalues.iter().enumerate() {
        let scale = p.max(0.0).sqrt();
        v.column_mut(k).scale_mut(scale);
    }
    let tau = v.transpose() * sigma_y_y() * v;
    let svd = SVD::new(tau, false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [s[0], s[1], s[2], s[3]]
}

/// Wootters concurrence `max{√λ1 - √λ2 - √λ3 - √λ4, 0}` of any two-qubit state.
pub fn concurrence_general(rho: &DensityMatrix4) -> f64 {
    let s = spin_flip_roots(rho);
    (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
}

/// Entangled or disentangled temperature interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Entangled,
    Disentangled,
}

impl Region {
    fn of(witness: f64) -> Self {
        if witness > 0.0 {
            Region::Entangled
        } else {
            Region::Disentangled
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Entangled => "E",
            Region::Disentangled => "D",
        })
    }
}

/// Temperatures in a scan window where the impurity concurrence switches on
/// or off, with the region label of every interval between them.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSet {
    pub spec: ChainSpec,
    pub t_range: (f64, f64),
    /// Strictly increasing.
    pub roots: Vec<f64>,
    /// `roots.len() + 1` alternating labels, lowest temperature first.
    pub regions: Vec<Region>,
}

impl ThresholdSet {
    /// Largest threshold temperature in the window, if any.
    pub fn highest(&self) -> Option<f64> {
        self.roots.last().copied()
    }

    /// Region sequence such as `D-E-D`.
    pub fn pattern(&self) -> String {
        self.regions
            .iter()
            .map(Region::to_string)
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Scans the witness `|ρ23| - sqrt(ρ11 ρ44)` of the impurity dimer on a
/// uniform grid of `scan_points` temperatures over `t_range` and bisects
/// every sign change to [`THRESHOLD_TOLERANCE`].
///
/// Sign changes closer together than the grid spacing can be missed.
pub fn threshold_temperatures(
    spec: &ChainSpec,
    t_range: (f64, f64),
    scan_points: usize,
) -> Result<ThresholdSet> {
    let (lo, hi) = t_range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::InvalidScan(format!(
            "temperature range ({lo}, {hi}) must satisfy 0 < min < max"
        )));
    }
    if scan_points < 2 {
        return Err(Error::InvalidScan(format!(
            "need at least two scan points, got {scan_points}"
        )));
    }
    let witness =
        |t: f64| -> Result<f64> { Ok(entanglement_witness(&rdm_thermo(spec, &Thermal::new(t)?)?)) };
    let step = (hi - lo) / (scan_points - 1) as f64;
    let grid: Vec<f64> = (0..scan_points)
        .map(|i| {
            if i + 1 == scan_points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let values = grid
        .iter()
        .map(|&t| witness(t))
        .collect::<Result<Vec<_>>>()?;

    let roots = sign_changes(&values)
        .into_iter()
        .map(|i| bisect(witness, grid[i], grid[i + 1], THRESHOLD_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;

    let mut regions = vec![Region::of(values[0])];
    for _ in &roots {
        let next = match regions.last() {
            Some(Region::Entangled) => Region::Disentangled,
            _ => Region::Entangled,
        };
        regions.push(next);
    }

    Ok(ThresholdSet {
        spec: *spec,
        t_range,
        roots,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingSet, ImpurityFactors};
    use approx::assert_relative_eq;
    use nalgebra::{Schur, Vector4};
    use proptest::prelude::*;

    fn pure(v: Vector4<C64>) -> DensityMatrix4 {
        DensityMatrix4::new(v * v.adjoint()).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn xstate_anchors() {
        assert_eq!(concurrence_xstate(&XState::SINGLET), 1.0);
        assert_eq!(l1_coherence(&XState::SINGLET), 1.0);
        assert_eq!(concurrence_xstate(&XState::MAXIMALLY_MIXED), 0.0);
        assert_eq!(l1_coherence(&XState::MAXIMALLY_MIXED), 0.0);
    }

    #[test]
    fn product_state_is_separable() {
        let rho = pure(Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)));
        assert_eq!(concurrence_general(&rho), 0.0);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rho = pure(Vector4::new(c(r), c(0.0), c(0.0), c(r)));
        assert_relative_eq!(concurrence_general(&rho), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn embedded_singlet_matches() {
        let rho = DensityMatrix4::from(&XState::SINGLET);
        assert_relative_eq!(concurrence_general(&rho), 1.0, epsilon = 1e-12);
        assert_relative_eq!(l1_coherence_general(&rho), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = Matrix4::<C64>::identity() * c(0.25);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix4::new(m).is_err());
        assert!(DensityMatrix4::new(Matrix4::identity() * c(0.5)).is_err());
        let bad = Matrix4::from_diagonal(&Vector4::new(c(1.2), c(-0.2), c(0.0), c(0.0)));
        assert!(DensityMatrix4::new(bad).is_err());
    }

    #[test]
    fn spin_flip_roots_match_direct_eigenvalues() {
        // A full-rank state where the non-Hermitian route is well conditioned.
        let x = XState::new(0.1, 0.3, -0.2, 0.3).unwrap();
        let rho = DensityMatrix4::from(&x);
        let m = *rho.matrix();
        let y = sigma_y_y();
        let r = m * y * m.conjugate() * y;
        let mut direct: Vec<f64> = Schur::new(r)
            .eigenvalues()
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        direct.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (s, l) in spin_flip_roots(&rho).iter().zip(direct) {
            assert_relative_eq!(s * s, l, epsilon = 1e-12);
        }
    }

    fn host(delta: f64, h: f64) -> ChainSpec {
        ChainSpec::new(
            CouplingSet::new(1.0, delta, 1.0, h).unwrap(),
            ImpurityFactors::new(0.0, 0.8, -0.8).unwrap(),
        )
    }

    #[test]
    fn threshold_scan_validates_arguments() {
        let s = host(1.0, 0.5);
        assert!(threshold_temperatures(&s, (0.0, 2.0), 100).is_err());
        assert!(threshold_temperatures(&s, (1.0, 0.5), 100).is_err());
        assert!(threshold_temperatures(&s, (0.1, 2.0), 1).is_err());
    }

    #[test]
    fn weak_field_dies_once() {
        let s = host(1.0, 0.5);
        let set = threshold_temperatures(&s, (0.01, 2.0), 400).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_eq!(set.pattern(), "E-D");
        // Dense 10x scan oracle: the last entangled grid point brackets the root.
        let n = 4000;
        let grid: Vec<f64> = (0..n)
            .map(|i| 0.01 + 1.99 * i as f64 / (n - 1) as f64)
            .collect();
        let last = grid
            .iter()
            .copied()
            .filter(|&t| {
                entanglement_witness(&rdm_thermo(&s, &Thermal::new(t).unwrap()).unwrap()) > 0.0
            })
            .fold(0.0, f64::max);
        let root = set.roots[0];
        assert!(root >= last && root <= last + 1.99 / (n - 1) as f64);
    }

    #[test]
    fn fully_disentangled_window_has_no_roots() {
        let s = host(1.0, 0.5);
        let set = threshold_temperatures(&s, (3.0, 6.0), 50).unwrap();
        assert!(set.roots.is_empty());
        assert_eq!(set.regions, vec![Region::Disentangled]);
    }

    fn x_state() -> impl Strategy<Value = XState> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, m, f)| {
            // Split unit trace between the outer populations and the block.
            let outer = m;
            let r11 = outer * a;
            let r44 = outer * (1.0 - a) * b;
            let r22 = 0.5 * (1.0 - r11 - r44);
            XState {
                r11,
                r22,
                r23: f * r22,
                r44,
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn xstate_concurrence_matches_wootters(x in x_state()) {
            let rho = DensityMatrix4::from(&x);
            let general = concurrence_general(&rho);
            let closed = concurrence_xstate(&x);
            prop_assert!((general - closed).abs() < 1e-10, "{} vs {}", general, closed);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&closed));
        }

        #[test]
        fn coherence_dominates_concurrence(x in x_state()) {
            prop_assert!(l1_coherence(&x) >= concurrence_xstate(&x));
            let rho = DensityMatrix4::from(&x);
            prop_assert!((l1_coherence_general(&rho) - l1_coherence(&x)).abs() < 1e-15);
        }
    }
}
