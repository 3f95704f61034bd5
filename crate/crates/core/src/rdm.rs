//! Reduced density operator of the impurity dimer.
//!
//! Tracing the ring over every spin except the impurity dimer leaves an X
//! state
//!
//! ```text
//!     | ρ11  0    0    0   |
//!     | 0    ρ22  ρ23  0   |
//!     | 0    ρ23  ρ22  0   |
//!     | 0    0    0    ρ44 |
//! ```
//!
//! Each element is a ratio of sector-weighted sums. [`rdm_thermo`] evaluates
//! the infinite-ring limit in closed form and is the path used for sweeps;
//! [`rdm_finite`] follows the similarity transform of the transfer matrix
//! for a ring of `N` cells.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::model::{dimer_spectrum, shifted_exp, ChainSpec, CouplingSet, IsingSector, Thermal};
use crate::transfer::{overlap, SectorTriple, TransferSpectral, DOWN_DOWN, UP_DOWN, UP_UP};

/// Tolerance used when validating externally supplied X states.
pub const XSTATE_TOLERANCE: f64 = 1e-10;

/// Boltzmann-weighted two-qubit operator of one plaquette in a fixed nodal
/// environment, in the same X form as the density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOperator {
    pub r11: f64,
    pub r22: f64,
    pub r23: f64,
    pub r44: f64,
}

impl LocalOperator {
    /// `tr ϱ = ϱ11 + 2ϱ22 + ϱ44`, the sector Boltzmann factor.
    pub fn trace(&self) -> f64 {
        self.r11 + 2.0 * self.r22 + self.r44
    }
}

/// `ϱ(μ, μ') = Σ_j exp(-β(E_j - e_ref)) |φ_j><φ_j|` in the X parametrisation.
pub fn local_operator(
    c: &CouplingSet,
    s: IsingSector,
    t: &Thermal,
    e_ref: f64,
) -> Result<LocalOperator> {
    let [e1, e2, e3, e4] = dimer_spectrum(c, s);
    let triplet = shifted_exp(e2, e_ref, t)?;
    let singlet = shifted_exp(e3, e_ref, t)?;
    Ok(LocalOperator {
        r11: shifted_exp(e1, e_ref, t)?,
        r22: 0.5 * (triplet + singlet),
        r23: 0.5 * (triplet - singlet),
        r44: shifted_exp(e4, e_ref, t)?,
    })
}

/// Two-qubit X state with a degenerate middle block and real coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub r11: f64,
    pub r22: f64,
    pub r23: f64,
    pub r44: f64,
}

impl XState {
    /// Validated constructor: unit trace and positivity within
    /// [`XSTATE_TOLERANCE`].
    pub fn new(r11: f64, r22: f64, r23: f64, r44: f64) -> Result<Self> {
        let x = Self { r11, r22, r23, r44 };
        x.validate()?;
        Ok(x)
    }

    pub const MAXIMALLY_MIXED: Self = Self {
        r11: 0.25,
        r22: 0.25,
        r23: 0.0,
        r44: 0.25,
    };

    /// `(|01> - |10>)/√2`.
    pub const SINGLET: Self = Self {
        r11: 0.0,
        r22: 0.5,
        r23: -0.5,
        r44: 0.0,
    };

    /// `(|01> + |10>)/√2`.
    pub const TRIPLET_ZERO: Self = Self {
        r11: 0.0,
        r22: 0.5,
        r23: 0.5,
        r44: 0.0,
    };

    pub fn trace(&self) -> f64 {
        self.r11 + 2.0 * self.r22 + self.r44
    }

    pub fn validate(&self) -> Result<()> {
        let tol = XSTATE_TOLERANCE;
        let elems = [self.r11, self.r22, self.r23, self.r44];
        if elems.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDensityMatrix(format!(
                "non-finite X state {self:?}"
            )));
        }
        if (self.trace() - 1.0).abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} differs from one",
                self.trace()
            )));
        }
        if self.r11 < -tol || self.r44 < -tol || self.r22 + tol < self.r23.abs() {
            return Err(Error::InvalidDensityMatrix(format!(
                "X state {self:?} is not positive"
            )));
        }
        Ok(())
    }

    /// Largest elementwise difference to another X state.
    pub fn max_abs_diff(&self, other: &XState) -> f64 {
        [
            self.r11 - other.r11,
            self.r22 - other.r22,
            self.r23 - other.r23,
            self.r44 - other.r44,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }

    fn from_operators(num: [f64; 4], norm: f64) -> Self {
        Self {
            r11: num[0] / norm,
            r22: num[1] / norm,
            r23: num[2] / norm,
            r44: num[3] / norm,
        }
    }
}

/// Impurity local operators in the `++`, `+-` and `--` sectors.
fn impurity_operators(spec: &ChainSpec, t: &Thermal, e_ref: f64) -> Result<[LocalOperator; 3]> {
    let c = spec.impurity();
    Ok([
        local_operator(c, UP_UP, t, e_ref)?,
        local_operator(c, UP_DOWN, t, e_ref)?,
        local_operator(c, DOWN_DOWN, t, e_ref)?,
    ])
}

/// The four element-wise sector matrices `P~_{k,l}`.
fn element_triples(ops: &[LocalOperator; 3]) -> [SectorTriple; 4] {
    let pick = |f: fn(&LocalOperator) -> f64| SectorTriple {
        pp: f(&ops[0]),
        pm: f(&ops[1]),
        mm: f(&ops[2]),
    };
    [
        pick(|o| o.r11),
        pick(|o| o.r22),
        pick(|o| o.r23),
        pick(|o| o.r44),
    ]
}

/// Reduced density operator of the impurity dimer in the infinite ring.
pub fn rdm_thermo(spec: &ChainSpec, t: &Thermal) -> Result<XState> {
    rdm_thermo_with_shift(spec, t, spec.ground_energy())
}

/// [`rdm_thermo`] with an explicit energy reference.
///
/// Each element is `(A_kl + B_kl) / M` with
/// `A_kl = Q (ϱ++ + ϱ--) + 4 w+- ϱ+-`, `B_kl = (ϱ++ - ϱ--)(w++ - w--)` and
/// `M` the same combination of impurity weights. Regrouped by sector this is
/// `(Q + δ) ϱ++ + (Q - δ) ϱ-- + 4 w+- ϱ+-` with `δ = w++ - w--`, which has no
/// cancelling terms when host and impurity favour opposite nodal sectors.
pub fn rdm_thermo_with_shift(spec: &ChainSpec, t: &Thermal, e_ref: f64) -> Result<XState> {
    let sp = TransferSpectral::build_with_shift(spec, t, e_ref)?;
    let ops = impurity_operators(spec, t, e_ref)?;
    let (p, m, s) = if sp.q > 0.0 {
        (sp.q_plus, sp.q_minus, sp.host.pm)
    } else {
        // w+- underflowed with w++ = w--: both nodal sectors equally likely.
        (1.0, 1.0, 0.0)
    };
    let norm = overlap(p, m, s, &sp.impurity);
    assert!(
        norm > 0.0,
        "impurity normalisation must be positive, got {norm}"
    );
    let num = element_triples(&ops).map(|x| overlap(p, m, s, &x));
    Ok(XState::from_operators(num, norm))
}

/// Reduced density operator of the impurity dimer located in cell `r` of a
/// ring of `n` cells.
///
/// Uses `ρ_kl = tr(U⁻¹ P~_kl U diag(Λ+^(N-1), Λ-^(N-1))) / Z_N` with `U` the
/// eigenvector matrix of the host transfer matrix. The trace is cyclic, so
/// the result is the same for every `r`.
pub fn rdm_finite(spec: &ChainSpec, t: &Thermal, n: usize, r: usize) -> Result<XState> {
    if n < 2 {
        return Err(Error::TooFewCells { min: 2, got: n });
    }
    if !(1..=n).contains(&r) {
        return Err(Error::CellIndex { r, n });
    }
    let sp = TransferSpectral::build(spec, t)?;
    sp.ensure_nondegenerate()?;
    let ops = impurity_operators(spec, t, sp.e_ref)?;

    // Columns of U: (Λ± - w--, w+-); Λ+ - w-- = (Q + δ)/2 and
    // Λ- - w-- = -(Q - δ)/2.
    let b = sp.host.pm;
    let u = Matrix2::new(0.5 * sp.q_plus, -0.5 * sp.q_minus, b, b);
    let u_inv = Matrix2::new(
        1.0 / sp.q,
        0.5 * sp.q_minus / (sp.q * b),
        -1.0 / sp.q,
        0.5 * sp.q_plus / (sp.q * b),
    );
    let ratio = sp.eigenvalue_ratio().powi((n - 1) as i32);
    let weigh = |x: &SectorTriple| {
        let p = Matrix2::new(x.pp, x.pm, x.pm, x.mm);
        let rotated = u_inv * p * u;
        rotated[(0, 0)] + rotated[(1, 1)] * ratio
    };
    let norm = sp.a + sp.d * ratio;
    let num = element_triples(&ops).map(|x| weigh(&x));
    Ok(XState::from_operators(num, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ImpurityFactors;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(j: f64, delta: f64, j1: f64, h: f64, f: (f64, f64, f64)) -> ChainSpec {
        ChainSpec::new(
            CouplingSet::new(j, delta, j1, h).unwrap(),
            ImpurityFactors::new(f.0, f.1, f.2).unwrap(),
        )
    }

    fn th(t: f64) -> Thermal {
        Thermal::new(t).unwrap()
    }

    #[test]
    fn local_operator_at_infinite_temperature() {
        let c = CouplingSet::new(1.0, 2.0, -1.0, 0.3).unwrap();
        let op = local_operator(&c, UP_DOWN, &Thermal::from_beta(0.0).unwrap(), 0.0).unwrap();
        assert_eq!(
            op,
            LocalOperator {
                r11: 1.0,
                r22: 1.0,
                r23: 0.0,
                r44: 1.0
            }
        );
    }

    #[test]
    fn local_operator_singlet_dominance() {
        let c = CouplingSet::new(1.0, 2.0, 1.0, 0.0).unwrap();
        let t = th(0.01);
        let op = local_operator(&c, UP_DOWN, &t, -2.0).unwrap();
        // E2 = -0.5 + 0.5 = 0, E3 = -1: triplet/singlet weight ratio e^-100.
        assert_relative_eq!(op.r23, -op.r22, max_relative = 1e-40);
        assert!(op.r22 > 0.0);
    }

    #[test]
    fn local_operator_identities() {
        let c = CouplingSet::new(0.8, 1.4, 0.6, 0.9).unwrap();
        let t = th(0.7);
        for s in IsingSector::ALL {
            let op = local_operator(&c, s, &t, -1.0).unwrap();
            let e = dimer_spectrum(&c, s);
            assert_relative_eq!(
                op.r22 + op.r23,
                (-(e[1] + 1.0) / 0.7).exp(),
                max_relative = 1e-14
            );
            let w = crate::model::boltzmann_factor(&c, s, &t, -1.0).unwrap();
            assert_relative_eq!(op.trace(), w, max_relative = 1e-12);
            assert!(op.r23.abs() <= op.r22);
        }
    }

    #[test]
    fn maximally_mixed_at_infinite_temperature() {
        let s = spec(1.0, 1.0, 1.0, 2.0, (0.0, 0.8, -0.8));
        let x = rdm_thermo(&s, &Thermal::from_beta(0.0).unwrap()).unwrap();
        assert_eq!(x, XState::MAXIMALLY_MIXED);
    }

    #[test]
    fn finite_ring_position_independent() {
        let s = spec(1.0, 1.3, 0.8, 0.6, (0.1, 0.8, -0.8));
        let a = rdm_finite(&s, &th(0.8), 6, 1).unwrap();
        let b = rdm_finite(&s, &th(0.8), 6, 6).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn finite_ring_converges_to_infinite() {
        let s = spec(1.0, 1.3, 1.0, 0.7, (0.0, 0.8, -0.8));
        let t = th(1.0);
        let inf = rdm_thermo(&s, &t).unwrap();
        let fin = rdm_finite(&s, &t, 30, 4).unwrap();
        assert!(fin.max_abs_diff(&inf) < 1e-8);
    }

    #[test]
    fn finite_ring_rejects_bad_indices() {
        let s = spec(1.0, 1.0, 1.0, 0.0, (0.0, 0.0, 0.0));
        assert!(matches!(
            rdm_finite(&s, &th(1.0), 1, 1),
            Err(Error::TooFewCells { .. })
        ));
        assert!(matches!(
            rdm_finite(&s, &th(1.0), 4, 0),
            Err(Error::CellIndex { .. })
        ));
        assert!(matches!(
            rdm_finite(&s, &th(1.0), 4, 5),
            Err(Error::CellIndex { .. })
        ));
    }

    #[test]
    fn zero_field_symmetry_survives_weak_sector_mixing() {
        // w+- is eight orders below w++ here, so w++ - w-- must not be
        // formed by subtraction.
        let s = ChainSpec::new(
            CouplingSet::new(-0.5044, -1.063, -1.9598, 0.0).unwrap(),
            ImpurityFactors::new(-0.4453, 0.8537, -0.671).unwrap(),
        );
        let t = Thermal::from_beta(12.805).unwrap();
        let base = rdm_thermo(&s, &t).unwrap();
        for shift in [-4.0, 2.0, 4.5] {
            let x = rdm_thermo_with_shift(&s, &t, s.ground_energy() + shift).unwrap();
            assert_eq!(x.r11, x.r44);
            assert!(x.max_abs_diff(&base) < 1e-13);
        }
    }

    #[test]
    fn opposite_sector_preferences_stay_finite() {
        // Host prefers -- while the impurity weights are dominated by ++;
        // the textbook A + B form loses every digit of M here.
        let s = spec(1.0, 0.0, 1.0, 1.0, (0.0, 0.8, -0.8));
        let x = rdm_thermo(&s, &th(0.01)).unwrap();
        x.validate().unwrap();
    }

    #[test]
    fn xstate_validation() {
        assert!(XState::new(0.25, 0.25, 0.0, 0.25).is_ok());
        assert!(XState::new(0.25, 0.25, 0.3, 0.25).is_err());
        assert!(XState::new(0.5, 0.25, 0.0, 0.25).is_err());
        assert!(XState::new(-0.1, 0.3, 0.0, 0.5).is_err());
    }

    #[test]
    fn nodal_flip_symmetry_at_zero_field() {
        let s = spec(1.0, 0.5, 1.0, 0.0, (0.2, 0.3, 0.4));
        let x = rdm_thermo(&s, &th(0.3)).unwrap();
        assert_relative_eq!(x.r11, x.r44, max_relative = 1e-12);
    }

    fn chain() -> impl Strategy<Value = ChainSpec> {
        (
            (-2.0..2.0f64, -2.0..3.0f64, -2.0..2.0f64, -2.5..2.5f64),
            (-0.9..0.9f64, -0.9..0.9f64, -0.9..0.9f64),
        )
            .prop_map(|((j, d, j1, h), f)| spec(j, d, j1, h, f))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn thermo_state_is_valid(s in chain(), t in 0.02..10.0f64) {
            let x = rdm_thermo(&s, &th(t)).unwrap();
            prop_assert!((x.trace() - 1.0).abs() < 1e-10);
            prop_assert!(x.r11 >= 0.0 && x.r44 >= 0.0 && x.r22 >= x.r23.abs());
        }

        #[test]
        fn shift_invariance(s in chain(), t in 0.2..5.0f64, shift in -10.0..10.0f64) {
            let base = rdm_thermo(&s, &th(t)).unwrap();
            let moved = rdm_thermo_with_shift(&s, &th(t), s.ground_energy() + shift).unwrap();
            prop_assert!(base.max_abs_diff(&moved) < 1e-10);
        }

        #[test]
        fn finite_converges_geometrically(s in chain(), t in 0.3..3.0f64) {
            let tt = th(t);
            let sp = TransferSpectral::build(&s, &tt).unwrap();
            let ratio = sp.eigenvalue_ratio().abs();
            prop_assume!(ratio < 0.8);
            let inf = rdm_thermo(&s, &tt).unwrap();
            let e10 = rdm_finite(&s, &tt, 10, 1).unwrap().max_abs_diff(&inf);
            let e20 = rdm_finite(&s, &tt, 20, 1).unwrap().max_abs_diff(&inf);
            prop_assert!(e20 <= e10 * ratio.powi(10) * 10.0 + 1e-13, "{} {} {}", e10, e20, ratio);
        }
    }
}
