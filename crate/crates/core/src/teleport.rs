//! Two-qubit teleportation through a pair of independent impurity-dimer
//! channels.
//!
//! The unknown input `|ψ> = cos(θ/2)|10> + e^{iφ} sin(θ/2)|01>` is sent
//! through two copies of the channel state `ρ_ch`. The standard protocol
//! (Bell measurement plus local Pauli correction) turns the channel into a
//! generalized depolarizing map with Bell weights `p_i = tr(E^i ρ_ch)`:
//!
//! ```text
//! ρ_out = Σ_{i,j} p_i p_j (σ_i ⊗ σ_j) ρ_in (σ_i ⊗ σ_j)
//! ```
//!
//! For an X-state channel the output is again an X state,
//!
//! ```text
//!     | c  0  0  0 |
//!     | 0  f  Ξ  0 |
//!     | 0  Ξ* g  0 |
//!     | 0  0  0  c |
//! ```
//!
//! which [`teleport_output`] evaluates in closed form and
//! [`teleport_oracle`] builds explicitly.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::measures::{DensityMatrix4, C64};
use crate::rdm::XState;

/// Classical limit of the average fidelity.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Input state angles, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    theta: f64,
    phi: f64,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !((0.0..=PI).contains(&theta) && (0.0..TAU).contains(&phi)) {
            return Err(Error::InputAngles { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Input concurrence `|sin θ|`.
    pub fn concurrence(&self) -> f64 {
        self.theta.sin().abs()
    }

    pub fn ket(&self) -> Vector4<C64> {
        let (s, c) = (0.5 * self.theta).sin_cos();
        Vector4::new(
            C64::new(0.0, 0.0),
            C64::from_polar(s, self.phi),
            C64::new(c, 0.0),
            C64::new(0.0, 0.0),
        )
    }

    pub fn density(&self) -> Matrix4<C64> {
        let k = self.ket();
        k * k.adjoint()
    }
}

/// Teleported state in the `(c, f, g, Ξ)` parametrisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportOutput {
    /// `<00|ρ|00> = <11|ρ|11>`.
    pub c: f64,
    /// `<01|ρ|01>`.
    pub f: f64,
    /// `<10|ρ|10>`.
    pub g: f64,
    /// `<01|ρ|10>`.
    pub xi: C64,
    pub input: InputState,
}

impl TeleportOutput {
    pub fn trace(&self) -> f64 {
        2.0 * self.c + self.f + self.g
    }

    pub fn to_matrix(&self) -> Matrix4<C64> {
        let r = |v: f64| C64::new(v, 0.0);
        let mut m = Matrix4::zeros();
        m[(0, 0)] = r(self.c);
        m[(1, 1)] = r(self.f);
        m[(2, 2)] = r(self.g);
        m[(3, 3)] = r(self.c);
        m[(1, 2)] = self.xi;
        m[(2, 1)] = self.xi.conj();
        m
    }
}

/// Closed-form output state.
pub fn teleport_output(ch: &XState, input: &InputState) -> TeleportOutput {
    let outer = ch.r11 + ch.r44;
    let (s, c) = (0.5 * input.theta).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let mid = 4.0 * ch.r22 * ch.r22;
    TeleportOutput {
        c: 2.0 * ch.r22 * outer,
        f: outer * outer * c2 + mid * s2,
        g: mid * c2 + outer * outer * s2,
        xi: C64::from_polar(2.0 * ch.r23 * ch.r23 * input.theta.sin(), input.phi),
        input: *input,
    }
}

fn ket(a: f64, b: f64, c: f64, d: f64) -> Vector4<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(a, b, c, d).map(|v| C64::new(s * v, 0.0))
}

/// Bell weights `p_i = tr(E^i ρ_ch)` for the projectors onto
/// `Ψ-`, `Φ-`, `Φ+`, `Ψ+`, paired with the corrections `1`, `σx`, `σy`, `σz`.
pub fn bell_weights(ch: &XState) -> [f64; 4] {
    let rho = DensityMatrix4::from(ch).into_inner();
    let bells = [
        ket(0.0, 1.0, -1.0, 0.0),
        ket(1.0, 0.0, 0.0, -1.0),
        ket(1.0, 0.0, 0.0, 1.0),
        ket(0.0, 1.0, 1.0, 0.0),
    ];
    bells.map(|b| (b.adjoint() * rho * b)[(0, 0)].re)
}

fn paulis() -> [Matrix2<C64>; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, z, z, o),
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// Output state built term by term from the Bell weights and Pauli
/// corrections, without using the X structure of the channel.
pub fn teleport_oracle(ch: &XState, input: &InputState) -> DensityMatrix4 {
    let p = bell_weights(ch);
    let s = paulis();
    let rho_in = input.density();
    let mut out = Matrix4::<C64>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let u = s[i].kronecker(&s[j]);
            out += (u * rho_in * u) * C64::new(p[i] * p[j], 0.0);
        }
    }
    DensityMatrix4::new(out).expect("Pauli mixture of a valid state is a valid state")
}

/// How the output concurrence is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputConcurrence {
    /// Wootters concurrence of the output state: `2 max{|Ξ| - c, 0}`.
    #[default]
    Wootters,
    /// `2 max{2ρ23² C_in - 2|ρ22| |ρ11 - ρ44|, 0}`, kept for comparison with
    /// published curves; overestimates whenever `ρ11 ρ44 > 0`.
    PrintedDifference,
}

/// Concurrence of the teleported state.
pub fn output_concurrence(ch: &XState, input: &InputState, mode: OutputConcurrence) -> f64 {
    let coherent = 2.0 * ch.r23 * ch.r23 * input.concurrence();
    let mixed = match mode {
        OutputConcurrence::Wootters => 2.0 * ch.r22 * (ch.r11 + ch.r44),
        OutputConcurrence::PrintedDifference => 2.0 * ch.r22.abs() * (ch.r11 - ch.r44).abs(),
    };
    (2.0 * (coherent - mixed)).clamp(0.0, 1.0)
}

/// `F = <ψ_in|ρ_out|ψ_in>`.
pub fn fidelity(ch: &XState, input: &InputState) -> f64 {
    let outer = ch.r11 + ch.r44;
    let mid = 4.0 * ch.r22 * ch.r22;
    let s = input.theta.sin();
    0.5 * s * s * (outer * outer + 4.0 * ch.r23 * ch.r23 - mid) + mid
}

/// Average fidelity over the input sphere and its population/coherence split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageFidelity {
    pub f_a: f64,
    /// Part carried by the channel populations.
    pub f_p: f64,
    /// Part carried by the channel coherence, `(4/3) ρ23²`.
    pub f_c: f64,
}

impl AverageFidelity {
    /// Whether the channel beats every classical protocol (`F_A > 2/3`).
    pub fn beats_classical(&self) -> bool {
        self.f_a > CLASSICAL_FIDELITY
    }
}

pub fn average_fidelity(ch: &XState) -> AverageFidelity {
    let outer = ch.r11 + ch.r44;
    let r22sq = ch.r22 * ch.r22;
    let r23sq = ch.r23 * ch.r23;
    let f_p = (outer * outer + 8.0 * r22sq) / 3.0;
    let f_c = 4.0 * r23sq / 3.0;
    AverageFidelity {
        f_a: f_p + f_c,
        f_p,
        f_c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::concurrence_general;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn input(theta: f64, phi: f64) -> InputState {
        InputState::new(theta, phi).unwrap()
    }

    #[test]
    fn maximally_mixed_channel_depolarizes_fully() {
        let out = teleport_output(&XState::MAXIMALLY_MIXED, &input(1.1, 4.0));
        assert_eq!((out.c, out.f, out.g), (0.25, 0.25, 0.25));
        assert_eq!(out.xi.norm(), 0.0);
        for p in bell_weights(&XState::MAXIMALLY_MIXED) {
            assert_relative_eq!(p, 0.25, epsilon = 1e-15);
        }
        assert_eq!(
            output_concurrence(
                &XState::MAXIMALLY_MIXED,
                &input(FRAC_PI_2, 0.0),
                OutputConcurrence::Wootters
            ),
            0.0
        );
        assert_relative_eq!(
            fidelity(&XState::MAXIMALLY_MIXED, &input(FRAC_PI_2, 0.0)),
            0.25
        );
        let avg = average_fidelity(&XState::MAXIMALLY_MIXED);
        assert_relative_eq!(avg.f_a, 0.25);
        assert_relative_eq!(avg.f_p, 0.25);
        assert_eq!(avg.f_c, 0.0);
    }

    #[test]
    fn singlet_channel_is_perfect() {
        let inp = input(FRAC_PI_2, 0.0);
        let out = teleport_output(&XState::SINGLET, &inp);
        assert_eq!(out.c, 0.0);
        assert_relative_eq!(out.f, 0.5, epsilon = 1e-15);
        assert_relative_eq!(out.g, 0.5, epsilon = 1e-15);
        assert_relative_eq!(out.xi.re, 0.5, epsilon = 1e-15);
        let diff = out.to_matrix() - inp.density();
        assert!(diff.norm() < 1e-15);
        assert_relative_eq!(
            output_concurrence(&XState::SINGLET, &inp, OutputConcurrence::Wootters),
            1.0
        );
        assert_relative_eq!(fidelity(&XState::SINGLET, &input(0.0, 0.0)), 1.0);
        let p = bell_weights(&XState::SINGLET);
        assert_relative_eq!(p[0], 1.0, epsilon = 1e-15);
        assert!(p[1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn bell_channels_give_unit_average_fidelity() {
        assert_eq!(average_fidelity(&XState::SINGLET).f_a, 1.0);
        assert_eq!(average_fidelity(&XState::TRIPLET_ZERO).f_a, 1.0);
        assert!(average_fidelity(&XState::SINGLET).beats_classical());
    }

    #[test]
    fn printed_variant_differs_when_both_poles_populated() {
        let ch = XState::new(0.1, 0.35, -0.3, 0.2).unwrap();
        let inp = input(FRAC_PI_2, 0.0);
        let w = output_concurrence(&ch, &inp, OutputConcurrence::Wootters);
        let p = output_concurrence(&ch, &inp, OutputConcurrence::PrintedDifference);
        assert!(p > w);
    }

    #[test]
    fn input_angles_validated() {
        assert!(InputState::new(-0.1, 0.0).is_err());
        assert!(InputState::new(3.2, 0.0).is_err());
        assert!(InputState::new(1.0, TAU).is_err());
        assert_relative_eq!(input(FRAC_PI_2, 1.0).concurrence(), 1.0);
    }

    #[test]
    fn classical_threshold_uses_strict_comparison() {
        let at = AverageFidelity {
            f_a: CLASSICAL_FIDELITY,
            f_p: 0.0,
            f_c: 0.0,
        };
        assert!(!at.beats_classical());
        let above = AverageFidelity {
            f_a: f64::from_bits(CLASSICAL_FIDELITY.to_bits() + 1),
            f_p: 0.0,
            f_c: 0.0,
        };
        assert!(above.beats_classical());
    }

    fn channel() -> impl Strategy<Value = XState> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, m, f)| {
            let r11 = m * a;
            let r44 = m * (1.0 - a) * b;
            let r22 = 0.5 * (1.0 - r11 - r44);
            XState {
                r11,
                r22,
                r23: f * r22,
                r44,
            }
        })
    }

    fn angles() -> impl Strategy<Value = InputState> {
        (0.0..=PI, 0.0..TAU).prop_map(|(t, p)| input(t, p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn closed_form_matches_oracle(ch in channel(), inp in angles()) {
            let closed = teleport_output(&ch, &inp);
            let oracle = teleport_oracle(&ch, &inp);
            let diff = (closed.to_matrix() - oracle.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            prop_assert!(diff < 1e-12, "diff {}", diff);
            prop_assert!((closed.trace() - 1.0).abs() < 1e-10);
            prop_assert!(closed.xi.norm() <= (closed.f * closed.g).sqrt() + 1e-10);
        }

        #[test]
        fn bell_weights_sum_to_one(ch in channel()) {
            let p = bell_weights(&ch);
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert!((p[0] - (ch.r22 - ch.r23)).abs() < 1e-15);
            prop_assert!((p[3] - (ch.r22 + ch.r23)).abs() < 1e-15);
            prop_assert!((p[1] - 0.5 * (ch.r11 + ch.r44)).abs() < 1e-15);
            prop_assert!((p[2] - p[1]).abs() < 1e-15);
        }

        #[test]
        fn output_concurrence_matches_wootters(ch in channel(), inp in angles()) {
            let closed = output_concurrence(&ch, &inp, OutputConcurrence::Wootters);
            let general = concurrence_general(&teleport_oracle(&ch, &inp));
            prop_assert!((closed - general).abs() < 1e-10, "{} vs {}", closed, general);
        }

        #[test]
        fn fidelity_matches_quadratic_form(ch in channel(), inp in angles()) {
            let k = inp.ket();
            let direct = (k.adjoint() * teleport_oracle(&ch, &inp).matrix() * k)[(0, 0)].re;
            prop_assert!((fidelity(&ch, &inp) - direct).abs() < 1e-12);
        }

        #[test]
        fn phase_does_not_matter(ch in channel(), theta in 0.0..=PI, p1 in 0.0..TAU, p2 in 0.0..TAU) {
            let a = input(theta, p1);
            let b = input(theta, p2);
            prop_assert_eq!(fidelity(&ch, &a), fidelity(&ch, &b));
            let ca = output_concurrence(&ch, &a, OutputConcurrence::Wootters);
            let cb = output_concurrence(&ch, &b, OutputConcurrence::Wootters);
            prop_assert_eq!(ca, cb);
        }

        #[test]
        fn decomposition_is_exact(ch in channel()) {
            let avg = average_fidelity(&ch);
            let outer = ch.r11 + ch.r44;
            let closed = (outer * outer + 4.0 * ch.r23 * ch.r23 - 4.0 * ch.r22 * ch.r22) / 3.0
                + 4.0 * ch.r22 * ch.r22;
            prop_assert!((avg.f_a - closed).abs() <= 4.0 * f64::EPSILON);
            prop_assert!((avg.f_p + avg.f_c - avg.f_a).abs() == 0.0);
        }
    }
}
