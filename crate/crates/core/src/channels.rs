//! Phase-, bit- and bit-phase-flip channels acting identically on both qubits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, ComplexMatrix};
use crate::states::{BellDiagonalParams, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    #[serde(rename = "PF")]
    PhaseFlip,
    #[serde(rename = "BF")]
    BitFlip,
    #[serde(rename = "BPF")]
    BitPhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [Self::PhaseFlip, Self::BitFlip, Self::BitPhaseFlip];

    /// Index (1, 2 or 3) of the Pauli operator the channel applies.
    pub fn pauli_axis(self) -> usize {
        match self {
            Self::PhaseFlip => 3,
            Self::BitFlip => 1,
            Self::BitPhaseFlip => 2,
        }
    }

    /// Correlator order that maps this channel onto the phase-flip frame:
    /// the correlator left untouched by the channel moves to slot 3.
    pub fn phase_flip_frame(self) -> [usize; 3] {
        match self {
            Self::PhaseFlip => [0, 1, 2],
            Self::BitFlip => [2, 1, 0],
            Self::BitPhaseFlip => [0, 2, 1],
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Self::PhaseFlip => "PF",
            Self::BitFlip => "BF",
            Self::BitPhaseFlip => "BPF",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PF" | "PHASEFLIP" | "PHASE_FLIP" => Ok(Self::PhaseFlip),
            "BF" | "BITFLIP" | "BIT_FLIP" => Ok(Self::BitFlip),
            "BPF" | "BITPHASEFLIP" | "BIT_PHASE_FLIP" => Ok(Self::BitPhaseFlip),
            _ => Err(Error::Validation(format!("unknown channel '{s}'"))),
        }
    }
}

fn check_strength(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Range {
            name: "p",
            value: p,
            interval: "[0, 1]",
        })
    }
}

/// Single-qubit Kraus operators `E₁ = √(1-p/2) I`, `E₂ = √(p/2) σ`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kind: ChannelKind,
    p: f64,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        check_strength(p)?;
        let operators = vec![
            pauli::identity().scale((1.0 - 0.5 * p).sqrt()),
            pauli::sigma(kind.pauli_axis()).scale((0.5 * p).sqrt()),
        ];
        Ok(Self { kind, p, operators })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.p
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `Σ E_k† E_k`, which equals the identity for a trace-preserving channel.
    pub fn completeness(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(2), |acc, e| &acc + &(&e.adjoint() * e))
    }
}

/// `Σ_{ij} (E_i⊗E_j) ρ (E_i⊗E_j)†`.
pub fn apply_two_sided(channel: &KrausChannel, state: &TwoQubitState) -> TwoQubitState {
    let rho = state.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for ei in channel.operators() {
        for ej in channel.operators() {
            let k = kron(ei, ej);
            out = &out + &rho.conjugate_by(&k);
        }
    }
    TwoQubitState::from_trusted(out)
}

/// The factor `(1-p)²` by which decaying correlators shrink.
pub fn decay_factor(p: f64) -> f64 {
    (1.0 - p) * (1.0 - p)
}

/// Closed-form correlator flow under a two-sided flip channel.
pub fn evolve_params(kind: ChannelKind, p: f64, params: &BellDiagonalParams) -> Result<BellDiagonalParams> {
    check_strength(p)?;
    let d = decay_factor(p);
    let mut c = params.as_array();
    let kept = kind.pauli_axis() - 1;
    for (i, ci) in c.iter_mut().enumerate() {
        if i != kept {
            *ci *= d;
        }
    }
    Ok(BellDiagonalParams::new_unchecked(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_diagonal_to_matrix, matrix_to_bell_diagonal};

    fn reference() -> BellDiagonalParams {
        BellDiagonalParams::new(0.9, -0.36, 0.4).unwrap()
    }

    fn assert_params(got: BellDiagonalParams, want: [f64; 3], tol: f64) {
        for (g, w) in got.as_array().iter().zip(want) {
            assert!((g - w).abs() < tol, "{:?} vs {want:?}", got.as_array());
        }
    }

    #[test]
    fn kraus_sets_are_complete() {
        for kind in ChannelKind::ALL {
            for p in [0.0, 0.3, 1.0] {
                let ch = KrausChannel::new(kind, p).unwrap();
                assert!(ch.completeness().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
            }
        }
    }

    #[test]
    fn zero_strength_is_identity() {
        let s = bell_diagonal_to_matrix(&reference());
        let out = apply_two_sided(&KrausChannel::new(ChannelKind::PhaseFlip, 0.0).unwrap(), &s);
        assert!(out.matrix().max_abs_diff(s.matrix()) < 1e-16);
    }

    #[test]
    fn full_phase_flip_kills_transverse_correlators() {
        let s = bell_diagonal_to_matrix(&reference());
        let out = apply_two_sided(&KrausChannel::new(ChannelKind::PhaseFlip, 1.0).unwrap(), &s);
        assert_params(matrix_to_bell_diagonal(&out).unwrap(), [0.0, 0.0, 0.4], 1e-15);
    }

    #[test]
    fn half_bit_flip() {
        let s = bell_diagonal_to_matrix(&reference());
        let out = apply_two_sided(&KrausChannel::new(ChannelKind::BitFlip, 0.5).unwrap(), &s);
        assert_params(matrix_to_bell_diagonal(&out).unwrap(), [0.9, -0.09, 0.1], 1e-15);
    }

    #[test]
    fn half_phase_flip_matches_table_flow() {
        let s = bell_diagonal_to_matrix(&reference());
        let out = apply_two_sided(&KrausChannel::new(ChannelKind::PhaseFlip, 0.5).unwrap(), &s);
        assert_params(matrix_to_bell_diagonal(&out).unwrap(), [0.225, -0.09, 0.4], 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let p = evolve_params(ChannelKind::PhaseFlip, 1.0 / 3.0, &reference()).unwrap();
        assert_params(p, [0.4, -0.16, 0.4], 1e-15);
        for kind in ChannelKind::ALL {
            assert_eq!(evolve_params(kind, 0.0, &reference()).unwrap(), reference());
        }
        let p = evolve_params(ChannelKind::BitPhaseFlip, 1.0, &reference()).unwrap();
        assert_params(p, [0.0, -0.36, 0.0], 1e-300);
    }

    #[test]
    fn strength_out_of_range() {
        assert!(matches!(
            evolve_params(ChannelKind::PhaseFlip, 1.5, &reference()),
            Err(Error::Range { name: "p", .. })
        ));
        assert!(KrausChannel::new(ChannelKind::BitFlip, -0.1).is_err());
    }

    #[test]
    fn semigroup_in_decay_factor() {
        let (p1, p2) = (0.2, 0.35);
        // (1-p)² = (1-p1)²(1-p2)²  ⇒  p = 1 - (1-p1)(1-p2)
        let combined = 1.0 - (1.0 - p1) * (1.0 - p2);
        for kind in ChannelKind::ALL {
            let two = evolve_params(kind, p2, &evolve_params(kind, p1, &reference()).unwrap()).unwrap();
            let one = evolve_params(kind, combined, &reference()).unwrap();
            assert_params(two, one.as_array(), 1e-12);
        }
    }

    #[test]
    fn channel_names_parse() {
        assert_eq!("pf".parse::<ChannelKind>().unwrap(), ChannelKind::PhaseFlip);
        assert_eq!("BPF".parse::<ChannelKind>().unwrap(), ChannelKind::BitPhaseFlip);
        assert!("AD".parse::<ChannelKind>().is_err());
    }
}
