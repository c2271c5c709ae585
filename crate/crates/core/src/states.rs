//! Bell-diagonal parametrization and validated two-qubit density matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, pauli, ComplexMatrix, HERMITIAN_TOL, PSD_TOL};

/// Slack allowed on the Bell-basis weights before a triple is called unphysical.
pub const PHYSICALITY_TOL: f64 = 1e-12;
/// Tolerance on `Tr ρ = 1` for [`TwoQubitState`].
pub const STATE_TRACE_TOL: f64 = 1e-12;
/// Largest non-Bell correlator tolerated by [`matrix_to_bell_diagonal`].
pub const BELL_STRUCTURE_TOL: f64 = 1e-10;

/// Correlation triple `(c₁, c₂, c₃)` of `ρ = (I⊗I + Σ cᵢ σⁱ⊗σⁱ)/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BellDiagonalParams {
    c: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl TryFrom<RawParams> for BellDiagonalParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.c1, raw.c2, raw.c3)
    }
}

impl From<BellDiagonalParams> for RawParams {
    fn from(p: BellDiagonalParams) -> Self {
        RawParams {
            c1: p.c[0],
            c2: p.c[1],
            c3: p.c[2],
        }
    }
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v.abs() > 1.0 + PHYSICALITY_TOL {
                return Err(Error::Range {
                    name,
                    value: v,
                    interval: "[-1, 1]",
                });
            }
        }
        let params = Self { c: [c1, c2, c3] };
        let weights = params.bell_weights();
        if let Some((i, &w)) = weights.iter().enumerate().find(|(_, &w)| w < -PHYSICALITY_TOL) {
            return Err(Error::Validation(format!(
                "unphysical correlations ({c1}, {c2}, {c3}): lambda{} = {w:e} < 0",
                i + 1
            )));
        }
        Ok(params)
    }

    /// Skips validation; callers guarantee physicality (e.g. channel images
    /// of physical triples).
    pub(crate) fn new_unchecked(c: [f64; 3]) -> Self {
        Self { c }
    }

    pub fn c1(&self) -> f64 {
        self.c[0]
    }

    pub fn c2(&self) -> f64 {
        self.c[1]
    }

    pub fn c3(&self) -> f64 {
        self.c[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.c
    }

    /// Weights `λ₁..λ₄` on `|φ₁⟩..|φ₄⟩` where `|φ₁,₃⟩ = (|00⟩ ± |11⟩)/√2` and
    /// `|φ₂,₄⟩ = (|01⟩ ± |10⟩)/√2`.
    pub fn bell_weights(&self) -> [f64; 4] {
        let [c1, c2, c3] = self.c;
        [
            0.25 * (1.0 + c1 - c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3),
            0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 - c1 - c2 - c3),
        ]
    }

    /// Permutes the correlators; the output is physical whenever the input is.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        Self::new_unchecked([self.c[order[0]], self.c[order[1]], self.c[order[2]]])
    }
}

/// `(c₊, c₋, c₃)` with `|c₊| ≥ |c₋|` drawn from `{c₁, c₂}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedCorrelations {
    pub c_plus: f64,
    pub c_minus: f64,
    pub c3: f64,
}

/// Orders `(c₁, c₂)` by magnitude; on a tie `c₁` becomes `c₊`.
pub fn order_correlations(params: &BellDiagonalParams) -> OrderedCorrelations {
    let [c1, c2, c3] = params.as_array();
    let (c_plus, c_minus) = if c1.abs() >= c2.abs() { (c1, c2) } else { (c2, c1) };
    OrderedCorrelations { c_plus, c_minus, c3 }
}

/// Hermitian, unit-trace, positive semi-definite 4×4 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

impl TwoQubitState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::Validation(format!(
                "two-qubit state must be 4x4, got {0}x{0}",
                matrix.dim()
            )));
        }
        if matrix.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("state has non-finite entries".into()));
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Validation(format!(
                "state is not Hermitian (defect {:e})",
                matrix.hermitian_defect()
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
            return Err(Error::Validation(format!("state has trace {tr}, expected 1")));
        }
        let lowest = linalg::eigvalsh(&matrix)[3];
        if lowest < -PSD_TOL {
            return Err(Error::Validation(format!("state has negative eigenvalue {lowest:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix produced by a trace- and positivity-preserving map.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.dim() == 4);
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Pauli correlator `Tr[ρ (σⁱ⊗σʲ)]`, with index 0 the identity.
    pub fn correlator(&self, i: usize, j: usize) -> f64 {
        let op = kron(&pauli::sigma(i), &pauli::sigma(j));
        // Tr[ρ P] = Σ_ab ρ_ab P_ba
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                acc += self.matrix[(a, b)] * op[(b, a)];
            }
        }
        acc.re
    }
}

/// `ρ = (I⊗I + Σ cᵢ σⁱ⊗σⁱ)/4`.
pub fn bell_diagonal_to_matrix(params: &BellDiagonalParams) -> TwoQubitState {
    let mut m = ComplexMatrix::identity(4);
    for (i, &ci) in params.as_array().iter().enumerate() {
        let s = pauli::sigma(i + 1);
        m = &m + &kron(&s, &s).scale(ci);
    }
    TwoQubitState::from_trusted(m.scale(0.25))
}

const PAULI_LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Recovers `(c₁, c₂, c₃) = Tr[ρ σⁱ⊗σⁱ]` from a Bell-diagonal state.
///
/// Every other Pauli correlator must vanish to within [`BELL_STRUCTURE_TOL`].
pub fn matrix_to_bell_diagonal(state: &TwoQubitState) -> Result<BellDiagonalParams> {
    let mut offending = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if (i == 0 && j == 0) || (i == j) {
                continue;
            }
            let v = state.correlator(i, j);
            if v.abs() > BELL_STRUCTURE_TOL {
                offending.push((format!("{}{}", PAULI_LABELS[i], PAULI_LABELS[j]), v));
            }
        }
    }
    if !offending.is_empty() {
        return Err(Error::NotBellDiagonal { offending });
    }
    BellDiagonalParams::new(state.correlator(1, 1), state.correlator(2, 2), state.correlator(3, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, partial_trace, Subsystem};

    #[test]
    fn zero_correlations_give_maximally_mixed_state() {
        let s = bell_diagonal_to_matrix(&BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap());
        assert!(s.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-16);
    }

    #[test]
    fn pure_bell_state_phi1() {
        let s = bell_diagonal_to_matrix(&BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let phi1 = ComplexMatrix::outer(&[Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]);
        assert!(s.matrix().max_abs_diff(&phi1) < 1e-15);
    }

    #[test]
    fn spectrum_of_reference_state() {
        let p = BellDiagonalParams::new(0.9, -0.36, 0.4).unwrap();
        let s = bell_diagonal_to_matrix(&p);
        assert!(s.matrix().is_x_shaped());
        let eig = eig_hermitian(s.matrix()).unwrap().eigenvalues;
        let expected = [0.665, 0.285, 0.035, 0.015];
        for (got, want) in eig.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let mut w = p.bell_weights().to_vec();
        w.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in w.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn unphysical_triple_names_negative_weight() {
        let err = BellDiagonalParams::new(1.0, 1.0, 1.0).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("lambda4"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            BellDiagonalParams::new(1.5, 0.0, 0.0),
            Err(Error::Range { name: "c1", .. })
        ));
        assert!(BellDiagonalParams::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn inverse_map_examples() {
        let mixed = TwoQubitState::new(ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(matrix_to_bell_diagonal(&mixed).unwrap().as_array(), [0.0, 0.0, 0.0]);

        // |φ₂⟩ = (|01⟩ + |10⟩)/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let phi2 = ComplexMatrix::outer(&[z, Complex64::new(h, 0.0), Complex64::new(h, 0.0), z]);
        let p = matrix_to_bell_diagonal(&TwoQubitState::new(phi2).unwrap()).unwrap();
        for (got, want) in p.as_array().iter().zip([1.0, 1.0, -1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_map_rejects_non_bell_structure() {
        let m = kron(
            &ComplexMatrix::from_real_diagonal(&[0.8, 0.2]),
            &ComplexMatrix::identity(2).scale(0.5),
        );
        let err = matrix_to_bell_diagonal(&TwoQubitState::new(m).unwrap()).unwrap_err();
        match err {
            Error::NotBellDiagonal { offending } => {
                assert_eq!(offending.len(), 1);
                assert_eq!(offending[0].0, "ZI");
                assert!((offending[0].1 - 0.6).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ordering_examples() {
        let o = order_correlations(&BellDiagonalParams::new(0.8, 0.3, -0.45).unwrap());
        assert_eq!((o.c_plus, o.c_minus, o.c3), (0.8, 0.3, -0.45));
        let o = order_correlations(&BellDiagonalParams::new(0.8, -0.45, 0.3).unwrap());
        assert_eq!((o.c_plus, o.c_minus), (0.8, -0.45));
        let o = order_correlations(&BellDiagonalParams::new(0.3, -0.6, 0.1).unwrap());
        assert_eq!((o.c_plus, o.c_minus), (-0.6, 0.3));
        // tie with λ₄ < 0: ordering is pure arithmetic, so skip validation
        let o = order_correlations(&BellDiagonalParams::new_unchecked([0.5, 0.5, 0.1]));
        assert_eq!((o.c_plus, o.c_minus), (0.5, 0.5));
        assert!(BellDiagonalParams::new(0.5, 0.5, 0.1).is_err());
        let o = order_correlations(&BellDiagonalParams::new(0.5, -0.5, 0.1).unwrap());
        assert_eq!((o.c_plus, o.c_minus), (0.5, -0.5));
    }

    #[test]
    fn state_validation_errors() {
        assert!(TwoQubitState::new(ComplexMatrix::identity(2).scale(0.5)).is_err());
        assert!(TwoQubitState::new(ComplexMatrix::identity(4)).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.2, -0.2, 0.0, 0.0]);
        assert!(TwoQubitState::new(neg).is_err());
    }

    #[test]
    fn marginals_of_bell_diagonal_are_maximally_mixed() {
        let s = bell_diagonal_to_matrix(&BellDiagonalParams::new(0.3, -0.2, 0.5).unwrap());
        for side in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(s.matrix(), side).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        }
    }

    #[test]
    fn params_deserialize_with_validation() {
        let p: BellDiagonalParams = serde_json::from_str(r#"{"c1":0.9,"c2":-0.36,"c3":0.4}"#).unwrap();
        assert_eq!(p.as_array(), [0.9, -0.36, 0.4]);
        assert!(serde_json::from_str::<BellDiagonalParams>(r#"{"c1":1,"c2":1,"c3":1}"#).is_err());
    }
}
