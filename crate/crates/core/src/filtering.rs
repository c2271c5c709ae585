//! Single-sided local filtering `ρ ↦ (F⊗I)ρ(F⊗I) / Tr[·]` with
//! `F = √(1-k)|0⟩⟨0| + √k|1⟩⟨1|`.
//!
//! The bare filter is not trace preserving: on a Bell-diagonal input the
//! output trace is 1/2. Every state returned here is renormalized.

use crate::error::{Error, Result};
use crate::linalg::{self, kron, pauli, ComplexMatrix};
use crate::states::{bell_diagonal_to_matrix, BellDiagonalParams, OrderedCorrelations, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSetting {
    k: f64,
    q: f64,
}

impl FilterSetting {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Range {
                name: "k",
                value: k,
                interval: "(0, 1)",
            });
        }
        let s = 1.0 - 2.0 * k;
        Ok(Self { k, q: s * s })
    }

    /// The `k ≤ 1/2` setting with `(1-2k)² = q`.
    pub fn from_q(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::Range {
                name: "q",
                value: q,
                interval: "[0, 1)",
            });
        }
        Self::new(0.5 * (1.0 - q.sqrt()))
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `q = (1-2k)²`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `1 - 2k`, the Bloch length of the filtered A-marginal.
    pub fn bias(&self) -> f64 {
        1.0 - 2.0 * self.k
    }

    /// `F` in the computational basis.
    pub fn operator(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[(1.0 - self.k).sqrt(), self.k.sqrt()])
    }

    /// `F` diagonal in the eigenbasis of `σ^axis` (axis 1, 2 or 3), weighting
    /// the +1 eigenvector by `√(1-k)`. Axis 3 reproduces [`Self::operator`].
    pub fn operator_along(&self, axis: usize) -> ComplexMatrix {
        let half_sum = 0.5 * ((1.0 - self.k).sqrt() + self.k.sqrt());
        let half_diff = 0.5 * ((1.0 - self.k).sqrt() - self.k.sqrt());
        &pauli::identity().scale(half_sum) + &pauli::sigma(axis).scale(half_diff)
    }
}

fn filter_with(op: &ComplexMatrix, state: &TwoQubitState) -> Result<TwoQubitState> {
    let local = kron(op, &pauli::identity());
    let out = state.matrix().conjugate_by(&local);
    let tr = out.trace().re;
    // NaN must fail too
    if tr.is_nan() || tr <= 1e-300 {
        return Err(Error::DegenerateFilter { trace: tr });
    }
    Ok(TwoQubitState::from_trusted(out.scale(1.0 / tr)))
}

/// Filters qubit A and renormalizes.
pub fn apply_filter(setting: &FilterSetting, state: &TwoQubitState) -> Result<TwoQubitState> {
    filter_with(&setting.operator(), state)
}

/// Like [`apply_filter`] but with the filter diagonal along `σ^axis`.
pub fn apply_filter_along(setting: &FilterSetting, axis: usize, state: &TwoQubitState) -> Result<TwoQubitState> {
    filter_with(&setting.operator_along(axis), state)
}

/// Spectral and correlation ingredients of a filtered Bell-diagonal state.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredStateTerms {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// Eigenvalues of the normalized filtered matrix, descending.
    pub lambdas: [f64; 4],
}

/// Filtered normalized state of the Bell-diagonal state with correlators
/// `(c₊, c₋, c₃)`; swapping `c₁` and `c₂` leaves the spectrum unchanged.
pub fn filtered_state(setting: &FilterSetting, ordered: &OrderedCorrelations) -> Result<TwoQubitState> {
    let params = BellDiagonalParams::new_unchecked([ordered.c_plus, ordered.c_minus, ordered.c3]);
    apply_filter(setting, &bell_diagonal_to_matrix(&params))
}

pub fn filtered_terms(setting: &FilterSetting, ordered: &OrderedCorrelations) -> FilteredStateTerms {
    let q = setting.q();
    let kk = 4.0 * setting.k() * (1.0 - setting.k());
    let (cp, cm, c3) = (ordered.c_plus, ordered.c_minus, ordered.c3);
    let theta = cp.abs().max(c3.abs());
    let spectrum = filtered_state(setting, ordered)
        .map(|s| linalg::eigvalsh(s.matrix()))
        .expect("Bell-diagonal input has A-marginal I/2, so the filtered trace is 1/2");
    FilteredStateTerms {
        alpha: (q + kk * cp * cp).sqrt(),
        beta: (c3 * c3 * q + kk * theta * theta).sqrt(),
        theta,
        a1: (1.0 - q) * cp * cp,
        a2: (1.0 - q) * cm * cm + q,
        a3: c3 * c3,
        lambdas: [spectrum[0], spectrum[1], spectrum[2], spectrum[3]],
    }
}

/// Computational-basis diagonal of the filtered A-marginal, `(1-k, k)`.
pub fn filtered_marginal_a(setting: &FilterSetting) -> [f64; 2] {
    [1.0 - setting.k(), setting.k()]
}
