//! Quantum discord and one-norm geometric quantum discord.
//!
//! Closed forms cover Bell-diagonal states and their filtered X-state
//! images; [`oracle`] holds the brute-force optimizers used to check them.

pub mod oracle;

use serde::Serialize;

use crate::error::Result;
use crate::filtering::{filtered_terms, FilterSetting};
use crate::linalg::{self, binary_entropy, entropy_of_spectrum, partial_trace, Subsystem};
use crate::states::{order_correlations, BellDiagonalParams, OrderedCorrelations, TwoQubitState};

pub use oracle::{discord_oracle, one_norm_oracle, DiscordOracle, OracleOutcome, TraceNormOracle};

/// Mutual information, classical correlation and discord, all in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordBreakdown {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    /// `max{|c₁|, |c₂|, |c₃|}` of the (unfiltered) correlators used.
    pub theta: f64,
}

impl DiscordBreakdown {
    fn new(mutual_information: f64, classical_correlation: f64, theta: f64) -> Self {
        Self {
            mutual_information,
            classical_correlation,
            discord: mutual_information - classical_correlation,
            theta,
        }
    }
}

/// `I = S(ρ_A) + S(ρ_B) - S(ρ)` by explicit diagonalization.
pub fn mutual_information(state: &TwoQubitState) -> Result<f64> {
    let rho = state.matrix();
    let sa = linalg::von_neumann_entropy(&partial_trace(rho, Subsystem::B)?)?;
    let sb = linalg::von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let sab = entropy_of_spectrum(&linalg::eigvalsh(rho));
    Ok(sa + sb - sab)
}

/// `I = 2 + Σ λᵢ log₂ λᵢ` for a Bell-diagonal state.
pub fn mutual_information_bd(params: &BellDiagonalParams) -> f64 {
    2.0 - entropy_of_spectrum(&params.bell_weights())
}

fn max_correlator(params: &BellDiagonalParams) -> f64 {
    params.as_array().iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

/// `C = 1 - h((1+θ)/2)` with `θ = max |cᵢ|`.
pub fn classical_correlation_bd(params: &BellDiagonalParams) -> f64 {
    1.0 - binary_entropy(0.5 * (1.0 + max_correlator(params)))
}

pub fn discord_bd(params: &BellDiagonalParams) -> DiscordBreakdown {
    DiscordBreakdown::new(
        mutual_information_bd(params),
        classical_correlation_bd(params),
        max_correlator(params),
    )
}

/// Discord level on the freezing plateau:
/// `Σ_{±} (1 ± c₃)/2 · log₂(1 ± c₃)`, equal to `1 - h((1+c₃)/2)`.
pub fn frozen_discord(c3: f64) -> f64 {
    [1.0 + c3, 1.0 - c3]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| 0.5 * x * x.log2())
        .sum()
}

/// Discord of the normalized filtered state `(F⊗I)ρ(F⊗I)/Tr`.
///
/// Marginal entropies use `ρ_A = diag(1-k, k)` and `ρ_B` with Bloch length
/// `(1-2k)c₃`; the joint spectrum comes from diagonalizing the filtered
/// matrix. The classical part optimizes over the two candidate measurement
/// axes through `β = √(c₃²q + 4k(1-k)θ²)`.
pub fn discord_filtered(setting: &FilterSetting, params: &BellDiagonalParams) -> DiscordBreakdown {
    let ordered = order_correlations(params);
    let terms = filtered_terms(setting, &ordered);
    let k = setting.k();
    let s_a = binary_entropy(1.0 - k);
    let s_b = binary_entropy(0.5 * (1.0 + setting.bias() * params.c3()));
    let s_ab = entropy_of_spectrum(&terms.lambdas);
    let mutual = s_a + s_b - s_ab;
    let classical = s_b - binary_entropy(0.5 * (1.0 + terms.beta.min(1.0)));
    DiscordBreakdown::new(mutual, classical, max_correlator(params))
}

/// Which term realizes the one-norm geometric discord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GqdBranch {
    /// `½|c₊|` unfiltered, `½√(1-q)|c₊|` filtered.
    CPlus,
    /// `½|c₋|` (unfiltered only).
    CMinus,
    /// The frozen value `½|c₃|`.
    C3,
    /// The filtered interpolating term `½ f(k, p)`.
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneNormResult {
    pub value: f64,
    pub branch: GqdBranch,
}

/// `½ · middle{|c₁|, |c₂|, |c₃|}`; `C3` wins ties.
pub fn one_norm_gqd_bd(params: &BellDiagonalParams) -> OneNormResult {
    let o = order_correlations(params);
    let (p, m, z) = (o.c_plus.abs(), o.c_minus.abs(), o.c3.abs());
    let (value, branch) = if m <= z && z <= p {
        (z, GqdBranch::C3)
    } else if z > p {
        (p, GqdBranch::CPlus)
    } else {
        (m, GqdBranch::CMinus)
    };
    OneNormResult {
        value: 0.5 * value,
        branch,
    }
}

/// `(a₁, a₂, a₃)` of the filtered X state.
pub fn x_state_terms(q: f64, ordered: &OrderedCorrelations) -> (f64, f64, f64) {
    let (cp, cm, c3) = (ordered.c_plus, ordered.c_minus, ordered.c3);
    ((1.0 - q) * cp * cp, (1.0 - q) * cm * cm + q, c3 * c3)
}

/// Denominators closer to zero than this fall back to the branch value.
pub const GQD_DENOMINATOR_TOL: f64 = 1e-10;

/// Active branch of the filtered one-norm discord, read off from the
/// ordering of `a₁`, `a₂`, `a₃`.
pub fn gqd_filtered_branch(q: f64, ordered: &OrderedCorrelations) -> GqdBranch {
    let (a1, a2, a3) = x_state_terms(q, ordered);
    if a3 > a1 {
        GqdBranch::CPlus
    } else if a2 <= a3 {
        GqdBranch::C3
    } else if q == 0.0 {
        GqdBranch::CMinus
    } else {
        GqdBranch::F
    }
}

/// Value of a filtered branch expression at the given correlators.
pub fn gqd_branch_value(branch: GqdBranch, q: f64, ordered: &OrderedCorrelations) -> f64 {
    let (a1, a2, a3) = x_state_terms(q, ordered);
    0.5 * match branch {
        GqdBranch::CPlus => a1.sqrt(),
        GqdBranch::CMinus => (a2 - q).max(0.0).sqrt(),
        GqdBranch::C3 => a3.sqrt(),
        GqdBranch::F => ((a1 * a2 - (a2 - q) * a3) / (a1 - a3 + q)).max(0.0).sqrt(),
    }
}

/// Raw quotient form; `None` when the denominator is within
/// [`GQD_DENOMINATOR_TOL`] of zero.
pub fn gqd_filtered_quotient(q: f64, ordered: &OrderedCorrelations) -> Option<f64> {
    let (a1, a2, a3) = x_state_terms(q, ordered);
    let hi = a3.max(a2);
    let lo = a3.min(a1);
    let den = hi - lo + a1 - (a2 - q);
    if den.abs() < GQD_DENOMINATOR_TOL {
        return None;
    }
    let num = a1 * hi - (a2 - q) * lo;
    Some(0.5 * (num / den).max(0.0).sqrt())
}

/// One-norm geometric discord of the filtered X state.
pub fn one_norm_gqd_filtered(setting: &FilterSetting, ordered: &OrderedCorrelations) -> OneNormResult {
    let q = setting.q();
    let branch = gqd_filtered_branch(q, ordered);
    let value = gqd_filtered_quotient(q, ordered).unwrap_or_else(|| gqd_branch_value(branch, q, ordered));
    OneNormResult { value, branch }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{evolve_params, ChannelKind};
    use crate::states::bell_diagonal_to_matrix;

    fn bd(c1: f64, c2: f64, c3: f64) -> BellDiagonalParams {
        BellDiagonalParams::new(c1, c2, c3).unwrap()
    }

    // 0.3·log₂0.6 + 0.7·log₂1.4
    const FROZEN_Q: f64 = 0.118_709_100_769_307_3;

    #[test]
    fn frozen_level_oracle() {
        let direct = 0.3 * 0.6f64.log2() + 0.7 * 1.4f64.log2();
        assert!((direct - FROZEN_Q).abs() < 1e-15);
        assert!((frozen_discord(0.4) - FROZEN_Q).abs() < 1e-15);
        assert!((frozen_discord(0.4) - (1.0 - binary_entropy(0.7))).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let product = TwoQubitState::new(linalg::kron(
            &linalg::ComplexMatrix::from_real_diagonal(&[0.3, 0.7]),
            &linalg::ComplexMatrix::from_real_diagonal(&[0.6, 0.4]),
        ))
        .unwrap();
        assert!(mutual_information(&product).unwrap().abs() < 1e-14);
        let bell = bell_diagonal_to_matrix(&bd(1.0, -1.0, 1.0));
        assert!((mutual_information(&bell).unwrap() - 2.0).abs() < 1e-14);
        // 2 + Σ λ log₂ λ over {0.665, 0.285, 0.035, 0.015}
        let lam = [0.665f64, 0.285, 0.035, 0.015];
        let want = 2.0 + lam.iter().map(|l| l * l.log2()).sum::<f64>();
        assert!((want - 0.832_312_143_653_351).abs() < 1e-14);
        let p = bd(0.9, -0.36, 0.4);
        assert!((mutual_information_bd(&p) - want).abs() < 1e-14);
        assert!((mutual_information(&bell_diagonal_to_matrix(&p)).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn classical_correlation_examples() {
        assert!(classical_correlation_bd(&bd(0.0, 0.0, 0.0)).abs() < 1e-15);
        assert!((classical_correlation_bd(&bd(1.0, -1.0, 1.0)) - 1.0).abs() < 1e-15);
        // 1 + 0.05 log₂ 0.05 + 0.95 log₂ 0.95
        let want = 1.0 + 0.05 * 0.05f64.log2() + 0.95 * 0.95f64.log2();
        assert!((want - 0.713_603).abs() < 5e-7);
        assert!((classical_correlation_bd(&bd(0.9, -0.36, 0.4)) - want).abs() < 1e-15);
    }

    #[test]
    fn discord_freezes_for_reference_state() {
        let p0 = bd(0.9, -0.36, 0.4);
        for p in [0.0, 0.1, 0.2, 0.3, 1.0 / 3.0] {
            let pt = evolve_params(ChannelKind::PhaseFlip, p, &p0).unwrap();
            let q = discord_bd(&pt);
            assert!((q.discord - FROZEN_Q).abs() < 1e-12, "p={p}: {}", q.discord);
            assert!((q.mutual_information - q.classical_correlation - q.discord).abs() < 1e-15);
        }
        let after = discord_bd(&evolve_params(ChannelKind::PhaseFlip, 0.5, &p0).unwrap());
        assert!(after.discord < FROZEN_Q - 1e-3);
    }

    #[test]
    fn discord_trivial_cases() {
        assert!(discord_bd(&bd(0.0, 0.0, 0.0)).discord.abs() < 1e-15);
        assert!((discord_bd(&bd(1.0, -1.0, 1.0)).discord - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_filter_reproduces_unfiltered_discord() {
        let f = FilterSetting::new(0.5).unwrap();
        for p in [bd(0.9, -0.36, 0.4), bd(0.8, 0.3, -0.45), bd(-0.2, 0.5, 0.1)] {
            let a = discord_bd(&p);
            let b = discord_filtered(&f, &p);
            assert!((a.discord - b.discord).abs() < 1e-12);
            assert!((a.mutual_information - b.mutual_information).abs() < 1e-12);
        }
    }

    #[test]
    fn filtered_discord_loses_plateau_but_keeps_kink() {
        let p0 = bd(0.9, -0.36, 0.4);
        let f = FilterSetting::from_q(0.36).unwrap();
        let q_at = |p: f64| discord_filtered(&f, &evolve_params(ChannelKind::PhaseFlip, p, &p0).unwrap()).discord;
        let mut prev = q_at(0.0);
        for i in 1..=33 {
            let cur = q_at(i as f64 * 0.01);
            assert!(cur < prev, "not strictly decreasing at p={}", i as f64 * 0.01);
            prev = cur;
        }
        // one-sided slopes around p_sc = 1/3 differ
        let h = 1e-5;
        let ps = 1.0 / 3.0;
        let left = (q_at(ps) - q_at(ps - h)) / h;
        let right = (q_at(ps + h) - q_at(ps)) / h;
        assert!((left - right).abs() > 1e-2, "{left} {right}");
    }

    #[test]
    fn one_norm_bd_examples() {
        let r = one_norm_gqd_bd(&bd(0.8, 0.3, -0.45));
        assert!((r.value - 0.225).abs() < 1e-15);
        assert_eq!(r.branch, GqdBranch::C3);
        let r = one_norm_gqd_bd(&bd(0.8, -0.45, 0.3));
        assert!((r.value - 0.225).abs() < 1e-15);
        assert_eq!(r.branch, GqdBranch::CMinus);
        assert_eq!(one_norm_gqd_bd(&bd(0.0, 0.0, 0.0)).value, 0.0);
        let r = one_norm_gqd_bd(&bd(0.2, 0.1, 0.6));
        assert_eq!(r.branch, GqdBranch::CPlus);
        assert!((r.value - 0.1).abs() < 1e-15);
    }

    #[test]
    fn one_norm_filtered_reduces_at_zero_q() {
        let f = FilterSetting::new(0.5).unwrap();
        for p in [
            bd(0.8, 0.3, -0.45),
            bd(0.8, -0.45, 0.3),
            bd(0.2, 0.1, 0.6),
            bd(0.0, 0.0, 0.0),
            bd(1.0, -1.0, 1.0),
        ] {
            let o = order_correlations(&p);
            let a = one_norm_gqd_bd(&p);
            let b = one_norm_gqd_filtered(&f, &o);
            assert!((a.value - b.value).abs() < 1e-12, "{p:?}: {} vs {}", a.value, b.value);
            assert_eq!(a.branch, b.branch);
        }
    }

    #[test]
    fn one_norm_filtered_g3_tail() {
        // type 1, q = 0.4: beyond p ≈ 0.147835 the value is ½√(1-q)|c₊(p)|
        let p0 = bd(0.8, 0.3, -0.45);
        let f = FilterSetting::from_q(0.4).unwrap();
        for p in [0.15, 0.3, 0.6, 0.9] {
            let o = order_correlations(&evolve_params(ChannelKind::PhaseFlip, p, &p0).unwrap());
            let r = one_norm_gqd_filtered(&f, &o);
            assert_eq!(r.branch, GqdBranch::CPlus);
            let want = 0.5 * (1.0 - f.q()).sqrt() * o.c_plus.abs();
            assert!((r.value - want).abs() < 1e-12);
        }
        let o = order_correlations(&evolve_params(ChannelKind::PhaseFlip, 0.1, &p0).unwrap());
        assert_eq!(one_norm_gqd_filtered(&f, &o).branch, GqdBranch::F);
    }

    #[test]
    fn one_norm_filtered_smooth_for_type2_large_q() {
        let p0 = bd(0.8, -0.45, 0.3);
        let f = FilterSetting::from_q(0.9).unwrap();
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let o = order_correlations(&evolve_params(ChannelKind::PhaseFlip, p, &p0).unwrap());
            let r = one_norm_gqd_filtered(&f, &o);
            let want = 0.5 * 0.1f64.sqrt() * o.c_plus.abs();
            assert!((r.value - want).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn degenerate_denominator_uses_branch() {
        let o = OrderedCorrelations {
            c_plus: 1.0,
            c_minus: -1.0,
            c3: 1.0,
        };
        assert!(gqd_filtered_quotient(0.0, &o).is_none());
        let f = FilterSetting::new(0.5).unwrap();
        assert!((one_norm_gqd_filtered(&f, &o).value - 0.5).abs() < 1e-15);
    }
}
