//! Brute-force optimizers that make no use of Bell-diagonal structure.
//!
//! [`DiscordOracle`] maximizes classical correlation over projective
//! measurements on A. [`TraceNormOracle`] minimizes the trace distance to
//! classical-quantum states; it reports half the trace norm so that a Bell
//! state scores 1/2, the same scale as the closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, kron, partial_trace, partial_trace_unnormalized, pauli, trace_norm, von_neumann_entropy,
    ComplexMatrix, Subsystem,
};
use crate::optim::{Minimum, NelderMead};
use crate::states::TwoQubitState;

use super::mutual_information;

#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    pub value: f64,
    /// Minimizing parameter vector (angles first).
    pub argmin: Vec<f64>,
    pub evaluations: usize,
    /// Simplex runs started, including the accepted one.
    pub restarts: usize,
    pub seed: Option<u64>,
}

fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// `Tr_A[(σᵢ⊗I)ρ]` for i = 0..3, so that the unnormalized conditional state
/// after outcome `±n` is `½(T₀ ± Σ nᵢTᵢ)`.
struct ConditionalBlocks([ComplexMatrix; 4]);

impl ConditionalBlocks {
    fn new(rho: &ComplexMatrix) -> Self {
        let id = pauli::identity();
        Self(std::array::from_fn(|i| {
            partial_trace_unnormalized(&(&kron(&pauli::sigma(i), &id) * rho), Subsystem::A)
        }))
    }

    /// Probability and B Bloch vector for outcome `sign·n`.
    fn outcome(&self, n: [f64; 3], sign: f64) -> (f64, [f64; 3]) {
        let t = &self.0;
        let mut m = t[0].scale(0.5);
        for (i, ni) in n.iter().enumerate() {
            m = &m + &t[i + 1].scale(0.5 * sign * ni);
        }
        let p = m.trace().re;
        if p <= 1e-300 {
            return (0.0, [0.0; 3]);
        }
        let r = [
            2.0 * m[(0, 1)].re / p,
            -2.0 * m[(0, 1)].im / p,
            (m[(0, 0)].re - m[(1, 1)].re) / p,
        ];
        (p, r)
    }

    /// `Σ_± p_± S(ρ_B|±)`.
    fn conditional_entropy(&self, n: [f64; 3]) -> f64 {
        [1.0, -1.0]
            .iter()
            .map(|&s| {
                let (p, r) = self.outcome(n, s);
                let len = norm(r).min(1.0);
                p * binary_entropy(0.5 * (1.0 + len))
            })
            .sum()
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Grid search over measurement directions, polished by Nelder–Mead.
#[derive(Debug, Clone, Copy)]
pub struct DiscordOracle {
    pub theta_points: usize,
    pub phi_points: usize,
    pub simplex: NelderMead,
    /// Grid minima tried before giving up.
    pub max_restarts: usize,
}

impl Default for DiscordOracle {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            simplex: NelderMead {
                x_tol: 1e-9,
                max_iter: 20_000,
                initial_step: 0.05,
            },
            max_restarts: 4,
        }
    }
}

impl DiscordOracle {
    /// Discord `I - max_n [S(ρ_B) - Σ p_± S(ρ_B|±)]`.
    pub fn evaluate(&self, state: &TwoQubitState) -> Result<OracleOutcome> {
        let rho = state.matrix();
        let blocks = ConditionalBlocks::new(rho);
        let s_b = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
        let mutual = mutual_information(state)?;

        let mut grid: Vec<(f64, [f64; 2])> = Vec::with_capacity(self.theta_points * self.phi_points);
        let tden = (self.theta_points.max(2) - 1) as f64;
        for i in 0..self.theta_points {
            let theta = std::f64::consts::PI * i as f64 / tden;
            for j in 0..self.phi_points {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / self.phi_points as f64;
                grid.push((blocks.conditional_entropy(unit_vector(theta, phi)), [theta, phi]));
            }
        }
        let mut evaluations = grid.len();
        grid.sort_by(|a, b| a.0.total_cmp(&b.0));

        let objective = |x: &[f64]| blocks.conditional_entropy(unit_vector(x[0], x[1]));
        let mut best: Option<Minimum> = None;
        let mut restarts = 0;
        for (_, start) in grid.iter().take(self.max_restarts.max(1)) {
            restarts += 1;
            let m = self.simplex.minimize(objective, start);
            evaluations += m.evaluations;
            let done = m.converged;
            if best
                .as_ref()
                .map_or(true, |b| m.value < b.value || (done && !b.converged))
            {
                best = Some(m);
            }
            if done {
                break;
            }
        }
        let best = best.expect("at least one simplex run");
        // Never report worse than the grid itself.
        let min_ce = best.value.min(grid[0].0);
        let discord = mutual - (s_b - min_ce);
        if !best.converged {
            return Err(Error::NonConvergence {
                best: discord,
                restarts,
            });
        }
        Ok(OracleOutcome {
            value: discord,
            argmin: best.x,
            evaluations,
            restarts,
            seed: None,
        })
    }
}

/// Discord of an arbitrary two-qubit state with the default oracle settings.
pub fn discord_oracle(state: &TwoQubitState) -> Result<OracleOutcome> {
    DiscordOracle::default().evaluate(state)
}

/// Seeded multi-start search over classical-quantum states
/// `p|n⟩⟨n|⊗ρ₁ + (1-p)|-n⟩⟨-n|⊗ρ₂`.
///
/// Parameters: `θ, φ` for `n`, `p` clamped to `[0, 1]`, and two B Bloch
/// vectors clamped radially into the unit ball.
#[derive(Debug, Clone, Copy)]
pub struct TraceNormOracle {
    pub restarts: usize,
    pub seed: u64,
    pub simplex: NelderMead,
    /// Simplex rounds per start, each from the incumbent with a halved step.
    pub rounds: usize,
}

impl Default for TraceNormOracle {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0x5EED,
            simplex: NelderMead {
                x_tol: 1e-9,
                max_iter: 20_000,
                initial_step: 0.2,
            },
            rounds: 8,
        }
    }
}

fn clamp_ball(v: &[f64]) -> [f64; 3] {
    let r = [v[0], v[1], v[2]];
    let n = norm(r);
    if n > 1.0 {
        [r[0] / n, r[1] / n, r[2] / n]
    } else {
        r
    }
}

fn qubit(r: [f64; 3]) -> ComplexMatrix {
    (&pauli::identity() + &pauli::dot(r)).scale(0.5)
}

/// The classical-quantum state encoded by a parameter vector.
pub fn classical_quantum_state(x: &[f64]) -> ComplexMatrix {
    let n = unit_vector(x[0], x[1]);
    let p = x[2].clamp(0.0, 1.0);
    let plus = qubit(n);
    let minus = qubit([-n[0], -n[1], -n[2]]);
    let a = kron(&plus, &qubit(clamp_ball(&x[3..6]))).scale(p);
    let b = kron(&minus, &qubit(clamp_ball(&x[6..9]))).scale(1.0 - p);
    &a + &b
}

impl TraceNormOracle {
    fn start_point(&self, blocks: &ConditionalBlocks, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let theta = rng.gen_range(-1.0f64..=1.0).acos();
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let n = unit_vector(theta, phi);
        let (p, r1) = blocks.outcome(n, 1.0);
        let (_, r2) = blocks.outcome(n, -1.0);
        let mut x = vec![theta, phi, p];
        x.extend_from_slice(&r1);
        x.extend_from_slice(&r2);
        x
    }

    /// `min ½‖ρ - χ‖₁` over classical-quantum `χ`.
    pub fn evaluate(&self, state: &TwoQubitState) -> Result<OracleOutcome> {
        let rho = state.matrix();
        let blocks = ConditionalBlocks::new(rho);
        let objective = |x: &[f64]| 0.5 * trace_norm(&(rho - &classical_quantum_state(x)));

        let runs: Vec<Minimum> = (0..self.restarts.max(1))
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i as u64);
                let x0 = self.start_point(&blocks, &mut rng);
                self.simplex.minimize_with_restarts(objective, &x0, self.rounds, 1e-13)
            })
            .collect();

        let evaluations = runs.iter().map(|m| m.evaluations).sum();
        let any_converged = runs.iter().any(|m| m.converged);
        let (_, best) = runs
            .into_iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
            .expect("at least one restart");
        if !any_converged {
            return Err(Error::NonConvergence {
                best: best.value,
                restarts: self.restarts,
            });
        }
        Ok(OracleOutcome {
            value: best.value,
            argmin: best.x,
            evaluations,
            restarts: self.restarts,
            seed: Some(self.seed),
        })
    }
}

/// One-norm geometric discord with the default oracle settings and `seed`.
pub fn one_norm_oracle(state: &TwoQubitState, seed: u64) -> Result<OracleOutcome> {
    TraceNormOracle {
        seed,
        ..TraceNormOracle::default()
    }
    .evaluate(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::states::{bell_diagonal_to_matrix, BellDiagonalParams};
    use num_complex::Complex64;

    fn bd(c1: f64, c2: f64, c3: f64) -> TwoQubitState {
        bell_diagonal_to_matrix(&BellDiagonalParams::new(c1, c2, c3).unwrap())
    }

    #[test]
    fn discord_oracle_on_bell_and_mixed() {
        let q = discord_oracle(&bd(1.0, -1.0, 1.0)).unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
        let q = discord_oracle(&bd(0.0, 0.0, 0.0)).unwrap();
        assert!(q.value.abs() < 1e-12);
    }

    #[test]
    fn discord_oracle_on_classical_quantum_state() {
        // ½|0⟩⟨0|⊗ρ₁ + ½|1⟩⟨1|⊗ρ₂ has zero discord for measurements on A.
        let s = TwoQubitState::new(classical_quantum_state(&[0.0, 0.0, 0.5, 0.3, 0.1, 0.4, -0.2, 0.0, 0.6])).unwrap();
        let q = discord_oracle(&s).unwrap();
        assert!(q.value.abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn trace_norm_oracle_zero_on_classical_quantum() {
        let s = TwoQubitState::new(classical_quantum_state(&[1.1, 0.4, 0.3, 0.2, -0.5, 0.1, 0.0, 0.3, 0.3])).unwrap();
        let r = one_norm_oracle(&s, 7).unwrap();
        assert!(r.value < 1e-7, "{}", r.value);
        assert_eq!(r.seed, Some(7));
    }

    #[test]
    fn trace_norm_oracle_bell_state_is_half() {
        let r = one_norm_oracle(&bd(1.0, -1.0, 1.0), 1).unwrap();
        assert!((r.value - 0.5).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn trace_norm_oracle_is_deterministic() {
        let s = bd(0.5, -0.2, 0.3);
        let o = TraceNormOracle {
            restarts: 4,
            ..TraceNormOracle::default()
        };
        let a = o.evaluate(&s).unwrap();
        let b = o.evaluate(&s).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.argmin, b.argmin);
    }

    #[test]
    fn conditional_blocks_recover_marginal() {
        let m = ComplexMatrix::from_row_major(
            4,
            vec![
                Complex64::new(0.4, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.1, 0.05),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.1, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.2, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.1, -0.05),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.3, 0.0),
            ],
        );
        let blocks = ConditionalBlocks::new(&m);
        let rb = partial_trace(&m, Subsystem::A).unwrap();
        assert!(blocks.0[0].max_abs_diff(&rb) < 1e-15);
        let (pp, _) = blocks.outcome([0.0, 0.0, 1.0], 1.0);
        let (pm, _) = blocks.outcome([0.0, 0.0, 1.0], -1.0);
        assert!((pp - 0.5).abs() < 1e-15 && (pm - 0.5).abs() < 1e-15);
    }
}
