//! Derivative-free minimization with the Nelder–Mead simplex method.

/// Simplex controls. Convergence is declared when the simplex diameter
/// (largest vertex distance from the best vertex) drops below `x_tol`.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub x_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            x_tol: 1e-9,
            max_iter: 20_000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        assert!(n > 0, "cannot minimize over zero parameters");
        let mut evaluations = 0usize;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

        let mut iterations = 0;
        let mut converged = false;
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];

        while iterations < self.max_iter {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if diameter(&simplex) < self.x_tol {
                converged = true;
                break;
            }
            iterations += 1;

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / n as f64;
                }
            }
            let worst = &simplex[n];
            for i in 0..n {
                trial[i] = centroid[i] + REFLECT * (centroid[i] - worst[i]);
            }
            let fr = eval(&trial);

            if fr < values[0] {
                for i in 0..n {
                    trial2[i] = centroid[i] + EXPAND * (trial[i] - centroid[i]);
                }
                let fe = eval(&trial2);
                if fe < fr {
                    simplex[n].copy_from_slice(&trial2);
                    values[n] = fe;
                } else {
                    simplex[n].copy_from_slice(&trial);
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
                continue;
            }
            // Contraction: outside when the reflection improved on the worst.
            let outside = fr < values[n];
            for i in 0..n {
                trial2[i] = if outside {
                    centroid[i] + CONTRACT * (trial[i] - centroid[i])
                } else {
                    centroid[i] + CONTRACT * (simplex[n][i] - centroid[i])
                };
            }
            let fc = eval(&trial2);
            if (outside && fc <= fr) || (!outside && fc < values[n]) {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fc;
                continue;
            }
            for j in 1..=n {
                for i in 0..n {
                    simplex[j][i] = simplex[0][i] + SHRINK * (simplex[j][i] - simplex[0][i]);
                }
                values[j] = eval(&simplex[j]);
            }
        }

        let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
        Minimum {
            x: simplex[best].clone(),
            value: values[best],
            iterations,
            evaluations,
            converged,
        }
    }

    /// Runs the simplex repeatedly from the incumbent with a shrinking
    /// initial step until a restart stops improving by more than `f_tol`.
    /// Fresh simplices escape the stalls that nonsmooth objectives cause.
    pub fn minimize_with_restarts<F>(&self, mut f: F, x0: &[f64], max_rounds: usize, f_tol: f64) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let mut best = self.minimize(&mut f, x0);
        let mut step = self.initial_step;
        for _ in 1..max_rounds {
            step *= 0.5;
            let round = NelderMead {
                initial_step: step,
                ..*self
            };
            let next = round.minimize(&mut f, &best.x);
            let improved = best.value - next.value > f_tol;
            let evaluations = best.evaluations + next.evaluations;
            let iterations = best.iterations + next.iterations;
            if next.value < best.value {
                best = Minimum {
                    evaluations,
                    iterations,
                    ..next
                };
            } else {
                best.evaluations = evaluations;
                best.iterations = iterations;
                best.converged = best.converged || next.converged;
            }
            if !improved {
                break;
            }
        }
        best
    }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let base = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let nm = NelderMead::default();
        let m = nm.minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0]);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-8 && (m.x[1] + 2.0).abs() < 1e-8);
        assert!(m.value < 1e-15);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_iter: 50_000,
            ..NelderMead::default()
        };
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6, "{:?}", m.x);
    }

    #[test]
    fn nonsmooth_absolute_value_with_restarts() {
        let nm = NelderMead {
            x_tol: 1e-10,
            ..NelderMead::default()
        };
        let f = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (v - i as f64 * 0.1).abs())
                .sum::<f64>()
        };
        let m = nm.minimize_with_restarts(f, &[0.5; 6], 8, 1e-12);
        assert!(m.value < 1e-8, "{}", m.value);
    }

    #[test]
    fn iteration_budget_reports_non_convergence() {
        let nm = NelderMead {
            max_iter: 3,
            ..NelderMead::default()
        };
        let m = nm.minimize(|x| x[0] * x[0] + x[1] * x[1], &[5.0, 5.0]);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }

    #[test]
    fn nan_is_treated_as_worst() {
        let nm = NelderMead::default();
        let m = nm.minimize(|x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.5).powi(2) }, &[0.05]);
        assert!((m.x[0] - 0.5).abs() < 1e-8);
    }
}
