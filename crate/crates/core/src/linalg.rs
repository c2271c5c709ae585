//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Matrices are small (dimension 2 or 4) and stored row-major. The
//! Hermitian eigensolver is a cyclic complex Jacobi iteration, with a
//! closed-form shortcut for X-shaped 4×4 matrices whose only non-zero
//! entries lie on the diagonal and anti-diagonal.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity checks, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_TOL` are accepted as numerical noise.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on `Tr ρ = 1` for density-matrix inputs.
pub const TRACE_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `entries.len()` is not `dim * dim`.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count does not match dimension");
        Self { dim, data: entries }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.max_abs().max(1.0)
    }

    /// `(M + M†)/2`, used to scrub rounding asymmetry after products.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// True when every entry off the diagonal and anti-diagonal vanishes.
    pub fn is_x_shaped(&self) -> bool {
        if self.dim != 4 {
            return false;
        }
        let tol = 1e-15 * self.max_abs().max(1.0);
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self[(i, j)].norm() <= tol))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }
}

/// Pauli matrices and the identity.
pub mod pauli {
    use super::{ComplexMatrix, ONE, ZERO};
    use num_complex::Complex64;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, vec![ZERO, -I, I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, vec![ONE, ZERO, ZERO, -ONE])
    }

    /// `σ⁰ = I`, `σ¹ = X`, `σ² = Y`, `σ³ = Z`.
    pub fn sigma(index: usize) -> ComplexMatrix {
        match index {
            0 => identity(),
            1 => x(),
            2 => y(),
            3 => z(),
            _ => panic!("Pauli index {index} out of range"),
        }
    }

    /// `n·σ` for a real three-vector.
    pub fn dot(n: [f64; 3]) -> ComplexMatrix {
        let (nx, ny, nz) = (n[0], n[1], n[2]);
        ComplexMatrix::from_row_major(
            2,
            vec![
                Complex64::new(nz, 0.0),
                Complex64::new(nx, -ny),
                Complex64::new(nx, ny),
                Complex64::new(-nz, 0.0),
            ],
        )
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.dim, b.dim);
    let dim = m * n;
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// The qubit of a two-qubit system. `A` is the left tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out `traced` from a 4×4 density matrix.
///
/// `partial_trace(ρ, A)` returns `ρ_B` and `partial_trace(ρ, B)` returns `ρ_A`.
pub fn partial_trace(rho: &ComplexMatrix, traced: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Validation(format!(
            "partial trace expects a 4x4 matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    if !rho.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Validation(format!(
            "partial trace input is not Hermitian (defect {:e})",
            rho.hermitian_defect()
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::Validation(format!(
            "partial trace input has trace {tr}, expected 1"
        )));
    }
    Ok(partial_trace_unnormalized(rho, traced))
}

/// Partial trace without validation; linear in `rho`.
pub fn partial_trace_unnormalized(rho: &ComplexMatrix, traced: Subsystem) -> ComplexMatrix {
    debug_assert_eq!(rho.dim(), 4);
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match traced {
                Subsystem::A => rho[(i, j)] + rho[(2 + i, 2 + j)],
                Subsystem::B => rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)],
            };
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl SpectralDecomp {
    /// `Σ λᵢ vᵢvᵢ†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * *lambda;
                }
            }
        }
        out
    }

    /// Gram matrix `G_ij = ⟨vᵢ|vⱼ⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.eigenvectors.len();
        let mut g = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.eigenvectors[i]
                    .iter()
                    .zip(&self.eigenvectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
            }
        }
        g
    }

    fn sorted(mut pairs: Vec<(f64, Vec<Complex64>)>) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Hermitian eigen-decomposition.
///
/// Uses the closed-form block solver for X-shaped 4×4 input and for 2×2
/// input, cyclic Jacobi otherwise.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomp> {
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Validation(format!(
            "eigensolver input is not Hermitian (defect {:e})",
            m.hermitian_defect()
        )));
    }
    Ok(match m.dim() {
        2 => {
            let ((lp, vp), (lm, vm)) = eigh_2x2(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
            SpectralDecomp::sorted(vec![(lp, vp.to_vec()), (lm, vm.to_vec())])
        }
        4 if m.is_x_shaped() => x_block_eigh(m),
        _ => jacobi_eigh(m),
    })
}

/// Eigenvalues only, descending. No Hermiticity check.
pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    let mut vals = match m.dim() {
        2 => {
            let (lp, lm) = eigvals_2x2(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
            vec![lp, lm]
        }
        4 if m.is_x_shaped() => {
            let (a, b) = eigvals_2x2(m[(0, 0)].re, m[(0, 3)], m[(3, 3)].re);
            let (c, d) = eigvals_2x2(m[(1, 1)].re, m[(1, 2)], m[(2, 2)].re);
            vec![a, b, c, d]
        }
        _ => {
            let mut work = m.clone();
            jacobi_in_place(&mut work, None);
            (0..m.dim()).map(|i| work[(i, i)].re).collect()
        }
    };
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

fn eigvals_2x2(a: f64, b: Complex64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    (mean + radius, mean - radius)
}

/// Closed-form eigenpairs of `[[a, b], [b*, d]]`, larger eigenvalue first.
fn eigh_2x2(a: f64, b: Complex64, d: f64) -> ((f64, [Complex64; 2]), (f64, [Complex64; 2])) {
    let (lp, lm) = eigvals_2x2(a, b, d);
    let c = |x: f64| Complex64::new(x, 0.0);
    if b.norm() <= f64::EPSILON * (a.abs() + d.abs()).max(f64::MIN_POSITIVE) {
        return if a >= d {
            ((lp, [ONE, ZERO]), (lm, [ZERO, ONE]))
        } else {
            ((lp, [ZERO, ONE]), (lm, [ONE, ZERO]))
        };
    }
    // Pick whichever row of (M - λ) gives the better-conditioned null vector.
    let normalize = |v: [Complex64; 2]| {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    let (vp, vm) = if a >= d {
        (normalize([c(lp - d), b.conj()]), normalize([b, c(lm - a)]))
    } else {
        (normalize([b, c(lp - a)]), normalize([c(lm - d), b.conj()]))
    };
    ((lp, vp), (lm, vm))
}

/// Solver for X-shaped 4×4 Hermitian matrices: the {0,3} and {1,2}
/// index blocks decouple into independent 2×2 problems.
pub fn x_block_eigh(m: &ComplexMatrix) -> SpectralDecomp {
    debug_assert!(m.is_x_shaped());
    let embed = |v: [Complex64; 2], (i, j): (usize, usize)| {
        let mut out = vec![ZERO; 4];
        out[i] = v[0];
        out[j] = v[1];
        out
    };
    let mut pairs = Vec::with_capacity(4);
    for (i, j) in [(0usize, 3usize), (1, 2)] {
        let ((lp, vp), (lm, vm)) = eigh_2x2(m[(i, i)].re, m[(i, j)], m[(j, j)].re);
        pairs.push((lp, embed(vp, (i, j))));
        pairs.push((lm, embed(vm, (i, j))));
    }
    SpectralDecomp::sorted(pairs)
}

/// Cyclic Jacobi for a general Hermitian matrix.
pub fn jacobi_eigh(m: &ComplexMatrix) -> SpectralDecomp {
    let n = m.dim();
    let mut work = m.clone();
    let mut vecs = ComplexMatrix::identity(n);
    jacobi_in_place(&mut work, Some(&mut vecs));
    let pairs = (0..n)
        .map(|k| (work[(k, k)].re, (0..n).map(|i| vecs[(i, k)]).collect()))
        .collect();
    SpectralDecomp::sorted(pairs)
}

fn off_norm_sqr(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalizes `a` in place by unitary rotations `a ← U† a U`,
/// accumulating `v ← v U` when requested.
fn jacobi_in_place(a: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>) {
    let n = a.dim();
    let scale = a.max_abs().max(1.0);
    let tol = JACOBI_OFF_TOL * scale;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm_sqr(a).sqrt() < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE || g < 1e-3 * tol / (n as f64) {
                    continue;
                }
                // Phase e^{iφ} = a_pq/|a_pq| turns the pivot real, then a
                // real Givens rotation annihilates it.
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * upp + vkq * uqp;
                        v[(k, q)] = vkp * upq + vkq * uqq;
                    }
                }
            }
        }
    }
}

/// `-Σ λ log₂ λ` over a spectrum, clamping noise in `[-PSD_TOL, 0)` to zero.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum()
}

/// Shannon entropy of the distribution `(x, 1 - x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    entropy_of_spectrum(&[x, 1.0 - x])
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::Validation(format!("entropy input has trace {tr}, expected 1")));
    }
    let spectrum = eig_hermitian(m)?.eigenvalues;
    if let Some(&worst) = spectrum.last() {
        if worst < -PSD_TOL {
            return Err(Error::Validation(format!(
                "entropy input has negative eigenvalue {worst:e}"
            )));
        }
    }
    Ok(entropy_of_spectrum(&spectrum))
}

/// Trace norm `Σ|λᵢ|` of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    debug_assert!(m.is_hermitian(1e-9), "trace norm expects Hermitian input");
    eigvalsh(m).iter().map(|l| l.abs()).sum()
}
