//! Dependency-free dense numerics.
//!
//! The cyclic Jacobi eigensolver is the ground-truth oracle for the whole
//! project: every analytic result (determinant-equation spectra,
//! perturbative approximations, localisation formulas) is cross-checked
//! against it. Time propagation comes in two flavours: an exact spectral
//! sum for Hermitian Hamiltonians and fixed-step integrators (RK4 and a
//! scaling-and-squaring one-step exponential) that also handle the
//! non-Hermitian trapping Hamiltonian.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods cover std builds; no_std needs the trait
use num_traits::Float;

use crate::dynamics::EvolutionSeries;
use crate::{Error, Result};

/// Relative off-diagonal tolerance for Jacobi convergence.
const JACOBI_TOL: f64 = 1e-12;
/// Sweep cap for the Jacobi iteration; well-conditioned symmetric matrices
/// of the sizes used here converge in fewer than 15 sweeps.
const JACOBI_MAX_SWEEPS: usize = 60;

// ---------------------------------------------------------------------------
// Dense square matrices
// ---------------------------------------------------------------------------

/// Dense square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from a row-major slice; `data.len()` must equal `n * n`.
    pub fn from_rows(n: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), n * n, "matrix data length mismatch");
        Matrix { n, data: data.to_vec() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(re: &Matrix) -> Self {
        let n = re.n();
        let data = re.data().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        CMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scale(&mut self, factor: Complex64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.n {
            let mut s = 0.0;
            for i in 0..self.n {
                s += self.get(i, j).norm();
            }
            worst = worst.max(s);
        }
        worst
    }

    /// Maximum absolute row sum; crude bound on the spectral radius.
    pub fn max_row_abs_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0f64, f64::max)
    }

    /// `y = self * x`.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            *yi = acc;
        }
    }

    /// `self * other`, plain triple loop in cache-friendly order.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Where a spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    DenseSolver,
    DeterminantEquation,
    Perturbative,
}

impl SpectrumSource {
    pub fn label(&self) -> &'static str {
        match self {
            SpectrumSource::DenseSolver => "dense-solver",
            SpectrumSource::DeterminantEquation => "determinant-equation",
            SpectrumSource::Perturbative => "perturbative",
        }
    }
}

/// Full eigendecomposition of a real symmetric matrix.
///
/// `eigenvalues` are ascending; `eigenvectors[k]` is the orthonormal
/// eigenvector belonging to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub source: SpectrumSource,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue (the spectrum is sorted ascending).
    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    /// Gap between the largest and second-largest eigenvalue.
    pub fn top_gap(&self) -> f64 {
        let n = self.n();
        self.eigenvalues[n - 1] - self.eigenvalues[n - 2]
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Deterministic for identical input: sweeps always visit (p, q) pairs in
/// the same row-major order. Fails with [`Error::Convergence`] if the
/// off-diagonal Frobenius norm does not drop below `1e-12 * ||H||_F`
/// within the sweep cap, and with [`Error::Domain`] if the input is not
/// symmetric to working precision.
pub fn eig_symmetric(h: &Matrix) -> Result<Spectrum> {
    let n = h.n();
    if n == 0 {
        return Err(Error::domain("empty matrix"));
    }
    if h.max_symmetry_defect() > 1e-12 * (1.0 + h.frobenius_norm()) {
        return Err(Error::domain("matrix is not symmetric"));
    }

    let norm = h.frobenius_norm();
    let target = JACOBI_TOL * norm;
    let mut a = h.clone();
    let mut v = Matrix::identity(n);

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a.get(i, j) * a.get(i, j);
            }
        }
        s.sqrt()
    };

    let mut converged = norm == 0.0 || off_norm(&a) <= target;
    if !converged {
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    a.set(p, p, app - t * apq);
                    a.set(q, q, aqq + t * apq);
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                    for r in 0..n {
                        if r == p || r == q {
                            continue;
                        }
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, c * arp - s * arq);
                        a.set(p, r, c * arp - s * arq);
                        a.set(r, q, s * arp + c * arq);
                        a.set(q, r, s * arp + c * arq);
                    }
                    for r in 0..n {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, c * vrp - s * vrq);
                        v.set(r, q, s * vrp + c * vrq);
                    }
                }
            }
            if off_norm(&a) <= target {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "Jacobi sweeps exhausted: off-diagonal norm {:.3e} > {:.3e}",
            off_norm(&a),
            target
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).expect("NaN eigenvalue"));

    let eigenvalues = order.iter().map(|&i| a.get(i, i)).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| (0..n).map(|r| v.get(r, col)).collect())
        .collect();

    Ok(Spectrum { eigenvalues, eigenvectors, source: SpectrumSource::DenseSolver })
}

// ---------------------------------------------------------------------------
// Time evolution
// ---------------------------------------------------------------------------

/// A complex state vector at a given time.
#[derive(Debug, Clone)]
pub struct ComplexState {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl ComplexState {
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Exact unitary evolution of the basis state `|start>` via the spectral
/// sum; no time-step error beyond the eigensolver accuracy.
///
/// `start` is a 1-based node label.
pub fn evolve_hermitian(spec: &Spectrum, start: usize, times: &[f64]) -> EvolutionSeries {
    let n = spec.n();
    assert!(start >= 1 && start <= n, "start node out of range");
    let j = start - 1;
    let weights: Vec<f64> = spec.eigenvectors.iter().map(|v| v[j]).collect();

    let mut probabilities = Vec::with_capacity(times.len());
    let mut norms = Vec::with_capacity(times.len());
    let mut amp = vec![Complex64::new(0.0, 0.0); n];
    for &t in times {
        for a in &mut amp {
            *a = Complex64::new(0.0, 0.0);
        }
        for ((ev, v), w) in spec.eigenvalues.iter().zip(spec.eigenvectors.iter()).zip(weights.iter()) {
            let phase = Complex64::new(0.0, -ev * t).exp() * w;
            for (a, &vk) in amp.iter_mut().zip(v.iter()) {
                *a += phase * vk;
            }
        }
        let probs: Vec<f64> = amp.iter().map(|a| a.norm_sqr()).collect();
        norms.push(probs.iter().sum());
        probabilities.push(probs);
    }

    EvolutionSeries { start, times: times.to_vec(), probabilities, norms }
}

/// Crude spectral-radius bound: maximum absolute row sum.
pub fn spectral_radius_bound(h: &CMatrix) -> f64 {
    h.max_row_abs_sum()
}

/// Default RK4 step: keeps local error well below the 1e-6 agreement
/// target against the spectral propagator.
pub fn default_rk4_dt(h: &CMatrix) -> f64 {
    let rho = spectral_radius_bound(h);
    if rho == 0.0 {
        0.01
    } else {
        (0.05 / rho).min(0.01)
    }
}

/// Classic fourth-order Runge-Kutta integration of `i dpsi/dt = H psi`
/// from the basis state `|start>` (1-based), recording every step.
///
/// Requires `dt <= 0.1 / rho` where `rho` is [`spectral_radius_bound`].
pub fn evolve_rk4(
    h_eff: &CMatrix,
    start: usize,
    t_max: f64,
    dt: f64,
) -> Result<Vec<ComplexState>> {
    let n = h_eff.n();
    if start < 1 || start > n {
        return Err(Error::domain(format!("start node {start} out of range 1..={n}")));
    }
    if !(dt > 0.0) || !t_max.is_finite() || t_max < 0.0 {
        return Err(Error::domain("need dt > 0 and t_max >= 0"));
    }
    let rho = spectral_radius_bound(h_eff);
    if rho > 0.0 && dt > 0.1 / rho {
        return Err(Error::domain(format!(
            "dt = {dt} violates the stability bound 0.1/rho = {:.3e}",
            0.1 / rho
        )));
    }

    let steps = (t_max / dt).ceil() as usize;
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    psi[start - 1] = Complex64::new(1.0, 0.0);

    let mut out = Vec::with_capacity(steps + 1);
    out.push(ComplexState { amplitudes: psi.clone(), time: 0.0 });

    let minus_i = Complex64::new(0.0, -1.0);
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    for step in 1..=steps {
        h_eff.matvec(&psi, &mut k1);
        for v in &mut k1 {
            *v *= minus_i;
        }
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (0.5 * dt);
        }
        h_eff.matvec(&tmp, &mut k2);
        for v in &mut k2 {
            *v *= minus_i;
        }
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (0.5 * dt);
        }
        h_eff.matvec(&tmp, &mut k3);
        for v in &mut k3 {
            *v *= minus_i;
        }
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * dt;
        }
        h_eff.matvec(&tmp, &mut k4);
        for v in &mut k4 {
            *v *= minus_i;
        }
        for i in 0..n {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        out.push(ComplexState { amplitudes: psi.clone(), time: step as f64 * dt });
    }
    Ok(out)
}

/// Matrix exponential by scaling and squaring with a Taylor series.
///
/// Accurate to machine precision for the moderately sized, moderately
/// normed matrices used here (one-step propagators `exp(-i dt H)`).
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.n();
    let norm = a.norm_1();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let mut b = a.clone();
    b.scale(Complex64::new(1.0 / f64::powi(2.0, s as i32), 0.0));

    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40u32 {
        term = term.matmul(&b);
        term.scale(Complex64::new(1.0 / k as f64, 0.0));
        let tnorm = term.norm_1();
        for (r, t) in result.data.iter_mut().zip(term.data.iter()) {
            *r += t;
        }
        if tnorm <= 1e-17 * result.norm_1() {
            break;
        }
    }
    for _ in 0..s {
        result = result.matmul(&result);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_2x2_analytic() {
        let h = Matrix::from_rows(2, &[2.0, -1.0, -1.0, 2.0]);
        let spec = eig_symmetric(&h).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((spec.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let h = Matrix::from_rows(2, &[2.0, -1.0, 1.0, 2.0]);
        assert!(matches!(eig_symmetric(&h), Err(Error::Domain(_))));
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMatrix::zeros(3);
        let e = expm(&z);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.get(i, j) - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn expm_diagonal() {
        let mut d = CMatrix::zeros(2);
        d.set(0, 0, Complex64::new(0.0, -1.3));
        d.set(1, 1, Complex64::new(-0.4, 0.0));
        let e = expm(&d);
        assert!((e.get(0, 0) - Complex64::new(0.0, -1.3).exp()).norm() < 1e-14);
        assert!((e.get(1, 1) - Complex64::new(-0.4, 0.0).exp()).norm() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-15);
    }
}
