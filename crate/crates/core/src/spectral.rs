//! The analytic spectrum of the cycle-plus-chord Laplacian.
//!
//! With the substitution `E = 2 - 2x` the eigenvalue condition becomes a
//! polynomial equation in `x`,
//!
//! ```text
//! F(x) = 1 + U_{n-m}(x) + U_{m-2}(x) - U_{n-1}(x) - T_n(x) = 0,
//! ```
//!
//! whose squared form factorises as `[T_n(x) - 1] * Theta(n, m, x)`. The
//! first factor carries the eigenvalues the graph inherits unchanged from
//! the bare cycle (`x = cos(2 pi k / n)`); the second carries the
//! chord-shifted ones, including a single isolated root on `x < -1` that
//! produces the largest eigenvalue and its exponentially localised
//! eigenstate. Squaring doubles the root set, so every `Theta` root is
//! accepted only if it also satisfies `F` itself.
//!
//! A quirk worth knowing: the chord does *not* always lift the cycle's
//! twofold degeneracies. Whenever `k (m - 1) = 0 (mod n)` the chord
//! vector `e_1 - e_m` is exactly orthogonal to the whole degenerate pair,
//! which therefore survives untouched. The solver detects this in integer
//! arithmetic and counts the root twice.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods cover std builds; no_std needs the trait
use num_traits::Float;

use crate::chebyshev::{eigenvalue_from_x, z_substitution, ChebValue};
use crate::graph::GraphSpec;
use crate::linalg::{eig_symmetric, Spectrum, SpectrumSource};
use crate::{Error, Result};

/// Acceptance threshold for `|F(x)|` relative to the magnitude of its
/// terms; separates true eigenvalue roots from the mirror roots that
/// squaring introduces.
const F_RESIDUAL_TOL: f64 = 1e-6;
/// Theta roots closer than this (in `x`) to a cycle root are numerical
/// shadows of that root, never distinct eigenvalues; the minimal genuine
/// chord shift is of order `1/n^3`, far above this for the sizes in scope.
const CYCLE_MERGE_RADIUS: f64 = 1e-9;
/// Distinct theta roots are never closer than this.
const THETA_DEDUP_RADIUS: f64 = 1e-11;
/// Reconstruction gives up and asks for a dense fallback when the leading
/// coefficient is this small relative to its terms.
const BASIS_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Determinant equation
// ---------------------------------------------------------------------------

/// Evaluators for the eigenvalue condition of `G(n, m)` and its
/// cycle/theta factor pair.
#[derive(Debug, Clone, Copy)]
pub struct DeterminantEq {
    n: usize,
    m: usize,
}

impl DeterminantEq {
    pub fn new(g: &GraphSpec) -> Self {
        DeterminantEq { n: g.n(), m: g.m() }
    }

    /// `F(x) = 1 + U_{n-m} + U_{m-2} - U_{n-1} - T_n`.
    pub fn f_value(&self, x: f64) -> f64 {
        let v = ChebValue::new(x);
        let (n, m) = (self.n as i64, self.m as i64);
        1.0 + v.u(n - m) + v.u(m - 2) - v.u(n - 1) - v.t(self.n)
    }

    /// Magnitude scale of the terms of `F` at `x`, for residual tests.
    pub fn term_scale(&self, x: f64) -> f64 {
        let v = ChebValue::new(x);
        let (n, m) = (self.n as i64, self.m as i64);
        1.0 + v.u(n - m).abs() + v.u(m - 2).abs() + v.u(n - 1).abs() + v.t(self.n).abs()
    }

    /// The cycle factor `T_n(x) - 1` of the squared equation.
    pub fn cycle_factor(&self, x: f64) -> f64 {
        ChebValue::new(x).t(self.n) - 1.0
    }

    /// The chord factor
    /// `Theta = 2 U_{m-2}^2 - 2 [T_n + U_{n-1} - 1] U_{m-2} - [T_n + 2 U_{n-1} - 1]`,
    /// in the cancellation-free grouping.
    pub fn theta_factor(&self, x: f64) -> f64 {
        let v = ChebValue::new(x);
        let u_m2 = v.u(self.m as i64 - 2);
        let u_n1 = v.u(self.n as i64 - 1);
        let t_n = v.t(self.n);
        2.0 * u_m2 * u_m2 - 2.0 * (t_n + u_n1 - 1.0) * u_m2 - (t_n + 2.0 * u_n1 - 1.0)
    }

    /// `F(x) / T_n(x)` for `x < -1`, evaluated entirely in non-positive
    /// powers of `z` so that nothing overflows and nothing cancels. This
    /// is the function whose unique root below the band gives the largest
    /// eigenvalue.
    pub fn f_scaled(&self, x: f64) -> f64 {
        debug_assert!(x < -1.0);
        let z = z_substitution(x);
        let zi = z.recip();
        let n = self.n as i32;
        let m = self.m as i32;
        let denom = zi - z; // positive for every real |x| > 1
        let correction = 1.0 + zi.powi(2 * n);
        // U_k / T_n = 2 (zi^{n+k+1} - zi^{n-k-1}) / (denom * (1 + zi^{2n}))
        let u_over_t = |k: i32| -> f64 {
            2.0 * (zi.powi(n + k + 1) - zi.powi(n - k - 1)) / (denom * correction)
        };
        let inv_t = 2.0 * zi.powi(n) / correction;
        inv_t + u_over_t(n - m) + u_over_t(m - 2) - u_over_t(n - 1) - 1.0
    }
}

/// `F(x)` for `G(n, m)`; every Laplacian eigenvalue is `E = 2 - 2x` for a
/// root `x` of this function.
pub fn determinant_value(n: usize, m: usize, x: f64) -> f64 {
    DeterminantEq { n, m }.f_value(x)
}

/// The `n -> infinity`, long-chord limit of the largest eigenvalue,
/// `2 + 2 sqrt(2)`, reached at `x_0 = -sqrt(2)` (`z_0 = -1 - sqrt(2)`).
pub fn largest_eigenvalue_limit() -> f64 {
    2.0 + 2.0 * SQRT_2
}

// ---------------------------------------------------------------------------
// Spectrum from the determinant equation
// ---------------------------------------------------------------------------

/// Which factor of the squared determinant equation a root belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    /// Root of `T_n(x) - 1`: an eigenvalue shared with the bare cycle.
    CycleRoot,
    /// Root of `Theta(n, m, x)`: shifted by the chord (or the surviving
    /// partner inside an unlifted degenerate pair).
    ThetaRoot,
}

/// One accounted root of the determinant equation.
#[derive(Debug, Clone, Copy)]
pub struct RootInfo {
    pub x: f64,
    pub eigenvalue: f64,
    pub branch: RootBranch,
    /// `|F(x)| / term_scale(x)` at the root.
    pub f_residual: f64,
}

/// Spectrum solved from the determinant equation, with per-root
/// accounting and a count of dense-eigenvector fallbacks.
#[derive(Debug, Clone)]
pub struct ChebSolution {
    pub spectrum: Spectrum,
    pub roots: Vec<RootInfo>,
    pub dense_fallbacks: usize,
}

/// All `n` eigenvalues (and eigenvectors) of `G(n, m)` from the
/// determinant equation: cycle-branch roots written down analytically,
/// theta-branch roots from bracketed bisection on `x = cos(theta)`, and
/// the isolated sub-band root for the largest eigenvalue.
pub fn solve_spectrum_chebyshev(g: &GraphSpec) -> Result<Spectrum> {
    solve_spectrum_detailed(g).map(|sol| sol.spectrum)
}

/// Like [`solve_spectrum_chebyshev`] but keeps the root accounting.
pub fn solve_spectrum_detailed(g: &GraphSpec) -> Result<ChebSolution> {
    let n = g.n();
    let det = DeterminantEq::new(g);

    // The theta grid resolves ~n oscillations; retry finer before failing.
    for attempt in 0..3 {
        let grid = 20 * n * (1 + 2 * attempt);
        match try_solve(g, &det, grid) {
            Ok(sol) => return Ok(sol),
            Err(Error::RootCount { .. }) if attempt + 1 < 3 => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop always returns on the last attempt")
}

enum RootSource {
    /// Cycle root index k: eigenvector is the chord-symmetric cosine state.
    CycleCos(usize),
    /// Second vector of an unlifted degenerate pair: the sine state that
    /// vanishes at both chord endpoints.
    DegenerateSin(usize),
    /// Theta root: eigenvector reconstructed from the recurrences.
    Reconstruct(f64),
}

fn try_solve(g: &GraphSpec, det: &DeterminantEq, grid: usize) -> Result<ChebSolution> {
    let n = g.n();
    let m = g.m();
    let half = n / 2;
    let lambda = g.lambda();

    let mut sources: Vec<RootSource> = Vec::with_capacity(n);
    let mut cycle_roots: Vec<f64> = Vec::new();

    // Cycle branch, x_k = cos(2 pi k / n). F vanishes identically at every
    // interior cycle root; only x = -1 (even n) can fail the residual,
    // which it does exactly when m is even and E = 4 is genuinely shifted.
    for k in 0..=half {
        let x = (2.0 * PI * k as f64 / n as f64).cos();
        let residual = det.f_value(x).abs() / det.term_scale(x);
        if residual <= F_RESIDUAL_TOL {
            sources.push(RootSource::CycleCos(k));
            cycle_roots.push(x);
        }
    }

    // Unlifted degeneracies, decided in exact integer arithmetic:
    // k (m - 1) = 0 (mod n) keeps the full pair at the cycle eigenvalue.
    let pair_top = half - lambda;
    for k in 1..=pair_top {
        if (k * (m - 1)) % n == 0 {
            sources.push(RootSource::DegenerateSin(k));
        }
    }

    // Theta branch inside the band: scan Theta(cos(theta)) on a uniform
    // theta grid and bisect every sign change, then keep the roots that F
    // itself confirms (the rest are mirrors from squaring).
    let theta_at = |j: usize| PI * j as f64 / grid as f64;
    let mut accepted_theta: Vec<f64> = Vec::new();
    let mut prev = det.theta_factor(theta_at(0).cos());
    for j in 1..=grid {
        let cur = det.theta_factor(theta_at(j).cos());
        if prev == 0.0 {
            prev = cur;
            continue; // grid point exactly on a root: the neighbour brackets it
        }
        if prev * cur < 0.0 {
            let root_x = bisect_theta(det, theta_at(j - 1), theta_at(j));
            let residual = det.f_value(root_x).abs() / det.term_scale(root_x);
            let near_cycle = cycle_roots
                .iter()
                .any(|&c| (c - root_x).abs() <= CYCLE_MERGE_RADIUS * (1.0 + root_x.abs()));
            let duplicate = accepted_theta
                .iter()
                .any(|&t| (t - root_x).abs() <= THETA_DEDUP_RADIUS);
            if residual <= F_RESIDUAL_TOL && !near_cycle && !duplicate {
                accepted_theta.push(root_x);
            }
        }
        prev = cur;
    }
    for &x in &accepted_theta {
        sources.push(RootSource::Reconstruct(x));
    }

    // The isolated root below the band (largest eigenvalue).
    if let Some(x) = isolated_root(det) {
        sources.push(RootSource::Reconstruct(x));
    }

    if sources.len() != n {
        return Err(Error::RootCount { expected: n, found: sources.len() });
    }

    // Eigenvectors per root, then sort everything by eigenvalue.
    let mut dense_fallbacks = 0usize;
    let mut dense: Option<Spectrum> = None;
    let mut dense_used: Vec<bool> = Vec::new();
    let mut entries: Vec<(f64, Vec<f64>, RootInfo)> = Vec::with_capacity(n);

    for source in &sources {
        let (x, branch, vector) = match source {
            RootSource::CycleCos(k) => {
                let theta = 2.0 * PI * *k as f64 / n as f64;
                (theta.cos(), RootBranch::CycleRoot, cycle_cos_state(n, m, theta))
            }
            RootSource::DegenerateSin(k) => {
                let theta = 2.0 * PI * *k as f64 / n as f64;
                (theta.cos(), RootBranch::ThetaRoot, cycle_sin_state(n, m, theta))
            }
            RootSource::Reconstruct(x) => {
                let vector = match eigenstate_from_root(g, *x) {
                    Ok(state) => state.components,
                    Err(Error::DegenerateBasis { .. }) => {
                        // Near-degenerate pair: the recurrence basis is
                        // ill-conditioned, borrow the dense eigenvector.
                        dense_fallbacks += 1;
                        let spec = match &dense {
                            Some(s) => s,
                            None => {
                                let s = eig_symmetric(&crate::graph::laplacian(g))?;
                                dense_used = vec![false; s.n()];
                                dense = Some(s);
                                dense.as_ref().unwrap()
                            }
                        };
                        let e = eigenvalue_from_x(*x);
                        let mut best = usize::MAX;
                        let mut best_gap = f64::INFINITY;
                        for (i, ev) in spec.eigenvalues.iter().enumerate() {
                            let gap = (ev - e).abs();
                            if !dense_used[i] && gap < best_gap {
                                best_gap = gap;
                                best = i;
                            }
                        }
                        dense_used[best] = true;
                        spec.eigenvectors[best].clone()
                    }
                    Err(e) => return Err(e),
                };
                (*x, RootBranch::ThetaRoot, vector)
            }
        };
        let eigenvalue = eigenvalue_from_x(x);
        let info = RootInfo {
            x,
            eigenvalue,
            branch,
            f_residual: det.f_value(x).abs() / det.term_scale(x),
        };
        entries.push((eigenvalue, vector, info));
    }

    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("NaN eigenvalue"));

    let eigenvalues = entries.iter().map(|e| e.0).collect();
    let eigenvectors = entries.iter().map(|e| e.1.clone()).collect();
    let roots = entries.iter().map(|e| e.2).collect();
    Ok(ChebSolution {
        spectrum: Spectrum {
            eigenvalues,
            eigenvectors,
            source: SpectrumSource::DeterminantEquation,
        },
        roots,
        dense_fallbacks,
    })
}

/// Bisect `Theta(cos(theta))` on a sign-change bracket, returning the
/// root in `x`.
fn bisect_theta(det: &DeterminantEq, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = det.theta_factor(lo.cos());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-15 {
            break;
        }
        let f_mid = det.theta_factor(mid.cos());
        if f_mid == 0.0 {
            return mid.cos();
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (0.5 * (lo + hi)).cos()
}

/// The single root of `F(x) / T_n(x)` below the band, sought near the
/// asymptotic value `x_0 = -sqrt(2)`; widened once towards the Gershgorin
/// bound if the usual window misses it on very small graphs.
fn isolated_root(det: &DeterminantEq) -> Option<f64> {
    for window in [(-1.5, -1.0 - 1e-9), (-2.05, -1.0 - 1e-12)] {
        let (lo, hi) = window;
        let samples = 256;
        let mut prev_x = lo;
        let mut prev_v = det.f_scaled(lo);
        for i in 1..=samples {
            let x = lo + (hi - lo) * i as f64 / samples as f64;
            let v = det.f_scaled(x);
            if prev_v == 0.0 {
                return Some(prev_x);
            }
            if prev_v * v < 0.0 {
                let (mut a, mut b, mut fa) = (prev_x, x, prev_v);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if b - a < 1e-15 {
                        break;
                    }
                    let fm = det.f_scaled(mid);
                    if fm == 0.0 {
                        return Some(mid);
                    }
                    if fa * fm < 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                return Some(0.5 * (a + b));
            }
            prev_x = x;
            prev_v = v;
        }
    }
    None
}

/// Chord-symmetric cosine state: the exact eigenvector the graph shares
/// with the bare cycle at `x = cos(theta)`. Its value at the chord
/// endpoints is equal, so the chord term annihilates it.
fn cycle_cos_state(n: usize, m: usize, theta: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=n)
        .map(|j| (0.5 * (2.0 * j as f64 - m as f64 - 1.0) * theta).cos())
        .collect();
    normalize(&mut v);
    v
}

/// Sine partner inside an unlifted degenerate pair; vanishes at both
/// chord endpoints.
fn cycle_sin_state(n: usize, m: usize, theta: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=n)
        .map(|j| (0.5 * (2.0 * j as f64 - m as f64 - 1.0) * theta).sin())
        .collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "cannot normalise the zero vector");
    for x in v.iter_mut() {
        *x /= norm;
    }
}

// ---------------------------------------------------------------------------
// Eigenstate reconstruction
// ---------------------------------------------------------------------------

/// An eigenstate rebuilt from a root of the determinant equation via the
/// second-kind recurrences.
#[derive(Debug, Clone)]
pub struct AnalyticEigenstate {
    /// Components `x_j` for `j = 1..=n`, normalised.
    pub components: Vec<f64>,
    pub eigenvalue: f64,
    pub x_root: f64,
    pub branch: RootBranch,
}

impl AnalyticEigenstate {
    /// Component at the 1-based node `j`.
    pub fn component(&self, j: usize) -> f64 {
        self.components[j - 1]
    }
}

/// Rebuild the eigenstate belonging to a verified root `x` of `F`.
///
/// Sets `x_m = 1`, takes `x_{m-1}` and `x_n` from the simplified
/// coefficient ratios, fills the two arcs by the recurrences and
/// normalises. Fails with [`Error::DegenerateBasis`] when the leading
/// coefficient is too small to divide by, which happens exactly in (or
/// numerically near) an unlifted degenerate pair.
pub fn eigenstate_from_root(g: &GraphSpec, x: f64) -> Result<AnalyticEigenstate> {
    let n = g.n();
    let m = g.m();
    let v = ChebValue::new(x);
    let (ni, mi) = (n as i64, m as i64);

    let u_n1 = v.u(ni - 1);
    let u_n2 = v.u(ni - 2);
    let u_nm = v.u(ni - mi);
    let u_nm1 = v.u(ni - mi - 1);
    let u_m1 = v.u(mi - 1);
    let u_m2 = v.u(mi - 2);
    let u_m3 = v.u(mi - 3);

    let c1 = u_n1 + u_nm * u_m2;
    let c1_scale = 1.0 + u_n1.abs() + (u_nm * u_m2).abs();
    if c1.abs() <= BASIS_TOL * c1_scale {
        return Err(Error::DegenerateBasis { root: x });
    }
    let c2 = -u_n2 - u_nm * u_m3 - u_nm - 1.0;
    let c2_prime = u_nm1 + u_nm * u_m1 + u_m1 + u_m2 - u_n1;

    let mut comp = vec![0.0f64; n];
    let x_m = 1.0;
    let x_m1 = -c2 / c1;
    comp[m - 1] = x_m;
    if m >= 2 {
        comp[m - 2] = x_m1;
    }
    comp[n - 1] = c2_prime / c1;

    // inner arc, nodes 1..m-2
    for i in 1..=m.saturating_sub(2) {
        comp[i - 1] = v.u(mi - i as i64 - 1) * x_m1 - v.u(mi - i as i64 - 2) * x_m;
    }
    // outer arc, nodes m+1..n-1
    let x_1 = comp[0];
    let x_n = comp[n - 1];
    for i in (m + 1)..n {
        comp[i - 1] = v.u(ni - i as i64) * x_n - v.u(ni - i as i64 - 1) * x_1;
    }

    let branch = if comp[0] > 0.0 {
        RootBranch::CycleRoot
    } else {
        RootBranch::ThetaRoot
    };
    normalize(&mut comp);

    Ok(AnalyticEigenstate {
        components: comp,
        eigenvalue: eigenvalue_from_x(x),
        x_root: x,
        branch,
    })
}

/// The reconstructed eigenstate of the largest eigenvalue.
pub fn largest_eigenstate(g: &GraphSpec) -> Result<AnalyticEigenstate> {
    let det = DeterminantEq::new(g);
    let x = isolated_root(&det).ok_or_else(|| {
        Error::Convergence(alloc::string::String::from(
            "no isolated root below the band",
        ))
    })?;
    eigenstate_from_root(g, x)
}

// ---------------------------------------------------------------------------
// Degenerate perturbation theory
// ---------------------------------------------------------------------------

/// Sign selecting one of the two zeroth-order combinations of a
/// degenerate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    Plus,
    Minus,
}

/// One twofold-degenerate cycle level and its first-order response to the
/// chord.
#[derive(Debug, Clone, Copy)]
pub struct PerturbativePair {
    /// Pair index `n` in `1..=floor(N/2) - lambda`.
    pub index: usize,
    /// `theta_n = 2 pi n / N`.
    pub theta: f64,
    /// Unperturbed eigenvalue `2 - 2 cos(theta_n)`.
    pub e0: f64,
    /// First-order corrections: the plus combination is untouched, the
    /// minus combination shifts by `(4/N)[1 - cos((m-1) theta_n)]`.
    pub correction_plus: f64,
    pub correction_minus: f64,
}

/// First-order spectrum of `G(n, m)` built on the bare cycle.
#[derive(Debug, Clone)]
pub struct PerturbativeSpectrum {
    pub n: usize,
    pub m: usize,
    /// 1 for even `n`, 0 for odd `n`.
    pub lambda: usize,
    pub pairs: Vec<PerturbativePair>,
    /// Correction of the ground state `E = 0` (always 0).
    pub ground_correction: f64,
    /// Correction of the `E = 4` state, `(2/N)[1 + (-1)^m]`; only present
    /// for even `n`.
    pub top_correction: Option<f64>,
}

impl PerturbativeSpectrum {
    /// All `n` first-order eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        out.push(0.0 + self.ground_correction);
        for p in &self.pairs {
            out.push(p.e0 + p.correction_plus);
            out.push(p.e0 + p.correction_minus);
        }
        if let Some(t) = self.top_correction {
            out.push(4.0 + t);
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
        out
    }

    /// Zeroth-order combination of pair `index` (1-based entry of
    /// [`pairs`](Self::pairs)) with the given sign, as components on the
    /// nodes `1..=n`:
    /// `(e^{i j theta} +/- e^{-i (j - m - 1) theta}) / sqrt(2 n)`.
    pub fn zeroth_state(&self, index: usize, sign: PairSign) -> Vec<Complex64> {
        let theta = 2.0 * PI * index as f64 / self.n as f64;
        let norm = 1.0 / (2.0 * self.n as f64).sqrt();
        let s = match sign {
            PairSign::Plus => 1.0,
            PairSign::Minus => -1.0,
        };
        (1..=self.n)
            .map(|j| {
                let a = Complex64::new(0.0, j as f64 * theta).exp();
                let b = Complex64::new(0.0, -(j as f64 - self.m as f64 - 1.0) * theta).exp();
                (a + b * s) * norm
            })
            .collect()
    }
}

/// First-order corrections and zeroth-order states for every degenerate
/// pair of the cycle, plus the two non-degenerate levels.
pub fn perturbative_spectrum(g: &GraphSpec) -> PerturbativeSpectrum {
    let n = g.n();
    let m = g.m();
    let lambda = g.lambda();
    let pair_top = n / 2 - lambda;

    let pairs = (1..=pair_top)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            PerturbativePair {
                index: k,
                theta,
                e0: 2.0 - 2.0 * theta.cos(),
                correction_plus: 0.0,
                correction_minus: 4.0 / n as f64
                    * (1.0 - ((m as f64 - 1.0) * theta).cos()),
            }
        })
        .collect();

    let top_correction = if n % 2 == 0 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Some(2.0 / n as f64 * (1.0 + sign))
    } else {
        None
    };

    PerturbativeSpectrum { n, m, lambda, pairs, ground_correction: 0.0, top_correction }
}

/// First-order shift (in `x`) of the cycle root `x_k = cos(2 pi k / n)`
/// under the chord, `(1/n) [1 - cos((m-1) 2 pi k / n)]`; the perturbed
/// root sits at `x ~ x_k - shift`.
pub fn cycle_root_shift(g: &GraphSpec, k: usize) -> f64 {
    let theta = 2.0 * PI * k as f64 / g.n() as f64;
    (1.0 - ((g.m() as f64 - 1.0) * theta).cos()) / g.n() as f64
}

/// Dense-oracle spectrum of `G(n, m)`; convenience wrapper.
pub fn dense_spectrum(g: &GraphSpec) -> Result<Spectrum> {
    eig_symmetric(&crate::graph::laplacian(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn determinant_vanishes_at_ground_state() {
        for (n, m) in [(6, 3), (20, 7), (100, 21), (101, 50)] {
            assert_eq!(determinant_value(n, m, 1.0), 0.0, "n={n} m={m}");
        }
    }

    #[test]
    fn determinant_small_at_asymptotic_root() {
        // at n = 100, m = 50 the sub-band root is exponentially close to
        // -sqrt(2), so the scaled secular function is tiny there
        let det = DeterminantEq::new(&build_graph(100, 50).unwrap());
        assert!(det.f_scaled(-SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn scaled_and_plain_forms_agree_below_band() {
        let det = DeterminantEq::new(&build_graph(40, 11).unwrap());
        for &x in &[-1.45, -1.3, -1.2, -1.05] {
            let plain = det.f_value(x) / ChebValue::new(x).t(40);
            let scaled = det.f_scaled(x);
            assert!(
                (plain - scaled).abs() < 1e-9 * (1.0 + scaled.abs()),
                "x={x}: {plain} vs {scaled}"
            );
        }
    }

    #[test]
    fn factorisation_consistent_with_f() {
        // (T_n - 1) * Theta carries every root of F
        let g = build_graph(24, 7).unwrap();
        let det = DeterminantEq::new(&g);
        let sol = solve_spectrum_detailed(&g).unwrap();
        for info in &sol.roots {
            let cyc = det.cycle_factor(info.x).abs();
            let theta = det.theta_factor(info.x).abs();
            let scale = (1.0 + ChebValue::new(info.x).t(24).abs()).max(1.0);
            assert!(
                cyc.min(theta) < 1e-5 * scale,
                "x = {}: cycle {cyc:.3e} theta {theta:.3e}",
                info.x
            );
        }
    }

    #[test]
    fn limit_value_matches_closed_form() {
        assert!((largest_eigenvalue_limit() - 4.828_427_124_746_190).abs() < 1e-12);
    }

    #[test]
    fn perturbative_corrections_examples() {
        // (m - 1) theta_25 is a multiple of 2 pi at m = 21, so the shift
        // vanishes; at m = 3 it equals pi and the shift is maximal
        let g = build_graph(100, 21).unwrap();
        let p = perturbative_spectrum(&g);
        assert!(p.pairs[24].correction_minus.abs() < 1e-12);
        let g3 = build_graph(100, 3).unwrap();
        let p3 = perturbative_spectrum(&g3);
        assert!((p3.pairs[24].correction_minus - 0.08).abs() < 1e-12);
    }

    #[test]
    fn top_correction_parity() {
        let even_m = perturbative_spectrum(&build_graph(100, 6).unwrap());
        assert!((even_m.top_correction.unwrap() - 0.04).abs() < 1e-15);
        let odd_m = perturbative_spectrum(&build_graph(100, 7).unwrap());
        assert_eq!(odd_m.top_correction.unwrap(), 0.0);
        let odd_n = perturbative_spectrum(&build_graph(101, 7).unwrap());
        assert!(odd_n.top_correction.is_none());
    }

    #[test]
    fn pair_states_orthonormal() {
        let g = build_graph(30, 11).unwrap();
        let p = perturbative_spectrum(&g);
        for k in [1usize, 5, 9, 13] {
            let plus = p.zeroth_state(k, PairSign::Plus);
            let minus = p.zeroth_state(k, PairSign::Minus);
            let norm_p: f64 = plus.iter().map(|c| c.norm_sqr()).sum();
            let norm_m: f64 = minus.iter().map(|c| c.norm_sqr()).sum();
            let overlap: Complex64 = plus.iter().zip(minus.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!((norm_p - 1.0).abs() < 1e-10, "k={k} norm {norm_p}");
            assert!((norm_m - 1.0).abs() < 1e-10, "k={k} norm {norm_m}");
            assert!(overlap.norm() < 1e-10, "k={k} overlap {overlap}");
        }
    }

    #[test]
    fn cycle_root_shift_examples() {
        let g21 = build_graph(100, 21).unwrap();
        assert!(cycle_root_shift(&g21, 25).abs() < 1e-12);
        let g3 = build_graph(100, 3).unwrap();
        assert!((cycle_root_shift(&g3, 25) - 0.02).abs() < 1e-12);
        // arithmetic relation: 4 * shift equals the pair's minus-branch
        // eigenvalue correction
        for k in [1usize, 10, 25, 33] {
            let shift = cycle_root_shift(&g3, k);
            let corr = perturbative_spectrum(&g3).pairs[k - 1].correction_minus;
            assert!((4.0 * shift - corr).abs() < 1e-12, "k={k}");
        }
    }
}
