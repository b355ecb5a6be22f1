//! Transition probabilities, long-time averages and localisation.
//!
//! The walk's probability to travel from node `j` to node `k` in time `t`
//! is `pi_{k,j}(t) = |<k| exp(-i t H) |j>|^2`. On a finite graph it never
//! decays for good; it fluctuates about the long-time average
//! `chi_{k,j}`, which is a purely spectral quantity: a sum over groups of
//! degenerate eigenvalues of squared projector matrix elements. The
//! chord makes `chi` strongly non-uniform: an exciton started on a chord
//! endpoint stays there with probability about 1/8 no matter how large
//! the ring, carried by the localised eigenstate of the isolated largest
//! eigenvalue.

use alloc::format;
use alloc::vec::Vec;

use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods cover std builds; no_std needs the trait
use num_traits::Float;

use crate::graph::{shortest_chord_distance, GraphSpec};
use crate::linalg::{evolve_hermitian, Spectrum};
use crate::spectral::AnalyticEigenstate;
use crate::{Error, Result};

/// Probabilities of a walk started at `start`, sampled on a time grid.
#[derive(Debug, Clone)]
pub struct EvolutionSeries {
    /// 1-based start node.
    pub start: usize,
    pub times: Vec<f64>,
    /// `probabilities[t][k]` is `pi_{k+1, start}(times[t])`.
    pub probabilities: Vec<Vec<f64>>,
    /// Total probability at each time; 1 under unitary evolution.
    pub norms: Vec<f64>,
}

impl EvolutionSeries {
    /// Return probability `pi_{start, start}(t)` along the grid.
    pub fn return_probability(&self) -> Vec<f64> {
        let j = self.start - 1;
        self.probabilities.iter().map(|p| p[j]).collect()
    }

    /// Probability at 1-based node `k` and time index `ti`.
    pub fn probability(&self, k: usize, ti: usize) -> f64 {
        self.probabilities[ti][k - 1]
    }
}

/// Long-time average `chi_{k, start}` for every node `k`.
#[derive(Debug, Clone)]
pub struct LimitingDistribution {
    /// 1-based start node.
    pub start: usize,
    /// `chi[k]` is the limiting probability at node `k + 1`.
    pub chi: Vec<f64>,
    /// Absolute eigenvalue gap below which levels count as degenerate.
    pub degeneracy_tol: f64,
    /// Number of degenerate groups the spectrum split into.
    pub groups: usize,
}

/// Exact spectral-sum transition probabilities (no time-step error).
pub fn transition_probabilities(spec: &Spectrum, start: usize, times: &[f64]) -> EvolutionSeries {
    evolve_hermitian(spec, start, times)
}

/// Least-squares slope of `log pi` against `log t` over the envelope of
/// local maxima of the return probability inside the window.
///
/// The return probability oscillates; the envelope of its peaks is what
/// follows the `t^-1` law, so the fit uses local maxima when at least two
/// exist and falls back to every sample otherwise (a constant series then
/// fits slope 0).
pub fn decay_exponent(series: &EvolutionSeries, window: (f64, f64)) -> Result<f64> {
    let (t0, t1) = window;
    if !(t0 < t1) {
        return Err(Error::domain(format!("empty window ({t0}, {t1})")));
    }
    let p = series.return_probability();
    let in_window: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(p.iter())
        .filter(|(t, p)| **t >= t0 && **t <= t1 && **t > 0.0 && **p > 0.0)
        .map(|(t, p)| (*t, *p))
        .collect();
    if in_window.len() < 2 {
        return Err(Error::domain("window contains fewer than two usable samples"));
    }

    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..in_window.len() - 1 {
        if in_window[i].1 >= in_window[i - 1].1 && in_window[i].1 >= in_window[i + 1].1 {
            peaks.push(in_window[i]);
        }
    }
    let samples = if peaks.len() >= 2 { &peaks } else { &in_window };

    let logs: Vec<(f64, f64)> = samples.iter().map(|(t, p)| (t.ln(), p.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::domain("window too narrow for a slope fit"));
    }
    Ok((n * sxy - sx * sy) / denom)
}

/// Long-time average of `pi_{k, start}(t)` for every `k`, grouping
/// eigenvalues closer than `degeneracy_tol` (default: `1e-8` of the
/// spectral range) as degenerate.
///
/// With every gap above the tolerance this reduces to the familiar sum of
/// squared overlaps; with surviving degenerate pairs the grouped form is
/// the basis-independent one, which is essential because a dense solver
/// returns an arbitrary basis inside each degenerate subspace.
pub fn limiting_distribution(
    spec: &Spectrum,
    start: usize,
    degeneracy_tol: Option<f64>,
) -> LimitingDistribution {
    let n = spec.n();
    assert!(start >= 1 && start <= n, "start node out of range");
    let range = spec.eigenvalues[n - 1] - spec.eigenvalues[0];
    let tol = degeneracy_tol.unwrap_or(1e-8 * range.max(1e-300));
    assert!(tol > 0.0, "degeneracy tolerance must be positive");

    let j = start - 1;
    let mut chi = alloc::vec![0.0f64; n];
    let mut groups = 0usize;
    let mut lo = 0usize;
    while lo < n {
        let mut hi = lo + 1;
        while hi < n && spec.eigenvalues[hi] - spec.eigenvalues[hi - 1] < tol {
            hi += 1;
        }
        groups += 1;
        // projector element P[k][j] of this degenerate group
        let mut proj = alloc::vec![0.0f64; n];
        for v in &spec.eigenvectors[lo..hi] {
            let w = v[j];
            for (pk, vk) in proj.iter_mut().zip(v.iter()) {
                *pk += w * vk;
            }
        }
        for (c, p) in chi.iter_mut().zip(proj.iter()) {
            *c += p * p;
        }
        lo = hi;
    }

    LimitingDistribution { start, chi, degeneracy_tol: tol, groups }
}

/// Closed-form approximation of `chi_{k,j}`: the localised-state term
/// plus the band contribution
///
/// ```text
/// chi ~ |x'_j|^2 |x'_k|^2 + 1/n - 1/n^2
///       + [S(j - k) + S(j + k - m - 1)] / (2 n^2)
/// ```
///
/// with `S(a) = sin(2 pi a (1 - lambda/n)) / sin(2 pi a / n)` evaluated as
/// its limit `n - lambda` at the removable singularities (denominator
/// argument a multiple of pi); a naive evaluation would return NaN there,
/// and the diagonal special values come exactly from those limits.
pub fn limiting_approximation(
    g: &GraphSpec,
    j: usize,
    k: usize,
    largest_state: &AnalyticEigenstate,
) -> f64 {
    let n = g.n() as f64;
    let lambda = g.lambda() as f64;
    let s = |a: f64| -> f64 {
        let denom = (2.0 * PI * a / n).sin();
        if denom.abs() < 1e-12 {
            n - lambda
        } else {
            (2.0 * PI * a * (1.0 - lambda / n)).sin() / denom
        }
    };
    let xj = largest_state.component(j);
    let xk = largest_state.component(k);
    let a1 = j as f64 - k as f64;
    let a2 = j as f64 + k as f64 - g.m() as f64 - 1.0;
    xj * xj * xk * xk + 1.0 / n - 1.0 / (n * n)
        + (s(a1) + s(a2)) / (2.0 * n * n)
}

/// Lower bound on `chi_{k,j}` carried by the localised state alone:
/// `(1/8) (1 + sqrt(2))^{-2 (d_j + d_k)}` with the distances measured to
/// the nearest chord endpoint.
pub fn localization_lower_bound(g: &GraphSpec, j: usize, k: usize) -> Result<f64> {
    let dj = shortest_chord_distance(g, j)? as i32;
    let dk = shortest_chord_distance(g, k)? as i32;
    let z0_abs = 1.0 + core::f64::consts::SQRT_2;
    Ok(0.125 * z0_abs.powi(-2 * (dj + dk)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, cycle_laplacian, laplacian};
    use crate::linalg::eig_symmetric;

    #[test]
    fn start_is_certain_at_time_zero() {
        let g = build_graph(12, 5).unwrap();
        let spec = eig_symmetric(&laplacian(&g)).unwrap();
        let series = transition_probabilities(&spec, 3, &[0.0]);
        for k in 1..=12 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((series.probability(k, 0) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn probability_is_conserved() {
        let g = build_graph(20, 8).unwrap();
        let spec = eig_symmetric(&laplacian(&g)).unwrap();
        let times: Vec<f64> = (0..60).map(|i| 0.7 * i as f64).collect();
        let series = transition_probabilities(&spec, 5, &times);
        for (ti, norm) in series.norms.iter().enumerate() {
            assert!((norm - 1.0).abs() < 1e-10, "t index {ti}: norm {norm}");
            for p in &series.probabilities[ti] {
                assert!(*p >= -1e-12 && *p <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn constant_series_has_zero_slope() {
        let series = EvolutionSeries {
            start: 1,
            times: (1..=50).map(|i| i as f64 * 0.5).collect(),
            probabilities: (0..50).map(|_| alloc::vec![0.25]).collect(),
            norms: alloc::vec![1.0; 50],
        };
        let slope = decay_exponent(&series, (1.0, 20.0)).unwrap();
        assert!(slope.abs() < 1e-12);
    }

    #[test]
    fn decay_exponent_rejects_empty_window() {
        let series = EvolutionSeries {
            start: 1,
            times: alloc::vec![0.0, 1.0],
            probabilities: alloc::vec![alloc::vec![1.0], alloc::vec![0.5]],
            norms: alloc::vec![1.0, 1.0],
        };
        assert!(decay_exponent(&series, (5.0, 2.0)).is_err());
        assert!(decay_exponent(&series, (10.0, 20.0)).is_err());
    }

    #[test]
    fn limiting_distribution_conserves_probability() {
        let g = build_graph(30, 11).unwrap();
        let spec = eig_symmetric(&laplacian(&g)).unwrap();
        for start in [1usize, 6, 16] {
            let chi = limiting_distribution(&spec, start, None);
            let total: f64 = chi.chi.iter().sum();
            assert!((total - 1.0).abs() < 1e-8, "start {start}: total {total}");
            assert!(chi.chi.iter().all(|c| *c >= -1e-12));
        }
    }

    #[test]
    fn limiting_distribution_is_symmetric_in_start_and_target() {
        let g = build_graph(18, 7).unwrap();
        let spec = eig_symmetric(&laplacian(&g)).unwrap();
        for j in [1usize, 4, 9] {
            for k in [2usize, 7, 15] {
                let a = limiting_distribution(&spec, j, None).chi[k - 1];
                let b = limiting_distribution(&spec, k, None).chi[j - 1];
                assert!((a - b).abs() < 1e-10, "j={j} k={k}: {a} vs {b}");
            }
        }
    }

    /// On the bare cycle the limiting distribution must match a direct
    /// long-window time average of the exact evolution.
    #[test]
    fn cycle_matches_brute_force_time_average() {
        let h = cycle_laplacian(4);
        let spec = eig_symmetric(&h).unwrap();
        let chi = limiting_distribution(&spec, 1, None);

        // irrational-ish step avoids resonant sampling of the phases
        let dt = 0.37;
        let steps = 27_000; // t up to ~10^4
        let times: Vec<f64> = (1..=steps).map(|i| i as f64 * dt).collect();
        let series = transition_probabilities(&spec, 1, &times);
        for k in 1..=4 {
            let avg: f64 =
                (0..steps).map(|ti| series.probability(k, ti)).sum::<f64>() / steps as f64;
            assert!(
                (avg - chi.chi[k - 1]).abs() < 2e-3,
                "k={k}: average {avg} vs chi {}",
                chi.chi[k - 1]
            );
        }
    }

    #[test]
    fn lower_bound_closed_forms() {
        let g = build_graph(100, 21).unwrap();
        let b11 = localization_lower_bound(&g, 1, 1).unwrap();
        assert!((b11 - 0.125).abs() < 1e-15);
        let b12 = localization_lower_bound(&g, 1, 2).unwrap();
        let z0 = 1.0 + core::f64::consts::SQRT_2;
        assert!((b12 - 0.125 / (z0 * z0)).abs() < 1e-15);
        let bm = localization_lower_bound(&g, 21, 99).unwrap();
        // d(99, m=21) = min over endpoints = 2 via node 1
        assert!((bm - 0.125 / z0.powi(4)).abs() < 1e-15);
    }
}
