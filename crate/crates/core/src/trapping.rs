//! Trapping: survival probability under an absorbing node.
//!
//! A trap of strength `Gamma` at node 1 turns the Hamiltonian into the
//! non-Hermitian `H_eff = H - i Gamma |1><1|` (sign chosen so that
//! `exp(-i t H_eff)` contracts). The average survival probability over
//! all non-trap start and end nodes,
//!
//! ```text
//! Pi_M(t) = 1/(N-M) sum_{j,k not in M} pi_{k,j}(t),
//! ```
//!
//! decays towards the weight of the dark states: eigenstates that vanish
//! exactly on the trap. For the chord graph those exist whenever
//! `2 n (m-1) = 0 (mod N)` has solutions in the degenerate-pair range,
//! and their count fixes the long-time plateau.
//!
//! Propagation uses the exact one-step propagator `exp(-i dt H_eff)`
//! (scaling-and-squaring), applied repeatedly to each non-trap basis
//! state: unconditionally stable, so `dt` is purely the sampling
//! resolution of the returned series. Each start node propagates
//! independently, which is the natural axis for parallel drivers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods cover std builds; no_std needs the trait
use num_traits::Float;

use crate::graph::{laplacian, GraphSpec};
use crate::linalg::{expm, CMatrix};
use crate::spectral::{perturbative_spectrum, PairSign};
use crate::{Error, Result};

/// A trapping experiment: the graph, the absorbing nodes and the trap
/// strength. The analytic machinery (perturbative decay rates, plateau
/// prediction) is specific to the single trap at node 1; the propagation
/// itself works for any trap set.
#[derive(Debug, Clone)]
pub struct TrapConfig {
    graph: GraphSpec,
    traps: Vec<usize>,
    gamma: f64,
}

impl TrapConfig {
    /// Validate a trap set: non-empty, unique, within `1..=n`, strictly
    /// fewer traps than nodes, `gamma >= 0` and finite.
    pub fn new(graph: GraphSpec, traps: &[usize], gamma: f64) -> Result<Self> {
        if traps.is_empty() {
            return Err(Error::domain("trap set is empty"));
        }
        let mut sorted = traps.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != traps.len() {
            return Err(Error::domain("trap set contains duplicates"));
        }
        if sorted[0] < 1 || *sorted.last().unwrap() > graph.n() {
            return Err(Error::domain(format!(
                "trap nodes must lie in 1..={}",
                graph.n()
            )));
        }
        if sorted.len() >= graph.n() {
            return Err(Error::domain("need at least one non-trap node"));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::domain("trap strength must be finite and non-negative"));
        }
        Ok(TrapConfig { graph, traps: sorted, gamma })
    }

    /// The configuration studied throughout: one trap at node 1.
    pub fn single_trap(graph: GraphSpec, gamma: f64) -> Result<Self> {
        TrapConfig::new(graph, &[1], gamma)
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn traps(&self) -> &[usize] {
        &self.traps
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_single_trap_at_one(&self) -> bool {
        self.traps == [1]
    }

    /// Nodes outside the trap set, 1-based.
    pub fn non_trap_nodes(&self) -> Vec<usize> {
        (1..=self.graph.n()).filter(|j| !self.traps.contains(j)).collect()
    }
}

/// `H_eff = H - i Gamma P_traps` as a dense complex matrix.
pub fn effective_hamiltonian(cfg: &TrapConfig) -> CMatrix {
    let mut h = CMatrix::from_real(&laplacian(&cfg.graph));
    for &t in &cfg.traps {
        let i = t - 1;
        let d = h.get(i, i);
        h.set(i, i, d + Complex64::new(0.0, -cfg.gamma));
    }
    h
}

/// Exact one-step propagator `exp(-i dt H_eff)` with per-start-node
/// propagation, the designated parallelism axis.
#[derive(Debug, Clone)]
pub struct TrapPropagator {
    u_step: CMatrix,
    dt: f64,
    traps: Vec<usize>,
    n: usize,
}

/// Survival series of a single start node.
#[derive(Debug, Clone)]
pub struct NodeSurvival {
    /// Off-trap probability weight at each sampling step (step 0 = 1).
    pub weights: Vec<f64>,
    /// Largest per-step increase of the full squared norm (should be
    /// non-positive up to rounding for a dissipative trap).
    pub max_norm_increase: f64,
}

impl TrapPropagator {
    pub fn new(cfg: &TrapConfig, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::domain("sampling step dt must be positive and finite"));
        }
        let mut step = effective_hamiltonian(cfg);
        step.scale(Complex64::new(0.0, -dt));
        Ok(TrapPropagator {
            u_step: expm(&step),
            dt,
            traps: cfg.traps.clone(),
            n: cfg.graph.n(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Propagate the basis state `|start>` for `steps` sampling steps,
    /// recording its off-trap weight at every step.
    pub fn survival_weights(&self, start: usize, steps: usize) -> Result<NodeSurvival> {
        if start < 1 || start > self.n {
            return Err(Error::domain(format!("start node {start} out of range")));
        }
        if self.traps.contains(&start) {
            return Err(Error::domain("start node is a trap"));
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); self.n];
        psi[start - 1] = Complex64::new(1.0, 0.0);
        let mut scratch = psi.clone();

        let off_trap_weight = |psi: &[Complex64]| -> f64 {
            let trapped: f64 = self.traps.iter().map(|&t| psi[t - 1].norm_sqr()).sum();
            let total: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            total - trapped
        };

        let mut weights = Vec::with_capacity(steps + 1);
        weights.push(off_trap_weight(&psi));
        let mut prev_norm = 1.0f64;
        let mut max_increase = 0.0f64;
        for _ in 0..steps {
            self.u_step.matvec(&psi, &mut scratch);
            core::mem::swap(&mut psi, &mut scratch);
            let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            max_increase = max_increase.max(norm - prev_norm);
            prev_norm = norm;
            weights.push(off_trap_weight(&psi));
        }
        Ok(NodeSurvival { weights, max_norm_increase: max_increase })
    }
}

/// Outcome of a survival-probability run.
#[derive(Debug, Clone)]
pub struct TrapResult {
    pub times: Vec<f64>,
    /// `Pi_M(t)` on the sampling grid.
    pub survival: Vec<f64>,
    /// Mean of the final quarter of the series.
    pub plateau_estimate: f64,
    /// Standard deviation over the same window.
    pub plateau_std: f64,
    /// Whether the window was flat (std below 10% of the mean).
    pub converged: bool,
    /// `(m - 1 - lambda)/(n - 1)` when `n / (2(m-1))` is an integer,
    /// otherwise 0.
    pub predicted_plateau: f64,
    /// First-order imaginary parts per eigenstate (single trap at node 1
    /// only).
    pub gammas: Option<Vec<f64>>,
    /// Exact count of dark states (zero imaginary part).
    pub zero_gamma_count: usize,
    /// Diagnostics: worst per-step growth of any propagated norm.
    pub max_norm_increase: f64,
}

/// Average survival probability by direct propagation of every non-trap
/// start node (serial). `dt` is the sampling resolution of the series.
pub fn survival_probability(cfg: &TrapConfig, t_max: f64, dt: f64) -> Result<TrapResult> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain("t_max must be positive and finite"));
    }
    if !(dt > 0.0) || dt > t_max {
        return Err(Error::domain("need 0 < dt <= t_max"));
    }
    let prop = TrapPropagator::new(cfg, dt)?;
    let steps = (t_max / dt).ceil() as usize;
    let contributions: Result<Vec<NodeSurvival>> = cfg
        .non_trap_nodes()
        .into_iter()
        .map(|j| prop.survival_weights(j, steps))
        .collect();
    Ok(assemble_survival(cfg, dt, &contributions?))
}

/// Combine per-start-node survival series (in [`TrapConfig::non_trap_nodes`]
/// order) into the averaged result. Parallel drivers call this after
/// fanning [`TrapPropagator::survival_weights`] out over start nodes.
pub fn assemble_survival(cfg: &TrapConfig, dt: f64, nodes: &[NodeSurvival]) -> TrapResult {
    assert!(!nodes.is_empty());
    let steps = nodes[0].weights.len();
    let inv = 1.0 / nodes.len() as f64;
    let mut survival = vec![0.0f64; steps];
    let mut max_norm_increase = 0.0f64;
    for node in nodes {
        assert_eq!(node.weights.len(), steps);
        for (s, w) in survival.iter_mut().zip(node.weights.iter()) {
            *s += w * inv;
        }
        max_norm_increase = max_norm_increase.max(node.max_norm_increase);
    }
    let times: Vec<f64> = (0..steps).map(|i| i as f64 * dt).collect();

    let window = steps - steps / 4..steps;
    let wlen = window.len() as f64;
    let mean: f64 = survival[window.clone()].iter().sum::<f64>() / wlen;
    let var: f64 =
        survival[window].iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / wlen;
    let std = var.sqrt();
    let converged = std <= 0.1 * mean.max(1e-12);

    let gammas = if cfg.is_single_trap_at_one() {
        Some(perturbative_gammas(cfg).expect("single-trap config"))
    } else {
        None
    };
    let zero_gamma_count =
        if cfg.is_single_trap_at_one() { dark_state_count(&cfg.graph) } else { 0 };

    TrapResult {
        times,
        survival,
        plateau_estimate: mean,
        plateau_std: std,
        converged,
        predicted_plateau: plateau_prediction(&cfg.graph),
        gammas,
        zero_gamma_count,
        max_norm_increase,
    }
}

/// First-order imaginary parts `gamma_l = Gamma |<1|Psi_l^(0)>|^2` for a
/// single trap at node 1, evaluated directly on the zeroth-order states
/// (the pair combinations themselves decide which of the two signs of
/// `1 +/- cos((m-1) theta_n)` they carry).
///
/// Order: ground state, then each degenerate pair (plus, minus), then the
/// alternating top state for even `n`.
pub fn perturbative_gammas(cfg: &TrapConfig) -> Result<Vec<f64>> {
    if !cfg.is_single_trap_at_one() {
        return Err(Error::domain(
            "perturbative decay rates are derived for the single trap at node 1",
        ));
    }
    let g = &cfg.graph;
    let n = g.n() as f64;
    let p = perturbative_spectrum(g);
    let mut gammas = Vec::with_capacity(g.n());
    // uniform ground state: |<1|psi_0>|^2 = 1/n
    gammas.push(cfg.gamma / n);
    for pair in &p.pairs {
        for sign in [PairSign::Plus, PairSign::Minus] {
            let state = p.zeroth_state(pair.index, sign);
            gammas.push(cfg.gamma * state[0].norm_sqr());
        }
    }
    if g.lambda() == 1 {
        // alternating top state: |<1|psi_{n/2}>|^2 = 1/n
        gammas.push(cfg.gamma / n);
    }
    Ok(gammas)
}

/// Exact number of dark states for the single trap at node 1: pairs with
/// `2 k (m-1) = 0 (mod n)` keep one combination that vanishes on the
/// trap (and on the chord), hence never decays.
pub fn dark_state_count(g: &GraphSpec) -> usize {
    let (n, m) = (g.n(), g.m());
    let top = n / 2 - g.lambda();
    (1..=top).filter(|k| (2 * k * (m - 1)) % n == 0).count()
}

/// The paper-form plateau: `(m - 1 - lambda)/(n - 1)` when `n/(2(m-1))`
/// is an integer, otherwise 0.
///
/// This is the special case of [`dark_state_count`]`/(n-1)` in which
/// `2(m-1)` divides `n`; outside it the true dark-state count can still
/// be non-zero (e.g. `n = 100`, `m = 21` has 9 dark states), so the
/// long-time survival exceeds this prediction there.
pub fn plateau_prediction(g: &GraphSpec) -> f64 {
    let (n, m) = (g.n(), g.m());
    if n % (2 * (m - 1)) == 0 {
        (m - 1 - g.lambda()) as f64 / (n - 1) as f64
    } else {
        0.0
    }
}

/// Perturbative survival approximation
/// `Pi(t) ~ 1/(n - m_traps) * sum_l exp(-2 gamma_l t)`; an intermediate-
/// and long-time formula (it exceeds 1 at `t = 0`).
pub fn survival_approximation(
    gammas: &[f64],
    n: usize,
    m_traps: usize,
    times: &[f64],
) -> Vec<f64> {
    let inv = 1.0 / (n - m_traps) as f64;
    times
        .iter()
        .map(|&t| gammas.iter().map(|g| (-2.0 * g * t).exp()).sum::<f64>() * inv)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use core::f64::consts::PI;

    #[test]
    fn config_validation() {
        let g = build_graph(10, 4).unwrap();
        assert!(TrapConfig::new(g, &[], 1.0).is_err());
        assert!(TrapConfig::new(g, &[0], 1.0).is_err());
        assert!(TrapConfig::new(g, &[11], 1.0).is_err());
        assert!(TrapConfig::new(g, &[3, 3], 1.0).is_err());
        assert!(TrapConfig::new(g, &[1], -0.5).is_err());
        assert!(TrapConfig::new(g, &[1], 1.0).is_ok());
    }

    #[test]
    fn gammas_match_closed_form() {
        // direct overlap evaluation must reproduce
        // Gamma (1 +/- cos((m-1) theta_n)) / n
        let g = build_graph(100, 11).unwrap();
        let cfg = TrapConfig::single_trap(g, 1.3).unwrap();
        let gammas = perturbative_gammas(&cfg).unwrap();
        assert_eq!(gammas.len(), 100);
        assert!((gammas[0] - 1.3 / 100.0).abs() < 1e-14);
        assert!((gammas[99] - 1.3 / 100.0).abs() < 1e-14);
        for k in 1..=49usize {
            let theta = 2.0 * PI * k as f64 / 100.0;
            let c = (10.0 * theta).cos();
            let plus = 1.3 * (1.0 + c) / 100.0;
            let minus = 1.3 * (1.0 - c) / 100.0;
            assert!((gammas[2 * k - 1] - plus).abs() < 1e-12, "k={k}");
            assert!((gammas[2 * k] - minus).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn gammas_bounded_by_two_gamma_over_n() {
        let g = build_graph(101, 17).unwrap();
        let cfg = TrapConfig::single_trap(g, 2.0).unwrap();
        for gamma in perturbative_gammas(&cfg).unwrap() {
            assert!(gamma >= -1e-15 && gamma <= 2.0 * 2.0 / 101.0 + 1e-12);
        }
    }

    #[test]
    fn dark_state_counts() {
        // n/(2(m-1)) integral: the count is m - 1 - lambda
        for (n, m) in [(100, 3), (100, 6), (100, 11), (100, 26), (100, 51)] {
            let g = build_graph(n, m).unwrap();
            assert_eq!(dark_state_count(&g), m - 1 - g.lambda(), "n={n} m={m}");
        }
        // odd prime n: no dark states at all
        for m in [3usize, 5, 11, 17, 50] {
            let g = build_graph(101, m).unwrap();
            assert_eq!(dark_state_count(&g), 0, "m={m}");
        }
        // outside the integral condition the count is NOT always zero
        assert_eq!(dark_state_count(&build_graph(100, 9).unwrap()), 1);
        assert_eq!(dark_state_count(&build_graph(100, 21).unwrap()), 9);
    }

    #[test]
    fn zero_gamma_count_matches_gamma_threshold_count() {
        for m in [3usize, 4, 6, 9, 11, 21, 26, 41, 51] {
            let g = build_graph(100, m).unwrap();
            let cfg = TrapConfig::single_trap(g, 1.0).unwrap();
            let gammas = perturbative_gammas(&cfg).unwrap();
            let tiny = gammas.iter().filter(|&&x| x < 1e-12).count();
            assert_eq!(tiny, dark_state_count(&g), "m={m}");
        }
    }

    #[test]
    fn plateau_prediction_examples() {
        assert!(
            (plateau_prediction(&build_graph(100, 26).unwrap()) - 24.0 / 99.0).abs() < 1e-15
        );
        assert_eq!(plateau_prediction(&build_graph(100, 4).unwrap()), 0.0);
        assert_eq!(plateau_prediction(&build_graph(101, 11).unwrap()), 0.0);
        // always below 1/2
        for n in [10usize, 20, 100, 101, 200] {
            for m in 3..n.min(60) {
                let g = build_graph(n, m).unwrap();
                assert!(plateau_prediction(&g) < 0.5, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn no_trap_means_no_decay() {
        let g = build_graph(12, 5).unwrap();
        let cfg = TrapConfig::single_trap(g, 0.0).unwrap();
        let result = survival_probability(&cfg, 20.0, 0.5).unwrap();
        for (t, s) in result.times.iter().zip(result.survival.iter()) {
            assert!((s - 1.0).abs() < 1e-8, "t={t}: survival {s}");
        }
    }

    #[test]
    fn norm_never_grows_under_trapping() {
        let g = build_graph(16, 6).unwrap();
        let cfg = TrapConfig::single_trap(g, 1.0).unwrap();
        let result = survival_probability(&cfg, 50.0, 0.5).unwrap();
        assert!(result.max_norm_increase < 1e-8, "{}", result.max_norm_increase);
        for s in &result.survival {
            assert!(*s >= -1e-12 && *s <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn clean_plateau_case_converges_to_prediction() {
        // n = 20, m = 6: every non-dark state decays at rate >= 1/20, so
        // the plateau is reached quickly and cleanly
        let g = build_graph(20, 6).unwrap();
        let cfg = TrapConfig::single_trap(g, 1.0).unwrap();
        let result = survival_probability(&cfg, 400.0, 1.0).unwrap();
        let predicted = plateau_prediction(&g);
        assert!((predicted - 4.0 / 19.0).abs() < 1e-15);
        assert!(
            (result.plateau_estimate - predicted).abs() < 0.1 * predicted,
            "plateau {} vs predicted {predicted}",
            result.plateau_estimate
        );
        assert!(result.converged);
    }

    #[test]
    fn approximation_limits() {
        let g = build_graph(100, 11).unwrap();
        let cfg = TrapConfig::single_trap(g, 1.0).unwrap();
        let gammas = perturbative_gammas(&cfg).unwrap();
        let series = survival_approximation(&gammas, 100, 1, &[0.0, 1000.0, 1e9]);
        assert!((series[0] - 100.0 / 99.0).abs() < 1e-12);
        // long-time limit equals the dark-state fraction
        let dark = dark_state_count(&g) as f64 / 99.0;
        assert!((series[2] - dark).abs() < 1e-12);
        // and at t = 1000 the approximation is already within 1e-3 of the
        // predicted plateau
        assert!((series[1] - plateau_prediction(&g)).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_run_parameters() {
        let g = build_graph(10, 4).unwrap();
        let cfg = TrapConfig::single_trap(g, 1.0).unwrap();
        assert!(survival_probability(&cfg, 0.0, 0.1).is_err());
        assert!(survival_probability(&cfg, 10.0, 0.0).is_err());
        assert!(survival_probability(&cfg, 1.0, 2.0).is_err());
    }
}
