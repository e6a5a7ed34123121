//! The end-to-end pipeline: sparsify, find any tour via the HCP
//! heuristic, improve it, then prove optimality with a warm-started
//! branch-and-bound — plus the two comparison modes: branch-and-bound on
//! the complete instance, and branch-and-bound on the penalty-completed
//! sparse instance without an HCP warm start.

use std::cell::{Cell, RefCell};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{branch_and_bound_with, BnbConfig, ExactStatus, OptimalResult};
use crate::hcp::{find_hamiltonian_cycle, HcpOutcome};
use crate::improve::improve_until_stable;
use crate::instance::{EuclideanInstance, Vertex};
use crate::sparse::{
    build_knn_candidates, complete_with_penalty, repair_min_degree, sparsification_stats,
    PenaltyCompletion, SparseGraph, SparsifyStats,
};
use crate::tour::{nearest_neighbor_tour, Tour};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveMode {
    #[serde(rename = "hybrid")]
    Hybrid,
    #[serde(rename = "sparse")]
    SparseNoWarm,
    #[serde(rename = "complete")]
    CompleteBaseline,
}

impl SolveMode {
    pub fn token(&self) -> &'static str {
        match self {
            SolveMode::Hybrid => "hybrid",
            SolveMode::SparseNoWarm => "sparse",
            SolveMode::CompleteBaseline => "complete",
        }
    }
}

impl std::str::FromStr for SolveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(SolveMode::Hybrid),
            "sparse" => Ok(SolveMode::SparseNoWarm),
            "complete" => Ok(SolveMode::CompleteBaseline),
            other => Err(Error::Contract(format!(
                "unknown mode {other:?} (expected hybrid, sparse, or complete)"
            ))),
        }
    }
}

impl std::fmt::Display for SolveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Timeout,
    Infeasible,
    NoTourFound,
    /// Reserved for recording external-tool runs in comparison tables;
    /// never produced by the solvers in this crate.
    Crash,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    GlobalOptimum,
    OptimumWithinCandidateSet,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTimings {
    pub sparsify_ms: u64,
    pub hcp_ms: u64,
    pub improve_ms: u64,
    pub exact_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance_name: String,
    pub mode: SolveMode,
    pub status: SolveStatus,
    /// Tour length under the original instance metric; penalty weights
    /// never appear here.
    pub value: Option<i64>,
    pub certification: Certification,
    /// Final certified bounds in the search's weight model (penalized for
    /// the sparse mode).
    pub lower_bound: f64,
    pub upper_bound: Option<i64>,
    /// Warm tour length handed to the exact stage, in the search's
    /// weight model.
    pub initial_upper_bound: Option<i64>,
    /// Sparse mode only: did the warm tour use a penalty edge?
    pub warm_used_penalty_edge: Option<bool>,
    /// Sparse mode only: the big-M weight.
    pub penalty_weight: Option<i64>,
    /// Candidate degree after any escalation; n-1 means complete.
    pub k_used: usize,
    pub hcp_found: bool,
    /// 1-based vertex order of the final tour.
    pub tour: Option<Vec<u32>>,
    pub timings: StageTimings,
    pub nodes_expanded: u64,
    pub hcp_effort: u64,
    pub edge_stats: SparsifyStats,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub k: usize,
    pub hcp_budget: u64,
    pub hcp_restarts: u32,
    pub improve_budget: u64,
    pub node_budget: u64,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
    pub seed: u64,
    pub mode: SolveMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k: 10,
            hcp_budget: 1_000_000,
            hcp_restarts: 3,
            improve_budget: 1_000_000,
            node_budget: 10_000_000,
            time_limit: None,
            seed: 0,
            mode: SolveMode::Hybrid,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Contract("k must be positive".into()));
        }
        if self.hcp_budget == 0
            || self.hcp_restarts == 0
            || self.improve_budget == 0
            || self.node_budget == 0
        {
            return Err(Error::Contract("all budgets must be positive".into()));
        }
        Ok(())
    }
}

/// Deterministic seed derivation (splitmix64 steps).
struct SeedStream {
    state: u64,
}

impl SeedStream {
    fn new(seed: u64, salt: u64) -> Self {
        SeedStream {
            state: seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        }
    }

    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

pub fn solve(instance: &EuclideanInstance, config: &PipelineConfig) -> Result<SolveReport> {
    match config.mode {
        SolveMode::Hybrid => solve_hybrid(instance, config),
        SolveMode::SparseNoWarm => solve_sparse_nowarm(instance, config),
        SolveMode::CompleteBaseline => solve_baseline(instance, config),
    }
}

fn ms(d: Duration) -> u64 {
    d.as_millis() as u64
}

fn map_exact_status(status: ExactStatus) -> SolveStatus {
    match status {
        ExactStatus::Optimal => SolveStatus::Optimal,
        ExactStatus::Infeasible => SolveStatus::Infeasible,
        // Node budget and wall-clock limit both surface as Timeout.
        ExactStatus::BudgetExceeded => SolveStatus::Timeout,
    }
}

/// Price the solver's tour under the original metric; the solver's own
/// arithmetic never leaks into the reported value.
fn revalidated_value(
    instance: &EuclideanInstance,
    tour: Option<&Tour>,
) -> Result<(Option<i64>, Option<Vec<u32>>)> {
    match tour {
        Some(t) => {
            let repriced = Tour::from_order(t.order().to_vec(), instance)?;
            let order_1based = repriced.order().iter().map(|&v| v + 1).collect();
            Ok((Some(repriced.length()), Some(order_1based)))
        }
        None => Ok((None, None)),
    }
}

/// k escalation ladder: the configured k, two doublings, then the
/// complete graph, all clamped to n-1.
fn escalation_ladder(k: usize, n: usize) -> Vec<usize> {
    let cap = n - 1;
    let mut ladder = vec![k.min(cap), (2 * k).min(cap), (4 * k).min(cap), cap];
    ladder.dedup();
    ladder
}

pub fn solve_hybrid(instance: &EuclideanInstance, config: &PipelineConfig) -> Result<SolveReport> {
    config.validate()?;
    if config.mode != SolveMode::Hybrid {
        return Err(Error::Contract("solve_hybrid requires mode hybrid".into()));
    }
    let deadline = config.time_limit.map(|d| Instant::now() + d);
    let n = instance.dimension();
    let mut timings = StageTimings::default();
    let mut hcp_effort: u64 = 0;
    let mut seeds = SeedStream::new(config.seed, 1);

    let mut graph: Option<SparseGraph> = None;
    let mut hcp_tour: Option<Vec<Vertex>> = None;
    let mut k_used = config.k.min(n - 1);

    'ladder: for k in escalation_ladder(config.k, n) {
        let t0 = Instant::now();
        let candidate = repair_min_degree(&build_knn_candidates(instance, k)?, instance);
        timings.sparsify_ms += ms(t0.elapsed());
        k_used = k;

        let t0 = Instant::now();
        for _ in 0..config.hcp_restarts {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                timings.hcp_ms += ms(t0.elapsed());
                return Ok(timeout_report(instance, config, &candidate, k, hcp_effort, timings));
            }
            match find_hamiltonian_cycle(&candidate, config.hcp_budget, seeds.next())? {
                HcpOutcome::Found { tour, effort } => {
                    hcp_effort += effort;
                    hcp_tour = Some(tour);
                    timings.hcp_ms += ms(t0.elapsed());
                    graph = Some(candidate);
                    break 'ladder;
                }
                HcpOutcome::NotFound { effort } => hcp_effort += effort,
                HcpOutcome::Infeasible { effort, .. } => {
                    // The graph itself has no tour; retrying seeds cannot
                    // help, only escalation can.
                    hcp_effort += effort;
                    break;
                }
            }
        }
        timings.hcp_ms += ms(t0.elapsed());
        graph = Some(candidate);
    }

    let graph = graph.expect("ladder ran at least once");
    let Some(order) = hcp_tour else {
        let stats = sparsification_stats(&graph);
        return Ok(SolveReport {
            instance_name: instance.name().to_string(),
            mode: SolveMode::Hybrid,
            status: SolveStatus::NoTourFound,
            value: None,
            certification: certification_for(&graph),
            lower_bound: 0.0,
            upper_bound: None,
            initial_upper_bound: None,
            warm_used_penalty_edge: None,
            penalty_weight: None,
            k_used,
            hcp_found: false,
            tour: None,
            timings,
            nodes_expanded: 0,
            hcp_effort,
            edge_stats: stats,
        });
    };

    let t0 = Instant::now();
    let raw = Tour::from_order_on_graph(order, &graph)?;
    let warm = improve_until_stable(&raw, &graph, config.improve_budget)?.tour;
    timings.improve_ms += ms(t0.elapsed());
    let initial_upper_bound = warm.length();

    // On every incumbent improvement, polish it and give the HCP
    // heuristic one fresh shot at a luckier tour.
    let extra_effort = Cell::new(0u64);
    let hook_seeds = RefCell::new(SeedStream::new(config.seed, 2));
    let improve_budget = config.improve_budget;
    let hcp_budget = config.hcp_budget;
    let graph_ref = &graph;
    let mut hook = |incumbent: &Tour| -> Option<Tour> {
        let polished = improve_until_stable(incumbent, graph_ref, improve_budget).ok()?;
        let mut best = polished.tour;
        let seed = hook_seeds.borrow_mut().next();
        if let Ok(HcpOutcome::Found { tour, effort }) =
            find_hamiltonian_cycle(graph_ref, hcp_budget, seed)
        {
            extra_effort.set(extra_effort.get() + effort);
            if let Ok(fresh) = Tour::from_order_on_graph(tour, graph_ref) {
                if let Ok(r) = improve_until_stable(&fresh, graph_ref, improve_budget) {
                    if r.tour.length() < best.length() {
                        best = r.tour;
                    }
                }
            }
        }
        (best.length() < incumbent.length()).then_some(best)
    };

    let t0 = Instant::now();
    let bnb = BnbConfig {
        node_budget: config.node_budget,
        deadline,
        ..BnbConfig::default()
    };
    let result = branch_and_bound_with(&graph, Some(&warm), &bnb, Some(&mut hook), None)?;
    timings.exact_ms += ms(t0.elapsed());
    hcp_effort += extra_effort.get();

    let (value, tour_1based) = revalidated_value(instance, result.tour.as_ref())?;
    Ok(SolveReport {
        instance_name: instance.name().to_string(),
        mode: SolveMode::Hybrid,
        status: map_exact_status(result.status),
        value,
        certification: certification_for(&graph),
        lower_bound: result.bounds.lower,
        upper_bound: result.bounds.upper,
        initial_upper_bound: Some(initial_upper_bound),
        warm_used_penalty_edge: None,
        penalty_weight: None,
        k_used,
        hcp_found: true,
        tour: tour_1based,
        timings,
        nodes_expanded: result.nodes_expanded,
        hcp_effort,
        edge_stats: sparsification_stats(&graph),
    })
}

fn timeout_report(
    instance: &EuclideanInstance,
    config: &PipelineConfig,
    graph: &SparseGraph,
    k_used: usize,
    hcp_effort: u64,
    timings: StageTimings,
) -> SolveReport {
    SolveReport {
        instance_name: instance.name().to_string(),
        mode: config.mode,
        status: SolveStatus::Timeout,
        value: None,
        certification: certification_for(graph),
        lower_bound: 0.0,
        upper_bound: None,
        initial_upper_bound: None,
        warm_used_penalty_edge: None,
        penalty_weight: None,
        k_used,
        hcp_found: false,
        tour: None,
        timings,
        nodes_expanded: 0,
        hcp_effort,
        edge_stats: sparsification_stats(graph),
    }
}

fn certification_for(graph: &SparseGraph) -> Certification {
    if graph.is_complete() {
        Certification::GlobalOptimum
    } else {
        Certification::OptimumWithinCandidateSet
    }
}

pub fn solve_baseline(
    instance: &EuclideanInstance,
    config: &PipelineConfig,
) -> Result<SolveReport> {
    config.validate()?;
    if config.mode != SolveMode::CompleteBaseline {
        return Err(Error::Contract(
            "solve_baseline requires mode complete".into(),
        ));
    }
    let deadline = config.time_limit.map(|d| Instant::now() + d);
    let n = instance.dimension();
    let mut timings = StageTimings::default();

    let t0 = Instant::now();
    let graph = build_knn_candidates(instance, n - 1)?;
    timings.sparsify_ms += ms(t0.elapsed());

    let t0 = Instant::now();
    let warm0 = nearest_neighbor_tour(&graph, 0)?;
    let warm = improve_until_stable(&warm0, &graph, config.improve_budget)?.tour;
    timings.improve_ms += ms(t0.elapsed());
    let initial_upper_bound = warm.length();

    let t0 = Instant::now();
    let bnb = BnbConfig {
        node_budget: config.node_budget,
        deadline,
        ..BnbConfig::default()
    };
    let result = branch_and_bound_with(&graph, Some(&warm), &bnb, None, None)?;
    timings.exact_ms += ms(t0.elapsed());

    let (value, tour_1based) = revalidated_value(instance, result.tour.as_ref())?;
    Ok(SolveReport {
        instance_name: instance.name().to_string(),
        mode: SolveMode::CompleteBaseline,
        status: map_exact_status(result.status),
        value,
        certification: Certification::GlobalOptimum,
        lower_bound: result.bounds.lower,
        upper_bound: result.bounds.upper,
        initial_upper_bound: Some(initial_upper_bound),
        warm_used_penalty_edge: None,
        penalty_weight: None,
        k_used: n - 1,
        hcp_found: false,
        tour: tour_1based,
        timings,
        nodes_expanded: result.nodes_expanded,
        hcp_effort: 0,
        edge_stats: sparsification_stats(&graph),
    })
}

pub fn solve_sparse_nowarm(
    instance: &EuclideanInstance,
    config: &PipelineConfig,
) -> Result<SolveReport> {
    config.validate()?;
    if config.mode != SolveMode::SparseNoWarm {
        return Err(Error::Contract(
            "solve_sparse_nowarm requires mode sparse".into(),
        ));
    }
    let deadline = config.time_limit.map(|d| Instant::now() + d);
    let n = instance.dimension();
    let mut timings = StageTimings::default();

    let t0 = Instant::now();
    let k = config.k.min(n - 1);
    let sparse = repair_min_degree(&build_knn_candidates(instance, k)?, instance);
    let completion = complete_with_penalty(&sparse);
    let penalized = completion.to_complete_graph();
    timings.sparsify_ms += ms(t0.elapsed());

    // Warm start over the penalized weights, exactly what a solver gets
    // when missing edges are reintroduced at a huge distance.
    let t0 = Instant::now();
    let warm0 = nearest_neighbor_tour(&penalized, 0)?;
    let warm = improve_until_stable(&warm0, &penalized, config.improve_budget)?.tour;
    timings.improve_ms += ms(t0.elapsed());
    let warm_used_penalty_edge = completion.cycle_uses_penalty_edge(warm.order());
    let initial_upper_bound = warm.length();

    let t0 = Instant::now();
    let bnb = BnbConfig {
        node_budget: config.node_budget,
        deadline,
        ..BnbConfig::default()
    };
    let result = branch_and_bound_with(&penalized, Some(&warm), &bnb, None, None)?;
    timings.exact_ms += ms(t0.elapsed());

    let (value, tour_1based) = revalidated_value(instance, result.tour.as_ref())?;
    Ok(SolveReport {
        instance_name: instance.name().to_string(),
        mode: SolveMode::SparseNoWarm,
        status: map_exact_status(result.status),
        value,
        certification: certification_for(&sparse),
        lower_bound: result.bounds.lower,
        upper_bound: result.bounds.upper,
        initial_upper_bound: Some(initial_upper_bound),
        warm_used_penalty_edge: Some(warm_used_penalty_edge),
        penalty_weight: Some(completion.penalty()),
        k_used: k,
        hcp_found: false,
        tour: tour_1based,
        timings,
        nodes_expanded: result.nodes_expanded,
        hcp_effort: 0,
        edge_stats: sparsification_stats(&sparse),
    })
}

/// Exposes the penalty completion a sparse-mode run would use, for
/// comparisons and tests.
pub fn sparse_mode_completion(
    instance: &EuclideanInstance,
    config: &PipelineConfig,
) -> Result<PenaltyCompletion> {
    let k = config.k.min(instance.dimension() - 1);
    let sparse = repair_min_degree(&build_knn_candidates(instance, k)?, instance);
    Ok(complete_with_penalty(&sparse))
}
