//! Brute-force cross-check of the exact causal classification.
//!
//! The cylinder is discretized into grid cells; every future-causal
//! center-to-center displacement within a Chebyshev stencil radius
//! becomes a directed edge. Closed causal (timelike) curves then show up
//! as directed cycles — strongly connected components with more than one
//! node — and reachable sets computed by breadth-first search approximate
//! the causal future from below. [`oracle_classify`] re-derives the
//! classification from the graph alone and compares sampled reachability
//! against the exact membership predicate, reporting both a soundness
//! count (graph-reachable pairs must be exact members) and an agreement
//! fraction (exact strictly-chronological pairs, well inside the cone,
//! that the graph also reaches).
//!
//! The oracle is deliberately independent of the exact classifier: it
//! never looks at the sign of `E`, only at per-edge vector classification
//! and graph structure.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::causality::{self, CausalClass, CausalMode};
use crate::curvature::GridSpec;
use crate::math;
use crate::metric::{
    CausalCharacter, CylinderPoint, FlatMetric, MetricError, TangentVector, TimeOrientation,
};

/// Fixed sampling seed: the oracle is a deterministic function of its
/// arguments, which makes refinement comparisons (same pairs, larger
/// stencil) exact.
const SAMPLE_SEED: u64 = 0x6f72_6163_6c65;
/// Sampled BFS sources per report.
const SAMPLE_SOURCES: usize = 32;
/// Sampled targets per source (32 × 16 = 512 ≥ 500 pairs).
const TARGETS_PER_SOURCE: usize = 16;
/// Sampled `(p, q, r)` triples for the diamond bound.
const DIAMOND_SAMPLES: usize = 1000;
/// Minimum fraction of nodes inside nontrivial timelike components for a
/// conclusive "totally vicious" verdict.
const COVERAGE_THRESHOLD: f64 = 0.99;
/// A sampled pair counts toward the agreement denominator only when its
/// displacement sits at least this many cell diagonals inside the cone.
const INTERIOR_MARGIN_DIAGONALS: f64 = 2.0;

/// Errors from oracle configuration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("stencil radius must be at least 1, got {radius}")]
    InvalidRadius { radius: usize },
    #[error("grid too coarse: nx = {nx} < 2*{radius}+1, stencil steps would wrap onto themselves")]
    TooCoarse { nx: usize, radius: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Causal strength of a graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// Strictly timelike displacement (at the graph's tolerance).
    Timelike,
    /// Null displacement, or one inside the tolerance band.
    NullCausal,
}

/// One admissible stencil step. Because the metric is constant, edge
/// admissibility depends only on the offset, never on the node, so the
/// whole graph is this list replicated at every cell (clipped at the `y`
/// boundary rows, wrapped in `x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilStep {
    pub di: i32,
    pub dj: i32,
    pub label: EdgeLabel,
}

/// The discretized causal graph: one node per grid cell, edges along
/// every future-causal center-to-center displacement with
/// `max(|Δi|, |Δj|) ≤ stencil_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalGraph {
    metric: FlatMetric,
    orientation: TimeOrientation,
    grid: GridSpec,
    stencil_radius: usize,
    eps: f64,
    steps: Vec<StencilStep>,
}

impl CausalGraph {
    /// Builds the graph for a metric with its canonical time orientation.
    ///
    /// A step `(Δi, Δj)` with displacement `v = (Δi·hx, Δj·hy)` is
    /// admitted when `classify_vector(v, eps)` is not spacelike and `v`
    /// is future directed; it is labeled [`EdgeLabel::Timelike`] when
    /// strictly timelike at the tolerance, [`EdgeLabel::NullCausal`]
    /// otherwise. Pure-`x` steps are included, so the closed null circle
    /// of an `E = 0` metric is representable. `nx ≥ 2·radius + 1` keeps
    /// every step's displacement the shortest signed representative of
    /// its wrapped difference.
    pub fn build(
        m: &FlatMetric,
        orientation: &TimeOrientation,
        grid: GridSpec,
        stencil_radius: usize,
        eps: f64,
    ) -> Result<CausalGraph, OracleError> {
        debug_assert_eq!(
            *orientation,
            TimeOrientation::canonical(m),
            "the causal graph expects the canonical time orientation",
        );
        if stencil_radius < 1 {
            return Err(OracleError::InvalidRadius { radius: stencil_radius });
        }
        if grid.nx() < 2 * stencil_radius + 1 {
            return Err(OracleError::TooCoarse { nx: grid.nx(), radius: stencil_radius });
        }

        let hx = grid.cell_step_x();
        let hy = grid.cell_step_y();
        let r = stencil_radius as i32;
        let mut steps = Vec::new();
        for dj in -r..=r {
            for di in -r..=r {
                if di == 0 && dj == 0 {
                    continue;
                }
                let v = TangentVector::new(f64::from(di) * hx, f64::from(dj) * hy);
                let character = m.classify_vector(v, eps)?;
                if character == CausalCharacter::Spacelike {
                    continue;
                }
                if m.pairing(v, orientation.vector()) >= 0.0 {
                    continue;
                }
                debug_assert_eq!(orientation.is_future(m, v), Ok(true));
                let label = match character {
                    CausalCharacter::Timelike => EdgeLabel::Timelike,
                    _ => EdgeLabel::NullCausal,
                };
                steps.push(StencilStep { di, dj, label });
            }
        }
        Ok(CausalGraph {
            metric: *m,
            orientation: *orientation,
            grid,
            stencil_radius,
            eps,
            steps,
        })
    }

    pub fn metric(&self) -> &FlatMetric {
        &self.metric
    }

    pub fn orientation(&self) -> &TimeOrientation {
        &self.orientation
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn stencil_radius(&self) -> usize {
        self.stencil_radius
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// The admissible steps shared by every node.
    pub fn steps(&self) -> &[StencilStep] {
        &self.steps
    }

    pub fn node_count(&self) -> usize {
        self.grid.len()
    }

    /// Node index of cell `(i, j)`.
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        self.grid.index(i, j)
    }

    /// Cell `(i, j)` of a node index.
    pub fn node_cell(&self, node: usize) -> (usize, usize) {
        (node % self.grid.nx(), node / self.grid.nx())
    }

    /// Center point of a node's cell.
    pub fn node_point(&self, node: usize) -> CylinderPoint {
        let (i, j) = self.node_cell(node);
        CylinderPoint::new(self.grid.center_x(i), self.grid.center_y(j))
    }

    /// Target node of one step from `node`: wraps in `x`, clips in `y`.
    pub fn step_target(&self, node: usize, step: &StencilStep) -> Option<usize> {
        let (i, j) = self.node_cell(node);
        let j2 = j as i64 + i64::from(step.dj);
        if j2 < 0 || j2 >= self.grid.ny() as i64 {
            return None;
        }
        let nx = self.grid.nx() as i64;
        let i2 = (i as i64 + i64::from(step.di)).rem_euclid(nx);
        Some(self.grid.index(i2 as usize, j2 as usize))
    }

    /// Total number of directed edges.
    pub fn edge_count(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.steps.iter().filter(|s| self.step_target(v, s).is_some()).count())
            .sum()
    }

    /// Breadth-first reachable set over all edges; `start` is reachable
    /// from itself by the empty path.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[start] = true;
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for step in &self.steps {
                if let Some(w) = self.step_target(v, step) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }
}

/// Cycle structure of a causal graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSummary {
    /// Some strongly connected component over all edges contains an edge
    /// (the graph has no self-loops, so: has more than one node).
    pub causal_cycle: bool,
    /// Same over the timelike-labeled subgraph.
    pub timelike_cycle: bool,
    /// Fraction of nodes inside nontrivial timelike components.
    pub timelike_scc_coverage: f64,
}

/// Exact (full-graph, no sampling) cycle detection via Tarjan's strongly
/// connected components, run once over all edges and once over the
/// timelike subgraph.
pub fn detect_cycles(graph: &CausalGraph) -> CycleSummary {
    let (causal_cycle, _) = strongly_connected(graph, false);
    let (timelike_cycle, covered) = strongly_connected(graph, true);
    CycleSummary {
        causal_cycle,
        timelike_cycle,
        timelike_scc_coverage: covered as f64 / graph.node_count() as f64,
    }
}

/// Iterative Tarjan; returns (any nontrivial component, nodes covered by
/// nontrivial components).
fn strongly_connected(graph: &CausalGraph, timelike_only: bool) -> (bool, usize) {
    const UNVISITED: u32 = u32::MAX;
    let n = graph.node_count();
    let steps = graph.steps();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, usize)> = Vec::new();
    let mut next = 0u32;
    let mut nontrivial_nodes = 0usize;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        frames.push((root as u32, 0));

        'frames: while let Some(&(v, frame_cursor)) = frames.last() {
            let vu = v as usize;
            let mut cursor = frame_cursor;
            while cursor < steps.len() {
                let step = &steps[cursor];
                cursor += 1;
                if timelike_only && step.label != EdgeLabel::Timelike {
                    continue;
                }
                let Some(w) = graph.step_target(vu, step) else {
                    continue;
                };
                if index[w] == UNVISITED {
                    frames.last_mut().expect("frame exists").1 = cursor;
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                    continue 'frames;
                }
                if on_stack[w] {
                    low[vu] = low[vu].min(index[w]);
                }
            }
            frames.pop();
            if low[vu] == index[vu] {
                let mut size = 0usize;
                loop {
                    let w = stack.pop().expect("component root stays on stack");
                    on_stack[w as usize] = false;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                if size > 1 {
                    nontrivial_nodes += size;
                }
            }
            if let Some(&(parent, _)) = frames.last() {
                let pu = parent as usize;
                low[pu] = low[pu].min(low[vu]);
            }
        }
    }
    (nontrivial_nodes > 0, nontrivial_nodes)
}

/// Why a report declined to name a class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InconclusiveReason {
    /// Timelike cycles exist but cover too few nodes to call the
    /// spacetime totally vicious.
    LowTimelikeCoverage { coverage: f64 },
    /// The graph is acyclic but sampled diamonds violated the `y` bound,
    /// so the globally hyperbolic call is unsafe.
    DiamondBoundViolations { violations: usize },
}

impl core::fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InconclusiveReason::LowTimelikeCoverage { coverage } => {
                write!(f, "low timelike coverage ({coverage})")
            }
            InconclusiveReason::DiamondBoundViolations { violations } => {
                write!(f, "diamond bound violations ({violations})")
            }
        }
    }
}

/// Outcome of the graph-side classification: a class, or an explicit
/// refusal. The oracle never silently guesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleVerdict {
    Conclusive(CausalClass),
    Inconclusive(InconclusiveReason),
}

/// Everything [`oracle_classify`] measured.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub causal_cycle_found: bool,
    pub timelike_cycle_found: bool,
    /// Fraction of nodes inside nontrivial timelike components.
    pub timelike_scc_coverage: f64,
    /// Fraction of nodes reachable by BFS from cell `(0, 0)`.
    pub reach_from_origin: f64,
    /// Sampled `(p, q, r)` triples with `diamond_membership` true but
    /// `p.y ≤ r.y ≤ q.y` false. Sampled only in acyclic graphs (the
    /// bound is a theorem only there; with closed causal curves every
    /// diamond is the whole cylinder), otherwise 0 of 0.
    pub diamond_bound_violations: usize,
    /// Triples examined (0 when the graph has a causal cycle).
    pub diamond_samples: usize,
    /// The graph-side verdict.
    pub verdict: OracleVerdict,
    /// Sampled source/target pairs (each BFS-checked).
    pub sampled_pairs: usize,
    /// Graph-reachable sampled pairs that the exact predicate rejects —
    /// must be zero; any entry is a bug in one of the two sides.
    pub soundness_violations: usize,
    /// Sampled pairs that are exact strictly-chronological members with
    /// displacement at least two cell diagonals inside the cone.
    pub interior_pairs: usize,
    /// Interior pairs the graph also reaches.
    pub interior_reached: usize,
    /// `interior_reached / interior_pairs` (1 when no pair qualifies).
    pub agreement_with_exact: f64,
}

impl OracleReport {
    /// The named class when the verdict is conclusive.
    pub fn inferred_class(&self) -> Option<CausalClass> {
        match self.verdict {
            OracleVerdict::Conclusive(class) => Some(class),
            OracleVerdict::Inconclusive(_) => None,
        }
    }
}

/// Distance from the displacement `(u, w)` (already wrapped / signed) to
/// the boundary of the exact chronological future, used to keep
/// borderline pairs out of the agreement denominator. Conservative: may
/// understate the distance, never overstates it.
fn chronological_margin(m: &FlatMetric, u: f64, w: f64) -> f64 {
    if m.e() > 0.0 {
        // Every displacement is chronological; there is no boundary.
        return f64::INFINITY;
    }
    if m.e() == 0.0 {
        // The chronological future is exactly the open upper half
        // cylinder; its boundary is the circle w = 0.
        return w;
    }
    // E < 0: the future is a union of solid cones, one per winding. For
    // each winding the distance to that cone's boundary is at least the
    // smaller of the distances to the two null lines; report the best
    // winding. Candidates: the interval ends of admissible windings and
    // the integers nearest the equidistant direction.
    let (d1, d2) = m.null_directions();
    let (s1, s2) = (d1.dx / d1.dy, d2.dx / d2.dy);
    let (s_lo, s_hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
    let (n_lo, n_hi) = (math::sqrt(s_lo * s_lo + 1.0), math::sqrt(s_hi * s_hi + 1.0));
    let lo = s_lo * w - u;
    let hi = s_hi * w - u;
    let mid = (s_hi * w * n_lo + s_lo * w * n_hi) / (n_lo + n_hi) - u;

    let margin_at = |k: f64| -> Option<f64> {
        let a = u + k;
        if m.quadratic_form(TangentVector::new(a, w)) >= 0.0 {
            return None;
        }
        let m1 = math::abs(a - w * s_lo) / n_lo;
        let m2 = math::abs(a - w * s_hi) / n_hi;
        Some(m1.min(m2))
    };

    let mut best = 0.0f64;
    for k in [
        math::ceil(lo),
        math::ceil(lo) + 1.0,
        math::floor(mid),
        math::ceil(mid),
        math::floor(hi) - 1.0,
        math::floor(hi),
    ] {
        if let Some(margin) = margin_at(k) {
            best = best.max(margin);
        }
    }
    best
}

/// Re-derives the causal classification from the discretized graph and
/// cross-checks sampled reachability against the exact membership
/// predicate.
///
/// Verdict rules: timelike cycles covering ≥ 99% of nodes ⇒ totally
/// vicious; a causal but no timelike cycle ⇒ chronological non-causal;
/// no causal cycle and no diamond bound violations ⇒ globally
/// hyperbolic; anything else is an explicit
/// [`OracleVerdict::Inconclusive`].
///
/// Sampling (512 node pairs, 1000 diamond triples) is deterministic, so
/// two runs with identical arguments produce identical reports and a
/// stencil refinement at a fixed grid compares the same pairs.
pub fn oracle_classify(
    m: &FlatMetric,
    grid: GridSpec,
    stencil_radius: usize,
    eps: f64,
) -> Result<OracleReport, OracleError> {
    let orientation = TimeOrientation::canonical(m);
    let graph = CausalGraph::build(m, &orientation, grid, stencil_radius, eps)?;
    let cycles = detect_cycles(&graph);

    let origin_reach = graph.reachable_from(0);
    let reach_from_origin =
        origin_reach.iter().filter(|&&r| r).count() as f64 / graph.node_count() as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let n = graph.node_count();
    let diag = math::sqrt(
        grid.cell_step_x() * grid.cell_step_x() + grid.cell_step_y() * grid.cell_step_y(),
    );
    let min_margin = INTERIOR_MARGIN_DIAGONALS * diag;

    let mut sampled_pairs = 0usize;
    let mut soundness_violations = 0usize;
    let mut interior_pairs = 0usize;
    let mut interior_reached = 0usize;
    for _ in 0..SAMPLE_SOURCES {
        let source = rng.random_range(0..n);
        let reachable = graph.reachable_from(source);
        let ps = graph.node_point(source);
        for _ in 0..TARGETS_PER_SOURCE {
            let target = rng.random_range(0..n);
            let pt = graph.node_point(target);
            sampled_pairs += 1;

            let reached = reachable[target];
            if reached
                && !causality::future_membership(m, &orientation, ps, pt, CausalMode::Causal)
            {
                soundness_violations += 1;
            }
            if causality::future_membership(m, &orientation, ps, pt, CausalMode::Chronological) {
                let u = math::wrap_unit(pt.x() - ps.x());
                let w = pt.y() - ps.y();
                if chronological_margin(m, u, w) >= min_margin {
                    interior_pairs += 1;
                    if reached {
                        interior_reached += 1;
                    }
                }
            }
        }
    }
    let agreement_with_exact = if interior_pairs == 0 {
        1.0
    } else {
        interior_reached as f64 / interior_pairs as f64
    };

    let mut diamond_samples = 0usize;
    let mut diamond_bound_violations = 0usize;
    if !cycles.causal_cycle {
        let random_point = |rng: &mut ChaCha8Rng| {
            CylinderPoint::new(
                rng.random::<f64>(),
                rng.random_range(grid.y_min()..grid.y_max()),
            )
        };
        for _ in 0..DIAMOND_SAMPLES {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let r = random_point(&mut rng);
            diamond_samples += 1;
            if causality::diamond_membership(m, &orientation, p, q, r)
                && !(p.y() <= r.y() && r.y() <= q.y())
            {
                diamond_bound_violations += 1;
            }
        }
    }

    let verdict = if cycles.timelike_cycle {
        if cycles.timelike_scc_coverage >= COVERAGE_THRESHOLD {
            OracleVerdict::Conclusive(CausalClass::TotallyVicious)
        } else {
            OracleVerdict::Inconclusive(InconclusiveReason::LowTimelikeCoverage {
                coverage: cycles.timelike_scc_coverage,
            })
        }
    } else if cycles.causal_cycle {
        OracleVerdict::Conclusive(CausalClass::ChronologicalNonCausal)
    } else if diamond_bound_violations == 0 {
        OracleVerdict::Conclusive(CausalClass::GloballyHyperbolic)
    } else {
        OracleVerdict::Inconclusive(InconclusiveReason::DiamondBoundViolations {
            violations: diamond_bound_violations,
        })
    };

    Ok(OracleReport {
        causal_cycle_found: cycles.causal_cycle,
        timelike_cycle_found: cycles.timelike_cycle,
        timelike_scc_coverage: cycles.timelike_scc_coverage,
        reach_from_origin,
        diamond_bound_violations,
        diamond_samples,
        verdict,
        sampled_pairs,
        soundness_violations,
        interior_pairs,
        interior_reached,
        agreement_with_exact,
    })
}
