//! Algorithms that either produce a quasi-kernel of size at most half the
//! order or exhibit a forbidden induced pattern explaining why they could
//! not.
//!
//! Each improvement loop starts from the inductive quasi-kernel
//! construction and applies explicit reduction rules; global minimality is
//! never needed. Invariants the correctness arguments lean on are checked
//! at run time and reported as internal errors instead of being silently
//! trusted.

use crate::digraph::{CompositionSpec, Digraph};
use crate::error::{Error, Result};
use crate::qk::{
    is_good_quasi_kernel, is_quasi_kernel, kernel_dag, kernel_exact, maximalize_qk,
    quasi_kernel_cl, DEFAULT_KERNEL_BUDGET, DEFAULT_KERNEL_PERFECT_BUDGET,
    is_kernel_perfect_exact,
};
use crate::recognition::{
    is_dag, matching_decomposition, verify_witness, ForbiddenKind, ForbiddenWitness,
    MatchingDecomposition,
};
use crate::vertex_set::VertexSet;

/// One step of an improvement loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// Removed an unmatched member that has an arc into the first
    /// in-neighbourhood (it is covered at distance two through the matched
    /// side).
    DropCovered { removed: usize },
    /// Swapped a second-neighbourhood vertex in for its in-neighbours
    /// inside the quasi-kernel.
    SwapIn { added: usize, removed: Vec<usize> },
    /// Replaced the quasi-kernel by a strictly smaller refinement built
    /// from a quasi-kernel of the second in-neighbourhood.
    Shrink { from: usize, to: usize },
}

#[derive(Clone, Debug)]
pub enum SmallQkResult {
    QuasiKernel { q: VertexSet, trace: Vec<ReductionStep> },
    Witness(ForbiddenWitness),
}

/// Outcome of a size-halving algorithm: a verified quasi-kernel of size at
/// most half the order together with its reduction trace, or a verified
/// forbidden-pattern witness. `steps` counts improvement iterations.
#[derive(Clone, Debug)]
pub struct SmallQkOutcome {
    pub result: SmallQkResult,
    pub steps: usize,
}

impl SmallQkOutcome {
    pub fn quasi_kernel(&self) -> Option<&VertexSet> {
        match &self.result {
            SmallQkResult::QuasiKernel { q, .. } => Some(q),
            SmallQkResult::Witness(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&ForbiddenWitness> {
        match &self.result {
            SmallQkResult::QuasiKernel { .. } => None,
            SmallQkResult::Witness(w) => Some(w),
        }
    }
}

struct LoopCtx {
    md: MatchingDecomposition,
    dist1: VertexSet,
    n2: VertexSet,
}

impl LoopCtx {
    fn compute(d: &Digraph, q: &VertexSet) -> Result<Self> {
        let md = matching_decomposition(d, q)?;
        let dist1 = d.in_neighborhood(q);
        let n2 = d.second_in_neighborhood(q);
        Ok(LoopCtx { md, dist1, n2 })
    }
}

enum StepOutcome {
    Progress(ReductionStep),
    /// Neither reduction applies; `v` is the lowest second-neighbourhood
    /// vertex with two in-neighbours among the unmatched members, and it
    /// has an in-neighbour on the matched side.
    Stable { v: usize },
}

/// Try the two generic reductions. Assumes the quasi-kernel is not small,
/// so the counting argument guarantees a candidate vertex exists.
fn reduce_step(d: &Digraph, q: &mut VertexSet, ctx: &LoopCtx) -> Result<StepOutcome> {
    // Drop rule: an unmatched member with an arc into the first
    // in-neighbourhood is itself covered at distance two.
    if let Some(v) = ctx
        .md
        .a
        .iter()
        .find(|&v| d.out_neighbors(v).iter().any(|&w| ctx.dist1.contains(w)))
    {
        q.remove(v);
        return Ok(StepOutcome::Progress(ReductionStep::DropCovered { removed: v }));
    }
    // With the drop rule exhausted and no sinks, every unmatched member
    // sends its out-arcs into the second in-neighbourhood, which is
    // strictly smaller than the unmatched side.
    if ctx.n2.len() >= ctx.md.a.len() {
        return Err(Error::Internal(
            "second in-neighbourhood is not smaller than the unmatched side".into(),
        ));
    }
    let v = ctx
        .n2
        .iter()
        .find(|&v| {
            d.in_neighbors(v)
                .iter()
                .filter(|&&u| ctx.md.a.contains(u))
                .count()
                >= 2
        })
        .ok_or_else(|| {
            Error::Internal("no second-neighbourhood vertex with two unmatched in-neighbours".into())
        })?;
    if d.in_neighbors(v).iter().any(|&u| ctx.md.m1.contains(u)) {
        return Ok(StepOutcome::Stable { v });
    }
    Ok(StepOutcome::Progress(swap_in(d, q, v)))
}

/// Replace the in-neighbours of `v` inside `q` (all unmatched) by `v`.
fn swap_in(d: &Digraph, q: &mut VertexSet, v: usize) -> ReductionStep {
    let removed: Vec<usize> = d
        .in_neighbors(v)
        .iter()
        .copied()
        .filter(|&u| q.contains(u))
        .collect();
    for &u in &removed {
        q.remove(u);
    }
    q.insert(v);
    ReductionStep::SwapIn { added: v, removed }
}

fn check_progress(d: &Digraph, q: &VertexSet, before: usize) -> Result<()> {
    if q.len() >= before {
        return Err(Error::Internal("reduction did not shrink the quasi-kernel".into()));
    }
    if !is_quasi_kernel(d, q) {
        return Err(Error::Internal("reduction lost the quasi-kernel property".into()));
    }
    Ok(())
}

fn small_outcome(d: &Digraph, q: VertexSet, trace: Vec<ReductionStep>, steps: usize) -> Result<SmallQkOutcome> {
    if 2 * q.len() > d.order() {
        return Err(Error::Internal("quasi-kernel is not small".into()));
    }
    if !is_quasi_kernel(d, &q) {
        return Err(Error::Internal("result is not a quasi-kernel".into()));
    }
    Ok(SmallQkOutcome { result: SmallQkResult::QuasiKernel { q, trace }, steps })
}

fn witness_outcome(d: &Digraph, w: ForbiddenWitness, steps: usize) -> Result<SmallQkOutcome> {
    if !verify_witness(d, &w) {
        return Err(Error::Internal(format!("assembled witness failed verification: {w:?}")));
    }
    Ok(SmallQkOutcome { result: SmallQkResult::Witness(w), steps })
}

/// Small quasi-kernel in a sink-free digraph, or an induced anti-claw.
///
/// Improvement loop: while the quasi-kernel is not small, apply the drop or
/// swap reduction; if neither applies, the candidate vertex together with
/// two unmatched in-neighbours and one matched in-neighbour induces an
/// anti-claw. Each iteration strictly shrinks the quasi-kernel.
pub fn small_qk_anti_claw_free(d: &Digraph) -> Result<SmallQkOutcome> {
    if d.order() == 0 {
        return Err(Error::EmptyDigraph);
    }
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    let n = d.order();
    let mut q = quasi_kernel_cl(d);
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if 2 * q.len() <= n {
            return small_outcome(d, q, trace, steps);
        }
        let ctx = LoopCtx::compute(d, &q)?;
        let before = q.len();
        match reduce_step(d, &mut q, &ctx)? {
            StepOutcome::Progress(step) => {
                check_progress(d, &q, before)?;
                trace.push(step);
                steps += 1;
            }
            StepOutcome::Stable { v } => {
                let mut tails: Vec<usize> = d
                    .in_neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| ctx.md.a.contains(u))
                    .take(2)
                    .collect();
                let m1 = d
                    .in_neighbors(v)
                    .iter()
                    .copied()
                    .find(|&u| ctx.md.m1.contains(u))
                    .expect("stable outcome has a matched in-neighbour");
                tails.push(m1);
                tails.sort_unstable();
                let w = ForbiddenWitness {
                    kind: ForbiddenKind::AntiClaw,
                    center: v,
                    tails,
                    extra_arc: None,
                };
                return witness_outcome(d, w, steps);
            }
        }
    }
}

/// Small quasi-kernel in a sink-free digraph, or an induced pattern of four
/// independent-ish in-neighbours of a common head (with at most one arc
/// among them).
///
/// Runs the generic reductions; when they stall, refines through a maximal
/// quasi-kernel of the second in-neighbourhood. If even the refinement
/// cannot shrink the quasi-kernel, a counting argument pins a vertex with
/// four in-neighbours forming the forbidden pattern.
pub fn small_qk_k41_free(d: &Digraph) -> Result<SmallQkOutcome> {
    if d.order() == 0 {
        return Err(Error::EmptyDigraph);
    }
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    let n = d.order();
    let mut q = quasi_kernel_cl(d);
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if 2 * q.len() <= n {
            return small_outcome(d, q, trace, steps);
        }
        let ctx = LoopCtx::compute(d, &q)?;
        let before = q.len();
        match reduce_step(d, &mut q, &ctx)? {
            StepOutcome::Progress(step) => {
                check_progress(d, &q, before)?;
                trace.push(step);
                steps += 1;
                continue;
            }
            StepOutcome::Stable { .. } => {}
        }

        // Refinement phase: quasi-kernel of the second in-neighbourhood,
        // maximalized so its own second in-neighbourhood has in-neighbours
        // inside it.
        let sub = d.induced(&ctx.n2);
        let q_tilde_sub = maximalize_qk(&sub.digraph, &quasi_kernel_cl(&sub.digraph))?;
        let q_tilde = sub.to_parent(&q_tilde_sub, n);
        let in_q_tilde = d.in_neighborhood(&q_tilde);

        let mut q2 = q.union(&q_tilde);
        q2.subtract(&in_q_tilde);
        for a in ctx.md.a.iter() {
            if q2.contains(a)
                && d.out_neighbors(a).iter().any(|&w| in_q_tilde.contains(w))
            {
                q2.remove(a);
            }
        }
        if q2.len() < q.len() {
            let step = ReductionStep::Shrink { from: q.len(), to: q2.len() };
            q = q2;
            check_progress(d, &q, before)?;
            trace.push(step);
            steps += 1;
            continue;
        }

        // Witness phase. Unmatched members whose out-arcs reach the
        // refinement or its in-neighbourhood inside the second
        // neighbourhood cannot serve as tails.
        let a_rest: Vec<usize> = ctx
            .md
            .a
            .iter()
            .filter(|&a| {
                !d.out_neighbors(a).iter().any(|&w| {
                    q_tilde.contains(w) || (in_q_tilde.contains(w) && ctx.n2.contains(w))
                })
            })
            .collect();
        let n2_tilde = sub.to_parent(&sub.digraph.second_in_neighborhood(&q_tilde_sub), n);
        if a_rest.len() < n2_tilde.len() + 2 {
            return Err(Error::Internal(
                "counting bound on unreached unmatched members failed".into(),
            ));
        }
        let a_rest_set = VertexSet::from_ids(n, a_rest.iter().copied());
        let v = n2_tilde
            .iter()
            .find(|&v| {
                d.in_neighbors(v)
                    .iter()
                    .filter(|&&u| a_rest_set.contains(u))
                    .count()
                    >= 2
            })
            .ok_or_else(|| {
                Error::Internal("no doubly-fed vertex in the refined second neighbourhood".into())
            })?;
        let m1 = d
            .in_neighbors(v)
            .iter()
            .copied()
            .find(|&u| ctx.md.m1.contains(u));
        let Some(m1) = m1 else {
            // No matched in-neighbour: the swap reduction applies to this
            // vertex after all.
            let step = swap_in(d, &mut q, v);
            check_progress(d, &q, before)?;
            trace.push(step);
            steps += 1;
            continue;
        };
        let t_tilde = d
            .in_neighbors(v)
            .iter()
            .copied()
            .find(|&u| q_tilde.contains(u))
            .ok_or_else(|| {
                Error::Internal("maximal refinement left a vertex without an in-neighbour".into())
            })?;
        let mut tails: Vec<usize> = d
            .in_neighbors(v)
            .iter()
            .copied()
            .filter(|&u| a_rest_set.contains(u))
            .take(2)
            .collect();
        tails.push(m1);
        tails.push(t_tilde);
        tails.sort_unstable();
        // The only arc that can exist among the tails runs from the
        // matched side into the refinement.
        let extra_arc = d.has_arc(m1, t_tilde).then_some((m1, t_tilde));
        let kind = if extra_arc.is_some() {
            ForbiddenKind::K41Plus
        } else {
            ForbiddenKind::K41
        };
        let w = ForbiddenWitness { kind, center: v, tails, extra_arc };
        return witness_outcome(d, w, steps);
    }
}

/// Structure that must appear in any digraph without a small quasi-kernel:
/// either one vertex with five in-neighbours, three of them independent, or
/// two fully non-adjacent arcs whose four endpoints each have four
/// in-neighbours, three of them independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    HeavyVertex {
        vertex: usize,
        independent_in_neighbors: [usize; 3],
    },
    HeavyArcPair {
        first: (usize, usize),
        second: (usize, usize),
    },
}

/// First obstruction in deterministic order, or `None`. A digraph without
/// one always has a small quasi-kernel.
pub fn in_degree_obstruction(d: &Digraph) -> Option<Obstruction> {
    for v in d.vertices() {
        if d.in_degree(v) >= 5 {
            if let Some(trip) = independent_triple(d, d.in_neighbors(v)) {
                return Some(Obstruction::HeavyVertex {
                    vertex: v,
                    independent_in_neighbors: trip,
                });
            }
        }
    }
    let heavy: Vec<bool> = d
        .vertices()
        .map(|v| d.in_degree(v) >= 4 && independent_triple(d, d.in_neighbors(v)).is_some())
        .collect();
    let heavy_arcs: Vec<(usize, usize)> = d
        .arcs()
        .filter(|&(u, v)| heavy[u] && heavy[v])
        .collect();
    for (i, &e1) in heavy_arcs.iter().enumerate() {
        for &e2 in &heavy_arcs[i + 1..] {
            let ends1 = [e1.0, e1.1];
            let ends2 = [e2.0, e2.1];
            let distinct = ends1.iter().all(|a| !ends2.contains(a));
            if distinct
                && ends1
                    .iter()
                    .all(|&a| ends2.iter().all(|&b| !d.adjacent(a, b)))
            {
                return Some(Obstruction::HeavyArcPair { first: e1, second: e2 });
            }
        }
    }
    None
}

fn independent_triple(d: &Digraph, candidates: &[usize]) -> Option<[usize; 3]> {
    for (i, &a) in candidates.iter().enumerate() {
        for (j, &b) in candidates.iter().enumerate().skip(i + 1) {
            if d.adjacent(a, b) {
                continue;
            }
            for &c in &candidates[j + 1..] {
                if !d.adjacent(a, c) && !d.adjacent(b, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

fn kernel_of(d: &Digraph) -> Result<Option<VertexSet>> {
    if is_dag(d) {
        kernel_dag(d).map(Some)
    } else {
        kernel_exact(d, DEFAULT_KERNEL_BUDGET)
    }
}

/// Shared core of the second-neighbourhood kernel construction.
///
/// Prunes unmatched members without an out-arc into the second
/// in-neighbourhood, then either keeps the quasi-kernel (when the unmatched
/// side is no bigger than the second in-neighbourhood) or assembles the
/// matched side with a kernel of the second in-neighbourhood.
///
/// With `allow_drops`, an unmatched member without any out-arc in the
/// current universe is removed from the universe as well — its coverage
/// must be provided externally by the caller (vertices dropped this way
/// have all their original out-arcs into the caller's sink layer).
/// Returns the result and the surviving universe, both in `d` coordinates.
fn second_kernel_core(
    d: &Digraph,
    q0: &VertexSet,
    allow_drops: bool,
) -> Result<(VertexSet, VertexSet)> {
    let n = d.order();
    let mut kept = VertexSet::full(n);
    let mut q = q0.clone();
    'rebuild: loop {
        let sub = d.induced(&kept);
        let mut q_sub = VertexSet::new(sub.digraph.order());
        for v in q.iter() {
            q_sub.insert(sub.to_sub(v).expect("quasi-kernel lives in the kept universe"));
        }
        loop {
            // Both prune rules preserve this; the partition argument for
            // the stuck classification depends on it.
            debug_assert!(is_quasi_kernel(&sub.digraph, &q_sub));
            let md = matching_decomposition(&sub.digraph, &q_sub)?;
            let n2 = sub.digraph.second_in_neighborhood(&q_sub);
            let stuck = md
                .a
                .iter()
                .find(|&a| !sub.digraph.out_neighbors(a).iter().any(|&w| n2.contains(w)));
            if let Some(a) = stuck {
                let old = sub.old_ids[a];
                if sub.digraph.out_degree(a) == 0 {
                    if !allow_drops {
                        return Err(Error::Internal(
                            "sink inside the quasi-kernel of a sink-free digraph".into(),
                        ));
                    }
                    kept.remove(old);
                    q.remove(old);
                    continue 'rebuild;
                }
                q_sub.remove(a);
                q.remove(old);
                continue;
            }
            let sub2 = sub.digraph.induced(&n2);
            let k2_sub2 = kernel_of(&sub2.digraph)?.ok_or_else(|| {
                Error::Precondition("second in-neighbourhood has no kernel".into())
            })?;
            let k2 = sub2.to_parent(&k2_sub2, sub.digraph.order());
            let result_sub = if md.a.len() <= n2.len() {
                q_sub.clone()
            } else {
                let mut r = md.m1.union(&k2);
                r.subtract(&sub.digraph.in_neighborhood(&k2));
                r
            };
            if !is_quasi_kernel(&sub.digraph, &result_sub) {
                return Err(Error::Internal("second-kernel construction is not a quasi-kernel".into()));
            }
            if 2 * result_sub.len() > kept.len() {
                return Err(Error::Internal("second-kernel construction is not small".into()));
            }
            return Ok((sub.to_parent(&result_sub, n), kept));
        }
    }
}

/// Small quasi-kernel from a quasi-kernel whose second in-neighbourhood
/// induces a subdigraph with a kernel (found by the acyclic special case
/// or exhaustive search; failure to find one is reported).
pub fn small_qk_via_second_kernel(d: &Digraph, q: &VertexSet) -> Result<VertexSet> {
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    let (result, _) = second_kernel_core(d, q, false)?;
    Ok(result)
}

/// Small quasi-kernel from a good quasi-kernel: repeatedly replace the
/// quasi-kernel by its matched side, which stays good, until nothing is
/// unmatched; then the quasi-kernel is no bigger than its in-neighbourhood.
pub fn small_qk_good(d: &Digraph, q_good: &VertexSet) -> Result<VertexSet> {
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    if !is_good_quasi_kernel(d, q_good) {
        return Err(Error::NotGoodQuasiKernel);
    }
    let mut q = q_good.clone();
    loop {
        let md = matching_decomposition(d, &q)?;
        if md.a.is_empty() {
            if 2 * q.len() > d.order() {
                return Err(Error::Internal("matched quasi-kernel is not small".into()));
            }
            return Ok(q);
        }
        q = md.m1;
        if !is_good_quasi_kernel(d, &q) {
            return Err(Error::Internal("matched side lost goodness".into()));
        }
    }
}

/// Quasi-kernel of size at most `(n + |S| - |N⁻(S)|) / 2` where `S` is the
/// sink set, given a partition of the vertices outside the closed
/// in-neighbourhood of `S` into two kernel-perfect parts.
///
/// Kernel-perfectness of a part is trusted when the part is acyclic and
/// verified exhaustively when it is small enough; anything else is
/// rejected.
pub fn small_qk_partitioned(d: &Digraph, v1: &VertexSet, v2: &VertexSet) -> Result<VertexSet> {
    let n = d.order();
    let sinks = d.sinks();
    let sink_in = d.in_neighborhood(&sinks);
    let mut rest = VertexSet::full(n);
    rest.subtract(&sinks);
    rest.subtract(&sink_in);

    if v1.universe() != n || v2.universe() != n {
        return Err(Error::InvalidPartition("universe mismatch".into()));
    }
    if !v1.is_disjoint(v2) || v1.union(v2) != rest {
        return Err(Error::InvalidPartition(
            "parts must partition the vertices outside the closed sink in-neighbourhood".into(),
        ));
    }
    for part in [v1, v2] {
        let sub = d.induced(part);
        if is_dag(&sub.digraph) {
            continue;
        }
        if sub.digraph.order() <= DEFAULT_KERNEL_PERFECT_BUDGET {
            if !is_kernel_perfect_exact(&sub.digraph, DEFAULT_KERNEL_PERFECT_BUDGET)? {
                return Err(Error::InvalidPartition("part is not kernel-perfect".into()));
            }
        } else {
            return Err(Error::Precondition(
                "cannot certify kernel-perfectness of a large cyclic part".into(),
            ));
        }
    }

    // Every part-two vertex must have an out-neighbour in part one; move
    // the ones that do not (part one plus such a vertex stays
    // kernel-perfect).
    let mut v1 = v1.clone();
    let mut v2 = v2.clone();
    loop {
        let moved = v2
            .iter()
            .find(|&v| !d.out_neighbors(v).iter().any(|&w| v1.contains(w)));
        match moved {
            Some(v) => {
                v2.remove(v);
                v1.insert(v);
            }
            None => break,
        }
    }

    let dp = d.induced(&rest);
    let np = dp.digraph.order();
    let mut v1_sub = VertexSet::new(np);
    for v in v1.iter() {
        v1_sub.insert(dp.to_sub(v).expect("part lives outside the sink layer"));
    }
    let sub1 = dp.digraph.induced(&v1_sub);
    let k_sub1 = kernel_of(&sub1.digraph)?
        .ok_or_else(|| Error::Precondition("first part has no kernel".into()))?;
    let k = sub1.to_parent(&k_sub1, np);
    if !is_quasi_kernel(&dp.digraph, &k) {
        return Err(Error::Internal(
            "kernel of the first part is not a quasi-kernel outside the sink layer".into(),
        ));
    }

    let (core, _kept) = second_kernel_core(&dp.digraph, &k, true)?;
    let mut result = dp.to_parent(&core, n);
    result.union_with(&sinks);

    if !is_quasi_kernel(d, &result) {
        return Err(Error::Internal("assembled set is not a quasi-kernel".into()));
    }
    if 2 * result.len() > n + sinks.len() - sink_in.len() {
        return Err(Error::Internal("assembled quasi-kernel exceeds the sink-adjusted bound".into()));
    }
    Ok(result)
}

/// Lift a good quasi-kernel of the template through a composition: the
/// union of quasi-kernels of the parts sitting at template positions in
/// the good quasi-kernel is a good quasi-kernel of the whole composition.
pub fn lift_good_composition(spec: &CompositionSpec, q_t: &VertexSet) -> Result<VertexSet> {
    let t = spec.template.order();
    if t < 2 {
        return Err(Error::InvalidInput("composition template needs at least two vertices".into()));
    }
    if q_t.universe() != t {
        return Err(Error::InvalidInput("template set universe mismatch".into()));
    }
    if spec.parts.iter().any(|p| p.order() == 0) {
        return Err(Error::InvalidInput("composition parts must be non-empty".into()));
    }
    if !is_good_quasi_kernel(&spec.template, q_t) {
        return Err(Error::NotGoodQuasiKernel);
    }
    let comp = spec.compose();
    let mut q = VertexSet::new(comp.digraph.order());
    for i in q_t.iter() {
        for v in quasi_kernel_cl(&spec.parts[i]).iter() {
            q.insert(comp.global_id(i, v));
        }
    }
    if !is_good_quasi_kernel(&comp.digraph, &q) {
        return Err(Error::Internal("lifted set is not a good quasi-kernel".into()));
    }
    Ok(q)
}
