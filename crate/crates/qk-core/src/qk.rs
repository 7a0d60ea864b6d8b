//! Kernel and quasi-kernel verification, the inductive quasi-kernel
//! construction, refinements, and exact search oracles.
//!
//! The exact oracles are deliberately brute force: they exist to check the
//! polynomial constructions at desk scale, so they favour a deterministic
//! search order (lexicographically smallest solution first) over speed.

use crate::digraph::{Digraph, NeighborhoodPartition};
use crate::error::{Error, Result};
use crate::recognition::{is_semicomplete, topological_order};
use crate::vertex_set::VertexSet;

pub const DEFAULT_KERNEL_BUDGET: usize = 20;
pub const DEFAULT_KERNEL_PERFECT_BUDGET: usize = 10;

/// True iff `k` is independent and every outside vertex has an arc into `k`.
pub fn verify_kernel(d: &Digraph, k: &VertexSet) -> bool {
    if !d.is_independent(k) {
        return false;
    }
    let p = d.distance_partition(k);
    p.dist2.is_empty() && p.far.is_empty()
}

/// True iff `q` is independent and every outside vertex reaches `q` by a
/// directed path of one or two arcs. The distance partition is returned as
/// the certificate either way.
pub fn verify_quasi_kernel(d: &Digraph, q: &VertexSet) -> (bool, NeighborhoodPartition) {
    let p = d.distance_partition(q);
    let ok = d.is_independent(q) && p.far.is_empty();
    (ok, p)
}

pub fn is_quasi_kernel(d: &Digraph, q: &VertexSet) -> bool {
    verify_quasi_kernel(d, q).0
}

/// A quasi-kernel is good if every member has an out-neighbour inside the
/// in-neighbourhood of the quasi-kernel.
pub fn is_good_quasi_kernel(d: &Digraph, q: &VertexSet) -> bool {
    let (ok, p) = verify_quasi_kernel(d, q);
    ok && q
        .iter()
        .all(|u| d.out_neighbors(u).iter().any(|&w| p.dist1.contains(w)))
}

/// The inductive quasi-kernel construction: pick the lowest vertex `v`,
/// recurse on the digraph minus the closed in-neighbourhood of `v`, and add
/// `v` back unless it already has an out-neighbour in the recursive result.
///
/// Implemented iteratively (pivot stack) so order in the thousands is fine.
/// Works on any digraph, sinks and the empty digraph included.
pub fn quasi_kernel_cl(d: &Digraph) -> VertexSet {
    let n = d.order();
    let mut alive = VertexSet::full(n);
    let mut pivots = Vec::new();
    while let Some(v) = alive.first() {
        pivots.push(v);
        alive.remove(v);
        for &u in d.in_neighbors(v) {
            if alive.contains(u) {
                alive.remove(u);
            }
        }
    }
    let mut q = VertexSet::new(n);
    for &v in pivots.iter().rev() {
        if !d.out_neighbors(v).iter().any(|&w| q.contains(w)) {
            q.insert(v);
        }
    }
    q
}

/// Quasi-kernel construction with a forced independent set `s`: every
/// member of `s` ends up in the result or in its in-neighbourhood.
///
/// Removes the closed in-neighbourhood of `s`, builds a quasi-kernel of the
/// rest, and adds back the members of `s` without an out-neighbour in it.
pub fn quasi_kernel_forced(d: &Digraph, s: &VertexSet) -> Result<VertexSet> {
    if !d.is_independent(s) {
        return Err(Error::NotIndependent);
    }
    let rest = d.delete(&d.closed_in_neighborhood(s));
    let q_sub = quasi_kernel_cl(&rest.digraph);
    let mut q = rest.to_parent(&q_sub, d.order());
    for u in s.iter() {
        if !d.out_neighbors(u).iter().any(|&w| q.contains(w)) {
            q.insert(u);
        }
    }
    let (ok, p) = verify_quasi_kernel(d, &q);
    if !ok {
        return Err(Error::Internal("forced construction lost the quasi-kernel property".into()));
    }
    if !s.iter().all(|u| q.contains(u) || p.dist1.contains(u)) {
        return Err(Error::Internal("forced vertex escaped the first neighbourhood".into()));
    }
    Ok(q)
}

/// Greedily grow `q` (lowest id first) by vertices with no arc to or from
/// it. The result is inclusion-maximal: every vertex in its second
/// in-neighbourhood has an in-neighbour in the result.
pub fn maximalize_qk(d: &Digraph, q: &VertexSet) -> Result<VertexSet> {
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    let mut out = q.clone();
    for v in d.vertices() {
        if out.contains(v) {
            continue;
        }
        let touches = d.out_neighbors(v).iter().any(|&w| out.contains(w))
            || d.in_neighbors(v).iter().any(|&w| out.contains(w));
        if !touches {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Greedily remove vertices (lowest id first) while the remainder is still
/// a quasi-kernel, yielding an inclusion-minimal quasi-kernel.
pub fn minimalize_qk(d: &Digraph, q: &VertexSet) -> Result<VertexSet> {
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    let mut out = q.clone();
    loop {
        let removable = out.iter().find(|&v| {
            let mut trial = out.clone();
            trial.remove(v);
            is_quasi_kernel(d, &trial)
        });
        match removable {
            Some(v) => out.remove(v),
            None => return Ok(out),
        }
    }
}

/// One refinement round: take a quasi-kernel of the second in-neighbourhood
/// of `q`, add it, and drop its in-neighbours from `q`.
pub fn jacob_meyniel_refine(d: &Digraph, q: &VertexSet) -> Result<VertexSet> {
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    let sub = d.induced(&d.second_in_neighborhood(q));
    let q_tilde = sub.to_parent(&quasi_kernel_cl(&sub.digraph), d.order());
    let mut out = q.union(&q_tilde);
    out.subtract(&d.in_neighborhood(&q_tilde));
    if !is_quasi_kernel(d, &out) {
        return Err(Error::Internal("refinement lost the quasi-kernel property".into()));
    }
    Ok(out)
}

/// The unique kernel of a directed acyclic graph: in reverse topological
/// order, a vertex joins iff it has no out-neighbour already chosen.
pub fn kernel_dag(d: &Digraph) -> Result<VertexSet> {
    let order = topological_order(d).ok_or(Error::NotAcyclic)?;
    let mut k = VertexSet::new(d.order());
    for &v in order.iter().rev() {
        if !d.out_neighbors(v).iter().any(|&w| k.contains(w)) {
            k.insert(v);
        }
    }
    Ok(k)
}

/// Exhaustive kernel search over independent sets, include-first on the
/// lowest undecided vertex, so the first solution found is the
/// lexicographically smallest kernel. Returns `None` when no kernel exists.
pub fn kernel_exact(d: &Digraph, budget: usize) -> Result<Option<VertexSet>> {
    kernel_exact_par(d, budget, 1)
}

/// As [`kernel_exact`] but splitting the search by the smallest chosen
/// vertex across `workers` threads. The result is identical for any worker
/// count: the branch with the smallest leading vertex wins.
pub fn kernel_exact_par(d: &Digraph, budget: usize, workers: usize) -> Result<Option<VertexSet>> {
    let n = d.order();
    if n > budget {
        return Err(Error::BudgetExceeded { size: n, budget });
    }
    if n == 0 {
        return Ok(Some(VertexSet::new(0)));
    }
    let ctx = KernelCtx::new(d);
    // Branch c: the kernel's smallest member is c, all smaller vertices
    // excluded. Exploring branches in ascending order reproduces the
    // sequential include-first search exactly.
    let run_branch = |c: usize| -> Option<VertexSet> {
        // Excluded vertices below c are covered exactly when they point at c.
        let mut uncovered = VertexSet::new(n);
        for v in 0..c {
            if !ctx.cover_of[c].contains(v) {
                uncovered.insert(v);
            }
        }
        let mut k = VertexSet::singleton(n, c);
        let blocked = ctx.adj_of[c].clone();
        ctx.search(c + 1, &mut k, &blocked, &uncovered)
    };
    if workers <= 1 {
        for c in 0..n {
            if let Some(k) = run_branch(c) {
                return Ok(Some(k));
            }
        }
        return Ok(None);
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<Option<VertexSet>>>> =
        (0..n).map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(n) {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if c >= n {
                    return;
                }
                *results[c].lock().unwrap() = Some(run_branch(c));
            });
        }
    });
    for cell in &results {
        if let Some(Some(k)) = cell.lock().unwrap().take() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

struct KernelCtx<'a> {
    d: &'a Digraph,
    /// vertices covered by choosing v: in-neighbours of v
    cover_of: Vec<VertexSet>,
    /// vertices blocked by choosing v: neighbours in either direction
    adj_of: Vec<VertexSet>,
}

impl<'a> KernelCtx<'a> {
    fn new(d: &'a Digraph) -> Self {
        let n = d.order();
        let cover_of = (0..n)
            .map(|v| VertexSet::from_ids(n, d.in_neighbors(v).iter().copied()))
            .collect();
        let adj_of = (0..n)
            .map(|v| {
                VertexSet::from_ids(
                    n,
                    d.out_neighbors(v)
                        .iter()
                        .chain(d.in_neighbors(v))
                        .copied(),
                )
            })
            .collect();
        KernelCtx { d, cover_of, adj_of }
    }

    /// Decide vertices `i..n` with `k` chosen so far, `blocked` adjacent to
    /// `k`, and `uncovered` the excluded vertices with no arc into `k` yet.
    fn search(
        &self,
        i: usize,
        k: &mut VertexSet,
        blocked: &VertexSet,
        uncovered: &VertexSet,
    ) -> Option<VertexSet> {
        let n = self.d.order();
        if i == n {
            return uncovered.is_empty().then(|| k.clone());
        }
        // Any uncovered vertex whose remaining potential coverers are all
        // blocked or already decided can never be fixed: prune.
        let mut future = VertexSet::full(n);
        for v in 0..i {
            future.remove(v);
        }
        future.subtract(blocked);
        for u in uncovered.iter() {
            if !self.d.out_neighbors(u).iter().any(|&w| future.contains(w)) {
                return None;
            }
        }
        if !blocked.contains(i) {
            k.insert(i);
            let new_blocked = blocked.union(&self.adj_of[i]);
            let mut new_uncovered = uncovered.clone();
            new_uncovered.subtract(&self.cover_of[i]);
            if let Some(res) = self.search(i + 1, k, &new_blocked, &new_uncovered) {
                return Some(res);
            }
            k.remove(i);
        }
        let mut new_uncovered = uncovered.clone();
        if !self.d.out_neighbors(i).iter().any(|&w| k.contains(w)) {
            new_uncovered.insert(i);
        }
        self.search(i + 1, k, blocked, &new_uncovered)
    }
}

/// Smallest-cardinality quasi-kernel by exhaustive search: sizes ascending,
/// independent sets of each size in lexicographic order, pruned by the set
/// of vertices not yet within in-distance two of the partial choice.
///
/// `cap` bounds the size searched (`None` means the order of the digraph,
/// which always succeeds). Exceeding the cap without finding a quasi-kernel
/// is an internal error: it cannot happen at the default cap.
pub fn minimum_quasi_kernel_exact(
    d: &Digraph,
    cap: Option<usize>,
) -> Result<(usize, VertexSet)> {
    minimum_quasi_kernel_exact_par(d, cap, 1)
}

/// As [`minimum_quasi_kernel_exact`] but splitting the per-size search by
/// the smallest chosen vertex across `workers` threads; the
/// lexicographically smallest solution wins, so the result does not depend
/// on the worker count.
pub fn minimum_quasi_kernel_exact_par(
    d: &Digraph,
    cap: Option<usize>,
    workers: usize,
) -> Result<(usize, VertexSet)> {
    let n = d.order();
    let cap = cap.unwrap_or(n);
    if n == 0 {
        return Ok((0, VertexSet::new(0)));
    }
    let ctx = MinQkCtx::new(d);
    for size in 1..=cap.min(n) {
        let found = if workers <= 1 {
            (0..n).find_map(|c| ctx.branch(c, size))
        } else {
            let next = std::sync::atomic::AtomicUsize::new(0);
            let results: Vec<std::sync::Mutex<Option<Option<VertexSet>>>> =
                (0..n).map(|_| std::sync::Mutex::new(None)).collect();
            std::thread::scope(|scope| {
                for _ in 0..workers.min(n) {
                    scope.spawn(|| loop {
                        let c = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if c >= n {
                            return;
                        }
                        *results[c].lock().unwrap() = Some(ctx.branch(c, size));
                    });
                }
            });
            results
                .iter()
                .filter_map(|cell| cell.lock().unwrap().take().flatten())
                .next()
        };
        if let Some(q) = found {
            return Ok((size, q));
        }
    }
    Err(Error::Internal(format!(
        "no quasi-kernel of size at most {cap} (cap below the true minimum)"
    )))
}

struct MinQkCtx<'a> {
    d: &'a Digraph,
    /// vertices within in-distance two of v (v itself included)
    reach2: Vec<VertexSet>,
    adj_of: Vec<VertexSet>,
}

impl<'a> MinQkCtx<'a> {
    fn new(d: &'a Digraph) -> Self {
        let n = d.order();
        let reach2 = (0..n)
            .map(|v| {
                let mut r = VertexSet::singleton(n, v);
                for &u in d.in_neighbors(v) {
                    r.insert(u);
                    for &w in d.in_neighbors(u) {
                        r.insert(w);
                    }
                }
                r
            })
            .collect();
        let adj_of = (0..n)
            .map(|v| {
                VertexSet::from_ids(
                    n,
                    d.out_neighbors(v)
                        .iter()
                        .chain(d.in_neighbors(v))
                        .copied(),
                )
            })
            .collect();
        MinQkCtx { d, reach2, adj_of }
    }

    fn branch(&self, c: usize, size: usize) -> Option<VertexSet> {
        let n = self.d.order();
        let mut q = VertexSet::singleton(n, c);
        let covered = self.reach2[c].clone();
        let blocked = self.adj_of[c].clone();
        self.extend(c + 1, size - 1, &mut q, &covered, &blocked)
    }

    fn extend(
        &self,
        start: usize,
        remaining: usize,
        q: &mut VertexSet,
        covered: &VertexSet,
        blocked: &VertexSet,
    ) -> Option<VertexSet> {
        let n = self.d.order();
        if remaining == 0 {
            return (covered.len() == n).then(|| q.clone());
        }
        // Prune: every still-uncovered vertex must be reachable through
        // some eligible future choice.
        let uncovered = covered.complement();
        if !uncovered.is_empty() {
            let mut reachable = VertexSet::new(n);
            for c in start..n {
                if !blocked.contains(c) {
                    reachable.union_with(&self.reach2[c]);
                }
            }
            if !uncovered.is_subset(&reachable) {
                return None;
            }
        }
        for c in start..n {
            if blocked.contains(c) {
                continue;
            }
            q.insert(c);
            let mut new_covered = covered.clone();
            new_covered.union_with(&self.reach2[c]);
            let new_blocked = blocked.union(&self.adj_of[c]);
            if let Some(res) = self.extend(c + 1, remaining - 1, q, &new_covered, &new_blocked) {
                return Some(res);
            }
            q.remove(c);
        }
        None
    }
}

/// Every induced subdigraph has a kernel, checked exhaustively over all
/// vertex subsets.
pub fn is_kernel_perfect_exact(d: &Digraph, budget: usize) -> Result<bool> {
    let n = d.order();
    if n > budget {
        return Err(Error::BudgetExceeded { size: n, budget });
    }
    for mask in 0..(1u64 << n) {
        let s = VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        let sub = d.induced(&s);
        if kernel_exact(&sub.digraph, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// In a semicomplete digraph, any vertex whose in-neighbourhood is
/// inclusion-maximal forms a singleton quasi-kernel. Returns the lowest
/// such vertex.
pub fn semicomplete_singleton_qk(d: &Digraph) -> Result<usize> {
    if d.order() == 0 {
        return Err(Error::EmptyDigraph);
    }
    if !is_semicomplete(d) {
        return Err(Error::NotSemicomplete);
    }
    let n = d.order();
    let in_sets: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet::from_ids(n, d.in_neighbors(v).iter().copied()))
        .collect();
    let v = (0..n)
        .find(|&v| {
            !(0..n).any(|u| {
                u != v && in_sets[v].is_subset(&in_sets[u]) && in_sets[v] != in_sets[u]
            })
        })
        .expect("some in-neighbourhood is maximal");
    if !is_quasi_kernel(d, &VertexSet::singleton(n, v)) {
        return Err(Error::Internal(
            "maximal in-neighbourhood vertex is not a quasi-kernel".into(),
        ));
    }
    Ok(v)
}
