//! Digraph-class recognizers, forbidden-pattern search, and the matching
//! decomposition of a quasi-kernel.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Every unordered pair is joined by at least one arc.
pub fn is_semicomplete(d: &Digraph) -> bool {
    let n = d.order();
    (0..n).all(|u| (u + 1..n).all(|v| d.adjacent(u, v)))
}

/// Every unordered pair is joined by exactly one arc.
pub fn is_tournament(d: &Digraph) -> bool {
    let n = d.order();
    if d.arc_count() != n * (n.saturating_sub(1)) / 2 {
        return false;
    }
    is_semicomplete(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenKind {
    /// Three pairwise non-adjacent in-neighbours of a common head.
    AntiClaw,
    /// Four pairwise non-adjacent in-neighbours of a common head.
    K41,
    /// Four in-neighbours of a common head with exactly one arc among them.
    K41Plus,
}

impl ForbiddenKind {
    fn tail_count(self) -> usize {
        match self {
            ForbiddenKind::AntiClaw => 3,
            _ => 4,
        }
    }

    fn allowed_tail_arcs(self) -> usize {
        match self {
            ForbiddenKind::K41Plus => 1,
            _ => 0,
        }
    }
}

/// A verified induced occurrence of one of the forbidden patterns: `tails`
/// are in-neighbours of `center`, the center has no arc back to any tail,
/// and the arcs among the tails are exactly `extra_arc` (none unless the
/// kind requires one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWitness {
    pub kind: ForbiddenKind,
    pub center: usize,
    pub tails: Vec<usize>,
    pub extra_arc: Option<(usize, usize)>,
}

/// First induced occurrence of `kind` in deterministic order: centers
/// ascending, tail subsets in lexicographic order over the center's
/// eligible in-neighbours.
pub fn find_forbidden(d: &Digraph, kind: ForbiddenKind) -> Option<ForbiddenWitness> {
    let want = kind.tail_count();
    for center in d.vertices() {
        // Tails must be in-neighbours the center does not point back to.
        let candidates: Vec<usize> = d
            .in_neighbors(center)
            .iter()
            .copied()
            .filter(|&u| !d.has_arc(center, u))
            .collect();
        if candidates.len() < want {
            continue;
        }
        let mut chosen = Vec::with_capacity(want);
        if let Some(w) = pick_tails(d, kind, center, &candidates, 0, &mut chosen, 0) {
            debug_assert!(verify_witness(d, &w));
            return Some(w);
        }
    }
    None
}

fn arcs_between(d: &Digraph, a: usize, b: usize) -> usize {
    d.has_arc(a, b) as usize + d.has_arc(b, a) as usize
}

fn pick_tails(
    d: &Digraph,
    kind: ForbiddenKind,
    center: usize,
    candidates: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
    arc_count: usize,
) -> Option<ForbiddenWitness> {
    let allowed = kind.allowed_tail_arcs();
    if chosen.len() == kind.tail_count() {
        if arc_count != allowed {
            return None;
        }
        let extra_arc = if allowed == 1 {
            chosen.iter().enumerate().find_map(|(i, &a)| {
                chosen[i + 1..].iter().find_map(|&b| {
                    if d.has_arc(a, b) {
                        Some((a, b))
                    } else if d.has_arc(b, a) {
                        Some((b, a))
                    } else {
                        None
                    }
                })
            })
        } else {
            None
        };
        return Some(ForbiddenWitness {
            kind,
            center,
            tails: chosen.clone(),
            extra_arc,
        });
    }
    for i in from..candidates.len() {
        let next = candidates[i];
        let added: usize = chosen.iter().map(|&t| arcs_between(d, t, next)).sum();
        if arc_count + added > allowed {
            continue;
        }
        chosen.push(next);
        if let Some(w) = pick_tails(d, kind, center, candidates, i + 1, chosen, arc_count + added) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

/// Check every invariant of a claimed witness against `d`.
pub fn verify_witness(d: &Digraph, w: &ForbiddenWitness) -> bool {
    let n = d.order();
    if w.center >= n || w.tails.iter().any(|&t| t >= n) {
        return false;
    }
    if w.tails.len() != w.kind.tail_count() {
        return false;
    }
    let mut sorted = w.tails.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != w.tails.len() || sorted.contains(&w.center) {
        return false;
    }
    for &t in &w.tails {
        if !d.has_arc(t, w.center) || d.has_arc(w.center, t) {
            return false;
        }
    }
    let mut tail_arcs = Vec::new();
    for (i, &a) in w.tails.iter().enumerate() {
        for &b in &w.tails[i + 1..] {
            if d.has_arc(a, b) {
                tail_arcs.push((a, b));
            }
            if d.has_arc(b, a) {
                tail_arcs.push((b, a));
            }
        }
    }
    match w.kind {
        ForbiddenKind::AntiClaw | ForbiddenKind::K41 => {
            tail_arcs.is_empty() && w.extra_arc.is_none()
        }
        ForbiddenKind::K41Plus => tail_arcs.len() == 1 && w.extra_arc == Some(tail_arcs[0]),
    }
}

/// Maximum matching using only arcs directed from `left` into `right`,
/// by augmenting-path search. Deterministic: left vertices and their
/// adjacency are scanned in ascending order. Returns `(tail, head)` pairs
/// sorted by tail.
pub fn max_matching(d: &Digraph, left: &VertexSet, right: &VertexSet) -> Vec<(usize, usize)> {
    assert!(left.is_disjoint(right), "matching sides must be disjoint");
    let n = d.order();
    // match_of[r] = left vertex matched to r
    let mut match_of = vec![usize::MAX; n];

    fn augment(
        d: &Digraph,
        right: &VertexSet,
        u: usize,
        visited: &mut [bool],
        match_of: &mut [usize],
    ) -> bool {
        for &w in d.out_neighbors(u) {
            if right.contains(w) && !visited[w] {
                visited[w] = true;
                if match_of[w] == usize::MAX
                    || augment(d, right, match_of[w], visited, match_of)
                {
                    match_of[w] = u;
                    return true;
                }
            }
        }
        false
    }

    for u in left.iter() {
        let mut visited = vec![false; n];
        augment(d, right, u, &mut visited, &mut match_of);
    }

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .filter(|&w| match_of[w] != usize::MAX)
        .map(|w| (match_of[w], w))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// The matching decomposition of a quasi-kernel candidate `q`: a maximum
/// matching `m` from the in-neighbourhood of `q` into `q`, its two endpoint
/// sets `m1 ⊆ q` and `m2 ⊆ N⁻(q)`, and the unmatched part `a = q \ m1`.
///
/// Maximality forces `N⁻(q) = N⁻(m1)`, which is asserted here and relied on
/// by every reduction built on top.
#[derive(Clone, Debug)]
pub struct MatchingDecomposition {
    pub q: VertexSet,
    pub m: Vec<(usize, usize)>,
    pub m1: VertexSet,
    pub m2: VertexSet,
    pub a: VertexSet,
}

pub fn matching_decomposition(d: &Digraph, q: &VertexSet) -> Result<MatchingDecomposition> {
    if !d.is_independent(q) {
        return Err(Error::NotIndependent);
    }
    let n = d.order();
    let dist1 = d.in_neighborhood(q);
    let m = max_matching(d, &dist1, q);
    let m1 = VertexSet::from_ids(n, m.iter().map(|&(_, w)| w));
    let m2 = VertexSet::from_ids(n, m.iter().map(|&(u, _)| u));
    let a = q.difference(&m1);
    if d.in_neighborhood(&m1) != dist1 {
        return Err(Error::Internal(
            "maximum matching did not cover the in-neighbourhood".into(),
        ));
    }
    Ok(MatchingDecomposition { q: q.clone(), m, m1, m2, a })
}

/// Canonical one-way split partition: `x` = all sources, `y` = the rest,
/// accepted iff `y` induces a semicomplete digraph. Sources are always
/// independent and their arcs always enter `y`, and a one-way split digraph
/// under any partition is also one under this canonical partition.
pub fn recognize_one_way_split(d: &Digraph) -> Option<(VertexSet, VertexSet)> {
    let x = d.sources();
    let y = x.complement();
    let sub = d.induced(&y);
    if is_semicomplete(&sub.digraph) {
        Some((x, y))
    } else {
        None
    }
}

/// Strongly connected components, ascending ids within each component, in a
/// deterministic order (Kosaraju with ascending tie-breaks).
fn strongly_connected_components(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.order();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    // Iterative DFS, pushing vertices in post-order.
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < d.out_degree(v) {
                let w = d.out_neighbors(v)[*idx];
                *idx += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in d.in_neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    members.push(u);
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// True iff `d` contains a directed cycle of odd length.
///
/// Within each strongly connected component, assign parities by search from
/// a root; an intra-component arc joining equal parities yields an odd
/// closed walk, which always contains an odd directed cycle. A digon is an
/// even cycle and correctly reports `false`.
pub fn has_odd_directed_cycle(d: &Digraph) -> bool {
    let n = d.order();
    let comps = strongly_connected_components(d);
    let mut comp_of = vec![usize::MAX; n];
    for (i, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = i;
        }
    }
    let mut parity = vec![u8::MAX; n];
    for members in &comps {
        let root = members[0];
        parity[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in d.out_neighbors(v) {
                if comp_of[w] != comp_of[v] {
                    continue;
                }
                if parity[w] == u8::MAX {
                    parity[w] = parity[v] ^ 1;
                    queue.push_back(w);
                } else if parity[w] == parity[v] {
                    return true;
                }
            }
        }
        // Parities are forced along paths from the root, so a single pass
        // plus the arc check above is exhaustive for this component.
        for &v in members {
            for &w in d.out_neighbors(v) {
                if comp_of[w] == comp_of[v] && parity[w] == parity[v] {
                    return true;
                }
            }
        }
    }
    false
}

/// Kahn's algorithm; deterministic but the result is order-insensitive.
pub fn is_dag(d: &Digraph) -> bool {
    topological_order(d).is_some()
}

/// Topological order (ascending tie-break), or `None` if `d` has a cycle.
pub fn topological_order(d: &Digraph) -> Option<Vec<usize>> {
    let n = d.order();
    let mut indeg: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| indeg[v] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in d.out_neighbors(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(std::cmp::Reverse(w));
            }
        }
    }
    (order.len() == n).then_some(order)
}
