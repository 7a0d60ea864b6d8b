//! Loop-free digraph with sorted out/in adjacency and the in-neighbourhood
//! primitives everything else is built on.
//!
//! Vertices are dense integers `0..n-1`. Digons (a pair of opposite arcs)
//! are allowed, self-loops and duplicate arcs are not. A `Digraph` is
//! immutable after construction, so sharing one across threads is safe.

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    m: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    /// Build a digraph on `n` vertices from an arc list.
    ///
    /// Rejects out-of-range endpoints, self-loops, and duplicate arcs.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in arcs {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, order: n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, order: n });
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if out_adj[u].contains(&v) {
                return Err(Error::InvalidInput(format!("duplicate arc {u} -> {v}")));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
            m += 1;
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Digraph { n, m, out_adj, in_adj })
    }

    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            m: 0,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Arc in either direction.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// Arcs in ascending `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_adj[u].iter().map(move |&v| (u, v)))
    }

    fn check_set(&self, s: &VertexSet) {
        assert_eq!(
            s.universe(),
            self.n,
            "vertex set universe does not match digraph order"
        );
    }

    /// In-neighbourhood of a set: vertices outside `s` with an arc into `s`.
    pub fn in_neighborhood(&self, s: &VertexSet) -> VertexSet {
        self.check_set(s);
        let mut out = VertexSet::new(self.n);
        for v in s.iter() {
            for &u in &self.in_adj[v] {
                out.insert(u);
            }
        }
        out.subtract(s);
        out
    }

    /// Closed in-neighbourhood `s ∪ in_neighborhood(s)`.
    pub fn closed_in_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.in_neighborhood(s);
        out.union_with(s);
        out
    }

    /// Vertices at in-distance exactly two from `s`: the in-neighbourhood of
    /// the closed in-neighbourhood.
    pub fn second_in_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let closed = self.closed_in_neighborhood(s);
        self.in_neighborhood(&closed)
    }

    /// Partition of the vertex set by in-distance to `q`.
    pub fn distance_partition(&self, q: &VertexSet) -> NeighborhoodPartition {
        self.check_set(q);
        let dist1 = self.in_neighborhood(q);
        let dist2 = self.second_in_neighborhood(q);
        let mut far = VertexSet::full(self.n);
        far.subtract(q);
        far.subtract(&dist1);
        far.subtract(&dist2);
        NeighborhoodPartition {
            q: q.clone(),
            dist1,
            dist2,
            far,
        }
    }

    /// Induced subdigraph on `s` with a recorded id map.
    pub fn induced(&self, s: &VertexSet) -> Induced {
        self.check_set(s);
        let old_ids = s.to_vec();
        let mut new_id = vec![usize::MAX; self.n];
        for (new, &old) in old_ids.iter().enumerate() {
            new_id[old] = new;
        }
        let mut arcs = Vec::new();
        for &u in &old_ids {
            for &v in &self.out_adj[u] {
                if s.contains(v) {
                    arcs.push((new_id[u], new_id[v]));
                }
            }
        }
        let digraph = Digraph::new(old_ids.len(), arcs).expect("induced arcs are valid");
        Induced { digraph, old_ids }
    }

    /// Subdigraph obtained by deleting `s`.
    pub fn delete(&self, s: &VertexSet) -> Induced {
        self.induced(&s.complement())
    }

    pub fn sinks(&self) -> VertexSet {
        VertexSet::from_ids(
            self.n,
            self.vertices().filter(|&v| self.out_adj[v].is_empty()),
        )
    }

    pub fn sources(&self) -> VertexSet {
        VertexSet::from_ids(
            self.n,
            self.vertices().filter(|&v| self.in_adj[v].is_empty()),
        )
    }

    pub fn is_sink_free(&self) -> bool {
        self.vertices().all(|v| !self.out_adj[v].is_empty())
    }

    /// No arc with both endpoints in `s`, in either direction.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        self.check_set(s);
        s.iter().all(|u| self.out_adj[u].iter().all(|&v| !s.contains(v)))
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs().collect::<Vec<_>>())
    }
}

/// Partition of `V` into `q`, the in-neighbourhood of `q`, the second
/// in-neighbourhood, and everything farther away.
///
/// `q` is a quasi-kernel exactly when it is independent and `far` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    pub q: VertexSet,
    pub dist1: VertexSet,
    pub dist2: VertexSet,
    pub far: VertexSet,
}

/// Induced subdigraph together with its parent-id map.
#[derive(Clone, Debug)]
pub struct Induced {
    pub digraph: Digraph,
    /// `old_ids[new] = old`; ascending, so parent ids can be looked up by
    /// binary search.
    pub old_ids: Vec<usize>,
}

impl Induced {
    /// Map a set of sub-digraph vertices back into the parent universe.
    pub fn to_parent(&self, sub: &VertexSet, parent_order: usize) -> VertexSet {
        assert_eq!(sub.universe(), self.digraph.order());
        VertexSet::from_ids(parent_order, sub.iter().map(|v| self.old_ids[v]))
    }

    /// Sub-digraph id of a parent vertex, if it survived.
    pub fn to_sub(&self, old: usize) -> Option<usize> {
        self.old_ids.binary_search(&old).ok()
    }
}

/// Template digraph plus one digraph per template vertex.
#[derive(Clone, Debug)]
pub struct CompositionSpec {
    pub template: Digraph,
    pub parts: Vec<Digraph>,
}

impl CompositionSpec {
    pub fn new(template: Digraph, parts: Vec<Digraph>) -> Result<Self> {
        if template.order() == 0 {
            return Err(Error::InvalidInput("composition template is empty".into()));
        }
        if parts.len() != template.order() {
            return Err(Error::InvalidInput(format!(
                "expected {} parts, got {}",
                template.order(),
                parts.len()
            )));
        }
        Ok(CompositionSpec { template, parts })
    }

    /// Substitute each part for its template vertex: block-internal arcs are
    /// kept and every template arc becomes a complete block-to-block join.
    pub fn compose(&self) -> Composed {
        let t = self.template.order();
        let mut offsets = Vec::with_capacity(t + 1);
        let mut total = 0;
        for part in &self.parts {
            offsets.push(total);
            total += part.order();
        }
        offsets.push(total);

        let mut arcs = Vec::new();
        for (i, part) in self.parts.iter().enumerate() {
            for (u, v) in part.arcs() {
                arcs.push((offsets[i] + u, offsets[i] + v));
            }
        }
        for (i, p) in self.template.arcs() {
            for u in offsets[i]..offsets[i + 1] {
                for w in offsets[p]..offsets[p + 1] {
                    arcs.push((u, w));
                }
            }
        }
        let digraph = Digraph::new(total, arcs).expect("composition arcs are valid");
        Composed { digraph, offsets }
    }
}

/// Result of a composition: the digraph plus block offsets.
#[derive(Clone, Debug)]
pub struct Composed {
    pub digraph: Digraph,
    /// `offsets[i]..offsets[i+1]` is block `i`; `offsets.len() = t + 1`.
    pub offsets: Vec<usize>,
}

impl Composed {
    pub fn block_of(&self, v: usize) -> usize {
        debug_assert!(v < self.digraph.order());
        self.offsets.partition_point(|&o| o <= v) - 1
    }

    pub fn global_id(&self, block: usize, local: usize) -> usize {
        self.offsets[block] + local
    }

    pub fn block_members(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }
}
