//! One-way split digraphs: the sub-half quasi-kernel construction, a
//! polynomial exact minimum oracle, and the extremal families.
//!
//! A one-way split digraph partitions into an independent set `x` of sources
//! and a semicomplete `y`, with every cross arc directed from `x` into `y`.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::qk::{is_quasi_kernel, semicomplete_singleton_qk, verify_quasi_kernel};
use crate::recognition::is_semicomplete;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct OneWaySplitPartition {
    pub x: VertexSet,
    pub y: VertexSet,
}

impl OneWaySplitPartition {
    pub fn new(x: VertexSet, y: VertexSet) -> Self {
        OneWaySplitPartition { x, y }
    }

    /// Check every structural requirement against `d`.
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        let n = d.order();
        if self.x.universe() != n || self.y.universe() != n {
            return Err(Error::InvalidPartition("universe mismatch".into()));
        }
        if !self.x.is_disjoint(&self.y) || self.x.union(&self.y) != VertexSet::full(n) {
            return Err(Error::InvalidPartition("parts must partition the vertex set".into()));
        }
        for (u, v) in d.arcs() {
            if self.x.contains(u) && self.x.contains(v) {
                return Err(Error::InvalidPartition(format!("arc {u} -> {v} inside the independent side")));
            }
            if self.y.contains(u) && self.x.contains(v) {
                return Err(Error::InvalidPartition(format!("arc {u} -> {v} re-enters the independent side")));
            }
        }
        let ys = self.y.to_vec();
        for (i, &u) in ys.iter().enumerate() {
            for &v in &ys[i + 1..] {
                if !d.adjacent(u, v) {
                    return Err(Error::InvalidPartition(format!("{u} and {v} are non-adjacent inside the semicomplete side")));
                }
            }
        }
        Ok(())
    }
}

/// The auxiliary digraph on the independent side: each `x` picks one
/// out-neighbour `v(x)`, and `x1 -> x2` whenever `v(x1) = v(x2)` or
/// `v(x1) -> v(x2)` is an arc. It is always semicomplete.
#[derive(Clone, Debug)]
pub struct SplitAux {
    /// Digraph on `0..x_ids.len()` re-indexing the independent side.
    pub h: Digraph,
    /// `x_ids[i]` is the original vertex of aux vertex `i`, ascending.
    pub x_ids: Vec<usize>,
    /// `vmap[i]` is the chosen out-neighbour of `x_ids[i]`.
    pub vmap: Vec<usize>,
    /// `r[y]` lists the independent-side vertices whose choice is `y`.
    pub r: Vec<Vec<usize>>,
}

/// Build the auxiliary digraph choosing the lowest-id out-neighbour.
pub fn build_aux(d: &Digraph, part: &OneWaySplitPartition) -> Result<SplitAux> {
    build_aux_with(d, part, |_, outs| outs[0])
}

/// As [`build_aux`] with a caller-supplied choice of `v(x)`; the pick gets
/// the vertex and its (sorted, non-empty) out-neighbour list and returns
/// one of its entries. The size bound downstream holds for every choice.
pub fn build_aux_with<F>(d: &Digraph, part: &OneWaySplitPartition, mut pick: F) -> Result<SplitAux>
where
    F: FnMut(usize, &[usize]) -> usize,
{
    part.validate(d)?;
    let x_ids = part.x.to_vec();
    let mut vmap = Vec::with_capacity(x_ids.len());
    let mut r = vec![Vec::new(); d.order()];
    for &x in &x_ids {
        let outs = d.out_neighbors(x);
        if outs.is_empty() {
            return Err(Error::HasSink);
        }
        let v = pick(x, outs);
        debug_assert!(outs.contains(&v));
        vmap.push(v);
        r[v].push(x);
    }
    let mut arcs = Vec::new();
    for i in 0..x_ids.len() {
        for j in 0..x_ids.len() {
            if i != j && (vmap[i] == vmap[j] || d.has_arc(vmap[i], vmap[j])) {
                arcs.push((i, j));
            }
        }
    }
    let h = Digraph::new(x_ids.len(), arcs).expect("aux arcs are valid");
    if !is_semicomplete(&h) {
        return Err(Error::Internal("auxiliary digraph is not semicomplete".into()));
    }
    Ok(SplitAux { h, x_ids, vmap, r })
}

fn bound(n: usize) -> f64 {
    (n as f64 + 3.0) / 2.0 - (n as f64).sqrt()
}

/// Upper bound `(n+3)/2 - sqrt(n)` on the construction's output size.
pub fn split_size_bound(n: usize) -> f64 {
    bound(n)
}

/// Quasi-kernel of size at most `(n+3)/2 - sqrt(n)` (for `n >= 3`) in a
/// sink-free one-way split digraph.
///
/// Picks the aux vertex of maximum in-degree, lifts its choice to a vertex
/// `y` of the semicomplete side whose closed in-neighbourhood there
/// contains the choice's and is of maximum size, upgrades `y` until that
/// closed in-neighbourhood is inclusion-maximal, and returns `y` plus all
/// independent-side vertices at in-distance three or more from it.
pub fn split_small_qk(d: &Digraph, part: &OneWaySplitPartition) -> Result<VertexSet> {
    part.validate(d)?;
    if d.order() == 0 {
        return Err(Error::EmptyDigraph);
    }
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    if part.x.is_empty() {
        return finish(d, part, None);
    }
    let aux = build_aux(d, part)?;
    split_small_qk_from_aux(d, part, &aux)
}

/// As [`split_small_qk`] with a pre-built auxiliary digraph (so the choice
/// of `v(x)` can be perturbed).
pub fn split_small_qk_from_aux(
    d: &Digraph,
    part: &OneWaySplitPartition,
    aux: &SplitAux,
) -> Result<VertexSet> {
    part.validate(d)?;
    if d.order() == 0 {
        return Err(Error::EmptyDigraph);
    }
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    if part.x.is_empty() {
        return finish(d, part, None);
    }
    let x_star = (0..aux.x_ids.len())
        .max_by_key(|&i| (aux.h.in_degree(i), std::cmp::Reverse(i)))
        .expect("independent side is non-empty");
    finish(d, part, Some(aux.vmap[x_star]))
}

fn finish(d: &Digraph, part: &OneWaySplitPartition, anchor: Option<usize>) -> Result<VertexSet> {
    let n = d.order();
    let ys = part.y.to_vec();
    let y = match anchor {
        None => {
            let sub = d.induced(&part.y);
            sub.old_ids[semicomplete_singleton_qk(&sub.digraph)?]
        }
        Some(v_star) => {
            // Closed in-neighbourhood restricted to the semicomplete side.
            let closed_in_y = |u: usize| -> VertexSet {
                let mut s = VertexSet::singleton(n, u);
                for &w in d.in_neighbors(u) {
                    if part.y.contains(w) {
                        s.insert(w);
                    }
                }
                s
            };
            let base = closed_in_y(v_star);
            let mut best = None;
            for &u in &ys {
                if base.is_subset(&closed_in_y(u)) {
                    let size = closed_in_y(u).len();
                    match best {
                        Some((_, best_size)) if best_size >= size => {}
                        _ => best = Some((u, size)),
                    }
                }
            }
            // v(x*) itself always qualifies.
            let (mut y, _) = best.expect("anchor qualifies");
            // Upgrade to inclusion-maximal so the semicomplete singleton
            // argument applies literally.
            loop {
                let cur = closed_in_y(y);
                match ys.iter().find(|&&u| {
                    let s = closed_in_y(u);
                    cur.is_subset(&s) && s != cur
                }) {
                    Some(&u) => y = u,
                    None => break,
                }
            }
            y
        }
    };
    let p = d.distance_partition(&VertexSet::singleton(n, y));
    let mut within_two = p.q;
    within_two.union_with(&p.dist1);
    within_two.union_with(&p.dist2);
    let mut q = part.x.difference(&within_two);
    q.insert(y);

    let (ok, _) = verify_quasi_kernel(d, &q);
    if !ok {
        return Err(Error::Internal("split construction is not a quasi-kernel".into()));
    }
    if n >= 3 && q.len() as f64 > bound(n) + 1e-9 {
        return Err(Error::Internal(format!(
            "split construction of size {} exceeds the bound {}",
            q.len(),
            bound(n)
        )));
    }
    Ok(q)
}

/// Exact minimum quasi-kernel of a sink-free one-way split digraph in
/// polynomial time.
///
/// Every quasi-kernel here is one vertex `y` of the semicomplete side that
/// the whole semicomplete side reaches within two arcs, plus at least the
/// independent-side vertices at in-distance three or more from `y`; the
/// minimum is the best such candidate (ties: lowest `y`).
pub fn split_min_qk_exact(
    d: &Digraph,
    part: &OneWaySplitPartition,
) -> Result<(usize, VertexSet)> {
    part.validate(d)?;
    let n = d.order();
    if n == 0 {
        return Ok((0, VertexSet::new(0)));
    }
    if !d.is_sink_free() {
        return Err(Error::HasSink);
    }
    let mut best: Option<(usize, VertexSet)> = None;
    for y in part.y.iter() {
        // Vertices with a path of at most two arcs to y.
        let mut reach = VertexSet::singleton(n, y);
        for &u in d.in_neighbors(y) {
            reach.insert(u);
            for &w in d.in_neighbors(u) {
                reach.insert(w);
            }
        }
        if !part.y.is_subset(&reach) {
            continue;
        }
        let mut q = part.x.difference(&reach);
        q.insert(y);
        if best.as_ref().is_none_or(|(size, _)| q.len() < *size) {
            best = Some((q.len(), q));
        }
    }
    let (size, q) = best.ok_or_else(|| {
        Error::Internal("no semicomplete-side vertex reaches everything within two arcs".into())
    })?;
    debug_assert!(is_quasi_kernel(d, &q));
    Ok((size, q))
}

/// The sharpness family: a `k`-regular circulant tournament on `2k+1`
/// vertices, plus `2k` pendant vertices per tournament vertex, each with a
/// single arc into it. Order `(2k+1)^2`, sink-free, one-way split.
pub fn construct_d_k(k: usize) -> Result<Digraph> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let t = 2 * k + 1;
    let n = t * t;
    let mut arcs = Vec::new();
    for i in 0..t {
        for j in 1..=k {
            arcs.push((i, (i + j) % t));
        }
    }
    for v in 0..t {
        for p in 0..2 * k {
            arcs.push((t + v * 2 * k + p, v));
        }
    }
    Digraph::new(n, arcs)
}

/// The six-vertex digraph with no kernel but a good quasi-kernel: two
/// directed triangles 1->2->3->1 and 4->5->6->4 joined by 3->5, 6->2 and
/// 2->5 (labels 1..6 map to ids 0..5).
pub fn construct_dstar() -> Digraph {
    Digraph::new(
        6,
        [
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (2, 4),
            (5, 1),
            (1, 4),
        ],
    )
    .expect("fixed arc list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qk::minimum_quasi_kernel_exact;
    use crate::recognition::recognize_one_way_split;

    fn part_of(d: &Digraph) -> OneWaySplitPartition {
        let (x, y) = recognize_one_way_split(d).expect("one-way split");
        OneWaySplitPartition::new(x, y)
    }

    /// Triangle plus one pendant source with a single arc into it.
    fn pendant_triangle() -> Digraph {
        Digraph::new(4, [(1, 2), (2, 3), (3, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn aux_basics() {
        let d = pendant_triangle();
        let part = part_of(&d);
        let aux = build_aux(&d, &part).unwrap();
        assert_eq!(aux.x_ids, vec![0]);
        assert_eq!(aux.vmap, vec![1]);
        assert_eq!(aux.h.order(), 1);
        assert_eq!(aux.h.arc_count(), 0);
        assert_eq!(aux.r[1], vec![0]);

        // Empty independent side: empty aux.
        let c3 = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let aux = build_aux(&c3, &part_of(&c3)).unwrap();
        assert_eq!(aux.h.order(), 0);
    }

    #[test]
    fn shared_choice_gives_a_digon() {
        // Two sources both forced onto the same target.
        let d = Digraph::new(4, [(2, 3), (3, 2), (0, 2), (1, 2)]).unwrap();
        let part = part_of(&d);
        let aux = build_aux(&d, &part).unwrap();
        assert!(aux.h.has_arc(0, 1) && aux.h.has_arc(1, 0));
    }

    #[test]
    fn small_qk_on_pendant_triangle() {
        // The construction lands on the pendant's target.
        let d = pendant_triangle();
        let q = split_small_qk(&d, &part_of(&d)).unwrap();
        assert_eq!(q.to_vec(), vec![1]);
    }

    #[test]
    fn small_qk_without_independent_side() {
        let c3 = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let q = split_small_qk(&c3, &part_of(&c3)).unwrap();
        assert_eq!(q.to_vec(), vec![0]);
    }

    #[test]
    fn exact_minimum_on_the_sharpness_family() {
        let d1 = construct_d_k(1).unwrap();
        let (size, _) = split_min_qk_exact(&d1, &part_of(&d1)).unwrap();
        assert_eq!(size, 3);

        let d2 = construct_d_k(2).unwrap();
        let (size, _) = split_min_qk_exact(&d2, &part_of(&d2)).unwrap();
        assert_eq!(size, 9);
        assert_eq!(bound(25), 9.0);

        let c3 = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(split_min_qk_exact(&c3, &part_of(&c3)).unwrap().0, 1);
    }

    #[test]
    fn exact_minimum_cross_check_on_d1() {
        let d1 = construct_d_k(1).unwrap();
        assert_eq!(minimum_quasi_kernel_exact(&d1, None).unwrap().0, 3);
    }

    #[test]
    fn d_k_structure() {
        let d1 = construct_d_k(1).unwrap();
        assert_eq!(d1.order(), 9);
        assert!(d1.is_sink_free());
        let (x, y) = recognize_one_way_split(&d1).unwrap();
        assert_eq!((x.len(), y.len()), (6, 3));

        let d2 = construct_d_k(2).unwrap();
        assert_eq!(d2.order(), 25);
        for v in 0..5 {
            assert_eq!(d2.in_degree(v), 3 * 2);
        }
        for v in 0..3 {
            assert_eq!(d1.in_degree(v), 3);
        }
        assert!(construct_d_k(0).is_err());
    }

    #[test]
    fn dstar_shape() {
        let d = construct_dstar();
        assert_eq!(d.order(), 6);
        assert_eq!(d.arc_count(), 9);
        assert!(d.is_sink_free());
        assert!(!d.adjacent(0, 3)); // labels 1 and 4
    }

    #[test]
    fn partition_validation_rejects_bad_partitions() {
        let d = pendant_triangle();
        let bad = OneWaySplitPartition::new(
            VertexSet::from_ids(4, [0, 1]),
            VertexSet::from_ids(4, [2, 3]),
        );
        assert!(bad.validate(&d).is_err()); // arc 0 -> 1 inside x? 1 is in x: arc 1 -> 2 leaves, 0 -> 1 inside
        let overlapping = OneWaySplitPartition::new(
            VertexSet::from_ids(4, [0, 1]),
            VertexSet::from_ids(4, [1, 2, 3]),
        );
        assert!(overlapping.validate(&d).is_err());
    }

    #[test]
    fn sinks_are_rejected() {
        let d = Digraph::new(3, [(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        // 0 is a source, {1,2} a digon: valid split, sink-free.
        assert!(split_small_qk(&d, &part_of(&d)).is_ok());

        let with_sink = Digraph::new(2, [(0, 1)]).unwrap();
        let part = OneWaySplitPartition::new(
            VertexSet::from_ids(2, [0]),
            VertexSet::from_ids(2, [1]),
        );
        assert!(matches!(split_small_qk(&with_sink, &part), Err(Error::HasSink)));
    }
}
