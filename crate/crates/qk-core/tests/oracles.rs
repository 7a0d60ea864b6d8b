//! Independent brute-force oracles cross-checking the pruned searches.
//!
//! Everything here deliberately avoids the implementation paths it checks:
//! distances come from breadth-first search on reversed arcs, minima from
//! plain subset enumeration, and matchings from enumerating arc subsets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qk_core::gen::{enumerate_digraphs, random_digraph};
use qk_core::io::serialize_digraph;
use qk_core::qk::{
    kernel_exact, minimum_quasi_kernel_exact, verify_quasi_kernel, DEFAULT_KERNEL_BUDGET,
};
use qk_core::recognition::max_matching;
use qk_core::{Digraph, VertexSet};

/// In-distance from every vertex to the set: breadth-first search along
/// reversed arcs, seeded with the members.
fn reverse_bfs_distances(d: &Digraph, s: &VertexSet) -> Vec<Option<usize>> {
    let mut dist = vec![None; d.order()];
    let mut queue = std::collections::VecDeque::new();
    for v in s.iter() {
        dist[v] = Some(0);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for &u in d.in_neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(dist[v].unwrap() + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..(1 << n)).map(move |mask| VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1)))
}

fn independent_by_scan(d: &Digraph, s: &VertexSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    members
        .iter()
        .all(|&u| members.iter().all(|&v| u == v || !d.has_arc(u, v)))
}

fn quasi_kernel_by_bfs(d: &Digraph, s: &VertexSet) -> bool {
    if !independent_by_scan(d, s) {
        return false;
    }
    reverse_bfs_distances(d, s)
        .iter()
        .all(|dist| dist.is_some_and(|k| k <= 2))
}

fn kernel_by_bfs(d: &Digraph, s: &VertexSet) -> bool {
    if !independent_by_scan(d, s) {
        return false;
    }
    reverse_bfs_distances(d, s)
        .iter()
        .all(|dist| dist.is_some_and(|k| k <= 1))
}

#[test]
fn distance_partition_matches_reverse_bfs() {
    let mut r = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..500 {
        let n = r.gen_range(1..=12);
        let d = random_digraph(n, r.gen_range(0.0..=0.8), &mut r);
        let marks = VertexSet::from_ids(n, (0..n).filter(|_| r.gen_bool(0.3)));
        let p = d.distance_partition(&marks);
        for (v, dist) in reverse_bfs_distances(&d, &marks).into_iter().enumerate() {
            let expected = match dist {
                Some(0) => &p.q,
                Some(1) => &p.dist1,
                Some(2) => &p.dist2,
                _ => &p.far,
            };
            assert!(expected.contains(v), "vertex {v}\n{}", serialize_digraph(&d));
        }
    }
}

#[test]
fn quasi_kernel_verifier_matches_the_bfs_oracle() {
    for n in 0..=4 {
        for d in enumerate_digraphs(n, false).unwrap() {
            for s in subsets(n) {
                assert_eq!(
                    verify_quasi_kernel(&d, &s).0,
                    quasi_kernel_by_bfs(&d, &s),
                    "{s:?}\n{}",
                    serialize_digraph(&d)
                );
            }
        }
    }
}

#[test]
fn minimum_quasi_kernel_matches_subset_enumeration() {
    // Lexicographically smallest among the minimum-size quasi-kernels.
    let brute_min = |d: &Digraph| -> VertexSet {
        let all: Vec<VertexSet> = subsets(d.order())
            .filter(|s| quasi_kernel_by_bfs(d, s))
            .collect();
        let best = all.iter().map(VertexSet::len).min().unwrap();
        all.into_iter()
            .filter(|s| s.len() == best)
            .min_by_key(|s| s.to_vec())
            .unwrap()
    };
    // Exhaustive over every labeled digraph with up to four vertices.
    for n in 0..=4 {
        for d in enumerate_digraphs(n, false).unwrap() {
            let expected = brute_min(&d);
            let (min, q) = minimum_quasi_kernel_exact(&d, None).unwrap();
            assert_eq!(min, expected.len(), "{}", serialize_digraph(&d));
            assert_eq!(q, expected, "{}", serialize_digraph(&d));
        }
    }
    // Random digraphs up to order eight.
    let mut r = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..400 {
        let n = r.gen_range(1..=8);
        let d = random_digraph(n, r.gen_range(0.05..=0.9), &mut r);
        let expected = brute_min(&d);
        let (min, q) = minimum_quasi_kernel_exact(&d, None).unwrap();
        assert_eq!(min, expected.len(), "{}", serialize_digraph(&d));
        assert_eq!(q, expected, "{}", serialize_digraph(&d));
    }
}

#[test]
fn kernel_search_matches_subset_enumeration() {
    // Lexicographically smallest kernel: compare membership vectors of all
    // brute-force kernels.
    let lex_min = |kernels: Vec<VertexSet>| -> Option<VertexSet> {
        kernels.into_iter().min_by_key(|s| s.to_vec())
    };
    for n in 0..=4 {
        for d in enumerate_digraphs(n, false).unwrap() {
            let brute = lex_min(subsets(n).filter(|s| kernel_by_bfs(&d, s)).collect());
            let found = kernel_exact(&d, DEFAULT_KERNEL_BUDGET).unwrap();
            assert_eq!(found, brute, "{}", serialize_digraph(&d));
        }
    }
    let mut r = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..400 {
        let n = r.gen_range(1..=8);
        let d = random_digraph(n, r.gen_range(0.05..=0.9), &mut r);
        let brute = lex_min(subsets(n).filter(|s| kernel_by_bfs(&d, s)).collect());
        let found = kernel_exact(&d, DEFAULT_KERNEL_BUDGET).unwrap();
        assert_eq!(found, brute, "{}", serialize_digraph(&d));
    }
}

#[test]
fn matching_sizes_match_arc_subset_enumeration() {
    let mut r = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..300 {
        let n = r.gen_range(2..=9);
        let d = random_digraph(n, r.gen_range(0.1..=0.7), &mut r);
        let split = r.gen_range(0..=n);
        let left = VertexSet::from_ids(n, 0..split);
        let right = VertexSet::from_ids(n, split..n);
        let eligible: Vec<(usize, usize)> = d
            .arcs()
            .filter(|&(u, v)| left.contains(u) && right.contains(v))
            .collect();
        if eligible.len() > 14 {
            continue;
        }
        // Brute force over arc subsets: keep those with pairwise distinct
        // endpoints.
        let mut best = 0;
        for mask in 0u32..(1 << eligible.len()) {
            let chosen: Vec<(usize, usize)> = eligible
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            let mut endpoints: Vec<usize> =
                chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
            endpoints.sort_unstable();
            endpoints.dedup();
            if endpoints.len() == 2 * chosen.len() {
                best = best.max(chosen.len());
            }
        }
        let kuhn = max_matching(&d, &left, &right);
        assert_eq!(kuhn.len(), best, "{}", serialize_digraph(&d));
    }
}

/// The order-25 member of the sharpness family, pushed through the
/// general exhaustive oracle: the reachability pruning makes this
/// tractable, and the answer must match the polynomial split oracle.
#[test]
fn exhaustive_oracle_handles_the_order_25_extremal_instance() {
    use qk_core::split::construct_d_k;
    let d2 = construct_d_k(2).unwrap();
    let (min, q) = minimum_quasi_kernel_exact(&d2, None).unwrap();
    assert_eq!(min, 9);
    assert!(quasi_kernel_by_bfs(&d2, &q));
}

/// Every sink-free digraph with at most five vertices, pushed through both
/// size-halving algorithms with no class filter: the outcome must always
/// be a verified small quasi-kernel or a verified witness.
#[test]
fn theorem_algorithms_exhaust_desk_scale() {
    use qk_core::recognition::verify_witness;
    use qk_core::small_qk::{small_qk_anti_claw_free, small_qk_k41_free, SmallQkResult};

    let mut witnesses = 0u64;
    for n in 1..=5 {
        for d in enumerate_digraphs(n, true).unwrap() {
            for algo in [small_qk_anti_claw_free, small_qk_k41_free] {
                let out = algo(&d).unwrap_or_else(|e| panic!("{e}\n{}", serialize_digraph(&d)));
                match &out.result {
                    SmallQkResult::QuasiKernel { q, .. } => {
                        assert!(verify_quasi_kernel(&d, q).0, "{}", serialize_digraph(&d));
                        assert!(2 * q.len() <= n, "{}", serialize_digraph(&d));
                    }
                    SmallQkResult::Witness(w) => {
                        assert!(verify_witness(&d, w), "{}", serialize_digraph(&d));
                        witnesses += 1;
                    }
                }
            }
        }
    }
    println!("desk-scale sweep: {witnesses} witness outcomes");
}
