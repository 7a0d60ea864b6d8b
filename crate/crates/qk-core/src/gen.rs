//! Instance generation: exhaustive enumeration of small labeled digraphs
//! and seeded random families.
//!
//! Enumeration walks two bits per unordered pair (none, forward, backward,
//! digon) in a fixed order, so instance indices are stable. All random
//! generators are pure functions of the supplied generator, which keeps
//! sampled scans reproducible.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use rand::seq::SliceRandom;
use rand::Rng;

/// Largest order for exhaustive enumeration; `4^C(5,2)` is already about a
/// million labeled digraphs.
pub const MAX_ENUMERATION_ORDER: usize = 5;

const RESAMPLE_LIMIT: usize = 10_000;

/// Number of labeled loop-free digraphs on `n` vertices.
pub fn enumeration_count(n: usize) -> Result<u64> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::BudgetExceeded { size: n, budget: MAX_ENUMERATION_ORDER });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    Ok(1u64 << (2 * pairs))
}

/// The digraph at `index` in the fixed enumeration order: unordered pairs
/// `(u, v)`, `u < v`, sorted lexicographically, two bits each starting from
/// the least significant end (bit 0: `u -> v`, bit 1: `v -> u`).
pub fn digraph_from_index(n: usize, index: u64) -> Digraph {
    let mut arcs = Vec::new();
    let mut bits = index;
    for u in 0..n {
        for v in u + 1..n {
            if bits & 1 == 1 {
                arcs.push((u, v));
            }
            if bits & 2 == 2 {
                arcs.push((v, u));
            }
            bits >>= 2;
        }
    }
    Digraph::new(n, arcs).expect("enumerated arcs are valid")
}

/// Every labeled loop-free digraph on `n` vertices exactly once, optionally
/// restricted to sink-free ones.
pub fn enumerate_digraphs(
    n: usize,
    sink_free_only: bool,
) -> Result<impl Iterator<Item = Digraph>> {
    let count = enumeration_count(n)?;
    Ok((0..count)
        .map(move |i| digraph_from_index(n, i))
        .filter(move |d| !sink_free_only || d.is_sink_free()))
}

/// Each ordered pair becomes an arc independently with probability `p`.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(n, arcs).expect("random arcs are valid")
}

/// Random digraph, resampled until sink-free. Needs `n >= 2`.
pub fn random_sink_free<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidInput("sink-free digraphs need at least 2 vertices".into()));
    }
    for _ in 0..RESAMPLE_LIMIT {
        let d = random_digraph(n, p, rng);
        if d.is_sink_free() {
            return Ok(d);
        }
    }
    Err(Error::Internal("resample limit reached for a sink-free instance".into()))
}

/// One uniformly random direction per unordered pair.
pub fn random_tournament<R: Rng>(n: usize, rng: &mut R) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                arcs.push((u, v));
            } else {
                arcs.push((v, u));
            }
        }
    }
    Digraph::new(n, arcs).expect("tournament arcs are valid")
}

/// One or two arcs per unordered pair, the three states uniform.
pub fn random_semicomplete<R: Rng>(n: usize, rng: &mut R) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match rng.gen_range(0..3) {
                0 => arcs.push((u, v)),
                1 => arcs.push((v, u)),
                _ => {
                    arcs.push((u, v));
                    arcs.push((v, u));
                }
            }
        }
    }
    Digraph::new(n, arcs).expect("semicomplete arcs are valid")
}

/// One-way split digraph: vertices `0..nx` independent sources, `nx..nx+ny`
/// a random semicomplete block, each cross arc present with probability
/// `p`, resampled until sink-free. Needs `ny >= 2` and, when `nx > 0`,
/// `p > 0`.
///
/// Sink-freeness factors over independent pieces (the semicomplete block
/// and each source's arc row), so each piece is resampled on its own; the
/// joint distribution is the plain one conditioned on no sinks.
pub fn random_split<R: Rng>(nx: usize, ny: usize, p: f64, rng: &mut R) -> Result<Digraph> {
    if ny < 2 {
        return Err(Error::InvalidInput(
            "the semicomplete side needs at least 2 vertices to be sink-free".into(),
        ));
    }
    if nx > 0 && p <= 0.0 {
        return Err(Error::InvalidInput(
            "sources cannot be sink-free with arc probability 0".into(),
        ));
    }
    let n = nx + ny;
    let mut block_tries = 0;
    let mut arcs = loop {
        block_tries += 1;
        if block_tries > RESAMPLE_LIMIT {
            return Err(Error::Internal(
                "resample limit reached for a sink-free semicomplete block".into(),
            ));
        }
        let mut block = Vec::new();
        let mut out_deg = vec![0usize; n];
        for u in nx..n {
            for v in u + 1..n {
                match rng.gen_range(0..3) {
                    0 => block.push((u, v)),
                    1 => block.push((v, u)),
                    _ => {
                        block.push((u, v));
                        block.push((v, u));
                    }
                }
            }
        }
        for &(u, _) in &block {
            out_deg[u] += 1;
        }
        if (nx..n).all(|u| out_deg[u] > 0) {
            break block;
        }
    };

    for x in 0..nx {
        let mut row_tries = 0;
        loop {
            row_tries += 1;
            if row_tries > RESAMPLE_LIMIT {
                return Err(Error::Internal(
                    "resample limit reached for a non-empty source row".into(),
                ));
            }
            let row: Vec<(usize, usize)> =
                (nx..n).filter(|_| rng.gen_bool(p)).map(|y| (x, y)).collect();
            if !row.is_empty() {
                arcs.extend(row);
                break;
            }
        }
    }
    let d = Digraph::new(n, arcs).expect("split arcs are valid");
    debug_assert!(d.is_sink_free());
    Ok(d)
}

/// Sink-free digraph with every in-degree at most 3: arcs are offered in a
/// random order and accepted while the head has capacity, then each sink
/// gets one extra arc towards a random vertex with spare in-degree.
pub fn random_indeg_le_3<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidInput("sink-free digraphs need at least 2 vertices".into()));
    }
    'resample: for _ in 0..RESAMPLE_LIMIT {
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        pairs.shuffle(rng);
        let mut indeg = vec![0usize; n];
        let mut has_arc = vec![false; n * n];
        let mut arcs = Vec::new();
        for (u, v) in pairs {
            if indeg[v] < 3 && rng.gen_bool(p) {
                indeg[v] += 1;
                has_arc[u * n + v] = true;
                arcs.push((u, v));
            }
        }
        let mut outdeg = vec![0usize; n];
        for &(u, _) in &arcs {
            outdeg[u] += 1;
        }
        for v in 0..n {
            if outdeg[v] > 0 {
                continue;
            }
            let candidates: Vec<usize> = (0..n)
                .filter(|&u| u != v && indeg[u] < 3 && !has_arc[v * n + u])
                .collect();
            let Some(&u) = candidates.as_slice().choose(rng) else {
                continue 'resample;
            };
            indeg[u] += 1;
            has_arc[v * n + u] = true;
            arcs.push((v, u));
            outdeg[v] += 1;
        }
        let d = Digraph::new(n, arcs).expect("capped arcs are valid");
        debug_assert!(d.is_sink_free());
        return Ok(d);
    }
    Err(Error::Internal("resample limit reached for a degree-capped instance".into()))
}

/// Random digraph with a random bipartition whose parts are kept acyclic:
/// arcs inside a part only run forward along a hidden random order.
/// Returns the digraph and the two parts (over all vertices).
pub fn random_dag_partitioned<R: Rng>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> (Digraph, VertexSet, VertexSet) {
    let mut v1 = VertexSet::new(n);
    let mut v2 = VertexSet::new(n);
    for v in 0..n {
        if rng.gen_bool(0.5) {
            v1.insert(v);
        } else {
            v2.insert(v);
        }
    }
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let same_part = v1.contains(u) == v1.contains(v);
            if same_part && rank[u] > rank[v] {
                continue;
            }
            if rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    let d = Digraph::new(n, arcs).expect("partitioned arcs are valid");
    (d, v1, v2)
}

/// Circulant digraph: `i -> i + j (mod n)` for `j = 1..=jumps`. With
/// `n = 2k + 1` and `jumps = k` this is the `k`-regular tournament used by
/// the sharpness family.
pub fn circulant(n: usize, jumps: usize) -> Result<Digraph> {
    if n == 0 || jumps == 0 || jumps >= n {
        return Err(Error::InvalidInput(format!(
            "circulant needs 1 <= jumps < n, got n={n}, jumps={jumps}"
        )));
    }
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 1..=jumps {
            arcs.push((i, (i + j) % n));
        }
    }
    Digraph::new(n, arcs)
}
