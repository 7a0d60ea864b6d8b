//! Conjecture and theorem scanning over enumerated or sampled instances,
//! with JSON reports.
//!
//! Scans are deterministic: enumeration indices are fixed, sampled
//! instances draw from per-index substreams of the seed, and results are
//! folded in index order, so the report bytes do not depend on the worker
//! count (except for the wall-time field).

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::gen;
use crate::io::serialize_digraph;
use crate::qk::{
    is_good_quasi_kernel, jacob_meyniel_refine, kernel_dag, kernel_exact, is_quasi_kernel,
    minimum_quasi_kernel_exact, quasi_kernel_cl, DEFAULT_KERNEL_BUDGET,
};
use crate::recognition::{
    find_forbidden, is_dag, is_semicomplete, is_tournament, recognize_one_way_split,
    ForbiddenKind,
};
use crate::small_qk::{
    in_degree_obstruction, small_qk_anti_claw_free, small_qk_k41_free, small_qk_partitioned,
    small_qk_via_second_kernel, SmallQkResult,
};
use crate::split::{
    construct_d_k, split_min_qk_exact, split_size_bound, split_small_qk, OneWaySplitPartition,
};
use crate::vertex_set::VertexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Exact oracles during scans are only attempted up to this order.
pub const MAX_EXACT_SCAN_ORDER: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "sink_free")]
    SinkFree,
    #[serde(rename = "tournament")]
    Tournament,
    #[serde(rename = "semicomplete")]
    Semicomplete,
    #[serde(rename = "one_way_split")]
    OneWaySplit,
    #[serde(rename = "indeg_le_3")]
    IndegLe3,
    #[serde(rename = "dag_partitioned")]
    DagPartitioned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash)]
pub enum CheckKind {
    #[serde(rename = "conjecture")]
    Conjecture,
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "thm2")]
    Thm2,
    #[serde(rename = "thm3_contrapositive")]
    Thm3Contrapositive,
    #[serde(rename = "thm4")]
    Thm4,
    #[serde(rename = "thm5")]
    Thm5,
    #[serde(rename = "thm6")]
    Thm6,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "jm")]
    Jm,
    #[serde(rename = "oracle_cross")]
    OracleCross,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Conjecture,
        CheckKind::Thm1,
        CheckKind::Thm2,
        CheckKind::Thm3Contrapositive,
        CheckKind::Thm4,
        CheckKind::Thm5,
        CheckKind::Thm6,
        CheckKind::Lemma1,
        CheckKind::Jm,
        CheckKind::OracleCross,
    ];
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanConfig {
    pub mode: ScanMode,
    pub n_min: usize,
    pub n_max: usize,
    /// Number of instances in sampled mode; ignored when exhaustive.
    pub sample_count: u64,
    pub arc_probability: f64,
    pub family: Family,
    pub seed: u64,
    /// Execution detail only: results never depend on it, so it is left
    /// out of serialized reports to keep them byte-comparable across
    /// worker counts.
    #[serde(skip_serializing, default)]
    pub workers: usize,
    pub checks: Vec<CheckKind>,
    /// Per-instance records are emitted for at most this many instances
    /// (lowest indices first); aggregates always cover everything.
    pub max_instance_records: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            mode: ScanMode::Sampled,
            n_min: 2,
            n_max: 10,
            sample_count: 100,
            arc_probability: 0.3,
            family: Family::All,
            seed: 0,
            workers: 1,
            checks: vec![CheckKind::Conjecture],
            max_instance_records: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckKind,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub n: usize,
    pub hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_qk: Option<usize>,
    pub checks: Vec<CheckRecord>,
}

/// A failed check, carrying everything needed to re-check it offline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: u64,
    pub n: usize,
    pub hash: String,
    pub check: CheckKind,
    pub digraph: String,
    pub certificate: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Aggregate {
    pub instances_run: u64,
    pub checks_run: u64,
    pub failures: u64,
    pub skips: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_min_qk_ratio: Option<f64>,
    pub seed: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub aggregate: Aggregate,
    pub instances: Vec<InstanceRecord>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Seed for the per-instance substream: a splitmix-style hash of the scan
/// seed and the instance index.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E3779B97F4A7C15)
        .wrapping_add(index.wrapping_mul(0xBF58476D1CE4E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

struct Instance {
    d: Digraph,
    parts: Option<(VertexSet, VertexSet)>,
}

struct InstanceOutcome {
    record: InstanceRecord,
    counterexamples: Vec<Counterexample>,
    ratio: Option<f64>,
}

fn validate(config: &ScanConfig) -> Result<()> {
    if config.n_min > config.n_max {
        return Err(Error::InvalidInput("empty order range".into()));
    }
    if config.checks.is_empty() {
        return Err(Error::InvalidInput("no checks selected".into()));
    }
    if !(0.0..=1.0).contains(&config.arc_probability) {
        return Err(Error::InvalidInput("arc probability must lie in [0, 1]".into()));
    }
    match config.mode {
        ScanMode::Exhaustive => {
            if config.n_max > gen::MAX_ENUMERATION_ORDER {
                return Err(Error::BudgetExceeded {
                    size: config.n_max,
                    budget: gen::MAX_ENUMERATION_ORDER,
                });
            }
            if config.family == Family::DagPartitioned {
                return Err(Error::InvalidInput(
                    "the partitioned family needs sampled mode (it carries a generated partition)"
                        .into(),
                ));
            }
        }
        ScanMode::Sampled => {
            let needs_two = matches!(
                config.family,
                Family::SinkFree | Family::OneWaySplit | Family::IndegLe3
            );
            if needs_two && config.n_min < 2 {
                return Err(Error::InvalidInput(
                    "sink-free families need orders of at least 2".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Run every selected check on every instance of the configured family.
pub fn run_scan(config: &ScanConfig) -> Result<ScanReport> {
    validate(config)?;
    let mut cfg = config.clone();
    cfg.checks.sort();
    cfg.checks.dedup();
    let start = std::time::Instant::now();

    // Exhaustive index layout: consecutive blocks per order.
    let mut blocks: Vec<(usize, u64)> = Vec::new();
    let total: u64 = match cfg.mode {
        ScanMode::Exhaustive => {
            let mut total = 0;
            for n in cfg.n_min..=cfg.n_max {
                let c = gen::enumeration_count(n)?;
                blocks.push((n, total));
                total += c;
            }
            total
        }
        ScanMode::Sampled => cfg.sample_count,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let outcomes: Vec<Option<InstanceOutcome>> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|index| process_instance(&cfg, &blocks, index))
            .collect()
    });

    let mut aggregate = Aggregate {
        instances_run: 0,
        checks_run: 0,
        failures: 0,
        skips: 0,
        max_min_qk_ratio: None,
        seed: cfg.seed,
        wall_ms: 0,
    };
    let mut instances = Vec::new();
    let mut counterexamples = Vec::new();
    for outcome in outcomes.into_iter().flatten() {
        aggregate.instances_run += 1;
        for check in &outcome.record.checks {
            aggregate.checks_run += 1;
            match check.outcome.as_str() {
                "fail" => aggregate.failures += 1,
                "skip" => aggregate.skips += 1,
                _ => {}
            }
        }
        if let Some(r) = outcome.ratio {
            let cur = aggregate.max_min_qk_ratio.unwrap_or(f64::NEG_INFINITY);
            if r > cur {
                aggregate.max_min_qk_ratio = Some(r);
            }
        }
        if instances.len() < cfg.max_instance_records {
            instances.push(outcome.record);
        }
        counterexamples.extend(outcome.counterexamples);
    }
    aggregate.wall_ms = start.elapsed().as_millis() as u64;
    Ok(ScanReport { config: cfg, aggregate, instances, counterexamples })
}

fn make_instance(cfg: &ScanConfig, blocks: &[(usize, u64)], index: u64) -> Option<Instance> {
    match cfg.mode {
        ScanMode::Exhaustive => {
            let &(n, start) = blocks
                .iter()
                .rev()
                .find(|&&(_, start)| start <= index)
                .expect("index lies in some block");
            let d = gen::digraph_from_index(n, index - start);
            let keep = match cfg.family {
                Family::All => true,
                Family::SinkFree => d.is_sink_free(),
                Family::Tournament => is_tournament(&d),
                Family::Semicomplete => is_semicomplete(&d),
                Family::OneWaySplit => recognize_one_way_split(&d).is_some(),
                Family::IndegLe3 => d.vertices().all(|v| d.in_degree(v) <= 3),
                Family::DagPartitioned => unreachable!("rejected by validation"),
            };
            keep.then_some(Instance { d, parts: None })
        }
        ScanMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(cfg.seed, index));
            let n = rng.gen_range(cfg.n_min..=cfg.n_max);
            let p = cfg.arc_probability;
            let inst = match cfg.family {
                Family::All => Instance { d: gen::random_digraph(n, p, &mut rng), parts: None },
                Family::SinkFree => Instance {
                    d: gen::random_sink_free(n, p, &mut rng).ok()?,
                    parts: None,
                },
                Family::Tournament => Instance { d: gen::random_tournament(n, &mut rng), parts: None },
                Family::Semicomplete => {
                    Instance { d: gen::random_semicomplete(n, &mut rng), parts: None }
                }
                Family::OneWaySplit => {
                    let ny = rng.gen_range(2..=n);
                    let nx = n - ny;
                    Instance { d: gen::random_split(nx, ny, p.max(0.05), &mut rng).ok()?, parts: None }
                }
                Family::IndegLe3 => Instance {
                    d: gen::random_indeg_le_3(n, p, &mut rng).ok()?,
                    parts: None,
                },
                Family::DagPartitioned => {
                    let (d, v1, v2) = gen::random_dag_partitioned(n, p, &mut rng);
                    Instance { d, parts: Some((v1, v2)) }
                }
            };
            Some(inst)
        }
    }
}

fn process_instance(cfg: &ScanConfig, blocks: &[(usize, u64)], index: u64) -> Option<InstanceOutcome> {
    let instance = make_instance(cfg, blocks, index)?;
    let d = &instance.d;
    let n = d.order();
    let serialized = serialize_digraph(d);
    let hash = format!("fnv1a64:{:016x}", fnv1a64(serialized.as_bytes()));

    let mut min_qk: Option<Option<usize>> = None; // computed lazily; inner None = too large
    let mut compute_min = |d: &Digraph| -> Option<usize> {
        if let Some(v) = min_qk {
            return v;
        }
        let v = if n <= MAX_EXACT_SCAN_ORDER {
            minimum_quasi_kernel_exact(d, None).ok().map(|(s, _)| s)
        } else {
            None
        };
        min_qk = Some(v);
        v
    };

    let mut checks = Vec::new();
    let mut counterexamples = Vec::new();
    for &check in &cfg.checks {
        let result = run_check(check, &instance, &mut compute_min);
        if let CheckResult::Fail(certificate) = &result {
            counterexamples.push(Counterexample {
                index,
                n,
                hash: hash.clone(),
                check,
                digraph: serialized.clone(),
                certificate: certificate.clone(),
            });
        }
        checks.push(CheckRecord {
            check,
            outcome: match &result {
                CheckResult::Pass(_) => "pass".into(),
                CheckResult::Fail(_) => "fail".into(),
                CheckResult::Skip(_) => "skip".into(),
            },
            detail: match result {
                CheckResult::Pass(d) => d,
                CheckResult::Fail(d) => Some(d),
                CheckResult::Skip(d) => Some(d),
            },
        });
    }

    let min_found = min_qk.flatten();
    let ratio = min_found.and_then(|m| {
        let half = n / 2;
        (half > 0).then(|| m as f64 / half as f64)
    });
    Some(InstanceOutcome {
        record: InstanceRecord { index, n, hash, min_qk: min_found, checks },
        counterexamples,
        ratio,
    })
}

enum CheckResult {
    Pass(Option<String>),
    Fail(String),
    Skip(String),
}

fn run_check(
    check: CheckKind,
    instance: &Instance,
    compute_min: &mut dyn FnMut(&Digraph) -> Option<usize>,
) -> CheckResult {
    let d = &instance.d;
    let n = d.order();
    match check {
        CheckKind::Conjecture => {
            if !d.is_sink_free() {
                return CheckResult::Skip("has a sink".into());
            }
            match compute_min(d) {
                None => CheckResult::Skip("order too large for the exact oracle".into()),
                Some(m) if 2 * m <= n => CheckResult::Pass(Some(format!("min={m}"))),
                Some(m) => CheckResult::Fail(format!(
                    "minimum quasi-kernel size {m} exceeds half of {n}"
                )),
            }
        }
        CheckKind::Thm1 => {
            if n == 0 || !d.is_sink_free() {
                return CheckResult::Skip("empty or has a sink".into());
            }
            match small_qk_anti_claw_free(d) {
                Ok(out) => match &out.result {
                    SmallQkResult::QuasiKernel { q, .. } => {
                        CheckResult::Pass(Some(format!("size={} steps={}", q.len(), out.steps)))
                    }
                    SmallQkResult::Witness(w) => {
                        if find_forbidden(d, ForbiddenKind::AntiClaw).is_none() {
                            CheckResult::Fail(format!(
                                "witness returned on an anti-claw-free digraph: {w:?}"
                            ))
                        } else {
                            CheckResult::Pass(Some(format!("witness center={}", w.center)))
                        }
                    }
                },
                Err(e) => CheckResult::Fail(format!("algorithm error: {e}")),
            }
        }
        CheckKind::Thm2 => {
            if n == 0 || !d.is_sink_free() {
                return CheckResult::Skip("empty or has a sink".into());
            }
            match small_qk_k41_free(d) {
                Ok(out) => match &out.result {
                    SmallQkResult::QuasiKernel { q, .. } => {
                        CheckResult::Pass(Some(format!("size={} steps={}", q.len(), out.steps)))
                    }
                    SmallQkResult::Witness(w) => {
                        if find_forbidden(d, ForbiddenKind::K41).is_none()
                            && find_forbidden(d, ForbiddenKind::K41Plus).is_none()
                        {
                            CheckResult::Fail(format!(
                                "witness returned on a pattern-free digraph: {w:?}"
                            ))
                        } else {
                            CheckResult::Pass(Some(format!("witness center={}", w.center)))
                        }
                    }
                },
                Err(e) => CheckResult::Fail(format!("algorithm error: {e}")),
            }
        }
        CheckKind::Thm3Contrapositive => {
            if !d.is_sink_free() {
                return CheckResult::Skip("has a sink".into());
            }
            if in_degree_obstruction(d).is_some() {
                return CheckResult::Pass(Some("obstruction present (vacuous)".into()));
            }
            match compute_min(d) {
                None => CheckResult::Skip("order too large for the exact oracle".into()),
                Some(m) if 2 * m <= n => CheckResult::Pass(Some(format!("min={m}"))),
                Some(m) => CheckResult::Fail(format!(
                    "no obstruction but minimum quasi-kernel size is {m} of {n}"
                )),
            }
        }
        CheckKind::Thm4 => {
            if !d.is_sink_free() {
                return CheckResult::Skip("has a sink".into());
            }
            if n > DEFAULT_KERNEL_BUDGET {
                return CheckResult::Skip("order too large for the kernel oracle".into());
            }
            match kernel_exact(d, DEFAULT_KERNEL_BUDGET) {
                Err(e) => CheckResult::Fail(format!("kernel oracle error: {e}")),
                Ok(None) => CheckResult::Skip("no kernel".into()),
                Ok(Some(k)) => {
                    if !is_good_quasi_kernel(d, &k) {
                        return CheckResult::Fail(format!(
                            "kernel {:?} is not a good quasi-kernel",
                            k.to_vec()
                        ));
                    }
                    match crate::small_qk::small_qk_good(d, &k) {
                        Ok(q) => CheckResult::Pass(Some(format!("size={}", q.len()))),
                        Err(e) => CheckResult::Fail(format!("good-start algorithm error: {e}")),
                    }
                }
            }
        }
        CheckKind::Thm5 => {
            if n == 0 || !d.is_sink_free() {
                return CheckResult::Skip("empty or has a sink".into());
            }
            let Some((x, y)) = recognize_one_way_split(d) else {
                return CheckResult::Skip("not a one-way split digraph".into());
            };
            let part = OneWaySplitPartition::new(x, y);
            match split_small_qk(d, &part) {
                Ok(q) => CheckResult::Pass(Some(format!(
                    "size={} bound={:.6}",
                    q.len(),
                    split_size_bound(n)
                ))),
                Err(e) => CheckResult::Fail(format!("split algorithm error: {e}")),
            }
        }
        CheckKind::Thm6 => {
            let Some((v1, v2)) = &instance.parts else {
                return CheckResult::Skip("no generated partition".into());
            };
            let sinks = d.sinks();
            let sink_in = d.in_neighborhood(&sinks);
            let mut rest = VertexSet::full(n);
            rest.subtract(&sinks);
            rest.subtract(&sink_in);
            let v1 = v1.intersection(&rest);
            let v2 = v2.intersection(&rest);
            match small_qk_partitioned(d, &v1, &v2) {
                Ok(q) => CheckResult::Pass(Some(format!(
                    "size={} bound={}/2",
                    q.len(),
                    n + sinks.len() - sink_in.len()
                ))),
                Err(e) => CheckResult::Fail(format!("partitioned algorithm error: {e}")),
            }
        }
        CheckKind::Lemma1 => {
            if !d.is_sink_free() {
                return CheckResult::Skip("has a sink".into());
            }
            let q = quasi_kernel_cl(d);
            match small_qk_via_second_kernel(d, &q) {
                Ok(out) => CheckResult::Pass(Some(format!("size={}", out.len()))),
                Err(Error::Precondition(_)) | Err(Error::BudgetExceeded { .. }) => {
                    CheckResult::Skip("second neighbourhood kernel unavailable".into())
                }
                Err(e) => CheckResult::Fail(format!("second-kernel algorithm error: {e}")),
            }
        }
        CheckKind::Jm => {
            let q = quasi_kernel_cl(d);
            let second = d.second_in_neighborhood(&q);
            let sub = d.induced(&second);
            let q_tilde = sub.to_parent(&quasi_kernel_cl(&sub.digraph), n);
            match jacob_meyniel_refine(d, &q) {
                Ok(refined) => {
                    if refined.is_disjoint(&d.in_neighborhood(&q_tilde))
                        && is_quasi_kernel(d, &refined)
                    {
                        CheckResult::Pass(Some(format!("size={}", refined.len())))
                    } else {
                        CheckResult::Fail("refinement violates its contract".into())
                    }
                }
                Err(e) => CheckResult::Fail(format!("refinement error: {e}")),
            }
        }
        CheckKind::OracleCross => {
            if let Some((x, y)) = recognize_one_way_split(d) {
                if d.is_sink_free() && n <= MAX_EXACT_SCAN_ORDER && n > 0 {
                    let part = OneWaySplitPartition::new(x, y);
                    let split = match split_min_qk_exact(d, &part) {
                        Ok(v) => v,
                        Err(e) => return CheckResult::Fail(format!("split oracle error: {e}")),
                    };
                    let general = match minimum_quasi_kernel_exact(d, None) {
                        Ok(v) => v,
                        Err(e) => return CheckResult::Fail(format!("exact oracle error: {e}")),
                    };
                    return if split.0 == general.0 {
                        CheckResult::Pass(Some(format!("min={}", split.0)))
                    } else {
                        CheckResult::Fail(format!(
                            "split oracle found {} but exhaustive search found {}",
                            split.0, general.0
                        ))
                    };
                }
            }
            if is_dag(d) && n <= DEFAULT_KERNEL_BUDGET {
                let a = match kernel_dag(d) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::Fail(format!("acyclic kernel error: {e}")),
                };
                let b = match kernel_exact(d, DEFAULT_KERNEL_BUDGET) {
                    Ok(Some(v)) => v,
                    Ok(None) => return CheckResult::Fail("exhaustive search found no kernel in a dag".into()),
                    Err(e) => return CheckResult::Fail(format!("kernel oracle error: {e}")),
                };
                return if a == b {
                    CheckResult::Pass(Some(format!("kernel size={}", a.len())))
                } else {
                    CheckResult::Fail("acyclic and exhaustive kernels differ".into())
                };
            }
            CheckResult::Skip("no applicable oracle pair".into())
        }
    }
}

/// Sharpness rows for the pendant-tournament family: the polynomial oracle
/// must hit `(n+3)/2 - sqrt(n)` exactly, which is `2k^2 + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessRow {
    pub k: usize,
    pub n: usize,
    pub exact_min: usize,
    pub bound: f64,
    pub equal: bool,
}

pub fn reproduce_sharpness_table(k_max: usize) -> Result<Vec<SharpnessRow>> {
    if k_max < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k_max > 6 {
        return Err(Error::BudgetExceeded { size: k_max, budget: 6 });
    }
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let d = construct_d_k(k)?;
        let n = d.order();
        let (x, y) = recognize_one_way_split(&d)
            .ok_or_else(|| Error::Internal("sharpness family is not recognized as split".into()))?;
        let (exact_min, _) = split_min_qk_exact(&d, &OneWaySplitPartition::new(x, y))?;
        let bound = split_size_bound(n);
        rows.push(SharpnessRow { k, n, exact_min, bound, equal: exact_min as f64 == bound });
    }
    Ok(rows)
}
