//! C ABI for the quasi-kernel library.
//!
//! Conventions:
//! - digraphs are opaque handles created by the constructors here and
//!   released with [`qk_digraph_free`];
//! - every fallible call returns a [`QkStatus`]; a human-readable message
//!   for the most recent failure on the current thread is available via
//!   [`qk_last_error_message`];
//! - vertex sets cross the boundary as `uint32_t` arrays; functions that
//!   produce a set take a caller-owned buffer plus its capacity and always
//!   report the required length;
//! - panics never unwind across the boundary; they surface as
//!   `QK_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qk_core::error::Error;
use qk_core::io;
use qk_core::qk;
use qk_core::recognition;
use qk_core::small_qk::{self, SmallQkResult};
use qk_core::split;
use qk_core::{Digraph, VertexSet};

/// Opaque digraph handle.
pub struct QkDigraph {
    inner: Digraph,
}

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    NotIndependent = 5,
    NotQuasiKernel = 6,
    NotGoodQuasiKernel = 7,
    HasSink = 8,
    EmptyDigraph = 9,
    NotSemicomplete = 10,
    NotAcyclic = 11,
    InvalidPartition = 12,
    PreconditionFailed = 13,
    BudgetExceeded = 14,
    BufferTooSmall = 15,
    InternalError = 16,
    Panic = 17,
}

/// Outcome tag for the size-halving algorithms.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QkOutcomeKind {
    QuasiKernel = 0,
    Witness = 1,
}

/// Forbidden-pattern witness in C layout: `tails[0..tail_count]` are
/// in-neighbours of `center`; when `has_extra_arc` is set, the single arc
/// among the tails runs `extra_tail -> extra_head`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QkWitness {
    pub center: u32,
    pub tails: [u32; 4],
    pub tail_count: u32,
    pub has_extra_arc: bool,
    pub extra_tail: u32,
    pub extra_head: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> QkStatus {
    match err {
        Error::Parse { .. } => QkStatus::ParseError,
        Error::VertexOutOfRange { .. } => QkStatus::InvalidArgument,
        Error::NotIndependent => QkStatus::NotIndependent,
        Error::NotQuasiKernel => QkStatus::NotQuasiKernel,
        Error::NotGoodQuasiKernel => QkStatus::NotGoodQuasiKernel,
        Error::HasSink => QkStatus::HasSink,
        Error::EmptyDigraph => QkStatus::EmptyDigraph,
        Error::NotSemicomplete => QkStatus::NotSemicomplete,
        Error::NotAcyclic => QkStatus::NotAcyclic,
        Error::InvalidPartition(_) => QkStatus::InvalidPartition,
        Error::Precondition(_) => QkStatus::PreconditionFailed,
        Error::BudgetExceeded { .. } => QkStatus::BudgetExceeded,
        Error::InvalidInput(_) => QkStatus::InvalidArgument,
        Error::Internal(_) => QkStatus::InternalError,
        Error::Io(_) => QkStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> QkStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn guard<F: FnOnce() -> QkStatus>(f: F) -> QkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            QkStatus::Panic
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn digraph_ref<'a>(d: *const QkDigraph) -> Option<&'a Digraph> {
    d.as_ref().map(|h| &h.inner)
}

fn emit_digraph(d: Digraph, out: *mut *mut QkDigraph) -> QkStatus {
    if out.is_null() {
        set_error("null output handle");
        return QkStatus::NullPointer;
    }
    unsafe {
        *out = Box::into_raw(Box::new(QkDigraph { inner: d }));
    }
    QkStatus::Ok
}

/// Write a vertex set through the `(buffer, capacity, out_len)` triple.
fn emit_set(set: &VertexSet, buf: *mut u32, capacity: usize, out_len: *mut usize) -> QkStatus {
    if out_len.is_null() {
        set_error("null length pointer");
        return QkStatus::NullPointer;
    }
    let needed = set.len();
    unsafe {
        *out_len = needed;
    }
    if needed == 0 {
        return QkStatus::Ok;
    }
    if buf.is_null() {
        set_error("null buffer");
        return QkStatus::NullPointer;
    }
    if capacity < needed {
        set_error("buffer too small");
        return QkStatus::BufferTooSmall;
    }
    for (i, v) in set.iter().enumerate() {
        unsafe {
            *buf.add(i) = v as u32;
        }
    }
    QkStatus::Ok
}

unsafe fn read_set(d: &Digraph, ids: *const u32, len: usize, out: &mut VertexSet) -> QkStatus {
    if len > 0 && ids.is_null() {
        set_error("null id array");
        return QkStatus::NullPointer;
    }
    for i in 0..len {
        let v = *ids.add(i) as usize;
        if v >= d.order() {
            return fail(Error::VertexOutOfRange { vertex: v, order: d.order() });
        }
        out.insert(v);
    }
    QkStatus::Ok
}

/// Build a digraph from parallel tail/head arrays.
///
/// # Safety
/// `tails` and `heads` must point to `arc_count` readable elements each
/// (or be null when `arc_count` is 0), and `out` must be a valid location
/// to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_new(
    n: u32,
    tails: *const u32,
    heads: *const u32,
    arc_count: usize,
    out: *mut *mut QkDigraph,
) -> QkStatus {
    guard(|| {
        if arc_count > 0 && (tails.is_null() || heads.is_null()) {
            set_error("null arc arrays");
            return QkStatus::NullPointer;
        }
        let arcs = (0..arc_count)
            .map(|i| (*tails.add(i) as usize, *heads.add(i) as usize))
            .collect::<Vec<_>>();
        match Digraph::new(n as usize, arcs) {
            Ok(d) => emit_digraph(d, out),
            Err(e) => fail(e),
        }
    })
}

/// Parse the edge-list text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid handle
/// location.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_parse(
    text: *const c_char,
    out: *mut *mut QkDigraph,
) -> QkStatus {
    guard(|| {
        if text.is_null() {
            set_error("null text");
            return QkStatus::NullPointer;
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("text is not valid utf-8");
            return QkStatus::InvalidUtf8;
        };
        match io::parse_digraph(text) {
            Ok(d) => emit_digraph(d, out),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `d` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_free(d: *mut QkDigraph) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Order of the digraph; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_order(d: *const QkDigraph) -> u32 {
    unsafe { digraph_ref(d) }.map_or(0, |d| d.order() as u32)
}

/// Number of arcs; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_arc_count(d: *const QkDigraph) -> usize {
    unsafe { digraph_ref(d) }.map_or(0, |d| d.arc_count())
}

/// Arc presence; false for a null handle or out-of-range ids.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_has_arc(d: *const QkDigraph, tail: u32, head: u32) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(|d| {
        (tail as usize) < d.order()
            && (head as usize) < d.order()
            && d.has_arc(tail as usize, head as usize)
    })
}

/// Every vertex has an out-neighbour; false for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_is_sink_free(d: *const QkDigraph) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(|d| d.is_sink_free())
}

/// At least one arc between every pair; false for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_is_semicomplete(d: *const QkDigraph) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(recognition::is_semicomplete)
}

/// Exactly one arc between every pair; false for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_is_tournament(d: *const QkDigraph) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(recognition::is_tournament)
}

/// No directed cycle; false for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_is_dag(d: *const QkDigraph) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(recognition::is_dag)
}

/// Odd directed cycle present; false for a null handle.
///
/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_has_odd_directed_cycle(d: *const QkDigraph) -> bool {
    unsafe { digraph_ref(d) }.is_some_and(recognition::has_odd_directed_cycle)
}

fn emit_string(s: String, out: *mut *mut c_char) -> QkStatus {
    if out.is_null() {
        set_error("null output pointer");
        return QkStatus::NullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe {
                *out = c.into_raw();
            }
            QkStatus::Ok
        }
        Err(_) => {
            set_error("interior NUL in output");
            QkStatus::InternalError
        }
    }
}

/// Canonical edge-list serialization; free the string with
/// [`qk_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer location.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_serialize(
    d: *const QkDigraph,
    out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        emit_string(io::serialize_digraph(d), out)
    })
}

/// DOT export; free the string with [`qk_string_free`].
///
/// # Safety
/// As for [`qk_digraph_serialize`].
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_to_dot(
    d: *const QkDigraph,
    out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        emit_string(io::to_dot(d), out)
    })
}

/// # Safety
/// `s` must have been produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The six-vertex kernel-free digraph with a good quasi-kernel.
///
/// # Safety
/// `out` must be a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qk_construct_dstar(out: *mut *mut QkDigraph) -> QkStatus {
    guard(|| emit_digraph(split::construct_dstar(), out))
}

/// The order-(2k+1)^2 sharpness family member.
///
/// # Safety
/// `out` must be a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qk_construct_dk(k: u32, out: *mut *mut QkDigraph) -> QkStatus {
    guard(|| match split::construct_d_k(k as usize) {
        Ok(d) => emit_digraph(d, out),
        Err(e) => fail(e),
    })
}

unsafe fn run_verifier(
    d: *const QkDigraph,
    ids: *const u32,
    len: usize,
    out: *mut bool,
    f: fn(&Digraph, &VertexSet) -> bool,
) -> QkStatus {
    let Some(d) = digraph_ref(d) else {
        set_error("null digraph");
        return QkStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return QkStatus::NullPointer;
    }
    let mut set = VertexSet::new(d.order());
    let status = read_set(d, ids, len, &mut set);
    if status != QkStatus::Ok {
        return status;
    }
    *out = f(d, &set);
    QkStatus::Ok
}

/// True iff the ids form a kernel.
///
/// # Safety
/// `d` must be a live handle, `ids` must point to `len` readable elements
/// (or be null when `len` is 0), and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qk_verify_kernel(
    d: *const QkDigraph,
    ids: *const u32,
    len: usize,
    out: *mut bool,
) -> QkStatus {
    guard(|| run_verifier(d, ids, len, out, qk::verify_kernel))
}

/// True iff the ids form a quasi-kernel.
///
/// # Safety
/// As for [`qk_verify_kernel`].
#[no_mangle]
pub unsafe extern "C" fn qk_verify_quasi_kernel(
    d: *const QkDigraph,
    ids: *const u32,
    len: usize,
    out: *mut bool,
) -> QkStatus {
    guard(|| run_verifier(d, ids, len, out, |d, s| qk::verify_quasi_kernel(d, s).0))
}

/// True iff the ids form a good quasi-kernel.
///
/// # Safety
/// As for [`qk_verify_kernel`].
#[no_mangle]
pub unsafe extern "C" fn qk_is_good_quasi_kernel(
    d: *const QkDigraph,
    ids: *const u32,
    len: usize,
    out: *mut bool,
) -> QkStatus {
    guard(|| run_verifier(d, ids, len, out, qk::is_good_quasi_kernel))
}

/// Quasi-kernel by the inductive construction. Always succeeds; the result
/// is written through the buffer triple.
///
/// # Safety
/// `d` must be a live handle; `buf` must have `capacity` writable slots;
/// `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qk_quasi_kernel_cl(
    d: *const QkDigraph,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        emit_set(&qk::quasi_kernel_cl(d), buf, capacity, out_len)
    })
}

/// Exact minimum quasi-kernel. `cap` bounds the size searched; pass 0 for
/// the digraph order (always succeeds).
///
/// # Safety
/// As for [`qk_quasi_kernel_cl`].
#[no_mangle]
pub unsafe extern "C" fn qk_minimum_quasi_kernel(
    d: *const QkDigraph,
    cap: usize,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        let cap = (cap > 0).then_some(cap);
        match qk::minimum_quasi_kernel_exact(d, cap) {
            Ok((_, q)) => emit_set(&q, buf, capacity, out_len),
            Err(e) => fail(e),
        }
    })
}

/// Exhaustive kernel search. `budget` caps the order; pass 0 for the
/// default. `found` reports whether a kernel exists; the set is only
/// written when it does.
///
/// # Safety
/// As for [`qk_quasi_kernel_cl`], plus `found` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qk_kernel_exact(
    d: *const QkDigraph,
    budget: usize,
    found: *mut bool,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        if found.is_null() {
            set_error("null found pointer");
            return QkStatus::NullPointer;
        }
        let budget = if budget == 0 { qk::DEFAULT_KERNEL_BUDGET } else { budget };
        match qk::kernel_exact(d, budget) {
            Ok(Some(k)) => {
                *found = true;
                emit_set(&k, buf, capacity, out_len)
            }
            Ok(None) => {
                *found = false;
                if !out_len.is_null() {
                    *out_len = 0;
                }
                QkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// One refinement round through the second in-neighbourhood of the given
/// quasi-kernel.
///
/// # Safety
/// As for the verifiers plus the buffer triple contract.
#[no_mangle]
pub unsafe extern "C" fn qk_jacob_meyniel_refine(
    d: *const QkDigraph,
    ids: *const u32,
    len: usize,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        let mut set = VertexSet::new(d.order());
        let status = read_set(d, ids, len, &mut set);
        if status != QkStatus::Ok {
            return status;
        }
        match qk::jacob_meyniel_refine(d, &set) {
            Ok(q) => emit_set(&q, buf, capacity, out_len),
            Err(e) => fail(e),
        }
    })
}

fn run_small_qk(
    d: &Digraph,
    algo: fn(&Digraph) -> qk_core::Result<small_qk::SmallQkOutcome>,
    kind: *mut QkOutcomeKind,
    witness: *mut QkWitness,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    if kind.is_null() || witness.is_null() {
        set_error("null outcome pointers");
        return QkStatus::NullPointer;
    }
    match algo(d) {
        Ok(outcome) => match outcome.result {
            SmallQkResult::QuasiKernel { q, .. } => {
                unsafe {
                    *kind = QkOutcomeKind::QuasiKernel;
                    *witness = QkWitness::default();
                }
                emit_set(&q, buf, capacity, out_len)
            }
            SmallQkResult::Witness(w) => {
                let mut tails = [0u32; 4];
                for (slot, &t) in tails.iter_mut().zip(w.tails.iter()) {
                    *slot = t as u32;
                }
                unsafe {
                    *kind = QkOutcomeKind::Witness;
                    *witness = QkWitness {
                        center: w.center as u32,
                        tails,
                        tail_count: w.tails.len() as u32,
                        has_extra_arc: w.extra_arc.is_some(),
                        extra_tail: w.extra_arc.map_or(0, |(t, _)| t as u32),
                        extra_head: w.extra_arc.map_or(0, |(_, h)| h as u32),
                    };
                    if !out_len.is_null() {
                        *out_len = 0;
                    }
                }
                QkStatus::Ok
            }
        },
        Err(e) => fail(e),
    }
}

/// Small quasi-kernel or anti-claw witness for a sink-free digraph.
///
/// # Safety
/// `d` live handle; `kind`, `witness`, `out_len` valid; `buf` has
/// `capacity` writable slots.
#[no_mangle]
pub unsafe extern "C" fn qk_small_qk_anti_claw_free(
    d: *const QkDigraph,
    kind: *mut QkOutcomeKind,
    witness: *mut QkWitness,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        run_small_qk(d, small_qk::small_qk_anti_claw_free, kind, witness, buf, capacity, out_len)
    })
}

/// Small quasi-kernel or four-in-neighbour witness for a sink-free
/// digraph.
///
/// # Safety
/// As for [`qk_small_qk_anti_claw_free`].
#[no_mangle]
pub unsafe extern "C" fn qk_small_qk_k41_free(
    d: *const QkDigraph,
    kind: *mut QkOutcomeKind,
    witness: *mut QkWitness,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        run_small_qk(d, small_qk::small_qk_k41_free, kind, witness, buf, capacity, out_len)
    })
}

fn canonical_split(d: &Digraph) -> Result<split::OneWaySplitPartition, Error> {
    recognition::recognize_one_way_split(d)
        .map(|(x, y)| split::OneWaySplitPartition::new(x, y))
        .ok_or_else(|| Error::InvalidInput("digraph is not a one-way split digraph".into()))
}

/// Sub-half quasi-kernel of a sink-free one-way split digraph (recognized
/// internally).
///
/// # Safety
/// As for [`qk_quasi_kernel_cl`].
#[no_mangle]
pub unsafe extern "C" fn qk_split_small_qk(
    d: *const QkDigraph,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        let part = match canonical_split(d) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match split::split_small_qk(d, &part) {
            Ok(q) => emit_set(&q, buf, capacity, out_len),
            Err(e) => fail(e),
        }
    })
}

/// Exact minimum quasi-kernel of a sink-free one-way split digraph in
/// polynomial time (recognized internally).
///
/// # Safety
/// As for [`qk_quasi_kernel_cl`].
#[no_mangle]
pub unsafe extern "C" fn qk_split_min_qk(
    d: *const QkDigraph,
    buf: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> QkStatus {
    guard(|| {
        let Some(d) = digraph_ref(d) else {
            set_error("null digraph");
            return QkStatus::NullPointer;
        };
        let part = match canonical_split(d) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match split::split_min_qk_exact(d, &part) {
            Ok((_, q)) => emit_set(&q, buf, capacity, out_len),
            Err(e) => fail(e),
        }
    })
}
