//! Exercise the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use std::ffi::CStr;
use std::ptr;

use qk_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qk_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

unsafe fn make_dstar() -> *mut QkDigraph {
    let mut d = ptr::null_mut();
    assert_eq!(qk_construct_dstar(&mut d), QkStatus::Ok);
    assert!(!d.is_null());
    d
}

#[test]
fn construct_and_inspect() {
    unsafe {
        let d = make_dstar();
        assert_eq!(qk_digraph_order(d), 6);
        assert_eq!(qk_digraph_arc_count(d), 9);
        assert!(qk_digraph_has_arc(d, 0, 1));
        assert!(!qk_digraph_has_arc(d, 0, 3));
        assert!(qk_digraph_is_sink_free(d));
        assert!(!qk_digraph_is_semicomplete(d));
        assert!(!qk_digraph_is_dag(d));
        assert!(qk_digraph_has_odd_directed_cycle(d));
        qk_digraph_free(d);
    }
}

#[test]
fn serialize_parse_round_trip() {
    unsafe {
        let d = make_dstar();
        let mut text = ptr::null_mut();
        assert_eq!(qk_digraph_serialize(d, &mut text), QkStatus::Ok);
        let serialized = CStr::from_ptr(text).to_str().unwrap().to_owned();
        assert!(serialized.starts_with("p dgraph 6 9\n"));

        let mut back = ptr::null_mut();
        let c = std::ffi::CString::new(serialized).unwrap();
        assert_eq!(qk_digraph_parse(c.as_ptr(), &mut back), QkStatus::Ok);
        assert_eq!(qk_digraph_order(back), 6);
        assert_eq!(qk_digraph_arc_count(back), 9);

        let mut dot = ptr::null_mut();
        assert_eq!(qk_digraph_to_dot(back, &mut dot), QkStatus::Ok);
        assert!(CStr::from_ptr(dot).to_str().unwrap().starts_with("digraph {"));

        qk_string_free(text);
        qk_string_free(dot);
        qk_digraph_free(d);
        qk_digraph_free(back);
    }
}

#[test]
fn parse_errors_set_the_message() {
    unsafe {
        let mut d = ptr::null_mut();
        let bad = std::ffi::CString::new("p dgraph 2 1\n0 0\n").unwrap();
        assert_eq!(qk_digraph_parse(bad.as_ptr(), &mut d), QkStatus::ParseError);
        assert!(last_error().contains("line 2"), "{}", last_error());

        assert_eq!(qk_digraph_parse(ptr::null(), &mut d), QkStatus::NullPointer);
    }
}

#[test]
fn verification_and_construction() {
    unsafe {
        let d = make_dstar();
        let good = [2u32, 5];
        let mut ok = false;
        assert_eq!(
            qk_is_good_quasi_kernel(d, good.as_ptr(), 2, &mut ok),
            QkStatus::Ok
        );
        assert!(ok);
        assert_eq!(
            qk_verify_quasi_kernel(d, good.as_ptr(), 2, &mut ok),
            QkStatus::Ok
        );
        assert!(ok);
        assert_eq!(qk_verify_kernel(d, good.as_ptr(), 2, &mut ok), QkStatus::Ok);
        assert!(!ok);

        // Out-of-range ids are rejected up front.
        let bad = [9u32];
        assert_eq!(
            qk_verify_kernel(d, bad.as_ptr(), 1, &mut ok),
            QkStatus::InvalidArgument
        );

        let mut buf = [0u32; 8];
        let mut len = 0usize;
        assert_eq!(
            qk_quasi_kernel_cl(d, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        assert_eq!(
            qk_verify_quasi_kernel(d, buf.as_ptr(), len, &mut ok),
            QkStatus::Ok
        );
        assert!(ok);

        // The minimum is the singleton of id 4.
        assert_eq!(
            qk_minimum_quasi_kernel(d, 0, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        assert_eq!((len, buf[0]), (1, 4));

        // Too-small buffers report the needed size without writing.
        let mut tiny = [0u32; 1];
        assert_eq!(
            qk_quasi_kernel_cl(d, tiny.as_mut_ptr(), 1, &mut len),
            QkStatus::BufferTooSmall
        );
        assert!(len >= 2);

        qk_digraph_free(d);
    }
}

#[test]
fn kernels_through_the_boundary() {
    unsafe {
        let d = make_dstar();
        let mut found = true;
        let mut buf = [0u32; 8];
        let mut len = 0usize;
        assert_eq!(
            qk_kernel_exact(d, 0, &mut found, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        assert!(!found);
        qk_digraph_free(d);

        let tails = [0u32, 1];
        let heads = [1u32, 0];
        let mut digon = ptr::null_mut();
        assert_eq!(
            qk_digraph_new(2, tails.as_ptr(), heads.as_ptr(), 2, &mut digon),
            QkStatus::Ok
        );
        assert_eq!(
            qk_kernel_exact(digon, 0, &mut found, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        assert!(found);
        assert_eq!((len, buf[0]), (1, 0));
        qk_digraph_free(digon);
    }
}

#[test]
fn small_quasi_kernel_outcomes() {
    unsafe {
        let tails = [0u32, 1, 2];
        let heads = [1u32, 2, 0];
        let mut c3 = ptr::null_mut();
        assert_eq!(
            qk_digraph_new(3, tails.as_ptr(), heads.as_ptr(), 3, &mut c3),
            QkStatus::Ok
        );
        let mut kind = QkOutcomeKind::Witness;
        let mut witness = QkWitness::default();
        let mut buf = [0u32; 4];
        let mut len = 0usize;
        assert_eq!(
            qk_small_qk_anti_claw_free(c3, &mut kind, &mut witness, buf.as_mut_ptr(), 4, &mut len),
            QkStatus::Ok
        );
        assert_eq!(kind, QkOutcomeKind::QuasiKernel);
        assert_eq!(len, 1);

        assert_eq!(
            qk_small_qk_k41_free(c3, &mut kind, &mut witness, buf.as_mut_ptr(), 4, &mut len),
            QkStatus::Ok
        );
        assert_eq!(kind, QkOutcomeKind::QuasiKernel);

        // Sinks are reported as such.
        let t = [0u32];
        let h = [1u32];
        let mut path = ptr::null_mut();
        assert_eq!(qk_digraph_new(2, t.as_ptr(), h.as_ptr(), 1, &mut path), QkStatus::Ok);
        assert_eq!(
            qk_small_qk_anti_claw_free(path, &mut kind, &mut witness, buf.as_mut_ptr(), 4, &mut len),
            QkStatus::HasSink
        );
        qk_digraph_free(c3);
        qk_digraph_free(path);
    }
}

#[test]
fn split_functions() {
    unsafe {
        let mut d1 = ptr::null_mut();
        assert_eq!(qk_construct_dk(1, &mut d1), QkStatus::Ok);
        assert_eq!(qk_digraph_order(d1), 9);

        let mut buf = [0u32; 16];
        let mut len = 0usize;
        assert_eq!(
            qk_split_min_qk(d1, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        assert_eq!(len, 3);

        assert_eq!(
            qk_split_small_qk(d1, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::Ok
        );
        let mut ok = false;
        assert_eq!(
            qk_verify_quasi_kernel(d1, buf.as_ptr(), len, &mut ok),
            QkStatus::Ok
        );
        assert!(ok);
        qk_digraph_free(d1);

        // Not a split digraph: rejected with a message.
        let d = make_dstar();
        assert_eq!(
            qk_split_small_qk(d, buf.as_mut_ptr(), buf.len(), &mut len),
            QkStatus::InvalidArgument
        );
        assert!(last_error().contains("one-way split"));
        qk_digraph_free(d);
    }
}

#[test]
fn refinement_through_the_boundary() {
    unsafe {
        // C5: refine {1,3} into {1,4}.
        let tails = [0u32, 1, 2, 3, 4];
        let heads = [1u32, 2, 3, 4, 0];
        let mut c5 = ptr::null_mut();
        assert_eq!(
            qk_digraph_new(5, tails.as_ptr(), heads.as_ptr(), 5, &mut c5),
            QkStatus::Ok
        );
        let q = [1u32, 3];
        let mut buf = [0u32; 5];
        let mut len = 0usize;
        assert_eq!(
            qk_jacob_meyniel_refine(c5, q.as_ptr(), 2, buf.as_mut_ptr(), 5, &mut len),
            QkStatus::Ok
        );
        assert_eq!((len, buf[0], buf[1]), (2, 1, 4));

        // A non-quasi-kernel input is a typed error.
        let not_qk = [0u32];
        assert_eq!(
            qk_jacob_meyniel_refine(c5, not_qk.as_ptr(), 1, buf.as_mut_ptr(), 5, &mut len),
            QkStatus::NotQuasiKernel
        );
        qk_digraph_free(c5);
    }
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        let mut buf = [0u32; 4];
        let mut len = 0usize;
        assert_eq!(
            qk_quasi_kernel_cl(ptr::null(), buf.as_mut_ptr(), 4, &mut len),
            QkStatus::NullPointer
        );
        assert_eq!(qk_digraph_order(ptr::null()), 0);
        qk_digraph_free(ptr::null_mut());
    }
}
