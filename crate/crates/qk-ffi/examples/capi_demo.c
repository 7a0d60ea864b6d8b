/* Build (from the workspace root, after `cargo build -p qk-ffi --release`):
 *   cc crates/qk-ffi/examples/capi_demo.c -Icrates/qk-ffi/include \
 *      target/release/libqk_ffi.a -lpthread -lm -ldl -o capi_demo
 */
#include <stdio.h>
#include <stdlib.h>
#include "qk.h"

int main(void) {
    QkDigraph *d = NULL;
    if (qk_construct_dstar(&d) != QK_STATUS_OK) {
        fprintf(stderr, "construct: %s\n", qk_last_error_message());
        return 1;
    }
    printf("order=%u arcs=%zu\n", qk_digraph_order(d), qk_digraph_arc_count(d));

    uint32_t good[2] = {2, 5};
    bool ok = false;
    if (qk_is_good_quasi_kernel(d, good, 2, &ok) != QK_STATUS_OK || !ok) {
        fprintf(stderr, "goodness check failed\n");
        return 1;
    }
    printf("{2,5} is a good quasi-kernel\n");

    uint32_t buf[6];
    uintptr_t len = 0;
    if (qk_minimum_quasi_kernel(d, 0, buf, 6, &len) != QK_STATUS_OK) {
        fprintf(stderr, "minimum: %s\n", qk_last_error_message());
        return 1;
    }
    printf("minimum quasi-kernel size=%zu first=%u\n", (size_t)len, buf[0]);

    bool found = false;
    if (qk_kernel_exact(d, 0, &found, buf, 6, &len) != QK_STATUS_OK) {
        fprintf(stderr, "kernel: %s\n", qk_last_error_message());
        return 1;
    }
    printf("kernel exists: %s\n", found ? "yes" : "no");

    qk_digraph_free(d);
    return 0;
}
