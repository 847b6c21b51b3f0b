# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled multiply-pass loop; see _kernels_py for the reference semantics.

Floating-point grouping must match the fallback exactly, so the build turns
FP contraction off (no FMA fusion) and this code performs the same add
sequence: lanes within a group left to right, then group + running total.
"""

BACKEND = "cython"


def spmspv_pass(long long[::1] row_start, long long[::1] col_idx,
                double[::1] values, double[::1] vec_dense,
                unsigned char[::1] vec_present, long long lanes,
                double[::1] acc):
    """One engine pass over all matrix rows; adds row sums into acc.

    Returns (inner_iterations, ram_reads)."""
    cdef Py_ssize_t n_rows = row_start.shape[0] - 1
    cdef Py_ssize_t j, i, pos, end, stop, c
    cdef long long iterations = 0
    cdef long long hits = 0
    cdef double group, total
    with nogil:
        for j in range(n_rows):
            pos = row_start[j]
            end = row_start[j + 1]
            if pos == end:
                continue
            total = 0.0
            while pos < end:
                stop = pos + lanes
                if stop > end:
                    stop = end
                group = 0.0
                for i in range(pos, stop):
                    c = col_idx[i]
                    group = group + values[i] * vec_dense[c]
                    hits += vec_present[c]
                total = group + total
                iterations += 1
                pos = stop
            acc[j] = acc[j] + total
    return iterations, hits
