"""Pure-Python fallback for the hot multiply-pass loop.

Must stay bit-identical to the compiled kernel in ``_kernels.pyx``: same
grouping of adds (lane order within a group of ``lanes`` elements, then the
running row sum), no reassociation.  The compiled module is preferred at
import time by ``engine``; this fallback keeps the package fully functional
without a C toolchain.
"""

BACKEND = "python"


def spmspv_pass(row_start, col_idx, values, vec_dense, vec_present, lanes, acc):
    """One pass of the multiply engine over every row of the matrix.

    vec_dense/vec_present hold the current vector tile scattered to dense
    form (present marks which positions hold a stored nonzero, so misses
    can be told apart from stored values that multiply to zero).  Row sums
    are added into ``acc`` in place.  Returns (inner_iterations, ram_reads).
    """
    rs = row_start.tolist()
    ci = col_idx.tolist()
    av = values.tolist()
    bd = vec_dense.tolist()
    bp = vec_present.tolist()
    iterations = 0
    hits = 0
    n_rows = len(rs) - 1
    for j in range(n_rows):
        pos = rs[j]
        end = rs[j + 1]
        if pos == end:
            continue
        total = 0.0
        while pos < end:
            stop = pos + lanes
            if stop > end:
                stop = end
            group = 0.0
            for i in range(pos, stop):
                c = ci[i]
                group = group + av[i] * bd[c]
                hits += bp[c]
            total = group + total
            iterations += 1
            pos = stop
        acc[j] = acc[j] + total
    return iterations, hits
