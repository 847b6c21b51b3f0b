"""Shared test helpers: instance generators, tolerant product comparison,
and an event-stepped reference that drives the bit-level CAM model through
the same schedule as the engine, counting cycles one at a time."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from camsparse import CamRamArray, CsrMatrix, SparseVector, extract_row, gen_random_csr

REL_TOL = 1e-12


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {outcome}")


def random_vector(length, density, seed, integer_values=False) -> SparseVector:
    return extract_row(gen_random_csr(1, length, density, seed, integer_values), 0)


def product_mismatch(got: SparseVector, want: SparseVector, exact=False):
    """First disagreeing element over the union of stored indices, or None."""
    gd = dict(got.entries())
    wd = dict(want.entries())
    for j in sorted(set(gd) | set(wd)):
        g = gd.get(j, 0.0)
        w = wd.get(j, 0.0)
        if exact:
            if g != w:
                return j, g, w
        elif abs(g - w) > REL_TOL * (1.0 + abs(w)):
            return j, g, w
    return None


def assert_products_match(got, want, exact=False):
    bad = product_mismatch(got, want, exact=exact)
    assert bad is None, f"row {bad[0]}: got {bad[1]!r}, expected {bad[2]!r}"


@dataclass
class SteppedRun:
    result: SparseVector
    cycles: int
    cycle_events: int
    ram_reads: int
    cell_writes: int
    max_write_count: int


def cam_stepped_spmspv(A: CsrMatrix, B: SparseVector, cfg) -> SteppedRun:
    """Replay the multiply by driving one CamRamArray per lane, one cycle
    event at a time.  Independent of the engine's closed-form counters."""
    k, h = cfg.modules, cfg.array_height
    lanes = [CamRamArray(h, cfg.index_bits) for _ in range(k)]
    acc = [0.0] * A.n_rows
    events = 0
    entries = B.entries()
    tiles = [entries[i:i + h] for i in range(0, len(entries), h)] or [[]]
    row_start = A.row_start.tolist()
    col_idx = A.col_idx.tolist()
    values = A.values.tolist()
    for tile in tiles:
        for lane in lanes:
            lane.load_segment(tile)
        for j in range(A.n_rows):
            pos, end = row_start[j], row_start[j + 1]
            if pos == end:
                continue
            row_sum = 0.0
            while pos < end:
                events += 1
                active = min(k, end - pos)
                group = 0.0
                for lane_i in range(active):
                    fetched = pos + lane_i
                    b_val = lanes[lane_i].search_and_read(col_idx[fetched])
                    group = group + values[fetched] * b_val
                row_sum = group + row_sum
                pos += active
            acc[j] += row_sum
    pairs = [(j, v) for j, v in enumerate(acc) if v != 0.0]
    return SteppedRun(
        result=SparseVector.from_pairs(A.n_rows, pairs),
        cycles=cfg.pipeline_depth + events,
        cycle_events=events,
        ram_reads=sum(lane.energy.ram_reads for lane in lanes),
        cell_writes=sum(lane.energy.writes for lane in lanes),
        max_write_count=max(max(lane.write_count) for lane in lanes),
    )


def closed_form_cycles(A: CsrMatrix, nnz_b: int, cfg) -> int:
    """pipeline fill + ceil(nzr/k) per nonzero row per tile, from row counts."""
    counts = np.diff(A.row_start)
    per_pass = int(sum(-(-int(c) // cfg.modules) for c in counts if c > 0))
    passes = max(1, -(-nnz_b // cfg.array_height))
    return cfg.pipeline_depth + passes * per_pass


def full_utilization_workload(lanes=15, n_rows=64, groups_per_row=34, n_cols=512):
    """Workload keeping every lane busy with a hit on every cycle: each row
    holds lanes*groups_per_row nonzeros and the vector covers all of them."""
    from camsparse import CooMatrix, coo_to_csr

    row_nnz = lanes * groups_per_row
    assert row_nnz <= n_cols
    entries = [(j, i, 1.0 + (i + j) % 7) for j in range(n_rows) for i in range(row_nnz)]
    A = coo_to_csr(CooMatrix.from_entries(n_rows, n_cols, entries))
    B = SparseVector.from_pairs(n_cols, [(i, 2.0 + i % 5) for i in range(row_nnz)])
    return A, B
