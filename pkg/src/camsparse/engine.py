"""The multiply engine: tiled SpMSpV/SpMSpM with cycle, traffic and energy
accounting.

Model summary.  The accelerator holds ``modules`` identical lanes, each a
CAM/RAM pair (see ``cam``) plus a multiplier, feeding one accumulator.  A
multiply proceeds in two stages:

  * initialization: the nonzeros of the vector are written into every lane
    (each lane keeps a full copy), at most ``array_height`` of them at a
    time; larger vectors run in ceil(nnz/height) tiles with partial row
    sums accumulated across tiles.

  * main loop: rows of the matrix stream from memory, ``modules`` elements
    per cycle.  Each fetched element's column index is compared against the
    whole stored vector tile at once; a hit reads the matching value, a
    miss yields 0.0.  The up-to-k products are summed lane 0..k-1, then
    added to the running row sum; a finished nonzero row sum is stored.

Every stage of the loop is pipelined, so the cycle count is a single fill
cost (``pipeline_depth``) plus one cycle per inner iteration, i.e. per
group of up to ``modules`` elements of a nonzero row, per tile.  Rows with
no nonzeros cost nothing.  Result stores and accumulator resets are hidden
by the pipeline.

The summation order is fixed (lanes in order, iterations in fetch order,
tiles in order) so that runs are reproducible and comparable against the
brute-force oracles; on integer-valued data the engine matches the oracle
bit for bit.

The per-pass inner loop is the hot spot: it runs once per matrix element
per tile.  A compiled extension implements it when available, with a
bit-identical pure-Python fallback (see ``kernel_backend``).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels_py
from .errors import ConfigError, DimensionError
from .sparse import CooMatrix, CsrMatrix, SparseVector, coo_to_csr, extract_row, transpose_csr

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built; pure Python still works
    _kernels_c = None

_FORCE_PYTHON_ENV = "CAMSPARSE_PURE_PYTHON"


def kernel_backend() -> str:
    """Name of the pass kernel the engine will use: 'cython' or 'python'."""
    return _select_kernel(None).BACKEND


def _select_kernel(backend):
    if backend is None:
        if os.environ.get(_FORCE_PYTHON_ENV, "") not in ("", "0"):
            return _kernels_py
        return _kernels_c if _kernels_c is not None else _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _kernels_c is None:
            raise ConfigError("compiled kernel requested but not built")
        return _kernels_c
    raise ConfigError(f"unknown kernel backend {backend!r}")


def required_index_bits(length: int) -> int:
    """Index width needed to address a vector of the given logical length."""
    return max(1, math.ceil(math.log2(max(length, 2))))


@dataclass(frozen=True)
class EnergyConstants:
    """Per-event energy costs in joules.

    Defaults are calibrated model constants, not measurements: the compare
    cost sits well under the 1 fJ/bit ballpark of resistive compare logic,
    and multiply/add/read costs are typical published per-op figures for a
    GHz-class datapath.  All of them are meant to be overridden from a
    key=value config file when better numbers are available.
    """

    e_compare_bit: float = 0.1e-15  # J per bit compared, every row, every cycle
    e_ram_read: float = 0.5e-12    # J per word read on a hit
    e_write: float = 1.0e-12       # J per (index, value) record written to a lane
    e_mul: float = 3.0e-12         # J per multiply
    e_add: float = 1.0e-12         # J per accumulate
    e_mem_byte: float = 5.0e-12    # J per byte moved to/from main memory


@dataclass(frozen=True)
class AcceleratorConfig:
    """Design point of the engine.

    modules:        lane count k (compare + multiply per cycle each)
    array_height:   rows per CAM/RAM pair (vector tile capacity) h
    index_bits:     stored index width w; must cover the vector length
    value_bits:     modeled word length of a value (models only; arithmetic
                    is 64-bit regardless)
    pipeline_depth: fill cost in cycles charged once per multiply
    """

    modules: int
    array_height: int
    index_bits: int
    value_bits: int = 32
    clock_hz: float = 2e9
    pipeline_depth: int = 6
    memory_bw_bytes_per_s: float = 250e9
    energy: EnergyConstants = field(default_factory=EnergyConstants)

    def __post_init__(self):
        if self.modules < 1:
            raise ConfigError("modules must be >= 1")
        if self.array_height < 1:
            raise ConfigError("array_height must be >= 1")
        if not 1 <= self.index_bits <= 64:
            raise ConfigError("index_bits must be in 1..64")
        if self.value_bits < 1:
            raise ConfigError("value_bits must be >= 1")
        if self.clock_hz <= 0:
            raise ConfigError("clock_hz must be positive")
        if self.pipeline_depth < 1:
            raise ConfigError("pipeline_depth must be >= 1")
        if self.memory_bw_bytes_per_s <= 0:
            raise ConfigError("memory bandwidth must be positive")

    @property
    def element_bytes(self) -> int:
        """Bytes per streamed (value, index) element, rounded up."""
        return (self.value_bits + self.index_bits + 7) // 8

    def with_overrides(self, **kwargs) -> "AcceleratorConfig":
        return replace(self, **kwargs)


@dataclass
class EnergyBreakdown:
    """Joules per event category for one run."""

    compare: float = 0.0
    ram_read: float = 0.0
    write: float = 0.0
    multiply: float = 0.0
    accumulate: float = 0.0
    memory: float = 0.0

    def total(self) -> float:
        return (self.compare + self.ram_read + self.write
                + self.multiply + self.accumulate + self.memory)

    def accelerator_total(self) -> float:
        """Everything except main-memory traffic (the off-chip share)."""
        return self.compare + self.ram_read + self.write + self.multiply + self.accumulate

    def __add__(self, other: "EnergyBreakdown") -> "EnergyBreakdown":
        return EnergyBreakdown(
            self.compare + other.compare,
            self.ram_read + other.ram_read,
            self.write + other.write,
            self.multiply + other.multiply,
            self.accumulate + other.accumulate,
            self.memory + other.memory,
        )


@dataclass
class RunMetrics:
    """Counters for one engine invocation.

    cycles = pipeline_depth + inner_iterations, where an inner iteration
    handles up to ``modules`` elements of one nonzero row in one tile.
    index_match_ops counts modules * array_height per compare cycle; flops
    counts multiply + accumulate per fetched matrix element (idle lanes add
    nothing).  Memory traffic counts the vector once, the matrix once per
    tile, and one write per stored result element.
    """

    cycles: int
    inner_iterations: int
    index_match_ops: int
    flops: int
    mem_read_bytes: int
    mem_write_bytes: int
    passes: int
    fetched_elements: int
    ram_reads: int
    energy_joules: EnergyBreakdown

    def wall_seconds(self, clock_hz: float) -> float:
        return self.cycles / clock_hz

    def __add__(self, other: "RunMetrics") -> "RunMetrics":
        return RunMetrics(
            self.cycles + other.cycles,
            self.inner_iterations + other.inner_iterations,
            self.index_match_ops + other.index_match_ops,
            self.flops + other.flops,
            self.mem_read_bytes + other.mem_read_bytes,
            self.mem_write_bytes + other.mem_write_bytes,
            self.passes + other.passes,
            self.fetched_elements + other.fetched_elements,
            self.ram_reads + other.ram_reads,
            self.energy_joules + other.energy_joules,
        )


def plan_tiles(nnz_vector: int, array_height: int) -> int:
    """Tiles needed to stage a vector through arrays of the given height.

    An empty vector still takes one (trivial) pass.
    """
    if array_height < 1:
        raise ConfigError("array_height must be >= 1")
    if nnz_vector < 0:
        raise ConfigError("nnz must be non-negative")
    return max(1, -(-nnz_vector // array_height))


def spmspv(
    A: CsrMatrix,
    B: SparseVector,
    cfg: AcceleratorConfig,
    backend: str | None = None,
) -> tuple[SparseVector, RunMetrics]:
    """Multiply sparse matrix A by sparse vector B on the modeled engine.

    Returns the product (exact zeros dropped) and the run counters.  The
    matrix streams from memory once per vector tile; the vector is written
    once into every lane.  Raises DimensionError when shapes disagree or
    the configured index width cannot address the vector.
    """
    if A.n_cols != B.length:
        raise DimensionError(
            f"matrix has {A.n_cols} columns but vector length is {B.length}"
        )
    need = required_index_bits(B.length)
    if cfg.index_bits < need:
        raise DimensionError(
            f"index width {cfg.index_bits} too small for vector length "
            f"{B.length} (needs {need})"
        )
    kernel = _select_kernel(backend)

    k = cfg.modules
    h = cfg.array_height
    nnz_b = B.nnz
    passes = plan_tiles(nnz_b, h)
    acc = np.zeros(A.n_rows)
    iterations = 0
    hits = 0
    for t in range(passes):
        lo = t * h
        hi = min(nnz_b, lo + h)
        tile_dense = np.zeros(B.length)
        tile_present = np.zeros(B.length, dtype=np.uint8)
        idx = B.indices[lo:hi]
        tile_dense[idx] = B.values[lo:hi]
        tile_present[idx] = 1
        it, ht = kernel.spmspv_pass(
            A.row_start, A.col_idx, A.values, tile_dense, tile_present, k, acc
        )
        iterations += it
        hits += ht

    nonzero = np.nonzero(acc)[0]
    C = SparseVector(A.n_rows, nonzero.astype(np.int64), acc[nonzero])

    eb = cfg.element_bytes
    fetched = passes * A.nnz
    mem_read = (nnz_b + fetched) * eb
    mem_write = C.nnz * eb
    e = cfg.energy
    energy = EnergyBreakdown(
        compare=e.e_compare_bit * iterations * k * h * cfg.index_bits,
        ram_read=e.e_ram_read * hits,
        write=e.e_write * k * nnz_b,
        multiply=e.e_mul * fetched,
        accumulate=e.e_add * fetched,
        memory=e.e_mem_byte * (mem_read + mem_write),
    )
    metrics = RunMetrics(
        cycles=cfg.pipeline_depth + iterations,
        inner_iterations=iterations,
        index_match_ops=iterations * k * h,
        flops=2 * fetched,
        mem_read_bytes=mem_read,
        mem_write_bytes=mem_write,
        passes=passes,
        fetched_elements=fetched,
        ram_reads=hits,
        energy_joules=energy,
    )
    return C, metrics


def spmspm(
    A: CsrMatrix,
    B: CsrMatrix,
    cfg: AcceleratorConfig,
    backend: str | None = None,
) -> tuple[CsrMatrix, RunMetrics]:
    """Multiply two sparse matrices column by column on the modeled engine.

    Column c of B plays the vector role in one spmspv run each (every
    column, including empty ones, streams the matrix); metrics are summed
    across columns, so each column pays its own pipeline fill.
    """
    if A.n_cols != B.n_rows:
        raise DimensionError(
            f"left matrix has {A.n_cols} columns but right has {B.n_rows} rows"
        )
    bt = transpose_csr(B)
    total: RunMetrics | None = None
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for c in range(B.n_cols):
        col_vec = extract_row(bt, c)
        result, metrics = spmspv(A, col_vec, cfg, backend=backend)
        total = metrics if total is None else total + metrics
        rows.extend(result.indices.tolist())
        cols.extend([c] * result.nnz)
        vals.extend(result.values.tolist())
    if total is None:  # B has zero columns
        total = RunMetrics(cfg.pipeline_depth, 0, 0, 0, 0, 0, 0, 0, 0, EnergyBreakdown())
    product = coo_to_csr(CooMatrix(A.n_rows, B.n_cols, rows, cols, vals))
    return product, total
