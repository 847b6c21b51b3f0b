"""camsparse: functional + analytical simulator of a CAM-based sparse
matrix multiply accelerator.

The package has four layers: sparse data structures with brute-force
oracles (``sparse``, ``mmio``), a bit-level functional model of one
CAM/RAM acceleration module (``cam``), the tiled multiply engine with
cycle/traffic/energy accounting (``engine``), and closed-form design-space
models (``dse``).  ``cli`` wraps everything for batch experiments.
"""

from .cam import CamRamArray, CompareKey, EnergyTally, NO_MATCH, load_dump
from .dse import (
    CMOS,
    LITERATURE_BASELINES,
    RESISTIVE,
    PowerReport,
    SweepPoint,
    TechParams,
    area_estimate,
    area_from_dims,
    bandwidth_sweep,
    constants_text,
    load_constants,
    modules_from_bandwidth,
    parse_constants,
    peak_performance,
    power_estimate,
)
from .engine import (
    AcceleratorConfig,
    EnergyBreakdown,
    EnergyConstants,
    RunMetrics,
    kernel_backend,
    plan_tiles,
    required_index_bits,
    spmspm,
    spmspv,
)
from .errors import (
    CamCapacityError,
    CamCorruptionError,
    CamSparseError,
    ConfigError,
    DimensionError,
    MatrixMarketError,
    OracleMismatchError,
    ValidationError,
)
from .mmio import (
    parse_matrix_market,
    read_matrix_market_file,
    vector_from_matrix_market,
    write_matrix_market,
)
from .sparse import (
    CooMatrix,
    CsrMatrix,
    SparseVector,
    coo_to_csr,
    csr_to_coo,
    extract_row,
    gen_random_csr,
    oracle_spmspm,
    oracle_spmspv,
    transpose_csr,
)

__version__ = "0.1.0"
