"""Analytical design-space models: bandwidth sizing, peak rates, silicon
area and power.

These are closed-form models around a few calibration constants.  The lane
count is bandwidth-bound (each lane consumes one (value, index) element per
cycle), peak rates follow directly from the lane count and array height,
and area/power come from per-bit cell footprints and per-event energies.
The CMOS cell areas, FPU/accumulator areas and the energy constants in
``engine.EnergyConstants`` are documented calibration values, overridable
from a key=value file; reports should always state the constants used.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .engine import AcceleratorConfig, EnergyConstants, RunMetrics
from .errors import ConfigError, ValidationError

CMOS = "cmos"
RESISTIVE = "resistive"

#: Published power-efficiency figures for other platforms, shipped as
#: labeled constants for report output only (GFLOP/s per watt).
LITERATURE_BASELINES = {
    "gpu_spmv_low": 0.1,
    "gpu_spmv_high": 0.5,
    "multicore_spmv": 0.03,
}


@dataclass(frozen=True)
class TechParams:
    """Technology and calibration constants for the area model.

    Resistive cells are pitch-limited: 8 F^2 per CAM bit (divided by the
    number of stacked layers) and 4 F^2 per RAM bit.  The CMOS per-bit
    areas and the FPU/accumulator block areas are calibration constants in
    units of F^2 and mm^2 respectively.
    """

    feature_nm: float = 22.0
    recam_layers: int = 1
    cmos_cam_bit_area_f2: float = 250.0
    cmos_ram_bit_area_f2: float = 125.0
    fpu_area_mm2: float = 0.005
    accumulator_area_mm2: float = 0.005

    def __post_init__(self):
        if self.feature_nm <= 0:
            raise ConfigError("feature size must be positive")
        if self.recam_layers < 1:
            raise ConfigError("layer count must be >= 1")
        for name in ("cmos_cam_bit_area_f2", "cmos_ram_bit_area_f2",
                     "fpu_area_mm2", "accumulator_area_mm2"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")

    @property
    def f2_mm2(self) -> float:
        """One F^2 in mm^2."""
        return (self.feature_nm * 1e-6) ** 2

    @property
    def cell_area_recam_mm2(self) -> float:
        return 8.0 * self.f2_mm2 / self.recam_layers

    @property
    def cell_area_reram_mm2(self) -> float:
        return 4.0 * self.f2_mm2


@dataclass(frozen=True)
class SweepPoint:
    bandwidth_bytes_per_s: float
    modules: int
    peak_flops_per_s: float
    peak_index_ops_per_s: float


def modules_from_bandwidth(
    bw_bytes_per_s: float, clock_hz: float, value_bits: int, index_bits: int
) -> int:
    """Largest lane count the memory system can feed.

    Each lane consumes one element of ceil((value_bits + index_bits)/8)
    bytes per cycle, so k = floor(bw / (clock * element_bytes)); 0 when the
    bandwidth cannot deliver even one element per cycle.
    """
    if bw_bytes_per_s <= 0 or clock_hz <= 0 or value_bits <= 0 or index_bits <= 0:
        raise ValidationError("all bandwidth-model inputs must be positive")
    element_bytes = (value_bits + index_bits + 7) // 8
    return int(bw_bytes_per_s // (clock_hz * element_bytes))


def peak_performance(modules: int, array_height: int, clock_hz: float) -> tuple[float, float]:
    """Peak (FLOP/s, index-match OP/s).

    Each lane multiplies and accumulates once per cycle (2 FLOPs) while
    comparing its key against all array_height stored indices, hence
    2*k*f and k*h*f.  A degenerate modules=0 yields zero rates.
    """
    if modules < 0:
        raise ValidationError("module count must be non-negative")
    if array_height < 1:
        raise ValidationError("array height must be >= 1")
    if clock_hz <= 0:
        raise ValidationError("clock must be positive")
    return 2.0 * modules * clock_hz, float(modules) * array_height * clock_hz


def area_from_dims(
    modules: int,
    array_height: int,
    index_bits: int,
    value_bits: int,
    tech: TechParams,
    style: str,
) -> float:
    """Accelerator area in mm^2 for explicit dimensions.

    Per lane: h*w CAM bits, h*value_bits RAM bits, one FPU; plus one shared
    accumulator.  modules=0 degenerates to the accumulator alone.
    """
    if style == RESISTIVE:
        cam_bit = tech.cell_area_recam_mm2
        ram_bit = tech.cell_area_reram_mm2
    elif style == CMOS:
        cam_bit = tech.cmos_cam_bit_area_f2 * tech.f2_mm2
        ram_bit = tech.cmos_ram_bit_area_f2 * tech.f2_mm2
    else:
        raise ConfigError(f"unknown area style {style!r} (use 'cmos' or 'resistive')")
    if modules < 0 or array_height < 1 or index_bits < 1 or value_bits < 1:
        raise ValidationError("bad dimensions for area model")
    per_module = (
        array_height * index_bits * cam_bit
        + array_height * value_bits * ram_bit
        + tech.fpu_area_mm2
    )
    return modules * per_module + tech.accumulator_area_mm2


def area_estimate(cfg: AcceleratorConfig, tech: TechParams, style: str) -> float:
    """Accelerator area in mm^2 at the configured design point."""
    return area_from_dims(
        cfg.modules, cfg.array_height, cfg.index_bits, cfg.value_bits, tech, style
    )


@dataclass(frozen=True)
class PowerReport:
    """Average watts by event category over one run.

    ``accelerator_w`` covers the on-accelerator categories (compare, RAM
    read, write, multiply, accumulate); ``memory_w`` is the main-memory
    traffic share, reported separately because it is spent off the
    accelerator; ``total_w`` sums everything.
    """

    compare_w: float
    ram_read_w: float
    write_w: float
    multiply_w: float
    accumulate_w: float
    memory_w: float

    @property
    def accelerator_w(self) -> float:
        return (self.compare_w + self.ram_read_w + self.write_w
                + self.multiply_w + self.accumulate_w)

    @property
    def total_w(self) -> float:
        return self.accelerator_w + self.memory_w

    def as_dict(self) -> dict[str, float]:
        return {
            "w_compare": self.compare_w,
            "w_ram_read": self.ram_read_w,
            "w_write": self.write_w,
            "w_multiply": self.multiply_w,
            "w_accumulate": self.accumulate_w,
            "w_memory": self.memory_w,
            "w_accelerator": self.accelerator_w,
            "w_total": self.total_w,
        }


def power_estimate(
    cfg: AcceleratorConfig, metrics: RunMetrics, wall_seconds: float | None = None
) -> PowerReport:
    """Average power by category; wall time defaults to cycles/clock."""
    if wall_seconds is None:
        wall_seconds = metrics.wall_seconds(cfg.clock_hz)
    if wall_seconds <= 0:
        raise ValidationError("wall_seconds must be positive")
    e = metrics.energy_joules
    return PowerReport(
        compare_w=e.compare / wall_seconds,
        ram_read_w=e.ram_read / wall_seconds,
        write_w=e.write / wall_seconds,
        multiply_w=e.multiply / wall_seconds,
        accumulate_w=e.accumulate / wall_seconds,
        memory_w=e.memory / wall_seconds,
    )


def bandwidth_sweep(
    bandwidths_bytes_per_s, cfg: AcceleratorConfig
) -> list[SweepPoint]:
    """One SweepPoint per bandwidth, using the config's clock/widths/height."""
    bandwidths = list(bandwidths_bytes_per_s)
    if not bandwidths:
        raise ValidationError("bandwidth range must be non-empty")
    points = []
    for bw in bandwidths:
        k = modules_from_bandwidth(bw, cfg.clock_hz, cfg.value_bits, cfg.index_bits)
        flops, index_ops = peak_performance(k, cfg.array_height, cfg.clock_hz)
        points.append(SweepPoint(float(bw), k, flops, index_ops))
    return points


# -- key=value constant files ----------------------------------------------

_ENERGY_FIELDS = {f.name: float for f in fields(EnergyConstants)}
_TECH_FIELDS = {
    "feature_nm": float,
    "recam_layers": int,
    "cmos_cam_bit_area_f2": float,
    "cmos_ram_bit_area_f2": float,
    "fpu_area_mm2": float,
    "accumulator_area_mm2": float,
}


def parse_constants(text: str) -> dict:
    """Parse key=value lines ('#' comments and blanks ignored) into typed
    energy/tech constant overrides."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        caster = _ENERGY_FIELDS.get(key) or _TECH_FIELDS.get(key)
        if caster is None:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = caster(float(value)) if caster is int else caster(value)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value {value!r} for {key}")
    return out


def load_constants(path) -> tuple[EnergyConstants, TechParams]:
    """Energy and tech constants from a key=value file, defaults elsewhere."""
    with open(path, "r", encoding="utf-8") as f:
        overrides = parse_constants(f.read())
    energy_kwargs = {k: v for k, v in overrides.items() if k in _ENERGY_FIELDS}
    tech_kwargs = {k: v for k, v in overrides.items() if k in _TECH_FIELDS}
    return EnergyConstants(**energy_kwargs), TechParams(**tech_kwargs)


def constants_text(energy: EnergyConstants, tech: TechParams) -> str:
    """The effective constants in the same key=value form the loader reads."""
    lines = [f"{f.name}={getattr(energy, f.name)!r}" for f in fields(EnergyConstants)]
    lines += [f"{name}={getattr(tech, name)!r}" for name in _TECH_FIELDS]
    return "\n".join(lines)
